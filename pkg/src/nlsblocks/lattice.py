"""Exact linear algebra over Q and Z: row reduction, kernels, Hermite normal form."""

from fractions import Fraction
from math import gcd, lcm


def rref(rows):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows):
    return len(rref(rows)[1]) if rows else 0


def integer_vector(v):
    """Scale a rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    return [x // g for x in w] if g else w


def kernel(rows, ncols=None):
    """Basis of the rational kernel {x : rows @ x = 0}, as primitive integer vectors."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    a, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -a[r][f]
        basis.append(integer_vector(x))
    return basis


def solve(rows, rhs):
    """Solve rows @ x = rhs over Q.

    Returns (particular solution, kernel basis) or None when inconsistent.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    a, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = a[r][ncols]
    return x, kernel(rows, ncols)


def det(rows):
    """Exact determinant over Q by elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        result *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def hermite_normal_form(generators):
    """Row-style HNF of the lattice spanned by integer row vectors.

    The result is upper triangular in echelon form with positive pivots and
    entries above each pivot reduced into [0, pivot).  Zero rows are dropped.
    """
    a = [list(map(int, r)) for r in generators]
    if not a:
        return []
    ncols = len(a[0])
    out = []
    r = 0
    for c in range(ncols):
        rows = [i for i in range(r, len(a)) if a[i][c] != 0]
        if not rows:
            continue
        # Euclid on column c among the remaining rows
        while True:
            rows = [i for i in range(r, len(a)) if a[i][c] != 0]
            if len(rows) <= 1:
                break
            piv = min(rows, key=lambda i: abs(a[i][c]))
            for i in rows:
                if i != piv:
                    q = a[i][c] // a[piv][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[piv])]
        if not rows:
            continue
        p = rows[0]
        a[r], a[p] = a[p], a[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        out.append(c)
        r += 1
    return [row for row in a[:r]]


def in_lattice(x, generators):
    """True iff the rational vector x is an integer combination of the generators."""
    if any(Fraction(v).denominator != 1 for v in x):
        return False
    x = [int(v) for v in x]
    h = hermite_normal_form(generators)
    for row in h:
        c = next(i for i, v in enumerate(row) if v)
        if x[c] % row[c]:
            return False
        q = x[c] // row[c]
        x = [a - q * b for a, b in zip(x, row)]
    return not any(x)
