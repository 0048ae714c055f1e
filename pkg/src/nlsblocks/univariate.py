"""Dense univariate polynomials over the integers and the rationals.

Coefficient lists are stored lowest degree first and never carry trailing
zeros; the zero polynomial is the empty list.  The helpers here back the
factorization, Sturm counting and modular degree analysis used by
:mod:`nlsblocks.polycore` and :mod:`nlsblocks.certify`.
"""

from fractions import Fraction
from itertools import product
from math import gcd, isqrt

MAX_FACTOR_DEGREE = 8


def strip(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f):
    return len(f) - 1


def add(f, g):
    n = max(len(f), len(g))
    return strip([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                  for i in range(n)])


def sub(f, g):
    return add(f, [-c for c in g])


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return strip(out)


def scale(f, c):
    return strip([c * a for a in f])


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def derivative(f):
    return strip([i * f[i] for i in range(1, len(f))])


def content(f):
    g = 0
    for c in f:
        g = gcd(g, c)
    return g


def primitive(f):
    """Primitive part with positive leading coefficient, and the signed content."""
    f = strip(f)
    if not f:
        return 0, []
    c = content(f)
    if f[-1] < 0:
        c = -c
    return c, [a // c for a in f]


def divmod_rational(f, g):
    f = [Fraction(a) for a in f]
    g = strip(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lead = Fraction(g[-1])
    r = strip(f)
    while len(r) >= len(g):
        c = r[-1] / lead
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] -= c * b
        r = strip(r)
    return strip(q), r


def exact_quotient(f, g):
    """Quotient of integer polynomials, or None when g does not divide f over Z."""
    q, r = divmod_rational(f, g)
    if r or any(c.denominator != 1 for c in q):
        return None
    return [int(c) for c in q]


def gcd_rational(f, g):
    """Monic gcd over Q."""
    f, g = strip([Fraction(a) for a in f]), strip([Fraction(a) for a in g])
    while g:
        _, r = divmod_rational(f, g)
        f, g = g, r
    if not f:
        return []
    return [c / f[-1] for c in f]


def to_primitive_integer(f):
    """Clear denominators of a rational polynomial and take its primitive part."""
    f = strip(f)
    if not f:
        return []
    den = 1
    for c in f:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    return primitive([int(Fraction(c) * den) for c in f])[1]


# --- modular arithmetic -------------------------------------------------------

def _mod(f, p):
    return strip([c % p for c in f])


def _divmod_p(f, g, p):
    f = _mod(f, p)
    g = _mod(g, p)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[i + k] = (f[i + k] - c * b) % p
        f = strip(f)
    return strip(q), f


def _gcd_p(f, g, p):
    f, g = _mod(f, p), _mod(g, p)
    while g:
        f, g = g, _divmod_p(f, g, p)[1]
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def _powmod_x(e, f, p):
    """x**e modulo (f, p)."""
    result, base = [1], [0, 1]
    while e:
        if e & 1:
            result = _divmod_p(mul(result, base), f, p)[1]
        base = _divmod_p(mul(base, base), f, p)[1]
        e >>= 1
    return result


def degree_pattern_mod_p(f, p):
    """Degrees of the irreducible factors of f modulo p (distinct-degree split).

    Returns None when p divides the leading coefficient or f is not squarefree
    modulo p, in which case the prime carries no information.
    """
    n = degree(f)
    f = _mod(f, p)
    if degree(f) != n:
        return None
    if degree(_gcd_p(f, derivative(f), p)) > 0:
        return None
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    pattern = []
    h = [0, 1]
    i = 0
    while degree(f) >= 2 * (i + 1):
        i += 1
        h = _powmod_x(p, f, p) if i == 1 else _compose_frobenius(h, f, p)
        g = _gcd_p(f, sub(h, [0, 1]), p)
        d = degree(g)
        if d > 0:
            pattern.extend([i] * (d // i))
            f = _divmod_p(f, g, p)[0]
            h = _divmod_p(h, f, p)[1] if degree(f) > 0 else h
    if degree(f) > 0:
        pattern.append(degree(f))
    return sorted(pattern)


def _compose_frobenius(h, f, p):
    # h = x^(p^i) mod f; raise to the p-th power to get x^(p^(i+1))
    result, base, e = [1], h, p
    while e:
        if e & 1:
            result = _divmod_p(mul(result, base), f, p)[1]
        base = _divmod_p(mul(base, base), f, p)[1]
        e >>= 1
    return result


def _subset_sums(parts):
    sums = {0}
    for d in parts:
        sums |= {s + d for s in sums}
    return sums


_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


def possible_factor_degrees(f, primes=_PRIMES, wanted=6):
    """Degrees a factor of the squarefree integer polynomial f may have over Q."""
    n = degree(f)
    allowed = set(range(n + 1))
    used = 0
    for p in primes:
        pattern = degree_pattern_mod_p(f, p)
        if pattern is None:
            continue
        allowed &= _subset_sums(pattern)
        used += 1
        if allowed == {0, n} or used >= wanted:
            break
    return allowed


# --- factorization over Z -------------------------------------------------------

def _divisors(n):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(f):
    """Distinct rational roots of an integer polynomial."""
    f = strip(f)
    if not f:
        raise ValueError("zero polynomial has every root")
    roots = []
    if f[0] == 0:
        roots.append(Fraction(0))
        while f and f[0] == 0:
            f = f[1:]
    if len(f) <= 1:
        return roots
    for p in _divisors(f[0]):
        for q in _divisors(f[-1]):
            if gcd(p, q) != 1:
                continue
            for r in (Fraction(p, q), Fraction(-p, q)):
                if r not in roots and evaluate(f, r) == 0:
                    roots.append(r)
    return sorted(roots)


def _evaluation_points(f, count):
    candidates = []
    for x in range(-12, 13):
        v = evaluate(f, x)
        if v != 0:
            candidates.append((len(_divisors(v)), abs(x), x))
    candidates.sort()
    return [x for _, _, x in candidates[:count]]


def _integer_basis(points):
    """Lagrange basis over a common denominator: (D, [D * l_i])."""
    bases, dens = [], []
    for i, xi in enumerate(points):
        basis, den = [1], 1
        for j, xj in enumerate(points):
            if j != i:
                basis = mul(basis, [-xj, 1])
                den *= xi - xj
        bases.append(basis)
        dens.append(den)
    D = 1
    for d in dens:
        D = D * abs(d) // gcd(D, abs(d))
    return D, [[c * (D // d) for c in b] for b, d in zip(bases, dens)]


def kronecker_factor(f, k):
    """A factor of degree k of the primitive integer polynomial f, or None.

    Exhaustive over the divisors of f at k + 1 integer points, so a None answer
    proves that no factor of degree k exists.
    """
    points = _evaluation_points(f, k + 1)
    if len(points) < k + 1:
        raise ValueError("not enough evaluation points")
    lead, const = f[-1], f[0]
    D, basis = _integer_basis(points)
    tops = [b[k] for b in basis]
    choices = []
    for i, x in enumerate(points):
        divs = _divisors(evaluate(f, x))
        # fix the sign at the first point to remove the global +-1 ambiguity
        choices.append(divs if i == 0 else divs + [-d for d in divs])
    for values in product(*choices):
        top = sum(v * c for v, c in zip(values, tops))
        if top == 0 or top % D or lead % (top // D):
            continue
        g = [sum(v * b[h] for v, b in zip(values, basis)) for h in range(k + 1)]
        if any(c % D for c in g):
            continue
        g = [c // D for c in g]
        if g[0] and const % g[0]:
            continue
        if exact_quotient(f, g) is not None:
            return primitive(g)[1]
    return None


def squarefree_decomposition(f):
    """Yun's algorithm over Q; returns [(primitive integer factor, multiplicity)]."""
    f = strip(f)
    out = []
    a = [Fraction(c) for c in f]
    b = derivative(a)
    c = gcd_rational(a, b)
    w = divmod_rational(a, c)[0]
    y = divmod_rational(b, c)[0]
    z = sub(y, derivative(w))
    i = 1
    while degree(w) > 0:
        g = gcd_rational(w, z)
        if degree(g) > 0:
            out.append((to_primitive_integer(g), i))
        w = divmod_rational(w, g)[0]
        y = divmod_rational(z, g)[0]
        z = sub(y, derivative(w))
        i += 1
    return out


def _factor_squarefree(f):
    f = primitive(f)[1]
    if degree(f) <= 1:
        return [f] if degree(f) == 1 else []
    factors = []
    for r in rational_roots(f):
        lin = [-r.numerator, r.denominator]
        factors.append(lin)
        f = exact_quotient(f, lin)
    if degree(f) <= 0:
        return factors
    if degree(f) <= 3:
        return factors + [f]
    allowed = possible_factor_degrees(f)
    for k in range(2, degree(f) // 2 + 1):
        if k not in allowed:
            continue
        g = kronecker_factor(f, k)
        if g is not None:
            return factors + _factor_squarefree(g) + _factor_squarefree(exact_quotient(f, g))
    return factors + [f]


def factor_int_poly(f):
    """Complete factorization of an integer polynomial.

    Returns (content, [(irreducible primitive factor, multiplicity), ...]) with
    factors sorted by (degree, coefficients).  content carries the sign.
    """
    f = strip(f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if degree(f) > MAX_FACTOR_DEGREE:
        raise ValueError("degree above the supported bound")
    c, f = primitive(f)
    if degree(f) == 0:
        return c, []
    out = []
    for part, mult in squarefree_decomposition(f):
        for g in _factor_squarefree(part):
            out.append((primitive(g)[1], mult))
    out.sort(key=lambda fm: (degree(fm[0]), fm[0]))
    return c, out


def is_irreducible(f):
    c, factors = factor_int_poly(f)
    return len(factors) == 1 and factors[0][1] == 1


# --- real roots ------------------------------------------------------------------

def sturm_sequence(f):
    f = strip([Fraction(c) for c in f])
    seq = [f, derivative(f)]
    while seq[-1]:
        r = divmod_rational(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(f):
    """Number of distinct real roots of f, by Sturm's theorem."""
    seq = sturm_sequence(f)
    at_plus = [1 if s[-1] > 0 else -1 for s in seq]
    at_minus = [sign * (-1) ** degree(s) for sign, s in zip(at_plus, seq)]
    return _sign_changes(at_minus) - _sign_changes(at_plus)
