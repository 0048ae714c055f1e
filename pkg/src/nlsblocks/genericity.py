"""Genericity of tangential site lists.

The resonance list is generated, not transcribed: independence of any n
sites, closures of short odd circuits, the avoidable resonances of every
degenerate graph with at most n + 2 vertices, and the determinants of the
linear systems of graphs with n + 2 vertices and n + 1 independent
markings.  Every entry is either a linear form in the Gram variables
g_h_k = (v_h, v_k) or the determinant of n integer combinations of sites.

Evaluation first works modulo a prime, vectorized over all ordered tuples
of distinct sites, and falls back to exact arithmetic (ordinary integers or
PowerSums) only where the residue vanishes, so both verdicts are exact.
"""

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from . import lattice
from .certificate import FAIL, PASS
from .errors import BoundsTooSmall, SubsetTooSmall
from .graphs import (ColoredMarkedGraph, enumerate_connected, is_degenerate,
                     universal_sign, vertex_labels)
from .polycore import Coord, Gram, Polynomial, determinant
from .powersum import PowerSum, residue
from .realization import SiteList, dot, relations, avoidable_resonance

MODULUS = 2147483647
CONSTRAINT_2_BOUND = 10


@dataclass(frozen=True)
class ConstraintReport:
    constraint: str
    verdict: str
    witness: dict = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == PASS

    def to_dict(self):
        return {"constraint": self.constraint, "verdict": self.verdict,
                "witness": self.witness, "detail": self.detail}


# --- site access -------------------------------------------------------------------

class _Sites:
    """Exact sites with cached residues."""

    def __init__(self, S):
        self.S = S
        self.m, self.n = S.m, S.n
        self.coords = np.array([[residue(c, MODULUS) for c in v] for v in S.sites],
                               dtype=np.int64).reshape(self.m, self.n)
        g = np.zeros((self.m, self.m), dtype=np.int64)
        for h in range(self.m):
            for k in range(h, self.m):
                r = 0
                for c in range(self.n):
                    r = (r + int(self.coords[h, c]) * int(self.coords[k, c])) % MODULUS
                g[h, k] = g[k, h] = r
        self.gram = g

    def exact_gram(self, h, k):
        return dot(self.S.sites[h], self.S.sites[k])

    def exact_combination(self, coeffs, idx):
        out = [0] * self.n
        for c, h in zip(coeffs, idx):
            if c:
                for q in range(self.n):
                    out[q] = out[q] + c * self.S.sites[h][q]
        return out


def _is_zero(x):
    return x.is_zero() if isinstance(x, PowerSum) else x == 0


def _site_labels(idx):
    return [h + 1 for h in idx]


# --- Constraints 1, 2, 1b --------------------------------------------------------------

def check_constraint_1(S):
    """(v_i - v_j, v_k - v_j) != 0 for distinct i, j, k."""
    T = _Sites(S)
    G = T.gram
    for j in range(T.m):
        for i, k in combinations([q for q in range(T.m) if q != j], 2):
            r = (G[i, k] - G[i, j] - G[j, k] + G[j, j]) % MODULUS
            if r:
                continue
            value = T.exact_gram(i, k) - T.exact_gram(i, j) - T.exact_gram(j, k) + T.exact_gram(j, j)
            if _is_zero(value):
                return ConstraintReport("constraint_1", FAIL,
                                        {"triple": _site_labels((i, j, k)), "value": "0"})
    return ConstraintReport("constraint_1", PASS, None, {"m": T.m})


def _nu_vectors(m, bound):
    """Nonzero nu with sum |nu_i| < bound, first nonzero entry positive."""
    out = []

    def rec(prefix, budget, started):
        if len(prefix) == m:
            if started:
                out.append(tuple(prefix))
            return
        lo = -budget if started else 0
        for c in range(lo, budget + 1):
            rec(prefix + [c], budget - abs(c), started or c != 0)

    rec([], bound - 1, False)
    return out


def check_constraint_2(S, bound=CONSTRAINT_2_BOUND):
    """sum nu_i v_i != 0 whenever nu != 0 and sum |nu_i| < bound."""
    T = _Sites(S)
    if T.m == 0:
        return ConstraintReport("constraint_2", PASS, None, {"checked": 0, "bound": bound})
    nus = _nu_vectors(T.m, bound)
    if not nus:
        return ConstraintReport("constraint_2", PASS, None, {"checked": 0, "bound": bound})
    arr = np.array(nus, dtype=np.int64)
    vals = (arr @ T.coords) % MODULUS
    suspects = np.nonzero(~vals.any(axis=1))[0]
    for s in suspects:
        nu = nus[int(s)]
        vec = T.exact_combination(nu, range(T.m))
        if all(_is_zero(x) for x in vec):
            return ConstraintReport("constraint_2", FAIL, {"nu": list(nu), "value": [0] * T.n})
    return ConstraintReport("constraint_2", PASS, None, {"checked": len(nus), "bound": bound})


def check_constraint_1b(S):
    """h1 +- h2 != h3 +- h4 and (h1 + h2 - h3 - h4, h3 - h4) != 0 for distinct h's."""
    T = _Sites(S)
    R, G = T.coords, T.gram
    for quad in permutations(range(T.m), 4):
        a, b, c, d = quad
        for s in (1, -1):
            if not ((R[a] + s * R[b] - R[c] - s * R[d]) % MODULUS).any():
                vec = T.exact_combination((1, s, -1, -s), quad)
                if all(_is_zero(x) for x in vec):
                    return ConstraintReport("constraint_1b", FAIL,
                                            {"sites": _site_labels(quad), "clause": "sum" if s > 0 else "difference"})
        r = (G[a, c] - G[a, d] + G[b, c] - G[b, d] - G[c, c] + G[d, d]) % MODULUS
        if not r:
            value = (T.exact_gram(a, c) - T.exact_gram(a, d) + T.exact_gram(b, c)
                     - T.exact_gram(b, d) - T.exact_gram(c, c) + T.exact_gram(d, d))
            if _is_zero(value):
                return ConstraintReport("constraint_1b", FAIL,
                                        {"sites": _site_labels(quad), "clause": "orthogonality"})
    return ConstraintReport("constraint_1b", PASS, None, {"m": T.m})


# --- the resonance list -----------------------------------------------------------------

@dataclass(frozen=True)
class Resonance:
    """One resonance polynomial in `arity` site variables.

    Either a linear form sum c (v_h, v_k) over `gram` = ((h, k, c), ...) or
    the determinant of the n combinations given by `rows`.  Indices are
    1-based and relabeled to 1..arity.
    """
    item: str
    arity: int
    gram: tuple = ()
    rows: tuple = ()
    source: tuple = ()

    def polynomial(self):
        if self.gram:
            return Polynomial({((Gram(h, k), 1),): c for h, k, c in self.gram})
        return self.coordinate_polynomial(len(self.rows))

    def coordinate_polynomial(self, n):
        if self.gram:
            terms = {}
            for h, k, c in self.gram:
                for q in range(1, n + 1):
                    mono = ((Coord(h, q), 1), (Coord(k, q), 1)) if h != k else ((Coord(h, q), 2),)
                    terms[mono] = terms.get(mono, 0) + c
            return Polynomial(terms)
        entries = [[sum((Polynomial.var(Coord(h + 1, q)) * r for h, r in enumerate(row) if r),
                        Polynomial.const(0)) for q in range(1, n + 1)] for row in self.rows]
        return determinant(entries, one=Polynomial.const(1))

    def key(self):
        return (self.item, self.arity, self.gram, self.rows)

    def to_dict(self):
        out = {"item": self.item, "arity": self.arity, "polynomial": str(self.polynomial())}
        if self.rows:
            out["rows"] = [list(r) for r in self.rows]
        if self.source:
            out["source"] = [list(p) for p in self.source]
        return out

    def __str__(self):
        return f"{self.item}[{self.arity}]: {self.polynomial()}"


def _relabel(used):
    return {h: i + 1 for i, h in enumerate(sorted(used))}


def _gram_resonance(item, poly, source=()):
    coeffs = {}
    for mono, c in poly.items():
        ((v, e),) = mono
        assert e == 1
        coeffs[(v.i, v.j)] = c
    used = {h for pair in coeffs for h in pair}
    lab = _relabel(used)
    best = None
    # canonical representative under relabeling of the sites and overall sign
    for perm in permutations(range(1, len(used) + 1)):
        img = {}
        for (h, k), c in coeffs.items():
            a, b = perm[lab[h] - 1], perm[lab[k] - 1]
            img[(min(a, b), max(a, b))] = c
        form = tuple(sorted((h, k, c) for (h, k), c in img.items()))
        if form[0][2] < 0:
            form = tuple((h, k, -c) for h, k, c in form)
        if best is None or form < best:
            best = form
    return Resonance(item, len(used), gram=best, source=tuple(source))


def _det_resonance(item, rows, source=()):
    used = {h for r in rows for h, c in enumerate(r) if c}
    order = sorted(used)
    reduced = [[Fraction(r[h]) for h in order] for r in rows]
    # the row space fixes the determinant up to a nonzero constant
    echelon, _ = lattice.rref(reduced)
    key_rows = tuple(tuple(lattice.integer_vector(r)) for r in echelon if any(r))
    return Resonance(item, len(order), rows=key_rows, source=tuple(source))


def _square(L):
    return Polynomial({((Gram(h + 1, k + 1), 1),): (L[h] * L[h] if h == k else 2 * L[h] * L[k])
                       for h in range(len(L)) for k in range(h, len(L)) if L[h] and L[k]})


def _diagonal(L):
    return Polynomial({((Gram(h + 1, h + 1), 1),): c for h, c in enumerate(L) if c})


def _odd_circuits(n):
    out = []
    for length in range(3, n + 1, 2):
        m = length
        cycle = [(k, (k + 1) % length) for k in range(length)]
        for choice in range(3 ** length):
            a = tuple([0] * m)
            steps = []
            c = choice
            for i, j in cycle:
                kind, c = c % 3, c // 3
                ei = tuple(1 if q == i else 0 for q in range(m))
                ej = tuple(1 if q == j else 0 for q in range(m))
                if kind == 0:
                    a = tuple(x + y - z for x, y, z in zip(a, ei, ej))
                elif kind == 1:
                    a = tuple(x - y + z for x, y, z in zip(a, ei, ej))
                else:
                    a = tuple(-x - y - z for x, y, z in zip(a, ei, ej))
                steps.append(a)
            L = tuple(-x for x in a)
            if universal_sign(a) > 0:
                if not any(L):
                    continue
                poly = _square(L)
            else:
                poly = _square(L) - _diagonal(L) * 2
            if poly:
                out.append(_gram_resonance("odd_circuit", poly, steps))
    return out


def _linear_rows(points):
    g = ColoredMarkedGraph.from_points(points)
    zero = tuple([0] * len(points[0]))
    labels = vertex_labels(g, zero if zero in g.vertices else g.vertices[0])
    plus = [pd.L for v, pd in labels.items() if pd.sign > 0 and any(pd.L)]
    minus = [pd.L for pd in labels.values() if pd.sign < 0]
    diffs = [tuple(a - b for a, b in zip(p, q)) for p, q in zip(minus, minus[1:])]
    return plus + diffs


@lru_cache(maxsize=None)
def _graphs(n):
    return enumerate_connected(n + 2, 2 * n)


@dataclass(frozen=True)
class ResonanceList:
    n: int
    items: tuple

    @property
    def size(self):
        return len(self.items)

    def digest(self):
        payload = json.dumps([[r.item, r.arity, [list(x) for x in r.gram], [list(x) for x in r.rows]]
                              for r in self.items])
        return hashlib.sha256(payload.encode()).hexdigest()

    def counts(self):
        out = {}
        for r in self.items:
            out[r.item] = out.get(r.item, 0) + 1
        return out

    def bounds(self):
        """(C, D): 1 + largest coefficient and 1 + largest exponent over the
        coordinate expansions."""
        coeff, expo = 1, 1
        for r in self.items:
            p = r.coordinate_polynomial(self.n)
            for mono, c in p.items():
                coeff = max(coeff, abs(c))
                for _, e in mono:
                    expo = max(expo, e)
        return coeff + 1, expo + 1

    def to_dict(self):
        return {"n": self.n, "size": self.size, "sha256": self.digest(), "counts": self.counts(),
                "items": [r.to_dict() for r in self.items]}


@lru_cache(maxsize=None)
def resonance_list(n):
    """The generated resonance list for dimension n, deterministic and deduplicated."""
    if n < 1:
        raise ValueError("n must be positive")
    found = {}

    def add(r):
        found.setdefault(r.key(), r)

    eye = tuple(tuple(1 if q == k else 0 for q in range(n)) for k in range(n))
    add(Resonance("independence", n, rows=eye))
    for r in _odd_circuits(n):
        add(r)
    for pts in _graphs(n):
        if is_degenerate(pts):
            g = ColoredMarkedGraph.from_points(pts)
            for rel in relations(g):
                poly = avoidable_resonance(g, rel)
                if poly is not None:
                    add(_gram_resonance("avoidable", poly, pts))
        elif len(pts) == n + 2:
            rows = _linear_rows(pts)
            for sub in combinations(rows, n):
                if lattice.rank(list(sub)) == n:
                    add(_det_resonance("determinant", sub, pts))
    items = sorted(found.values(), key=lambda r: (r.item, r.arity, r.gram, r.rows))
    return ResonanceList(n, tuple(items))


# --- evaluation -----------------------------------------------------------------------

def _det_mod(M):
    """Determinants mod MODULUS of a stack of k x k residue matrices."""
    k = M.shape[1]
    if k == 1:
        return M[:, 0, 0] % MODULUS
    if k == 2:
        return (M[:, 0, 0] * M[:, 1, 1] % MODULUS - M[:, 0, 1] * M[:, 1, 0] % MODULUS) % MODULUS
    out = np.zeros(M.shape[0], dtype=np.int64)
    for c in range(k):
        minor = np.delete(np.delete(M, 0, axis=1), c, axis=2)
        term = M[:, 0, c] * _det_mod(minor) % MODULUS
        out = (out + term) % MODULUS if c % 2 == 0 else (out - term) % MODULUS
    return out


def _det_exact(rows):
    if len(rows) == 1:
        return rows[0][0]
    total = 0
    for c in range(len(rows)):
        if _is_zero(rows[0][c]) if isinstance(rows[0][c], PowerSum) else rows[0][c] == 0:
            continue
        minor = [r[:c] + r[c + 1:] for r in rows[1:]]
        term = rows[0][c] * _det_exact(minor)
        total = total + term if c % 2 == 0 else total - term
    return total


def _evaluate_mod(res, T, tuples):
    if res.gram:
        acc = np.zeros(len(tuples), dtype=np.int64)
        for h, k, c in res.gram:
            acc = (acc + (c % MODULUS) * T.gram[tuples[:, h - 1], tuples[:, k - 1]]) % MODULUS
        return acc
    n = T.n
    rows = np.array(res.rows, dtype=np.int64) % MODULUS
    M = np.zeros((len(tuples), len(res.rows), n), dtype=np.int64)
    for h in range(res.arity):
        col = T.coords[tuples[:, h]]
        for r in range(len(res.rows)):
            if rows[r, h]:
                M[:, r, :] = (M[:, r, :] + rows[r, h] * col) % MODULUS
    return _det_mod(M)


def evaluate_exact(res, S, idx):
    """Exact value of a resonance at the sites with 0-based indices idx."""
    if res.gram:
        total = 0
        for h, k, c in res.gram:
            total = total + c * dot(S.sites[idx[h - 1]], S.sites[idx[k - 1]])
        return total
    mat = []
    for row in res.rows:
        vec = [0] * S.n
        for h, c in enumerate(row):
            if c:
                for q in range(S.n):
                    vec[q] = vec[q] + c * S.sites[idx[h]][q]
        mat.append(vec)
    return _det_exact(mat)


def _tuples(m, p):
    if p > m:
        return np.zeros((0, p), dtype=np.int64)
    return np.array(list(permutations(range(m), p)), dtype=np.int64).reshape(-1, p)


def evaluate_list(S, rlist, max_arity=None):
    """First vanishing (resonance, site tuple) or None, plus the count of evaluations."""
    T = _Sites(S)
    cache = {}
    count = 0
    for index, res in enumerate(rlist.items):
        if res.rows and len(res.rows) != S.n:
            continue
        if max_arity is not None and res.arity > max_arity:
            continue
        if res.arity not in cache:
            cache[res.arity] = _tuples(T.m, res.arity)
        tuples = cache[res.arity]
        if not len(tuples):
            continue
        vals = _evaluate_mod(res, T, tuples)
        count += len(tuples)
        for z in np.nonzero(vals == 0)[0]:
            idx = [int(x) for x in tuples[int(z)]]
            if _is_zero(evaluate_exact(res, S, idx)):
                return (index, res, idx), count
    return None, count


def check_resonances(S, n=None, rlist=None):
    """Every resonance is nonzero at every ordered tuple of distinct sites.

    Evaluating each polynomial on all injections of its variables into the
    sites is the same as evaluating the permutation-closed list on every
    subset of 2n sites."""
    n = S.n if n is None else n
    if S.m < 2 * n:
        raise SubsetTooSmall(f"need at least {2 * n} sites, got {S.m}")
    return _resonance_report(S, rlist or resonance_list(n))


def _resonance_report(S, rlist, max_arity=None):
    hit, count = evaluate_list(S, rlist, max_arity)
    detail = {"size": rlist.size, "sha256": rlist.digest(), "counts": rlist.counts(),
              "evaluations": count}
    if hit is None:
        return ConstraintReport("resonances", PASS, None, detail)
    index, res, idx = hit
    return ConstraintReport("resonances", FAIL,
                            {"index": index, "item": res.item, "resonance": str(res.polynomial()),
                             "sites": _site_labels(idx), "value": "0"}, detail)


def check_battery(S, n=None, bound=CONSTRAINT_2_BOUND):
    """Constraints 1, 2, 1b and the resonance list; short lists use the
    resonances whose variables fit."""
    n = S.n if n is None else n
    reports = [check_constraint_1(S), check_constraint_2(S, bound), check_constraint_1b(S)]
    rlist = resonance_list(n)
    if S.m >= 2 * n:
        reports.append(check_resonances(S, n, rlist))
    else:
        reports.append(_resonance_report(S, rlist, max_arity=S.m))
    return reports


def replay_report(report, S, n=None):
    """Re-evaluate a FAIL witness exactly; True when the violation is real."""
    w = report.witness
    if report.verdict != FAIL or not w:
        return False
    sites = S.sites
    if report.constraint == "constraint_1":
        i, j, k = (x - 1 for x in w["triple"])
        u = [a - b for a, b in zip(sites[i], sites[j])]
        v = [a - b for a, b in zip(sites[k], sites[j])]
        return _is_zero(dot(u, v))
    if report.constraint == "constraint_2":
        return all(_is_zero(x) for x in _Sites(S).exact_combination(w["nu"], range(S.m)))
    if report.constraint == "constraint_1b":
        a, b, c, d = (sites[x - 1] for x in w["sites"])
        if w["clause"] == "orthogonality":
            u = [p + q - r - s for p, q, r, s in zip(a, b, c, d)]
            v = [r - s for r, s in zip(c, d)]
            return _is_zero(dot(u, v))
        s = 1 if w["clause"] == "sum" else -1
        return all(_is_zero(p + s * q - r - s * t) for p, q, r, t in zip(a, b, c, d))
    if report.constraint == "resonances":
        rlist = resonance_list(S.n if n is None else n)
        res = rlist.items[w["index"]]
        return _is_zero(evaluate_exact(res, S, [x - 1 for x in w["sites"]]))
    return False


# --- generation --------------------------------------------------------------------------

def required_bounds(n, bound=CONSTRAINT_2_BOUND):
    """(C, D) exceeding every coefficient and exponent of the constraints and
    the resonance list, in coordinates."""
    C, D = resonance_list(n).bounds()
    # constraint 2 has coefficients up to bound - 1, constraint 1b up to 2
    return max(C, bound, 3), max(D, 3)


def generate_generic(n, m, C=None, D=None, bound=CONSTRAINT_2_BOUND, verify=True):
    """Sites from the sequence a_i = C^(D^i), i = 1..n m, cut into consecutive
    n-vectors.  Raises BoundsTooSmall when the battery finds a violation."""
    if m == 0:
        return SiteList(n, ())
    if C is None or D is None:
        c0, d0 = required_bounds(n, bound)
        C = c0 if C is None else C
        D = d0 if D is None else D
    seq = [PowerSum.power(C, D ** i) for i in range(1, n * m + 1)]
    S = SiteList(n, tuple(tuple(seq[k * n:(k + 1) * n]) for k in range(m)))
    if verify:
        failed = [r for r in check_battery(S, n, bound) if not r.passed]
        if failed:
            raise BoundsTooSmall(f"C={C}, D={D}: {failed[0].constraint} fails at {failed[0].witness}")
    return S
