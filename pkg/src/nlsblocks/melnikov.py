"""Momentum filtering and Melnikov non-vanishing checks on block spectra.

With omega_i = |v_i|^2 - 2 x_i + 4 sum x_j and a block A placed at the
lattice point x(A), the normal frequencies of A are

    Omega~ = |x(A)|^2 + 4 sum x_j + (eigenvalues of 2 C_A).

Every Melnikov expression splits as K + ell(xi) + (eigenvalue terms): K is an
integer (the eigenvalues of C_A vanish at xi = 0) and ell is a linear form in
xi.  Identities between eigenvalues are decided on characteristic
polynomials: the eigenvalues mu of 2 C_A are the roots of chi2(t), and
mu_A + ell + sigma mu_B vanishes identically for some pair exactly when
chi2_A(t - ell) and (-sigma)^d chi2_B(-sigma t) share a root.

Without sites the constant K is unknown and taken to be 0, the worst case:
a PASS then holds for every choice of sites and roots.
"""

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import univariate as up
from .blocks import build_CA
from .certificate import FAIL, INCONCLUSIVE, PASS, Certificate
from .certify import at_point, conjugate_poly, irreducible
from .errors import CertificateError, InconclusiveDimension
from .graphs import (ColoredMarkedGraph, ensure_embedded, reroot_points,
                     universal_sign)
from .polycore import (T, Polynomial, Xi, char_poly, discriminant, linear_form,
                       matrix_det, resultant, specialize)
from .realization import SiteList, dot

CONSTANT, LINEAR = "ConstantTerm", "LinearPart"
MOD2, DETERMINANT = "ModTwoDiagonal", "Determinant"
IRRED_DISTINCT, SPEC_RESULTANT, RESULTANT = "IrreducibleDistinct", "SpecializedResultant", "Resultant"
SAME_BLOCK = "DistinctEigenvalues"
METHODS = {CONSTANT, LINEAR, MOD2, DETERMINANT, IRRED_DISTINCT, SPEC_RESULTANT, RESULTANT,
           SAME_BLOCK}

# off-diagonal entry of the twist matrix A(xi) = d omega / d xi up to sign
TWIST_DIAGONAL, TWIST_OFF = 1, 2


@dataclass(frozen=True)
class Frequencies:
    sites: SiteList
    omega: tuple
    twist: tuple

    @classmethod
    def from_sites(cls, sites):
        m = sites.m
        total = linear_form([4] * m)
        omega = tuple(Polynomial.const(dot(v, v)) + total - Polynomial.var(Xi(i + 1)) * 2
                      for i, v in enumerate(sites.sites))
        twist = tuple(tuple(TWIST_DIAGONAL if i == j else TWIST_OFF for j in range(m))
                      for i in range(m))
        return cls(sites, omega, twist)

    def pairing(self, nu):
        """(omega(xi), nu) as a polynomial."""
        out = Polynomial.const(0)
        for c, w in zip(nu, self.omega):
            if c:
                out = out + w * c
        return out

    def constant(self, nu):
        return sum(c * dot(v, v) for c, v in zip(nu, self.sites.sites))


@dataclass(frozen=True)
class PlacedBlock:
    """An embedded block, optionally placed at the lattice point root = x(A)."""
    graph: ColoredMarkedGraph
    root: tuple = None

    def key(self):
        return _graph_key(self.graph)

    def to_dict(self):
        return {"graph": self.graph.to_dict(),
                "root": list(self.root) if self.root is not None else None}

    @classmethod
    def from_dict(cls, data):
        root = data.get("root")
        return cls(ColoredMarkedGraph.from_dict(data["graph"]),
                   tuple(root) if root is not None else None)


@dataclass(frozen=True)
class MelnikovQuery:
    nu: tuple
    sigma: int = 1
    h: PlacedBlock = None
    k: PlacedBlock = None

    def __post_init__(self):
        object.__setattr__(self, "nu", tuple(int(c) for c in self.nu))
        if self.sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        if self.k is not None and self.h is None:
            raise ValueError("a second block needs a first one")

    @property
    def order(self):
        return (self.h is not None) + (self.k is not None)

    def is_trivial(self):
        """nu = 0 with no block, or (sigma, nu, h, k) = (-, 0, h, h)."""
        if any(self.nu):
            return False
        if self.order == 0:
            return True
        return (self.order == 2 and self.sigma == -1
                and self.h.key() == self.k.key() and self.h.root == self.k.root)


def _graph_key(g):
    return json.dumps(g.to_dict(), sort_keys=True)


def placed(block):
    if isinstance(block, PlacedBlock):
        return PlacedBlock(ensure_embedded(block.graph), block.root)
    return PlacedBlock(ensure_embedded(block))


def momentum_admissible(q, sites):
    """pi(nu) + x(h) + sigma x(k) = 0 (first order: pi(nu) + sigma x(h) = 0) and
    sum nu_i + degree even."""
    pi = sites.pi(q.nu)
    if q.order == 0:
        total = pi
    elif q.order == 1:
        if q.h.root is None:
            raise ValueError("momentum needs blocks placed at geometric roots")
        total = tuple(a + q.sigma * b for a, b in zip(pi, q.h.root))
    else:
        if q.h.root is None or q.k.root is None:
            raise ValueError("momentum needs blocks placed at geometric roots")
        total = tuple(a + b + q.sigma * c for a, b, c in zip(pi, q.h.root, q.k.root))
    return not any(total) and (sum(q.nu) + q.order) % 2 == 0


# --- block spectra ------------------------------------------------------------------------

_BLOCK_CACHE = {}


class _BlockData:
    def __init__(self, g):
        self.graph = g
        self.C = build_CA(g)
        self.chi = char_poly(self.C.mat)
        self.d = self.chi.degree(T)
        self.chi2 = _scale_roots(self.chi, 2)
        self._irreducible = None

    def irreducible(self):
        if self._irreducible is None:
            self._irreducible = irreducible(self.chi, graph=self.graph)
        return self._irreducible

    def trace2(self, m):
        """Coefficients of tr(2 C_A) as a linear form in x_1..x_m."""
        lead = self.chi2.coefficients(T).get(self.d - 1, Polynomial.const(0))
        return _linear_coeffs(-lead, m)


def block_data(g):
    key = _graph_key(g)
    if key not in _BLOCK_CACHE:
        _BLOCK_CACHE[key] = _BlockData(g)
    return _BLOCK_CACHE[key]


def _scale_roots(chi, c):
    """c^d chi(t / c): the characteristic polynomial of c * C."""
    d = chi.degree(T)
    out = Polynomial.const(0)
    for k, coef in chi.coefficients(T).items():
        out = out + coef * c ** (d - k) * Polynomial.var(T) ** k
    return out


def _linear_coeffs(p, m):
    out = [0] * m
    for mono, c in p.items():
        if len(mono) != 1 or mono[0][1] != 1 or mono[0][0].kind != Xi(1).kind:
            raise ValueError(f"{p} is not a linear form in xi")
        out[mono[0][0].i - 1] += c
    return out


def ell_coeffs(nu, order, sigma=1):
    """Coefficients of the linear part ell(xi) of a Melnikov expression."""
    s = sum(nu)
    base = 4 * s + (4 if order >= 1 else 0) + (4 * sigma if order == 2 else 0)
    return [base - 2 * c for c in nu]


def _resolve_dimension(sites, blocks, n):
    if sites is not None:
        return sites.n
    for b in blocks:
        if b is not None and b.root is not None:
            return len(b.root)
    if n is None:
        raise ValueError("the dimension n is needed when neither sites nor roots are given")
    return n


def _query_dict(q, sites, constant):
    return {"order": q.order, "nu": list(q.nu), "sigma": q.sigma,
            "blocks": [b.to_dict() for b in (q.h, q.k) if b is not None],
            "sites": sites.to_dict() if sites is not None else None,
            "constant": constant}


def _constant(q, sites):
    """K, or None when no sites are attached."""
    if sites is None:
        return None
    freq = Frequencies.from_sites(sites)
    K = freq.constant(q.nu)
    if q.order >= 1:
        K += dot(q.h.root, q.h.root) * (q.sigma if q.order == 1 else 1)
    if q.order == 2:
        K += q.sigma * dot(q.k.root, q.k.root)
    return K


def _require_admissible(q, sites):
    if q.is_trivial():
        raise ValueError("trivial query: excluded from the Melnikov conditions")
    if sites is not None:
        if not momentum_admissible(q, sites):
            raise ValueError("query is not momentum admissible")
    elif (sum(q.nu) + q.order) % 2:
        raise ValueError("query violates the parity condition")


# --- first Melnikov condition -----------------------------------------------------------------

def first_melnikov(block, nu, sites=None, sigma=1):
    """Certify (omega, nu) != 0 (block None) or (omega, nu) + sigma Omega~ != 0.

    The constant term at xi = 0 is tried first.  Otherwise, with sigma = +1,
    half of ad(N) on the block is N = C_A + (2 (sum nu + 1) sum x_j - (xi, nu)) I;
    its off-diagonal entries are even, so det N is the product of the diagonal
    entries mod 2, each of which is odd when sum nu is odd.  sigma = -1 is the
    negative of the sigma = +1 expression at -nu.
    """
    nu = tuple(int(c) for c in nu)
    b = placed(block) if block is not None else None
    q = MelnikovQuery(nu, sigma, b)
    _require_admissible(q, sites)
    K = _constant(q, sites)
    if b is None:
        return _pure_frequency(q, sites, K)
    subject = _query_dict(q, sites, K)
    if K:
        return Certificate(PASS, CONSTANT, {"constant": K}, subject)
    eff = nu if sigma == 1 else tuple(-c for c in nu)
    diag = mod2_diagonal(b.graph, eff)
    if all(diag):
        return Certificate(PASS, MOD2, {"diagonal_mod2": [str(p) for p in diag], "nu": list(eff)},
                           subject)
    det = half_adN_det(b.graph, eff)
    verdict = PASS if det else FAIL
    return Certificate(verdict, DETERMINANT, {"determinant": str(det), "nu": list(eff)}, subject)


def _pure_frequency(q, sites, K):
    subject = _query_dict(q, sites, K)
    if K:
        return Certificate(PASS, CONSTANT, {"constant": K}, subject)
    coeffs = ell_coeffs(q.nu, 0)
    verdict = PASS if any(coeffs) else FAIL
    return Certificate(verdict, LINEAR, {"linear_part": coeffs}, subject)


def half_adN(g, nu):
    """C_A + (2 (sum nu + 1) sum x_j - (xi, nu)) I, with m = len(nu) variables."""
    m = len(nu)
    C = block_data(g).C.mat
    shift = linear_form([2 * (sum(nu) + 1)] * m) - linear_form(nu)
    return C.shift(shift)


def mod2_diagonal(g, nu):
    """Diagonal entries of half_adN reduced mod 2."""
    return [_mod2(p) for p in half_adN(g, nu).diagonal()]


def half_adN_det(g, nu):
    return matrix_det(half_adN(g, nu))


def _mod2(p):
    return Polynomial({mono: c % 2 for mono, c in p.items() if c % 2})


def mod2_product(polys):
    out = Polynomial.const(1)
    for p in polys:
        out = _mod2(out * p)
    return out


# --- second Melnikov condition ----------------------------------------------------------------

def shifted_pair(a, b, ell, sigma):
    """Q(t) = chi2_A(t - ell) and R(t) = (-sigma)^d chi2_B(-sigma t)."""
    Q = specialize(block_data(a).chi2, {T: Polynomial.var(T) - ell})
    chi2 = block_data(b).chi2
    R = conjugate_poly(chi2) if sigma == 1 else chi2
    return Q, R


def second_melnikov(block_a, block_b, nu, sigma, sites=None, n=None, method=None,
                    seed=0, trials=8):
    """Certify (omega, nu) + Omega~_A + sigma Omega~_B != 0 for every eigenvalue pair.

    Routes, in order: constant term; both characteristic polynomials
    irreducible and the shifted pair distinct; resultant in t nonzero at a
    specialization point; resultant in t nonzero as a polynomial.  method
    forces a single route (IrreducibleDistinct or Resultant).
    """
    nu = tuple(int(c) for c in nu)
    a, b = placed(block_a), placed(block_b)
    q = MelnikovQuery(nu, sigma, a, b)
    _require_admissible(q, sites)
    dim = _resolve_dimension(sites, (a, b), n)
    K = _constant(q, sites)
    m = len(nu)
    ell = linear_form(ell_coeffs(nu, 2, sigma))
    if dim > 3:
        raise InconclusiveDimension(
            f"dimension {dim}: only the weak separation report is available",
            weak_separation_report(a, b, nu, sigma, K))
    subject = _query_dict(q, sites, K)
    if K and method is None:
        return Certificate(PASS, CONSTANT, {"constant": K}, subject)
    if method is None:
        w = same_block_vertex(a, b, nu, sigma, sites)
        if w is not None:
            ev = distinct_eigenvalues(a.graph, b.graph, nu, sigma, w)
            if ev["coincide"]:
                return Certificate(PASS if ev["squarefree"] else FAIL, SAME_BLOCK, ev, subject)
    if method in (None, IRRED_DISTINCT):
        ev = irreducible_distinct(a.graph, b.graph, nu, sigma)
        if ev["distinct"] and ev["irreducible"]:
            return Certificate(PASS, IRRED_DISTINCT, ev, subject)
        if method == IRRED_DISTINCT:
            return Certificate(INCONCLUSIVE, IRRED_DISTINCT, ev, subject)
    Q, R = shifted_pair(a.graph, b.graph, ell, sigma)
    if method is None:
        point = _separating_point(Q, R, m, seed, trials)
        if point is not None:
            return Certificate(PASS, SPEC_RESULTANT, {"point": point}, subject)
    res = resultant(Q, R, T)
    return Certificate(PASS if res else FAIL, RESULTANT, {"resultant": str(res)}, subject)


def _root_point(g):
    if g.root is not None:
        return g.root
    zero = tuple([0] * g.m)
    return zero if zero in g.vertices else g.vertices[0]


def _rooted(g, m):
    return {tuple(_pad(v, m)) for v in reroot_points(g.vertices, _root_point(g))}


def same_block_vertex(a, b, nu, sigma, sites=None):
    """A vertex w of A (rooted at 0) such that B is A seen from w, sigma = -sign(w)
    and nu = sigma w; then both factors are eigenvalues of one geometric block
    and the pairing of an eigenvalue with itself is the trivial resonance.
    With sites and roots, x(B) must also be the position of w.  None otherwise.
    """
    m = len(nu)
    pts_a, pts_b = _rooted(a.graph, m), _rooted(b.graph, m)
    if len(pts_a) != len(pts_b):
        return None
    for w in sorted(pts_a):
        s = universal_sign(w)
        if sigma != -s or tuple(nu) != tuple(sigma * c for c in w):
            continue
        if {tuple(v) for v in reroot_points(sorted(pts_a), w)} != pts_b:
            continue
        if sites is not None and a.root is not None and b.root is not None:
            pos = tuple(s * x - y for x, y in zip(a.root, sites.pi(w)))
            if pos != tuple(b.root):
                continue
        return w
    return None


def distinct_eigenvalues(ga, gb, nu, sigma, w):
    """Evidence dict for a same-block query: the shifted polynomials coincide, so
    each eigenvalue is matched with itself, and chi_A is squarefree, so no
    other pair vanishes."""
    ell = linear_form(ell_coeffs(nu, 2, sigma))
    Q, R = shifted_pair(ga, gb, ell, sigma)
    da = block_data(ga)
    irr = da.irreducible().passed
    squarefree = irr or da.d < 2 or bool(discriminant(da.chi))
    return {"vertex": list(w), "coincide": Q == R, "irreducible": irr, "squarefree": squarefree}


def irreducible_distinct(ga, gb, nu, sigma):
    """Evidence dict: both chi irreducible, and chi2_A(t - ell) != R(t)."""
    m = len(nu)
    da, db = block_data(ga), block_data(gb)
    irr = da.irreducible().passed and db.irreducible().passed
    ell = ell_coeffs(nu, 2, sigma)
    if da.d != db.d:
        return {"irreducible": irr, "distinct": True, "by": "degree"}
    ta, tb = da.trace2(m), db.trace2(m)
    if any(x + da.d * l + sigma * y for x, y, l in zip(ta, tb, ell)):
        return {"irreducible": irr, "distinct": True, "by": "trace"}
    Q, R = shifted_pair(ga, gb, linear_form(ell), sigma)
    return {"irreducible": irr, "distinct": Q != R, "by": "polynomial"}


def _separating_point(Q, R, m, seed, trials):
    rng = random.Random(seed)
    for _ in range(trials):
        point = [rng.randint(1, 10 ** 4) for _ in range(m)]
        if specialized_coprime(Q, R, point):
            return point
    return None


def specialized_coprime(Q, R, point):
    """Resultant of Q and R at xi = point is nonzero (both are monic in t)."""
    pt = {Xi(i + 1): c for i, c in enumerate(point)}
    f = [int(c) for c in at_point(Q, pt)]
    g = [int(c) for c in at_point(R, pt)]
    return up.degree(up.gcd_rational(f, g)) == 0


def weak_separation_report(a, b, nu, sigma, K):
    """Non-conclusive summary for n > 3: at xi = 0 every one of the d_A d_B
    expressions equals K, and their mean linear part is compared to zero."""
    m = len(nu)
    da, db = block_data(a.graph), block_data(b.graph)
    ell = ell_coeffs(nu, 2, sigma)
    mean = [Fraction(l) + Fraction(x, da.d) + sigma * Fraction(y, db.d)
            for l, x, y in zip(ell, da.trace2(m), db.trace2(m))]
    pairs = da.d * db.d
    return {"conclusive": False, "constant": K,
            "coincident_at_zero": pairs if not K else 0,
            "multiplicity_bound": pairs,
            "mean_linear_part": [str(c) for c in mean],
            "mean_linear_part_vanishes": not any(mean)}


def check_query(q, sites=None, n=None):
    if q.order == 2:
        return second_melnikov(q.h, q.k, q.nu, q.sigma, sites=sites, n=n)
    return first_melnikov(q.h, q.nu, sites=sites, sigma=q.sigma)


# --- replay ----------------------------------------------------------------------------------

def replay(cert):
    """Recompute the verdict of a Melnikov certificate from its subject and evidence."""
    sub, ev = cert.subject, cert.evidence
    if cert.method not in METHODS:
        raise CertificateError(f"unknown Melnikov method {cert.method!r}")
    try:
        sites = SiteList.from_dict(sub["sites"]) if sub.get("sites") else None
        blocks = [PlacedBlock.from_dict(b) for b in sub["blocks"]]
        nu, sigma = tuple(sub["nu"]), sub["sigma"]
        q = MelnikovQuery(nu, sigma, *blocks)
        _require_admissible(q, sites)
        method = cert.method
        if method == CONSTANT:
            K = _constant(q, sites)
            return PASS if K and K == ev["constant"] else FAIL
        if method == LINEAR:
            return PASS if any(ell_coeffs(nu, 0)) and q.order == 0 else FAIL
        g = blocks[0].graph
        if method == MOD2:
            diag = mod2_diagonal(g, tuple(ev["nu"]))
            ok = all(diag) and [str(p) for p in diag] == ev["diagonal_mod2"]
            return PASS if ok else FAIL
        if method == DETERMINANT:
            return PASS if half_adN_det(g, tuple(ev["nu"])) else FAIL
        ga, gb = blocks[0].graph, blocks[1].graph
        if method == SAME_BLOCK:
            w = same_block_vertex(blocks[0], blocks[1], nu, sigma, sites)
            if w is None or list(w) != ev["vertex"]:
                return FAIL
            e = distinct_eigenvalues(ga, gb, nu, sigma, w)
            return PASS if e["coincide"] and e["squarefree"] else FAIL
        if method == IRRED_DISTINCT:
            e = irreducible_distinct(ga, gb, nu, sigma)
            return PASS if e["irreducible"] and e["distinct"] else INCONCLUSIVE
        ell = linear_form(ell_coeffs(nu, 2, sigma))
        Q, R = shifted_pair(ga, gb, ell, sigma)
        if method == SPEC_RESULTANT:
            return PASS if specialized_coprime(Q, R, ev["point"]) else FAIL
        if method == RESULTANT:
            return PASS if resultant(Q, R, T) else FAIL
    except (IndexError, KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed Melnikov evidence: {exc}") from exc
    raise CertificateError(f"unknown Melnikov method {cert.method!r}")


# --- desk-scale suites ------------------------------------------------------------------------

def nu_vectors(m, max_l1, parity=None):
    """All nu in Z^m with |nu|_1 <= max_l1 (and sum nu = parity mod 2), as an array."""
    rows = [v for v in product(range(-max_l1, max_l1 + 1), repeat=m)
            if sum(map(abs, v)) <= max_l1 and (parity is None or sum(v) % 2 == parity)]
    return np.array(rows, dtype=np.int64).reshape(-1, m)


def first_melnikov_suite(graphs, max_l1=6):
    """Site-free first condition for every block and every nu with odd sum.

    Same logic as first_melnikov with K = 0, vectorized over nu: the diagonal
    of half_adN mod 2 has coefficient vector (vertex + nu) mod 2.
    Returns {"queries", "passed", "failures"}.
    """
    m = max(g.m for g in graphs)
    nus = nu_vectors(m, max_l1, parity=1)
    total = passed = 0
    failures = []
    for idx, g in enumerate(graphs):
        V = np.array([_pad(v, m) for v in g.vertices], dtype=np.int64)
        odd = ((V[:, None, :] + nus[None, :, :]) % 2).any(axis=2).all(axis=0)
        total += len(nus)
        passed += int(odd.sum())
        for k in np.nonzero(~odd)[0]:
            cert = first_melnikov(g, tuple(int(c) for c in nus[k]))
            if cert.passed:
                passed += 1
            else:
                failures.append({"block": idx, "nu": nus[k].tolist()})
    return {"queries": total, "passed": passed, "failures": failures, "nus": nus}


def second_melnikov_suite(graphs, max_l1=4):
    """Site-free second condition for ordered pairs, both signs and every nu with
    even sum, the trivial queries excluded.

    Both characteristic polynomials are irreducible, so a pair can only fail
    when the shifted polynomials coincide; their traces agree for at most one
    nu, and only those queries go through second_melnikov in full.
    """
    m = max(g.m for g in graphs)
    nus = nu_vectors(m, max_l1, parity=0)
    l1 = np.abs(nus).sum(axis=1)
    zero = np.nonzero(l1 == 0)[0]
    data = [block_data(g) for g in graphs]
    irreducible_all = all(d.irreducible().passed for d in data)
    traces = np.array([_pad(d.trace2(m), m) for d in data], dtype=np.int64)
    total = passed = full = 0
    failures = []
    ells = {s: 4 * (nus.sum(axis=1) + 1 + s)[:, None] - 2 * nus for s in (1, -1)}
    for i, j in product(range(len(graphs)), repeat=2):
        for sigma in (1, -1):
            count = len(nus)
            skip = set()
            if i == j and sigma == -1:
                skip = {int(k) for k in zero}
                count -= len(skip)
            total += count
            if not irreducible_all:
                candidates = [k for k in range(len(nus)) if k not in skip]
            elif data[i].d != data[j].d:
                candidates = []
            else:
                rhs = traces[i] + sigma * traces[j]
                hit = ((data[i].d * ells[sigma] + rhs[None, :]) == 0).all(axis=1)
                candidates = [int(k) for k in np.nonzero(hit)[0] if int(k) not in skip]
            passed += count - len(candidates)
            for k in candidates:
                full += 1
                nu = tuple(int(c) for c in nus[k])
                cert = second_melnikov(graphs[i], graphs[j], nu, sigma, n=3)
                if cert.passed:
                    passed += 1
                else:
                    failures.append({"pair": [i, j], "sigma": sigma, "nu": list(nu),
                                     "method": cert.method})
    return {"queries": total, "passed": passed, "full_checks": full, "failures": failures,
            "nus": nus}


def _pad(v, m):
    v = list(v)
    return v + [0] * (m - len(v))


# --- smoke test ---------------------------------------------------------------------------------

@dataclass
class SmokeReport:
    samples: int
    evaluations: int = 0
    candidates: int = 0
    hits: list = field(default_factory=list)

    @property
    def clean(self):
        return not self.hits


def sample_points(m, count=100, seed=0, high=10 ** 12):
    """Random positive integer points (integers are positive rationals).  The
    range is wide enough that landing on a zero hypersurface by chance is
    negligible over millions of evaluations."""
    rng = random.Random(seed)
    return [[rng.randint(1, high) for _ in range(m)] for _ in range(count)]


SMOKE_TOLERANCE = 1e-8


def _roots_at(chi2, points):
    """Numerical roots of chi2 at each point, padded with nan to width 4, and the
    exact integer coefficient lists (low degree first)."""
    width = max(4, chi2.degree(T))
    out = np.full((len(points), width), np.nan, dtype=complex)
    exact = []
    for s, point in enumerate(points):
        pt = {Xi(i + 1): c for i, c in enumerate(point)}
        coeffs = [int(c) for c in at_point(chi2, pt)]
        exact.append(coeffs)
        r = np.roots([float(c) for c in reversed(coeffs)])
        out[s, :len(r)] = r
    return out, exact


def smoke_first(graphs, nus, count=100, seed=0):
    """Evaluate det(ad(N)) of every (block, nu) at random points, K = 0.

    The eigenvalue u + mu can vanish only where a numerical root mu is close
    to -u; those candidates are decided exactly on chi2.
    """
    m = nus.shape[1]
    points = sample_points(m, count, seed)
    P = np.array(points, dtype=np.int64)
    # u[s, k] = 4 (sum nu + 1) sum xi - 2 (xi, nu)
    u = 4 * (nus.sum(axis=1) + 1)[None, :] * P.sum(axis=1)[:, None] - 2 * P @ nus.T
    uf = u.astype(float)
    rep = SmokeReport(count)
    for idx, g in enumerate(graphs):
        roots, exact = _roots_at(block_data(g).chi2, points)
        rep.evaluations += count * len(nus)
        gap = np.abs(uf[:, :, None] + roots[:, None, :])
        near = gap <= SMOKE_TOLERANCE * (1.0 + np.abs(uf))[:, :, None]
        for s, k in sorted({(int(s), int(k)) for s, k, _ in zip(*np.nonzero(near))}):
            rep.candidates += 1
            if up.evaluate(exact[s], -int(u[s, k])) == 0:
                rep.hits.append({"block": idx, "point": points[s], "nu": nus[k].tolist()})
    return rep


def smoke_second(graphs, nus, count=100, seed=0):
    """Evaluate mu_A + ell + sigma mu_B for every pair, sign and nu at random points.

    Near-coincidences between numerical eigenvalue sums and ell are decided
    exactly: by the resultant at the point, or for same-block queries by
    squarefreeness of chi2_A there (the pairing of an eigenvalue with itself
    vanishes by construction).
    """
    m = nus.shape[1]
    points = sample_points(m, count, seed)
    P = np.array(points, dtype=np.int64)
    roots = [_roots_at(block_data(g).chi2, points)[0] for g in graphs]
    R = np.stack(roots, axis=1)                      # (samples, blocks, 4)
    nb = len(graphs)
    placed_blocks = [PlacedBlock(ensure_embedded(g)) for g in graphs]
    rep = SmokeReport(count)
    checked = {}
    for sigma in (1, -1):
        coeff = 4 * (nus.sum(axis=1) + 1 + sigma)[:, None] - 2 * nus
        ells = P @ coeff.T
        order = np.argsort(ells, axis=1)
        for s in range(count):
            rep.evaluations += nb * nb * 16 * len(nus)
            sums = -(R[s][:, None, :, None] + sigma * R[s][None, :, None, :])
            flat = sums.reshape(-1)
            ok = ~np.isnan(flat.real)
            scale = 1.0 + np.abs(np.nan_to_num(flat))
            ok &= np.abs(flat.imag) <= SMOKE_TOLERANCE * scale
            idx = np.nonzero(ok)[0]
            srt = ells[s][order[s]].astype(float)
            pos = np.searchsorted(srt, flat.real[idx])
            for off in (-1, 0):
                p = np.clip(pos + off, 0, len(srt) - 1)
                close = np.abs(srt[p] - flat.real[idx]) <= SMOKE_TOLERANCE * scale[idx]
                for f, pp in zip(idx[close], p[close]):
                    i, j = divmod(int(f) // 16, nb)
                    k = int(order[s][pp])
                    key = (i, j, sigma, k, s)
                    if key in checked:
                        continue
                    rep.candidates += 1
                    checked[key] = _smoke_exact(placed_blocks[i], placed_blocks[j],
                                                tuple(int(c) for c in nus[k]), sigma, points[s])
                    if not checked[key]:
                        rep.hits.append({"pair": [i, j], "sigma": sigma,
                                         "nu": nus[k].tolist(), "point": points[s]})
    return rep


def _smoke_exact(a, b, nu, sigma, point):
    """True when no nontrivial eigenvalue pair vanishes at the point."""
    ell = linear_form(ell_coeffs(nu, 2, sigma))
    Q, R = shifted_pair(a.graph, b.graph, ell, sigma)
    if same_block_vertex(a, b, nu, sigma) is not None and Q == R:
        pt = {Xi(i + 1): c for i, c in enumerate(point)}
        f = [int(c) for c in at_point(Q, pt)]
        return up.degree(up.gcd_rational(f, up.derivative(f))) == 0
    return specialized_coprime(Q, R, point)


__all__ = [
    "Frequencies", "PlacedBlock", "MelnikovQuery", "momentum_admissible",
    "first_melnikov", "second_melnikov", "check_query", "replay", "METHODS",
    "first_melnikov_suite", "second_melnikov_suite", "smoke_first", "smoke_second",
    "nu_vectors", "weak_separation_report", "same_block_vertex",
]
