"""Certificates for characteristic polynomials of blocks.

Every PASS or FAIL carries evidence from which :func:`replay` recomputes the
verdict.  Polynomials in evidence are canonical strings, graphs use the JSON
form of :class:`ColoredMarkedGraph`.
"""

import random
from fractions import Fraction
from math import lcm
from itertools import product

from .blocks import build_CA, signed_block_matrix, signed_edge
from .certificate import FAIL, INCONCLUSIVE, PASS, Certificate
from .errors import CertificateError, DegreeTooLarge, NotMonic
from .graphs import (ColoredMarkedGraph, canonical_key, check_compatible,
                     ensure_embedded)
from .polycore import (SQRT, XI, T, Polynomial, Xi, bezoutiante,
                       char_poly, specialize)
from . import univariate as up

PARITY, SPECIALIZATION, SUPERTEST = "Parity", "Specialization", "Supertest"
UNIVARIATE, CATALOG, BEZOUTIANTE = "UnivariateSpecialization", "Catalog", "Bezoutiante"
RECONSTRUCTION, FACTORIZATION, COMPATIBILITY = "Reconstruction", "Factorization", "Compatibility"


def _check_monic(chi):
    if chi.degree(T) < 1 or chi.leading_coefficient(T) != 1:
        raise NotMonic(f"{chi} is not monic in t")
    if any(v.kind == SQRT for v in chi.variables()):
        raise ValueError("square roots must be eliminated first")


def xi_vars(p):
    return sorted(v for v in p.variables() if v != T)


def at_point(p, point):
    """Dense univariate coefficients (low degree first) in t after substituting
    numbers for every other variable."""
    d = p.degree(T)
    out = [0] * (d + 1)
    for mono, c in p.items():
        val = Fraction(c)
        k = 0
        for v, e in mono:
            if v == T:
                k = e
            else:
                val *= Fraction(point[v]) ** e
        out[k] += val
    return out


def _int_poly(coeffs):
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
    return [int(Fraction(c) * den) for c in coeffs]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# --- parity ---------------------------------------------------------------------------------

def parity_test(chi):
    """chi at x_i = 1 takes odd values at odd integers; checked mod 2."""
    _check_monic(chi)
    point = {v: 1 for v in xi_vars(chi)}
    p = [int(c) for c in at_point(chi, point)]
    mod2 = [c % 2 for c in p]
    d = len(p) - 1
    value = up.evaluate(p, 1)
    evidence = {"chi": str(chi), "at_one": p, "value_at_1_mod_2": value % 2,
                "is_t_power_mod_2": mod2 == [0] * d + [1]}
    return Certificate(PASS if value % 2 else FAIL, PARITY, evidence)


def linear_factor_admissible(factor):
    """A linear factor t + sum a_i x_i needs an even coefficient sum."""
    factor = Polynomial.coerce(factor)
    if factor.degree(T) != 1:
        raise ValueError("not linear in t")
    total = sum(c for mono, c in factor.items() if mono and mono[0][0] != T)
    return total % 2 == 0


# --- specialization ----------------------------------------------------------------------------

def _subgraph(g, verts, edges):
    return ColoredMarkedGraph([(v, g.sign(v)) for v in verts], edges, m=g.m)


def specialize_factor(g, i):
    """chi at x_i = 0 against the product over the components left after deleting
    every edge whose marking contains i."""
    g = ensure_embedded(g)
    chi = char_poly(build_CA(g).mat)
    kept = [e for e in g.edges if i not in e.marking.pair]
    comps = _components(g.vertices, kept)
    parts = []
    prod_ = Polynomial.const(1)
    zero = {Xi(i): 0}
    for comp in comps:
        cs = set(comp)
        sub = _subgraph(g, comp, [e for e in kept if e.u in cs])
        poly = specialize(char_poly(build_CA(sub, root=comp[0]).mat), zero)
        parts.append((comp, poly))
        prod_ = prod_ * poly
    lhs = specialize(chi, zero)
    ok = lhs == prod_
    evidence = {"graph": g.to_dict(), "index": i, "chi_at_zero": str(lhs),
                "components": [{"vertices": [list(v) for v in comp], "chi": str(p)}
                               for comp, p in parts]}
    return parts, Certificate(PASS if ok else FAIL, SPECIALIZATION, evidence)


def _components(verts, edges):
    adj = {v: [] for v in verts}
    for e in edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    seen, out = set(), []
    for v in verts:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


# --- supertest ----------------------------------------------------------------------------------

def supertest(g):
    """Sufficient criterion for irreducibility from one vertex and one index.

    Looks for a vertex a and index i with i in the marking of exactly the edges
    at a, such that removing a leaves a connected graph with at least two
    vertices and every factor at x_k = 0 (any k) is irreducible.
    """
    g = ensure_embedded(g)
    indices = sorted({k for e in g.edges for k in e.marking.pair})
    factor_cache = {}

    def factors_irreducible():
        if "all" not in factor_cache:
            bad = None
            for k in indices:
                parts, cert = specialize_factor(g, k)
                if not cert.passed:
                    bad = {"index": k, "reason": "factorization mismatch"}
                    break
                for comp, poly in parts:
                    if poly.degree(T) > 1 and not _irreducible_by_specialization(poly)[0]:
                        bad = {"index": k, "component": [list(v) for v in comp], "chi": str(poly)}
                        break
                if bad:
                    break
            factor_cache["all"] = bad
        return factor_cache["all"]

    for a in g.vertices:
        at_a = [e for e in g.edges if a in (e.u, e.v)]
        if not at_a:
            continue
        for i in indices:
            with_i = [e for e in g.edges if i in e.marking.pair]
            if set(map(id, with_i)) != set(map(id, at_a)):
                continue
            rest = [v for v in g.vertices if v != a]
            rest_edges = [e for e in g.edges if a not in (e.u, e.v)]
            if len(rest) < 2 or len(_components(rest, rest_edges)) != 1:
                continue
            bad = factors_irreducible()
            if bad is None:
                return Certificate(PASS, SUPERTEST, {"graph": g.to_dict(), "vertex": list(a),
                                                     "index": i})
            return Certificate(INCONCLUSIVE, SUPERTEST, {"graph": g.to_dict(), "vertex": list(a),
                                                         "index": i, "reducible_factor": bad})
    return Certificate(INCONCLUSIVE, SUPERTEST, {"graph": g.to_dict(), "reason": "no vertex/index pair"})


# --- irreducibility ------------------------------------------------------------------------------

def _points(variables, trials, seed):
    rng = random.Random(seed)
    pts = []
    for k in range(trials):
        # a few points with a zero coordinate mimic the x_i = 0 specializations
        pts.append({v: (0 if k % 4 == 3 and idx == k % len(variables) else rng.randint(1, 97))
                    for idx, v in enumerate(variables)})
    return pts


def _degree_pattern(chi, point):
    coeffs = _int_poly(at_point(chi, point))
    _, factors = up.factor_int_poly(coeffs)
    return [up.degree(f) for f, e in factors for _ in range(e)], coeffs


def _subset_sums(degrees):
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _irreducible_by_specialization(chi, trials=12, seed=0):
    """(True, evidence) when some specialization is irreducible of full degree or
    the possible factor degrees intersect to {0, d}."""
    d = chi.degree(T)
    variables = xi_vars(chi)
    if d <= 1:
        return True, {"degree": d}
    if d > up.MAX_FACTOR_DEGREE:
        raise DegreeTooLarge(f"degree {d} exceeds {up.MAX_FACTOR_DEGREE}")
    possible = set(range(d + 1))
    tried = []
    for point in (_points(variables, trials, seed) if variables else [{}]):
        degrees, coeffs = _degree_pattern(chi, point)
        enc = {str(v): c for v, c in point.items()}
        if degrees == [d]:
            return True, {"points": [enc], "degrees": [[d]]}
        tried.append((enc, degrees))
        possible &= _subset_sums(degrees)
        if possible == {0, d}:
            return True, {"points": [p for p, _ in tried], "degrees": [ds for _, ds in tried]}
    return False, {"points": [p for p, _ in tried], "degrees": [ds for _, ds in tried],
                   "possible_factor_degrees": sorted(possible)}


def _divide_linear(chi, ell):
    """(quotient, remainder) of chi by t - ell, synthetic division in t."""
    coeffs = chi.coefficients(T)
    d = chi.degree(T)
    q = []
    acc = Polynomial.const(0)
    tv = Polynomial.var(T)
    for k in range(d, -1, -1):
        acc = acc * ell + coeffs.get(k, Polynomial.const(0))
        if k:
            q.append((k - 1, acc))
    quotient = Polynomial.const(0)
    for k, c in q:
        quotient = quotient + c * tv ** k
    return quotient, acc


def _linear_factors(chi):
    """Linear factors t - ell(x) with integer affine ell, found from the integer
    roots at x = 0 and at the unit points."""
    variables = xi_vars(chi)
    found = []
    rest = chi
    while rest.degree(T) > 1:
        base = {v: 0 for v in variables}
        consts = sorted(set(up.rational_roots(_int_poly(at_point(rest, base)))), key=abs)
        hit = None
        for c0 in consts:
            if c0.denominator != 1:
                continue
            options = []
            for v in variables:
                pt = dict(base)
                pt[v] = 1
                roots = [r - c0 for r in up.rational_roots(_int_poly(at_point(rest, pt)))
                         if r.denominator == 1]
                options.append(sorted(set(roots), key=lambda r: (abs(r), r)))
            for coeffs in product(*options):
                ell = Polynomial.const(int(c0))
                for v, c in zip(variables, coeffs):
                    ell = ell + Polynomial.var(v) * int(c)
                quotient, rem = _divide_linear(rest, ell)
                if not rem:
                    hit = (ell, quotient)
                    break
            if hit:
                break
        if not hit:
            break
        found.append(Polynomial.var(T) - hit[0])
        rest = hit[1]
    return found, rest


def _homogeneous_split(p):
    """Full factorization of a polynomial homogeneous in t and one other variable."""
    variables = xi_vars(p)
    if len(variables) != 1 or not p.is_homogeneous():
        return None
    y = variables[0]
    d = p.degree(T)
    dense = at_point(p, {y: 1})
    _, factors = up.factor_int_poly(_int_poly(dense))
    out = []
    tv, yv = Polynomial.var(T), Polynomial.var(y)
    for f, e in factors:
        k = up.degree(f)
        h = Polynomial.const(0)
        for j, c in enumerate(f):
            if c:
                h = h + tv ** j * yv ** (k - j) * c
        out.extend([h] * e)
    prod_ = Polynomial.const(1)
    for f in out:
        prod_ = prod_ * f
    return out if prod_ == p and d == sum(f.degree(T) for f in out) else None


def factor_witness(chi):
    """Nontrivial factors of chi whose product is chi, or None."""
    linear, rest = _linear_factors(chi)
    if linear:
        tail = _homogeneous_split(rest) if rest.degree(T) > 1 else None
        return linear + (tail or ([rest] if rest.degree(T) > 0 else []))
    split = _homogeneous_split(chi)
    return split if split and len(split) > 1 else None


def irreducible(chi, graph=None, trials=12, seed=0):
    """Irreducibility certificate for a monic characteristic polynomial."""
    chi = Polynomial.coerce(chi)
    _check_monic(chi)
    subject = {"chi": str(chi)}
    if graph is not None:
        cert = supertest(graph)
        if cert.passed:
            return Certificate(PASS, SUPERTEST, cert.evidence, subject)
    ok, evidence = _irreducible_by_specialization(chi, trials, seed)
    if ok:
        return Certificate(PASS, UNIVARIATE, evidence, subject)
    factors = factor_witness(chi)
    if factors and len(factors) > 1:
        linear = [f for f in factors if f.degree(T) == 1]
        return Certificate(FAIL, FACTORIZATION, {
            "factors": [str(f) for f in factors],
            "linear_parity_ok": all(linear_factor_admissible(f) for f in linear)}, subject)
    return Certificate(INCONCLUSIVE, UNIVARIATE, evidence, subject)


# --- separation -----------------------------------------------------------------------------

def translation_invariant(chi):
    """d^d chi((t - a)/d), a the coefficient of t^(d-1): the roots become
    d*lambda_i - sum lambda_j, unchanged when every root moves by the same
    linear form."""
    d = chi.degree(T)
    coeffs = chi.coefficients(T)
    a = coeffs.get(d - 1, Polynomial.const(0))
    shifted = Polynomial.var(T) - a
    out = Polynomial.const(0)
    for k, c in coeffs.items():
        out = out + c * d ** (d - k) * shifted ** k
    return out


def conjugate_poly(chi):
    """Characteristic polynomial of -C from that of C."""
    d = chi.degree(T)
    out = Polynomial.const(0)
    for k, c in chi.coefficients(T).items():
        out = out + c * (-1) ** (d - k) * Polynomial.var(T) ** k
    return out


def block_chi(points):
    return char_poly(signed_block_matrix(points))


def _candidate_edges(tr, i, j, m):
    """The four 2-vertex blocks of trace tr with marking indices i, j."""
    vec = [0] * m
    for v, c in tr.items():
        if v:
            vec[v[0][0].i - 1] += c
    ei = [1 if k == i - 1 else 0 for k in range(m)]
    ej = [1 if k == j - 1 else 0 for k in range(m)]
    out = []
    for s in (1, -1):
        # black {(a, s), (a + e_i - e_j, s)}: trace = -s (2a + e_i - e_j)
        for p, q in ((ei, ej), (ej, ei)):
            num = [-s * x - y + z for x, y, z in zip(vec, p, q)]
            if all(x % 2 == 0 for x in num):
                a = tuple(x // 2 for x in num)
                b = tuple(x + y - z for x, y, z in zip(a, p, q))
                out.append(frozenset({(a, s), (b, s)}))
        # red {(b, s), (-b - e_i - e_j, -s)}: trace = -s (2b + e_i + e_j)
        num = [-s * x - y - z for x, y, z in zip(vec, ei, ej)]
        if all(x % 2 == 0 for x in num):
            b = tuple(x // 2 for x in num)
            c = tuple(-x - y - z for x, y, z in zip(b, ei, ej))
            out.append(frozenset({(b, s), (c, -s)}))
    return out


def reconstruct_edge(chi, m):
    """All 2-vertex signed blocks with characteristic polynomial chi."""
    coeffs = chi.coefficients(T)
    if chi.degree(T) != 2:
        raise ValueError("reconstruction handles 2-vertex blocks")
    tr = -coeffs.get(1, Polynomial.const(0))
    odd = sorted(v[0][0].i for v, c in tr.items() if v and c % 2)
    if len(odd) != 2:
        return []
    i, j = odd
    hits = []
    for cand in set(_candidate_edges(tr, i, j, m)):
        pts = sorted(cand)
        if signed_edge(pts[0], pts[1]) is None:
            continue
        if block_chi(pts) == chi:
            hits.append(cand)
    return hits


def separation(blocks, m=None, with_conjugates=True):
    """Pairwise distinctness of characteristic polynomials.

    blocks: list of signed point lists [(vector, sign), ...] or embedded graphs.
    Blocks are compared through translation_invariant, so chi_A(t) and
    chi_A(t + c(x)) fall together; a collision between blocks that are not
    related by translation, sign change or the antipodal map is a FAIL.
    2-vertex blocks are also inverted with reconstruct_edge, which must give
    back the block and at most its antipode.
    """
    items = []
    for b in blocks:
        pts = [(v, b.sign(v)) for v in b.vertices] if isinstance(b, ColoredMarkedGraph) else list(b)
        items.append(sorted((tuple(v), s) for v, s in pts))
    if m is None:
        m = max((len(p[0][0]) for p in items), default=0)
    seen = {}
    reconstructed = 0
    for idx, pts in enumerate(items):
        chi = block_chi(pts)
        keys = [translation_invariant(chi)]
        if with_conjugates:
            keys.append(translation_invariant(conjugate_poly(chi)))
        for key in keys:
            if key in seen and not _translate_equivalent(items[seen[key]], pts):
                j = seen[key]
                return Certificate(FAIL, RECONSTRUCTION, {
                    "first": _enc_points(items[j]), "second": _enc_points(pts),
                    "chi_first": str(block_chi(items[j])), "chi_second": str(chi)})
        seen.setdefault(keys[0], idx)
        if len(pts) == 2:
            hits = reconstruct_edge(chi, len(pts[0][0]))
            allowed = {frozenset(pts), frozenset(antipode(pts))}
            if frozenset(pts) not in hits or not set(hits) <= allowed:
                return Certificate(FAIL, RECONSTRUCTION, {
                    "block": _enc_points(pts), "chi": str(chi),
                    "reconstructed": [_enc_points(sorted(h)) for h in hits]})
            reconstructed += 1
    return Certificate(PASS, RECONSTRUCTION, {"blocks": [_enc_points(p) for p in items],
                                              "reconstructed": reconstructed,
                                              "with_conjugates": with_conjugates})


def _enc_points(pts):
    return [[list(v), s] for v, s in pts]


def antipode(pts):
    """(b, s) -> (-b, -s); negates the off-diagonal entries of C and keeps the
    diagonal, so chi is unchanged whenever the block is bipartite."""
    return [(tuple(-x for x in v), -s) for v, s in pts]


def _translate_equivalent(p, q):
    """q arises from p by a translation (b, s) -> (b + s c, s), possibly after
    a global sign change or the antipodal map."""
    if len(p) != len(q):
        return False
    target = set(q)
    flips = [p, [(v, -s) for v, s in p], antipode(p), [(v, -s) for v, s in antipode(p)]]
    for pp in flips:
        a, s = pp[0]
        for b, t in q:
            if t != s:
                continue
            c = tuple(s * (y - x) for x, y in zip(a, b))
            moved = {(tuple(x + sg * y for x, y in zip(v, c)), sg) for v, sg in pp}
            if moved == target:
                return True
    return False


def canonical_distinct(graphs):
    """Catalog blocks are pairwise inequivalent under the symmetry group."""
    keys = [canonical_key(g.vertices) for g in graphs]
    return len(set(keys)) == len(keys)


# --- real roots ----------------------------------------------------------------------------------

def real_root_region(chi):
    """Leading principal minors M_1..M_d of the Bezoutiante of chi.

    All M_k > 0 exactly where the roots are real and distinct."""
    _check_monic(chi)
    B = bezoutiante(chi)
    from .polycore import determinant, mul_reduced
    return [determinant([list(r[:k]) for r in B.rows[:k]], one=Polynomial.const(1), mul=mul_reduced)
            for k in range(1, B.dim + 1)]


def region_certificate(chi):
    minors = real_root_region(chi)
    return Certificate(PASS, BEZOUTIANTE, {"chi": str(chi), "minors": [str(p) for p in minors]})


def signature(matrix):
    """(positive, negative) counts of a symmetric rational matrix, by congruence."""
    a = [[Fraction(x) for x in r] for r in matrix]
    n = len(a)
    pos = neg = 0
    k = 0
    while k < n:
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for r in a:
                    r[k], r[j] = r[j], r[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    k += 1
                    continue
                # row/column k += row/column j makes the pivot 2 a_kj
                a[k] = [x + y for x, y in zip(a[k], a[j])]
                for r in a:
                    r[k] += r[j]
        p = a[k][k]
        pos += p > 0
        neg += p < 0
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
            a[i][k] = Fraction(0)
        k += 1
    return pos, neg


def region_at(chi, point, minors=None, bez=None):
    """(all minors > 0, Bezoutiante signature, Sturm count) at a rational point.
    minors and bez may be passed in precomputed when sampling many points."""
    minors = minors or real_root_region(chi)
    values = {Xi(v.i) if v.kind == XI else v: Fraction(c) for v, c in point.items()}
    if chi.is_homogeneous():
        # x -> lambda x scales the roots by lambda and the Bezoutiante by a
        # congruence, so an integer multiple of the point gives the same answer
        scale = lcm(*(c.denominator for c in values.values()))
        values = {v: int(c * scale) for v, c in values.items()}
    inside = all(m.evaluate(values) > 0 for m in minors)
    B = bez or bezoutiante(chi)
    numeric = [[e.evaluate(values) for e in r] for r in B.rows]
    pos, neg = signature(numeric)
    sturm = up.count_real_roots(at_point(chi, values))
    return inside, pos - neg, sturm


# --- replay ---------------------------------------------------------------------------------

def replay(cert):
    """Recompute a certificate from its evidence; returns the recomputed verdict."""
    ev = cert.evidence
    method = cert.method
    try:
        if method == PARITY:
            return parity_test(Polynomial.parse(ev["chi"])).verdict
        if method == SPECIALIZATION:
            g = ColoredMarkedGraph.from_dict(ev["graph"])
            return specialize_factor(g, ev["index"])[1].verdict
        if method == SUPERTEST:
            return supertest(ColoredMarkedGraph.from_dict(ev["graph"])).verdict
        if method == UNIVARIATE:
            chi = Polynomial.parse(cert.subject["chi"])
            return _replay_univariate(chi, ev)
        if method == FACTORIZATION:
            chi = Polynomial.parse(cert.subject["chi"])
            factors = [Polynomial.parse(f) for f in ev["factors"]]
            prod_ = Polynomial.const(1)
            for f in factors:
                prod_ = prod_ * f
            ok = prod_ == chi and len(factors) > 1 and all(f.degree(T) > 0 for f in factors)
            return FAIL if ok else PASS
        if method == BEZOUTIANTE:
            chi = Polynomial.parse(ev["chi"])
            ok = [str(p) for p in real_root_region(chi)] == ev["minors"]
            return PASS if ok else FAIL
        if method == RECONSTRUCTION:
            if "blocks" in ev:
                blocks = [[(tuple(v), s) for v, s in b] for b in ev["blocks"]]
                return separation(blocks, with_conjugates=ev.get("with_conjugates", True)).verdict
            if "block" in ev:
                pts = [(tuple(v), s) for v, s in ev["block"]]
                return separation([pts]).verdict
            blocks = [[(tuple(v), s) for v, s in ev[k]] for k in ("first", "second")]
            return separation(blocks).verdict
        if method == COMPATIBILITY:
            return check_compatible(ColoredMarkedGraph.from_dict(ev["graph"])).verdict
        if method == CATALOG:
            chi = Polynomial.parse(ev["computed"])
            return PASS if chi == Polynomial.parse(ev["expected"]) else FAIL
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed evidence for {method}: {exc}") from exc
    from . import melnikov
    if method in melnikov.METHODS:
        return melnikov.replay(cert)
    raise CertificateError(f"unknown certificate method {method!r}")


def _replay_univariate(chi, ev):
    d = chi.degree(T)
    if "degree" in ev:
        return PASS if d <= 1 else FAIL
    possible = set(range(d + 1))
    for point in ev["points"]:
        pt = {Polynomial.parse(k).variables()[0]: v for k, v in point.items()}
        degrees, _ = _degree_pattern(chi, pt)
        if degrees == [d]:
            return PASS
        possible &= _subset_sums(degrees)
    return PASS if possible == {0, d} else INCONCLUSIVE


def catalog_certificate(computed, expected, name):
    """Bit-exact comparison with a stored golden polynomial."""
    computed, expected = Polynomial.coerce(computed), Polynomial.coerce(expected)
    return Certificate(PASS if computed == expected else FAIL, CATALOG,
                       {"name": name, "computed": str(computed), "expected": str(expected)})


__all__ = [
    "parity_test", "linear_factor_admissible", "specialize_factor", "supertest",
    "irreducible", "factor_witness", "translation_invariant", "conjugate_poly",
    "reconstruct_edge", "separation", "real_root_region", "region_certificate",
    "region_at", "signature", "replay", "catalog_certificate",
]
