"""Realizing colored marked graphs by integer site lists.

Given sites v_1..v_m in Z^n, the map pi sends e_h to v_h.  A rooted graph is
realized by a root point x when every vertex a satisfies

    -C(a) = (x, V(a))                 if sigma(a) = +
    -C(a) = -(x, V(a)) + (x, x)       if sigma(a) = -

with V(a) = pi(L(a)), N(a) = pi(L2(a)) and C(a) = ((V(a))^2 - N(a)) / 2.
Quadratic forms in the sites are carried symbolically as polynomials in the
Gram variables g_h_k = (v_h, v_k).
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import lattice
from .errors import (AmbiguousEdge, LiftObstruction, NotARelation,
                     SingularSystem)
from .graphs import (BLACK, RED, ColoredMarkedGraph, Edge, Marking,
                     vertex_labels)
from .polycore import Coord, Gram, Polynomial
from .powersum import PowerSum


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class SiteList:
    n: int
    sites: tuple

    def __post_init__(self):
        sites = tuple(tuple(c if isinstance(c, PowerSum) else int(c) for c in v)
                      for v in self.sites)
        object.__setattr__(self, "sites", sites)
        if any(len(v) != self.n for v in sites):
            raise ValueError(f"every site must have {self.n} coordinates")
        if len(set(sites)) != len(sites):
            raise ValueError("sites must be distinct")

    @property
    def m(self):
        return len(self.sites)

    def __getitem__(self, i):
        """Site with 1-based index i."""
        return self.sites[i - 1]

    def pi(self, nu):
        out = [0] * self.n
        for c, v in zip(nu, self.sites):
            if c:
                for k in range(self.n):
                    out[k] += c * v[k]
        return tuple(out)

    def gram(self, h, k):
        return dot(self[h], self[k])

    def gram_values(self):
        return {Gram(h, k): self.gram(h, k)
                for h in range(1, self.m + 1) for k in range(h, self.m + 1)}

    def to_dict(self):
        def enc(c):
            return c.to_dict() if isinstance(c, PowerSum) else c
        return {"n": self.n, "sites": [[enc(c) for c in v] for v in self.sites]}

    @classmethod
    def from_dict(cls, data):
        def dec(c):
            return PowerSum.from_dict(c) if isinstance(c, dict) else int(c)
        try:
            return cls(int(data["n"]), tuple(tuple(dec(c) for c in v) for v in data["sites"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed site list: {exc}") from exc


def gram_form(coeffs):
    """G(a) = sum binom(a_h, 2) g_hh + sum_{h<k} a_h a_k g_hk as a polynomial."""
    terms = {}
    idx = [(h + 1, c) for h, c in enumerate(coeffs) if c]
    for h, c in idx:
        b = c * (c - 1) // 2
        if b:
            terms[((Gram(h, h), 1),)] = b
    for (h, a), (k, b) in combinations(idx, 2):
        terms[((Gram(h, k), 1),)] = a * b
    return Polynomial(terms)


def square_form(coeffs):
    """(sum a_h e_h)^2 in Gram variables."""
    terms = {}
    idx = [(h + 1, c) for h, c in enumerate(coeffs) if c]
    for h, c in idx:
        terms[((Gram(h, h), 1),)] = c * c
    for (h, a), (k, b) in combinations(idx, 2):
        terms[((Gram(h, k), 1),)] = 2 * a * b
    return Polynomial(terms)


def diagonal_form(coeffs):
    """L2(a) = sum a_h e_h^2 in Gram variables."""
    return Polynomial({((Gram(h + 1, h + 1), 1),): c for h, c in enumerate(coeffs) if c})


def evaluate_gram(p, sites):
    return p.evaluate({v: sites.gram(v.i, v.j) for v in p.variables()})


def to_coordinates(p, n):
    """Replace every Gram variable (v_h, v_k) by its coordinate expansion."""
    bindings = {}
    for v in p.variables():
        bindings[v] = sum((Polynomial.var(Coord(v.i, c)) * Polynomial.var(Coord(v.j, c))
                           for c in range(1, n + 1)), Polynomial.const(0))
    from .polycore import specialize
    return specialize(p, bindings)


@dataclass(frozen=True)
class VertexData:
    sign: int
    L: tuple
    L2: tuple
    V: tuple
    N: int
    C: int
    G: Polynomial


def vertex_data(g, root, sites):
    """Per-vertex constants of a rooted compatible graph."""
    labels = vertex_labels(g, root)
    out = {}
    for v, pd in labels.items():
        L = pd.L + (0,) * (sites.m - len(pd.L))
        V = sites.pi(L)
        N = sum(c * dot(s, s) for c, s in zip(L, sites.sites))
        twice = dot(V, V) - N
        assert twice % 2 == 0
        G = gram_form(L)
        out[v] = VertexData(pd.sign, L, L, V, N, twice // 2, G)
    return out


@dataclass(frozen=True)
class Realization:
    x: tuple
    positions: dict

    def to_dict(self):
        def enc(q):
            return [f"{Fraction(c).numerator}/{Fraction(c).denominator}" for c in q]
        return {"x": enc(self.x),
                "positions": [{"vertex": _enc(v), "point": enc(p)} for v, p in self.positions.items()]}


@dataclass(frozen=True)
class Underdetermined:
    particular: tuple
    directions: tuple
    quadratic: tuple = ()
    witness: Realization = None

    def to_dict(self):
        return {"particular": [str(c) for c in self.particular],
                "directions": [list(d) for d in self.directions],
                "quadratic": [{"V": list(V), "C": C} for V, C in self.quadratic],
                "witness": self.witness.to_dict() if self.witness else None}


@dataclass(frozen=True)
class NoSolution:
    reason: str

    def to_dict(self):
        return {"reason": self.reason}


def _enc(v):
    return list(v) if isinstance(v, tuple) else v


def _satisfies(x, data):
    xx = dot(x, x)
    for d in data.values():
        if d.sign > 0:
            if dot(x, d.V) != -d.C:
                return False
        elif -dot(x, d.V) + xx != -d.C:
            return False
    return True


def _positions(x, data):
    return {v: tuple(d.sign * xi + Vi for xi, Vi in zip(x, d.V)) for v, d in data.items()}


def check_simple_steps(g, positions, sites):
    """Both identities of every edge hold for the given positions."""
    for e in g.edges:
        a, b = positions[e.u], positions[e.v]
        vi, vj = sites[e.marking.i], sites[e.marking.j]
        if e.color == BLACK:
            if tuple(y - x for x, y in zip(a, b)) != tuple(q - p for p, q in zip(vi, vj)):
                return False
            if dot(b, b) - dot(a, a) != dot(vj, vj) - dot(vi, vi):
                return False
        else:
            if tuple(x + y for x, y in zip(a, b)) != tuple(p + q for p, q in zip(vi, vj)):
                return False
            if dot(a, a) + dot(b, b) != dot(vi, vi) + dot(vj, vj):
                return False
    return True


def solve_realization(g, sites, root=None):
    """Solve the realization system over Q.

    Returns a Realization when the root point is unique, Underdetermined with
    the affine solution set (and a rational witness when one is found) when
    fewer than n independent linear equations exist, or NoSolution.
    Raises SingularSystem when equations that are formally independent in the
    markings become dependent for these sites.
    """
    root = root if root is not None else (g.root if g.root is not None else g.vertices[0])
    data = vertex_data(g, root, sites)
    plus = [d for v, d in data.items() if d.sign > 0 and any(d.L)]
    minus = [d for d in data.values() if d.sign < 0]
    rows, rhs, formal = [], [], []
    for d in plus:
        rows.append(d.V)
        rhs.append(-d.C)
        formal.append(d.L)
    for d1, d2 in zip(minus, minus[1:]):
        # subtracting two minus equations cancels (x, x)
        rows.append(tuple(a - b for a, b in zip(d1.V, d2.V)))
        rhs.append(d1.C - d2.C)
        formal.append(tuple(a - b for a, b in zip(d1.L, d2.L)))
    n = sites.n
    formal_rank = lattice.rank(formal) if formal else 0
    numeric_rank = lattice.rank(rows) if rows else 0
    if numeric_rank < min(formal_rank, n):
        raise SingularSystem("linear equations independent in the markings are "
                             "dependent for these sites")
    if rows:
        sol = lattice.solve(rows, rhs)
        if sol is None:
            return NoSolution("linear equations are inconsistent")
        particular, kernel = sol
    else:
        particular, kernel = [Fraction(0)] * n, lattice.kernel([], n)
    quadratic = tuple((d.V, d.C) for d in minus[:1])
    if not kernel:
        x = tuple(particular)
        if not _satisfies(x, data):
            return NoSolution("quadratic equations fail at the unique linear solution")
        return Realization(x, _positions(x, data))
    witness = _find_witness(particular, kernel, data, sites)
    return Underdetermined(tuple(particular), tuple(tuple(k) for k in kernel), quadratic, witness)


def _find_witness(particular, kernel, data, sites):
    if not any(d.sign < 0 for d in data.values()):
        x = tuple(particular)
        return Realization(x, _positions(x, data))
    d0 = next(d for d in data.values() if d.sign < 0)
    candidates = [tuple(Fraction(c) for c in s) for s in sites.sites]
    candidates.append(tuple(particular))
    for x in candidates:
        if _on_affine(x, particular, kernel) and _satisfies(x, data):
            return Realization(x, _positions(x, data))
    directions = [list(k) for k in kernel]
    directions += [[a + b for a, b in zip(p, q)] for p, q in combinations(kernel, 2)]
    directions += [[a - b for a, b in zip(p, q)] for p, q in combinations(kernel, 2)]
    for base in candidates:
        if not _on_affine(base, particular, kernel):
            continue
        for w in directions:
            # (base + s w) on the quadratic: |w|^2 s^2 + (2(base,w) - (w,V)) s + rest = 0
            a = dot(w, w)
            b = 2 * dot(base, w) - dot(w, d0.V)
            c = dot(base, base) - dot(base, d0.V) + d0.C
            for s in _rational_roots_quadratic(a, b, c):
                x = tuple(p + s * q for p, q in zip(base, w))
                if _satisfies(x, data):
                    return Realization(x, _positions(x, data))
    return None


def _on_affine(x, particular, kernel):
    diff = [a - b for a, b in zip(x, particular)]
    if not any(diff):
        return True
    return lattice.rank(list(kernel) + [diff]) == lattice.rank(kernel)


def _rational_roots_quadratic(a, b, c):
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a == 0:
        return [-c / b] if b else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    num, den = disc.numerator, disc.denominator
    rn, rd = _isqrt_exact(num), _isqrt_exact(den)
    if rn is None or rd is None:
        return []
    r = Fraction(rn, rd)
    return sorted({(-b + r) / (2 * a), (-b - r) / (2 * a)})


def _isqrt_exact(k):
    from math import isqrt
    r = isqrt(k)
    return r if r * r == k else None


def check_integral(r, sites):
    """True iff the root point lies in the lattice spanned by the sites."""
    return lattice.in_lattice(r.x, sites.sites)


def avoidable_resonance(g, relation, root=None):
    """Quadratic constraint sum_a n_a G(a) forced on the sites by a relation.

    relation maps vertices to integers n_a with sum n_a sigma(a) L(a) = 0.
    Returns a polynomial in Gram variables, or None when it vanishes.
    """
    root = root if root is not None else (g.root if g.root is not None else g.vertices[0])
    labels = vertex_labels(g, root)
    m = g.m
    total = [0] * m
    minus_sum = 0
    for v, c in relation.items():
        pd = labels[v]
        for k in range(m):
            total[k] += c * pd.sign * pd.L[k]
        if pd.sign < 0:
            minus_sum += c
    if any(total) or not any(relation.values()):
        raise NotARelation("the combination of L vectors does not vanish")
    if minus_sum != 0:
        raise NotARelation("the coefficients on minus vertices do not sum to zero")
    result = Polynomial.const(0)
    for v, c in relation.items():
        if c:
            result = result + gram_form(labels[v].L) * c
    return result if result else None


def relations(g, root=None):
    """Integer basis of the relations among the non-root L vectors."""
    root = root if root is not None else (g.root if g.root is not None else g.vertices[0])
    labels = vertex_labels(g, root)
    verts = [v for v in g.vertices if any(labels[v].L)]
    if not verts:
        return []
    cols = [tuple(labels[v].sign * x for x in labels[v].L) for v in verts]
    rows = [list(r) for r in zip(*cols)]
    return [{v: c for v, c in zip(verts, k) if c} for k in lattice.kernel(rows, len(verts))]


def find_avoidable_resonance(g, root=None):
    """First nonzero avoidable resonance over a basis of relations, or None."""
    for rel in relations(g, root):
        p = avoidable_resonance(g, rel, root)
        if p is not None:
            return rel, p
    return None


# --- geometric components ----------------------------------------------------------

@dataclass
class GeometricComponent:
    points: list
    edges: list
    signs: dict
    special: bool = False
    truncated: bool = False
    ids: dict = field(default_factory=dict)

    @property
    def graph(self):
        """Colored marked graph with vertex ids k0, k1, ... in BFS order."""
        if self.special:
            raise ValueError("the special component carries double edges")
        verts = [(self.ids[p], self.signs[p]) for p in self.points]
        es = [Edge(self.ids[a], self.ids[b], color, mk) for a, b, color, mk in self.edges]
        return ColoredMarkedGraph(verts, es, root=self.ids[self.points[0]],
                                  m=max([mk.j for *_, mk in self.edges] + [mk.i for *_, mk in self.edges] + [1]))

    @property
    def positions(self):
        return {self.ids[p]: p for p in self.points}


def _couples(sites, h, k):
    """Every (color, marking) joining h to k by the two site rules."""
    found = []
    nh, nk = dot(h, h), dot(k, k)
    m = sites.m
    for i in range(1, m + 1):
        vi = sites[i]
        for j in range(1, m + 1):
            if i == j:
                continue
            vj = sites[j]
            if all(b - a == q - p for a, b, p, q in zip(h, k, vi, vj)) and nk - nh == dot(vj, vj) - dot(vi, vi):
                found.append((BLACK, Marking(i, j, True)))
            if i < j and all(a + b == p + q for a, b, p, q in zip(h, k, vi, vj)) \
                    and nh + nk == dot(vi, vi) + dot(vj, vj):
                found.append((RED, Marking(i, j, False)))
    return found


def _candidate_neighbors(sites, h):
    m = sites.m
    nh = dot(h, h)
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i == j:
                continue
            vi, vj = sites[i], sites[j]
            k = tuple(a + q - p for a, p, q in zip(h, vi, vj))
            if dot(k, k) - nh == dot(vj, vj) - dot(vi, vi):
                yield k
            if i < j:
                k = tuple(p + q - a for a, p, q in zip(h, vi, vj))
                if nh + dot(k, k) == dot(vi, vi) + dot(vj, vj):
                    yield k


def geometric_component(sites, seed, radius=None, allow_special=False):
    """BFS closure of seed in the geometric graph of the sites."""
    seed = tuple(seed)
    special = seed in sites.sites
    if special and not allow_special:
        raise ValueError("seed lies in the special component; pass allow_special=True")
    if radius is None:
        radius = 8 * max((max(abs(c) for c in v) for v in sites.sites), default=1)
    signs = {seed: 1}
    order = [seed]
    edges = []
    seen_pairs = set()
    truncated = False
    queue = deque([seed])
    while queue:
        h = queue.popleft()
        for k in _candidate_neighbors(sites, h):
            if k == h:
                continue
            pair = frozenset((h, k))
            if pair in seen_pairs:
                continue
            couples = _couples(sites, h, k)
            if len(couples) > 1 and not special:
                raise AmbiguousEdge(f"points {h} and {k} are joined by {len(couples)} couples")
            if max(abs(c) for c in k) > radius:
                truncated = True
                continue
            seen_pairs.add(pair)
            for color, mk in couples:
                edges.append((h, k, color, mk))
            sign = signs[h] * (-1 if couples[0][0] == RED else 1)
            if k not in signs:
                signs[k] = sign
                order.append(k)
                queue.append(k)
    ids = {p: f"k{idx}" for idx, p in enumerate(order)}
    return GeometricComponent(order, edges, signs, special, truncated, ids)


@dataclass
class LiftedComponent:
    graph: ColoredMarkedGraph
    lifts: dict


def lift_component(sites, component, mu):
    """Lift a geometric component to the frequency lattice starting at mu."""
    mu = tuple(mu)
    root = component.points[0]
    if tuple(-c for c in sites.pi(mu)) != root:
        raise LiftObstruction("-pi(mu) is not the root of the component")
    m = sites.m
    adj = {p: [] for p in component.points}
    for a, b, color, mk in component.edges:
        adj[a].append((b, color, mk, True))
        adj[b].append((a, color, mk, False))
    lifts = {root: (mu, 1)}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        la, sa = lifts[a]
        for b, color, mk, forward in adj[a]:
            i, j = (mk.i, mk.j) if forward or color == RED else (mk.j, mk.i)
            e = [0] * m
            if color == BLACK:
                e[i - 1] += 1
                e[j - 1] -= 1
                lb = (tuple(x + y for x, y in zip(la, e)), sa)
            else:
                e[i - 1] -= 1
                e[j - 1] -= 1
                lb = (tuple(-x + y for x, y in zip(la, e)), -sa)
            if tuple(-c for c in sites.pi(lb[0])) != b:
                raise LiftObstruction(f"lift of {b} does not project back")
            if b in lifts:
                if lifts[b] != lb:
                    raise LiftObstruction(f"inconsistent lifts at {b}")
                continue
            lifts[b] = lb
            queue.append(b)
    if len({v for v, _ in lifts.values()}) != len(lifts):
        raise LiftObstruction("two points share a lift")
    verts = [(lifts[p][0], lifts[p][1]) for p in component.points]
    es = []
    for a, b, color, mk in component.edges:
        es.append(Edge(lifts[a][0], lifts[b][0], color, mk))
    g = ColoredMarkedGraph(verts, es, root=mu, m=m)
    return LiftedComponent(g, {component.ids[p]: lifts[p] for p in component.points})
