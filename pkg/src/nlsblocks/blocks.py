"""Block matrices of the normal form and their characteristic polynomials.

For an embedded block with vertices (a, sigma) the matrix C_A has diagonal
-sigma * a(xi), where a(xi) = sum a_i x_i, and for an edge joining a to b with
marking (i, j) the entry at (a, b) is 2 sigma(b) s_ij.  An optional global
factor rescales every entry.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoRealization, NotEmbedded
from .graphs import bfs_order, embed_universal, universal_sign
from .polycore import (PolyMatrix, Polynomial, Symbol, Xi, char_poly,
                       linear_form, sq, xi)
from .realization import Realization, Underdetermined, dot, solve_realization

C_A, C_COMB, MPRIME, ADN, DESQRT = "C_A", "C_comb", "Mprime", "adN", "desqrt"


@dataclass(frozen=True)
class BlockMatrix:
    graph: object
    kind: str
    mat: PolyMatrix
    order: tuple
    base: Polynomial = None
    core: PolyMatrix = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.mat.dim

    def char_poly(self):
        return char_poly(self.mat)

    def to_dict(self):
        return {"kind": self.kind, "order": [list(v) if isinstance(v, tuple) else v for v in self.order],
                "matrix": self.mat.to_json(),
                "base": str(self.base) if self.base is not None else None}


@dataclass(frozen=True)
class SpectrumShift:
    base: Polynomial
    eigen_poly: Polynomial
    c_poly: Polynomial


def xi_sum(m):
    return linear_form([1] * m)


def _vertex_order(g, root):
    rest = [v for v in g.vertices if v != root]
    return (root, *rest) if root is not None else tuple(g.vertices)


def build_CA(g, root=None, factor=1):
    """C_A of an embedded block; vertex order puts the root first."""
    if not g.is_embedded():
        raise NotEmbedded("build_CA needs a graph embedded in the universal graph")
    if root is None:
        root = g.root
    if root is None:
        zero = tuple([0] * g.m)
        root = zero if zero in g.vertices else g.vertices[0]
    order = _vertex_order(g, root)
    pos = {v: k for k, v in enumerate(order)}
    d = len(order)
    rows = [[Polynomial.const(0)] * d for _ in range(d)]
    for v in order:
        rows[pos[v]][pos[v]] = linear_form(v) * (-g.sign(v) * factor)
    for e in g.edges:
        s = sq(*e.marking.pair)
        a, b = pos[e.u], pos[e.v]
        rows[a][b] = s * (2 * g.sign(e.v) * factor)
        rows[b][a] = s * (2 * g.sign(e.u) * factor)
    return BlockMatrix(g, C_A, PolyMatrix(rows), order, params={"factor": factor})


def sign_symmetrizer(B):
    """A +-1 diagonal S (as a list) with S * mat symmetric, or None."""
    g = B.graph
    root = B.order[0]
    signs = [g.sign(v) * g.sign(root) for v in B.order]
    M = B.mat
    for a in range(M.dim):
        for b in range(a + 1, M.dim):
            if M[a, b] * signs[a] != M[b, a] * signs[b]:
                return None
    return signs


def translate_points_of(g, c):
    """The block obtained by (b, sigma) -> (b + sigma c, sigma)."""
    from .graphs import ColoredMarkedGraph, translate_points
    return ColoredMarkedGraph.from_points(translate_points(g.vertices, c))


# --- removing square roots ------------------------------------------------------------

def _bellman_ford(nodes, weights):
    """Potentials p with p[b] - p[a] <= w for every (a, b, w); weights are integers."""
    dist = {v: 0 for v in nodes}
    for _ in range(len(nodes)):
        changed = False
        for a, b, w in weights:
            if dist[a] + w < dist[b]:
                dist[b] = dist[a] + w
                changed = True
        if not changed:
            return dist
    raise ValueError("negative cycle: entries cannot be cleared by diagonal conjugation")


def desqrt(B):
    """Diagonal conjugate of a C_A block with entries free of square roots.

    Along a BFS spanning tree from the root each child is scaled so that the
    entry towards it becomes sigma(child) and the entry back becomes
    4 sigma(parent) x_i x_j.  Remaining negative powers of x_i or of 2 are
    cleared by a second diagonal conjugation with potentials from
    Bellman-Ford.  The characteristic polynomial is unchanged.
    """
    g = B.graph
    order = B.order
    m = g.m
    factor = B.params.get("factor", 1)
    _, parent = bfs_order(g, order[0])
    # D_v = 2^k * prod x_i^(e_i / 2)
    k = {order[0]: 0}
    e = {order[0]: (0,) * m}
    for v in bfs_sorted(order, parent):
        if parent[v] is None:
            continue
        p, edge = parent[v]
        i, j = edge.marking.pair
        ev = list(e[p])
        ev[i - 1] += 1
        ev[j - 1] += 1
        k[v] = k[p] + 1
        e[v] = tuple(ev)
    pos = {v: n for n, v in enumerate(order)}
    # entry (a, b) = sign * 2^w2 * prod x^w
    entries = {}
    for edge in g.edges:
        i, j = edge.marking.pair
        for a, b in ((edge.u, edge.v), (edge.v, edge.u)):
            half = [e[a][h] - e[b][h] for h in range(m)]
            half[i - 1] += 1
            half[j - 1] += 1
            if any(x % 2 for x in half):
                raise ValueError("conjugated entry keeps a square root")
            entries[(pos[a], pos[b])] = (g.sign(b) * factor, 1 + k[a] - k[b],
                                         tuple(x // 2 for x in half))
    nodes = list(range(len(order)))
    pot2 = _bellman_ford(nodes, [(a, b, w2) for (a, b), (_, w2, _) in entries.items()])
    potx = [_bellman_ford(nodes, [(a, b, w[h]) for (a, b), (_, _, w) in entries.items()])
            for h in range(m)]
    d = len(order)
    rows = [[Polynomial.const(0)] * d for _ in range(d)]
    for n in range(d):
        rows[n][n] = B.mat[n, n]
    for (a, b), (sign, w2, w) in entries.items():
        p2 = w2 + pot2[a] - pot2[b]
        term = Polynomial.const(sign * 2 ** p2)
        for h in range(m):
            ph = w[h] + potx[h][a] - potx[h][b]
            if ph:
                term = term * xi(h + 1) ** ph
        rows[a][b] = term
    return BlockMatrix(g, DESQRT, PolyMatrix(rows), order, params=dict(B.params))


def bfs_sorted(order, parent):
    """Vertices sorted so that every parent precedes its children."""
    depth = {}

    def dep(v):
        if v not in depth:
            depth[v] = 0 if parent[v] is None else dep(parent[v][0]) + 1
        return depth[v]
    return sorted(order, key=lambda v: (dep(v), order.index(v)))


# --- shifted blocks ----------------------------------------------------------------

def build_combinatorial(B, nu, conjugate=False):
    """C_A - (xi, nu) I, or its negative for the conjugate block."""
    shift = linear_form(nu)
    mat = B.mat.shift(-shift)
    if conjugate:
        mat = mat.scale(-1)
    params = dict(B.params, nu=list(nu), conjugate=conjugate)
    return BlockMatrix(B.graph, C_COMB, mat, B.order, core=B.mat, params=params)


def build_adN(B, sites, x, nu):
    """-i ad(N) on a combinatorial block:
    (|x|^2 + sum nu_i |v_i|^2 + 4 (sum nu_i + 1) sum x_j) I + 2 C_comb."""
    comb = build_combinatorial(B, nu)
    m = max(B.graph.m, sites.m)
    const = Fraction(dot(x, x)) + sum(c * dot(v, v) for c, v in zip(nu, sites.sites))
    const = _as_int(const)
    base = Polynomial.const(const) + xi_sum(m) * (4 * (sum(nu) + 1))
    mat = comb.mat.scale(2).shift(base)
    return BlockMatrix(B.graph, ADN, mat, B.order, base=base, core=comb.mat,
                       params=dict(comb.params, x=[str(c) for c in x]))


def _as_int(q):
    q = Fraction(q)
    if q.denominator != 1:
        raise ValueError(f"{q} is not an integer")
    return q.numerator


def build_Mprime(g, sites, x=None, root=None):
    """M'_A = (|x(A)|^2 + 4 sum x_j) I + 2 C_A for a block realized by the sites.

    g may be abstract (it is embedded from its root); x defaults to the
    realization found by solve_realization.
    """
    if root is None:
        root = g.root if g.root is not None else g.vertices[0]
    if x is None:
        r = solve_realization(g, sites, root)
        if isinstance(r, Underdetermined):
            r = r.witness
        if not isinstance(r, Realization):
            raise NoRealization("the sites do not realize this graph")
        x = r.x
    if g.is_embedded():
        emb = g
        image = {v: v for v in g.vertices}
    else:
        image = embed_universal(g, root)
        from .graphs import embed_graph
        emb = embed_graph(g, root)
    m = max(g.m, sites.m)
    CA = build_CA(emb, root=image[root])
    xx = _as_int(dot(x, x))
    base = Polynomial.const(xx) + xi_sum(m) * 4
    mat = CA.mat.scale(2).shift(base)
    # telescoping form of the diagonal: |x|^2 + 2 sigma(a) (xi, L(a)) + 4 sum x_j
    for n, v in enumerate(CA.order):
        L = tuple(-c for c in v)
        sigma = universal_sign(v) * universal_sign(image[root])
        expect = base + linear_form(L) * (2 * sigma)
        if image[root] == tuple([0] * len(v)) and mat[n, n] != expect:
            raise AssertionError("diagonal of M' disagrees with the telescoping formula")
    return BlockMatrix(emb, MPRIME, mat, CA.order, base=base, core=CA.mat,
                       params={"x": [str(c) for c in x]})


def homogeneous_in_xi(chi, var=None):
    """Coefficient of t^(d-k) is homogeneous of degree k in the x variables."""
    from .polycore import T
    var = var or T
    d = chi.degree(var)
    for e, c in chi.coefficients(var).items():
        k = d - e
        for mono, _ in c.items():
            if sum(p for v, p in mono if v.kind == Xi(1).kind) != k:
                return False
    return True


def spectrum_shift(B):
    """Base |x(A)|^2 + 4 sum x_j (symbol R for |x(A)|^2 when no sites are
    attached) and the characteristic polynomials of 2 C_A and C_A."""
    core = B.core if B.core is not None else B.mat
    if B.kind in (MPRIME, ADN):
        base = B.base
    else:
        base = Polynomial.var(Symbol("R")) + xi_sum(B.graph.m) * 4
    c_poly = char_poly(core)
    eigen_poly = char_poly(core.scale(2))
    if not homogeneous_in_xi(c_poly) and B.kind in (C_A, MPRIME):
        raise AssertionError("characteristic polynomial is not homogeneous in xi")
    return SpectrumShift(base, eigen_poly, c_poly)


# --- blocks given by signed points --------------------------------------------------

def signed_edge(p, q):
    """Edge between signed points (a, sigma) and (b, tau) as (color, i, j), or None.

    Black: equal signs and b - a = e_i - e_j.  Red: opposite signs and
    a + b = -e_i - e_j.  Coordinates are not required to satisfy eta = 0, -2,
    so translated and sign-changed blocks are covered.
    """
    (a, s), (b, t) = p, q
    if s == t:
        d = [y - x for x, y in zip(a, b)]
        plus = [k for k, x in enumerate(d) if x == 1]
        minus = [k for k, x in enumerate(d) if x == -1]
        if len(plus) == 1 and len(minus) == 1 and sum(map(abs, d)) == 2:
            return ("black", plus[0] + 1, minus[0] + 1)
        return None
    d = [x + y for x, y in zip(a, b)]
    idx = [k for k, x in enumerate(d) if x == -1]
    if len(idx) == 2 and sum(map(abs, d)) == 2:
        return ("red", idx[0] + 1, idx[1] + 1)
    return None


def signed_block_matrix(points):
    """C for a list of signed points, with edges forced by the universal rules."""
    d = len(points)
    rows = [[Polynomial.const(0)] * d for _ in range(d)]
    for k, (a, s) in enumerate(points):
        rows[k][k] = linear_form(a) * (-s)
    for k in range(d):
        for l in range(k + 1, d):
            e = signed_edge(points[k], points[l])
            if e is None:
                continue
            _, i, j = e
            r = sq(min(i, j), max(i, j))
            rows[k][l] = r * (2 * points[l][1])
            rows[l][k] = r * (2 * points[k][1])
    return PolyMatrix(rows)


def signed_points(g):
    """(vector, sign) pairs of an embedded graph."""
    return [(v, g.sign(v)) for v in g.vertices]
