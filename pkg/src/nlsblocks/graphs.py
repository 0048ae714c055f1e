"""Colored marked graphs and the universal graph on the augmented lattice.

A vertex of the universal graph is an integer vector ``a`` with coordinate sum
``eta(a)`` equal to 0 (sign +) or -2 (sign -).  Two vertices are joined by

* a black edge marked (i, j), oriented a -> b, when b - a = e_i - e_j;
* a red edge marked (i, j), i < j, when a + b + e_i + e_j = 0.

Abstract graphs carry explicit signs and arbitrary hashable vertex ids; an
embedded graph uses the integer vectors themselves as ids.  Site indices are
1-based throughout, so ``e_i`` is position ``i - 1`` of a vector.
"""

from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations

from . import lattice
from .certificate import FAIL, PASS, Certificate
from .errors import Disconnected, DuplicateL, IncompatibleGraph, NotAPath

BLACK, RED = "black", "red"


@dataclass(frozen=True, order=True)
class Marking:
    i: int
    j: int
    oriented: bool = True

    def __post_init__(self):
        if self.i == self.j or min(self.i, self.j) < 1:
            raise ValueError(f"invalid marking ({self.i}, {self.j})")
        if not self.oriented and self.i > self.j:
            a, b = self.j, self.i
            object.__setattr__(self, "i", a)
            object.__setattr__(self, "j", b)

    @property
    def pair(self):
        return (min(self.i, self.j), max(self.i, self.j))

    def reversed(self):
        return Marking(self.j, self.i, True) if self.oriented else self


@dataclass(frozen=True)
class Edge:
    u: object
    v: object
    color: str
    marking: Marking

    def __post_init__(self):
        if self.color not in (BLACK, RED):
            raise ValueError(f"unknown color {self.color!r}")
        if (self.color == BLACK) != self.marking.oriented:
            raise ValueError("black edges carry oriented markings, red ones unoriented")

    @property
    def sign(self):
        return -1 if self.color == RED else 1

    def other(self, x):
        return self.v if x == self.u else self.u

    def marking_from(self, x):
        """Marking as read when traversing the edge starting at x."""
        return self.marking if x == self.u else self.marking.reversed()

    def key(self):
        """Orientation-independent identity of the edge."""
        if self.color == RED:
            ends = frozenset((self.u, self.v))
            return (ends, RED, self.marking.pair)
        m = self.marking
        if m.i < m.j:
            return (self.u, self.v, BLACK, (m.i, m.j))
        return (self.v, self.u, BLACK, (m.j, m.i))


@dataclass(frozen=True)
class PathData:
    sign: int
    L: tuple


def unit(i, m):
    v = [0] * m
    v[i - 1] = 1
    return tuple(v)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a):
    return tuple(c * x for x in a)


def eta(a):
    return sum(a)


def universal_sign(a):
    """+1 for eta = 0, -1 for eta = -2, None otherwise."""
    return {0: 1, -2: -1}.get(eta(a))


def edge_L(color, marking, m):
    """L of a single edge read along a marking (i, j)."""
    ei, ej = unit(marking.i, m), unit(marking.j, m)
    return vsub(ej, ei) if color == BLACK else vadd(ej, ei)


def edge_between(a, b):
    """The universal edge from a to b, as (color, Marking), or None."""
    sa, sb = universal_sign(a), universal_sign(b)
    if sa is None or sb is None or len(a) != len(b):
        return None
    if sa == sb:
        d = vsub(b, a)
        plus = [k for k, x in enumerate(d) if x == 1]
        minus = [k for k, x in enumerate(d) if x == -1]
        if len(plus) == 1 and len(minus) == 1 and sum(map(abs, d)) == 2:
            return BLACK, Marking(plus[0] + 1, minus[0] + 1, True)
        return None
    s = vadd(a, b)
    minus = [k for k, x in enumerate(s) if x == -1]
    if len(minus) == 2 and sum(map(abs, s)) == 2:
        return RED, Marking(minus[0] + 1, minus[1] + 1, False)
    return None


class ColoredMarkedGraph:
    """Connected-or-not graph with signed vertices and colored marked edges."""

    def __init__(self, vertices, edges, root=None, m=None):
        self.vertices = tuple(v for v, _ in vertices)
        self._sign = {}
        for v, s in vertices:
            if v in self._sign:
                raise ValueError(f"duplicate vertex {v!r}")
            if s not in (1, -1, None):
                raise ValueError(f"sign of {v!r} must be +1, -1 or None")
            self._sign[v] = s
        self._adj = {v: [] for v in self.vertices}
        seen = set()
        for e in edges:
            if e.u not in self._sign or e.v not in self._sign or e.u == e.v:
                raise ValueError(f"edge {e} has invalid endpoints")
            pair = frozenset((e.u, e.v))
            if pair in seen:
                raise ValueError(f"repeated edge between {e.u!r} and {e.v!r}")
            seen.add(pair)
            su, sv = self._sign[e.u], self._sign[e.v]
            if su is not None and sv is not None and (su == sv) != (e.color == BLACK):
                raise ValueError(f"edge {e} violates the sign rule for its color")
            self._adj[e.u].append((e.v, e))
            self._adj[e.v].append((e.u, e))
        self.edges = tuple(edges)
        if root is not None and root not in self._sign:
            raise ValueError(f"root {root!r} is not a vertex")
        self.root = root
        used = max((max(e.marking.i, e.marking.j) for e in self.edges), default=1)
        if m is None:
            m = used
        if m < used:
            raise ValueError("ambient index count smaller than the markings")
        self.m = m

    # -- construction helpers --

    @classmethod
    def build(cls, signs, edges, root=None, m=None):
        """signs: {id: +1/-1} or a list of ids (signs left undetermined);
        edges: iterable of (u, v, color, (i, j))."""
        es = [Edge(u, v, color, Marking(i, j, color == BLACK))
              for u, v, color, (i, j) in edges]
        if not isinstance(signs, dict):
            signs = {v: None for v in signs}
        return cls(list(signs.items()), es, root=root, m=m)

    @classmethod
    def from_points(cls, points, root=None):
        """The full subgraph of the universal graph on a set of vectors."""
        pts = sorted({tuple(p) for p in points})
        if not pts:
            raise ValueError("empty vertex set")
        verts = []
        for p in pts:
            s = universal_sign(p)
            if s is None:
                raise ValueError(f"{p} is not a universal vertex")
            verts.append((p, s))
        edges = []
        for a, b in combinations(pts, 2):
            e = edge_between(a, b)
            if e is not None:
                edges.append(Edge(a, b, e[0], e[1]))
        if root is None and tuple([0] * len(pts[0])) in pts:
            root = tuple([0] * len(pts[0]))
        return cls(verts, edges, root=root, m=len(pts[0]))

    # -- queries --

    def sign(self, v):
        return self._sign[v]

    def neighbors(self, v):
        return list(self._adj[v])

    def edge(self, u, v):
        for w, e in self._adj[u]:
            if w == v:
                return e
        return None

    def __len__(self):
        return len(self.vertices)

    def is_embedded(self):
        return all(isinstance(v, tuple) and len(v) == self.m
                   and universal_sign(v) == self._sign[v] for v in self.vertices)

    def is_connected(self):
        if not self.vertices:
            return True
        return len(bfs_order(self, self.vertices[0])[0]) == len(self.vertices)

    def used_indices(self):
        return sorted({k for e in self.edges for k in (e.marking.i, e.marking.j)})

    def markings(self):
        return [(e.color, e.marking) for e in self.edges]

    def with_root(self, root):
        return ColoredMarkedGraph([(v, self._sign[v]) for v in self.vertices],
                                  self.edges, root=root, m=self.m)

    def __eq__(self, other):
        if not isinstance(other, ColoredMarkedGraph):
            return NotImplemented
        return (self._sign == other._sign
                and {e.key() for e in self.edges} == {e.key() for e in other.edges})

    def __hash__(self):
        return hash((frozenset(self._sign.items()), frozenset(e.key() for e in self.edges)))

    def __repr__(self):
        return f"ColoredMarkedGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # -- serialization --

    def to_dict(self):
        def enc(v):
            return list(v) if isinstance(v, tuple) else v
        return {
            "vertices": [{"id": enc(v), "sign": {1: "+", -1: "-", None: None}[self._sign[v]]}
                         for v in self.vertices],
            "edges": [{"from": enc(e.u), "to": enc(e.v), "color": e.color,
                       "marking": [e.marking.i, e.marking.j]} for e in self.edges],
            "root": enc(self.root) if self.root is not None else None,
            "m": self.m,
        }

    @classmethod
    def from_dict(cls, data):
        def dec(v):
            return tuple(v) if isinstance(v, list) else v
        try:
            signs = {"+": 1, 1: 1, "-": -1, -1: -1, None: None}
            verts = [(dec(v["id"]), signs[v.get("sign")]) for v in data["vertices"]]
            edges = [Edge(dec(e["from"]), dec(e["to"]), e["color"],
                          Marking(e["marking"][0], e["marking"][1], e["color"] == BLACK))
                     for e in data["edges"]]
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed graph JSON: {exc}") from exc
        root = data.get("root")
        return cls(verts, edges, root=dec(root) if root is not None else None,
                   m=data.get("m"))


# --- paths --------------------------------------------------------------------------

def path_data(g, path):
    """Sign and L of a path given as a list of vertex ids."""
    if not path or any(v not in g._sign for v in path):
        raise NotAPath("path has unknown vertices")
    sign, L = 1, tuple([0] * g.m)
    for u, v in zip(path, path[1:]):
        e = g.edge(u, v)
        if e is None:
            raise NotAPath(f"{u!r} and {v!r} are not adjacent")
        L = vadd(edge_L(e.color, e.marking_from(u), g.m), vscale(e.sign, L))
        sign *= e.sign
    return PathData(sign, L)


def reverse_path_data(pd):
    return PathData(pd.sign, vscale(-pd.sign, pd.L))


def compose_path_data(q, p):
    """Data of q after p."""
    return PathData(q.sign * p.sign, vadd(q.L, vscale(q.sign, p.L)))


def bfs_order(g, root):
    """BFS order from root, with the tree parent of every reached vertex."""
    order, parent = [root], {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w, e in sorted(g._adj[u], key=lambda we: repr(we[0])):
            if w not in parent:
                parent[w] = (u, e)
                order.append(w)
                queue.append(w)
    return order, parent


def _tree_labels(g, root):
    order, parent = bfs_order(g, root)
    if len(order) != len(g.vertices):
        raise Disconnected("graph is not connected")
    labels = {root: PathData(1, tuple([0] * g.m))}
    for v in order[1:]:
        u, e = parent[v]
        pu = labels[u]
        labels[v] = PathData(pu.sign * e.sign,
                             vadd(edge_L(e.color, e.marking_from(u), g.m), vscale(e.sign, pu.L)))
    return labels, parent


def _tree_path(parent, v):
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]][0])
    return path[::-1]


def check_compatible(g):
    """PASS iff every fundamental circuit has sign + and L = 0."""
    if not g.vertices:
        raise Disconnected("empty graph")
    root = g.root if g.root is not None else g.vertices[0]
    labels, parent = _tree_labels(g, root)
    tree_edges = {id(parent[v][1]) for v in parent if parent[v] is not None}
    for e in g.edges:
        if id(e) in tree_edges:
            continue
        pu = labels[e.u]
        via = PathData(pu.sign * e.sign,
                       vadd(edge_L(e.color, e.marking, g.m), vscale(e.sign, pu.L)))
        if via != labels[e.v]:
            circuit = _tree_path(parent, e.u) + _tree_path(parent, e.v)[::-1]
            data = path_data(g, circuit)
            return Certificate(FAIL, "Compatibility", {
                "circuit": [_enc(v) for v in circuit],
                "sign": data.sign, "L": list(data.L)})
    return Certificate(PASS, "Compatibility", {"root": _enc(root), "edges": len(g.edges)})


def _enc(v):
    return list(v) if isinstance(v, tuple) else v


def vertex_labels(g, root=None):
    """(sigma_r(a), L_r(a)) for every vertex; raises IncompatibleGraph."""
    root = root if root is not None else (g.root if g.root is not None else g.vertices[0])
    cert = check_compatible(g.with_root(root))
    if not cert.passed:
        raise IncompatibleGraph(f"graph is not compatible: {cert.evidence}")
    return _tree_labels(g, root)[0]


def embed_universal(g, root=None):
    """Map each vertex to -L_r(vertex) in the universal graph."""
    labels = vertex_labels(g, root)
    image = {v: vscale(-1, pd.L) for v, pd in labels.items()}
    if len(set(image.values())) != len(image):
        raise DuplicateL("two vertices share the same L")
    return image


def embed_graph(g, root=None):
    """The image of g in the universal graph, keeping only g's edges."""
    image = embed_universal(g, root)
    edges = []
    for e in g.edges:
        a, b = image[e.u], image[e.v]
        found = edge_between(a, b)
        if found is None or found[0] != e.color:
            raise IncompatibleGraph(f"edge {e} is not preserved by the embedding")
        edges.append(Edge(a, b, found[0], found[1]))
    verts = [(image[v], universal_sign(image[v])) for v in g.vertices]
    return ColoredMarkedGraph(verts, edges, root=tuple([0] * g.m), m=g.m)


def completion(g, root=None):
    """Full universal subgraph on the embedded vertex set."""
    if g.is_embedded():
        return ColoredMarkedGraph.from_points(g.vertices)
    return ColoredMarkedGraph.from_points(embed_universal(g, root).values())


def is_complete(g):
    return len(completion(g).edges) == len(g.edges)


def ensure_embedded(g):
    if g.is_embedded():
        return g
    return embed_graph(g)


def graph_rank(g, root=None):
    labels = vertex_labels(g, root)
    return lattice.rank([pd.L for pd in labels.values()])


rank = graph_rank


def reroot_points(points, r):
    """Re-root a signed point set so that r becomes (0, +)."""
    sr = universal_sign(r)
    out = []
    for b in points:
        s = universal_sign(b) * sr
        out.append(vsub(b, vscale(s, r)))
    return out


def translate_points(points, c):
    """tau_c: (b, s) -> (b + s c, s); needs eta(c) = 0 to stay universal."""
    return [vadd(b, vscale(universal_sign(b), c)) for b in points]


def sign_change_points(points, c):
    """Sign change followed by tau_c; needs eta(c) = 2 to stay universal."""
    if eta(c) != 2:
        raise ValueError("sign change needs a translation with eta(c) = 2")
    return [vsub(b, vscale(universal_sign(b), c)) for b in points]


def reroot(g, r):
    g = ensure_embedded(g)
    return ColoredMarkedGraph.from_points(reroot_points(g.vertices, r))


def permute_indices(points, perm):
    """Apply a permutation (dict old index -> new index, 1-based) to the coordinates."""
    m = len(points[0])
    out = []
    for p in points:
        q = [0] * m
        for k in range(m):
            q[perm.get(k + 1, k + 1) - 1] = p[k]
        out.append(tuple(q))
    return out


def canonical_form(g):
    """Key invariant under index permutations, translations and sign change.

    For every ordering of the vertices (the first one becoming the root) the
    nonzero coordinate columns are sorted; the key is the smallest result.
    """
    g = ensure_embedded(g)
    return canonical_key(g.vertices)


def canonical_key(points):
    points = [tuple(p) for p in points]
    best = None
    for r in points:
        moved = reroot_points(points, r)
        rest = [p for p in moved if any(p)]
        for order in permutations(rest):
            rows = [tuple([0] * len(points[0]))] + list(order)
            cols = sorted(c for c in zip(*rows) if any(c))
            key = tuple(cols)
            if best is None or key < best:
                best = key
    return (len(points), best)


# --- enumeration ------------------------------------------------------------------------

def _universal_neighbors(a, indices):
    m = len(a)
    for i in indices:
        for j in indices:
            if i != j:
                yield vadd(a, vsub(unit(i, m), unit(j, m)))
    for i, j in combinations(indices, 2):
        yield vsub(vscale(-1, a), vadd(unit(i, m), unit(j, m)))


def adjacency_conflict(points):
    """True if some vertex meets a black and a red edge with the same index pair."""
    pts = list(points)
    black = {p: set() for p in pts}
    red = {p: set() for p in pts}
    for a, b in combinations(pts, 2):
        e = edge_between(a, b)
        if e is None:
            continue
        target = black if e[0] == BLACK else red
        target[a].add(e[1].pair)
        target[b].add(e[1].pair)
    return any(black[p] & red[p] for p in pts)


def _connected(points):
    pts = list(points)
    seen = {pts[0]}
    stack = [pts[0]]
    while stack:
        a = stack.pop()
        for b in pts:
            if b not in seen and edge_between(a, b) is not None:
                seen.add(b)
                stack.append(b)
    return len(seen) == len(pts)


def is_nondegenerate(points):
    """0 in the set and the other vectors linearly independent."""
    zero = tuple([0] * len(next(iter(points))))
    rest = [p for p in points if p != zero]
    return zero in points and lattice.rank(rest) == len(rest)


def enumerate_blocks(n, m, max_vertices=None, index_pruning=True):
    """All connected complete non-degenerate blocks with at most n + 1 vertices.

    Growth starts at the root 0 and adds one universal neighbor at a time.
    Non-degeneracy and the adjacency restriction are hereditary under removal
    of a leaf, so pruning at every level loses nothing.  With index_pruning,
    a new vertex may introduce only the two smallest unused indices, which is
    harmless because results are deduplicated up to index permutation.
    """
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 and m >= 2")
    limit = n + 1 if max_vertices is None else min(max_vertices, n + 1)
    zero = tuple([0] * m)
    level = {canonical_key([zero]): (zero,)}
    found = dict(level)
    for _ in range(limit - 1):
        nxt = {}
        for pts in level.values():
            used = sorted({k + 1 for p in pts for k, x in enumerate(p) if x})
            if index_pruning:
                fresh = [k for k in range(1, m + 1) if k not in used][:2]
                indices = used + fresh
            else:
                indices = list(range(1, m + 1))
            pset = set(pts)
            for a in pts:
                for b in _universal_neighbors(a, indices):
                    if b in pset:
                        continue
                    cand = pset | {b}
                    if not is_nondegenerate(cand) or adjacency_conflict(cand):
                        continue
                    key = canonical_key(cand)
                    if key not in nxt:
                        nxt[key] = tuple(sorted(cand))
        level = nxt
        found.update(nxt)
    return [ColoredMarkedGraph.from_points(pts) for _, pts in sorted(found.items())]


def enumerate_connected(max_vertices, m, index_pruning=True):
    """Point sets of all connected complete subgraphs of the universal graph
    through 0 with at most max_vertices vertices, up to canonical_key.

    Unlike enumerate_blocks there is no non-degeneracy filter, so degenerate
    graphs (more vertices than rank + 1) are produced as well.  Returns a
    list of sorted point tuples.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    zero = tuple([0] * m)
    level = {canonical_key([zero]): (zero,)}
    found = dict(level)
    for _ in range(max_vertices - 1):
        nxt = {}
        for pts in level.values():
            used = sorted({k + 1 for p in pts for k, x in enumerate(p) if x})
            if index_pruning:
                indices = used + [k for k in range(1, m + 1) if k not in used][:2]
            else:
                indices = list(range(1, m + 1))
            pset = set(pts)
            for a in pts:
                for b in _universal_neighbors(a, indices):
                    if b in pset:
                        continue
                    cand = pset | {b}
                    if adjacency_conflict(cand):
                        continue
                    key = canonical_key(cand)
                    if key not in nxt:
                        nxt[key] = tuple(sorted(cand))
        level = nxt
        found.update(nxt)
    return [pts for _, pts in sorted(found.items())]


def is_degenerate(points):
    """More vertices than rank + 1."""
    zero = tuple([0] * len(next(iter(points))))
    rest = [p for p in points if p != zero]
    return lattice.rank(rest) < len(rest) if rest else False


def enumerate_degenerate(max_vertices, m, index_pruning=True):
    """Degenerate connected complete graphs through 0, up to symmetry."""
    return [ColoredMarkedGraph.from_points(p)
            for p in enumerate_connected(max_vertices, m, index_pruning) if is_degenerate(p)]


def special_component_pattern(g):
    """Two vertices joined by both colors, which only happens in the special component."""
    pairs = {}
    for e in g.edges:
        pairs.setdefault(frozenset((e.u, e.v)), set()).add(e.color)
    return any(len(c) == 2 for c in pairs.values())


# --- encoding graphs -------------------------------------------------------------------

@dataclass(frozen=True)
class EncodingGraph:
    black: tuple
    red: tuple
    type: str


def encoding_graph(g):
    """Multigraph of markings on the index set and its type label.

    Labels: "A" (a pair both black and red), "BI"/"BII" (odd circuit with one
    or three red pairs), "0".."3" (three markings forming a forest: disjoint
    edges, path plus edge, star, path), "circuit" for other cyclic patterns
    and "other" for forests of a different size.
    """
    black = sorted({e.marking.pair for e in g.edges if e.color == BLACK})
    red = sorted({e.marking.pair for e in g.edges if e.color == RED})
    both = set(black) & set(red)
    if both:
        return EncodingGraph(tuple(black), tuple(red), "A")
    pairs = set(black) | set(red)
    for a, b, c in combinations(sorted({k for p in pairs for k in p}), 3):
        tri = {(a, b), (b, c), (a, c)}
        if tri <= pairs:
            reds = len(tri & set(red))
            label = {1: "BI", 3: "BII"}.get(reds, "circuit")
            return EncodingGraph(tuple(black), tuple(red), label)
    nodes = {k for p in pairs for k in p}
    if len(nodes) - _components(nodes, pairs) != len(pairs):
        return EncodingGraph(tuple(black), tuple(red), "circuit")
    if len(pairs) != 3:
        return EncodingGraph(tuple(black), tuple(red), "other")
    degrees = sorted((sum(1 for p in pairs if k in p) for k in nodes), reverse=True)
    comps = _components(nodes, pairs)
    if comps == 3:
        label = "0"
    elif comps == 2:
        label = "1"
    elif degrees[0] == 3:
        label = "2"
    else:
        label = "3"
    return EncodingGraph(tuple(black), tuple(red), label)


def _components(nodes, pairs):
    parent = {k: k for k in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    return len({find(k) for k in nodes})
