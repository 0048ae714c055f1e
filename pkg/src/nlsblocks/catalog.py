"""Named small blocks used as fixtures, demos and regression data.

Chains a - b - c - d carry pairwise disjoint markings (1,2), (3,4), (5,6),
so after x_i -> y every off-diagonal entry becomes +-2y and the diagonal
depends only on the signs.
"""

from .graphs import BLACK, RED, ColoredMarkedGraph, embed_graph
from .polycore import (SQRT, XI, T, PolyMatrix, Polynomial, Symbol, char_poly,
                       specialize, xi, sq, t)

Y = Symbol("y")

# colors of the three chain edges a-b, b-c, c-d
CHAIN_TYPES = {
    "e": (BLACK, BLACK, BLACK),
    "f": (BLACK, BLACK, RED),
    "g": (BLACK, RED, RED),
    "h": (RED, BLACK, RED),
    "i": (BLACK, RED, BLACK),
    "j": (RED, RED, RED),
}

# characteristic polynomials after x_i -> y (type e: see chain_y_poly)
CHAIN_POLYS = {
    "e": "t^4 - 3*t^2*y^2 + y^4",
    "f": "t^4 + 2*t^3*y - 4*t^2*y^2 - 16*t*y^3 - 16*y^4",
    "g": "t^4 + 2*t^3*y + 4*t^2*y^2 - 8*t*y^3 - 16*y^4",
    "h": "t^4 + 2*t^3*y + 4*t^2*y^2 + 8*t*y^3 + 16*y^4",
    "i": "t^4 + 4*t^3*y - 8*t*y^3",
    "j": "t^4 + 4*t^3*y + 16*t^2*y^2 + 24*t*y^3 + 16*y^4",
}

CHAIN_FACTORS = {
    "e": ["t^2 - t*y - y^2", "t^2 + t*y - y^2"],
    "f": ["t + 2*y", "t^3 - 4*t*y^2 - 8*y^3"],
    "i": ["t", "t + 2*y", "t^2 + 2*t*y - 4*y^2"],
}


def chain(kind):
    """Embedded chain block of the given type, rooted at a = 0."""
    colors = CHAIN_TYPES[kind]
    names = ["a", "b", "c", "d"]
    signs = {"a": 1}
    for u, v, c in zip(names, names[1:], colors):
        signs[v] = signs[u] * (-1 if c == RED else 1)
    edges = [(u, v, c, (2 * k + 1, 2 * k + 2))
             for k, (u, v, c) in enumerate(zip(names, names[1:], colors))]
    g = ColoredMarkedGraph.build(signs, edges, root="a", m=6)
    return embed_graph(g, "a")


def y_specialize(p):
    """x_i -> y and s_ij -> y."""
    bind = {}
    for v in p.variables():
        if v.kind == XI or v.kind == SQRT:
            bind[v] = Polynomial.var(Y)
    return specialize(p, bind)


def chain_y_poly(kind):
    """Characteristic polynomial of a chain with every x_i set to y.

    Type e is rescaled, t -> 2t and division by 16, which is the same as
    setting x_i = y / sqrt(2)."""
    from .blocks import build_CA
    p = y_specialize(char_poly(build_CA(chain(kind)).mat))
    if kind != "e":
        return p
    tv = t()
    scaled = Polynomial.const(0)
    for k, c in p.coefficients(T).items():
        scaled = scaled + c * (tv * 2) ** k
    q, r = _divide_const(scaled, 16)
    assert not r
    return q


def _divide_const(p, c):
    terms = {}
    rem = False
    for mono, k in p.items():
        if k % c:
            rem = True
        terms[mono] = k // c
    return Polynomial(terms), rem


# --- blocks with three site indices ---------------------------------------------

def _f_chain(first, second):
    g = ColoredMarkedGraph.build(
        {"a": 1, "b": 1, "c": 1, "d": -1},
        [("a", "b", BLACK, first), ("b", "c", BLACK, second), ("c", "d", RED, (1, 2))],
        root="a", m=3)
    return embed_graph(g, "a")


def f2_graph():
    """Chain a - b - c = d with markings (3,1), (3,2), (1,2) and d negative.

    Its universal completion has one more edge, a red (1,3) between b and d."""
    return _f_chain((3, 1), (3, 2))


def f3_graph():
    """Chain a - b - c = d with markings (1,3), (2,3), (1,2) and d negative."""
    return _f_chain((1, 3), (2, 3))


def _display(rows):
    """tI - C as printed, entries built from t, x_i and s_ij."""
    return PolyMatrix(rows)


def f2_display():
    s12, s13, s23 = sq(1, 2), sq(1, 3), sq(2, 3)
    x1, x2, x3 = xi(1), xi(2), xi(3)
    tt = t()
    return _display([
        [tt, -2 * s13, 0, 0],
        [-2 * s13, tt - x1 + x3, -2 * s23, 0],
        [0, -2 * s23, tt - x1 - x2 + 2 * x3, 2 * s12],
        [0, 0, -2 * s12, tt + 2 * x3],
    ])


def f3_display():
    s12, s13, s23 = sq(1, 2), sq(1, 3), sq(2, 3)
    x1, x2, x3 = xi(1), xi(2), xi(3)
    tt = t()
    return _display([
        [tt, -2 * s13, 0, 0],
        [-2 * s13, tt - x3 + x1, -2 * s23, 0],
        [0, -2 * s23, tt - 2 * x3 + x1 + x2, 2 * s12],
        [0, 0, -2 * s12, tt + 2 * x3],
    ])


def star_bi():
    """Star at b: a negative joined by red (1,2), c and d joined by black (3,2), (3,1)."""
    g = ColoredMarkedGraph.build(
        {"b": 1, "a": -1, "c": 1, "d": 1},
        [("b", "a", RED, (1, 2)), ("b", "c", BLACK, (3, 2)), ("b", "d", BLACK, (3, 1))],
        root="b", m=3)
    return embed_graph(g, "b")


def star_bi_display():
    s12, s13, s23 = sq(1, 2), sq(1, 3), sq(2, 3)
    x1, x2, x3 = xi(1), xi(2), xi(3)
    tt = t()
    return _display([
        [tt + x2 + x1, -2 * s12, 0, 0],
        [2 * s12, tt, -2 * s23, -2 * s13],
        [0, -2 * s23, tt - x2 + x3, 0],
        [0, -2 * s13, 0, tt + x3 - x1],
    ])


STAR_BI_DET = ("4*x1^2*x2^2 + 4*x1^2*x2*x3 + 4*x1*x2^2*x3 - 4*x1^2*x3^2"
               " - 4*x1*x2*x3^2 - 4*x2^2*x3^2")


def circuit(color):
    """Triangle with markings (1,2), (2,3), (3,1); black or with two red edges."""
    if color == BLACK:
        g = ColoredMarkedGraph.build(
            {"a": 1, "b": 1, "c": 1},
            [("a", "b", BLACK, (1, 2)), ("b", "c", BLACK, (2, 3)), ("c", "a", BLACK, (3, 1))],
            root="a", m=3)
    else:
        g = ColoredMarkedGraph.build(
            {"a": 1, "b": -1, "c": 1},
            [("a", "b", RED, (1, 2)), ("b", "c", RED, (2, 3)), ("c", "a", BLACK, (3, 1))],
            root="a", m=3)
    return embed_graph(g, "a")


def edge(color):
    """The 2-vertex block marked (1,2) rooted at 0."""
    if color == BLACK:
        return ColoredMarkedGraph.from_points([(0, 0), (1, -1)])
    return ColoredMarkedGraph.from_points([(0, 0), (-1, -1)])


EDGE_POLYS = {BLACK: "t^2 + t*x1 - t*x2 - 4*x1*x2", RED: "t^2 + t*x1 + t*x2 + 4*x1*x2"}
