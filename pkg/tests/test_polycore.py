import itertools

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import given, strategies as st

from nlsblocks.errors import (DegreeTooLarge, DegreeZero, InconsistentBinding, NotMonic,
                              ParseError, VariableCollision)
from nlsblocks.polycore import (T, PolyMatrix, Polynomial, Sqrt, Symbol, Xi, bezoutiante,
                                char_poly, det_bareiss, determinant, discriminant,
                                expand_factors, factor_univariate, matrix_det, reduce_sqrt,
                                resultant, specialize, sq, t, xi)
from nlsblocks import univariate as up

from conftest import to_sympy

P = Polynomial.parse
Y = Symbol("y")

monomial = st.tuples(st.integers(-5, 5), st.integers(0, 2), st.integers(0, 2),
                     st.integers(0, 2), st.integers(0, 3))


@st.composite
def polys(draw, max_terms=4):
    out = Polynomial.const(0)
    for c, a, b, d, e in draw(st.lists(monomial, max_size=max_terms)):
        out = out + c * t() ** a * xi(1) ** b * xi(2) ** d * sq(1, 2) ** e
    return out


# --- variables and canonical text ---

def test_sqrt_pair_is_unordered():
    assert Sqrt(1, 2) == Sqrt(2, 1)
    assert str(Polynomial.var(Sqrt(2, 1))) == "s1_2"


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        P("t +* 2")


@given(polys())
def test_parse_str_roundtrip(p):
    assert P(str(p)) == p
    assert str(P(str(p))) == str(p)


# --- reduce_sqrt ---

def test_reduce_sqrt_examples():
    s = sq(1, 2)
    assert reduce_sqrt(s ** 2) == xi(1) * xi(2)
    assert reduce_sqrt(s ** 3) == xi(1) * xi(2) * s
    assert reduce_sqrt((t() + s) * (t() - s)) == t() ** 2 - xi(1) * xi(2)


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert reduce_sqrt((p + q) * r) == reduce_sqrt(p * r + q * r)
    assert reduce_sqrt(reduce_sqrt(p)) == reduce_sqrt(p)
    assert p * q == q * p
    assert (p + q) - q == p


@given(polys(), polys())
def test_multiplication_matches_oracle(p, q):
    # oracle sees s1_2 as an independent symbol; compare before reduction
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))


@given(polys())
def test_reduced_form_has_no_square_roots_squared(p):
    r = reduce_sqrt(p)
    assert r.canonical
    assert r.degree(Sqrt(1, 2)) <= 1


# --- specialize ---

def test_specialize_examples():
    black = P("t^2 + t*x1 - t*x2 - 4*x1*x2")
    assert specialize(black, {Xi(1): 0}) == P("t^2 - t*x2")
    assert specialize(black, {}) == black
    red = P("t^2 + t*x1 + t*x2 + 4*x1*x2")
    assert specialize(red, {Xi(1): 1, Xi(2): 1}) == P("t^2 + 2*t + 4")


def test_specialize_zero_kills_square_roots():
    p = t() + sq(1, 2) + sq(2, 3)
    assert specialize(p, {Xi(1): 0}) == t() + sq(2, 3)


def test_specialize_inconsistent_binding():
    with pytest.raises(InconsistentBinding):
        specialize(sq(1, 2), {Xi(1): 1, Xi(2): 4, Sqrt(1, 2): 3})
    assert specialize(sq(1, 2), {Xi(1): 1, Xi(2): 4, Sqrt(1, 2): 2}) == Polynomial.const(2)


# --- char_poly ---

def test_char_poly_examples():
    s = sq(1, 2)
    M = PolyMatrix([[0, 2 * s], [2 * s, -xi(1) + xi(2)]])
    assert char_poly(M) == P("t^2 + t*x1 - t*x2 - 4*x1*x2")
    assert char_poly(PolyMatrix([[0]])) == t()
    y = Polynomial.var(Y)
    tri = PolyMatrix([[0, -y, 0, 0], [-y, 0, -y, 0], [0, -y, 0, -y], [0, 0, -y, 0]])
    assert char_poly(tri) == P("t^4 - 3*t^2*y^2 + y^4")


def test_char_poly_variable_collision():
    with pytest.raises(VariableCollision):
        char_poly(PolyMatrix([[t()]]))


small_int_matrix = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=n, max_size=n))


@given(small_int_matrix)
def test_char_poly_matches_oracle(rows):
    M = PolyMatrix(rows)
    expected = sympy.Matrix(rows).charpoly(sympy.Symbol("t")).as_expr()
    assert to_sympy(char_poly(M)) == sympy.expand(expected)


@given(small_int_matrix)
def test_determinant_routines_agree(rows):
    expected = int(sympy.Matrix(rows).det())
    assert determinant(rows) == expected
    assert det_bareiss(rows) == expected


@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9), st.integers(1, 7), st.integers(1, 7))
def test_symbolic_char_poly_specializes(entries, a, b):
    # symbolic 3x3 in x1, x2; specialize after and before taking char_poly
    x1, x2 = xi(1), xi(2)
    rows = [[entries[3 * i + j] * (x1 if (i + j) % 2 else x2) for j in range(3)] for i in range(3)]
    M = PolyMatrix(rows)
    bind = {Xi(1): a, Xi(2): b}
    assert specialize(char_poly(M), bind) == char_poly(M.specialize(bind))


# --- resultant and discriminant ---

def test_resultant_examples():
    a, b = Symbol("a"), Symbol("b")
    assert resultant(t() - Polynomial.var(a), t() - Polynomial.var(b)) == \
        Polynomial.var(a) - Polynomial.var(b)
    assert resultant(P("t^2 - x1"), P("t^2 - x1")) == Polynomial.const(0)
    # sympy oracle value, frozen
    r = resultant(P("t^2 + t*x1 - t*x2 - 4*x1*x2"), P("t^2 + t*x1 + t*x2 + 4*x1*x2"))
    assert r == P("48*x1^2*x2^2")


def test_resultant_degree_zero():
    with pytest.raises(DegreeZero):
        resultant(P("x1"), P("t^2"))


def test_discriminant_examples():
    red = P("t^2 + t*x1 + t*x2 + 4*x1*x2")
    assert discriminant(red) == P("(x1 + x2)^2 - 16*x1*x2")
    assert discriminant(P("t^2 - 2*t + 1")) == Polynomial.const(0)
    # sympy oracle value, frozen
    assert discriminant(P("t^3 - 4*t*y^2 - 8*y^3")) == P("-1472*y^6")


def test_discriminant_not_monic():
    with pytest.raises(NotMonic):
        discriminant(P("2*t^2 + 1"))


def _oracle_resultant(p, q):
    # Sylvester determinant, p rows first; sympy.resultant may differ in sign
    ts = sympy.Symbol("t")
    return sympy.expand(sylvester(to_sympy(p), to_sympy(q), ts).det())


COMMON_FACTOR_PAIRS = [
    ("(t - x1)*(t + x2)", "(t - x1)*(t - 3)", True),
    ("(t^2 + x1*t + x2)*(t + 1)", "(t^2 + x1*t + x2)*(t - x2)", True),
    ("t^2 + x1", "t^2 + x2", False),
    ("t^3 - x1*x2", "t^2 + t + x1", False),
    ("(t - x1)^2", "t - x1", True),
]


@pytest.mark.parametrize("p,q,shared", COMMON_FACTOR_PAIRS)
def test_resultant_vanishes_iff_common_factor(p, q, shared):
    r = resultant(P(p), P(q))
    assert (r == Polynomial.const(0)) == shared
    assert _oracle_resultant(P(p), P(q)) == to_sympy(r)


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=3), st.lists(st.integers(-6, 6), min_size=1, max_size=3))
def test_resultant_matches_oracle(f, g):
    p = Polynomial.from_univariate(f + [1], T) + xi(1)
    q = Polynomial.from_univariate(g + [1], T) - xi(2)
    assert to_sympy(resultant(p, q)) == _oracle_resultant(p, q)


# --- bezoutiante ---

def test_bezoutiante_examples():
    B = bezoutiante(P("t^2 + b*t + c"))
    assert B == PolyMatrix([[2, P("-b")], [P("-b"), P("b^2 - 2*c")]])
    assert bezoutiante(t()) == PolyMatrix([[1]])
    red = P("t^2 + t*x1 + t*x2 + 4*x1*x2")
    assert matrix_det(bezoutiante(red)) == P("(x1 + x2)^2 - 16*x1*x2")


def test_bezoutiante_not_monic():
    with pytest.raises(NotMonic):
        bezoutiante(P("3*t + 1"))


def _catalog_polys():
    from nlsblocks.catalog import CHAIN_POLYS, EDGE_POLYS
    return list(CHAIN_POLYS.values()) + list(EDGE_POLYS.values()) + ["t^3 - 4*t*y^2 - 8*y^3"]


@pytest.mark.parametrize("text", _catalog_polys())
def test_bezoutiante_det_is_discriminant(text):
    p = P(text)
    assert matrix_det(bezoutiante(p)) == discriminant(p)


# --- univariate factorization ---

def test_factor_examples():
    f = factor_univariate(P("t^4 - 3*t^2 + 1"))
    assert sorted(str(g) for g, _ in f) == ["t^2 + t - 1", "t^2 - t - 1"]
    assert factor_univariate(P("t^2")) == [(t(), 2)]
    assert factor_univariate(P("t^3 - 4*t - 8")) == [(P("t^3 - 4*t - 8"), 1)]


def test_factor_degree_guard():
    with pytest.raises(DegreeTooLarge):
        factor_univariate(t() ** 9 + 1)


def _irreducible_by_splitting(f):
    return sympy.Poly(to_sympy(f), sympy.Symbol("t")).is_irreducible


@given(st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=3), min_size=1, max_size=3))
def test_factor_reproduces_input(parts):
    p = Polynomial.const(1)
    for coeffs in parts:
        lead = coeffs[-1] or 1
        p = p * Polynomial.from_univariate(coeffs[:-1] + [lead], T)
    if up.degree(p.univariate(T)) > up.MAX_FACTOR_DEGREE or p.is_constant():
        return
    factors = factor_univariate(p)
    assert expand_factors(factors) == p
    for f, _ in factors:
        if not f.is_constant():
            assert _irreducible_by_splitting(f)


def test_kronecker_route_splits_quartic():
    # no rational roots, so only the degree-2 splitting finds the factors
    f = P("(t^2 + 1)*(t^2 + t + 3)")
    factors = factor_univariate(f)
    assert len(factors) == 2 and expand_factors(factors) == f


def test_sturm_count_matches_oracle():
    for coeffs in itertools.islice(itertools.product(range(-2, 3), repeat=4), 0, 625, 7):
        f = list(coeffs) + [1]
        # distinct real roots
        expected = len(set(sympy.Poly(list(reversed(f)), sympy.Symbol("t")).real_roots()))
        assert up.count_real_roots(f) == expected
