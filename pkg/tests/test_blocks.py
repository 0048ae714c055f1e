import random

import pytest

from nlsblocks import catalog
from nlsblocks.blocks import (build_adN, build_CA, build_combinatorial, build_Mprime, desqrt,
                              sign_symmetrizer, spectrum_shift, translate_points_of, xi_sum)
from nlsblocks.errors import NotEmbedded
from nlsblocks.graphs import (BLACK, RED, ColoredMarkedGraph, enumerate_blocks,
                              sign_change_points)
from nlsblocks.polycore import (SQRT, T, Polynomial, Xi, char_poly, linear_form, specialize,
                                t, xi)
from nlsblocks.realization import SiteList, dot

P = Polynomial.parse
CATALOG = enumerate_blocks(3, 6)


def test_edge_char_polys():
    assert build_CA(catalog.edge(BLACK)).char_poly() == P("t^2 + t*x1 - t*x2 - 4*x1*x2")
    assert build_CA(catalog.edge(RED)).char_poly() == P("t^2 + t*x1 + t*x2 + 4*x1*x2")


def test_build_needs_embedding():
    g = ColoredMarkedGraph.build(["a", "b"], [("a", "b", BLACK, (1, 2))], m=2)
    with pytest.raises(NotEmbedded):
        build_CA(g)


def test_diagonal_and_edge_entries():
    g = catalog.edge(RED)
    M = build_CA(g).mat
    assert M[0, 0] == Polynomial.const(0)
    assert M[1, 1] == P("-x1 - x2")
    assert M[0, 1] == P("-2*s1_2") and M[1, 0] == P("2*s1_2")


def _random_c(m, rng, eta):
    c = [rng.randint(-3, 3) for _ in range(m - 1)]
    return tuple(c + [eta - sum(c)])


def _at(p, point):
    return p.evaluate({v: point[v] for v in p.variables()})


@pytest.mark.parametrize("g", CATALOG, ids=lambda g: str(len(g.vertices)))
def test_translation_covariance(g):
    rng = random.Random(len(g.edges))
    chi = build_CA(g).char_poly()
    for trial in range(20):
        c = _random_c(g.m, rng, 0)
        moved = build_CA(translate_points_of(g, c)).char_poly()
        # diagonal -sigma a(xi) turns translation by c into a shift by -c(xi)
        if trial == 0:
            assert moved == specialize(chi, {T: t() + linear_form(c)})
            continue
        point = {Xi(i): rng.randint(-50, 50) for i in range(1, g.m + 1)}
        point[T] = rng.randint(-50, 50)
        shifted = dict(point)
        shifted[T] = point[T] + sum(ci * point[Xi(i + 1)] for i, ci in enumerate(c))
        assert _at(moved, point) == _at(chi, shifted)


def test_sign_change_covariance():
    rng = random.Random(3)
    for g in CATALOG[::5]:
        chi = build_CA(g).char_poly()
        d = chi.degree(T)
        c = _random_c(g.m, rng, 2)
        flipped = ColoredMarkedGraph.from_points(sign_change_points(g.vertices, c))
        got = build_CA(flipped).char_poly()
        expect = specialize(chi, {T: -t() - linear_form(c)}) * (-1) ** d
        assert got == expect


def test_char_polys_are_sqrt_free_and_homogeneous():
    for g in CATALOG:
        chi = build_CA(g).char_poly()
        assert not any(v.kind == SQRT for v in chi.variables())
        assert chi.degree(T) == len(g.vertices)
        spectrum_shift(build_CA(g))


def test_sign_symmetrizer_exists():
    for g in CATALOG:
        B = build_CA(g)
        S = sign_symmetrizer(B)
        assert S is not None
        if not any(e.color == RED for e in g.edges):
            assert B.mat.is_symmetric()
        M = B.mat
        for a in range(M.dim):
            for b in range(M.dim):
                assert M[a, b] * S[a] == M[b, a] * S[b]


# --- desqrt ---

def test_desqrt_black_edge():
    D = desqrt(build_CA(catalog.edge(BLACK))).mat
    assert {str(D[0, 1]), str(D[1, 0])} == {"1", "4*x1*x2"}


def test_desqrt_preserves_char_poly():
    for g in CATALOG + [catalog.chain(k) for k in catalog.CHAIN_TYPES]:
        B = build_CA(g)
        D = desqrt(B)
        assert not any(v.kind == SQRT for v in D.mat.variables())
        assert char_poly(D.mat) == B.char_poly()


def test_desqrt_non_tree_edge_is_monomial():
    D = desqrt(build_CA(catalog.circuit(BLACK))).mat
    for a in range(3):
        for b in range(3):
            if a != b and D[a, b]:
                assert len(D[a, b].terms) == 1


# --- shifted blocks ---

def test_build_combinatorial():
    B = build_CA(catalog.edge(BLACK))
    assert build_combinatorial(B, (0, 0)).mat == B.mat
    nu = (2, -1)
    comb = build_combinatorial(B, nu)
    assert comb.mat == B.mat.shift(-linear_form(nu))
    conj = build_combinatorial(B, nu, conjugate=True)
    assert conj.mat == comb.mat.scale(-1)


def test_build_adN_assembly():
    B = build_CA(catalog.edge(RED))
    S = SiteList(2, ((1, 2), (-3, 1)))
    x, nu = (4, 0), (1, 1)
    A = build_adN(B, S, x, nu)
    const = dot(x, x) + dot(S[1], S[1]) + dot(S[2], S[2])
    base = Polynomial.const(const) + xi_sum(2) * (4 * 3)
    comb = build_combinatorial(B, nu)
    assert A.mat == comb.mat.scale(2).shift(base)


def test_mprime_single_vertex():
    g = ColoredMarkedGraph.from_points([(0, 0)])
    S = SiteList(2, ((1, 2), (-3, 1)))
    k = (5, -2)
    M = build_Mprime(g, S, x=k)
    assert M.mat[0, 0] == Polynomial.const(29) + xi_sum(2) * 4


def test_mprime_black_edge_base_and_telescoping():
    S = SiteList(2, ((1, 0), (0, 1), (3, 1)))
    g = ColoredMarkedGraph.build(["r", "b", "c"],
                                 [("r", "b", BLACK, (1, 2)), ("r", "c", BLACK, (3, 1))],
                                 root="r", m=3)
    with pytest.raises(ValueError):
        build_Mprime(g, S)  # x = (8/3, 5/3) has a non-integer norm
    S = SiteList(2, ((1, 1), (1, -2), (4, 0)))
    edge = ColoredMarkedGraph.build(["r", "b"], [("r", "b", BLACK, (1, 2))], root="r", m=3)
    M = build_Mprime(edge, S, x=(1, 1))
    shift = spectrum_shift(M)
    assert shift.base == Polynomial.const(2) + xi_sum(3) * 4
    assert shift.c_poly == P("t^2 + t*x1 - t*x2 - 4*x1*x2")


def test_spectrum_shift_examples():
    red = spectrum_shift(build_CA(catalog.edge(RED)))
    assert red.c_poly == P("t^2 + t*x1 + t*x2 + 4*x1*x2")
    # eigen_poly is the characteristic polynomial of 2 C_A
    assert red.eigen_poly == P("t^2 + 2*t*x1 + 2*t*x2 + 16*x1*x2")
    single = spectrum_shift(build_CA(ColoredMarkedGraph.from_points([(0, 0)])))
    assert single.c_poly == t()


def test_homogeneity_of_catalog_polys():
    from nlsblocks.blocks import homogeneous_in_xi
    for kind in catalog.CHAIN_TYPES:
        assert homogeneous_in_xi(build_CA(catalog.chain(kind)).char_poly())
    assert not homogeneous_in_xi(P("t^2 + x1"))


def test_frequencies_with_twist():
    from nlsblocks.melnikov import Frequencies
    S = SiteList(2, ((1, 2), (-3, 1), (0, 4)))
    F = Frequencies.from_sites(S)
    for i, v in enumerate(S.sites, start=1):
        assert F.omega[i - 1] == Polynomial.const(dot(v, v)) - xi(i) * 2 + xi_sum(3) * 4
