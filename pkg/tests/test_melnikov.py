import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.subresultants_qq_zz import sylvester

from conftest import to_sympy
from nlsblocks.catalog import EDGE_POLYS, edge
from nlsblocks.certificate import Certificate
from nlsblocks.errors import CertificateError, InconclusiveDimension
from nlsblocks.graphs import (BLACK, RED, ColoredMarkedGraph, enumerate_blocks, reroot,
                              universal_sign)
from nlsblocks.melnikov import (DETERMINANT, MOD2, RESULTANT, SAME_BLOCK, Frequencies,
                                MelnikovQuery, PlacedBlock, _mod2, block_data,
                                first_melnikov, first_melnikov_suite, half_adN_det,
                                mod2_diagonal, mod2_product, momentum_admissible, nu_vectors,
                                replay, second_melnikov, second_melnikov_suite, smoke_first,
                                smoke_second)
from nlsblocks.polycore import Polynomial
from nlsblocks.realization import SiteList

CATALOG = enumerate_blocks(3, 6)
t, x1, x2 = sympy.symbols("t x1 x2")


def placed(g, root):
    return PlacedBlock(g, tuple(root))


# --- frequencies and momentum ---

def test_frequencies_at_zero_and_homogeneity():
    S = SiteList(2, ((1, 2), (-3, 1), (0, 4)))
    F = Frequencies.from_sites(S)
    xs = sympy.symbols("x1:4")
    for i, (v, w) in enumerate(zip(S.sites, F.omega)):
        expected = v[0] ** 2 + v[1] ** 2 - 2 * xs[i] + 4 * sum(xs)
        assert sympy.expand(to_sympy(w) - expected) == 0
    assert F.twist[0] == (1, 2, 2)


def test_momentum_examples():
    S = SiteList(2, ((1, 0), (0, 1)))
    h = placed(edge(BLACK), (3, -1))
    trivial = MelnikovQuery((0, 0), -1, h, h)
    assert momentum_admissible(trivial, S) and trivial.is_trivial()
    single = MelnikovQuery((1, 0), 1, placed(edge(BLACK), (-1, 0)))
    assert momentum_admissible(single, S)
    assert not momentum_admissible(MelnikovQuery((2, 0), 1, placed(edge(BLACK), (-1, 0))), S)
    assert not momentum_admissible(MelnikovQuery((1, 1), 1, placed(edge(BLACK), (-1, 0))), S)


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=2),
       st.lists(st.integers(-9, 9), min_size=2, max_size=2))
def test_momentum_is_linear_arithmetic(nu, root):
    S = SiteList(2, ((2, 1), (-1, 3)))
    q = MelnikovQuery(tuple(nu), -1, placed(edge(RED), root))
    pi = (2 * nu[0] - nu[1], nu[0] + 3 * nu[1])
    expect = pi == tuple(root) and (sum(nu) + 1) % 2 == 0
    assert momentum_admissible(q, S) == expect


# --- first condition ---

def test_first_melnikov_constant_term():
    S = SiteList(2, ((1, 0), (0, 1)))
    cert = first_melnikov(placed(edge(BLACK), (-1, 0)), (1, 0), sites=S)
    assert cert.passed and cert.method == "ConstantTerm"
    assert cert.evidence["constant"] == 2
    assert replay(cert) == "PASS"


def test_first_melnikov_mod2_when_constant_vanishes():
    cert = first_melnikov(edge(BLACK), (1, 0))
    assert cert.passed and cert.method == MOD2
    assert replay(cert) == "PASS"


def test_pure_frequency():
    cert = first_melnikov(None, (1, -1, 0))
    assert cert.passed and cert.method == "LinearPart"
    S = SiteList(2, ((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        first_melnikov(None, (1, 0), sites=S)


def test_trivial_queries_are_rejected():
    with pytest.raises(ValueError):
        first_melnikov(None, (0, 0))
    with pytest.raises(ValueError):
        second_melnikov(edge(RED), edge(RED), (0, 0), -1)
    with pytest.raises(ValueError):
        first_melnikov(edge(RED), (1, 1))


def test_mod2_path_agrees_with_determinant():
    rng = random.Random(5)
    nus = [tuple(v) for v in nu_vectors(6, 3, parity=1)]
    for g in CATALOG:
        for nu in rng.sample(nus, 3):
            nu = nu[:g.m]
            if sum(nu) % 2 == 0:
                nu = (nu[0] + 1,) + nu[1:]
            assert mod2_product(mod2_diagonal(g, nu)) == _mod2(half_adN_det(g, nu))


def test_determinant_route_replays():
    g = CATALOG[7]
    nu = (1,) + (0,) * (g.m - 1)
    det = half_adN_det(g, nu)
    assert det != 0
    cert = Certificate("PASS", DETERMINANT, {"determinant": str(det), "nu": list(nu)},
                       first_melnikov(g, nu).subject)
    assert replay(cert) == "PASS"


# --- second condition ---

def _oracle_edge_resultant(sigma, nu):
    chi = {c: sympy.sympify(EDGE_POLYS[c].replace("^", "**")) for c in (BLACK, RED)}
    chi2 = {c: sympy.expand(4 * p.subs(t, t / 2)) for c, p in chi.items()}
    ell = sum((4 * sum(nu) + 4 + 4 * sigma - 2 * c) * x for c, x in zip(nu, (x1, x2)))
    Q = sympy.expand(chi2[BLACK].subs(t, t - ell))
    R = sympy.expand(chi2[RED].subs(t, -sigma * t))
    return sympy.expand(sylvester(Q, R, t).det())


def test_edge_pair_resultant_matches_sylvester():
    cert = second_melnikov(edge(BLACK), edge(RED), (0, 0), 1, n=2, method="Resultant")
    assert cert.passed and cert.method == RESULTANT
    got = to_sympy(Polynomial.parse(cert.evidence["resultant"]))
    assert got == _oracle_edge_resultant(1, (0, 0)) != 0
    assert replay(cert) == "PASS"


def test_default_route_is_cheaper_but_consistent():
    for nu in [(0, 0), (1, -1), (2, 0)]:
        for sigma in (1, -1):
            cert = second_melnikov(edge(BLACK), edge(RED), nu, sigma, n=2)
            assert cert.passed == (_oracle_edge_resultant(sigma, nu) != 0)
            assert replay(cert) == cert.verdict


def test_roots_on_different_spheres_pass_by_constant():
    S = SiteList(2, ((1, 0), (0, 1)))
    a, b = placed(edge(BLACK), (2, 0)), placed(edge(RED), (-1, -1))
    nu = (-1, 1)
    q = MelnikovQuery(nu, 1, a, b)
    assert momentum_admissible(q, S)
    cert = second_melnikov(a, b, nu, 1, sites=S)
    assert cert.passed and cert.evidence["constant"] == -1 + 1 + 4 + 2
    assert replay(cert) == "PASS"


def test_disguised_trivial_query_is_a_same_block_pass():
    g = CATALOG[30]
    for w in g.vertices:
        if any(w):
            break
    sigma = -universal_sign(w)
    nu = tuple(sigma * c for c in w)
    cert = second_melnikov(g, reroot(g, w), nu, sigma, n=3)
    assert cert.method == SAME_BLOCK and cert.passed
    assert replay(cert) == "PASS"


def test_high_dimension_is_inconclusive():
    a = placed(edge(BLACK), (1, 0, 0, 0))
    b = placed(edge(RED), (0, 1, 0, 0))
    with pytest.raises(InconclusiveDimension) as info:
        second_melnikov(a, b, (1, 1), 1)
    report = info.value.report
    assert report["conclusive"] is False and report["multiplicity_bound"] == 4


def test_replay_detects_tampering():
    cert = first_melnikov(edge(BLACK), (1, 0))
    bad = Certificate(cert.verdict, cert.method, {"diagonal_mod2": ["0", "1"], "nu": [1, 0]},
                      cert.subject)
    assert replay(bad) == "FAIL"
    with pytest.raises(CertificateError):
        replay(Certificate("PASS", "Magic", {}, cert.subject))


# --- suites and smoke ---

def test_suites_agree_with_single_queries():
    graphs = CATALOG[:6]
    first = first_melnikov_suite(graphs, max_l1=3)
    assert first["passed"] == first["queries"] and not first["failures"]
    rng = random.Random(1)
    for k in rng.sample(range(len(first["nus"])), 20):
        nu = tuple(int(c) for c in first["nus"][k])
        assert first_melnikov(graphs[k % len(graphs)], nu).passed
    second = second_melnikov_suite(graphs, max_l1=2)
    assert second["passed"] == second["queries"] and not second["failures"]
    for _ in range(10):
        i, j = rng.randrange(6), rng.randrange(6)
        nu = tuple(int(c) for c in second["nus"][rng.randrange(len(second["nus"]))])
        sigma = rng.choice((1, -1))
        if i == j and sigma == -1 and not any(nu):
            continue
        assert second_melnikov(graphs[i], graphs[j], nu, sigma, n=3).passed


def test_smoke_is_clean_on_catalog_sample():
    graphs = CATALOG[:5]
    nus = nu_vectors(6, 2, parity=1)
    assert smoke_first(graphs, nus, count=10).clean
    rep = smoke_second(graphs, nu_vectors(6, 2, parity=0), count=5)
    assert rep.clean and rep.evaluations > 0


def test_smoke_reports_an_exact_zero():
    g = ColoredMarkedGraph.from_points([(0,)])
    assert str(block_data(g).chi2) == "t"
    rep = smoke_first([g], np.array([[-2]], dtype=np.int64), count=3)
    assert len(rep.hits) == 3 and not rep.clean


@settings(max_examples=20)
@given(st.integers(0, len(CATALOG) - 1), st.integers(0, len(CATALOG) - 1),
       st.sampled_from([1, -1]), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_second_melnikov_pass_is_nonzero_at_random_points(i, j, sigma, nu):
    if sum(nu) % 2:
        nu[0] += 1
    nu = tuple(nu) + (0, 0, 0)
    if i == j and sigma == -1 and not any(nu):
        return
    cert = second_melnikov(CATALOG[i], CATALOG[j], nu, sigma, n=3)
    assert cert.passed
    rep = smoke_second([CATALOG[i], CATALOG[j]], np.array([nu]), count=4, seed=i)
    assert rep.clean
