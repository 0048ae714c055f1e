import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nlsblocks.errors import SubsetTooSmall
from nlsblocks.genericity import (CONSTRAINT_2_BOUND, MODULUS, _Sites, _evaluate_mod, _tuples,
                                  check_battery, check_constraint_1, check_constraint_1b,
                                  check_constraint_2, check_resonances, evaluate_exact,
                                  generate_generic, replay_report, required_bounds,
                                  resonance_list)
from nlsblocks.powersum import PowerSum, residue
from nlsblocks.realization import SiteList


# --- Constraint 1 ---

def test_constraint_1_examples():
    S = SiteList(2, ((1, 0), (0, 1), (-1, -1)))
    vs = [sympy.Matrix(v) for v in S.sites]
    dots = [(vs[i] - vs[j]).dot(vs[k] - vs[j])
            for j in range(3) for i in range(3) for k in range(3) if len({i, j, k}) == 3]
    assert all(d != 0 for d in dots) and len(dots) == 6
    assert check_constraint_1(S).passed
    bad = SiteList(2, ((0, 0), (1, 0), (1, 1)))
    report = check_constraint_1(bad)
    assert not report.passed and replay_report(report, bad)
    assert check_constraint_1(SiteList(2, ((1, 2), (3, 4)))).passed


# --- Constraint 2 ---

def test_constraint_2_examples():
    S = SiteList(2, ((1, 3), (2, 6), (5, -1)))
    report = check_constraint_2(S)
    assert not report.passed and replay_report(report, S)
    nu = report.witness["nu"]
    assert sum(map(abs, nu)) < CONSTRAINT_2_BOUND and nu[2] == 0
    assert check_constraint_2(generate_generic(2, 4)).passed
    assert check_constraint_2(SiteList(2, ((4, 7),))).passed


# --- Constraint 1b ---

def test_constraint_1b_examples():
    ap = SiteList(1, ((1,), (2,), (3,), (4,)))
    report = check_constraint_1b(ap)
    assert not report.passed and report.witness["clause"] in ("sum", "difference")
    assert replay_report(report, ap)
    rng = random.Random(4)
    S = SiteList(3, tuple(tuple(rng.randint(-10 ** 9, 10 ** 9) for _ in range(3))
                          for _ in range(6)))
    assert check_constraint_1b(S).passed
    assert check_constraint_1b(SiteList(2, ((1, 0), (2, 0), (3, 0)))).passed


# --- resonance list ---

def test_resonance_list_is_deterministic():
    a, b = resonance_list(2), resonance_list(2)
    assert a.digest() == b.digest()
    counts = a.counts()
    assert counts["independence"] == 1 and counts["avoidable"] > 0


def test_collinear_sites_fail_independence():
    S = SiteList(2, ((1, 2), (2, 4), (7, 1), (-3, 5)))
    report = check_resonances(S)
    assert not report.passed and report.witness["item"] == "independence"
    assert replay_report(report, S)


def test_subset_too_small():
    with pytest.raises(SubsetTooSmall):
        check_resonances(SiteList(2, ((1, 0), (0, 1), (2, 5))))


def test_small_lists_get_a_report_per_item():
    rng = random.Random(9)
    S = SiteList(2, tuple(tuple(rng.randint(-20, 20) for _ in range(2)) for _ in range(4)))
    report = check_resonances(S)
    assert report.detail["size"] == resonance_list(2).size
    if not report.passed:
        assert replay_report(report, S)


def test_modular_and_exact_evaluation_agree():
    rng = random.Random(12)
    rlist = resonance_list(2)
    S = SiteList(2, tuple(tuple(rng.randint(-50, 50) for _ in range(2)) for _ in range(5)))
    T = _Sites(S)
    for res in rlist.items:
        tuples = _tuples(S.m, res.arity)
        mod = _evaluate_mod(res, T, tuples)
        for row, r in zip(tuples[:40], mod[:40]):
            exact = evaluate_exact(res, S, [int(x) for x in row])
            assert exact % MODULUS == int(r)


site_lists = st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)),
                      min_size=4, max_size=5, unique=True)


@settings(max_examples=40)
@given(site_lists)
def test_fail_witnesses_replay(sites):
    S = SiteList(2, tuple(sites))
    for report in check_battery(S, 2):
        if not report.passed:
            assert replay_report(report, S)
        else:
            assert not replay_report(report, S)


# --- generation ---

def test_generate_examples():
    S = generate_generic(2, 2, C=3, D=5)
    assert S.sites == ((PowerSum.power(3, 5), PowerSum.power(3, 25)),
                       (PowerSum.power(3, 125), PowerSum.power(3, 625)))
    assert all(r.passed for r in check_battery(S, 2))
    assert generate_generic(2, 0).sites == ()


@pytest.mark.parametrize("n,m", [(2, 3), (2, 5), (3, 4)])
def test_generated_lists_are_increasing_and_generic(n, m):
    S = generate_generic(n, m)
    norms = [sum(c * c for c in v) for v in S.sites]
    assert len(set(S.sites)) == m
    assert all(a < b for a, b in zip(norms, norms[1:]))
    assert all(r.passed for r in check_battery(S, n))


def test_required_bounds():
    C, D = required_bounds(2)
    assert C >= CONSTRAINT_2_BOUND and D >= 3
    # generated coordinates never collide modulo the evaluation prime
    S = generate_generic(2, 4)
    res = {residue(c, MODULUS) for v in S.sites for c in v}
    assert len(res) == 8
