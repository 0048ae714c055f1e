"""One test per acceptance criterion; each records a PASS/FAIL line that is
printed in the terminal summary."""

import itertools
import random
import time
from fractions import Fraction

import pytest

from conftest import record
from nlsblocks import catalog
from nlsblocks.blocks import build_CA
from nlsblocks.catalog import BLACK, RED
from nlsblocks.certify import (factor_witness, irreducible, linear_factor_admissible,
                               parity_test, real_root_region, region_at, separation,
                               specialize_factor, xi_vars)
from nlsblocks.genericity import check_battery, generate_generic
from nlsblocks.graphs import enumerate_blocks, enumerate_degenerate
from nlsblocks.melnikov import (first_melnikov_suite, second_melnikov_suite, smoke_first,
                                smoke_second)
from nlsblocks.polycore import T, Polynomial, bezoutiante, char_poly, matrix_det, reduce_sqrt, specialize, xi
from nlsblocks.realization import find_avoidable_resonance

P = Polynomial.parse
CATALOGS = {2: enumerate_blocks(2, 4), 3: enumerate_blocks(3, 6)}


def best_time(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_criterion_1_edge_fixtures():
    expected = {BLACK: P("t^2 + t*(x1 - x2) - 4*x1*x2"), RED: P("t^2 + t*(x1 + x2) + 4*x1*x2")}
    ok = all(char_poly(build_CA(catalog.edge(c)).mat) == p for c, p in expected.items())
    elapsed = best_time(lambda: char_poly(build_CA(catalog.edge(BLACK)).mat))
    ok &= elapsed < 1e-3
    assert record("1", ok, f"both 2-vertex polynomials exact, {elapsed * 1e3:.3f} ms")


GOLDEN = {
    "e": ("t^4 - 3*t^2*y^2 + y^4", ["t^2 - t*y - y^2", "t^2 + t*y - y^2"]),
    "f": ("(t + 2*y)*(t^3 - 4*t*y^2 - 8*y^3)", ["t + 2*y", "t^3 - 4*t*y^2 - 8*y^3"]),
    "g": ("t^4 + 2*t^3*y + 4*t^2*y^2 - 8*t*y^3 - 16*y^4", None),
    "i": ("t*(t + 2*y)*(t^2 + 2*t*y - 4*y^2)", ["t", "t + 2*y", "t^2 + 2*t*y - 4*y^2"]),
    "j": ("t^4 + 4*t^3*y + 16*t^2*y^2 + 24*t*y^3 + 16*y^4", None),
}


def _golden_ok(kind, text, factors):
    p = catalog.chain_y_poly(kind)
    if p != P(text):
        return False
    cert = irreducible(p)
    if factors is None:
        return cert.passed
    return cert.failed and sorted(map(str, factor_witness(p))) == sorted(factors)


def test_criterion_2_golden_determinants():
    t0 = time.perf_counter()
    results = {k: _golden_ok(k, *v) for k, v in GOLDEN.items()}
    elapsed = time.perf_counter() - t0
    ok = all(results.values()) and elapsed < 1
    bad = [k for k, v in results.items() if not v]
    assert record("2", ok, f"types e f g i j exact, {elapsed:.2f} s" + (f", wrong: {bad}" if bad else ""))


@pytest.mark.xfail(strict=True, reason="the stated type h polynomial is not the determinant "
                   "of the type h chain; the chain gives (t + 2y)^2 (t^2 + 4y^2)")
def test_criterion_2h_golden_type_h():
    expected = P("t^4 + 2*t^3*y + 4*t^2*y^2 + 8*t*y^3 + 16*y^4")
    got = catalog.chain_y_poly("h")
    ok = got == expected and irreducible(got).passed
    record("2h", ok, f"type h: computed {got}")
    assert ok


def test_criterion_3_f2_f3_at_minus_2x3():
    x1, x2, x3 = xi(1), xi(2), xi(3)
    base = x1 * x2 * (x1 - x3) * x3
    at = {T: x3 * -2}
    f2 = specialize(reduce_sqrt(matrix_det(catalog.f2_display())), at)
    f3 = specialize(reduce_sqrt(matrix_det(catalog.f3_display())), at)
    from_graph = specialize(char_poly(build_CA(catalog.f2_graph()).mat), at)
    ok = f2 == base * -8 and f3 == base * -24 and from_graph == f2
    assert record("3", ok, "f2 = -8 x1 x2 (x1 - x3) x3, f3 = -24 x1 x2 (x1 - x3) x3")


def test_criterion_4_star_bi():
    chi = char_poly(build_CA(catalog.star_bi()).mat)
    det = specialize(chi, {T: 0})
    displayed = specialize(reduce_sqrt(matrix_det(catalog.star_bi_display())), {T: 0})
    target = P(catalog.STAR_BI_DET)
    ok = det == target and displayed == target and irreducible(chi).passed
    assert record("4", ok, "determinant exact, irreducible PASS")


def test_criterion_5_specialization_factors():
    t0 = time.perf_counter()
    checked = violations = 0
    for n, blocks in CATALOGS.items():
        for g in blocks:
            for i in range(1, g.m + 1):
                checked += 1
                violations += not specialize_factor(g, i)[1].passed
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60
    assert record("5", ok, f"{checked} (block, index) pairs, {violations} violations, {elapsed:.1f} s")


def test_criterion_6_parity():
    polys = violations = linear = 0
    for blocks in CATALOGS.values():
        for g in blocks:
            chi = char_poly(build_CA(g).mat)
            polys += 1
            violations += not parity_test(chi).passed
            found = list(factor_witness(chi) or [])
            found += factor_witness(catalog.y_specialize(chi)) or []
            for f in found:
                if f.degree(T) == 1:
                    linear += 1
                    violations += not linear_factor_admissible(f)
    for factors in catalog.CHAIN_FACTORS.values():
        for f in factors:
            if P(f).degree(T) == 1:
                linear += 1
                violations += not linear_factor_admissible(catalog.y_specialize(P(f)))
    ok = violations == 0
    assert record("6", ok, f"{polys} polynomials, {linear} linear factors, {violations} violations")


def _box_edges(m, r):
    """Every black and red 2-vertex block with an endpoint in the box |a|_inf <= r."""
    def e(k):
        return tuple(1 if q == k else 0 for q in range(m))
    out = set()
    for a in itertools.product(range(-r, r + 1), repeat=m):
        for s in (1, -1):
            for i, j in itertools.permutations(range(m), 2):
                b = tuple(x + s * (y - z) for x, y, z in zip(a, e(i), e(j)))
                out.add(frozenset({(a, s), (b, s)}))
                if i < j:
                    c = tuple(-x - y - z for x, y, z in zip(a, e(i), e(j)))
                    out.add(frozenset({(a, s), (c, -s)}))
    return [sorted(x) for x in out]


def test_criterion_7_separation():
    boxes = _box_edges(4, 3)
    box = separation(boxes)
    cat = separation(CATALOGS[3])
    ok = box.passed and cat.passed
    assert record("7", ok, f"{len(boxes)} 2-vertex blocks in the box, "
                  f"{len(CATALOGS[3])} n=3 blocks, collisions: "
                  f"{len(box.evidence.get('collisions', [])) + len(cat.evidence.get('collisions', []))}")


def test_criterion_8_real_root_region():
    red = real_root_region(P("t^2 + t*x1 + t*x2 + 4*x1*x2"))
    ok = red[-1] == P("x1^2 - 14*x1*x2 + x2^2")
    rng = random.Random(8)
    points = disagreements = 0
    for blocks in CATALOGS.values():
        for g in blocks:
            chi = char_poly(build_CA(g).mat)
            d = chi.degree(T)
            if d < 2:
                continue
            minors, bez = real_root_region(chi), bezoutiante(chi)
            variables = xi_vars(chi)
            for _ in range(100):
                point = {v: Fraction(rng.randint(1, 60), rng.randint(1, 60)) for v in variables}
                inside, sig, sturm = region_at(chi, point, minors, bez)
                points += 1
                disagreements += sig != sturm or inside != (sturm == d)
    ok &= disagreements == 0
    assert record("8", ok, f"red edge region x1^2 - 14 x1 x2 + x2^2 > 0, {points} points, "
                  f"{disagreements} disagreements")


def test_criterion_9_degenerate_graphs():
    graphs = enumerate_degenerate(4, 6)
    exceptions = sum(find_avoidable_resonance(g) is None for g in graphs)
    assert record("9", exceptions == 0, f"{len(graphs)} degenerate graphs, {exceptions} exceptions")


def test_criterion_10_genericity_pipeline():
    t0 = time.perf_counter()
    verdicts = []
    for n, m in [(2, 6), (3, 8)]:
        sites = generate_generic(n, m)
        verdicts += [r.verdict for r in check_battery(sites, n)]
    elapsed = time.perf_counter() - t0
    ok = all(v == "PASS" for v in verdicts) and len(verdicts) == 8 and elapsed < 300
    assert record("10", ok, f"(2, 6) and (3, 8): {verdicts.count('PASS')}/8 checks PASS, "
                  f"{elapsed:.1f} s")


def test_criterion_11_melnikov():
    parts = []
    ok = True
    for n, blocks in CATALOGS.items():
        first = first_melnikov_suite(blocks, max_l1=6)
        second = second_melnikov_suite(blocks, max_l1=4)
        s1 = smoke_first(blocks, first["nus"], count=100)
        s2 = smoke_second(blocks, second["nus"], count=100)
        ok &= first["passed"] == first["queries"] and second["passed"] == second["queries"]
        ok &= s1.clean and s2.clean
        parts.append(f"n={n}: first {first['passed']}/{first['queries']}, "
                     f"second {second['passed']}/{second['queries']}, "
                     f"smoke hits {len(s1.hits) + len(s2.hits)}")
    assert record("11", ok, "; ".join(parts))
