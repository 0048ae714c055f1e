import sympy
from hypothesis import given, strategies as st

from nlsblocks import lattice

rows3 = st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=4)


@given(rows3)
def test_rank_matches_oracle(rows):
    assert lattice.rank(rows) == sympy.Matrix(rows).rank()


@given(rows3)
def test_kernel_vectors_are_annihilated(rows):
    ker = lattice.kernel(rows)
    assert len(ker) == 3 - lattice.rank(rows)
    for v in ker:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@given(rows3)
def test_hnf_spans_the_same_lattice(rows):
    h = lattice.hermite_normal_form(rows)
    for r in rows:
        assert lattice.in_lattice(r, h)
    for r in h:
        assert lattice.in_lattice(r, rows)
    pivots = [next(i for i, v in enumerate(r) if v) for r in h]
    assert pivots == sorted(set(pivots))
    assert all(r[c] > 0 for r, c in zip(h, pivots))


@given(rows3, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_integer_combinations_are_members(rows, coeffs):
    x = [sum(c * r[k] for c, r in zip(coeffs, rows)) for k in range(3)]
    assert lattice.in_lattice(x, rows)


def test_index_two_sublattice():
    gens = [[2, 0], [0, 1]]
    assert lattice.in_lattice([4, -3], gens)
    assert not lattice.in_lattice([1, 0], gens)
    assert lattice.hermite_normal_form([[4, 2], [6, 1]]) == [[2, 3], [0, 4]]


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_oracle(rows):
    assert lattice.det(rows) == sympy.Matrix(rows).det()
