import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from isotower.lattice import Lattice, hnf, kernel_mod, smith_invariants

small_int = st.integers(min_value=-9, max_value=9)
vec3 = st.lists(small_int, min_size=3, max_size=3)


def _det3(M):
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


def test_hnf_is_upper_triangular_and_reduced():
    H = hnf([[2, 4, 6], [1, 1, 1], [0, 3, 9]])
    for i, row in enumerate(H):
        assert all(x == 0 for x in row[:i]) and row[i] > 0
        for above in H[:i]:
            assert 0 <= above[i] < row[i]


@settings(max_examples=80)
@given(st.lists(vec3, min_size=3, max_size=3))
def test_covolume_is_abs_det(rows):
    det = _det3(rows)
    if det == 0:
        return
    L = Lattice.from_generators(rows)
    assert L.covolume() == abs(det)
    for r in rows:
        assert r in L


@settings(max_examples=80)
@given(st.lists(vec3, min_size=3, max_size=5), vec3)
def test_membership_against_span(rows, v):
    L = Lattice.from_generators(rows + [[5, 0, 0], [0, 5, 0], [0, 0, 5]])
    # v is in L iff some combination with coefficients mod 5 hits it mod 5L' (L' = 5Z^3 inside L)
    combos = {
        tuple(sum(c * r[k] for c, r in zip(cs, rows)) % 5 for k in range(3))
        for cs in itertools.product(range(5), repeat=len(rows))
    }
    assert (v in L) == (tuple(x % 5 for x in v) in combos)


def test_fractional_lattice_and_index():
    L = Lattice.from_generators([[Fraction(1, 2), 0], [0, 1]])
    M = Lattice.from_generators([[1, 0], [0, 1]])
    assert M.issubset(L) and not L.issubset(M)
    assert M.index_in(L) == 2
    assert (Fraction(1, 2), 7) in L and (Fraction(1, 3), 0) not in L
    assert (L + M) == L


def test_kernel_mod_brute_force():
    A = [[1, 2], [3, 1], [0, 4]]
    m = 6
    K = Lattice.from_generators(kernel_mod(A, m), 3)
    for c in itertools.product(range(-m, m + 1), repeat=3):
        inside = all(sum(ci * A[i][k] for i, ci in enumerate(c)) % m == 0 for k in range(2))
        assert (c in K) == inside


def test_smith_invariants():
    assert smith_invariants([[2, 0], [0, 3]]) == [1, 6]
    assert smith_invariants([[4, 0, 0], [0, 4, 0], [0, 0, 1]]) == [1, 4, 4]
