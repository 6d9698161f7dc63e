from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from shimura_pq.linalg import (
    cokernel_order,
    det_bareiss,
    frac_sqrt,
    hnf_rows,
    kernel_mod_p,
    mat_inv_frac,
    mat_mul_frac,
    smith_normal_form,
    solve_frac,
    xgcd,
)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert g >= 0
    assert s * a + t * b == g
    if a or b:
        assert a % g == 0 and b % g == 0


def _apply_unimodular(rows, ops):
    rows = [list(r) for r in rows]
    for kind, i, j, c in ops:
        i, j = i % len(rows), j % len(rows)
        if i == j:
            continue
        if kind == 0:
            rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
        else:
            rows[i], rows[j] = rows[j], rows[i]
    return rows


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4),
    st.lists(
        st.tuples(st.integers(0, 1), st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)),
        max_size=8,
    ),
)
def test_hnf_invariant_under_row_ops(rows, ops):
    base = hnf_rows(rows, 4)
    if len(base) != 4:
        return
    rebased = _apply_unimodular(base, ops)
    assert hnf_rows(rebased, 4) == base


def test_hnf_shape():
    h = hnf_rows([[2, 0, 0, 0], [0, 2, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1]], 4)
    assert h == [(1, 0, 1, 0), (0, 1, 0, 1), (0, 0, 2, 0), (0, 0, 0, 2)]


def test_smith_fixtures():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    diag = smith_normal_form([[6, 0], [0, 10]])
    assert diag == [2, 30]


def test_smith_left_transform():
    mat = [[4, 2], [2, 8]]
    diag, u = smith_normal_form(mat, want_left=True)
    assert diag[0] > 0 and diag[1] % diag[0] == 0
    assert abs(det_bareiss(u)) == 1


def test_cokernel_order():
    # Z^2 / <(3,0),(0,5)> = Z/3 x Z/5
    mat = [[3, 0], [0, 5]]
    assert cokernel_order(mat, [1, 0]) == 3
    assert cokernel_order(mat, [0, 1]) == 5
    assert cokernel_order(mat, [1, 1]) == 15
    assert cokernel_order(mat, [3, 5]) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_bareiss_matches_fraction_elimination(mat):
    det = det_bareiss(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    d = Fraction(1)
    for col in range(3):
        piv = next((r for r in range(col, 3) if a[r][col] != 0), None)
        if piv is None:
            d = Fraction(0)
            break
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            d = -d
        d *= a[col][col]
        for r in range(col + 1, 3):
            f = a[r][col] / a[col][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    assert det == d


def test_mat_inv_frac():
    m = [[1, 2], [3, 4]]
    inv = mat_inv_frac(m)
    assert mat_mul_frac(m, inv) == [[1, 0], [0, 1]]


def test_solve_frac():
    sol = solve_frac([[2, 0], [0, 4]], [1, 2])
    assert sol == [Fraction(1, 2), Fraction(1, 2)]
    assert solve_frac([[1, 1], [1, 1]], [0, 1]) is None
    # canonical particular solution with a free variable: free vars are 0
    sol = solve_frac([[1, 1]], [3])
    assert sol == [Fraction(3), Fraction(0)]


def test_kernel_mod_p():
    mat = [[1, 2, 0, 0], [0, 1, 0, 0], [3, 0, 0, 0], [0, 0, 0, 0]]
    ker = kernel_mod_p(mat, 5)
    assert len(ker) == 2
    for c in ker:
        assert any(c)
        for j in range(4):
            assert sum(c[i] * mat[i][j] for i in range(4)) % 5 == 0


def test_frac_sqrt():
    assert frac_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert frac_sqrt(Fraction(2)) is None
    assert frac_sqrt(Fraction(0)) == 0
