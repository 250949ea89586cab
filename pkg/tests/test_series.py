from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retakh.series import (
    BivarSeries,
    BranchError,
    CompositionError,
    DivergenceError,
    NonUnitError,
    OrderMismatchError,
    Series,
    _convolve,
    solve_fixed_point,
)

from oracles import naive_mul

ORDER = 8

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def series_st(order=ORDER, unit=False, const=None):
    def build(cs):
        if const is not None:
            cs[0] = Fraction(const)
        elif unit and cs[0] == 0:
            cs[0] = Fraction(1)
        return Series(cs, order)

    return st.lists(rationals, min_size=order + 1, max_size=order + 1).map(build)


def z(n=ORDER):
    return Series.z(n)


# ---------------------------------------------------------------------------
# examples
# ---------------------------------------------------------------------------


def test_add_examples():
    Z = z()
    assert (1 + Z) + (1 - Z) == Series.constant(2, ORDER)
    a = Series([3, Fraction(1, 2), -1], ORDER)
    assert a + Series.zero(ORDER) == a
    assert (Z + 2 * Z**2) + Z**2 == Series([0, 1, 3], ORDER)


def test_mul_examples():
    Z = z()
    assert (1 + Z) * (1 - Z) == 1 - Z**2
    assert Z * Z == Series.monomial(2, ORDER)


def test_div_examples():
    Z = z()
    assert (1 / (1 - Z)).coeffs == [1] * (ORDER + 1)
    assert (Z / (1 - Z)).coeffs == [0] + [1] * ORDER
    a = Series([2, 3, -1, 5], ORDER)
    b = Series([3, 1, 4], ORDER)
    assert (a / b) * b == a


def test_sqrt_examples():
    Z = z()
    assert Series.one(ORDER).sqrt() == Series.one(ORDER)
    assert ((1 + Z) ** 2).sqrt() == 1 + Z


def test_compose_examples():
    Z = z()
    outer = Series([5, 1, 2, 3], ORDER)
    assert outer.compose(Series.zero(ORDER)) == Series.constant(5, ORDER)
    assert (Z**2).compose(Z + Z**2) == Z**2 + 2 * Z**3 + Z**4


def test_coeff_examples():
    assert (1 / (1 - z(10))).coeff(7) == 1
    with pytest.raises(IndexError):
        z(3).coeff(4)
    with pytest.raises(IndexError):
        z(3).coeff(-1)


def test_coefficients_in_lowest_terms():
    s = Series([Fraction(2, 4), Fraction(6, 3)], 1)
    assert s.coeffs == [Fraction(1, 2), Fraction(2)]
    assert all(c.denominator > 0 for c in (-s).coeffs)


def test_render():
    s = Series([1, Fraction(-1, 2), 0, 3], 3)
    assert s.to_str() == "1 + -1/2*z + 0*z^2 + 3*z^3"
    assert str(Series([7], 0)) == "7"


def test_shift():
    Z = z(5)
    assert Z.shift(2) == Series.monomial(3, 5)
    assert (Z**3).shift(-2) == Series.z(3)
    with pytest.raises(ValueError):
        Z.shift(-2)


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------


def test_order_mismatch_rejected():
    with pytest.raises(OrderMismatchError):
        z(3) + z(4)
    with pytest.raises(OrderMismatchError):
        z(3) * z(4)
    with pytest.raises(OrderMismatchError):
        z(3).compose(z(4))


def test_division_by_nonunit():
    with pytest.raises(NonUnitError):
        Series.one(4) / z(4)


def test_sqrt_branch():
    with pytest.raises(BranchError):
        Series.constant(4, 3).sqrt()
    with pytest.raises(BranchError):
        z(3).sqrt()


def test_compose_needs_zero_constant():
    with pytest.raises(CompositionError):
        z(3).compose(1 + z(3))


def test_mixing_families_rejected():
    with pytest.raises(TypeError):
        z(3) + BivarSeries.z(3)


def test_too_many_coefficients():
    with pytest.raises(ValueError):
        Series([1, 2, 3], 1)


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------


def test_fixed_point_motzkin():
    def step(M):
        Z = Series.z(M.order)
        return 1 + Z * M + Z * Z * M * M

    assert solve_fixed_point(step, 5).coeffs == [1, 1, 2, 4, 9, 21]


def test_fixed_point_v():
    def step(v):
        return Series.z(v.order) * (1 + v + v * v)

    assert solve_fixed_point(step, 5).coeffs == [0, 1, 1, 2, 4, 9]


def test_fixed_point_reproduces_itself():
    def step(M):
        Z = Series.z(M.order)
        return 1 + Z * M + Z * Z * M * M

    M = solve_fixed_point(step, 40)
    assert step(M) == M


def test_fixed_point_counts_applications():
    calls = []

    def step(x):
        calls.append(x.order)
        return 1 + Series.z(x.order) * x

    solve_fixed_point(step, 10)
    # one application per order plus the final self-consistency check
    assert calls == list(range(11)) + [10]


def test_fixed_point_divergence():
    # x -> 1 + 2x never settles its constant term
    with pytest.raises(DivergenceError):
        solve_fixed_point(lambda x: 1 + 2 * x, 4)


def test_fixed_point_never_settling_top_coefficient():
    # every round rewrites the newest coefficient, so nothing is ever agreed
    with pytest.raises(DivergenceError):
        solve_fixed_point(lambda x: x + Series.monomial(x.order, x.order), 4)


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------


@given(series_st(), series_st())
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(series_st(), series_st())
def test_mul_matches_naive(a, b):
    assert (a * b).coeffs == naive_mul(a.coeffs, b.coeffs)


@given(series_st(), series_st(unit=True))
def test_div_roundtrip(a, b):
    assert (a / b) * b == a


@given(series_st(const=1))
def test_sqrt_roundtrip(a):
    s = a.sqrt()
    assert s * s == a
    assert s.coeff(0) == 1


@given(series_st(const=0), series_st(const=0), series_st(order=ORDER))
def test_compose_associative(f, g, h):
    assert h.compose(g).compose(f) == h.compose(g.compose(f))


@given(series_st())
def test_compose_identity(a):
    Z = z()
    assert a.compose(Z) == a
    if a.coeff(0) == 0:
        assert Z.compose(a) == a


@settings(max_examples=50)
@given(
    st.lists(st.integers(-(10**40), 10**40), min_size=1, max_size=80),
    st.lists(st.integers(-(10**40), 10**40), min_size=1, max_size=80),
    st.integers(1, 160),
)
def test_kronecker_convolution(a, b, size):
    ref = [0] * size
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < size:
                ref[i + j] += x * y
    assert _convolve(a, b, size) == ref


# ---------------------------------------------------------------------------
# bivariate
# ---------------------------------------------------------------------------


def _biv_naive_mul(a, b, order):
    out = {}
    for n1, row1 in enumerate(a.coeffs):
        for n2, row2 in enumerate(b.coeffs):
            if n1 + n2 > order:
                continue
            for j1, x in enumerate(row1):
                for j2, y in enumerate(row2):
                    key = (n1 + n2, j1 + j2)
                    out[key] = out.get(key, 0) + x * y
    return out


def biv_st(order=5, unit=False):
    def build(rows):
        rows = [r[: n + 1] for n, r in enumerate(rows)]
        if unit and rows[0][0] == 0:
            rows[0][0] = Fraction(1)
        return BivarSeries(rows, order)

    return st.lists(
        st.lists(rationals, min_size=order + 1, max_size=order + 1),
        min_size=order + 1,
        max_size=order + 1,
    ).map(build)


@given(biv_st(), biv_st())
def test_bivariate_mul_matches_naive(a, b):
    prod = a * b
    ref = _biv_naive_mul(a, b, 5)
    for n in range(6):
        for j, c in enumerate(prod.coeff(n)):
            assert c == ref.get((n, j), 0)


@given(biv_st(), biv_st(unit=True))
def test_bivariate_div_roundtrip(a, b):
    assert (a / b) * b == a


@given(biv_st())
def test_bivariate_specialization_is_ring_map(a):
    b = a * a + 3
    assert b.at_u(Fraction(2, 3)) == a.at_u(Fraction(2, 3)) ** 2 + 3


def test_bivariate_basics():
    B = BivarSeries
    zu = B.zu(3)
    assert (zu * zu).coeff(2) == [0, 0, 1]
    assert (zu * zu).d_du().coeff(2) == [0, 2, 0]
    assert (zu + B.z(3)).at_u(1) == 2 * Series.z(3)
    with pytest.raises(ValueError):
        B([[0, 1]], 2)  # u without z
    with pytest.raises(ValueError):
        B.monomial(1, 2, 3)


def test_bivariate_sqrt():
    zu = BivarSeries.zu(6)
    s = (1 + zu) ** 2
    assert s.sqrt() == 1 + zu
    r = (1 - 4 * zu).sqrt()
    assert r * r == 1 - 4 * zu
