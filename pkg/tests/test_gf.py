from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from retakh import gf, paths
from retakh.series import BivarSeries, Series

from oracles import divisors, peak_levels, poly_pow, retakh_words

# Motzkin numbers M_0..M_10; checked against the brute-force oracle below
MOTZKIN = [1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188]


def z(n):
    return Series.z(n)


def test_motzkin_table_matches_brute_force():
    assert [len(retakh_words(n)) for n in range(9)] == MOTZKIN[:9]


def test_motzkin_series():
    assert gf.motzkin_series(5).coeffs == MOTZKIN[:6]
    assert gf.motzkin_series(10).coeff(4) == 9
    assert gf.motzkin_series(100) == gf.motzkin_closed_form(100)


def test_motzkin_satisfies_its_equation():
    M = gf.motzkin_series(80)
    Z = z(80)
    assert 1 + Z * M + Z * Z * M * M == M


def test_sqrt_closed_form_radicand():
    N = 50
    M = gf.motzkin_series(N)
    Z = z(N)
    r = 1 - Z - 2 * Z * Z * M
    assert r * r == 1 - 2 * Z - 3 * Z * Z


def test_motzkin_number_recurrence_matches_series():
    M = gf.motzkin_series(300)
    assert [gf.motzkin_number(n) for n in range(301)] == M.int_coeffs()


def test_shifted_coefficient():
    M = gf.motzkin_series(12)
    zM = M.shift(1)
    assert all(zM.coeff(n + 1) == M.coeff(n) for n in range(12))


def test_solve_fg():
    F, G = gf.solve_fg(50)
    assert F.coeff(2) == 1
    assert F.coeff(1) == 0
    assert F == gf.motzkin_series(50).shift(2)
    assert z(6) * z(6) * gf.motzkin_series(6) == gf.solve_fg(6)[0]
    assert G == z(50) / (1 - F)


def test_total_gf():
    T = gf.total_gf(20)
    assert T.coeff(1) == 1
    assert T.coeff(3) == 2
    assert T.coeff(5) == 9


def test_v_series():
    v = gf.v_series(100)
    assert v.truncate(5).coeffs == [0, 1, 1, 2, 4, 9]
    assert v.coeff(0) == 0
    assert v == gf.motzkin_series(100).shift(1)
    w = z(100)
    assert (w / (1 + w + w * w)).compose(v) == z(100)
    assert (1 + w + w * w).compose(v) == gf.motzkin_series(100)


def test_in_z_matches_compose():
    w = z(40)
    expr = w / (1 + w) * (1 - w**3) / (1 - w**5)
    assert gf.in_z(expr) == expr.compose(gf.v_series(40))


def test_gk_fk_base():
    N = 40
    assert gf.g_k(1, N) == z(N)
    assert gf.f_k(1, N) == z(N) ** 2 / (1 - z(N))
    with pytest.raises(ValueError):
        gf.g_k(0, N)
    with pytest.raises(ValueError):
        gf.f_k(0, N)


def test_gk_recurrence():
    N = 60
    Z = z(N)
    g = [None] + [gf.g_k(k, N) for k in range(1, 22)]
    for k in range(1, 21):
        assert g[k + 1] == Z / (1 - Z * g[k] / (1 - g[k]))


def test_gk_tends_to_g():
    # G_k agrees with G up to the height bound; once 2k exceeds the order they coincide
    N = 30
    assert gf.g_k(20, N) == gf.solve_fg(N)[1]
    assert gf.f_k(20, N) == gf.solve_fg(N)[0]


def _brute_height_le(limit, n):
    return sum(1 for w in retakh_words(n) if max([0] + _levels(w)) <= limit)


def _levels(w):
    out, lvl = [], 0
    for s in w:
        lvl += 1 if s == "U" else -1
        out.append(lvl)
    return out


@pytest.mark.parametrize("h", range(0, 5))
def test_height_le_gf_matches_brute_force(h):
    N = 9
    s = gf.height_le_gf(h, N)
    limit = 1 if h == 0 else 2 * h
    assert [s.coeff(n + 1) for n in range(N)] == [_brute_height_le(limit, n) for n in range(N)]


def test_height_le_gf_examples():
    assert gf.height_le_gf(0, 20) == z(20) / (1 - z(20))
    assert gf.height_le_gf(1, 10).coeff(4) == 4
    assert gf.height_le_gf(25, 50) == gf.v_series(50)
    with pytest.raises(ValueError):
        gf.height_le_gf(-1, 5)


def test_height_le_gf_from_fk():
    N = 30
    Z = z(N)
    for h in range(1, 6):
        F = gf.f_k(h, N)
        assert Z / (1 - Z) / (1 - F / (1 - Z)) == gf.height_le_gf(h, N)


def test_divisor_count():
    assert (gf.divisor_count(1), gf.divisor_count(6), gf.divisor_count(12)) == (1, 4, 6)
    assert [gf.divisor_count(h) for h in range(1, 200)] == [divisors(h) for h in range(1, 200)]
    assert list(gf.divisor_counts(199)[1:]) == [divisors(h) for h in range(1, 200)]
    with pytest.raises(ValueError):
        gf.divisor_count(0)


def test_divisor_series():
    assert gf.divisor_series(10).coeff(8) == 3
    assert gf.divisor_series(10).coeff(7) == 0
    for N in (0, 1, 7, 40, 81):
        assert gf.lambert_series(N) == gf.divisor_series(N)


def test_height_numerator_examples():
    S = gf.height_numerator_series(10)
    assert S.coeff(3) == 2
    assert S.coeff(4) == 6
    assert S.coeff(2) == 0


def test_height_numerator_in_v_telescopes():
    # S as a series in v: 2v^3 + 0 v^5 + ...
    w = z(12)
    S_v = -2 * w + 2 * (1 - w * w) * gf.divisor_series(13).shift(-1)
    assert S_v.coeff(1) == 0
    assert S_v.coeff(3) == 2
    assert S_v.coeff(5) == 0


@pytest.mark.parametrize("n", range(1, 11))
def test_height_numerator_matches_oracle(n):
    S = gf.height_numerator_series(11)
    assert S.coeff(n + 1) == paths.total_even_height(n) == paths.total_height(n) - 1


def test_trinomial_examples():
    assert gf.trinomial(2, 2) == 3
    assert all(gf.trinomial(n, 0) == 1 for n in range(10))
    assert sum(gf.trinomial(5, k) for k in range(-3, 15)) == 243
    assert gf.trinomial(3, -1) == 0 and gf.trinomial(3, 7) == 0


@pytest.mark.parametrize("n", range(0, 21))
def test_trinomial_matches_polynomial_power(n):
    assert list(gf.trinomial_row(n)) == poly_pow([1, 1, 1], n)


@given(st.integers(0, 120))
def test_trinomial_row_invariants(n):
    row = gf.trinomial_row(n)
    assert row == row[::-1]
    assert sum(row) == 3**n
    nxt = gf.trinomial_row(n + 1)
    for k in range(2 * n + 3):
        assert nxt[k] == gf.trinomial(n, k) + gf.trinomial(n, k - 1) + gf.trinomial(n, k - 2)


def test_height_coeff_formula_examples():
    assert gf.height_coeff_formula(2) == 3
    assert 2 * 3 - 2 * MOTZKIN[2] == gf.height_numerator_series(3).coeff(3)
    with pytest.raises(ValueError):
        gf.height_coeff_formula(0)


def test_height_coeff_formula_is_the_raw_extraction():
    # [z^(n+1)] (1-v^2)/v * sum_h v^(2h)/(1-v^(2h)), extracted directly from series
    N = 40
    w = z(N)
    raw = gf.in_z((1 - w * w) * gf.divisor_series(N + 1).shift(-1))
    assert [gf.height_coeff_formula(n) for n in range(1, N)] == [raw.coeff(n + 1) for n in range(1, N)]


def test_avg_height_exact_examples():
    assert gf.avg_height_exact(3).exact_average == Fraction(3, 2)
    assert gf.avg_height_exact(2).exact_average == 1
    assert gf.avg_height_exact(1).exact_average == 0
    rep = gf.avg_height_exact(3)
    assert rep.normalizer == "M_n"
    assert rep.exact_total_even_height == 6


@pytest.mark.parametrize("n", [1, 5, 9, 12])
def test_avg_height_methods_agree(n):
    methods = ["series", "formula", "brute"]
    reps = [gf.avg_height_exact(n, method=m) for m in methods]
    assert len({r.exact_average for r in reps}) == 1


def test_avg_height_auto_switches_route():
    assert gf.avg_height_exact(5, order=200).method == "series"
    assert gf.avg_height_exact(500, order=200).method == "formula"
    with pytest.raises(ValueError):
        gf.avg_height_exact(3, method="guess")


# ---------------------------------------------------------------------------
# leaves
# ---------------------------------------------------------------------------


def test_leaves_system_basics():
    F, G = gf.leaves_system(12)
    assert F.coeff_poly(2) == [0, 1]
    assert G.coeff_poly(0) == []
    assert F.at_u(1) == gf.solve_fg(12)[0]


def test_leaves_system_specialization_order40():
    F, _ = gf.leaves_system(40)
    assert F.at_u(1) == gf.solve_fg(40)[0]


def test_leaves_closed_form():
    N = 30
    F = gf.leaves_closed_form(N)
    assert F == gf.leaves_system(N)[0]
    assert F.at_u(1) == gf.motzkin_series(N).shift(2)
    assert F.at_u(0) == Series.zero(N)


def test_leaves_total_gf_examples():
    T = gf.leaves_total_gf(8)
    assert T.coeff_poly(1) == [0, 1]
    assert T.coeff_poly(3) == [0, 1, 1]
    assert sum(T.coeff(5)) == 9
    assert T.at_u(1) == gf.motzkin_series(8).shift(1)


@pytest.mark.parametrize("n", range(0, 9))
def test_leaf_distribution_matches_oracle(n):
    T = gf.leaves_total_gf(9)
    words = retakh_words(n)
    dist = Counter(len(peak_levels(w)) for w in words) if n else Counter({1: 1})
    assert T.coeff(n + 1) == [dist.get(l, 0) for l in range(n + 2)]


def test_leaves_numerator():
    L = gf.leaves_numerator(12)
    assert L.coeff(3) == 3
    assert L.coeff(1) == 1
    assert L == gf.r_series(12)
    assert [L.coeff(n + 1) for n in range(11)] == [paths.total_leaves(n) for n in range(11)]


def test_leaves_coeff_formula():
    R = gf.r_series(60)
    assert [gf.leaves_coeff_formula(n) for n in range(60)] == [R.coeff(n + 1) for n in range(60)]


def test_avg_leaves_exact():
    rep = gf.avg_leaves_exact(2)
    assert rep.node_count == 3
    assert rep.exact_total_leaves == 3
    assert rep.exact_average == Fraction(3, 2)
    for n in (0, 4, 9):
        vals = {gf.avg_leaves_exact(n, method=m).exact_average for m in ("derivative", "r-series", "formula", "brute")}
        assert len(vals) == 1


def test_bivariate_total_has_degree_bound():
    T = gf.leaves_total_gf(10)
    assert isinstance(T, BivarSeries)
    for n in range(11):
        assert len(T.coeff_poly(n)) <= n + 1


@pytest.mark.slow
def test_leaves_formula_equals_r_series_at_1000():
    R = gf.r_series(1001)
    assert R.coeff(1001) == gf.leaves_coeff_formula(1000)
