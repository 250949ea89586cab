"""Generating functions for Retakh paths, computed exactly.

Every expression written in the variable ``v`` (where ``z = v/(1+v+v^2)``)
is first built as a power series in ``v`` and then re-expanded in ``z`` by
composing with :func:`v_series`.  Coefficient ``[z^(n+1)]`` always refers
to trees with ``n + 1`` nodes, i.e. paths of semilength ``n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import asymptotics, paths
from .config import DEFAULT_ORDER
from .series import BivarSeries, Series, solve_fixed_point

__all__ = [
    "ConsistencyError",
    "HeightReport",
    "LeafReport",
    "motzkin_series",
    "motzkin_closed_form",
    "motzkin_number",
    "solve_fg",
    "total_gf",
    "v_series",
    "in_z",
    "g_k",
    "f_k",
    "height_le_gf",
    "divisor_count",
    "divisor_counts",
    "divisor_series",
    "lambert_series",
    "height_numerator_series",
    "trinomial",
    "trinomial_row",
    "height_coeff_formula",
    "avg_height_exact",
    "leaves_system",
    "leaves_closed_form",
    "leaves_total_gf",
    "leaves_numerator",
    "r_series",
    "leaves_coeff_formula",
    "avg_leaves_exact",
]


class ConsistencyError(RuntimeError):
    """Two routes to the same series disagreed."""


# ---------------------------------------------------------------------------
# Motzkin numbers and the F/G system
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def motzkin_series(order: int) -> Series:
    """Solve ``M = 1 + z M + z^2 M^2`` by fixed-point iteration."""

    def step(M: Series) -> Series:
        z = Series.z(M.order)
        return 1 + z * M * (1 + z * M)

    return solve_fixed_point(step, order)


def motzkin_closed_form(order: int) -> Series:
    """``(1 - z - sqrt(1 - 2z - 3z^2)) / (2 z^2)`` via the series square root."""
    z = Series.z(order + 2)
    root = (1 - 2 * z - 3 * z * z).sqrt()
    return (1 - z - root).shift(-2) / 2


@lru_cache(maxsize=None)
def _motzkin_table(n: int) -> tuple[int, ...]:
    table = [1, 1]
    for k in range(2, n + 1):
        table.append(((2 * k + 1) * table[k - 1] + 3 * (k - 1) * table[k - 2]) // (k + 2))
    return tuple(table[: n + 1])


def motzkin_number(n: int) -> int:
    """``M_n`` from the holonomic recurrence (fast path for large n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _motzkin_table(max(n, 1))[n]


@lru_cache(maxsize=None)
def solve_fg(order: int) -> tuple[Series, Series]:
    """Joint solution of ``F = zG/(1-G)``, ``G = z/(1-F)``.

    Raises :class:`ConsistencyError` unless ``F == z^2 M(z)``.
    """

    def step(state: tuple[Series, Series]) -> tuple[Series, Series]:
        F, G = state
        z = Series.z(F.order)
        return z * G / (1 - G), z / (1 - F)

    F, G = solve_fixed_point(step, order, (Series.zero(0), Series.zero(0)))
    if F != motzkin_series(order).shift(2):
        raise ConsistencyError("F differs from z^2 M(z)")
    return F, G


def total_gf(order: int) -> Series:
    """Root, then a sequence of level-1 leaves and triangle trees."""
    F, _ = solve_fg(order)
    z = Series.z(order)
    total = z / (1 - z) / (1 - F / (1 - z))
    if total != motzkin_series(order).shift(1):
        raise ConsistencyError("total generating function differs from z M(z)")
    return total


# ---------------------------------------------------------------------------
# the v-substitution
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def v_series(order: int) -> Series:
    """``v(z)`` solving ``v = z (1 + v + v^2)``; equals ``z M(z)``."""

    def step(v: Series) -> Series:
        return Series.z(v.order) * (1 + v + v * v)

    return solve_fixed_point(step, order)


# beyond this the O(N^2) table of big integers costs more memory than it saves
_POWER_TABLE_MAX = 300


@lru_cache(maxsize=8)
def _v_power_table(order: int) -> tuple[tuple[int, ...], ...]:
    v = v_series(order)
    table = [Series.one(order).int_coeffs()]
    p = Series.one(order)
    for _ in range(order):
        p = p * v
        table.append(p.int_coeffs())
    return tuple(tuple(row) for row in table)


def in_z(expr_in_v: Series) -> Series:
    """Re-expand a series in ``v`` as a series in ``z``.

    Same result as ``expr_in_v.compose(v_series(N))``, but sums against a
    cached table of the powers ``v^k`` since many expressions share one
    order.
    """
    N = expr_in_v.order
    if N > _POWER_TABLE_MAX:
        return expr_in_v.compose(v_series(N))
    table = _v_power_table(N)
    den = math.lcm(1, *(c.denominator for c in expr_in_v.coeffs))
    scaled = [int(c * den) for c in expr_in_v.coeffs]
    out = [0] * (N + 1)
    for k, c in enumerate(scaled):
        if c:
            row = table[k]
            # v^k starts at z^k
            for n in range(k, N + 1):
                out[n] += c * row[n]
    return Series._raw(N, out, den)


def _v(order: int) -> Series:
    return Series.z(order)


def _vpow(k: int, order: int) -> Series:
    return Series.monomial(k, order)


def g_k(k: int, order: int) -> Series:
    """``G_k = v/(1+v) * (1 - v^(2k)) / (1 - v^(2k+1))`` expanded in z."""
    if k < 1:
        raise ValueError("k must be at least 1")
    v = _v(order)
    expr = v / (1 + v) * (1 - _vpow(2 * k, order)) / (1 - _vpow(2 * k + 1, order))
    return in_z(expr)


def f_k(k: int, order: int) -> Series:
    """Triangle trees of height at most 2k (in nodes):
    ``v^2/(1+v+v^2) * (1 - v^(2k)) / (1 - v^(2k+2))``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    v = _v(order)
    expr = v * v / (1 + v + v * v) * (1 - _vpow(2 * k, order)) / (1 - _vpow(2 * k + 2, order))
    return in_z(expr)


def height_le_gf(h: int, order: int) -> Series:
    """Trees of height at most ``2h`` edges (h >= 1), or at most 1 edge (h = 0)."""
    if h < 0:
        raise ValueError("h must be non-negative")
    v = _v(order)
    if h == 0:
        return in_z(v / (1 + v * v))
    return in_z(v * (1 - _vpow(2 * h + 2, order)) / (1 - _vpow(2 * h + 4, order)))


# ---------------------------------------------------------------------------
# divisor sums and the height numerator
# ---------------------------------------------------------------------------


def divisor_count(h: int) -> int:
    if h < 1:
        raise ValueError("divisor count needs h >= 1")
    count = 0
    r = math.isqrt(h)
    for d in range(1, r + 1):
        if h % d == 0:
            count += 2
    return count - (1 if r * r == h else 0)


@lru_cache(maxsize=None)
def divisor_counts(limit: int) -> tuple[int, ...]:
    """``d(0..limit)`` by sieve, with the placeholder ``d(0) = 0``."""
    d = [0] * (limit + 1)
    for i in range(1, limit + 1):
        for j in range(i, limit + 1, i):
            d[j] += 1
    return tuple(d)


def divisor_series(order: int) -> Series:
    """``sum_k d(k) v^(2k)`` truncated at ``v^order``."""
    d = divisor_counts(order // 2)
    coeffs = [0] * (order + 1)
    for k in range(1, order // 2 + 1):
        coeffs[2 * k] = d[k]
    return Series(coeffs, order)


def lambert_series(order: int) -> Series:
    """``sum_{h>=1} v^(2h) / (1 - v^(2h))``; terms with ``2h > order`` vanish."""
    total = Series.zero(order)
    for h in range(1, order // 2 + 1):
        p = _vpow(2 * h, order)
        total = total + p / (1 - p)
    return total


def height_numerator_series(order: int) -> Series:
    """``S = -2v + 2(1 - v^2)/v * sum_h v^(2h)/(1 - v^(2h))`` expanded in z.

    ``[z^(n+1)] S`` is the total height of the even-height paths of
    semilength n.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    v = _v(order)
    lam_over_v = divisor_series(order + 1).shift(-1)
    return in_z(-2 * v + 2 * (1 - v * v) * lam_over_v)


# ---------------------------------------------------------------------------
# trinomial coefficients
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def trinomial_row(n: int) -> tuple[int, ...]:
    """``[v^k] (1+v+v^2)^n`` for k = 0..2n.

    Uses ``k a_k = (n-k+1) a_(k-1) + (2n-k+2) a_(k-2)``, which follows from
    ``phi P' = n phi' P`` for ``P = phi^n``; the left half is computed and
    mirrored.
    """
    if n < 0:
        raise ValueError("row index must be non-negative")
    row = [1] + [0] * (2 * n)
    if n:
        row[1] = n
    for k in range(2, n + 1):
        row[k] = ((n - k + 1) * row[k - 1] + (2 * n - k + 2) * row[k - 2]) // k
    for k in range(n + 1, 2 * n + 1):
        row[k] = row[2 * n - k]
    return tuple(row)


def trinomial(n: int, k: int) -> int:
    if n < 0:
        raise ValueError("row index must be non-negative")
    if not 0 <= k <= 2 * n:
        return 0
    return trinomial_row(n)[k]


def height_coeff_formula(n: int) -> int:
    """``[z^(n+1)] (1-v^2)/v * sum_h v^(2h)/(1-v^(2h))`` as a finite sum
    of divisor counts times trinomial coefficients."""
    if n < 1:
        raise ValueError("n must be at least 1")
    hmax = (n + 2) // 2
    d = divisor_counts(hmax)
    return sum(
        d[h] * (trinomial(n, n + 2 - 2 * h) - 2 * trinomial(n, n - 2 * h) + trinomial(n, n - 2 - 2 * h))
        for h in range(1, hmax + 1)
    )


def _even_height_total_formula(n: int) -> int:
    return 2 * height_coeff_formula(n) - 2 * motzkin_number(n)


# ---------------------------------------------------------------------------
# average height
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeightReport:
    """Average height over Retakh paths of semilength ``n``.

    Only even-height paths carry height mass (the one height-1 path is not
    counted), and the normalizer is ``M_n``, the number of such paths.
    ``asymptotic_average`` is a float approximation ``2 sqrt(pi n / 3)``.
    """

    n: int
    exact_total_even_height: int
    exact_average: Fraction
    asymptotic_average: float
    method: str
    normalizer: str = "M_n"

    @property
    def ratio(self) -> float:
        return float(self.exact_average) / self.asymptotic_average


def avg_height_exact(
    n: int, method: str = "auto", order: int | None = None, budget: int | None = None
) -> HeightReport:
    """Exact average height; ``method`` is series, formula, brute or auto."""
    if n < 1:
        raise ValueError("n must be at least 1")
    limit = DEFAULT_ORDER if order is None else order
    if method == "auto":
        method = "series" if n + 1 <= limit else "formula"
    if method == "series":
        total = height_numerator_series(n + 1).coeff(n + 1)
    elif method == "formula":
        total = _even_height_total_formula(n)
    elif method == "brute":
        total = paths.total_even_height(n, budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    total = int(total)
    return HeightReport(
        n=n,
        exact_total_even_height=total,
        exact_average=Fraction(total, motzkin_number(n)),
        asymptotic_average=asymptotics.avg_height_asym(n),
        method=method,
    )


# ---------------------------------------------------------------------------
# leaves
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def leaves_system(order: int) -> tuple[BivarSeries, BivarSeries]:
    """``F = zG/(1-G)``, ``G = zu + zF/(1-F)``, with u marking leaves."""

    def step(state: tuple[BivarSeries, BivarSeries]) -> tuple[BivarSeries, BivarSeries]:
        F, G = state
        z = BivarSeries.z(F.order)
        zu = BivarSeries.zu(F.order)
        return z * G / (1 - G), zu + z * F / (1 - F)

    zero = BivarSeries.zero(0)
    return solve_fixed_point(step, order, (zero, zero))


def leaves_closed_form(order: int, check: bool = True) -> BivarSeries:
    """The quadratic-root expression for ``F(z, u)``.

    With ``check`` (default) the result is compared against
    :func:`leaves_system` and a :class:`ConsistencyError` raised on mismatch.
    """
    z = BivarSeries.z(order)
    zu = BivarSeries.zu(order)
    m = BivarSeries.monomial

    def t(n: int, j: int, c: int = 1) -> BivarSeries:
        return m(n, j, order, c)

    radicand = (
        1 - 2 * zu - 2 * t(2, 0) - 2 * t(2, 1) + t(2, 2) - 2 * t(3, 1) + 2 * t(3, 2)
        + t(4, 0) - 2 * t(4, 1) + t(4, 2)
    )
    numerator = 1 - zu - t(2, 0) + t(2, 1) - radicand.sqrt()
    F = numerator / (2 * (1 - zu + z))
    if check and F != leaves_system(order)[0]:
        raise ConsistencyError("closed-form F(z,u) differs from the fixed-point solution")
    return F


def leaves_total_gf(order: int) -> BivarSeries:
    """``z/(1-zu) * 1/(1 - F/(1-zu)) + zu - z``; ``[z^(n+1) u^l]`` counts
    trees with n+1 nodes and l leaves."""
    F, _ = leaves_system(order)
    z = BivarSeries.z(order)
    zu = BivarSeries.zu(order)
    return z / (1 - zu) / (1 - F / (1 - zu)) + zu - z


def leaves_numerator(order: int) -> Series:
    """Total leaves by tree size: ``d/du`` of the total GF at ``u = 1``."""
    return leaves_total_gf(order).d_du().at_u(1)


def r_series(order: int) -> Series:
    """``R = v(1+v)(1-v+2v^2-v^3) / ((1-v)(1+v+v^2))`` expanded in z."""
    v = _v(order)
    expr = v * (1 + v) * (1 - v + 2 * v * v - v ** 3) / ((1 - v) * (1 + v + v * v))
    return in_z(expr)


# (1+v)^2 (1-v+2v^2-v^3)
_LEAF_KERNEL = (1, 1, 1, 2, 0, -1)


def leaves_coeff_formula(n: int) -> int:
    """``[z^(n+1)] R`` through trinomial coefficients.

    Lagrange inversion turns the extraction into
    ``[v^n] (1+v)^2 (1-v+2v^2-v^3) (1+v+v^2)^(n-1)`` for ``n >= 1``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    return sum(c * trinomial(n - 1, n - i) for i, c in enumerate(_LEAF_KERNEL))


@dataclass(frozen=True)
class LeafReport:
    """Average leaf count of Retakh trees with ``node_count = n + 1`` nodes.

    The asymptotic side is ``(4/9) * node_count`` (float).
    """

    n: int
    node_count: int
    exact_total_leaves: int
    exact_average: Fraction
    asymptotic_average: float
    method: str

    @property
    def ratio(self) -> float:
        return float(self.exact_average) / self.asymptotic_average


def avg_leaves_exact(
    n: int, method: str = "auto", order: int | None = None, budget: int | None = None
) -> LeafReport:
    """Exact average leaf count; ``method`` is derivative, r-series, formula,
    brute or auto."""
    if n < 0:
        raise ValueError("n must be non-negative")
    limit = DEFAULT_ORDER if order is None else order
    if method == "auto":
        method = "r-series" if n + 1 <= limit else "formula"
    if method == "derivative":
        total = leaves_numerator(n + 1).coeff(n + 1)
    elif method == "r-series":
        total = r_series(n + 1).coeff(n + 1)
    elif method == "formula":
        total = leaves_coeff_formula(n)
    elif method == "brute":
        total = paths.total_leaves(n, budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    total = int(total)
    return LeafReport(
        n=n,
        node_count=n + 1,
        exact_total_leaves=total,
        exact_average=Fraction(total, motzkin_number(n)),
        asymptotic_average=asymptotics.avg_leaves_asym(n + 1),
        method=method,
    )
