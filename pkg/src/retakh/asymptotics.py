"""Leading-order asymptotics and their comparison with exact values.

The formulas are plain floats.  Anything of size ~3^n is evaluated in log
space (``log_*`` helpers) so that n in the thousands does not overflow;
ratios against exact big integers are formed from logarithms as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import gf

__all__ = [
    "UNRESTRICTED_LEAF_CONSTANT",
    "RETAKH_LEAF_CONSTANT",
    "AsymptoticComparison",
    "log_motzkin_asym",
    "motzkin_asym",
    "avg_height_asym",
    "motzkin_path_height_ref",
    "avg_leaves_asym",
    "log_height_numerator_asym_coeff",
    "height_numerator_asym_coeff",
    "exact_log",
    "compare_motzkin",
    "compare_height",
    "compare_leaves",
    "compare_height_numerator",
    "scan",
    "DEFAULT_LADDER",
]

RETAKH_LEAF_CONSTANT = Fraction(4, 9)
# plane trees without restriction (Narayana numbers), for reference only
UNRESTRICTED_LEAF_CONSTANT = Fraction(1, 2)

DEFAULT_LADDER = (125, 250, 500, 1000, 2000)


def log_motzkin_asym(n: int) -> float:
    """``log(3^(n+1/2) / (2 sqrt(pi) n^(3/2)))``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return (n + 0.5) * math.log(3) - math.log(2) - 0.5 * math.log(math.pi) - 1.5 * math.log(n)


def motzkin_asym(n: int) -> float:
    """Approximation to ``[z^n] z M(z) = M_(n-1)``.  Overflows past n ~ 640."""
    return math.exp(log_motzkin_asym(n))


def avg_height_asym(n: int) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2 * math.sqrt(math.pi * n / 3)


def motzkin_path_height_ref(n: int) -> float:
    """Average height of ordinary Motzkin paths, ``sqrt(pi n / 3)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return math.sqrt(math.pi * n / 3)


def avg_leaves_asym(node_count: int) -> float:
    if node_count < 1:
        raise ValueError("node_count must be at least 1")
    return float(RETAKH_LEAF_CONSTANT) * node_count


def log_height_numerator_asym_coeff(n: int) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    return n * math.log(3) - math.log(n)


def height_numerator_asym_coeff(n: int) -> float:
    """``3^n / n``, the coefficient of ``-log(1 - 3z)``."""
    return math.exp(log_height_numerator_asym_coeff(n))


def exact_log(x: Fraction | int) -> float:
    """Natural log of a positive exact rational of any size."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of a non-positive value")
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass(frozen=True)
class AsymptoticComparison:
    """An exact value next to its leading-order approximation.

    The approximation is kept as its logarithm so that huge magnitudes stay
    representable; ``ratio`` is recomputed from the two stored fields.
    """

    n: int
    exact: Fraction
    log_asymptotic: float

    @property
    def asymptotic(self) -> float:
        try:
            return math.exp(self.log_asymptotic)
        except OverflowError:
            return math.inf

    @property
    def exact_real(self) -> float:
        try:
            return float(self.exact)
        except OverflowError:
            return math.inf

    @property
    def ratio(self) -> float:
        return math.exp(exact_log(self.exact) - self.log_asymptotic)

    @property
    def deviation(self) -> float:
        return abs(self.ratio - 1)


def compare_motzkin(n: int) -> AsymptoticComparison:
    """``M_(n-1)`` against ``3^(n+1/2) / (2 sqrt(pi) n^(3/2))``."""
    return AsymptoticComparison(n, Fraction(gf.motzkin_number(n - 1)), log_motzkin_asym(n))


def compare_height(n: int, method: str = "formula") -> AsymptoticComparison:
    report = gf.avg_height_exact(n, method=method)
    return AsymptoticComparison(n, report.exact_average, math.log(avg_height_asym(n)))


def compare_leaves(n: int, method: str = "formula") -> AsymptoticComparison:
    """Average leaves of trees with ``n + 1`` nodes against ``(4/9)(n+1)``."""
    report = gf.avg_leaves_exact(n, method=method)
    return AsymptoticComparison(n, report.exact_average, math.log(avg_leaves_asym(n + 1)))


def compare_height_numerator(n: int) -> AsymptoticComparison:
    """``[z^(n+1)] S`` against ``3^(n+1) / (n+1)``."""
    exact = gf._even_height_total_formula(n)
    return AsymptoticComparison(n, Fraction(exact), log_height_numerator_asym_coeff(n + 1))


def scan(
    compare: Callable[[int], AsymptoticComparison], ladder: Iterable[int] = DEFAULT_LADDER
) -> list[AsymptoticComparison]:
    return [compare(n) for n in ladder]


def non_increasing_deviation(rows: Sequence[AsymptoticComparison], allowed_violations: int = 0) -> bool:
    """Is ``|ratio - 1|`` non-increasing along the ladder (up to a few rungs)?"""
    violations = sum(
        1 for a, b in zip(rows, rows[1:]) if b.deviation > a.deviation
    )
    return violations <= allowed_violations
