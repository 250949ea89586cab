"""Truncated formal power series with exact rational coefficients.

Two families live here:

* :class:`Series` -- univariate series in ``z`` truncated at an explicit
  order ``N`` (coefficients ``c_0 .. c_N``).
* :class:`BivarSeries` -- series in ``z`` whose coefficients are
  polynomials in a marking variable ``u``, with ``deg_u [z^n] <= n``.

Both store an integer coefficient vector over one positive common
denominator, kept in lowest terms, so every coefficient handed out is an
exact :class:`fractions.Fraction`.  Products go through a Kronecker
(big-integer packing) convolution, which keeps order-2000 arithmetic on
3^n-sized integers cheap.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence, TypeVar, Union

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - plain ints are correct, just slower
    _mpz = int

__all__ = [
    "Series",
    "BivarSeries",
    "OrderMismatchError",
    "NonUnitError",
    "BranchError",
    "CompositionError",
    "DivergenceError",
    "solve_fixed_point",
]

Scalar = Union[int, Fraction]


class OrderMismatchError(ValueError):
    """Arithmetic between series truncated at different orders."""


class NonUnitError(ZeroDivisionError):
    """Division by a series whose constant term is not invertible."""


class BranchError(ValueError):
    """Square root requested for a series with constant term other than 1."""


class CompositionError(ValueError):
    """Inner series of a composition has a nonzero constant term."""


class DivergenceError(ArithmeticError):
    """Fixed-point iteration failed to converge to a self-consistent series."""


# ---------------------------------------------------------------------------
# integer convolution kernel
# ---------------------------------------------------------------------------

_DIRECT_CUTOFF = 24


def _convolve(a: Sequence[int], b: Sequence[int], size: int) -> list[int]:
    """First ``size`` coefficients of the product of integer polynomials."""
    a = a[:size]
    b = b[:size]
    la, lb = len(a), len(b)
    if min(la, lb) <= _DIRECT_CUTOFF:
        out = [0] * size
        if la > lb:
            a, b, la, lb = b, a, lb, la
        for i, x in enumerate(a):
            if x:
                for j in range(min(lb, size - i)):
                    out[i + j] += x * b[j]
        return out
    ma = max(map(abs, a))
    mb = max(map(abs, b))
    if not ma or not mb:
        return [0] * size
    bound = ma * mb * min(la, lb)
    nbytes = (bound.bit_length() + 2 + 7) // 8
    packed_a = _pack(a, nbytes)
    packed_b = _pack(b, nbytes)
    product = int(_mpz(packed_a) * _mpz(packed_b))
    width = 8 * nbytes
    bias_digit = bytes(nbytes - 1) + b"\x80"
    bias = int.from_bytes(bias_digit * size, "little")
    low = (product + bias) & ((1 << (width * size)) - 1)
    raw = low.to_bytes(nbytes * size, "little")
    half = 1 << (width - 1)
    return [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(size)
    ]


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _normalize(nums: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den == 0:
        raise ZeroDivisionError("zero common denominator")
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = math.gcd(den, *nums)
    if g != 1:
        nums = [x // g for x in nums]
        den //= g
    return tuple(nums), den


def _to_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def _common(values: Iterable[Scalar]) -> tuple[tuple[int, ...], int]:
    fracs = [_to_fraction(x) for x in values]
    den = math.lcm(1, *(f.denominator for f in fracs))
    return _normalize([f.numerator * (den // f.denominator) for f in fracs], den)


T = TypeVar("T", bound="_Truncated")


class _Truncated:
    """Shared machinery: a flat integer vector over a common denominator.

    Subclasses fix the layout (how coefficients map onto the flat vector)
    and supply ``_mul_flat``; the Newton-style inverse and square root are
    written once here in terms of truncate/extend/mul.
    """

    __slots__ = ("_order", "_num", "_den")

    _order: int
    _num: tuple[int, ...]
    _den: int

    @classmethod
    def _raw(cls: type[T], order: int, nums: Sequence[int], den: int = 1) -> T:
        obj = object.__new__(cls)
        obj._order = order
        obj._num, obj._den = _normalize(nums, den)
        return obj

    @property
    def order(self) -> int:
        return self._order

    # layout hooks -------------------------------------------------------
    @classmethod
    def _flat_size(cls, order: int) -> int:
        raise NotImplementedError

    def _mul_flat(self, other_num: Sequence[int]) -> list[int]:
        raise NotImplementedError

    def truncate(self: T, order: int) -> T:
        raise NotImplementedError

    def extend(self: T, order: int) -> T:
        raise NotImplementedError

    def _const(self) -> Fraction:
        raise NotImplementedError

    # helpers --------------------------------------------------------------
    def _check(self, other: object) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other._order != self._order:  # type: ignore[attr-defined]
            raise OrderMismatchError(
                f"order mismatch: {self._order} vs {other._order}"  # type: ignore[attr-defined]
            )

    def _lift(self: T, other: object) -> T:
        if isinstance(other, type(self)):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.constant(other, self._order)
        if isinstance(other, _Truncated):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        return NotImplemented  # type: ignore[return-value]

    @classmethod
    def constant(cls: type[T], c: Scalar, order: int) -> T:
        c = _to_fraction(c)
        nums = [0] * cls._flat_size(order)
        nums[0] = c.numerator
        return cls._raw(order, nums, c.denominator)

    @classmethod
    def zero(cls: type[T], order: int) -> T:
        return cls._raw(order, [0] * cls._flat_size(order))

    @classmethod
    def one(cls: type[T], order: int) -> T:
        return cls.constant(1, order)

    def is_zero(self) -> bool:
        return not any(self._num)

    # arithmetic -----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return (self._order, self._num, self._den) == (
            other._order, other._num, other._den  # type: ignore[attr-defined]
        )

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._order, self._num, self._den))

    def __neg__(self: T) -> T:
        return self._raw(self._order, [-x for x in self._num], self._den)

    def __pos__(self: T) -> T:
        return self

    def __add__(self: T, other: object) -> T:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        den = math.lcm(self._den, other._den)
        sa, sb = den // self._den, den // other._den
        return self._raw(
            self._order, [x * sa + y * sb for x, y in zip(self._num, other._num)], den
        )

    __radd__ = __add__

    def __sub__(self: T, other: object) -> T:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self: T, other: object) -> T:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self: T, other: object) -> T:
        if isinstance(other, (int, Fraction)):
            c = _to_fraction(other)
            return self._raw(
                self._order, [x * c.numerator for x in self._num], self._den * c.denominator
            )
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._raw(self._order, self._mul_flat(other._num), self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self: T, other: object) -> T:
        if isinstance(other, (int, Fraction)):
            c = _to_fraction(other)
            if c == 0:
                raise ZeroDivisionError("division of a series by zero")
            return self._raw(
                self._order, [x * c.denominator for x in self._num], self._den * c.numerator
            )
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self: T, other: object) -> T:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self: T, k: int) -> T:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = self.one(self._order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self: T) -> T:
        """Multiplicative inverse by Newton iteration ``y <- y (2 - a y)``."""
        c0 = self._const()
        if c0 == 0:
            raise NonUnitError("constant term is zero; series is not a unit")
        y = self.constant(1 / c0, 0)
        prec = 0
        while prec < self._order:
            prec = min(2 * prec + 1, self._order)
            y = y.extend(prec)
            a = self.truncate(prec)
            y = y * (2 - a * y)
        return y

    def sqrt(self: T) -> T:
        """Square root with constant term 1.

        Newton steps ``s <- (s + a/s) / 2``; each one doubles the number of
        correct coefficients.
        """
        if self._const() != 1:
            raise BranchError("sqrt needs constant term exactly 1")
        s = self.one(0)
        prec = 0
        while prec < self._order:
            prec = min(2 * prec + 1, self._order)
            s = s.extend(prec)
            s = (s + self.truncate(prec) / s) / 2
        return s


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------


class Series(_Truncated):
    """Univariate series ``c_0 + c_1 z + ... + c_N z^N`` (exact, truncated).

    >>> z = Series.z(4)
    >>> (1 / (1 - z)).coeffs
    [Fraction(1, 1), Fraction(1, 1), Fraction(1, 1), Fraction(1, 1), Fraction(1, 1)]
    """

    __slots__ = ()

    def __init__(self, coeffs: Iterable[Scalar], order: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        if len(coeffs) > order + 1:
            raise ValueError(f"{len(coeffs)} coefficients do not fit order {order}")
        coeffs += [0] * (order + 1 - len(coeffs))
        self._order = order
        self._num, self._den = _common(coeffs)

    @classmethod
    def _flat_size(cls, order: int) -> int:
        return order + 1

    @classmethod
    def z(cls, order: int) -> "Series":
        return cls.monomial(1, order)

    @classmethod
    def monomial(cls, k: int, order: int, c: Scalar = 1) -> "Series":
        """``c z^k``, which is the zero series when ``k > order``."""
        nums = [0] * (order + 1)
        c = _to_fraction(c)
        if 0 <= k <= order:
            nums[k] = c.numerator
        return cls._raw(order, nums, c.denominator)

    @classmethod
    def poly(cls, coeffs: Iterable[Scalar], order: int) -> "Series":
        """A polynomial reduced modulo ``z^(order+1)``."""
        return cls(list(coeffs)[: order + 1], order)

    @property
    def coeffs(self) -> list[Fraction]:
        return [Fraction(x, self._den) for x in self._num]

    def coeff(self, n: int) -> Fraction:
        if not 0 <= n <= self._order:
            raise IndexError(f"coefficient index {n} outside 0..{self._order}")
        return Fraction(self._num[n], self._den)

    __getitem__ = coeff

    def is_integral(self) -> bool:
        return self._den == 1

    def int_coeffs(self) -> list[int]:
        if self._den != 1:
            raise ValueError("series has non-integral coefficients")
        return list(self._num)

    def _const(self) -> Fraction:
        return Fraction(self._num[0], self._den)

    def _mul_flat(self, other_num: Sequence[int]) -> list[int]:
        return _convolve(self._num, other_num, self._order + 1)

    def truncate(self, order: int) -> "Series":
        if order > self._order:
            raise ValueError(f"cannot truncate order {self._order} up to {order}")
        return self._raw(order, self._num[: order + 1], self._den)

    def extend(self, order: int) -> "Series":
        """Pad with zero coefficients (or truncate) to ``order``."""
        if order <= self._order:
            return self.truncate(order)
        return self._raw(order, self._num + (0,) * (order - self._order), self._den)

    def valuation(self) -> int | None:
        for i, x in enumerate(self._num):
            if x:
                return i
        return None

    def shift(self, k: int) -> "Series":
        """Multiply by ``z^k``.

        Positive ``k`` keeps the order and drops what falls off the end;
        negative ``k`` divides by ``z^-k`` (those low coefficients must
        vanish) and lowers the order by ``-k``.
        """
        if k >= 0:
            nums = ((0,) * k + self._num)[: self._order + 1]
            return self._raw(self._order, nums, self._den)
        k = -k
        if k > self._order:
            raise ValueError("shift would leave no coefficients")
        if any(self._num[:k]):
            raise ValueError(f"series is not divisible by z^{k}")
        return self._raw(self._order - k, self._num[k:], self._den)

    def compose(self, inner: "Series") -> "Series":
        """``self(inner(z))`` by Horner's rule; ``inner`` needs ``[z^0] = 0``."""
        self._check(inner)
        if inner._num[0]:
            raise CompositionError("inner series must have zero constant term")
        N = self._order
        result = Series.zero(N)
        for k in range(N, -1, -1):
            result = result * inner + Fraction(self._num[k], self._den)
        return result

    def __call__(self, inner: "Series") -> "Series":
        return self.compose(inner)

    def to_str(self, var: str = "z") -> str:
        """Render as ``c0 + c1*z + ... + cN*z^N`` with exact ``p/q`` terms."""
        parts = []
        for n, c in enumerate(self.coeffs):
            if n == 0:
                parts.append(str(c))
            elif n == 1:
                parts.append(f"{c}*{var}")
            else:
                parts.append(f"{c}*{var}^{n}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Series({[str(c) for c in self.coeffs]}, order={self._order})"


# ---------------------------------------------------------------------------
# bivariate: z-series with polynomial-in-u coefficients
# ---------------------------------------------------------------------------


class BivarSeries(_Truncated):
    """Series in ``z`` with coefficients in ``Q[u]``, truncated at z-order N.

    Coefficient ``[z^n]`` is a polynomial of u-degree at most ``n``.  The
    flat layout puts ``[z^n u^j]`` at index ``n*(N+1) + j``; because of the
    degree bound, products never spill between z-blocks that are kept.
    """

    __slots__ = ()

    def __init__(self, coeffs: Iterable[Iterable[Scalar]], order: int | None = None):
        rows = [list(r) for r in coeffs]
        if order is None:
            order = len(rows) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        if len(rows) > order + 1:
            raise ValueError(f"{len(rows)} z-coefficients do not fit order {order}")
        rows += [[] for _ in range(order + 1 - len(rows))]
        width = order + 1
        flat: list[Scalar] = [0] * (width * width)
        for n, row in enumerate(rows):
            while row and row[-1] == 0:
                row.pop()
            if len(row) > n + 1:
                raise ValueError(f"u-degree {len(row) - 1} exceeds z-degree {n}")
            flat[n * width: n * width + len(row)] = row
        self._order = order
        self._num, self._den = _common(flat)

    @classmethod
    def _flat_size(cls, order: int) -> int:
        return (order + 1) ** 2

    @classmethod
    def z(cls, order: int) -> "BivarSeries":
        return cls.monomial(1, 0, order)

    @classmethod
    def zu(cls, order: int) -> "BivarSeries":
        return cls.monomial(1, 1, order)

    @classmethod
    def monomial(cls, n: int, j: int, order: int, c: Scalar = 1) -> "BivarSeries":
        """``c z^n u^j`` (zero when ``n > order``); needs ``j <= n``."""
        if not 0 <= j <= n:
            raise ValueError("u-degree may not exceed z-degree")
        c = _to_fraction(c)
        nums = [0] * cls._flat_size(order)
        if n <= order:
            nums[n * (order + 1) + j] = c.numerator
        return cls._raw(order, nums, c.denominator)

    @classmethod
    def from_series(cls, s: Series) -> "BivarSeries":
        """Embed a u-free series."""
        width = s.order + 1
        nums = [0] * (width * width)
        for n, x in enumerate(s._num):
            nums[n * width] = x
        return cls._raw(s.order, nums, s._den)

    def coeff(self, n: int) -> list[Fraction]:
        """``[z^n]`` as the dense list of u-coefficients ``[u^0], ..., [u^n]``."""
        if not 0 <= n <= self._order:
            raise IndexError(f"coefficient index {n} outside 0..{self._order}")
        w = self._order + 1
        return [Fraction(x, self._den) for x in self._num[n * w: n * w + n + 1]]

    __getitem__ = coeff

    def coeff_poly(self, n: int) -> list[Fraction]:
        """``[z^n]`` with trailing zero u-coefficients stripped."""
        row = self.coeff(n)
        while row and row[-1] == 0:
            row.pop()
        return row

    @property
    def coeffs(self) -> list[list[Fraction]]:
        return [self.coeff(n) for n in range(self._order + 1)]

    def _const(self) -> Fraction:
        return Fraction(self._num[0], self._den)

    def _mul_flat(self, other_num: Sequence[int]) -> list[int]:
        return _convolve(self._num, other_num, len(self._num))

    def _rows(self) -> list[tuple[int, ...]]:
        w = self._order + 1
        return [self._num[n * w:(n + 1) * w] for n in range(w)]

    def _relayout(self, order: int) -> "BivarSeries":
        w_new = order + 1
        nums = [0] * (w_new * w_new)
        for n, row in enumerate(self._rows()[: order + 1]):
            take = min(n + 1, w_new)
            nums[n * w_new: n * w_new + take] = row[:take]
        return self._raw(order, nums, self._den)

    def truncate(self, order: int) -> "BivarSeries":
        if order > self._order:
            raise ValueError(f"cannot truncate order {self._order} up to {order}")
        return self._relayout(order)

    def extend(self, order: int) -> "BivarSeries":
        return self._relayout(order)

    def at_u(self, u: Scalar) -> Series:
        """Specialize the marking variable to a rational value."""
        u = _to_fraction(u)
        p, q = u.numerator, u.denominator
        # scale [z^n u^j] by p^j q^(N-j) to stay integral, then divide by q^N
        N = self._order
        qpow = [q ** (N - j) for j in range(N + 1)]
        ppow = [p ** j for j in range(N + 1)]
        nums = [
            sum(x * ppow[j] * qpow[j] for j, x in enumerate(row[: n + 1]))
            for n, row in enumerate(self._rows())
        ]
        return Series._raw(N, nums, self._den * q ** N)

    def d_du(self) -> "BivarSeries":
        """Partial derivative with respect to ``u``."""
        w = self._order + 1
        nums = [0] * (w * w)
        for n, row in enumerate(self._rows()):
            for j in range(1, n + 1):
                nums[n * w + j - 1] = j * row[j]
        return self._raw(self._order, nums, self._den)

    def __repr__(self) -> str:
        rows = [[str(c) for c in self.coeff_poly(n)] for n in range(self._order + 1)]
        return f"BivarSeries({rows}, order={self._order})"


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------

State = TypeVar("State")


def _extend_state(x, order):
    if isinstance(x, tuple):
        return tuple(s.extend(order) for s in x)
    return x.extend(order)


def _agree_below(x, y, d: int) -> bool:
    """Do ``x`` and ``y`` share all coefficients of z-degree < d?"""
    if isinstance(x, tuple):
        return all(_agree_below(a, b, d) for a, b in zip(x, y))
    if d == 0:
        return True
    return x.truncate(d - 1) == y.truncate(d - 1)


def solve_fixed_point(
    update_map: Callable[[State], State],
    order: int,
    initial: State | None = None,
) -> State:
    """Solve ``x = update_map(x)`` to truncation ``order``.

    ``update_map`` must work at whatever order its argument carries, and it
    must gain one correct coefficient per application.  The solver exploits
    that: it runs the map at order 0, 1, ..., ``order`` (``order + 1``
    applications in total), padding the previous answer by one zero each
    time, so early rounds are cheap.

    ``initial`` fixes the shape of the state: a :class:`Series` (default),
    a :class:`BivarSeries`, or a tuple of them for a coupled system; only
    its type matters, its value is replaced by zero.

    Raises :class:`DivergenceError` if a round disturbs coefficients that
    were already settled, or if the final answer is not reproduced by one
    more application of the map.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if initial is None:
        initial = Series.zero(0)
    if isinstance(initial, tuple):
        x = tuple(type(s).zero(0) for s in initial)
    else:
        x = type(initial).zero(0)
    for d in range(order + 1):
        x_in = _extend_state(x, d)
        x = update_map(x_in)
        if not _agree_below(x_in, x, d):
            raise DivergenceError(f"map disturbed settled coefficients below degree {d}")
    if update_map(x) != x:
        raise DivergenceError("fixed-point iteration did not reach a self-consistent solution")
    return x
