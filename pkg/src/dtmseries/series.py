"""Truncated power series and the linear coefficient-transform operators.

A function w(x) analytic at x = 0 is represented by its Taylor coefficients
W(k) = w^(k)(0)/k!, truncated at a fixed order N:

    w(x) ~ sum_{k=0}^{N} W(k) * x^k

All operations here are exact modulo x^(N+1) and follow the classical
operator table of the differential transformation method:

    w = y + z        ->  W(k) = Y(k) + Z(k)
    w = lambda * y   ->  W(k) = lambda * Y(k)
    w = d^m y / dx^m ->  W(k) = (k+1)(k+2)...(k+m) * Y(k+m)
    w = y * z        ->  W(k) = sum_{l=0}^{k} Y(l) * Z(k-l)
    w = x^m          ->  W(k) = 1 if k == m else 0

Binary operations require equal truncation orders and raise
:class:`~dtmseries.errors.OrderMismatchError` otherwise: mixing orders
silently is the classic way series code goes wrong.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import OrderMismatchError, SeriesFormatError

__all__ = [
    "Series",
    "OpCount",
    "zeros",
    "monomial",
    "add",
    "sub",
    "scale",
    "mul",
    "derivative_transform",
    "evaluate",
    "load_series",
    "dump_series",
    "format_series",
]


@dataclass
class OpCount:
    """Tally of scalar (coefficient-level) multiplications performed.

    Counters are call-local: operations either return a fresh instance or
    accumulate into one passed by the caller. There is no global state.
    Divisions and integer index arithmetic are not tallied.
    """

    multiplies: int = 0


class Series:
    """Immutable truncated power series about x = 0.

    ``coeffs[k]`` holds the coefficient of x^k; the order N is the highest
    retained index, so there are exactly N + 1 coefficients. Every stored
    coefficient is a finite float; constructing a series from NaN or
    infinity raises ``ValueError``.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[float]):
        cs = tuple(float(c) for c in coeffs)
        if not cs:
            raise ValueError("a series needs at least one coefficient (order >= 0)")
        for k, c in enumerate(cs):
            if not math.isfinite(c):
                raise ValueError(f"non-finite coefficient {c!r} at index {k}")
        self._coeffs = cs

    @property
    def coeffs(self) -> tuple[float, ...]:
        return self._coeffs

    @property
    def order(self) -> int:
        """Highest retained index N."""
        return len(self._coeffs) - 1

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, k: int) -> float:
        return self._coeffs[k]

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"Series({list(self._coeffs)!r})"


def zeros(order: int) -> Series:
    """The zero series of the given order."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return Series([0.0] * (order + 1))


def monomial(m: int, order: int) -> Series:
    """The series of x^m at the given truncation order.

    W(k) is the Kronecker delta at k = m. If m exceeds the order, the
    monomial truncates to the zero series; that is not an error.
    """
    if m < 0:
        raise ValueError("monomial power must be non-negative")
    if order < 0:
        raise ValueError("order must be non-negative")
    cs = [0.0] * (order + 1)
    if m <= order:
        cs[m] = 1.0
    return Series(cs)


def _require_same_order(a: Series, b: Series, op: str) -> None:
    if a.order != b.order:
        raise OrderMismatchError(
            f"{op} requires equal truncation orders, got {a.order} and {b.order}; "
            "align orders explicitly first"
        )


def add(a: Series, b: Series) -> Series:
    """Pointwise sum: W(k) = Y(k) + Z(k)."""
    _require_same_order(a, b, "add")
    return Series(x + y for x, y in zip(a.coeffs, b.coeffs))


def sub(a: Series, b: Series) -> Series:
    """Pointwise difference: W(k) = Y(k) - Z(k)."""
    _require_same_order(a, b, "sub")
    return Series(x - y for x, y in zip(a.coeffs, b.coeffs))


def scale(factor: float, a: Series) -> Series:
    """Scalar multiple: W(k) = factor * Y(k)."""
    return Series(factor * c for c in a.coeffs)


def mul(a: Series, b: Series, count: OpCount | None = None) -> Series:
    """Cauchy product truncated at the common order.

    W(k) = sum_{l=0}^{k} Y(l) * Z(k-l). The full convolution performs
    exactly (N+1)(N+2)/2 scalar multiplies, accumulated into ``count``
    when one is supplied.
    """
    _require_same_order(a, b, "mul")
    n = a.order
    ac = a.coeffs
    bc = b.coeffs
    out = []
    for k in range(n + 1):
        s = 0.0
        for l in range(k + 1):
            s += ac[l] * bc[k - l]
        out.append(s)
    if count is not None:
        count.multiplies += (n + 1) * (n + 2) // 2
    return Series(out)


def derivative_transform(a: Series, m: int) -> Series:
    """Coefficients of the m-th derivative: W(k) = (k+1)...(k+m) * Y(k+m).

    The result has order N - m. The factorial ratio (k+m)!/k! is built as a
    running integer product, never from two factorials, so large orders do
    not overflow.
    """
    if m < 0:
        raise ValueError("derivative order must be non-negative")
    if m > a.order:
        raise OrderMismatchError(
            f"derivative order {m} exceeds series order {a.order}"
        )
    if m == 0:
        return a
    cs = a.coeffs
    out = []
    for k in range(a.order - m + 1):
        f = 1
        for i in range(1, m + 1):
            f *= k + i
        out.append(f * cs[k + m])
    return Series(out)


def evaluate(a: Series, x: float) -> float:
    """Horner evaluation of the truncated series at x."""
    r = 0.0
    for c in reversed(a.coeffs):
        r = r * x + c
    return r


# ----------------------------------------------------------------------
# Series file format (used by the CLI)
# ----------------------------------------------------------------------
#
# JSON object form:  {"order": N, "coeffs": [c0, c1, ..., cN]}
# CSV form:          one "k,coefficient" line per index, k = 0..N contiguous.


def _series_from_json(obj: object) -> Series:
    if not isinstance(obj, dict):
        raise SeriesFormatError("series JSON must be an object")
    try:
        order = obj["order"]
        coeffs = obj["coeffs"]
    except KeyError as exc:
        raise SeriesFormatError(f"series JSON is missing key {exc}") from None
    if not isinstance(order, int) or isinstance(order, bool) or order < 0:
        raise SeriesFormatError("series order must be a non-negative integer")
    if not isinstance(coeffs, list) or len(coeffs) != order + 1:
        raise SeriesFormatError(
            f"series of order {order} must carry exactly {order + 1} coefficients"
        )
    for c in coeffs:
        if not isinstance(c, (int, float)) or isinstance(c, bool):
            raise SeriesFormatError(f"coefficient {c!r} is not a number")
    try:
        return Series(coeffs)
    except ValueError as exc:
        raise SeriesFormatError(str(exc)) from None


def _series_from_csv(text: str) -> Series:
    coeffs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise SeriesFormatError(
                f"line {lineno}: expected 'k,coefficient', got {raw!r}"
            )
        try:
            k = int(parts[0])
            c = float(parts[1])
        except ValueError:
            raise SeriesFormatError(
                f"line {lineno}: expected 'k,coefficient', got {raw!r}"
            ) from None
        if k != len(coeffs):
            raise SeriesFormatError(
                f"line {lineno}: index {k} out of order; indices must run 0..N contiguously"
            )
        coeffs.append(c)
    if not coeffs:
        raise SeriesFormatError("empty series input")
    try:
        return Series(coeffs)
    except ValueError as exc:
        raise SeriesFormatError(str(exc)) from None


def load_series(text: str) -> Series:
    """Parse a series from its file format (JSON object or CSV lines)."""
    stripped = text.lstrip()
    if not stripped:
        raise SeriesFormatError("empty series input")
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SeriesFormatError(f"bad series JSON: {exc}") from None
        return _series_from_json(obj)
    return _series_from_csv(text)


def format_series(a: Series) -> str:
    """The JSON file format as a string; floats print shortest round-trip."""
    return json.dumps({"order": a.order, "coeffs": list(a.coeffs)})


def dump_series(a: Series, stream: TextIO) -> None:
    """Write a series in the JSON file format (round-trips bit-exactly)."""
    stream.write(format_series(a))
    stream.write("\n")
