"""Arithmetic backends: binary64 (numpy/math) or mpmath at a fixed number of digits.

Physical couplings are ~1e-19, so 1 - nu is often far below the binary64 spacing
near 1. Every numerical routine in the package takes a :class:`Precision` and
does its scalar work through :attr:`Precision.lib`, which is either :mod:`math`
or an mpmath shim. Matrices are float64 arrays in standard mode and object
arrays of ``mpf`` in extended mode; numpy's ``@`` works on both.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from typing import Any, Iterator, Optional

import mpmath
import numpy as np

DEFAULT_EXTENDED_DIGITS = 50


class _MpLib:
    """Subset of the ``math`` API evaluated with mpmath at the active precision."""

    sqrt = staticmethod(mpmath.sqrt)
    sin = staticmethod(mpmath.sin)
    cos = staticmethod(mpmath.cos)
    exp = staticmethod(mpmath.exp)
    expm1 = staticmethod(mpmath.expm1)
    log = staticmethod(mpmath.log)
    log1p = staticmethod(mpmath.log1p)
    cosh = staticmethod(mpmath.cosh)
    sinh = staticmethod(mpmath.sinh)
    tanh = staticmethod(mpmath.tanh)
    fabs = staticmethod(mpmath.fabs)

    @property
    def pi(self):
        return +mpmath.mp.pi

    @property
    def ln2(self):
        return +mpmath.mp.ln2

    @staticmethod
    def remainder(x, y):
        return x - y * mpmath.nint(x / y)

    @staticmethod
    def isinf(x):
        return mpmath.isinf(x)


class _FloatLib:
    sqrt = staticmethod(math.sqrt)
    sin = staticmethod(math.sin)
    cos = staticmethod(math.cos)
    exp = staticmethod(math.exp)
    expm1 = staticmethod(math.expm1)
    log = staticmethod(math.log)
    log1p = staticmethod(math.log1p)
    cosh = staticmethod(math.cosh)
    sinh = staticmethod(math.sinh)
    tanh = staticmethod(math.tanh)
    fabs = staticmethod(math.fabs)
    remainder = staticmethod(math.remainder)
    isinf = staticmethod(math.isinf)
    pi = math.pi
    ln2 = math.log(2.0)


_FLOAT_LIB = _FloatLib()
_MP_LIB = _MpLib()


@dataclass(frozen=True)
class Precision:
    """Arithmetic mode.

    ``digits=None`` is binary64; an integer selects mpmath with that many
    decimal digits.
    """

    digits: Optional[int] = None

    def __post_init__(self):
        if self.digits is not None and self.digits < 16:
            raise ValueError("extended precision needs at least 16 digits")

    @classmethod
    def standard(cls) -> "Precision":
        return cls(None)

    @classmethod
    def extended(cls, digits: int = DEFAULT_EXTENDED_DIGITS) -> "Precision":
        return cls(int(digits))

    @property
    def is_extended(self) -> bool:
        return self.digits is not None

    @property
    def lib(self):
        return _MP_LIB if self.is_extended else _FLOAT_LIB

    @property
    def tolerance(self) -> float:
        """Default tolerance for physicality and structural checks."""
        if self.is_extended:
            return 10.0 ** (-self.digits + 10)
        return 1e-12

    @contextlib.contextmanager
    def workspace(self) -> Iterator[None]:
        """Activate the mpmath working precision (no-op in standard mode)."""
        if self.is_extended:
            with mpmath.workdps(self.digits):
                yield
        else:
            yield

    def scalar(self, x: Any):
        if self.is_extended:
            if isinstance(x, str):
                return mpmath.mpf(x)
            return mpmath.mpf(x) if not isinstance(x, mpmath.mpf) else +x
        return float(x)

    def array(self, rows) -> np.ndarray:
        if self.is_extended:
            arr = np.array(rows, dtype=object)
            flat = [self.scalar(v) for v in arr.ravel()]
            return np.array(flat, dtype=object).reshape(arr.shape)
        return np.array(rows, dtype=float)

    def identity(self, n: int) -> np.ndarray:
        return self.array(np.eye(n))

    def __str__(self) -> str:
        return f"extended({self.digits})" if self.is_extended else "standard"


STANDARD = Precision.standard()


def as_precision(precision: "Precision | int | None") -> Precision:
    """Accept a Precision, a digit count, or None (standard)."""
    if isinstance(precision, Precision):
        return precision
    if precision is None:
        return STANDARD
    return Precision.extended(int(precision))


def to_float(x) -> float:
    return float(x)


def det2(m) -> Any:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def det4(m) -> Any:
    """Determinant of a 4x4 matrix by Laplace expansion on the top two rows.

    Works for float and mpf entries alike.
    """
    total = 0
    for i, j in _PAIRS:
        k, l = (c for c in range(4) if c not in (i, j))
        sign = -1 if (i + j + 1) % 2 else 1
        top = m[0, i] * m[1, j] - m[0, j] * m[1, i]
        bottom = m[2, k] * m[3, l] - m[2, l] * m[3, k]
        total = total + sign * top * bottom
    return total


def max_abs(m) -> Any:
    return max(abs(v) for v in np.asarray(m).ravel())
