"""Periodic 1-D grids, sampled fields, spectral derivatives and norms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


class GridError(ValueError):
    """Raised for invalid grids or fields living on different grids."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid ``x0 + m*h``, ``m = 0..n-1`` with ``h = length/n``."""

    x0: float
    length: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.x0) and np.isfinite(self.length)):
            raise GridError("grid endpoints must be finite")
        if self.length <= 0:
            raise GridError(f"length must be positive, got {self.length}")
        n = self.n
        if int(n) != n or n < 8 or (int(n) & (int(n) - 1)) != 0:
            raise GridError(f"n must be a power of two >= 8, got {n}")
        object.__setattr__(self, "n", int(n))

    @property
    def h(self) -> float:
        return self.length / self.n

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x0 + self.h * np.arange(self.n)
        x.flags.writeable = False
        return x

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)
        k.flags.writeable = False
        return k

    def admits_wavenumber(self, k: float, tol: float = 1e-9) -> bool:
        """True when ``exp(i*k*x)`` is periodic on this grid (``k*L`` in ``2*pi*Z``)."""
        m = k * self.length / (2.0 * np.pi)
        return abs(m - round(m)) <= tol * max(1.0, abs(m))


def make_grid(x0: float, length: float, n: int) -> GridSpec:
    return GridSpec(float(x0), float(length), n)


class ComplexField:
    """Complex samples on a :class:`GridSpec`.

    Instances are immutable; arithmetic returns new fields.  Scalars and
    fields on the same grid may be mixed freely.
    """

    __slots__ = ("grid", "values")
    dtype = np.complex128
    # make numpy scalars defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, grid: GridSpec, values, check: bool = True):
        arr = np.array(values, dtype=self.dtype)
        if arr.shape != (grid.n,):
            raise GridError(f"expected {grid.n} samples, got shape {arr.shape}")
        if check and not np.all(np.isfinite(arr)):
            raise FloatingPointError("field contains non-finite samples")
        arr.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def from_function(cls, grid: GridSpec, func):
        return cls(grid, func(grid.x))

    @classmethod
    def zeros(cls, grid: GridSpec):
        return cls(grid, np.zeros(grid.n))

    @classmethod
    def constant(cls, grid: GridSpec, c):
        return cls(grid, np.full(grid.n, c, dtype=cls.dtype))

    def _wrap(self, values):
        return ComplexField(self.grid, values, check=False)

    def _other(self, other):
        if isinstance(other, ComplexField):
            if other.grid != self.grid:
                raise GridError("fields live on different grids")
            return other.values
        if np.isscalar(other):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.values + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.values - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.values)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(_mul(self.values, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if np.isrealobj(o):
            return self._wrap(_div_real(self.values, o))
        return self._wrap(self.values / o)

    def __neg__(self):
        return self._wrap(-self.values)

    def conj(self):
        return self._wrap(np.conj(self.values))

    @property
    def real(self) -> "RealField":
        return RealField(self.grid, self.values.real, check=False)

    @property
    def imag(self) -> "RealField":
        return RealField(self.grid, self.values.imag, check=False)

    def abs2(self) -> "RealField":
        v = self.values
        return RealField(self.grid, v.real**2 + v.imag**2, check=False)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def dx(self, order: int = 1):
        return diff(self, order)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.grid.n}, sup={sup_norm(self):.3e})"


def _mul(a, b):
    """Elementwise product with complex arithmetic spelled out in real parts.

    numpy's complex kernels may fuse or reorder operations; spelling out
    ``(ar*br - ai*bi, ar*bi + ai*br)`` keeps results identical to the same
    computation carried out on real and imaginary parts separately.
    """
    a_real, b_real = np.isrealobj(a), np.isrealobj(b)
    if a_real and b_real:
        return a * b
    if a_real or b_real:
        x, z = (a, b) if a_real else (b, a)
        z = np.asarray(z)
        out = np.empty(np.broadcast(x, z).shape, dtype=np.complex128)
        out.real = x * z.real
        out.imag = x * z.imag
        return out
    a, b = np.asarray(a), np.asarray(b)
    out = np.empty(np.broadcast(a, b).shape, dtype=np.complex128)
    out.real = a.real * b.real - a.imag * b.imag
    out.imag = a.real * b.imag + a.imag * b.real
    return out


def _div_real(a, b):
    if np.isrealobj(a):
        return a / b
    out = np.empty(np.shape(a), dtype=np.complex128)
    out.real = a.real / b
    out.imag = a.imag / b
    return out


class RealField(ComplexField):
    """Real samples on a grid; arithmetic with complex operands promotes."""

    __slots__ = ()
    dtype = np.float64

    def __init__(self, grid: GridSpec, values, check: bool = True):
        if np.iscomplexobj(values):
            values = np.asarray(values)
            if np.any(values.imag != 0):
                raise TypeError("RealField requires real samples")
            values = values.real
        super().__init__(grid, values, check=check)

    def _wrap(self, values):
        if np.iscomplexobj(values):
            return ComplexField(self.grid, values, check=False)
        return RealField(self.grid, values, check=False)

    def conj(self):
        return self

    def to_complex(self) -> ComplexField:
        return ComplexField(self.grid, self.values, check=False)


def _diff_multiplier(grid: GridSpec, order: int) -> np.ndarray:
    k = np.abs(grid.wavenumbers[: grid.n // 2 + 1])
    if order == 1:
        mult = 1j * k
        mult[-1] = 0.0
        return mult
    return -(k**2)


def _diff_real(values: np.ndarray, grid: GridSpec, order: int) -> np.ndarray:
    return np.fft.irfft(np.fft.rfft(values) * _diff_multiplier(grid, order), n=grid.n)


def diff(f: ComplexField, order: int = 1) -> ComplexField:
    """Spectral derivative of the periodic extension of ``f``.

    Real and imaginary parts are transformed separately, so ``diff``
    commutes exactly with conjugation and with splitting into real parts.
    The Nyquist mode is dropped for odd orders.  Returns a
    :class:`RealField` for real input.
    """
    if order not in (1, 2):
        raise ValueError(f"unsupported derivative order {order}; use 1 or 2")
    grid = f.grid
    if isinstance(f, RealField):
        return RealField(grid, _diff_real(f.values, grid, order), check=False)
    out = np.empty(grid.n, dtype=np.complex128)
    out.real = _diff_real(f.values.real, grid, order)
    out.imag = _diff_real(f.values.imag, grid, order)
    return ComplexField(grid, out, check=False)


def sup_norm(f: ComplexField) -> float:
    return float(np.max(np.abs(f.values)))


def l2_norm(f: ComplexField) -> float:
    a = np.abs(f.values)
    m = a.max()
    if m == 0.0 or not np.isfinite(m):
        return float(m)
    # scaled to avoid under/overflow in the squares
    return float(m * np.sqrt(f.grid.h * np.sum((a / m) ** 2)))


def rel_sup_diff(f: ComplexField, g: ComplexField) -> float:
    """``sup|f - g| / sup|g|``; falls back to the absolute difference when ``g`` vanishes."""
    scale = sup_norm(g)
    d = sup_norm(f - g)
    return d / scale if scale > 0 else d
