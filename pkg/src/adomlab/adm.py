"""Adomian decomposition for ``u_t = alpha*u_xx + beta*|u|^2*u_x``.

Two routes to the same t-power series are provided:

* the integral route, which keeps every correction ``u_k(x, t)`` as an
  explicit polynomial in ``t`` (:class:`TPolynomial`) and integrates the
  right-hand side term by term;
* the coefficient route, which recurses directly on the Taylor
  coefficients ``v_k(x)`` (:func:`taylor_step`, :func:`build_series`).

Both use the closed-form Adomian polynomial of the nonlinearity
``|u|^2 u_x``::

    A_n = sum_{j=0}^{n} (u_{n-j})_x * sum_{k=0}^{j} u_k * conj(u_{j-k})
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .field import ComplexField, GridError, GridSpec, sup_norm

#: Entries of a :class:`TPolynomial` at or below this sup-norm are dropped.
ZERO_CUTOFF = 1e-300


class SeriesOverflowError(FloatingPointError):
    def __init__(self, order: int):
        super().__init__(f"series coefficient of order {order} is not finite")
        self.order = order


@dataclass(frozen=True)
class ModelParams:
    """Complex coefficients of ``u_t = alpha*u_xx + beta*|u|^2*u_x``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")

    @classmethod
    def from_eq1(cls, a: float, b: float) -> "ModelParams":
        """``i u_t + a u_xx + i b |u|^2 u_x = 0``."""
        return cls(1j * a, -b)

    @classmethod
    def from_eq3(cls, a: float, b: float) -> "ModelParams":
        """``u_t + i a u_xx - b |u|^2 u_x = 0``."""
        return cls(-1j * a, b)

    def scaled(self, c: float) -> "ModelParams":
        """Coefficients for the rescaled time ``t' = c*t``."""
        return ModelParams(c * self.alpha, c * self.beta)

    def reversed(self) -> "ModelParams":
        """Coefficients of the time-reversed system ``t -> -t``."""
        return self.scaled(-1.0)

    def conj(self) -> "ModelParams":
        return ModelParams(self.alpha.conjugate(), self.beta.conjugate())

    def rhs(self, u: ComplexField) -> ComplexField:
        """``alpha*u_xx + beta*|u|^2*u_x`` evaluated on the grid."""
        return self.alpha * u.dx(2) + self.beta * (u.abs2() * u.dx(1))


class TPolynomial:
    """Polynomial in ``t`` with field-valued coefficients, stored sparsely."""

    __slots__ = ("grid", "terms")

    def __init__(self, grid: GridSpec, terms: dict[int, ComplexField] | None = None):
        clean = {}
        for deg, w in sorted((terms or {}).items()):
            if deg < 0:
                raise ValueError("negative degree")
            if w.grid != grid:
                raise GridError("coefficient on a different grid")
            if sup_norm(w) > ZERO_CUTOFF:
                clean[int(deg)] = w
        self.grid = grid
        self.terms = clean

    @classmethod
    def monomial(cls, w: ComplexField, degree: int = 0) -> "TPolynomial":
        return cls(w.grid, {degree: w})

    @classmethod
    def zero(cls, grid: GridSpec) -> "TPolynomial":
        return cls(grid)

    def coeff(self, degree: int) -> ComplexField:
        w = self.terms.get(degree)
        return w if w is not None else ComplexField.zeros(self.grid)

    @property
    def degrees(self) -> list[int]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "TPolynomial"):
        if other.grid != self.grid:
            raise GridError("polynomials live on different grids")

    def __add__(self, other: "TPolynomial") -> "TPolynomial":
        self._check(other)
        out = dict(self.terms)
        for d, w in other.terms.items():
            out[d] = out[d] + w if d in out else w
        return TPolynomial(self.grid, out)

    def __mul__(self, other):
        if isinstance(other, TPolynomial):
            self._check(other)
            out: dict[int, ComplexField] = {}
            for d1, w1 in self.terms.items():
                for d2, w2 in other.terms.items():
                    p = w1 * w2
                    d = d1 + d2
                    out[d] = out[d] + p if d in out else p
            return TPolynomial(self.grid, out)
        if np.isscalar(other):
            return TPolynomial(self.grid, {d: other * w for d, w in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> "TPolynomial":
        return TPolynomial(self.grid, {d: w.conj() for d, w in self.terms.items()})

    @property
    def real(self) -> "TPolynomial":
        return TPolynomial(self.grid, {d: w.real for d, w in self.terms.items()})

    @property
    def imag(self) -> "TPolynomial":
        return TPolynomial(self.grid, {d: w.imag for d, w in self.terms.items()})

    def dx(self, order: int = 1) -> "TPolynomial":
        return TPolynomial(self.grid, {d: w.dx(order) for d, w in self.terms.items()})

    def integrate(self) -> "TPolynomial":
        """``int_0^t p(t') dt'`` term by term."""
        return TPolynomial(self.grid, {d + 1: w / (d + 1) for d, w in self.terms.items()})

    def __call__(self, t: float) -> ComplexField:
        out = ComplexField.zeros(self.grid)
        for d, w in self.terms.items():
            out = out + w * t**d
        return out

    def __repr__(self):
        return f"TPolynomial(degrees={self.degrees})"


class AdomianSweep:
    """Incremental evaluator of Adomian polynomials for ``|u|^2 u_x``.

    Components are appended one at a time with :meth:`push`; ``x``-derivatives
    and the inner sums ``sum_k u_k conj(u_{j-k})`` are computed once per
    component and reused by every later polynomial, so producing
    ``A_0..A_n`` costs O(n^2) products.  Works for any component type with
    ``dx``, ``real``, ``imag``, ``+`` and ``*`` (fields or :class:`TPolynomial`).
    """

    def __init__(self):
        self.components: list = []
        self._dx: list = []
        self._re: list = []
        self._im: list = []
        self._inner: list = []

    def __len__(self):
        return len(self.components)

    def push(self, u):
        self.components.append(u)
        self._dx.append(u.dx(1))
        self._re.append(u.real)
        self._im.append(u.imag)
        j = len(self.components) - 1
        re, im = self._re, self._im
        # the terms k and j-k are conjugate, so the inner sum is real:
        # sum_k Re(u_k) Re(u_{j-k}) + Im(u_k) Im(u_{j-k})
        inner = re[0] * re[j] + im[0] * im[j]
        for k in range(1, j + 1):
            inner = inner + (re[k] * re[j - k] + im[k] * im[j - k])
        self._inner.append(inner)

    def term(self, n: int):
        if n < 0:
            raise ValueError(f"Adomian index must be nonnegative, got {n}")
        if n >= len(self.components):
            raise ValueError(f"A_{n} needs {n + 1} components, have {len(self.components)}")
        out = self._dx[n] * self._inner[0]
        for j in range(1, n + 1):
            out = out + self._dx[n - j] * self._inner[j]
        return out


def adomian_polynomial(v: Sequence[ComplexField], n: int) -> ComplexField:
    """``B_n = sum_j v'_{n-j} sum_k v_k conj(v_{j-k})`` from coefficients ``v_0..v_n``."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if len(v) < n + 1:
        raise ValueError(f"need {n + 1} coefficients, got {len(v)}")
    sweep = AdomianSweep()
    for vj in v[: n + 1]:
        sweep.push(vj)
    return sweep.term(n)


def adm_step_integral(
    u_terms: Sequence[TPolynomial], A_k: TPolynomial, params: ModelParams
) -> TPolynomial:
    """Next correction ``u_{k+1} = int_0^t (alpha*u_k,xx + beta*A_k) dt'``."""
    if not u_terms:
        raise ValueError("u_terms must be nonempty")
    u_k = u_terms[-1]
    if A_k.grid != u_k.grid:
        raise GridError("A_k and u_k live on different grids")
    return (params.alpha * u_k.dx(2) + params.beta * A_k).integrate()


def integral_pipeline(u0: ComplexField, params: ModelParams, K: int) -> list[TPolynomial]:
    """Corrections ``u_0..u_K`` of the integral-form recurrence."""
    u_terms = [TPolynomial.monomial(u0, 0)]
    sweep = AdomianSweep()
    sweep.push(u_terms[0])
    for k in range(K):
        nxt = adm_step_integral(u_terms, sweep.term(k), params)
        u_terms.append(nxt)
        sweep.push(nxt)
    return u_terms


def taylor_step(v_k: ComplexField, B_k: ComplexField, k: int, params: ModelParams) -> ComplexField:
    """``v_{k+1} = (alpha*v_k'' + beta*B_k) / (k+1)``."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if v_k.grid != B_k.grid:
        raise GridError("v_k and B_k live on different grids")
    return (params.alpha * v_k.dx(2) + params.beta * B_k) / (k + 1)


@dataclass(frozen=True)
class TaylorSeries:
    """Coefficients ``v_0..v_N`` of ``u(x, t) = sum_j v_j(x) t^j``."""

    params: ModelParams
    coeffs: tuple[ComplexField, ...] = dc_field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a series needs at least v_0")
        g = self.coeffs[0].grid
        if any(c.grid != g for c in self.coeffs):
            raise GridError("series coefficients live on different grids")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def grid(self) -> GridSpec:
        return self.coeffs[0].grid

    def __getitem__(self, j: int) -> ComplexField:
        return self.coeffs[j]

    def as_array(self) -> np.ndarray:
        """Coefficients stacked as an ``(N+1, n)`` complex array."""
        return np.stack([c.values for c in self.coeffs])


def build_series(u0: ComplexField, params: ModelParams, N: int) -> TaylorSeries:
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    if not u0.is_finite():
        raise SeriesOverflowError(0)
    coeffs = [u0]
    sweep = AdomianSweep()
    sweep.push(u0)
    for k in range(N):
        with np.errstate(over="ignore", invalid="ignore"):
            nxt = taylor_step(coeffs[k], sweep.term(k), k, params)
            if not nxt.is_finite():
                raise SeriesOverflowError(k + 1)
            sweep.push(nxt)
        coeffs.append(nxt)
    return TaylorSeries(params, coeffs)


def evaluate(s: TaylorSeries, t: float, upto: int | None = None) -> ComplexField:
    """Horner evaluation of the partial sum ``sum_{j<=upto} v_j t^j``."""
    if upto is None:
        upto = s.order
    if not 0 <= upto <= s.order:
        raise ValueError(f"upto must lie in [0, {s.order}], got {upto}")
    acc = s.coeffs[upto].values
    for j in range(upto - 1, -1, -1):
        acc = acc * t + s.coeffs[j].values
    return ComplexField(s.grid, acc, check=False)


def monomial_check(u_k: TPolynomial, k: int) -> float:
    """Largest off-degree coefficient of ``u_k`` relative to its degree-``k`` one."""
    if u_k.is_zero():
        return 0.0
    stray = max((sup_norm(w) for d, w in u_k.terms.items() if d != k), default=0.0)
    main = sup_norm(u_k.coeff(k))
    if main == 0.0:
        return np.inf if stray > 0 else 0.0
    return stray / main
