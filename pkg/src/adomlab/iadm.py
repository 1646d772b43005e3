"""Improved ADM: the decomposition applied to ``u = u1 + i*u2`` in real arithmetic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adm import ModelParams, SeriesOverflowError, TaylorSeries
from .field import ComplexField, GridError, RealField


@dataclass(frozen=True)
class CouplingTable:
    """Real form of the model.

    With ``rho = u1**2 + u2**2``::

        u1_t = D[0,0] u1_xx + D[0,1] u2_xx + rho (N[0,0] u1_x + N[0,1] u2_x)
        u2_t = D[1,0] u1_xx + D[1,1] u2_xx + rho (N[1,0] u1_x + N[1,1] u2_x)
    """

    dispersion: np.ndarray
    nonlinear: np.ndarray


def _complex_as_matrix(z: complex) -> np.ndarray:
    return np.array([[z.real, -z.imag], [z.imag, z.real]])


def split_real_system(params: ModelParams) -> CouplingTable:
    return CouplingTable(_complex_as_matrix(params.alpha), _complex_as_matrix(params.beta))


@dataclass(frozen=True)
class RealSeriesPair:
    series1: tuple[RealField, ...]
    series2: tuple[RealField, ...]

    def __post_init__(self):
        object.__setattr__(self, "series1", tuple(self.series1))
        object.__setattr__(self, "series2", tuple(self.series2))
        if len(self.series1) != len(self.series2) or not self.series1:
            raise ValueError("series1 and series2 must be nonempty and of equal length")
        g = self.series1[0].grid
        if any(f.grid != g for f in self.series1 + self.series2):
            raise GridError("real series live on different grids")

    @property
    def order(self) -> int:
        return len(self.series1) - 1

    @property
    def grid(self):
        return self.series1[0].grid

    def evaluate1(self, t: float, upto: int | None = None) -> RealField:
        return _horner(self.series1, t, self.order if upto is None else upto)

    def evaluate2(self, t: float, upto: int | None = None) -> RealField:
        return _horner(self.series2, t, self.order if upto is None else upto)


def _horner(coeffs, t, upto):
    acc = coeffs[upto].values
    for j in range(upto - 1, -1, -1):
        acc = acc * t + coeffs[j].values
    return RealField(coeffs[0].grid, acc, check=False)


def iadm_build(u0: ComplexField, params: ModelParams, N: int) -> RealSeriesPair:
    """t-power series of ``Re u`` and ``Im u`` from the real split recurrence."""
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    if not u0.is_finite():
        raise SeriesOverflowError(0)
    table = split_real_system(params)
    D, Nl = table.dispersion, table.nonlinear
    grid = u0.grid

    p = [u0.real.values]
    q = [u0.imag.values]
    dp, dq, rho = [], [], []

    def d(values, order):
        return RealField(grid, values, check=False).dx(order).values

    def push(j):
        dp.append(d(p[j], 1))
        dq.append(d(q[j], 1))
        # real Adomian inner sums: sum_k p_k p_{j-k} + q_k q_{j-k}
        acc = p[0] * p[j] + q[0] * q[j]
        for k in range(1, j + 1):
            acc = acc + (p[k] * p[j - k] + q[k] * q[j - k])
        rho.append(acc)

    push(0)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(N):
            a1 = dp[k] * rho[0]
            a2 = dq[k] * rho[0]
            for j in range(1, k + 1):
                a1 = a1 + dp[k - j] * rho[j]
                a2 = a2 + dq[k - j] * rho[j]
            pxx, qxx = d(p[k], 2), d(q[k], 2)
            disp1 = D[0, 0] * pxx + D[0, 1] * qxx
            disp2 = D[1, 0] * pxx + D[1, 1] * qxx
            nonl1 = Nl[0, 0] * a1 + Nl[0, 1] * a2
            nonl2 = Nl[1, 0] * a1 + Nl[1, 1] * a2
            p_next = (disp1 + nonl1) / (k + 1)
            q_next = (disp2 + nonl2) / (k + 1)
            if not (np.all(np.isfinite(p_next)) and np.all(np.isfinite(q_next))):
                raise SeriesOverflowError(k + 1)
            p.append(p_next)
            q.append(q_next)
            push(k + 1)

    return RealSeriesPair(
        [RealField(grid, v, check=False) for v in p],
        [RealField(grid, v, check=False) for v in q],
    )


def recombine(pair: RealSeriesPair, params: ModelParams | None = None) -> TaylorSeries:
    """``v_j = series1[j] + i*series2[j]``."""
    if params is None:
        # TaylorSeries needs params; the values are irrelevant for recombination alone
        params = ModelParams(1.0, 0.0)
    coeffs = [
        ComplexField(f1.grid, f1.values + 1j * f2.values, check=False)
        for f1, f2 in zip(pair.series1, pair.series2)
    ]
    return TaylorSeries(params, coeffs)
