"""Independent references: RK4 method of lines, soliton evaluation, and a
finite-difference estimate of the Taylor coefficients in ``t``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .adm import ModelParams
from .field import ComplexField, GridSpec, make_grid, sup_norm

#: Residual threshold below which soliton parameters are accepted.
RESIDUAL_TOL = 1e-6


class DomainError(ValueError):
    """Square-root argument of the soliton modulus is negative somewhere."""

    def __init__(self, x: float, value: float):
        super().__init__(f"gamma +/- eta*sech(...) = {value:.6g} < 0 at x = {x:.17g}")
        self.x = x
        self.value = value


class BlowUpError(FloatingPointError):
    def __init__(self, t: float):
        super().__init__(f"integration produced non-finite values at t = {t:.17g}")
        self.t = t


# -- phase functions ---------------------------------------------------------


def constant_phase(c: float = 0.0) -> Callable[[np.ndarray], np.ndarray]:
    def theta(s):
        return np.full_like(np.asarray(s, dtype=float), c)

    theta.description = f"constant {c!r}"
    return theta


def linear_phase(c0: float, c1: float) -> Callable[[np.ndarray], np.ndarray]:
    def theta(s):
        return c0 + c1 * np.asarray(s, dtype=float)

    theta.description = f"linear {c0!r} {c1!r}"
    return theta


def tabulated_phase(s_nodes: Sequence[float], values: Sequence[float]):
    """Cubic spline through tabulated ``(s, theta(s))`` pairs."""
    spline = CubicSpline(np.asarray(s_nodes, float), np.asarray(values, float))

    def theta(s):
        return spline(np.asarray(s, dtype=float))

    theta.description = f"tabulated ({len(s_nodes)} nodes)"
    return theta


# -- soliton -----------------------------------------------------------------


@dataclass(frozen=True)
class SolitonSpec:
    """``u = sqrt(gamma + sign*eta*sech(lambda*s)) * exp(i*(omega*t - k*x + theta(s)))``
    with ``s = x - nu*t``.  ``B`` is carried along but enters no formula."""

    gamma: float
    eta: float
    lam: float
    nu: float
    omega: float
    k: float
    sign: int = 1
    theta: Callable[[np.ndarray], np.ndarray] = dc_field(default_factory=constant_phase)
    B: float = 0.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def check_grid(self, grid: GridSpec) -> None:
        if not grid.admits_wavenumber(self.k):
            raise ValueError(
                f"k = {self.k} is not commensurate with the period L = {grid.length}"
            )


def soliton_eval(spec: SolitonSpec, grid: GridSpec, t: float) -> ComplexField:
    spec.check_grid(grid)
    x = grid.x
    s = x - spec.nu * t
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(spec.lam * s)
    rho = spec.gamma + spec.sign * spec.eta * sech
    bad = np.flatnonzero(rho < 0)
    if bad.size:
        i = bad[np.argmin(rho[bad])]
        raise DomainError(float(x[i]), float(rho[i]))
    phase = spec.omega * t - spec.k * x + spec.theta(s)
    return ComplexField(grid, np.sqrt(rho) * np.exp(1j * phase))


def residual(
    spec: SolitonSpec, params: ModelParams, grid: GridSpec, t: float, dt_fd: float = 1e-5
) -> float:
    """Sup-norm of ``u_t - alpha*u_xx - beta*|u|^2*u_x`` with ``u_t`` by central difference."""
    if dt_fd <= 0:
        raise ValueError("dt_fd must be positive")
    up = soliton_eval(spec, grid, t + dt_fd)
    um = soliton_eval(spec, grid, t - dt_fd)
    u = soliton_eval(spec, grid, t)
    u_t = (up - um) / (2.0 * dt_fd)
    return sup_norm(u_t - params.rhs(u))


# -- method of lines ---------------------------------------------------------


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_end: float
    store_every: int = 1
    c_stab: float = 0.2

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.store_every < 1:
            raise ValueError("store_every must be at least 1")

    def max_stable_dt(self, grid: GridSpec, params: ModelParams) -> float:
        return self.c_stab * grid.h**2 / abs(params.alpha)

    def check_stability(self, grid: GridSpec, params: ModelParams) -> None:
        bound = self.max_stable_dt(grid, params)
        if self.dt > bound * (1 + 1e-12):
            raise ValueError(f"dt = {self.dt:.3e} exceeds the stability bound {bound:.3e}")


class _Rhs:
    """Semi-discrete right-hand side on raw arrays."""

    def __init__(self, grid: GridSpec, params: ModelParams):
        k = grid.wavenumbers
        self.d1 = 1j * k
        self.d1[grid.n // 2] = 0.0
        self.d2 = -(k**2)
        self.alpha = params.alpha
        self.beta = params.beta

    def __call__(self, u: np.ndarray) -> np.ndarray:
        uh = np.fft.fft(u)
        uxx = np.fft.ifft(self.d2 * uh)
        ux = np.fft.ifft(self.d1 * uh)
        return self.alpha * uxx + self.beta * (u.real**2 + u.imag**2) * ux


def _rk4(f: _Rhs, u: np.ndarray, dt: float, nsteps: int, t0: float = 0.0, callback=None):
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(nsteps):
            k1 = f(u)
            k2 = f(u + 0.5 * dt * k1)
            k3 = f(u + 0.5 * dt * k2)
            k4 = f(u + dt * k3)
            u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(u)):
                raise BlowUpError(t0 + (i + 1) * dt)
            if callback is not None:
                callback(i + 1, u)
    return u


def integrate_mol(
    u0: ComplexField, params: ModelParams, cfg: IntegratorConfig
) -> list[tuple[float, ComplexField]]:
    """Classical RK4 on ``du/dt = alpha*D2 u + beta*|u|^2*D1 u``.

    The step is shrunk uniformly so that ``t_end`` is hit exactly; snapshots
    are kept every ``store_every`` steps plus the initial and final states.
    """
    grid = u0.grid
    cfg.check_stability(grid, params)
    nsteps = max(0, math.ceil(cfg.t_end / cfg.dt - 1e-9))
    dt = cfg.t_end / nsteps if nsteps else 0.0
    out = [(0.0, u0)]

    def keep(i, u):
        if i % cfg.store_every == 0 or i == nsteps:
            out.append((i * dt, ComplexField(grid, u, check=False)))

    _rk4(_Rhs(grid, params), u0.values.copy(), dt, nsteps, callback=keep)
    if nsteps == 0:
        return out
    # exact final time regardless of floating-point accumulation
    out[-1] = (float(cfg.t_end), out[-1][1])
    return out


def integrate_to(
    u0: ComplexField, params: ModelParams, times: Iterable[float], dt_max: float | None = None,
    c_stab: float = 0.2,
) -> list[tuple[float, ComplexField]]:
    """Reference solution at each of ``times`` (nonnegative, any order).

    Segments between consecutive requested times are split into equal RK4
    steps no longer than ``dt_max`` (default: the stability bound).
    """
    grid = u0.grid
    bound = c_stab * grid.h**2 / abs(params.alpha)
    dt_max = bound if dt_max is None else min(dt_max, bound)
    ts = sorted(set(float(t) for t in times))
    if ts and ts[0] < 0:
        raise ValueError("times must be nonnegative")
    f = _Rhs(grid, params)
    u = u0.values.copy()
    t_now = 0.0
    result = {}
    for t in ts:
        span = t - t_now
        if span > 0:
            nsteps = math.ceil(span / dt_max - 1e-9)
            u = _rk4(f, u, span / nsteps, nsteps, t0=t_now)
        t_now = t
        result[t] = ComplexField(grid, u, check=False)
    return [(t, result[t]) for t in ts]


# -- finite-difference Taylor oracle -----------------------------------------


def central_weights(j: int) -> dict[int, Fraction]:
    """Exact weights ``w_m`` on nodes ``m = -j..j`` with
    ``sum_m w_m f(m) = f^(j)(0) + O(h^p)`` at the highest order the stencil allows."""
    nodes = list(range(-j, j + 1))
    # Fornberg's recursion specialised to evaluation point 0
    M = len(nodes)
    c = [[[Fraction(0)] * M for _ in range(M)] for _ in range(j + 1)]
    c[0][0][0] = Fraction(1)
    c1 = Fraction(1)
    for n in range(1, M):
        c2 = Fraction(1)
        for v in range(n):
            c3 = Fraction(nodes[n] - nodes[v])
            c2 *= c3
            for m in range(min(n, j), -1, -1):
                prev = c[m - 1][n - 1][v] if m else Fraction(0)
                c[m][n][v] = (nodes[n] * c[m][n - 1][v] - m * prev) / c3
        for m in range(min(n, j), -1, -1):
            prev = c[m - 1][n - 1][n - 1] if m else Fraction(0)
            c[m][n][n] = c1 / c2 * (m * prev - nodes[n - 1] * c[m][n - 1][n - 1])
        c1 = c2
    return {nodes[v]: c[j][M - 1][v] for v in range(M) if c[j][M - 1][v] != 0}


def taylor_oracle(
    u0: ComplexField, params: ModelParams, j: int, dt_fd: float = 1e-3, substeps: int = 4
) -> ComplexField:
    """Estimate ``v_j = (1/j!) d^j u/dt^j`` at ``t = 0`` from integrated snapshots.

    Snapshots at ``t = m*dt_fd``, ``m = -j..j``; negative times come from
    integrating the time-reversed system forward.  Each ``dt_fd`` interval
    is covered by at least ``substeps`` RK4 steps.
    """
    if not 1 <= j <= 4:
        raise ValueError(f"taylor_oracle supports 1 <= j <= 4, got {j}")
    if dt_fd <= 0:
        raise ValueError("dt_fd must be positive")
    grid = u0.grid
    dt_max = dt_fd / substeps
    times = [m * dt_fd for m in range(1, j + 1)]
    fwd = dict(integrate_to(u0, params, times, dt_max=dt_max))
    bwd = dict(integrate_to(u0, params.reversed(), times, dt_max=dt_max))
    snap = {0: u0.values}
    for m in range(1, j + 1):
        snap[m] = fwd[times[m - 1]].values
        snap[-m] = bwd[times[m - 1]].values
    acc = np.zeros(grid.n, dtype=complex)
    for m, w in central_weights(j).items():
        acc = acc + float(w) * snap[m]
    return ComplexField(grid, acc / (dt_fd**j * math.factorial(j)), check=False)


# -- snapshot files ----------------------------------------------------------


def format_snapshots(snapshots: Sequence[tuple[float, ComplexField]]) -> str:
    lines = []
    for t, u in snapshots:
        lines.append(f"# t={t:.16e}")
        for x, z in zip(u.grid.x, u.values):
            lines.append(f"{x:.16e} {z.real:.16e} {z.imag:.16e}")
    return "\n".join(lines) + "\n"


def parse_snapshots(text: str) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Inverse of :func:`format_snapshots`: ``(t, x, u)`` per block.

    Rows before any ``# t=`` header belong to a block with ``t = 0``; other
    comment lines are ignored.
    """
    blocks: list[tuple[float, list]] = []
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("t="):
                current = (float(body[2:]), [])
                blocks.append(current)
            continue
        if current is None:
            current = (0.0, [])
            blocks.append(current)
        cols = line.split()
        if len(cols) != 3:
            raise ValueError(f"expected 'x re im', got {raw!r}")
        current[1].append([float(c) for c in cols])
    out = []
    for t, rows in blocks:
        a = np.array(rows, dtype=float).reshape(-1, 3)
        out.append((t, a[:, 0], a[:, 1] + 1j * a[:, 2]))
    return out


def field_from_samples(x: np.ndarray, u: np.ndarray) -> ComplexField:
    """Rebuild the grid from uniformly spaced sample abscissae."""
    n = len(x)
    if n < 2:
        raise ValueError("need at least two samples")
    h = (x[-1] - x[0]) / (n - 1)
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
        raise ValueError("samples are not uniformly spaced")
    return ComplexField(make_grid(x[0], h * n, n), u)
