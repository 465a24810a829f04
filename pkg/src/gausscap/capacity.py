"""Achievable rates of the thermal loss channel with thermal and correlated thermal inputs."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channels import ChannelParams
from .entropy import coherent_information, g
from .errors import NumericalError
from .optimize import grid_then_golden
from .states import CorrelatedSpec, correlated_thermal

G_ARG_TOL = 1e-9
ADVANTAGE_MARGIN = 1e-9
X_ONE_TOL = 1e-6


def _check_params(eta, n_th, n_bar):
    ChannelParams(eta, n_th)
    if np.any(np.asarray(n_bar) < 0):
        raise ValueError(f"n_bar must be nonnegative, got {n_bar!r}")


def _environment_photons(eta, n_th, n):
    """The two arguments (D +/- (1-eta)(n - n_th) - 1) / 2 of the closed-form rate.

    Written as (D - a) / 2 = (D^2 - a^2) / (2 (D + a)) whenever a > 0, using
    D^2 - a^2 = 4 (1-eta) n (n_th+1) and 4 (1-eta) n_th (n+1) respectively,
    so large photon numbers near eta = 1 do not cancel catastrophically.
    """
    loss = 1.0 - eta
    c = loss * n_th
    D = np.sqrt((loss * n) ** 2 + 2 * n * loss * (1 + (1 + eta) * n_th) + (1 + c) ** 2)
    out = []
    for a, numerator in (
        (1 + c - loss * n, 4 * loss * n * (n_th + 1)),
        (1 - c + loss * n, 4 * loss * n_th * (n + 1)),
    ):
        with np.errstate(divide="ignore", invalid="ignore"):
            stable = numerator / (2 * (D + a))
        out.append(np.where(a > 0, stable, (D - a) / 2))
    return out[0], out[1]


def f_rate(eta: float, n_th: float, n_bar):
    """Coherent information of the thermal loss channel for a single-mode thermal input.

    Vectorized in ``n_bar``. The value is signed; clamping at zero is left
    to the caller.
    """
    _check_params(eta, n_th, n_bar)
    n = np.asarray(n_bar, dtype=float)
    env_plus, env_minus = _environment_photons(eta, n_th, n)
    low = min(np.min(env_plus), np.min(env_minus))
    if low < -G_ARG_TOL:
        raise NumericalError(f"negative entropy argument {low:.3g} in closed-form rate")
    out = g(eta * n + (1.0 - eta) * n_th) - g(np.maximum(env_plus, 0.0)) - g(np.maximum(env_minus, 0.0))
    return out.item() if isinstance(out, np.ndarray) and out.ndim == 0 else out


def rate_fraction(eta: float, n_th: float, n_bar: float, x):
    """x * f(eta, n_th, n_bar / x): rate when a fraction x of the modes carries all photons."""
    x = np.asarray(x, dtype=float)
    return x * f_rate(eta, n_th, n_bar / x)


def rate_correlated(eta: float, n_th: float, M: int, N: int, n_bar: float) -> float:
    """Per-use rate (M/N) f(eta, n_th, (N/M) n_bar) of tau_{M,N}(n_bar)."""
    spec = CorrelatedSpec(M, N, n_bar)
    return spec.M / spec.N * f_rate(eta, n_th, spec.N / spec.M * n_bar)


def rate_correlated_numeric(eta: float, n_th: float, M: int, N: int, n_bar: float) -> float:
    """Same rate, computed from the full N-mode covariance via output and environment entropies."""
    state = correlated_thermal(CorrelatedSpec(M, N, n_bar))
    return coherent_information(ChannelParams(eta, n_th), state) / N


class RateSource(str, enum.Enum):
    SINGLE_MODE = "single_mode"
    CORRELATED = "correlated"
    VANISHING = "vanishing"


@dataclass(frozen=True)
class RatePoint:
    """Best rate at a given photon budget.

    ``rate`` is clamped at zero; ``raw_rate`` and ``raw_x`` keep the signed
    optimum and its maximizer. ``x_star`` is 1 for single-mode optima and 0
    when no positive rate exists.
    """

    n_bar: float
    rate: float
    x_star: float
    source: RateSource
    raw_rate: float
    raw_x: float
    single_mode_rate: float

    @property
    def has_advantage(self) -> bool:
        """Correlated inputs give a positive rate strictly above the (clamped) single-mode rate."""
        return (
            self.rate > max(0.0, self.single_mode_rate) + ADVANTAGE_MARGIN
            and self.raw_x < 1.0 - X_ONE_TOL
        )


@dataclass(frozen=True)
class OptimizerSettings:
    """Log grid of ``grid_size`` points on ``[x_min, 1]`` followed by golden-section refinement."""

    grid_size: int = 512
    x_min: float = 1e-4
    xtol: float = 1e-6

    def __post_init__(self):
        if self.grid_size < 64:
            raise ValueError(f"optimizer grid needs at least 64 points, got {self.grid_size}")
        if not 0 < self.x_min < 1:
            raise ValueError(f"x_min must lie in (0, 1), got {self.x_min}")

    def grid(self) -> np.ndarray:
        grid = np.geomspace(self.x_min, 1.0, self.grid_size)
        grid[-1] = 1.0
        return grid


DEFAULT_SETTINGS = OptimizerSettings()


def F_bound(eta: float, n_th: float, n_bar: float, opts: OptimizerSettings = DEFAULT_SETTINGS) -> RatePoint:
    """max over 0 < x <= 1 of x f(eta, n_th, n_bar / x), clamped at zero.

    The objective need not be concave in x, hence the global grid before the
    local golden-section step.
    """
    _check_params(eta, n_th, n_bar)
    f_single = float(f_rate(eta, n_th, n_bar))
    if n_bar == 0:
        return RatePoint(0.0, 0.0, 0.0, RateSource.VANISHING, 0.0, 1.0, f_single)

    x, value = grid_then_golden(lambda xs: rate_fraction(eta, n_th, n_bar, xs), opts.grid(), opts.xtol)
    if value < f_single:
        x, value = 1.0, f_single

    if value <= 0.0:
        return RatePoint(n_bar, 0.0, 0.0, RateSource.VANISHING, value, x, f_single)
    if value <= f_single + ADVANTAGE_MARGIN or x >= 1.0 - X_ONE_TOL:
        return RatePoint(n_bar, value, 1.0, RateSource.SINGLE_MODE, value, x, f_single)
    return RatePoint(n_bar, value, x, RateSource.CORRELATED, value, x, f_single)


def convex_hull_rate(lambdas: Sequence[float], n_bars: Sequence[float], eta: float, n_th: float):
    """(sum_i lambda_i n_i, sum_i lambda_i f(eta, n_th, n_i)) for a mixture of thermal blocks."""
    lambdas = np.asarray(lambdas, dtype=float)
    n_bars = np.asarray(n_bars, dtype=float)
    if lambdas.shape != n_bars.shape or lambdas.ndim != 1 or lambdas.size == 0:
        raise ValueError("lambdas and n_bars must be nonempty sequences of equal length")
    if np.any((lambdas < 0) | (lambdas > 1)) or abs(lambdas.sum() - 1.0) > 1e-12:
        raise ValueError(f"weights must lie in [0, 1] and sum to 1, got {lambdas.tolist()}")
    rates = f_rate(eta, n_th, n_bars)
    return float(lambdas @ n_bars), float(lambdas @ np.atleast_1d(rates))


def _bisect(pred, lo: float, hi: float, tol: float) -> float:
    """Shrink [lo, hi] with pred(lo) != pred(hi) until narrower than tol; returns the midpoint."""
    p_lo = pred(lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if pred(mid) == p_lo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def gamma_threshold(
    n_th: float,
    n_bar: float,
    tol: float = 1e-4,
    scan_steps: Sequence[float] = (5e-3, 5e-4),
    opts: OptimizerSettings = DEFAULT_SETTINGS,
) -> Optional[float]:
    """Smallest loss probability at which correlated inputs beat the single-mode thermal state.

    The advantage window narrows as ``n_bar`` grows, so a coarse scan that
    finds nothing is repeated with the next, finer step. Returns None if no
    crossover is found on (0, 1).
    """
    if not n_bar > 0:
        raise ValueError(f"n_bar must be positive, got {n_bar!r}")

    def advantage(gamma: float) -> bool:
        return F_bound(1.0 - gamma, n_th, n_bar, opts).has_advantage

    if advantage(0.0):
        return 0.0
    for step in scan_steps:
        prev = 0.0
        for gamma in np.arange(step, 1.0, step):
            if advantage(float(gamma)):
                return _bisect(advantage, prev, float(gamma), tol)
            prev = float(gamma)
    return None


def nbar_threshold(
    eta: float,
    n_th: float,
    tol: float = 1e-3,
    n_max: float = 50.0,
    scan_points: int = 400,
    opts: OptimizerSettings = DEFAULT_SETTINGS,
) -> Optional[float]:
    """Largest photon budget at which correlated inputs still beat the single-mode thermal state.

    The budget is scanned on a log grid over ``[1e-3, n_max]``; returns None
    if no advantage is seen on the grid.
    """
    ChannelParams(eta, n_th)

    def advantage(n: float) -> bool:
        return F_bound(eta, n_th, n, opts).has_advantage

    grid = np.geomspace(1e-3, n_max, scan_points)
    flags = [advantage(float(n)) for n in grid]
    if not any(flags):
        return None
    last = max(i for i, flag in enumerate(flags) if flag)
    if last == len(grid) - 1:
        return float(grid[-1])
    return _bisect(advantage, float(grid[last]), float(grid[last + 1]), tol)
