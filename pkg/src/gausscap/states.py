"""Gaussian state constructors: thermal, correlated thermal and mixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .errors import InvalidStateError
from .symplectic import VACUUM_CLAMP_TOL, gft_symplectic, symmetrize, symplectic_eigenvalues

WEIGHT_SUM_TOL = 1e-12
MODE_COUNT_TOL = 1e-9


@dataclass(frozen=True)
class CovarianceState:
    """Zero- or nonzero-mean Gaussian state given by its first two moments.

    The covariance is symmetrized on construction and checked against the
    uncertainty principle (smallest symplectic eigenvalue >= 1/2).
    """

    mean: np.ndarray
    cov: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise InvalidStateError(f"covariance must be square, got shape {cov.shape}")
        if mean.size == 0 or mean.size % 2:
            raise InvalidStateError(f"mean vector length must be even and positive, got {mean.size}")
        if cov.shape[0] != mean.size:
            raise InvalidStateError(
                f"mean has length {mean.size} but covariance has dimension {cov.shape[0]}"
            )
        cov = symmetrize(cov)
        nus = symplectic_eigenvalues(cov)
        if nus[0] < 0.5 - VACUUM_CLAMP_TOL:
            raise InvalidStateError(
                f"covariance violates the uncertainty principle (min symplectic eigenvalue {nus[0]:.3g})"
            )
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "n_modes", mean.size // 2)

    @classmethod
    def from_cov(cls, cov: np.ndarray) -> "CovarianceState":
        cov = np.asarray(cov, dtype=float)
        return cls(np.zeros(cov.shape[0]), cov)


@dataclass(frozen=True)
class ThermalSpec:
    n_bar: float

    def __post_init__(self):
        if not self.n_bar >= 0:
            raise ValueError(f"n_bar must be nonnegative, got {self.n_bar!r}")


@dataclass(frozen=True)
class CorrelatedSpec:
    """Parameters of the correlated thermal state tau_{M,N}(n_bar).

    ``M`` of the ``N`` input slots (the first ``M``) carry thermal light with
    ``N/M * n_bar`` photons; the rest are vacuum.
    """

    M: int
    N: int
    n_bar: float

    def __post_init__(self):
        if int(self.M) != self.M or int(self.N) != self.N:
            raise ValueError(f"M and N must be integers, got M={self.M!r}, N={self.N!r}")
        if not 1 <= self.M <= self.N:
            raise ValueError(f"need 1 <= M <= N, got M={self.M}, N={self.N}")
        if not self.n_bar >= 0:
            raise ValueError(f"n_bar must be nonnegative, got {self.n_bar!r}")

    @property
    def gain(self) -> float:
        """Two-mode squeezer gain (N/M) n_bar + 1 used to prepare the state."""
        return self.N / self.M * self.n_bar + 1.0


def vacuum_state(n_modes: int) -> CovarianceState:
    return thermal_state(ThermalSpec(0.0), n_modes)


def thermal_state(spec: ThermalSpec | float, n_modes: int = 1) -> CovarianceState:
    if not isinstance(spec, ThermalSpec):
        spec = ThermalSpec(spec)
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    dim = 2 * int(n_modes)
    return CovarianceState(np.zeros(dim), (spec.n_bar + 0.5) * np.eye(dim))


def product_state(*states: CovarianceState) -> CovarianceState:
    """Tensor product (direct sum of moments) of Gaussian states."""
    if not states:
        raise ValueError("need at least one state")
    mean = np.concatenate([s.mean for s in states])
    cov = block_diag(*[s.cov for s in states])
    return CovarianceState(mean, cov)


def _spread_by_gft(diagonal: np.ndarray) -> CovarianceState:
    n_modes = diagonal.size // 2
    s = gft_symplectic(n_modes)
    return CovarianceState.from_cov(s @ np.diag(diagonal) @ s.T)


def correlated_thermal(spec: CorrelatedSpec) -> CovarianceState:
    """Covariance of tau_{M,N}(n_bar) = GFT(tau(N n_bar / M)^{(x)M} (x) |0><0|^{(x)(N-M)})."""
    hot = spec.N / spec.M * spec.n_bar + 0.5
    diag = np.concatenate([np.full(2 * spec.M, hot), np.full(2 * (spec.N - spec.M), 0.5)])
    return _spread_by_gft(diag)


def mixed_thermal(lambdas: Sequence[float], n_bars: Sequence[float], N: int) -> CovarianceState:
    """GFT-spread product of thermal blocks: component i fills the next lambda_i * N slots.

    Raises:
        ValueError: on bad weights, negative photon numbers, or when some
            ``lambda_i * N`` is not a positive integer.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    n_bars = np.asarray(n_bars, dtype=float)
    if lambdas.shape != n_bars.shape or lambdas.ndim != 1 or lambdas.size == 0:
        raise ValueError("lambdas and n_bars must be nonempty sequences of equal length")
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    if np.any(lambdas < 0) or abs(lambdas.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must be nonnegative and sum to 1, got {lambdas.tolist()}")
    if np.any(n_bars < 0):
        raise ValueError(f"photon numbers must be nonnegative, got {n_bars.tolist()}")

    blocks = []
    for i, (lam, n) in enumerate(zip(lambdas, n_bars)):
        count = lam * N
        rounded = round(count)
        if abs(count - rounded) > MODE_COUNT_TOL or rounded < 1:
            raise ValueError(
                f"lambda[{i}] * N = {count:g} is not a positive integer mode count"
            )
        blocks.append(np.full(2 * rounded, n + 0.5))
    return _spread_by_gft(np.concatenate(blocks))


def per_mode_photon_numbers(state: CovarianceState) -> np.ndarray:
    """Mean photon number of each mode, displacement energy included."""
    second_moments = np.diag(state.cov) + state.mean**2
    return (second_moments[0::2] + second_moments[1::2]) / 2 - 0.5


def reduced_state(state: CovarianceState, modes: Sequence[int]) -> CovarianceState:
    """Marginal on the given modes (partial trace at the covariance level)."""
    idx = np.ravel([[2 * m, 2 * m + 1] for m in modes])
    return CovarianceState(state.mean[idx], state.cov[np.ix_(idx, idx)])
