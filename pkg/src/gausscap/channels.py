"""Gaussian channels acting on (mean, covariance) as x -> T x, V -> T V T^T + N."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .states import CovarianceState
from .symplectic import SYMMETRY_TOL, symmetrize, symplectic_form, z_matrix

CP_TOL = 1e-10


@dataclass(frozen=True)
class ChannelParams:
    eta: float
    n_th: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"transmissivity eta must lie in [0, 1], got {self.eta!r}")
        if not self.n_th >= 0.0:
            raise ValueError(f"n_th must be nonnegative, got {self.n_th!r}")

    @classmethod
    def from_gamma(cls, gamma: float, n_th: float) -> "ChannelParams":
        return cls(1.0 - gamma, n_th)

    @property
    def gamma(self) -> float:
        return 1.0 - self.eta


@dataclass(frozen=True)
class GaussianChannel:
    """Affine action on moments; ``groups`` > 1 marks outputs made of equal mode groups
    (the complementary channel has two: channel-output side and environment side)."""

    T: np.ndarray
    N_noise: np.ndarray
    groups: int = 1

    def __post_init__(self):
        T = np.asarray(self.T, dtype=float)
        noise = np.asarray(self.N_noise, dtype=float)
        if T.ndim != 2 or T.shape[0] % 2 or T.shape[1] % 2 or 0 in T.shape:
            raise ValueError(f"T must be a 2m_out x 2m_in matrix, got shape {T.shape}")
        if noise.shape != (T.shape[0], T.shape[0]):
            raise ValueError(f"noise matrix shape {noise.shape} does not match T rows {T.shape[0]}")
        if np.max(np.abs(noise - noise.T), initial=0.0) > SYMMETRY_TOL * max(1.0, np.abs(noise).max()):
            raise ValueError("noise matrix is not symmetric")
        if self.groups < 1 or T.shape[0] % (2 * self.groups):
            raise ValueError(f"cannot split {T.shape[0] // 2} output modes into {self.groups} groups")
        noise = symmetrize(noise)
        T.setflags(write=False)
        noise.setflags(write=False)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "N_noise", noise)

    @property
    def m_in(self) -> int:
        return self.T.shape[1] // 2

    @property
    def m_out(self) -> int:
        return self.T.shape[0] // 2

    def cp_matrix(self) -> np.ndarray:
        """Hermitian matrix N + i/2 Omega_out - i/2 T Omega_in T^T; PSD iff the map is CP."""
        omega_out = symplectic_form(self.m_out)
        omega_in = symplectic_form(self.m_in)
        return self.N_noise + 0.5j * (omega_out - self.T @ omega_in @ self.T.T)

    def is_completely_positive(self, tol: float = CP_TOL) -> bool:
        return bool(np.linalg.eigvalsh(self.cp_matrix()).min() >= -tol)


def thermal_loss_channel(params: ChannelParams, n_modes: int = 1) -> GaussianChannel:
    dim = 2 * n_modes
    return GaussianChannel(
        np.sqrt(params.eta) * np.eye(dim),
        (1.0 - params.eta) * (params.n_th + 0.5) * np.eye(dim),
    )


def complementary_channel(params: ChannelParams, n_modes: int = 1) -> GaussianChannel:
    """Channel to the environment: output modes are (all B-side blocks, then all E-side blocks)."""
    eta, n_th = params.eta, params.n_th
    dim = 2 * n_modes
    eye = np.eye(dim)
    T_c = np.vstack([-np.sqrt(1.0 - eta) * eye, np.zeros((dim, dim))])
    cross = np.sqrt(eta * n_th * (n_th + 1.0)) * z_matrix(n_modes)
    N_c = np.block([
        [eta * (n_th + 0.5) * eye, cross],
        [cross, (n_th + 0.5) * eye],
    ])
    return GaussianChannel(T_c, N_c, groups=2)


def apply(channel: GaussianChannel, state: CovarianceState) -> CovarianceState:
    if channel.m_in != state.n_modes:
        raise ValueError(
            f"channel expects {channel.m_in} input modes, state has {state.n_modes}"
        )
    T = channel.T
    return CovarianceState(T @ state.mean, T @ state.cov @ T.T + channel.N_noise)


def tensor_pow(channel: GaussianChannel, k: int) -> GaussianChannel:
    """k-fold tensor power.

    Outputs stay grouped: for a channel with output groups (B, E) the result
    is ordered (B_1, ..., B_k, E_1, ..., E_k), matching the N-mode
    complementary channel built directly.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    T = block_diag(*([channel.T] * k))
    noise = block_diag(*([channel.N_noise] * k))
    rows = channel.T.shape[0]
    chunk = rows // channel.groups
    order = np.concatenate([
        np.arange(copy * rows + g * chunk, copy * rows + (g + 1) * chunk)
        for g in range(channel.groups)
        for copy in range(k)
    ])
    return GaussianChannel(T[order], noise[np.ix_(order, order)], groups=channel.groups)
