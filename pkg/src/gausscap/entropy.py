"""Von Neumann entropies of Gaussian states and coherent information of the thermal loss channel.

All entropies are in bits.
"""

from __future__ import annotations

import numpy as np

from .channels import ChannelParams, apply, complementary_channel, thermal_loss_channel
from .states import CovarianceState
from .symplectic import symplectic_eigenvalues

NEGATIVE_ARG_TOL = 1e-10
_XLOGX_CUTOFF = 1e-15


def g(x, tol: float = NEGATIVE_ARG_TOL):
    """Entropy of a thermal state with mean photon number ``x``.

    ``g(x) = (x+1) log2(x+1) - x log2 x`` with ``g(0) = 0``. Accepts scalars
    or arrays; arguments in ``[-tol, 0)`` are treated as 0.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < -tol) or np.any(np.isnan(x)):
        raise ValueError(f"g is defined for x >= 0, got min {np.nanmin(x) if x.size else x!r}")
    x = np.maximum(x, 0.0)
    # (x+1) log2(x+1) - x log2 x rewritten as log2(x+1) + x log2(1 + 1/x): no cancellation for large x
    safe = np.where(x < _XLOGX_CUTOFF, 1.0, x)
    tail = np.where(x < _XLOGX_CUTOFF, 0.0, x * np.log1p(1.0 / safe))
    out = (np.log1p(x) + tail) / np.log(2.0)
    return out.item() if out.ndim == 0 else out


def von_neumann_entropy(state: CovarianceState) -> float:
    nus = symplectic_eigenvalues(state.cov)
    return float(np.sum(g(nus - 0.5)))


def coherent_information(params: ChannelParams, state: CovarianceState) -> float:
    """S(N^{(x)n}(rho)) - S(N^c^{(x)n}(rho)) for the thermal loss channel on all input modes.

    This is the total over the ``n`` channel uses, not a per-use rate. It
    can be negative.
    """
    n = state.n_modes
    out = apply(thermal_loss_channel(params, n), state)
    env = apply(complementary_channel(params, n), state)
    return von_neumann_entropy(out) - von_neumann_entropy(env)
