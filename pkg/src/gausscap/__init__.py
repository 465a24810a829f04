"""Achievable quantum communication rates of Gaussian thermal loss channels.

Covariance-matrix tools for thermal and correlated multi-mode thermal
inputs, the closed-form single-mode rate and its correlated improvement,
and an FFT-style compiler for the Gaussian Fourier transform.
"""

from .capacity import (
    F_bound,
    OptimizerSettings,
    RatePoint,
    RateSource,
    convex_hull_rate,
    f_rate,
    gamma_threshold,
    nbar_threshold,
    rate_correlated,
    rate_correlated_numeric,
)
from .channels import (
    ChannelParams,
    GaussianChannel,
    apply,
    complementary_channel,
    tensor_pow,
    thermal_loss_channel,
)
from .circuits import (
    GaussianCircuit,
    circuit_to_symplectic,
    compile_gft,
    compile_perfect_shuffle,
    prepare_correlated_circuit,
)
from .entropy import coherent_information, g, von_neumann_entropy
from .errors import InvalidStateError, NumericalError
from .states import (
    CorrelatedSpec,
    CovarianceState,
    ThermalSpec,
    correlated_thermal,
    mixed_thermal,
    per_mode_photon_numbers,
    thermal_state,
)
from .symplectic import gft_symplectic, is_orthogonal, symplectic_eigenvalues, symplectic_form

__version__ = "0.1.0"
