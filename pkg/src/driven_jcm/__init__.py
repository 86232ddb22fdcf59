"""Exact phase-space dynamics of a two-level atom coupled to a cavity mode and a
coherent driving mode, with a brute-force Fock-space oracle for verification."""

__version__ = "0.1.0"

from .model import (ModelParams, RabiFactors, SeriesCapError, evolution_factors,  # noqa: E402
                    generalized_rabi, quasimode_transform, rabi_arrays, rabi_frequency)
from .states import (CavityState, Coherent, DriveState, EvenCat, OddCat, Thermal,  # noqa: E402
                     cavity_state, fock_coefficients, mean_photon_number)
from .inversion import (TimeSeries, inversion_coherent, inversion_even, inversion_odd,  # noqa: E402
                        inversion_series, inversion_thermal, xi_kernel)
from .wigner import (KernelArgs, PhaseGrid, WignerSurface, char_kernel, characteristic,  # noqa: E402
                     cross_kernel, wigner_coherent, wigner_even, wigner_kernel,
                     wigner_kernel_equal, wigner_odd, wigner_surface)
from .marginals import (MarginalCurve, hermite_kernel, marginal_coherent,  # noqa: E402
                        marginal_from_surface, marginal_p_kernel, marginal_q_kernel)

__all__ = [
    "ModelParams", "RabiFactors", "SeriesCapError", "evolution_factors", "generalized_rabi",
    "quasimode_transform", "rabi_arrays", "rabi_frequency",
    "CavityState", "Coherent", "DriveState", "EvenCat", "OddCat", "Thermal", "cavity_state",
    "fock_coefficients", "mean_photon_number",
    "TimeSeries", "inversion_coherent", "inversion_even", "inversion_odd", "inversion_series",
    "inversion_thermal", "xi_kernel",
    "KernelArgs", "PhaseGrid", "WignerSurface", "char_kernel", "characteristic", "cross_kernel",
    "wigner_coherent", "wigner_even", "wigner_kernel", "wigner_kernel_equal", "wigner_odd",
    "wigner_surface",
    "MarginalCurve", "hermite_kernel", "marginal_coherent", "marginal_from_surface",
    "marginal_p_kernel", "marginal_q_kernel",
]
