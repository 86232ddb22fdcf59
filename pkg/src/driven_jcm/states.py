"""Initial cavity and drive states.

Cat states are only ever represented by their amplitude: results derived from
their (singular) P-functions are implemented in closed form elsewhere, and
the Fock coefficients here feed the brute-force oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-10


@dataclass(frozen=True)
class Coherent:
    alpha: complex

    kind = "coherent"

    def __post_init__(self):
        _check_finite(self.alpha)


@dataclass(frozen=True)
class EvenCat:
    alpha: complex

    kind = "even"

    def __post_init__(self):
        _check_finite(self.alpha)
        if self.alpha == 0:
            raise ValueError("even cat state needs |alpha| > 0")


@dataclass(frozen=True)
class OddCat:
    alpha: complex

    kind = "odd"

    def __post_init__(self):
        _check_finite(self.alpha)
        if self.alpha == 0:
            raise ValueError("odd cat state is undefined at alpha = 0")


@dataclass(frozen=True)
class Thermal:
    nbar: float

    kind = "thermal"

    def __post_init__(self):
        if not (math.isfinite(self.nbar) and self.nbar >= 0):
            raise ValueError(f"thermal nbar must be finite and >= 0, got {self.nbar!r}")


CavityState = Coherent | EvenCat | OddCat | Thermal


@dataclass(frozen=True)
class DriveState:
    """The driving field is always coherent."""

    beta: complex

    def __post_init__(self):
        _check_finite(self.beta)


def _check_finite(z):
    if not np.isfinite(complex(z)):
        raise ValueError(f"amplitude must be finite, got {z!r}")


def cavity_state(kind: str, alpha: complex = 0.0, nbar: float = 0.0) -> CavityState:
    kind = kind.lower()
    if kind == "coherent":
        return Coherent(complex(alpha))
    if kind == "even":
        return EvenCat(complex(alpha))
    if kind == "odd":
        return OddCat(complex(alpha))
    if kind == "thermal":
        return Thermal(float(nbar))
    raise ValueError(f"unknown cavity state {kind!r}")


def state_record(state: CavityState) -> dict:
    if isinstance(state, Thermal):
        return {"state": state.kind, "nbar": state.nbar}
    return {"state": state.kind, "alpha": [state.alpha.real, state.alpha.imag]}


def mean_photon_number(state: CavityState | DriveState) -> float:
    if isinstance(state, DriveState):
        return abs(state.beta) ** 2
    if isinstance(state, Thermal):
        return state.nbar
    x = abs(state.alpha) ** 2
    if isinstance(state, Coherent):
        return x
    if isinstance(state, EvenCat):
        return x * math.tanh(x)
    return x / math.tanh(x)


@dataclass(frozen=True)
class FockCoefficients:
    """Fock-basis data over ``|0..cutoff>``.

    ``amplitudes`` is set for pure states, ``weights`` (|c_n|^2 or the thermal
    populations) always.  ``tail_mass`` is the probability beyond the cutoff.
    """

    amplitudes: np.ndarray | None
    weights: np.ndarray
    tail_mass: float
    truncation_warning: bool


def _coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff + 1)
    out = np.zeros(cutoff + 1, dtype=complex)
    if alpha == 0:
        out[0] = 1.0
        return out
    r, phi = abs(alpha), np.angle(alpha)
    logmag = -0.5 * r * r + n * math.log(r) - 0.5 * np.cumsum(np.r_[0.0, np.log(n[1:])])
    return np.exp(logmag + 1j * n * phi)


def fock_coefficients(state: CavityState | DriveState, cutoff: int) -> FockCoefficients:
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if isinstance(state, Thermal):
        n = np.arange(cutoff + 1)
        nb = state.nbar
        if nb == 0:
            w = np.zeros(cutoff + 1)
            w[0] = 1.0
            tail = 0.0
        else:
            r = nb / (1.0 + nb)
            w = (1.0 - r) * r ** n
            tail = r ** (cutoff + 1)
        return FockCoefficients(None, w, float(tail), bool(tail > NORM_TOL))

    if isinstance(state, DriveState):
        amp = _coherent_amplitudes(state.beta, cutoff)
        exact_norm = 1.0
    elif isinstance(state, Coherent):
        amp = _coherent_amplitudes(state.alpha, cutoff)
        exact_norm = 1.0
    else:
        amp = _coherent_amplitudes(state.alpha, cutoff)
        parity = 0 if isinstance(state, EvenCat) else 1
        amp[(np.arange(cutoff + 1) % 2) != parity] = 0.0
        x = abs(state.alpha) ** 2
        # e^{-x} sum_{n even/odd} x^n/n! = e^{-x} cosh x  or  e^{-x} sinh x
        exact_norm = 0.5 * (1.0 + math.exp(-2 * x)) if parity == 0 else 0.5 * (1.0 - math.exp(-2 * x))
    captured = float(np.sum(np.abs(amp) ** 2))
    tail = max(0.0, 1.0 - captured / exact_norm)
    amp = amp / math.sqrt(captured)
    return FockCoefficients(amp, np.abs(amp) ** 2, tail, bool(tail > NORM_TOL))
