"""Model parameters, quasi-mode algebra and per-excitation Rabi factors.

The cavity mode ``a`` and the driving mode ``b`` couple to the atom only
through the quasi-mode ``A = eps_a a + eps_b b``; the orthogonal combination
``B = eps_b a - eps_a b`` is a spectator.  Every analytic observable in this
package is therefore assembled from the 2x2 evolution blocks of an ordinary
nonresonant JCM acting on ``|e, n>_A <-> |g, n+1>_A``.

Units: frequencies and ``t`` share whatever unit the couplings are given in.
Figure presets use ``kappa_eff = 1`` so that ``t`` is the dimensionless
``kappa_eff * t`` plotted in the figures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_N_CAP = 4096


class SeriesCapError(RuntimeError):
    """A series needed more terms than the configured cap allows."""

    def __init__(self, message: str, *, scale: float, cap: int):
        super().__init__(f"{message} (scale={scale:.6g}, cap={cap})")
        self.scale = scale
        self.cap = cap


@dataclass(frozen=True)
class ModelParams:
    """Couplings and detuning of the driven JCM.

    ``kappa_a``/``kappa_b`` couple the atom to the cavity and driving modes;
    ``delta`` is the atom-field detuning.  ``omega`` and ``omega0`` are kept
    only as metadata since all dynamics happens in the interaction picture.
    """

    kappa_a: float
    kappa_b: float
    delta: float = 0.0
    n_cap: int = DEFAULT_N_CAP
    omega: float | None = field(default=None, compare=False)
    omega0: float | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("kappa_a", "kappa_b", "delta"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.kappa_a < 0 or self.kappa_b < 0:
            raise ValueError("couplings must be non-negative")
        if self.kappa_a == 0 and self.kappa_b == 0:
            raise ValueError("at least one coupling must be positive")
        if self.n_cap < 1:
            raise ValueError("n_cap must be positive")

    @classmethod
    def from_eps(cls, eps_a: float, eps_b: float, delta_over_keff: float = 0.0,
                 kappa_eff: float = 1.0, **kw) -> "ModelParams":
        """Build from quasi-mode weights and a detuning in units of kappa_eff.

        ``eps_a``/``eps_b`` are renormalised so that eps_a**2 + eps_b**2 = 1.
        """
        norm = math.hypot(eps_a, eps_b)
        if norm == 0:
            raise ValueError("eps_a and eps_b cannot both vanish")
        return cls(kappa_eff * eps_a / norm, kappa_eff * eps_b / norm,
                   delta_over_keff * kappa_eff, **kw)

    @classmethod
    def equal_coupling(cls, delta_over_keff: float = 0.0, kappa_eff: float = 1.0,
                       **kw) -> "ModelParams":
        k = kappa_eff / math.sqrt(2.0)
        return cls(k, k, delta_over_keff * kappa_eff, **kw)

    @property
    def kappa_eff(self) -> float:
        return math.hypot(self.kappa_a, self.kappa_b)

    @property
    def eps_a(self) -> float:
        return self.kappa_a / self.kappa_eff

    @property
    def eps_b(self) -> float:
        return self.kappa_b / self.kappa_eff

    @property
    def is_equal_coupling(self) -> bool:
        return math.isclose(self.kappa_a, self.kappa_b, rel_tol=1e-13, abs_tol=0.0)

    def as_dict(self) -> dict:
        return {
            "kappa_a": self.kappa_a,
            "kappa_b": self.kappa_b,
            "kappa_eff": self.kappa_eff,
            "eps_a": self.eps_a,
            "eps_b": self.eps_b,
            "delta": self.delta,
            "delta_over_keff": self.delta / self.kappa_eff,
            "n_cap": self.n_cap,
        }


@dataclass(frozen=True)
class RabiFactors:
    n: int
    omega_n: float
    delta_n: float
    F: complex
    G: complex


def rabi_frequency(n, params: ModelParams):
    """Effective Rabi frequency ``2 kappa_eff sqrt(n + 1)`` (vectorised in n)."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("n must be non-negative")
    out = 2.0 * params.kappa_eff * np.sqrt(n_arr + 1.0)
    return float(out) if out.ndim == 0 else out


def generalized_rabi(n, params: ModelParams):
    omega = rabi_frequency(n, params)
    return np.hypot(params.delta, omega)


def rabi_arrays(n_max: int, params: ModelParams, t: float):
    """Return ``(F, G)`` for n = 0..n_max as complex arrays.

    ``F_n = cos(D t/2) - i (delta/D) sin(D t/2)`` and
    ``G_n = -i (Omega_n/D) sin(D t/2)`` with ``D = sqrt(delta^2 + Omega_n^2)``.
    """
    if n_max > params.n_cap:
        raise SeriesCapError("requested excitation index exceeds n_cap",
                             scale=float(n_max), cap=params.n_cap)
    n = np.arange(n_max + 1)
    omega = 2.0 * params.kappa_eff * np.sqrt(n + 1.0)
    big = np.hypot(params.delta, omega)
    phase = 0.5 * big * t
    s = np.sin(phase)
    F = np.cos(phase) - 1j * (params.delta / big) * s
    G = -1j * (omega / big) * s
    return F, G


def evolution_factors(n: int, params: ModelParams, t: float) -> RabiFactors:
    if n < 0:
        raise ValueError("n must be non-negative")
    if t < 0:
        raise ValueError("t must be non-negative")
    F, G = rabi_arrays(n, params, t)
    omega = rabi_frequency(n, params)
    return RabiFactors(n, omega, float(np.hypot(params.delta, omega)),
                       complex(F[n]), complex(G[n]))


def quasimode_transform(alpha_a: complex, alpha_b: complex,
                        params: ModelParams) -> tuple[complex, complex]:
    """Coherent labels of the quasi-modes A and B for input ``|alpha_a, alpha_b>``."""
    ea, eb = params.eps_a, params.eps_b
    return ea * alpha_a + eb * alpha_b, eb * alpha_a - ea * alpha_b


def log_poisson(lam: float, n_max: int) -> np.ndarray:
    """``log(exp(-lam) lam^n / n!)`` for n = 0..n_max, built by running sums."""
    n = np.arange(n_max + 1)
    if lam == 0:
        out = np.full(n_max + 1, -np.inf)
        out[0] = 0.0
        return out
    steps = np.empty(n_max + 1)
    steps[0] = -lam
    steps[1:] = math.log(lam) - np.log(n[1:])
    return np.cumsum(steps)


def poisson_cutoff(lam: float, params: ModelParams, tol: float = 1e-17) -> int:
    """Smallest n past the Poisson mode whose tail weight is below ``tol``.

    Past the mode the ratio of successive weights is below ``lam/(n+1) < 1``,
    so the tail is bounded by ``w_n / (1 - lam/(n+1))``.
    """
    if lam == 0:
        return 0
    guess = int(lam + 12.0 * math.sqrt(lam) + 40)
    if guess > params.n_cap:
        # Exact check before giving up: the heuristic overshoots a little.
        logw = log_poisson(lam, params.n_cap)
        n = np.arange(params.n_cap + 1)
        with np.errstate(invalid="ignore", divide="ignore"):
            ok = (n > lam) & (logw - np.log1p(-lam / (n + 1.0)) < math.log(tol))
        if not ok.any():
            raise SeriesCapError("Poisson series does not converge below n_cap",
                                 scale=lam, cap=params.n_cap)
        return int(np.argmax(ok))
    return guess
