"""Atomic inversion for coherent, cat and thermal cavity states.

Every state reduces to ``I(t) = 1 - 2 sum_n w_n |G_n(t)|^2`` where ``w_n`` is
the photon-number distribution of the quasi-mode A at t = 0.  The functions
here differ only in how ``w_n`` is built; all weights come from log-space or
scaled recurrences so that no factorial is ever formed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .model import ModelParams, SeriesCapError, log_poisson, poisson_cutoff
from .states import CavityState, Coherent, DriveState, EvenCat, OddCat, Thermal, state_record

BOUND_TOL = 1e-9
TAIL_TOL = 1e-16


class InversionBoundError(ArithmeticError):
    """Series value outside [-1, 1]; signals a convergence problem."""


@dataclass
class TimeSeries:
    times: np.ndarray  # kappa_eff * t
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values differ in length")


def _g_squared(n_max: int, params: ModelParams, t) -> np.ndarray:
    """``|G_n(t)|^2`` with shape (len(t), n_max + 1)."""
    n = np.arange(n_max + 1)
    omega = 2.0 * params.kappa_eff * np.sqrt(n + 1.0)
    big = np.hypot(params.delta, omega)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = np.sin(0.5 * np.outer(t, big))
    return (omega / big) ** 2 * s * s


def _from_weights(weights: np.ndarray, params: ModelParams, t):
    scalar = np.ndim(t) == 0
    vals = 1.0 - 2.0 * _g_squared(len(weights) - 1, params, t) @ weights
    worst = float(np.max(np.abs(vals), initial=0.0))
    if worst > 1.0 + BOUND_TOL:
        raise InversionBoundError(f"|I(t)| reached {worst:.12g}; series not converged")
    return float(vals[0]) if scalar else vals


def coherent_weights(alpha_a: complex, alpha_b: complex, params: ModelParams) -> np.ndarray:
    """Poisson weights of the quasi-mode label ``eps_a alpha_a + eps_b alpha_b``."""
    lam = abs(params.eps_a * alpha_a + params.eps_b * alpha_b) ** 2
    n_max = poisson_cutoff(lam, params)
    return np.exp(log_poisson(lam, n_max))


def xi_kernel(alpha_a: complex, alpha_b: complex, params: ModelParams, t):
    """Inversion for the product coherent input ``|alpha_a, alpha_b>``."""
    return _from_weights(coherent_weights(alpha_a, alpha_b, params), params, t)


def inversion_coherent(alpha: complex, beta: complex, params: ModelParams, t):
    return xi_kernel(alpha, beta, params, t)


def cat_weights(alpha: complex, beta: complex, params: ModelParams, parity: str) -> np.ndarray:
    """Quasi-mode photon-number weights for an even (``"even"``) or odd cat cavity.

    Two Poisson terms for the labels ``eps_a alpha +- eps_b beta`` plus an
    interference term whose complex base ``-(u v*)`` is raised to n in polar
    form.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if alpha == 0:
        if parity == "odd":
            raise ValueError("odd cat state is undefined at alpha = 0")
        return coherent_weights(0.0, beta, params)
    u = params.eps_a * alpha + params.eps_b * beta
    v = params.eps_a * alpha - params.eps_b * beta
    x = abs(alpha) ** 2
    lam = max(abs(u) ** 2, abs(v) ** 2)
    n_max = poisson_cutoff(lam, params)
    n = np.arange(n_max + 1)
    direct = np.exp(log_poisson(abs(u) ** 2, n_max)) + np.exp(log_poisson(abs(v) ** 2, n_max))
    z = u * np.conj(v)
    if z == 0:
        interf = np.zeros(n_max + 1)
        interf[0] = math.exp(-2.0 * x)
    else:
        logmag = -2.0 * x + z.real + n * math.log(abs(z)) - gammaln(n + 1)
        phase = z.imag + n * np.angle(-z)
        interf = np.exp(logmag) * np.cos(phase)
    sign = 1.0 if parity == "even" else -1.0
    # exp(x)/(4 cosh x) = 1/(2(1 + exp(-2x))), and likewise for sinh
    norm = 1.0 / (2.0 * (1.0 + sign * math.exp(-2.0 * x)))
    return norm * (direct + sign * 2.0 * interf)


def inversion_even(alpha: complex, beta: complex, params: ModelParams, t):
    return _from_weights(cat_weights(alpha, beta, params, "even"), params, t)


def inversion_odd(alpha: complex, beta: complex, params: ModelParams, t):
    return _from_weights(cat_weights(alpha, beta, params, "odd"), params, t)


def thermal_weights(nbar: float, beta: complex, params: ModelParams) -> np.ndarray:
    """Laguerre-weighted geometric weights of the thermal cavity.

    Uses ``h_n = r^n L_n(-y)`` with ``r = N/(1+N)``, ``y = D/(N(1+N))``,
    ``N = eps_a^2 nbar``, ``D = eps_b^2 |beta|^2``.  In scaled form the
    recurrence only involves ``r`` and ``D/(1+N)^2`` and stays finite as
    ``nbar -> 0`` where the weights become Poisson.
    """
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    N = params.eps_a ** 2 * nbar
    D = params.eps_b ** 2 * abs(beta) ** 2
    r = N / (1.0 + N)
    s = D / (1.0 + N) ** 2
    log_pref = -math.log1p(N) - D / (1.0 + N)
    mean = N + D
    out = [math.exp(log_pref)]
    h_prev, h = 0.0, 1.0
    log_scale = 0.0
    n = 0
    while True:
        if n + 1 > params.n_cap:
            raise SeriesCapError("thermal weights did not converge", scale=mean, cap=params.n_cap)
        h_next = ((2 * n + 1) * r * h + s * h - n * r * r * h_prev) / (n + 1)
        h_prev, h = h, h_next
        if h > 1e250:
            h_prev, h = h_prev / 1e250, h / 1e250
            log_scale += math.log(1e250)
        n += 1
        w = math.exp(log_pref + log_scale + math.log(h)) if h > 0 else 0.0
        ratio = w / out[-1] if out[-1] > 0 else 1.0
        out.append(w)
        # past the mean the tail is bounded by a geometric series with ratio -> r
        if n > mean and ratio < 1.0 and w / (1.0 - max(r, ratio)) < TAIL_TOL:
            break
    return np.asarray(out)


def inversion_thermal(nbar: float, beta: complex, params: ModelParams, t):
    return _from_weights(thermal_weights(nbar, beta, params), params, t)


def state_weights(cavity: CavityState, drive: DriveState, params: ModelParams) -> np.ndarray:
    if isinstance(cavity, Coherent):
        return coherent_weights(cavity.alpha, drive.beta, params)
    if isinstance(cavity, EvenCat):
        return cat_weights(cavity.alpha, drive.beta, params, "even")
    if isinstance(cavity, OddCat):
        return cat_weights(cavity.alpha, drive.beta, params, "odd")
    if isinstance(cavity, Thermal):
        return thermal_weights(cavity.nbar, drive.beta, params)
    raise TypeError(f"unsupported cavity state {cavity!r}")


def inversion_series(cavity: CavityState, drive: DriveState, params: ModelParams,
                     times) -> TimeSeries:
    """Inversion over a monotone grid of physical times."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a non-empty 1-d grid")
    if np.any(np.diff(times) < 0):
        raise ValueError("time grid must be monotone non-decreasing")
    w = state_weights(cavity, drive, params)
    vals = _from_weights(w, params, times)
    meta = {
        **state_record(cavity),
        "beta": [complex(drive.beta).real, complex(drive.beta).imag],
        "params": params.as_dict(),
        "n_terms": len(w),
    }
    return TimeSeries(times * params.kappa_eff, vals, meta)
