"""Quadrature marginals of the cavity Wigner function.

Marginals keep the ``∫ W dp / sqrt(2 pi)`` normalization, so a curve
integrates to ``sqrt(2 pi)`` and the vacuum q-marginal is
``sqrt(2) exp(-q^2)``.  :meth:`MarginalCurve.normalized` divides that factor
out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import comb

from . import _series
from .model import ModelParams, rabi_arrays
from .wigner import KernelArgs, WignerSurface

SQRT_2PI = math.sqrt(2.0 * math.pi)
NEG_TOL = 1e-9
MIN_POINTS = 8


class MarginalBoundError(ArithmeticError):
    """A marginal went negative beyond tolerance."""


@dataclass
class MarginalCurve:
    axis: str
    points: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.axis not in ("q", "p"):
            raise ValueError("axis must be 'q' or 'p'")

    @property
    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.points))

    def normalized(self) -> "MarginalCurve":
        return MarginalCurve(self.axis, self.points, self.values / SQRT_2PI,
                             {**self.meta, "normalization": "unit"})


def hermite_polys(z, n_max: int) -> np.ndarray:
    """Physicists' Hermite ``H_0..H_{n_max}`` at complex ``z``; shape (n_max + 1, *z.shape)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((n_max + 1,) + z.shape, dtype=complex)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * z
    for n in range(1, n_max):
        out[n + 1] = 2.0 * z * out[n] - 2.0 * n * out[n - 1]
    return out


def _shift(args: KernelArgs, params: ModelParams) -> complex:
    """``eps_b (x_B + y_B) / sqrt(2)``: the spectator mode's pull on the quadrature."""
    _, _, xB, yB = args.labels(params)
    return params.eps_b * (xB + yB) / math.sqrt(2.0)


def hermite_kernel(mu: float, m: int, m_prime: int, alpha_a: complex, alpha_b: complex,
                   params: ModelParams) -> complex:
    """Finite Hermite sum over ``k <= min(m, m')`` at the shifted quadrature.

    ``sum_k (2k)!! C(m,k) C(m',k) (eps_b/eps_a)^(2k) H_{m-k}(w) H_{m'-k}(w)`` with
    ``w = mu - eps_b (x_B + conj x_B)/sqrt(2)``.
    """
    if m < 0 or m_prime < 0:
        raise ValueError("m and m' must be non-negative")
    if params.eps_a == 0:
        raise ValueError("hermite_kernel needs eps_a > 0")
    args = KernelArgs.physical(alpha_a, alpha_b)
    w = mu - _shift(args, params)
    H = hermite_polys(w, max(m, m_prime))
    ratio = (params.eps_b / params.eps_a) ** 2
    total = 0j
    for k in range(min(m, m_prime) + 1):
        dfact = 2.0 ** k * math.factorial(k)
        total += dfact * comb(m, k) * comb(m_prime, k) * ratio ** k * H[m - k] * H[m_prime - k]
    return complex(total)


def _q_kernel_args(args: KernelArgs, params: ModelParams, q, t: float, ell: int | None):
    q = np.asarray(q, dtype=float)
    flat = q.ravel()
    ea, eb = params.eps_a, params.eps_b
    xA, yA, _, _ = args.labels(params)
    w = flat - _shift(args, params)
    lin = math.sqrt(2.0) * ea * w
    quad = -0.5 * ea * ea
    pref = math.sqrt(2.0) * np.exp(-w * w - xA * yA)

    def evaluate(F, G):
        return _series.chunked_map(
            lambda s: pref[s] * _series.pair_series(xA, yA, lin[s], lin[s], quad, quad, eb * eb, F, G),
            flat.size)

    scale = float(np.max(np.abs(lin), initial=0.0)) * max(abs(xA), abs(yA)) + abs(xA * yA) + 1.0
    vals, _, _ = _series.adaptive_sum(evaluate, params, t, _series.initial_terms(scale), ell)
    return vals.reshape(q.shape)


def _finish(vals, physical: bool):
    if physical:
        if np.max(np.abs(vals.imag), initial=0.0) > 1e-9 * max(1.0, float(np.max(np.abs(vals), initial=0.0))):
            raise MarginalBoundError("marginal kept an imaginary part")
        vals = vals.real
        if np.min(vals, initial=0.0) < -NEG_TOL:
            raise MarginalBoundError(f"marginal negative: {np.min(vals):.3e}")
    return vals if np.ndim(vals) else vals[()]


def marginal_q_kernel(alpha_a: complex, alpha_b: complex, params: ModelParams, q, t: float,
                      ell: int | None = None):
    """``|psi_a(q; t)|^2`` for the coherent input ``|alpha_a, alpha_b>``."""
    args = KernelArgs.physical(alpha_a, alpha_b)
    return _finish(_q_kernel_args(args, params, q, t, ell), True)


def marginal_p_kernel(alpha_a: complex, alpha_b: complex, params: ModelParams, p, t: float,
                      ell: int | None = None):
    """``|phi_a(p; t)|^2``: the q-kernel at amplitudes rotated by -i."""
    return marginal_q_kernel(-1j * complex(alpha_a), -1j * complex(alpha_b), params, p, t, ell)


def marginal_q_kernel_hermite(alpha_a: complex, alpha_b: complex, params: ModelParams, q,
                              t: float, ell: int = 40):
    """The q-marginal as the explicit double sum over Hermite kernels, truncated at ``ell``.

    Slow (cubic in ``ell``); kept as an independent check of the generating-
    function evaluation used by :func:`marginal_q_kernel`.
    """
    if params.eps_a == 0:
        raise ValueError("the Hermite form needs eps_a > 0")
    args = KernelArgs.physical(alpha_a, alpha_b)
    xA, yA, _, _ = args.labels(params)
    ea, eb = params.eps_a, params.eps_b
    ratio = (eb / ea) ** 2
    F, G = rabi_arrays(ell, params, t)
    q = np.atleast_1d(np.asarray(q, dtype=float))
    w = q - _shift(args, params)
    H = hermite_polys(w, ell + 1)
    M = ell + 2
    m = np.arange(M)
    # amp[m] = (sqrt2 eps_a x_A)^m / (2m)!!, built by products
    amp_x = np.cumprod(np.r_[1.0, math.sqrt(2.0) * ea * xA / (2.0 * m[1:])])
    amp_y = np.cumprod(np.r_[1.0, math.sqrt(2.0) * ea * yA / (2.0 * m[1:])])
    # hk[m, m'] at each q: sum_k (2k)!! C(m,k) C(m',k) ratio^k H_{m-k} H_{m'-k}
    Hk = np.zeros((len(q), M, M), dtype=complex)
    for k in range(M):
        wk = 2.0 ** k * math.factorial(k) * ratio ** k
        ck = comb(m[k:], k)
        block = (ck[:, None] * ck[None, :]) * wk
        Hk[:, k:, k:] += block[None] * H[: M - k].T[:, :, None] * H[: M - k].T[:, None, :]
    A = amp_x[:, None] * amp_y[None, :]
    n = np.arange(ell + 1)
    FF = F[:, None] * np.conj(F)[None, :]
    GG = G[:, None] * np.conj(G)[None, :] / np.sqrt(np.outer(n + 1.0, n + 1.0))
    Y = Hk[:, :-1, :-1] * FF + 0.5 * ea * ea * Hk[:, 1:, 1:] * GG
    S = np.einsum("mn,qmn->q", A[:-1, :-1], Y)
    out = math.sqrt(2.0) * np.exp(-w * w - xA * yA) * S
    return _finish(out, True)


def marginal_coherent(alpha: complex, beta: complex, params: ModelParams, axis: str,
                      points, t: float, ell: int | None = None) -> MarginalCurve:
    points = np.asarray(points, dtype=float)
    if axis == "q":
        vals = marginal_q_kernel(alpha, beta, params, points, t, ell)
    elif axis == "p":
        vals = marginal_p_kernel(alpha, beta, params, points, t, ell)
    else:
        raise ValueError("axis must be 'q' or 'p'")
    meta = {
        "state": "coherent",
        "alpha": [complex(alpha).real, complex(alpha).imag],
        "beta": [complex(beta).real, complex(beta).imag],
        "params": params.as_dict(),
        "t": t,
        "kappa_eff_t": t * params.kappa_eff,
        "normalization": "sqrt(2pi)",
        "source": "series",
    }
    return MarginalCurve(axis, points, np.atleast_1d(vals), meta)


def marginal_from_surface(surface: WignerSurface, axis: str) -> MarginalCurve:
    """Integrate a Wigner surface over the conjugate quadrature (trapezoid rule)."""
    g = surface.grid
    if g.n_q < MIN_POINTS or g.n_p < MIN_POINTS:
        raise ValueError(f"grid too coarse for marginals: need >= {MIN_POINTS} points per axis")
    if axis == "q":
        vals = np.trapezoid(surface.values, g.p, axis=1) / SQRT_2PI
        pts = g.q
    elif axis == "p":
        vals = np.trapezoid(surface.values, g.q, axis=0) / SQRT_2PI
        pts = g.p
    else:
        raise ValueError("axis must be 'q' or 'p'")
    meta = {**surface.meta, "normalization": "sqrt(2pi)", "source": "surface"}
    return MarginalCurve(axis, pts, vals, meta)


__all__ = [
    "MarginalCurve", "MarginalBoundError", "hermite_polys", "hermite_kernel",
    "marginal_q_kernel", "marginal_p_kernel", "marginal_q_kernel_hermite",
    "marginal_coherent", "marginal_from_surface",
]
