"""Shared double-series engine for the phase-space kernels.

The Wigner, characteristic-function and marginal kernels all take the form

    sum_{n,n'} x^n y^n' [F_n F*_n' T(n,n') + sqrt((n+1)(n'+1)) G_n G*_n' T(n+1,n'+1)]

where ``T(n,n') = [s^n sb^n'] exp(a s + b s^2 + ab sb + bb sb^2 + c s sb)``.
``x``/``y`` are the holomorphic/antiholomorphic quasi-mode labels; for a
physical coherent input ``y = conj(x)``.  The j-sum produced by the ``c``
coupling is the finite Laguerre (or Hermite) expansion; it is evaluated with
the label powers absorbed term by term so no label ever appears in a
denominator.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .model import ModelParams, SeriesCapError, rabi_arrays

SHELL_TOL = 1e-12
_CHUNK = 512


def _scaled_coeffs(a, b, x, N):
    """Return ``(d, f)`` with ``d_i = D_i x^i`` and ``f_i = D_i x^(i-1)``.

    ``D_i = [s^i] exp(a s + b s^2)`` obeys ``i D_i = a D_{i-1} + 2 b D_{i-2}``;
    ``f_0`` is unused and set to zero.
    """
    a = np.asarray(a, dtype=complex)
    G = a.shape[0]
    d = np.zeros((G, N + 2), dtype=complex)
    f = np.zeros((G, N + 2), dtype=complex)
    d[:, 0] = 1.0
    ax = a * x
    bx2 = 2.0 * b * x * x
    for i in range(1, N + 2):
        prev2 = d[:, i - 2] if i >= 2 else 0.0
        f[:, i] = (a * d[:, i - 1] + 2.0 * b * x * prev2) / i
        d[:, i] = (ax * d[:, i - 1] + bx2 * prev2) / i
    return d, f


def _hankel_apply(coef, vec, N):
    """``out[:, j] = sum_i coef[:, i] vec[i + j]`` for j = 0..N."""
    M = vec.shape[0]
    H = np.zeros((coef.shape[1], N + 1), dtype=complex)
    for j in range(N + 1):
        k = min(M - j, coef.shape[1])
        if k > 0:
            H[:k, j] = vec[j:j + k]
    return coef @ H


def pair_series(x, y, a, ab, b, bb, c, F, G):
    """Evaluate the double series for arrays ``a``/``ab`` of shape (P,).

    ``F`` has entries 0..N and ``G`` entries 0..N (Rabi indices); the returned
    array has shape (P,).
    """
    N = F.shape[0] - 1
    d_k, f_k = _scaled_coeffs(a, b, x, N)
    d_b, f_b = _scaled_coeffs(ab, bb, y, N)
    n = np.arange(1, N + 2)
    gt = np.zeros(N + 2, dtype=complex)  # gt[n] = sqrt(n) G_{n-1}
    gt[1:] = np.sqrt(n) * G
    gtc = np.conj(gt)

    Pk = _hankel_apply(d_k[:, : N + 1], F, N)
    Pb = _hankel_apply(d_b[:, : N + 1], np.conj(F), N)
    w = c * x * y
    wj = _powers_over_factorial(w, N)
    S = (Pk * Pb) @ wj

    # G part, j = 0 and j >= 1 handled separately (see module docstring)
    S = S + np.sum(f_k * gt, axis=1) * np.sum(f_b * gtc, axis=1)
    if c != 0:
        # w^(j-1)/(j-1)! for j = 1..N+1, divided by j below
        wj_ext = np.append(wj, wj[-1] * w / (N + 1))
        Pk1 = _hankel_apply(d_k, gt, N + 1)[:, 1:]
        Pb1 = _hankel_apply(d_b, gtc, N + 1)[:, 1:]
        # c (c x y)^(j-1) / j!  for j = 1..N+1
        coefj = c * wj_ext[:-1] / np.arange(1, N + 2)
        S = S + (Pk1 * Pb1) @ coefj
    return S


def _powers_over_factorial(w, N):
    out = np.empty(N + 1, dtype=complex)
    out[0] = 1.0
    for i in range(1, N + 1):
        out[i] = out[i - 1] * w / i
    return out


def initial_terms(scale: float, minimum: int = 12) -> int:
    r = max(scale, 0.0)
    return max(minimum, int(math.ceil(r + 6.0 * math.sqrt(r) + 15)))


def thread_count() -> int:
    env = os.environ.get("DRIVEN_JCM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(8, os.cpu_count() or 1))


def chunked_map(fn, n_points: int, chunk: int = _CHUNK):
    """Apply ``fn(slice)`` over index chunks, possibly in threads.

    Results are concatenated in chunk order, so the output never depends on
    scheduling.
    """
    slices = [slice(i, min(i + chunk, n_points)) for i in range(0, n_points, chunk)]
    workers = min(thread_count(), len(slices))
    if workers <= 1:
        parts = [fn(s) for s in slices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(fn, slices))
    return np.concatenate(parts) if parts else np.empty(0, dtype=complex)


def adaptive_sum(evaluate, params: ModelParams, t: float, n_start: int,
                 fixed: int | None = None, tol: float = SHELL_TOL):
    """Drive ``evaluate(F, G)`` with growing truncation until the last shell is negligible.

    ``evaluate`` returns the prefactored kernel values for Rabi arrays with
    entries 0..N.  Returns ``(values, N, shell)`` where ``shell`` is the
    largest change caused by the outermost excitation index.
    """
    N = fixed if fixed is not None else n_start
    while True:
        if N > params.n_cap:
            raise SeriesCapError("phase-space series did not converge", scale=float(n_start),
                                 cap=params.n_cap)
        F, G = rabi_arrays(N, params, t)
        full = evaluate(F, G)
        if not np.all(np.isfinite(full)):
            raise FloatingPointError("non-finite intermediate in phase-space series")
        Ft, Gt = F.copy(), G.copy()
        Ft[-1] = 0.0
        Gt[-1] = 0.0
        shell = float(np.max(np.abs(full - evaluate(Ft, Gt)), initial=0.0))
        if fixed is not None:
            return full, N, shell
        scale = max(1.0, float(np.max(np.abs(full), initial=0.0)))
        if shell <= tol * scale:
            return full, N, shell
        N = int(math.ceil(N * 1.5)) + 1
