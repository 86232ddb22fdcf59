"""Wigner function of the cavity mode.

The central object is the phase-space kernel ``K_gamma``: the Wigner function
of the cavity mode when cavity and drive start in coherent states.  Cat
states need the kernel at *decoupled* labels (a ket ``|alpha>`` paired with a
bra ``<-alpha|``), so every kernel here takes a :class:`KernelArgs` with
independent holomorphic and antiholomorphic labels and reads every modulus
squared as ``hol * antihol``.

Conventions: ``gamma = (q + i p) / sqrt(2)``; a coherent state ``|alpha>``
has ``W = 2 exp(-2 |gamma - alpha|^2)`` and ``∫∫ W dq dp / (2 pi) = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _series
from .model import ModelParams, rabi_arrays, quasimode_transform
from .states import CavityState, Coherent, DriveState, EvenCat, OddCat, state_record

FIGURE_ELL = 50
W_BOUND = 2.0
BOUND_TOL = 1e-9
IMAG_TOL = 1e-9


class WignerBoundError(ArithmeticError):
    """An assembled Wigner value escaped ``|W| <= 2`` or stayed complex."""


@dataclass(frozen=True)
class KernelArgs:
    hol_a: complex
    antihol_a: complex
    hol_b: complex
    antihol_b: complex

    @classmethod
    def physical(cls, alpha_a: complex, alpha_b: complex) -> "KernelArgs":
        return cls(complex(alpha_a), complex(alpha_a).conjugate(),
                   complex(alpha_b), complex(alpha_b).conjugate())

    @property
    def is_physical(self) -> bool:
        return (self.antihol_a == self.hol_a.conjugate()
                and self.antihol_b == self.hol_b.conjugate())

    def labels(self, params: ModelParams):
        """Quasi-mode labels ``(x_A, y_A, x_B, y_B)``."""
        xA, xB = quasimode_transform(self.hol_a, self.hol_b, params)
        yA, yB = quasimode_transform(self.antihol_a, self.antihol_b, params)
        return xA, yA, xB, yB


@dataclass(frozen=True)
class PhaseGrid:
    q_min: float
    q_max: float
    p_min: float
    p_max: float
    n_q: int
    n_p: int

    def __post_init__(self):
        if self.n_q < 2 or self.n_p < 2:
            raise ValueError("grid needs at least two points per axis")
        if not (self.q_max > self.q_min and self.p_max > self.p_min):
            raise ValueError("grid bounds must satisfy max > min")

    @property
    def q(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n_q)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_p)

    def gammas(self) -> np.ndarray:
        """Complex phase-space points, shape ``(n_q, n_p)``."""
        Q, P = np.meshgrid(self.q, self.p, indexing="ij")
        return (Q + 1j * P) / math.sqrt(2.0)

    def as_dict(self) -> dict:
        return {"q_min": self.q_min, "q_max": self.q_max, "n_q": self.n_q,
                "p_min": self.p_min, "p_max": self.p_max, "n_p": self.n_p}


FIGURE_GRID = PhaseGrid(-10.0, 4.0, -7.0, 7.0, 141, 141)


@dataclass
class WignerSurface:
    grid: PhaseGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict)
    max_imag_residue: float = 0.0

    @property
    def normalization(self) -> float:
        """Trapezoid estimate of ``∫∫ W dq dp / (2 pi)``."""
        inner = np.trapezoid(self.values, self.grid.p, axis=1)
        return float(np.trapezoid(inner, self.grid.q) / (2 * math.pi))


@dataclass
class KernelResult:
    values: np.ndarray
    n_terms: int
    shell: float


# -- kernels -----------------------------------------------------------------

def _wigner_kernel_eval(args: KernelArgs, params: ModelParams, gamma, t: float,
                        ell: int | None = None, log_scale: float = 0.0) -> KernelResult:
    gamma = np.asarray(gamma, dtype=complex)
    flat = gamma.ravel()
    ea, eb = params.eps_a, params.eps_b
    xA, yA, xB, yB = args.labels(params)
    g = flat - eb * xB
    gb = np.conj(flat) - eb * yB
    a_k = 2.0 * ea * gb
    a_b = 2.0 * ea * g
    c = -(ea * ea - eb * eb)
    pref = 2.0 * np.exp(-2.0 * g * gb - xA * yA + log_scale)

    def evaluate(F, G):
        return _series.chunked_map(
            lambda s: pref[s] * _series.pair_series(xA, yA, a_k[s], a_b[s], 0.0, 0.0, c, F, G),
            flat.size)

    scale = (max(np.max(np.abs(a_k * xA), initial=0.0), np.max(np.abs(a_b * yA), initial=0.0))
             + abs(c * xA * yA))
    vals, N, shell = _series.adaptive_sum(evaluate, params, t, _series.initial_terms(scale), ell)
    return KernelResult(vals.reshape(gamma.shape), N, shell)


def wigner_kernel(args: KernelArgs, params: ModelParams, gamma, t: float,
                  ell: int | None = None):
    """``K_gamma`` at (possibly decoupled) labels; complex, same shape as ``gamma``.

    ``ell`` fixes the largest Rabi index kept; by default the truncation grows
    until the outermost excitation shell changes the result by < 1e-12.
    """
    out = _wigner_kernel_eval(args, params, gamma, t, ell).values
    return out if out.ndim else complex(out)


def char_kernel(args: KernelArgs, params: ModelParams, xi, t: float,
                ell: int | None = None):
    """Characteristic-function kernel ``<U^+ D_a(xi) U>`` over the coherent labels."""
    xi = np.asarray(xi, dtype=complex)
    flat = xi.ravel()
    ea, eb = params.eps_a, params.eps_b
    xA, yA, xB, yB = args.labels(params)
    a_k = -ea * np.conj(flat)
    a_b = ea * flat
    pref = np.exp(-0.5 * np.abs(flat) ** 2 + eb * (flat * yB - np.conj(flat) * xB) - xA * yA)

    def evaluate(F, G):
        return _series.chunked_map(
            lambda s: pref[s] * _series.pair_series(xA, yA, a_k[s], a_b[s], 0.0, 0.0, 1.0, F, G),
            flat.size)

    scale = max(np.max(np.abs(a_k * xA), initial=0.0), np.max(np.abs(a_b * yA), initial=0.0)) + abs(xA * yA)
    vals, _, _ = _series.adaptive_sum(evaluate, params, t, _series.initial_terms(scale), ell)
    vals = vals.reshape(xi.shape)
    return vals if vals.ndim else complex(vals)


def _equal_terms(args: KernelArgs, gamma, ell: int):
    """Per-point factors of the equal-coupling double sum.

    Returns ``(O, Ob, dd)`` where ``O[:, m]`` and ``Ob[:, m]`` are the ket
    and bra factors (``Ob`` is the conjugate of ``O`` for physical labels)
    and ``dd = |2 gamma - (alpha_a - alpha_b)|^2`` in hol*antihol form.
    """
    g = np.asarray(gamma, dtype=complex).ravel()
    sh = args.hol_a + args.hol_b
    sa = args.antihol_a + args.antihol_b
    dh = 2.0 * g - (args.hol_a - args.hol_b)
    da = 2.0 * np.conj(g) - (args.antihol_a - args.antihol_b)
    env = math.sqrt(2.0) * np.exp(-0.25 * (sh * sa + dh * da))
    m = np.arange(ell + 1)
    O = np.empty((g.size, ell + 1), dtype=complex)
    Ob = np.empty_like(O)
    O[:, 0] = env
    Ob[:, 0] = env
    zk = 0.5 * sh * da
    zb = 0.5 * sa * dh
    for k in m[1:]:
        O[:, k] = O[:, k - 1] * zk / k
        Ob[:, k] = Ob[:, k - 1] * zb / k
    return O, Ob, dh * da


def wigner_kernel_equal(args: KernelArgs, params: ModelParams, gamma, t: float,
                        ell: int = FIGURE_ELL):
    """Equal-coupling kernel as the finite double sum up to ``ell``.

    For physical labels this is the diagonal plus twice the real part of the
    strict upper triangle, returned as a real array; decoupled labels have no
    conjugate pairing and get the full (complex) double sum.
    """
    if not params.is_equal_coupling:
        raise ValueError("wigner_kernel_equal requires kappa_a == kappa_b")
    if ell < 1:
        raise ValueError("ell must be >= 1")
    gamma = np.asarray(gamma, dtype=complex)
    F, G = rabi_arrays(ell, params, t)
    m = np.arange(ell + 1)
    Gs = G / np.sqrt(m + 1.0)
    physical = args.is_physical

    def chunk(s):
        O, Ob, dd = _equal_terms(args, gamma.ravel()[s], ell)
        if not physical:
            return (O @ F) * (Ob @ np.conj(F)) + 0.5 * dd * (O @ Gs) * (Ob @ np.conj(Gs))
        # R^{(m,m')} = F_m F*_m' + dd/2 G_m G*_m' / sqrt((m+1)(m'+1))
        R = (F[:, None] * np.conj(F)[None, :])[None] + 0.5 * dd[:, None, None] * (Gs[:, None] * np.conj(Gs)[None, :])[None]
        T = O[:, :, None] * Ob[:, None, :] * R
        diag = np.einsum("pmm->p", T)
        upper = np.triu(np.ones((ell + 1, ell + 1), dtype=bool), 1)
        return diag.real + 2.0 * T[:, upper].sum(axis=1).real

    out = _series.chunked_map(chunk, gamma.size, chunk=64).reshape(gamma.shape)
    if physical:
        out = out.real
    return out if out.ndim else out[()]


def cross_kernel(alpha: complex, beta: complex, params: ModelParams, gamma, t: float,
                 ell: int | None = None, scaled: bool = False):
    """Interference kernel of the cat states.

    Sum of the kernels at the decoupled labels (ket ``alpha``, bra ``-alpha``)
    and (ket ``-alpha``, bra ``alpha``).  With ``scaled=True`` the result is
    multiplied by ``exp(-2|alpha|^2)`` inside the exponent, which keeps it
    O(1) for large ``|alpha|``.
    """
    return _cross_eval(alpha, beta, params, gamma, t, ell, scaled)[0]


def _cross_eval(alpha, beta, params, gamma, t, ell, scaled):
    alpha, beta = complex(alpha), complex(beta)
    ls = -2.0 * abs(alpha) ** 2 if scaled else 0.0
    bb = beta.conjugate()
    r1 = _wigner_kernel_eval(KernelArgs(alpha, -alpha.conjugate(), beta, bb), params, gamma, t, ell, ls)
    r2 = _wigner_kernel_eval(KernelArgs(-alpha, alpha.conjugate(), beta, bb), params, gamma, t, ell, ls)
    total = r1.values + r2.values
    imag = float(np.max(np.abs(total.imag), initial=0.0))
    real = total.real
    return (real if real.ndim else float(real)), imag, max(r1.n_terms, r2.n_terms), max(r1.shell, r2.shell)


# -- assembled Wigner functions ----------------------------------------------

def _check(values, imag, what):
    if imag > IMAG_TOL * max(1.0, float(np.max(np.abs(values), initial=0.0))):
        raise WignerBoundError(f"{what}: imaginary residue {imag:.3e} exceeds tolerance")
    if np.max(np.abs(values), initial=0.0) > W_BOUND + BOUND_TOL:
        raise WignerBoundError(f"{what}: |W| exceeds 2; the series is not converged")


def _coherent_eval(alpha, beta, params, gamma, t, ell):
    r = _wigner_kernel_eval(KernelArgs.physical(alpha, beta), params, gamma, t, ell)
    imag = float(np.max(np.abs(r.values.imag), initial=0.0))
    return r.values.real, imag, r.n_terms, r.shell


def _cat_eval(alpha, beta, params, gamma, t, ell, sign):
    alpha = complex(alpha)
    x = abs(alpha) ** 2
    k1 = _wigner_kernel_eval(KernelArgs.physical(alpha, beta), params, gamma, t, ell)
    k2 = _wigner_kernel_eval(KernelArgs.physical(-alpha, beta), params, gamma, t, ell)
    cross, cimag, cn, cshell = _cross_eval(alpha, beta, params, gamma, t, ell, scaled=True)
    # exp(x) / (4 cosh x) and exp(x) / (4 sinh x) written to stay finite for large x
    norm = 1.0 / (2.0 * (1.0 + sign * math.exp(-2.0 * x)))
    total = k1.values + k2.values
    vals = norm * (total.real + sign * cross)
    imag = norm * (float(np.max(np.abs(total.imag), initial=0.0)) + cimag)
    return vals, imag, max(k1.n_terms, k2.n_terms, cn), max(k1.shell, k2.shell, cshell)


def wigner_coherent(alpha, beta, params: ModelParams, gamma, t: float, ell: int | None = None):
    vals, imag, _, _ = _coherent_eval(alpha, beta, params, gamma, t, ell)
    _check(vals, imag, "coherent Wigner")
    return vals if np.ndim(vals) else float(vals)


def wigner_even(alpha, beta, params: ModelParams, gamma, t: float, ell: int | None = None):
    vals, imag, _, _ = _cat_eval(alpha, beta, params, gamma, t, ell, +1.0)
    _check(vals, imag, "even-cat Wigner")
    return vals if np.ndim(vals) else float(vals)


def wigner_odd(alpha, beta, params: ModelParams, gamma, t: float, ell: int | None = None):
    if alpha == 0:
        raise ValueError("odd cat state is undefined at alpha = 0")
    vals, imag, _, _ = _cat_eval(alpha, beta, params, gamma, t, ell, -1.0)
    _check(vals, imag, "odd-cat Wigner")
    return vals if np.ndim(vals) else float(vals)


def _equal_route(cavity, drive, params, gamma, t, ell):
    """Assembly through the equal-coupling double sum."""
    beta = drive.beta
    if isinstance(cavity, Coherent):
        v = wigner_kernel_equal(KernelArgs.physical(cavity.alpha, beta), params, gamma, t, ell)
        return v, 0.0
    alpha = cavity.alpha
    sign = 1.0 if isinstance(cavity, EvenCat) else -1.0
    x = abs(alpha) ** 2
    k = (wigner_kernel_equal(KernelArgs.physical(alpha, beta), params, gamma, t, ell)
         + wigner_kernel_equal(KernelArgs.physical(-alpha, beta), params, gamma, t, ell))
    bb = complex(beta).conjugate()
    cr = (wigner_kernel_equal(KernelArgs(alpha, -alpha.conjugate(), beta, bb), params, gamma, t, ell)
          + wigner_kernel_equal(KernelArgs(-alpha, alpha.conjugate(), beta, bb), params, gamma, t, ell))
    cr = cr * math.exp(-2.0 * x)
    norm = 1.0 / (2.0 * (1.0 + sign * math.exp(-2.0 * x)))
    vals = norm * (k + sign * cr.real)
    return vals, norm * float(np.max(np.abs(cr.imag), initial=0.0))


def wigner_surface(cavity: CavityState, drive: DriveState, params: ModelParams, t: float,
                   grid: PhaseGrid = FIGURE_GRID, ell: int | None = None,
                   method: str = "general") -> WignerSurface:
    """Wigner function of the cavity mode on a phase-space grid.

    ``method="general"`` uses the kernel valid for any couplings (adaptive
    truncation unless ``ell`` is given); ``method="equal"`` uses the
    equal-coupling finite sum with ``ell`` (default 50) terms.
    """
    gam = grid.gammas()
    if isinstance(cavity, Coherent):
        kind = "coherent"
    elif isinstance(cavity, (EvenCat, OddCat)):
        kind = cavity.kind
    else:
        raise ValueError("Wigner assembly supports coherent, even and odd cavity states")

    if method == "equal":
        ell_used = FIGURE_ELL if ell is None else ell
        vals, imag = _equal_route(cavity, drive, params, gam, t, ell_used)
        shell = float("nan")
        n_terms = ell_used
    elif method == "general":
        if kind == "coherent":
            vals, imag, n_terms, shell = _coherent_eval(cavity.alpha, drive.beta, params, gam, t, ell)
        else:
            sign = 1.0 if kind == "even" else -1.0
            vals, imag, n_terms, shell = _cat_eval(cavity.alpha, drive.beta, params, gam, t, ell, sign)
    else:
        raise ValueError(f"unknown method {method!r}")
    _check(vals, imag, f"{kind} Wigner surface")
    meta = {
        **state_record(cavity),
        "beta": [complex(drive.beta).real, complex(drive.beta).imag],
        "params": params.as_dict(),
        "kappa_eff_t": t * params.kappa_eff,
        "t": t,
        "method": method,
        "ell": n_terms,
        "ell_mode": "adaptive" if (ell is None and method == "general") else "fixed",
        "last_shell": shell,
        "min_W": float(np.min(vals)),
        "max_W": float(np.max(vals)),
    }
    return WignerSurface(grid, np.asarray(vals, dtype=float), meta, float(imag))


def characteristic(cavity: CavityState, drive: DriveState, params: ModelParams, xi, t: float):
    """``chi(xi; t) = Tr[rho_a(t) D(xi)]`` for coherent and cat cavity states."""
    beta = complex(drive.beta)
    if isinstance(cavity, Coherent):
        return char_kernel(KernelArgs.physical(cavity.alpha, beta), params, xi, t)
    if not isinstance(cavity, (EvenCat, OddCat)):
        raise ValueError("characteristic function supports coherent, even and odd cavity states")
    alpha = complex(cavity.alpha)
    sign = 1.0 if isinstance(cavity, EvenCat) else -1.0
    x = abs(alpha) ** 2
    bb = beta.conjugate()
    k = (char_kernel(KernelArgs.physical(alpha, beta), params, xi, t)
         + char_kernel(KernelArgs.physical(-alpha, beta), params, xi, t))
    cr = (char_kernel(KernelArgs(alpha, -alpha.conjugate(), beta, bb), params, xi, t)
          + char_kernel(KernelArgs(-alpha, alpha.conjugate(), beta, bb), params, xi, t))
    norm = 1.0 / (2.0 * (1.0 + sign * math.exp(-2.0 * x)))
    return norm * (k + sign * math.exp(-2.0 * x) * cr)
