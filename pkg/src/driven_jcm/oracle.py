"""Brute-force reference: the driven JCM in a truncated Fock basis.

Nothing here touches the analytic series.  The interaction Hamiltonian is
built directly in the ``atom x a x b`` basis, split into its
conserved-excitation blocks and exponentiated exactly block by block.
Observables are read off the propagated state vector.

Basis ordering is ``(atom, n_a, n_b)`` with atom index 0 = excited,
1 = ground, matching ``amplitudes.reshape(2, N_a + 1, N_b + 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from .model import ModelParams
from .states import (CavityState, Coherent, DriveState, EvenCat, OddCat,
                     Thermal, fock_coefficients, mean_photon_number)

NORM_DRIFT_TOL = 1e-8
MAX_ORACLE_BETA = 10.0


class OracleError(RuntimeError):
    pass


@dataclass
class TruncatedState:
    amplitudes: np.ndarray
    n_a: int
    n_b: int
    norm_defect: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(2, self.n_a + 1, self.n_b + 1)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass
class Hamiltonian:
    """Sparse interaction Hamiltonian together with its cutoffs."""

    matrix: sp.csr_matrix
    n_a: int
    n_b: int
    params: ModelParams

    @property
    def dim(self) -> int:
        return 2 * (self.n_a + 1) * (self.n_b + 1)


def _lowering(n: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n + 1, dtype=float)), 1, shape=(n + 1, n + 1), format="csr")


def build_interaction_hamiltonian(params: ModelParams, n_a: int, n_b: int) -> Hamiltonian:
    """``V = (delta/2) sz + ka (a+ s- + a s+) + kb (b+ s- + b s+)`` (hbar = 1)."""
    if n_a < 1 or n_b < 1:
        raise ValueError("cutoffs must be >= 1")
    dim = 2 * (n_a + 1) * (n_b + 1)
    if dim > 2**31 - 1:
        raise OracleError("cutoffs overflow the index range")
    sz = sp.csr_matrix(np.diag([1.0, -1.0]))
    sm = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))  # |g><e|
    spl = sm.T.tocsr()
    a, b = _lowering(n_a), _lowering(n_b)
    ia, ib = sp.identity(n_a + 1, format="csr"), sp.identity(n_b + 1, format="csr")
    kron = lambda x, y, z: sp.kron(sp.kron(x, y), z)
    H = (0.5 * params.delta * kron(sz, ia, ib)
         + params.kappa_a * (kron(sm, a.T, ib) + kron(spl, a, ib))
         + params.kappa_b * (kron(sm, ia, b.T) + kron(spl, ia, b)))
    H = H.tocsr()
    H.eliminate_zeros()
    if (H - H.conj().T).count_nonzero() != 0:
        raise OracleError("Hamiltonian is not Hermitian")
    return Hamiltonian(H, n_a, n_b, params)


def excitation_number(n_a: int, n_b: int) -> np.ndarray:
    """Total excitation ``n_a + n_b + (1 if excited)`` for every basis index."""
    s, na, nb = np.meshgrid([1, 0], np.arange(n_a + 1), np.arange(n_b + 1), indexing="ij")
    return (s + na + nb).ravel()


@dataclass
class Propagator:
    """Exact propagator assembled from the conserved-excitation blocks."""

    n_a: int
    n_b: int
    blocks: list = field(default_factory=list)  # (indices, eigenvalues, eigenvectors)

    @classmethod
    def from_hamiltonian(cls, ham: Hamiltonian) -> "Propagator":
        exc = excitation_number(ham.n_a, ham.n_b)
        H = ham.matrix
        coo = H.tocoo()
        if np.any(exc[coo.row] != exc[coo.col]):
            raise OracleError("Hamiltonian couples different excitation sectors")
        prop = cls(ham.n_a, ham.n_b)
        for e in np.unique(exc):
            idx = np.flatnonzero(exc == e)
            block = H[idx][:, idx].toarray()
            w, v = np.linalg.eigh(block)
            prop.blocks.append((idx, w, v))
        return prop

    def evolve_many(self, psi0: np.ndarray, times) -> np.ndarray:
        """Propagated flat state vectors, shape ``(len(times), dim)``."""
        psi0 = np.asarray(psi0, dtype=complex).ravel()
        times = np.atleast_1d(np.asarray(times, dtype=float))
        out = np.zeros((times.size, psi0.size), dtype=complex)
        for idx, w, v in self.blocks:
            c = v.conj().T @ psi0[idx]
            if not np.any(c):
                continue
            phases = np.exp(-1j * np.outer(times, w))
            out[:, idx] = (phases * c) @ v.T
        return out


def _as_propagator(h) -> Propagator:
    if isinstance(h, Propagator):
        return h
    if isinstance(h, Hamiltonian):
        return Propagator.from_hamiltonian(h)
    raise TypeError("expected a Hamiltonian or Propagator")


def evolve(state: TruncatedState, h, t: float) -> TruncatedState:
    prop = _as_propagator(h)
    if (prop.n_a, prop.n_b) != (state.n_a, state.n_b):
        raise ValueError("state and Hamiltonian cutoffs differ")
    n0 = state.norm
    if abs(n0 - 1.0) > 1e-10:
        raise OracleError(f"initial state is not normalised (norm={n0:.3e})")
    psi = prop.evolve_many(state.amplitudes, [t])[0]
    out = TruncatedState(psi, state.n_a, state.n_b)
    drift = abs(out.norm - n0)
    if drift > NORM_DRIFT_TOL:
        raise OracleError(f"norm drift {drift:.3e} exceeds {NORM_DRIFT_TOL}")
    out.norm_defect = state.norm_defect + drift
    return out


def product_state(cavity_amps: np.ndarray, drive_amps: np.ndarray, n_a: int, n_b: int,
                  excited: bool = True) -> TruncatedState:
    psi = np.zeros((2, n_a + 1, n_b + 1), dtype=complex)
    psi[0 if excited else 1] = np.outer(cavity_amps[: n_a + 1], drive_amps[: n_b + 1])
    nrm = math.sqrt(float(np.sum(np.abs(psi) ** 2)))
    defect = abs(nrm - 1.0)
    return TruncatedState(psi / nrm, n_a, n_b, norm_defect=defect)


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    return fock_coefficients(Coherent(complex(alpha)), cutoff).amplitudes


def prepare_state(cavity: CavityState, drive: DriveState, n_a: int, n_b: int) -> TruncatedState:
    """Atom excited, cavity and drive in the given pure states."""
    if isinstance(cavity, Thermal):
        raise ValueError("thermal states are mixtures; use thermal_ensemble_run")
    ca = fock_coefficients(cavity, n_a).amplitudes
    cb = fock_coefficients(drive, n_b).amplitudes
    return product_state(ca, cb, n_a, n_b)


def default_cutoff(mean_total: float) -> int:
    """Per-mode cutoff covering the total excitation distribution."""
    lam = mean_total + 1.0
    return int(math.ceil(lam + 8.0 * math.sqrt(lam) + 10.0))


def default_cutoffs(cavity: CavityState, drive: DriveState) -> tuple[int, int]:
    if abs(drive.beta) >= MAX_ORACLE_BETA:
        raise OracleError(f"|beta| = {abs(drive.beta):g} is outside the oracle budget")
    total = mean_photon_number(cavity) + abs(drive.beta) ** 2
    n = default_cutoff(total)
    return n, n


# -- observables -------------------------------------------------------------

def oracle_inversion(state: TruncatedState | np.ndarray) -> float | np.ndarray:
    """``<sigma_z>`` for one state or a stack of flat state vectors."""
    if isinstance(state, TruncatedState):
        amp = state.amplitudes
        return float(np.sum(np.abs(amp[0]) ** 2) - np.sum(np.abs(amp[1]) ** 2))
    psi = np.asarray(state)
    half = psi.shape[-1] // 2
    p = np.abs(psi) ** 2
    return p[..., :half].sum(-1) - p[..., half:].sum(-1)


def reduced_operator_a(ket: TruncatedState, bra: TruncatedState | None = None) -> np.ndarray:
    """``Tr_{atom,b} |ket><bra|`` as an ``(N_a+1)^2`` matrix."""
    bra = ket if bra is None else bra
    return np.einsum("sab,scb->ac", ket.amplitudes, bra.amplitudes.conj())


def reduced_density_a(state: TruncatedState) -> np.ndarray:
    rho = reduced_operator_a(state)
    return 0.5 * (rho + rho.conj().T)


def displacement_matrix(zeta: complex, cutoff: int) -> np.ndarray:
    """``<m|D(zeta)|n>`` for m, n <= cutoff from the associated-Laguerre form.

    Magnitudes are combined in log space so large ``|zeta|`` underflows
    gracefully instead of producing inf * 0.
    """
    N = cutoff
    if zeta == 0:
        return np.eye(N + 1, dtype=complex)
    x = abs(zeta) ** 2
    k = np.arange(N + 1)
    # L[j, k] = L_j^{(k)}(x) by the forward three-term recurrence in j
    L = np.zeros((N + 1, N + 1))
    L[0] = 1.0
    if N >= 1:
        L[1] = 1.0 + k - x
    for j in range(1, N):
        L[j + 1] = ((2 * j + 1 + k - x) * L[j] - (j + k) * L[j - 1]) / (j + 1)
    j = np.arange(N + 1)[:, None]
    logpref = 0.5 * (gammaln(j + 1) - gammaln(j + k + 1)) - 0.5 * x + k * math.log(abs(zeta))
    vals = np.exp(logpref) * L
    phi = np.angle(zeta)
    D = np.zeros((N + 1, N + 1), dtype=complex)
    for kk in range(N + 1):
        jj = np.arange(N + 1 - kk)
        v = vals[jj, kk]
        # m = n + k (lower triangle incl. diagonal)
        D[jj + kk, jj] = v * np.exp(1j * kk * phi)
        if kk:
            # m < n: (-zeta*)^k
            D[jj, jj + kk] = v * ((-1) ** kk) * np.exp(-1j * kk * phi)
    return D


def oracle_characteristic(rho_a: np.ndarray, xi: complex) -> complex:
    """``Tr[rho D(xi)]``."""
    D = displacement_matrix(xi, rho_a.shape[0] - 1)
    return complex(np.trace(rho_a @ D))


def oracle_wigner(rho_a: np.ndarray, gamma, *, check_real: bool = True):
    """Displaced-parity Wigner value ``2 Tr[rho D(gamma) P D(gamma)^+]``.

    Uses ``D(g) P D(-g) = D(2g) P`` so that no basis beyond the cutoff of
    ``rho_a`` is needed.  Accepts a scalar or an array of ``gamma``.  With a
    non-Hermitian ``rho_a`` (cross terms) the complex value is returned.
    """
    g = np.asarray(gamma, dtype=complex)
    N = rho_a.shape[0] - 1
    parity = (-1.0) ** np.arange(N + 1)
    out = np.empty(g.shape, dtype=complex)
    for i, gi in np.ndenumerate(g):
        D = displacement_matrix(2 * gi, N)
        out[i] = 2.0 * np.sum(rho_a.T * D * parity[None, :])
    hermitian = np.allclose(rho_a, rho_a.conj().T, atol=1e-12)
    if hermitian and check_real:
        if np.max(np.abs(out.imag), initial=0.0) > 1e-9:
            raise OracleError("Wigner value has a non-negligible imaginary part")
        out = out.real
    return out if g.ndim else out[()]


# -- ensembles ---------------------------------------------------------------

@dataclass
class EnsembleResult:
    weights: np.ndarray
    observables: np.ndarray  # shape (members, ...) per-member values
    tail_mass: float

    @property
    def mean(self) -> np.ndarray:
        return np.tensordot(self.weights, self.observables, axes=1) / self.weights.sum()


def thermal_ensemble_run(nbar: float, beta: complex, params: ModelParams, t,
                         n_a: int | None = None, n_b: int | None = None,
                         n_terms: int | None = None, tail_tol: float = 1e-12) -> EnsembleResult:
    """Inversion of a thermal cavity as a weighted mixture of Fock inputs.

    Each member starts in ``|e, n, beta>``; the weights are the geometric
    thermal populations.  The member count is chosen so the neglected
    population is below ``tail_tol`` unless ``n_terms`` is given.
    """
    th = Thermal(nbar)
    if n_terms is None:
        if nbar == 0:
            n_terms = 1
        else:
            r = nbar / (1 + nbar)
            n_terms = int(math.ceil(math.log(tail_tol) / math.log(r)))
    n_terms = max(1, n_terms)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if n_b is None:
        n_b = default_cutoff(abs(beta) ** 2 + n_terms)
    if n_a is None:
        n_a = n_b
    if n_a < n_terms:
        n_a = n_terms
    if abs(beta) >= MAX_ORACLE_BETA:
        raise OracleError(f"|beta| = {abs(beta):g} is outside the oracle budget")
    prop = Propagator.from_hamiltonian(build_interaction_hamiltonian(params, n_a, n_b))
    fc = fock_coefficients(th, n_terms - 1) if n_terms > 1 else None
    weights = fc.weights if fc is not None else np.array([1.0])
    cb = coherent_amplitudes(beta, n_b)
    obs = np.empty((n_terms, times.size))
    for n in range(n_terms):
        ca = np.zeros(n_a + 1, dtype=complex)
        ca[n] = 1.0
        psi0 = product_state(ca, cb, n_a, n_b).amplitudes
        obs[n] = oracle_inversion(prop.evolve_many(psi0, times))
    tail = float(1.0 - weights.sum()) if nbar > 0 else 0.0
    return EnsembleResult(weights, obs, max(tail, 0.0))


# -- convenience drivers used by verification --------------------------------

def inversion_timeseries(cavity: CavityState, drive: DriveState, params: ModelParams, times,
                         cutoffs: tuple[int, int] | None = None) -> np.ndarray:
    if isinstance(cavity, Thermal):
        kw = {} if cutoffs is None else {"n_a": cutoffs[0], "n_b": cutoffs[1]}
        return thermal_ensemble_run(cavity.nbar, drive.beta, params, times, **kw).mean
    n_a, n_b = cutoffs or default_cutoffs(cavity, drive)
    prop = Propagator.from_hamiltonian(build_interaction_hamiltonian(params, n_a, n_b))
    psi0 = prepare_state(cavity, drive, n_a, n_b).amplitudes
    return oracle_inversion(prop.evolve_many(psi0, times))


def evolved_state(cavity: CavityState, drive: DriveState, params: ModelParams, t: float,
                  cutoffs: tuple[int, int] | None = None) -> TruncatedState:
    n_a, n_b = cutoffs or default_cutoffs(cavity, drive)
    ham = build_interaction_hamiltonian(params, n_a, n_b)
    return evolve(prepare_state(cavity, drive, n_a, n_b), ham, t)


def wigner_grid(cavity: CavityState, drive: DriveState, params: ModelParams, t: float,
                gammas, cutoffs: tuple[int, int] | None = None) -> np.ndarray:
    state = evolved_state(cavity, drive, params, t, cutoffs)
    return oracle_wigner(reduced_density_a(state), gammas)


def hermite_functions(x, n_max: int) -> np.ndarray:
    """Normalized oscillator eigenfunctions ``psi_0..psi_{n_max}`` at real ``x``.

    Uses the normalized recurrence, which never forms a factorial or a raw
    Hermite polynomial.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def oracle_marginal(rho_a: np.ndarray, q) -> np.ndarray:
    """``sqrt(2 pi) <q|rho|q>``, the q-quadrature density in the same units as the series marginals."""
    psi = hermite_functions(q, rho_a.shape[0] - 1)
    dens = np.einsum("m...,mn,n...->...", psi, rho_a, psi)
    return math.sqrt(2.0 * math.pi) * np.real(dens)


__all__ = [
    "TruncatedState", "Hamiltonian", "Propagator", "EnsembleResult", "OracleError",
    "build_interaction_hamiltonian", "evolve", "oracle_inversion", "reduced_density_a",
    "reduced_operator_a", "oracle_wigner", "oracle_characteristic", "displacement_matrix",
    "thermal_ensemble_run", "prepare_state", "product_state", "default_cutoffs",
    "inversion_timeseries", "evolved_state", "wigner_grid", "excitation_number",
    "hermite_functions", "oracle_marginal",
]
