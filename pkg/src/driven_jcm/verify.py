"""Series-versus-oracle harness used by ``driven-jcm verify``."""
from __future__ import annotations

import math

import numpy as np

from . import oracle
from .inversion import inversion_series
from .marginals import marginal_q_kernel
from .model import ModelParams
from .states import Coherent, DriveState, EvenCat, OddCat, Thermal
from .wigner import KernelArgs, wigner_coherent, wigner_kernel, wigner_kernel_equal

TOLERANCES = {
    "inversion": 1e-6,
    "wigner_grid": 1e-5,
    "general_vs_equal": 1e-10,
    "marginal": 1e-8,
}


def _check(name, kind, dev, extra=None):
    tol = TOLERANCES[kind]
    out = {"name": name, "max_abs_deviation": float(dev), "tolerance": tol, "passed": bool(dev <= tol)}
    if extra:
        out.update(extra)
    return out


def _inversion_checks(quick: bool):
    eps = (3 / math.sqrt(10), 1 / math.sqrt(10))
    times = np.linspace(0.0, 20.0, 201)
    states = [Coherent(1.0), EvenCat(1.0), OddCat(1.0)]
    if not quick:
        states.append(Thermal(0.5))
    deltas = (0.0,) if quick else (0.0, 6.0)
    out = []
    for d in deltas:
        p = ModelParams.from_eps(*eps, d)
        for st in states:
            s = inversion_series(st, DriveState(2.0), p, times).values
            o = oracle.inversion_timeseries(st, DriveState(2.0), p, times)
            out.append(_check(f"inversion/{st.kind}/delta={d:g}", "inversion", np.max(np.abs(s - o))))
    return out


def _wigner_grid_check(t_keff: float):
    p = ModelParams.equal_coupling(0.0)
    q = np.linspace(-4.0, 4.0, 21)
    P = np.linspace(-4.0, 4.0, 21)
    Q, PP = np.meshgrid(q, P, indexing="ij")
    gam = (Q + 1j * PP) / math.sqrt(2.0)
    s = wigner_coherent(1.0, 2.0, p, gam, t_keff)
    o = oracle.wigner_grid(Coherent(1.0), DriveState(2.0), p, t_keff, gam.ravel(), cutoffs=(48, 48))
    return _check(f"wigner_grid/coherent/t={t_keff:g}", "wigner_grid",
                  np.max(np.abs(s.ravel() - o)))


def _general_vs_equal(n: int = 50, seed: int = 7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        d = float(rng.uniform(0, 10))
        p = ModelParams.equal_coupling(d)
        a = complex(*rng.uniform(-1, 1, 2))
        b = complex(*rng.uniform(-2, 2, 2))
        g = complex(*rng.uniform(-3, 3, 2))
        t = float(rng.uniform(0, 100))
        args = KernelArgs.physical(a, b)
        k_gen = wigner_kernel(args, p, g, t)
        k_eq = wigner_kernel_equal(args, p, g, t, ell=80)
        worst = max(worst, abs(k_gen - k_eq))
    return _check(f"general_vs_equal/{n}_points", "general_vs_equal", worst)


def _marginal_check():
    p = ModelParams.from_eps(3 / math.sqrt(10), 1 / math.sqrt(10), 0.0)
    a, b, t = 1.0 + 0j, 2.0 + 0j, 5.0
    st = oracle.evolved_state(Coherent(a), DriveState(b), p, t, cutoffs=(48, 48))
    rho = oracle.reduced_density_a(st)
    q = np.linspace(-5, 5, 41)
    ref = oracle.oracle_marginal(rho, q)
    return _check("marginal/q/coherent", "marginal", np.max(np.abs(marginal_q_kernel(a, b, p, q, t) - ref)))


def run_checks(quick: bool = True) -> dict:
    checks = _inversion_checks(quick)
    for t in ((5.0,) if quick else (1.0, 5.0, 100.0)):
        checks.append(_wigner_grid_check(t))
    checks.append(_general_vs_equal(20 if quick else 200))
    checks.append(_marginal_check())
    return {"passed": all(c["passed"] for c in checks), "checks": checks,
            "mode": "quick" if quick else "full"}
