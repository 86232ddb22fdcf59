"""Named reference parameter sets.

``fig2*`` (even cat) and ``fig3*`` (odd cat) are inversion series with
eps_a = 3/sqrt(10), eps_b = 1/sqrt(10), |alpha| = 1 over kappa_eff t in
[0, 200]; suffixes a, b have |beta| = 2 and c, d |beta| = 20, with delta = 0
for a, c and 6 kappa_eff for b, d.

``fig4*`` (even), ``fig5*`` (odd) and ``fig6*`` (coherent) are Wigner surfaces
at equal couplings, |alpha| = 1, kappa_eff t = 100 on p in [-7, 7],
q in [-10, 4] with fifty Rabi terms; suffixes a, c have |beta| = 2 and b, d
|beta| = 5, with delta = 0 for a, b and 10 kappa_eff for c, d.  All phases
are zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModelParams
from .states import DriveState, cavity_state
from .wigner import FIGURE_GRID, FIGURE_ELL, PhaseGrid

INVERSION_T_MAX = 200.0
INVERSION_POINTS = 2001
WIGNER_T = 100.0


@dataclass(frozen=True)
class Preset:
    name: str
    command: str  # "inversion" | "wigner"
    state: str
    alpha: complex
    beta: complex
    delta_over_keff: float
    eps_a: float
    eps_b: float
    t: float | None = None
    t_grid: tuple[float, float, int] | None = None
    grid: PhaseGrid | None = None
    ell: int | None = None
    oracle_available: bool = True

    def params(self) -> ModelParams:
        return ModelParams.from_eps(self.eps_a, self.eps_b, self.delta_over_keff)

    def cavity(self):
        return cavity_state(self.state, self.alpha)

    def drive(self) -> DriveState:
        return DriveState(self.beta)

    def record(self) -> dict:
        out = {
            "preset": self.name, "command": self.command, "state": self.state,
            "alpha": [self.alpha.real, self.alpha.imag], "beta": [self.beta.real, self.beta.imag],
            "delta_over_keff": self.delta_over_keff, "eps_a": self.eps_a, "eps_b": self.eps_b,
            "oracle": "available" if self.oracle_available else "unavailable",
        }
        if self.t is not None:
            out["kappa_eff_t"] = self.t
        if self.t_grid is not None:
            out["t_grid"] = list(self.t_grid)
        if self.grid is not None:
            out["grid"] = self.grid.as_dict()
        if self.ell is not None:
            out["ell"] = self.ell
        return out


def _build() -> dict[str, Preset]:
    out = {}
    inv_eps = (3 / math.sqrt(10), 1 / math.sqrt(10))
    for fig, state in (("fig2", "even"), ("fig3", "odd")):
        for panel, beta, delta in (("a", 2.0, 0.0), ("b", 2.0, 6.0), ("c", 20.0, 0.0), ("d", 20.0, 6.0)):
            name = fig + panel
            out[name] = Preset(name, "inversion", state, 1 + 0j, complex(beta), delta, *inv_eps,
                               t_grid=(0.0, INVERSION_T_MAX, INVERSION_POINTS),
                               oracle_available=beta < 10)
    eq = (1 / math.sqrt(2), 1 / math.sqrt(2))
    for fig, state in (("fig4", "even"), ("fig5", "odd"), ("fig6", "coherent")):
        for panel, beta, delta in (("a", 2.0, 0.0), ("b", 5.0, 0.0), ("c", 2.0, 10.0), ("d", 5.0, 10.0)):
            name = fig + panel
            out[name] = Preset(name, "wigner", state, 1 + 0j, complex(beta), delta, *eq,
                               t=WIGNER_T, grid=FIGURE_GRID, ell=FIGURE_ELL)
    return out


PRESETS: dict[str, Preset] = _build()


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
