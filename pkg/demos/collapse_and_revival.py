"""
Collapse and revival of the atomic inversion
============================================

A two-level atom sits between a cavity mode and a driving mode.  Both modes
couple to the atom, but only one combination of them (the quasi-mode A) does
any work; the orthogonal combination just goes along for the ride.  This
script walks through what that means for the inversion.
"""
# %%
import math

import numpy as np

from driven_jcm import (Coherent, DriveState, EvenCat, ModelParams, OddCat, Thermal,
                        inversion_series, inversion_thermal, mean_photon_number)

# Couplings in the ratio 3:1, normalized so that kappa_eff = 1 and t is in
# units of 1/kappa_eff.
params = ModelParams.from_eps(3 / math.sqrt(10), 1 / math.sqrt(10), 0.0)
times = np.linspace(0, 200, 2001)

# %%
# A weak drive first.  With |beta| = 2 the quasi-mode holds only a handful
# of photons, so the Rabi oscillations collapse quickly and the revivals are
# ragged.
for cavity in (Coherent(1.0), EvenCat(1.0), OddCat(1.0)):
    ts = inversion_series(cavity, DriveState(2.0), params, times)
    print(f"{type(cavity).__name__:9s} <n>={mean_photon_number(cavity):.3f}  "
          f"terms={ts.meta['n_terms']:3d}  I(5)={ts.values[50]:+.4f}  "
          f"min I={ts.values.min():+.4f}")

# %%
# A strong drive.  At |beta| = 20 the drive dominates the quasi-mode, the
# photon distribution is close to Poisson with mean ~ 40, and the classic
# collapse/revival pattern appears.  The revival time scales like
# 2 pi sqrt(<n>).
strong = inversion_series(EvenCat(1.0), DriveState(20.0), params, times)
nA = abs(params.eps_a * 1.0 + params.eps_b * 20.0) ** 2
print(f"quasi-mode photons ~ {nA:.1f}; first revival expected near kappa t = {2 * math.pi * math.sqrt(nA):.1f}")
for lo in range(0, 80, 10):
    band = (times >= lo) & (times < lo + 10)
    print(f"  kappa t in [{lo:2d}, {lo + 10:2d}): max |I| = {np.abs(strong.values[band]).max():.3f}")

# %%
# Detuning shrinks the oscillation amplitude: each Rabi term only swings
# through (Omega_n / Delta_n)^2 of the full range.
detuned = ModelParams.from_eps(3 / math.sqrt(10), 1 / math.sqrt(10), 6.0)
d = inversion_series(EvenCat(1.0), DriveState(20.0), detuned, times)
print(f"delta=0: min I={strong.values.min():+.3f}   delta=6: min I={d.values.min():+.3f}")

# %%
# A thermal cavity.  The weights are a Laguerre-weighted geometric
# distribution; as nbar -> 0 they become the Poisson weights of the drive
# alone.
for nbar in (0.0, 0.5, 1.0, 5.0):
    vals = inversion_thermal(nbar, 2.0, params, times[:201])
    print(f"thermal nbar={nbar:3.1f}  I(5)={vals[50]:+.4f}")

# %%
# Optional plot.
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, ax = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    ax[0].plot(times, strong.values, lw=0.6)
    ax[0].set_ylabel("I, delta=0")
    ax[1].plot(times, d.values, lw=0.6)
    ax[1].set_ylabel("I, delta=6")
    ax[1].set_xlabel("kappa_eff t")
    fig.savefig("collapse_and_revival.png", dpi=120)
