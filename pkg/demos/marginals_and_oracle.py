"""
Marginals, and checking against brute force
===========================================

Every series result in the package can be compared with a direct
simulation in a truncated Fock basis.  This script does that for the
q-marginal and for a few Wigner values at an unequal coupling ratio.
"""
# %%
import math

import numpy as np

from driven_jcm import (Coherent, DriveState, ModelParams, marginal_coherent, marginal_from_surface,
                        PhaseGrid, wigner_coherent, wigner_surface)
from driven_jcm import oracle

params = ModelParams.from_eps(0.8, 0.6, 1.5)
alpha, beta, t = 0.9 + 0.2j, 1.4, 3.0

# %%
# The q-marginal from the series, and from the oracle's reduced density
# matrix.
q = np.linspace(-4, 6, 101)
curve = marginal_coherent(alpha, beta, params, "q", q, t)
rho = oracle.evolved_state(Coherent(alpha), DriveState(beta), params, t)
ref = oracle.oracle_marginal(oracle.reduced_density_a(rho), q)
print(f"series vs oracle marginal: max deviation {np.max(np.abs(curve.values - ref)):.2e}")
print(f"integral {curve.integral:.6f} (sqrt(2 pi) = {math.sqrt(2 * math.pi):.6f})")

# %%
# The same marginal recovered by integrating a Wigner surface over p.
grid = PhaseGrid(-4, 6, -6, 6, 101, 121)
surf = wigner_surface(Coherent(alpha), DriveState(beta), params, t, grid)
from_surface = marginal_from_surface(surf, "q")
print(f"surface-integrated vs series: {np.max(np.abs(from_surface.values - curve.values)):.2e}")

# %%
# A handful of Wigner values against the displaced-parity oracle.
gammas = np.array([0.0, 0.5 + 0.5j, -0.3 + 1.0j, 1.2 - 0.4j])
series = wigner_coherent(alpha, beta, params, gammas, t)
brute = oracle.wigner_grid(Coherent(alpha), DriveState(beta), params, t, gammas)
for g, a, b in zip(gammas, series, brute):
    print(f"gamma={g:+.2f}: series {a:+.10f}  oracle {b:+.10f}")
