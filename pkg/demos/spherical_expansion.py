"""Expand a Bessel mode in spherical multipoles and watch convergence.

Projects the N mode onto vector spherical harmonics, prints the
coefficient magnitudes, and reconstructs the field at a sample point
from truncated sums.  Coefficients start to decay once j exceeds
omega * rho at the evaluation radius, the usual angular-momentum
barrier for multipole sums.
"""

import math

import numpy as np

from besselbeams.modes import CylPoint, eval_N
from besselbeams.verify import expansion_coefficients, reconstruct

m, k_perp, k_z = 2, 1.0, 2.0
omega = math.hypot(k_perp, k_z)
rho, phi, z = 1.5, 0.4, 0.2
point = (rho * math.cos(phi), rho * math.sin(phi), z)
direct = eval_N(m, k_perp, k_z, CylPoint(rho, phi, z)).to_cartesian().components
ref = float(np.abs(direct).max())

print(f"N mode m={m}, k_perp={k_perp}, k_z={k_z}; sample at rho={rho} "
      f"(omega*rho = {omega * rho:.2f})")
print(f"{'j':>3s} {'|alpha_E|':>12s} {'|alpha_M|':>12s} {'recon rel err':>14s}")

j_max = 24
checkpoints = tuple(range(max(1, abs(m)), j_max + 1))
rec, partial = reconstruct("N", m, k_perp, k_z, point, j_max, checkpoints=checkpoints)
for j in checkpoints:
    aE, aM = expansion_coefficients("N", m, k_perp, k_z, j)
    err = float(np.abs(partial[j] - direct).max() / ref)
    print(f"{j:3d} {abs(aE):12.4e} {abs(aM):12.4e} {err:14.4e}")

print(f"final relative error at j_max={j_max}: "
      f"{float(np.abs(rec - direct).max() / ref):.3e}")
