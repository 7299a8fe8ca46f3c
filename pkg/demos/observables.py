"""Quadratic observables on a mode lattice: commutators and expectations.

Builds the photon-operator set (energy, momentum, orbital and spin
angular momentum, per-node Stokes operators) on a small discrete mode
lattice, spot-checks the commutation algebra, and evaluates coherent
state expectation values for a two-mode superposition that carries
transverse momentum.
"""

import math

from besselbeams import (
    CoherentAmplitude,
    TM,
    build_lattice,
    build_observables,
    coherent_expectation,
    commutator,
    make_pm_map,
)
from besselbeams.dynops import build_stokes

lat = build_lattice((-3, 3), [(1.0, 1.0)], [(2.0, 1.0)])
obs = build_observables(lat, include_zero_point=False)
print(f"lattice: m in [-3,3], k_perp=1, k_z=2, dim={lat.dim}")

# --- algebra spot checks ----------------------------------------------------
interior = [i for i in range(lat.dim) if abs(lat.unpack(i)[1]) <= 1]
named = obs.named()
checks = [
    ("[L3, P-] = hbar P-", commutator(named["L3"], named["P-"]) - named["P-"]),
    ("[L3, S3] = 0", commutator(named["L3"], named["S3"])),
    ("[S+, S-] = 0", commutator(named["S+"], named["S-"])),
]
for label, diff in checks:
    resid = diff.restrict(interior).max_abs()
    print(f"{label:24s} residual {resid:.3e}")

_, s1, s2, s3 = build_stokes(lat, 0, 0, 0)
print(f"stokes [s1,s2]-2i s3        residual "
      f"{(commutator(s1, s2) - 2j * s3).max_abs():.3e}")

# --- coherent expectations ---------------------------------------------------
# equal amplitudes on neighboring m values tilt the beam: <P2> = 2 kp |a|^2
a = 0.5
alpha = CoherentAmplitude({
    lat.index(TM, 0, 0, 0): a,
    lat.index(TM, 1, 0, 0): a,
})
P1, P2, P3 = obs.cartesian("P")
print(f"<P1> = {coherent_expectation(P1, alpha).real:+.6f}")
print(f"<P2> = {coherent_expectation(P2, alpha).real:+.6f}  (analytic {2 * 1.0 * a**2})")
# P3 is symmetrized, so its scalar part carries (1/2) hbar kz per mode
vac3 = coherent_expectation(P3, CoherentAmplitude()).real
p3 = coherent_expectation(P3, alpha).real
print(f"<P3> = {p3:+.6f}  (photon part {p3 - vac3:+.6f} = 2 kz |a|^2; "
      f"symmetrization offset {vac3:.1f})")
print(f"<L3> = {coherent_expectation(obs.L_3, alpha).real:+.6f}  (mean m = 1/2 per photon)")

# --- helicity basis -----------------------------------------------------------
pm = make_pm_map(lat)
w = math.hypot(1.0, 2.0)
print(f"(+/-) map unitary: {pm.is_unitary}; per-photon helicity c kz/omega = {2.0 / w:.6f}")
