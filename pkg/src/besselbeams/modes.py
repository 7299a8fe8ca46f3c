"""Classical electromagnetic Bessel-beam mode geometry.

Evaluates the transverse vector mode functions M and N, the TE/TM vector
potentials with the physical normalization amplitude, the resulting E and
B fields, the Hertz-potential assembly of the same fields (an independent
cross-check path), the right/left circular combinations, and the
plane-wave angular-spectrum quadrature representation of M and N.

Phase convention is exp(-i w t + i k_z z + i m phi) throughout.  The
rho = 0 axis is handled by small-argument series; results exactly on the
axis are reported in the Cartesian frame, where they are single-valued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import DomainError, bessel_j, bessel_j_prime, bessel_j_over_x

TM, TE = "TM", "TE"

AXIS_EPS = 1e-4  # below k_perp*rho = AXIS_EPS the axis series kicks in


@dataclass(frozen=True)
class ModeIndex:
    """One Bessel mode: family, azimuthal index and wavenumbers."""

    family: str
    m: int
    k_perp: float
    k_z: float

    def __post_init__(self):
        if self.family not in (TM, TE):
            raise ValueError(f"family must be TM or TE, got {self.family!r}")
        if not self.k_perp > 0:
            raise ValueError("k_perp must be > 0")
        if self.k_z == 0:
            raise ValueError("k_z = 0 is excluded (1/k_z factors in the mode functions)")

    def omega(self, c=1.0):
        return c * math.hypot(self.k_perp, self.k_z)


@dataclass(frozen=True)
class CylPoint:
    """Cylindrical sample point (rho, phi, z) at time t."""

    rho: float
    phi: float = 0.0
    z: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be >= 0")


@dataclass(frozen=True)
class NormalizationConvention:
    """Physical constants and the per-mode normalization amplitude.

    The amplitude makes a photon of frequency w carry energy hbar*w:
    E_m(k_perp, k_z) = k_z c sqrt(hbar k_perp / (2 pi w)), identical for
    both families.
    """

    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0):
            raise ValueError("hbar and c must be positive")

    def amplitude(self, K: ModeIndex):
        w = K.omega(self.c)
        return K.k_z * self.c * math.sqrt(self.hbar * K.k_perp / (2.0 * math.pi * w))

    def amplitude_grid(self, k_perp, k_z):
        """Vectorized amplitude over (k_perp, k_z) arrays."""
        w = self.c * np.hypot(k_perp, k_z)
        return k_z * self.c * np.sqrt(self.hbar * k_perp / (2.0 * math.pi * w))


CYLINDRICAL = "cylindrical"
CARTESIAN = "cartesian"


@dataclass(frozen=True)
class ComplexVec3:
    """Complex 3-vector sample with an explicit frame tag.

    Cylindrical components are (rho, phi, z) at azimuth `phi0`; Cartesian
    components are (x, y, z).  Conversion at a given azimuth is exact.
    """

    components: np.ndarray
    frame: str = CARTESIAN
    phi0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "components", np.asarray(self.components, dtype=complex))
        if self.frame not in (CYLINDRICAL, CARTESIAN):
            raise ValueError("frame must be 'cylindrical' or 'cartesian'")

    def to_cartesian(self):
        if self.frame == CARTESIAN:
            return self
        cr, cp, cz = self.components
        cphi, sphi = math.cos(self.phi0), math.sin(self.phi0)
        return ComplexVec3(
            np.array([cr * cphi - cp * sphi, cr * sphi + cp * cphi, cz]), CARTESIAN
        )

    def to_cylindrical(self, phi0):
        v = self.to_cartesian().components
        cphi, sphi = math.cos(phi0), math.sin(phi0)
        return ComplexVec3(
            np.array([v[0] * cphi + v[1] * sphi, -v[0] * sphi + v[1] * cphi, v[2]]),
            CYLINDRICAL,
            phi0,
        )

    @property
    def cart(self):
        return self.to_cartesian().components

    def __add__(self, other):
        return ComplexVec3(self.cart + other.cart, CARTESIAN)

    def __sub__(self, other):
        return ComplexVec3(self.cart - other.cart, CARTESIAN)

    def __mul__(self, s):
        return ComplexVec3(self.components * s, self.frame, self.phi0)

    __rmul__ = __mul__

    def dot(self, other):
        """Bilinear (unconjugated) dot product."""
        return np.dot(self.cart, other.cart)

    def cross(self, other):
        return ComplexVec3(np.cross(self.cart, other.cart), CARTESIAN)

    def norm(self):
        return float(np.linalg.norm(self.cart))


E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])
E_PLUS = E1 + 1j * E2
E_MINUS = E1 - 1j * E2


def _phase(m, k_z, p: CylPoint, omega):
    return np.exp(1j * (-omega * p.t + m * p.phi + k_z * p.z))


def eval_M(m, k_perp, k_z, p: CylPoint, c=1.0):
    """Mode vector M: (w/(c k_z)) [ (m/(k_perp rho)) J_m e_rho + i J'_m e_phi ] * phase."""
    omega = c * math.hypot(k_perp, k_z)
    x = k_perp * p.rho
    if p.rho == 0.0:
        # Cylindrical unit vectors are undefined on the axis; use the
        # duality c k_z M = w e3 x N with N from its Cartesian form.
        n = eval_N(m, k_perp, k_z, p, c=c).cart
        return ComplexVec3((omega / (c * k_z)) * np.cross(E3, n), CARTESIAN)
    pref = omega / (c * k_z)
    comp = pref * np.array(
        [bessel_j_over_x(m, x), 1j * bessel_j_prime(m, x), 0.0], dtype=complex
    )
    return ComplexVec3(comp * _phase(m, k_z, p, omega), CYLINDRICAL, p.phi)


def eval_N(m, k_perp, k_z, p: CylPoint, c=1.0, path="auto"):
    """Mode vector N.

    `path` selects the evaluation route: "cylindrical" uses the
    (e_rho, e_phi, e_z) form, "cartesian" the equivalent e_+/e_-
    expansion (well defined on the axis), "auto" picks by radius.
    Both routes agree to 1e-12 away from the axis.
    """
    omega = c * math.hypot(k_perp, k_z)
    x = k_perp * p.rho
    if path == "auto":
        path = "cartesian" if p.rho == 0.0 else "cylindrical"
    if path == "cylindrical":
        if p.rho == 0.0:
            raise DomainError("cylindrical N path undefined at rho = 0")
        comp = np.array(
            [
                1j * bessel_j_prime(m, x),
                -bessel_j_over_x(m, x),
                (k_perp / k_z) * bessel_j(m, x),
            ],
            dtype=complex,
        )
        return ComplexVec3(comp * _phase(m, k_z, p, omega), CYLINDRICAL, p.phi)
    if path == "cartesian":
        ph0 = np.exp(1j * (-omega * p.t + k_z * p.z))
        jp1 = bessel_j(m + 1, x) * np.exp(1j * (m + 1) * p.phi)
        jm1 = bessel_j(m - 1, x) * np.exp(1j * (m - 1) * p.phi)
        jm = bessel_j(m, x) * np.exp(1j * m * p.phi)
        comp = (-0.5j) * (jp1 * E_MINUS - jm1 * E_PLUS) + (k_perp / k_z) * jm * E3
        return ComplexVec3(comp * ph0, CARTESIAN)
    raise ValueError(f"unknown path {path!r}")


def eval_potential(K: ModeIndex, p: CylPoint, norm: NormalizationConvention):
    """Vector potential mode: A^(TM) = (c/(i w)) E N,  A^(TE) = -(c/(i w)) E M."""
    c = norm.c
    omega = K.omega(c)
    amp = norm.amplitude(K)
    pref = c / (1j * omega)
    if K.family == TM:
        return (pref * amp) * eval_N(K.m, K.k_perp, K.k_z, p, c=c)
    return (-pref * amp) * eval_M(K.m, K.k_perp, K.k_z, p, c=c)


def eval_E(K: ModeIndex, p: CylPoint, norm: NormalizationConvention):
    """Electric field mode: E = (i w / c) A, i.e. E^(TM) = E N, E^(TE) = -E M."""
    amp = norm.amplitude(K)
    if K.family == TM:
        return amp * eval_N(K.m, K.k_perp, K.k_z, p, c=norm.c)
    return (-amp) * eval_M(K.m, K.k_perp, K.k_z, p, c=norm.c)


def eval_B(K: ModeIndex, p: CylPoint, norm: NormalizationConvention):
    """Magnetic field mode: B^(TM) = E M,  B^(TE) = E N."""
    amp = norm.amplitude(K)
    if K.family == TM:
        return amp * eval_M(K.m, K.k_perp, K.k_z, p, c=norm.c)
    return amp * eval_N(K.m, K.k_perp, K.k_z, p, c=norm.c)


def hertz_fields(family, m, k_perp, k_z, p: CylPoint, c=1.0, constant=1.0):
    """(E, B) assembled from analytic derivatives of the Hertz potential.

    Theta = C J_m(k_perp rho) exp(-i w t + i k_z z + i m phi) sources the
    TM fields (Theta_1) or the TE fields (Theta_2).  Independent of the
    mode-vector path up to the single constant C; requires rho > 0.
    """
    if family not in (TM, TE):
        raise ValueError("family must be TM or TE")
    if p.rho <= 0:
        raise DomainError("hertz_fields requires rho > 0; use the mode path on the axis")
    omega = c * math.hypot(k_perp, k_z)
    x = k_perp * p.rho
    J = bessel_j(m, x)
    Jp = bessel_j_prime(m, x)
    ph = constant * _phase(m, k_z, p, omega)
    # Derivative factors: d/dz -> i k_z, d/(c dt) -> -i w/c, d/dphi -> i m,
    # d/drho -> k_perp J'.
    if family == TM:
        e_rho = 1j * k_z * k_perp * Jp
        e_phi = -(k_z * m / p.rho) * J
        e_z = (omega**2 / c**2 - k_z**2) * J
        b_rho = (m * omega / (c * p.rho)) * J
        b_phi = 1j * (omega / c) * k_perp * Jp
        b_z = 0.0
    else:
        e_rho = -(m * omega / (c * p.rho)) * J
        e_phi = -1j * (omega / c) * k_perp * Jp
        e_z = 0.0
        b_rho = 1j * k_z * k_perp * Jp
        b_phi = -(k_z * m / p.rho) * J
        b_z = (omega**2 / c**2 - k_z**2) * J
    E = ComplexVec3(np.array([e_rho, e_phi, e_z]) * ph, CYLINDRICAL, p.phi)
    B = ComplexVec3(np.array([b_rho, b_phi, b_z]) * ph, CYLINDRICAL, p.phi)
    return E, B


def eval_circular(handedness, m, k_perp, k_z, p: CylPoint, norm: NormalizationConvention,
                  a0_prime=1.0):
    """Right/left circular potential mode as a TE/TM combination.

    A^(R)_m = a0' (A^(TM)_{m-1} + i (c k_z/w) A^(TE)_{m-1}),
    A^(L)_m = a0' (A^(TM)_{m+1} - i (c k_z/w) A^(TE)_{m+1}).
    """
    if handedness not in ("R", "L"):
        raise ValueError("handedness must be 'R' or 'L'")
    shift = -1 if handedness == "R" else +1
    sign = 1.0 if handedness == "R" else -1.0
    mm = m + shift
    k_tm = ModeIndex(TM, mm, k_perp, k_z)
    k_te = ModeIndex(TE, mm, k_perp, k_z)
    omega = k_tm.omega(norm.c)
    beta = norm.c * k_z / omega
    a_tm = eval_potential(k_tm, p, norm)
    a_te = eval_potential(k_te, p, norm)
    return a0_prime * (a_tm + (sign * 1j * beta) * a_te)


def scalar_angular_spectrum(m, k_perp, rho, phi, n_nodes):
    """((-i)^m / 2 pi) closed contour quadrature reproducing J_m(k_perp rho) e^(i m phi)."""
    phik = np.linspace(0.0, 2.0 * math.pi, n_nodes, endpoint=False)
    integrand = np.exp(1j * m * phik + 1j * k_perp * rho * np.cos(phi - phik))
    return (-1j) ** m * np.mean(integrand)


def angular_spectrum(which, m, k_perp, k_z, p: CylPoint, n_nodes=None, c=1.0):
    """M or N via trapezoidal quadrature over the plane-wave cone azimuth.

    M = -(w/(c k_z)) ((-i)^m/2pi) Int dphi_k e^(i m phi_k)
        e^(i k_perp rho cos(phi - phi_k)) phihat_k  * e^(i k_z z - i w t),
    and the same with thetahat_k for N.  The radial and axial delta
    factors of the full 3D representation are collapsed analytically.

    Returns (ComplexVec3, meta) where meta flags insufficient nodes.
    """
    if which not in ("M", "N"):
        raise ValueError("which must be 'M' or 'N'")
    required = int(8 * (abs(m) + k_perp * p.rho + 8))
    if n_nodes is None:
        n_nodes = required
    meta = {"n_nodes": n_nodes, "recommended": required, "converged": n_nodes >= required}
    omega = c * math.hypot(k_perp, k_z)
    ct = c * k_z / omega  # cos(theta_k)
    st = c * k_perp / omega  # sin(theta_k)
    phik = np.linspace(0.0, 2.0 * math.pi, n_nodes, endpoint=False)
    if which == "M":
        unit = np.stack([-np.sin(phik), np.cos(phik), np.zeros_like(phik)])
    else:
        unit = np.stack([ct * np.cos(phik), ct * np.sin(phik), -st * np.ones_like(phik)])
    weight = np.exp(1j * m * phik + 1j * k_perp * p.rho * np.cos(p.phi - phik))
    comp = (unit * weight).mean(axis=1) * (-1j) ** m
    pref = -(omega / (c * k_z)) * np.exp(1j * (k_z * p.z - omega * p.t))
    return ComplexVec3(pref * comp, CARTESIAN), meta
