"""Numerical verification suites for the mode algebra and its field identities.

Four suites, each returning a deterministic list of RelationResult:

* commutator_suite -- the full table of commutators among P, L, S on a
  mode lattice, plus the per-node Stokes su(2) algebra, cross-checked
  against a brute-force truncated-Fock realization.
* basis_suite -- simultaneous diagonalization in the (+/-) basis, the
  circular (R/L) map, the energy cross-term coefficient, and the
  paraxial scaling of the off-diagonal energy.
* quadrature_suite -- the delta-normalized volume integrals (scalar and
  vector products, L_+ matrix elements, energy per photon) regularized
  by Gaussian wavepacket smearing and integrated over a finite cylinder.
* spherical_suite -- plane-wave angular spectra, expansion of the
  cylinder modes in spherical vector modes, and the spherical-basis
  su(2) algebra.

Relations whose commonly printed form disagrees with the computed
algebra are reported with pass=False and the computed normal form in
the notes; the suite checks, it does not patch.

All suites run with c = hbar = 1 unless the lattice says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre, sph_harm_y

from . import specfun
from .lattice import (
    FockOracle,
    LatticeError,
    ModeLattice,
    QuadraticOperator,
    apply_basis,
    build_lattice,
    commutator,
)
from .dynops import (
    build_L_spherical,
    build_observables,
    build_stokes,
    elementary_lambda,
    elementary_sigma,
    make_pm_map,
    make_rl_map,
    SphericalLattice,
)
from .modes import (
    CARTESIAN,
    CylPoint,
    ModeIndex,
    NormalizationConvention,
    TE,
    TM,
    angular_spectrum,
    eval_M,
    eval_N,
    scalar_angular_spectrum,
)

ALG_TOL = 1e-12
STOKES_TOL = 1e-13
QUAD_REL_TOL = 1e-3
AZIMUTHAL_TOL = 1e-6


@dataclass
class RelationResult:
    """Outcome of one checked relation."""

    name: str
    lhs_minus_rhs_norm: float
    tolerance: float
    passed: bool
    notes: str = ""

    def __post_init__(self):
        # pass must mean exactly "norm within tolerance" (and conclusive)
        conclusive = not self.notes.startswith("inconclusive")
        if self.passed != (self.lhs_minus_rhs_norm <= self.tolerance and conclusive):
            raise ValueError("RelationResult pass flag inconsistent with norm")

    @classmethod
    def from_norm(cls, name, norm, tol, notes=""):
        conclusive = not notes.startswith("inconclusive")
        return cls(name, float(norm), float(tol), bool(norm <= tol) and conclusive, notes)

    @property
    def inconclusive(self):
        return self.notes.startswith("inconclusive")

    def to_dict(self):
        return {
            "name": self.name,
            "residual": self.lhs_minus_rhs_norm,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "notes": self.notes,
        }


def _sorted(results):
    return sorted(results, key=lambda r: r.name)


# ---------------------------------------------------------------------------
# Commutator suite
# ---------------------------------------------------------------------------


def _interior_indices(lat: ModeLattice, margin=2):
    """Indices whose m is at least `margin` away from the truncation edge.

    m-shifting bilinears develop O(1) boundary defects on a truncated
    m-window; all operator relations hold exactly on the interior block.
    """
    m_min, m_max = lat.m_range
    if m_max - m_min + 1 < 2 * margin + 1:
        raise LatticeError("lattice m_range too small for interior comparison")
    return [
        idx
        for idx, f, m, _, _ in lat.modes()
        if m_min + margin <= m <= m_max - margin
    ]


def _relation_table(lat: ModeLattice, obs):
    """(name, LHS, RHS, canonical, notes) rows for every printed relation.

    Observables are normal-ordered (no zero point) so both sides are pure
    quadratic forms; commutators never produce scalars anyway.
    """
    hbar, c = lat.hbar, lat.c
    zero = QuadraticOperator(lat)
    P_plus, P_minus, P_3 = obs.P_plus, obs.P_minus, obs.P_3
    L_plus, L_minus, L_3 = obs.L_plus, obs.L_minus, obs.L_3
    S_plus, S_minus, S_3 = obs.S_plus, obs.S_minus, obs.S_3

    def node_sum(make_terms):
        out = QuadraticOperator(lat)
        for ip, (kp, _) in enumerate(lat.k_perp_nodes):
            for iz, (kz, _) in enumerate(lat.k_z_nodes):
                out = out + make_terms(ip, iz, kp, kz, c * math.hypot(kp, kz))
        return out

    # [L+, L-] closes on Lambda_3 weighted by the grid factor kz^2/kp^2
    LL_rhs = node_sum(
        lambda ip, iz, kp, kz, w: (2.0 * hbar**2 * kz**2 / kp**2)
        * _strip_scalar(_sum_families(lat, ip, iz, elementary_lambda, "3"))
    )
    # [L+, P+] couples m-1 <- m+1 with weight kz
    def lpp_terms(ip, iz, kp, kz, w):
        m_min, m_max = lat.m_range
        terms = []
        for fam in lat.families:
            for m in range(m_min + 1, m_max):
                terms.append(
                    (lat.index(fam, m - 1, ip, iz), lat.index(fam, m + 1, ip, iz), hbar**2 * kz)
                )
        return QuadraticOperator.from_terms(lat, terms)

    LPP_rhs = node_sum(lpp_terms)
    # [S+, L3] closes on Sigma_+ weighted by c kp / omega
    SL3_rhs = node_sum(
        lambda ip, iz, kp, kz, w: (-(hbar**2) * c * kp / w) * elementary_sigma(lat, ip, iz)["+"]
    )
    # printed RHS of [S+, L-]: -i hbar^2 int (c kz / omega)
    #   sum_m (a2+_{m+1} a1_{m-1} - a1+_{m+1} a2_{m-1})
    def slm_terms(ip, iz, kp, kz, w):
        m_min, m_max = lat.m_range
        terms = []
        for m in range(m_min + 1, m_max):
            terms.append(
                (lat.index(TE, m + 1, ip, iz), lat.index(TM, m - 1, ip, iz), -1j * hbar**2 * c * kz / w)
            )
            terms.append(
                (lat.index(TM, m + 1, ip, iz), lat.index(TE, m - 1, ip, iz), 1j * hbar**2 * c * kz / w)
            )
        return QuadraticOperator.from_terms(lat, terms)

    SLM_printed = node_sum(slm_terms)

    rows = [
        ("[P+,P-] = 0", commutator(P_plus, P_minus), zero, True, "momentum components commute"),
        ("[P+,P3] = 0", commutator(P_plus, P_3), zero, True, ""),
        ("[P-,P3] = 0", commutator(P_minus, P_3), zero, True, ""),
        ("[S+,S-] = 0", commutator(S_plus, S_minus), zero, True, "helicity components commute"),
        ("[S+,S3] = 0", commutator(S_plus, S_3), zero, True, ""),
        ("[S-,S3] = 0", commutator(S_minus, S_3), zero, True, ""),
        ("[P+,S+] = 0", commutator(P_plus, S_plus), zero, True, "momentum commutes with helicity"),
        ("[P+,S-] = 0", commutator(P_plus, S_minus), zero, True, ""),
        ("[P+,S3] = 0", commutator(P_plus, S_3), zero, True, ""),
        ("[P3,S+] = 0", commutator(P_3, S_plus), zero, True, ""),
        ("[P3,S3] = 0", commutator(P_3, S_3), zero, True, ""),
        ("[L3,P3] = 0", commutator(L_3, P_3), zero, True, ""),
        ("[S3,L+] = 0", commutator(S_3, L_plus), zero, True, ""),
        ("[S3,L-] = 0", commutator(S_3, L_minus), zero, True, ""),
        ("[S3,L3] = 0", commutator(S_3, L_3), zero, True, ""),
        ("[L+,L3] = hbar L+", commutator(L_plus, L_3), hbar * L_plus, True, ""),
        ("[L-,L3] = -hbar L-", commutator(L_minus, L_3), (-hbar) * L_minus, True, ""),
        (
            "[L+,L-] = 2 hbar^2 sum (kz^2/kp^2) Lambda3",
            commutator(L_plus, L_minus),
            LL_rhs,
            False,
            "grid-factor RHS",
        ),
        ("[L3,P-] = hbar P-", commutator(L_3, P_minus), hbar * _strip_scalar(P_minus), False, ""),
        (
            "[L+,P-] = hbar P3",
            commutator(L_plus, P_minus),
            hbar * _strip_scalar(P_3),
            False,
            "matrix parts; zero-point scalar excluded from both sides",
        ),
        ("[L+,P3] = 0", commutator(L_plus, P_3), zero, False, ""),
        (
            "[L+,P+] = hbar^2 sum kz a+_{m-1} a_{m+1}",
            commutator(L_plus, P_plus),
            LPP_rhs,
            False,
            "grid-factor RHS",
        ),
        (
            "[S+,L3] = -hbar^2 sum (c kp/omega) Sigma+",
            commutator(S_plus, L_3),
            SL3_rhs,
            False,
            "grid-factor RHS",
        ),
        (
            "[S+,L+] = -hbar S3 (printed)",
            commutator(S_plus, L_plus),
            (-hbar) * _strip_scalar(S_3),
            False,
            "printed RHS does not match the computed algebra; see companion relation",
        ),
        (
            "[S+,L+] = +(hbar/2) S3 (computed)",
            commutator(S_plus, L_plus),
            (0.5 * hbar) * _strip_scalar(S_3),
            False,
            "computed normal form is -1/2 of the printed RHS",
        ),
        (
            "[S+,L-] = -i hbar^2 sum (c kz/omega)(a1_{m-1} a2+_{m+1} - a2_{m-1} a1+_{m+1}) (printed)",
            commutator(S_plus, L_minus),
            SLM_printed,
            False,
            "printed RHS (summed over m) does not match the computed algebra; "
            "see companion relation",
        ),
        (
            "[S+,L-] = -(1/2) x printed RHS (computed)",
            commutator(S_plus, L_minus),
            (-0.5) * SLM_printed,
            False,
            "computed normal form is exactly -1/2 of the printed combination",
        ),
    ]
    return rows


def _sum_families(lat, ip, iz, builder, key):
    out = QuadraticOperator(lat)
    for fam in lat.families:
        out = out + builder(lat, fam, ip, iz)[key]
    return out


def _strip_scalar(A: QuadraticOperator):
    return QuadraticOperator(A.lattice, A.X, 0.0)


def commutator_suite(lat: ModeLattice, tol=ALG_TOL, fock_check=True):
    """Evaluate every printed commutation relation on the lattice.

    Comparisons are restricted to the interior m-block (margin 2 from the
    truncation edge), where the relations are free of window artifacts.
    Canonical relations are expected to pass; relations whose printed
    form conflicts with the computed algebra stay in the list with
    pass=False and a companion entry giving the computed normal form.
    """
    obs = build_observables(lat, include_zero_point=False)
    interior = _interior_indices(lat)
    results = []
    for name, lhs, rhs, canonical, notes in _relation_table(lat, obs):
        resid = (lhs - rhs).restrict(interior).max_abs()
        tag = "canonical; " if canonical else ""
        results.append(RelationResult.from_norm("commutator: " + name, resid, tol, tag + notes))

    # Per-node Stokes su(2) algebra, worst case over all nodes and m
    worst = 0.0
    for ip in range(len(lat.k_perp_nodes)):
        for iz in range(len(lat.k_z_nodes)):
            for m in lat.m_values:
                _, s1, s2, s3 = build_stokes(lat, ip, iz, m)
                worst = max(
                    worst,
                    (commutator(s1, s2) - 2j * s3).max_abs(),
                    (commutator(s2, s3) - 2j * s1).max_abs(),
                    (commutator(s3, s1) - 2j * s2).max_abs(),
                )
    results.append(
        RelationResult.from_norm(
            "commutator: stokes [sigma_i,sigma_j] = 2i eps_ijk sigma_k",
            worst,
            STOKES_TOL,
            "worst case over all (node, m)",
        )
    )

    if fock_check:
        results.append(_fock_cross_check(tol))
    return _sorted(results)


def _fock_cross_check(tol):
    """Brute-force check of the quadratic commutator identity on a D=6 lattice.

    Every relation LHS is realized two ways on a truncated Fock space:
    through the coefficient-matrix commutator and as the literal matrix
    commutator of the realized observables.  Agreement is exact on the
    subspace that never touches the truncation level.
    """
    lat = build_lattice((-1, 1), [(1.0, 1.0)], [(2.0, 1.0)])
    obs = build_observables(lat, include_zero_point=False)
    oracle = FockOracle(lat, n_max=3)
    keep = np.flatnonzero(oracle.occupancy_mask(oracle.n_max - 1))
    named = obs.named()
    pairs = [
        ("P+", "P-"), ("P+", "P3"), ("S+", "S-"), ("P+", "S+"),
        ("L3", "P3"), ("S3", "L+"), ("L+", "L3"), ("L+", "L-"),
        ("L3", "P-"), ("L+", "P-"), ("L+", "P3"), ("L+", "P+"),
        ("S+", "L3"), ("S+", "L+"), ("S+", "L-"),
    ]
    worst = 0.0
    for na, nb in pairs:
        A, B = named[na], named[nb]
        lhs = oracle.realize(commutator(A, B))
        rhs = oracle.realize(A) @ oracle.realize(B) - oracle.realize(B) @ oracle.realize(A)
        diff = (lhs - rhs).toarray()[np.ix_(keep, keep)]
        worst = max(worst, float(np.abs(diff).max()))
    return RelationResult.from_norm(
        "commutator: fock-oracle cross-check (15 pairs, cutoff 3)",
        worst,
        tol,
        "element-wise on the occupation<=2 block of a D=6 lattice",
    )


# ---------------------------------------------------------------------------
# Basis suite
# ---------------------------------------------------------------------------


def _offdiag_norm(A: QuadraticOperator):
    X = A.dense()
    return float(np.abs(X - np.diag(np.diag(X))).max())


def basis_suite(lat: ModeLattice, tol=ALG_TOL):
    """Diagonalization and circular-basis checks.

    (a) {energy, P3, L3, S3} mutually commute and are simultaneously
        diagonal after the (+/-) map, with per-mode eigenvalues
        {hbar*omega, hbar*kz, hbar*m, +/-hbar*c*kz/omega};
    (b) S3 is diagonal under the (non-unitary) R/L map;
    (c) the R/L energy cross-term coefficient is
        (1/4)[1+(c kz/w)^2][1-(w/(c kz))^2] * hbar*omega;
    (d) that off-diagonal energy scales like (kp/kz)^2 in the paraxial
        regime (log-log slope 2 over two decades).
    """
    hbar, c = lat.hbar, lat.c
    obs = build_observables(lat, include_zero_point=False)
    results = []

    quartet = [("energy", obs.energy), ("P3", obs.P_3), ("L3", obs.L_3), ("S3", obs.S_3)]
    worst = 0.0
    for i in range(len(quartet)):
        for j in range(i + 1, len(quartet)):
            worst = max(worst, commutator(quartet[i][1], quartet[j][1]).max_abs())
    results.append(
        RelationResult.from_norm("basis: {E,P3,L3,S3} mutually commute", worst, tol, "")
    )

    pm = make_pm_map(lat)
    results.append(
        RelationResult.from_norm(
            "basis: (+/-) map is unitary",
            float(np.abs(pm.T.conj().T @ pm.T - np.eye(lat.dim)).max()),
            tol,
            "",
        )
    )
    worst_off = 0.0
    worst_eig = 0.0
    diag = {}
    for name, A in quartet:
        Ap = apply_basis(A, pm)
        worst_off = max(worst_off, _offdiag_norm(Ap))
        diag[name] = np.real(np.diag(Ap.dense()))
    for idx, fam, m, (kp, _), (kz, _) in lat.modes():
        w = c * math.hypot(kp, kz)
        hel = 1.0 if fam == TM else -1.0  # (+) combination sits in the TM slot
        expected = {
            "energy": hbar * w,
            "P3": hbar * kz,
            "L3": hbar * m,
            "S3": hel * hbar * c * kz / w,
        }
        for name in expected:
            worst_eig = max(worst_eig, abs(diag[name][idx] - expected[name]))
    results.append(
        RelationResult.from_norm(
            "basis: {E,P3,L3,S3} diagonal in (+/-) basis", worst_off, tol, ""
        )
    )
    results.append(
        RelationResult.from_norm(
            "basis: (+/-) eigenvalues {hbar w, hbar kz, hbar m, +/-hbar c kz/w}",
            worst_eig,
            tol,
            "per-mode eigenvalue table",
        )
    )

    rl = make_rl_map(lat)
    S3_rl = apply_basis(obs.S_3, rl)
    results.append(
        RelationResult.from_norm(
            "basis: S3 diagonal under R/L map",
            _offdiag_norm(S3_rl),
            tol,
            f"map condition number {rl.condition_number:.6g} (non-unitary)",
        )
    )

    E_rl = apply_basis(obs.energy, rl).dense()
    worst_cross = 0.0
    for ip, (kp, _) in enumerate(lat.k_perp_nodes):
        for iz, (kz, _) in enumerate(lat.k_z_nodes):
            w = c * math.hypot(kp, kz)
            beta = c * kz / w
            coeff = 0.25 * (1.0 + beta**2) * (1.0 - 1.0 / beta**2) * hbar * w
            for m in lat.m_values:
                i1 = lat.index(TM, m, ip, iz)
                i2 = lat.index(TE, m, ip, iz)
                worst_cross = max(
                    worst_cross, abs(E_rl[i1, i2] - coeff), abs(E_rl[i2, i1] - coeff)
                )
    results.append(
        RelationResult.from_norm(
            "basis: R/L energy cross-term = (1/4)(1+beta^2)(1-1/beta^2) hbar w",
            worst_cross,
            tol,
            "beta = c kz/omega per node; symmetric (Hermitian) cross term",
        )
    )

    ratios = np.logspace(-3, -1, 9)
    mags = []
    for r in ratios:
        one = build_lattice((-2, 2), [(r, 1.0)], [(1.0, 1.0)], c=c, hbar=hbar)
        E_one = apply_basis(build_observables(one, include_zero_point=False).energy, make_rl_map(one))
        mags.append(_offdiag_norm(E_one))
    slope = np.polyfit(np.log(ratios), np.log(mags), 1)[0]
    results.append(
        RelationResult.from_norm(
            "basis: paraxial off-diagonal energy ~ (kp/kz)^2",
            abs(slope - 2.0),
            0.05,
            f"log-log slope {slope:.6f} over kp/kz in [1e-3, 1e-1]",
        )
    )
    return _sorted(results)


# ---------------------------------------------------------------------------
# Quadrature suite (wavepacket-smeared volume integrals)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WavepacketSpec:
    """Gaussian envelope in (k_perp, k_z) around a carrier Bessel mode."""

    family: str
    m: int
    k_perp_center: float
    k_perp_width: float
    k_z_center: float
    k_z_width: float

    def __post_init__(self):
        if self.k_perp_width <= 0 or self.k_z_width <= 0:
            raise ValueError("widths must be positive")
        if self.k_perp_center - 5 * self.k_perp_width <= 0:
            raise ValueError("k_perp support (+/-5 widths) must stay positive")
        lo = self.k_z_center - 5 * self.k_z_width
        hi = self.k_z_center + 5 * self.k_z_width
        if lo <= 0 <= hi:
            raise ValueError("k_z support (+/-5 widths) must not cross zero")
        if self.family not in (TM, TE):
            raise ValueError("unknown family")

    def envelope(self, kp, kz):
        return np.exp(
            -((kp - self.k_perp_center) ** 2) / (2 * self.k_perp_width**2)
            - ((kz - self.k_z_center) ** 2) / (2 * self.k_z_width**2)
        )


@dataclass(frozen=True)
class QuadratureDomain:
    """Finite cylinder |z| <= Z, rho <= R with composite quadrature counts."""

    R: float
    Z: float
    n_radial: int
    n_axial: int
    n_azimuthal: int = 64  # azimuthal integrals are exact; kept for grid exports

    def __post_init__(self):
        if min(self.R, self.Z) <= 0 or min(self.n_radial, self.n_axial, self.n_azimuthal) < 1:
            raise ValueError("QuadratureDomain needs positive extents and counts")

    def scaled(self, factor):
        return QuadratureDomain(
            self.R * factor,
            self.Z * factor,
            int(self.n_radial * factor * factor),
            int(self.n_axial * factor * factor),
            self.n_azimuthal,
        )


def default_domain(wp: WavepacketSpec, spread=8.0):
    """Cylinder sized to the Gaussian spatial decay of the wavepacket."""
    R = spread / wp.k_perp_width
    Z = spread / wp.k_z_width
    kp_max = wp.k_perp_center + 5 * wp.k_perp_width
    n_rad = int(24 * max(8, math.ceil(kp_max * R / (2 * math.pi))))
    n_ax = int(24 * max(8, math.ceil(10 * wp.k_z_width * Z / (2 * math.pi))))
    return QuadratureDomain(R, Z, n_rad, n_ax)


class _Component:
    """One e_pol component of a smeared field: coeff(k) J_order(kp rho)
    rho^rho_pow z^z_pow e^{i kz z} e^{i azim phi}."""

    __slots__ = ("pol", "azim", "order", "rho_pow", "z_pow", "coeff")

    def __init__(self, pol, azim, order, rho_pow, z_pow, coeff):
        self.pol = pol
        self.azim = azim
        self.order = order
        self.rho_pow = rho_pow
        self.z_pow = z_pow
        self.coeff = coeff


class SmearedField:
    """Wavepacket superposition of Bessel modes on a Gauss-Legendre k-grid."""

    def __init__(self, kp_nodes, kp_w, kz_nodes, kz_w, comps):
        self.kp_nodes = kp_nodes
        self.kp_w = kp_w
        self.kz_nodes = kz_nodes
        self.kz_w = kz_w
        self.comps = comps


def _gl(a, b, n):
    x, w = roots_legendre(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def smear_mode(which, wp: WavepacketSpec, n_kp=32, n_kz=32, c=1.0, hbar=1.0):
    """Smeared M, N, E or B field of the carrier family/m of `wp`.

    E and B carry the normalization amplitude; M and N are bare.
    The k-grids are composite Gauss-Legendre: when the field feeds a
    finite-volume integral the node counts must resolve the sin(dk R)/dk
    structure of the truncated overlap kernels (see k_counts).
    """
    kp, wkp = _panels(
        wp.k_perp_center - 5 * wp.k_perp_width, wp.k_perp_center + 5 * wp.k_perp_width, n_kp
    )
    kz, wkz = _panels(
        wp.k_z_center - 5 * wp.k_z_width, wp.k_z_center + 5 * wp.k_z_width, n_kz
    )
    KP, KZ = np.meshgrid(kp, kz, indexing="ij")
    W = c * np.hypot(KP, KZ)
    g = wp.envelope(KP, KZ)
    m = wp.m

    def comps_M(pref):
        half = 0.5 * pref * W / (c * KZ)
        return [
            _Component("-", m + 1, m + 1, 0, 0, half * g),
            _Component("+", m - 1, m - 1, 0, 0, half * g),
        ]

    def comps_N(pref):
        return [
            _Component("-", m + 1, m + 1, 0, 0, -0.5j * pref * g),
            _Component("+", m - 1, m - 1, 0, 0, 0.5j * pref * g),
            _Component("3", m, m, 0, 0, pref * (KP / KZ) * g),
        ]

    if which == "M":
        comps = comps_M(np.ones_like(g))
    elif which == "N":
        comps = comps_N(np.ones_like(g))
    elif which in ("E", "B"):
        amp = NormalizationConvention(hbar=hbar, c=c).amplitude_grid(KP, KZ)
        if which == "E":
            comps = comps_N(amp) if wp.family == TM else comps_M(-amp)
        else:
            comps = comps_M(amp) if wp.family == TM else comps_N(amp)
    else:
        raise ValueError("which must be one of M, N, E, B")
    return SmearedField(kp, wkp, kz, wkz, comps)


def k_counts(wp: WavepacketSpec, dom: QuadratureDomain, margin=2.0):
    """Composite k-node counts resolving the finite-domain overlap kernels.

    The truncated radial/axial overlaps oscillate in the difference
    variable with period 2 pi / extent, so the k grids need roughly
    (support width) x (extent) / (2 pi) panels.
    """
    n_kp = 24 * max(4, math.ceil(margin * 10 * wp.k_perp_width * dom.R / (2 * math.pi)))
    n_kz = 24 * max(4, math.ceil(margin * 10 * wp.k_z_width * dom.Z / (2 * math.pi)))
    return n_kp, n_kz


def apply_L_plus(F: SmearedField):
    """L_+ = e^{i phi}[z(d_rho + (i/rho) d_phi) - rho d_z], applied exactly.

    On a component J_a(kp rho) e^{i a phi} e^{i kz z} the angular ladder
    collapses by the Bessel recurrence to
    -kp z J_{a+1} e^{i(a+1)phi} - i kz rho J_a e^{i(a+1)phi}.
    """
    KP, KZ = np.meshgrid(F.kp_nodes, F.kz_nodes, indexing="ij")
    out = []
    for comp in F.comps:
        if comp.rho_pow or comp.z_pow or comp.azim != comp.order:
            raise ValueError("L+ supported on bare mode components only")
        a = comp.order
        out.append(_Component(comp.pol, a + 1, a + 1, 0, 1, -KP * comp.coeff))
        out.append(_Component(comp.pol, a + 1, a, 1, 0, -1j * KZ * comp.coeff))
    return SmearedField(F.kp_nodes, F.kp_w, F.kz_nodes, F.kz_w, out)


# e_pol pairing tables.  conj(e_-) = e_+ etc.; e_- . e_+ = 2, e_3 . e_3 = 1.
_DOT = {("-", "+"): 2.0, ("+", "-"): 2.0, ("3", "3"): 1.0}
# e_a x e_b expressed as (pol, coefficient)
_CROSS = {
    ("-", "+"): ("3", 2j),
    ("+", "-"): ("3", -2j),
    ("-", "3"): ("-", -1j),
    ("3", "-"): ("-", 1j),
    ("+", "3"): ("+", 1j),
    ("3", "+"): ("+", -1j),
}
_FLIP = {"-": "+", "+": "-", "3": "3"}


class _CylinderQuadrature:
    """Composite Gauss-Legendre product rule on the finite cylinder."""

    def __init__(self, dom: QuadratureDomain):
        self.dom = dom
        self.rho, self.w_rho = _panels(0.0, dom.R, dom.n_radial)
        self.z, self.w_z = _panels(-dom.Z, dom.Z, dom.n_axial)

    def radial(self, F1, F2, o1, o2, p):
        """int_0^R J_o1(kp rho) J_o2(kp' rho) rho^(1+p) drho as a matrix."""
        K1 = specfun.bessel_j_outer(o1, F1.kp_nodes, self.rho)
        K2 = specfun.bessel_j_outer(o2, F2.kp_nodes, self.rho)
        wt = self.w_rho * self.rho ** (1 + p)
        return (K1 * wt) @ K2.T

    def axial(self, F1, F2, q, sign):
        """int_-Z^Z z^q e^{i(kz + sign kz') z} dz as a matrix."""
        E1 = np.exp(1j * np.outer(F1.kz_nodes, self.z))
        E2 = np.exp(1j * sign * np.outer(F2.kz_nodes, self.z))
        wt = self.w_z * self.z**q
        return (E1 * wt) @ E2.T


def _panels(a, b, n_total, per_panel=24):
    n_panels = max(1, int(math.ceil(n_total / per_panel)))
    xs, ws = [], []
    edges = np.linspace(a, b, n_panels + 1)
    gx, gw = roots_legendre(per_panel)
    for lo, hi in zip(edges[:-1], edges[1:]):
        xs.append(0.5 * (hi - lo) * gx + 0.5 * (lo + hi))
        ws.append(0.5 * (hi - lo) * gw)
    return np.concatenate(xs), np.concatenate(ws)


def volume_dot(F1, F2, quad: _CylinderQuadrature, conjugate=True):
    """int F1 . F2(*) dV over the cylinder; azimuthal integral exact."""
    total = 0.0 + 0.0j
    for c1 in F1.comps:
        for c2 in F2.comps:
            pol2 = _FLIP[c2.pol] if conjugate else c2.pol
            pair = _DOT.get((c1.pol, pol2))
            if pair is None:
                continue
            if conjugate:
                if c1.azim != c2.azim:
                    continue
                G2 = np.conj(c2.coeff)
                sign = -1.0
            else:
                if c1.azim + c2.azim != 0:
                    continue
                G2 = c2.coeff
                sign = 1.0
            rad = quad.radial(F1, F2, c1.order, c2.order, c1.rho_pow + c2.rho_pow)
            ax = quad.axial(F1, F2, c1.z_pow + c2.z_pow, sign)
            G1 = c1.coeff * F1.kp_w[:, None] * F1.kz_w[None, :]
            G2 = G2 * F2.kp_w[:, None] * F2.kz_w[None, :]
            total += 2 * math.pi * pair * np.einsum("ab,cd,ac,bd->", G1, G2, rad, ax, optimize=True)
    return total


def volume_cross(F1, F2, quad: _CylinderQuadrature, conjugate=True):
    """int F1 x F2(*) dV as {'-': c-, '+': c+, '3': c3} e_pol coefficients."""
    out = {"-": 0.0 + 0.0j, "+": 0.0 + 0.0j, "3": 0.0 + 0.0j}
    for c1 in F1.comps:
        for c2 in F2.comps:
            pol2 = _FLIP[c2.pol] if conjugate else c2.pol
            pair = _CROSS.get((c1.pol, pol2))
            if pair is None:
                continue
            if conjugate:
                if c1.azim != c2.azim:
                    continue
                G2 = np.conj(c2.coeff)
                sign = -1.0
            else:
                if c1.azim + c2.azim != 0:
                    continue
                G2 = c2.coeff
                sign = 1.0
            rad = quad.radial(F1, F2, c1.order, c2.order, c1.rho_pow + c2.rho_pow)
            ax = quad.axial(F1, F2, c1.z_pow + c2.z_pow, sign)
            G1 = c1.coeff * F1.kp_w[:, None] * F1.kz_w[None, :]
            G2 = G2 * F2.kp_w[:, None] * F2.kz_w[None, :]
            out[pair[0]] += 2 * math.pi * pair[1] * np.einsum("ab,cd,ac,bd->", G1, G2, rad, ax, optimize=True)
    return out


def _pair_integral(wp1, wp2, weight, n=64):
    """int dkp dkz g1(k) conj(g2)(k) weight(kp, kz) on the joint support."""
    lo_p = min(wp1.k_perp_center - 5 * wp1.k_perp_width, wp2.k_perp_center - 5 * wp2.k_perp_width)
    hi_p = max(wp1.k_perp_center + 5 * wp1.k_perp_width, wp2.k_perp_center + 5 * wp2.k_perp_width)
    lo_z = min(wp1.k_z_center - 5 * wp1.k_z_width, wp2.k_z_center - 5 * wp2.k_z_width)
    hi_z = max(wp1.k_z_center + 5 * wp1.k_z_width, wp2.k_z_center + 5 * wp2.k_z_width)
    kp, wkp = _gl(lo_p, hi_p, n)
    kz, wkz = _gl(lo_z, hi_z, n)
    KP, KZ = np.meshgrid(kp, kz, indexing="ij")
    vals = wp1.envelope(KP, KZ) * np.conj(wp2.envelope(KP, KZ)) * weight(KP, KZ)
    return np.einsum("a,b,ab->", wkp, wkz, vals)


def _lplus_analytic(wp_m, wp_mp, n=64):
    """Envelope form of the L+ matrix element int M'* . (L+ M) dV.

    The distributional identity (with m' = m+1)
        i (2pi)^2 (w w'/(kp kz kz')) [kp d_kz - kz d_kp - m kz/kp] delta delta
    is integrated by parts against the envelopes: with u = g w/(kp kz),
        I = i (2pi)^2 int dk conj(h) (w/kz) [ -d_kz(kp u) + d_kp(kz u) - m (kz/kp) u ].
    """
    m = wp_m.m
    kp, wkp = _gl(wp_m.k_perp_center - 5 * wp_m.k_perp_width, wp_m.k_perp_center + 5 * wp_m.k_perp_width, n)
    kz, wkz = _gl(wp_m.k_z_center - 5 * wp_m.k_z_width, wp_m.k_z_center + 5 * wp_m.k_z_width, n)
    KP, KZ = np.meshgrid(kp, kz, indexing="ij")
    W = np.hypot(KP, KZ)
    g = wp_m.envelope(KP, KZ)
    h = wp_mp.envelope(KP, KZ)
    # analytic partials of u = g w/(kp kz): Gaussian envelope derivatives
    dg_dkp = -(KP - wp_m.k_perp_center) / wp_m.k_perp_width**2 * g
    dg_dkz = -(KZ - wp_m.k_z_center) / wp_m.k_z_width**2 * g
    u = g * W / (KP * KZ)
    du_dkp = dg_dkp * W / (KP * KZ) + g * (KP / W / (KP * KZ) - W / (KP**2 * KZ))
    du_dkz = dg_dkz * W / (KP * KZ) + g * (KZ / W / (KP * KZ) - W / (KP * KZ**2))
    d_kz_kp_u = KP * du_dkz  # d/dkz (kp u)
    d_kp_kz_u = KZ * du_dkp  # d/dkp (kz u)
    integrand = np.conj(h) * (W / KZ) * (-d_kz_kp_u + d_kp_kz_u - m * (KZ / KP) * u)
    return 1j * (2 * math.pi) ** 2 * np.einsum("a,b,ab->", wkp, wkz, integrand)


def quadrature_suite(pairs=None, dom=None, rel_tol=QUAD_REL_TOL, margin=2.0):
    """Wavepacket-smeared volume integrals over a finite cylinder.

    Each relation compares a direct volume integral (exact azimuthally,
    composite Gauss-Legendre radially and axially) with the analytic
    value obtained by applying the delta-normalized product formulas to
    the Gaussian envelopes.  A refinement pass (domain scaled by 1.5,
    with every k-grid rebuilt to match via k_counts) provides the
    convergence estimate; relations whose estimate exceeds the tolerance
    are reported inconclusive.
    """
    if pairs is None:
        base = WavepacketSpec(TM, 2, 1.0, 0.08, 2.0, 0.12)
        mate = WavepacketSpec(TE, 3, 1.0, 0.08, 2.0, 0.12)
        pairs = (base, mate)
    wp1, wp2 = pairs
    if dom is None:
        dom = default_domain(wp1)
    dom_fine = dom.scaled(1.5)
    quad = _CylinderQuadrature(dom)
    quad_fine = _CylinderQuadrature(dom_fine)
    results = []

    def shifted(m, kp0=None, kz0=None):
        return WavepacketSpec(
            wp1.family,
            m,
            wp1.k_perp_center if kp0 is None else kp0,
            wp1.k_perp_width,
            wp1.k_z_center if kz0 is None else kz0,
            wp1.k_z_width,
        )

    wp_up = shifted(wp1.m + 1, 1.05 * wp1.k_perp_center, 0.95 * wp1.k_z_center)

    def make_fields(dom_):
        """Every smeared field rebuilt with k-grids resolving this domain."""

        def mk(which, w):
            return smear_mode(which, w, *k_counts(w, dom_, margin))

        F = {
            "M1": mk("M", wp1),
            "N1": mk("N", wp1),
            "M_up": mk("M", shifted(wp1.m + 1)),
            "M_dn": mk("M", shifted(wp1.m - 1)),
            "N_up": mk("N", shifted(wp1.m + 1)),
            "M_rev": mk("M", shifted(-wp1.m, kz0=-wp1.k_z_center)),
            "N_rev": mk("N", shifted(-wp1.m, kz0=-wp1.k_z_center)),
            "Mp": mk("M", wp_up),
            "Mf": mk("M", shifted(-wp1.m - 1, kz0=-wp1.k_z_center)),
        }
        F["LM"] = apply_L_plus(F["M1"])
        return F

    F_c = make_fields(dom)
    F_f = make_fields(dom_fine)

    def check(name, numeric_fn, analytic, scale, notes=""):
        coarse = numeric_fn(quad, F_c)
        fine = numeric_fn(quad_fine, F_f)
        est = abs(fine - coarse) / scale
        resid = abs(fine - analytic) / scale
        if est > rel_tol:
            notes = (
                f"inconclusive: convergence estimate {est:.3e} above tolerance; " + notes
            )
        else:
            notes = f"convergence estimate {est:.3e}; " + notes
        results.append(RelationResult.from_norm("quadrature: " + name, resid, rel_tol, notes))
        return fine

    scalar_weight = lambda KP, KZ: (KP**2 + KZ**2) / (KP * KZ**2)
    ana_diag = (2 * math.pi) ** 2 * _pair_integral(wp1, wp1, scalar_weight)
    scale = abs(ana_diag)

    # (a) scalar orthonormality, same m
    check(
        "int M.M'* dV = (2pi)^2 int g g'* w^2/(kp kz^2)",
        lambda q, F: volume_dot(F["M1"], F["M1"], q),
        ana_diag,
        scale,
        "same-envelope diagonal",
    )
    check(
        "int N.N'* dV = (2pi)^2 int g g'* w^2/(kp kz^2)",
        lambda q, F: volume_dot(F["N1"], F["N1"], q),
        ana_diag,
        scale,
        "same-envelope diagonal",
    )
    # (a') m != m' is azimuthally exact zero
    off = abs(volume_dot(F_c["M1"], F_c["M_up"], quad)) / scale
    results.append(
        RelationResult.from_norm(
            "quadrature: int M.M'* dV = 0 for m != m'",
            off,
            AZIMUTHAL_TOL,
            "azimuthal integral is performed exactly",
        )
    )
    # (b) cross family
    check(
        "int M.N'* dV = 0",
        lambda q, F: volume_dot(F["M1"], F["N1"], q),
        0.0,
        scale,
        "cross-family scalar product, same m",
    )

    # (c) vector products: int N x M'* with m' = m, m+1, m-1 picks e3, e-, e+
    vec_weight = lambda KP, KZ: np.hypot(KP, KZ) / KZ**2
    ana_vec = (2 * math.pi) ** 2 * _pair_integral(wp1, wp1, vec_weight)
    ana_vec3 = (2 * math.pi) ** 2 * _pair_integral(
        wp1, wp1, lambda KP, KZ: np.hypot(KP, KZ) / (KP * KZ)
    )
    vscale = abs(ana_vec)
    check(
        "int N x M'* dV, m'=m: e3 coefficient = (2pi)^2 int g g'* w/(kp kz)",
        lambda q, F: volume_cross(F["N1"], F["M1"], q)["3"],
        ana_vec3,
        vscale,
    )
    check(
        "int N x M'* dV, m'=m+1: e- coefficient = (i/2)(2pi)^2 int g g'* w/kz^2",
        lambda q, F: volume_cross(F["N1"], F["M_up"], q)["-"],
        0.5j * ana_vec,
        vscale,
        "selection rule delta_{m+1,m'}",
    )
    check(
        "int N x M'* dV, m'=m-1: e+ coefficient = -(i/2)(2pi)^2 int g g'* w/kz^2",
        lambda q, F: volume_cross(F["N1"], F["M_dn"], q)["+"],
        -0.5j * ana_vec,
        vscale,
        "selection rule delta_{m-1,m'}",
    )
    # (d) vanishing vector products
    for nm, (ka, kb) in {
        "int M x M'* dV = 0": ("M1", "M_up"),
        "int N x N'* dV = 0": ("N1", "N_up"),
    }.items():
        vals = volume_cross(F_c[ka], F_c[kb], quad)
        worst = max(abs(v) for v in vals.values()) / vscale
        results.append(
            RelationResult.from_norm("quadrature: " + nm, worst, rel_tol, "all e_pol coefficients")
        )

    # symmetric non-conjugated combination, counter-propagating partner
    def sym_combo(q, F):
        a = volume_cross(F["M1"], F["N_rev"], q, conjugate=False)
        b = volume_cross(F["N1"], F["M_rev"], q, conjugate=False)
        return max(abs(a[k] - b[k]) for k in a)

    results.append(
        RelationResult.from_norm(
            "quadrature: int (M x N' - N x M') dV = 0",
            sym_combo(quad, F_c) / vscale,
            rel_tol,
            "non-conjugated, partner centered at (-m, -kz)",
        )
    )

    # (e) L+ matrix element against the envelope-derivative analytic form
    ana_L = _lplus_analytic(wp1, wp_up)
    check(
        "int M'* . (L+ M) dV = envelope-derivative form, m' = m+1",
        lambda q, F: volume_dot(F["LM"], F["Mp"], q),
        ana_L,
        max(abs(ana_L), scale),
        "delta' product formula integrated by parts against the envelopes",
    )
    # (f) the non-conjugated L+ product is claimed to vanish because every
    # delta is multiplied by its argument; the delta-derivative terms break
    # that argument (x delta'(x) = -delta(x)), so with a counter-propagating
    # partner the integral converges to a nonzero value.
    nonconj = check(
        "int M' . (L+ M) dV = 0 (printed)",
        lambda q, F: volume_dot(F["Mf"], F["LM"], q, conjugate=False),
        0.0,
        max(abs(ana_L), scale),
        "x delta'(x) = -delta(x): the delta-derivative terms survive; "
        "partner centered at (-m-1, -kz); value converged under refinement",
    )
    # computed companion: M*_{m,kz} = (-1)^m M_{-m,-kz} maps the
    # non-conjugated product onto the conjugated matrix element of the
    # kz-reflected partner packet.
    wp_refl = shifted(wp1.m + 1)
    ana_refl = (-1.0) ** (wp1.m + 1) * _lplus_analytic(wp1, wp_refl)
    results.append(
        RelationResult.from_norm(
            "quadrature: int M' . (L+ M) dV = (-1)^(m+1) x reflected conjugated"
            " element (computed)",
            abs(nonconj - ana_refl) / max(abs(ana_refl), scale),
            rel_tol,
            "reflection identity M*_{m,kz} = (-1)^m M_{-m,-kz}",
        )
    )

    # (g) energy per photon of a narrow wavepacket
    results.append(energy_per_photon_check(rel_width=0.02, margin=margin))
    return _sorted(results)


def energy_per_photon_check(rel_width=0.02, tol=0.01, margin=2.0):
    """(1/4pi) int (|E|^2 + |B|^2) dV = hbar * mean(omega) for a unit packet."""
    wp = WavepacketSpec(TM, 1, 1.0, rel_width * 1.0, 2.0, rel_width * 2.0)
    dom = default_domain(wp)
    quad = _CylinderQuadrature(dom)
    # envelope normalization int |g|^2 dk = 1
    nrm = _pair_integral(wp, wp, lambda KP, KZ: np.ones_like(KP))
    omega_bar = _pair_integral(wp, wp, lambda KP, KZ: np.hypot(KP, KZ)) / nrm
    scale = 1.0 / math.sqrt(abs(nrm))
    n_kp, n_kz = k_counts(wp, dom, margin)
    E = smear_mode("E", wp, n_kp, n_kz)
    B = smear_mode("B", wp, n_kp, n_kz)
    for F in (E, B):
        for comp in F.comps:
            comp.coeff = comp.coeff * scale
    energy = (volume_dot(E, E, quad) + volume_dot(B, B, quad)).real / (4 * math.pi)
    resid = abs(energy - omega_bar.real) / omega_bar.real
    return RelationResult.from_norm(
        "quadrature: energy per photon = hbar * mean omega",
        resid,
        tol,
        f"relative width {rel_width}; measured {energy:.6f} vs mean omega {omega_bar.real:.6f}",
    )


# ---------------------------------------------------------------------------
# Spherical suite
# ---------------------------------------------------------------------------


def _ring_density(which, m, k_perp, k_z, phi_k, c=1.0):
    """Vector angular density of M or N on the plane-wave cone at azimuth phi_k."""
    omega = c * math.hypot(k_perp, k_z)
    ct, st = c * k_z / omega, c * k_perp / omega
    if which == "M":
        unit = np.array([-math.sin(phi_k), math.cos(phi_k), 0.0])
    else:
        unit = np.array([ct * math.cos(phi_k), ct * math.sin(phi_k), -st])
    return -(omega / (c * k_z)) * ((-1j) ** m / (2 * math.pi)) * np.exp(1j * m * phi_k) * unit


def _vsh_grid(j, m, theta, phi):
    """(Y^E, Y^M) transverse harmonics on broadcastable angle grids.

    Vectorized restatement of specfun.vector_spherical_harmonic: the
    theta derivative comes from the ladder identity, so the expressions
    stay finite as long as the grid avoids the exact poles.
    Returns two arrays shaped theta.shape + (3,), Cartesian components.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st, ct = np.sin(theta), np.cos(theta)
    dth = np.zeros(np.broadcast(theta, phi).shape, dtype=complex)
    if m + 1 <= j:
        dth = dth + 0.5 * math.sqrt((j - m) * (j + m + 1)) * sph_harm_y(
            j, m + 1, theta, phi
        ) * np.exp(-1j * phi)
    if m - 1 >= -j:
        dth = dth - 0.5 * math.sqrt((j + m) * (j - m + 1)) * sph_harm_y(
            j, m - 1, theta, phi
        ) * np.exp(1j * phi)
    if m == 0:
        dphi_over_sin = np.zeros_like(dth)
    else:
        dphi_over_sin = 1j * m * sph_harm_y(j, m, theta, phi) / st
    that = np.stack([ct * np.cos(phi), ct * np.sin(phi), -st], axis=-1)
    phat = np.stack([-np.sin(phi), np.cos(phi), np.zeros_like(phi + theta)], axis=-1)
    ye = (dth[..., None] * that + dphi_over_sin[..., None] * phat) / (j * (j + 1))
    n_hat = np.stack([st * np.cos(phi), st * np.sin(phi), ct], axis=-1)
    ym = np.cross(n_hat, ye)
    return ye, ym


def expansion_coefficients(which, m, k_perp, k_z, j, c=1.0, n_phi=None):
    """(alpha_E, alpha_M): coefficients of the spherical angular profiles.

    Defined by  F(r) = sum_j [alpha_E V^E_j + alpha_M V^M_j](r)  with
    V^(i)_j(r) = int dOmega Y^(i)_jm(n) e^{i k n . r}, obtained by
    projecting the plane-wave ring density of M or N onto the transverse
    harmonics (they are orthogonal with norm 1/(j(j+1))).
    """
    if j < max(1, abs(m)):
        return 0.0 + 0.0j, 0.0 + 0.0j
    omega = c * math.hypot(k_perp, k_z)
    theta0 = math.acos(c * k_z / omega)
    if n_phi is None:
        n_phi = 8 * (abs(m) + j + 4)
    phis = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    ring = np.stack([_ring_density(which, m, k_perp, k_z, p, c) for p in phis])
    ye, ym = _vsh_grid(j, m, np.full(n_phi, theta0), phis)
    step = 2 * math.pi / n_phi
    accE = np.sum(ring * np.conj(ye))
    accM = np.sum(ring * np.conj(ym))
    return j * (j + 1) * accE * step, j * (j + 1) * accM * step


def printed_uv(m, k_perp, k_z, j, m_j, c=1.0):
    """The printed closed forms of the expansion coefficients u and v.

    Delta-stripped: the factor delta(|k| - omega) delta_{m, m_j} is removed
    and the remaining smooth coefficient returned.  The m_j != m selection
    rule is exact by construction.
    """
    if m_j != m or j < max(1, abs(m)):
        return 0.0 + 0.0j, 0.0 + 0.0j
    omega = c * math.hypot(k_perp, k_z)
    x = c * k_z / omega
    norm = math.sqrt(
        (2 * j + 1) * math.factorial(j - abs(m)) / (4 * math.pi * math.factorial(j + abs(m)))
    )
    phase = (-1.0) ** (m + (m + abs(m)) // 2) * (1j) ** (m + j)
    pref = 4 * math.pi**2 * phase * norm * math.sqrt(c) * k_perp / (k_z * math.sqrt(omega))
    u = -pref * (c / omega) * float(specfun.assoc_legendre_prime(j, abs(m), x))
    v = pref * (1j * m * omega / (c * k_perp)) * float(specfun.assoc_legendre(j, abs(m), x))
    return u, v


def spherical_wave(kind, j, m, omega, point, n_theta=None, n_phi=None, c=1.0):
    """V^(i)_j(r) = int dOmega Y^(i)_jm(n) e^{i (omega/c) n . r} by quadrature."""
    ve, vm = _spherical_wave_pair(j, m, omega, point, n_theta, n_phi, c)
    return ve if kind == "E" else vm


def _spherical_wave_pair(j, m, omega, point, n_theta=None, n_phi=None, c=1.0):
    x, y, z = point
    r = math.sqrt(x * x + y * y + z * z)
    if n_theta is None:
        n_theta = j + 40
    if n_phi is None:
        n_phi = int(8 * (abs(m) + omega * r / c + 4))
    ct, wt = roots_legendre(n_theta)
    st = np.sqrt(1.0 - ct * ct)
    phis = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    TH = np.arccos(ct)[:, None] * np.ones((1, n_phi))
    PH = np.ones((n_theta, 1)) * phis[None, :]
    ye, ym = _vsh_grid(j, m, TH, PH)
    kdotr = (omega / c) * (
        st[:, None] * np.cos(PH) * x + st[:, None] * np.sin(PH) * y + ct[:, None] * z
    )
    wgt = (wt[:, None] * np.exp(1j * kdotr)) * (2 * math.pi / n_phi)
    ve = np.tensordot(wgt, ye, axes=([0, 1], [0, 1]))
    vm = np.tensordot(wgt, ym, axes=([0, 1], [0, 1]))
    return ve, vm


def reconstruct(which, m, k_perp, k_z, point, j_max, c=1.0, checkpoints=()):
    """Truncated spherical reconstruction of M or N at a Cartesian point.

    With `checkpoints`, also returns {j: partial sum after degree j}.
    """
    omega = c * math.hypot(k_perp, k_z)
    total = np.zeros(3, dtype=complex)
    partial = {}
    for j in range(max(1, abs(m)), j_max + 1):
        aE, aM = expansion_coefficients(which, m, k_perp, k_z, j, c)
        if max(abs(aE), abs(aM)) > 1e-300:
            ve, vm = _spherical_wave_pair(j, m, omega, point, c=c)
            total = total + aE * ve + aM * vm
        if j in checkpoints:
            partial[j] = total.copy()
    if checkpoints:
        return total, partial
    return total


def spherical_suite(samples=None, j_max=60, m=2, k_perp=1.0, k_z=2.0, tol=1e-3):
    """Angular-spectrum and spherical-expansion checks.

    (a) scalar and vector plane-wave angular spectra reproduce the
        closed-form modes; (b) the printed u, v closed forms are compared
        against projection-derived expansion coefficients; (c) N and M are
        reconstructed from truncated spherical sums; (d) the
        spherical-basis angular momentum satisfies su(2).
    """
    c = 1.0
    results = []
    omega = math.hypot(k_perp, k_z)

    # (a) scalar identity
    worst = 0.0
    for rho, phi in [(0.3, 0.0), (1.1, 0.7), (2.4, -1.9), (5.0, 2.2)]:
        lhs = scalar_angular_spectrum(m, k_perp, rho, phi, n_nodes=int(8 * (abs(m) + k_perp * rho + 8)))
        rhs = specfun.bessel_j(m, k_perp * rho) * np.exp(1j * m * phi)
        worst = max(worst, abs(lhs - rhs))
    results.append(
        RelationResult.from_norm(
            "spherical: scalar angular-spectrum identity", worst, 1e-10, "4 sample radii"
        )
    )
    worst = 0.0
    for rho, phi, z in [(0.4, 0.3, 0.2), (1.7, -0.8, 1.0)]:
        p = CylPoint(rho, phi, z, 0.13)
        for which, evaluator in (("M", eval_M), ("N", eval_N)):
            spec, _ = angular_spectrum(which, m, k_perp, k_z, p, c=c)
            direct = evaluator(m, k_perp, k_z, p, c=c).to_cartesian()
            worst = max(worst, float(np.abs(spec.components - direct.components).max()))
    results.append(
        RelationResult.from_norm(
            "spherical: vector angular-spectrum identity", worst, 1e-10, "M and N, 2 points"
        )
    )

    # (b) printed u, v against projection coefficients
    ratio_u, ratio_v = [], []
    sel_worst = 0.0
    for j in range(max(1, abs(m)), max(1, abs(m)) + 10):
        aE, aM = expansion_coefficients("N", m, k_perp, k_z, j, c)
        u, v = printed_uv(m, k_perp, k_z, j, m, c)
        for mj in (m - 1, m + 1):
            uu, vv = printed_uv(m, k_perp, k_z, j, mj, c)
            sel_worst = max(sel_worst, abs(uu), abs(vv))
        if abs(u) > 1e-12:
            ratio_u.append(aE / u)
        if abs(v) > 1e-12:
            ratio_v.append(aM / v)
    results.append(
        RelationResult.from_norm(
            "spherical: u, v selection rule m_j = m", sel_worst, 0.0, "exact by the delta factor"
        )
    )
    mag_u = np.array([abs(r) for r in ratio_u])
    mag_v = np.array([abs(r) for r in ratio_v])
    results.append(
        RelationResult.from_norm(
            "spherical: |u_j| proportional to |projection E-coefficient|",
            float(mag_u.std() / mag_u.mean()),
            1e-10,
            f"constant magnitude ratio {mag_u.mean():.6g} across j",
        )
    )
    results.append(
        RelationResult.from_norm(
            "spherical: |v_j| proportional to |projection M-coefficient|",
            float(mag_v.std() / mag_v.mean()),
            1e-10,
            f"constant magnitude ratio {mag_v.mean():.6g} across j",
        )
    )
    phase_u = np.array(ratio_u) / ratio_u[0]
    drift = float(np.abs(phase_u[1:] * 1j ** np.arange(1, len(phase_u)) - 1.0).max())
    results.append(
        RelationResult.from_norm(
            "spherical: printed u phase matches projection coefficient (flagged)",
            float(np.abs(phase_u[1:] - 1.0).max()),
            1e-10,
            "printed phase factor i^(m+j) drifts by a factor i per j against the "
            f"projection value; removing i^j leaves residual {drift:.3e}, and the "
            "u and v magnitude ratios agree, so the j-dependent phase is the only "
            "discrepancy",
        )
    )

    # (c) truncated reconstruction at sample points with k_perp * rho <= 2
    if samples is None:
        samples = [(0.5 / k_perp, 0.2, 0.3), (1.5 / k_perp, -0.4, 0.1), (2.0 / k_perp, 1.0, -0.5)]
    worst = 0.0
    checkpoints = tuple(sorted({j_max // 2, 3 * j_max // 4, j_max}))
    tail = []
    for rho, phi, z in samples:
        point = (rho * math.cos(phi), rho * math.sin(phi), z)
        p = CylPoint(rho, phi, z, 0.0)
        for which, evaluator in (("N", eval_N), ("M", eval_M)):
            rec, partial = reconstruct(which, m, k_perp, k_z, point, j_max, c, checkpoints)
            direct = evaluator(m, k_perp, k_z, p, c=c).to_cartesian().components
            ref = float(np.abs(direct).max())
            worst = max(worst, float(np.abs(rec - direct).max() / ref))
            tail.append([float(np.abs(partial[j] - direct).max() / ref) for j in checkpoints])
    tail_max = np.max(tail, axis=0)
    monotone = bool(np.all(np.diff(tail_max) <= 0))
    results.append(
        RelationResult.from_norm(
            f"spherical: M, N reconstruction from spherical modes (j_max={j_max})",
            worst,
            tol,
            "relative max-abs error over sample points with k_perp*rho <= 2; "
            f"tail at j={list(checkpoints)}: {[f'{t:.2e}' for t in tail_max]} "
            f"(monotone decrease: {monotone})",
        )
    )

    # (d) su(2) algebra of the spherical-basis angular momentum
    s_lat = SphericalLattice(((omega, 1.0),), (1, 4))
    L_plus, L_minus, L_3 = build_L_spherical(s_lat)
    Lx = L_plus + L_minus
    Ly = 1j * (L_minus - L_plus)
    resid = max(
        (commutator(Lx, Ly) - 1j * _strip_scalar(L_3)).max_abs(),
        (commutator(Ly, _strip_scalar(L_3)) - 1j * Lx).max_abs(),
        (commutator(_strip_scalar(L_3), Lx) - 1j * Ly).max_abs(),
    )
    results.append(
        RelationResult.from_norm(
            "spherical: [L_x, L_y] = i hbar L_z (spherical basis, j <= 4)",
            resid,
            STOKES_TOL,
            "hbar = 1",
        )
    )
    return _sorted(results)
