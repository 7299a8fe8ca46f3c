"""Mode-vector identities, field assembly paths, and angular spectra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from besselbeams.modes import (
    CARTESIAN,
    CYLINDRICAL,
    ComplexVec3,
    CylPoint,
    E3,
    ModeIndex,
    NormalizationConvention,
    TE,
    TM,
    angular_spectrum,
    eval_B,
    eval_E,
    eval_M,
    eval_N,
    eval_circular,
    eval_potential,
    hertz_fields,
    scalar_angular_spectrum,
)

RNG = np.random.default_rng(7)
NORM = NormalizationConvention()


def random_points(n, rho_max=6.0):
    for _ in range(n):
        yield CylPoint(
            float(RNG.uniform(1e-3, rho_max)),
            float(RNG.uniform(-math.pi, math.pi)),
            float(RNG.uniform(-3.0, 3.0)),
            float(RNG.uniform(0.0, 2.0)),
        )


class TestDuality:
    def test_ckz_M_equals_omega_e3_cross_N(self):
        # c k_z M = w (e3 x N) on 1000 random points and random modes
        worst = 0.0
        for _ in range(1000):
            m = int(RNG.integers(-4, 5))
            kp = float(RNG.uniform(0.3, 2.5))
            kz = float(RNG.choice([-1.0, 1.0]) * RNG.uniform(0.5, 3.0))
            p = CylPoint(
                float(RNG.uniform(1e-3, 6.0)),
                float(RNG.uniform(-math.pi, math.pi)),
                float(RNG.uniform(-3.0, 3.0)),
            )
            w = math.hypot(kp, kz)
            lhs = kz * eval_M(m, kp, kz, p).cart
            rhs = w * np.cross(E3, eval_N(m, kp, kz, p).cart)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        assert worst < 1e-12

    def test_N_paths_agree(self):
        worst = 0.0
        for _ in range(1000):
            m = int(RNG.integers(-4, 5))
            kp = float(RNG.uniform(0.3, 2.5))
            kz = float(RNG.uniform(0.5, 3.0))
            p = CylPoint(
                float(RNG.uniform(1e-3, 6.0)),
                float(RNG.uniform(-math.pi, math.pi)),
                float(RNG.uniform(-3.0, 3.0)),
            )
            a = eval_N(m, kp, kz, p, path="cylindrical").cart
            b = eval_N(m, kp, kz, p, path="cartesian").cart
            worst = max(worst, float(np.abs(a - b).max()))
        assert worst < 1e-12


class TestAxis:
    def test_tm_m0_axis_fields(self):
        # m = 0 on axis: TM electric field purely axial
        K = ModeIndex(TM, 0, 1.0, 2.0)
        p = CylPoint(0.0, 0.0, 0.3, 0.1)
        E = eval_E(K, p, NORM).to_cartesian().components
        assert abs(E[0]) == 0.0 and abs(E[1]) == 0.0
        # axial value: amplitude * (k_perp/k_z) J_0(0) * phase
        w = K.omega()
        expected = NORM.amplitude(K) * (1.0 / 2.0) * np.exp(1j * (-w * 0.1 + 2.0 * 0.3))
        assert E[2] == pytest.approx(expected, abs=1e-14)

    def test_axis_continuity(self):
        # fields approach their on-axis value smoothly
        for m in (-1, 0, 1, 2):
            on = eval_N(m, 1.0, 2.0, CylPoint(0.0, 0.0, 0.0)).cart
            near = eval_N(m, 1.0, 2.0, CylPoint(1e-9, 0.0, 0.0)).cart
            assert np.abs(on - near).max() < 1e-7

    def test_axis_m_selection(self):
        # only |m| = 1 has transverse weight on the axis, only m = 0 axial
        for m in (-3, -2, 2, 3):
            v = eval_N(m, 1.0, 2.0, CylPoint(0.0)).cart
            assert np.abs(v).max() < 1e-15
        v1 = eval_N(1, 1.0, 2.0, CylPoint(0.0)).cart
        assert np.abs(v1[:2]).max() > 0.1


class TestFieldAssembly:
    def test_hertz_path_matches_mode_path(self):
        # the Hertz-potential fields are proportional to the mode fields
        # with a single constant fixed by one component
        for family in (TM, TE):
            for p in random_points(50):
                m, kp, kz = 2, 1.1, 1.7
                K = ModeIndex(family, m, kp, kz)
                Eh, Bh = hertz_fields(family, m, kp, kz, p)
                Em = eval_E(K, p, NORM).cart
                Bm = eval_B(K, p, NORM).cart
                eh = Eh.cart
                bh = Bh.cart
                idx = int(np.argmax(np.abs(Em)))
                ratio = Em[idx] / eh[idx]
                assert np.abs(Em - ratio * eh).max() < 1e-12 * np.abs(Em).max()
                assert np.abs(Bm - ratio * bh).max() < 1e-12 * np.abs(Bm).max()

    def test_divergence_of_E_vanishes(self):
        # second-order central finite differences in Cartesian coordinates
        h = 1e-5
        for family in (TM, TE):
            K = ModeIndex(family, 2, 1.0, 2.0)
            for x0, y0, z0 in [(0.8, -0.4, 0.3), (1.6, 1.1, -0.7), (0.05, 2.0, 0.0)]:
                div = 0.0 + 0.0j
                for axis in range(3):
                    for s, coeff in ((1.0, 0.5 / h), (-1.0, -0.5 / h)):
                        q = [x0, y0, z0]
                        q[axis] += s * h
                        rho, phi = math.hypot(q[0], q[1]), math.atan2(q[1], q[0])
                        v = eval_E(K, CylPoint(rho, phi, q[2], 0.0), NORM).cart
                        div += coeff * v[axis]
                scale = np.abs(eval_E(K, CylPoint(math.hypot(x0, y0), math.atan2(y0, x0), z0), NORM).cart).max()
                assert abs(div) < 1e-5 * scale  # O(h^2) stencil accuracy

    def test_divergence_of_B_vanishes(self):
        h = 1e-5
        K = ModeIndex(TM, 1, 1.3, 1.9)
        x0, y0, z0 = 1.2, 0.5, -0.2
        div = 0.0 + 0.0j
        for axis in range(3):
            for s, coeff in ((1.0, 0.5 / h), (-1.0, -0.5 / h)):
                q = [x0, y0, z0]
                q[axis] += s * h
                rho, phi = math.hypot(q[0], q[1]), math.atan2(q[1], q[0])
                div += coeff * eval_B(K, CylPoint(rho, phi, q[2], 0.0), NORM).cart[axis]
        assert abs(div) < 1e-5

    def test_faraday_law(self):
        # curl E = -dB/(c dt) = i (w/c) B for the e^{-i w t} convention
        h = 1e-5
        K = ModeIndex(TM, 2, 1.0, 2.0)
        w = K.omega()
        x0, y0, z0 = 0.9, -0.6, 0.4

        def E_at(q):
            rho, phi = math.hypot(q[0], q[1]), math.atan2(q[1], q[0])
            return eval_E(K, CylPoint(rho, phi, q[2], 0.0), NORM).cart

        curl = np.zeros(3, dtype=complex)
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            qp = [x0, y0, z0]
            qm = [x0, y0, z0]
            qp[j] += h
            qm[j] -= h
            dj_Ek = (E_at(qp)[k] - E_at(qm)[k]) / (2 * h)
            qp = [x0, y0, z0]
            qm = [x0, y0, z0]
            qp[k] += h
            qm[k] -= h
            dk_Ej = (E_at(qp)[j] - E_at(qm)[j]) / (2 * h)
            curl[i] = dj_Ek - dk_Ej
        B = eval_B(K, CylPoint(math.hypot(x0, y0), math.atan2(y0, x0), z0, 0.0), NORM).cart
        assert np.abs(curl - 1j * w * B).max() < 1e-5

    def test_potential_field_relation(self):
        # E = (i w / c) A pointwise
        for family in (TM, TE):
            K = ModeIndex(family, 1, 0.8, 1.5)
            w = K.omega()
            p = CylPoint(1.4, 0.6, -0.3, 0.2)
            A = eval_potential(K, p, NORM).cart
            E = eval_E(K, p, NORM).cart
            assert np.abs(E - 1j * w * A).max() < 1e-14


class TestCircular:
    def test_circular_combination(self):
        # R/L potentials are the stated TM/TE combinations
        p = CylPoint(1.2, 0.4, 0.1, 0.0)
        m, kp, kz = 2, 1.0, 2.0
        w = math.hypot(kp, kz)
        beta = kz / w
        for hand, shift, sign in (("R", -1, 1.0), ("L", +1, -1.0)):
            got = eval_circular(hand, m, kp, kz, p, NORM).cart
            a_tm = eval_potential(ModeIndex(TM, m + shift, kp, kz), p, NORM).cart
            a_te = eval_potential(ModeIndex(TE, m + shift, kp, kz), p, NORM).cart
            want = a_tm + sign * 1j * beta * a_te
            assert np.abs(got - want).max() < 1e-14

    def test_handedness_validation(self):
        with pytest.raises(ValueError):
            eval_circular("X", 1, 1.0, 2.0, CylPoint(1.0), NORM)


class TestAngularSpectrum:
    def test_scalar_identity(self):
        from besselbeams.specfun import bessel_j

        for m, rho, phi in [(0, 0.5, 0.1), (2, 2.0, -0.8), (-3, 4.0, 2.5)]:
            val = scalar_angular_spectrum(m, 1.3, rho, phi, n_nodes=8 * (abs(m) + int(1.3 * rho) + 8))
            ref = bessel_j(m, 1.3 * rho) * np.exp(1j * m * phi)
            assert abs(val - ref) < 1e-10

    def test_vector_identity(self):
        p = CylPoint(1.8, -0.7, 0.9, 0.25)
        for which, evaluator in (("M", eval_M), ("N", eval_N)):
            spec, meta = angular_spectrum(which, 2, 1.0, 2.0, p)
            assert meta["converged"]
            direct = evaluator(2, 1.0, 2.0, p).cart
            assert np.abs(spec.cart - direct).max() < 1e-10

    def test_insufficient_nodes_flagged(self):
        p = CylPoint(10.0, 0.0, 0.0)
        _, meta = angular_spectrum("M", 2, 1.0, 2.0, p, n_nodes=12)
        assert not meta["converged"]


class TestTypesAndFrames:
    def test_mode_index_validation(self):
        with pytest.raises(ValueError):
            ModeIndex("XX", 0, 1.0, 1.0)
        with pytest.raises(ValueError):
            ModeIndex(TM, 0, -1.0, 1.0)
        with pytest.raises(ValueError):
            ModeIndex(TM, 0, 1.0, 0.0)
        with pytest.raises(ValueError):
            CylPoint(-0.1)

    @given(
        st.floats(-5, 5),
        st.floats(-5, 5),
        st.floats(-5, 5),
        st.floats(-math.pi, math.pi),
    )
    @settings(max_examples=50, deadline=None)
    def test_frame_roundtrip(self, a, b, c, phi0):
        v = ComplexVec3(np.array([a + 1j * b, b - 1j * c, c], dtype=complex), CARTESIAN)
        back = v.to_cylindrical(phi0).to_cartesian()
        assert np.abs(back.components - v.components).max() < 1e-12

    def test_cross_and_dot_are_cartesian(self):
        u = ComplexVec3(np.array([1.0, 2.0, 3.0]), CYLINDRICAL, 0.5)
        w = ComplexVec3(np.array([0.0, 1.0, 0.0]), CARTESIAN)
        assert u.cross(w).frame == CARTESIAN
        assert abs(u.dot(w) - u.cart[1]) < 1e-15

    def test_amplitude_positive_and_scaling(self):
        K = ModeIndex(TM, 0, 1.0, 2.0)
        a1 = NormalizationConvention().amplitude(K)
        a2 = NormalizationConvention(hbar=4.0).amplitude(K)
        assert a1 > 0
        assert a2 == pytest.approx(2.0 * a1, rel=1e-15)
