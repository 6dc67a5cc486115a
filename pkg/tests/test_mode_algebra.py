import numpy as np
import pytest

import oracles
from lowmode.mode_algebra import (boussinesq_image,
                                  boussinesq_theta_bracket,
                                  boussinesq_theta_bracket_vector,
                                  boussinesq_vorticity_bracket,
                                  boussinesq_vorticity_bracket_vector,
                                  diagonal_image, euler_bilinear, euler_image,
                                  nse_bilinear, nse_image, polarize,
                                  rd_product_span, sine_multilinear)
from lowmode.modes import (COS, SIN, RD_SCALAR, TEMPERATURE, VELOCITY,
                           VORTICITY, ModeVector, TrigMode, span_of)


def sv(*pairs):
    return ModeVector({TrigMode((k,), SIN, RD_SCALAR): c for k, c in pairs})


class TestRdProducts:
    def test_sin_cubed(self):
        # sin^3 x = 3/4 sin x - 1/4 sin 3x
        v = sine_multilinear([sv((1, 1.0))] * 3)
        assert abs(v[TrigMode((1,), SIN, RD_SCALAR)] - 0.75) < 1e-14
        assert abs(v[TrigMode((3,), SIN, RD_SCALAR)] + 0.25) < 1e-14
        assert len(v) == 2

    def test_sin2_sin2x(self):
        # sin^2(x) sin(2x) = 1/2 sin 2x - 1/4 sin 4x
        v = sine_multilinear([sv((1, 1.0)), sv((1, 1.0)), sv((2, 1.0))])
        assert abs(v[TrigMode((2,), SIN, RD_SCALAR)] - 0.5) < 1e-14
        assert abs(v[TrigMode((4,), SIN, RD_SCALAR)] + 0.25) < 1e-14

    def test_against_quadrature_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            ks = rng.integers(1, 7, size=3)
            factors = [sv((int(k), 1.0)) for k in ks]
            sym = sine_multilinear(factors)
            orc = oracles.rd_product_oracle(factors)
            diff = sym.plus(orc, -1.0)
            assert diff.norm() < 1e-12

    def test_span_and_empty(self):
        m1 = TrigMode((1,), SIN, RD_SCALAR)
        m2 = TrigMode((2,), SIN, RD_SCALAR)
        s = rd_product_span([m1, m2], 3)
        assert s.dim > 0
        assert rd_product_span([], 3).dim == 0
        with pytest.raises(ValueError):
            rd_product_span([m1], 2)

    def test_odd_frequency_parity_conservation(self):
        s = rd_product_span([TrigMode((1,), SIN, RD_SCALAR),
                             TrigMode((3,), SIN, RD_SCALAR)], 3)
        for m in s.modes:
            assert m.k[0] % 2 == 1


def vm(k, parity, field=VORTICITY):
    mode = TrigMode(tuple(k), parity, field)
    return ModeVector({mode: 1.0})


class TestNse:
    def test_self_image_vanishes(self):
        m = TrigMode((1, 2), SIN, VORTICITY)
        assert nse_bilinear(m, m).dim == 0

    def test_collinear_vanishes(self):
        a = TrigMode((1, 0), COS, VORTICITY)
        b = TrigMode((2, 0), COS, VORTICITY)
        assert nse_bilinear(a, b).dim == 0

    def test_example_frequencies(self):
        a = TrigMode((1, 0), SIN, VORTICITY)
        b = TrigMode((1, 1), SIN, VORTICITY)
        s = nse_bilinear(a, b)
        assert s.dim == 1
        freqs = {m.k for m in s.basis_vectors()[0]}
        assert freqs == {(2, 1), (0, 1)}

    def test_against_pseudospectral_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(12):
            k = tuple(int(x) for x in rng.integers(-3, 4, size=2))
            j = tuple(int(x) for x in rng.integers(-3, 4, size=2))
            if k == (0, 0) or j == (0, 0):
                continue
            from lowmode.modes import make_mode
            mk, sk = make_mode(k, int(rng.integers(0, 2)), VORTICITY)
            mj, sj = make_mode(j, int(rng.integers(0, 2)), VORTICITY)
            f = ModeVector({mk: float(sk)})
            g = ModeVector({mj: float(sj)})
            sym = nse_image(f, g)
            orc = oracles.nse_image_oracle(f, g)
            assert sym.plus(orc, -1.0).norm() < 1e-12


class TestBoussinesq:
    def test_equal_args_vanish(self):
        assert boussinesq_theta_bracket((1, 0), SIN, (1, 0), SIN).dim == 0
        assert boussinesq_vorticity_bracket((2, 1), COS, (2, 1), COS).dim == 0

    def test_theta_bracket_frequencies(self):
        s = boussinesq_theta_bracket((1, 0), SIN, (0, 1), SIN)
        assert s.dim == 1
        vec = s.basis_vectors()[0]
        assert {m.k for m in vec} == {(1, 1), (1, -1)}
        assert all(m.field == TEMPERATURE for m in vec)

    def test_vorticity_bracket_frequencies(self):
        # symmetrized advection carries a (1/|k|^2 - 1/|j|^2) factor, so
        # equal-norm pairs vanish and unequal-norm pairs generate j +- k
        assert boussinesq_vorticity_bracket((1, 0), SIN, (0, 1), SIN).dim == 0
        s = boussinesq_vorticity_bracket((1, 0), SIN, (1, 1), SIN)
        vec = s.basis_vectors()[0]
        assert {m.k for m in vec} == {(2, 1), (0, 1)}
        assert all(m.field == VORTICITY for m in vec)

    def test_vorticity_bracket_against_oracle(self):
        sym = boussinesq_vorticity_bracket_vector((1, 0), SIN, (1, 1), COS)
        o1 = oracles.advect_oracle(vm((1, 0), SIN), vm((1, 1), COS, VORTICITY),
                                   VORTICITY)
        o2 = oracles.advect_oracle(vm((1, 1), COS), vm((1, 0), SIN, VORTICITY),
                                   VORTICITY)
        orc = o1.plus(o2)
        assert sym.plus(orc, -1.0).norm() < 1e-12

    def test_bilinearity_scaling(self):
        v1 = boussinesq_theta_bracket_vector((1, 0), SIN, (0, 1), COS)
        # alpha beta scaling is coefficientwise
        v2 = boussinesq_theta_bracket_vector((1, 0), SIN, (0, 1), COS).scaled(6.0)
        assert v1.scaled(6.0).plus(v2, -1.0).norm() < 1e-14

    def test_vorticity_bracket_symmetry(self):
        a = boussinesq_vorticity_bracket_vector((1, 0), SIN, (2, 1), COS)
        b = boussinesq_vorticity_bracket_vector((2, 1), COS, (1, 0), SIN)
        assert a.plus(b, -1.0).norm() < 1e-14

    def test_theta_bracket_against_oracle(self):
        # g iota_theta (b(d_x e_k^n, e_j^l) - b(d_x e_j^l, e_k^n)) via grids
        from lowmode.mode_algebra import _d_x
        j, ell, k, n = (1, 2), COS, (0, 1), SIN
        sym = boussinesq_theta_bracket_vector(j, ell, k, n)

        def dx_vec(kk, par):
            out = ModeVector()
            for p, f, c in _d_x(TrigMode(kk, par, TEMPERATURE)):
                from lowmode.modes import make_mode
                m, s = make_mode(f, p, VORTICITY)
                out.add(m, s * c)
            return out

        o1 = oracles.advect_oracle(dx_vec(k, n), vm(j, ell, TEMPERATURE),
                                   TEMPERATURE)
        o2 = oracles.advect_oracle(dx_vec(j, ell), vm(k, n, TEMPERATURE),
                                   TEMPERATURE)
        orc = o1.plus(o2, -1.0)
        assert sym.plus(orc, -1.0).norm() < 1e-12


def ev(k, pol, parity):
    return ModeVector({TrigMode(tuple(k), parity, VELOCITY, pol): 1.0})


class TestEuler:
    def test_same_family_vanishes(self):
        for l1 in (0, 1):
            for m1 in (0, 1):
                for l2 in (0, 1):
                    for m2 in (0, 1):
                        a = TrigMode((1, 2, 0), m1, VELOCITY, l1)
                        b = TrigMode((1, 2, 0), m2, VELOCITY, l2)
                        assert euler_bilinear(a, b).dim == 0

    def test_axis_pair_contains_z_direction_at_110(self):
        # span of all B images over F_(1,0,0) x F_(0,1,0) contains
        # (0,0,1) Re(i^m e^{-i(1,1,0).x}) for m in {0,1}
        vecs = []
        for l1 in (0, 1):
            for m1 in (0, 1):
                for l2 in (0, 1):
                    for m2 in (0, 1):
                        vecs.append(euler_image(ev((1, 0, 0), l1, m1),
                                                ev((0, 1, 0), l2, m2)))
        s = span_of(vecs)
        from lowmode.mode_algebra import _velocity_prefactor_to_modes
        for m in (0, 1):
            target = ModeVector()
            for mode, c in _velocity_prefactor_to_modes(
                    np.array([0.0, 0.0, 1.0]), m, (1, 1, 0)):
                target.add(mode, c)
            assert s.contains(target)

    def test_against_pseudospectral_oracle(self):
        rng = np.random.default_rng(2)
        checked = 0
        while checked < 20:
            k = tuple(int(x) for x in rng.integers(-3, 4, size=3))
            j = tuple(int(x) for x in rng.integers(-3, 4, size=3))
            if all(c == 0 for c in k) or all(c == 0 for c in j):
                continue
            from lowmode.modes import make_mode
            mk, sk = make_mode(k, int(rng.integers(0, 2)), VELOCITY,
                               pol=int(rng.integers(0, 2)))
            mj, sj = make_mode(j, int(rng.integers(0, 2)), VELOCITY,
                               pol=int(rng.integers(0, 2)))
            f = ModeVector({mk: float(sk)})
            g = ModeVector({mj: float(sj)})
            sym = euler_image(f, g)
            orc = oracles.euler_image_oracle(f, g)
            assert sym.plus(orc, -1.0).norm() < 1e-11, (k, j)
            checked += 1

    def test_leray_invariant(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            k = tuple(int(x) for x in rng.integers(-2, 3, size=3))
            j = tuple(int(x) for x in rng.integers(-2, 3, size=3))
            if all(c == 0 for c in k) or all(c == 0 for c in j):
                continue
            from lowmode.modes import make_mode, polarization_frame
            mk, _ = make_mode(k, 0, VELOCITY, pol=0)
            mj, _ = make_mode(j, 1, VELOCITY, pol=1)
            img = euler_image(ModeVector({mk: 1.0}), ModeVector({mj: 1.0}))
            # reassemble the complex coefficient at each output frequency
            by_freq = {}
            for m, c in img.items():
                a = polarization_frame(m.k)[m.pol]
                v = by_freq.setdefault(m.k, np.zeros(3, dtype=complex))
                v += a * (c if m.parity == COS else -1j * c)
            for q, v in by_freq.items():
                assert abs(np.dot(v, np.array(q, dtype=float))) < 1e-12


class TestPolarize:
    def test_diagonal_case(self):
        g = sv((1, 1.0), (2, 0.5))
        s = polarize("rd", g, g, degree=3)
        d = diagonal_image("rd", g, degree=3)
        assert s.contains(d)

    def test_rd_cross_check(self):
        g = sv((1, 1.0))
        h = sv((2, 1.0))
        s = polarize("rd", g, h, degree=3)
        # N_3(g,g,h) = sin^2(x) sin(2x) expansion
        expect = sine_multilinear([g, g, h])
        assert s.contains(expect)

    def test_bilinear_is_symmetrized_image(self):
        f = vm((1, 0), SIN)
        g = vm((1, 1), SIN)
        s = polarize("nse2d", f, g)
        assert s.contains(nse_image(f, g))
