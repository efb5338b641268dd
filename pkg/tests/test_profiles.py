import numpy as np
import pytest

from nlslab.errors import AmplitudeTooLarge
from nlslab.lattice import unit_index
from nlslab.profiles import (
    NonlinearityModel,
    assemble_phi,
    build_profile_set,
    d2_phi,
    d_phi,
    derivative_identity_gap,
    forced_residual,
    frequency,
    linearized_operator_apply,
)
from nlslab.spectral import project_continuous, resolvent_solve


class TestNonlinearityModel:
    def test_polynomial_derivatives(self):
        nl = NonlinearityModel.polynomial([2.0, -0.5])
        assert nl.g(0.0) == 0.0
        assert nl.derivs[0] == 2.0
        assert nl.derivs[1] == -1.0  # 2! * c_2
        s = np.linspace(0, 2, 11)
        assert np.allclose(nl.g(s), 2.0 * s - 0.5 * s**2)
        assert np.allclose(nl.gprime(s), 2.0 - s)
        assert np.allclose(nl.g_anti(s), s**2 - s**3 / 6.0)
        nl.validate()

    def test_zero_model(self):
        nl = NonlinearityModel.zero()
        assert np.all(nl.derivs == 0.0)
        assert nl.g(3.0) == 0.0
        nl.validate()


class TestRecursion:
    def test_base_case_is_bound_state(self, mild_chain):
        ps = mild_chain.ps
        for j in range(2):
            stored = ps.phi_tilde[unit_index(j, 2)]
            assert np.shares_memory(stored, mild_chain.spec.phis)
            assert np.array_equal(stored, mild_chain.spec.phis[j])

    def test_resonant_coupling_closed_form(self, mild_chain):
        ps, spec = mild_chain.ps, mild_chain.spec
        g1 = float(mild_chain.nl.derivs[0])
        closed = g1 * spec.phis[0] * spec.phis[1] ** 2
        G = ps.G[(-1, 2)]
        assert spec.grid.norm(G - closed) <= 1e-8 * spec.grid.norm(G)

    def test_correction_solves_its_equation(self, mild_chain):
        ps, spec = mild_chain.ps, mild_chain.spec
        m = (2, -1)
        lam = float(np.dot(spec.omegas, m))
        g1 = float(mild_chain.nl.derivs[0])
        source = g1 * spec.phis[0] ** 2 * spec.phis[1]
        pt = ps.phi_tilde[m]
        res = spec.grid.norm(np.real(spec.op.apply(pt)) - lam * pt + source)
        assert res <= 1e-7 * spec.grid.norm(source)

    def test_correction_matches_direct_resolvent(self, mild_chain):
        ps, spec = mild_chain.ps, mild_chain.spec
        g1 = float(mild_chain.nl.derivs[0])
        m = (2, -1)
        lam = float(np.dot(spec.omegas, m))
        direct = -np.real(
            resolvent_solve(spec, lam, g1 * spec.phis[0] ** 2 * spec.phis[1])
        )
        assert spec.grid.norm(ps.phi_tilde[m] - direct) <= 1e-9

    def test_linear_equation_trivial_profiles(self, mild_chain):
        ps0 = build_profile_set(
            mild_chain.spec, mild_chain.sets, NonlinearityModel.zero()
        )
        for m, f in ps0.phi_tilde.items():
            if sum(abs(c) for c in m) > 1:
                assert np.all(f == 0.0)
        for G in ps0.G.values():
            assert np.all(G == 0.0)
        assert np.all(ps0.varpi1 == 0.0)

    def test_coupling_decays_at_boundary(self, mild_chain):
        G = mild_chain.ps.G[(-1, 2)]
        assert max(abs(G[0]), abs(G[-1])) <= 1e-8


class TestProfileMap:
    def test_zero_amplitude(self, mild_chain):
        out = assemble_phi(mild_chain.ps, np.zeros(2, dtype=complex))
        assert np.all(out == 0.0)

    def test_axis_amplitude_structure(self, mild_chain):
        ps, spec = mild_chain.ps, mild_chain.spec
        rho = 0.05
        z = np.array([rho, 0.0], dtype=complex)
        expect = rho * spec.phis[0] + rho**3 * ps.chi[(0, 0)]
        assert spec.grid.norm(assemble_phi(ps, z) - expect) <= 1e-14

    def test_gauge_covariance_exact(self, mild_chain):
        rng = np.random.default_rng(11)
        z = 0.05 * (rng.normal(size=2) + 1j * rng.normal(size=2))
        theta = 1.234
        lhs = assemble_phi(mild_chain.ps, np.exp(1j * theta) * z)
        rhs = np.exp(1j * theta) * assemble_phi(mild_chain.ps, z)
        assert mild_chain.spec.grid.norm(lhs - rhs) <= 1e-14

    def test_amplitude_guard(self, mild_chain):
        with pytest.raises(AmplitudeTooLarge):
            assemble_phi(mild_chain.ps, np.array([0.3, 0.2], dtype=complex))


class TestDerivatives:
    def test_at_zero_matches_mode_sum(self, mild_chain):
        w = np.array([0.3 - 0.2j, 0.1 + 0.5j])
        out = d_phi(mild_chain.ps, np.zeros(2, dtype=complex), w)
        expect = w[0] * mild_chain.spec.phis[0] + w[1] * mild_chain.spec.phis[1]
        assert mild_chain.spec.grid.norm(out - expect) <= 1e-14

    def test_zero_direction(self, mild_chain):
        z = np.array([0.02 + 0.01j, -0.03j])
        out = d_phi(mild_chain.ps, z, np.zeros(2, dtype=complex))
        assert mild_chain.spec.grid.norm(out) == 0.0

    def test_first_derivative_finite_difference(self, mild_chain):
        rng = np.random.default_rng(12)
        g = mild_chain.spec.grid
        for _ in range(3):
            z = 0.05 * (rng.normal(size=2) + 1j * rng.normal(size=2))
            w = rng.normal(size=2) + 1j * rng.normal(size=2)
            eps = 1e-4
            fd = (
                assemble_phi(mild_chain.ps, z + eps * w)
                - assemble_phi(mild_chain.ps, z - eps * w)
            ) / (2 * eps)
            exact = d_phi(mild_chain.ps, z, w)
            assert g.norm(exact - fd) <= 1e-6 * max(g.norm(fd), 1e-30)

    def test_second_derivative_finite_difference(self, mild_chain):
        rng = np.random.default_rng(13)
        g = mild_chain.spec.grid
        z = 0.05 * (rng.normal(size=2) + 1j * rng.normal(size=2))
        w1 = rng.normal(size=2) + 1j * rng.normal(size=2)
        w2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        eps = 1e-4
        fd = (
            d_phi(mild_chain.ps, z + eps * w2, w1)
            - d_phi(mild_chain.ps, z - eps * w2, w1)
        ) / (2 * eps)
        exact = d2_phi(mild_chain.ps, z, w1, w2)
        assert g.norm(exact - fd) <= 1e-6 * max(g.norm(fd), 1e-30)
        sym = d2_phi(mild_chain.ps, z, w2, w1)
        assert g.norm(exact - sym) <= 1e-13


class TestFrequency:
    def test_zero_amplitude_returns_base(self, mild_chain):
        out = frequency(mild_chain.ps, np.zeros(2))
        assert np.array_equal(out, mild_chain.spec.omegas)

    def test_linear_model_unshifted(self, mild_chain):
        ps0 = build_profile_set(
            mild_chain.spec, mild_chain.sets, NonlinearityModel.zero()
        )
        out = frequency(ps0, np.array([0.01, 0.02]))
        assert np.array_equal(out, mild_chain.spec.omegas)

    def test_single_mode_shift_against_continuation(self, mild_chain):
        """Independent oracle: nonlinear bound-state continuation."""
        spec, nl, ps = mild_chain.spec, mild_chain.nl, mild_chain.ps
        g = spec.grid
        rho = 0.02
        psi = rho * spec.phis[0]
        mu = float(spec.omegas[0])
        for _ in range(40):
            F = np.real(spec.op.apply(psi)) + nl.g(psi**2) * psi
            mu = g.rinner(F, spec.phis[0]) / rho
            r = F - mu * psi
            if g.norm(r) <= 1e-13:
                break
            r_perp = r - g.rinner(r, spec.phis[0]) * spec.phis[0]
            delta = -np.real(resolvent_solve(spec, mu, r_perp))
            delta -= g.rinner(delta, spec.phis[0]) * spec.phis[0]
            psi = psi + delta
        shift_continuation = mu - float(spec.omegas[0])
        shift_profile = float(ps.varpi1[0, 0]) * rho**2
        assert shift_continuation == pytest.approx(shift_profile, rel=2e-2)


class TestForcedResidual:
    def test_zero_amplitude_zero_residual(self, mild_chain):
        res, rep = forced_residual(mild_chain.ps, np.zeros(2, dtype=complex))
        assert rep.residual_l2 == 0.0

    def test_axis_scaling_slope(self, mild_chain):
        rhos = np.geomspace(1e-3, 1e-1, 9)
        for j in range(2):
            vals = []
            for r in rhos:
                z = np.zeros(2, dtype=complex)
                z[j] = r
                vals.append(forced_residual(mild_chain.ps, z)[1].residual_l2)
            slope = np.polyfit(np.log(rhos), np.log(vals), 1)[0]
            assert slope >= 4.5

    def test_diagonal_ratio_bounded(self, mild_chain):
        ratios = []
        for r in (1e-2, 3e-2, 1e-1):
            z = np.full(2, r, dtype=complex)
            _, rep = forced_residual(mild_chain.ps, z)
            ratios.append(rep.ratio)
        assert max(ratios) <= 1.0  # measured headroom against the bound shape

    def test_gauge_equivariance_of_norm(self, mild_chain):
        rng = np.random.default_rng(14)
        z = 0.04 * (rng.normal(size=2) + 1j * rng.normal(size=2))
        _, rep0 = forced_residual(mild_chain.ps, z)
        _, rep1 = forced_residual(mild_chain.ps, np.exp(0.77j) * z)
        assert rep1.residual_l2 == pytest.approx(rep0.residual_l2, rel=1e-10)


class TestLinearizedOperator:
    def test_symmetry(self, mild_chain):
        g = mild_chain.spec.grid
        rng = np.random.default_rng(15)
        z = 0.05 * (rng.normal(size=2) + 1j * rng.normal(size=2))
        u = rng.normal(size=g.n_points) + 1j * rng.normal(size=g.n_points)
        v = rng.normal(size=g.n_points) + 1j * rng.normal(size=g.n_points)
        hu = linearized_operator_apply(mild_chain.ps, z, u)
        hv = linearized_operator_apply(mild_chain.ps, z, v)
        gap = abs(g.rinner(hu, v) - g.rinner(u, hv))
        assert gap <= 1e-9 * g.norm(u) * g.norm(v)

    def test_differentiated_identity(self, mild_chain):
        rng = np.random.default_rng(16)
        for _ in range(3):
            z = 0.04 * (rng.normal(size=2) + 1j * rng.normal(size=2))
            w = rng.normal(size=2) + 1j * rng.normal(size=2)
            assert derivative_identity_gap(mild_chain.ps, z, w) <= 1e-5
