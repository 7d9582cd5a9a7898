from __future__ import annotations

import numpy as np
import pytest

from momenta.errors import InputError
from momenta.exact import QuadraticField
from momenta.groups import GroupModel, GroupPath, path_product
from momenta.momentum import (
    PhasePath,
    horizontal_transport,
    lifted_action_on_path,
    momentum_closed_form,
    momentum_of_path,
    sigma_J,
    theta_closed_form_heisenberg,
    theta_integral,
    verify_momentum_condition,
)
from momenta.symplectic import CocycleTheta, MagneticCotangent

RNG = np.random.default_rng(550123)
F2 = QuadraticField(2)

THETA_2D = [["0", "1"], ["-1", "0"]]


def torus_model(rows=THETA_2D, d=2):
    theta = CocycleTheta.zero(F2, d) if rows is None else CocycleTheta.from_matrix(F2, rows)
    return MagneticCotangent(GroupModel("torus", d), theta)


def heisenberg_model(sigma=("1", "0")):
    return MagneticCotangent(GroupModel("central_extension"), CocycleTheta.from_sigma(F2, sigma))


def random_cover_path(model, nseg=3, scale=1.5):
    cover = model.cover
    durs = RNG.uniform(0.2, 1.0, nseg)
    durs /= durs.sum()
    segs = [(RNG.uniform(-scale, scale, cover.dim), w) for w in durs]
    return GroupPath(cover, segs)


def random_phase_path(model, nseg=3):
    base = random_cover_path(model, nseg)
    momenta = RNG.uniform(-1.5, 1.5, (nseg + 1, model.n))
    momenta[0] = 0.0
    return PhasePath(base, momenta)


class TestThetaIntegral:
    def test_torus_single_segment_is_theta_xi(self):
        model = torus_model()
        cover = model.cover
        xi = np.array([0.7, -1.2])
        got = theta_integral(cover, model.theta, GroupPath.straight(cover, xi))
        assert np.allclose(got, model.theta.float_matrix() @ xi, atol=1e-12)

    def test_trivial_path_zero(self):
        model = heisenberg_model()
        got = theta_integral(model.cover, model.theta, GroupPath.trivial(model.cover))
        assert np.allclose(got, 0.0, atol=1e-14)

    def test_heisenberg_central_path(self):
        # central segment to (1,(0,0)): closed form gives (0; -sigma) = (0,-1,0)
        model = heisenberg_model(("1", "0"))
        path = GroupPath.straight(model.cover, [1.0, 0.0, 0.0])
        assert np.allclose(theta_integral(model.cover, model.theta, path), [0.0, -1.0, 0.0], atol=1e-12)

    def test_heisenberg_horizontal_segment(self):
        # endpoint (0,(1,0)), sigma=(1,0): sigma(u)=1, iota_u w = (-u2,u1)=(0,1),
        # so Theta = (1; 0 - (1/2)(0,1)) = (1, 0, -1/2)
        model = heisenberg_model(("1", "0"))
        path = GroupPath.straight(model.cover, [0.0, 1.0, 0.0])
        assert np.allclose(theta_integral(model.cover, model.theta, path), [1.0, 0.0, -0.5], atol=1e-12)

    def test_identity_base_required(self):
        model = heisenberg_model()
        path = GroupPath.straight(model.cover, [0.0, 1.0, 0.0], base=[1.0, 0.0, 0.0])
        with pytest.raises(InputError):
            theta_integral(model.cover, model.theta, path)


class TestThetaClosedForm:
    def test_frozen_examples(self):
        H = GroupModel("heisenberg")
        got = theta_closed_form_heisenberg(H, ("1", "0"), [0.0, 1.0, 0.0])
        assert np.allclose(got, [1.0, 0.0, -0.5], atol=1e-15)
        got = theta_closed_form_heisenberg(H, ("1", "0"), [1.0, 0.0, 0.0])
        assert np.allclose(got, [0.0, -1.0, 0.0], atol=1e-15)
        assert np.allclose(theta_closed_form_heisenberg(H, ("1", "0"), [0.0, 0.0, 0.0]), 0.0)

    def test_wrong_model_rejected(self):
        with pytest.raises(InputError):
            theta_closed_form_heisenberg(GroupModel("torus", 3), ("1", "0"), [0.0, 1.0, 0.0])

    def test_agrees_with_quadrature_on_random_paths(self):
        sigma = (0.5, -1.25)
        model = heisenberg_model(("1/2", "-5/4"))
        for _ in range(10):
            path = random_cover_path(model, nseg=4)
            via_integral = theta_integral(model.cover, model.theta, path)
            via_form = theta_closed_form_heisenberg(model.cover, sigma, path.endpoint())
            assert np.allclose(via_integral, via_form, atol=1e-10)


class TestMomentumOfPath:
    def test_trivial_path_zero(self):
        model = torus_model()
        x = PhasePath.with_linear_momentum(GroupPath.trivial(model.cover), np.zeros(2))
        assert np.allclose(momentum_of_path(model, x), 0.0, atol=1e-14)

    def test_fiber_only_path_gives_mu(self):
        # base pinned at e: only the <nu-dot, xi> term survives, J = mu
        model = torus_model()
        mu = np.array([0.8, -0.3])
        x = PhasePath.with_linear_momentum(GroupPath.trivial(model.cover), mu)
        assert np.allclose(momentum_of_path(model, x), mu, atol=1e-12)
        model_h = heisenberg_model()
        mu3 = np.array([0.4, 1.0, -2.0])
        xh = PhasePath.with_linear_momentum(GroupPath.trivial(model_h.cover), mu3)
        assert np.allclose(momentum_of_path(model_h, xh), mu3, atol=1e-12)

    def test_base_point_enforced(self):
        model = torus_model()
        off_base = GroupPath.straight(model.cover, [1.0, 0.0], base=[0.5, 0.0])
        with pytest.raises(InputError):
            momentum_of_path(model, PhasePath.with_linear_momentum(off_base, np.zeros(2)))
        bad_mu = PhasePath.with_linear_momentum(
            GroupPath.trivial(model.cover), np.ones(2), mu_start=np.ones(2)
        )
        with pytest.raises(InputError):
            momentum_of_path(model, bad_mu)

    def test_homotopy_invariance_same_endpoint(self):
        # the cover phase space is simply connected: J depends only on the
        # endpoint, so wildly different segmentations must agree
        for model in [torus_model(), heisenberg_model(("1", "1/2"))]:
            target_g = RNG.uniform(-1.0, 1.0, model.n)
            target_mu = RNG.uniform(-1.0, 1.0, model.n)
            cover = model.cover
            direct = PhasePath.with_linear_momentum(
                GroupPath.straight(cover, cover.log(target_g)), target_mu
            )
            detour_base = GroupPath.from_samples(
                cover,
                [0.0, 0.3, 0.55, 0.8, 1.0],
                np.vstack(
                    [
                        cover.identity(),
                        RNG.uniform(-2.0, 2.0, (3, model.n)),
                        target_g,
                    ]
                ),
            )
            mid = RNG.uniform(-2.0, 2.0, (3, model.n))
            detour = PhasePath(detour_base, np.vstack([np.zeros(model.n), mid, target_mu]))
            J1 = momentum_of_path(model, direct)
            J2 = momentum_of_path(model, detour)
            assert np.linalg.norm(J1 - J2) <= 1e-9

    def test_closed_form_agreement(self):
        for model in [torus_model(), heisenberg_model(), heisenberg_model(("1/2", "1*al"))]:
            for _ in range(8):
                base = random_cover_path(model, nseg=3)
                mu = RNG.uniform(-1.5, 1.5, model.n)
                x = PhasePath.with_linear_momentum(base, mu)
                lhs = momentum_of_path(model, x)
                rhs = momentum_closed_form(model, base, mu)
                assert np.linalg.norm(lhs - rhs) <= 1e-9

    def test_torus_closed_form_is_mu_plus_theta_u(self):
        model = torus_model()
        th = model.theta.float_matrix()
        for _ in range(5):
            u = RNG.uniform(-2.0, 2.0, 2)
            mu = RNG.uniform(-2.0, 2.0, 2)
            base = GroupPath.straight(model.cover, u)
            assert np.allclose(momentum_closed_form(model, base, mu), mu + th @ u, atol=1e-12)

    def test_heisenberg_closed_form_formula(self):
        # J((alpha,u),(psi;nu)) = (psi + sigma(u); nu - alpha sigma
        #                          - (psi + sigma(u)/2) iota_u w)
        sigma = np.array([1.0, 0.0])
        model = heisenberg_model(("1", "0"))
        for _ in range(8):
            g = RNG.uniform(-2.0, 2.0, 3)
            mu = RNG.uniform(-2.0, 2.0, 3)
            alpha, u = g[0], g[1:]
            psi, nu = mu[0], mu[1:]
            su = sigma @ u
            iota = np.array([-u[1], u[0]])
            expected = np.concatenate(
                [[psi + su], nu - alpha * sigma - (psi + 0.5 * su) * iota]
            )
            base = GroupPath.straight(model.cover, model.cover.log(g))
            assert np.allclose(momentum_closed_form(model, base, mu), expected, atol=1e-10)


class TestTransportOracle:
    def test_trivial_path_zero(self):
        model = heisenberg_model()
        x = PhasePath.with_linear_momentum(GroupPath.trivial(model.cover), np.zeros(3))
        assert np.allclose(horizontal_transport(model, x), 0.0, atol=1e-12)

    def test_torus_single_segment_reduces_to_theta(self):
        model = torus_model()
        xi = np.array([1.3, -0.4])
        x = PhasePath.with_linear_momentum(GroupPath.straight(model.cover, xi), np.zeros(2))
        got = horizontal_transport(model, x)
        assert np.allclose(got, model.theta.float_matrix() @ xi, atol=1e-9)

    def test_dual_oracle_agreement(self):
        for model in [torus_model(), torus_model(None), heisenberg_model(), heisenberg_model(("1/2", "1*al"))]:
            for _ in range(3):
                x = random_phase_path(model, nseg=3)
                a = momentum_of_path(model, x)
                b = horizontal_transport(model, x)
                assert np.linalg.norm(a - b) <= 1e-7


class TestAdditivityAndEquivariance:
    def test_additivity_torus_lattice_loops(self):
        model = torus_model()
        for k in [np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([2.0, -1.0])]:
            gamma = PhasePath.with_linear_momentum(
                GroupPath.straight(model.cover, k), np.zeros(2)
            )
            x = random_phase_path(model)
            combined = gamma.concat(x)
            lhs = momentum_of_path(model, combined)
            rhs = momentum_of_path(model, gamma) + momentum_of_path(model, x)
            assert np.linalg.norm(lhs - rhs) <= 1e-9

    def test_additivity_heisenberg_central_loops(self):
        model = heisenberg_model()
        gamma = PhasePath.with_linear_momentum(
            GroupPath.straight(model.cover, [1.0, 0.0, 0.0]), np.zeros(3)
        )
        for _ in range(5):
            x = random_phase_path(model)
            combined = gamma.concat(x)
            lhs = momentum_of_path(model, combined)
            rhs = momentum_of_path(model, gamma) + momentum_of_path(model, x)
            assert np.linalg.norm(lhs - rhs) <= 1e-9

    def test_lifted_action_trivial(self):
        model = heisenberg_model()
        x = random_phase_path(model)
        moved = lifted_action_on_path(GroupPath.trivial(model.cover), x)
        assert np.linalg.norm(
            momentum_of_path(model, moved) - momentum_of_path(model, x)
        ) <= 1e-9

    def test_equivariance(self):
        for model in [torus_model(), heisenberg_model(("1", "1/2"))]:
            for _ in range(5):
                g_path = random_cover_path(model)
                x = random_phase_path(model)
                moved = lifted_action_on_path(g_path, x)
                lhs = momentum_of_path(model, moved)
                coad = model.cover.coadjoint_inv(g_path.endpoint())
                rhs = coad @ momentum_of_path(model, x) + sigma_J(model, g_path)
                assert np.linalg.norm(lhs - rhs) <= 1e-9


class TestSigmaJ:
    def test_trivial_zero(self):
        model = heisenberg_model()
        assert np.allclose(sigma_J(model, GroupPath.trivial(model.cover)), 0.0, atol=1e-14)

    def test_equals_theta_in_cotangent_scenarios(self):
        for model in [torus_model(), heisenberg_model(), heisenberg_model(("1/2", "1*al"))]:
            for _ in range(5):
                p = random_cover_path(model)
                assert np.linalg.norm(
                    sigma_J(model, p) - theta_integral(model.cover, model.theta, p)
                ) <= 1e-9

    def test_zero_sigma_equivariant(self):
        model = heisenberg_model(("0", "0"))
        for _ in range(5):
            assert np.allclose(sigma_J(model, random_cover_path(model)), 0.0, atol=1e-12)

    def test_cocycle_identity_50_pairs(self):
        model = heisenberg_model(("1", "-1/2"))
        for _ in range(50):
            p = random_cover_path(model, nseg=2)
            q = random_cover_path(model, nseg=2)
            pq = path_product(p, q)
            lhs = sigma_J(model, pq)
            rhs = sigma_J(model, p) + model.cover.coadjoint_inv(p.endpoint()) @ sigma_J(model, q)
            assert np.linalg.norm(lhs - rhs) <= 1e-9

    def test_compact_chart_path_rejected(self):
        model = heisenberg_model()
        p = GroupPath.straight(model.group, [1.0, 0.0, 0.0])
        with pytest.raises(InputError):
            sigma_J(model, p)


class TestMomentumCondition:
    @pytest.mark.parametrize(
        "make",
        [lambda: torus_model(None), torus_model, heisenberg_model],
        ids=["torus-flat", "torus-magnetic", "heis"],
    )
    def test_relative_error_small(self, make):
        model = make()
        for _ in range(3):
            z = model.point(RNG.uniform(-1.0, 1.0, model.n), RNG.uniform(-1.0, 1.0, model.n))
            xi = RNG.uniform(-1.0, 1.0, model.n)
            assert verify_momentum_condition(model, z, xi) <= 1e-5
