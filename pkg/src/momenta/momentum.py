"""Momentum maps on the universal cover of a magnetic cotangent bundle.

The momentum value of a homotopy class is the line integral of the contraction
of the symplectic form with the infinitesimal generators along any
representing path from the base point z0 = (e, 0).  This module provides that
quadrature, the group cocycle integral Theta with its Heisenberg closed form,
the closed-form momentum map, an independent transport oracle, the
non-equivariance cocycle, and a finite-difference validator for the momentum
condition.

Sign discipline: the quadrature integrands here are derived once with the
canonical-part sign fixed to +1, while the transport oracle and the
finite-difference validator evaluate the symplectic form through the
symplectic module.  Mutating that module's sign therefore breaks their
agreement instead of cancelling silently.
"""

from __future__ import annotations

import numpy as np

from . import symplectic as _sym
from .errors import InputError, NumericalError
from .groups import GroupModel, GroupPath, concat_paths, path_product
from .numerics import adaptive_path_quadrature
from .symplectic import CocycleTheta, MagneticCotangent, PhasePoint

__all__ = [
    "PhasePath",
    "theta_integral",
    "theta_closed_form_heisenberg",
    "momentum_of_path",
    "momentum_closed_form",
    "horizontal_transport",
    "sigma_J",
    "lifted_action_on_path",
    "verify_momentum_condition",
]


class PhasePath:
    """Path in T*G: a group path plus a piecewise-linear momentum curve
    sampled at the group path's breakpoints."""

    __slots__ = ("base", "momenta", "slopes")

    def __init__(self, base: GroupPath, momenta):
        momenta = np.asarray(momenta, dtype=float)
        expected = (len(base.times), base.model.dim)
        if momenta.shape != expected:
            raise InputError(f"momentum samples must have shape {expected}, got {momenta.shape}")
        self.base = base
        self.momenta = momenta
        self.slopes = np.diff(momenta, axis=0) / base.durations[:, None]

    @classmethod
    def with_linear_momentum(cls, base: GroupPath, mu_end, mu_start=None) -> "PhasePath":
        n = base.model.dim
        mu0 = np.zeros(n) if mu_start is None else np.asarray(mu_start, dtype=float)
        mu1 = np.asarray(mu_end, dtype=float)
        return cls(base, mu0 + base.times[:, None] * (mu1 - mu0))

    @classmethod
    def to_point(cls, model: MagneticCotangent, g, mu) -> "PhasePath":
        """Standard representative from z0 to (g, mu): one exponential segment
        with linearly growing momentum."""
        cover = model.cover
        base = GroupPath.straight(cover, cover.log(np.asarray(g, dtype=float)))
        return cls.with_linear_momentum(base, mu)

    def momentum_many(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        ks = np.searchsorted(self.base.times, np.clip(ts, 0.0, 1.0), side="right") - 1
        ks = np.clip(ks, 0, len(self.base.durations) - 1)
        s = (ts - self.base.times[ks])[:, None]
        return self.momenta[ks] + s * self.slopes[ks]

    def momentum_at(self, t: float) -> np.ndarray:
        return self.momentum_many(np.array([t]))[0]

    def endpoint(self) -> PhasePoint:
        return PhasePoint(self.base.endpoint(), self.momenta[-1].copy())

    def concat(self, other: "PhasePath", split: float = 0.5) -> "PhasePath":
        base = concat_paths(self.base, other.base, split)
        momenta = np.vstack([self.momenta, other.momenta[1:]])
        return PhasePath(base, momenta)


def _require_identity_based(p: GroupPath):
    if not p.model.equal(p.base, p.model.identity(), 1e-12):
        raise InputError("path must be based at the identity")


def theta_integral(model: GroupModel, theta: CocycleTheta, p: GroupPath) -> np.ndarray:
    """Theta(p) = integral of Ad*_{g(t)^{-1}} theta(left velocity) dt."""
    if theta.dim != model.dim or p.model.dim != model.dim:
        raise InputError("theta, model, and path dimensions must agree")
    _require_identity_based(p)
    th = theta.float_matrix()

    def integrand(ts):
        ks = np.clip(
            np.searchsorted(p.times, np.clip(ts, 0.0, 1.0), side="right") - 1,
            0,
            len(p.durations) - 1,
        )
        covs = p.directions[ks] @ th.T
        return p.model.coadjoint_inv_apply(p.evaluate_many(ts), covs)

    return adaptive_path_quadrature(integrand, p.times)


def theta_closed_form_heisenberg(model: GroupModel, sigma, endpoint) -> np.ndarray:
    """Theta at (alpha, u): (sigma(u); -alpha sigma - sigma(u)/2 * i_u w),
    with the row-covector convention i_u w = (-u2, u1)."""
    if model.kind not in ("heisenberg", "central_extension"):
        raise InputError(f"closed form is specific to the Heisenberg family, not {model.kind}")
    s = np.array([float(x) for x in sigma])
    alpha, u = float(endpoint[0]), np.asarray(endpoint[1:], dtype=float)
    su = float(s @ u)
    iota = np.array([-u[1], u[0]])
    return np.concatenate([[su], -alpha * s - 0.5 * su * iota])


def _phase_kinematics(x: PhasePath, ts):
    """Velocity data (g, mu, xi-dot, nu-dot) at arbitrary parameters."""
    ks = np.clip(
        np.searchsorted(x.base.times, np.clip(ts, 0.0, 1.0), side="right") - 1,
        0,
        len(x.base.durations) - 1,
    )
    return x.base.evaluate_many(ts), x.momentum_many(ts), x.base.directions[ks], x.slopes[ks]


def _derived_integrand(model: MagneticCotangent, x: PhasePath):
    """Momentum-map integrand with the canonical sign frozen at +1:
    Ad*_{g^{-1}} (nu-dot + (C(mu) - Sigma) xi-dot)."""
    struct, sig = model._structure, model.sigma_matrix

    def integrand(ts):
        gs, mus, xid, nud = _phase_kinematics(x, ts)
        covs = nud + np.einsum("abk,tk,tb->ta", struct, mus, xid) - xid @ sig.T
        return x.base.model.coadjoint_inv_apply(gs, covs)

    return integrand


def _check_phase_path(model: MagneticCotangent, x: PhasePath, at_base: bool):
    if x.base.model != model.cover:
        raise InputError("phase paths must live on the universal-cover model")
    if at_base:
        _require_identity_based(x.base)
        if np.linalg.norm(x.momenta[0]) > 1e-12:
            raise InputError("path must start at the base point (e, 0)")


def momentum_of_path(model: MagneticCotangent, x: PhasePath) -> np.ndarray:
    """J of the homotopy class represented by x, normalized so the trivial
    class maps to 0; adaptive quadrature of the generator contraction."""
    _check_phase_path(model, x, at_base=True)
    return adaptive_path_quadrature(_derived_integrand(model, x), x.base.times)


def momentum_closed_form(model: MagneticCotangent, g_path: GroupPath, mu) -> np.ndarray:
    """Ad*_{g^{-1}} mu + Theta(g_path) for g the endpoint of g_path."""
    _require_identity_based(g_path)
    mu = np.asarray(mu, dtype=float)
    g = g_path.endpoint()
    return g_path.model.coadjoint_inv(g) @ mu + theta_integral(g_path.model, model.theta, g_path)


def horizontal_transport(model: MagneticCotangent, x: PhasePath) -> np.ndarray:
    """Transport oracle: integrate the horizontality condition
    <mu-dot, e_i> = omega(e_i-generator, x-dot) from (z0, 0) with a classical
    4th-order step <= 1/1024 per segment, Richardson-checked at half the step.

    The right-hand side does not involve the transported variable, so the RK4
    update collapses exactly to a composite Simpson rule per step; directions
    and momentum slopes are pinned to their segment so kinks never leak into a
    step's endpoint evaluation.  The form enters through the symplectic
    module's current sign, keeping this oracle independent of the derived
    quadrature integrand.
    """
    _check_phase_path(model, x, at_base=True)
    struct, sig = model._structure, model.sigma_matrix
    cover = x.base.model

    def sweep(scale: int) -> np.ndarray:
        s = _sym._CANON_SIGN
        total = np.zeros(model.n)
        for k, (t0, w) in enumerate(zip(x.base.times[:-1], x.base.durations)):
            steps = max(1, int(np.ceil(w * 1024 * scale)))
            h = w / steps
            ts = t0 + 0.5 * h * np.arange(2 * steps + 1)
            gs = x.base.evaluate_many(np.clip(ts, 0.0, 1.0))
            mus = x.momentum_many(ts)
            xid, nud = x.base.directions[k], x.slopes[k]
            covs = s * (np.einsum("abk,tk,b->ta", struct, mus, xid) + nud) - sig @ xid
            vals = cover.coadjoint_inv_apply(gs, covs)
            total += (h / 6.0) * (
                vals[0:-1:2].sum(axis=0) + 4.0 * vals[1::2].sum(axis=0) + vals[2::2].sum(axis=0)
            )
        return total

    coarse, fine = sweep(1), sweep(2)
    gap = float(np.max(np.abs(fine - coarse)))
    if gap > 1e-7:
        raise NumericalError(f"transport Richardson check failed: step halving moved result by {gap:.3e}")
    return fine


def sigma_J(model: MagneticCotangent, g_path: GroupPath) -> np.ndarray:
    """Non-equivariance cocycle: quadrature of the base-point Chu form
    contracted with Ad_{g(t)^{-1}} basis directions and the path velocity."""
    if g_path.model != model.cover:
        raise InputError("cocycle paths must live on the universal-cover model")
    _require_identity_based(g_path)
    psi0 = model.chu_at_base()

    def integrand(ts):
        ks = np.clip(
            np.searchsorted(g_path.times, np.clip(ts, 0.0, 1.0), side="right") - 1,
            0,
            len(g_path.durations) - 1,
        )
        covs = g_path.directions[ks] @ psi0.T
        return g_path.model.coadjoint_inv_apply(g_path.evaluate_many(ts), covs)

    return adaptive_path_quadrature(integrand, g_path.times)


def lifted_action_on_path(g_path: GroupPath, x: PhasePath) -> PhasePath:
    """Pointwise action t -> g(t) x(t): product base path, body momentum curve
    carried over unchanged (resampled on the product's breakpoints)."""
    product = path_product(g_path, x.base)
    return PhasePath(product, x.momentum_many(product.times))


def _chart_to_body(model: GroupModel, g) -> np.ndarray:
    """Matrix taking chart-coordinate displacements at g to body-frame
    velocities; identity for abelian charts."""
    T = np.eye(model.dim)
    if model.kind in ("heisenberg", "central_extension"):
        T[0, 1] = 0.5 * g[2]
        T[0, 2] = -0.5 * g[1]
    return T


def verify_momentum_condition(model: MagneticCotangent, z: PhasePoint, xi, step: float = 1e-4) -> float:
    """Max relative error of the momentum condition at z: central finite
    differences of the momentum integral along the 2n chart directions against
    the symplectic pairing with the generator of xi.

    Displaced evaluations share the whole path up to z, so only the short
    tail from z contributes to each difference and trunk quadrature cancels
    identically.
    """
    cover = model.cover
    n = model.n
    xi = np.asarray(xi, dtype=float)
    g = np.asarray(z.g, dtype=float)
    mu = np.asarray(z.mu, dtype=float)

    def tail_integral(g_target, mu_target) -> np.ndarray:
        zeta = cover.log(cover.multiply(cover.inverse(g), g_target))
        base = GroupPath.straight(cover, zeta, base=g)
        tail = PhasePath.with_linear_momentum(base, mu_target, mu_start=mu)
        return adaptive_path_quadrature(_derived_integrand(model, tail), base.times)

    fd = np.empty(2 * n)
    rhs = np.empty(2 * n)
    gen = model.generator(xi, z)
    body = _chart_to_body(cover, g)
    for a in range(n):
        e = np.eye(n)[a]
        plus = tail_integral(g + step * e, mu)
        minus = tail_integral(g - step * e, mu)
        fd[a] = (plus - minus) @ xi / (2.0 * step)
        rhs[a] = model.omega(z, gen, model.tangent(body @ e, np.zeros(n)))

        plus = tail_integral(g, mu + step * e)
        minus = tail_integral(g, mu - step * e)
        fd[n + a] = (plus - minus) @ xi / (2.0 * step)
        rhs[n + a] = model.omega(z, gen, model.tangent(np.zeros(n), e))

    denom = max(float(np.linalg.norm(rhs)), 1e-8)
    return float(np.linalg.norm(fd - rhs)) / denom
