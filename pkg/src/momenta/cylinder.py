"""Cylinder-valued momentum maps and reduced-space cover data.

The holonomy subgroup H of dual-space momentum shifts has a closed closure
H-bar = V + Z-span(Lambda); the cylinder is the quotient of the dual space by
H-bar.  Points are stored by canonical representative: the V component is
removed, lattice coordinates are reduced to [0,1) in the Lambda basis, and the
complement coordinates pass through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .errors import CapabilityError, InputError, MomentaError, NumericalError
from .exact import solve_linear
from .groups import GroupPath
from .lattices import (
    AbelianInvariants,
    ClosedSubgroupDecomp,
    LatticeSubgroup,
    quotient_invariants,
    subgroup_is_hamiltonian,
)
from .momentum import PhasePath, momentum_of_path, sigma_J, theta_integral
from .symplectic import MagneticCotangent

__all__ = [
    "Cylinder",
    "CylinderPoint",
    "cylinder_project",
    "K",
    "affine_action",
    "sigma_K",
    "affine_cylinder_action",
    "gamma_mu",
    "deck_group_of_reduced_cover",
    "OrbitDescriptor",
    "orbit_descriptor",
    "heisenberg_casimir",
    "noether_check",
    "reduction_fiber_check",
]


class Cylinder:
    """Quotient of the dual space by a closed subgroup V + Z-span(Lambda)."""

    def __init__(self, decomp: ClosedSubgroupDecomp):
        self.decomp = decomp
        n = decomp.ambient_dim
        self.n = n
        V = np.array([[float(x) for x in v] for v in decomp.subspace_basis], dtype=float)
        L = np.array([[float(x) for x in v] for v in decomp.lattice_basis], dtype=float)
        self.V = V.reshape(len(decomp.subspace_basis), n)
        self.L = L.reshape(len(decomp.lattice_basis), n)
        VL = np.vstack([self.V, self.L])
        if VL.size:
            W = null_space(VL).T
        else:
            W = np.eye(n)
        self.W = W.reshape(-1, n)
        basis = np.vstack([self.V, self.L, self.W])
        if basis.shape != (n, n):
            raise InputError("subspace, lattice, and complement do not fill the dual space")
        self._to_coords = np.linalg.inv(basis.T)
        self._nv, self._nl = self.V.shape[0], self.L.shape[0]

    def coords(self, mu) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(subspace, lattice, complement) coordinates of a dual vector."""
        c = self._to_coords @ np.asarray(mu, dtype=float)
        return c[: self._nv], c[self._nv : self._nv + self._nl], c[self._nv + self._nl :]

    def _assemble(self, b, c) -> np.ndarray:
        out = np.zeros(self.n)
        if self._nl:
            out += b @ self.L
        if self.W.shape[0]:
            out += c @ self.W
        return out

    def project(self, mu) -> "CylinderPoint":
        _, b, c = self.coords(mu)
        return CylinderPoint(self, self._assemble(np.mod(b, 1.0), c))

    def zero(self) -> "CylinderPoint":
        return CylinderPoint(self, np.zeros(self.n))

    def distance(self, p: "CylinderPoint", q: "CylinderPoint") -> float:
        a, b, c = self.coords(p.representative - q.representative)
        b = np.mod(b + 0.5, 1.0) - 0.5
        resid = self._assemble(b, c)
        if self._nv:
            resid = resid + a @ self.V  # should be ~0 for canonical reps
        return float(np.linalg.norm(resid))


@dataclass(frozen=True)
class CylinderPoint:
    """Canonical representative of a dual vector modulo the closed subgroup."""

    cylinder: Cylinder
    representative: np.ndarray

    def close_to(self, other: "CylinderPoint", tol: float = 1e-9) -> bool:
        return self.cylinder.distance(self, other) <= tol

    def translate(self, mu) -> "CylinderPoint":
        return self.cylinder.project(self.representative + np.asarray(mu, dtype=float))


def cylinder_project(mu, decomp_or_cylinder) -> CylinderPoint:
    cyl = (
        decomp_or_cylinder
        if isinstance(decomp_or_cylinder, Cylinder)
        else Cylinder(decomp_or_cylinder)
    )
    return cyl.project(mu)


def K(model: MagneticCotangent, cylinder: Cylinder, x: PhasePath) -> CylinderPoint:
    """Cylinder-valued momentum of the endpoint of x: project o J; the deck
    ambiguity of the path shifts J inside H and cancels in the quotient."""
    return cylinder.project(momentum_of_path(model, x))


def affine_action(model: MagneticCotangent, g_path: GroupPath, mu) -> np.ndarray:
    """Dual-space affine action Ad*_{g^{-1}} mu + sigma_J(g-path)."""
    mu = np.asarray(mu, dtype=float)
    coad = g_path.model.coadjoint_inv(g_path.endpoint())
    return coad @ mu + sigma_J(model, g_path)


def _check_lift(model: MagneticCotangent, g, lift_path: GroupPath):
    proj = model.group.normalize(lift_path.endpoint())
    if not model.group.equal(proj, model.group.normalize(np.asarray(g, dtype=float))):
        raise InputError("lift path does not end over the given group element")


def sigma_K(model: MagneticCotangent, cylinder: Cylinder, g, lift_path: GroupPath) -> CylinderPoint:
    """Projected non-equivariance cocycle; lift-independent because two lifts
    differ by a fundamental-group loop whose sigma_J value lies in H."""
    _check_lift(model, g, lift_path)
    return cylinder.project(sigma_J(model, lift_path))


def _canonical_lift(model: MagneticCotangent, g) -> GroupPath:
    g = np.asarray(g, dtype=float)
    cover = model.cover
    return GroupPath.straight(cover, cover.log(g))


def affine_cylinder_action(
    model: MagneticCotangent,
    cylinder: Cylinder,
    g,
    point: CylinderPoint,
    lift_path: GroupPath | None = None,
) -> CylinderPoint:
    """Cylinder affine action: coadjoint part descends because H-bar is
    pointwise fixed, and the cocycle part is sigma_K."""
    if lift_path is None:
        lift_path = _canonical_lift(model, g)
    _check_lift(model, g, lift_path)
    coad = lift_path.model.coadjoint_inv(lift_path.endpoint())
    moved = coad @ point.representative + sigma_J(model, lift_path)
    return cylinder.project(moved)


# -- scenario-level reduction data ------------------------------------------


def gamma_mu(scenario, mu) -> LatticeSubgroup:
    """Subgroup of fundamental-group loops whose momentum shift stays in the
    affine-orbit direction space; closed form per supported family."""
    if scenario.kind == "torus":
        cols = scenario.theta.columns()
        basis_rows = [list(col) for col in cols]
        # honest membership: express each theta-column in the column span
        system = [list(row) for row in zip(*basis_rows)] if basis_rows else []
        for a, col in enumerate(cols):
            if solve_linear([row[:] for row in system], list(col)) is None:
                raise MomentaError(f"theta column {a} escaped its own span")
        return LatticeSubgroup.standard(scenario.gamma_dim)
    if scenario.kind == "central_extension":
        return LatticeSubgroup.standard(1)
    raise CapabilityError(f"gamma_mu has no closed form for scenario kind {scenario.kind!r}")


def deck_group_of_reduced_cover(scenario, mu, gamma_n: LatticeSubgroup) -> AbelianInvariants:
    """Deck group of the induced cover of the reduced space at mu:
    quotient of gamma_mu by the sum of gamma_n and gamma-prime."""
    if not subgroup_is_hamiltonian(gamma_n, scenario.gamma0):
        raise InputError("not a Hamiltonian cover: gamma_n is not contained in gamma_0")
    g_mu = gamma_mu(scenario, mu)
    merged = gamma_n.sum(scenario.gamma_prime())
    return quotient_invariants(g_mu, merged)


@dataclass(frozen=True)
class OrbitDescriptor:
    """Analytic description of an affine-action orbit in the dual space."""

    kind: str  # "affineSubspace" | "casimirLevelSet"
    basepoint: np.ndarray
    basis: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    casimir_value: float | None = None
    validated_samples: int = 0

    def summary(self) -> str:
        if self.kind == "affineSubspace":
            point = ",".join(f"{x:.6g}" for x in self.basepoint)
            return f"affineSubspace dim={self.basis.shape[0]} through ({point})"
        return f"casimirLevelSet f={self.casimir_value:.12g}"

    def contains(self, mu, tol: float = 1e-8) -> bool:
        mu = np.asarray(mu, dtype=float)
        if self.kind == "affineSubspace":
            diff = mu - self.basepoint
            if self.basis.size:
                coeffs, *_ = np.linalg.lstsq(self.basis.T, diff, rcond=None)
                diff = diff - self.basis.T @ coeffs
            return float(np.linalg.norm(diff)) <= tol
        sigma = self.basepoint  # stored sigma covector for the level set
        return abs(heisenberg_casimir(sigma, mu[0], mu[1:]) - self.casimir_value) <= tol


def orbit_descriptor(scenario, mu, rng=None, samples: int = 200) -> OrbitDescriptor:
    """Orbit of mu under the dual-space affine action, with sampled
    validation of the analytic description."""
    mu = np.asarray(mu, dtype=float)
    rng = np.random.default_rng(0) if rng is None else rng
    if scenario.kind not in ("torus", "central_extension"):
        raise CapabilityError(f"no orbit description for scenario kind {scenario.kind!r}")
    model = scenario.model
    if scenario.kind == "torus":
        rows = _exact_row_basis(scenario)
        basis = np.array([[float(x) for x in row] for row in rows], dtype=float)
        basis = basis.reshape(len(rows), model.n)
        desc = OrbitDescriptor("affineSubspace", mu.copy(), basis, validated_samples=samples)
    elif scenario.kind == "central_extension":
        sigma = np.array([float(s) for s in scenario.theta.sigma])
        value = heisenberg_casimir(sigma, mu[0], mu[1:])
        desc = OrbitDescriptor(
            "casimirLevelSet", sigma, casimir_value=value, validated_samples=samples
        )

    for _ in range(samples):
        path = GroupPath.straight(model.cover, rng.uniform(-2.0, 2.0, model.n))
        moved = affine_action(model, path, mu)
        if not desc.contains(moved, 1e-8):
            raise MomentaError("sampled orbit point escaped its analytic description")
    return desc


def _exact_row_basis(scenario):
    """Exact basis of the real span of the theta columns (torus orbits are
    affine translates of that span)."""
    from .exact import rref

    cols = [list(col) for col in scenario.theta.columns()]
    reduced, pivots = rref(cols)
    return [reduced[i] for i in range(len(pivots))]


def heisenberg_casimir(sigma, psi: float, nu) -> float:
    """Casimir f(psi, nu) = psi^2/2 - <w, nu> with w the vector satisfying
    i_w omega = sigma, i.e. w = (sigma_2, -sigma_1); constancy along affine
    orbits pins this convention (the opposite sign fails it)."""
    s = np.array([float(x) for x in sigma])
    nu = np.asarray(nu, dtype=float)
    w = np.array([s[1], -s[0]])
    return float(0.5 * psi * psi - w @ nu)


def _kinetic_field(model: MagneticCotangent, g_chart, mu) -> tuple[np.ndarray, np.ndarray]:
    """Hamiltonian vector field of h = |mu|^2 / 2: solve omega(X, .) = dh."""
    from .symplectic import PhasePoint

    n = model.n
    z = PhasePoint(np.asarray(g_chart, dtype=float), np.asarray(mu, dtype=float))
    M = model.omega_matrix(z)
    dh = np.concatenate([np.zeros(n), z.mu])
    X = np.linalg.solve(M.T, dh)
    return X[:n], X[n:]


def _chart_velocity(model, g, body_xi) -> np.ndarray:
    """Chart derivative of a curve through g with body velocity body_xi."""
    v = np.asarray(body_xi, dtype=float).copy()
    if model.kind in ("heisenberg", "central_extension"):
        # invert the chart-to-body map (1, w2/2, -w1/2; 0,1,0; 0,0,1)
        v[0] = v[0] - 0.5 * g[2] * v[1] + 0.5 * g[1] * v[2]
    return v


def noether_check(
    model: MagneticCotangent,
    cylinder: Cylinder,
    x: PhasePath,
    T: float,
    step: float = 1e-3,
) -> float:
    """Max drift of K along the kinetic-Hamiltonian flow started at the
    endpoint of x, checked at time checkpoints spaced 0.1 apart."""
    if T < 0:
        raise InputError("flow time must be nonnegative")
    reference = K(model, cylinder, x)
    if T == 0:
        return 0.0
    cover = model.cover
    z = x.endpoint()

    def integrate(h: float):
        steps = max(1, int(np.ceil(T / h)))
        h = T / steps
        ys = np.empty((steps + 1, 2 * model.n))
        ys[0] = np.concatenate([z.g, z.mu])

        def rhs(y):
            xi, nu = _kinetic_field(model, y[: model.n], y[model.n :])
            return np.concatenate([_chart_velocity(cover, y[: model.n], xi), nu])

        for i in range(steps):
            y = ys[i]
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h * k2)
            k4 = rhs(y + h * k3)
            ys[i + 1] = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return ys

    ys = integrate(step)
    check = integrate(2.0 * step)
    if float(np.max(np.abs(check[-1] - ys[-1]))) > 1e-8:
        raise NumericalError("kinetic flow integration failed its step-halving check")

    steps = len(ys) - 1
    times = np.linspace(0.0, T, steps + 1)
    drift = 0.0
    for t_check in np.arange(0.1, T + 1e-12, 0.1):
        upto = int(round(t_check / T * steps))
        if upto < 1:
            continue
        ts = times[: upto + 1] / times[upto]
        flow_base = GroupPath.from_samples(cover, ts, ys[: upto + 1, : model.n])
        flow = PhasePath(flow_base, ys[: upto + 1, model.n :])
        extended = x.concat(flow)
        drift = max(drift, cylinder.distance(K(model, cylinder, extended), reference))
    return drift


def reduction_fiber_check(scenario, mu, samples: int = 5, rng=None) -> dict:
    """Sample-level verification that deck loops move momentum-mu paths
    exactly through the coset mu + H and fix the projected phase point."""
    rng = np.random.default_rng(0) if rng is None else rng
    mu = np.asarray(mu, dtype=float)
    model = scenario.model
    cover = model.cover
    worst_shift = 0.0
    checked = 0
    for _ in range(samples):
        durs = rng.uniform(0.3, 1.0, 2)
        durs /= durs.sum()
        base = GroupPath(
            cover, [(rng.uniform(-1.5, 1.5, model.n), w) for w in durs]
        )
        g = base.endpoint()
        theta_val = theta_integral(cover, model.theta, base)
        mu_end = cover.adjoint(g).T @ (mu - theta_val)
        x = PhasePath.with_linear_momentum(base, mu_end)
        achieved = momentum_of_path(model, x)
        if np.linalg.norm(achieved - mu) > 1e-8:
            raise NumericalError("failed to construct a path with the requested momentum")

        k = scenario.random_loop_coefficients(rng)
        gamma = PhasePath.with_linear_momentum(scenario.loop_path(k), np.zeros(model.n))
        combined = gamma.concat(x)
        shifted = momentum_of_path(model, combined)
        h_exact = scenario.holonomy_of(k)
        h_float = np.array([float(v) for v in h_exact])
        worst_shift = max(worst_shift, float(np.linalg.norm(shifted - mu - h_float)))
        if not scenario.decomp.contains_exact(list(h_exact)):
            return {"name": "reduction_fiber", "passed": False, "detail": "holonomy escaped H"}
        same_base = model.group.equal(
            model.group.normalize(combined.base.endpoint()),
            model.group.normalize(x.base.endpoint()),
        )
        same_fiber = np.linalg.norm(combined.momenta[-1] - x.momenta[-1]) <= 1e-9
        if not (same_base and same_fiber):
            return {"name": "reduction_fiber", "passed": False, "detail": "deck loop moved the projected point"}
        checked += 1
    return {
        "name": "reduction_fiber",
        "passed": worst_shift <= 1e-8,
        "samples": checked,
        "max_shift_error": worst_shift,
    }
