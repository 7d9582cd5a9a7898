"""Scenario assembly: a validated config names a group family and a cocycle;
from those we build the group models, the magnetic phase space, the holonomy
subgroup of dual-space shifts with its closure, and the cylinder quotient.

Config values travel as exact-scalar strings so that lattice decisions stay
exact; only sampling data (mu values, tolerances) is floating point.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from .cylinder import Cylinder
from .errors import ConfigError, InputError
from .exact import QuadraticField
from .groups import GroupModel, GroupPath
from .lattices import (
    CoverDescriptor,
    GeneratedSubgroup,
    LatticeSubgroup,
    classify_cover,
    is_closed,
    kernel_lattice,
)
from .momentum import PhasePath
from .symplectic import CocycleTheta, MagneticCotangent

__all__ = [
    "GROUP_CHOICES",
    "VerifySettings",
    "ScenarioConfig",
    "parse_config",
    "Scenario",
    "build_scenario",
]

log = logging.getLogger("momenta.scenario")

# "heisenberg" and "centralExtension" are synonyms: the family is the
# three-dimensional nilpotent group with compact center, whose universal
# cover is the simply connected group of the same Lie algebra.
GROUP_CHOICES = ("torus", "heisenberg", "centralExtension")

_TOP_KEYS = {"group", "dim", "field", "theta", "sigma", "muList", "gammaN", "verify"}
_VERIFY_KEYS = {"tolerance", "sampleCount", "seed"}


@dataclass(frozen=True)
class VerifySettings:
    tolerance: float = 1e-8
    sample_count: int = 100
    seed: int = 42


@dataclass(frozen=True)
class ScenarioConfig:
    group: str
    dim: int
    field: QuadraticField
    theta: CocycleTheta
    mu_list: tuple
    gamma_n: tuple | None
    verify: VerifySettings

    def summary(self) -> dict:
        """Exact, JSON-ready echo of the scenario inputs."""
        out = {
            "group": self.group,
            "dim": self.dim,
            "field": str(self.field.r),
            "muList": [[float(x) for x in mu] for mu in self.mu_list],
        }
        if self.theta.sigma is not None:
            out["sigma"] = [s.format() for s in self.theta.sigma]
        else:
            out["theta"] = [[x.format() for x in row] for row in self.theta.matrix]
        if self.gamma_n is not None:
            out["gammaN"] = [list(col) for col in self.gamma_n]
        out["verify"] = {
            "tolerance": self.verify.tolerance,
            "sampleCount": self.verify.sample_count,
            "seed": self.verify.seed,
        }
        return out


def _config_int(value, field_name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(field_name, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(field_name, f"must be at least {minimum}")
    return value


def _parse_theta(field: QuadraticField, rows, dim: int) -> CocycleTheta:
    ok = isinstance(rows, list) and len(rows) == dim
    ok = ok and all(isinstance(r, list) and len(r) == dim for r in rows)
    if not ok:
        raise ConfigError("theta", f"expected a {dim}x{dim} matrix of exact scalars")
    parsed = []
    for i, row in enumerate(rows):
        out = []
        for j, entry in enumerate(row):
            try:
                out.append(field.coerce(entry))
            except (ValueError, TypeError) as err:
                raise ConfigError(f"theta[{i}][{j}]", str(err)) from err
        parsed.append(out)
    try:
        return CocycleTheta.from_matrix(field, parsed)
    except InputError as err:
        raise ConfigError("theta", "theta not antisymmetric") from err


def _parse_mu_list(raw, n: int) -> tuple:
    if raw is None:
        return (np.zeros(n),)
    if not (isinstance(raw, list) and raw):
        raise ConfigError("muList", "expected a nonempty list of dual vectors")
    out = []
    for i, entry in enumerate(raw):
        good = isinstance(entry, list) and len(entry) == n
        good = good and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
        if not good:
            raise ConfigError(f"muList[{i}]", f"expected {n} numbers")
        out.append(np.array(entry, dtype=float))
    return tuple(out)


def _parse_gamma_n(raw, gamma_dim: int):
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise ConfigError("gammaN", "expected a list of integer vectors")
    cols = []
    for i, col in enumerate(raw):
        good = isinstance(col, list) and len(col) == gamma_dim
        good = good and all(isinstance(x, int) and not isinstance(x, bool) for x in col)
        if not good:
            raise ConfigError(f"gammaN[{i}]", f"expected {gamma_dim} integers")
        cols.append(tuple(col))
    return tuple(cols)


def _parse_verify(raw) -> VerifySettings:
    if raw is None:
        return VerifySettings()
    if not isinstance(raw, dict):
        raise ConfigError("verify", "expected an object")
    unknown = set(raw) - _VERIFY_KEYS
    if unknown:
        raise ConfigError(f"verify.{sorted(unknown)[0]}", "unknown field")
    tol = raw.get("tolerance", 1e-8)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0:
        raise ConfigError("verify.tolerance", "must be a positive number")
    count = _config_int(raw.get("sampleCount", 100), "verify.sampleCount", 1)
    seed = _config_int(raw.get("seed", 42), "verify.seed", 0)
    return VerifySettings(tolerance=float(tol), sample_count=count, seed=seed)


def parse_config(text: str) -> ScenarioConfig:
    """Validate config JSON; raises ConfigError naming the offending field."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(
            "<json>", f"invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config field")

    group = raw.get("group")
    if group not in GROUP_CHOICES:
        raise ConfigError("group", f"must be one of: {', '.join(GROUP_CHOICES)}")
    try:
        field = QuadraticField(raw.get("field", 2))
    except (ValueError, TypeError) as err:
        raise ConfigError("field", str(err)) from err

    if group == "torus":
        if "sigma" in raw:
            raise ConfigError("sigma", "sigma applies only to the Heisenberg family")
        dim = _config_int(raw.get("dim"), "dim", 1)
        theta = _parse_theta(field, raw.get("theta"), dim)
    else:
        if "theta" in raw:
            raise ConfigError("theta", "theta is derived from sigma for the Heisenberg family")
        dim = raw.get("dim", 3)
        if dim != 3:
            raise ConfigError("dim", "the Heisenberg family is three-dimensional")
        sig = raw.get("sigma")
        if not (isinstance(sig, list) and len(sig) == 2):
            raise ConfigError("sigma", "expected a pair of exact scalars")
        vals = []
        for i, entry in enumerate(sig):
            try:
                vals.append(field.coerce(entry))
            except (ValueError, TypeError) as err:
                raise ConfigError(f"sigma[{i}]", str(err)) from err
        theta = CocycleTheta.from_sigma(field, vals)

    mu_list = _parse_mu_list(raw.get("muList"), dim)
    gamma_dim = dim if group == "torus" else 1
    gamma_n = _parse_gamma_n(raw.get("gammaN"), gamma_dim)
    verify = _parse_verify(raw.get("verify"))
    log.info("parsed %s scenario config (dim=%d)", group, dim)
    return ScenarioConfig(
        group=group,
        dim=dim,
        field=field,
        theta=theta,
        mu_list=mu_list,
        gamma_n=gamma_n,
        verify=verify,
    )


class Scenario:
    """Everything derived from a config: models, holonomy, cylinder, lattices."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.field = config.field
        self.theta = config.theta
        if config.group == "torus":
            self.kind = "torus"
            self.group = GroupModel("torus", config.dim)
            self.gamma_dim = config.dim
        else:
            self.kind = "central_extension"
            self.group = GroupModel("central_extension")
            self.gamma_dim = 1
        self.model = MagneticCotangent(self.group, self.theta)
        self.cover = self.model.cover
        self.n = self.model.n

        self.gamma = LatticeSubgroup.standard(self.gamma_dim)
        self.holonomy_generators = tuple(self.holonomy_of(k) for k in np.eye(self.gamma_dim, dtype=int))
        self.subgroup = GeneratedSubgroup(self.field, self.n, self.holonomy_generators)
        self.decomp = is_closed(self.subgroup)
        self.cylinder = Cylinder(self.decomp)
        self.gamma0 = self._gamma0()
        self.cover_descriptor = self._cover_descriptor()
        self.mu_list = config.mu_list
        self.gamma_n = (
            None if config.gamma_n is None else LatticeSubgroup(self.gamma_dim, config.gamma_n)
        )
        log.info(
            "built %s scenario: holonomy closed=%s, gamma0 rank=%d",
            self.kind,
            self.decomp.closed,
            self.gamma0.rank,
        )

    # -- exact structure ---------------------------------------------------

    def _gamma0(self) -> LatticeSubgroup:
        if self.kind == "torus":
            return kernel_lattice(self.theta.matrix, self.gamma_dim)
        if any(self.theta.sigma):
            return LatticeSubgroup.zero(1)
        return LatticeSubgroup.standard(1)

    def _cover_descriptor(self) -> CoverDescriptor:
        if self.kind == "torus":
            return classify_cover(self.gamma0, self.gamma_dim)
        # minimal Hamiltonian cover of the compact-center group: unwinding the
        # center when sigma != 0, the group itself when sigma = 0
        text = "S^1 x R^2" if self.gamma0.rank else "R^3"
        return CoverDescriptor(
            rank=self.gamma0.rank, dim=3, text=text, basis=self.gamma0.columns
        )

    def gamma_prime(self) -> LatticeSubgroup:
        """Stabilizer-image subgroup at the base point; all of gamma for T*G
        (the identity coset is fixed by every deck translation's stabilizer)."""
        return self.gamma

    def holonomy_of(self, k):
        """Exact momentum shift of the fundamental-group element k."""
        ks = [int(x) for x in np.atleast_1d(k)]
        if self.kind == "torus":
            cols = self.theta.columns()
            out = [self.field.zero] * self.n
            for a, c in enumerate(ks):
                if c:
                    f = self.field.coerce(c)
                    out = [x + f * y for x, y in zip(out, cols[a])]
            return tuple(out)
        s1, s2 = self.theta.sigma
        f = self.field.coerce(-ks[0])
        return (self.field.zero, f * s1, f * s2)

    def loop_path(self, k) -> GroupPath:
        """Cover path from the identity to the deck translate k: projects to a
        fundamental-group loop downstairs."""
        ks = np.atleast_1d(np.asarray(k, dtype=float))
        xi = ks if self.kind == "torus" else np.array([ks[0], 0.0, 0.0])
        return GroupPath.straight(self.cover, xi)

    # -- sampling helpers --------------------------------------------------

    def random_loop_coefficients(self, rng) -> np.ndarray:
        k = rng.integers(-3, 4, self.gamma_dim)
        if not np.any(k):
            k[0] = 1
        return k

    def random_cover_path(self, rng, segments: int = 2, scale: float = 1.5) -> GroupPath:
        durs = rng.uniform(0.5, 1.5, segments)
        durs /= durs.sum()
        return GroupPath(
            self.cover, [(rng.uniform(-scale, scale, self.n), w) for w in durs]
        )

    def random_phase_path(self, rng, segments: int = 2) -> PhasePath:
        base = self.random_cover_path(rng, segments)
        momenta = rng.uniform(-1.0, 1.0, (segments + 1, self.n))
        momenta[0] = 0.0
        return PhasePath(base, momenta)

    def random_mu(self, rng) -> np.ndarray:
        return rng.uniform(-1.5, 1.5, self.n)


def build_scenario(config: ScenarioConfig) -> Scenario:
    return Scenario(config)
