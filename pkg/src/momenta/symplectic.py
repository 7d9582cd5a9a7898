"""Magnetic cotangent bundles T*G in left trivialization.

The phase space is G x g* with the magnetic symplectic form: the canonical
form plus a left-invariant two-form built from a skew cocycle matrix theta
(its value at the identity is Sigma(xi, eta) = <theta xi, eta>).  All tangent
data is body-frame: a tangent vector is a pair (xi, nu) with xi the
left-trivialized base velocity and nu the momentum velocity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .exact import QuadraticField
from .groups import GroupModel

__all__ = [
    "CocycleTheta",
    "MagneticCotangent",
    "PhasePoint",
    "PhaseTangent",
]

# Sign of the canonical part of the form.  Fixed by requiring that the
# momentum map with theta = 0 satisfies the momentum condition with positive
# sign; the verification suite pins the value, and flipping it must make the
# momentum-condition check fail loudly.
_CANON_SIGN = 1.0


class CocycleTheta:
    """Skew matrix theta: g -> g* with exact entries, defining Sigma.

    For the Heisenberg family theta is generated by a covector sigma on R^2
    and assembled as [[0, sigma], [-sigma^T, 0]].
    """

    __slots__ = ("field", "matrix", "sigma", "_float")

    def __init__(self, field: QuadraticField, rows, sigma=None):
        self.field = field
        matrix = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        n = len(matrix)
        if any(len(row) != n for row in matrix):
            raise InputError("theta matrix must be square")
        for i in range(n):
            for j in range(n):
                if matrix[i][j] != -matrix[j][i]:
                    raise InputError(f"theta is not skew at ({i}, {j})")
        self.matrix = matrix
        self.sigma = None if sigma is None else tuple(field.coerce(x) for x in sigma)
        self._float = np.array([[float(x) for x in row] for row in matrix])

    @classmethod
    def from_matrix(cls, field: QuadraticField, rows) -> "CocycleTheta":
        return cls(field, rows)

    @classmethod
    def from_sigma(cls, field: QuadraticField, sigma) -> "CocycleTheta":
        s1, s2 = (field.coerce(x) for x in sigma)
        zero = field.zero
        rows = ((zero, s1, s2), (-s1, zero, zero), (-s2, zero, zero))
        return cls(field, rows, sigma=(s1, s2))

    @classmethod
    def zero(cls, field: QuadraticField, n: int) -> "CocycleTheta":
        return cls(field, [[field.zero] * n for _ in range(n)])

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def float_matrix(self) -> np.ndarray:
        return self._float.copy()

    def columns(self):
        """Columns theta(e_k) as exact vectors: the images of basis directions."""
        return [tuple(self.matrix[i][k] for i in range(self.dim)) for k in range(self.dim)]

    def is_cocycle_for(self, model: GroupModel) -> bool:
        """Exact cocycle identity <theta[a,b],c> + cyclic = 0 on basis triples."""
        if model.dim != self.dim:
            raise InputError("theta dimension does not match the group")
        c = model.structure_constants()
        n = self.dim
        for a in range(n):
            for b in range(n):
                for d in range(n):
                    total = self.field.zero
                    for (x, y, z) in ((a, b, d), (b, d, a), (d, a, b)):
                        for k in range(n):
                            total = total + self.matrix[z][k] * c[x][y][k]
                    if total != self.field.zero:
                        return False
        return True


@dataclass(frozen=True)
class PhasePoint:
    """Point (g, mu) of T*G in left trivialization."""

    g: np.ndarray
    mu: np.ndarray


@dataclass(frozen=True)
class PhaseTangent:
    """Body-frame tangent (xi, nu) at a phase point."""

    xi: np.ndarray
    nu: np.ndarray


class MagneticCotangent:
    """T*G with the magnetic symplectic form determined by theta."""

    def __init__(self, group: GroupModel, theta: CocycleTheta):
        if theta.dim != group.dim:
            raise InputError("theta dimension does not match the group")
        if not theta.is_cocycle_for(group):
            raise InputError("theta violates the cocycle identity for this group")
        self.group = group
        self.cover = group.cover()
        self.theta = theta
        self.n = group.dim
        # Sigma(xi, eta) = <theta xi, eta> = xi^T theta^T eta
        self.sigma_matrix = theta.float_matrix().T
        c = group.structure_constants()
        self._structure = np.array(
            [[[float(c[a][b][k]) for k in range(self.n)] for b in range(self.n)] for a in range(self.n)]
        )

    # -- small validators --------------------------------------------------

    def point(self, g, mu) -> PhasePoint:
        g = np.asarray(g, dtype=float)
        mu = np.asarray(mu, dtype=float)
        if g.shape != (self.n,) or mu.shape != (self.n,):
            raise InputError(f"phase point components must have shape ({self.n},)")
        return PhasePoint(g, mu)

    def tangent(self, xi, nu) -> PhaseTangent:
        xi = np.asarray(xi, dtype=float)
        nu = np.asarray(nu, dtype=float)
        if xi.shape != (self.n,) or nu.shape != (self.n,):
            raise InputError(f"phase tangent components must have shape ({self.n},)")
        return PhaseTangent(xi, nu)

    def base_point(self) -> PhasePoint:
        return PhasePoint(self.group.identity(), np.zeros(self.n))

    # -- the form ----------------------------------------------------------

    def bracket_form(self, mu) -> np.ndarray:
        """C(mu) with C_ab = <mu, [e_a, e_b]>."""
        return np.einsum("abk,k->ab", self._structure, np.asarray(mu, dtype=float))

    def omega_matrix(self, z: PhasePoint) -> np.ndarray:
        """2n x 2n matrix of the form in the stacked (xi, nu) basis."""
        n, s = self.n, _CANON_SIGN
        top = s * self.bracket_form(z.mu) - self.sigma_matrix
        out = np.zeros((2 * n, 2 * n))
        out[:n, :n] = top
        out[:n, n:] = s * np.eye(n)
        out[n:, :n] = -s * np.eye(n)
        return out

    def omega(self, z: PhasePoint, v1: PhaseTangent, v2: PhaseTangent) -> float:
        s = _CANON_SIGN
        xi1, nu1, xi2, nu2 = v1.xi, v1.nu, v2.xi, v2.nu
        canon = nu2 @ xi1 - nu1 @ xi2 + z.mu @ self.group.bracket(xi1, xi2)
        return float(s * canon - xi1 @ self.sigma_matrix @ xi2)

    # -- generators and the Chu map ----------------------------------------

    def generator(self, xi, z: PhasePoint) -> PhaseTangent:
        """Infinitesimal generator of lifted left translation: (Ad_{g^-1} xi, 0)."""
        xi = np.asarray(xi, dtype=float)
        adj = self.group.adjoint(self.group.inverse(z.g))
        return PhaseTangent(adj @ xi, np.zeros(self.n))

    def chu_map(self, z: PhasePoint) -> np.ndarray:
        """Psi(z)_ij = omega(z)(e_i-generator, e_j-generator)."""
        adj = self.group.adjoint(self.group.inverse(z.g))
        top = _CANON_SIGN * self.bracket_form(z.mu) - self.sigma_matrix
        return adj.T @ top @ adj

    def chu_at_base(self) -> np.ndarray:
        return self.chu_map(self.base_point())
