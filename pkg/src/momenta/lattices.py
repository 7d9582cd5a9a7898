"""Integer lattices and finitely generated subgroups of R^n with exact coordinates.

Column Hermite and Smith normal forms over Z with unimodular transforms,
membership/quotient computations, and the discreteness decision with closure
decomposition for Z-spans of Q(sqrt(r))-vectors.  Everything in this module is
exact big-integer/rational arithmetic; no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exact import ExactScalar, QuadraticField, nullspace, rank

__all__ = [
    "xgcd",
    "hermite_normal_form",
    "smith_normal_form",
    "integer_determinant",
    "integer_kernel",
    "LatticeSubgroup",
    "AbelianInvariants",
    "quotient_invariants",
    "GeneratedSubgroup",
    "ClosedSubgroupDecomp",
    "is_closed",
    "kernel_lattice",
    "subgroup_is_hamiltonian",
    "CoverDescriptor",
    "classify_cover",
]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def _row_hermite(A):
    """Row HNF: (H, U) with H = U A; upper echelon, positive pivots, entries
    above each pivot reduced into [0, pivot)."""
    m = len(A)
    n = len(A[0]) if m else 0
    H = [[int(x) for x in row] for row in A]
    U = _eye(m)
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if H[i][c]), None)
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            if H[i][c]:
                g, x, y = xgcd(H[r][c], H[i][c])
                ar, ai = H[r][c] // g, H[i][c] // g
                H[r], H[i] = (
                    [x * p + y * q for p, q in zip(H[r], H[i])],
                    [-ai * p + ar * q for p, q in zip(H[r], H[i])],
                )
                U[r], U[i] = (
                    [x * p + y * q for p, q in zip(U[r], U[i])],
                    [-ai * p + ar * q for p, q in zip(U[r], U[i])],
                )
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [p - q * s for p, s in zip(H[i], H[r])]
                U[i] = [p - q * s for p, s in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return H, U


def hermite_normal_form(A):
    """Column HNF: (H, U) with H = A·U, U unimodular.

    Nonzero columns lead with positive pivots on strictly increasing rows;
    this is the canonical representation used for subgroup equality.
    """
    Hr, Ur = _row_hermite(_transpose(A))
    return _transpose(Hr), _transpose(Ur)


def smith_normal_form(A):
    """Smith normal form: (D, S, T) with D = S A T diagonal, d_i | d_{i+1}."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(x) for x in row] for row in A]
    S, T = _eye(m), _eye(n)

    def row_comb(i1, i2, x, y, u, v):
        D[i1], D[i2] = (
            [x * p + y * q for p, q in zip(D[i1], D[i2])],
            [u * p + v * q for p, q in zip(D[i1], D[i2])],
        )
        S[i1], S[i2] = (
            [x * p + y * q for p, q in zip(S[i1], S[i2])],
            [u * p + v * q for p, q in zip(S[i1], S[i2])],
        )

    def col_comb(j1, j2, x, y, u, v):
        for M in (D, T):
            for row in M:
                row[j1], row[j2] = x * row[j1] + y * row[j2], u * row[j1] + v * row[j2]

    t = 0
    while t < min(m, n):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        if pi != t:
            D[t], D[pi] = D[pi], D[t]
            S[t], S[pi] = S[pi], S[t]
        if pj != t:
            for M in (D, T):
                for row in M:
                    row[t], row[pj] = row[pj], row[t]
        while True:
            for i in range(t + 1, m):
                b = D[i][t]
                if not b:
                    continue
                a = D[t][t]
                if b % a == 0:
                    # shear: leaves the pivot row alone, cannot refill
                    q = b // a
                    D[i] = [p - q * s for p, s in zip(D[i], D[t])]
                    S[i] = [p - q * s for p, s in zip(S[i], S[t])]
                else:
                    g, x, y = xgcd(a, b)
                    row_comb(t, i, x, y, -(b // g), a // g)
            if any(D[t][j] for j in range(t + 1, n)):
                for j in range(t + 1, n):
                    b = D[t][j]
                    if not b:
                        continue
                    a = D[t][t]
                    if b % a == 0:
                        q = b // a
                        for M in (D, T):
                            for row in M:
                                row[j] -= q * row[t]
                    else:
                        g, x, y = xgcd(a, b)
                        col_comb(t, j, x, y, -(b // g), a // g)
                if any(D[i][t] for i in range(t + 1, m)):
                    # a Bezout step refilled the column, but it also strictly
                    # shrank the pivot, so this loop terminates
                    continue
            break
        d = D[t][t]
        bad = next(
            ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % d),
            None,
        )
        if bad is not None:
            # fold a non-multiple into row t; the next elimination round
            # strictly shrinks the pivot, so this terminates
            i = bad[0]
            D[t] = [p + q for p, q in zip(D[t], D[i])]
            S[t] = [p + q for p, q in zip(S[t], S[i])]
            continue
        if d < 0:
            D[t] = [-x for x in D[t]]
            S[t] = [-x for x in S[t]]
        t += 1
    return D, S, T


def integer_determinant(A) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(A)
    if n == 0:
        return 1
    M = [[int(x) for x in row] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][k]), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("boolean is not a lattice coordinate")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    raise TypeError(f"not an integer coordinate: {x!r}")


def _as_fraction(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"not an exact rational coordinate: {x!r}")


class LatticeSubgroup:
    """Subgroup of Z^n stored as its canonical column-HNF basis."""

    __slots__ = ("ambient_dim", "columns")

    def __init__(self, ambient_dim: int, columns=()):
        cols = [tuple(_as_int(x) for x in col) for col in columns]
        for col in cols:
            if len(col) != ambient_dim:
                raise ValueError("column length does not match ambient dimension")
        cols = [c for c in cols if any(c)]
        if cols:
            A = [[c[i] for c in cols] for i in range(ambient_dim)]
            H, _ = hermite_normal_form(A)
            cols = [
                tuple(H[i][j] for i in range(ambient_dim))
                for j in range(len(cols))
                if any(H[i][j] for i in range(ambient_dim))
            ]
        self.ambient_dim = ambient_dim
        self.columns = tuple(cols)

    @classmethod
    def from_columns(cls, ambient_dim, columns):
        return cls(ambient_dim, columns)

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, ())

    @classmethod
    def standard(cls, ambient_dim):
        return cls(ambient_dim, _eye(ambient_dim))

    @property
    def rank(self) -> int:
        return len(self.columns)

    def coordinates_of(self, vector):
        """Integer coordinates of `vector` in the basis columns, or None."""
        v = [_as_fraction(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        coords = []
        for col in self.columns:
            p = next(i for i, x in enumerate(col) if x)
            c = v[p] / col[p]
            if c.denominator != 1:
                return None
            coords.append(int(c))
            v = [x - c * y for x, y in zip(v, col)]
        return coords if not any(v) else None

    def contains(self, vector) -> bool:
        return self.coordinates_of(vector) is not None

    def contains_lattice(self, other: "LatticeSubgroup") -> bool:
        return all(self.contains(col) for col in other.columns)

    def sum(self, other: "LatticeSubgroup") -> "LatticeSubgroup":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return LatticeSubgroup(self.ambient_dim, self.columns + other.columns)

    def __eq__(self, other):
        return (
            isinstance(other, LatticeSubgroup)
            and self.ambient_dim == other.ambient_dim
            and self.columns == other.columns
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.columns))

    def __repr__(self):
        return f"LatticeSubgroup(dim={self.ambient_dim}, columns={list(self.columns)})"


@dataclass(frozen=True)
class AbelianInvariants:
    """Finitely generated abelian group as free rank plus invariant factors."""

    free_rank: int
    torsion: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self):
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def describe(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "trivial"


def quotient_invariants(big: LatticeSubgroup, small: LatticeSubgroup) -> AbelianInvariants:
    """Invariants of big/small via the SNF of small written in big's basis."""
    if big.ambient_dim != small.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    coord_cols = []
    for col in small.columns:
        y = big.coordinates_of(col)
        if y is None:
            raise ValueError("second lattice is not a subgroup of the first")
        coord_cols.append(y)
    r = big.rank
    if r == 0 or not coord_cols:
        return AbelianInvariants(r, ())
    Y = [[coord_cols[j][i] for j in range(len(coord_cols))] for i in range(r)]
    D, _, _ = smith_normal_form(Y)
    diag = [D[t][t] for t in range(min(r, len(coord_cols)))]
    nonzero = [d for d in diag if d]
    return AbelianInvariants(r - len(nonzero), tuple(d for d in nonzero if d > 1))


def integer_kernel(rational_rows, ncols: int) -> LatticeSubgroup:
    """{x in Z^ncols : A x = 0} for A with Fraction entries (saturated lattice)."""
    int_rows = []
    for row in rational_rows:
        fr = [_as_fraction(x) for x in row]
        den = 1
        for x in fr:
            den = lcm(den, x.denominator)
        int_rows.append([int(x * den) for x in fr])
    if not int_rows:
        return LatticeSubgroup.standard(ncols)
    H, U = hermite_normal_form(int_rows)
    m = len(int_rows)
    cols = [
        [U[i][j] for i in range(ncols)]
        for j in range(ncols)
        if all(H[i][j] == 0 for i in range(m))
    ]
    return LatticeSubgroup.from_columns(ncols, cols)


class GeneratedSubgroup:
    """Z-span of exact generator vectors in Q(sqrt(r))^n."""

    __slots__ = ("field", "ambient_dim", "generators")

    def __init__(self, field: QuadraticField, ambient_dim: int, generators):
        gens = []
        for v in generators:
            w = tuple(field.coerce(x) for x in v)
            if len(w) != ambient_dim:
                raise ValueError("generator length does not match ambient dimension")
            if any(w):
                gens.append(w)
        self.field = field
        self.ambient_dim = ambient_dim
        self.generators = tuple(gens)


@dataclass(frozen=True)
class ClosedSubgroupDecomp:
    """A closed subgroup of R^n as V + Z-span(lattice_basis).

    When `closed` is False the input span itself was not closed and the fields
    describe its closure: V is the dense part actually attained.  In both
    cases the lattice vectors are R-independent and meet V only at 0.
    """

    field: QuadraticField
    ambient_dim: int
    closed: bool
    subspace_basis: tuple[tuple[ExactScalar, ...], ...]
    lattice_basis: tuple[tuple[ExactScalar, ...], ...]

    def contains_exact(self, vector) -> bool:
        vec = [self.field.coerce(x) for x in vector]
        for row in self.subspace_basis:
            p = next(i for i, x in enumerate(row) if x)
            if vec[p]:
                f = vec[p] / row[p]
                vec = [x - f * y for x, y in zip(vec, row)]
        if not any(vec):
            return True
        if not self.lattice_basis:
            return False
        rows = [[lam[i] for lam in self.lattice_basis] for i in range(self.ambient_dim)]
        coeffs = None
        sol = _field_solve(rows, vec, self.field)
        if sol is None:
            return False
        coeffs = sol
        return all(c.is_rational() and c.a.denominator == 1 for c in coeffs)


def _field_solve(rows, rhs, field):
    from .exact import solve_linear

    # solve over the field, then verify (solve_linear returns one solution of a
    # consistent system; lattice basis columns are independent so it is unique)
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    for row, b in zip(rows, rhs):
        acc = field.zero
        for a, x in zip(row, sol):
            acc = acc + a * x
        if acc != b:
            return None
    return sol


def _discrete_lattice_basis(field, images, n):
    den = 1
    for v in images:
        for x in v:
            den = lcm(den, x.a.denominator, x.b.denominator)
    M = [[0] * len(images) for _ in range(2 * n)]
    for j, v in enumerate(images):
        for i, x in enumerate(v):
            M[i][j] = int(x.a * den)
            M[n + i][j] = int(x.b * den)
    H, _ = hermite_normal_form(M)
    out = []
    for j in range(len(images)):
        col = [H[i][j] for i in range(2 * n)]
        if not any(col):
            continue
        out.append(tuple(field.scalar(Fraction(col[i], den), Fraction(col[n + i], den)) for i in range(n)))
    return tuple(out)


def is_closed(group: GeneratedSubgroup) -> ClosedSubgroupDecomp:
    """Decide closedness of the Z-span and return its closure decomposition.

    Discreteness criterion: the Z-span of vectors in Q(sqrt r)^n is discrete
    iff the Q-rank of their {1, sqrt r}-split images in Q^{2n} equals the
    dimension of their R-span (their rank over Q(sqrt r)).  When the span is
    not discrete, a Q(sqrt r)-dependency sum c_i v_i = 0 with c_i = p_i +
    sqrt(r) q_i yields u = sum q_i v_i != 0 for some nullspace basis vector;
    integer liftings of (p, q) show u and sqrt(r)·u both lie in the span, so
    the closure contains the whole line R·u.  The line is split off and the
    procedure recurses on the quotient, which is exact coordinate elimination.
    """
    field = group.field
    n = group.ambient_dim
    gens = [list(v) for v in group.generators]
    vrows: list[tuple[list[ExactScalar], int]] = []

    def reduce_mod_v(vec):
        vec = list(vec)
        for row, p in vrows:
            if vec[p]:
                f = vec[p]
                vec = [x - f * y for x, y in zip(vec, row)]
        return vec

    while True:
        images = [reduce_mod_v(g) for g in gens]
        images = [v for v in images if any(v)]
        if not images:
            lattice = ()
            break
        cols_matrix = [[v[i] for v in images] for i in range(n)]
        alpha_rank = rank(cols_matrix)
        split_rows = [[x.a for x in v] + [x.b for x in v] for v in images]
        if rank(split_rows) == alpha_rank:
            lattice = _discrete_lattice_basis(field, images, n)
            break
        u = None
        for c in nullspace(cols_matrix, one=field.one):
            cand = [field.zero] * n
            for ci, v in zip(c, images):
                if ci.b:
                    cand = [x + ci.b * y for x, y in zip(cand, v)]
            if any(cand):
                u = cand
                break
        assert u is not None, "non-discrete span must admit a dense direction"
        p = next(i for i, x in enumerate(u) if x)
        urow = [x / u[p] for x in u]
        vrows = [
            ([x - row[p] * y for x, y in zip(row, urow)] if row[p] else row, rp)
            for row, rp in vrows
        ]
        vrows.append((urow, p))
        vrows.sort(key=lambda item: item[1])

    subspace = tuple(tuple(row) for row, _ in vrows)
    return ClosedSubgroupDecomp(
        field=field,
        ambient_dim=n,
        closed=not subspace,
        subspace_basis=subspace,
        lattice_basis=tuple(lattice),
    )


def kernel_lattice(theta_rows, d: int) -> LatticeSubgroup:
    """{k in Z^d : theta k = 0} for an exact theta, by splitting each equation
    into its rational and sqrt(r) components."""
    rows = []
    for row in theta_rows:
        rows.append([x.a for x in row])
        rows.append([x.b for x in row])
    return integer_kernel(rows, d)


def subgroup_is_hamiltonian(gamma_n: LatticeSubgroup, gamma_0: LatticeSubgroup) -> bool:
    """Whether the cover labelled by gamma_n admits a genuine momentum map,
    i.e. gamma_n is contained in gamma_0."""
    return gamma_0.contains_lattice(gamma_n)


@dataclass(frozen=True)
class CoverDescriptor:
    rank: int
    dim: int
    text: str
    basis: tuple[tuple[int, ...], ...]


def classify_cover(gamma_0: LatticeSubgroup, d: int) -> CoverDescriptor:
    """Describe R^d / gamma_0 as a cylinder T^r x R^(d-r); zero factors are
    dropped from the text ("R^2", "T^1 x R^2", "T^3")."""
    r = gamma_0.rank
    if r == 0:
        text = f"R^{d}"
    elif r == d:
        text = f"T^{d}"
    else:
        text = f"T^{r} x R^{d - r}"
    return CoverDescriptor(rank=r, dim=d, text=text, basis=gamma_0.columns)
