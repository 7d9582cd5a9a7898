"""Exact scalars a + b*sqrt(r) and linear algebra over the field Q(sqrt(r)).

Both components are `fractions.Fraction`, so all field operations are exact.
The descriptor r must not be a rational square: irrationality of sqrt(r) is
what makes equality and sign decidable from the components alone.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering

__all__ = ["QuadraticField", "ExactScalar", "rref", "rank", "nullspace", "solve_linear"]


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational value: {x!r}")


def _is_rational_square(r: Fraction) -> bool:
    if r < 0:
        return False
    p, q = r.numerator, r.denominator
    return math.isqrt(p) ** 2 == p and math.isqrt(q) ** 2 == q


# Config text format: "a/b" or "a/b+c/d*al" (no spaces); integer numerators and
# pure "c/d*al" terms are accepted as degenerate cases.  In the two-term form
# the alpha coefficient must carry an explicit sign, which keeps the split of
# e.g. "1/10*al" unambiguous.
_RAT = r"[+-]?\d+(?:/\d+)?"
_TWO_TERM_RE = re.compile(rf"(?P<a>{_RAT})(?P<b>[+-]\d+(?:/\d+)?)\*al")
_ALPHA_RE = re.compile(rf"(?P<b>{_RAT})\*al")
_RAT_RE = re.compile(_RAT)


class QuadraticField:
    """The real quadratic field Q(sqrt(r)) for a fixed non-square rational r > 0."""

    __slots__ = ("r", "sqrt_r")

    def __init__(self, r):
        r = _fraction(r)
        if r <= 0:
            raise ValueError(f"field descriptor must be positive, got {r}")
        if _is_rational_square(r):
            raise ValueError(f"field descriptor r={r} is a rational square, sqrt(r) would be rational")
        self.r = r
        self.sqrt_r = math.sqrt(r)

    def scalar(self, a, b=0) -> ExactScalar:
        return ExactScalar(_fraction(a), _fraction(b), self)

    @property
    def zero(self) -> ExactScalar:
        return self.scalar(0)

    @property
    def one(self) -> ExactScalar:
        return self.scalar(1)

    def parse(self, text: str) -> ExactScalar:
        if not isinstance(text, str) or " " in text:
            raise ValueError(f"malformed exact scalar: {text!r}")
        if m := _TWO_TERM_RE.fullmatch(text):
            return self.scalar(Fraction(m.group("a")), Fraction(m.group("b")))
        if m := _ALPHA_RE.fullmatch(text):
            return self.scalar(0, Fraction(m.group("b")))
        if _RAT_RE.fullmatch(text):
            return self.scalar(Fraction(text))
        raise ValueError(f"malformed exact scalar: {text!r} (expected 'a/b' or 'a/b+c/d*al')")

    def parse_vector(self, entries) -> tuple[ExactScalar, ...]:
        return tuple(self.parse(e) if isinstance(e, str) else self.coerce(e) for e in entries)

    def coerce(self, x) -> ExactScalar:
        if isinstance(x, ExactScalar):
            if x.field != self:
                raise ValueError("scalar from a different field")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.scalar(_fraction(x))

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and self.r == other.r

    def __hash__(self):
        return hash(("QuadraticField", self.r))

    def __repr__(self):
        return f"QuadraticField({self.r})"


@total_ordering
class ExactScalar:
    """a + b*sqrt(r) with rational a, b, exact under +, -, *, /."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a: Fraction, b: Fraction, field: QuadraticField):
        self.a = a
        self.b = b
        self.field = field

    def _make(self, a, b):
        return ExactScalar(a, b, self.field)

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            if other.field != self.field:
                return None
            return other
        if isinstance(other, (int, Fraction)):
            return self._make(_fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._make(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._make(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = self.field.r
        return self._make(self.a * o.a + r * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> ExactScalar:
        # 1/(a + b*sqrt(r)) = (a - b*sqrt(r))/(a^2 - r b^2); the denominator is
        # nonzero for nonzero input because r is not a rational square.
        den = self.a * self.a - self.field.r * self.b * self.b
        if den == 0:
            raise ZeroDivisionError("division by zero exact scalar")
        return self._make(self.a / den, -self.b / den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self._make(Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self):
        return self._make(-self.a, -self.b)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.field.r))

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: sign decided by comparing a^2 against r b^2
        big_a = a * a > self.field.r * b * b
        if a > 0:
            return 1 if big_a else -1
        return -1 if big_a else 1

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * self.field.sqrt_r

    def split(self) -> tuple[Fraction, Fraction]:
        """Components in the Q-basis {1, sqrt(r)}."""
        return self.a, self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def format(self) -> str:
        if self.b == 0:
            return str(self.a)
        tail = f"{self.b}*al" if self.b < 0 else f"+{self.b}*al"
        if self.a == 0:
            return f"{self.b}*al"
        return f"{self.a}{tail}"

    def __repr__(self):
        return f"ExactScalar({self.format()!r}, r={self.field.r})"


# ---------------------------------------------------------------------------
# Exact Gaussian elimination.  Entries may be Fraction or ExactScalar (anything
# with exact +, -, *, / and truthiness); rows are lists.


def rref(rows):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    out = [list(row) for row in rows]
    if not out:
        return out, []
    ncols = len(out[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(out)) if out[i][c]), None)
        if piv is None:
            continue
        out[r], out[piv] = out[piv], out[r]
        inv = out[r][c]
        out[r] = [x / inv for x in out[r]]
        for i in range(len(out)):
            if i != r and out[i][c]:
                f = out[i][c]
                out[i] = [x - f * y for x, y in zip(out[i], out[r])]
        pivots.append(c)
        r += 1
        if r == len(out):
            break
    return out, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, one=Fraction(1)):
    """Basis of {x : A x = 0} for A given by rows; `one` fixes the scalar type."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    zero = one - one
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


def solve_linear(rows, rhs):
    """One solution of A x = rhs, or None if inconsistent; A given by rows."""
    if not rows:
        return []
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    ncols = len(rows[0])
    if ncols in pivots:
        return None  # pivot in the rhs column: inconsistent
    zero = rhs[0] - rhs[0]
    x = [zero] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return x
