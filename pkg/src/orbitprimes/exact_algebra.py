"""Exact arithmetic substrate: rational polynomials, integer binary forms,
projective points of P^1(Q), resultants and squarefreeness.

Everything here is immutable and pure; all arithmetic is exact (Python ints
and fractions.Fraction), so the algebraic predicates built on top of this
module carry no floating-point caveats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContractError, InvalidPointError

Rat = int | Fraction


# ---------------------------------------------------------------------------
# univariate polynomials over Q
# ---------------------------------------------------------------------------

class QPoly:
    """Univariate polynomial with Fraction coefficients, ascending degree order.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rat] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise ContractError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == QPoly([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "QPoly(0)"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(f"{c}")
            elif k == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{k}")
        return "QPoly(" + " + ".join(terms) + ")"

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _co(other) -> "QPoly":
        if isinstance(other, QPoly):
            return other
        return QPoly([other])

    def __add__(self, other) -> "QPoly":
        o = self._co(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return QPoly([self[k] + o[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "QPoly":
        return self + (-self._co(other))

    def __rsub__(self, other) -> "QPoly":
        return self._co(other) + (-self)

    def __mul__(self, other) -> "QPoly":
        o = self._co(other)
        if not self.coeffs or not o.coeffs:
            return QPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QPoly":
        if n < 0:
            raise ContractError("negative polynomial power")
        result = QPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple["QPoly", "QPoly"]:
        o = self._co(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(len(self.coeffs) - len(o.coeffs) + 1, 0)
        rem = list(self.coeffs)
        dlo, lo = o.degree, o.lead
        while len(rem) - 1 >= dlo and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < dlo:
                break
            k = len(rem) - 1 - dlo
            f = rem[-1] / lo
            q[k] = f
            for j in range(len(o.coeffs)):
                rem[k + j] -= f * o.coeffs[j]
            rem.pop()
        return QPoly(q), QPoly(rem)

    def __floordiv__(self, other) -> "QPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "QPoly":
        return divmod(self, other)[1]

    # -- calculus and evaluation --------------------------------------------

    def derivative(self) -> "QPoly":
        return QPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else QPoly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "QPoly") -> "QPoly":
        acc = QPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + QPoly([c])
        return acc

    def monic(self) -> "QPoly":
        if self.is_zero():
            raise ContractError("cannot normalize the zero polynomial")
        return QPoly([c / self.lead for c in self.coeffs])

    def clear_denominators(self) -> tuple[int, ...]:
        """Return integer coefficients of lcm(denominators) * self, ascending."""
        if self.is_zero():
            return ()
        lcm = 1
        for c in self.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        return tuple(int(c * lcm) for c in self.coeffs)


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd of two rational polynomials (Euclid)."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def is_squarefree(f: QPoly) -> bool:
    """True iff gcd(f, f') is constant.

    Over Q this is equivalent to f having deg(f) distinct complex roots.
    """
    if f.is_zero():
        raise ContractError("squarefreeness of the zero polynomial is undefined")
    if f.degree == 0:
        return True
    return poly_gcd(f, f.derivative()).degree == 0


def squarefree_decomposition(f: QPoly) -> list[tuple[int, QPoly]]:
    """Yun's algorithm: return [(multiplicity, factor)] with f = lc * prod A_i^i,
    each A_i squarefree and pairwise coprime, factors monic, degree >= 1 only.
    """
    if f.is_zero():
        raise ContractError("cannot decompose the zero polynomial")
    f = f.monic()
    if f.degree == 0:
        return []
    out: list[tuple[int, QPoly]] = []
    g = poly_gcd(f, f.derivative())
    w = f // g
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, g)
        factor = w // y
        if factor.degree > 0:
            out.append((i, factor.monic()))
        g = g // y
        w = y
        i += 1
    return out


def distinct_root_count(f: QPoly) -> int:
    """Number of distinct complex roots: deg of the squarefree part."""
    if f.is_zero():
        raise ContractError("zero polynomial")
    if f.degree == 0:
        return 0
    return (f // poly_gcd(f, f.derivative())).degree


def lagrange_interpolate(points: Sequence[tuple[Rat, Rat]]) -> QPoly:
    """Exact Lagrange interpolation through distinct rational nodes."""
    result = QPoly()
    for i, (xi, yi) in enumerate(points):
        term = QPoly([yi])
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            term = term * QPoly([Fraction(-xj, 1) / (Fraction(xi) - Fraction(xj)),
                                 Fraction(1, 1) / (Fraction(xi) - Fraction(xj))])
        result = result + term
    return result


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------

def det_bareiss(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_fraction(matrix: Sequence[Sequence[Rat]]) -> Fraction:
    """Determinant over Q by ordinary Gaussian elimination."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if m[i][k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            if m[i][k] == 0:
                continue
            f = m[i][k] * inv
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return det


def sylvester_matrix(a: Sequence[Rat], b: Sequence[Rat]) -> list[list[Rat]]:
    """Sylvester matrix for coefficient lists in descending power order.

    Formal degrees are len-1, so leading zeros are honored as written.
    """
    da, db = len(a) - 1, len(b) - 1
    n = da + db
    rows = []
    for i in range(db):
        rows.append([0] * i + list(a) + [0] * (n - da - 1 - i))
    for i in range(da):
        rows.append([0] * i + list(b) + [0] * (n - db - 1 - i))
    return rows


def resultant_qpoly(a: QPoly, b: QPoly) -> Fraction:
    """Resultant of two rational polynomials at their actual degrees."""
    if a.is_zero() or b.is_zero():
        raise ContractError("resultant of the zero polynomial")
    if a.degree == 0:
        return a.lead ** b.degree
    if b.degree == 0:
        return b.lead ** a.degree
    rows = sylvester_matrix(list(reversed(a.coeffs)), list(reversed(b.coeffs)))
    return det_fraction(rows)


# ---------------------------------------------------------------------------
# integer binary forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryFormZ:
    """Homogeneous form c0*X^d + c1*X^(d-1)Z + ... + cd*Z^d with int coefficients.

    coeffs holds (c0, ..., cd); the formal degree is len(coeffs) - 1 and leading
    zeros are meaningful (they encode a root at [1:0]).
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise ContractError("binary form degree must be >= 1")
        if not all(isinstance(c, int) for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def content(self) -> int:
        return math.gcd(*self.coeffs) if any(self.coeffs) else 0

    def normalized(self) -> "BinaryFormZ":
        """Divide by the content and make the first nonzero coefficient positive."""
        g = self.content()
        if g == 0:
            raise ContractError("zero form cannot be normalized")
        cs = [c // g for c in self.coeffs]
        first = next(c for c in cs if c != 0)
        if first < 0:
            cs = [-c for c in cs]
        return BinaryFormZ(tuple(cs))

    def evaluate(self, a: int, b: int) -> int:
        """Homogeneous evaluation F(a, b) by Horner in X, tracking Z powers."""
        acc = 0
        bp = 1
        for c in self.coeffs:
            acc = acc * a + c * bp
            bp *= b
        return acc

    def dehomogenized(self) -> QPoly:
        """Substitute Z = 1: polynomial in x = X, ascending coefficients."""
        return QPoly(list(reversed(self.coeffs)))

    def scale(self, k: int) -> "BinaryFormZ":
        return BinaryFormZ(tuple(c * k for c in self.coeffs))

    def add(self, other: "BinaryFormZ") -> "BinaryFormZ":
        if self.degree != other.degree:
            raise ContractError("form degree mismatch")
        return BinaryFormZ(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def compose_pair(self, u: "BinaryFormZ", v: "BinaryFormZ") -> "BinaryFormZ":
        """Substitute (X, Z) -> (U, V) for forms U, V of equal degree e.

        Result has degree d*e. Used for composing rational maps.
        """
        if u.degree != v.degree:
            raise ContractError("substituted forms must have equal degree")
        d = self.degree
        acc = (self.coeffs[0],)
        vk = (1,)
        for k in range(1, d + 1):
            vk = _form_coeffs_mul(vk, v.coeffs)
            acc = _form_coeffs_add(
                _form_coeffs_mul(acc, u.coeffs),
                _form_coeffs_scale(vk, self.coeffs[k]),
            )
        return BinaryFormZ(acc)

    @staticmethod
    def from_poly_numerator(poly_coeffs_desc: Sequence[int], degree: int) -> "BinaryFormZ":
        """Homogenize a polynomial (descending coefficients) to the given degree."""
        cs = list(poly_coeffs_desc)
        if len(cs) - 1 > degree:
            raise ContractError("polynomial degree exceeds target form degree")
        return BinaryFormZ(tuple([0] * (degree - (len(cs) - 1)) + cs))


def _form_coeffs_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _form_coeffs_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) != len(b):
        raise ContractError("form degree mismatch in addition")
    return tuple(x + y for x, y in zip(a, b))


def _form_coeffs_scale(a: tuple[int, ...], k: int) -> tuple[int, ...]:
    return tuple(x * k for x in a)


def resultant(f: BinaryFormZ, g: BinaryFormZ) -> int:
    """Sylvester resultant of two binary forms of equal degree d.

    Zero iff the forms share a projective root over the algebraic closure.
    """
    if f.degree != g.degree:
        raise ContractError(
            f"resultant requires equal degrees, got {f.degree} and {g.degree}")
    rows = sylvester_matrix(f.coeffs, g.coeffs)
    return det_bareiss(rows)


# ---------------------------------------------------------------------------
# projective points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectivePointQ:
    """Point of P^1(Q) in normalized coprime integer coordinates [a : b].

    Invariants: gcd(a, b) = 1, and either b > 0, or b = 0 and a = 1 (infinity).
    """

    a: int
    b: int

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise InvalidPointError("(0, 0) is not a projective point")
        if self.b < 0 or (self.b == 0 and self.a != 1):
            raise ContractError("point is not in normalized form")
        if math.gcd(self.a, self.b) != 1:
            raise ContractError("coordinates are not coprime")

    def is_infinity(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"[{self.a}:{self.b}]"


def normalize_point(a: Rat, b: Rat) -> ProjectivePointQ:
    """Unique normalized representative of [a : b]; accepts rational input."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 and b == 0:
        raise InvalidPointError("(0, 0) is not a projective point")
    lcm = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    ia, ib = int(a * lcm), int(b * lcm)
    g = math.gcd(ia, ib)
    ia, ib = ia // g, ib // g
    if ib < 0 or (ib == 0 and ia < 0):
        ia, ib = -ia, -ib
    return ProjectivePointQ(ia, ib)


def weil_height(p: ProjectivePointQ) -> float:
    """Standard Weil height on P^1(Q): log max(|a|, |b|)."""
    return math.log(max(abs(p.a), abs(p.b)))
