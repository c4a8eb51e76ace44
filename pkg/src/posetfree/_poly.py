"""Univariate polynomials with exact rational coefficients.

Roots are isolated with Sturm sequences on the square-free part and refined by
exact bisection, so every reported root comes with a rational bracket that is
guaranteed to contain it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Poly:
    """Coefficients from the constant term upward."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(Fraction(c) for c in coeffs))

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def _coerce(self, other):
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - other.degree, 1)
        lead = other.lead()
        while len(rem) - 1 >= other.degree and any(rem):
            shift = len(rem) - 1 - other.degree
            f = rem[-1] / lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        return Poly(c / self.lead() for c in self.coeffs) if self else self

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"


def gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree(p: Poly) -> Poly:
    g = gcd(p, p.derivative())
    return p.divmod(g)[0] if g.degree > 0 else p


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while seq[-1]:
        r = -(seq[-2] % seq[-1])
        if not r:
            break
        seq.append(r)
    return [s for s in seq if s]


def _sign_changes(seq, x):
    signs = [s(x) for s in seq]
    signs = [v for v in signs if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(seq, a: Fraction, b: Fraction) -> int:
    """Distinct roots in ``(a, b]`` (Sturm's theorem)."""
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def isolate_roots(p: Poly, a, b) -> list[tuple[Fraction, Fraction]]:
    """Disjoint brackets ``(lo, hi]`` each holding exactly one root in ``[a, b]``."""
    a, b = Fraction(a), Fraction(b)
    if not p or p.degree == 0:
        return []
    q = squarefree(p)
    seq = sturm_sequence(q)
    out = []
    if q(a) == 0:
        out.append((a, a))
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        k = count_roots(seq, lo, hi)
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.extend([(mid, hi), (lo, mid)])
    return sorted(out)


def refine_root(p: Poly, lo: Fraction, hi: Fraction, tol=Fraction(1, 10**30)):
    """Shrink a single-root bracket of the square-free part to width ``tol``."""
    q = squarefree(p)
    if lo == hi or q(hi) == 0:
        return hi, hi
    seq = sturm_sequence(q)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if q(mid) == 0:
            return mid, mid
        if count_roots(seq, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def real_roots(p: Poly, a, b, tol=Fraction(1, 10**30)) -> list[tuple[Fraction, Fraction]]:
    return [refine_root(p, lo, hi, tol) for lo, hi in isolate_roots(p, a, b)]


def determinant(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Laplace expansion; the matrices used here are at most 4x4."""
    n = len(matrix)
    if n == 0:
        return Poly([1])
    if n == 1:
        return matrix[0][0]
    total = Poly()
    for j in range(n):
        entry = matrix[0][j]
        if not entry:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def resultant(f: Sequence[Poly], g: Sequence[Poly]) -> Poly:
    """Sylvester resultant in an outer variable.

    ``f`` and ``g`` list coefficients (constant term first) that are
    polynomials in the inner variable; the result is a polynomial in the
    inner variable vanishing wherever both have a common outer root.
    """
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [Poly()] * size
        for k, c in enumerate(reversed(f)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [Poly()] * size
        for k, c in enumerate(reversed(g)):
            row[i + k] = c
        rows.append(row)
    return determinant(rows)
