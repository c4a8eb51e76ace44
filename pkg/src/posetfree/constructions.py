"""Generators for the extremal families: level unions, chains, VC-extremal and diamond-free."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, floor
from typing import Iterable

import numpy as np

from .errors import CapacityError, PreconditionError
from .family import SetFamily

__all__ = [
    "levels", "full_chain_family", "priv_sharp", "vc_extremal", "vc_extremal_mass",
    "vc_parts", "PartitionSpec", "b2_lower", "b2_lower_closed_form",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 24


def _canonical_level_union(n: int, keep_level) -> SetFamily:
    if n > ENUMERATION_CAP:
        raise CapacityError(f"explicit enumeration needs n <= {ENUMERATION_CAP}")
    masks = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros_like(masks)
    for i in range(n):
        pop += (masks >> i) & 1
    order = np.lexsort((masks, pop))
    keep = np.fromiter((keep_level(k) for k in range(n + 1)), dtype=bool, count=n + 1)
    sel = order[keep[pop[order]]]
    return SetFamily(n, masks[sel].tolist(), trusted=True)


def levels(n: int, ks: Iterable[int]) -> SetFamily:
    """Union of the full levels ``ks`` of the ``n``-cube."""
    wanted = set(ks)
    if any(not 0 <= k <= n for k in wanted):
        raise PreconditionError("level index outside 0..n")
    return _canonical_level_union(n, lambda k: k in wanted)


def full_chain_family(n: int) -> SetFamily:
    """The maximal chain 0, {1}, {1,2}, ..., [n]."""
    return SetFamily(n, [(1 << k) - 1 for k in range(n + 1)], trusted=True)


def priv_sharp(n: int, r: int) -> SetFamily:
    """Empty set plus every set of size above ``n - (r - 1)``; mass exactly ``r``."""
    if not 1 <= r <= n + 1:
        raise PreconditionError("need 1 <= r <= n + 1")
    cut = n - (r - 1)
    return _canonical_level_union(n, lambda k: k == 0 or k > cut)


# ----------------------------------------------------------------- VC family

def vc_parts(n: int, t: int) -> list[int]:
    """Consecutive near-equal blocks as bitmasks; the first ``n mod t`` are larger."""
    q, extra = divmod(n, t)
    parts, start = [], 0
    for i in range(t):
        size = q + (1 if i < extra else 0)
        parts.append(((1 << size) - 1) << start)
        start += size
    return parts


def _vc_check(n, d, t):
    if t < 1 or d < 1 or n < t:
        raise PreconditionError("need t >= 1, d >= 1 and n >= t")


def _g_cut(d, t):
    # floor((1 - 1/t) d) computed exactly
    return floor(Fraction(t - 1, t) * d)


def vc_extremal(n: int, d: int, t: int) -> tuple[SetFamily, list[int]]:
    """``G | H`` with ``G`` the sets larger than ``n - floor((1-1/t)d)`` and
    ``H`` the sets meeting every part in fewer than ``d/t`` points.

    Returns the family together with the part bitmasks.
    """
    _vc_check(n, d, t)
    if n > ENUMERATION_CAP:
        raise CapacityError(f"explicit enumeration needs n <= {ENUMERATION_CAP}")
    parts = vc_parts(n, t)
    cut = n - _g_cut(d, t)
    masks = np.arange(1 << n, dtype=np.int64)

    def popcount(arr):
        out = np.zeros_like(arr)
        for i in range(n):
            out += (arr >> i) & 1
        return out

    pop = popcount(masks)
    in_h = np.ones(masks.size, dtype=bool)
    for z in parts:
        in_h &= t * popcount(masks & z) < d
    keep = in_h | (pop > cut)
    sel = masks[keep]
    order = np.lexsort((sel, pop[keep]))
    return SetFamily(n, sel[order].tolist(), trusted=True), parts


def vc_extremal_mass(n: int, d: int, t: int) -> Fraction:
    """Exact mass of :func:`vc_extremal` without enumerating the family."""
    _vc_check(n, d, t)
    sizes = [z.bit_count() for z in vc_parts(n, t)]
    # level counts of H via a product of truncated binomial polynomials
    h = [1]
    for s in sizes:
        factor = [comb(s, a) for a in range(s + 1) if t * a < d]
        nxt = [0] * (len(h) + len(factor) - 1)
        for i, x in enumerate(h):
            for j, y in enumerate(factor):
                nxt[i + j] += x * y
        h = nxt
    cut = n - _g_cut(d, t)
    total = Fraction(0)
    for k in range(n + 1):
        count = comb(n, k) if k > cut else (h[k] if k < len(h) else 0)
        total += Fraction(count, comb(n, k))
    return total


# ------------------------------------------------------------ diamond-free

@dataclass(frozen=True)
class PartitionSpec:
    """Sizes of three consecutive blocks S, T, R of the ground set."""

    s: int
    t: int
    r: int

    def __post_init__(self):
        if min(self.s, self.t, self.r) < 0:
            raise PreconditionError("partition sizes must be nonnegative")

    @property
    def n(self) -> int:
        return self.s + self.t + self.r

    @classmethod
    def from_fractions(cls, n: int, x1, x2, x3) -> "PartitionSpec":
        """Round ``(x1, x2, x3) * n`` to nearest, then fix the total.

        The leftover is assigned by largest rounding deficit (or removed by
        largest surplus), earlier blocks first on ties.
        """
        xs = [Fraction(x) for x in (x1, x2, x3)]
        if any(x < 0 for x in xs):
            raise PreconditionError("fractions must be nonnegative")
        total = sum(xs)
        if total == 0:
            raise PreconditionError("fractions must not all vanish")
        targets = [x * n / total for x in xs]
        sizes = [floor(v + Fraction(1, 2)) for v in targets]
        diff = n - sum(sizes)
        while diff:
            step = 1 if diff > 0 else -1
            errs = [(targets[i] - sizes[i]) * step for i in range(3)]
            i = max(range(3), key=lambda k: (errs[k], -k))
            if step < 0 and sizes[i] == 0:
                i = max((k for k in range(3) if sizes[k] > 0), key=lambda k: (errs[k], -k))
            sizes[i] += step
            diff -= step
        return cls(*sizes)


def _blocks(part):
    s = list(range(part.s))
    t = list(range(part.s, part.s + part.t))
    r = list(range(part.s + part.t, part.n))
    return s, t, r


def _join(*groups):
    out = [0]
    for g in groups:
        out = [a | b for a in out for b in g]
    return out


def _singles(block):
    return [1 << i for i in block]


def _pairs(block):
    return [(1 << i) | (1 << j) for i, j in combinations(block, 2)]


def b2_lower(n: int, part: PartitionSpec) -> SetFamily:
    """Diamond-free family built from three blocks S, T, R.

    Members: the empty set, S-singletons, S+T pairs, S+T+R triples, T-pairs,
    R-pairs, T-pairs joined with R-singletons, T-singletons joined with R-pairs.
    """
    if part.n != n:
        raise PreconditionError(f"partition sums to {part.n}, expected {n}")
    S, T, R = _blocks(part)
    members = [0]
    members += _singles(S)
    members += _join(_singles(S), _singles(T))
    members += _join(_singles(S), _singles(T), _singles(R))
    members += _pairs(T)
    members += _pairs(R)
    members += _join(_pairs(T), _singles(R))
    members += _join(_singles(T), _pairs(R))
    return SetFamily(n, members)


def b2_lower_closed_form(n: int, part: PartitionSpec) -> Fraction:
    s, t, r = part.s, part.t, part.r
    if part.n != n:
        raise PreconditionError(f"partition sums to {part.n}, expected {n}")
    out = Fraction(1)
    if n >= 1:
        out += Fraction(s, n)
    if n >= 2:
        out += Fraction(s * t + comb(t, 2) + comb(r, 2), comb(n, 2))
    if n >= 3:
        out += Fraction(s * t * r + t * comb(r, 2) + comb(t, 2) * r, comb(n, 3))
    return out

