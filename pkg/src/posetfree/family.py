"""Set families in the Boolean lattice and exact Lubell-mass machinery.

Subsets of ``[n]`` are Python ints used as bitmasks: bit ``i`` stands for the
element ``i + 1``.  Every Lubell quantity is an exact :class:`fractions.Fraction`.

Complexity notes (all exact, no sampling):

* :func:`chain_hit_probability` fills a ``2**n`` table, so ``n <= DP_CAP``.
* :func:`max_interval` tries every interval whose endpoints are members (plus
  the empty set and ``[n]``).  For each bottom it runs a per-level zeta
  transform over the subcube above it, unless the number of member sizes
  above the bottom already rules out beating the incumbent.  Unions of full
  levels prune almost everything (the full 20-cube takes seconds); arbitrary
  families stay practical up to ``n`` of about 12.
* :func:`vc_dimension` grows shattered sets level by level (a shattered set
  has only shattered subsets) and stops at ``2**d > |F|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb, factorial, lcm
from typing import Iterable, Iterator

import numpy as np

from .errors import CapacityError, PreconditionError, ValidationError
from .poset import Embedding, Poset, find_induced_embedding, validate_embedding

GROUND_CAP = 62
DP_CAP = 20
ZETA_CAP = 20

__all__ = [
    "GROUND_CAP", "DP_CAP", "SetFamily", "Subcube", "canonical_key",
    "lubell_mass", "lubell_on_interval", "lubell_down", "lubell_up",
    "down_masses", "up_masses", "chain_hit_probability", "find_heavy_top",
    "find_heavy_bottom", "is_shallow", "max_interval", "is_balanced",
    "restrict_to_subcube", "lift_from_subcube", "complement_dual", "projection",
    "pivots", "is_gamma_flexible", "shatters", "vc_dimension", "find_shattered", "shattered_sets",
    "private_system", "private_system_exhaustive", "is_private_system",
    "subcube_quadrant", "quadrant_cube", "theta_pair", "theta_contribution",
    "inclusion_order", "is_p_free", "find_copy", "validate_family_embedding",
    "closed_downset", "fiber_family", "compress", "expand", "bits",
]


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def canonical_key(x: int) -> tuple[int, int]:
    return (x.bit_count(), x)


def compress(x: int, positions: list[int]) -> int:
    """Re-index the bits of ``x`` found at ``positions`` to ``0..len-1``."""
    out = 0
    for k, p in enumerate(positions):
        if x >> p & 1:
            out |= 1 << k
    return out


def _compress_array(arr: np.ndarray, positions: list[int]) -> np.ndarray:
    """Vectorized :func:`compress` over a ``uint64`` array."""
    out = np.zeros(arr.shape, dtype=np.int64)
    for k, p in enumerate(positions):
        out |= ((arr >> np.uint64(p)) & np.uint64(1)).astype(np.int64) << k
    return out


def expand(y: int, positions: list[int]) -> int:
    out = 0
    for k, p in enumerate(positions):
        if y >> k & 1:
            out |= 1 << p
    return out


def _submasks(mask):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


class SetFamily:
    """Deduplicated family of subsets of ``[ground]`` in canonical order.

    Members are sorted by (popcount, value).  ``members[i]`` is the member with
    index ``i``; embeddings into a family refer to these indices.
    """

    def __init__(self, ground: int, members: Iterable[int] = (), *, trusted: bool = False):
        if not 0 <= ground <= GROUND_CAP:
            raise CapacityError(f"ground size {ground} outside 0..{GROUND_CAP}")
        if trusted:
            ms = tuple(members)
        else:
            full = (1 << ground) - 1
            uniq = set()
            for m in members:
                m = int(m)
                if m < 0 or m & ~full:
                    raise ValidationError(f"subset {m:#x} has bits outside [{ground}]")
                uniq.add(m)
            ms = tuple(sorted(uniq, key=canonical_key))
        self.ground = ground
        self.members = ms

    @classmethod
    def from_sets(cls, ground: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        """Build from sets of 1-based elements, e.g. ``[[1], [1, 2]]``."""
        masks = []
        for s in sets:
            m = 0
            for e in s:
                if not 1 <= e <= ground:
                    raise ValidationError(f"element {e} outside [{ground}]")
                m |= 1 << (e - 1)
            masks.append(m)
        return cls(ground, masks)

    @property
    def full(self) -> int:
        return (1 << self.ground) - 1

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    @cached_property
    def array(self) -> np.ndarray:
        """Members as a read-only ``uint64`` array, canonical order."""
        arr = np.fromiter(self.members, dtype=np.uint64, count=len(self.members))
        arr.flags.writeable = False
        return arr

    @cached_property
    def popcounts(self) -> np.ndarray:
        pops = np.bitwise_count(self.array).astype(np.int64)
        pops.flags.writeable = False
        return pops

    @cached_property
    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.members)}

    def index_of(self, member: int) -> int:
        try:
            return self.index[member]
        except KeyError:
            raise PreconditionError(f"{member:#x} is not a member") from None

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, x) -> bool:
        return x in self.member_set

    def __bool__(self):
        return bool(self.members)

    def __eq__(self, other):
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.ground == other.ground and self.members == other.members

    def __hash__(self):
        return hash((self.ground, self.members))

    def __repr__(self):
        return f"SetFamily(ground={self.ground}, members={len(self.members)})"

    def subfamily(self, keep) -> "SetFamily":
        """Members satisfying ``keep(member)``; stays canonical."""
        return SetFamily(self.ground, [m for m in self.members if keep(m)], trusted=True)

    def without(self, *removed: int) -> "SetFamily":
        rem = set(removed)
        return self.subfamily(lambda m: m not in rem)

    def union(self, other: "SetFamily") -> "SetFamily":
        return SetFamily(max(self.ground, other.ground), self.members + other.members)

    def level_counts(self) -> list[int]:
        if len(self.members) > 256:
            return np.bincount(self.popcounts, minlength=self.ground + 1).tolist()
        counts = [0] * (self.ground + 1)
        for m in self.members:
            counts[m.bit_count()] += 1
        return counts

    def as_sets(self) -> list[tuple[int, ...]]:
        return [tuple(b + 1 for b in bits(m)) for m in self.members]


@dataclass(frozen=True)
class Subcube:
    """Interval ``[bottom, top]`` of the Boolean lattice (bottom must be a subset of top)."""

    bottom: int
    top: int

    def __post_init__(self):
        if self.bottom & ~self.top:
            raise ValidationError("subcube bottom is not a subset of its top")

    @property
    def dim(self) -> int:
        return (self.top & ~self.bottom).bit_count()

    @property
    def free(self) -> list[int]:
        return bits(self.top & ~self.bottom)

    def __contains__(self, x: int) -> bool:
        return x & self.bottom == self.bottom and x & ~self.top == 0

    @classmethod
    def full(cls, n: int) -> "Subcube":
        return cls(0, (1 << n) - 1)


def _check_cube(F, cube):
    if cube.top & ~F.full:
        raise PreconditionError("subcube does not lie inside the ground set")


# ------------------------------------------------------------ Lubell masses

def _mass_from_counts(counts, dim):
    return sum((Fraction(c, comb(dim, k)) for k, c in enumerate(counts) if c), Fraction(0))


def lubell_mass(F: SetFamily) -> Fraction:
    """Sum over members of ``1 / binom(n, |A|)``."""
    return _mass_from_counts(F.level_counts(), F.ground)


def _interval_counts(F, cube):
    d = cube.dim
    lo, free = cube.bottom, cube.top & ~cube.bottom
    base = lo.bit_count()
    if len(F) > 256:
        arr = F.array
        sel = ((arr & np.uint64(lo)) == np.uint64(lo)) & (
            (arr & np.uint64(F.full & ~cube.top)) == 0)
        return np.bincount(F.popcounts[sel] - base, minlength=d + 1).tolist()
    counts = [0] * (d + 1)
    if (1 << d) < len(F):
        ms = F.member_set
        for s in _submasks(free):
            if (lo | s) in ms:
                counts[s.bit_count()] += 1
    else:
        hi_out = ~cube.top
        for m in F.members:
            if m & lo == lo and not m & hi_out:
                counts[m.bit_count() - base] += 1
    return counts


def lubell_on_interval(F: SetFamily, cube: Subcube) -> Fraction:
    """Expected number of hits of a random maximal chain of ``cube`` on ``F``."""
    _check_cube(F, cube)
    return _mass_from_counts(_interval_counts(F, cube), cube.dim)


def lubell_down(F: SetFamily, A: int) -> Fraction:
    return lubell_on_interval(F, Subcube(0, A))


def lubell_up(F: SetFamily, A: int) -> Fraction:
    return lubell_on_interval(F, Subcube(A, F.full))


@lru_cache(maxsize=None)
def _level_lcm(d):
    return lcm(*(comb(d, k) for k in range(d + 1)))


def _zeta_down_counts(F):
    """``cnt[k, X] = #{C in F : |C| = k, C subset of X}``.

    Counts never exceed ``binom(20, 10)``, so int32 is exact and halves the
    footprint of the 20-cube table.
    """
    n = F.ground
    cnt = np.zeros((n + 1, 1 << n), dtype=np.int64 if n <= 16 else np.int32)
    if F.members:
        arr = np.fromiter(F.members, dtype=np.int64, count=len(F))
        pop = np.fromiter((m.bit_count() for m in F.members), dtype=np.int64, count=len(F))
        cnt[pop, arr] = 1
    for i in range(n):
        v = cnt.reshape(n + 1, -1, 2, 1 << i)
        v[:, :, 1, :] += v[:, :, 0, :]
    return cnt


def _use_zeta(F):
    n = F.ground
    return len(F) > 32 and (n <= 16 or (n <= ZETA_CAP and len(F) << 6 >= 1 << n))


def down_masses(F: SetFamily) -> dict[int, Fraction]:
    """``A -> lubell_down(F, A)`` for every member."""
    if not _use_zeta(F):
        return {a: lubell_down(F, a) for a in F.members}
    cnt = _zeta_down_counts(F)
    arr = np.fromiter(F.members, dtype=np.int64, count=len(F))
    pop = np.fromiter((m.bit_count() for m in F.members), dtype=np.int64, count=len(F))
    out = {}
    for d in np.unique(pop).tolist():
        idx = arr[pop == d]
        L = _level_lcm(d)
        # L / binom(d, k) * binom(d, k) * (d + 1) stays below 2**63 for d <= 20
        num = np.zeros(idx.size, dtype=np.int64)
        for k in range(d + 1):
            num += cnt[k, idx].astype(np.int64) * (L // comb(d, k))
        for a, v in zip(idx.tolist(), num.tolist()):
            out[a] = Fraction(v, L)
    return {a: out[a] for a in F.members}


def up_masses(F: SetFamily) -> dict[int, Fraction]:
    """``A -> lubell_up(F, A)`` for every member (via the complement family)."""
    full = F.full
    comp = down_masses(complement_dual(F))
    return {a: comp[full ^ a] for a in F.members}


def chain_hit_probability(F: SetFamily, cap: int = DP_CAP) -> Fraction:
    """Exact probability that a uniform maximal chain meets ``F``.

    Counts ``F``-avoiding chain prefixes ``avoid[X]`` over the subset lattice,
    level by level.  Values are bounded by ``|X|!`` so int64 is exact for
    ``n <= 20``.
    """
    n = F.ground
    if n > cap or n > 20:
        raise CapacityError(f"chain DP needs n <= {min(cap, 20)}, got {n}")
    size = 1 << n
    avoid = np.zeros(size, dtype=np.int64)
    inF = np.zeros(size, dtype=bool)
    if F.members:
        inF[np.fromiter(F.members, dtype=np.int64, count=len(F))] = True
    masks = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int64)
    for i in range(n):
        pop += (masks >> i) & 1
    avoid[0] = 0 if inF[0] else 1
    for k in range(1, n + 1):
        lvl = masks[pop == k]
        acc = np.zeros(lvl.size, dtype=np.int64)
        for i in range(n):
            has = (lvl >> i) & 1 == 1
            acc[has] += avoid[lvl[has] ^ (1 << i)]
        acc[inF[lvl]] = 0
        avoid[lvl] = acc
    total = factorial(n)
    return Fraction(total - int(avoid[size - 1]), total)


def _heavy(F, masses):
    if not F.members:
        raise PreconditionError("family is empty")
    best = None
    for a in F.members:
        v = masses[a]
        if best is None or v > best[1]:
            best = (a, v)
    return best


def find_heavy_top(F: SetFamily) -> tuple[int, Fraction]:
    """Member maximizing ``lubell_up``; its value is at least ``l(F) / p``."""
    return _heavy(F, up_masses(F))


def find_heavy_bottom(F: SetFamily) -> tuple[int, Fraction]:
    """Member maximizing ``lubell_down``; its value is at least ``l(F) / p``."""
    return _heavy(F, down_masses(F))


def is_shallow(F: SetFamily, alpha, direction: str = "up") -> bool:
    alpha = Fraction(alpha)
    if direction == "up":
        masses = up_masses(F)
    elif direction == "down":
        masses = down_masses(F)
    else:
        raise PreconditionError("direction must be 'up' or 'down'")
    return all(v <= alpha for v in masses.values())


# ------------------------------------------------------------ interval search

@dataclass(frozen=True)
class _IntervalHit:
    bottom: int
    top: int
    num: int
    den: int

    @property
    def mass(self):
        return Fraction(self.num, self.den)


def _interval_scan(F, endpoints, *, exclude_full=False, prefer_large=False,
                   stop_at=None, presorted=False):
    """Best interval with both endpoints in ``endpoints``.

    Ties are broken by larger dimension when ``prefer_large`` and otherwise by
    the canonical order of (bottom, top).  With ``stop_at`` the first interval
    (in that scan order) of mass ``>= stop_at`` is returned immediately.
    ``endpoints`` is taken as already deduplicated and canonical when
    ``presorted``.
    """
    n = F.ground
    full = F.full
    E = list(endpoints) if presorted else sorted(set(endpoints), key=canonical_key)
    L = lcm(*(_level_lcm(d) for d in range(n + 1)))
    # scaled sums stay below (n + 1) * L; fall back to Python ints past int64
    dtype = np.int64 if L * (n + 2) < 2**62 else object
    W = np.zeros((n + 1, n + 1), dtype=dtype)
    for e in range(n + 1):
        for k in range(e + 1):
            W[e, k] = L // comb(e, k)
    # integer numerators reach stop_at * L exactly when they reach its ceiling
    target_num = None if stop_at is None else -(-Fraction(stop_at) * L // 1)
    e_arr = np.fromiter(E, dtype=np.uint64, count=len(E))
    e_pop = np.bitwise_count(e_arr).astype(np.int64)
    bottoms = E
    if target_num is not None:
        # with a fixed target the level bound filters bottoms up front
        keep = (n - e_pop + 1) >= -(-target_num // L)
        bottoms = e_arr[keep].tolist()
    m_arr, m_pop = F.array, F.popcounts
    best = None
    best_key = None
    def hopeless(bound, a):
        if target_num is not None:
            return bound < target_num
        if best_key is None:
            return False
        if prefer_large:
            return (bound, n - a.bit_count()) <= best_key
        return bound <= best_key[0]

    for a in bottoms:
        # an interval meets each level in mass at most 1: bound first by the
        # number of levels above ``a``, then by the member sizes found there
        if hopeless((n - a.bit_count() + 1) * L, a):
            continue
        ua = np.uint64(a)
        sel = (m_arr & ua) == ua
        if hopeless(np.unique(m_pop[sel]).size * L, a):
            continue
        above_a = (e_arr & ua) == ua
        if exclude_full and a == 0:
            above_a &= e_arr != np.uint64(full)
        tops_arr = e_arr[above_a]
        if not tops_arr.size:
            continue
        free = full & ~a
        pos = bits(free)
        d = len(pos)
        dims = e_pop[above_a] - a.bit_count()
        if d <= ZETA_CAP:
            cnt = np.zeros((d + 1, 1 << d), dtype=dtype)
            above = m_arr[sel]
            if above.size:
                cnt[m_pop[sel] - a.bit_count(), _compress_array(above ^ ua, pos)] = 1
            for i in range(d):
                v = cnt.reshape(d + 1, -1, 2, 1 << i)
                v[:, :, 1, :] += v[:, :, 0, :]
            bidx = _compress_array(tops_arr ^ ua, pos)
            nums = (cnt[:, bidx] * W[dims, : d + 1].T).sum(axis=0)
        else:
            nums = np.array([int(lubell_on_interval(F, Subcube(a, b)) * L)
                             for b in tops_arr.tolist()], dtype=object)
        if target_num is not None:
            hits = np.flatnonzero(nums >= target_num)
            if hits.size:
                k = int(hits[0])
                return _IntervalHit(a, int(tops_arr[k]), int(nums[k]), L)
            continue
        # first top (canonical order) with the largest key for this bottom
        top_num = int(nums.max())
        cand = np.flatnonzero(nums == top_num)
        k = int(cand[np.argmax(dims[cand])]) if prefer_large else int(cand[0])
        key = (top_num, int(dims[k])) if prefer_large else (top_num,)
        if best_key is None or key > best_key:
            best_key = key
            best = _IntervalHit(a, int(tops_arr[k]), top_num, L)
    return None if stop_at is not None else best


def max_interval(F: SetFamily) -> tuple[Subcube, Fraction]:
    """Interval maximizing ``lubell_on_interval``.

    Only endpoints in ``F`` plus the empty set and ``[n]`` are tried.  This is
    enough: inside any interval, shrinking the bottom to a suitable member and
    then the top to a suitable member never decreases the mass.
    """
    full = F.full
    E = ([0] if 0 not in F else []) + list(F.members)
    if full not in F and full:
        E.append(full)
    hit = _interval_scan(F, E, presorted=True)
    return Subcube(hit.bottom, hit.top), hit.mass


def is_balanced(F: SetFamily) -> bool:
    return max_interval(F)[1] == lubell_mass(F)


# ----------------------------------------------------- restriction / duality

def restrict_to_subcube(F: SetFamily, cube: Subcube) -> SetFamily:
    """``{C - bottom : C in F, C in cube}`` re-indexed to ground ``cube.dim``."""
    _check_cube(F, cube)
    pos = cube.free
    lo, hi_out = cube.bottom, ~cube.top
    # compressing onto a superset of the occupied bits keeps canonical order
    if len(F) > 256:
        arr = np.fromiter(F.members, dtype=np.uint64, count=len(F))
        ulo, uout = np.uint64(lo), np.uint64(F.full & hi_out)
        sel = ((arr & ulo) == ulo) & ((arr & uout) == 0)
        out = _compress_array(arr[sel] ^ ulo, pos).tolist()
    else:
        out = [compress(m ^ lo, pos) for m in F.members if m & lo == lo and not m & hi_out]
    return SetFamily(len(pos), out, trusted=True)


def lift_from_subcube(x: int, cube: Subcube) -> int:
    """Inverse of the re-indexing done by :func:`restrict_to_subcube`."""
    return expand(x, cube.free) | cube.bottom


def complement_dual(F: SetFamily) -> SetFamily:
    full = F.full
    return SetFamily(F.ground, [full ^ m for m in F.members])


def projection(F: SetFamily, T: int) -> SetFamily:
    """``{A & T : A in F}`` re-indexed to ground ``|T|``."""
    if T & ~F.full:
        raise PreconditionError("projection set not inside the ground set")
    pos = bits(T)
    return SetFamily(len(pos), {compress(m & T, pos) for m in F.members})


def closed_downset(F: SetFamily, A: int) -> SetFamily:
    """Members contained in ``A``."""
    if (1 << A.bit_count()) < len(F):
        ms = F.member_set
        return SetFamily(F.ground, [s for s in _submasks(A) if s in ms])
    return F.subfamily(lambda m: m & A == m)


def fiber_family(n: int, T: int, B: int) -> SetFamily:
    """All ``A`` with ``A & T == B`` (every subset of the complement added to ``B``)."""
    rest = ((1 << n) - 1) & ~T
    return SetFamily(n, [B | s for s in _submasks(rest)])


# -------------------------------------------------------- pivots, shattering

def pivots(F: SetFamily, A: int) -> int:
    """Mask of ``i in A`` with some ``j`` outside ``A`` such that ``A - i + j`` is in F."""
    if A not in F:
        raise PreconditionError("pivots are defined for members only")
    ms = F.member_set
    outside = bits(F.full & ~A)
    out = 0
    for i in bits(A):
        base = A ^ (1 << i)
        if any((base | (1 << j)) in ms for j in outside):
            out |= 1 << i
    return out


def is_gamma_flexible(F: SetFamily, A: int, gamma) -> bool:
    """At least ``gamma * |A|`` pivots; the empty set always qualifies."""
    return pivots(F, A).bit_count() >= Fraction(gamma) * A.bit_count()


def _trace_count(F, R, arr=None):
    if arr is not None:
        return np.unique(arr & R).size
    return len({m & R for m in F.members})


def _member_array(F):
    if len(F) > 64:
        return np.fromiter(F.members, dtype=np.uint64, count=len(F))
    return None


def shatters(F: SetFamily, R: int) -> bool:
    return _trace_count(F, R) == 1 << R.bit_count()


def _shattered_levels(F, within=None, stop=None):
    """Yield the list of shattered ``d``-sets for d = 0, 1, ... until empty."""
    if not F.members:
        return
    arr = _member_array(F)
    ground = bits(F.full if within is None else within)
    level = [0]
    d = 0
    yield level
    while level and (stop is None or d < stop):
        d += 1
        if 1 << d > len(F):
            return
        prev = set(level)
        nxt = []
        for R in level:
            top = R.bit_length()
            for e in ground:
                if e < top:
                    continue
                cand = R | (1 << e)
                if any((cand ^ (1 << b)) not in prev for b in bits(R)):
                    continue
                if _trace_count(F, cand, arr) == 1 << d:
                    nxt.append(cand)
        level = nxt
        if level:
            yield level


def vc_dimension(F: SetFamily) -> int:
    """Largest shattered size; -1 for the empty family."""
    d = -1
    for d_, _ in enumerate(_shattered_levels(F)):
        d = d_
    return d


def shattered_sets(F: SetFamily, d: int, within: int | None = None) -> list[int]:
    """Every ``d``-set inside ``within`` shattered by ``F``, in canonical order."""
    for k, level in enumerate(_shattered_levels(F, within, stop=d)):
        if k == d:
            return sorted(level, key=canonical_key)
    return []


def find_shattered(F: SetFamily, d: int, within: int | None = None) -> int | None:
    """Smallest (canonical order) ``d``-set inside ``within`` shattered by ``F``."""
    found = shattered_sets(F, d, within)
    return found[0] if found else None


# ---------------------------------------------------------- private systems

def is_private_system(R: int, witnesses) -> bool:
    """``witnesses`` lists ``B_i`` for ``i`` in ``bits(R)``; checks ``i in B_j iff i == j``."""
    elems = bits(R)
    if len(witnesses) != len(elems):
        return False
    return all(bool(witnesses[jj] >> i & 1) == (i == j)
               for ii, i in enumerate(elems) for jj, j in enumerate(elems))


def _private_recursive(F, r):
    if r == 0:
        return {}
    if not F.members or F.ground == 0:
        return None
    total = lubell_mass(F)
    hit = _interval_scan(F, F.members, exclude_full=True, prefer_large=True,
                         stop_at=total, presorted=True)
    if hit is not None:
        cube = Subcube(hit.bottom, hit.top)
        sub = _private_recursive(restrict_to_subcube(F, cube), r)
        if sub is None:
            return None
        pos = cube.free
        return {pos[e]: lift_from_subcube(b, cube) for e, b in sub.items()}
    full = F.full
    best_j, best_m = None, None
    for j in range(F.ground):
        m = lubell_on_interval(F, Subcube(0, full ^ (1 << j)))
        if best_m is None or m > best_m:
            best_j, best_m = j, m
    cube = Subcube(0, full ^ (1 << best_j))
    sub = _private_recursive(restrict_to_subcube(F, cube), r - 1)
    if sub is None:
        return None
    pos = cube.free
    out = {pos[e]: lift_from_subcube(b, cube) for e, b in sub.items()}
    others = 0
    for e in out:
        others |= 1 << e
    # B_j must contain j and avoid every other element of R
    for m in F.members:
        if m >> best_j & 1 and not m & others:
            out[best_j] = m
            return out
    return None


def private_system_exhaustive(F: SetFamily, r: int):
    """Backtracking search for an ``r``-set ``R`` whose singletons all occur as traces."""
    n, members = F.ground, F.members
    if r == 0:
        return 0, ()
    contains = [0] * n
    for idx, m in enumerate(members):
        for e in bits(m):
            contains[e] |= 1 << idx

    def witness_masks(chosen):
        out = []
        for i in chosen:
            others = 0
            for k in chosen:
                if k != i:
                    others |= contains[k]
            out.append(contains[i] & ~others)
        return out

    def rec(start, chosen):
        if len(chosen) == r:
            return chosen
        for e in range(start, n - (r - len(chosen)) + 1):
            new = chosen + [e]
            if all(witness_masks(new)):
                got = rec(e + 1, new)
                if got is not None:
                    return got
        return None

    found = rec(0, [])
    if found is None:
        return None
    ws = witness_masks(found)
    R = sum(1 << e for e in found)
    return R, tuple(members[(w & -w).bit_length() - 1] for w in ws)


def private_system(F: SetFamily, r: int):
    """Find ``R`` with ``|R| = r`` and members ``B_i`` (``i`` in R) with ``i in B_j iff i == j``.

    First runs the subcube recursion: move to a proper subcube carrying at
    least the whole mass if one exists, otherwise peel the coordinate ``j``
    whose co-facet ``[0, [n] - j]`` is heaviest, recurse for ``r - 1`` and add
    a member containing ``j`` that avoids the rest of ``R``.  If that greedy
    recursion gets stuck, an exhaustive search decides.  Returns
    ``(R_mask, witnesses)`` with witnesses ordered by element of ``R``, or None.
    """
    if r < 0:
        raise PreconditionError("r must be nonnegative")
    if r > F.ground:
        return None
    res = _private_recursive(F, r)
    if res is not None:
        R = sum(1 << e for e in res)
        out = (R, tuple(res[e] for e in sorted(res)))
    else:
        out = private_system_exhaustive(F, r)
    if out is not None and not is_private_system(*out):
        raise AssertionError("private system failed validation")
    return out


# ------------------------------------------------------------ quadrants / theta

_QUADRANTS = ("R_ij", "R_i^j", "R_j^i", "R^ij")


def quadrant_cube(n: int, i: int, j: int, which: str) -> Subcube:
    """The four subcubes fixing membership of ``i`` and ``j`` (0-based bits)."""
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise PreconditionError("need two distinct coordinates inside [n]")
    full, bi, bj = (1 << n) - 1, 1 << i, 1 << j
    cubes = {
        "R_ij": Subcube(bi | bj, full),
        "R_i^j": Subcube(bi, full ^ bj),
        "R_j^i": Subcube(bj, full ^ bi),
        "R^ij": Subcube(0, full ^ bi ^ bj),
    }
    if which not in cubes:
        raise PreconditionError(f"quadrant must be one of {_QUADRANTS}")
    return cubes[which]


def subcube_quadrant(F: SetFamily, i: int, j: int, which: str) -> SetFamily:
    return restrict_to_subcube(F, quadrant_cube(F.ground, i, j, which))


def theta_pair(F: SetFamily, i: int, j: int) -> Fraction:
    return sum((lubell_on_interval(F, quadrant_cube(F.ground, i, j, w)) for w in _QUADRANTS),
               Fraction(0))


def theta_contribution(n: int, k: int) -> Fraction:
    """Total weight a single ``k``-set contributes to the sum of theta over all pairs."""
    total = Fraction(0)
    terms = [(comb(k, 2), k - 2), (k * (n - k), k - 1), (comb(n - k, 2), k)]
    for count, level in terms:
        if count:
            total += Fraction(count, comb(n - 2, level))
    return total


# ------------------------------------------------------------ inclusion order

def inclusion_order(F: SetFamily) -> Poset:
    """Proper-containment order on the members (member index = element index)."""
    m = len(F)
    if m == 0:
        return Poset(0, ())
    arr = np.fromiter(F.members, dtype=np.uint64, count=m)
    up = []
    for i, a in enumerate(F.members):
        sup = (arr & np.uint64(a)) == np.uint64(a)
        sup[i] = False
        up.append(int.from_bytes(np.packbits(sup, bitorder="little").tobytes(), "little"))
    return Poset.trusted(m, up)


def find_copy(F: SetFamily, P: Poset) -> Embedding | None:
    """Induced copy of ``P``; the map sends pattern elements to member indices."""
    return find_induced_embedding(P, inclusion_order(F))


def is_p_free(F: SetFamily, P: Poset) -> bool:
    return find_copy(F, P) is None


def validate_family_embedding(P: Poset, F: SetFamily, emb: Embedding) -> bool:
    """Check an embedding into ``F`` using only the image members.

    The induced condition only involves image pairs, so comparing against the
    inclusion order of the image subfamily is equivalent to comparing against
    ``inclusion_order(F)``.
    """
    if len(emb.map) != P.size or len(set(emb.map)) != P.size:
        return False
    if any(not 0 <= t < len(F) for t in emb.map):
        return False
    images = [F.members[t] for t in emb.map]
    k = len(images)
    up = []
    for a in images:
        up.append(sum(1 << y for y, b in enumerate(images) if b != a and a & b == a))
    sub = Poset.trusted(k, up)
    return validate_embedding(P, sub, Embedding(tuple(range(k))))
