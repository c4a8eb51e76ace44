"""Exact small-n Turán numbers for induced posets, by branch and bound.

Subsets of ``[n]`` are used directly as ids ``0 .. 2**n - 1``; a family is a
bitmask over ids.  The containment order of the whole cube is precomputed, so
an induced-copy query on a partial family is the shared embedding search
restricted to the family's ids.

Search outline:

* sets are decided in order of distance of ``|A|`` from ``n/2``, farthest
  first (extremes first, middle levels last), canonical order breaking ties;
* the include branch is tried first and is taken only when the new set does
  not complete an induced copy (only copies through the new set are searched);
* a node is pruned when ``current + weight(undecided)`` cannot beat the
  incumbent, which is seeded by a greedy middle-out pass.

Lubell objectives use integer weights ``L / binom(n, |A|)`` with ``L`` the
lcm of the level sizes, so all comparisons are exact integer comparisons.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm

from .errors import CapacityError, PreconditionError
from .family import SetFamily, canonical_key, is_p_free, lubell_mass
from .poset import Poset, _embedding_search, _search_order, named_poset

__all__ = [
    "SearchResult", "la_star_exact", "lubell_sup_exact", "la_star_bruteforce",
    "erdos_value", "sperner_value", "v2_table", "SEARCH_CAP", "BRUTE_CAP",
]

SEARCH_CAP = 6
BRUTE_CAP = 4


@dataclass(frozen=True)
class SearchResult:
    """Outcome of an exact search.

    ``optimum`` is an ``int`` for the cardinality objective and a ``Fraction``
    for the Lubell objective.  ``exhaustive`` is False when the node budget ran
    out; ``optimum`` is then only a lower bound.
    """

    optimum: int | Fraction
    witness: SetFamily
    nodes_explored: int
    exhaustive: bool
    objective: str = "cardinality"


@lru_cache(maxsize=None)
def _cube_order(n: int):
    size = 1 << n
    up = [0] * size
    down = [0] * size
    for a in range(size):
        for b in range(size):
            if a != b and a & b == a:
                up[a] |= 1 << b
                down[b] |= 1 << a
    return tuple(up), tuple(down)


def _weights(n, objective):
    if objective == "cardinality":
        return [1] * (1 << n), 1
    if objective == "lubell":
        L = lcm(*(comb(n, k) for k in range(n + 1)))
        return [L // comb(n, a.bit_count()) for a in range(1 << n)], L
    raise PreconditionError("objective must be 'cardinality' or 'lubell'")


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _CopyTester:
    """Does adding ``s`` to ``fam`` complete an induced copy of ``P`` through ``s``?"""

    def __init__(self, P: Poset, n: int):
        self.P = P
        self.up, self.down = _cube_order(n)
        self.order = _search_order(P)

    def completes(self, fam: int, s: int) -> bool:
        allowed = fam | (1 << s)
        if self.P.size > allowed.bit_count():
            return False
        for x in range(self.P.size):
            if _embedding_search(self.P, self.up, self.down, allowed, True,
                                 order=self.order, fixed={x: s}) is not None:
                return True
        return False


def _value(weight, scale, objective):
    return weight if objective == "cardinality" else Fraction(weight, scale)


def _witness_key(fam):
    return tuple(canonical_key(a) for a in sorted(_bits(fam), key=canonical_key))


def la_star_exact(n: int, P: Poset, objective: str = "cardinality",
                  require_empty_set: bool = False, budget: int | None = None,
                  canonical: bool = False) -> SearchResult:
    """Maximum size (or Lubell mass) of an induced-``P``-free family in the ``n``-cube.

    With ``require_empty_set`` the empty set is pinned into every candidate.
    With ``canonical`` ties are explored too and the witness whose sorted
    member list is least in canonical order is reported.
    """
    if not 0 <= n <= SEARCH_CAP:
        raise CapacityError(f"exact search supports n <= {SEARCH_CAP}")
    weights, scale = _weights(n, objective)
    tester = _CopyTester(P, n)
    size = 1 << n
    order = sorted(range(size), key=lambda a: (-abs(2 * a.bit_count() - n), canonical_key(a)))
    start_fam, start_w = 0, 0
    if require_empty_set:
        if tester.completes(0, 0):
            raise PreconditionError("the empty set alone already contains the pattern")
        start_fam, start_w = 1, weights[0]
        order.remove(0)
    suffix = [0] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[order[i]]

    # greedy incumbent: middle levels first
    best_fam, best_w = start_fam, start_w
    for a in sorted(order, key=lambda a: (abs(2 * a.bit_count() - n), canonical_key(a))):
        if not tester.completes(best_fam, a):
            best_fam |= 1 << a
            best_w += weights[a]

    nodes = 0
    exhausted = False

    def better(w, fam):
        if w != best_w:
            return w > best_w
        return canonical and _witness_key(fam) < _witness_key(best_fam)

    def rec(i, fam, w):
        nonlocal nodes, best_fam, best_w, exhausted
        nodes += 1
        if budget is not None and nodes > budget:
            exhausted = True
            return
        bound = w + suffix[i]
        if bound < best_w or (bound == best_w and not canonical):
            return
        if i == len(order):
            if better(w, fam):
                best_fam, best_w = fam, w
            return
        a = order[i]
        if not tester.completes(fam, a):
            rec(i + 1, fam | (1 << a), w + weights[a])
            if exhausted:
                return
        rec(i + 1, fam, w)

    rec(0, start_fam, start_w)
    witness = SetFamily(n, _bits(best_fam))
    if not is_p_free(witness, P):
        raise AssertionError("search witness contains the pattern")
    return SearchResult(_value(best_w, scale, objective), witness, nodes, not exhausted,
                        objective)


def lubell_sup_exact(n: int, P: Poset, **kwargs) -> SearchResult:
    """Largest Lubell mass of an induced-``P``-free family in the ``n``-cube."""
    return la_star_exact(n, P, objective="lubell", **kwargs)


def la_star_bruteforce(n: int, P: Poset, objective: str = "cardinality",
                       require_empty_set: bool = False) -> int | Fraction:
    """Oracle: test every one of the ``2**(2**n)`` families directly."""
    if n > BRUTE_CAP:
        raise CapacityError(f"full enumeration supports n <= {BRUTE_CAP}")
    weights, scale = _weights(n, objective)
    up, down = _cube_order(n)
    order = _search_order(P)
    best = 0
    for fam in range(1 << (1 << n)):
        if require_empty_set and not fam & 1:
            continue
        w = sum(weights[a] for a in _bits(fam))
        if w <= best:
            continue
        if P.size <= fam.bit_count() and _embedding_search(P, up, down, fam, True,
                                                          order=order) is not None:
            continue
        best = w
    return _value(best, scale, objective)


def sperner_value(n: int) -> int:
    return comb(n, n // 2)


def erdos_value(n: int, r: int) -> int:
    """Sum of the ``r - 1`` largest binomial coefficients ``binom(n, k)``."""
    if r < 2:
        raise PreconditionError("r must be at least 2")
    return sum(sorted((comb(n, k) for k in range(n + 1)), reverse=True)[: r - 1])


def v2_table(max_n: int) -> list[tuple[int, int, Fraction]]:
    """``(n, La*(n, V2), La*/binom(n, n//2))`` for ``1 <= n <= max_n``."""
    if max_n > 5:
        raise CapacityError("v2_table supports max_n <= 5")
    P = named_poset("V2")
    out = []
    for n in range(1, max_n + 1):
        value = la_star_exact(n, P).optimum
        out.append((n, value, Fraction(value, sperner_value(n))))
    return out
