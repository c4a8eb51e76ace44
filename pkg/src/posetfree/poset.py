"""Finite posets, the named posets used throughout, and induced embedding search.

A :class:`Poset` on ``size`` elements stores, for every element ``x``, the
bitmask ``up[x]`` of elements strictly above it.  The relation is kept
transitively closed so comparability queries are single bit tests.

Element-order conventions for the named posets:

* ``standard_example(r)``: ``a_1..a_r`` are indices ``0..r-1``, ``b_1..b_r``
  are ``r..2r-1``.
* ``universal(r)`` / ``universal_dual(r)``: ``a_1..a_r`` are indices
  ``0..r-1``; ``b_S`` follow, with subsets ``S`` of ``{1..r}`` listed in
  subset-rank order (by size, then by bitmask value).
* ``boolean_poset(k)``: element ``i`` is the subset with bitmask ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError, ValidationError

__all__ = [
    "Poset", "Embedding", "poset_from_relations", "chain", "antichain",
    "boolean_poset", "standard_example", "universal", "universal_dual", "v2",
    "dual", "height", "width", "max_antichain", "compose_series", "compose_series_middle",
    "compose_parallel", "find_induced_embedding", "validate_embedding",
    "is_isomorphic", "embed_height2_into_universal", "subset_rank_order",
    "universal_b_index", "named_poset",
]


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Poset:
    """Strict partial order on ``range(size)``; ``up[x]`` is the mask of y with x < y."""

    size: int
    up: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0 or len(self.up) != self.size:
            raise ValidationError("up must have one mask per element")
        full = (1 << self.size) - 1
        for x, m in enumerate(self.up):
            if m & ~full:
                raise ValidationError(f"element {x} relates to an index >= size")
            if m >> x & 1:
                raise ValidationError(f"relation is not irreflexive at {x}")
        for x, m in enumerate(self.up):
            for y in _bits(m):
                if self.up[y] & ~m:
                    raise ValidationError("relation is not transitively closed")
                if self.up[y] >> x & 1:
                    raise ValidationError(f"cycle through {x} and {y}")
        if self.labels is not None:
            if len(self.labels) != self.size or len(set(self.labels)) != self.size:
                raise ValidationError("labels must be distinct, one per element")

    @classmethod
    def trusted(cls, size, up, labels=None):
        """Build without re-validating; ``up`` must already be a closed strict order."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "size", size)
        object.__setattr__(obj, "up", tuple(up))
        object.__setattr__(obj, "labels", tuple(labels) if labels is not None else None)
        return obj

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.size
        for x, m in enumerate(self.up):
            for y in _bits(m):
                down[y] |= 1 << x
        return tuple(down)

    @cached_property
    def incomparable(self) -> tuple[int, ...]:
        full = (1 << self.size) - 1
        return tuple(full & ~(u | d | (1 << x))
                     for x, (u, d) in enumerate(zip(self.up, self.down)))

    def less(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def comparable(self, x: int, y: int) -> bool:
        return x == y or self.less(x, y) or self.less(y, x)

    def relation_matrix(self) -> np.ndarray:
        """Boolean matrix ``M[x, y] = x < y``."""
        m = np.zeros((self.size, self.size), dtype=bool)
        for x, mask in enumerate(self.up):
            for y in _bits(mask):
                m[x, y] = True
        return m

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.size) for y in _bits(self.up[x])]

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs of the Hasse diagram, recomputed on demand."""
        out = []
        for x in range(self.size):
            for y in _bits(self.up[x]):
                if not self.up[x] & self.down[y]:
                    out.append((x, y))
        return out

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def maximal(self) -> list[int]:
        return [x for x in range(self.size) if not self.up[x]]

    def minimal(self) -> list[int]:
        return [x for x in range(self.size) if not self.down[x]]

    def __repr__(self):
        return f"Poset(size={self.size}, relations={len(self.pairs())})"


@dataclass(frozen=True)
class Embedding:
    """Injective map ``pattern element -> target index`` (``map[x]``)."""

    map: tuple[int, ...]

    def __len__(self):
        return len(self.map)

    def __getitem__(self, x):
        return self.map[x]


def _close(size, up):
    up = list(up)
    for k in range(size):
        bk = 1 << k
        for i in range(size):
            if up[i] & bk:
                up[i] |= up[k]
    return up


def poset_from_relations(size: int, pairs: Iterable[tuple[int, int]],
                         labels: Sequence[str] | None = None) -> Poset:
    """Transitive closure of ``pairs`` (each ``(i, j)`` meaning i < j)."""
    if size < 0:
        raise ValidationError("size must be nonnegative")
    up = [0] * size
    for i, j in pairs:
        if not (0 <= i < size and 0 <= j < size):
            raise ValidationError(f"pair ({i}, {j}) out of range for size {size}")
        if i == j:
            raise ValidationError(f"cycle: {i} < {i}")
        up[i] |= 1 << j
    up = _close(size, up)
    for x in range(size):
        if up[x] >> x & 1:
            raise ValidationError(f"cycle detected through element {x}")
    return Poset(size, tuple(up), tuple(labels) if labels is not None else None)


def _from_less(size, less, labels=None):
    up = [0] * size
    for x in range(size):
        for y in range(size):
            if x != y and less(x, y):
                up[x] |= 1 << y
    return Poset(size, tuple(up), tuple(labels) if labels is not None else None)


# ---------------------------------------------------------------- named posets

def chain(r: int) -> Poset:
    return _from_less(r, lambda x, y: x < y, [f"c{i + 1}" for i in range(r)])


def antichain(r: int) -> Poset:
    return Poset(r, (0,) * r, tuple(f"x{i + 1}" for i in range(r)))


def _set_label(mask):
    return "{" + ",".join(str(i + 1) for i in _bits(mask)) + "}"


def boolean_poset(k: int) -> Poset:
    n = 1 << k
    return _from_less(n, lambda x, y: x != y and x & y == x,
                      [_set_label(i) for i in range(n)])


def standard_example(r: int) -> Poset:
    def less(x, y):
        # b_j < a_i iff i != j
        return x >= r and y < r and x - r != y
    labels = [f"a{i + 1}" for i in range(r)] + [f"b{j + 1}" for j in range(r)]
    return _from_less(2 * r, less, labels)


def subset_rank_order(r: int) -> list[int]:
    """Subsets of ``{0..r-1}`` as bitmasks, ordered by (size, value)."""
    return sorted(range(1 << r), key=lambda s: (s.bit_count(), s))


def universal_b_index(r: int, s_mask: int) -> int:
    """Element index of ``b_S`` in ``universal(r)`` / ``universal_dual(r)``."""
    return r + subset_rank_order(r).index(s_mask)


def _universal(r, dual_):
    order = subset_rank_order(r)
    size = r + len(order)

    def less(x, y):
        if not dual_:
            # a_j < b_S iff j in S
            return x < r <= y and order[y - r] >> x & 1
        return y < r <= x and order[x - r] >> y & 1
    labels = [f"a{i + 1}" for i in range(r)] + ["b" + _set_label(s) for s in order]
    return _from_less(size, less, labels)


def universal(r: int) -> Poset:
    return _universal(r, False)


def universal_dual(r: int) -> Poset:
    return _universal(r, True)


def v2() -> Poset:
    """Three elements ``a, b1, b2`` with ``a < b1`` and ``a < b2``."""
    return Poset(3, (0b110, 0, 0), ("a", "b1", "b2"))


def named_poset(token: str) -> Poset:
    """Parse the CLI tokens ``C<r> A<r> B<k> S<r> U<r> Ud<r> V2``."""
    makers = [("Ud", universal_dual), ("U", universal), ("C", chain),
              ("A", antichain), ("B", boolean_poset), ("S", standard_example)]
    if token == "V2":
        return v2()
    for prefix, make in makers:
        if token.startswith(prefix) and token[len(prefix):].isdigit():
            return make(int(token[len(prefix):]))
    raise ValidationError(f"unknown poset token {token!r}")


# -------------------------------------------------------------- constructions

def dual(p: Poset) -> Poset:
    return Poset(p.size, p.down, p.labels)


def height(p: Poset) -> int:
    """Maximum chain size (longest-path DP over a linear extension)."""
    h = _element_heights(p)
    return max(h, default=0)


def _element_heights(p):
    order = sorted(range(p.size), key=lambda x: p.down[x].bit_count())
    h = [1] * p.size
    for x in order:
        for y in _bits(p.down[x]):
            h[x] = max(h[x], h[y] + 1)
    return h


def _comparability_matching(p):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    rows, cols = [], []
    for x in range(p.size):
        for y in _bits(p.up[x]):
            rows.append(x)
            cols.append(y)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                       shape=(p.size, p.size))
    return maximum_bipartite_matching(graph, perm_type="column")


def width(p: Poset) -> int:
    """Maximum antichain size.

    By Dilworth's theorem this equals ``size`` minus a maximum matching in the
    bipartite graph ``x -> y`` for ``x < y``, so it is polynomial rather than a
    maximum independent set search.
    """
    if p.size == 0:
        return 0
    match = _comparability_matching(p)
    return p.size - int((match >= 0).sum())


def max_antichain(p: Poset) -> list[int]:
    """A maximum antichain, read off a minimum vertex cover (Koenig)."""
    if p.size == 0:
        return []
    match = _comparability_matching(p)
    match_right = [-1] * p.size
    for x, y in enumerate(match):
        if y >= 0:
            match_right[int(y)] = x
    # alternating search from unmatched left vertices
    seen_left = [match[x] < 0 for x in range(p.size)]
    seen_right = [False] * p.size
    stack = [x for x in range(p.size) if seen_left[x]]
    while stack:
        x = stack.pop()
        for y in _bits(p.up[x]):
            if not seen_right[y]:
                seen_right[y] = True
                z = match_right[y]
                if z >= 0 and not seen_left[z]:
                    seen_left[z] = True
                    stack.append(z)
    # cover = unreached left plus reached right; the antichain avoids both
    return [x for x in range(p.size) if seen_left[x] and not seen_right[x]]


def _join_labels(*posets):
    if any(q.labels is None for q in posets):
        return None
    labels = [lab for q in posets for lab in q.labels]
    return labels if len(set(labels)) == len(labels) else None


def compose_parallel(p: Poset, q: Poset) -> Poset:
    up = list(p.up) + [m << p.size for m in q.up]
    return Poset(p.size + q.size, tuple(up), _tuple(_join_labels(p, q)))


def compose_series(p: Poset, q: Poset) -> Poset:
    """Every element of ``p`` below every element of ``q``."""
    top = ((1 << q.size) - 1) << p.size
    up = [m | top for m in p.up] + [m << p.size for m in q.up]
    return Poset(p.size + q.size, tuple(up), _tuple(_join_labels(p, q)))


def compose_series_middle(p1: Poset, p2: Poset) -> Poset:
    """``p1`` below a new element ``u`` below ``p2``; ``u`` has index ``p1.size``."""
    return compose_series(compose_series(p1, Poset(1, (0,), ("u",))), p2)


def _tuple(x):
    return tuple(x) if x is not None else None


# --------------------------------------------------------- embedding search

def _search_order(pattern):
    h = _element_heights(pattern)
    return sorted(range(pattern.size),
                  key=lambda x: (h[x], -pattern.down[x].bit_count(), x))


def _embedding_search(pattern, t_up, t_down, allowed, induced, order=None,
                      fixed=None):
    """Backtracking core shared by poset targets and Boolean-lattice targets.

    ``t_up``/``t_down`` are indexable by target id and hold masks of target
    ids; ``allowed`` is the mask of usable target ids.  Returns a dict
    pattern element -> target id, or None.
    """
    k = pattern.size
    if k == 0:
        return {}
    if order is None:
        order = _search_order(pattern)
    fixed = fixed or {}
    order = [x for x in order if x in fixed] + [x for x in order if x not in fixed]
    pos = {x: i for i, x in enumerate(order)}
    # relation of each element to the earlier ones in the order
    below_prev, above_prev, inc_prev = [], [], []
    for x in order:
        earlier = [y for y in order[:pos[x]]]
        below_prev.append([y for y in earlier if pattern.less(y, x)])
        above_prev.append([y for y in earlier if pattern.less(x, y)])
        inc_prev.append([y for y in earlier if not pattern.comparable(x, y)])
    need_down = [pattern.down[x].bit_count() for x in order]
    need_up = [pattern.up[x].bit_count() for x in order]

    assign = {}

    def candidates(i):
        x = order[i]
        c = allowed
        for y in below_prev[i]:
            c &= t_up[assign[y]]
        for y in above_prev[i]:
            c &= t_down[assign[y]]
        if induced:
            for y in inc_prev[i]:
                t = assign[y]
                c &= ~(t_up[t] | t_down[t])
        for y in assign.values():
            c &= ~(1 << y)
        if x in fixed:
            c &= 1 << fixed[x]
        return c

    def rec(i):
        if i == k:
            return True
        c = candidates(i)
        x = order[i]
        for t in _bits(c):
            if ((t_down[t] & allowed).bit_count() < need_down[i]
                    or (t_up[t] & allowed).bit_count() < need_up[i]):
                continue
            assign[x] = t
            if rec(i + 1):
                return True
            del assign[x]
        return False

    return dict(assign) if rec(0) else None


def find_induced_embedding(pattern: Poset, target: Poset,
                           mode: str = "induced") -> Embedding | None:
    """Find a copy of ``pattern`` in ``target``.

    ``mode="induced"`` requires ``x < y`` iff ``map[x] < map[y]``;
    ``mode="weak"`` only the forward implication.  Pattern elements are placed
    in a fixed linear extension (by element height, larger down-degree first)
    and candidates are tried in ascending target index, so the result is the
    lexicographically least embedding with respect to that placement order.
    """
    if mode not in ("induced", "weak"):
        raise PreconditionError(f"unknown mode {mode!r}")
    if pattern.size > target.size:
        return None
    allowed = (1 << target.size) - 1
    found = _embedding_search(pattern, target.up, target.down, allowed,
                              mode == "induced")
    if found is None:
        return None
    return Embedding(tuple(found[x] for x in range(pattern.size)))


def validate_embedding(pattern: Poset, target: Poset, emb: Embedding,
                       mode: str = "induced") -> bool:
    """Independent pairwise check of the embedding conditions."""
    m = emb.map
    if len(m) != pattern.size or len(set(m)) != len(m):
        return False
    if any(not 0 <= t < target.size for t in m):
        return False
    for x in range(pattern.size):
        for y in range(pattern.size):
            if x == y:
                continue
            p_rel = pattern.less(x, y)
            t_rel = target.less(m[x], m[y])
            if p_rel and not t_rel:
                return False
            if mode == "induced" and t_rel and not p_rel:
                return False
    return True


def is_isomorphic(p: Poset, q: Poset) -> bool:
    """Two induced embeddings plus equal size."""
    return (p.size == q.size and find_induced_embedding(p, q) is not None
            and find_induced_embedding(q, p) is not None)


def embed_height2_into_universal(p: Poset) -> Embedding:
    """Explicit embedding of a height <= 2 poset on r elements into ``universal_dual(r)``.

    Maximal elements ``x_1..x_m`` (in index order) go to ``a_1..a_m``; any
    other ``x_i`` goes to ``b_{S_i}`` with ``S_i = {j <= m : x_i < x_j} + {i}``,
    where ``i`` is its position in the maximal-first ordering.
    """
    if height(p) > 2:
        raise PreconditionError("poset has height greater than 2")
    r = p.size
    maxi = p.maximal()
    rest = [x for x in range(r) if x not in maxi]
    ordered = maxi + rest
    position = {x: i for i, x in enumerate(ordered)}
    order = subset_rank_order(r)
    b_index = {s: r + i for i, s in enumerate(order)}
    image = [0] * r
    for x in maxi:
        image[x] = position[x]
    for x in rest:
        s = 1 << position[x]
        for y in _bits(p.up[x]):
            s |= 1 << position[y]
        image[x] = b_index[s]
    emb = Embedding(tuple(image))
    if not validate_embedding(p, universal_dual(r), emb):
        raise AssertionError("universal embedding failed validation")
    return emb
