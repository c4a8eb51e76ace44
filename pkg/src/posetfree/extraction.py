"""Constructive witness extraction.

Each extractor takes a family whose Lubell mass clears a threshold and returns
an induced copy of a target poset together with a trace of the intermediate
choices.  Every "pick some member" step takes the first candidate in canonical
order, so traces are reproducible.  Every returned copy is re-validated against
the family's inclusion order before it is handed back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import certified
from .errors import PreconditionError, ProofStepFailure, ThresholdNotMet
from .family import (
    SetFamily, Subcube, _interval_scan, bits, closed_downset, complement_dual, compress,
    down_masses, expand, inclusion_order, is_gamma_flexible, lift_from_subcube,
    lubell_down, lubell_mass, lubell_on_interval, max_interval, pivots, private_system,
    quadrant_cube, restrict_to_subcube, shattered_sets, up_masses,
    validate_family_embedding,
)
from .poset import (
    Embedding, Poset, antichain, chain, compose_parallel, compose_series_middle, dual,
    embed_height2_into_universal, height, max_antichain, standard_example,
    subset_rank_order, universal, universal_dual,
)

__all__ = [
    "ExtractionReport", "Extractor", "chain_extractor", "antichain_extractor",
    "series", "parallel", "extract_series", "extract_parallel", "extract_std_example",
    "extract_universal", "extract_height2", "height2_gamma", "b3_to_s3_reduce",
    "heaviest_member_interval", "ANTICHAIN_CHAIN_MASS",
]

# largest Lubell mass of a chain in any cube (attained at n = 3 and 4)
ANTICHAIN_CHAIN_MASS = Fraction(8, 3)


@dataclass
class ExtractionReport:
    """An induced copy of ``pattern`` in ``family``.

    ``sets[x]`` is the member representing pattern element ``x`` and
    ``embedding`` holds the same information as member indices.
    """

    pattern: Poset
    family: SetFamily
    sets: tuple[int, ...]
    embedding: Embedding
    trace: list[dict] = field(default_factory=list)
    tag: str | None = None

    def validate(self) -> bool:
        return validate_family_embedding(self.pattern, self.family, self.embedding)


def _report(pattern, F, sets, trace, tag=None) -> ExtractionReport:
    try:
        emb = Embedding(tuple(F.index_of(s) for s in sets))
    except PreconditionError as exc:
        raise ProofStepFailure(f"extracted set is not a member: {exc}") from None
    rep = ExtractionReport(pattern, F, tuple(sets), emb, trace, tag)
    if not rep.validate():
        raise ProofStepFailure("extracted copy failed induced validation")
    return rep


@dataclass(frozen=True)
class Extractor:
    """A pattern plus a mass ``alpha`` above which ``find`` always succeeds.

    ``find(F)`` returns the image members (pattern element order) in ``F``'s
    own ground set.
    """

    pattern: Poset
    alpha: Fraction
    find: Callable[[SetFamily], tuple[int, ...]]
    name: str = ""

    def __call__(self, F: SetFamily) -> ExtractionReport:
        mass = lubell_mass(F)
        if mass <= self.alpha:
            raise ThresholdNotMet(f"mass {mass} does not exceed {self.alpha}")
        sets = self.find(F)
        return _report(self.pattern, F, sets, [{"step": self.name, "mass": mass}])


# ------------------------------------------------------------ base extractors

def _longest_chain_cube(F: SetFamily) -> list[int]:
    """Cube DP: ``f[X]`` is the longest chain of members inside ``X``."""
    n = F.ground
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int64)
    for i in range(n):
        pop += (masks >> i) & 1
    inF = np.zeros(size, dtype=np.int64)
    inF[np.fromiter(F.members, dtype=np.int64, count=len(F))] = 1
    f = inF.copy()
    for k in range(1, n + 1):
        lvl = masks[pop == k]
        best = np.zeros(lvl.size, dtype=np.int64)
        for i in range(n):
            has = (lvl >> i) & 1 == 1
            best[has] = np.maximum(best[has], f[lvl[has] ^ (1 << i)])
        f[lvl] = best + inF[lvl]
    out = []
    x = size - 1
    while f[x]:
        if inF[x]:
            out.append(x)
        need = f[x] - inF[x]
        if not need:
            break
        x = next(x ^ (1 << i) for i in bits(x) if f[x ^ (1 << i)] == need)
    return out[::-1]


def _longest_chain(F: SetFamily) -> list[int]:
    ms = F.members
    if not ms:
        return []
    # the pairwise DP is quadratic in |F|; dense families go through the cube
    if F.ground <= 20 and len(ms) > 1 << max(F.ground // 2, 8):
        return _longest_chain_cube(F)
    arr = np.fromiter(ms, dtype=np.uint64, count=len(ms))
    length = np.zeros(len(ms), dtype=np.int64)
    prev = np.full(len(ms), -1, dtype=np.int64)
    for i, a in enumerate(ms):
        if i:
            head = arr[:i]
            below = np.nonzero((head & np.uint64(a)) == head)[0]
            if below.size:
                k = below[np.argmax(length[below])]
                length[i] = length[k] + 1
                prev[i] = k
    i = int(np.argmax(length))
    out = []
    while i >= 0:
        out.append(ms[i])
        i = int(prev[i])
    return out[::-1]


def chain_extractor(r: int) -> Extractor:
    """Chains of ``r`` members exist above mass ``r - 1``."""

    def find(F):
        got = _longest_chain(F)
        if len(got) < r:
            raise ProofStepFailure(f"no {r}-chain although mass exceeds {r - 1}")
        return tuple(got[:r])

    return Extractor(chain(r), Fraction(max(r - 1, 0)), find, f"chain-{r}")


def antichain_extractor(r: int) -> Extractor:
    """Antichains of ``r`` members exist above mass ``(r-1) * 8/3``.

    Without an ``r``-antichain the family splits into ``r - 1`` chains, and
    no chain carries more than 8/3.
    """

    def find(F):
        if r == 0:
            return ()
        counts = F.level_counts()
        for k, c in enumerate(counts):
            if c >= r:
                return tuple([m for m in F.members if m.bit_count() == k][:r])
        anti = max_antichain(inclusion_order(F))
        if len(anti) < r:
            raise ProofStepFailure(f"no {r}-antichain above the chain-cover bound")
        return tuple(F.members[i] for i in sorted(anti)[:r])

    return Extractor(antichain(r), ANTICHAIN_CHAIN_MASS * max(r - 1, 0), find,
                     f"antichain-{r}")


def series(low: Extractor, high: Extractor) -> Extractor:
    """``low`` below a new middle element below ``high``."""
    return Extractor(
        compose_series_middle(low.pattern, high.pattern),
        low.alpha + high.alpha + 2,
        lambda F: extract_series(F, low, high).sets,
        f"series({low.name},{high.name})",
    )


def parallel(left: Extractor, right: Extractor) -> Extractor:
    return Extractor(
        compose_parallel(left.pattern, right.pattern),
        max(left.alpha, right.alpha) + 8,
        lambda F: extract_parallel(F, left, right).sets,
        f"parallel({left.name},{right.name})",
    )


# ------------------------------------------------------------ series / parallel

def extract_series(F: SetFamily, low: Extractor, high: Extractor,
                   alpha1=None, alpha2=None) -> ExtractionReport:
    """Copy of ``low.pattern < u < high.pattern`` with ``u`` a deep member.

    Members whose downward mass is at most ``alpha1 + 1`` or whose upward mass
    is at most ``alpha2 + 1`` are discarded; both discarded parts are shallow,
    so something survives whenever the mass exceeds ``alpha1 + alpha2 + 2``.
    """
    a1 = low.alpha if alpha1 is None else Fraction(alpha1)
    a2 = high.alpha if alpha2 is None else Fraction(alpha2)
    mass = lubell_mass(F)
    if mass <= a1 + a2 + 2:
        raise ThresholdNotMet(f"mass {mass} does not exceed {a1 + a2 + 2}")
    down, up = down_masses(F), up_masses(F)
    shallow_down = [m for m in F.members if down[m] <= a1 + 1]
    shallow_up = [m for m in F.members if up[m] <= a2 + 1]
    trace = [
        {"step": "shallow-down", "threshold": a1 + 1, "count": len(shallow_down),
         "mass": lubell_mass(SetFamily(F.ground, shallow_down, trusted=True))},
        {"step": "shallow-up", "threshold": a2 + 1, "count": len(shallow_up),
         "mass": lubell_mass(SetFamily(F.ground, shallow_up, trusted=True))},
    ]
    dropped = set(shallow_down) | set(shallow_up)
    middle = next((m for m in F.members if m not in dropped), None)
    if middle is None:
        raise ProofStepFailure("every member is shallow although the mass is large")
    trace.append({"step": "middle", "A": middle, "down": down[middle], "up": up[middle]})

    rest = F.without(middle)
    below_cube, above_cube = Subcube(0, middle), Subcube(middle, F.full)
    low_sets = [lift_from_subcube(x, below_cube)
                for x in low.find(restrict_to_subcube(rest, below_cube))]
    high_sets = [lift_from_subcube(x, above_cube)
                 for x in high.find(restrict_to_subcube(rest, above_cube))]
    pattern = compose_series_middle(low.pattern, high.pattern)
    return _report(pattern, F, low_sets + [middle] + high_sets, trace)


def extract_parallel(F: SetFamily, left: Extractor, right: Extractor,
                     alpha=None) -> ExtractionReport:
    """Copy of ``left.pattern`` and ``right.pattern`` side by side.

    After restricting to the heaviest interval (which balances the family),
    some pair ``i < j`` has quadrant total at least ``4l - 8``; then the two
    mixed quadrants each carry more than ``alpha`` and their members are
    mutually incomparable.
    """
    alpha = max(left.alpha, right.alpha) if alpha is None else Fraction(alpha)
    mass = lubell_mass(F)
    if mass <= alpha + 8:
        raise ThresholdNotMet(f"mass {mass} does not exceed {alpha + 8}")
    cube, heavy = max_interval(F)
    G = restrict_to_subcube(F, cube)
    trace = [{"step": "balance", "bottom": cube.bottom, "top": cube.top, "mass": heavy}]
    target = 4 * heavy - 8
    chosen = None
    for i in range(G.ground):
        for j in range(i + 1, G.ground):
            terms = {w: lubell_on_interval(G, quadrant_cube(G.ground, i, j, w))
                     for w in ("R_ij", "R_i^j", "R_j^i", "R^ij")}
            if sum(terms.values()) >= target:
                chosen = (i, j, terms)
                break
        if chosen:
            break
    if chosen is None:
        raise ProofStepFailure("no pair reaches the averaged quadrant total")
    i, j, terms = chosen
    trace.append({"step": "pair", "i": i, "j": j, "theta": sum(terms.values()),
                  **{f"term {w}": v for w, v in terms.items()}})

    def side(extractor, which):
        q = quadrant_cube(G.ground, i, j, which)
        found = extractor.find(restrict_to_subcube(G, q))
        return [lift_from_subcube(lift_from_subcube(x, q), cube) for x in found]

    sets = side(left, "R_i^j") + side(right, "R_j^i")
    return _report(compose_parallel(left.pattern, right.pattern), F, sets, trace)


# ------------------------------------------------------------ height-two machinery

def _swap_partner(F: SetFamily, A: int, i: int) -> int | None:
    base = A ^ (1 << i)
    for j in bits(F.full & ~A):
        cand = base | (1 << j)
        if cand in F:
            return cand
    return None


def _deep_flexible(F: SetFamily, gamma: Fraction, depth: Fraction):
    """Members, canonical order, that are gamma-flexible with downward mass above ``depth``."""
    for A in F.members:
        # a downset spans |A| + 1 levels, so it carries at most |A| + 1
        if A.bit_count() + 1 <= depth:
            continue
        if not is_gamma_flexible(F, A, gamma):
            continue
        mass = lubell_down(F, A)
        if mass > depth:
            yield A, mass


def _check_unit(name, x):
    x = Fraction(x)
    if not 0 < x < 1:
        raise PreconditionError(f"{name} must lie strictly between 0 and 1")
    return x


def extract_std_example(F: SetFamily, r: int, gamma, delta) -> ExtractionReport:
    """Induced standard example ``S_r`` in a family of small sets.

    Needs every member to have at most ``delta * n`` elements and mass above
    ``r/gamma + ln(1/(1-delta))/(1-gamma) + 1`` (certified interval bound).
    Picks a flexible member ``A`` of downward mass above ``r/gamma``, projects
    its downset onto the pivots of ``A`` and finds a private system there.

    The private-system step is retried on later candidates when it fails; see
    :func:`posetfree.family.private_system` for why that can happen.
    """
    gamma, delta = _check_unit("gamma", gamma), _check_unit("delta", delta)
    if r < 1:
        raise PreconditionError("r must be positive")
    n = F.ground
    for m in F.members:
        if m.bit_count() * delta.denominator > delta.numerator * n:
            raise PreconditionError(f"member of size {m.bit_count()} exceeds delta*n")
    mass = lubell_mass(F)
    bound = certified.std_example_threshold(r, gamma, delta)
    if not certified.exceeds(mass, bound):
        raise ThresholdNotMet(f"mass {mass} does not exceed {certified.midpoint(bound):.6f}")
    trace = [{"step": "threshold", "mass": mass, "bound_upper": certified.upper(bound)}]
    depth = r / gamma
    for A, down in _deep_flexible(F, gamma, depth):
        T = pivots(F, A)
        pos = bits(T)
        D = closed_downset(F, A)
        proj = SetFamily(len(pos), {compress(b & T, pos) for b in D.members})
        found = private_system(proj, r)
        step = {"step": "candidate", "A": A, "down": down, "pivots": T,
                "projected_mass": lubell_mass(proj)}
        if found is None:
            trace.append({**step, "outcome": "no private system"})
            continue
        R_c, wit = found
        R = expand(R_c, pos)
        elems = bits(R)
        B = []
        for w in wit:
            want = expand(w, pos)
            B.append(next(b for b in D.members if b & T == want))
        A_swaps = [_swap_partner(F, A, i) for i in elems]
        trace.append({**step, "outcome": "ok", "R": R, "B": tuple(B),
                      "A_i": tuple(A_swaps)})
        return _report(standard_example(r), F, A_swaps + B, trace)
    raise ProofStepFailure("no candidate member yields a standard example")


def _pick_antichain(options: list[list[int]], budget: int = 200_000):
    """One member per slot, pairwise incomparable, by backtracking."""
    chosen: list[int] = []
    nodes = 0

    def ok(b):
        return all(b & c != b and b & c != c for c in chosen)

    def rec(k):
        nonlocal nodes
        if k == len(options):
            return True
        for b in options[k]:
            nodes += 1
            if nodes > budget:
                return False
            if ok(b):
                chosen.append(b)
                if rec(k + 1):
                    return True
                chosen.pop()
        return False

    return list(chosen) if rec(0) else None


def extract_universal(F: SetFamily, r: int, gamma) -> ExtractionReport:
    """Induced ``U'_r`` (tag ``"U'"``) or ``U_r`` (tag ``"U"``).

    The half of the family (sets of size at most n/2, taken either in ``F`` or
    in its complement family) with larger mass is searched; ties go to ``F``
    itself.  Inside it a flexible, deep member ``A`` is chosen, the downset of
    ``A`` is projected onto its pivots, and a shattered ``r``-set ``R`` there
    supplies the bottom layer.  The bottom sets must also be pairwise
    incomparable, which is arranged by backtracking over the sets realizing
    each trace.
    """
    gamma = _check_unit("gamma", gamma)
    if r < 1:
        raise PreconditionError("r must be positive")
    mass = lubell_mass(F)
    bound = certified.universal_threshold(r, gamma)
    if not certified.exceeds(mass, bound):
        raise ThresholdNotMet(f"mass {mass} does not exceed {certified.midpoint(bound):.6f}")
    n = F.ground
    lower_half = F.subfamily(lambda m: 2 * m.bit_count() <= n)
    comp = complement_dual(F)
    comp_half = comp.subfamily(lambda m: 2 * m.bit_count() <= n)
    lo_mass, co_mass = lubell_mass(lower_half), lubell_mass(comp_half)
    flipped = co_mass > lo_mass
    G = comp_half if flipped else lower_half
    tag = "U" if flipped else "U'"
    trace = [{"step": "split", "lower_mass": lo_mass, "complement_mass": co_mass,
              "side": "complement" if flipped else "direct"}]
    order = subset_rank_order(r)
    for A, down in _deep_flexible(G, gamma, 2 * r / gamma):
        T = pivots(G, A)
        pos = bits(T)
        D = closed_downset(G, A)
        proj = SetFamily(len(pos), {compress(b & T, pos) for b in D.members})
        for R_c in shattered_sets(proj, r):
            R = expand(R_c, pos)
            elems = bits(R)
            options = []
            for s in order:
                # b_S must sit below exactly the a_i with i in S
                trace_mask = sum(1 << elems[k] for k in range(r) if not s >> k & 1)
                options.append([b for b in D.members if b & R == trace_mask])
            bottoms = _pick_antichain(options)
            if bottoms is None:
                trace.append({"step": "candidate", "A": A, "R": R,
                              "outcome": "traces not realizable as an antichain"})
                continue
            tops = [_swap_partner(G, A, i) for i in elems]
            sets = tops + bottoms
            trace.append({"step": "candidate", "A": A, "down": down, "pivots": T,
                          "projected_mass": lubell_mass(proj), "R": R, "outcome": "ok"})
            if flipped:
                sets = [F.full ^ x for x in sets]
                return _report(universal(r), F, sets, trace, tag)
            return _report(universal_dual(r), F, sets, trace, tag)
        trace.append({"step": "candidate", "A": A, "outcome": "no usable shattered set"})
    raise ProofStepFailure("no candidate member yields a universal poset")


def height2_gamma(r: int) -> Fraction:
    """Rational stand-in for ``1 - sqrt(ln2 / 2) / sqrt(r)`` (within 1e-12)."""
    c = certified.ctx.sqrt(certified.ln2() / 2)
    g = 1 - c / certified.ctx.sqrt(r)
    return Fraction(certified.midpoint(g)).limit_denominator(10**12)


def extract_height2(F: SetFamily, P: Poset) -> ExtractionReport:
    """Induced copy of an ``r``-element poset of height at most 2.

    Requires mass above ``4r + sqrt(32 ln2 r) + 6``.  Finds ``U_r`` or ``U'_r``
    and composes with the explicit embedding of ``P`` into it.
    """
    if height(P) > 2:
        raise PreconditionError("poset has height greater than 2")
    r = P.size
    if r < 1:
        raise PreconditionError("poset must be nonempty")
    mass = lubell_mass(F)
    bound = certified.height2_threshold(r)
    if not certified.exceeds(mass, bound):
        raise ThresholdNotMet(f"mass {mass} does not exceed {certified.midpoint(bound):.6f}")
    gamma = height2_gamma(r)
    if not certified.certainly_greater(bound, certified.universal_threshold(r, gamma)):
        raise ProofStepFailure("rounded gamma broke the threshold comparison")
    rep = extract_universal(F, r, gamma)
    emb = embed_height2_into_universal(P if rep.tag == "U'" else dual(P))
    sets = tuple(rep.sets[emb.map[x]] for x in range(r))
    trace = rep.trace + [{"step": "compose", "gamma": gamma, "tag": rep.tag,
                          "universal_map": emb.map}]
    return _report(P, F, sets, trace, rep.tag)


# ------------------------------------------------------------ B_3 to S_3

def heaviest_member_interval(F: SetFamily) -> tuple[Subcube, Fraction]:
    """Heaviest interval with both endpoints in ``F``; ties prefer larger dimension."""
    if not F.members:
        raise PreconditionError("family is empty")
    hit = _interval_scan(F, F.members, prefer_large=True, presorted=True)
    return Subcube(hit.bottom, hit.top), hit.mass


def b3_to_s3_reduce(F: SetFamily) -> SetFamily:
    """Restrict to the heaviest member-bounded interval and drop its two ends.

    The residual lives in a cube of dimension ``|top - bottom|`` and carries
    exactly two less than the interval, except in the degenerate case of a
    single-point interval where only one member is removed.
    """
    if not F.members:
        raise PreconditionError("family is empty")
    cube, _ = heaviest_member_interval(F)
    sub = restrict_to_subcube(F, cube)
    return sub.without(0, sub.full)
