from fractions import Fraction
from math import comb

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from conftest import as_frozensets, families
from posetfree import certified
from posetfree.constructions import full_chain_family, levels, priv_sharp
from posetfree.errors import CapacityError, PreconditionError, ValidationError
from posetfree.family import (SetFamily, Subcube, chain_hit_probability, complement_dual,
                              down_masses, find_copy, find_heavy_bottom, find_heavy_top,
                              fiber_family, is_balanced, is_gamma_flexible, is_p_free,
                              is_private_system, is_shallow, lift_from_subcube, lubell_down,
                              lubell_mass, lubell_on_interval, lubell_up, max_interval, pivots,
                              private_system, private_system_exhaustive, projection,
                              quadrant_cube, restrict_to_subcube, shatters, subcube_quadrant,
                              theta_pair, up_masses, validate_family_embedding, vc_dimension)
from posetfree.poset import antichain, boolean_poset


def fam(n, *sets):
    return SetFamily.from_sets(n, sets)


# ------------------------------------------------------------ construction

def test_canonical_order_and_dedup():
    F = SetFamily(3, [0b110, 0b001, 0b001, 0])
    assert F.members == (0, 0b001, 0b110)


def test_bits_outside_ground_rejected():
    with pytest.raises(ValidationError):
        SetFamily(2, [0b100])
    with pytest.raises(CapacityError):
        SetFamily(63, [])


def test_subcube_invariant():
    with pytest.raises(ValidationError):
        Subcube(0b01, 0b10)


# ------------------------------------------------------------ Lubell masses

def test_level_mass_is_one():
    for n in range(6):
        for k in range(n + 1):
            assert lubell_mass(levels(n, [k])) == 1


def test_chain_mass_three():
    assert lubell_mass(full_chain_family(3)) == Fraction(8, 3)


def test_sharpness_family_mass():
    F = SetFamily(5, [0] + [a for a in range(32) if a.bit_count() > 3])
    assert lubell_mass(F) == 3


def test_interval_examples():
    F = fam(3, [1], [1, 2])
    assert lubell_on_interval(F, Subcube(0b001, 0b111)) == Fraction(3, 2)
    assert lubell_on_interval(F, Subcube.full(3)) == lubell_mass(F)
    assert lubell_on_interval(F, Subcube(0b100, 0b110)) == 0


def test_down_up_examples():
    F = fam(3, [], [1], [1, 2])
    assert lubell_down(F, 0b011) == Fraction(5, 2)
    assert lubell_down(F, 0b111) == lubell_mass(F)
    assert lubell_up(F, 0) == lubell_mass(F)


def test_chain_hit_examples():
    assert chain_hit_probability(levels(3, [2])) == 1
    assert chain_hit_probability(fam(3, [1])) == Fraction(1, 3)
    assert chain_hit_probability(fam(3, [1], [2, 3])) == Fraction(2, 3)
    with pytest.raises(CapacityError):
        chain_hit_probability(SetFamily(21, []))


def test_heavy_examples():
    assert find_heavy_top(SetFamily(2, [0])) == (0, 1)
    assert find_heavy_bottom(full_chain_family(3)) == (0b111, Fraction(8, 3))
    with pytest.raises(PreconditionError):
        find_heavy_top(SetFamily(2, []))


def test_shallow_examples():
    assert is_shallow(levels(4, [2]), 1, "up")
    assert not is_shallow(full_chain_family(3), 2, "down")
    assert is_shallow(SetFamily(3, []), 0, "down")


def test_max_interval_examples():
    cube, mass = max_interval(fam(3, [], [1]))
    assert (cube, mass) == (Subcube(0, 0b001), 2)
    assert not is_balanced(fam(3, [], [1]))
    assert max_interval(SetFamily(2, [0])) == (Subcube(0, 0), 1)
    assert is_balanced(SetFamily(2, [0]))
    assert is_balanced(levels(5, [2]))


def test_restrict_examples():
    F = fam(3, [1], [1, 2])
    assert restrict_to_subcube(F, Subcube(0b001, 0b011)) == SetFamily(1, [0, 1])
    assert restrict_to_subcube(F, Subcube.full(3)) == F
    assert len(restrict_to_subcube(F, Subcube(0b100, 0b100))) == 0


def test_complement_examples():
    assert complement_dual(SetFamily(2, [0])) == SetFamily(2, [3])
    assert complement_dual(levels(5, [1])) == levels(5, [4])


def test_projection_examples():
    F = fam(3, [1], [1, 2], [2, 3])
    assert projection(F, 0b011) == fam(2, [1], [1, 2], [2])
    assert projection(F, 0b111) == F
    assert projection(F, 0) == SetFamily(0, [0])


def test_pivot_examples():
    F = fam(3, [1, 2], [1, 3])
    assert pivots(F, 0b011) == 0b010
    E = SetFamily(3, [0])
    assert pivots(E, 0) == 0 and is_gamma_flexible(E, 0, Fraction(99, 100))
    L = levels(5, [2])
    assert all(is_gamma_flexible(L, a, 1) for a in L)
    with pytest.raises(PreconditionError):
        pivots(F, 0b100)


def test_vc_examples():
    assert vc_dimension(SetFamily(4, [a for a in range(16) if a.bit_count() <= 1])) == 1
    assert vc_dimension(SetFamily(4, range(16))) == 4
    assert vc_dimension(SetFamily(3, [0])) == 0
    assert shatters(SetFamily(2, range(4)), 0b11)


def test_private_system_examples():
    singles = levels(5, [1])
    R, ws = private_system(singles, 3)
    assert R == 0b111 and ws == (1, 2, 4)
    sharp = priv_sharp(4, 3)
    assert private_system(sharp, 3) is None
    got = private_system(sharp, 2)
    assert got is not None and is_private_system(*got)


def test_private_system_chain_gap():
    # mass above 2 but a chain has no two incomparable members
    F = fam(3, [], [1], [1, 2, 3])
    assert lubell_mass(F) > 2
    assert private_system(F, 2) is None


def test_quadrant_examples():
    F = fam(4, [1, 2])
    assert lubell_on_interval(F, quadrant_cube(4, 0, 1, "R_ij")) == 1
    with pytest.raises(PreconditionError):
        quadrant_cube(4, 1, 1, "R_ij")


def test_copy_examples():
    assert is_p_free(levels(4, [1, 2]), boolean_poset(2))
    F = fam(2, [], [1], [2], [1, 2])
    emb = find_copy(F, boolean_poset(2))
    assert emb is not None and validate_family_embedding(boolean_poset(2), F, emb)
    assert is_p_free(full_chain_family(5), antichain(2))


# ------------------------------------------------------------ oracle agreement

@given(families(max_n=4))
def test_max_interval_matches_all_intervals(F):
    assume(len(F))
    assert max_interval(F)[1] == oracles.best_interval_mass(F.ground, as_frozensets(F))


@given(families(max_n=5))
def test_chain_hit_matches_permutations(F):
    assert chain_hit_probability(F) == oracles.chain_hit_probability(F.ground, as_frozensets(F))


@given(families(max_n=5), st.data())
def test_pivots_match(F, data):
    assume(len(F))
    A = data.draw(st.sampled_from(F.members))
    got = {i + 1 for i in range(F.ground) if pivots(F, A) >> i & 1}
    assert got == oracles.pivots(F.ground, as_frozensets(F),
                                 frozenset(i + 1 for i in range(F.ground) if A >> i & 1))


@given(families(max_n=5))
def test_vc_matches(F):
    assert vc_dimension(F) == oracles.vc_dimension(F.ground, as_frozensets(F))


@given(families(max_n=5), st.integers(0, 4))
def test_private_system_matches_existence(F, r):
    got = private_system(F, r)
    assert (got is not None) == (r <= F.ground and oracles.has_private_system(
        F.ground, as_frozensets(F), r))
    if got is not None:
        assert is_private_system(*got)
        assert all(b in F for b in got[1])


@given(families(max_n=4, max_members=7))
def test_p_free_matches_oracle(F):
    p = boolean_poset(2)
    brute = oracles.family_has_copy(as_frozensets(F), 4, p.less)
    assert is_p_free(F, p) == (not brute)


# ------------------------------------------------------------ invariants

@given(families(max_n=6))
def test_complement_preserves_mass(F):
    assert lubell_mass(complement_dual(F)) == lubell_mass(F)
    assert complement_dual(complement_dual(F)) == F


@given(families(max_n=6), st.data())
def test_restriction_mass_equals_interval_mass(F, data):
    top = data.draw(st.integers(0, F.full))
    bottom = data.draw(st.integers(0, F.full)) & top
    cube = Subcube(bottom, top)
    G = restrict_to_subcube(F, cube)
    assert lubell_mass(G) == lubell_on_interval(F, cube)
    assert all(lift_from_subcube(x, cube) in F for x in G)


@given(families(min_n=2, max_n=6), st.data())
def test_quadrants_partition(F, data):
    i, j = data.draw(st.lists(st.integers(0, F.ground - 1), min_size=2, max_size=2,
                              unique=True))
    total = sum(len(subcube_quadrant(F, i, j, w)) for w in ("R_ij", "R_i^j", "R_j^i", "R^ij"))
    assert total == len(F)


@given(families(min_n=2, max_n=6))
def test_theta_average_bound(F):
    n = F.ground
    theta = sum(theta_pair(F, i, j) for i in range(n) for j in range(i + 1, n))
    assert theta >= comb(n, 2) * (4 * lubell_mass(F) - 8)


@given(families(max_n=6), st.data())
def test_projection_mass_bound(F, data):
    T = data.draw(st.integers(0, F.full))
    t = T.bit_count()
    P = projection(F, T)
    assert len(P) <= len(F)
    assert lubell_down(P, P.full) * (F.ground + 1) >= (t + 1) * lubell_mass(F)


@given(st.integers(0, 7), st.data())
def test_fiber_identity(n, data):
    T = data.draw(st.integers(0, (1 << n) - 1))
    B = data.draw(st.integers(0, (1 << n) - 1)) & T
    t = T.bit_count()
    assert lubell_mass(fiber_family(n, T, B)) == Fraction(n + 1, (t + 1) * comb(t, B.bit_count()))


@given(families(max_n=6))
def test_shallow_bound(F):
    assume(len(F))
    for direction, masses in (("up", up_masses(F)), ("down", down_masses(F))):
        alpha = max(masses.values())
        assert is_shallow(F, alpha, direction)
        assert lubell_mass(F) <= alpha


@given(families(max_n=6))
def test_heavy_witness_bound(F):
    assume(len(F))
    p = chain_hit_probability(F)
    for _, value in (find_heavy_top(F), find_heavy_bottom(F)):
        assert value * p >= lubell_mass(F)


@given(families(max_n=6))
def test_vc_mass_bound(F):
    assume(len(F))
    d = vc_dimension(F) + 1
    assert len(F) <= sum(comb(F.ground, k) for k in range(d))
    assert lubell_mass(F) < 2 * d


@settings(max_examples=200)
@given(families(min_n=1, max_n=8), st.sampled_from([Fraction(1, 3), Fraction(1, 2),
                                                    Fraction(2, 3)]))
def test_flexible_free_bound(F, gamma):
    delta = Fraction(1, 2)
    n = F.ground
    members = [a for a in F.members if a.bit_count() * 2 <= n]
    # strip nonempty flexible members until none is left; keeping the empty set
    # makes the check slightly stronger than the hypothesis requires
    while True:
        G = SetFamily(n, members, trusted=True)
        flex = [a for a in members if a and is_gamma_flexible(G, a, gamma)]
        if not flex:
            break
        members = [a for a in members if a not in flex]
    G = SetFamily(n, members)
    bound = certified.flexible_bound(gamma, delta)
    assert certified.below(lubell_mass(G), bound)


@given(families(max_n=5))
def test_exhaustive_private_agrees(F):
    for r in range(F.ground + 1):
        assert (private_system_exhaustive(F, r) is None) == (
            not oracles.has_private_system(F.ground, as_frozensets(F), r))
