from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

import oracles
from posetfree.errors import CapacityError, PreconditionError
from posetfree.family import SetFamily, is_p_free, lubell_mass
from posetfree.poset import antichain, boolean_poset, chain, named_poset, v2
from posetfree.turan import (erdos_value, la_star_bruteforce, la_star_exact, lubell_sup_exact,
                             sperner_value, v2_table)

PATTERNS = {"C2": chain(2), "C3": chain(3), "V2": v2(), "B2": boolean_poset(2),
            "A2": antichain(2)}


def _check(result, P):
    assert result.exhaustive
    assert is_p_free(result.witness, P)
    if result.objective == "cardinality":
        assert len(result.witness) == result.optimum
    else:
        assert lubell_mass(result.witness) == result.optimum


# ------------------------------------------------------------ classical values

@pytest.mark.parametrize("n", range(6))
def test_sperner(n):
    res = la_star_exact(n, chain(2))
    _check(res, chain(2))
    assert res.optimum == sperner_value(n)


@pytest.mark.parametrize("n,r", [(4, 3), (5, 3), (4, 4), (3, 3), (3, 4), (5, 4)])
def test_erdos(n, r):
    res = la_star_exact(n, chain(r))
    _check(res, chain(r))
    assert res.optimum == erdos_value(n, r)


def test_baseline_values():
    assert erdos_value(4, 3) == 10
    assert sperner_value(5) == 10
    assert all(erdos_value(n, 2) == sperner_value(n) for n in range(10))
    with pytest.raises(PreconditionError):
        erdos_value(4, 1)


def test_diamond_in_the_square():
    assert la_star_exact(2, boolean_poset(2)).optimum == 3


def test_diamond_lubell():
    assert lubell_sup_exact(2, chain(2)).optimum == 1
    for n in (3, 4):
        res = lubell_sup_exact(n, boolean_poset(2))
        _check(res, boolean_poset(2))
        assert res.optimum == Fraction(8, 3)
    assert all(lubell_sup_exact(n, boolean_poset(2)).optimum <= Fraction(8, 3)
               for n in range(5))


def test_cube_minus_one_member_is_b3_free():
    full = list(range(8))
    for drop in full:
        F = SetFamily(3, [a for a in full if a != drop])
        assert is_p_free(F, boolean_poset(3))
        assert lubell_mass(F) == 4 - Fraction(1, comb(3, drop.bit_count()))
    assert lubell_sup_exact(3, boolean_poset(3)).optimum == Fraction(11, 3)


def test_empty_set_pinned():
    res = la_star_exact(3, boolean_poset(2), objective="lubell", require_empty_set=True)
    assert 0 in res.witness
    assert res.optimum == Fraction(8, 3)
    with pytest.raises(PreconditionError):
        la_star_exact(2, chain(1), require_empty_set=True)


# ------------------------------------------------------------ oracle equivalence

@pytest.mark.parametrize("name", PATTERNS)
@pytest.mark.parametrize("n", range(4))
def test_search_matches_enumeration(name, n):
    P = PATTERNS[name]
    expected = oracles.la_star(n, P.size, P.less)
    assert la_star_exact(n, P).optimum == expected
    assert la_star_bruteforce(n, P) == expected


@pytest.mark.parametrize("name", ["C2", "B2", "V2"])
def test_lubell_search_matches_enumeration(name):
    P = PATTERNS[name]
    expected = oracles.la_star(3, P.size, P.less, lambda s: Fraction(1, comb(3, len(s))))
    assert lubell_sup_exact(3, P).optimum == expected


def test_v2_table():
    table = v2_table(4)
    # frozen from the enumeration oracle for n = 2, 3
    assert table[1][1] == 3 and table[2][1] == 5
    assert [row[1] for row in table] == sorted(row[1] for row in table)
    assert all(ratio >= 1 for _, _, ratio in table)
    with pytest.raises(CapacityError):
        v2_table(6)


@pytest.mark.parametrize("name", PATTERNS)
def test_monotone_in_n(name):
    values = [la_star_exact(n, PATTERNS[name]).optimum for n in range(5)]
    assert values == sorted(values)


# ------------------------------------------------------------ budget / caps

def test_budget_marks_partial_result():
    res = la_star_exact(5, chain(3), budget=50)
    assert not res.exhaustive
    assert res.optimum <= erdos_value(5, 3)
    assert is_p_free(res.witness, chain(3))


def test_caps():
    with pytest.raises(CapacityError):
        la_star_exact(7, chain(2))
    with pytest.raises(CapacityError):
        la_star_bruteforce(5, chain(2))
    with pytest.raises(PreconditionError):
        la_star_exact(2, chain(2), objective="volume")


def test_canonical_witness_is_least():
    res = la_star_exact(3, chain(2), canonical=True)
    # level 1 is the least level-sized antichain in canonical order
    assert res.witness == SetFamily(3, [1, 2, 4])
    levels = [F for F in (SetFamily(3, c) for c in combinations(range(8), 3))
              if is_p_free(F, chain(2))]
    assert res.witness.members == min(F.members for F in levels)


def test_antichain_free_means_chain():
    # a family without two incomparable members is a chain
    for n in range(5):
        assert la_star_exact(n, named_poset("A2")).optimum == n + 1
