from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from conftest import families
from corpus import corpus
from posetfree import certified
from posetfree.constructions import full_chain_family, levels
from posetfree.errors import PreconditionError, ProofStepFailure, ThresholdNotMet
from posetfree.extraction import (ANTICHAIN_CHAIN_MASS, antichain_extractor, b3_to_s3_reduce,
                                  chain_extractor, extract_height2, extract_parallel,
                                  extract_series, extract_std_example, extract_universal,
                                  heaviest_member_interval, height2_gamma, parallel, series)
from posetfree.family import (SetFamily, lubell_mass, lubell_on_interval, is_p_free,
                              validate_family_embedding)
from posetfree.poset import (antichain, boolean_poset, chain, is_isomorphic, standard_example,
                             universal, universal_dual, v2)

HALF = Fraction(1, 2)
C1, C2, A2 = chain_extractor(1), chain_extractor(2), antichain_extractor(2)

# the 20-cube and the 16-cube only run in the acceptance suite
SMALL = [(name, F) for name, F in corpus() if F.ground <= 14]


# ------------------------------------------------------------ base extractors

def test_chain_extractor_on_full_chain():
    assert chain_extractor(5).find(full_chain_family(4)) == (0, 1, 3, 7, 15)
    assert chain_extractor(5)(levels(4, range(5))).validate()
    with pytest.raises(ThresholdNotMet):
        chain_extractor(4)(levels(4, [0, 1, 2]))


def test_antichain_extractor():
    got = antichain_extractor(3).find(levels(4, [1, 2, 3]))
    assert len(got) == 3 and all(a & b not in (a, b) for a in got for b in got if a != b)
    assert antichain_extractor(2)(levels(4, range(4))).validate()
    assert antichain_extractor(2).alpha == ANTICHAIN_CHAIN_MASS


def test_composite_alphas():
    assert series(C1, C2).alpha == 3
    assert parallel(C2, A2).alpha == ANTICHAIN_CHAIN_MASS + 8
    assert is_isomorphic(series(C1, C1).pattern, chain(3))


# ------------------------------------------------------------ series

def test_series_on_chain_in_b4():
    rep = extract_series(full_chain_family(4), C1, C1)
    assert is_isomorphic(rep.pattern, chain(3))
    assert rep.validate()


def test_series_threshold():
    with pytest.raises(ThresholdNotMet):
        extract_series(levels(4, [1, 2]), C1, C1)


@pytest.mark.parametrize("name,F", [x for x in SMALL if lubell_mass(x[1]) > 2])
def test_series_trace_masses_are_shallow(name, F):
    rep = extract_series(F, C1, C1)
    down, up = rep.trace[0], rep.trace[1]
    assert down["mass"] <= down["threshold"] == 1
    assert up["mass"] <= up["threshold"] == 1
    middle = rep.trace[2]
    assert middle["down"] > 1 and middle["up"] > 1


# ------------------------------------------------------------ parallel

def test_parallel_on_ten_levels_of_b13():
    F = levels(13, range(2, 12))
    rep = extract_parallel(F, C1, C1)
    assert rep.validate()
    a, b = rep.sets
    assert a & b not in (a, b)


def test_parallel_threshold():
    with pytest.raises(ThresholdNotMet):
        extract_parallel(levels(12, range(2, 10)), C1, C1)


@pytest.mark.parametrize("name,F", [x for x in SMALL if lubell_mass(x[1]) > 8])
def test_parallel_quadrant_terms(name, F):
    rep = extract_parallel(F, C1, C1)
    heavy = rep.trace[0]["mass"]
    pair = rep.trace[1]
    terms = [v for k, v in pair.items() if k.startswith("term")]
    assert len(terms) == 4 and all(t >= heavy - 8 for t in terms)
    assert pair["theta"] >= 4 * heavy - 8


def test_parallel_of_composites():
    F = levels(9, range(10))
    rep = extract_parallel(F, C2, C1, alpha=Fraction(1))
    assert rep.validate() and len(rep.sets) == 3


# ------------------------------------------------------------ standard example

def test_std_example_r1():
    rep = extract_std_example(levels(10, range(6)), 1, HALF, HALF)
    assert rep.validate()
    a, b = rep.sets
    assert a & b not in (a, b)


def test_std_example_r2():
    rep = extract_std_example(levels(13, range(7)), 2, HALF, HALF)
    assert rep.pattern == standard_example(2) and rep.validate()


def test_std_example_preconditions():
    with pytest.raises(PreconditionError):
        extract_std_example(levels(10, range(7)), 1, HALF, HALF)
    with pytest.raises(ThresholdNotMet):
        extract_std_example(levels(10, range(4)), 1, HALF, HALF)
    with pytest.raises(PreconditionError):
        extract_std_example(levels(10, range(6)), 1, 1, HALF)


def _std_ready(F, r):
    small = all(2 * a.bit_count() <= F.ground for a in F.members)
    return small and certified.exceeds(lubell_mass(F),
                                       certified.std_example_threshold(r, HALF, HALF))


@pytest.mark.parametrize("name,F,r", [(name, F, r) for name, F in SMALL for r in (1, 2)
                                       if _std_ready(F, r)])
def test_std_example_private_inclusions(name, F, r):
    rep = extract_std_example(F, r, HALF, HALF)
    A, B = rep.sets[:r], rep.sets[r:]
    for i in range(r):
        for j in range(r):
            assert (B[j] & A[i] == B[j]) == (i != j)


# ------------------------------------------------------------ universal / height two

def test_universal_r1_direct_side():
    rep = extract_universal(levels(12, range(13)), 1, HALF)
    assert rep.tag == "U'"
    assert validate_family_embedding(universal_dual(1), rep.family, rep.embedding)


def test_universal_r1_flipped_side():
    F = levels(14, range(1, 14))
    rep = extract_universal(F, 1, HALF)
    target = universal(1) if rep.tag == "U" else universal_dual(1)
    assert validate_family_embedding(target, F, rep.embedding)


def test_universal_threshold():
    with pytest.raises(ThresholdNotMet):
        extract_universal(levels(12, range(12)), 1, HALF)


def test_height2_rejects_tall_posets():
    with pytest.raises(PreconditionError):
        extract_height2(levels(4, range(5)), chain(3))


def test_height2_threshold():
    with pytest.raises(ThresholdNotMet):
        extract_height2(levels(14, range(15)), antichain(2))


def test_height2_gamma_is_close():
    import math
    for r in (1, 2, 7, 100):
        assert abs(float(height2_gamma(r)) - (1 - math.sqrt(math.log(2) / 2 / r))) < 1e-11


# ------------------------------------------------------------ corpus completeness

@pytest.mark.parametrize("name,F", SMALL)
def test_corpus_extractions_validate(name, F):
    mass = lubell_mass(F)
    reports = []
    if mass > 2:
        reports.append(extract_series(F, C1, C1))
    if mass > 8:
        reports.append(extract_parallel(F, C1, C1))
    if _std_ready(F, 1):
        reports.append(extract_std_example(F, 1, HALF, HALF))
    if certified.exceeds(mass, certified.universal_threshold(1, HALF)):
        reports.append(extract_universal(F, 1, HALF))
    for rep in reports:
        assert rep.validate()
        assert validate_family_embedding(rep.pattern, F, rep.embedding)


# ------------------------------------------------------------ B_3 reduction

def test_reduce_chain():
    res = b3_to_s3_reduce(full_chain_family(4))
    assert len(res) == 3
    assert lubell_mass(res) == Fraction(2, 3)


def test_reduce_single_point():
    assert len(b3_to_s3_reduce(SetFamily(3, [0]))) == 0


def test_reduce_empty_rejected():
    with pytest.raises(PreconditionError):
        b3_to_s3_reduce(SetFamily(3, []))


@given(families(max_n=5, max_members=14))
def test_reduce_mass_drops_by_two(F):
    assume(len(F))
    cube, mass = heaviest_member_interval(F)
    assert mass == lubell_on_interval(F, cube)
    res = b3_to_s3_reduce(F)
    drop = 1 if cube.bottom == cube.top else 2
    assert lubell_mass(res) == mass - drop


@settings(max_examples=150)
@given(families(max_n=5, max_members=16))
def test_reduce_b3_free_gives_s3_free(F):
    assume(len(F) and is_p_free(F, boolean_poset(3)))
    assert is_p_free(b3_to_s3_reduce(F), standard_example(3))
