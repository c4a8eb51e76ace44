import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize

from posetfree import certified
from posetfree.errors import PreconditionError
from posetfree.family import theta_contribution
from posetfree.numeric import (A_TABLE, ALPHA, B2_UPPER, a_sequence, a_sequence_direct,
                               a_unimodality_check, ak_minus_inverse_max, azuma_subset_tail,
                               b2_lower_closed_forms, b2_lower_poly, b2_upper_poly,
                               ebound_check, envelope, hypergeometric_tail_vs_ci,
                               maximize_b2_lower, maximize_b2_upper, run_suite,
                               tail_cardinality_check, theta_identity_check,
                               threshold_inequality, upper_recombination, vc_mass_asymptote)

# ------------------------------------------------------------ a_n


def test_a_table_values():
    want = [1, 2, Fraction(5, 2), Fraction(8, 3), Fraction(8, 3), Fraction(13, 5),
            Fraction(151, 60), Fraction(256, 105), Fraction(83, 35)]
    assert list(A_TABLE) == want
    assert [a_sequence(n) for n in range(9)] == want


@given(st.integers(0, 80))
def test_recurrence_matches_sum(n):
    assert a_sequence(n) == a_sequence_direct(n)


def test_a_sequence_rejects_negative():
    with pytest.raises(PreconditionError):
        a_sequence(-1)


@pytest.mark.parametrize("N", [8, 100])
def test_unimodal(N):
    rep = a_unimodality_check(N)
    assert rep.ok and rep.computed == Fraction(8, 3) and rep.details["a3_eq_a4"]


@pytest.mark.parametrize("N", [20, 1000])
def test_ak_minus_inverse(N):
    rep = ak_minus_inverse_max(N)
    assert rep.ok and rep.computed == ALPHA == Fraction(29, 12) and rep.details["argmax"] == 4
    assert a_sequence(1) - 1 == 1


# ------------------------------------------------------------ lower polynomial

def test_lower_centroid():
    assert b2_lower_poly(*(Fraction(1, 3),) * 3) == Fraction(20, 9)


def test_lower_maximum_matches_closed_form():
    value, (x1, x2, x3) = maximize_b2_lower()
    cv, (cx1, cx2, _) = b2_lower_closed_forms()
    assert abs(float(value) - 2.281856404) < 1e-9
    assert abs(value - certified.lower(cv)) < Fraction(1, 10**20)
    assert abs(x1 - certified.lower(cx1)) < Fraction(1, 10**12)
    assert abs(x2 - certified.lower(cx2)) < Fraction(1, 10**12)
    assert x1 == x3 or abs(x1 - x3) < Fraction(1, 10**20)
    assert abs(float(x1) - 0.2402530734) < 1e-8
    assert abs(float(x2) - 0.5194938532) < 1e-8


def test_lower_maximum_against_scipy():
    def neg(v):
        x1, x2 = v
        return -b2_lower_poly(x1, x2, 1 - x1 - x2)

    cons = [{"type": "ineq", "fun": lambda v: 1 - v[0] - v[1]}]
    best = max((-minimize(neg, start, bounds=[(0, 1), (0, 1)], constraints=cons,
                          method="SLSQP", tol=1e-14).fun)
               for start in ([0.2, 0.2], [0.5, 0.1], [0.1, 0.7], [0.3, 0.5]))
    value, _ = maximize_b2_lower()
    assert abs(best - float(value)) < 1e-9


def test_lower_beats_every_grid_point():
    value, _ = maximize_b2_lower()
    g = np.linspace(0, 1, 121)
    x1, x2 = np.meshgrid(g, g)
    ok = x1 + x2 <= 1
    grid = b2_lower_poly(x1[ok], x2[ok], 1 - x1[ok] - x2[ok])
    assert grid.max() <= float(value) + 1e-12


# ------------------------------------------------------------ upper polynomial

def test_upper_constant_term():
    assert b2_upper_poly(0) == Fraction(29, 12)


def test_upper_maximum():
    value, x = maximize_b2_upper()
    assert abs(value - Fraction("2.5823283024")) < Fraction(1, 10**9)
    assert abs(x - Fraction("0.6870021578")) < Fraction(1, 10**8)


def test_upper_maximum_against_sympy():
    t = sympy.Symbol("t")
    p = sum(sympy.Rational(c.numerator, c.denominator) * t ** i
            for i, c in enumerate(B2_UPPER.coeffs))
    crit = [r for r in sympy.Poly(sympy.diff(p, t), t).nroots(n=30)
            if r.is_real and 0 <= r <= 1]
    best = max([p.subs(t, 0), p.subs(t, 1)] + [p.subs(t, r) for r in crit])
    value, _ = maximize_b2_upper()
    assert abs(float(best) - float(value)) < 1e-12


def test_recombination_is_exact():
    poly, same = upper_recombination()
    assert same and poly == B2_UPPER


def test_envelope_endpoints():
    for i in range(1, 5):
        for j in range(i, 8):
            assert envelope(i, j)(1) == 0
            if i >= 2:
                assert envelope(i, j)(0) == 0
    with pytest.raises(PreconditionError):
        envelope(3, 2)


@pytest.mark.parametrize("i,j", [(3, 4), (3, 5), (3, 6), (2, 6), (2, 7)])
def test_finite_side_approaches_envelope(i, j):
    x = Fraction(687, 1000)
    gaps = []
    for n in (100, 1000, 10000):
        exact, bound = ebound_check(i, j, x, n)
        gaps.append(abs(exact - bound))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < Fraction(1, 100)
    assert ebound_check(i, j, x)[0] is None


# ------------------------------------------------------------ tails

def test_tail_examples():
    exact, bound = azuma_subset_tail(10, 0)
    assert exact == 1
    m, ok = tail_cardinality_check(100)
    assert ok
    assert m == 50 + math.ceil(math.sqrt(200 * math.log(100)))
    assert 100 * sum(comb(100, k) for k in range(m, 101)) <= 2 ** 100


@given(st.integers(1, 120), st.data())
def test_azuma_holds(n, data):
    m = data.draw(st.integers(math.ceil(n / 2), n))
    exact, bound = azuma_subset_tail(n, m)
    assert exact <= certified.lower(bound)


def test_hypergeometric_examples():
    exact, bound = hypergeometric_tail_vs_ci(60, 20, 15, 0)
    assert certified.lower(bound) == 1 >= exact
    exact, bound = hypergeometric_tail_vs_ci(60, 20, 15, Fraction(1, 2))
    assert exact <= certified.lower(bound)


@given(st.integers(10, 60), st.data())
def test_hypergeometric_tail_decreasing(n, data):
    u = data.draw(st.integers(0, n))
    k = data.draw(st.integers(0, n))
    tails = [hypergeometric_tail_vs_ci(n, u, k, Fraction(d, 4))[0] for d in range(5)]
    assert tails == sorted(tails, reverse=True)


# ------------------------------------------------------------ thresholds

def test_threshold_examples():
    assert threshold_inequality("height-two", 1)
    assert threshold_inequality("standard-example-turan", 2)
    assert threshold_inequality("standard-example-lubell", 3)
    with pytest.raises(PreconditionError):
        threshold_inequality("standard-example-turan", 1)


@pytest.mark.parametrize("name", ["height-two", "standard-example-lubell",
                                  "standard-example-turan"])
def test_thresholds_small_range(name):
    lo = 2 if name == "standard-example-turan" else 1
    assert all(threshold_inequality(name, r) for r in range(lo, 300))


# ------------------------------------------------------------ quadrant identity / VC

def test_theta_identity():
    assert theta_identity_check(30).ok


def test_theta_at_two():
    # one pair, one singleton in each mixed quadrant
    assert theta_contribution(2, 1) == 1


def test_vc_mass_report():
    rep = vc_mass_asymptote(4, 2, 24)
    assert rep.ok and 2 <= rep.computed < 8
    t1 = vc_mass_asymptote(5, 1, 20)
    assert t1.ok and t1.computed >= 4
    with pytest.raises(PreconditionError):
        vc_mass_asymptote(4, 2, 31)


def test_constant_suite_matches():
    reports = run_suite("constants")
    assert reports and all(r.ok for r in reports), [r.name for r in reports if not r.ok]
    with pytest.raises(PreconditionError):
        run_suite("everything")
