"""Bound formulas against high-precision oracles, plus the parameter search."""

import math
import warnings

import mpmath
import pytest

from qseal.bounds import (SecurityParameters, alpha_of,
                          binary_entropy, binary_entropy_inverse,
                          epsilon_condition, holevo_bound_ie, i_bound,
                          leak_bound_sweep, min_codeword_length,
                          parameter_search, pick_probability_bound,
                          psi_bound_sweep, psi_info_bound, redundancy_bound,
                          t_for_length)

mpmath.mp.dps = 50


def mp_entropy(a):
    a = mpmath.mpf(a)
    if a == 0 or a == 1:
        return mpmath.mpf(0)
    return -a * mpmath.log(a, 2) - (1 - a) * mpmath.log(1 - a, 2)


def test_entropy_golden_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(float(mp_entropy(0.11)), abs=1e-12)
    with pytest.raises(ValueError):
        binary_entropy(1.2)


def test_entropy_inverse():
    x = binary_entropy_inverse(0.5)
    assert 0.1099 <= x <= 0.1101
    for y in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert binary_entropy(binary_entropy_inverse(y)) == pytest.approx(y, abs=1e-10)
    with pytest.raises(ValueError):
        binary_entropy_inverse(-0.1)


def test_holevo_bound_values():
    # t=1 collapses the tight form to H(a)
    for a in (0.1, 0.5, 0.77):
        assert holevo_bound_ie(a, 1).tight == pytest.approx(binary_entropy(a), abs=1e-12)
    got = holevo_bound_ie(0.5, 3).tight
    want = float(-mpmath.mpf("0.5") * mpmath.log(mpmath.mpf("0.5"), 2)
                 - mpmath.mpf("0.5") * mpmath.log(mpmath.mpf("0.5") / 7, 2))
    assert got == pytest.approx(want, abs=1e-12)
    assert got == pytest.approx(2.4037, abs=5e-5)
    assert holevo_bound_ie(1.0, 5).tight == 0.0


def test_holevo_tight_below_loose_on_grid():
    for t in (1, 2, 3, 5, 8):
        for k in range(1, 100):
            a = k / 100
            b = holevo_bound_ie(a, t)
            assert b.tight <= b.loose + 1e-12
            if t > 1 and 0 < a < 1:
                assert b.tight < b.loose


def test_holevo_degenerate_t_zero():
    assert holevo_bound_ie(1.0, 0).tight == 0.0
    with pytest.raises(ValueError):
        holevo_bound_ie(0.5, 0)


def test_epsilon_condition_threshold():
    assert epsilon_condition(0.4, 1)
    assert not epsilon_condition(1 / 3, 1)        # strict at exactly 1/3
    assert epsilon_condition(1 / 3 + 1e-12, 1)
    assert epsilon_condition(0.001, 10) == (0.001 > 1 / 1025)


def test_i_bound_values():
    assert i_bound(1.0, 5) == 0.0
    assert i_bound(0.5, 1) == 1.5
    assert i_bound(0.9, 1) == pytest.approx(float(mp_entropy(0.9) + mpmath.mpf("0.1")), abs=1e-12)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        i_bound(0.2, 1)
    assert caught and "threshold" in str(caught[0].message)


def test_redundancy_bound():
    assert redundancy_bound(7) == 3
    assert redundancy_bound(1) == 0
    assert redundancy_bound(100) == 49
    with pytest.raises(ValueError):
        redundancy_bound(0)


def test_pick_and_psi_bounds():
    # high-precision oracle for the n=7, t=1, eps=0.9 case
    ib = mp_entropy(mpmath.mpf("0.9")) + mpmath.mpf("0.1")
    base = (7 - 1) / (7 - ib)
    assert float(base) == pytest.approx(0.93298, abs=1e-5)
    want = float(base ** 4)
    assert psi_info_bound(7, 1, 0.9) == pytest.approx(want, abs=1e-12)
    # exponent ceil((n+1)/2) = n - redundancy_bound(n): the two bounds agree
    assert pick_probability_bound(7, 1, 0.9) == pytest.approx(want, abs=1e-12)
    # trivial edge: nothing withheld, perfect pass demand
    assert pick_probability_bound(4, 0, 1.0) == 1.0
    assert psi_info_bound(4, 0, 1.0) == 1.0


def test_psi_bound_rejects_saturated_information():
    # i_bound(0.4, 1) = H(0.4) + 0.6 = 1.571 reaches the block length n = 1
    with pytest.raises(ValueError):
        psi_info_bound(1, 1, 0.4)


def test_alpha_values():
    a0 = alpha_of(0.0)
    assert a0 == pytest.approx((1 - 0.055) / (1 + 0.055), abs=1e-15)
    assert a0 < 0.896
    assert alpha_of(1.0) == pytest.approx(1 - 0.055, abs=1e-15)
    for ep in (0.0, 0.3, 0.9):
        assert alpha_of(ep) < 1.0
    with pytest.raises(ValueError):
        alpha_of(0.5, rate=0.6)


def test_min_codeword_length():
    assert min_codeword_length(0.5, 1.0) == 0
    n = min_codeword_length(0.5, 1e-6)
    assert n > 0
    alpha = alpha_of(0.5)
    assert alpha ** (n / 2) <= 1e-6 * (1 / alpha)  # ceil slack
    # threshold enforcement: the implied t must satisfy the pass condition
    assert epsilon_condition(0.5, t_for_length(n))


def test_parameter_search_grid():
    for ep in (0.5, 0.9):
        for ei in (1e-3, 1e-6):
            rep = parameter_search(SecurityParameters(ep, ei))
            assert rep.feasible
            assert epsilon_condition(ep, rep.t)
            assert rep.i_psi_bound < ei
            assert rep.self_consistent
            # minimality: n-1 fails at least one condition
            n1 = rep.n_min - 1
            t1 = t_for_length(n1)
            fails = (t1 < 1 or not epsilon_condition(ep, t1)
                     or psi_info_bound(n1, t1, ep) >= ei)
            assert fails


def test_search_skips_lengths_below_the_pass_threshold():
    # epsilon_p = 0.2 needs 2^t > 4, i.e. t >= 3, before the threshold holds;
    # the search must keep walking until the implied t reaches that
    rep = parameter_search(SecurityParameters(0.2, 1e-2))
    assert rep.feasible and rep.t >= 3
    assert epsilon_condition(0.2, rep.t)
    assert not epsilon_condition(0.2, 2)


def test_search_monotone_in_epsilon_i():
    last = None
    for ei in (1e-2, 1e-3, 1e-4, 1e-6, 1e-8):
        rep = parameter_search(SecurityParameters(0.6, ei))
        if last is not None:
            assert rep.n_min >= last
        last = rep.n_min


def test_search_infeasible_with_tiny_cap():
    rep = parameter_search(SecurityParameters(0.5, 1e-6), max_n=50)
    assert not rep.feasible
    assert rep.reason
    assert rep.n_min is None


def test_security_parameters_validation():
    with pytest.raises(ValueError):
        SecurityParameters(0.0, 0.5)
    with pytest.raises(ValueError):
        SecurityParameters(0.5, 1.0)
    SecurityParameters(1.0, 0.999)


def test_report_totality_on_grid():
    """Every report field finite and in range across a parameter grid."""
    count = 0
    for i in range(10):
        ep = 0.05 + 0.095 * i
        for j in range(10):
            ei = 10 ** (-1 - 0.5 * j)
            for rate in (0.02, 0.055, 0.2):
                rep = parameter_search(SecurityParameters(ep, ei), rate=rate)
                count += 1
                assert rep.feasible, (ep, ei, rate)
                assert 0 < rep.alpha < 1
                assert 0 <= rep.i_psi_bound <= 1
                assert 0 <= rep.p_bound <= 1
                assert rep.i_e_bound >= 0 and rep.i_bound >= 0
                assert rep.rho_bound == (rep.n_min - 1) // 2
                assert math.isfinite(rep.i_e_bound_loose)
    assert count == 300


def test_sweep_emitters():
    rows = psi_bound_sweep(0.5, n_max=400, step=2)
    assert rows and all(set(r) == {"n", "t", "i_bound", "base_ratio", "psi_info_bound"}
                        for r in rows)
    assert all(0 < r["base_ratio"] < 1.5 for r in rows)
    leak_rows = leak_bound_sweep(1, points=11)
    assert len(leak_rows) == 11
    assert leak_rows[0]["a"] == 0.0 and leak_rows[-1]["a"] == 1.0
    assert leak_rows[-1]["tight"] == 0.0
