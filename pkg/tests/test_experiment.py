"""Monte Carlo and exhaustive estimation: determinism, exactness, coverage."""

from fractions import Fraction

import pytest

from lacunary import (
    InvalidParametersError,
    ResourceLimitError,
    decay_series,
    estimate_any_cyclotomic,
    estimate_phi_n,
    exhaustive_enumeration,
    lattice_ball_bound,
    reports_to_csv,
    wilson_interval,
)
from lacunary.experiment import report_to_json


# --- Wilson interval -----------------------------------------------------------


def test_wilson_basic_properties():
    low, high = wilson_interval(50, 100)
    assert 0 < low < 0.5 < high < 1
    assert wilson_interval(0, 100)[0] == 0.0
    assert wilson_interval(100, 100)[1] == 1.0
    lo1, hi1 = wilson_interval(5, 100)
    lo2, hi2 = wilson_interval(5, 10000)
    assert hi2 - lo2 < hi1 - lo1  # narrows with trials


def test_wilson_validation():
    with pytest.raises(InvalidParametersError):
        wilson_interval(5, 0)
    with pytest.raises(InvalidParametersError):
        wilson_interval(11, 10)


# --- exhaustive enumeration ------------------------------------------------------


def test_exhaustive_phi2_exact():
    r = exhaustive_enumeration(5, 12, n=2)
    assert r.exact_value == Fraction(25, 66)
    assert r.estimate == r.ci_low == r.ci_high
    assert r.mode == "exhaustive"
    assert r.trials == 792 and r.hits == 300


def test_exhaustive_phi3_zero():
    r = exhaustive_enumeration(4, 12, n=3)
    assert r.exact_value == 0


def test_exhaustive_full_support_always_divisible():
    # k = N gives 1 + x + ... + x^N, a product of cyclotomic polynomials
    for N in (1, 2, 5, 6):
        r = exhaustive_enumeration(N, N)
        assert r.exact_value == 1


def test_exhaustive_guard():
    with pytest.raises(ResourceLimitError):
        exhaustive_enumeration(20, 45)


# --- Monte Carlo ------------------------------------------------------------------


def test_estimate_single_polynomial_space():
    r = estimate_phi_n(2, 2, 3, 50, seed=5)
    assert r.estimate == 1.0  # only 1 + x + x^2 exists and it is divisible


def test_estimate_impossible_parity_is_zero():
    r = estimate_phi_n(4, 12, 2, 3000, seed=1)
    assert r.hits == 0  # even k cannot satisfy the count-matching condition


def test_estimate_deterministic_and_worker_independent():
    a = estimate_phi_n(5, 40, 2, 4000, seed=99, workers=1)
    b = estimate_phi_n(5, 40, 2, 4000, seed=99, workers=1)
    c = estimate_phi_n(5, 40, 2, 4000, seed=99, workers=2)
    d = estimate_phi_n(5, 40, 2, 4000, seed=99, workers=8)
    assert a == b == c == d
    e = estimate_any_cyclotomic(4, 60, 2000, seed=7, workers=1)
    f = estimate_any_cyclotomic(4, 60, 2000, seed=7, workers=8)
    assert e == f


def test_estimate_nontrivial_seed_changes_draws():
    a = estimate_phi_n(5, 40, 2, 2000, seed=1)
    b = estimate_phi_n(5, 40, 2, 2000, seed=2)
    assert a.hits != b.hits or a.estimate == b.estimate  # different stream


def test_estimate_within_ci_of_exact():
    exact = float(Fraction(25, 66))
    r = estimate_phi_n(5, 12, 2, 20000, seed=11)
    assert r.ci_low <= exact <= r.ci_high


def test_ci_coverage_rate():
    # Wilson 95% intervals should cover the exact value in at least 93 of
    # 100 independent-seed repetitions
    exact = float(Fraction(25, 66))
    cover = 0
    for seed in range(100):
        r = estimate_phi_n(5, 12, 2, 2000, seed=seed)
        if r.ci_low <= exact <= r.ci_high:
            cover += 1
    assert cover >= 93, f"coverage {cover}/100"


def test_ci_coverage_rate_any_event():
    exact = float(exhaustive_enumeration(4, 12).exact_value)
    cover = 0
    for seed in range(100):
        r = estimate_any_cyclotomic(4, 12, 2000, seed=seed)
        if r.ci_low <= exact <= r.ci_high:
            cover += 1
    assert cover >= 93, f"coverage {cover}/100"


def test_estimate_any_agrees_with_exhaustive_ci():
    exact = exhaustive_enumeration(4, 12).exact_value  # 67/495
    r = estimate_any_cyclotomic(4, 12, 20000, seed=4)
    assert r.ci_low <= float(exact) <= r.ci_high
    r2 = estimate_any_cyclotomic(4, 12, 20000, seed=4, mode="fs-pruned")
    assert r2.hits == r.hits  # verdict-equivalent sweeps


def test_model_level_domination():
    # for n | k the estimate must sit under the clipped ball bound plus
    # three half-widths (and the true value is zero by the parity shift)
    for k in (63, 64, 126):
        for n in (7, 9):
            if k % n:
                continue
            r = estimate_phi_n(k, 4000, n, 4000, seed=17)
            bound = min(1.0, lattice_ball_bound(k, n))
            assert r.estimate <= bound + 3 * r.ci_half_width


def test_estimate_validation():
    with pytest.raises(InvalidParametersError):
        estimate_phi_n(5, 4, 2, 100, seed=0)
    with pytest.raises(InvalidParametersError):
        estimate_any_cyclotomic(5, 10, 0, seed=0)


# --- decay series ------------------------------------------------------------------


def test_decay_singleton():
    reports = decay_series([4], 60, 500, seed=21)
    assert len(reports) == 1 and reports[0].k == 4


def test_decay_csv_deterministic():
    a = reports_to_csv(decay_series([3, 5], 60, 400, seed=8))
    b = reports_to_csv(decay_series([3, 5], 60, 400, seed=8))
    assert a == b
    assert a.startswith("k,N,n_or_any,mode,trials,hits,estimate,ci_low,ci_high,seed\n")
    assert len(a.strip().split("\n")) == 3


def test_decay_validation():
    with pytest.raises(InvalidParametersError):
        decay_series([], 60, 100, seed=0)
    with pytest.raises(InvalidParametersError):
        decay_series([61], 60, 100, seed=0)


# --- serialization -----------------------------------------------------------------


def test_report_json_mirror():
    r = exhaustive_enumeration(5, 12, n=2)
    rec = report_to_json(r)
    assert rec["n_or_any"] == 2
    assert rec["mode"] == "exhaustive"
    assert rec["hits"] == 300 and rec["trials"] == 792
    rec2 = report_to_json(estimate_any_cyclotomic(3, 20, 100, seed=1, mode="fs-pruned"))
    assert rec2["n_or_any"] == "any"
    assert rec2["mode"] == "monte-carlo:fs-pruned"
