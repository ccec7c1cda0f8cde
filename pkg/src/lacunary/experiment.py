"""Seeded Monte Carlo and exhaustive estimation of cyclotomic-divisor events.

Every trial is a pure function of (seed, index), so hit counts are exact
integer sums that do not depend on execution order or worker count.
Estimates carry Wilson 95% intervals, which stay honest near 0 and 1
where most of these probabilities live.
"""

import multiprocessing
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, sqrt

from .cyclotomic import (
    _candidate_hit,
    _prepped_candidates,
    divides_phi_dense,
    sweep_cap,
)
from .errors import InvalidParametersError, ResourceLimitError
from .sparsepoly import SparsePoly, sample_random

_Z95 = 1.959963984540054
_EXHAUSTIVE_GUARD = 10**7
_PARALLEL_MIN_TRIALS = 256


@dataclass(frozen=True)
class EstimateReport:
    """Outcome of one estimation run; exhaustive runs carry the exact value."""

    k: int
    N: int
    n: int | None
    trials: int
    hits: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int
    mode: str  # 'monte-carlo' or 'exhaustive'
    sweep_mode: str | None = None
    exact_value: Fraction | None = None

    @property
    def ci_half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)


def wilson_interval(hits: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= hits <= trials:
        raise InvalidParametersError("need 0 <= hits <= trials, trials >= 1")
    p = hits / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    low = 0.0 if hits == 0 else max(0.0, center - half)
    high = 1.0 if hits == trials else min(1.0, center + half)
    return low, high


def _phi_range_hits(args) -> int:
    k, N, n, seed, lo, hi = args
    hits = 0
    for idx in range(lo, hi):
        if divides_phi_dense(sample_random(k, N, seed, idx), n):
            hits += 1
    return hits


def _any_range_hits(args) -> int:
    k, N, mode, cap, seed, lo, hi = args
    cands = _prepped_candidates(k, cap, mode)
    hits = 0
    for idx in range(lo, hi):
        terms = (0,) + sample_random(k, N, seed, idx).exponents
        for cand in cands:
            if _candidate_hit(terms, cand):
                hits += 1
                break
    return hits


def _run_chunked(worker, base_args, trials: int, workers: int) -> int:
    bounds = [trials * i // workers for i in range(workers + 1)]
    jobs = [
        base_args + (lo, hi)
        for lo, hi in zip(bounds, bounds[1:])
        if hi > lo
    ]
    if len(jobs) <= 1 or trials < _PARALLEL_MIN_TRIALS:
        return sum(worker(job) for job in jobs)
    try:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(len(jobs)) as pool:
            return sum(pool.map(worker, jobs))
    except (OSError, ValueError):
        return sum(worker(job) for job in jobs)


def estimate_phi_n(
    k: int, N: int, n: int, trials: int, seed: int, workers: int = 1
) -> EstimateReport:
    """Monte Carlo estimate of P(the n-th cyclotomic polynomial divides F)."""
    if not 1 <= k <= N or trials < 1 or n < 1 or workers < 1:
        raise InvalidParametersError("need 1 <= k <= N, n >= 1, trials >= 1, workers >= 1")
    hits = _run_chunked(_phi_range_hits, (k, N, n, seed), trials, workers)
    low, high = wilson_interval(hits, trials)
    return EstimateReport(
        k=k, N=N, n=n, trials=trials, hits=hits, estimate=hits / trials,
        ci_low=low, ci_high=high, seed=seed, mode="monte-carlo",
    )


def estimate_any_cyclotomic(
    k: int,
    N: int,
    trials: int,
    seed: int,
    mode: str = "full-sweep",
    workers: int = 1,
    cap: int | None = None,
) -> EstimateReport:
    """Monte Carlo estimate of P(F has any cyclotomic factor) under a sweep mode."""
    if not 1 <= k <= N or trials < 1 or workers < 1:
        raise InvalidParametersError("need 1 <= k <= N, trials >= 1, workers >= 1")
    if cap is None:
        cap = sweep_cap(N)
    hits = _run_chunked(_any_range_hits, (k, N, mode, cap, seed), trials, workers)
    low, high = wilson_interval(hits, trials)
    return EstimateReport(
        k=k, N=N, n=None, trials=trials, hits=hits, estimate=hits / trials,
        ci_low=low, ci_high=high, seed=seed, mode="monte-carlo", sweep_mode=mode,
    )


def exhaustive_enumeration(
    k: int, N: int, n: int | None = None, mode: str = "full-sweep"
) -> EstimateReport:
    """Exact probability by enumerating every exponent subset in lex order.

    n selects the single-modulus event; n=None means 'any cyclotomic factor'.
    """
    if not 1 <= k <= N:
        raise InvalidParametersError(f"need 1 <= k <= N, got k={k}, N={N}")
    total = comb(N, k)
    if total > _EXHAUSTIVE_GUARD:
        raise ResourceLimitError(
            f"binom({N},{k}) = {total} exceeds exhaustive guard {_EXHAUSTIVE_GUARD}"
        )
    cands = _prepped_candidates(k, sweep_cap(N), mode) if n is None else None
    hits = 0
    for exps in combinations(range(1, N + 1), k):
        if n is not None:
            if divides_phi_dense(SparsePoly(exps, N), n):
                hits += 1
        else:
            terms = (0,) + exps
            if any(_candidate_hit(terms, cand) for cand in cands):
                hits += 1
    exact = Fraction(hits, total)
    est = float(exact)
    return EstimateReport(
        k=k, N=N, n=n, trials=total, hits=hits, estimate=est,
        ci_low=est, ci_high=est, seed=0, mode="exhaustive",
        sweep_mode=None if n is not None else mode, exact_value=exact,
    )


def decay_series(
    k_list, N: int, trials: int, seed: int, mode: str = "fs-pruned", workers: int = 1
) -> list[EstimateReport]:
    """One any-factor estimate per k, shared degree cap and trial budget."""
    ks = list(k_list)
    if not ks or any(k > N for k in ks):
        raise InvalidParametersError("k list must be non-empty with every k <= N")
    return [
        estimate_any_cyclotomic(k, N, trials, seed, mode=mode, workers=workers)
        for k in ks
    ]


# --- serialization -----------------------------------------------------------

CSV_HEADER = "k,N,n_or_any,mode,trials,hits,estimate,ci_low,ci_high,seed"


def _mode_field(report: EstimateReport) -> str:
    if report.sweep_mode:
        return f"{report.mode}:{report.sweep_mode}"
    return report.mode


def report_to_csv_row(report: EstimateReport) -> str:
    n_or_any = "any" if report.n is None else str(report.n)
    return ",".join(
        [
            str(report.k),
            str(report.N),
            n_or_any,
            _mode_field(report),
            str(report.trials),
            str(report.hits),
            repr(report.estimate),
            repr(report.ci_low),
            repr(report.ci_high),
            str(report.seed),
        ]
    )


def reports_to_csv(reports) -> str:
    lines = [CSV_HEADER]
    lines.extend(report_to_csv_row(r) for r in reports)
    return "\n".join(lines) + "\n"


def report_to_json(report: EstimateReport) -> dict:
    return {
        "k": report.k,
        "N": report.N,
        "n_or_any": "any" if report.n is None else report.n,
        "mode": _mode_field(report),
        "trials": report.trials,
        "hits": report.hits,
        "estimate": report.estimate,
        "ci_low": report.ci_low,
        "ci_high": report.ci_high,
        "seed": report.seed,
    }
