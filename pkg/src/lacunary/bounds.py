"""Evaluable probability bounds for cyclotomic divisibility of sparse polynomials.

Each function turns one displayed inequality into a number.  All logs are
natural; fractional factorials go through log-Gamma.  Values reported in a
breakdown are clipped to [0, 1] with the raw value retained, since the
underlying inequalities are asymptotic and raw values above 1 still carry
trend information.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import exp, factorial, lgamma, log, pi, sqrt

from .errors import InvalidParametersError, ResourceLimitError
from .numtheory import is_squarefree, primes_up_to, totient, totient_sieve
from .sparsepoly import multinomial_weight

_KERNEL_ENUM_GUARD = 10**6
_MIDRANGE_SUM_GUARD = 10**6


@dataclass(frozen=True)
class CandidateSet:
    """Squarefree moduli admissible for k terms: 2 + sum of (p-2) <= k+1."""

    k: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class BoundRow:
    label: str
    n_lo: int
    n_hi: float  # inf on the unbounded tail row
    value: float  # clipped to [0, 1]
    raw: float
    tag: str


@dataclass(frozen=True)
class BoundBreakdown:
    k: int
    rows: tuple[BoundRow, ...]
    total: float  # sum of the clipped row values


@dataclass(frozen=True)
class SquarefreeRecursion:
    """Partial sums, interval bounds, and the closing scale of the kernel bound."""

    c_values: tuple[int, ...]
    b_values: tuple[int, ...]
    log_scale: float
    scale: float


def chernoff_binomial(trials: int, p: float, delta: float) -> float:
    """Two-sided Chernoff bound 2 exp(-delta^2 * mean / 3) for Bin(trials, p)."""
    if not 0 < p <= 1 or not 0 < delta < 1:
        raise InvalidParametersError("need 0 < p <= 1 and 0 < delta < 1")
    if trials < 1:
        raise InvalidParametersError("trials must be >= 1")
    return 2.0 * exp(-delta * delta * trials * p / 3.0)


def admissible_kernels(k: int) -> CandidateSet:
    """All squarefree m with 2 + sum_{p | m}(p - 2) <= k + 1, exhaustively.

    The prime condition forces p <= k + 1, so the enumeration is complete.
    """
    if k < 1:
        raise InvalidParametersError(f"term count must be >= 1, got {k}")
    primes = primes_up_to(k + 1)
    budget = k - 1
    members: list[int] = []

    def dfs(idx: int, prod: int, used: int):
        if len(members) > _KERNEL_ENUM_GUARD:
            raise ResourceLimitError("candidate kernel enumeration exceeds guard")
        members.append(prod)
        for j in range(idx, len(primes)):
            cost = primes[j] - 2
            if used + cost > budget:
                break  # primes ascend, later ones only cost more
            dfs(j + 1, prod * primes[j], used + cost)

    dfs(0, 1, 0)
    return CandidateSet(k, tuple(sorted(members)))


def max_admissible_kernel_log(k: int) -> float:
    """log of the largest admissible squarefree kernel, by 0/1 knapsack."""
    if k < 1:
        raise InvalidParametersError(f"term count must be >= 1, got {k}")
    primes = primes_up_to(k + 1)
    budget = k - 1
    best = [0.0] * (budget + 1)
    base = 0.0
    for p in primes:
        w = p - 2
        if w == 0:
            base += log(p)
            continue
        lp = log(p)
        for b in range(budget, w - 1, -1):
            cand = best[b - w] + lp
            if cand > best[b]:
                best[b] = cand
    return base + best[budget]


def default_exponent_constant(k: int) -> float:
    """c with max admissible kernel = exp(c * sqrt(k) * log k)."""
    if k < 2:
        raise InvalidParametersError("need k >= 2")
    return max_admissible_kernel_log(k) / (sqrt(k) * log(k))


def squarefree_bound_recursion(k: int) -> SquarefreeRecursion:
    """Interval sums C_l, per-interval products bounds B_l, and the closing scale.

    C_l partial-sums 7, 8, 9, ... while below 7k/5; B_0 = 7 and
    B_l = 2^l * prod_{j=1}^{l+1} (6 + j).  The closing scale is
    2^{2 sqrt k} * (2 sqrt k)!, reported without its unspecified constant
    factor (log form is always finite).
    """
    if k < 1:
        raise InvalidParametersError(f"term count must be >= 1, got {k}")
    limit = 7.0 * k / 5.0
    c_values = []
    total = 0
    l = 1
    while True:
        total += 6 + l
        if total >= limit:
            break
        c_values.append(total)
        l += 1
    b_values = [7]
    prod = 7
    for l in range(1, len(c_values) + 1):
        prod *= 6 + (l + 1)
        b_values.append((1 << l) * prod)
    root = 2.0 * sqrt(k)
    log_scale = root * log(2.0) + lgamma(root + 1.0)
    try:
        scale = exp(log_scale)
    except OverflowError:
        scale = float("inf")
    return SquarefreeRecursion(tuple(c_values), tuple(b_values), log_scale, scale)


def central_atom(k: int, n: int) -> float:
    """Largest multinomial weight: k! / Gamma(k/n + 1)^n / n^k.

    Exact integer arithmetic when n divides k, log-Gamma otherwise.
    """
    if k < 1 or n < 1:
        raise InvalidParametersError("need k >= 1 and n >= 1")
    if k % n == 0:
        return float(Fraction(factorial(k), factorial(k // n) ** n * n**k))
    return exp(lgamma(k + 1) - n * lgamma(k / n + 1) - k * log(n))


def small_n_exact(k: int, n: int, convention: str = "shifted", asymptotic: bool = False):
    """Probability that the n-th cyclotomic polynomial divides F, n in 2..6.

    For n in {2, 3, 5} the event pins the count vector to the single
    balanced atom; 'shifted' places k terms evenly (needs n | k), 'exact'
    accounts for the constant term (needs n | k+1).  Exact values are
    rationals in the multinomial model; asymptotic=True returns the
    leading-order magnitude instead.  For n in {4, 6} only the asymptotic
    order is available here (their events span many atoms and belong to
    the lattice-ball bound).
    """
    if n not in (2, 3, 4, 5, 6):
        raise InvalidParametersError(f"n must be in 2..6, got {n}")
    if k < 1:
        raise InvalidParametersError(f"term count must be >= 1, got {k}")
    if convention not in ("shifted", "exact"):
        raise InvalidParametersError(f"unknown convention {convention!r}")
    if n == 4:
        return log(k) ** 2 / sqrt(k)
    if n == 6:
        return log(k) ** 4 / sqrt(k)
    if asymptotic:
        return {2: sqrt(2.0 / (pi * k)), 3: 1.0 / k, 5: 1.0 / (k * k)}[n]
    if convention == "shifted":
        if k % n:
            return Fraction(0)
        c = (k // n,) * n
    else:
        if (k + 1) % n:
            return Fraction(0)
        m = (k + 1) // n
        c = (m - 1,) + (m,) * (n - 1)
    return multinomial_weight(c, k, n)


def lattice_ball_bound(k: int, n: int) -> float:
    """Central atom times the lattice-point count of the concentration ball.

    Clipped to [0, 1]; see _lattice_ball_raw for the unclipped value.
    """
    return min(1.0, _lattice_ball_raw(k, n))


def _lattice_ball_raw(k: int, n: int) -> float:
    if n < 7:
        raise InvalidParametersError(f"lattice ball bound needs n >= 7, got {n}")
    if k < 2:
        raise InvalidParametersError(f"need k >= 2, got {k}")
    rank = n - totient(n)
    log_atom = lgamma(k + 1) - n * lgamma(k / n + 1) - k * log(n)
    log_ball = rank * log(2.1 * sqrt(k) * log(k)) + 0.5 * rank * log(pi) - lgamma(0.5 * rank + 1)
    v = log_atom + log_ball
    return exp(v) if v < 700 else float("inf")


def chernoff_tail_bound(k: int, n_max: int | None = None) -> float:
    """Aggregate 2 k^2 exp(-(log k)^2 / 3) for the far-from-center event.

    The k^2 factor already covers every modulus in the sweep range, so the
    value does not depend on n_max; the argument is accepted for symmetry
    with the range summations.
    """
    if k < 3:
        raise InvalidParametersError(f"need k >= 3, got {k}")
    if n_max is not None and n_max < 3:
        raise InvalidParametersError(f"n_max must be >= 3 when given, got {n_max}")
    return 2.0 * k * k * exp(-log(k) ** 2 / 3.0)


def midrange_bound(k: int, n: int) -> tuple[float, float]:
    """(low-count tail, heaviest-atom bound) for the mid-size modulus range.

    The tail bounds the chance that fewer than half the expected terms land
    on the low-degree residues; the atom bound caps the conditional hit
    probability through the heaviest multinomial atom with m = k phi(n)/(2n)
    trials on phi(n) outcomes (log-Gamma for fractional m).
    """
    if k < 1 or n < 1:
        raise InvalidParametersError("need k >= 1 and n >= 1")
    phi = totient(n)
    k_tail = exp(-k * phi / (12.0 * n))
    m = k * phi / (2.0 * n)
    big = 0.5 * log(m) - (phi - 1) * 0.5 * log(2.0 * pi) if m > 0 else float("-inf")
    small = lgamma(m + 1.0) - m * log(phi) if phi > 1 else 0.0
    if m > phi:
        log_atom = big
    elif m < phi:
        log_atom = small
    else:
        log_atom = max(big, small)
    return k_tail, exp(log_atom) if log_atom < 700 else float("inf")


def large_n_bound(k: int, n: int, kernel: int) -> tuple[float, float]:
    """(three-exponent bound k^3/b^2, paired-exponent bound k!/(k/2)! b^{-k/2}).

    kernel must be the squarefree part of n; b = n / kernel is the split
    modulus.  Both values clip to 1 (vacuous) when b = 1.
    """
    if k < 1:
        raise InvalidParametersError(f"need k >= 1, got {k}")
    if kernel < 1 or n % kernel or not is_squarefree(kernel):
        raise InvalidParametersError(
            f"kernel {kernel} must be a squarefree divisor of {n}"
        )
    b = n // kernel
    if b == 1:
        return 1.0, 1.0
    log_three = 3.0 * log(k) - 2.0 * log(b)
    log_two = lgamma(k + 1.0) - lgamma(k / 2.0 + 1.0) - (k / 2.0) * log(b)
    three = exp(log_three) if log_three < 700 else float("inf")
    two = exp(log_two) if log_two < 700 else float("inf")
    return min(1.0, three), min(1.0, two)


def total_bound(k: int, c: float | None = None) -> BoundBreakdown:
    """Assembled per-range upper bound on P(F has a cyclotomic factor).

    Rows partition the moduli: n = 2..6 individually, the lattice-ball and
    far-tail rows up to k/exp(sqrt(log k)), the mid-range up to
    exp(k/(24 log k)), and the closed-form 1/n^2 tail beyond.  Every row
    value is clipped to [0, 1]; the total sums the clipped rows.
    """
    if k < 8:
        raise InvalidParametersError(f"need k >= 8, got {k}")
    lnk = log(k)
    b1 = max(6, int(k / exp(sqrt(lnk))))
    log_b2 = k / (24.0 * lnk)
    b2 = max(b1, int(exp(log_b2)) if log_b2 < 700 else _MIDRANGE_SUM_GUARD + b1 + 1)
    if b2 - b1 > _MIDRANGE_SUM_GUARD:
        raise ResourceLimitError(
            f"mid-range summation over {b2 - b1} moduli exceeds guard"
        )

    rows = []

    def add(label, lo, hi, raw, tag):
        rows.append(BoundRow(label, lo, hi, min(1.0, raw), raw, tag))

    add("n=2 balanced atom", 2, 2, sqrt(2.0 / (pi * k)), "small-n-exact")
    add("n=3 balanced atom", 3, 3, 1.0 / k, "small-n-exact")
    add("n=4 order", 4, 4, lnk**2 / sqrt(k), "small-n-exact")
    add("n=5 balanced atom", 5, 5, 1.0 / (k * k), "small-n-exact")
    add("n=6 order", 6, 6, lnk**4 / sqrt(k), "small-n-exact")

    eq3_raw = sum(lattice_ball_bound(k, n) for n in range(7, b1 + 1))
    add("ball count, small moduli", 7, b1, eq3_raw, "eq3-lattice")
    add("far tail, small moduli", 7, b1, chernoff_tail_bound(k), "chernoff-tail")

    if b2 > b1:
        phi = totient_sieve(b2)
        mid_raw = exp(-k / (24.0 * lnk))
        for n in range(b1 + 1, b2 + 1):
            phin = phi[n]
            m = k * phin / (2.0 * n)
            if m > phin:
                log_atom = 0.5 * log(m) - (phin - 1) * 0.5 * log(2.0 * pi)
            else:
                log_atom = lgamma(m + 1.0) - m * log(phin) if phin > 1 else 0.0
            mid_raw += exp(log_atom) if log_atom < 700 else float("inf")
    else:
        mid_raw = 0.0
    add("mid-range moduli", b1 + 1, b2, mid_raw, "midrange-K")

    cc = default_exponent_constant(k) if c is None else c
    log_large = 3.0 * lnk + 2.0 * cc * sqrt(k) * lnk - log(b2)
    large_raw = exp(log_large) if log_large < 700 else float("inf")
    add("residue-split tail", b2 + 1, float("inf"), large_raw, "large-n-residue")

    total = sum(r.value for r in rows)
    return BoundBreakdown(k=k, rows=tuple(rows), total=total)


BOUNDS_CSV_HEADER = "k,range_label,n_lo,n_hi,bound,formula_tag"


def breakdown_to_csv(bb: BoundBreakdown) -> str:
    lines = [BOUNDS_CSV_HEADER]
    for r in bb.rows:
        hi = "inf" if r.n_hi == float("inf") else str(int(r.n_hi))
        lines.append(
            f"{bb.k},{r.label},{r.n_lo},{hi},{r.value!r},{r.tag}"
        )
    return "\n".join(lines) + "\n"
