"""Exact detection of cyclotomic divisors of sparse 0,1-polynomials.

Two independent algorithms decide whether the n-th cyclotomic polynomial
divides F:

* the dense route reduces F modulo x^n - 1 and takes the exact integer
  remainder modulo the n-th cyclotomic polynomial;

* the structural route never builds the cyclotomic polynomial.  It works
  with the sparse exponent multiset directly: pick the largest prime power
  q = p^e exactly dividing n, split the terms by their q-component under
  the Chinese Remainder correspondence, eliminate components with index
  at or above phi(q) by the relation

      zeta^{p^{e-1}(p-1) + r} = -(zeta^{r} + zeta^{p^{e-1} + r} + ...
                                 + zeta^{p^{e-1}(p-2) + r}),

  and recurse on each surviving component with modulus n / q.  The base
  case n = 1 asks whether an integer sum vanishes.  On sparse inputs this
  costs roughly the number of terms times the product of the primes in n,
  which is what makes whole-sweep experiments affordable.

The sweep over candidate moduli is capped by the largest n whose totient
can possibly fit the degree, and can be pruned to moduli whose squarefree
kernel survives the term-count test (see bounds.admissible_kernels).
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidParametersError
from .numtheory import kernel_sieve, largest_prime_power, totient_sieve
from .sparsepoly import SparsePoly, reduce_mod_cyclic


@dataclass(frozen=True)
class DensePoly:
    """Dense integer polynomial; coefficient index = degree, no trailing zeros."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1 if self.coefficients else -1

    def is_zero(self) -> bool:
        return not self.coefficients


@dataclass(frozen=True)
class SplitSums:
    """Exponents of F mod (x^n - 1) grouped by residue class modulo b."""

    n: int
    b: int
    parts: tuple[tuple[int, ...], ...]


# --- dense algorithm ---------------------------------------------------------


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_mod(f: list[int], g: list[int]) -> list[int]:
    """Remainder of f modulo monic g, exact integer arithmetic."""
    f = list(f)
    dg = len(g) - 1
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c:
            f[i] = 0
            for j in range(dg):
                f[i - dg + j] -= c * g[j]
    del f[dg:]
    return f


def _poly_divexact(f: list[int], g: list[int]) -> list[int]:
    """Exact quotient f / g for monic g; remainder must vanish."""
    f = list(f)
    dg = len(g) - 1
    dq = len(f) - 1 - dg
    q = [0] * (dq + 1)
    for i in range(dq, -1, -1):
        c = f[i + dg]
        q[i] = c
        if c:
            for j in range(dg + 1):
                f[i + j] -= c * g[j]
    assert all(x == 0 for x in f), "division was not exact"
    return q


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    if n == 1:
        return (-1, 1)
    f = [0] * (n + 1)
    f[0], f[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            f = _poly_divexact(f, list(_cyclotomic_coeffs(d)))
    return tuple(f)


def cyclotomic_poly(n: int) -> DensePoly:
    """The n-th cyclotomic polynomial, by dividing x^n - 1 by all lower ones."""
    if n < 1:
        raise InvalidParametersError(f"index must be >= 1, got {n}")
    return DensePoly(_cyclotomic_coeffs(n))


def divides_phi_dense(poly: SparsePoly, n: int) -> bool:
    """Dense test: remainder of (F mod x^n - 1) modulo the n-th cyclotomic poly."""
    if n < 1:
        raise InvalidParametersError(f"modulus must be >= 1, got {n}")
    counts = list(reduce_mod_cyclic(poly, n).counts)
    rem = _poly_mod(counts, list(_cyclotomic_coeffs(n)))
    return all(c == 0 for c in rem)


# --- structural algorithm ----------------------------------------------------


@lru_cache(maxsize=None)
def _peel(n: int) -> tuple[int, int, int, int, int, int, int]:
    """Recursion data for modulus n >= 2: (q, p, n', phi_q, step, inv_n', inv_q)."""
    p, e, q = largest_prime_power(n)
    nprime = n // q
    step = q // p
    phi_q = step * (p - 1)
    inv_np = pow(nprime, -1, q)
    inv_q = pow(q, -1, nprime) if nprime > 1 else 0
    return q, p, nprime, phi_q, step, inv_np, inv_q


def _vanishes(vec: dict[int, int], n: int) -> bool:
    """Whether sum of vec[l] * zeta_n^l is zero, zeta_n primitive n-th root."""
    if not vec:
        return True
    if n == 1:
        return sum(vec.values()) == 0
    if len(vec) == 1:
        return False  # a single non-zero multiple of a root of unity
    q, p, nprime, phi_q, step, inv_np, inv_q = _peel(n)
    comps: dict[int, dict[int, int]] = {}
    for l, c in vec.items():
        a = (l % q) * inv_np % q
        b = (l % nprime) * inv_q % nprime if nprime > 1 else 0
        comp = comps.setdefault(a, {})
        nc = comp.get(b, 0) + c
        if nc:
            comp[b] = nc
        else:
            del comp[b]
    # folds only ever target indices below phi_q, so a key snapshot is safe
    for a in [a for a in comps if a >= phi_q]:
        sub = comps.pop(a)
        if not sub:
            continue
        r = a - phi_q
        for t in range(p - 1):
            tgt = comps.setdefault(t * step + r, {})
            for b, c in sub.items():
                nc = tgt.get(b, 0) - c
                if nc:
                    tgt[b] = nc
                else:
                    del tgt[b]
    return all(_vanishes(sub, nprime) for sub in comps.values() if sub)


def root_power_sum_is_zero(exponents, n: int, coefficients=None) -> bool:
    """Exact test of sum coeff_i * zeta_n^{e_i} == 0 for integer coefficients."""
    if n < 1:
        raise InvalidParametersError(f"modulus must be >= 1, got {n}")
    exponents = list(exponents)
    if coefficients is None:
        coefficients = [1] * len(exponents)
    vec: dict[int, int] = {}
    for e, c in zip(exponents, coefficients):
        l = e % n
        nc = vec.get(l, 0) + c
        if nc:
            vec[l] = nc
        else:
            del vec[l]
    return _vanishes(vec, n)


def divides_phi_structural(poly: SparsePoly, n: int) -> bool:
    """Structural test via prime-power peeling; no dense polynomial is built."""
    if n < 1:
        raise InvalidParametersError(f"modulus must be >= 1, got {n}")
    vec: dict[int, int] = {0: 1}
    for e in poly.exponents:
        l = e % n
        vec[l] = vec.get(l, 0) + 1
    return _vanishes(vec, n)


# --- splitting into smaller vanishing sums ------------------------------------


def conway_jones_split(poly: SparsePoly, n: int, b: int) -> SplitSums:
    """Group the terms of F (constant term as exponent 0) by residue mod b.

    Since b divides n, the grouping agrees with grouping the reduced
    exponents of F mod (x^n - 1); parts keep the original exponents.  When
    b = n / squarefree_kernel(n) and the n-th cyclotomic polynomial divides
    F, every part is itself a vanishing sum at a primitive n-th root of
    unity.  For other divisors b no vanishing claim is made.
    """
    if b < 1 or n < 1 or n % b != 0:
        raise InvalidParametersError(f"split modulus {b} must divide {n}")
    parts: list[list[int]] = [[] for _ in range(b)]
    parts[0].append(0)
    for e in poly.exponents:
        parts[e % b].append(e)
    return SplitSums(n, b, tuple(tuple(sorted(part)) for part in parts))


def part_vanishes(split: SplitSums, i: int) -> bool:
    """Exact evaluation of one part of a split at a primitive n-th root."""
    return root_power_sum_is_zero(split.parts[i], split.n)


# --- candidate sweep -----------------------------------------------------------

# n/phi(n) < e^gamma*lnln(n) + 3/lnln(n) for all n >= 3; with the constant 3 the
# bound has no exceptional n, so it yields a rigorous cap for the sieve below.
_E_GAMMA = 1.7810724179901979


def _totient_over_cap(N: int) -> int:
    from math import log

    if N <= 40:
        return 2 * N * N
    x = 2.0 * N * N
    for _ in range(64):
        ll = log(log(x))
        nxt = N * (_E_GAMMA * ll + 3.0 / ll)
        if nxt >= x - 1:
            break
        x = nxt
    return int(x) + 16


def sweep_cap(N: int) -> int:
    """Largest n with phi(n) <= N, by sieving phi up to a rigorous over-cap."""
    if N < 1:
        raise InvalidParametersError(f"degree cap must be >= 1, got {N}")
    cap = _totient_over_cap(N)
    phi = totient_sieve(cap)
    return max(n for n in range(1, cap + 1) if phi[n] <= N)


def _candidate_moduli(k: int, cap: int, mode: str) -> list[int]:
    if mode == "full-sweep":
        return list(range(2, cap + 1))
    if mode == "fs-pruned":
        from .bounds import admissible_kernels

        members = set(admissible_kernels(k).members)
        rad = kernel_sieve(cap)
        return [n for n in range(2, cap + 1) if rad[n] in members]
    raise InvalidParametersError(f"unknown sweep mode {mode!r}")


@lru_cache(maxsize=64)
def _prepped_candidates(k: int, cap: int, mode: str) -> tuple:
    """Candidate moduli with their peel data, shared across sweep trials."""
    return tuple((n,) + _peel(n) for n in _candidate_moduli(k, cap, mode))


def _candidate_hit(terms: tuple[int, ...], cand) -> bool:
    """Full divisibility test for one candidate, behind a cheap sound filter.

    A component of the first peel level that holds exactly one term and is
    not the target of any fold can never vanish, which rejects almost every
    (random polynomial, large modulus) pair in O(k).
    """
    n, q, p, nprime, phi_q, step, inv_np, _ = cand
    acnt: dict[int, int] = {}
    for e in terms:
        a = (e % q) * inv_np % q
        acnt[a] = acnt.get(a, 0) + 1
    folded = set()
    for a in acnt:
        if a >= phi_q:
            folded.add(a - phi_q)
    for a, c in acnt.items():
        if c == 1 and a < phi_q and (a % step) not in folded:
            return False
    vec: dict[int, int] = {}
    for e in terms:
        l = e % n
        vec[l] = vec.get(l, 0) + 1
    return _vanishes(vec, n)


def find_cyclotomic_factors(
    poly: SparsePoly, mode: str = "full-sweep", cap: int | None = None
) -> list[int]:
    """All n in the sweep range whose cyclotomic polynomial divides F.

    mode 'full-sweep' tests every n in [2, sweep_cap(N)]; 'fs-pruned' tests
    only n whose squarefree kernel passes the term-count test for k terms.
    Both verdicts agree on whether any factor exists at all.
    """
    if cap is None:
        cap = sweep_cap(poly.N)
    terms = (0,) + poly.exponents
    return [
        cand[0]
        for cand in _prepped_candidates(poly.k, cap, mode)
        if _candidate_hit(terms, cand)
    ]


def has_cyclotomic_factor(poly: SparsePoly, mode: str = "full-sweep", cap: int | None = None) -> bool:
    """Whether any cyclotomic polynomial divides F (early-exit sweep)."""
    if cap is None:
        cap = sweep_cap(poly.N)
    terms = (0,) + poly.exponents
    return any(
        _candidate_hit(terms, cand) for cand in _prepped_candidates(poly.k, cap, mode)
    )
