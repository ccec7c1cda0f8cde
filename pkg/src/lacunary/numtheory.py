"""Small number-theoretic helpers used across the package.

Everything here is exact integer arithmetic; sieves are cached because the
sweep and candidate machinery call them repeatedly with the same bounds.
"""

from functools import lru_cache

from .errors import InvalidParametersError


def primes_up_to(m: int) -> list[int]:
    """All primes <= m by a plain sieve."""
    if m < 2:
        return []
    sieve = bytearray([1]) * (m + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(m**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, m + 1, p)))
    return [i for i in range(m + 1) if sieve[i]]


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, e), ...) with p ascending."""
    if n < 1:
        raise InvalidParametersError(f"cannot factor {n}")
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            e += 1
            n //= d
        if e:
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def totient(n: int) -> int:
    r = n
    for p, _ in factorize(n):
        r -= r // p
    return r


@lru_cache(maxsize=8)
def totient_sieve(m: int) -> tuple[int, ...]:
    """phi(0..m) as a tuple; phi(0) = 0 by convention."""
    phi = list(range(m + 1))
    for p in range(2, m + 1):
        if phi[p] == p:  # p prime
            for k in range(p, m + 1, p):
                phi[k] -= phi[k] // p
    if m >= 0:
        phi[0] = 0
    return tuple(phi)


def squarefree_kernel(n: int) -> int:
    """Product of the distinct primes dividing n (1 for n = 1)."""
    r = 1
    for p, _ in factorize(n):
        r *= p
    return r


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    return len(factorize(n))


@lru_cache(maxsize=8)
def kernel_sieve(m: int) -> tuple[int, ...]:
    """squarefree_kernel(0..m) as a tuple, via a smallest-prime-factor sieve."""
    spf = list(range(m + 1))
    for p in range(2, int(m**0.5) + 1):
        if spf[p] == p:
            for k in range(p * p, m + 1, p):
                if spf[k] == k:
                    spf[k] = p
    rad = [0] * (m + 1)
    if m >= 1:
        rad[1] = 1
    for n in range(2, m + 1):
        p = spf[n]
        q = n // p
        rad[n] = rad[q] if q % p == 0 else rad[q] * p
    return tuple(rad)


def largest_prime_power(n: int) -> tuple[int, int, int]:
    """The (p, e, p**e) among the prime-power factors of n with p**e maximal."""
    best = max(factorize(n), key=lambda pe: pe[0] ** pe[1])
    p, e = best
    return p, e, p**e
