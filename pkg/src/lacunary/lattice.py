"""Basis, geometry, and exact point counting for the lattice of vanishing sums.

The integer combinations of n-th roots of unity that evaluate to zero form
a lattice of rank n - phi(n) inside Z^n (coordinates indexed by the powers
of a fixed primitive root).  The basis built here follows the recursive
construction over the prime-power factors of n:

* for n = p^e the basis consists of the p^{e-1} shifted copies of
  1 + zeta^{p^{e-1}} + zeta^{2 p^{e-1}} + ... + zeta^{(p-1) p^{e-1}},
  whose supports are disjoint;

* for composite n, peel off the largest prime p_j with its full power q.
  Take all q root-of-unity multiples of the basis for n/q, together with
  the products of the power integral basis of the subfield of (n/q)-th
  roots of unity with the p_j-analogue of the prime-power basis above.

Every vector produced is a 0,1-vector, so all pairwise inner products are
non-negative and the far corner of the fundamental mesh realizes the
longest vector in the mesh.  The Gram determinant is a positive integer,
computed exactly with fraction-free (Bareiss) elimination.

Ball counting uses the standard quadratic-form recursion over the basis
coefficients.  Interval bounds come from a homogenized LDL decomposition
evaluated in floating point with a small slack toward inclusion, which is
decisive for the rational centers used here because distinct achievable
squared distances differ by far more than the slack.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, exp, floor, lgamma, log, pi, sqrt

from .errors import InvalidParametersError, ResourceLimitError
from .numtheory import factorize, totient
from .cyclotomic import root_power_sum_is_zero

_WORK_GUARD = 10**7
_SLACK = 1e-9


@dataclass(frozen=True)
class RelationBasis:
    """Basis of the rank n - phi(n) lattice of vanishing sums of n-th roots."""

    n: int
    rank: int
    vectors: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...]
    gram_det: int
    prime_powers: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class BallQuery:
    """Euclidean ball in coordinate space: |x - center| <= radius."""

    center: tuple[Fraction, ...]
    radius: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(Fraction(c) for c in self.center))
        if self.radius < 0:
            raise InvalidParametersError(f"radius must be >= 0, got {self.radius}")
        if len(self.center) != self.n:
            raise InvalidParametersError("center must have length n")


def _basis_supports(n: int) -> list[tuple[int, ...]]:
    factors = factorize(n)
    p, e = factors[-1]
    q = p**e
    step = q // p
    if len(factors) == 1:
        return [tuple(i + t * step for t in range(p)) for i in range(step)]
    nprime = n // q
    prev = _basis_supports(nprime)
    # zeta_{n/q} = zeta_n^q and zeta_q = zeta_n^{n/q} fix the CRT embedding
    out = [
        tuple(sorted((nprime * i + q * l) % n for l in y))
        for i in range(q)
        for y in prev
    ]
    block = [tuple((i + t * step) * nprime % n for t in range(p)) for i in range(step)]
    out.extend(
        tuple(sorted((q * t + s) % n for s in w))
        for t in range(totient(nprime))
        for w in block
    )
    return out


def _bareiss_det(mat: list[list[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    m = [row[:] for row in mat]
    r = len(m)
    sign = 1
    prev = 1
    for k in range(r - 1):
        if m[k][k] == 0:
            for i in range(k + 1, r):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, r):
            row_i = m[i]
            row_k = m[k]
            cik = row_i[k]
            for j in range(k + 1, r):
                row_i[j] = (row_i[j] * pivot - cik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[r - 1][r - 1]


@lru_cache(maxsize=None)
def build_basis(n: int) -> RelationBasis:
    """Construct the recursive basis with exact Gram data for modulus n >= 2."""
    if n < 2:
        raise InvalidParametersError(f"modulus must be >= 2, got {n}")
    supports = _basis_supports(n)
    rank = n - totient(n)
    assert len(supports) == rank
    for s in supports:
        assert root_power_sum_is_zero(s, n), f"non-relation vector for n={n}"
    sets = [frozenset(s) for s in supports]
    gram = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = len(sets[i])
        for j in range(i + 1, rank):
            g = len(sets[i] & sets[j])
            gram[i][j] = gram[j][i] = g
    det = _bareiss_det(gram)
    if det <= 0:
        raise InvalidParametersError(f"degenerate basis for n={n}")
    vectors = []
    for s in supports:
        row = [0] * n
        for l in s:
            row[l] = 1
        vectors.append(tuple(row))
    return RelationBasis(
        n=n,
        rank=rank,
        vectors=tuple(vectors),
        gram=tuple(tuple(row) for row in gram),
        gram_det=det,
        prime_powers=factorize(n),
    )


def mesh_max_length(basis: RelationBasis) -> float:
    """Length of the sum of all basis vectors.

    All pairwise inner products are non-negative, so the all-ones corner of
    the fundamental mesh is its longest element.
    """
    s = [0] * basis.n
    for v in basis.vectors:
        for l, x in enumerate(v):
            s[l] += x
    return sqrt(sum(x * x for x in s))


def _ball_volume_log(dim: int, radius: float) -> float:
    if radius <= 0:
        return float("-inf")
    return dim * log(radius) + 0.5 * dim * log(pi) - lgamma(0.5 * dim + 1)


def volume_count_bound(basis: RelationBasis, radius: float) -> float:
    """Mesh-adjoining bound on the number of lattice points in a ball.

    Inflates the radius by the longest mesh vector, divides the resulting
    ball volume by the mesh volume sqrt(det Gram).
    """
    if radius < 0:
        raise InvalidParametersError(f"radius must be >= 0, got {radius}")
    r = basis.rank
    inflated = radius + mesh_max_length(basis)
    return exp(_ball_volume_log(r, inflated) - 0.5 * log(basis.gram_det))


def _homogeneous_ldl(basis: RelationBasis, center, anchor):
    """Float LDL of the homogenized quadratic |anchor + B^T t - center|^2.

    The linear data (projections of anchor - center on the basis) is built
    exactly in rationals, then converted once to float.
    """
    r = basis.rank
    z = [Fraction(a) - c for a, c in zip(anchor, center)]
    w = []
    for v in basis.vectors:
        w.append(sum(zi for zi, x in zip(z, v) if x))
    s0 = sum(zi * zi for zi in z)
    a = [[0.0] * (r + 1) for _ in range(r + 1)]
    for i in range(r):
        for j in range(r):
            a[i][j] = float(basis.gram[i][j])
        a[i][r] = a[r][i] = float(w[i])
    a[r][r] = float(s0)
    d = [0.0] * (r + 1)
    lmat = [[0.0] * (r + 1) for _ in range(r + 1)]
    for i in range(r + 1):
        d[i] = a[i][i]
        if i == r:
            break
        if d[i] <= 0:
            raise InvalidParametersError("Gram matrix is not positive definite")
        for j in range(i + 1, r + 1):
            lmat[i][j] = a[i][j] / d[i]
        for j1 in range(i + 1, r + 1):
            for j2 in range(j1, r + 1):
                a[j1][j2] -= d[i] * lmat[i][j1] * lmat[i][j2]
                a[j2][j1] = a[j1][j2]
    return d, lmat


def _predict(d, radius_sq: float):
    """(estimated enumeration nodes, estimated point count) from LDL pivots."""
    r = len(d) - 1
    rad_eff_sq = max(radius_sq - d[r], 0.0)
    rad = sqrt(rad_eff_sq)
    work = 0.0
    count = 1.0
    logprod = 0.0
    for m in range(1, r + 1):
        logprod += 0.5 * log(d[r - m])
        level_nodes = exp(_ball_volume_log(m, rad) - logprod) if rad > 0 else 1.0
        if m < r:
            work += level_nodes
        else:
            count = level_nodes
    return work, count


def enumerate_ball(basis: RelationBasis, query: BallQuery, anchor) -> int:
    """Exact number of points of anchor + lattice inside the query ball.

    Counts integer combinations t of the basis vectors with
    |anchor + sum t_i b_i - center| <= radius.  Boundary points are
    included.  Refuses (resource-limit) when the predicted enumeration
    workload exceeds 10^7 nodes.
    """
    if query.n != basis.n:
        raise InvalidParametersError("query modulus does not match basis")
    anchor = tuple(int(x) for x in anchor)
    if len(anchor) != basis.n:
        raise InvalidParametersError("anchor must have length n")
    r = basis.rank
    radius_sq = float(query.radius) ** 2

    d_nat, l_nat = _homogeneous_ldl(basis, query.center, anchor)
    work_nat, _ = _predict(d_nat, radius_sq)
    rev = RelationBasis(
        n=basis.n,
        rank=r,
        vectors=basis.vectors[::-1],
        gram=tuple(tuple(basis.gram[r - 1 - i][r - 1 - j] for j in range(r)) for i in range(r)),
        gram_det=basis.gram_det,
        prime_powers=basis.prime_powers,
    )
    d_rev, l_rev = _homogeneous_ldl(rev, query.center, anchor)
    work_rev, _ = _predict(d_rev, radius_sq)
    d, lmat, work = (d_nat, l_nat, work_nat) if work_nat <= work_rev else (d_rev, l_rev, work_rev)

    if work > _WORK_GUARD:
        raise ResourceLimitError(
            f"predicted enumeration workload {work:.3g} exceeds guard {_WORK_GUARD:g}"
        )

    rem0 = radius_sq - d[r]
    if rem0 < -_SLACK:
        return 0
    t = [0] * (r + 1)
    t[r] = 1

    def level_offset(i: int) -> float:
        li = lmat[i]
        off = li[r]
        for j in range(i + 1, r):
            off += li[j] * t[j]
        return off

    count = 0
    # iterative DFS over levels r-1 .. 0; level 0 is counted in closed form
    stack = [(r - 1, rem0, None)]
    if r == 0:
        return 1 if rem0 >= -_SLACK else 0
    while stack:
        i, rem, it = stack.pop()
        if it is None:
            off = level_offset(i)
            width = sqrt(max(rem + _SLACK, 0.0) / d[i])
            lo = ceil(-off - width)
            hi = floor(-off + width)
            if i == 0:
                if hi >= lo:
                    count += hi - lo + 1
                continue
            it = (off, lo, hi, lo)
        off, lo, hi, nxt = it
        if nxt > hi:
            continue
        stack.append((i, rem, (off, lo, hi, nxt + 1)))
        t[i] = nxt
        y = nxt + off
        new_rem = rem - d[i] * y * y
        if new_rem >= -_SLACK:
            stack.append((i - 1, new_rem, None))
    return count


def basis_to_json(basis: RelationBasis) -> dict:
    """Inspection record used by the CLI and regression fixtures."""
    return {
        "n": basis.n,
        "rank": basis.rank,
        "vectors": [list(v) for v in basis.vectors],
        "gram_det": basis.gram_det,
        "mesh_len": mesh_max_length(basis),
    }
