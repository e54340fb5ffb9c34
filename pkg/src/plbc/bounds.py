"""Closed-form failure bounds and channel capacities.

All probability accumulation runs in natural-log space: binomial
coefficients through log-gamma, sums through a streaming log-sum-exp.  Tails
of binomial distributions are summed term by term with an exact-in-double
early cutoff (terms more than 45 nats below the running sum with a decaying
term ratio cannot move a float64 total).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bch import bch_generator, field_for_length
from .channel import ChannelParams
from .codec import PlbcParams
from .errors import ConstructionError, NumericError
from .gf2 import poly_degree, poly_divmod, poly_reciprocal

__all__ = [
    "BoundResult",
    "WeightDistribution",
    "binary_entropy",
    "capacity_max",
    "capacity_min",
    "decoding_failure_bound",
    "log_binom",
    "log_binom_tail",
    "macwilliams_transform",
    "masking_failure_bound",
    "prob_defects",
    "weight_distribution",
]

_NEG_INF = float("-inf")


def binary_entropy(x: float) -> float:
    """h(x) in bits; 0 at both endpoints."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("entropy argument must be in [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -(x * math.log2(x) + (1.0 - x) * math.log2(1.0 - x))


def capacity_min(ch: ChannelParams) -> float:
    """Capacity when the writer ignores defect locations: 1 - h(p_tilde)."""
    return 1.0 - binary_entropy(ch.p_tilde)


def capacity_max(ch: ChannelParams) -> float:
    """Capacity with writer-side defect knowledge: (1 - eps)(1 - h(p))."""
    return (1.0 - ch.epsilon) * (1.0 - binary_entropy(ch.p))


def log_binom(n: int, k: int) -> float:
    """log C(n, k); -inf outside the triangle."""
    if k < 0 or k > n:
        return _NEG_INF
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    )


def _logaddexp(a: float, b: float) -> float:
    if a == _NEG_INF:
        return b
    if b == _NEG_INF:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def log_binom_tail(n: int, p: float, t_lo: int) -> float:
    """log of P(Binomial(n, p) >= t_lo); t_lo <= 0 gives log 1 = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    if t_lo <= 0:
        return 0.0
    if t_lo > n:
        return _NEG_INF
    if p == 0.0:
        return _NEG_INF
    if p == 1.0:
        return 0.0
    lp = math.log(p)
    lq = math.log1p(-p)
    cur = log_binom(n, t_lo) + t_lo * lp + (n - t_lo) * lq
    total = cur
    for t in range(t_lo + 1, n + 1):
        ratio = (n - t + 1) / t * (p / (1.0 - p))
        cur += math.log(ratio)
        total = _logaddexp(total, cur)
        if ratio < 0.9 and cur < total - 45.0:
            break
    return total


def prob_defects(u: int, n: int, epsilon: float) -> float:
    """P(exactly u stuck cells out of n) = C(n,u) eps^u (1-eps)^(n-u)."""
    if not 0 <= u <= n:
        raise ValueError("u must be in [0, n]")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must be in [0, 1]")
    if epsilon == 0.0:
        return 1.0 if u == 0 else 0.0
    if epsilon == 1.0:
        return 1.0 if u == n else 0.0
    return math.exp(
        log_binom(n, u) + u * math.log(epsilon) + (n - u) * math.log1p(-epsilon)
    )


def _log_defect_pmf(n: int, epsilon: float) -> np.ndarray:
    out = np.full(n + 1, _NEG_INF)
    if epsilon == 0.0:
        out[0] = 0.0
        return out
    if epsilon == 1.0:
        out[n] = 0.0
        return out
    le = math.log(epsilon)
    l1e = math.log1p(-epsilon)
    for u in range(n + 1):
        out[u] = log_binom(n, u) + u * le + (n - u) * l1e
    return out


# ---------------------------------------------------------------------------
# weight distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightDistribution:
    """Weight counts A_0..A_n of the code checked by the masking rows.

    Counts are real-valued so approximations fit alongside exact
    enumerations.  A_0 is always 1 and weights below the first nonzero
    distance are 0.
    """

    n: int
    counts: np.ndarray
    method: str

    def __post_init__(self):
        if len(self.counts) != self.n + 1:
            raise ValueError("counts must have length n + 1")
        if self.counts[0] != 1.0:
            raise ValueError("A_0 must be 1")
        if np.any(self.counts < 0):
            raise ValueError("counts must be nonnegative")


def _span_weight_counts(row_ints: list[int], n: int) -> list[int]:
    """Exact weight histogram of the span of row_ints (Gray-code walk)."""
    dim = len(row_ints)
    counts = [0] * (n + 1)
    counts[0] = 1
    cur = 0
    for i in range(1, 1 << dim):
        cur ^= row_ints[(i & -i).bit_length() - 1]
        counts[cur.bit_count()] += 1
    return counts


def _mask_check_generator(n: int, l: int, d0: int) -> int:
    field = field_for_length(n)
    hstar = bch_generator(n, d0 if d0 else 1, field)
    if (poly_degree(hstar) or 0) != l:
        raise ConstructionError(
            "no masking code with l=%d, d0=%d at n=%d (generator degree %s)"
            % (l, d0, n, poly_degree(hstar))
        )
    return hstar


def weight_distribution(n: int, l: int, d0: int, method: str) -> WeightDistribution:
    """A_w for the [n, n-l] code whose parity check is the masking generator.

    Methods: 'exact-enumeration' walks all 2^(n-l) codewords,
    'macwilliams' enumerates the 2^l dual and transforms, and
    'binomial-approx' uses A_w = C(n, w) 2^(-l) above d0.
    """
    if n < 1 or l < 0 or l > n:
        raise ValueError("need 0 <= l <= n")
    if (l == 0) != (d0 == 0):
        raise ValueError("d0 is 0 exactly when l is 0")
    if method == "binomial-approx":
        counts = np.zeros(n + 1)
        counts[0] = 1.0
        scale = float(1 << l)
        for w in range(max(d0, 1), n + 1):
            counts[w] = math.comb(n, w) / scale
        return WeightDistribution(n, counts, method)
    if method == "exact-enumeration":
        if n - l > 24:
            raise ValueError("exact enumeration is limited to 2^24 codewords")
        hstar = _mask_check_generator(n, l, d0)
        rows = [hstar << i for i in range(n - l)]
        counts = np.array(_span_weight_counts(rows, n), dtype=float)
        return WeightDistribution(n, counts, method)
    if method == "macwilliams":
        if l > 24:
            raise ValueError("dual enumeration is limited to 2^24 codewords")
        hstar = _mask_check_generator(n, l, d0)
        h = poly_reciprocal(hstar)
        p_poly, rem = poly_divmod((1 << n) | 1, h)
        if rem:
            raise ConstructionError("mask check does not divide x^n - 1")
        rows = [p_poly << i for i in range(l)]
        dual_counts = _span_weight_counts(rows, n)
        dual = WeightDistribution(n, np.array(dual_counts, dtype=float), "exact-enumeration")
        wd = macwilliams_transform(dual)
        return WeightDistribution(n, wd.counts, method)
    raise ValueError("unknown weight distribution method %r" % method)


def macwilliams_transform(dual_wd: WeightDistribution) -> WeightDistribution:
    """Weight counts of the code from its dual via the Krawtchouk transform.

    A_w = 2^(-dim) sum_j B_j K_w(j), with the binary Krawtchouk polynomials
    generated by their three-term recurrence in exact integer arithmetic.
    Non-integral or negative outputs mean the input was not a valid dual
    distribution and raise NumericError.
    """
    n = dual_wd.n
    b_int = []
    for c in dual_wd.counts:
        r = round(float(c))
        if abs(c - r) > 1e-6:
            raise NumericError("dual weight counts must be integers, got %r" % c)
        b_int.append(int(r))
    size = sum(b_int)
    dim = size.bit_length() - 1
    if size != 1 << dim:
        raise NumericError("dual code size %d is not a power of two" % size)

    js = [j for j, b in enumerate(b_int) if b]
    bs = [b_int[j] for j in js]
    k_prev = [1] * len(js)                      # K_0(j)
    k_cur = [n - 2 * j for j in js]             # K_1(j)
    counts = np.zeros(n + 1)
    for w in range(n + 1):
        if w == 0:
            kw = k_prev
        elif w == 1:
            kw = k_cur
        else:
            k_next = []
            for idx, j in enumerate(js):
                num = (n - 2 * j) * k_cur[idx] - (n - w + 2) * k_prev[idx]
                if num % w:
                    raise NumericError("Krawtchouk recurrence lost integrality")
                k_next.append(num // w)
            k_prev, k_cur = k_cur, k_next
            kw = k_cur
        total = sum(b * k for b, k in zip(bs, kw))
        q, rem = divmod(total, 1 << dim)
        if rem or q < 0:
            raise NumericError(
                "MacWilliams transform gave a non-integral or negative count "
                "at weight %d" % w
            )
        counts[w] = float(q)
    return WeightDistribution(n, counts, "macwilliams")


# ---------------------------------------------------------------------------
# failure bounds
# ---------------------------------------------------------------------------

def _log_masking_bound(u: int, wd: WeightDistribution) -> float:
    """log of the union bound on P(masking fails | u stuck cells), unclamped."""
    if u <= 0:
        return _NEG_INF
    n = wd.n
    lcnu = log_binom(n, u)
    acc = _NEG_INF
    counts = wd.counts
    for w in range(1, u + 1):
        a = counts[w]
        if a <= 0.0:
            continue
        acc = _logaddexp(acc, math.log(a) + log_binom(n - w, u - w) - lcnu)
    return acc


def masking_failure_bound(u: int, wd: WeightDistribution) -> float:
    """Union bound on the two-step masking failure probability, clamped to 1.

    P(masking fails | U = u) <= sum_w A_w C(n-w, u-w) / C(n, u); counts
    below the masking distance are zero so the sum effectively starts at d0.
    """
    if not 0 <= u <= wd.n:
        raise ValueError("u must be in [0, n]")
    lv = _log_masking_bound(u, wd)
    return min(1.0, math.exp(lv)) if lv != _NEG_INF else 0.0


@dataclass(frozen=True)
class BoundResult:
    """Decoding-failure bound split by masking outcome.

    total = p_mask_and_fail + p_maskok_and_fail, reported unclamped;
    ``total_clamped`` caps it at 1.  ``u_tail_bound`` records the neglected
    defect-count tail mass when the u-sum was truncated (0.0 when exact).
    """

    p_mask_and_fail: float
    p_maskok_and_fail: float
    total: float
    regime: str
    u_tail_bound: float = 0.0
    aw_method: str | None = None

    @property
    def total_clamped(self) -> float:
        return min(1.0, self.total)


_TRUNC_REL = 1e-3


def decoding_failure_bound(
    params: PlbcParams,
    wd: WeightDistribution | None,
    ch: ChannelParams,
) -> BoundResult:
    """Upper bound on P(decoded message != written message).

    Routes by regime: epsilon = 0 reduces to the plain BSC(p) union bound
    with radius t1; l = 0 reduces to BSC(p_tilde); the general case splits
    on the masking outcome, bounding P(mask fails | u) by the weight
    distribution union bound and the conditional error tails by binomials.
    The u-sum is truncated once the remaining defect-tail mass drops below
    1e-3 of the running total; the neglected mass is recorded.
    """
    n, t1, d0 = params.n, params.t1, params.d0
    if ch.epsilon == 0.0:
        total = math.exp(log_binom_tail(n, ch.p, t1 + 1))
        return BoundResult(0.0, total, total, "epsilon-zero",
                           aw_method=wd.method if wd else None)
    if params.l == 0:
        total = math.exp(log_binom_tail(n, ch.p_tilde, t1 + 1))
        return BoundResult(0.0, total, total, "l-zero",
                           aw_method=wd.method if wd else None)
    if wd is None:
        raise ValueError("the general regime needs a weight distribution")
    if wd.n != n:
        raise ValueError("weight distribution length mismatch")

    log_pmf = _log_defect_pmf(n, ch.epsilon)
    # suffix log-tails of the defect count: log P(U > u) at index u
    log_tail = np.full(n + 2, _NEG_INF)
    acc = _NEG_INF
    for u in range(n, -1, -1):
        log_tail[u + 1] = acc if u < n else _NEG_INF
        acc = _logaddexp(acc, log_pmf[u])
    log_tail[0] = acc  # P(U >= 0) = 1, unused but kept consistent
    log_trunc = math.log(_TRUNC_REL)

    term1 = _NEG_INF
    tail1 = 0.0
    for u in range(max(d0, 1), n + 1):
        lm = min(0.0, _log_masking_bound(u, wd))
        lt = log_binom_tail(n - u, ch.p, t1 + d0 - u)
        term1 = _logaddexp(term1, log_pmf[u] + lm + lt)
        if term1 != _NEG_INF and log_tail[u + 1] < term1 + log_trunc:
            tail1 = math.exp(log_tail[u + 1])
            break

    term2 = _NEG_INF
    tail2 = 0.0
    for u in range(0, n + 1):
        term2 = _logaddexp(term2, log_pmf[u] + log_binom_tail(n - u, ch.p, t1 + 1))
        if term2 != _NEG_INF and log_tail[u + 1] < term2 + log_trunc:
            tail2 = math.exp(log_tail[u + 1])
            break

    p1 = math.exp(term1) if term1 != _NEG_INF else 0.0
    p2 = math.exp(term2) if term2 != _NEG_INF else 0.0
    return BoundResult(
        p1, p2, p1 + p2, "general",
        u_tail_bound=max(tail1, tail2),
        aw_method=wd.method,
    )
