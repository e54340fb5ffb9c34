"""Partitioned BCH codes: construction, defect masking, encode, decode.

A partitioned [n, k, l] code splits an [n, k+l] linear code C into a message
part C1 (k rows) and a masking part C0 (l rows) with C1 intersect C0 = {0}.
The encoder spends the l masking bits to agree with as many stuck cells as
possible; the decoder corrects the residue together with random errors.

The construction is cyclic and nested: g generates C, the reciprocal route
through h* = bch_generator(n, d0) produces p = (x^n - 1)/h with g | p, and
C0 = <p>.  The code whose parity check is the masking generator G0 is then
exactly the BCH code <h*>, so any d0 - 1 columns of G0 are independent and
the restricted masking step always has a solution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bch import bch_generator, bch_parity_check, cyclotomic_coset, field_for_length
from .channel import DefectVector
from .errors import ConstructionError
from .gf2 import (
    BitMatrix,
    BitVector,
    GF2m,
    _n_words,
    _solve_aug_rows,
    pack_bits,
    poly_degree,
    poly_divmod,
    poly_reciprocal,
    rref,
    unpack_bits,
)

__all__ = [
    "DecodeOutcome",
    "MaskResult",
    "PbchCode",
    "PlbcParams",
    "construct_pbch",
    "decode",
    "encode",
    "mask_defects",
    "mask_defects_one_step",
    "message_inverse",
    "verify_distances",
]


@dataclass(frozen=True)
class PlbcParams:
    """Dimensions and designed distances of a partitioned BCH code."""

    n: int
    k: int
    l: int
    r: int
    m: int
    t0: int
    t1: int
    d0: int
    d1: int

    def __post_init__(self):
        if self.k + self.l + self.r != self.n:
            raise ValueError("k + l + r must equal n")
        if self.l != self.t0 * self.m or self.r != self.t1 * self.m:
            raise ValueError("l and r must equal m*t0 and m*t1")
        if self.d0 != (2 * self.t0 + 1 if self.l else 0):
            raise ValueError("d0 inconsistent with t0")
        if self.d1 != (2 * self.t1 + 1 if self.r else 0):
            raise ValueError("d1 inconsistent with t1")


def params_for(n: int, k: int, l: int) -> PlbcParams:
    """Validate (n, k, l) and derive the remaining parameters."""
    m = n.bit_length()
    if n <= 0 or n != (1 << m) - 1:
        raise ValueError("n must be 2^m - 1, got %r" % (n,))
    if k < 1:
        raise ValueError("message length k must be >= 1")
    if l < 0:
        raise ValueError("masking redundancy l must be >= 0")
    r = n - k - l
    if r < 0:
        raise ValueError("k + l exceeds n")
    if l % m:
        raise ConstructionError("l=%d is not a multiple of m=%d" % (l, m))
    if r % m:
        raise ConstructionError("r=%d is not a multiple of m=%d" % (r, m))
    t0 = l // m
    t1 = r // m
    return PlbcParams(
        n=n, k=k, l=l, r=r, m=m, t0=t0, t1=t1,
        d0=2 * t0 + 1 if l else 0,
        d1=2 * t1 + 1 if r else 0,
    )


@dataclass(frozen=True)
class MaskResult:
    """Masking vector choice: d, residual stuck-cell mismatches, step used."""

    d: BitVector
    unmasked: int
    step_used: int


@dataclass(frozen=True)
class DecodeOutcome:
    """Decoded message, decoder status and the applied error-estimate weight.

    status is 'corrected' when a codeword within the error-correcting radius
    was found (the estimate may still be wrong if the channel exceeded the
    code's capability), and 'detected_failure' when bounded-distance decoding
    could not place the received word; the message is then read off the
    received word directly as a best effort.
    """

    w_hat: BitVector
    status: str
    z_weight: int


class PbchCode:
    """A constructed partitioned BCH code with cached decoding tables."""

    def __init__(
        self,
        params: PlbcParams,
        field: GF2m,
        g_poly: int,
        p_poly: int,
        hstar_poly: int,
        gen_message: BitMatrix,
        gen_mask: BitMatrix,
        parity: BitMatrix,
        msg_inverse: BitMatrix,
    ):
        self.params = params
        self.field = field
        self.g_poly = g_poly
        self.p_poly = p_poly
        self._hstar_poly = hstar_poly
        self.gen_message = gen_message
        self.gen_mask = gen_mask
        self.parity = parity
        self.msg_inverse = msg_inverse
        # hot-path caches
        self._mask_cols = gen_mask.column_ints() if params.l else [0] * params.n
        self._syn_exponents = np.arange(1, 2 * params.t1 + 1, dtype=np.int64)
        self._exp_np = field.exp_np
        self._positions = np.arange(params.n, dtype=np.int64)

    @property
    def n(self) -> int:
        return self.params.n

    def to_descriptor(self, include_matrices: bool = False) -> dict:
        """JSON-friendly description; polynomials as hex coefficient ints."""
        p = self.params
        out = {
            "n": p.n,
            "k": p.k,
            "l": p.l,
            "r": p.r,
            "m": p.m,
            "d0": p.d0,
            "d1": p.d1,
            "g_poly": format(self.g_poly, "x"),
            "p_poly": format(self.p_poly, "x"),
        }
        if include_matrices:
            out["gen_message"] = [format(self.gen_message.row_int(i), "x")
                                  for i in range(p.k)]
            out["gen_mask"] = [format(self.gen_mask.row_int(i), "x")
                               for i in range(p.l)]
            out["parity"] = [format(self.parity.row_int(i), "x")
                             for i in range(p.r)]
            out["msg_inverse"] = [format(self.msg_inverse.row_int(i), "x")
                                  for i in range(p.k)]
        return out

    def __repr__(self) -> str:
        p = self.params
        return "PbchCode(n=%d, k=%d, l=%d, d0=%d, d1=%d)" % (p.n, p.k, p.l, p.d0, p.d1)


def message_inverse(gen_message: BitMatrix, gen_mask: BitMatrix) -> BitMatrix:
    """Right inverse of the message rows that annihilates the masking rows.

    Returns a k x n matrix T with gen_message * T^T = I and
    gen_mask * T^T = 0, from one elimination over [G | I_k ; 0] with free
    variables pinned to zero.
    """
    k = gen_message.rows
    l = gen_mask.rows
    n = gen_message.cols
    if gen_mask.cols != n:
        raise ValueError("row spaces must share a length")
    total = k + l
    width = n + k
    aug = BitMatrix(total, width)
    aug.words[:k, : _n_words(n)] = gen_message.words
    if l:
        aug.words[k:, : _n_words(n)] = gen_mask.words
    for i in range(k):
        j = n + i
        aug.words[i, j >> 6] |= np.uint64(1 << (j & 63))
    red, pivots = rref(aug, n_pivot_cols=n)
    if len(pivots) != total:
        raise ConstructionError(
            "message and masking rows are linearly dependent (rank %d < %d)"
            % (len(pivots), total)
        )
    dense = np.zeros((k, n), dtype=np.uint8)
    for i, pcol in enumerate(pivots):
        tail = unpack_bits(red.words[i], width)[n:]
        dense[np.flatnonzero(tail), pcol] = 1
    return BitMatrix.from_dense(dense)


def construct_pbch(n: int, k: int, l: int) -> PbchCode:
    """Build the nested-BCH partitioned code for (n, k, l).

    g = bch_generator(n, d1) spans C; h* = bch_generator(n, d0) determines
    the masking part via h = reciprocal(h*), p = (x^n - 1)/h, C0 = <p>.
    Fails loudly when the redundancies are not multiples of m, when a
    cyclotomic coset falls short (degree mismatch), or when g and h share
    roots (C0 would not nest inside C).
    """
    params = params_for(n, k, l)
    field = field_for_length(n)

    g = bch_generator(n, params.d1 if params.r else 1, field)
    gdeg = poly_degree(g) or 0
    if gdeg != params.r:
        raise ConstructionError(
            "generator degree %d != r=%d at n=%d d1=%d (short cyclotomic coset)"
            % (gdeg, params.r, n, params.d1)
        )
    hstar = bch_generator(n, params.d0 if params.l else 1, field)
    hdeg = poly_degree(hstar) or 0
    if hdeg != params.l:
        raise ConstructionError(
            "mask-check degree %d != l=%d at n=%d d0=%d (short cyclotomic coset)"
            % (hdeg, params.l, n, params.d0)
        )

    if params.r and params.l:
        g_leaders = {cyclotomic_coset(j, n).leader for j in range(1, params.d1)}
        h_leaders = set()
        for j in range(1, params.d0):
            for e in cyclotomic_coset(j, n).members:
                h_leaders.add(cyclotomic_coset(n - e, n).leader)
        shared = sorted(g_leaders & h_leaders)
        if shared:
            raise ConstructionError(
                "generator and mask checks share roots (coset leaders %s); "
                "the masking code would not nest inside the outer code" % shared
            )

    h = poly_reciprocal(hstar)
    xn1 = (1 << n) | 1
    p, rem = poly_divmod(xn1, h)
    if rem:
        raise ConstructionError("reciprocal mask check does not divide x^n - 1")
    if params.r:
        if poly_divmod(p, g)[1]:
            raise ConstructionError("masking generator is not a multiple of g")

    gen_message = BitMatrix.from_row_ints([g << i for i in range(k)], n)
    gen_mask = BitMatrix.from_row_ints([p << i for i in range(l)], n)
    parity = bch_parity_check(n, params.d1, field) if params.r else BitMatrix(0, n)
    msg_inv = message_inverse(gen_message, gen_mask)

    code = PbchCode(
        params, field, g, p, hstar, gen_message, gen_mask, parity, msg_inv
    )
    _check_code_identities(code)
    return code


def _check_code_identities(code: PbchCode) -> None:
    """Cheap word-level identity checks run once per construction."""
    p = code.params
    ident = BitMatrix.identity(p.k)
    for i in range(p.k):
        row = code.gen_message.row(i)
        got = code.msg_inverse.matvec_parity(row)
        if got != ident.row(i):
            raise ConstructionError("gen_message * msg_inverse^T != I at row %d" % i)
    for i in range(p.l):
        got = code.msg_inverse.matvec_parity(code.gen_mask.row(i))
        if got.weight():
            raise ConstructionError("gen_mask * msg_inverse^T != 0 at row %d" % i)
    if p.r:
        stacked = code.gen_message.stack(code.gen_mask)
        for i in range(p.r):
            got = stacked.matvec_parity(code.parity.row(i))
            if got.weight():
                raise ConstructionError("code rows fail parity row %d" % i)


# ---------------------------------------------------------------------------
# masking and encoding
# ---------------------------------------------------------------------------

def _mask_core(
    code: PbchCode, w_bits: np.ndarray, s: DefectVector
) -> tuple[np.ndarray, int, int, int]:
    """Shared masking path: returns (codeword words, d, unmasked, step)."""
    params = code.params
    c1 = np.zeros(_n_words(params.n), dtype=np.uint64)
    idx = np.flatnonzero(w_bits)
    if idx.size:
        c1 = np.bitwise_xor.reduce(code.gen_message.words[idx], axis=0)

    pos = s.positions()
    d, unmasked, step = _solve_mask(code, c1, pos, s)
    c = c1
    if d:
        rows = [i for i in range(params.l) if (d >> i) & 1]
        c = c1 ^ np.bitwise_xor.reduce(code.gen_mask.words[rows], axis=0)
    return c, d, unmasked, step


def _stuck_mismatch_bits(code, c_words, pos, s) -> np.ndarray:
    wi = pos >> 6
    sh = (pos & 63).astype(np.uint64)
    cb = ((c_words[wi] >> sh) & np.uint64(1)).astype(np.uint8)
    sb = ((s.values.words[wi] >> sh) & np.uint64(1)).astype(np.uint8)
    return cb ^ sb


def _solve_mask(code, c1_words, pos, s) -> tuple[int, int, int]:
    params = code.params
    l = params.l
    b = _stuck_mismatch_bits(code, c1_words, pos, s)
    aug = [code._mask_cols[int(j)] | (int(bb) << l) for j, bb in zip(pos, b)]
    d = _solve_aug_rows(aug, l)
    if d is not None:
        return d, 0, 1
    # step 2: the first d0 - 1 stuck positions always admit a solution
    keep = min(max(params.d0 - 1, 0), len(aug))
    d = _solve_aug_rows(aug[:keep], l)
    if d is None:
        raise AssertionError("restricted masking system must be solvable")
    unmasked = _residual_weight(code, d, aug, l)
    return d, unmasked, 2


def _residual_weight(code, d, aug, l) -> int:
    rhs = 1 << l
    count = 0
    for row in aug:
        acc = 1 if row & rhs else 0
        if d and (row & (rhs - 1)):
            acc ^= (d & row & (rhs - 1)).bit_count() & 1
        count += acc
    return count


def mask_defects(code: PbchCode, w: BitVector, s: DefectVector) -> MaskResult:
    """Choose the masking vector d for message w against defects s.

    Step 1 solves d * G0 = (w G1 - s) on all stuck positions; when that
    system is inconsistent, step 2 solves it on the first d0 - 1 stuck
    positions (ascending cell index), which is always consistent, and the
    remaining mismatches are left for the decoder.
    """
    _check_encode_args(code, w, s)
    _, d, unmasked, step = _mask_core(code, w.bits(), s)
    return MaskResult(BitVector.from_int(code.params.l, d), unmasked, step)


def mask_defects_one_step(code: PbchCode, w: BitVector, s: DefectVector) -> MaskResult:
    """Baseline single-step masking: solve only the first min(d0-1, u) cells."""
    _check_encode_args(code, w, s)
    params = code.params
    l = params.l
    c1 = np.zeros(_n_words(params.n), dtype=np.uint64)
    idx = np.flatnonzero(w.bits())
    if idx.size:
        c1 = np.bitwise_xor.reduce(code.gen_message.words[idx], axis=0)
    pos = s.positions()
    b = _stuck_mismatch_bits(code, c1, pos, s)
    aug = [code._mask_cols[int(j)] | (int(bb) << l) for j, bb in zip(pos, b)]
    keep = min(max(params.d0 - 1, 0), len(aug))
    d = _solve_aug_rows(aug[:keep], l)
    if d is None:
        raise AssertionError("restricted masking system must be solvable")
    unmasked = _residual_weight(code, d, aug, l)
    return MaskResult(BitVector.from_int(l, d), unmasked, 1 if keep == len(aug) else 2)


def _check_encode_args(code: PbchCode, w: BitVector, s: DefectVector) -> None:
    if w.n != code.params.k:
        raise ValueError("message length must be k=%d" % code.params.k)
    if s.n != code.params.n:
        raise ValueError("defect vector length must be n=%d" % code.params.n)


def encode(code: PbchCode, w: BitVector, s: DefectVector) -> tuple[BitVector, MaskResult]:
    """Encode w given known defects s; returns the codeword and mask choice."""
    _check_encode_args(code, w, s)
    c, d, unmasked, step = _mask_core(code, w.bits(), s)
    return (
        BitVector(code.params.n, c),
        MaskResult(BitVector.from_int(code.params.l, d), unmasked, step),
    )


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

def _syndromes(code: PbchCode, y_words: np.ndarray) -> np.ndarray:
    n = code.params.n
    pos = np.flatnonzero(unpack_bits(y_words, n))
    if pos.size == 0:
        return np.zeros(len(code._syn_exponents), dtype=np.int64)
    e = (pos[:, None] * code._syn_exponents[None, :]) % n
    return np.bitwise_xor.reduce(code._exp_np[e], axis=0)


def _berlekamp_massey(field: GF2m, syndromes) -> tuple[list[int], int]:
    """Minimal LFSR for the syndrome sequence; returns (sigma, L)."""
    exp, log = field.exp, field.log
    nn = field.n
    C = [1]
    B = [1]
    L = 0
    shift = 1
    b = 1
    for i, s in enumerate(syndromes):
        d = int(s)
        for j in range(1, min(L, len(C) - 1) + 1):
            cj, sj = C[j], int(syndromes[i - j])
            if cj and sj:
                d ^= exp[log[cj] + log[sj]]
        if d == 0:
            shift += 1
            continue
        coef_log = (log[d] - log[b]) % nn
        if 2 * L <= i:
            T = C[:]
            need = len(B) + shift
            if len(C) < need:
                C = C + [0] * (need - len(C))
            for j, bj in enumerate(B):
                if bj:
                    C[j + shift] ^= exp[log[bj] + coef_log]
            L = i + 1 - L
            B = T
            b = d
            shift = 1
        else:
            need = len(B) + shift
            if len(C) < need:
                C = C + [0] * (need - len(C))
            for j, bj in enumerate(B):
                if bj:
                    C[j + shift] ^= exp[log[bj] + coef_log]
            shift += 1
    while len(C) > 1 and C[-1] == 0:
        C.pop()
    return C, L


def _chien_roots(code: PbchCode, sigma: list[int]) -> np.ndarray:
    """Positions i with sigma(alpha^{-i}) = 0, via a full table sweep."""
    n = code.params.n
    field = code.field
    acc = np.full(n, sigma[0], dtype=np.int64)
    for kk in range(1, len(sigma)):
        c = sigma[kk]
        if c == 0:
            continue
        idx = (field.log[c] + kk * code._positions) % n
        acc ^= code._exp_np[idx]
    zero_e = np.flatnonzero(acc == 0)
    return (n - zero_e) % n


def _extract_message(code: PbchCode, c_words: np.ndarray) -> BitVector:
    k = code.params.k
    par = (
        np.bitwise_count(code.msg_inverse.words & c_words).sum(axis=1) & 1
    ).astype(np.uint8)
    return BitVector(k, pack_bits(par))


def decode(code: PbchCode, y: BitVector) -> DecodeOutcome:
    """Bounded-distance decode of a read word.

    Corrects up to t1 flips (unmasked stuck cells act as flips too).  When
    the error locator does not check out, status is 'detected_failure' and
    the message is extracted from y unchanged.
    """
    params = code.params
    if y.n != params.n:
        raise ValueError("received word length must be n=%d" % params.n)
    if params.r == 0:
        return DecodeOutcome(_extract_message(code, y.words), "corrected", 0)
    syn = _syndromes(code, y.words)
    if not syn.any():
        return DecodeOutcome(_extract_message(code, y.words), "corrected", 0)
    sigma, L = _berlekamp_massey(code.field, syn)
    if L > params.t1 or len(sigma) - 1 != L:
        return DecodeOutcome(_extract_message(code, y.words), "detected_failure", 0)
    roots = _chien_roots(code, sigma)
    if roots.size != L:
        return DecodeOutcome(_extract_message(code, y.words), "detected_failure", 0)
    # apply the estimate, then insist the result is an actual codeword
    c_words = y.words.copy()
    for i in roots:
        c_words[i >> 6] ^= np.uint64(1 << (int(i) & 63))
    n = params.n
    check = (roots[:, None] * code._syn_exponents[None, :]) % n
    resid = syn ^ np.bitwise_xor.reduce(code._exp_np[check], axis=0)
    if resid.any():
        return DecodeOutcome(_extract_message(code, y.words), "detected_failure", 0)
    return DecodeOutcome(_extract_message(code, c_words), "corrected", int(L))


# ---------------------------------------------------------------------------
# true minimum distances by enumeration
# ---------------------------------------------------------------------------

def _gray_min_weight(row_ints: list[int], skip=None) -> int:
    """Minimum weight over the nonzero span of row_ints via Gray-code walk.

    ``skip``, when given, is a predicate on the current combination index
    state; combinations for which it returns True are excluded.
    """
    dim = len(row_ints)
    best = None
    cur = 0
    state = 0
    for i in range(1, 1 << dim):
        flip = (i & -i).bit_length() - 1
        cur ^= row_ints[flip]
        state ^= 1 << flip
        if skip is not None and skip(state):
            continue
        w = cur.bit_count()
        if best is None or w < best:
            best = w
    return 0 if best is None else best


def verify_distances(code: PbchCode) -> tuple[int, int]:
    """Exhaustively confirmed (d0, d1); see PlbcParams for their meaning.

    d0 is the minimum weight of a nonzero word orthogonal to every masking
    row; d1 is the minimum weight over codewords of C carrying a nonzero
    message component.  Degenerate parts (l = 0 or r = 0) report 0 to match
    the designed-distance convention.
    """
    p = code.params
    if p.n - p.l > 24 or p.k + p.l > 24:
        raise ValueError("enumeration is limited to 2^24 codewords")
    if p.l == 0:
        d0_true = 0
    else:
        rows = [code._hstar_poly << i for i in range(p.n - p.l)]
        d0_true = _gray_min_weight(rows)
    if p.r == 0:
        d1_true = 0
    else:
        rows = [code.gen_message.row_int(i) for i in range(p.k)]
        rows += [code.gen_mask.row_int(i) for i in range(p.l)]
        kmask = (1 << p.k) - 1
        d1_true = _gray_min_weight(rows, skip=lambda st: not (st & kmask))
    return d0_true, d1_true
