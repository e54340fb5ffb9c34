"""GF(2^m) arithmetic and bit-packed linear algebra over GF(2).

Conventions used throughout the package:

* Field elements of GF(2^m) are plain ints in ``[0, 2^m)``; bit i is the
  coefficient of alpha^i in the polynomial basis.
* Binary polynomials are plain ints; bit i is the coefficient of x^i.  The
  zero polynomial is 0 and its degree is ``None``.
* Vectors and matrices over GF(2) are bit-packed into numpy uint64 words,
  least significant bit first, so word-level XOR/AND/popcount do the heavy
  lifting at n = 1023.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "GF2m",
    "BitMatrix",
    "BitVector",
    "PRIMITIVE_POLYS",
    "poly_degree",
    "poly_divmod",
    "poly_eval",
    "poly_mul",
    "poly_reciprocal",
    "rank",
    "rref",
    "solve_row_system",
]

# Primitive polynomials over GF(2), one per extension degree.  Bit i is the
# coefficient of x^i (e.g. m=4 -> x^4 + x + 1 -> 0b10011).
PRIMITIVE_POLYS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


# ---------------------------------------------------------------------------
# binary polynomials (plain ints)
# ---------------------------------------------------------------------------

def poly_degree(p: int) -> int | None:
    """Degree of a binary polynomial, or None for the zero polynomial."""
    if p < 0:
        raise ValueError("polynomials are nonnegative ints")
    if p == 0:
        return None
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Product of two binary polynomials (carryless multiply)."""
    if a < 0 or b < 0:
        raise ValueError("polynomials are nonnegative ints")
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(num: int, den: int) -> tuple[int, int]:
    """Quotient and remainder of binary polynomial long division."""
    if num < 0 or den < 0:
        raise ValueError("polynomials are nonnegative ints")
    if den == 0:
        raise ZeroDivisionError("polynomial division by zero")
    dd = den.bit_length()
    quo = 0
    rem = num
    while rem.bit_length() >= dd:
        shift = rem.bit_length() - dd
        quo |= 1 << shift
        rem ^= den << shift
    return quo, rem


def poly_reciprocal(p: int) -> int:
    """Reverse the coefficients of p: x^deg(p) * p(1/x)."""
    if p < 0:
        raise ValueError("polynomials are nonnegative ints")
    if p == 0:
        return 0
    return int(format(p, "b")[::-1], 2)


def poly_eval(p: int, x: int, field: "GF2m") -> int:
    """Evaluate a binary polynomial at a GF(2^m) element (Horner)."""
    acc = 0
    for d in range(p.bit_length() - 1, -1, -1):
        acc = field.mul(acc, x)
        if (p >> d) & 1:
            acc ^= 1
    return acc


# ---------------------------------------------------------------------------
# GF(2^m)
# ---------------------------------------------------------------------------

class GF2m:
    """GF(2^m) with exp/log tables over a fixed primitive polynomial.

    Elements are ints in [0, 2^m).  Addition is XOR and is not wrapped in a
    method.  ``exp`` is doubled in length so products of two logs index it
    without a modular reduction.
    """

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not 2 <= m <= 16:
            raise ValueError("m must be in [2, 16]")
        if primitive_poly is None:
            primitive_poly = PRIMITIVE_POLYS[m]
        if poly_degree(primitive_poly) != m:
            raise ValueError("primitive polynomial degree must equal m")
        self.m = m
        self.order = 1 << m
        self.n = self.order - 1
        self.primitive_poly = primitive_poly

        exp = [0] * (2 * self.n)
        log = [0] * self.order
        x = 1
        for i in range(self.n):
            exp[i] = x
            exp[i + self.n] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= primitive_poly
        if x != 1:
            raise ValueError("polynomial is not primitive for GF(2^%d)" % m)
        self.exp = exp
        self.log = log
        # exp restricted to one period, as an array for vectorized lookups
        self.exp_np = np.array(exp[: self.n], dtype=np.int64)

    def _check(self, a: int) -> None:
        if not 0 <= a < self.order:
            raise ValueError("element %r outside GF(2^%d)" % (a, self.m))

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^%d)" % self.m)
        return self.exp[self.n - self.log[a]]

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        return self.exp[(self.log[a] * e) % self.n]

    def alpha_pow(self, e: int) -> int:
        """alpha^e for any integer exponent."""
        return self.exp[e % self.n]

    def __repr__(self) -> str:
        return "GF2m(m=%d, primitive_poly=0x%x)" % (self.m, self.primitive_poly)


# ---------------------------------------------------------------------------
# bit packing helpers
# ---------------------------------------------------------------------------

_WORD_BYTES = 8


def _n_words(n: int) -> int:
    return (n + 63) >> 6


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a uint8 0/1 array into little-endian uint64 words."""
    raw = np.packbits(bits, bitorder="little").tobytes()
    pad = -len(raw) % _WORD_BYTES
    if pad:
        raw += b"\x00" * pad
    return np.frombuffer(raw, dtype="<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of pack_bits; returns a uint8 array of length n."""
    raw = np.frombuffer(words.astype("<u8").tobytes(), dtype=np.uint8)
    return np.unpackbits(raw, count=n, bitorder="little")


def popcount_words(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum())


def words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(words.astype("<u8").tobytes(), "little")


def int_to_words(value: int, n: int) -> np.ndarray:
    if value < 0 or value.bit_length() > n:
        raise ValueError("value does not fit in %d bits" % n)
    nw = _n_words(n)
    raw = value.to_bytes(nw * _WORD_BYTES, "little")
    return np.frombuffer(raw, dtype="<u8").astype(np.uint64)


# ---------------------------------------------------------------------------
# vectors and matrices
# ---------------------------------------------------------------------------

class BitVector:
    """Immutable-by-convention GF(2) vector packed into uint64 words."""

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: np.ndarray | None = None):
        if n < 0:
            raise ValueError("length must be nonnegative")
        self.n = n
        if words is None:
            words = np.zeros(_n_words(n), dtype=np.uint64)
        elif len(words) != _n_words(n):
            raise ValueError("word count does not match length")
        self.words = words

    @classmethod
    def from_bits(cls, bits) -> "BitVector":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1 or np.any(arr > 1):
            raise ValueError("bits must be a flat 0/1 sequence")
        return cls(len(arr), pack_bits(arr))

    @classmethod
    def from_int(cls, n: int, value: int) -> "BitVector":
        return cls(n, int_to_words(value, n))

    @classmethod
    def from_indices(cls, n: int, indices) -> "BitVector":
        v = cls(n)
        for i in indices:
            if not 0 <= i < n:
                raise ValueError("index %d out of range" % i)
            v.words[i >> 6] |= np.uint64(1 << (i & 63))
        return v

    def get(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise ValueError("index %d out of range" % i)
        return int(self.words[i >> 6] >> np.uint64(i & 63)) & 1

    def weight(self) -> int:
        return popcount_words(self.words)

    def bits(self) -> np.ndarray:
        return unpack_bits(self.words, self.n)

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits())

    def to_int(self) -> int:
        return words_to_int(self.words)

    def copy(self) -> "BitVector":
        return BitVector(self.n, self.words.copy())

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVector(self.n, self.words ^ other.words)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and bool(np.array_equal(self.words, other.words))
        )

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        if self.n <= 64:
            return "BitVector(%s)" % "".join(map(str, self.bits()))
        return "BitVector(n=%d, weight=%d)" % (self.n, self.weight())


class BitMatrix:
    """GF(2) matrix with bit-packed rows (shape: rows x words)."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        if words is None:
            words = np.zeros((rows, _n_words(cols)), dtype=np.uint64)
        elif words.shape != (rows, _n_words(cols)):
            raise ValueError("word array shape mismatch")
        self.words = words

    @classmethod
    def from_row_ints(cls, row_ints, cols: int) -> "BitMatrix":
        rows = len(row_ints)
        m = cls(rows, cols)
        for i, v in enumerate(row_ints):
            m.words[i] = int_to_words(v, cols)
        return m

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("dense matrix must be 2-D")
        m = cls(arr.shape[0], arr.shape[1])
        for i in range(arr.shape[0]):
            m.words[i] = pack_bits(arr[i])
        return m

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            m.words[i, i >> 6] = np.uint64(1 << (i & 63))
        return m

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.words[i].copy())

    def row_int(self, i: int) -> int:
        return words_to_int(self.words[i])

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise ValueError("index out of range")
        return int(self.words[i, j >> 6] >> np.uint64(j & 63)) & 1

    def dense(self) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=np.uint8)
        for i in range(self.rows):
            out[i] = unpack_bits(self.words[i], self.cols)
        return out

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.dense().T)

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return BitMatrix(
            self.rows + other.rows,
            self.cols,
            np.vstack([self.words, other.words]),
        )

    def vecmat(self, v: BitVector) -> BitVector:
        """v * M for a length-``rows`` vector: XOR of the selected rows."""
        if v.n != self.rows:
            raise ValueError("vector length must equal row count")
        idx = v.indices()
        out = np.zeros(_n_words(self.cols), dtype=np.uint64)
        if idx.size:
            out = np.bitwise_xor.reduce(self.words[idx], axis=0)
        return BitVector(self.cols, out)

    def matvec_parity(self, v: BitVector) -> BitVector:
        """M * v^T for a length-``cols`` vector: per-row AND parity."""
        if v.n != self.cols:
            raise ValueError("vector length must equal column count")
        if self.rows == 0:
            return BitVector(0)
        par = (np.bitwise_count(self.words & v.words).sum(axis=1) & 1).astype(np.uint8)
        return BitVector(self.rows, pack_bits(par))

    def column_ints(self) -> list[int]:
        """Columns as ints (bit i = row i); handy for small solves."""
        dense = self.dense()
        out = []
        for j in range(self.cols):
            col = 0
            for i in np.flatnonzero(dense[:, j]):
                col |= 1 << int(i)
            out.append(col)
        return out

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.words.copy())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.words, other.words))
        )

    def __repr__(self) -> str:
        return "BitMatrix(%dx%d)" % (self.rows, self.cols)


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def rref(mat: BitMatrix, n_pivot_cols: int | None = None) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form over the first ``n_pivot_cols`` columns.

    Returns the reduced matrix and the pivot column list.  Rows are
    eliminated above and below each pivot, so pivot columns end up as unit
    columns.
    """
    if n_pivot_cols is None:
        n_pivot_cols = mat.cols
    if n_pivot_cols > mat.cols:
        raise ValueError("pivot column count exceeds matrix width")
    W = mat.words.copy()
    nrows = mat.rows
    pivots: list[int] = []
    prow = 0
    one = np.uint64(1)
    for col in range(n_pivot_cols):
        if prow == nrows:
            break
        w = col >> 6
        b = np.uint64(col & 63)
        below = (W[prow:, w] >> b) & one
        nz = np.flatnonzero(below)
        if nz.size == 0:
            continue
        piv = prow + int(nz[0])
        if piv != prow:
            W[[prow, piv]] = W[[piv, prow]]
        hits = np.flatnonzero((W[:, w] >> b) & one)
        hits = hits[hits != prow]
        if hits.size:
            W[hits] ^= W[prow]
        pivots.append(col)
        prow += 1
    return BitMatrix(nrows, mat.cols, W), pivots


def rank(mat: BitMatrix) -> int:
    return len(rref(mat)[1])


def _solve_aug_rows(rows: list[int], width: int) -> int | None:
    """Solve a GF(2) system given as augmented rows (RHS at bit ``width``).

    Returns a solution with free variables set to zero, or None when the
    system is inconsistent.
    """
    rows = list(rows)
    nrows = len(rows)
    pivots: list[int] = []
    prow = 0
    for col in range(width):
        if prow == nrows:
            break
        bit = 1 << col
        piv = -1
        for i in range(prow, nrows):
            if rows[i] & bit:
                piv = i
                break
        if piv < 0:
            continue
        rows[prow], rows[piv] = rows[piv], rows[prow]
        pr = rows[prow]
        for i in range(nrows):
            if i != prow and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(col)
        prow += 1
    rhs = 1 << width
    for i in range(prow, nrows):
        if rows[i] & rhs:
            return None
    x = 0
    for i, col in enumerate(pivots):
        if rows[i] & rhs:
            x |= 1 << col
    return x


def solve_row_system(a: BitMatrix, b: BitVector) -> BitVector | None:
    """Solve ``x * a = b`` for x, or return None when inconsistent.

    ``a`` is l x u and ``b`` has length u.  Free variables are set to zero,
    so the returned solution is deterministic.
    """
    if b.n != a.cols:
        raise ValueError("right-hand side length must equal column count")
    cols = a.column_ints()
    bb = b.bits()
    aug = [cols[j] | (int(bb[j]) << a.rows) for j in range(a.cols)]
    x = _solve_aug_rows(aug, a.rows)
    if x is None:
        return None
    return BitVector.from_int(a.rows, x)
