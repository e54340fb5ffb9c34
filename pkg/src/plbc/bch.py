"""Binary BCH machinery: cyclotomic cosets, minimal polynomials, generators.

Everything here works on primitive-length codes, n = 2^m - 1.  Generator
polynomials are built as the least common multiple of minimal polynomials of
consecutive powers of alpha, which for binary polynomials reduces to a
product over distinct cyclotomic cosets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError
from .gf2 import BitMatrix, GF2m, poly_degree, poly_mul

__all__ = [
    "BchSpec",
    "CyclotomicCoset",
    "bch_generator",
    "bch_parity_check",
    "cyclotomic_coset",
    "cyclotomic_cosets",
    "design_bch",
    "minimal_polynomial",
]


@dataclass(frozen=True)
class CyclotomicCoset:
    leader: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


def field_for_length(n: int) -> GF2m:
    """GF(2^m) for a primitive code length n = 2^m - 1."""
    m = n.bit_length()
    if n <= 0 or n != (1 << m) - 1:
        raise ValueError("length must be 2^m - 1, got %r" % (n,))
    return GF2m(m)


def cyclotomic_coset(j: int, n: int) -> CyclotomicCoset:
    """The 2-cyclotomic coset of j modulo n."""
    if n <= 0:
        raise ValueError("modulus must be positive")
    j %= n
    members = []
    e = j
    while True:
        members.append(e)
        e = (2 * e) % n
        if e == j:
            break
    members.sort()
    return CyclotomicCoset(members[0], tuple(members))


def cyclotomic_cosets(n: int) -> list[CyclotomicCoset]:
    """All 2-cyclotomic cosets mod n, ordered by leader."""
    seen = [False] * n
    out = []
    for j in range(n):
        if seen[j]:
            continue
        c = cyclotomic_coset(j, n)
        for e in c.members:
            seen[e] = True
        out.append(c)
    return out


def minimal_polynomial(j: int, field: GF2m) -> int:
    """Minimal polynomial of alpha^j over GF(2), as a plain int."""
    coset = cyclotomic_coset(j, field.n)
    # expand prod_{i in coset} (x + alpha^i) with GF(2^m) coefficients
    coeffs = [1]
    for e in coset.members:
        root = field.alpha_pow(e)
        nxt = [0] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] ^= c
            nxt[d] ^= field.mul(c, root)
        coeffs = nxt
    poly = 0
    for d, c in enumerate(coeffs):
        if c > 1:
            raise ConstructionError(
                "minimal polynomial of alpha^%d has a non-binary coefficient" % j
            )
        poly |= c << d
    return poly


def bch_generator(n: int, delta: int, field: GF2m | None = None) -> int:
    """Generator polynomial of the BCH code of designed distance delta.

    lcm of the minimal polynomials of alpha^1 .. alpha^(delta-1); delta = 1
    gives the trivial generator 1 (the whole space).
    """
    if field is None:
        field = field_for_length(n)
    elif field.n != n:
        raise ValueError("field order does not match length")
    if delta < 1 or delta > n:
        raise ValueError("designed distance must be in [1, n]")
    if delta % 2 == 0:
        raise ValueError("designed distance must be odd")
    g = 1
    seen: set[int] = set()
    for j in range(1, delta):
        coset = cyclotomic_coset(j, n)
        if coset.leader in seen:
            continue
        seen.add(coset.leader)
        g = poly_mul(g, minimal_polynomial(j, field))
    return g


@dataclass(frozen=True)
class BchSpec:
    n: int
    designed_distance: int
    generator: int
    parity_rows: int


def design_bch(n: int, delta: int, field: GF2m | None = None) -> BchSpec:
    if field is None:
        field = field_for_length(n)
    g = bch_generator(n, delta, field)
    deg = poly_degree(g)
    return BchSpec(n, delta, g, 0 if deg is None else deg)


def bch_parity_check(n: int, delta: int, field: GF2m) -> BitMatrix:
    """Parity-check matrix of the designed-distance-delta BCH code.

    One m-row block per distinct cyclotomic coset among the odd exponents
    1, 3, ..., delta-2; block j holds the binary expansion of
    [1, alpha^j, alpha^(2j), ..., alpha^((n-1)j)].  The row count must equal
    the generator degree and the matrix must have full row rank; short
    cosets make both impossible and are reported rather than padded over.
    """
    if field.n != n:
        raise ValueError("field order does not match length")
    if delta < 1 or delta % 2 == 0:
        raise ValueError("designed distance must be odd and >= 1")
    m = field.m
    blocks = []
    leaders = []
    short = []
    seen: set[int] = set()
    positions = np.arange(n, dtype=np.int64)
    for j in range(1, delta - 1, 2):
        coset = cyclotomic_coset(j, n)
        if coset.leader in seen:
            continue
        seen.add(coset.leader)
        leaders.append(coset.leader)
        if len(coset) != m:
            short.append(coset)
        vals = field.exp_np[(positions * j) % n]
        block = np.empty((m, n), dtype=np.uint8)
        for b in range(m):
            block[b] = ((vals >> b) & 1).astype(np.uint8)
        blocks.append(block)
    if not blocks:
        return BitMatrix(0, n)
    mat = BitMatrix.from_dense(np.vstack(blocks))
    deg = poly_degree(bch_generator(n, delta, field)) or 0
    if mat.rows != deg:
        raise ConstructionError(
            "parity-check rows (%d) != generator degree (%d) at n=%d delta=%d; "
            "cosets shorter than m: %s"
            % (mat.rows, deg, n, delta, [c.members for c in short] or "none")
        )
    from .gf2 import rank as _rank

    rk = _rank(mat)
    if rk != mat.rows:
        raise ConstructionError(
            "parity-check matrix is rank deficient (%d < %d) at n=%d delta=%d"
            % (rk, mat.rows, n, delta)
        )
    return mat
