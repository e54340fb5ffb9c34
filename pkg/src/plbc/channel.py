"""Memory cell channel with stuck-at defects and additive errors.

A stored word x of length n passes through two stages: defect clamping,
where each cell is independently stuck at a fixed value with probability
epsilon (half 0, half 1), and a BSC stage flipping each healthy cell with
probability p.  Stuck cells ignore both the written value and the error
stage, so error vectors are zero there by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitVector, pack_bits

__all__ = [
    "ChannelParams",
    "DefectVector",
    "sample_defects",
    "sample_errors",
    "transmit",
]


@dataclass(frozen=True)
class ChannelParams:
    """Defect probability epsilon and healthy-cell flip probability p."""

    epsilon: float
    p: float
    q: int = 2

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if self.q != 2:
            raise ValueError("only the binary alphabet (q=2) is supported")

    @property
    def p_tilde(self) -> float:
        """Effective flip probability when defect locations are ignored."""
        return (1.0 - self.epsilon) * self.p + self.epsilon / 2.0


class DefectVector:
    """Per-cell defect state: healthy, stuck-at-0 or stuck-at-1.

    Stored as two packed vectors: ``mask`` flags stuck cells and ``values``
    holds the stuck value there (zero elsewhere, enforced).  String form uses
    '.' for healthy cells and '0'/'1' for stuck ones.
    """

    __slots__ = ("n", "mask", "values")

    def __init__(self, mask: BitVector, values: BitVector):
        if mask.n != values.n:
            raise ValueError("mask and values lengths differ")
        if np.any(values.words & ~mask.words):
            raise ValueError("stuck values defined only at stuck cells")
        self.n = mask.n
        self.mask = mask
        self.values = values

    @classmethod
    def all_clear(cls, n: int) -> "DefectVector":
        return cls(BitVector(n), BitVector(n))

    @classmethod
    def from_positions(cls, n: int, positions, values) -> "DefectVector":
        mask = BitVector.from_indices(n, positions)
        vals = BitVector(n)
        for pos, val in zip(positions, values, strict=True):
            if val not in (0, 1):
                raise ValueError("stuck values must be 0 or 1")
            if val:
                vals.words[pos >> 6] |= np.uint64(1 << (pos & 63))
        return cls(mask, vals)

    @classmethod
    def from_string(cls, text: str) -> "DefectVector":
        n = len(text)
        mask = np.zeros(n, dtype=np.uint8)
        vals = np.zeros(n, dtype=np.uint8)
        for i, ch in enumerate(text):
            if ch == ".":
                continue
            if ch not in "01":
                raise ValueError("defect strings use only '.', '0', '1'")
            mask[i] = 1
            vals[i] = int(ch)
        return cls(BitVector(n, pack_bits(mask)), BitVector(n, pack_bits(vals)))

    def to_string(self) -> str:
        mask = self.mask.bits()
        vals = self.values.bits()
        return "".join(
            "." if not m else ("1" if v else "0") for m, v in zip(mask, vals)
        )

    @property
    def u(self) -> int:
        """Number of stuck cells."""
        return self.mask.weight()

    def positions(self) -> np.ndarray:
        return self.mask.indices()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DefectVector)
            and self.mask == other.mask
            and self.values == other.values
        )

    def __repr__(self) -> str:
        if self.n <= 64:
            return "DefectVector(%s)" % self.to_string()
        return "DefectVector(n=%d, u=%d)" % (self.n, self.u)


def sample_defects(n: int, ch: ChannelParams, rng: np.random.Generator) -> DefectVector:
    """Draw a defect vector: each cell stuck with probability epsilon.

    Consumes exactly n uniforms (locations) then n bits (stuck values) from
    ``rng``, independent of the parameter values, so seeded streams stay
    aligned across parameter sweeps.
    """
    if n <= 0:
        raise ValueError("length must be positive")
    mask = (rng.random(n) < ch.epsilon).astype(np.uint8)
    values = rng.integers(0, 2, size=n, dtype=np.uint8) & mask
    return DefectVector(BitVector(n, pack_bits(mask)), BitVector(n, pack_bits(values)))


def sample_errors(s: DefectVector, ch: ChannelParams, rng: np.random.Generator) -> BitVector:
    """Draw the additive error vector; always zero at stuck cells."""
    flips = (rng.random(s.n) < ch.p).astype(np.uint8)
    return BitVector(s.n, pack_bits(flips) & ~s.mask.words)


def transmit(x: BitVector, s: DefectVector, z: BitVector) -> BitVector:
    """Read back (x o s) + z: stuck cells clamp, healthy cells add z."""
    if x.n != s.n or z.n != s.n:
        raise ValueError("length mismatch between word, defects and errors")
    if np.any(z.words & s.mask.words):
        raise ValueError("error vector must be zero at stuck cells")
    return BitVector(x.n, ((x.words ^ z.words) & ~s.mask.words) | s.values.words)
