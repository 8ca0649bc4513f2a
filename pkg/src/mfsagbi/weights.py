"""Symbolic beta-weights and the block diagonal weight matrices.

Entries of the weight matrices are integer combinations of powers
``beta^0 .. beta^(r-2)`` with ``beta`` arbitrarily large.  Instead of picking
a numeric ``beta``, weights are compared lexicographically from the highest
power down; every coefficient arising in a fixed (r, n) computation is
bounded, so some finite beta realises the order.  Lower weight = initial
term throughout (min convention).
"""

from __future__ import annotations

from dataclasses import dataclass

from .combinat import Composition
from .errors import InvalidParametersError


@dataclass(frozen=True)
class BetaWeight:
    """Integer coefficient vector over beta powers; coeffs[d] goes with beta^d."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def zero(cls, npowers: int) -> "BetaWeight":
        return cls((0,) * npowers)

    @classmethod
    def single(cls, npowers: int, power: int, coeff: int) -> "BetaWeight":
        if not 0 <= power < npowers:
            raise InvalidParametersError(f"power {power} outside 0..{npowers - 1}")
        c = [0] * npowers
        c[power] = coeff
        return cls(tuple(c))

    def _check(self, other: "BetaWeight"):
        if len(self.coeffs) != len(other.coeffs):
            raise InvalidParametersError(
                f"weight length mismatch: {len(self.coeffs)} vs {len(other.coeffs)}"
            )

    def __add__(self, other: "BetaWeight") -> "BetaWeight":
        self._check(other)
        return BetaWeight(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, k: int) -> "BetaWeight":
        return BetaWeight(tuple(c * int(k) for c in self.coeffs))

    __rmul__ = __mul__

    def _key(self):
        return tuple(reversed(self.coeffs))

    def __lt__(self, other):
        self._check(other)
        return self._key() < other._key()

    def __le__(self, other):
        self._check(other)
        return self._key() <= other._key()

    def __gt__(self, other):
        self._check(other)
        return self._key() > other._key()

    def __ge__(self, other):
        self._check(other)
        return self._key() >= other._key()

    def evaluate(self, beta: int) -> int:
        return sum(c * beta**d for d, c in enumerate(self.coeffs))

    def __str__(self):
        names = {0: "", 1: "*b"}
        parts = [
            f"{c}{names.get(d, f'*b^{d}')}"
            for d, c in enumerate(self.coeffs)
            if c != 0
        ]
        return " + ".join(reversed(parts)) if parts else "0"


def compare_weights(w1: BetaWeight, w2: BetaWeight) -> int:
    """-1, 0 or +1: lexicographic from the highest beta power down."""
    w1._check(w2)
    k1, k2 = w1._key(), w2._key()
    return (k1 > k2) - (k1 < k2)


class WeightMatrix:
    """An r x n matrix of BetaWeight entries inducing a matching field."""

    __slots__ = ("entries", "r", "n", "npowers", "_packed", "_packshift")

    def __init__(self, entries):
        rows = [list(row) for row in entries]
        if not rows or not rows[0]:
            raise InvalidParametersError("empty weight matrix")
        self.r = len(rows)
        self.n = len(rows[0])
        if any(len(row) != self.n for row in rows):
            raise InvalidParametersError("ragged weight matrix")
        self.npowers = len(rows[0][0].coeffs)
        for row in rows:
            for w in row:
                if len(w.coeffs) != self.npowers:
                    raise InvalidParametersError("mixed weight lengths in matrix")
                if any(c < 0 for c in w.coeffs):
                    raise InvalidParametersError("weight coefficients must be >= 0")
        self.entries = tuple(tuple(row) for row in rows)
        self._packed = None
        self._packshift = None

    def __getitem__(self, key) -> BetaWeight:
        k, j = key  # 1-based (row, column)
        return self.entries[k - 1][j - 1]

    def evaluate(self, beta: int) -> list[list[int]]:
        return [[w.evaluate(beta) for w in row] for row in self.entries]

    def coeff_tensor(self) -> list[list[list[int]]]:
        """Nested list [row][col][power] of integer coefficients."""
        return [[list(w.coeffs) for w in row] for row in self.entries]

    # -- packing: encode each entry as one integer so that integer comparison
    # agrees with the symbolic order even after summing up to `max_terms`
    # entries.  Field width is sized from the largest coefficient present.

    def pack_shift(self, max_terms: int = 64) -> int:
        if self._packshift is None:
            top = max((max(w.coeffs) for row in self.entries for w in row), default=0)
            self._packshift = max((top * max_terms + 1).bit_length(), 1)
        return self._packshift

    def packed(self) -> list[list[int]]:
        """Per-entry integer keys; sums of <= 64 keys compare like weights."""
        if self._packed is None:
            shift = self.pack_shift()
            self._packed = [
                [
                    sum(c << (shift * d) for d, c in enumerate(w.coeffs))
                    for w in row
                ]
                for row in self.entries
            ]
        return self._packed

    def unpack(self, key: int, nterms_hint: int = 1) -> BetaWeight:
        shift = self.pack_shift()
        mask = (1 << shift) - 1
        coeffs = []
        for _ in range(self.npowers):
            coeffs.append(key & mask)
            key >>= shift
        return BetaWeight(tuple(coeffs))

    def __eq__(self, other):
        return isinstance(other, WeightMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)


def build_matrix(a: Composition, ell: int, r: int) -> WeightMatrix:
    """The weight matrix of the (a, ell)-block diagonal matching field.

    Row 1 is zero; row k (k != ell) has entry (n+1-j) * beta^(k-2) in column
    j; row ell carries the block rearrangement v(j) * beta^(ell-2) with
    v(j) = alpha_k + alpha_{k-1} + 1 - j for j in block k.
    """
    n = a.n
    if not 2 <= ell <= r:
        raise InvalidParametersError(f"need 2 <= ell <= r, got ell={ell}, r={r}")
    if r > n:
        raise InvalidParametersError(f"need r <= n, got r={r}, n={n}")
    npowers = r - 1
    rows = [[BetaWeight.zero(npowers) for _ in range(n)]]
    for k in range(2, r + 1):
        if k == ell:
            row = []
            for j in range(1, n + 1):
                blk = a.block_of(j)
                v = a.alphas[blk] + a.alphas[blk - 1] + 1 - j
                row.append(BetaWeight.single(npowers, ell - 2, v))
        else:
            row = [
                BetaWeight.single(npowers, k - 2, n + 1 - j) for j in range(1, n + 1)
            ]
        rows.append(row)
    return WeightMatrix(rows)


def monomial_weight(matrix: WeightMatrix, cells) -> BetaWeight:
    """Weight of a monomial given as an iterable of (row, col) cells.

    Additive over multiplication; the empty monomial has weight zero.
    """
    total = BetaWeight.zero(matrix.npowers)
    for k, j in cells:
        total = total + matrix[k, j]
    return total
