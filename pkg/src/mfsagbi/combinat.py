"""Subsets, compositions, permutations and matching-field tableaux.

Conventions used across the package:

- Column subsets of ``[n] = {1, ..., n}`` are plain sorted tuples of ints
  (``(1, 3, 4, 9)``), 1-based, strictly increasing.  Their canonical global
  order is lexicographic on the element lists; that order fixes the indexing
  of the P-variables everywhere.
- A permutation ``sigma`` of ``[r]`` is stored by its image tuple
  ``(sigma(1), ..., sigma(r))``.  For a subset ``I = {i_1 < ... < i_r}`` the
  associated tableau column carries ``i_{sigma(k)}`` in row ``k``; the
  corresponding monomial is ``prod_k x[k, i_{sigma(k)}]``.
- Tableaux are stored column-major: one column per determinant factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .errors import InvalidParametersError


# ---------------------------------------------------------------------------
# compositions


@dataclass(frozen=True)
class Composition:
    """A composition a = (a_1, ..., a_s) of n into positive parts.

    The parts cut [n] into consecutive blocks; ``alphas`` holds the prefix
    sums (alpha_0 = 0, alpha_s = n) and ``blocks[k]`` is the k-th interval.
    """

    parts: tuple[int, ...]
    alphas: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if not self.parts or any(p < 1 for p in self.parts):
            raise InvalidParametersError(f"parts must be positive: {self.parts}")
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        acc = [0]
        for p in self.parts:
            acc.append(acc[-1] + p)
        object.__setattr__(self, "alphas", tuple(acc))

    @property
    def n(self) -> int:
        return self.alphas[-1]

    @property
    def s(self) -> int:
        return len(self.parts)

    def block(self, k: int) -> range:
        """Columns of the k-th block (1-based k), as a range of 1-based ints."""
        return range(self.alphas[k - 1] + 1, self.alphas[k] + 1)

    def block_of(self, j: int) -> int:
        """1-based index of the block containing column j."""
        if not 1 <= j <= self.n:
            raise InvalidParametersError(f"column {j} outside [1, {self.n}]")
        for k in range(1, self.s + 1):
            if j <= self.alphas[k]:
                return k
        raise AssertionError("unreachable")

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def all_compositions(n: int, min_last: int = 1):
    """Yield every composition of n (with last part >= min_last) in lex order."""
    if n < 1:
        raise InvalidParametersError(f"n must be positive: {n}")

    def rec(remaining, prefix):
        if remaining == 0:
            if prefix and prefix[-1] >= min_last:
                yield Composition(tuple(prefix))
            return
        for p in range(1, remaining + 1):
            yield from rec(remaining - p, prefix + [p])

    yield from rec(n, [])


# ---------------------------------------------------------------------------
# subsets


def enumerate_subsets(r: int, n: int) -> list[tuple[int, ...]]:
    """All r-subsets of [n] as sorted tuples, in lexicographic order.

    This order is the canonical indexing of the P-variables.
    """
    if r < 1 or n < 1 or r > n:
        raise InvalidParametersError(f"need 1 <= r <= n, got r={r}, n={n}")
    out = [tuple(c) for c in itertools.combinations(range(1, n + 1), r)]
    assert len(out) == comb(n, r)
    return out


def check_subset(I, r: int, n: int) -> tuple[int, ...]:
    """Validate and normalise an r-subset of [n]."""
    t = tuple(int(i) for i in I)
    if len(t) != r or sorted(set(t)) != list(t) or t[0] < 1 or t[-1] > n:
        raise InvalidParametersError(f"not a strictly increasing r-subset of [{n}]: {I}")
    return t


def type_and_block(I, a: Composition) -> tuple[int, int]:
    """Return (q, b): q = first block meeting I, b = |I intersect block q|.

    Because blocks are consecutive intervals, the elements of I lying in
    block q are exactly the b smallest ones; this is asserted.
    """
    I = tuple(I)
    q = a.block_of(I[0])
    lo, hi = a.alphas[q - 1], a.alphas[q]
    b = sum(1 for i in I if lo < i <= hi)
    assert all(lo < I[k] <= hi for k in range(b)), "block elements must be a prefix"
    return q, b


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Perm:
    """A permutation of [r] stored by its 1-based image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise InvalidParametersError(f"not a bijection of [r]: {self.images}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, r: int) -> "Perm":
        return cls(tuple(range(1, r + 1)))

    @classmethod
    def cycle(cls, r: int, cyc: tuple[int, ...]) -> "Perm":
        """The cycle (c_1 c_2 ... c_k) in S_r, sending c_1 -> c_2 -> ... -> c_1."""
        imgs = list(range(1, r + 1))
        for pos, c in enumerate(cyc):
            imgs[c - 1] = cyc[(pos + 1) % len(cyc)]
        return cls(tuple(imgs))

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    @property
    def r(self) -> int:
        return len(self.images)

    @property
    def sign(self) -> int:
        seen = [False] * self.r
        sign = 1
        for k in range(self.r):
            if seen[k]:
                continue
            length = 0
            j = k
            while not seen[j]:
                seen[j] = True
                j = self.images[j] - 1
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its smallest element."""
        out = []
        seen = [False] * self.r
        for k in range(1, self.r + 1):
            if seen[k - 1]:
                continue
            cyc = []
            j = k
            while not seen[j - 1]:
                seen[j - 1] = True
                cyc.append(j)
                j = self(j)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "id"
        return "".join("(" + " ".join(str(c) for c in cyc) + ")" for cyc in cycs)

    def __str__(self):
        return self.cycle_notation()


# ---------------------------------------------------------------------------
# tableaux


class Tableau:
    """A column-major tableau; column j lists the r entries of one factor."""

    __slots__ = ("columns", "r")

    def __init__(self, columns):
        cols = [tuple(int(x) for x in col) for col in columns]
        if not cols:
            raise InvalidParametersError("tableau needs at least one column")
        r = len(cols[0])
        if any(len(c) != r for c in cols):
            raise InvalidParametersError("ragged tableau")
        for c in cols:
            if len(set(c)) != r:
                raise InvalidParametersError(f"column is not a rearranged subset: {c}")
        self.columns = tuple(cols)
        self.r = r

    @property
    def m(self) -> int:
        return len(self.columns)

    def row(self, k: int) -> tuple[int, ...]:
        """Entries of row k (1-based) left to right."""
        return tuple(col[k - 1] for col in self.columns)

    def row_multisets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(self.row(k))) for k in range(1, self.r + 1))

    def __eq__(self, other):
        return isinstance(other, Tableau) and self.columns == other.columns

    def __hash__(self):
        return hash(self.columns)

    def __repr__(self):
        return f"Tableau({self.render()})"

    def render(self) -> str:
        """Bracket form, e.g. ``[(1,3,2,4)|(3,4,5,6)]``."""
        return "[" + "|".join("(" + ",".join(str(x) for x in c) + ")" for c in self.columns) + "]"

    def latex(self) -> str:
        """``ytableau`` source, rows as in the printed figures."""
        rows = [" &".join(str(x) for x in self.row(k)) for k in range(1, self.r + 1)]
        return "\\begin{ytableau} " + " \\\\ ".join(rows) + " \\end{ytableau}"


def rowwise_equal(t1: Tableau, t2: Tableau) -> bool:
    """True iff every row of t1 and t2 carries the same multiset of entries."""
    if t1.r != t2.r or t1.m != t2.m:
        raise InvalidParametersError(
            f"shape mismatch: {t1.r}x{t1.m} vs {t2.r}x{t2.m}"
        )
    return t1.row_multisets() == t2.row_multisets()


def vertical_swap(t: Tableau, col: int, row_a: int, row_b: int) -> Tableau:
    """Swap the entries at (row_a, col) and (row_b, col); 1-based indices."""
    if not 1 <= col <= t.m:
        raise InvalidParametersError(f"column {col} out of range 1..{t.m}")
    for k in (row_a, row_b):
        if not 1 <= k <= t.r:
            raise InvalidParametersError(f"row {k} out of range 1..{t.r}")
    cols = [list(c) for c in t.columns]
    c = cols[col - 1]
    c[row_a - 1], c[row_b - 1] = c[row_b - 1], c[row_a - 1]
    return Tableau(cols)
