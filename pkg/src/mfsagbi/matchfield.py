"""Coherent matching fields: brute-force induction and the closed form.

A matching field assigns to each r-subset I the permutation whose tableau
column realises the cheapest term of det(x_I).  Two constructions are kept
side by side on purpose: `induce_from_matrix` minimises exhaustively over
all r! permutations and is the independent oracle; `closed_form` is the
block diagonal formula.  Their agreement is part of the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .combinat import Composition, Perm, Tableau, check_subset, enumerate_subsets, type_and_block
from .errors import InvalidParametersError, SizeLimitError
from .weights import WeightMatrix, build_matrix

MAX_R = 8  # 8! = 40320 permutations per subset is the exhaustive-search limit


@dataclass
class MatchingFieldTable:
    """The full map I -> Perm over all r-subsets, with coherence evidence.

    ``coherent`` is True when every subset has a unique weight-minimising
    permutation under the inducing matrix; ties are recorded in ``ties``.
    Closed-form tables are coherent by construction of their matrix.
    """

    r: int
    n: int
    assignment: dict[tuple[int, ...], Perm]
    source: str  # "closed-form(a,ell)" or "matrix-induced"
    coherent: bool
    ties: list[tuple[tuple[int, ...], Perm, Perm]]

    def __call__(self, I) -> Perm:
        I = tuple(I)
        try:
            return self.assignment[I]
        except KeyError:
            raise InvalidParametersError(f"{I} is not an r-subset of this field") from None

    def subsets(self) -> list[tuple[int, ...]]:
        return sorted(self.assignment)

    def column_of(self, I) -> tuple[int, ...]:
        """The tableau column of I: entry at row k is I[sigma(k)]."""
        I = tuple(I)
        sigma = self(I)
        return tuple(I[sigma(k) - 1] for k in range(1, self.r + 1))

    def sign_of(self, I) -> int:
        return self(I).sign

    def cells_of(self, I) -> tuple[tuple[int, int], ...]:
        """Grid cells (row, col) of the initial monomial of det(x_I)."""
        return tuple((k, j) for k, j in enumerate(self.column_of(I), start=1))


def induce_from_matrix(matrix: WeightMatrix) -> MatchingFieldTable:
    """Brute-force weight minimisation over all r! permutations per subset."""
    r, n = matrix.r, matrix.n
    if r > MAX_R:
        raise SizeLimitError(f"r={r} exceeds the exhaustive-search limit {MAX_R}")
    packed = matrix.packed()
    perms = list(itertools.permutations(range(r)))
    assignment: dict[tuple[int, ...], Perm] = {}
    ties = []
    for I in enumerate_subsets(r, n):
        cols = [packed[k][j - 1] for k in range(r) for j in I]  # row-major r x r
        best_key = None
        best_perm = None
        tie_perm = None
        for p in perms:
            key = 0
            for k in range(r):
                key += cols[k * r + p[k]]
            if best_key is None or key < best_key:
                best_key, best_perm, tie_perm = key, p, None
            elif key == best_key:
                tie_perm = p
        sigma = Perm(tuple(x + 1 for x in best_perm))
        assignment[I] = sigma
        if tie_perm is not None:
            ties.append((I, sigma, Perm(tuple(x + 1 for x in tie_perm))))
    return MatchingFieldTable(
        r=r,
        n=n,
        assignment=assignment,
        source="matrix-induced",
        coherent=not ties,
        ties=ties,
    )


def closed_form(a: Composition, ell: int, r: int) -> MatchingFieldTable:
    """The block diagonal field in closed form.

    A subset of type b < ell maps to the cycle (b b+1 ... ell), so the
    ell-th tableau entry is i_b and the rest stay increasing; type >= ell
    maps to the identity.
    """
    n = a.n
    if not 2 <= ell <= r:
        raise InvalidParametersError(f"need 2 <= ell <= r, got ell={ell}, r={r}")
    if r > n:
        raise InvalidParametersError(f"need r <= n, got r={r}, n={n}")
    assignment = {}
    for I in enumerate_subsets(r, n):
        _, b = type_and_block(I, a)
        if b >= ell:
            assignment[I] = Perm.identity(r)
        else:
            assignment[I] = Perm.cycle(r, tuple(range(b, ell + 1)))
    return MatchingFieldTable(
        r=r,
        n=n,
        assignment=assignment,
        source=f"closed-form(a={a},ell={ell})",
        coherent=True,
        ties=[],
    )


def tableau_of(field: MatchingFieldTable, *subsets) -> Tableau:
    """The tableau whose columns are the field's columns of the given subsets."""
    if not subsets:
        raise InvalidParametersError("need at least one subset")
    cols = []
    for I in subsets:
        I = check_subset(I, field.r, field.n)
        cols.append(field.column_of(I))
    return Tableau(cols)


def permute_columns(matrix: WeightMatrix, theta) -> WeightMatrix:
    """Column j of the result is column theta(j) of the input; theta 1-based."""
    theta = tuple(int(t) for t in theta)
    n = matrix.n
    if sorted(theta) != list(range(1, n + 1)):
        raise InvalidParametersError(f"not a permutation of [{n}]: {theta}")
    return WeightMatrix(
        [[matrix[k, theta[j - 1]] for j in range(1, n + 1)] for k in range(1, matrix.r + 1)]
    )


def block_field(a: Composition, ell: int, r: int) -> tuple[WeightMatrix, MatchingFieldTable]:
    """Convenience: the weight matrix together with its closed-form field."""
    return build_matrix(a, ell, r), closed_form(a, ell, r)
