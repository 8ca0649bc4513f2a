"""Exact sparse polynomials over the x-grid and the P-variables.

Monomials over the r x n grid are stored as ascending tuples of cell ids,
``cell = (row-1)*n + (col-1)``, with multiplicity.  P-monomials are ascending
tuples of P-variable indices in the canonical subset order.  Coefficients
are exact (int, or Fraction when a caller introduces one).

The refined term order used everywhere: lower weight first (min convention),
ties broken towards the lexicographically greatest exponent vector under
x[1,1] < x[1,2] < ... < x[r,n], which for ascending cell tuples is plain
tuple order.  Leading term = the smallest element in this order.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction

from .combinat import Perm, Tableau, check_subset, enumerate_subsets
from .errors import InvalidParametersError, SizeLimitError
from .matchfield import MatchingFieldTable
from .weights import BetaWeight, WeightMatrix

MAX_DET_R = 8


def cell_id(row: int, col: int, n: int) -> int:
    return (row - 1) * n + (col - 1)


def cell_rc(cell: int, n: int) -> tuple[int, int]:
    return cell // n + 1, cell % n + 1


def cells_of_column(column, n: int) -> tuple[int, ...]:
    """Grid cells of a tableau column (entry at row k -> cell (k, entry))."""
    return tuple(sorted(cell_id(k, j, n) for k, j in enumerate(column, start=1)))


def merge_cells(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(a + b))


class XPoly:
    """Sparse polynomial over the grid variables; immutable by convention."""

    __slots__ = ("r", "n", "terms")

    def __init__(self, r: int, n: int, terms=None):
        self.r = r
        self.n = n
        self.terms: dict[tuple[int, ...], int | Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    self.terms[tuple(mono)] = self.terms.get(tuple(mono), 0) + c
            self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def zero(cls, r: int, n: int) -> "XPoly":
        return cls(r, n)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def _like(self, other: "XPoly"):
        if (self.r, self.n) != (other.r, other.n):
            raise InvalidParametersError("mixing polynomials over different grids")

    def __add__(self, other: "XPoly") -> "XPoly":
        self._like(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return XPoly(self.r, self.n, out)

    def __sub__(self, other: "XPoly") -> "XPoly":
        self._like(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return XPoly(self.r, self.n, out)

    def __neg__(self) -> "XPoly":
        return XPoly(self.r, self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, k) -> "XPoly":
        if k == 0:
            return XPoly.zero(self.r, self.n)
        return XPoly(self.r, self.n, {m: c * k for m, c in self.terms.items()})

    def __mul__(self, other: "XPoly") -> "XPoly":
        self._like(other)
        out: dict[tuple[int, ...], int | Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = merge_cells(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return XPoly(self.r, self.n, out)

    def __eq__(self, other):
        return (
            isinstance(other, XPoly)
            and (self.r, self.n) == (other.r, other.n)
            and self.terms == other.terms
        )

    def evaluate_ones(self):
        return sum(self.terms.values())

    def exponents(self, mono: tuple[int, ...]) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for cell in mono:
            rc = cell_rc(cell, self.n)
            out[rc] = out.get(rc, 0) + 1
        return out

    def render(self, order_matrix: WeightMatrix | None = None) -> str:
        if not self.terms:
            return "0"
        if order_matrix is not None:
            keys = sorted(self.terms, key=lambda m: refined_key(order_matrix, m))
        else:
            keys = sorted(self.terms)
        parts = []
        for m in keys:
            c = self.terms[m]
            factors = []
            for (row, col), e in sorted(self.exponents(m).items()):
                v = f"x[{row},{col}]"
                factors.append(v if e == 1 else f"{v}^{e}")
            body = "*".join(factors) if factors else "1"
            if c == 1:
                parts.append(f"+ {body}")
            elif c == -1:
                parts.append(f"- {body}")
            elif c < 0:
                parts.append(f"- {-c}*{body}")
            else:
                parts.append(f"+ {c}*{body}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = render


class PPoly:
    """Sparse polynomial in the Pluecker variables, canonical subset order."""

    __slots__ = ("r", "n", "pvars", "terms")

    def __init__(self, r: int, n: int, terms=None):
        self.r = r
        self.n = n
        self.pvars = enumerate_subsets(r, n)
        self.terms: dict[tuple[int, ...], int | Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    key = tuple(sorted(mono))
                    self.terms[key] = self.terms.get(key, 0) + c
            self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def variable(cls, r: int, n: int, I) -> "PPoly":
        I = check_subset(I, r, n)
        idx = enumerate_subsets(r, n).index(I)
        return cls(r, n, {(idx,): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def _like(self, other: "PPoly"):
        if (self.r, self.n) != (other.r, other.n):
            raise InvalidParametersError("mixing polynomials over different P-rings")

    def __add__(self, other):
        self._like(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return PPoly(self.r, self.n, out)

    def __sub__(self, other):
        self._like(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return PPoly(self.r, self.n, out)

    def __neg__(self):
        return PPoly(self.r, self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, k):
        if k == 0:
            return PPoly(self.r, self.n)
        return PPoly(self.r, self.n, {m: c * k for m, c in self.terms.items()})

    def __mul__(self, other):
        self._like(other)
        out: dict[tuple[int, ...], int | Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, 0) + c1 * c2
        return PPoly(self.r, self.n, out)

    def __pow__(self, e: int):
        if e < 0:
            raise InvalidParametersError("negative powers not supported")
        out = PPoly(self.r, self.n, {(): 1})
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, PPoly)
            and (self.r, self.n) == (other.r, other.n)
            and self.terms == other.terms
        )

    def subsets_of(self, mono: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        return tuple(self.pvars[i] for i in mono)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            factors = []
            for i in m:
                factors.append("P[" + ",".join(str(x) for x in self.pvars[i]) + "]")
            body = "*".join(factors) if factors else "1"
            if c == 1:
                parts.append(f"+ {body}")
            elif c == -1:
                parts.append(f"- {body}")
            elif c < 0:
                parts.append(f"- {-c}*{body}")
            else:
                parts.append(f"+ {c}*{body}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = render


# ---------------------------------------------------------------------------
# determinants and the maps psi / psi_Lambda

_det_cache: dict[tuple[int, int, tuple[int, ...]], "XPoly"] = {}


def plucker_det(I, r: int, n: int) -> XPoly:
    """Full Leibniz expansion of det(x_I): r! terms with coefficients +-1."""
    if r > MAX_DET_R:
        raise SizeLimitError(f"r={r} exceeds determinant expansion limit {MAX_DET_R}")
    I = check_subset(I, r, n)
    key = (r, n, I)
    if key not in _det_cache:
        terms = {}
        for p in itertools.permutations(range(r)):
            cells = tuple(sorted(cell_id(k + 1, I[p[k]], n) for k in range(r)))
            terms[cells] = Perm(tuple(x + 1 for x in p)).sign
        _det_cache[key] = XPoly(r, n, terms)
    return _det_cache[key]


def apply_psi(p: PPoly, max_pdegree: int | None = 4) -> XPoly:
    """The substitution P_I -> det(x_I), expanded exactly.

    ``max_pdegree`` guards against runaway expansions (x-degree r * deg);
    pass None to lift the cap.
    """
    out = XPoly.zero(p.r, p.n)
    for mono, c in p.terms.items():
        if max_pdegree is not None and len(mono) > max_pdegree:
            raise SizeLimitError(
                f"psi expansion degree {len(mono)} exceeds cap {max_pdegree}"
            )
        prod = XPoly(p.r, p.n, {(): 1})
        for i in mono:
            prod = prod * plucker_det(p.pvars[i], p.r, p.n)
        out = out + prod.scale(c)
    return out


def apply_psi_lambda(field: MatchingFieldTable, p: PPoly, mono: tuple[int, ...]):
    """Image of one P-monomial under the signed monomial map.

    Returns (sign, cells): the product over factors of sgn(Lambda(I)) times
    the initial monomial of det(x_I).
    """
    sign = 1
    cells: tuple[int, ...] = ()
    for i in mono:
        I = p.pvars[i]
        sign *= field.sign_of(I)
        cells = merge_cells(cells, cells_of_column(field.column_of(I), p.n))
    return sign, cells


# ---------------------------------------------------------------------------
# initial forms under a weight matrix

def cells_weight(matrix: WeightMatrix, cells: tuple[int, ...]) -> BetaWeight:
    w = BetaWeight.zero(matrix.npowers)
    for cell in cells:
        row, col = cell // matrix.n + 1, cell % matrix.n + 1
        w = w + matrix[row, col]
    return w


def refined_key(matrix: WeightMatrix, cells: tuple[int, ...]):
    """Sort key for the refined order: weight first, then ascending cells."""
    return (cells_weight(matrix, cells)._key(), cells)


def initial_form(matrix: WeightMatrix, poly: XPoly) -> XPoly:
    """Sum of all terms of minimal weight (min convention)."""
    if poly.is_zero():
        raise InvalidParametersError("initial form of the zero polynomial")
    best = None
    for m in poly.terms:
        w = cells_weight(matrix, m)._key()
        if best is None or w < best:
            best = w
    return XPoly(
        poly.r,
        poly.n,
        {m: c for m, c in poly.terms.items() if cells_weight(matrix, m)._key() == best},
    )


def leading_term(matrix: WeightMatrix, poly: XPoly):
    """(coefficient, cells, weight_unique) of the refined-order minimum."""
    if poly.is_zero():
        raise InvalidParametersError("leading term of the zero polynomial")
    ini = initial_form(matrix, poly)
    mono = min(ini.terms)
    return ini.terms[mono], mono, len(ini) == 1


def tableau_of_cells(cells: tuple[int, ...], r: int, n: int) -> Tableau:
    """Rebuild a tableau from a monomial whose rows each hold deg/r cells.

    Columns are normalised by sorting rows; the column decomposition of a
    monomial is not unique, so this is only a display aid.
    """
    per_row = [[] for _ in range(r)]
    for cell in cells:
        per_row[cell // n].append(cell % n + 1)
    m = len(cells) // r
    if any(len(row) != m for row in per_row):
        raise InvalidParametersError("cells do not fill rows evenly")
    cols = [[sorted(row)[j] for row in per_row] for j in range(m)]
    return Tableau(cols)


# ---------------------------------------------------------------------------
# P-expression parser for the CLI: integer coefficients, P[...] atoms, * + - ^

_TOKEN = re.compile(r"\s*(P\[[0-9,\s]*\]|\d+|[-+*^()])")


def parse_p_expression(text: str, r: int, n: int) -> PPoly:
    pos = 0
    tokens: list[str] = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise InvalidParametersError(f"bad token at: {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append("$")
    k = 0

    def peek():
        return tokens[k]

    def take():
        nonlocal k
        t = tokens[k]
        k += 1
        return t

    def parse_expr() -> PPoly:
        sign = 1
        while peek() in "+-":
            if take() == "-":
                sign = -sign
        acc = parse_term().scale(sign)
        while peek() in "+-":
            sign = 1 if take() == "+" else -1
            acc = acc + parse_term().scale(sign)
        return acc

    def parse_term() -> PPoly:
        acc = parse_factor()
        while peek() == "*":
            take()
            acc = acc * parse_factor()
        return acc

    def parse_factor() -> PPoly:
        base = parse_atom()
        if peek() == "^":
            take()
            e = take()
            if not e.isdigit():
                raise InvalidParametersError(f"exponent must be an integer, got {e!r}")
            return base ** int(e)
        return base

    def parse_atom() -> PPoly:
        t = take()
        if t == "(":
            inner = parse_expr()
            if take() != ")":
                raise InvalidParametersError("unbalanced parentheses")
            return inner
        if t.isdigit():
            return PPoly(r, n, {(): int(t)})
        if t.startswith("P["):
            body = t[2:-1]
            I = tuple(int(x) for x in body.split(",") if x.strip())
            return PPoly.variable(r, n, I)
        raise InvalidParametersError(f"unexpected token {t!r}")

    out = parse_expr()
    if peek() != "$":
        raise InvalidParametersError(f"trailing input near {peek()!r}")
    return out
