"""The matching field ideal: kernel binomials, saturation, membership.

The signed monomial map sends P_I to sgn(Lambda(I)) times the initial
monomial of det(x_I).  Rescaling each variable by its sign turns every
kernel binomial into a pure difference P^u - P^v, so the engine below works
on pairs of exponent tuples and the epsilon sign is recovered on output
(eps = sign character of u times sign character of v).

Saturation follows the standard lattice-ideal recipe: starting from
binomials whose vectors span the kernel lattice up to finite index, colon
out each variable once using a graded reverse-lex order in which that
variable is cheapest; for homogeneous ideals dividing the Groebner basis
elements by the cheap variable computes the colon ideal exactly.  Removing
full monomial gcds along the way is sound because the target ideal is prime
and contains no monomial.
"""

from __future__ import annotations

import heapq
import itertools
from collections import Counter
from dataclasses import dataclass, field as dfield
from math import comb

from .combinat import enumerate_subsets
from .errors import InvalidParametersError, ResourceLimitError
from .matchfield import MatchingFieldTable
from .poly import cells_of_column
from .weights import WeightMatrix

DEFAULT_MAX_PAIRS = 10**6
DEFAULT_MAX_DEGREE = 12
DEFAULT_KERNEL_ENUM_CAP = 5 * 10**6


# ---------------------------------------------------------------------------
# exponent matrix of the monomial map


class ExponentMatrix:
    """Columns = exponent vectors of the initial monomials, plus signs."""

    def __init__(self, field: MatchingFieldTable, matrix: WeightMatrix | None = None):
        self.r, self.n = field.r, field.n
        self.field = field
        self.matrix = matrix
        self.pvars = enumerate_subsets(self.r, self.n)
        self.nvars = len(self.pvars)
        self.columns: list[tuple[int, ...]] = []  # sorted cell ids, length r each
        self.signs: list[int] = []
        for I in self.pvars:
            col = field.column_of(I)
            self.columns.append(cells_of_column(col, self.n))
            self.signs.append(field.sign_of(I))
        for col in self.columns:
            rows = sorted(c // self.n for c in col)
            assert rows == list(range(self.r)), "one cell per grid row expected"
        # per-variable packed weight keys (0 when no matrix is supplied)
        if matrix is not None:
            packed = matrix.packed()
            self.wkeys = [
                sum(packed[c // self.n][c % self.n] for c in col)
                for col in self.columns
            ]
        else:
            self.wkeys = [0] * self.nvars
        self.cell_to_vars: dict[int, list[int]] = {}
        for i, col in enumerate(self.columns):
            for c in col:
                self.cell_to_vars.setdefault(c, []).append(i)

    def as_rows(self) -> list[list[int]]:
        """Dense 0/1 matrix, rows = grid cells (rn), columns = P-variables."""
        rows = [[0] * self.nvars for _ in range(self.r * self.n)]
        for i, col in enumerate(self.columns):
            for c in col:
                rows[c][i] += 1
        return rows

    def image_cells(self, u) -> tuple[int, ...]:
        """Sorted cell multiset of the image monomial of exponent vector u."""
        cells = []
        for i, e in enumerate(u):
            if e:
                cells.extend(self.columns[i] * e)
        return tuple(sorted(cells))

    def sign_char(self, u) -> int:
        s = 1
        for i, e in enumerate(u):
            if e and self.signs[i] < 0 and e % 2:
                s = -s
        return s


def build_exponent_matrix(field: MatchingFieldTable, matrix: WeightMatrix | None = None):
    return ExponentMatrix(field, matrix)


# ---------------------------------------------------------------------------
# integer kernel (fraction-free, unimodular row operations only)


def integer_rank(rows) -> int:
    m = [list(map(int, row)) for row in rows if any(row)]
    rank = 0
    ncols = len(m[0]) if m else 0
    col = 0
    while m and col < ncols:
        piv = None
        for i, row in enumerate(m):
            if row[col]:
                if piv is None or abs(row[col]) < abs(m[piv][col]):
                    piv = i
        if piv is None:
            col += 1
            continue
        while True:
            done = True
            for i, row in enumerate(m):
                if i != piv and row[col]:
                    q = row[col] // m[piv][col]
                    if q:
                        m[i] = [a - q * b for a, b in zip(row, m[piv])]
                    if m[i][col]:
                        piv = i
                        done = False
            if done:
                break
        m.pop(piv)
        m = [row for row in m if any(row)]
        rank += 1
        col += 1
    return rank


def lattice_kernel(rows) -> list[tuple[int, ...]]:
    """Basis of the integer kernel {u : A u = 0} of the matrix with given rows.

    Works on the transpose augmented with an identity block; only unimodular
    row operations are applied, so the zero-rows' identity parts are an
    honest lattice basis of the kernel.
    """
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return []
    nrows, ncols = len(rows), len(rows[0])
    # transpose: one row per kernel coordinate
    work = [[rows[i][j] for i in range(nrows)] + [0] * ncols for j in range(ncols)]
    for j in range(ncols):
        work[j][nrows + j] = 1
    used = 0
    for col in range(nrows):
        piv = None
        for i in range(used, ncols):
            if work[i][col]:
                if piv is None or abs(work[i][col]) < abs(work[piv][col]):
                    piv = i
        if piv is None:
            continue
        work[used], work[piv] = work[piv], work[used]
        while True:
            finished = True
            for i in range(used + 1, ncols):
                if work[i][col]:
                    q = work[i][col] // work[used][col]
                    if q:
                        work[i] = [a - q * b for a, b in zip(work[i], work[used])]
                    if work[i][col]:
                        work[used], work[i] = work[i], work[used]
                        finished = False
            if finished:
                break
        used += 1
    basis = []
    for i in range(used, ncols):
        assert all(x == 0 for x in work[i][:nrows])
        vec = tuple(work[i][nrows:])
        if any(vec):
            basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# signed binomials


@dataclass(frozen=True)
class SignedBinomial:
    """P^u - eps * P^v in the kernel; supports disjoint, eps = sign character."""

    u: tuple[int, ...]
    v: tuple[int, ...]
    eps: int

    @property
    def degree(self) -> int:
        return sum(self.u)

    def support_disjoint(self) -> bool:
        return all(a == 0 or b == 0 for a, b in zip(self.u, self.v))

    def vector(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.u, self.v))


def make_signed(em: ExponentMatrix, u, v) -> SignedBinomial:
    u, v = tuple(u), tuple(v)
    if em.image_cells(u) != em.image_cells(v):
        raise InvalidParametersError("not a kernel binomial: images differ")
    if not all(a == 0 or b == 0 for a, b in zip(u, v)):
        raise InvalidParametersError("supports of u and v must be disjoint")
    return SignedBinomial(u, v, em.sign_char(u) * em.sign_char(v))


@dataclass
class ToricBasis:
    """Generators of the matching field ideal with a certification flag."""

    generators: list[SignedBinomial]
    certified: bool
    nvars: int
    notes: dict = dfield(default_factory=dict)

    @property
    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)


# ---------------------------------------------------------------------------
# monomial orders on exponent tuples


def canonical_key(em: ExponentMatrix):
    """Degree, then induced weight (lower = more leading), then lex."""
    wk = em.wkeys

    def key(u):
        return (sum(u), -sum(e * wk[i] for i, e in enumerate(u)), u)

    return key


def cheap_var_key(nvars: int, cheap: int):
    """Graded reverse-lex in which variable ``cheap`` is the cheapest."""
    order = [i for i in range(nvars) if i != cheap] + [cheap]
    rev = list(reversed(order))

    def key(u):
        return (sum(u), tuple(-u[i] for i in rev))

    return key


# ---------------------------------------------------------------------------
# binomial Buchberger engine (pure differences; signs recovered at the edge)


class _Engine:
    __slots__ = ("key", "nvars", "leads", "tails", "masks", "supports", "max_pairs", "max_degree", "pairs_done")

    def __init__(self, key, nvars, max_pairs=DEFAULT_MAX_PAIRS, max_degree=DEFAULT_MAX_DEGREE):
        self.key = key
        self.nvars = nvars
        self.leads: list[tuple[int, ...]] = []
        self.tails: list[tuple[int, ...]] = []
        self.masks: list[int] = []
        self.supports: list[tuple[int, ...]] = []
        self.max_pairs = max_pairs
        self.max_degree = max_degree
        self.pairs_done = 0

    @staticmethod
    def mask(u) -> int:
        m = 0
        for i, e in enumerate(u):
            if e:
                m |= 1 << i
        return m

    def nf_mono(self, u):
        """Normal form of a single monomial under the current basis."""
        um = self.mask(u)
        leads, tails, masks, supports = self.leads, self.tails, self.masks, self.supports
        i = 0
        nb = len(leads)
        while i < nb:
            if masks[i] & ~um == 0:
                lead = leads[i]
                ok = True
                for j in supports[i]:
                    if u[j] < lead[j]:
                        ok = False
                        break
                if ok:
                    tail = tails[i]
                    u = tuple(a - b + c for a, b, c in zip(u, lead, tail))
                    um = self.mask(u)
                    i = 0
                    continue
            i += 1
        return u

    def nf_binomial(self, a, b):
        """Reduce both monomials; return oriented (lead, tail) or None if zero."""
        a = self.nf_mono(a)
        b = self.nf_mono(b)
        if a == b:
            return None
        if self.key(a) < self.key(b):
            a, b = b, a
        return a, b

    def add(self, a, b) -> bool:
        g = self.nf_binomial(a, b)
        if g is None:
            return False
        lead, tail = g
        self.leads.append(lead)
        self.tails.append(tail)
        self.masks.append(self.mask(lead))
        self.supports.append(tuple(i for i, e in enumerate(lead) if e))
        return True

    def run(self, gens):
        """Buchberger loop; returns the (not yet interreduced) basis pairs."""
        for a, b in gens:
            if sum(a) > self.max_degree:
                raise ResourceLimitError(f"generator degree {sum(a)} exceeds cap")
            self.add(a, b)
        heap: list[tuple[int, int, int]] = []

        def push_pairs(j):
            lj = self.leads[j]
            mj = self.masks[j]
            for i in range(j):
                if mj & self.masks[i] == 0:
                    continue  # coprime leads: S-pair reduces to zero
                lcm_deg = sum(max(x, y) for x, y in zip(self.leads[i], lj))
                if lcm_deg > self.max_degree:
                    continue
                heapq.heappush(heap, (lcm_deg, i, j))

        for j in range(len(self.leads)):
            push_pairs(j)
        while heap:
            self.pairs_done += 1
            if self.pairs_done > self.max_pairs:
                raise ResourceLimitError("S-pair budget exceeded")
            _, i, j = heapq.heappop(heap)
            li, lj = self.leads[i], self.leads[j]
            # chain criterion: some k whose lead divides the lcm strictly
            w = tuple(max(x, y) for x, y in zip(li, lj))
            wm = self.mask(w)
            skip = False
            for k in range(len(self.leads)):
                if k == i or k == j or self.masks[k] & ~wm:
                    continue
                lk = self.leads[k]
                if all(lk[t] <= w[t] for t in self.supports[k]):
                    lik = tuple(max(x, y) for x, y in zip(li, lk))
                    ljk = tuple(max(x, y) for x, y in zip(lj, lk))
                    if lik != w and ljk != w:
                        skip = True
                        break
            if skip:
                continue
            a = tuple(x - y + z for x, y, z in zip(w, li, self.tails[i]))
            b = tuple(x - y + z for x, y, z in zip(w, lj, self.tails[j]))
            if self.add(a, b):
                push_pairs(len(self.leads) - 1)
        return list(zip(self.leads, self.tails))


def interreduce(gens, key):
    """Drop generators with redundant leads, reduce all tails, orient by key."""
    gens = [(a, b) if key(a) > key(b) else (b, a) for a, b in gens if a != b]
    gens.sort(key=lambda g: key(g[0]))
    kept: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for a, b in gens:
        divisible = False
        for la, _ in kept:
            if all(x <= y for x, y in zip(la, a)):
                divisible = True
                break
        if not divisible:
            kept.append((a, b))
    eng = _Engine(key, len(gens[0][0]) if gens else 0)
    for a, b in kept:
        eng.leads.append(a)
        eng.tails.append(b)
        eng.masks.append(eng.mask(a))
        eng.supports.append(tuple(i for i, e in enumerate(a) if e))
    out = []
    for idx, (a, b) in enumerate(kept):
        # reduce the tail by the other elements
        saved = (eng.leads.pop(idx), eng.tails.pop(idx), eng.masks.pop(idx), eng.supports.pop(idx))
        nb = eng.nf_mono(b)
        eng.leads.insert(idx, saved[0])
        eng.tails.insert(idx, saved[1])
        eng.masks.insert(idx, saved[2])
        eng.supports.insert(idx, saved[3])
        eng.tails[idx] = nb
        out.append((a, nb))
    return sorted(out, key=lambda g: (sum(g[0]), key(g[0])))


def is_groebner(gens, key, max_pairs=DEFAULT_MAX_PAIRS) -> bool:
    """Full Buchberger criterion: every S-pair reduces to zero.

    Only the unconditional coprime-lead skip is applied, so this is an
    independent check of a claimed basis, not a repeat of the build.
    """
    eng = _Engine(key, len(gens[0][0]) if gens else 0, max_pairs=max_pairs)
    for a, b in gens:
        eng.leads.append(a)
        eng.tails.append(b)
        eng.masks.append(eng.mask(a))
        eng.supports.append(tuple(i for i, e in enumerate(a) if e))
    nb = len(gens)
    count = 0
    for i in range(nb):
        for j in range(i + 1, nb):
            if eng.masks[i] & eng.masks[j] == 0:
                continue
            count += 1
            if count > max_pairs:
                raise ResourceLimitError("verification S-pair budget exceeded")
            li, lj = eng.leads[i], eng.leads[j]
            w = tuple(max(x, y) for x, y in zip(li, lj))
            a = tuple(x - y + z for x, y, z in zip(w, li, eng.tails[i]))
            b = tuple(x - y + z for x, y, z in zip(w, lj, eng.tails[j]))
            if eng.nf_mono(a) != eng.nf_mono(b):
                return False
    return True


def _primitive(a, b):
    """Remove the monomial gcd; sound inside a prime monomial-free target."""
    if all(x == 0 or y == 0 for x, y in zip(a, b)):
        return a, b
    return (
        tuple(x - min(x, y) for x, y in zip(a, b)),
        tuple(y - min(x, y) for x, y in zip(a, b)),
    )


def buchberger(gens, key, max_pairs=DEFAULT_MAX_PAIRS, max_degree=DEFAULT_MAX_DEGREE):
    eng = _Engine(key, len(gens[0][0]) if gens else 0, max_pairs, max_degree)
    raw = eng.run(gens)
    return interreduce(raw, key)


def saturate(
    binomials,
    em: ExponentMatrix,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> ToricBasis:
    """Saturate a kernel sub-ideal to the full matching field ideal.

    The input binomial vectors must span the kernel lattice over Q; this is
    verified and recorded (without it the output would generate a smaller
    ideal and must not be certified).
    """
    nvars = em.nvars
    gens: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    seen = set()
    for g in binomials:
        a, b = _primitive(tuple(g.u), tuple(g.v))
        if a == b:
            continue
        gkey = (a, b) if a > b else (b, a)
        if gkey not in seen:
            seen.add(gkey)
            gens.append(gkey)
    if not gens:
        return ToricBasis([], certified=False, nvars=nvars, notes={"empty": True})

    kernel_rank = nvars - integer_rank(em.as_rows())
    vec_rank = integer_rank([tuple(a - b for a, b in zip(u, v)) for u, v in gens])
    spanning = vec_rank == kernel_rank

    notes: dict = {"kernel_rank": kernel_rank, "input_rank": vec_rank}
    certified = spanning
    try:
        for i in range(nvars):
            key = cheap_var_key(nvars, i)
            basis = buchberger(gens, key, max_pairs, max_degree)
            gens = []
            seen = set()
            for a, b in basis:
                a, b = _primitive(a, b)
                if a == b:
                    continue
                gkey = (a, b) if key(a) > key(b) else (b, a)
                h = (max(gkey[0], gkey[1]), min(gkey[0], gkey[1]))
                if h not in seen:
                    seen.add(h)
                    gens.append(gkey)
        final_key = canonical_key(em)
        basis = buchberger(gens, final_key, max_pairs, max_degree)
        basis = [
            _primitive(a, b) for a, b in basis
        ]
        basis = interreduce(basis, final_key)
        if not is_groebner(basis, final_key, max_pairs):
            raise AssertionError("final basis failed the Buchberger criterion")
        generators = [make_signed(em, a, b) for a, b in basis]
    except ResourceLimitError as exc:
        notes["resource_limit"] = str(exc)
        generators = [make_signed(em, a, b) for a, b in gens]
        return ToricBasis(generators, certified=False, nvars=nvars, notes=notes)
    return ToricBasis(generators, certified=certified, nvars=nvars, notes=notes)


# ---------------------------------------------------------------------------
# degree-bounded kernel by fiber grouping


def _fibers(em: ExponentMatrix, degree: int, cap: int):
    """Group degree-``degree`` monomials by image; yields lists of exponent keys.

    Monomials are kept as sorted index tuples; only fibers with >= 2 members
    are returned.
    """
    total = comb(em.nvars + degree - 1, degree)
    if total > cap:
        raise ResourceLimitError(
            f"degree-{degree} enumeration of {total} monomials exceeds cap {cap}"
        )
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for mono in itertools.combinations_with_replacement(range(em.nvars), degree):
        cells: list[int] = []
        for i in mono:
            cells.extend(em.columns[i])
        cells.sort()
        groups.setdefault(tuple(cells), []).append(mono)
    return [g for g in groups.values() if len(g) > 1]


def _expvec(mono, nvars) -> tuple[int, ...]:
    v = [0] * nvars
    for i in mono:
        v[i] += 1
    return tuple(v)


def degree_bounded_kernel(
    em: ExponentMatrix,
    d: int,
    pairs: str = "all",
    cap: int = DEFAULT_KERNEL_ENUM_CAP,
) -> list[SignedBinomial]:
    """Kernel binomials of degree <= d, via fiber grouping.

    ``pairs="all"``: every support-disjoint same-fiber pair (binomials with a
    common factor are multiples of lower-degree ones and are omitted; their
    primitive parts already appear at their own degree).
    ``pairs="generators"``: a smaller generating set of the same subideal:
    full chains in degree 2, then per fiber one connector between each pair
    of components of the share-a-variable graph.
    """
    if d < 2:
        raise InvalidParametersError(f"degree bound must be >= 2, got {d}")
    if pairs not in ("all", "generators"):
        raise InvalidParametersError(f"unknown pairs mode {pairs!r}")
    out: list[SignedBinomial] = []
    for degree in range(2, d + 1):
        for fiber in _fibers(em, degree, cap):
            fiber.sort()
            if degree == 2 or pairs == "all":
                if pairs == "generators":
                    for m1, m2 in zip(fiber, fiber[1:]):
                        out.append(make_signed(em, _expvec(m1, em.nvars), _expvec(m2, em.nvars)))
                else:
                    for m1, m2 in itertools.combinations(fiber, 2):
                        if set(m1) & set(m2):
                            continue
                        out.append(make_signed(em, _expvec(m1, em.nvars), _expvec(m2, em.nvars)))
                continue
            # connectors between components of the share-a-variable graph
            parent = list(range(len(fiber)))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            by_var: dict[int, int] = {}
            for idx, mono in enumerate(fiber):
                for i in set(mono):
                    if i in by_var:
                        ra, rb = find(by_var[i]), find(idx)
                        if ra != rb:
                            parent[rb] = ra
                    else:
                        by_var[i] = idx
            reps: dict[int, int] = {}
            for idx in range(len(fiber)):
                root = find(idx)
                if root not in reps:
                    reps[root] = idx
            rep_list = sorted(reps.values())
            for m1, m2 in zip(rep_list, rep_list[1:]):
                out.append(
                    make_signed(em, _expvec(fiber[m1], em.nvars), _expvec(fiber[m2], em.nvars))
                )
    return out


# ---------------------------------------------------------------------------
# semigroup membership with exhaustive backtracking


def semigroup_member(em: ExponentMatrix, cells, m: int):
    """Factor a cell multiset into m initial-monomial columns, or None.

    Branches on the smallest uncovered cell; the backtracking explores every
    factorisation, so None is an exhaustive answer.  The first solution in
    canonical variable order is returned (deterministic).
    """
    cells = tuple(sorted(cells))
    if len(cells) != m * em.r:
        raise InvalidParametersError(
            f"cell count {len(cells)} does not match m*r = {m * em.r}"
        )
    remaining = Counter(cells)

    def available(col) -> bool:
        return all(remaining[c] >= 1 for c in col)

    chosen: list[int] = []

    def rec(m_left: int):
        if m_left == 0:
            return not +remaining
        pivot = min(c for c, k in remaining.items() if k > 0)
        for i in em.cell_to_vars.get(pivot, ()):  # canonical order
            col = em.columns[i]
            if available(col):
                for c in col:
                    remaining[c] -= 1
                chosen.append(i)
                if rec(m_left - 1):
                    return True
                chosen.pop()
                for c in col:
                    remaining[c] += 1
        return False

    if rec(m):
        return sorted(chosen)
    return None


def semigroup_member_pairscan(em: ExponentMatrix, cells):
    """Independent m=2 oracle: scan all unordered pairs of variables."""
    cells = tuple(sorted(cells))
    for i in range(em.nvars):
        ci = Counter(em.columns[i])
        rem = Counter(cells)
        rem.subtract(ci)
        if any(v < 0 for v in rem.values()):
            continue
        rest = tuple(sorted((+rem).elements()))
        for j in range(i, em.nvars):
            if em.columns[j] == rest:
                return [i, j]
    return None
