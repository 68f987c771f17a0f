"""Degree-bounded exact linear solving over the ring, in matrix unknowns.

A LinearSystem is a list of formal identities

    sum_k  L_k . X_{n(k)} . R_k  =  T        (L, R, T known matrices)

linear in the unknown matrices X. Comparing coefficients of every monomial
up to the induced bound reduces it to one field linear system, solved by the
exact elimination in linalg.

Degree control per unknown entry is either a uniform bound (all monomials of
weighted degree <= D) or an explicit set of exact degrees (graded mode, where
generator degree labels force them). With homogeneous data and sufficient
bounds, unsolvability within the bound proves unsolvability outright; the
caller records that by constructing the system with complete=True.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .errors import (
    DimensionMismatch,
    ModulusPresent,
    NoSolutionUpToDegree,
    RingMismatch,
)
from .fields import GFExtField
from .ring import Poly, PolyMatrix, Ring, _mono_mul


class Verdict:
    """A boolean answer carrying whether it is proven or merely bounded."""

    __slots__ = ("value", "proven")

    def __init__(self, value: bool, proven: bool):
        self.value = bool(value)
        self.proven = bool(proven)

    def __bool__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, Verdict):
            return (self.value, self.proven) == (other.value, other.proven)
        if isinstance(other, bool):
            return self.value == other
        return NotImplemented

    def __repr__(self):
        tag = "proven" if self.proven else "bounded"
        return f"Verdict({self.value}, {tag})"


@dataclass(frozen=True)
class Unknown:
    """A matrix unknown with its degree discipline.

    ``entry_degrees`` (when given) is a rows x cols grid whose cells are an
    int, an iterable of ints, or None (entry forced to zero); it overrides
    ``bound``.
    """

    name: str
    rows: int
    cols: int
    bound: int | None = None
    entry_degrees: tuple | None = None


@dataclass(frozen=True)
class Term:
    left: PolyMatrix | None
    unknown: str
    right: PolyMatrix | None


@dataclass(frozen=True)
class Equation:
    terms: tuple
    target: PolyMatrix


@dataclass
class LinearSystem:
    ring: Ring
    unknowns: list
    equations: list
    complete: bool = False  # bounds provably sufficient (graded mode)

    def unknown(self, name: str) -> Unknown:
        for u in self.unknowns:
            if u.name == name:
                return u
        raise KeyError(name)


@dataclass
class SolutionSpace:
    particular: dict | None
    basis: list
    dim: int


def _entry_support(ring: Ring, uk: Unknown, i: int, j: int):
    if uk.entry_degrees is not None:
        cell = uk.entry_degrees[i][j]
        if cell is None:
            return ()
        if isinstance(cell, int):
            degs = (cell,)
        else:
            degs = tuple(sorted(set(int(d) for d in cell)))
        out = []
        for d in degs:
            out.extend(ring.monomials_of_degree(d))
        return tuple(out)
    if uk.bound is None:
        raise ValueError(f"unknown {uk.name} has neither bound nor entry degrees")
    return ring.monomials_upto(uk.bound)


class _Assembled:
    """The flattened field linear system for one LinearSystem."""

    def __init__(self, sys: LinearSystem):
        ring = sys.ring
        self.sys = sys
        self.ring = ring
        field = ring.field

        self.columns = []  # (unknown_idx, i, j, monomial)
        self.col_index = {}
        self.uk_cols = {u.name: [] for u in sys.unknowns}
        self.supports = []
        for un, uk in enumerate(sys.unknowns):
            grid = {}
            for i in range(uk.rows):
                for j in range(uk.cols):
                    supp = _entry_support(ring, uk, i, j)
                    grid[(i, j)] = supp
                    for m in supp:
                        key = (un, i, j, m)
                        self.col_index[key] = len(self.columns)
                        self.uk_cols[uk.name].append(len(self.columns))
                        self.columns.append(key)
            self.supports.append(grid)

        rows = {}  # (eq, i, j, mono) -> {col: coeff}
        rhs = {}
        zero = field.zero()

        for en, eq in enumerate(sys.equations):
            self._check_shapes(eq)
            tgt = eq.target
            for i in range(tgt.rows):
                for j in range(tgt.cols):
                    t = tgt.entry(i, j)
                    for m, c in t.terms():
                        rhs[(en, i, j, m)] = c
            for term in eq.terms:
                un = next(
                    k for k, u in enumerate(sys.unknowns) if u.name == term.unknown
                )
                uk = sys.unknowns[un]
                L, R = term.left, term.right
                for i in range(tgt.rows):
                    for j in range(tgt.cols):
                        for r in range(uk.rows):
                            lv = None
                            if L is None:
                                if i != r:
                                    continue
                                lv = ring.one
                            else:
                                lv = L.entry(i, r)
                                if lv.is_zero:
                                    continue
                            for c in range(uk.cols):
                                if R is None:
                                    if c != j:
                                        continue
                                    base = lv
                                else:
                                    rv = R.entry(c, j)
                                    if rv.is_zero:
                                        continue
                                    base = lv * rv
                                if base.is_zero:
                                    continue
                                for m in self.supports[un][(r, c)]:
                                    col = self.col_index[(un, r, c, m)]
                                    shifted = ring.from_terms(
                                        {
                                            _mono_mul(bm, m): bc
                                            for bm, bc in base.terms()
                                        }
                                    )
                                    for pm, pc in shifted.terms():
                                        row = rows.setdefault((en, i, j, pm), {})
                                        prev = row.get(col, zero)
                                        nc = field.add(prev, pc)
                                        if nc:
                                            row[col] = nc
                                        else:
                                            row.pop(col, None)

        all_keys = set(rows) | set(rhs)
        self.row_keys = sorted(all_keys)
        ncols = len(self.columns)
        self.matrix = []
        self.rhs_vec = []
        for key in self.row_keys:
            row = rows.get(key, {})
            dense = [zero] * ncols
            for col, coeff in row.items():
                dense[col] = coeff
            self.matrix.append(dense)
            self.rhs_vec.append(rhs.get(key, zero))

    def _check_shapes(self, eq: Equation):
        sys = self.sys
        tgt = eq.target
        if tgt.ring != self.ring:
            raise RingMismatch("equation target over wrong ring")
        for term in eq.terms:
            uk = sys.unknown(term.unknown)
            lrows = term.left.rows if term.left is not None else uk.rows
            lcols = term.left.cols if term.left is not None else uk.rows
            rrows = term.right.rows if term.right is not None else uk.cols
            rcols = term.right.cols if term.right is not None else uk.cols
            if lcols != uk.rows or rrows != uk.cols:
                raise DimensionMismatch(f"term {term.unknown}: inner shape mismatch")
            if lrows != tgt.rows or rcols != tgt.cols:
                raise DimensionMismatch(f"term {term.unknown}: outer shape mismatch")
            for mat in (term.left, term.right):
                if mat is not None and mat.ring != self.ring:
                    raise RingMismatch("term matrix over wrong ring")

    # -- reconstruction ---------------------------------------------------

    def vector_to_assignment(self, vec) -> dict:
        ring = self.ring
        out = {}
        for un, uk in enumerate(self.sys.unknowns):
            grids = [[{} for _ in range(uk.cols)] for _ in range(uk.rows)]
            for idx, (u2, i, j, m) in enumerate(self.columns):
                if u2 != un:
                    continue
                c = vec[idx]
                if c:
                    grids[i][j][m] = c
            ents = [
                ring.from_terms(grids[i][j])
                for i in range(uk.rows)
                for j in range(uk.cols)
            ]
            out[uk.name] = PolyMatrix(ring, uk.rows, uk.cols, ents)
        return out


def _describe_bound(sys: LinearSystem) -> int:
    bounds = [u.bound for u in sys.unknowns if u.bound is not None]
    if bounds:
        return max(bounds)
    best = -1
    for u in sys.unknowns:
        if u.entry_degrees is None:
            continue
        for row in u.entry_degrees:
            for cell in row:
                if cell is None:
                    continue
                ds = (cell,) if isinstance(cell, int) else tuple(cell)
                for d in ds:
                    best = max(best, d)
    return best


def eval_equation(sys: LinearSystem, eq: Equation, assignment: dict) -> PolyMatrix:
    ring = sys.ring
    total = PolyMatrix.zeros(ring, eq.target.rows, eq.target.cols)
    for term in eq.terms:
        X = assignment[term.unknown]
        val = X
        if term.left is not None:
            val = term.left @ val
        if term.right is not None:
            val = val @ term.right
        total = total + val
    return total


def _verify(sys: LinearSystem, assignment: dict):
    for eq in sys.equations:
        got = eval_equation(sys, eq, assignment)
        if got != eq.target:
            raise AssertionError(
                "solver returned a non-solution; this is a bug: "
                f"{got} != {eq.target}"
            )


def solve_bounded(sys: LinearSystem) -> dict:
    """Exact solution within the bounds, re-verified before returning.

    Raises NoSolutionUpToDegree (proven iff the system is complete).
    """
    asm = _Assembled(sys)
    vec = linalg.solve(asm.matrix, asm.rhs_vec, sys.ring.field)
    if vec is None:
        raise NoSolutionUpToDegree(_describe_bound(sys), proven=sys.complete)
    assignment = asm.vector_to_assignment(vec)
    _verify(sys, assignment)
    return assignment


def try_solve(sys: LinearSystem) -> dict | None:
    try:
        return solve_bounded(sys)
    except NoSolutionUpToDegree:
        return None


def solution_space(sys: LinearSystem, verify: bool = True) -> SolutionSpace:
    """Field basis of all bounded-degree solutions of a homogeneous system."""
    for eq in sys.equations:
        if not eq.target.is_zero:
            raise ValueError("solution_space requires zero targets")
    asm = _Assembled(sys)
    basis_vecs = linalg.nullspace(asm.matrix, sys.ring.field)
    basis = [asm.vector_to_assignment(v) for v in basis_vecs]
    if verify:
        for assignment in basis:
            _verify(sys, assignment)
    zero_assign = asm.vector_to_assignment([sys.ring.field.zero()] * len(asm.columns))
    return SolutionSpace(particular=zero_assign, basis=basis, dim=len(basis))


def solution_dim(sys: LinearSystem) -> int:
    """Dimension of the bounded homogeneous solution space (no vectors)."""
    asm = _Assembled(sys)
    return linalg.nullity(asm.matrix, sys.ring.field, len(asm.columns))


def projected_solution_dim(sys: LinearSystem, primary) -> int:
    """dim of the projection of the solution space onto the named unknowns.

    Equals dim(solutions) - dim(solutions with the primary unknowns zero);
    the workhorse behind every quotient-space dimension in the package.
    """
    primary = set(primary)
    asm = _Assembled(sys)
    field = sys.ring.field
    total = linalg.nullity(asm.matrix, field, len(asm.columns))
    secondary_cols = [
        idx
        for idx, (un, _i, _j, _m) in enumerate(asm.columns)
        if sys.unknowns[un].name not in primary
    ]
    sub = [[row[c] for c in secondary_cols] for row in asm.matrix]
    fiber = linalg.nullity(sub, field, len(secondary_cols))
    return total - fiber


# ---------------------------------------------------------------------------
# Degree-bound helpers


def default_bound(ring: Ring, *mats, omega: Poly | None = None, extra: int = 2) -> int:
    """Heuristic bound: max known degree + deg(omega or modulus) + extra."""
    d = max((m.max_degree() for m in mats if m is not None), default=0)
    d = max(d, 0)
    w = 0
    if omega is not None:
        w = max(w, omega.degree())
    if ring.modulus is not None:
        w = max(w, ring.modulus.degree())
    return d + w + extra


def escalating(solve_at, start: int, cap: int = 32):
    """Retry a bounded solve with doubling bounds up to the cap."""
    bound = max(start, 1)
    while True:
        try:
            return solve_at(bound)
        except NoSolutionUpToDegree as exc:
            if exc.proven or bound >= cap:
                raise
            bound = min(bound * 2, cap)


def forced_degrees(row_labels, col_labels, shift: int):
    """Exact entry degrees of a shift-homogeneous map (None when negative)."""
    grid = []
    for ri in row_labels:
        row = []
        for cj in col_labels:
            d = shift + cj - ri
            row.append(d if d >= 0 else None)
        grid.append(tuple(row))
    return tuple(grid)


def degree_sets(row_labels, col_labels, shifts):
    """Per-entry degree sets for maps whose shift ranges over ``shifts``."""
    grid = []
    for ri in row_labels:
        row = []
        for cj in col_labels:
            ds = tuple(sorted({s + cj - ri for s in shifts if s + cj - ri >= 0}))
            row.append(ds if ds else None)
        grid.append(tuple(row))
    return tuple(grid)


def max_forced_degree(row_labels, col_labels, shift: int) -> int:
    if not row_labels or not col_labels:
        return 0
    return max(0, shift + max(col_labels) - min(row_labels))


# ---------------------------------------------------------------------------
# Injectivity and retractions


def poly_det(mat: PolyMatrix) -> Poly:
    """Exact determinant by cofactor expansion (desk-scale sizes)."""
    n = mat.rows
    if n != mat.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    ring = mat.ring
    if n == 0:
        return ring.one
    rows = mat.row_list()

    def rec(row_ids, col_ids):
        if len(row_ids) == 1:
            return rows[row_ids[0]][col_ids[0]]
        i = row_ids[0]
        acc = ring.zero
        sign = 1
        for k, j in enumerate(col_ids):
            a = rows[i][j]
            if not a.is_zero:
                minor = rec(row_ids[1:], col_ids[:k] + col_ids[k + 1 :])
                term = a * minor
                acc = acc + (term if sign > 0 else -term)
            sign = -sign
        return acc

    return rec(tuple(range(n)), tuple(range(n)))


def _random_point_rank(A: PolyMatrix, rng):
    """Evaluate at a random point and return (rank, pivot_rows)."""
    ring = A.ring
    field = ring.field
    if field.is_rational:
        point = [field.random(rng) * 3 + field.random(rng) for _ in ring.vars]
        vals = [
            [A.entry(i, j).evaluate(point) for j in range(A.cols)]
            for i in range(A.rows)
        ]
        r, prows, _ = linalg.rank_generic(
            vals, lambda a, b: a * b, lambda a, b: a - b, lambda a: a == 0
        )
        return r, prows
    maxdeg = max(A.max_degree(), 0)
    det_deg = max(1, A.cols * maxdeg)
    e = 1
    while field.p**e <= 2 * det_deg:
        e += 1
    ext = GFExtField(field.p, e)
    point = [ext.random(rng) for _ in ring.vars]

    def eval_entry(p: Poly):
        acc = ext.zero
        for m, c in p.terms():
            term = ext.embed(c)
            for v, exp in zip(point, m):
                for _ in range(exp):
                    term = term * v
            acc = acc + term
        return acc

    vals = [
        [eval_entry(A.entry(i, j)) for j in range(A.cols)] for i in range(A.rows)
    ]
    r, prows, _ = linalg.rank_generic(
        vals, lambda a, b: a * b, lambda a, b: a - b, lambda a: not a
    )
    return r, prows


def injectivity_test(A: PolyMatrix, rng=None) -> bool:
    """True iff A is injective as a map of free modules (free rings only).

    Random evaluations suggest a full-rank row subset; the certificate is an
    exact cols x cols minor with nonzero determinant polynomial. Falls back
    to exhaustive minor enumeration when sampling fails.
    """
    ring = A.ring
    if ring.modulus is not None:
        raise ModulusPresent("injectivity_test works over free rings")
    if A.cols == 0:
        return True
    if A.rows < A.cols:
        return False
    if rng is None:
        import random

        rng = random.Random(0)
    for _ in range(3):
        r, prows = _random_point_rank(A, rng)
        if r == A.cols:
            minor = A.submatrix(sorted(prows), range(A.cols))
            if not poly_det(minor).is_zero:
                return True
    for rows in itertools.combinations(range(A.rows), A.cols):
        if not poly_det(A.submatrix(rows, range(A.cols))).is_zero:
            return True
    return False


def find_retraction(
    A: PolyMatrix,
    bound: int | None = None,
    entry_degrees=None,
    complete: bool = False,
) -> PolyMatrix:
    """B with B.A = I within the bound; raises NoSolutionUpToDegree."""
    ring = A.ring
    if A.cols > A.rows:
        raise DimensionMismatch("a retraction needs cols <= rows")
    if bound is None and entry_degrees is None:
        bound = default_bound(ring, A)
    sys = LinearSystem(
        ring,
        [Unknown("B", A.cols, A.rows, bound=bound, entry_degrees=entry_degrees)],
        [
            Equation(
                (Term(None, "B", A),),
                PolyMatrix.identity(ring, A.cols),
            )
        ],
        complete=complete,
    )
    return solve_bounded(sys)["B"]
