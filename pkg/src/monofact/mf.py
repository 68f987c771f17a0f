"""The category of matrix factorizations over free modules.

An object is a pair of square matrices (rho1, rho0) of equal size with

    rho0 . rho1 = omega . I    and    rho1 . rho0 = omega . I,

omega a non-zerodivisor. Morphisms are commuting pairs, direct sums are
blockwise, and the triangulated structure of the stable category is realized
through an explicit shift, mapping cones, homotopies, and reduction of
trivial direct summands.

Objects may carry generator degree labels (deg1 for the source module, deg0
for the target); labelled objects are "graded" and every search on them is a
decision procedure. Labels never enter object equality, which is on-the-nose
matrix equality by design.
"""

from __future__ import annotations

from .errors import (
    DimensionMismatch,
    GradingInconsistent,
    NotAFactorization,
    ObjectMismatch,
    OmegaMismatch,
    OmegaZeroDivisor,
    RingMismatch,
    SquareFails,
    UnsupportedOmega,
)
from .ring import (
    Poly,
    PolyMatrix,
    Ring,
    block_diag,
    hstack,
    is_nonzerodivisor,
    vstack,
)
from .solver import (
    Equation,
    LinearSystem,
    Term,
    Unknown,
    Verdict,
    default_bound,
    degree_sets,
    projected_solution_dim,
    solution_dim,
    try_solve,
)


def _check_labels(matrix: PolyMatrix, row_labels, col_labels, shift: int, what: str):
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            e = matrix.entry(i, j)
            if e.is_zero:
                continue
            want = shift + col_labels[j] - row_labels[i]
            if not e.is_homogeneous(want):
                raise GradingInconsistent(
                    f"{what}[{i}][{j}] = {e} is not homogeneous of degree {want}"
                )


def infer_labels(omega: Poly, rho1: PolyMatrix, rho0: PolyMatrix):
    """Degree labels (deg1, deg0) making the pair homogeneous, or None.

    Nonzero entries force deg(rho1[i][j]) = deg1[j] - deg0[i] and
    deg(rho0[i][j]) = deg(omega) + deg0[j] - deg1[i]; the difference
    constraints are propagated over the bipartite graph, components
    anchored at 0.
    """
    n = rho1.rows
    dw = omega.degree()
    adj = {("1", k): [] for k in range(n)}
    adj.update({("0", k): [] for k in range(n)})

    def edge(a, b, diff):  # value[a] - value[b] = diff
        adj[a].append((b, diff))
        adj[b].append((a, -diff))

    for i in range(n):
        for j in range(n):
            e = rho1.entry(i, j)
            if not e.is_zero:
                if not e.is_homogeneous():
                    return None
                edge(("1", j), ("0", i), e.degree())
            f = rho0.entry(i, j)
            if not f.is_zero:
                if not f.is_homogeneous():
                    return None
                edge(("0", j), ("1", i), f.degree() - dw)

    value = {}
    for start in adj:
        if start in value:
            continue
        value[start] = 0
        queue = [start]
        while queue:
            node = queue.pop()
            for nbr, diff in adj[node]:
                want = value[node] - diff
                if nbr in value:
                    if value[nbr] != want:
                        return None
                else:
                    value[nbr] = want
                    queue.append(nbr)
    deg1 = tuple(value[("1", k)] for k in range(n))
    deg0 = tuple(value[("0", k)] for k in range(n))
    return deg1, deg0


class MFObject:
    """A matrix factorization of omega; build through ``make_mf``."""

    __slots__ = ("ring", "omega", "rho1", "rho0", "deg1", "deg0")

    def __init__(self, ring, omega, rho1, rho0, deg1=None, deg0=None):
        self.ring = ring
        self.omega = omega
        self.rho1 = rho1
        self.rho0 = rho0
        self.deg1 = tuple(deg1) if deg1 is not None else None
        self.deg0 = tuple(deg0) if deg0 is not None else None

    @property
    def rank(self) -> int:
        return self.rho1.rows

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    @property
    def is_graded(self) -> bool:
        return self.deg1 is not None and self.deg0 is not None

    def __eq__(self, other):
        return (
            isinstance(other, MFObject)
            and self.ring == other.ring
            and self.omega == other.omega
            and self.rho1 == other.rho1
            and self.rho0 == other.rho0
        )

    def __hash__(self):
        return hash((self.ring, self.omega, self.rho1, self.rho0))

    def __repr__(self):
        return f"<MF rank {self.rank}: rho1={self.rho1}, rho0={self.rho0}>"


def _first_mismatch(a: PolyMatrix, b: PolyMatrix):
    for i in range(a.rows):
        for j in range(a.cols):
            if a.entry(i, j) != b.entry(i, j):
                return i, j
    return -1, -1


def mf_validate(X: MFObject) -> None:
    """Check both factorization identities exactly; raises on failure."""
    ring = X.ring
    if X.omega.ring != ring or X.rho1.ring != ring or X.rho0.ring != ring:
        raise RingMismatch("object parts live over different rings")
    n = X.rho1.rows
    if X.rho1.cols != n or X.rho0.rows != n or X.rho0.cols != n:
        raise DimensionMismatch("rho1 and rho0 must be square of equal size")
    if X.omega.is_zero:
        raise OmegaZeroDivisor("omega is zero")
    if not is_nonzerodivisor(X.omega, ring):
        raise OmegaZeroDivisor(f"omega = {X.omega} is a zerodivisor")
    target = PolyMatrix.scalar(ring, n, X.omega)
    got01 = X.rho0 @ X.rho1
    if got01 != target:
        i, j = _first_mismatch(got01, target)
        raise NotAFactorization(
            f"rho0.rho1 != omega.I at entry ({i},{j}): got {got01.entry(i, j)}"
        )
    got10 = X.rho1 @ X.rho0
    if got10 != target:
        i, j = _first_mismatch(got10, target)
        raise NotAFactorization(
            f"rho1.rho0 != omega.I at entry ({i},{j}): got {got10.entry(i, j)}"
        )
    if X.is_graded:
        if len(X.deg1) != n or len(X.deg0) != n:
            raise GradingInconsistent("label length must equal the rank")
        _check_labels(X.rho1, X.deg0, X.deg1, 0, "rho1")
        _check_labels(X.rho0, X.deg1, X.deg0, X.omega.degree(), "rho0")


def make_mf(ring, omega, rho1, rho0, deg1=None, deg0=None, infer=False) -> MFObject:
    """Validated MFObject; with infer=True labels are derived when possible."""
    omega = ring.poly(omega)
    if not isinstance(rho1, PolyMatrix):
        rho1 = PolyMatrix.from_rows(ring, rho1)
    if not isinstance(rho0, PolyMatrix):
        rho0 = PolyMatrix.from_rows(ring, rho0)
    if infer and deg1 is None:
        inferred = infer_labels(omega, rho1, rho0)
        if inferred is not None:
            deg1, deg0 = inferred
    X = MFObject(ring, omega, rho1, rho0, deg1, deg0)
    mf_validate(X)
    return X


def zero_object(ring, omega) -> MFObject:
    omega = ring.poly(omega)
    z = PolyMatrix.zeros(ring, 0, 0)
    return MFObject(ring, omega, z, z, (), ())


def trivial_block(ring, omega, kind: str) -> MFObject:
    """([1],[omega]) for kind='id', ([omega],[1]) for kind='omega'."""
    omega = ring.poly(omega)
    one = PolyMatrix.identity(ring, 1)
    om = PolyMatrix.scalar(ring, 1, omega)
    if kind == "id":
        return make_mf(ring, omega, one, om, deg1=(0,), deg0=(0,))
    if kind == "omega":
        return make_mf(ring, omega, om, one, deg1=(omega.degree(),), deg0=(0,))
    raise ValueError("kind must be 'id' or 'omega'")


# ---------------------------------------------------------------------------
# Morphisms


class MFMorphism:
    __slots__ = ("source", "target", "phi1", "phi0")

    def __init__(self, source: MFObject, target: MFObject, phi1, phi0):
        self.source = source
        self.target = target
        self.phi1 = phi1
        self.phi0 = phi0

    def __eq__(self, other):
        return (
            isinstance(other, MFMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.phi1 == other.phi1
            and self.phi0 == other.phi0
        )

    def __hash__(self):
        return hash((self.source, self.target, self.phi1, self.phi0))

    @property
    def is_zero(self) -> bool:
        return self.phi1.is_zero and self.phi0.is_zero

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise ObjectMismatch("sum of morphisms with different endpoints")
        return MFMorphism(
            self.source, self.target, self.phi1 + other.phi1, self.phi0 + other.phi0
        )

    def __neg__(self):
        return MFMorphism(self.source, self.target, -self.phi1, -self.phi0)

    def scale(self, value):
        return MFMorphism(
            self.source, self.target, self.phi1.scale(value), self.phi0.scale(value)
        )

    def __repr__(self):
        return f"<MF morphism phi1={self.phi1}, phi0={self.phi0}>"


def mfmor_validate(phi: MFMorphism) -> None:
    X, Y = phi.source, phi.target
    if X.ring != Y.ring:
        raise RingMismatch("morphism endpoints over different rings")
    if X.omega != Y.omega:
        raise OmegaMismatch("morphism endpoints have different omega")
    if (phi.phi1.rows, phi.phi1.cols) != (Y.rank, X.rank):
        raise DimensionMismatch("phi1 shape mismatch")
    if (phi.phi0.rows, phi.phi0.cols) != (Y.rank, X.rank):
        raise DimensionMismatch("phi0 shape mismatch")
    if Y.rho1 @ phi.phi1 != phi.phi0 @ X.rho1:
        raise SquareFails("q1.phi1 != phi0.rho1")
    if phi.phi1 @ X.rho0 != Y.rho0 @ phi.phi0:
        raise SquareFails("phi1.rho0 != q0.phi0")


def make_mfmor(source, target, phi1, phi0) -> MFMorphism:
    ring = source.ring
    if not isinstance(phi1, PolyMatrix):
        phi1 = PolyMatrix.from_rows(ring, phi1)
    if not isinstance(phi0, PolyMatrix):
        phi0 = PolyMatrix.from_rows(ring, phi0)
    phi = MFMorphism(source, target, phi1, phi0)
    mfmor_validate(phi)
    return phi


def identity_morphism(X: MFObject) -> MFMorphism:
    eye = PolyMatrix.identity(X.ring, X.rank)
    return MFMorphism(X, X, eye, eye)


def zero_morphism(X: MFObject, Y: MFObject) -> MFMorphism:
    z = PolyMatrix.zeros(X.ring, Y.rank, X.rank)
    return MFMorphism(X, Y, z, z)


def mf_compose(psi: MFMorphism, phi: MFMorphism) -> MFMorphism:
    """psi after phi, validated."""
    if phi.target != psi.source:
        raise ObjectMismatch("composition endpoints do not match")
    out = MFMorphism(phi.source, psi.target, psi.phi1 @ phi.phi1, psi.phi0 @ phi.phi0)
    mfmor_validate(out)
    return out


# ---------------------------------------------------------------------------
# Additive and triangulated structure


def mf_dsum(X: MFObject, Y: MFObject) -> MFObject:
    if X.ring != Y.ring:
        raise RingMismatch("direct sum over different rings")
    if X.omega != Y.omega:
        raise OmegaMismatch("direct sum with different omega")
    deg1 = deg0 = None
    if X.is_graded and Y.is_graded:
        deg1 = X.deg1 + Y.deg1
        deg0 = X.deg0 + Y.deg0
    return MFObject(
        X.ring,
        X.omega,
        block_diag(X.rho1, Y.rho1),
        block_diag(X.rho0, Y.rho0),
        deg1,
        deg0,
    )


def mf_shift(X: MFObject) -> MFObject:
    """Sigma(rho1, rho0) = (-rho0, -rho1); Sigma^2 = id on the nose."""
    deg1 = deg0 = None
    if X.is_graded:
        dw = X.omega.degree()
        deg1 = X.deg0
        deg0 = tuple(d - dw for d in X.deg1)
    return MFObject(X.ring, X.omega, -X.rho0, -X.rho1, deg1, deg0)


def _block2(a, b, c, d) -> PolyMatrix:
    return vstack(hstack(a, b), hstack(c, d))


def mf_cone(phi: MFMorphism) -> MFObject:
    """Mapping cone on Y (+) Sigma X; validates by the morphism squares."""
    X, Y = phi.source, phi.target
    ring = X.ring
    sx = mf_shift(X)
    z = PolyMatrix.zeros(ring, X.rank, Y.rank)
    c1 = _block2(Y.rho1, phi.phi0, z, sx.rho1)
    c0 = _block2(Y.rho0, phi.phi1, z, sx.rho0)
    deg1 = deg0 = None
    if Y.is_graded and sx.is_graded:
        deg1 = Y.deg1 + sx.deg1
        deg0 = Y.deg0 + sx.deg0
    cone = MFObject(ring, X.omega, c1, c0, deg1, deg0)
    mf_validate(cone)
    return cone


def cone_inclusion(phi: MFMorphism, cone: MFObject) -> MFMorphism:
    """Canonical Y -> cone(phi)."""
    X, Y = phi.source, phi.target
    ring = Y.ring
    eye = PolyMatrix.identity(ring, Y.rank)
    z = PolyMatrix.zeros(ring, X.rank, Y.rank)
    return MFMorphism(Y, cone, vstack(eye, z), vstack(eye, z))


def cone_projection(phi: MFMorphism, cone: MFObject) -> MFMorphism:
    """Canonical cone(phi) -> Sigma X."""
    X, Y = phi.source, phi.target
    ring = X.ring
    eye = PolyMatrix.identity(ring, X.rank)
    z = PolyMatrix.zeros(ring, X.rank, Y.rank)
    return MFMorphism(cone, mf_shift(X), hstack(z, eye), hstack(z, eye))


# ---------------------------------------------------------------------------
# Homotopy


def _morphism_shifts(phi: MFMorphism):
    """Internal-degree shifts present in a morphism between graded objects."""
    X, Y = phi.source, phi.target
    shifts = set()
    for mat, src, tgt in (
        (phi.phi1, X.deg1, Y.deg1),
        (phi.phi0, X.deg0, Y.deg0),
    ):
        for i in range(mat.rows):
            for j in range(mat.cols):
                for d in mat.entry(i, j).homogeneous_components():
                    shifts.add(d - (src[j] - tgt[i]))
    return shifts


def _homotopy_system(phi: MFMorphism, shifts=None, bound=None) -> LinearSystem:
    X, Y = phi.source, phi.target
    ring = X.ring
    dw = X.omega.degree()
    if shifts is not None:
        s0_spec = Unknown(
            "s0", Y.rank, X.rank, entry_degrees=degree_sets(Y.deg1, X.deg0, shifts)
        )
        s1_spec = Unknown(
            "s1",
            Y.rank,
            X.rank,
            entry_degrees=degree_sets(Y.deg0, X.deg1, [s - dw for s in shifts]),
        )
        complete = True
    else:
        s0_spec = Unknown("s0", Y.rank, X.rank, bound=bound)
        s1_spec = Unknown("s1", Y.rank, X.rank, bound=bound)
        complete = False
    eq0 = Equation((Term(Y.rho1, "s0", None), Term(None, "s1", X.rho0)), phi.phi0)
    eq1 = Equation((Term(Y.rho0, "s1", None), Term(None, "s0", X.rho1)), phi.phi1)
    return LinearSystem(ring, [s0_spec, s1_spec], [eq0, eq1], complete=complete)


def mf_null_homotopic(phi: MFMorphism, bound: int | None = None) -> Verdict:
    """True iff phi0 = q1.s0 + s1.rho0 and phi1 = q0.s1 + s0.rho1 for some s.

    Graded endpoints give a proven verdict either way; without labels a
    found homotopy is still a proof, a miss is only bounded.
    """
    if phi.is_zero:
        return Verdict(True, True)
    X, Y = phi.source, phi.target
    if X.is_graded and Y.is_graded:
        found = try_solve(_homotopy_system(phi, shifts=_morphism_shifts(phi)))
        return Verdict(found is not None, True)
    if bound is None:
        bound = default_bound(
            X.ring, X.rho1, X.rho0, Y.rho1, Y.rho0, phi.phi1, phi.phi0, omega=X.omega
        )
    found = try_solve(_homotopy_system(phi, bound=bound))
    return Verdict(found is not None, found is not None)


def mf_is_contractible(X: MFObject, bound: int | None = None) -> Verdict:
    """True iff the identity morphism is null-homotopic."""
    if X.is_zero:
        return Verdict(True, True)
    return mf_null_homotopic(identity_morphism(X), bound=bound)


# ---------------------------------------------------------------------------
# Reduction of trivial summands


class Reduction:
    """Result of mf_reduce.

    c0 . rho1 . c1inv is block-diagonal: ``split`` unit 1x1 blocks first,
    then the reduced rho1; c1/c0 are the source/target base changes with
    their exact inverses.
    """

    __slots__ = ("reduced", "c1", "c0", "c1inv", "c0inv", "split")

    def __init__(self, reduced, c1, c0, c1inv, c0inv, split):
        self.reduced = reduced
        self.c1 = c1
        self.c0 = c0
        self.c1inv = c1inv
        self.c0inv = c0inv
        self.split = split


def _elementary(ring, n, i, j, m):
    """(E, Einv) with E = I + m.E_ij, i != j."""
    rows = [[ring.one if a == b else ring.zero for b in range(n)] for a in range(n)]
    inv_rows = [row[:] for row in rows]
    rows[i][j] = m
    inv_rows[i][j] = -m
    return PolyMatrix.from_rows(ring, rows), PolyMatrix.from_rows(ring, inv_rows)


def _swap(ring, n, i, j) -> PolyMatrix:
    rows = [[ring.one if a == b else ring.zero for b in range(n)] for a in range(n)]
    rows[i][i] = rows[j][j] = ring.zero
    rows[i][j] = rows[j][i] = ring.one
    return PolyMatrix.from_rows(ring, rows)


def _find_unit(mat: PolyMatrix, start: int):
    for i in range(start, mat.rows):
        for j in range(start, mat.cols):
            e = mat.entry(i, j)
            if not e.is_zero and e.is_constant:
                return i, j
    return None


def mf_reduce(X: MFObject) -> Reduction:
    """Split off every trivial ([1],[omega]) / ([omega],[1]) summand.

    A unit entry is a nonzero constant. Elimination at it clears its row and
    column, the 1x1 block is permuted to the front, and the scan repeats on
    the remaining corner. Complete in graded/local mode, where any unit of
    the local ring showing up in a homogeneous entry is a literal constant.
    """
    ring = X.ring
    n = X.rank
    w1, w0 = X.rho1, X.rho0
    c1 = c1inv = c0 = c0inv = PolyMatrix.identity(ring, n)
    deg1 = list(X.deg1) if X.is_graded else None
    deg0 = list(X.deg0) if X.is_graded else None
    k = 0

    def op_p0(E, Einv):
        # base change on the target module P0
        nonlocal w1, w0, c0, c0inv
        w1 = E @ w1
        w0 = w0 @ Einv
        c0 = E @ c0
        c0inv = c0inv @ Einv

    def op_p1(F, Finv):
        # base change on the source module P1
        nonlocal w1, w0, c1, c1inv
        w1 = w1 @ Finv
        w0 = F @ w0
        c1 = F @ c1
        c1inv = c1inv @ Finv

    while k < n:
        hit1 = _find_unit(w1, k)
        hit0 = None if hit1 is not None else _find_unit(w0, k)
        if hit1 is None and hit0 is None:
            break
        if hit1 is not None:
            i, j = hit1  # i indexes P0, j indexes P1
            u = w1.entry(i, j)
            uinv = ring.constant(ring.field.inv(u.constant_value()))
            for i2 in range(n):
                if i2 != i and not w1.entry(i2, j).is_zero:
                    m = -(w1.entry(i2, j) * uinv)
                    op_p0(*_elementary(ring, n, i2, i, m))
            for j2 in range(n):
                if j2 != j and not w1.entry(i, j2).is_zero:
                    m = w1.entry(i, j2) * uinv
                    op_p1(*_elementary(ring, n, j, j2, m))
            if i != k:
                P = _swap(ring, n, i, k)
                op_p0(P, P)
                if deg0 is not None:
                    deg0[i], deg0[k] = deg0[k], deg0[i]
            if j != k:
                P = _swap(ring, n, j, k)
                op_p1(P, P)
                if deg1 is not None:
                    deg1[j], deg1[k] = deg1[k], deg1[j]
        else:
            i, j = hit0  # i indexes P1, j indexes P0
            u = w0.entry(i, j)
            uinv = ring.constant(ring.field.inv(u.constant_value()))
            for i2 in range(n):
                if i2 != i and not w0.entry(i2, j).is_zero:
                    m = -(w0.entry(i2, j) * uinv)
                    op_p1(*_elementary(ring, n, i2, i, m))
            for j2 in range(n):
                if j2 != j and not w0.entry(i, j2).is_zero:
                    m = w0.entry(i, j2) * uinv
                    op_p0(*_elementary(ring, n, j, j2, m))
            if i != k:
                P = _swap(ring, n, i, k)
                op_p1(P, P)
                if deg1 is not None:
                    deg1[i], deg1[k] = deg1[k], deg1[i]
            if j != k:
                P = _swap(ring, n, j, k)
                op_p0(P, P)
                if deg0 is not None:
                    deg0[j], deg0[k] = deg0[k], deg0[j]
        k += 1

    keep = range(k, n)
    reduced = MFObject(
        ring,
        X.omega,
        w1.submatrix(keep, keep),
        w0.submatrix(keep, keep),
        tuple(deg1[k:]) if deg1 is not None else None,
        tuple(deg0[k:]) if deg0 is not None else None,
    )
    mf_validate(reduced)
    return Reduction(reduced, c1, c0, c1inv, c0inv, k)


# ---------------------------------------------------------------------------
# Stable hom dimensions


def _phi_unknowns(X, Y, D):
    """phi unknown specs plus the shift list (None in bounded mode)."""
    if X.is_graded and Y.is_graded and X.rank > 0 and Y.rank > 0:
        lo = min(min(Y.deg1) - max(X.deg1), min(Y.deg0) - max(X.deg0))
        shifts = list(range(lo, D + 1))
        u1 = Unknown(
            "phi1", Y.rank, X.rank, entry_degrees=degree_sets(Y.deg1, X.deg1, shifts)
        )
        u0 = Unknown(
            "phi0", Y.rank, X.rank, entry_degrees=degree_sets(Y.deg0, X.deg0, shifts)
        )
        return [u1, u0], shifts
    u1 = Unknown("phi1", Y.rank, X.rank, bound=D)
    u0 = Unknown("phi0", Y.rank, X.rank, bound=D)
    return [u1, u0], None


def _stable_systems(X: MFObject, Y: MFObject, D: int):
    """(morphism system, boundary system) behind mf_stable_hom_dim."""
    ring = X.ring
    dw = X.omega.degree()
    phi_unknowns, shifts = _phi_unknowns(X, Y, D)
    z = PolyMatrix.zeros(ring, Y.rank, X.rank)
    neg_eye = -PolyMatrix.identity(ring, Y.rank)
    square1 = Equation((Term(Y.rho1, "phi1", None), Term(neg_eye, "phi0", X.rho1)), z)
    square0 = Equation((Term(None, "phi1", X.rho0), Term(-Y.rho0, "phi0", None)), z)
    morph_sys = LinearSystem(
        ring, list(phi_unknowns), [square1, square0], complete=shifts is not None
    )

    if shifts is not None:
        s0_spec = Unknown(
            "s0", Y.rank, X.rank, entry_degrees=degree_sets(Y.deg1, X.deg0, shifts)
        )
        s1_spec = Unknown(
            "s1",
            Y.rank,
            X.rank,
            entry_degrees=degree_sets(Y.deg0, X.deg1, [s - dw for s in shifts]),
        )
    else:
        slack = D + default_bound(ring, X.rho1, X.rho0, Y.rho1, Y.rho0, omega=X.omega)
        s0_spec = Unknown("s0", Y.rank, X.rank, bound=slack)
        s1_spec = Unknown("s1", Y.rank, X.rank, bound=slack)
    # phi is a boundary: phi0 = q1.s0 + s1.rho0 and phi1 = q0.s1 + s0.rho1
    b0 = Equation(
        (
            Term(None, "phi0", None),
            Term(-Y.rho1, "s0", None),
            Term(neg_eye, "s1", X.rho0),
        ),
        z,
    )
    b1 = Equation(
        (
            Term(None, "phi1", None),
            Term(-Y.rho0, "s1", None),
            Term(neg_eye, "s0", X.rho1),
        ),
        z,
    )
    boundary_sys = LinearSystem(
        ring,
        list(phi_unknowns) + [s0_spec, s1_spec],
        [b0, b1],
        complete=shifts is not None,
    )
    return morph_sys, boundary_sys


def mf_hom_space_dim(X: MFObject, Y: MFObject, D: int) -> int:
    """dim of the bounded morphism space X -> Y, before the quotient."""
    if X.rank == 0 or Y.rank == 0:
        return 0
    morph_sys, _ = _stable_systems(X, Y, D)
    return solution_dim(morph_sys)


def mf_hom_basis(X: MFObject, Y: MFObject, D: int) -> list:
    """Field basis of the bounded morphism space X -> Y."""
    from .solver import solution_space

    if X.rank == 0 or Y.rank == 0:
        return []
    morph_sys, _ = _stable_systems(X, Y, D)
    space = solution_space(morph_sys, verify=False)
    out = []
    for assign in space.basis:
        phi = MFMorphism(X, Y, assign["phi1"], assign["phi0"])
        mfmor_validate(phi)
        out.append(phi)
    return out


def mf_stable_hom_dim(X: MFObject, Y: MFObject, D: int) -> int:
    """Bounded morphisms modulo null-homotopic ones, as a field dimension.

    Graded mode: D bounds the internal-degree shift of the morphism and the
    value is exact (per-shift class dimensions summed). Bounded mode: D
    bounds raw entry degrees and the value is relative to the bound.
    """
    if X.rank == 0 or Y.rank == 0:
        return 0
    morph_sys, boundary_sys = _stable_systems(X, Y, D)
    m_dim = solution_dim(morph_sys)
    n_dim = projected_solution_dim(boundary_sys, {"phi1", "phi0"})
    return m_dim - n_dim


# ---------------------------------------------------------------------------
# Generation


def _monomial_splits(ring: Ring, omega: Poly):
    """Monomial factor pairs (a, b) with a.b = omega, for monomial omega."""
    terms = dict(omega.terms())
    if len(terms) != 1:
        return []
    ((mono, _coeff),) = terms.items()
    out = []
    exps = list(mono)

    def rec(idx, left):
        if idx == len(exps):
            a = ring.from_terms({tuple(left): ring.field.one()})
            b = omega.exact_div(a)
            out.append((a, b))
            return
        for e in range(exps[idx] + 1):
            rec(idx + 1, left + [e])

    rec(0, [])
    return out


def mf_generate(
    ring: Ring,
    omega,
    size: int,
    ops: int,
    rng=None,
    seed: int = 0,
    max_degree: int | None = None,
) -> MFObject:
    """Random valid object: trivial and classical blocks scrambled by
    invertible transformation pairs that preserve both factorization
    identities and homogeneity (so the output stays graded).

    A non-monomial omega has no classical blocks and falls back to trivial
    blocks only.
    """
    import random as _random

    if rng is None:
        rng = _random.Random(seed)
    omega = ring.poly(omega)
    if omega.is_zero or omega.degree() <= 0:
        raise UnsupportedOmega("omega must be a nonzero non-unit")
    blocks = [trivial_block(ring, omega, "id"), trivial_block(ring, omega, "omega")]
    for a, b in _monomial_splits(ring, omega):
        blocks.append(
            make_mf(
                ring,
                omega,
                PolyMatrix.from_rows(ring, [[a]]),
                PolyMatrix.from_rows(ring, [[b]]),
                deg1=(a.degree(),),
                deg0=(0,),
            )
        )
    X = zero_object(ring, omega)
    for _ in range(size):
        X = mf_dsum(X, blocks[rng.randrange(len(blocks))])
    n = X.rank
    if n == 0 or ops == 0:
        return X

    rho1, rho0 = X.rho1, X.rho0
    deg1, deg0 = list(X.deg1), list(X.deg0)
    applied = 0
    attempts = 0
    while applied < ops and attempts < ops * 25:
        attempts += 1
        kind = rng.choice(("p0", "p1", "swap0", "swap1", "scale"))
        swap_labels = None
        if kind == "scale":
            i = rng.randrange(n)
            c = ring.field.random(rng)
            if not c:
                continue
            rows = PolyMatrix.identity(ring, n).row_list()
            rows[i][i] = ring.constant(c)
            E = PolyMatrix.from_rows(ring, rows)
            rows[i][i] = ring.constant(ring.field.inv(c))
            Einv = PolyMatrix.from_rows(ring, rows)
            cand1, cand0 = E @ rho1, rho0 @ Einv
        elif kind in ("swap0", "swap1"):
            i, j = rng.randrange(n), rng.randrange(n)
            if i == j:
                continue
            P = _swap(ring, n, i, j)
            if kind == "swap0":
                cand1, cand0 = P @ rho1, rho0 @ P
                swap_labels = (deg0, i, j)
            else:
                cand1, cand0 = rho1 @ P, P @ rho0
                swap_labels = (deg1, i, j)
        else:
            i, j = rng.randrange(n), rng.randrange(n)
            if i == j:
                continue
            labels = deg0 if kind == "p0" else deg1
            d = labels[j] - labels[i]
            if d < 0 or not ring.monomials_of_degree(d):
                continue
            m = ring.random_poly(rng, d, homogeneous=True, terms=2, nonzero=True)
            E, Einv = _elementary(ring, n, i, j, m)
            if kind == "p0":
                cand1, cand0 = E @ rho1, rho0 @ Einv
            else:
                cand1, cand0 = rho1 @ Einv, E @ rho0
        if max_degree is not None and (
            cand1.max_degree() > max_degree or cand0.max_degree() > max_degree
        ):
            continue
        if swap_labels is not None:
            labels, i, j = swap_labels
            labels[i], labels[j] = labels[j], labels[i]
        rho1, rho0 = cand1, cand0
        applied += 1

    out = MFObject(ring, omega, rho1, rho0, tuple(deg1), tuple(deg0))
    mf_validate(out)
    return out
