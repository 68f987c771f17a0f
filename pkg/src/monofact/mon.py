"""The monomorphism category over free modules.

An object is an injective square matrix g1 whose cokernel is killed by
omega; validation constructs the certified companion g0 with

    g1 . g0 = omega . I    and    g0 . g1 = omega . I

by a bounded solve (a decision procedure in graded mode). The equivalence
with matrix factorizations is the pair of functors F (pair g1 with its
companion) and U (forget). Conflations are levelwise split-exact sequences
certified by explicit biproduct identities, which make compositions of
inflations, pushouts, pullbacks and both envelopes entirely mechanical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CokernelNotAnnihilated,
    CompanionAssertFailed,
    DimensionMismatch,
    ModulusPresent,
    NoSolutionUpToDegree,
    NotAnInflation,
    NotExact,
    NotInjective,
    ObjectMismatch,
    OmegaMismatch,
    OmegaZeroDivisor,
    RingMismatch,
    SourceMismatch,
    SquareFails,
    TermInvalid,
    ZeroInput,
)
from .mf import (
    MFMorphism,
    MFObject,
    Verdict,
    infer_labels,
    mf_null_homotopic,
    mf_reduce,
    mf_validate,
    mfmor_validate,
    _check_labels,
)
from .ring import PolyMatrix, Ring, block_diag, hstack, is_nonzerodivisor, vstack
from .solver import (
    Equation,
    LinearSystem,
    Term,
    Unknown,
    default_bound,
    escalating,
    forced_degrees,
    injectivity_test,
    solution_space,
    solve_bounded,
)


class MonObject:
    """A certified monomorphism object; carries its companion g0."""

    __slots__ = ("ring", "omega", "g1", "g0", "deg1", "deg0")

    def __init__(self, ring, omega, g1, g0, deg1=None, deg0=None):
        self.ring = ring
        self.omega = omega
        self.g1 = g1
        self.g0 = g0
        self.deg1 = tuple(deg1) if deg1 is not None else None
        self.deg0 = tuple(deg0) if deg0 is not None else None

    @property
    def rank(self) -> int:
        return self.g1.rows

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    @property
    def is_graded(self) -> bool:
        return self.deg1 is not None and self.deg0 is not None

    def __eq__(self, other):
        return (
            isinstance(other, MonObject)
            and self.ring == other.ring
            and self.omega == other.omega
            and self.g1 == other.g1
            and self.g0 == other.g0
        )

    def __hash__(self):
        return hash((self.ring, self.omega, self.g1, self.g0))

    def __repr__(self):
        return f"<Mon rank {self.rank}: g1={self.g1}>"


def zero_mon_object(ring, omega) -> MonObject:
    omega = ring.poly(omega)
    z = PolyMatrix.zeros(ring, 0, 0)
    return MonObject(ring, omega, z, z, (), ())


def _companion_identities_hold(M: MonObject) -> bool:
    n = M.rank
    target = PolyMatrix.scalar(M.ring, n, M.omega)
    return M.g1 @ M.g0 == target and M.g0 @ M.g1 == target


def mon_validate(
    ring: Ring,
    omega,
    g1,
    deg1=None,
    deg0=None,
    bound: int | None = None,
    cap: int = 32,
) -> MonObject:
    """Certify g1 as an object: injectivity plus the companion solve.

    Degree labels are inferred when possible, making the companion solve a
    decision procedure; CokernelNotAnnihilated then carries proven=True.
    """
    if ring.modulus is not None:
        raise ModulusPresent("free-module case only; quotients live in gorenstein")
    omega = ring.poly(omega)
    if omega.is_zero:
        raise OmegaZeroDivisor("omega must be nonzero")
    if not isinstance(g1, PolyMatrix):
        g1 = PolyMatrix.from_rows(ring, g1)
    if g1.rows != g1.cols:
        raise DimensionMismatch("g1 must be square (rank argument)")
    n = g1.rows
    if n == 0:
        return zero_mon_object(ring, omega)
    if not injectivity_test(g1):
        raise NotInjective(f"g1 = {g1} is not injective")

    if deg1 is None:
        guess = _infer_mon_labels(g1)
        if guess is not None:
            deg1, deg0 = guess
    if deg1 is not None:
        _check_labels(g1, deg0, deg1, 0, "g1")

    omega_eye = PolyMatrix.scalar(ring, n, omega)

    def attempt(d):
        if deg1 is not None:
            grid = forced_degrees(deg1, deg0, omega.degree())
            uk = Unknown("X", n, n, entry_degrees=grid)
            complete = True
        else:
            uk = Unknown("X", n, n, bound=d)
            complete = False
        sys = LinearSystem(
            ring,
            [uk],
            [Equation((Term(g1, "X", None),), omega_eye)],
            complete=complete,
        )
        return solve_bounded(sys)["X"]

    try:
        if deg1 is not None:
            X = attempt(0)
        else:
            start = bound if bound is not None else default_bound(ring, g1, omega=omega)
            X = escalating(attempt, start, cap)
    except NoSolutionUpToDegree as exc:
        raise CokernelNotAnnihilated(
            f"no g0 with g1.g0 = omega.I within degree {exc.bound}"
            + (" (proven)" if exc.proven else ""),
            proven=exc.proven,
        ) from exc

    if X @ g1 != omega_eye:
        raise CompanionAssertFailed("g1.X = omega.I held but X.g1 != omega.I")
    return MonObject(ring, omega, g1, X, deg1, deg0)


def _infer_mon_labels(g1: PolyMatrix):
    """Labels making g1 homogeneous of shift 0, or None."""
    n = g1.rows
    adj = {("1", k): [] for k in range(n)}
    adj.update({("0", k): [] for k in range(n)})
    for i in range(n):
        for j in range(n):
            e = g1.entry(i, j)
            if e.is_zero:
                continue
            if not e.is_homogeneous():
                return None
            adj[("1", j)].append((("0", i), e.degree()))
            adj[("0", i)].append((("1", j), -e.degree()))
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


def mon_from_companion(ring, omega, g1, g0, deg1=None, deg0=None) -> MonObject:
    """Object from an already-known companion; identities verified."""
    omega = ring.poly(omega)
    M = MonObject(ring, omega, g1, g0, deg1, deg0)
    if not _companion_identities_hold(M):
        raise CompanionAssertFailed("supplied companion fails the identities")
    if M.is_graded:
        _check_labels(M.g1, M.deg0, M.deg1, 0, "g1")
        _check_labels(M.g0, M.deg1, M.deg0, omega.degree(), "g0")
    return M


def companion_unique_dim(M: MonObject, bound: int = None) -> int:
    """dim of {X : g1.X = 0} within the bound; 0 certifies uniqueness."""
    ring = M.ring
    n = M.rank
    if n == 0:
        return 0
    if M.is_graded:
        grid = forced_degrees(M.deg1, M.deg0, M.omega.degree())
        uk = Unknown("X", n, n, entry_degrees=grid)
    else:
        if bound is None:
            bound = default_bound(ring, M.g1, omega=M.omega)
        uk = Unknown("X", n, n, bound=bound)
    sys = LinearSystem(
        ring,
        [uk],
        [Equation((Term(M.g1, "X", None),), PolyMatrix.zeros(ring, n, n))],
    )
    return solution_space(sys).dim


# ---------------------------------------------------------------------------
# Morphisms


class MonMorphism:
    __slots__ = ("source", "target", "phi1", "phi0")

    def __init__(self, source: MonObject, target: MonObject, phi1, phi0):
        self.source = source
        self.target = target
        self.phi1 = phi1
        self.phi0 = phi0

    def __eq__(self, other):
        return (
            isinstance(other, MonMorphism)
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

    def __repr__(self):
        return f"<Mon morphism phi1={self.phi1}, phi0={self.phi0}>"


def monmor_validate(phi: MonMorphism) -> None:
    """The defining square, plus the induced second square (automatic by
    the companion identities, but verified anyway)."""
    A, B = phi.source, phi.target
    if A.ring != B.ring:
        raise RingMismatch("morphism endpoints over different rings")
    if A.omega != B.omega:
        raise OmegaMismatch("morphism endpoints have different omega")
    if (phi.phi1.rows, phi.phi1.cols) != (B.rank, A.rank):
        raise DimensionMismatch("phi1 shape mismatch")
    if (phi.phi0.rows, phi.phi0.cols) != (B.rank, A.rank):
        raise DimensionMismatch("phi0 shape mismatch")
    if B.g1 @ phi.phi1 != phi.phi0 @ A.g1:
        raise SquareFails("g1'.phi1 != phi0.g1")
    if phi.phi1 @ A.g0 != B.g0 @ phi.phi0:
        raise SquareFails("induced second square fails; companion corrupt")


def make_monmor(source, target, phi1, phi0) -> MonMorphism:
    ring = source.ring
    if not isinstance(phi1, PolyMatrix):
        phi1 = PolyMatrix.from_rows(ring, phi1)
    if not isinstance(phi0, PolyMatrix):
        phi0 = PolyMatrix.from_rows(ring, phi0)
    phi = MonMorphism(source, target, phi1, phi0)
    monmor_validate(phi)
    return phi


def identity_monmor(M: MonObject) -> MonMorphism:
    eye = PolyMatrix.identity(M.ring, M.rank)
    return MonMorphism(M, M, eye, eye)


def zero_monmor(A: MonObject, B: MonObject) -> MonMorphism:
    z = PolyMatrix.zeros(A.ring, B.rank, A.rank)
    return MonMorphism(A, B, z, z)


def mon_compose(psi: MonMorphism, phi: MonMorphism) -> MonMorphism:
    if phi.target != psi.source:
        raise ObjectMismatch("composition endpoints do not match")
    out = MonMorphism(phi.source, psi.target, psi.phi1 @ phi.phi1, psi.phi0 @ phi.phi0)
    monmor_validate(out)
    return out


def mon_dsum(A: MonObject, B: MonObject) -> MonObject:
    if A.ring != B.ring:
        raise RingMismatch("direct sum over different rings")
    if A.omega != B.omega:
        raise OmegaMismatch("direct sum with different omega")
    deg1 = deg0 = None
    if A.is_graded and B.is_graded:
        deg1, deg0 = A.deg1 + B.deg1, A.deg0 + B.deg0
    return MonObject(
        A.ring,
        A.omega,
        block_diag(A.g1, B.g1),
        block_diag(A.g0, B.g0),
        deg1,
        deg0,
    )


# ---------------------------------------------------------------------------
# The equivalence with matrix factorizations


def functor_F(M: MonObject) -> MFObject:
    """Pair g1 with its certified companion."""
    X = MFObject(M.ring, M.omega, M.g1, M.g0, M.deg1, M.deg0)
    mf_validate(X)
    return X


def functor_U(X: MFObject) -> MonObject:
    """Forget: the companion is carried over, never re-solved."""
    return MonObject(X.ring, X.omega, X.rho1, X.rho0, X.deg1, X.deg0)


def functor_F_mor(phi: MonMorphism) -> MFMorphism:
    out = MFMorphism(
        functor_F(phi.source), functor_F(phi.target), phi.phi1, phi.phi0
    )
    mfmor_validate(out)  # the second square is automatic; checked anyway
    return out


def functor_U_mor(Phi: MFMorphism) -> MonMorphism:
    out = MonMorphism(
        functor_U(Phi.source), functor_U(Phi.target), Phi.phi1, Phi.phi0
    )
    monmor_validate(out)
    return out


def is_proj_inj(M: MonObject) -> Verdict:
    """Projective-injective objects are exactly the trivial-sum summands;
    detected by reduction of the paired factorization to rank zero."""
    red = mf_reduce(functor_F(M))
    if red.reduced.rank == 0:
        return Verdict(True, True)
    return Verdict(False, M.is_graded)


def stable_zero(phi: MonMorphism) -> Verdict:
    """Vanishing in the stable category, through the factorization side."""
    return mf_null_homotopic(functor_F_mor(phi))


# ---------------------------------------------------------------------------
# Conflations


@dataclass
class Conflation:
    """A certified kernel-cokernel pair.

    The certificates are levelwise biproduct data: r.iota = id,
    pi.s = id and iota.r + s.pi = id, which is equivalent to levelwise
    split exactness.
    """

    iota: MonMorphism
    pi: MonMorphism
    r1: PolyMatrix
    r0: PolyMatrix
    s1: PolyMatrix
    s0: PolyMatrix

    @property
    def source(self) -> MonObject:
        return self.iota.source

    @property
    def middle(self) -> MonObject:
        return self.iota.target

    @property
    def quotient(self) -> MonObject:
        return self.pi.target

    def verify(self) -> None:
        ring = self.iota.source.ring
        A, B, C = self.source, self.middle, self.quotient
        for lvl, phi, psi, r, s in (
            (1, self.iota.phi1, self.pi.phi1, self.r1, self.s1),
            (0, self.iota.phi0, self.pi.phi0, self.r0, self.s0),
        ):
            if psi @ phi != PolyMatrix.zeros(ring, C.rank, A.rank):
                raise NotExact(lvl, "composition is not zero")
            if r @ phi != PolyMatrix.identity(ring, A.rank):
                raise NotExact(lvl, "retraction fails")
            if psi @ s != PolyMatrix.identity(ring, C.rank):
                raise NotExact(lvl, "section fails")
            if phi @ r + s @ psi != PolyMatrix.identity(ring, B.rank):
                raise NotExact(lvl, "biproduct identity fails")


def _splitting_for_level(phi, psi, nA, nB, nC, ring, graded_labels, lvl):
    """Joint solve for (r, s) with r.phi = I, psi.s = I, phi.r + s.psi = I."""
    if graded_labels is not None:
        a_lab, b_lab, c_lab = graded_labels
        r_spec = Unknown("r", nA, nB, entry_degrees=forced_degrees(a_lab, b_lab, 0))
        s_spec = Unknown("s", nB, nC, entry_degrees=forced_degrees(b_lab, c_lab, 0))
        complete = True
    else:
        bound = default_bound(ring, phi, psi)
        r_spec = Unknown("r", nA, nB, bound=bound)
        s_spec = Unknown("s", nB, nC, bound=bound)
        complete = False
    eqs = [
        Equation((Term(None, "r", phi),), PolyMatrix.identity(ring, nA)),
        Equation((Term(psi, "s", None),), PolyMatrix.identity(ring, nC)),
        Equation(
            (Term(phi, "r", None), Term(None, "s", psi)),
            PolyMatrix.identity(ring, nB),
        ),
    ]
    sys = LinearSystem(ring, [r_spec, s_spec], eqs, complete=complete)
    try:
        sol = solve_bounded(sys)
    except NoSolutionUpToDegree as exc:
        raise NotExact(
            lvl,
            "no splitting within degree bound"
            + (" (proven nonexistent)" if exc.proven else ""),
        ) from exc
    return sol["r"], sol["s"]


def _shift0_homogeneous(phi: MonMorphism) -> bool:
    """Entries homogeneous of the shift-0 forced degree; needed before the
    graded splitting solve may claim completeness."""
    A, B = phi.source, phi.target
    for mat, src, tgt in ((phi.phi1, A.deg1, B.deg1), (phi.phi0, A.deg0, B.deg0)):
        for i in range(mat.rows):
            for j in range(mat.cols):
                e = mat.entry(i, j)
                if not e.is_zero and not e.is_homogeneous(src[j] - tgt[i]):
                    return False
    return True


def conflation_validate(iota: MonMorphism, pi: MonMorphism) -> Conflation:
    """Certify iota;pi as a conflation by finding levelwise splittings."""
    if iota.target != pi.source:
        raise ObjectMismatch("iota and pi are not composable")
    A, B, C = iota.source, iota.target, pi.target
    ring = A.ring
    monmor_validate(iota)
    monmor_validate(pi)
    if A.rank + C.rank != B.rank:
        raise NotExact("both", "ranks do not add up")
    for lvl, p, q in ((1, iota.phi1, pi.phi1), (0, iota.phi0, pi.phi0)):
        if q @ p != PolyMatrix.zeros(ring, C.rank, A.rank):
            raise NotExact(lvl, "composition is not zero")
    labels1 = labels0 = None
    if A.is_graded and B.is_graded and C.is_graded and _shift0_homogeneous(
        iota
    ) and _shift0_homogeneous(pi):
        labels1 = (A.deg1, B.deg1, C.deg1)
        labels0 = (A.deg0, B.deg0, C.deg0)
    r1, s1 = _splitting_for_level(
        iota.phi1, pi.phi1, A.rank, B.rank, C.rank, ring, labels1, 1
    )
    r0, s0 = _splitting_for_level(
        iota.phi0, pi.phi0, A.rank, B.rank, C.rank, ring, labels0, 0
    )
    conf = Conflation(iota, pi, r1, r0, s1, s0)
    conf.verify()
    return conf


def conflation_validate_raw(
    ring: Ring,
    omega,
    g_a,
    g_b,
    g_c,
    phi_pair,
    psi_pair,
) -> Conflation:
    """Validate a conflation from raw matrices.

    Terms are validated first (TermInvalid on failure, carrying the cause),
    so a middle object with omega-surviving cokernel is reported as such.
    """
    omega = ring.poly(omega)
    objs = []
    for name, g in (("A", g_a), ("B", g_b), ("C", g_c)):
        try:
            objs.append(mon_validate(ring, omega, g))
        except Exception as exc:  # noqa: BLE001 - rewrapped with context
            raise TermInvalid(name, exc) from exc
    A, B, C = objs
    iota = make_monmor(A, B, phi_pair[0], phi_pair[1])
    pi = make_monmor(B, C, psi_pair[0], psi_pair[1])
    return conflation_validate(iota, pi)


def identity_conflation(M: MonObject) -> Conflation:
    """id_M as an inflation: M -> M -> 0 (axiom E0)."""
    Z = zero_mon_object(M.ring, M.omega)
    iota = identity_monmor(M)
    pi = zero_monmor(M, Z)
    eye = PolyMatrix.identity(M.ring, M.rank)
    zc = PolyMatrix.zeros(M.ring, M.rank, 0)
    conf = Conflation(iota, pi, eye, eye, zc, zc)
    conf.verify()
    return conf


def identity_deflation(M: MonObject) -> Conflation:
    """id_M as a deflation: 0 -> M -> M (axiom E0^op)."""
    Z = zero_mon_object(M.ring, M.omega)
    iota = zero_monmor(Z, M)
    pi = identity_monmor(M)
    zr = PolyMatrix.zeros(M.ring, 0, M.rank)
    eye = PolyMatrix.identity(M.ring, M.rank)
    conf = Conflation(iota, pi, zr, zr, eye, eye)
    conf.verify()
    return conf


def split_extension(A: MonObject, C: MonObject, W: PolyMatrix, V: PolyMatrix) -> Conflation:
    """The extension of C by A twisted by X = gA.W + V.gC, with its
    canonical certified conflation A -> B -> C.

    Every such X makes the upper-triangular g a valid object, with an
    explicit companion; W, V are free (nA x nC) parameters.
    """
    ring = A.ring
    if A.omega != C.omega:
        raise OmegaMismatch("extension requires one omega")
    nA, nC = A.rank, C.rank
    X = A.g1 @ W + V @ C.g1
    gB = _block2(A.g1, X, PolyMatrix.zeros(ring, nC, nA), C.g1)
    hB = _block2(
        A.g0,
        -(W @ C.g0 + A.g0 @ V),
        PolyMatrix.zeros(ring, nC, nA),
        C.g0,
    )
    deg1 = deg0 = None
    if A.is_graded and C.is_graded:
        deg1, deg0 = A.deg1 + C.deg1, A.deg0 + C.deg0
    B = mon_from_companion(ring, A.omega, gB, hB, deg1, deg0)
    eyeA = PolyMatrix.identity(ring, nA)
    eyeC = PolyMatrix.identity(ring, nC)
    zCA = PolyMatrix.zeros(ring, nC, nA)
    zAC = PolyMatrix.zeros(ring, nA, nC)
    iota = make_monmor(A, B, vstack(eyeA, zCA), vstack(eyeA, zCA))
    pi = make_monmor(B, C, hstack(zCA, eyeC), hstack(zCA, eyeC))
    r = hstack(eyeA, zAC)
    s = vstack(zAC, eyeC)
    conf = Conflation(iota, pi, r, r, s, s)
    conf.verify()
    return conf


def _block2(a, b, c, d):
    return vstack(hstack(a, b), hstack(c, d))


def compose_inflations(first: Conflation, second: Conflation) -> Conflation:
    """Certified composition of inflations (admissible monics compose).

    first: A -> B with cokernel C1, second: B -> T with cokernel C2.
    Returns the certified conflation A -> T -> Z where Z is built on
    C1 (+) C2 with an explicit structure map and companion.
    """
    if first.middle != second.source:
        raise ObjectMismatch("inflations are not composable")
    A = first.source
    B = first.middle
    T = second.middle
    C1, C2 = first.quotient, second.quotient
    ring = A.ring

    iota = mon_compose(second.iota, first.iota)
    pi1 = vstack(first.pi.phi1 @ second.r1, second.pi.phi1)
    pi0 = vstack(first.pi.phi0 @ second.r0, second.pi.phi0)
    sigma1 = hstack(second.iota.phi1 @ first.s1, second.s1)
    sigma0 = hstack(second.iota.phi0 @ first.s0, second.s0)

    gZ = pi0 @ T.g1 @ sigma1
    hZ = pi1 @ T.g0 @ sigma0
    deg1 = deg0 = None
    if C1.is_graded and C2.is_graded:
        deg1, deg0 = C1.deg1 + C2.deg1, C1.deg0 + C2.deg0
    Z = mon_from_companion(ring, A.omega, gZ, hZ, deg1, deg0)
    pi = make_monmor(T, Z, pi1, pi0)
    conf = Conflation(
        iota,
        pi,
        first.r1 @ second.r1,
        first.r0 @ second.r0,
        sigma1,
        sigma0,
    )
    conf.verify()
    return conf


# ---------------------------------------------------------------------------
# Pushout along an inflation / pullback along a deflation


@dataclass
class PushoutResult:
    object: MonObject
    inflation: MonMorphism
    map: MonMorphism       # from the middle of the original conflation
    conflation: Conflation


def _exact_div_matrix(mat: PolyMatrix, omega) -> PolyMatrix:
    try:
        ents = [e.exact_div(omega) for e in mat.entries]
    except ZeroDivisionError as exc:
        raise CompanionAssertFailed(
            "pushout companion not divisible by omega; input was not certified"
        ) from exc
    return PolyMatrix(mat.ring, mat.rows, mat.cols, ents)


def pushout_inflation(conf: Conflation, theta: MonMorphism) -> PushoutResult:
    """Push the certified inflation of ``conf`` out along theta.

    Levelwise, the splitting of the inflation realizes the pushout as
    Z (+) C with an explicit twist; the cokernel object C is preserved on
    the nose and the returned inflation is certified.
    """
    try:
        conf.verify()
    except NotExact as exc:
        raise NotAnInflation(str(exc)) from exc
    if theta.source != conf.source:
        raise SourceMismatch("theta must start at the inflation's source")
    A, B, C = conf.source, conf.middle, conf.quotient
    Z = theta.target
    ring = A.ring

    twist = theta.phi0 @ (conf.r0 @ B.g1 - A.g1 @ conf.r1) @ conf.s1
    gE = _block2(Z.g1, twist, PolyMatrix.zeros(ring, C.rank, Z.rank), C.g1)
    hE = _block2(
        Z.g0,
        -_exact_div_matrix(Z.g0 @ twist @ C.g0, Z.omega),
        PolyMatrix.zeros(ring, C.rank, Z.rank),
        C.g0,
    )
    deg1 = deg0 = None
    if Z.is_graded and C.is_graded:
        deg1, deg0 = Z.deg1 + C.deg1, Z.deg0 + C.deg0
    E = mon_from_companion(ring, A.omega, gE, hE, deg1, deg0)

    eyeZ = PolyMatrix.identity(ring, Z.rank)
    eyeC = PolyMatrix.identity(ring, C.rank)
    zCZ = PolyMatrix.zeros(ring, C.rank, Z.rank)
    zZC = PolyMatrix.zeros(ring, Z.rank, C.rank)
    inflation = make_monmor(Z, E, vstack(eyeZ, zCZ), vstack(eyeZ, zCZ))
    bmap = make_monmor(
        B,
        E,
        vstack(theta.phi1 @ conf.r1, conf.pi.phi1),
        vstack(theta.phi0 @ conf.r0, conf.pi.phi0),
    )
    # pushout square commutes: bmap . iota = inflation . theta
    if mon_compose(bmap, conf.iota) != mon_compose(inflation, theta):
        raise CompanionAssertFailed("pushout square does not commute")
    pi = make_monmor(E, C, hstack(zCZ, eyeC), hstack(zCZ, eyeC))
    out_conf = Conflation(
        inflation, pi, hstack(eyeZ, zZC), hstack(eyeZ, zZC),
        vstack(zZC, eyeC), vstack(zZC, eyeC),
    )
    out_conf.verify()
    return PushoutResult(E, inflation, bmap, out_conf)


@dataclass
class PullbackResult:
    object: MonObject
    deflation: MonMorphism
    map: MonMorphism
    conflation: Conflation


def pullback_deflation(conf: Conflation, theta: MonMorphism) -> PullbackResult:
    """Pull the certified deflation of ``conf`` back along theta: Z -> C.

    Mirrors pushout_inflation (axiom E2^op by explicit dualization)."""
    try:
        conf.verify()
    except NotExact as exc:
        raise NotAnInflation(str(exc)) from exc
    if theta.target != conf.quotient:
        raise SourceMismatch("theta must land in the deflation's target")
    A, B, C = conf.source, conf.middle, conf.quotient
    Z = theta.source
    ring = A.ring

    twist = conf.r0 @ (B.g1 @ conf.s1 - conf.s0 @ C.g1) @ theta.phi1
    gP = _block2(A.g1, twist, PolyMatrix.zeros(ring, Z.rank, A.rank), Z.g1)
    hP = _block2(
        A.g0,
        -_exact_div_matrix(A.g0 @ twist @ Z.g0, A.omega),
        PolyMatrix.zeros(ring, Z.rank, A.rank),
        Z.g0,
    )
    deg1 = deg0 = None
    if A.is_graded and Z.is_graded:
        deg1, deg0 = A.deg1 + Z.deg1, A.deg0 + Z.deg0
    P = mon_from_companion(ring, A.omega, gP, hP, deg1, deg0)

    eyeA = PolyMatrix.identity(ring, A.rank)
    eyeZ = PolyMatrix.identity(ring, Z.rank)
    zZA = PolyMatrix.zeros(ring, Z.rank, A.rank)
    zAZ = PolyMatrix.zeros(ring, A.rank, Z.rank)
    deflation = make_monmor(P, Z, hstack(zZA, eyeZ), hstack(zZA, eyeZ))
    bmap = make_monmor(
        P,
        B,
        hstack(conf.iota.phi1, conf.s1 @ theta.phi1),
        hstack(conf.iota.phi0, conf.s0 @ theta.phi0),
    )
    if mon_compose(conf.pi, bmap) != mon_compose(theta, deflation):
        raise CompanionAssertFailed("pullback square does not commute")
    inflation = make_monmor(A, P, vstack(eyeA, zZA), vstack(eyeA, zZA))
    out_conf = Conflation(
        inflation, deflation, hstack(eyeA, zAZ), hstack(eyeA, zAZ),
        vstack(zAZ, eyeZ), vstack(zAZ, eyeZ),
    )
    out_conf.verify()
    return PullbackResult(P, deflation, bmap, out_conf)


# ---------------------------------------------------------------------------
# Envelopes


def projective_envelope(M: MonObject) -> Conflation:
    """The conflation K -> (P1 (+) P0, id (+) omega) -> M.

    Free case: the covers are identities; the epi is (phi1, phi0) =
    ([I  g0], [g1  I]) and the kernel is (P0, -g0) with explicit
    certificates, no solving.
    """
    ring = M.ring
    omega = M.omega
    n = M.rank
    dw = omega.degree()
    eye = PolyMatrix.identity(ring, n)
    omega_eye = PolyMatrix.scalar(ring, n, omega)
    z = PolyMatrix.zeros(ring, n, n)

    g_mid = block_diag(eye, omega_eye)
    h_mid = block_diag(omega_eye, eye)
    deg1 = deg0 = None
    if M.is_graded:
        deg0 = M.deg1 + M.deg0
        deg1 = M.deg1 + tuple(d + dw for d in M.deg0)
    mid = mon_from_companion(ring, omega, g_mid, h_mid, deg1, deg0)

    phi1 = hstack(eye, M.g0)
    phi0 = hstack(M.g1, eye)
    deflation = make_monmor(mid, M, phi1, phi0)

    k_deg1 = k_deg0 = None
    if M.is_graded:
        k_deg1 = tuple(d + dw for d in M.deg0)
        k_deg0 = M.deg1
    K = mon_from_companion(ring, omega, -M.g0, -M.g1, k_deg1, k_deg0)
    kappa1 = vstack(-M.g0, eye)
    kappa0 = vstack(eye, -M.g1)
    inflation = make_monmor(K, mid, kappa1, kappa0)

    r1 = hstack(z, eye)
    r0 = hstack(eye, z)
    s1 = vstack(eye, z)
    s0 = vstack(z, eye)
    conf = Conflation(inflation, deflation, r1, r0, s1, s0)
    conf.verify()
    return conf


def injective_envelope(M: MonObject, pad: int = 0, bound: int | None = None, cap: int = 32) -> Conflation:
    """The conflation M -> (Q1 (+) Q0, omega (+) id) -> cokernel.

    The embeddings are h_i = [I; 0] into free modules of rank n + pad; the
    comparison maps alpha, beta and the induced eps, eps', gamma, gamma'
    are found by bounded solves and assembled into the explicit psi and
    cokernel structure matrices (with companion), after which the whole
    sequence is re-certified.
    """
    ring = M.ring
    omega = M.omega
    n = M.rank
    c = pad
    dw = omega.degree()
    nq = n + c

    eye_q = PolyMatrix.identity(ring, nq)
    h = vstack(PolyMatrix.identity(ring, n), PolyMatrix.zeros(ring, c, n))
    f = hstack(PolyMatrix.zeros(ring, c, n), PolyMatrix.identity(ring, c))

    graded = M.is_graded
    if graded:
        q1_lab = M.deg1 + (0,) * c
        q0_lab = M.deg0 + (0,) * c
        gp_lab = (0,) * c

    def lsolve(name, rows, cols, eqs, row_lab=None, col_lab=None, shift=0):
        if graded:
            uk = Unknown(
                name, rows, cols, entry_degrees=forced_degrees(row_lab, col_lab, shift)
            )
            sys = LinearSystem(ring, [uk], eqs, complete=True)
            return solve_bounded(sys)[name]

        def attempt(d):
            uk = Unknown(name, rows, cols, bound=d)
            return solve_bounded(LinearSystem(ring, [uk], eqs))[name]

        start = bound if bound is not None else default_bound(ring, M.g1, omega=omega)
        return escalating(attempt, start, cap)

    alpha = lsolve(
        "alpha", nq, nq,
        [Equation((Term(None, "alpha", h),), h @ M.g1)],
        q0_lab if graded else None, q1_lab if graded else None, 0,
    )
    beta = lsolve(
        "beta", nq, nq,
        [Equation((Term(None, "beta", h),), h @ M.g0)],
        q1_lab if graded else None, q0_lab if graded else None, dw,
    )
    eps = lsolve(
        "eps", c, c,
        [Equation((Term(None, "eps", f),), f @ alpha)],
        gp_lab if graded else None, gp_lab if graded else None, 0,
    )
    eps2 = lsolve(
        "eps2", c, c,
        [Equation((Term(None, "eps2", f),), f @ beta)],
        gp_lab if graded else None, gp_lab if graded else None, dw,
    )
    omega_q = PolyMatrix.scalar(ring, nq, omega)
    gamma = lsolve(
        "gamma", nq, c,
        [Equation((Term(None, "gamma", f),), omega_q - beta @ alpha)],
        q1_lab if graded else None, gp_lab if graded else None, dw,
    )
    gamma2 = lsolve(
        "gamma2", nq, c,
        [Equation((Term(None, "gamma2", f),), omega_q - alpha @ beta)],
        q0_lab if graded else None, gp_lab if graded else None, dw,
    )

    g_mid = block_diag(PolyMatrix.scalar(ring, nq, omega), eye_q)
    h_mid = block_diag(eye_q, PolyMatrix.scalar(ring, nq, omega))
    deg1 = deg0 = None
    if graded:
        deg1 = q1_lab + q0_lab
        deg0 = tuple(d - dw for d in q1_lab) + q0_lab
    mid = mon_from_companion(ring, omega, g_mid, h_mid, deg1, deg0)

    phi1 = vstack(h, h @ M.g1)
    phi0 = vstack(h @ M.g0, h)
    inflation = make_monmor(M, mid, phi1, phi0)

    l1 = _block2(gamma, -beta, eps, f)
    l0 = _block2(f, eps2, -alpha, gamma2)
    ck_deg1 = ck_deg0 = None
    if graded:
        ck_deg1 = gp_lab + q0_lab
        ck_deg0 = tuple(d - dw for d in q1_lab) + gp_lab
    CK = mon_from_companion(ring, omega, l1, l0, ck_deg1, ck_deg0)

    psi1 = _block2(f, PolyMatrix.zeros(ring, c, nq), -alpha, eye_q)
    psi0 = _block2(eye_q, -beta, PolyMatrix.zeros(ring, c, nq), f)
    deflation = make_monmor(mid, CK, psi1, psi0)
    return conflation_validate(inflation, deflation)
