"""Gorenstein projective modules over a hypersurface S = S0/(f), encoded as
cokernels of matrix factorizations of f over the free ambient ring S0.

A morphism of such modules is a matrix v on generators together with a
witness u on relations satisfying v.rho1 = sigma1.u exactly over S0; the
identity f.I = sigma1.sigma0 absorbs every mod-f correction, so no extra
slack unknowns are needed for well-definedness. Morphism equality is
membership of the difference in {sigma1.w}, decided by a solve (the f.z
part of the degenerate subspace is likewise absorbed by sigma1).

On top of this layer sit the factorization and monomorphism categories with
Gorenstein components: pairs of module maps composing to omega on both
sides, and the companion solve certifying monomorphism objects.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CokernelNotAnnihilated,
    DimensionMismatch,
    ModulusPresent,
    NoSolutionUpToDegree,
    NotAFactorization,
    NotInjective,
    ObjectMismatch,
    OmegaZeroDivisor,
    RingMismatch,
    ZeroInput,
)
from .mf import MFObject, mf_validate
from .ring import Poly, PolyMatrix, Ring, is_nonzerodivisor
from .solver import (
    Equation,
    LinearSystem,
    Term,
    Unknown,
    Verdict,
    default_bound,
    degree_sets,
    escalating,
    forced_degrees,
    projected_solution_dim,
    solution_space,
    solve_bounded,
    try_solve,
)


class GPModule:
    """coker(rho1) over S = S0/(f), presented by a matrix factorization."""

    __slots__ = ("ambient", "f", "presentation")

    def __init__(self, ambient: Ring, f: Poly, presentation: MFObject):
        self.ambient = ambient
        self.f = f
        self.presentation = presentation

    @property
    def gens(self) -> int:
        return self.presentation.rank

    @property
    def rho1(self) -> PolyMatrix:
        return self.presentation.rho1

    @property
    def rho0(self) -> PolyMatrix:
        return self.presentation.rho0

    @property
    def is_graded(self) -> bool:
        return self.presentation.is_graded

    @property
    def gen_labels(self):
        return self.presentation.deg0

    @property
    def rel_labels(self):
        return self.presentation.deg1

    def __eq__(self, other):
        return (
            isinstance(other, GPModule)
            and self.ambient == other.ambient
            and self.f == other.f
            and self.presentation == other.presentation
        )

    def __hash__(self):
        return hash((self.ambient, self.f, self.presentation))

    def __repr__(self):
        return f"<GP module: coker {self.rho1} mod ({self.f})>"


def gp_validate(G: GPModule) -> None:
    """The presentation must be a valid factorization of f over S0."""
    if G.ambient.modulus is not None:
        raise ModulusPresent("the ambient ring must be free; f is the hypersurface")
    if G.f.ring != G.ambient:
        raise RingMismatch("f must live in the ambient ring")
    if G.f.is_zero or G.f.degree() == 0:
        raise ZeroInput("f must be a nonzero non-unit")
    X = G.presentation
    if X.omega != G.f:
        raise NotAFactorization("presentation omega differs from f")
    mf_validate(X)


def make_gp(ambient: Ring, f, rho1, rho0, deg1=None, deg0=None, infer=True) -> GPModule:
    from .mf import make_mf

    f = ambient.poly(f)
    pres = make_mf(ambient, f, rho1, rho0, deg1=deg1, deg0=deg0, infer=infer)
    G = GPModule(ambient, f, pres)
    gp_validate(G)
    return G


def free_gp(ambient: Ring, f, n: int) -> GPModule:
    """Free rank-n module over S as coker of n copies of ([f],[1])."""
    f = ambient.poly(f)
    rho1 = PolyMatrix.scalar(ambient, n, f)
    rho0 = PolyMatrix.identity(ambient, n)
    dw = f.degree()
    return make_gp(ambient, f, rho1, rho0, deg1=(dw,) * n, deg0=(0,) * n, infer=False)


# ---------------------------------------------------------------------------
# Morphisms of modules


class GPMorphism:
    __slots__ = ("source", "target", "v", "u")

    def __init__(self, source: GPModule, target: GPModule, v: PolyMatrix, u: PolyMatrix):
        self.source = source
        self.target = target
        self.v = v
        self.u = u

    def __repr__(self):
        return f"<GP morphism v={self.v}>"


def _v_shifts(phi_v: PolyMatrix, src_labels, tgt_labels):
    shifts = set()
    for i in range(phi_v.rows):
        for j in range(phi_v.cols):
            for d in phi_v.entry(i, j).homogeneous_components():
                shifts.add(d - (src_labels[j] - tgt_labels[i]))
    return sorted(shifts)


def gp_morphism(G: GPModule, H: GPModule, v, bound: int | None = None, cap: int = 32) -> GPMorphism:
    """Wrap v as a morphism by solving for its unique witness u.

    Raises NoSolutionUpToDegree when v does not map relations into
    relations, i.e. is not well defined on cokernels.
    """
    if G.ambient != H.ambient or G.f != H.f:
        raise ObjectMismatch("morphism endpoints over different hypersurfaces")
    ring = G.ambient
    if not isinstance(v, PolyMatrix):
        v = PolyMatrix.from_rows(ring, v)
    if (v.rows, v.cols) != (H.gens, G.gens):
        raise DimensionMismatch("v must be (target gens) x (source gens)")
    target = v @ G.rho1
    graded = G.is_graded and H.is_graded and all(
        e.is_zero or e.is_homogeneous() for e in v.entries
    )

    def attempt(d):
        if graded:
            shifts = _v_shifts(v, G.gen_labels, H.gen_labels)
            uk = Unknown(
                "u", H.gens, G.gens,
                entry_degrees=degree_sets(H.rel_labels, G.rel_labels, shifts),
            )
            sys = LinearSystem(
                ring, [uk],
                [Equation((Term(H.rho1, "u", None),), target)],
                complete=True,
            )
        else:
            uk = Unknown("u", H.gens, G.gens, bound=d)
            sys = LinearSystem(
                ring, [uk], [Equation((Term(H.rho1, "u", None),), target)]
            )
        return solve_bounded(sys)["u"]

    if graded:
        u = attempt(0)
    else:
        start = bound if bound is not None else default_bound(
            ring, v, G.rho1, H.rho1, omega=G.f
        )
        u = escalating(attempt, start, cap)
    return GPMorphism(G, H, v, u)


def gp_identity(G: GPModule) -> GPMorphism:
    eye = PolyMatrix.identity(G.ambient, G.gens)
    return GPMorphism(G, G, eye, eye)


def gp_zero(G: GPModule, H: GPModule) -> GPMorphism:
    z = PolyMatrix.zeros(G.ambient, H.gens, G.gens)
    return GPMorphism(G, H, z, z)


def gp_scale(G: GPModule, value) -> GPMorphism:
    """Multiplication by a ring element as an endomorphism."""
    p = G.ambient.poly(value)
    v = PolyMatrix.scalar(G.ambient, G.gens, p)
    u = PolyMatrix.scalar(G.ambient, G.gens, p)
    return GPMorphism(G, G, v, u)


def gp_compose(psi: GPMorphism, phi: GPMorphism) -> GPMorphism:
    """psi after phi; the composite witness identity is re-verified."""
    if phi.target != psi.source:
        raise ObjectMismatch("composition endpoints do not match")
    v = psi.v @ phi.v
    u = psi.u @ phi.u
    out = GPMorphism(phi.source, psi.target, v, u)
    if v @ phi.source.rho1 != psi.target.rho1 @ u:
        raise NotAFactorization("composite witness identity fails")
    return out


def _degenerate_system(G: GPModule, H: GPModule, diff: PolyMatrix, bound=None):
    """System for {w : diff = sigma1.w}; f.z is absorbed by sigma1."""
    ring = G.ambient
    graded = G.is_graded and H.is_graded and all(
        e.is_zero or e.is_homogeneous() for e in diff.entries
    )
    if graded:
        shifts = _v_shifts(diff, G.gen_labels, H.gen_labels) or [0]
        uk = Unknown(
            "w", H.gens, G.gens,
            entry_degrees=degree_sets(H.rel_labels, G.gen_labels, shifts),
        )
        return LinearSystem(
            ring, [uk], [Equation((Term(H.rho1, "w", None),), diff)], complete=True
        )
    if bound is None:
        bound = default_bound(ring, diff, H.rho1, omega=G.f)
    uk = Unknown("w", H.gens, G.gens, bound=bound)
    return LinearSystem(ring, [uk], [Equation((Term(H.rho1, "w", None),), diff)])


def gp_equal(a: GPMorphism, b: GPMorphism, bound: int | None = None) -> Verdict:
    """Equality modulo the degenerate subspace {sigma1.w + f.z}."""
    if a.source != b.source or a.target != b.target:
        raise ObjectMismatch("comparing morphisms with different endpoints")
    diff = a.v - b.v
    if diff.is_zero:
        return Verdict(True, True)
    sys = _degenerate_system(a.source, a.target, diff, bound=bound)
    found = try_solve(sys)
    if found is not None:
        return Verdict(True, True)
    return Verdict(False, sys.complete)


def gp_is_zero(a: GPMorphism, bound: int | None = None) -> Verdict:
    return gp_equal(a, gp_zero(a.source, a.target), bound=bound)


# ---------------------------------------------------------------------------
# Hom spaces


def _hom_system(G: GPModule, H: GPModule, D: int):
    """Unknowns (v, u) with v.rho1 = sigma1.u; v is the primary unknown."""
    ring = G.ambient
    graded = G.is_graded and H.is_graded
    if graded:
        lo = min(H.gen_labels) - max(G.gen_labels)
        shifts = list(range(lo, D + 1))
        v_spec = Unknown(
            "v", H.gens, G.gens,
            entry_degrees=degree_sets(H.gen_labels, G.gen_labels, shifts),
        )
        u_spec = Unknown(
            "u", H.gens, G.gens,
            entry_degrees=degree_sets(H.rel_labels, G.rel_labels, shifts),
        )
        complete = True
    else:
        v_spec = Unknown("v", H.gens, G.gens, bound=D)
        u_spec = Unknown(
            "u", H.gens, G.gens,
            bound=D + default_bound(ring, G.rho1, H.rho1, omega=G.f),
        )
        complete = False
        shifts = None
    z = PolyMatrix.zeros(ring, H.gens, G.gens)
    eq = Equation((Term(None, "v", G.rho1), Term(-H.rho1, "u", None)), z)
    return LinearSystem(ring, [v_spec, u_spec], [eq], complete=complete), shifts


def _degenerate_space_system(G: GPModule, H: GPModule, D: int, shifts):
    ring = G.ambient
    if shifts is not None:
        v_spec = Unknown(
            "v", H.gens, G.gens,
            entry_degrees=degree_sets(H.gen_labels, G.gen_labels, shifts),
        )
        w_spec = Unknown(
            "w", H.gens, G.gens,
            entry_degrees=degree_sets(H.rel_labels, G.gen_labels, shifts),
        )
        complete = True
    else:
        v_spec = Unknown("v", H.gens, G.gens, bound=D)
        w_spec = Unknown(
            "w", H.gens, G.gens,
            bound=D + default_bound(ring, H.rho1, omega=G.f),
        )
        complete = False
    z = PolyMatrix.zeros(ring, H.gens, G.gens)
    eq = Equation((Term(None, "v", None), Term(-H.rho1, "w", None)), z)
    return LinearSystem(ring, [v_spec, w_spec], [eq], complete=complete)


def gp_hom_dim(G: GPModule, H: GPModule, D: int) -> int:
    """dim {v : morphism, deg <= D} modulo {sigma1.w}; exact in graded mode."""
    sys, shifts = _hom_system(G, H, D)
    total = projected_solution_dim(sys, {"v"})
    degen = projected_solution_dim(_degenerate_space_system(G, H, D, shifts), {"v"})
    return total - degen


def gp_hom_basis(G: GPModule, H: GPModule, D: int) -> list:
    """Representatives of a basis of Hom(G,H) up to degree D, modulo the
    degenerate subspace."""
    from . import linalg

    sys, shifts = _hom_system(G, H, D)
    space = solution_space(sys, verify=False)
    degen = solution_space(
        _degenerate_space_system(G, H, D, shifts), verify=False
    )
    field = G.ambient.field

    monos = set()
    vs = [assign["v"] for assign in space.basis]
    dvs = [assign["v"] for assign in degen.basis]
    for mat in vs + dvs:
        for e in mat.entries:
            monos.update(m for m, _ in e.terms())
    monos = sorted(monos)
    index = {m: k for k, m in enumerate(monos)}
    width = (H.gens * G.gens) * max(len(monos), 1)

    def flatten(mat):
        vec = [field.zero()] * width
        for i in range(mat.rows):
            for j in range(mat.cols):
                for m, c in mat.entry(i, j).terms():
                    vec[(i * G.gens + j) * len(monos) + index[m]] = c
        return vec

    rows = [flatten(m) for m in dvs]
    reps = []
    rank = linalg.rank(rows, field) if rows else 0
    for assign, mat in zip(space.basis, vs):
        cand = rows + [flatten(mat)]
        r = linalg.rank(cand, field)
        if r > rank:
            rows = cand
            rank = r
            reps.append(GPMorphism(G, H, mat, assign["u"]))
    return reps


# ---------------------------------------------------------------------------
# Factorization / monomorphism objects with Gorenstein components


class MFGObject:
    """Pair of module maps with g1.g0 = g0.g1 = omega (mod presentations)."""

    __slots__ = ("omega", "g1", "g0")

    def __init__(self, omega: Poly, g1: GPMorphism, g0: GPMorphism):
        self.omega = omega
        self.g1 = g1
        self.g0 = g0

    @property
    def module1(self) -> GPModule:
        return self.g1.source

    @property
    def module0(self) -> GPModule:
        return self.g1.target

    def __repr__(self):
        return f"<MFG object g1={self.g1.v}, g0={self.g0.v}>"


class MonGObject:
    __slots__ = ("omega", "g1", "g0")

    def __init__(self, omega: Poly, g1: GPMorphism, g0: GPMorphism):
        self.omega = omega
        self.g1 = g1
        self.g0 = g0


def _check_omega_on_quotient(ambient: Ring, f: Poly, omega: Poly):
    S = ambient.quotient(f)
    reduced = S.poly(omega)
    if reduced.is_zero:
        raise OmegaZeroDivisor("omega is zero on S")
    if not is_nonzerodivisor(reduced, S):
        raise OmegaZeroDivisor(f"omega = {omega} is a zerodivisor on S")


def mfg_validate(X: MFGObject) -> None:
    """Both composites must be omega.id up to the presentations."""
    g1, g0 = X.g1, X.g0
    if g1.source != g0.target or g1.target != g0.source:
        raise ObjectMismatch("g1 and g0 must run between the same modules")
    G1, G0 = g1.source, g1.target
    gp_validate(G1)
    gp_validate(G0)
    _check_omega_on_quotient(G1.ambient, G1.f, X.omega)
    w10 = gp_equal(gp_compose(g1, g0), gp_scale(G0, X.omega))
    if not w10:
        raise NotAFactorization("g1.g0 is not omega.id on the target module")
    w01 = gp_equal(gp_compose(g0, g1), gp_scale(G1, X.omega))
    if not w01:
        raise NotAFactorization("g0.g1 is not omega.id on the source module")


def make_mfg(omega, g1: GPMorphism, g0: GPMorphism) -> MFGObject:
    omega = g1.source.ambient.poly(omega)
    X = MFGObject(omega, g1, g0)
    mfg_validate(X)
    return X


def mong_validate(
    ambient: Ring,
    f,
    omega,
    g1: GPMorphism,
    bound: int | None = None,
    cap: int = 32,
) -> MonGObject:
    """Solve for the companion of g1 at the Gorenstein level.

    One linear system over S0 in the unknowns (v, u, w, z): v the companion
    on generators, u its witness on relations, w and z the presentation
    slacks for the two omega.id congruences.
    """
    f = ambient.poly(f)
    omega = ambient.poly(omega)
    G1, G0 = g1.source, g1.target
    gp_validate(G1)
    gp_validate(G0)
    _check_omega_on_quotient(ambient, f, omega)
    ring = ambient
    dw = omega.degree()
    n1, n0 = G1.gens, G0.gens

    graded = (
        G1.is_graded
        and G0.is_graded
        and omega.is_homogeneous()
        and all(e.is_zero or e.is_homogeneous() for e in g1.v.entries)
    )

    def build(d):
        if graded:
            v_spec = Unknown(
                "v", n1, n0,
                entry_degrees=forced_degrees(G1.gen_labels, G0.gen_labels, dw),
            )
            u_spec = Unknown(
                "u", n1, n0,
                entry_degrees=forced_degrees(G1.rel_labels, G0.rel_labels, dw),
            )
            w_spec = Unknown(
                "w", n0, n0,
                entry_degrees=forced_degrees(G0.rel_labels, G0.gen_labels, dw),
            )
            z_spec = Unknown(
                "z", n1, n1,
                entry_degrees=forced_degrees(G1.rel_labels, G1.gen_labels, dw),
            )
            complete = True
        else:
            v_spec = Unknown("v", n1, n0, bound=d)
            u_spec = Unknown("u", n1, n0, bound=d)
            w_spec = Unknown("w", n0, n0, bound=d)
            z_spec = Unknown("z", n1, n1, bound=d)
            complete = False
        omega1 = PolyMatrix.scalar(ring, n0, omega)
        omega2 = PolyMatrix.scalar(ring, n1, omega)
        eq_right = Equation(
            (Term(g1.v, "v", None), Term(-G0.rho1, "w", None)), omega1
        )
        eq_left = Equation(
            (Term(None, "v", g1.v), Term(-G1.rho1, "z", None)), omega2
        )
        eq_witness = Equation(
            (Term(None, "v", G0.rho1), Term(-G1.rho1, "u", None)),
            PolyMatrix.zeros(ring, n1, n0),
        )
        return LinearSystem(
            ring,
            [v_spec, u_spec, w_spec, z_spec],
            [eq_right, eq_left, eq_witness],
            complete=complete,
        )

    def attempt(d):
        return solve_bounded(build(d))

    try:
        if graded:
            sol = attempt(0)
        else:
            start = bound if bound is not None else default_bound(
                ring, g1.v, G1.rho1, G0.rho1, omega=f
            ) + dw
            sol = escalating(attempt, start, cap)
    except NoSolutionUpToDegree as exc:
        # diagnose: right companion alone distinguishes non-mono from
        # omega-surviving cokernel
        right_only = _right_companion_exists(
            ring, omega, g1, bound=exc.bound, graded=graded
        )
        if right_only:
            raise NotInjective(
                "g1 has a right omega-companion but no two-sided one"
            ) from exc
        raise CokernelNotAnnihilated(
            f"no companion within degree {exc.bound}"
            + (" (proven)" if exc.proven else ""),
            proven=exc.proven,
        ) from exc

    companion = GPMorphism(G0, G1, sol["v"], sol["u"])
    return MonGObject(omega, g1, companion)


def _right_companion_exists(ring, omega, g1: GPMorphism, bound, graded) -> bool:
    G1, G0 = g1.source, g1.target
    dw = omega.degree()
    n1, n0 = G1.gens, G0.gens
    if graded:
        v_spec = Unknown(
            "v", n1, n0,
            entry_degrees=forced_degrees(G1.gen_labels, G0.gen_labels, dw),
        )
        w_spec = Unknown(
            "w", n0, n0,
            entry_degrees=forced_degrees(G0.rel_labels, G0.gen_labels, dw),
        )
        u_spec = Unknown(
            "u", n1, n0,
            entry_degrees=forced_degrees(G1.rel_labels, G0.rel_labels, dw),
        )
        complete = True
        bound = 0
    else:
        v_spec = Unknown("v", n1, n0, bound=bound)
        w_spec = Unknown("w", n0, n0, bound=bound)
        u_spec = Unknown("u", n1, n0, bound=bound)
        complete = False
    omega1 = PolyMatrix.scalar(ring, n0, omega)
    sys = LinearSystem(
        ring,
        [v_spec, u_spec, w_spec],
        [
            Equation((Term(g1.v, "v", None), Term(-G0.rho1, "w", None)), omega1),
            Equation(
                (Term(None, "v", G0.rho1), Term(-G1.rho1, "u", None)),
                PolyMatrix.zeros(ring, n1, n0),
            ),
        ],
        complete=complete,
    )
    return try_solve(sys) is not None


def functor_F_g(M: MonGObject) -> MFGObject:
    """Pair g1 with its certified companion (the Gorenstein-level F)."""
    return make_mfg(M.omega, M.g1, M.g0)


def functor_U_g(X: MFGObject) -> MonGObject:
    """Forget the pairing; the companion is carried over."""
    return MonGObject(X.omega, X.g1, X.g0)


def embed_mf(ambient: Ring, f, X) -> MFGObject:
    """Lift a matrix factorization over S = S0/(f) to Gorenstein level via
    trivial (free) presentations."""
    f = ambient.poly(f)
    n = X.rank
    G1 = free_gp(ambient, f, n)
    G0 = free_gp(ambient, f, n)
    lift = lambda mat: PolyMatrix(
        ambient, mat.rows, mat.cols, [ambient.lift(e) for e in mat.entries]
    )
    omega_lift = ambient.lift(X.omega)
    g1 = gp_morphism(G1, G0, lift(X.rho1))
    g0 = gp_morphism(G0, G1, lift(X.rho0))
    return make_mfg(omega_lift, g1, g0)
