"""Pullbacks along a coordinate projection ``phi: N -> M``.

N has the coordinates of M followed by fibre coordinates. The pullback
algebroid ``phi^! F`` is framed by the lifted frame of F followed by the
vertical fields ``d_<v>`` of the fibre coordinates; a lifted frame element
is anchored to the horizontal lift of its base anchor. When F is the tangent
algebroid of M this is exactly the tangent algebroid of N.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .adjustment import AdjustmentData, classify
from .algebroid import LieAlgebroid, verify_algebroid, verify_morphism
from .connection import ETwoFormOnF, FConnection
from .geometry import BundleMorphism, Section, ShapeError, VectorBundle, VectorField, tangent_bundle
from .report import PreconditionError, Report, VerificationError, residual_check
from .symexpr import CoordinatePatch

__all__ = [
    "Submersion",
    "PullbackAlgebroid",
    "pullback_algebroid",
    "verify_projection",
    "pullback_connection",
    "pullback_action_algebroid",
    "pullback_adjustment",
]


@dataclass(frozen=True)
class Submersion:
    """Projection of ``total`` onto its leading coordinates ``base``."""

    total: CoordinatePatch
    base: CoordinatePatch

    def __post_init__(self):
        if not self.total.extends(self.base):
            raise ShapeError(f"{self.base} is not a coordinate prefix of {self.total}")

    @classmethod
    def extend(cls, base: CoordinatePatch, fibre: Sequence[str]) -> "Submersion":
        return cls(CoordinatePatch(base.names + tuple(fibre)), base)

    @property
    def fibre(self) -> tuple[str, ...]:
        return self.total.names[self.base.dimension:]

    @property
    def k(self) -> int:
        return len(self.fibre)

    def lift_vf(self, X: Section) -> VectorField:
        """Horizontal lift of a vector field on the base."""
        return VectorField(self.total, [c.lift(self.total) for c in X.components] + [0] * self.k)

    def horizontal(self, V: Section) -> tuple:
        """``D phi`` applied to a vector field on N, as lifted base components."""
        return V.components[: self.base.dimension]


def _horizontal_field(phi: Submersion, comps) -> VectorField:
    return VectorField(phi.total, list(comps) + [0] * phi.k)


@dataclass(eq=False)
class PullbackAlgebroid:
    base: LieAlgebroid
    phi: Submersion
    algebroid: LieAlgebroid
    pulled_bundle: VectorBundle   # phi^* F, the target of xi
    xi: BundleMorphism

    @property
    def rank(self) -> int:
        return self.algebroid.rank

    def lift(self, X: Section) -> Section:
        """The canonical lift of a section of F, with zero vertical part."""
        comps = [c.lift(self.phi.total) for c in X.components] + [self.phi.total.zero()] * self.phi.k
        return Section(self.algebroid.bundle, comps)


def pullback_algebroid(F_alg: LieAlgebroid, phi: Submersion) -> PullbackAlgebroid:
    if F_alg.patch != phi.base:
        raise ShapeError(f"{F_alg.name} does not live on the base of the projection")
    N = phi.total
    vertical = tuple("d_" + v for v in phi.fibre)
    clash = set(vertical) & set(F_alg.bundle.frame)
    if clash:
        raise ShapeError(f"frame names {sorted(clash)} of {F_alg.name} clash with vertical fields")
    frame = F_alg.bundle.frame + vertical
    is_T = F_alg.bundle == tangent_bundle(F_alg.patch)
    bundle = VectorBundle(N, frame, "T" if is_T else f"{F_alg.bundle.name}_pb")
    anchor = [phi.lift_vf(r).components for r in F_alg.anchor]
    anchor += [VectorField.coordinate(N, v).components for v in phi.fibre]
    m, k = F_alg.rank, phi.k
    zN = N.zero()
    table = [[bundle.zero()] * (m + k) for _ in range(m + k)]
    for a in range(m):
        for b in range(m):
            s = F_alg.table[a][b]
            table[a][b] = Section(bundle, [c.lift(N) for c in s.components] + [zN] * k)
    name = "T" if is_T else f"{F_alg.name}_pb"
    alg = LieAlgebroid(bundle, anchor, table, name)
    pulled = F_alg.bundle.lift(N)
    o = N.one()
    xi = BundleMorphism(bundle, pulled, [[o if i == j else zN for j in range(m + k)] for i in range(m)], "xi")
    return PullbackAlgebroid(F_alg, phi, alg, pulled, xi)


def verify_projection(pb: PullbackAlgebroid) -> Report:
    """xi is a surjective morphism over phi, and phi^!F is a Lie algebroid.

    Anchors: ``D phi(rho(Y)) = phi^* rho_F(xi Y)``; brackets:
    ``xi [Y1, Y2] = phi^*[xi Y1, xi Y2]_F`` on frames (both arguments are
    pulled-back frame sections, so the right side is read from F's table).
    """
    F, A, phi = pb.base, pb.algebroid, pb.phi
    N = phi.total
    fr = A.bundle.frame
    n = A.rank
    ys = A.bundle.frame_sections()

    def base_anchor(Y):
        s = pb.xi(Y)
        v = [N.zero()] * phi.base.dimension
        for c, row in zip(s.components, F.anchor):
            v = [a + c * r.lift(N) for a, r in zip(v, row.components)]
        return v

    def base_bracket(i, j):
        if i < F.rank and j < F.rank:
            return F.table[i][j].lift(pb.pulled_bundle)
        return pb.pulled_bundle.zero()

    rep = Report(f"projection xi: {A.name} -> {F.name}")
    rep.extend(verify_algebroid(A), "pullback.")
    rep.add(residual_check(
        "anchor",
        ((fr[i], _horizontal_field(phi, [h - b for h, b in zip(phi.horizontal(A.anchor[i]),
                                                                base_anchor(ys[i]))]))
         for i in range(n)),
    ))
    rep.add(residual_check(
        "bracket",
        ((f"({fr[i]}, {fr[j]})", pb.xi(A.table[i][j]) - base_bracket(i, j))
         for i, j in combinations(range(n), 2)),
    ))
    rep.add(residual_check(
        "surjective",
        ((f, pb.xi(pb.lift(F.bundle.basis(f))) - pb.pulled_bundle.basis(f)) for f in F.bundle.frame),
    ))
    return rep


def pullback_connection(pb: PullbackAlgebroid, nabla: FConnection) -> FConnection:
    """``phi^* nabla``: lifted Christoffel rows, zero rows in vertical directions."""
    if nabla.F.bundle != pb.base.bundle:
        raise ShapeError(f"{nabla.name} is not a connection along {pb.base.name}")
    N = pb.phi.total
    E = nabla.E.lift(N)
    rows = [[s.lift(E) for s in row] for row in nabla.christoffel]
    rows += [[E.zero()] * E.rank for _ in range(pb.phi.k)]
    return FConnection(pb.algebroid, E, rows, nabla.name)


def pullback_action_algebroid(E_alg: LieAlgebroid, fields: Sequence[Section] | None,
                              pb: PullbackAlgebroid, K: BundleMorphism) -> tuple[LieAlgebroid, BundleMorphism]:
    """``phi^* E`` with the action anchor ``fields`` and ``phi^! K``.

    The fields must project to the base anchor: ``D phi(fields[a]) = rho_E(e_a)``.
    Omitting them lifts the base anchor horizontally. The structure functions
    of E are pulled back verbatim, and
    ``phi^! K (mu) = (K mu, vertical part of fields(mu))``.
    """
    phi = pb.phi
    N = phi.total
    if E_alg.patch != phi.base or K.source != E_alg.bundle or K.target != pb.base.bundle:
        raise ShapeError("pullback_action_algebroid: E, K and the projection do not fit together")
    if fields is None:
        fields = [phi.lift_vf(r) for r in E_alg.anchor]
    if len(fields) != E_alg.rank:
        raise ShapeError(f"need {E_alg.rank} action fields, got {len(fields)}")
    fields = [f if isinstance(f, Section) else VectorField(N, f) for f in fields]
    fr = E_alg.bundle.frame
    compat = Report("action compatibility")
    compat.add(residual_check(
        "projects_to_anchor",
        ((fr[a], _horizontal_field(phi, [h - b.lift(N) for h, b in
                                         zip(phi.horizontal(f), E_alg.anchor[a].components)]))
         for a, f in enumerate(fields)),
    ))
    if not compat.passed:
        raise VerificationError("action fields do not cover the anchor of E", compat)
    Eb = E_alg.bundle.lift(N)
    table = [[s.lift(Eb) for s in row] for row in E_alg.table]
    E1 = LieAlgebroid(Eb, [f.components for f in fields], table, E_alg.name)
    rep = verify_algebroid(E1)
    if not rep.passed:
        raise VerificationError(f"pulled back {E_alg.name} is not a Lie algebroid", rep)
    nb = phi.base.dimension
    cols = []
    for a, f in enumerate(fields):
        k = [c.lift(N) for c in K.image(a).components]
        cols.append(k + list(f.components[nb:]))
    K1 = BundleMorphism.from_images(Eb, pb.algebroid.bundle, cols, f"{K.name}_pb")
    mrep = verify_morphism(K1, E1, pb.algebroid)
    if not mrep.passed:
        raise VerificationError(f"{K1.name} is not a Lie algebroid morphism", mrep)
    return E1, K1


def pullback_adjustment(d: AdjustmentData, phi: Submersion,
                        fields: Sequence[Section] | None = None) -> tuple[AdjustmentData, PullbackAlgebroid]:
    """Pull a strict adjustment back along ``phi`` and re-classify it.

    ``zeta'`` agrees with ``zeta`` on lifted frame pairs and vanishes when an
    argument is vertical. Raises :class:`PreconditionError` if ``d`` is not
    strict and :class:`VerificationError` if the pulled-back data fails any
    flag.
    """
    d, rep = classify(d)
    if not d.is_strict:
        raise PreconditionError("pullback_adjustment needs a strict covariant K-adjustment", rep)
    pb = pullback_algebroid(d.F_alg, phi)
    E1, K1 = pullback_action_algebroid(d.E_alg, fields, pb, d.K)
    nabla1 = pullback_connection(pb, d.nabla)
    m = d.F_alg.rank
    comps = {}
    for i, j in combinations(range(m), 2):
        s = d.zeta.table[i][j]
        if not s.is_zero:
            comps[(i, j)] = s.lift(E1.bundle)
    zeta1 = ETwoFormOnF(pb.algebroid.bundle, E1.bundle, comps, d.zeta.name)
    d1, rep1 = classify(AdjustmentData(E1, pb.algebroid, K1, nabla1, zeta1))
    if not d1.is_strict:
        raise VerificationError("pulled back data is not a strict adjustment", rep1)
    return d1, pb
