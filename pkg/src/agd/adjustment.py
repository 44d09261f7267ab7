"""Adjustment data (nabla, zeta, K) and its classification.

The levels are nested: a strict covariant K-adjustment is a covariant one,
which is a Cartan K-connection, which needs K to be a Lie algebroid
morphism. Each check is a pure function of the data; :func:`classify`
runs them in order and returns a copy with the flags filled in.

Conventions (all checked on frames):

* Cartan: ``R^bas(mu, nu) X = 0``
* covariant: ``R_nabla(X, Y) nu + dbas_zeta(X, Y, nu) = 0``
* strict: ``d^{nabla_zeta} zeta = 0`` with ``nabla_zeta_X nu = nabla_X nu - zeta(X, K nu)``
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import NamedTuple

from .algebroid import FibrewiseBracket, LieAlgebroid, verify_algebroid, verify_fibrewise_bracket, verify_morphism
from .connection import (
    BasicConnectionPair,
    EOneFormOnF,
    ETwoFormOnF,
    FConnection,
    basic_connection,
    basic_curvature,
    curvature,
    dbas_zeta,
    dzeta_zeta,
    exterior_derivative_1form,
    torsion,
)
from .geometry import BundleMorphism, ShapeError
from .report import PreconditionError, Report, VerificationError, residual_check

__all__ = [
    "Flag",
    "AdjustmentData",
    "SplittingMode",
    "SplittingChange",
    "check_inputs",
    "check_cartan",
    "check_covariant_adjustment",
    "check_strict",
    "classify",
    "nabla_zeta",
    "strict_bla_bracket",
    "verify_decomposition",
    "check_mym",
    "reconstruct_adjustment",
    "check_basic_flatness_of_H",
    "apply_splitting_change",
]


class Flag(str, Enum):
    UNCHECKED = "unchecked"
    PASS = "pass"
    FAIL = "fail"

    @classmethod
    def of(cls, report: Report) -> "Flag":
        return cls.PASS if report.passed else cls.FAIL


@dataclass(frozen=True, eq=False)
class AdjustmentData:
    """A triple (nabla, zeta, K) between algebroids E and F, plus flags.

    Flags are only ever written by :func:`classify`; build one with the
    five structural fields and let the checks fill in the rest.
    """

    E_alg: LieAlgebroid
    F_alg: LieAlgebroid
    K: BundleMorphism
    nabla: FConnection
    zeta: ETwoFormOnF
    morphism: Flag = Flag.UNCHECKED
    cartan: Flag = Flag.UNCHECKED
    covariant: Flag = Flag.UNCHECKED
    strict: Flag = Flag.UNCHECKED
    _pair: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        E, F = self.E_alg.bundle, self.F_alg.bundle
        if self.K.source != E or self.K.target != F:
            raise ShapeError(f"{self.K.name} must map {self.E_alg.name} to {self.F_alg.name}")
        if self.nabla.F.bundle != F or self.nabla.E != E:
            raise ShapeError(f"{self.nabla.name} must be an {self.F_alg.name}-connection on {self.E_alg.name}")
        if self.zeta.F != F or self.zeta.E != E:
            raise ShapeError(f"{self.zeta.name} must be a 2-form on {self.F_alg.name} with values in {self.E_alg.name}")

    @property
    def flags(self) -> dict[str, Flag]:
        return {"morphism": self.morphism, "cartan": self.cartan,
                "covariant": self.covariant, "strict": self.strict}

    @property
    def is_strict(self) -> bool:
        return self.strict is Flag.PASS

    def basic(self) -> BasicConnectionPair:
        """The basic connection pair (cached; needs the morphism flag)."""
        _require(self, "morphism")
        if not self._pair:
            self._pair.append(basic_connection(self.nabla, self.K, self.E_alg))
        return self._pair[0]

    def _with(self, **flags) -> "AdjustmentData":
        return dataclasses.replace(self, _pair=self._pair, **flags)

    def __repr__(self) -> str:
        fl = ", ".join(f"{k}={v.value}" for k, v in self.flags.items())
        return f"AdjustmentData({self.nabla.name}, {self.zeta.name}, {self.K.name}; {fl})"


_ORDER = ("morphism", "cartan", "covariant", "strict")


def _require(d: AdjustmentData, level: str) -> None:
    if getattr(d, level) is not Flag.PASS:
        raise PreconditionError(f"{level} check has not passed (flag is {getattr(d, level).value})")


def _frames(d: AdjustmentData):
    return d.E_alg.bundle.frame_sections(), d.F_alg.bundle.frame_sections()


def check_inputs(d: AdjustmentData) -> Report:
    """E and F are Lie algebroids and K is a morphism between them."""
    rep = Report("inputs")
    rep.extend(verify_algebroid(d.E_alg), "E.")
    rep.extend(verify_algebroid(d.F_alg), "F.")
    rep.extend(verify_morphism(d.K, d.E_alg, d.F_alg), "K.")
    return rep


def check_cartan(d: AdjustmentData) -> Report:
    """Basic curvature on all frame triples (mu < nu, any X)."""
    _require(d, "morphism")
    pair = d.basic()
    es, xs = _frames(d)
    ef, ff = d.E_alg.bundle.frame, d.F_alg.bundle.frame
    rep = Report("cartan")
    rep.add(residual_check(
        "basic_curvature",
        ((f"({ef[a]}, {ef[b]}; {ff[al]})", basic_curvature(pair, es[a], es[b], xs[al]))
         for a, b in combinations(range(len(es)), 2) for al in range(len(xs))),
    ))
    return rep


def check_covariant_adjustment(d: AdjustmentData) -> Report:
    """``R_nabla(X, Y) nu + dbas_zeta(X, Y, nu)`` on frames.

    With K = 0 the equation is also checked in its reduced form
    ``R_nabla(X, Y) nu = [zeta(X, Y), nu]_E``.
    """
    _require(d, "cartan")
    pair = d.basic()
    es, xs = _frames(d)
    ef, ff = d.E_alg.bundle.frame, d.F_alg.bundle.frame
    pairs = list(combinations(range(len(xs)), 2))
    rep = Report("covariant")
    rep.add(residual_check(
        "curvature_equation",
        ((f"({ff[i]}, {ff[j]}; {ef[a]})",
          curvature(d.nabla, xs[i], xs[j], es[a]) + dbas_zeta(pair, d.zeta, xs[i], xs[j], es[a]))
         for i, j in pairs for a in range(len(es))),
    ))
    if d.K.is_zero:
        br = d.E_alg.bracket
        rep.add(residual_check(
            "ad_reduction",
            ((f"({ff[i]}, {ff[j]}; {ef[a]})",
              curvature(d.nabla, xs[i], xs[j], es[a]) - br(d.zeta(xs[i], xs[j]), es[a]))
             for i, j in pairs for a in range(len(es))),
            note="K = 0: R_nabla = ad_E o zeta",
        ))
    return rep


def nabla_zeta(d: AdjustmentData) -> FConnection:
    """``nabla_zeta_X nu = nabla_X nu - zeta(X, K nu)``."""
    n, z, K = d.nabla, d.zeta, d.K
    return FConnection.tabulate(d.F_alg, d.E_alg.bundle, lambda X, nu: n(X, nu) - z(X, K(nu)),
                                f"{n.name}^{z.name}")


def check_strict(d: AdjustmentData) -> Report:
    """``d^{nabla_zeta} zeta`` on frame triples of F (vacuous below rank 3)."""
    _require(d, "covariant")
    nz = nabla_zeta(d)
    xs = d.F_alg.bundle.frame_sections()
    ff = d.F_alg.bundle.frame
    rep = Report("strict")
    note = "" if len(xs) >= 3 else f"vacuous: rank {d.F_alg.name} = {len(xs)} < 3"
    rep.add(residual_check(
        "dzeta_zeta",
        ((f"({ff[i]}, {ff[j]}, {ff[k]})", dzeta_zeta(nz, d.zeta, xs[i], xs[j], xs[k]))
         for i, j, k in combinations(range(len(xs)), 3)),
        note=note,
    ))
    return rep


_CHECKS = {
    "morphism": check_inputs,
    "cartan": check_cartan,
    "covariant": check_covariant_adjustment,
    "strict": check_strict,
}


def classify(d: AdjustmentData, upto: str = "strict") -> tuple[AdjustmentData, Report]:
    """Run the checks in order, stopping at the first failure.

    Returns the data with flags set and a combined report whose check names
    are prefixed by the level (``"cartan.basic_curvature"``, ...).
    """
    if upto not in _ORDER:
        raise ValueError(f"unknown level {upto!r}; expected one of {_ORDER}")
    rep = Report("classification")
    cur = d
    for level in _ORDER[: _ORDER.index(upto) + 1]:
        if getattr(cur, level) is Flag.UNCHECKED:
            sub = _CHECKS[level](cur)
            rep.extend(sub, f"{level}.")
            cur = cur._with(**{level: Flag.of(sub)})
        if getattr(cur, level) is not Flag.PASS:
            break
    return cur, rep


def _bracket_from(E_alg: LieAlgebroid, rule, name: str) -> FibrewiseBracket:
    es = E_alg.bundle.frame_sections()
    return FibrewiseBracket(E_alg.bundle, [[rule(a, b) for b in es] for a in es], name)


def strict_bla_bracket(d: AdjustmentData) -> FibrewiseBracket:
    """``H(mu, nu) = t_bas(mu, nu) + zeta(K mu, K nu)``.

    The equivalent ``-t_K + zeta(K, K)`` is computed as a cross-check, and the
    result must be a field of Lie brackets; either failure raises
    :class:`VerificationError` with the residuals.
    """
    _require(d, "strict")
    pair, K, z = d.basic(), d.K, d.zeta
    H = _bracket_from(d.E_alg, lambda m, n: torsion(pair, m, n) + z(K(m), K(n)), "H")
    H2 = _bracket_from(d.E_alg, lambda m, n: -torsion(pair, m, n, "K") + z(K(m), K(n)), "H")
    fr = d.E_alg.bundle.frame
    rep = Report("strict BLA bracket")
    rep.add(residual_check(
        "torsion_forms_agree",
        ((f"({fr[a]}, {fr[b]})", H.table[a][b] - H2.table[a][b])
         for a in range(len(fr)) for b in range(len(fr))),
    ))
    rep.extend(verify_fibrewise_bracket(H), "H.")
    if not rep.passed:
        raise VerificationError("extracted bracket is inconsistent", rep)
    return H


def _decomposition_items(E_alg, K, nz, zeta, H):
    es = E_alg.bundle.frame_sections()
    fr = E_alg.bundle.frame
    for a in range(len(es)):
        for b in range(a + 1, len(es)):
            m, n = es[a], es[b]
            rhs = H(m, n) + nz(K(m), n) - nz(K(n), m) + zeta(K(m), K(n))
            yield f"({fr[a]}, {fr[b]})", E_alg.bracket(m, n) - rhs


def verify_decomposition(d: AdjustmentData, H: FibrewiseBracket) -> Report:
    """``[mu, nu]_E = H + nabla_zeta_{K mu} nu - nabla_zeta_{K nu} mu + zeta(K mu, K nu)``."""
    rep = Report("decomposition")
    rep.add(residual_check("bracket_decomposition",
                           _decomposition_items(d.E_alg, d.K, nabla_zeta(d), d.zeta, H)))
    return rep


def check_mym(nz: FConnection, H: FibrewiseBracket, zeta: ETwoFormOnF, F_alg: LieAlgebroid,
              K: BundleMorphism | None = None) -> Report:
    """Strict multiplicative Yang-Mills conditions for ``nz`` with primitive ``zeta``.

    ``nabla_H``: ``nz_X H(mu, nu) - H(nz_X mu, nu) - H(mu, nz_X nu)``;
    ``curvature``: ``R_nz(X, Y) mu - H(zeta(X, Y), mu)``;
    ``dzeta``: ``d^nz zeta``. All are evaluated on every frame element of F.
    When ``K`` is given, the first two are additionally tallied with F
    directions restricted to the image of K.
    """
    if nz.F.bundle != F_alg.bundle or nz.E != H.bundle or zeta.E != H.bundle or zeta.F != F_alg.bundle:
        raise ShapeError("check_mym: connection, bracket and form do not fit together")
    es = H.bundle.frame_sections()
    xs = F_alg.bundle.frame_sections()
    ef, ff = H.bundle.frame, F_alg.bundle.frame
    r, m = len(es), len(xs)

    def dH(X, a, b):
        return nz(X, H(es[a], es[b])) - H(nz(X, es[a]), es[b]) - H(es[a], nz(X, es[b]))

    def curv(X, Y, a):
        return curvature(nz, X, Y, es[a]) - H(zeta(X, Y), es[a])

    rep = Report("multiplicative Yang-Mills")
    rep.add(residual_check(
        "nabla_H",
        ((f"({ff[al]}; {ef[a]}, {ef[b]})", dH(xs[al], a, b))
         for al in range(m) for a, b in combinations(range(r), 2)),
    ))
    rep.add(residual_check(
        "curvature",
        ((f"({ff[i]}, {ff[j]}; {ef[a]})", curv(xs[i], xs[j], a))
         for i, j in combinations(range(m), 2) for a in range(r)),
    ))
    rep.add(residual_check(
        "dzeta",
        ((f"({ff[i]}, {ff[j]}, {ff[k]})", dzeta_zeta(nz, zeta, xs[i], xs[j], xs[k]))
         for i, j, k in combinations(range(m), 3)),
        note="" if m >= 3 else "vacuous below rank 3",
    ))
    if K is not None:
        ks = [K(e) for e in es]
        rep.add(residual_check(
            "nabla_H[image K]",
            ((f"(K{ef[c]}; {ef[a]}, {ef[b]})", dH(ks[c], a, b))
             for c in range(r) for a, b in combinations(range(r), 2)),
        ))
        rep.add(residual_check(
            "curvature[image K]",
            ((f"(K{ef[c]}, K{ef[d]}; {ef[a]})", curv(ks[c], ks[d], a))
             for c, d in combinations(range(r), 2) for a in range(r)),
        ))
    return rep


def reconstruct_adjustment(nz: FConnection, H: FibrewiseBracket, zeta: ETwoFormOnF,
                           K: BundleMorphism, E_alg: LieAlgebroid, F_alg: LieAlgebroid) -> AdjustmentData:
    """Rebuild ``nabla_X mu = nz_X mu + zeta(X, K mu)`` and classify it.

    Requires ``(nz, H, zeta)`` to satisfy :func:`check_mym` and E's bracket to
    decompose through them; raises :class:`PreconditionError` otherwise. The
    returned data carries all flags; if any fails, :class:`VerificationError`
    is raised instead.
    """
    pre = Report("reconstruction preconditions")
    pre.extend(check_mym(nz, H, zeta, F_alg), "mym.")
    pre.add(residual_check("bracket_decomposition", _decomposition_items(E_alg, K, nz, zeta, H)))
    if not pre.passed:
        raise PreconditionError("inputs do not satisfy the converse hypotheses", pre)
    nabla = FConnection.tabulate(F_alg, E_alg.bundle, lambda X, mu: nz(X, mu) + zeta(X, K(mu)), "nabla")
    d, rep = classify(AdjustmentData(E_alg, F_alg, K, nabla, zeta))
    if not d.is_strict:
        raise VerificationError("reconstructed connection is not a strict adjustment", rep)
    return d


def check_basic_flatness_of_H(d: AdjustmentData, H: FibrewiseBracket) -> Report:
    """``bas_mu H(nu, s) - H(bas_mu nu, s) - H(nu, bas_mu s)`` on frame triples."""
    b = d.basic().on_E
    es = d.E_alg.bundle.frame_sections()
    fr = d.E_alg.bundle.frame
    r = len(es)
    rep = Report("basic flatness of H")
    rep.add(residual_check(
        "bas_H",
        ((f"({fr[a]}; {fr[c]}, {fr[e]})",
          b(es[a], H(es[c], es[e])) - H(b(es[a], es[c]), es[e]) - H(es[c], b(es[a], es[e])))
         for a in range(r) for c, e in combinations(range(r), 2)),
    ))
    return rep


class SplittingMode(str, Enum):
    """How the primitive is updated by a change of splitting.

    ``PRINTED``: ``zeta' = d^nabla lam + [lam, lam]``.
    ``ADDITIVE``: ``zeta' = zeta + d^nabla lam + [lam, lam]``.
    Here ``[lam, lam](X, Y) = [lam X, lam Y]_E``.
    """

    PRINTED = "printed"
    ADDITIVE = "additive"


class SplittingChange(NamedTuple):
    nabla: FConnection
    zeta: ETwoFormOnF
    report: Report


def apply_splitting_change(nabla: FConnection, zeta: ETwoFormOnF, lam: EOneFormOnF,
                           E_alg: LieAlgebroid, mode: SplittingMode | str,
                           K: BundleMorphism | None = None) -> SplittingChange:
    """Change of splitting for a bundle of Lie algebras (K = 0 only).

    ``nabla'_X mu = nabla_X mu + [lam X, mu]_E``; the new primitive depends
    on ``mode`` (see :class:`SplittingMode`). The returned report is
    :func:`check_mym` of the output against E's bracket.
    """
    mode = SplittingMode(mode)
    if K is not None and not K.is_zero:
        raise PreconditionError("changes of splitting are only supported for K = 0")
    if not E_alg.has_zero_anchor:
        raise PreconditionError(f"{E_alg.name} must be a bundle of Lie algebras (zero anchor)")
    if lam.F != nabla.F.bundle or lam.E != nabla.E or nabla.E != E_alg.bundle:
        raise ShapeError("splitting change: shapes of nabla, lam and E do not match")
    br = E_alg.bracket
    new = FConnection.tabulate(nabla.F, nabla.E, lambda X, mu: nabla(X, mu) + br(lam(X), mu),
                               f"{nabla.name}^{lam.name}")
    xs = nabla.F.bundle.frame_sections()
    comps = {}
    for i, j in combinations(range(len(xs)), 2):
        v = exterior_derivative_1form(nabla, lam, xs[i], xs[j]) + br(lam(xs[i]), lam(xs[j]))
        if mode is SplittingMode.ADDITIVE:
            v = v + zeta(xs[i], xs[j])
        comps[(i, j)] = v
    z = ETwoFormOnF(zeta.F, zeta.E, comps, f"{zeta.name}^{lam.name}")
    rep = check_mym(new, E_alg.fibrewise(), z, nabla.F)
    return SplittingChange(new, z, rep)
