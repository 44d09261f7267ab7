"""The extension algebroid A = F + E of a strict covariant K-adjustment.

Sections of A are pairs (X, mu); the frame of A is the frame of F followed by
the frame of E. The bracket is::

    W = [mu, nu]_E + nabla_X nu - nabla_Y mu + zeta(X, Y)
    [(X, mu), (Y, nu)]_A = ([X + K mu, Y + K nu]_F - K W, W)

with anchor ``rho_F + rho_E``. The maps of the sandglass diagram are::

    D(X, mu) = X + K mu        iota(mu) = (-K mu, mu)     iota_hat(mu) = (0, mu)
    psi(X, mu) = X             chi(X) = (X, 0)            chi_hat(X, mu) = mu
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .adjustment import AdjustmentData, classify, nabla_zeta, strict_bla_bracket
from .algebroid import FibrewiseBracket, LieAlgebroid, verify_algebroid, verify_morphism
from .connection import ETwoFormOnF, FConnection, curvature, exterior_derivative_2form
from .geometry import BundleMorphism, Section, ShapeError, VectorBundle
from .report import Check, PreconditionError, Report, Status, VerificationError, residual_check, skipped

__all__ = [
    "ExtensionResult",
    "build_extension",
    "graph_bracket",
    "verify_sandglass",
    "mackenzie_extension",
    "extension_frame",
]


def extension_frame(F: VectorBundle, E: VectorBundle) -> tuple[str, ...]:
    """F-frame then E-frame; E names that clash with F get an ``_E`` suffix."""
    taken = set(F.frame)
    out = list(F.frame)
    for n in E.frame:
        while n in taken:
            n = n + "_E"
        taken.add(n)
        out.append(n)
    return tuple(out)


@dataclass(eq=False)
class ExtensionResult:
    data: AdjustmentData
    A: LieAlgebroid
    H: FibrewiseBracket
    graph_bracket: FibrewiseBracket
    D: BundleMorphism
    iota: BundleMorphism
    iota_hat: BundleMorphism
    psi: BundleMorphism
    chi: BundleMorphism
    chi_hat: BundleMorphism
    construction: Report
    report: Report | None = None

    @property
    def m(self) -> int:
        return self.data.F_alg.rank

    def join(self, X: Section, mu: Section) -> Section:
        return self.chi(X) + self.iota_hat(mu)

    def split(self, s: Section) -> tuple[Section, Section]:
        return self.psi(s), self.chi_hat(s)

    def __repr__(self) -> str:
        return f"ExtensionResult({self.A!r})"


def _maps(F: VectorBundle, E: VectorBundle, A: VectorBundle, K: BundleMorphism):
    m, r = F.rank, E.rank
    z, o = F.patch.zero(), F.patch.one()

    def eye(i, j):
        return o if i == j else z

    K_ = K.matrix
    D = BundleMorphism(A, F, [[eye(i, j) for j in range(m)] + list(K_[i]) for i in range(m)], "D")
    psi = BundleMorphism(A, F, [[eye(i, j) for j in range(m)] + [z] * r for i in range(m)], "psi")
    chi_hat = BundleMorphism(A, E, [[z] * m + [eye(a, b) for b in range(r)] for a in range(r)], "chi_hat")
    iota = BundleMorphism(E, A, [[-k for k in K_[i]] for i in range(m)]
                          + [[eye(a, b) for b in range(r)] for a in range(r)], "iota")
    iota_hat = BundleMorphism(E, A, [[z] * r for _ in range(m)]
                              + [[eye(a, b) for b in range(r)] for a in range(r)], "iota_hat")
    chi = BundleMorphism(F, A, [[eye(i, j) for j in range(m)] for i in range(m)]
                         + [[z] * m for _ in range(r)], "chi")
    return D, iota, iota_hat, psi, chi, chi_hat


def _assemble(d: AdjustmentData, H: FibrewiseBracket, rule, name: str = "A",
              verify: bool = True) -> ExtensionResult:
    """Tabulate ``rule((X, mu), (Y, nu)) -> (first, second)`` into an algebroid."""
    F, E = d.F_alg, d.E_alg
    Ab = VectorBundle(F.patch, extension_frame(F.bundle, E.bundle), name)
    D, iota, iota_hat, psi, chi, chi_hat = _maps(F.bundle, E.bundle, Ab, d.K)
    frames = [(x, E.bundle.zero()) for x in F.bundle.frame_sections()] + \
             [(F.bundle.zero(), e) for e in E.bundle.frame_sections()]
    n = len(frames)
    zero = Ab.zero()
    table = [[zero] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        a, b = rule(frames[i], frames[j])
        s = chi(a) + iota_hat(b)
        table[i][j] = s
        table[j][i] = -s
    anchor = [r.components for r in F.anchor] + [r.components for r in E.anchor]
    A = LieAlgebroid(Ab, anchor, table, name)
    res = ExtensionResult(d, A, H, H, D, iota, iota_hat, psi, chi, chi_hat, Report("construction"))
    if verify:
        res.construction.extend(verify_algebroid(A), "A.")
    return res


def _canonex(d: AdjustmentData):
    brF, brE, K, n, z = d.F_alg.bracket, d.E_alg.bracket, d.K, d.nabla, d.zeta

    def rule(p, q):
        (X, mu), (Y, nu) = p, q
        W = brE(mu, nu) + n(X, nu) - n(Y, mu) + z(X, Y)
        return brF(X + K(mu), Y + K(nu)) - K(W), W
    return rule


def _canonex_basic(d: AdjustmentData):
    brF, brE, K, n, z = d.F_alg.bracket, d.E_alg.bracket, d.K, d.nabla, d.zeta
    bF = d.basic().on_F

    def rule(p, q):
        (X, mu), (Y, nu) = p, q
        W = brE(mu, nu) + n(X, nu) - n(Y, mu) + z(X, Y)
        return brF(X, Y) + bF(mu, Y) - bF(nu, X) - K(z(X, Y)), W
    return rule


def build_extension(d: AdjustmentData, name: str = "A") -> ExtensionResult:
    """Construct A from a strict covariant K-adjustment and certify it.

    Unchecked flags are evaluated first; any failing flag raises
    :class:`PreconditionError`. The structure functions are computed from
    the bracket formula and compared against the form written with the
    basic connection; A must pass :func:`verify_algebroid`, and the bracket
    induced on the graph of -K must equal the strict BLA bracket. Any
    mismatch raises :class:`VerificationError`. The returned result carries
    the :func:`verify_sandglass` report.
    """
    d, rep = classify(d)
    if not d.is_strict:
        raise PreconditionError("build_extension needs a strict covariant K-adjustment", rep)
    H = strict_bla_bracket(d)
    res = _assemble(d, H, _canonex(d), name)
    other = _assemble(d, H, _canonex_basic(d), name, verify=False)
    fr = res.A.bundle.frame
    res.construction.add(residual_check(
        "basic_form_agrees",
        ((f"({fr[i]}, {fr[j]})", res.A.table[i][j] - other.A.table[i][j])
         for i, j in combinations(range(len(fr)), 2)),
    ))
    G, gcheck = _graph(res)
    res.graph_bracket = G
    res.construction.add(gcheck)
    res.construction.add(residual_check(
        "graph_equals_H",
        ((f"({a}, {b})", G.structure(a, b) - H.structure(a, b))
         for a, b in combinations(d.E_alg.bundle.frame, 2)),
    ))
    if not res.construction.passed:
        raise VerificationError("extension algebroid failed its construction checks", res.construction)
    res.report = verify_sandglass(res)
    return res


def _graph(res: ExtensionResult) -> tuple[FibrewiseBracket, Check]:
    E = res.data.E_alg.bundle
    es = E.frame_sections()
    r = len(es)
    ims = [res.iota(e) for e in es]
    table = [[E.zero()] * r for _ in range(r)]
    items = []
    for a in range(r):
        for b in range(r):
            if a == b:
                continue
            s = res.A.bracket(ims[a], ims[b])
            h = res.chi_hat(s)
            table[a][b] = h
            items.append((f"({E.frame[a]}, {E.frame[b]})", s - res.iota(h)))
    return FibrewiseBracket(E, table, "graph"), residual_check("graph_closed", items)


def graph_bracket(res: ExtensionResult) -> FibrewiseBracket:
    """The bracket of A restricted to Graph(-K), transported to E by iota."""
    G, check = _graph(res)
    if not check.passed:
        raise VerificationError("Graph(-K) is not closed under the bracket of A",
                                Report("graph", [check]))
    return G


def _merge(name: str, *reports: Report) -> Check:
    residuals, n = [], 0
    for rep in reports:
        for c in rep.checks:
            n += c.evaluated
            residuals.extend(c.residuals)
    return Check(name, Status.FAIL if residuals else Status.PASS, residuals, n)


def verify_sandglass(res: ExtensionResult) -> Report:
    """The nine checks on the maps of the sandglass diagram.

    Check 7 is negative: it passes when psi fails to preserve anchors and is
    skipped when the anchor of E vanishes. Check 9 runs only when
    ``nabla_zeta`` is flat; it then verifies that ``F + E_H`` with bracket
    ``([X, Y], H(mu, nu) + nabla_zeta_X nu - nabla_zeta_Y mu)`` is a Lie
    algebroid into which ``chi`` embeds F as a morphism.
    """
    d, A = res.data, res.A
    E, F = d.E_alg, d.F_alg
    es, xs = E.bundle.frame_sections(), F.bundle.frame_sections()
    ef, ff, af = E.bundle.frame, F.bundle.frame, A.bundle.frame
    r, m = len(es), len(xs)
    rep = Report("sandglass")

    rep.add(_merge("1.D_morphism", verify_morphism(res.D, A, F)))
    rep.add(residual_check("2.D_iota_zero", ((ef[a], res.D(res.iota(es[a]))) for a in range(r))))
    rep.add(residual_check(
        "3.iota_H",
        ((f"({ef[a]}, {ef[b]})", A.bracket(res.iota(es[a]), res.iota(es[b])) - res.iota(res.H(es[a], es[b])))
         for a, b in combinations(range(r), 2)),
    ))
    rep.add(_merge("4.iota_hat_morphism", verify_morphism(res.iota_hat, E, A)))

    ident = BundleMorphism.identity
    retro = (res.iota_hat.compose(res.chi_hat) + res.chi.compose(res.psi)) - ident(A.bundle)
    items = [(f"id_A at {af[i]}", retro.image(i)) for i in range(len(af))]
    items += [(f"chi_hat iota_hat at {ef[a]}", (res.chi_hat.compose(res.iota_hat) - ident(E.bundle)).image(a))
              for a in range(r)]
    items += [(f"D chi at {ff[i]}", (res.D.compose(res.chi) - ident(F.bundle)).image(i)) for i in range(m)]
    rep.add(residual_check("5.retro_splitting", items))

    items = []
    for i, j in combinations(range(m), 2):
        R = A.bracket(res.chi(xs[i]), res.chi(xs[j])) - res.chi(F.bracket(xs[i], xs[j]))
        items.append((f"R_chi({ff[i]}, {ff[j]})", R - res.iota(d.zeta(xs[i], xs[j]))))
        items.append((f"D R_chi({ff[i]}, {ff[j]})", res.D(R)))
    rep.add(residual_check("6.curvature_chi", items))

    if E.has_zero_anchor:
        rep.add(skipped("7.psi_not_anchored", "rho_E = 0, negative check skipped"))
    else:
        witness = None
        for i in range(len(af)):
            e = A.bundle.basis(i)
            v = F.rho(res.psi(e)) - A.rho(e)
            if not v.is_zero:
                witness = f"rho_F(psi({af[i]})) - rho_A({af[i]}) = {v}"
                break
        status = Status.PASS if witness else Status.FAIL
        rep.add(Check("7.psi_not_anchored", status, evaluated=len(af),
                      note=witness or "psi preserves anchors although rho_E != 0"))

    pair = d.basic()
    items = []
    for i in range(m):
        for a in range(r):
            X, mu = xs[i], es[a]
            items.append((f"nabla({ff[i]}, {ef[a]})",
                          d.nabla(X, mu) - res.chi_hat(A.bracket(res.chi(X), res.iota_hat(mu)))))
            items.append((f"bas({ef[a]}, {ff[i]})",
                          pair.on_F(mu, X) - res.psi(A.bracket(res.iota_hat(mu), res.chi(X)))))
    rep.add(residual_check("8.nabla_recovery", items))

    rep.add(_flat_lift_check(res))
    return rep


def _flat_lift_check(res: ExtensionResult) -> Check:
    d = res.data
    nz = nabla_zeta(d)
    xs = d.F_alg.bundle.frame_sections()
    es = d.E_alg.bundle.frame_sections()
    flat = all(curvature(nz, xs[i], xs[j], e).is_zero
               for i, j in combinations(range(len(xs)), 2) for e in es)
    if not flat:
        return skipped("9.flat_lift", "nabla_zeta is not flat")
    zero = ETwoFormOnF.zero(d.F_alg.bundle, d.E_alg.bundle)
    H = res.H
    brF = d.F_alg.bracket

    def rule(p, q):
        (X, mu), (Y, nu) = p, q
        return brF(X, Y), H(mu, nu) + nz(X, nu) - nz(Y, mu)

    EH = LieAlgebroid.bla(H, d.E_alg.name + "_H")
    d0 = AdjustmentData(EH, d.F_alg, BundleMorphism.zero(EH.bundle, d.F_alg.bundle), nz, zero)
    flat_res = _assemble(d0, H, rule, "A_flat")
    rep = Report("flat lift")
    rep.extend(flat_res.construction)
    rep.extend(verify_morphism(flat_res.chi, d.F_alg, flat_res.A), "chi.")
    return _merge("9.flat_lift", rep)


def mackenzie_extension(F_alg: LieAlgebroid, E_alg: LieAlgebroid | FibrewiseBracket,
                        nabla: FConnection, zeta: ETwoFormOnF, name: str = "A") -> ExtensionResult:
    """Extension of F by a bundle of Lie algebras from a coupling with K = 0.

    Requires ``nabla`` to differentiate the bracket, ``R_nabla = ad o zeta``
    and ``d^nabla zeta = 0``; otherwise raises :class:`VerificationError`
    with the residuals. The bracket is
    ``([X, Y]_F, [mu, nu]_E + nabla_X nu - nabla_Y mu + zeta(X, Y))``.
    """
    if isinstance(E_alg, FibrewiseBracket):
        E_alg = LieAlgebroid.bla(E_alg)
    if not E_alg.has_zero_anchor:
        raise ShapeError(f"{E_alg.name} must be a bundle of Lie algebras")
    es, xs = E_alg.bundle.frame_sections(), F_alg.bundle.frame_sections()
    ef, ff = E_alg.bundle.frame, F_alg.bundle.frame
    br = E_alg.bracket
    rep = Report("coupling conditions")
    rep.add(residual_check(
        "derivation",
        ((f"({ff[i]}; {ef[a]}, {ef[b]})",
          nabla(X, br(es[a], es[b])) - br(nabla(X, es[a]), es[b]) - br(es[a], nabla(X, es[b])))
         for i, X in enumerate(xs) for a, b in combinations(range(len(es)), 2)),
    ))
    rep.add(residual_check(
        "curvature",
        ((f"({ff[i]}, {ff[j]}; {ef[a]})",
          curvature(nabla, xs[i], xs[j], es[a]) - br(zeta(xs[i], xs[j]), es[a]))
         for i, j in combinations(range(len(xs)), 2) for a in range(len(es))),
    ))
    rep.add(residual_check(
        "bianchi",
        ((f"({ff[i]}, {ff[j]}, {ff[k]})", exterior_derivative_2form(nabla, zeta, xs[i], xs[j], xs[k]))
         for i, j, k in combinations(range(len(xs)), 3)),
    ))
    if not rep.passed:
        raise VerificationError("data is not a strict coupling", rep)
    d, crep = classify(AdjustmentData(E_alg, F_alg, BundleMorphism.zero(E_alg.bundle, F_alg.bundle), nabla, zeta))
    if not d.is_strict:
        raise VerificationError("coupling conditions passed but classification failed", crep)
    H = E_alg.fibrewise()
    brF = F_alg.bracket

    def rule(p, q):
        (X, mu), (Y, nu) = p, q
        return brF(X, Y), br(mu, nu) + nabla(X, nu) - nabla(Y, mu) + zeta(X, Y)

    res = _assemble(d, H, rule, name)
    res.graph_bracket, gcheck = _graph(res)
    res.construction.add(gcheck)
    if not res.construction.passed:
        raise VerificationError("extension algebroid failed Jacobi", res.construction)
    res.report = verify_sandglass(res)
    return res
