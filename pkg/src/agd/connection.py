"""F-connections on a bundle E, curvature, and the basic connection pair.

An F-connection is stored by its Christoffel table on frames,
``nabla_{xi_alpha} e_a = Gamma[alpha][a]`` (a section of E), and acts on
arbitrary sections with the Leibniz rule along the anchor of F::

    (nabla_X mu)^b = X^alpha mu^a Gamma^b_{alpha a} + rho_F(X)(mu^b)

The same class serves for E-connections (the basic pair), with the
algebroid E in the role of F.
"""

from __future__ import annotations

from typing import Callable, Mapping, Union

from .algebroid import LieAlgebroid, verify_morphism
from .geometry import BundleMorphism, Section, ShapeError, VectorBundle, apply_vf
from .report import PreconditionError, Report, residual_check

__all__ = [
    "FConnection",
    "ETwoFormOnF",
    "EOneFormOnF",
    "BasicConnectionPair",
    "apply_connection",
    "curvature",
    "basic_connection",
    "basic_curvature",
    "torsion",
    "covariant_derivative_of_form",
    "dbas_zeta",
    "dzeta_zeta",
    "exterior_derivative_2form",
    "exterior_derivative_1form",
]


def _table(rows: VectorBundle, cols: VectorBundle, values: VectorBundle, spec,
           what: str) -> tuple[tuple[Section, ...], ...]:
    zero = values.zero()
    if spec is None:
        return tuple(tuple(zero for _ in range(cols.rank)) for _ in range(rows.rank))
    if isinstance(spec, Mapping):
        t = [[zero] * cols.rank for _ in range(rows.rank)]
        for (i, j), comps in spec.items():
            t[rows.index(i)][cols.index(j)] = comps if isinstance(comps, Section) else values.section(comps)
        return tuple(tuple(r) for r in t)
    if len(spec) != rows.rank or any(len(r) != cols.rank for r in spec):
        raise ShapeError(f"{what} table must be {rows.rank}x{cols.rank}")
    return tuple(tuple(c if isinstance(c, Section) else values.section(c) for c in r) for r in spec)


class FConnection:
    """Connection on ``E`` along the algebroid ``F``."""

    def __init__(self, F: LieAlgebroid, E: VectorBundle, christoffel=None, name: str = "nabla"):
        if F.patch != E.patch:
            raise ShapeError("connection between bundles over different patches")
        self.F = F
        self.E = E
        self.christoffel = _table(F.bundle, E, E, christoffel, "Christoffel")
        self.name = name

    @classmethod
    def flat(cls, F: LieAlgebroid, E: VectorBundle, name: str = "nabla") -> "FConnection":
        """The connection with vanishing Christoffel table in the given frame."""
        return cls(F, E, None, name)

    @classmethod
    def tabulate(cls, F: LieAlgebroid, E: VectorBundle,
                 rule: Callable[[Section, Section], Section], name: str = "nabla") -> "FConnection":
        """Read off the Christoffel table of ``rule(X, mu)`` on frames."""
        xs = F.bundle.frame_sections()
        es = E.frame_sections()
        return cls(F, E, [[rule(x, e) for e in es] for x in xs], name)

    def gamma(self, alpha: Union[int, str], a: Union[int, str]) -> Section:
        return self.christoffel[self.F.bundle.index(alpha)][self.E.index(a)]

    def __call__(self, X: Section, mu: Section) -> Section:
        return apply_connection(self, X, mu)

    @property
    def is_flat_table(self) -> bool:
        return all(s.is_zero for row in self.christoffel for s in row)

    def same_table(self, other: "FConnection") -> bool:
        return self.christoffel == other.christoffel

    def __repr__(self) -> str:
        return f"FConnection({self.name}: {self.F.name}-connection on {self.E.name})"


def apply_connection(nabla: FConnection, X: Section, mu: Section) -> Section:
    if X.bundle != nabla.F.bundle:
        raise ShapeError(f"{nabla.name} differentiates along {nabla.F.name}, not {X.bundle.name}")
    if mu.bundle != nabla.E:
        raise ShapeError(f"{nabla.name} acts on {nabla.E.name}, not {mu.bundle.name}")
    acc = None
    for al, xa in enumerate(X.components):
        if xa.is_zero:
            continue
        row = nabla.christoffel[al]
        for a, ma in enumerate(mu.components):
            if ma.is_zero or row[a].is_zero:
                continue
            term = (xa * ma) * row[a]
            acc = term if acc is None else acc + term
    out = nabla.E.zero() if acc is None else acc
    if not all(c.is_constant for c in mu.components):
        v = nabla.F.rho(X)
        out = out + Section(nabla.E, tuple(apply_vf(v, c) for c in mu.components))
    return out


def curvature(nabla: FConnection, X: Section, Y: Section, mu: Section) -> Section:
    """R(X, Y) mu = nabla_X nabla_Y mu - nabla_Y nabla_X mu - nabla_[X,Y] mu."""
    return nabla(X, nabla(Y, mu)) - nabla(Y, nabla(X, mu)) - nabla(nabla.F.bracket(X, Y), mu)


class ETwoFormOnF:
    """An antisymmetric C^inf-bilinear map F x F -> E."""

    def __init__(self, F: VectorBundle, E: VectorBundle, components=None, name: str = "zeta"):
        self.F = F
        self.E = E
        self.name = name
        if isinstance(components, Mapping):
            zero = E.zero()
            t = [[zero] * F.rank for _ in range(F.rank)]
            for (al, be), comps in components.items():
                i, j = F.index(al), F.index(be)
                if i == j:
                    raise ShapeError(f"{name}: diagonal entries of a 2-form must vanish")
                s = comps if isinstance(comps, Section) else E.section(comps)
                t[i][j] = s
                t[j][i] = -s
            self.table = tuple(tuple(r) for r in t)
        else:
            self.table = _table(F, F, E, components, "2-form")
            for i in range(F.rank):
                for j in range(i, F.rank):
                    if not (self.table[i][j] + self.table[j][i]).is_zero:
                        raise ShapeError(f"{name} is not antisymmetric at ({F.frame[i]}, {F.frame[j]})")

    @classmethod
    def zero(cls, F: VectorBundle, E: VectorBundle, name: str = "zeta") -> "ETwoFormOnF":
        return cls(F, E, None, name)

    def __call__(self, X: Section, Y: Section) -> Section:
        if X.bundle != self.F or Y.bundle != self.F:
            raise ShapeError(f"{self.name} takes sections of {self.F.name}")
        acc = None
        for al, xa in enumerate(X.components):
            if xa.is_zero:
                continue
            for be, yb in enumerate(Y.components):
                if yb.is_zero or self.table[al][be].is_zero:
                    continue
                term = (xa * yb) * self.table[al][be]
                acc = term if acc is None else acc + term
        return self.E.zero() if acc is None else acc

    @property
    def is_zero(self) -> bool:
        return all(s.is_zero for r in self.table for s in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ETwoFormOnF):
            return NotImplemented
        return (self.F, self.E, self.table) == (other.F, other.E, other.table)

    def __hash__(self):
        return hash((self.F, self.E, self.table))

    def __repr__(self) -> str:
        return f"ETwoFormOnF({self.name}: {self.F.name} x {self.F.name} -> {self.E.name})"


class EOneFormOnF:
    """A C^inf-linear map F -> E (e.g. a change of splitting)."""

    def __init__(self, F: VectorBundle, E: VectorBundle, components=None, name: str = "lam"):
        self.F = F
        self.E = E
        self.name = name
        zero = E.zero()
        if components is None:
            self.table = (zero,) * F.rank
        elif isinstance(components, Mapping):
            t = [zero] * F.rank
            for al, comps in components.items():
                t[F.index(al)] = comps if isinstance(comps, Section) else E.section(comps)
            self.table = tuple(t)
        else:
            if len(components) != F.rank:
                raise ShapeError(f"{name} needs {F.rank} entries")
            self.table = tuple(c if isinstance(c, Section) else E.section(c) for c in components)

    def __call__(self, X: Section) -> Section:
        if X.bundle != self.F:
            raise ShapeError(f"{self.name} takes sections of {self.F.name}")
        acc = None
        for al, xa in enumerate(X.components):
            if xa.is_zero or self.table[al].is_zero:
                continue
            term = xa * self.table[al]
            acc = term if acc is None else acc + term
        return self.E.zero() if acc is None else acc

    @property
    def is_zero(self) -> bool:
        return all(s.is_zero for s in self.table)


class BasicConnectionPair:
    """The E-connections on E and on F induced by ``(nabla, K)``.

    ``on_E`` and ``on_F`` are :class:`FConnection` objects whose
    differentiating algebroid is E itself.
    """

    def __init__(self, nabla: FConnection, K: BundleMorphism, E_alg: LieAlgebroid,
                 on_E: FConnection, on_F: FConnection):
        self.nabla = nabla
        self.K = K
        self.E_alg = E_alg
        self.F_alg = nabla.F
        self.on_E = on_E
        self.on_F = on_F

    def __repr__(self) -> str:
        return f"BasicConnectionPair(from {self.nabla.name}, {self.K.name})"


def basic_connection(nabla: FConnection, K: BundleMorphism, E_alg: LieAlgebroid) -> BasicConnectionPair:
    """Build both basic connections on frames and verify K-intertwining.

    ``bas_mu nu = [mu, nu]_E + nabla_{K nu} mu`` and
    ``bas_mu X = [K mu, X]_F + K(nabla_X mu)``.
    """
    F_alg = nabla.F
    if nabla.E != E_alg.bundle:
        raise ShapeError(f"{nabla.name} is not a connection on {E_alg.name}")
    mrep = verify_morphism(K, E_alg, F_alg)
    if not mrep.passed:
        raise PreconditionError(f"{K.name} is not a Lie algebroid morphism", mrep)
    on_E = FConnection.tabulate(
        E_alg, E_alg.bundle, lambda mu, nu: E_alg.bracket(mu, nu) + nabla(K(nu), mu), "bas_E")
    on_F = FConnection.tabulate(
        E_alg, F_alg.bundle, lambda mu, X: F_alg.bracket(K(mu), X) + K(nabla(X, mu)), "bas_F")
    es = E_alg.bundle.frame_sections()
    fr = E_alg.bundle.frame
    rep = Report("basic connection")
    rep.add(residual_check(
        "K_intertwining",
        ((f"({fr[a]}, {fr[b]})", K(on_E(es[a], es[b])) - on_F(es[a], K(es[b])))
         for a in range(len(es)) for b in range(len(es))),
    ))
    if not rep.passed:
        raise PreconditionError("basic connection fails K-intertwining", rep)
    return BasicConnectionPair(nabla, K, E_alg, on_E, on_F)


def basic_curvature(pair: BasicConnectionPair, mu: Section, nu: Section, X: Section) -> Section:
    """The five-term basic curvature R^bas(mu, nu)(X)."""
    nabla, br, bF = pair.nabla, pair.E_alg.bracket, pair.on_F
    return (nabla(X, br(mu, nu))
            - br(nabla(X, mu), nu)
            - br(mu, nabla(X, nu))
            - nabla(bF(nu, X), mu)
            + nabla(bF(mu, X), nu))


def torsion(pair: BasicConnectionPair, mu: Section, nu: Section, connection: str = "basic") -> Section:
    """Torsion of the basic E-connection on E, or of ``nabla_K`` (``connection="K"``)."""
    br = pair.E_alg.bracket
    if connection == "basic":
        b = pair.on_E
        return b(mu, nu) - b(nu, mu) - br(mu, nu)
    if connection == "K":
        n, K = pair.nabla, pair.K
        return n(K(mu), nu) - n(K(nu), mu) - br(mu, nu)
    raise ValueError(f"unknown connection {connection!r}; use 'basic' or 'K'")


def covariant_derivative_of_form(nabla: FConnection, form: Callable[[Section, Section], Section],
                                 X: Section, mu: Section, nu: Section) -> Section:
    """(nabla_X t)(mu, nu) = nabla_X(t(mu, nu)) - t(nabla_X mu, nu) - t(mu, nabla_X nu)."""
    return nabla(X, form(mu, nu)) - form(nabla(X, mu), nu) - form(mu, nabla(X, nu))


def dbas_zeta(pair: BasicConnectionPair, zeta: ETwoFormOnF, X: Section, Y: Section, nu: Section) -> Section:
    """bas_nu(zeta(X, Y)) - zeta(bas_nu X, Y) - zeta(X, bas_nu Y).

    A covariant adjustment is exactly ``R_nabla(X, Y) nu + dbas_zeta(X, Y, nu) = 0``.
    """
    bE, bF = pair.on_E, pair.on_F
    return bE(nu, zeta(X, Y)) - zeta(bF(nu, X), Y) - zeta(X, bF(nu, Y))


def exterior_derivative_2form(nabla: FConnection, zeta: ETwoFormOnF,
                              X: Section, Y: Section, Z: Section) -> Section:
    """Covariant exterior derivative of an E-valued 2-form on F, evaluated on (X, Y, Z)."""
    br = nabla.F.bracket
    return (nabla(X, zeta(Y, Z)) - nabla(Y, zeta(X, Z)) + nabla(Z, zeta(X, Y))
            - zeta(br(X, Y), Z) + zeta(br(X, Z), Y) - zeta(br(Y, Z), X))


def dzeta_zeta(nabla_z: FConnection, zeta: ETwoFormOnF, X: Section, Y: Section, Z: Section) -> Section:
    """d^{nabla_z} zeta (X, Y, Z); identically zero when rank F < 3."""
    if nabla_z.F.rank < 3:
        return nabla_z.E.zero()
    return exterior_derivative_2form(nabla_z, zeta, X, Y, Z)


def exterior_derivative_1form(nabla: FConnection, lam: EOneFormOnF, X: Section, Y: Section) -> Section:
    """d^nabla lam (X, Y) = nabla_X lam(Y) - nabla_Y lam(X) - lam([X, Y]_F)."""
    return nabla(X, lam(Y)) - nabla(Y, lam(X)) - lam(nabla.F.bracket(X, Y))

