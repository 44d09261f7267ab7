"""Lie algebroids given by an anchor matrix and structure functions.

The bracket on frame sections is ``[e_a, e_b] = c^c_{ab} e_c``; on arbitrary
sections it is extended by the Leibniz rule along the anchor::

    [mu, nu]^c = mu^a nu^b c^c_{ab} + rho(mu)(nu^c) - rho(nu)(mu^c)

Axioms are certified on frames (antisymmetry, anchor compatibility, Jacobi);
together with the Leibniz rule this covers all sections.
"""

from __future__ import annotations

from itertools import combinations
from typing import Mapping, Sequence, Union

from .geometry import (
    BundleMorphism,
    Section,
    ShapeError,
    VectorBundle,
    VectorField,
    apply_vf,
    tangent_bundle,
    vf_bracket,
)
from .report import Report, VerificationError, residual_check
from .symexpr import CoordinatePatch

__all__ = [
    "LieAlgebroid",
    "FibrewiseBracket",
    "AlgebroidError",
    "extend_bracket",
    "jacobiator",
    "verify_algebroid",
    "tangent_algebroid",
    "action_algebroid",
    "verify_morphism",
    "verify_fibrewise_bracket",
]


class AlgebroidError(VerificationError):
    """Construction refused; ``report`` holds the failing residuals."""


BracketSpec = Union[Sequence[Sequence[Sequence]], Mapping[tuple, Sequence]]


def _bracket_table(bundle: VectorBundle, spec: BracketSpec | None) -> tuple[tuple[Section, ...], ...]:
    r = bundle.rank
    zero = bundle.zero()
    if spec is None:
        return tuple(tuple(zero for _ in range(r)) for _ in range(r))
    if isinstance(spec, Mapping):
        table = [[zero] * r for _ in range(r)]
        for (a, b), comps in spec.items():
            a, b = bundle.index(a), bundle.index(b)
            s = comps if isinstance(comps, Section) else bundle.section(comps)
            table[a][b] = s
            table[b][a] = -s
        return tuple(tuple(row) for row in table)
    if len(spec) != r or any(len(row) != r for row in spec):
        raise ShapeError(f"bracket table of {bundle.name} must be {r}x{r}")
    return tuple(
        tuple(c if isinstance(c, Section) else bundle.section(c) for c in row) for row in spec
    )


class _FrameBracket:
    """Shared storage for structure-function tables."""

    bundle: VectorBundle
    table: tuple[tuple[Section, ...], ...]

    def structure(self, a: Union[int, str], b: Union[int, str]) -> Section:
        return self.table[self.bundle.index(a)][self.bundle.index(b)]

    def _bilinear(self, mu: Section, nu: Section) -> Section:
        acc = None
        for a, ma in enumerate(mu.components):
            if ma.is_zero:
                continue
            for b, nb in enumerate(nu.components):
                if nb.is_zero:
                    continue
                t = self.table[a][b]
                if t.is_zero:
                    continue
                term = (ma * nb) * t
                acc = term if acc is None else acc + term
        return self.bundle.zero() if acc is None else acc


class FibrewiseBracket(_FrameBracket):
    """A C^inf-bilinear field of brackets H on a bundle (a BLA candidate)."""

    def __init__(self, bundle: VectorBundle, brackets: BracketSpec | None = None, name: str = "H"):
        self.bundle = bundle
        self.table = _bracket_table(bundle, brackets)
        self.name = name

    def __call__(self, mu: Section, nu: Section) -> Section:
        if mu.bundle != self.bundle or nu.bundle != self.bundle:
            raise ShapeError(f"{self.name} acts on sections of {self.bundle.name}")
        return self._bilinear(mu, nu)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FibrewiseBracket):
            return NotImplemented
        return self.bundle == other.bundle and self.table == other.table

    def __hash__(self):
        return hash((self.bundle, self.table))

    def __repr__(self) -> str:
        return f"FibrewiseBracket({self.name} on {self.bundle.name})"


class LieAlgebroid(_FrameBracket):
    """Anchor rows ``rho(e_a)`` plus structure functions over one patch."""

    def __init__(self, bundle: VectorBundle, anchor: Sequence | None = None,
                 brackets: BracketSpec | None = None, name: str | None = None):
        patch = bundle.patch
        self.bundle = bundle
        self.name = name or bundle.name
        if anchor is None:
            anchor = [[0] * patch.dimension for _ in range(bundle.rank)]
        if len(anchor) != bundle.rank:
            raise ShapeError(f"anchor of {self.name} needs {bundle.rank} rows")
        rows = []
        for row in anchor:
            if isinstance(row, Section):
                row = row.components
            if len(row) != patch.dimension:
                raise ShapeError(f"anchor rows of {self.name} need {patch.dimension} entries")
            rows.append(VectorField(patch, row))
        self.anchor = tuple(rows)
        self.table = _bracket_table(bundle, brackets)

    @classmethod
    def bla(cls, H: FibrewiseBracket, name: str | None = None) -> "LieAlgebroid":
        """The bundle of Lie algebras with bracket ``H`` and zero anchor."""
        return cls(H.bundle, None, H.table, name or H.bundle.name)

    @property
    def patch(self) -> CoordinatePatch:
        return self.bundle.patch

    @property
    def rank(self) -> int:
        return self.bundle.rank

    def rho(self, mu: Section) -> VectorField:
        """Anchor applied to a section."""
        if mu.bundle != self.bundle:
            raise ShapeError(f"anchor of {self.name} applied to a section of {mu.bundle.name}")
        comps = [self.patch.zero()] * self.patch.dimension
        for m, row in zip(mu.components, self.anchor):
            if m.is_zero:
                continue
            comps = [c + m * r if not r.is_zero else c for c, r in zip(comps, row.components)]
        return VectorField(self.patch, comps)

    def anchor_morphism(self) -> BundleMorphism:
        """The anchor as a bundle map into the tangent bundle."""
        T = tangent_bundle(self.patch)
        return BundleMorphism.from_images(self.bundle, T, [r.components for r in self.anchor], f"rho_{self.name}")

    @property
    def has_zero_anchor(self) -> bool:
        return all(r.is_zero for r in self.anchor)

    def bracket(self, mu: Section, nu: Section) -> Section:
        return extend_bracket(self, mu, nu)

    def fibrewise(self) -> FibrewiseBracket:
        return FibrewiseBracket(self.bundle, self.table, f"[,]_{self.name}")

    def same_structure(self, other: "LieAlgebroid") -> bool:
        return (self.bundle.patch == other.bundle.patch
                and self.rank == other.rank
                and all(a.components == b.components for a, b in zip(self.anchor, other.anchor))
                and all(x.components == y.components
                        for r1, r2 in zip(self.table, other.table) for x, y in zip(r1, r2)))

    def __repr__(self) -> str:
        return f"LieAlgebroid({self.name}, rank {self.rank} over {self.patch})"


def extend_bracket(A: LieAlgebroid, mu: Section, nu: Section) -> Section:
    """Bracket of arbitrary sections via the Leibniz extension."""
    if mu.bundle != A.bundle or nu.bundle != A.bundle:
        raise ShapeError(f"bracket of {A.name} applied to foreign sections")
    out = A._bilinear(mu, nu)
    if not all(c.is_constant for c in nu.components):
        rmu = A.rho(mu)
        out = out + Section(A.bundle, tuple(apply_vf(rmu, c) for c in nu.components))
    if not all(c.is_constant for c in mu.components):
        rnu = A.rho(nu)
        out = out - Section(A.bundle, tuple(apply_vf(rnu, c) for c in mu.components))
    return out


def jacobiator(A: LieAlgebroid, x: Section, y: Section, z: Section) -> Section:
    br = A.bracket
    return br(br(x, y), z) + br(br(y, z), x) + br(br(z, x), y)


def verify_algebroid(A: LieAlgebroid) -> Report:
    """Antisymmetry, anchor compatibility and Jacobi on all frame tuples."""
    rep = Report(f"algebroid {A.name}")
    fr = A.bundle.frame
    e = A.bundle.frame_sections()
    r = A.rank
    rep.add(residual_check(
        "antisymmetry",
        ((f"({fr[a]}, {fr[b]})", A.table[a][b] + A.table[b][a])
         for a in range(r) for b in range(a, r)),
    ))
    rep.add(residual_check(
        "anchor_compatibility",
        ((f"({fr[a]}, {fr[b]})", vf_bracket(A.anchor[a], A.anchor[b]) - A.rho(A.table[a][b]))
         for a, b in combinations(range(r), 2)),
    ))
    rep.add(residual_check(
        "jacobi",
        ((f"({fr[a]}, {fr[b]}, {fr[c]})", jacobiator(A, e[a], e[b], e[c]))
         for a, b, c in combinations(range(r), 3)),
    ))
    return rep


def tangent_algebroid(patch: CoordinatePatch) -> LieAlgebroid:
    T = tangent_bundle(patch)
    n = patch.dimension
    anchor = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return LieAlgebroid(T, anchor, None, "T")


def _constant_bracket_report(bundle: VectorBundle, table) -> Report:
    H = FibrewiseBracket(bundle, table, "c")
    return verify_fibrewise_bracket(H)


def action_algebroid(constants: BracketSpec, fields: Sequence[Section],
                     frame: Sequence[str] | None = None, name: str = "E") -> LieAlgebroid:
    """Action algebroid ``M x g`` for a Lie algebra acting by ``fields``.

    ``constants`` gives ``[e_a, e_b]`` as component lists (nested table or a
    mapping on pairs). The constants must be antisymmetric and satisfy Jacobi,
    and the fields must satisfy ``[rho_a, rho_b] = c^c_{ab} rho_c``.
    """
    if not fields:
        raise ShapeError("an action algebroid needs at least one action field")
    patch = fields[0].patch
    frame = tuple(frame) if frame is not None else tuple(f"e{i + 1}" for i in range(len(fields)))
    bundle = VectorBundle(patch, frame, name)
    table = _bracket_table(bundle, constants)
    for row in table:
        for s in row:
            if not all(c.is_constant for c in s.components):
                raise AlgebroidError("structure constants must be constant")
    rep = _constant_bracket_report(bundle, table)
    if not rep.passed:
        raise AlgebroidError("structure constants do not define a Lie algebra", rep)
    A = LieAlgebroid(bundle, [f.components for f in fields], table, name)
    action = Report("action identity")
    action.add(residual_check(
        "action_identity",
        ((f"({frame[a]}, {frame[b]})", vf_bracket(A.anchor[a], A.anchor[b]) - A.rho(A.table[a][b]))
         for a, b in combinations(range(bundle.rank), 2)),
    ))
    if not action.passed:
        raise AlgebroidError("fields do not represent the Lie algebra action", action)
    return A


def verify_morphism(K: BundleMorphism, E: LieAlgebroid, F: LieAlgebroid) -> Report:
    """rho_F o K = rho_E and K[e_a, e_b]_E = [K e_a, K e_b]_F on frames."""
    if K.source != E.bundle or K.target != F.bundle:
        raise ShapeError(f"{K.name} is not a map {E.name} -> {F.name}")
    rep = Report(f"morphism {K.name}: {E.name} -> {F.name}")
    fr = E.bundle.frame
    imgs = [K(e) for e in E.bundle.frame_sections()]
    rep.add(residual_check(
        "anchor",
        ((fr[a], F.rho(imgs[a]) - E.anchor[a]) for a in range(E.rank)),
    ))
    rep.add(residual_check(
        "bracket",
        ((f"({fr[a]}, {fr[b]})", K(E.table[a][b]) - F.bracket(imgs[a], imgs[b]))
         for a, b in combinations(range(E.rank), 2)),
    ))
    return rep


def verify_fibrewise_bracket(H: FibrewiseBracket) -> Report:
    """Antisymmetry and pointwise Jacobi of a field of brackets."""
    rep = Report(f"fibrewise bracket {H.name}")
    fr = H.bundle.frame
    e = H.bundle.frame_sections()
    r = H.bundle.rank
    rep.add(residual_check(
        "antisymmetry",
        ((f"({fr[a]}, {fr[b]})", H.table[a][b] + H.table[b][a])
         for a in range(r) for b in range(a, r)),
    ))
    rep.add(residual_check(
        "jacobi",
        ((f"({fr[a]}, {fr[b]}, {fr[c]})",
          H(H(e[a], e[b]), e[c]) + H(H(e[b], e[c]), e[a]) + H(H(e[c], e[a]), e[b]))
         for a, b, c in combinations(range(r), 3)),
    ))
    return rep
