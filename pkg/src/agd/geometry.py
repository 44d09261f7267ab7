"""Trivial vector bundles over a patch, their sections and morphisms.

Every bundle carries one global frame; sections are component tuples in
that frame. Vector fields are sections of the tangent bundle, whose frame
is named ``d_<coord>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .symexpr import CoordinatePatch, ExprError, ScalarExpr

__all__ = [
    "VectorBundle",
    "Section",
    "VectorField",
    "BundleMorphism",
    "apply_vf",
    "vf_bracket",
    "apply_morphism",
    "tangent_bundle",
]


class ShapeError(ExprError):
    """Components or matrices do not fit the bundles they are attached to."""


@dataclass(frozen=True)
class VectorBundle:
    patch: CoordinatePatch
    frame: tuple[str, ...]
    name: str = "E"

    def __post_init__(self):
        object.__setattr__(self, "frame", tuple(self.frame))
        if len(set(self.frame)) != len(self.frame):
            raise ShapeError(f"frame names of {self.name} must be distinct")

    @property
    def rank(self) -> int:
        return len(self.frame)

    def index(self, key: Union[int, str]) -> int:
        if isinstance(key, str):
            try:
                return self.frame.index(key)
            except ValueError:
                raise ShapeError(f"{key!r} is not a frame element of {self.name}") from None
        if not 0 <= key < self.rank:
            raise IndexError(f"frame index {key} out of range for rank {self.rank}")
        return key

    def zero(self) -> "Section":
        return Section(self, (self.patch.zero(),) * self.rank)

    def basis(self, key: Union[int, str]) -> "Section":
        i = self.index(key)
        z, o = self.patch.zero(), self.patch.one()
        return Section(self, tuple(o if j == i else z for j in range(self.rank)))

    def frame_sections(self) -> tuple["Section", ...]:
        return tuple(self.basis(i) for i in range(self.rank))

    def section(self, components: Iterable) -> "Section":
        return Section(self, tuple(_as_expr(self.patch, c) for c in components))

    def lift(self, patch: CoordinatePatch) -> "VectorBundle":
        """The pulled-back bundle along a coordinate projection."""
        return VectorBundle(patch, self.frame, self.name)

    @property
    def is_tangent(self) -> bool:
        return self.name == "T" and self.frame == _tangent_frame(self.patch)


def _tangent_frame(patch: CoordinatePatch) -> tuple[str, ...]:
    return tuple("d_" + n for n in patch.names)


def tangent_bundle(patch: CoordinatePatch) -> VectorBundle:
    return VectorBundle(patch, _tangent_frame(patch), "T")


def _as_expr(patch: CoordinatePatch, c) -> ScalarExpr:
    if isinstance(c, ScalarExpr):
        if c.patch != patch:
            raise ExprError(f"patch mismatch: {c.patch} vs {patch}")
        return c
    if isinstance(c, str):
        return patch.parse(c)
    return patch.const(c)


class Section:
    """A section of a :class:`VectorBundle`, given by frame components."""

    __slots__ = ("bundle", "components")

    def __init__(self, bundle: VectorBundle, components: Sequence[ScalarExpr]):
        components = tuple(components)
        if len(components) != bundle.rank:
            raise ShapeError(
                f"section of {bundle.name} needs {bundle.rank} components, got {len(components)}"
            )
        self.bundle = bundle
        self.components = components

    @property
    def patch(self) -> CoordinatePatch:
        return self.bundle.patch

    def _check(self, other: "Section") -> None:
        if other.bundle != self.bundle:
            raise ShapeError(f"bundle mismatch: {self.bundle.name} vs {other.bundle.name}")

    def __add__(self, other: "Section") -> "Section":
        self._check(other)
        return type(self)._make(self.bundle, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "Section") -> "Section":
        self._check(other)
        return type(self)._make(self.bundle, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "Section":
        return type(self)._make(self.bundle, tuple(-a for a in self.components))

    def __rmul__(self, f) -> "Section":
        if not isinstance(f, ScalarExpr):
            f = self.patch.const(f)
        if f.is_zero:
            return type(self)._make(self.bundle, (f,) * self.bundle.rank)
        return type(self)._make(self.bundle, tuple(f * a if not a.is_zero else a for a in self.components))

    __mul__ = __rmul__

    @classmethod
    def _make(cls, bundle, components):
        obj = cls.__new__(cls)
        obj.bundle = bundle
        obj.components = components
        return obj

    def __getitem__(self, key: Union[int, str]) -> ScalarExpr:
        return self.components[self.bundle.index(key)]

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Section):
            return NotImplemented
        return self.bundle == other.bundle and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.bundle, self.components))

    def lift(self, bundle: VectorBundle) -> "Section":
        return Section(bundle, tuple(c.lift(bundle.patch) for c in self.components))

    def __str__(self) -> str:
        terms = []
        for name, c in zip(self.bundle.frame, self.components):
            if c.is_zero:
                continue
            s = str(c)
            if s == "1":
                t = name
            elif s == "-1":
                t = "-" + name
            elif c.is_atomic or (c.is_polynomial and len(c.num) == 1 and s.startswith("-")):
                t = f"{s}*{name}"
            else:
                t = f"({s})*{name}"
            terms.append(t)
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.bundle.name}: {self})"


class VectorField(Section):
    """A section of the tangent bundle; components multiply ``d/dx^i``."""

    __slots__ = ()

    def __init__(self, patch: CoordinatePatch, components: Sequence):
        comps = tuple(_as_expr(patch, c) for c in components)
        super().__init__(tangent_bundle(patch), comps)

    @classmethod
    def coordinate(cls, patch: CoordinatePatch, coord: Union[int, str]) -> "VectorField":
        i = patch.index(coord)
        return cls(patch, [1 if j == i else 0 for j in range(patch.dimension)])

    def __call__(self, f: ScalarExpr) -> ScalarExpr:
        return apply_vf(self, f)


def apply_vf(X: Section, f: ScalarExpr) -> ScalarExpr:
    """Lie derivative of a function along a vector field: sum_i X^i df/dx^i."""
    if X.patch != f.patch:
        raise ExprError(f"patch mismatch: {X.patch} vs {f.patch}")
    total = f.patch.zero()
    if f.is_constant:
        return total
    for i, c in enumerate(X.components):
        if not c.is_zero:
            d = f.diff(i)
            if not d.is_zero:
                total = total + c * d
    return total


def vf_bracket(X: Section, Y: Section) -> VectorField:
    """Commutator: [X, Y]^i = X(Y^i) - Y(X^i)."""
    if X.patch != Y.patch:
        raise ExprError(f"patch mismatch: {X.patch} vs {Y.patch}")
    comps = [apply_vf(X, b) - apply_vf(Y, a) for a, b in zip(X.components, Y.components)]
    return VectorField(X.patch, comps)


class BundleMorphism:
    """Fibrewise linear map; ``matrix[target_index][source_index]``."""

    __slots__ = ("source", "target", "matrix", "name")

    def __init__(self, source: VectorBundle, target: VectorBundle,
                 matrix: Sequence[Sequence], name: str = "K"):
        if source.patch != target.patch:
            raise ShapeError("morphism between bundles over different patches")
        rows = tuple(tuple(_as_expr(source.patch, c) for c in row) for row in matrix)
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ShapeError(
                f"morphism {name} must be a {target.rank}x{source.rank} matrix"
            )
        self.source = source
        self.target = target
        self.matrix = rows
        self.name = name

    @classmethod
    def from_images(cls, source: VectorBundle, target: VectorBundle,
                    images: Sequence[Sequence], name: str = "K") -> "BundleMorphism":
        """Build from the images of the source frame (one column each)."""
        if len(images) != source.rank:
            raise ShapeError(f"need {source.rank} images, got {len(images)}")
        cols = [list(target.section(img).components) for img in images]
        matrix = [[cols[a][al] for a in range(source.rank)] for al in range(target.rank)]
        return cls(source, target, matrix, name)

    @classmethod
    def zero(cls, source: VectorBundle, target: VectorBundle, name: str = "0") -> "BundleMorphism":
        z = source.patch.zero()
        return cls(source, target, [[z] * source.rank for _ in range(target.rank)], name)

    @classmethod
    def identity(cls, bundle: VectorBundle, name: str = "id") -> "BundleMorphism":
        z, o = bundle.patch.zero(), bundle.patch.one()
        return cls(bundle, bundle,
                   [[o if i == j else z for j in range(bundle.rank)] for i in range(bundle.rank)], name)

    def image(self, a: int) -> Section:
        return Section(self.target, tuple(row[a] for row in self.matrix))

    def __call__(self, mu: Section) -> Section:
        return apply_morphism(self, mu)

    def compose(self, other: "BundleMorphism") -> "BundleMorphism":
        """``self o other``."""
        if other.target != self.source:
            raise ShapeError(f"cannot compose {self.name} after {other.name}")
        z = self.source.patch.zero()
        m = []
        for row in self.matrix:
            new_row = []
            for b in range(other.source.rank):
                acc = z
                for a, k in enumerate(row):
                    o = other.matrix[a][b]
                    if not k.is_zero and not o.is_zero:
                        acc = acc + k * o
                new_row.append(acc)
            m.append(new_row)
        return BundleMorphism(other.source, self.target, m, f"{self.name}*{other.name}")

    def __add__(self, other: "BundleMorphism") -> "BundleMorphism":
        if (other.source, other.target) != (self.source, self.target):
            raise ShapeError("cannot add morphisms with different bundles")
        m = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)]
        return BundleMorphism(self.source, self.target, m, f"{self.name}+{other.name}")

    def __sub__(self, other: "BundleMorphism") -> "BundleMorphism":
        if (other.source, other.target) != (self.source, self.target):
            raise ShapeError("cannot subtract morphisms with different bundles")
        m = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)]
        return BundleMorphism(self.source, self.target, m, f"{self.name}-{other.name}")

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for row in self.matrix for c in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BundleMorphism):
            return NotImplemented
        return (self.source, self.target, self.matrix) == (other.source, other.target, other.matrix)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def __repr__(self) -> str:
        return f"BundleMorphism({self.name}: {self.source.name} -> {self.target.name})"


def apply_morphism(K: BundleMorphism, mu: Section) -> Section:
    """(K mu)^alpha = K^alpha_a mu^a."""
    if mu.bundle != K.source:
        raise ShapeError(f"{K.name} acts on {K.source.name}, not on {mu.bundle.name}")
    z = mu.patch.zero()
    out = []
    for row in K.matrix:
        acc = z
        for k, m in zip(row, mu.components):
            if not k.is_zero and not m.is_zero:
                acc = acc + k * m
        out.append(acc)
    if K.target.is_tangent:
        return VectorField(K.target.patch, out)
    return Section(K.target, tuple(out))
