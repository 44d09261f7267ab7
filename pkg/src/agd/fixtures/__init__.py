"""Reference models used by the tests, the demos and the CLI.

Each builder returns an unclassified :class:`~agd.adjustment.AdjustmentData`;
run :func:`~agd.adjustment.classify` on it. The same models ship as DSL
files next to this module (see :func:`fixture_path`).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..adjustment import AdjustmentData
from ..algebroid import FibrewiseBracket, LieAlgebroid, action_algebroid, tangent_algebroid
from ..connection import ETwoFormOnF, FConnection
from ..geometry import BundleMorphism, VectorBundle, VectorField
from ..symexpr import CoordinatePatch

__all__ = [
    "SO3_CONSTANTS",
    "so3_fields",
    "so3_action",
    "mackenzie",
    "abelian_primitive",
    "line_bundle",
    "fixture_path",
]

# [e1, e2] = e3 and cyclic
SO3_CONSTANTS = {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (2, 0): [0, 1, 0]}


def so3_fields(patch: CoordinatePatch) -> list[VectorField]:
    """Rotation fields on the first three coordinates representing so(3).

    With ``[X, Y]^i = X(Y^i) - Y(X^i)`` these satisfy ``[r1, r2] = r3``
    cyclically, so they realise the constants above as an action.
    """
    pad = [0] * (patch.dimension - 3)
    x1, x2, x3 = patch.names[:3]
    return [
        VectorField(patch, [0, x3, "-" + x2] + pad),
        VectorField(patch, ["-" + x3, 0, x1] + pad),
        VectorField(patch, [x2, "-" + x1, 0] + pad),
    ]


def so3_action(zeta=None) -> AdjustmentData:
    """M = R^3, E = M x so(3) acting by rotations, F = TM, K = anchor, flat nabla."""
    P = CoordinatePatch(("x1", "x2", "x3"))
    E = action_algebroid(SO3_CONSTANTS, so3_fields(P))
    T = tangent_algebroid(P)
    nabla = FConnection.flat(T, E.bundle)
    z = ETwoFormOnF(T.bundle, E.bundle, zeta)
    return AdjustmentData(E, T, E.anchor_morphism(), nabla, z)


def mackenzie(gamma_sign: int = 1, zeta_coeff="1") -> AdjustmentData:
    """M = R^2, E = M x so(3) as a bundle of Lie algebras, F = TM, K = 0.

    ``nabla = d + ad(x1 dx2 e1)`` and ``zeta = dx1 ^ dx2 e1``, so that
    ``R_nabla = ad o zeta``.
    """
    P = CoordinatePatch(("x1", "x2"))
    T = tangent_algebroid(P)
    Eb = VectorBundle(P, ("e1", "e2", "e3"))
    E = LieAlgebroid.bla(FibrewiseBracket(Eb, SO3_CONSTANTS))
    g = "x1" if gamma_sign > 0 else "-x1"
    nabla = FConnection(T, Eb, {(1, 1): [0, 0, g], (1, 2): [0, "-x1", 0]})
    zeta = ETwoFormOnF(T.bundle, Eb, {(0, 1): [zeta_coeff, 0, 0]})
    return AdjustmentData(E, T, BundleMorphism.zero(Eb, T.bundle), nabla, zeta)


def abelian_primitive() -> AdjustmentData:
    """The aff(1) action on R^2 with the primitive chosen as ``t_K`` on the orbits.

    ``rho(e1) = d1 - x2 d2``, ``rho(e2) = d2``, ``[e1, e2] = e2``, K = anchor,
    flat nabla and ``zeta = -dx1 ^ dx2 e2``. The extracted bracket H vanishes.
    """
    P = CoordinatePatch(("x1", "x2"))
    E = action_algebroid({(0, 1): [0, 1]}, [VectorField(P, [1, "-x2"]), VectorField(P, [0, 1])])
    T = tangent_algebroid(P)
    zeta = ETwoFormOnF(T.bundle, E.bundle, {(0, 1): [0, -1]})
    return AdjustmentData(E, T, E.anchor_morphism(), FConnection.flat(T, E.bundle), zeta)


def line_bundle(coeff="1") -> AdjustmentData:
    """Abelian rank-1 bundle over R^3 with K = 0, flat nabla, ``zeta = c dx1 ^ dx2 e``.

    Covariant for every coefficient c; strict iff ``dc ^ dx1 ^ dx2 = 0``.
    """
    P = CoordinatePatch(("x1", "x2", "x3"))
    T = tangent_algebroid(P)
    Eb = VectorBundle(P, ("e",))
    E = LieAlgebroid(Eb, None, None, "E")
    zeta = ETwoFormOnF(T.bundle, Eb, {(0, 1): [coeff]})
    return AdjustmentData(E, T, BundleMorphism.zero(Eb, T.bundle), FConnection.flat(T, Eb), zeta)


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled ``.agd`` model, e.g. ``"so3_action.agd"``."""
    return Path(str(resources.files(__package__).joinpath(name)))
