import random

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from agd.algebroid import (AlgebroidError, FibrewiseBracket, LieAlgebroid, action_algebroid, extend_bracket,
                           jacobiator, tangent_algebroid, verify_algebroid, verify_fibrewise_bracket,
                           verify_morphism)
from agd.fixtures import SO3_CONSTANTS, so3_fields
from agd.geometry import BundleMorphism, ShapeError, VectorBundle, VectorField
from agd.randomgen import random_poly, random_section
from agd.symexpr import CoordinatePatch

P = CoordinatePatch(("x1", "x2", "x3"))
seeds = st.integers(min_value=0, max_value=2**32)


@pytest.fixture(scope="module")
def E():
    return action_algebroid(SO3_CONSTANTS, so3_fields(P))


def test_bracket_on_frames_is_structure_functions(E):
    for a, ea in enumerate(E.bundle.frame_sections()):
        for b, eb in enumerate(E.bundle.frame_sections()):
            assert extend_bracket(E, ea, eb) == E.table[a][b]
    assert E.structure("e1", "e2") == E.bundle.basis("e3")


def test_leibniz_example(E):
    # rho(e3) = x2 d1 - x1 d2 with the fields used here, so rho(e3)(x1) = x2
    got = extend_bracket(E, E.bundle.basis("e3"), E.bundle.section([0, "x1", 0]))
    assert got == E.bundle.section(["-x1", "x2", 0])
    Eo = oracle.alg(E)
    assert oracle.vsub(oracle.vec(got), Eo.bracket(oracle.basis(3, 2), [0, oracle.syms(P)[0], 0])) == [0, 0, 0]


def test_pure_leibniz_term():
    R = CoordinatePatch(("x1",))
    A = LieAlgebroid(VectorBundle(R, ("e",)), [[1]])
    assert extend_bracket(A, A.bundle.basis(0), A.bundle.section(["x1"])) == A.bundle.basis(0)


def test_tangent_algebroid():
    T1 = tangent_algebroid(CoordinatePatch(("t",)))
    assert T1.rank == 1 and T1.anchor[0].components == (T1.patch.one(),)
    T = tangent_algebroid(P)
    assert verify_algebroid(T).passed
    assert T.bracket(T.bundle.basis(0), T.bundle.section([0, "x1", 0])) == T.bundle.basis(1)


def test_so3_action_algebroid_passes(E):
    rep = verify_algebroid(E)
    assert rep.passed and [c.name for c in rep] == ["antisymmetry", "anchor_compatibility", "jacobi"]
    assert oracle.is_algebroid(oracle.alg(E))


def test_mutated_bracket_fails_anchor_compatibility(E):
    mutated = dict(SO3_CONSTANTS)
    mutated[(0, 1)] = [1, 0, 0]
    A = LieAlgebroid(E.bundle, E.anchor, mutated)
    rep = verify_algebroid(A)
    assert rep["antisymmetry"].passed and rep["anchor_compatibility"].failed
    res = {r.at: r.value for r in rep["anchor_compatibility"].residuals}
    assert res == {"(e1, e2)": A.anchor[2] - A.anchor[0]}
    assert not oracle.is_algebroid(oracle.alg(A))


def test_action_algebroid_constructors():
    R = CoordinatePatch(("x1",))
    A = action_algebroid({}, [VectorField(R, [1])])
    assert A.rank == 1 and verify_algebroid(A).passed
    trivial = action_algebroid(SO3_CONSTANTS, [VectorField(P, [0, 0, 0])] * 3)
    assert trivial.has_zero_anchor and verify_algebroid(trivial).passed
    with pytest.raises(AlgebroidError) as e:
        action_algebroid({(0, 1): [1, 0, 0], (1, 2): [0, 1, 0]}, [VectorField(P, [0, 0, 0])] * 3)
    assert e.value.report["jacobi"].failed
    with pytest.raises(AlgebroidError) as e:
        action_algebroid(SO3_CONSTANTS, [VectorField(P, [0, "-x3", "x2"]), VectorField(P, ["x3", 0, "-x1"]),
                                         VectorField(P, ["-x2", "x1", 0])])
    assert e.value.report["action_identity"].failed
    with pytest.raises(AlgebroidError):
        action_algebroid({(0, 1): ["x1", 0, 0]}, so3_fields(P))


def test_verify_morphism_examples(E):
    T = tangent_algebroid(P)
    assert verify_morphism(E.anchor_morphism(), E, T).passed
    bla = LieAlgebroid.bla(FibrewiseBracket(E.bundle, SO3_CONSTANTS))
    assert verify_morphism(BundleMorphism.zero(bla.bundle, T.bundle), bla, T).passed
    flat = LieAlgebroid(E.bundle, E.anchor, None)
    rep = verify_morphism(BundleMorphism.identity(E.bundle), E, flat)
    assert rep["anchor"].passed and rep["bracket"].failed
    flipped = BundleMorphism(E.bundle, T.bundle, [[-c for c in row] for row in E.anchor_morphism().matrix])
    rep = verify_morphism(flipped, E, T)
    assert rep["anchor"].failed and rep["bracket"].failed
    with pytest.raises(ShapeError):
        verify_morphism(BundleMorphism.identity(T.bundle), E, T)


def test_fibrewise_brackets():
    B = VectorBundle(P, ("e1", "e2", "e3"))
    assert verify_fibrewise_bracket(FibrewiseBracket(B)).passed
    assert verify_fibrewise_bracket(FibrewiseBracket(B, SO3_CONSTANTS)).passed
    heis = FibrewiseBracket(B, {(0, 1): [0, 0, "x1"]})
    assert verify_fibrewise_bracket(heis).passed
    bad = FibrewiseBracket(B, {(0, 1): [0, 0, "x1"], (0, 2): [1, 0, 0]})
    rep = verify_fibrewise_bracket(bad)
    assert rep["antisymmetry"].passed and rep["jacobi"].failed
    (r,) = rep["jacobi"].residuals
    assert r.value == B.section([0, 0, "-x1"])


def test_bla_constructor_requires_zero_anchor(E):
    bla = LieAlgebroid.bla(FibrewiseBracket(E.bundle, SO3_CONSTANTS))
    assert bla.has_zero_anchor and not E.has_zero_anchor
    assert bla.fibrewise() == FibrewiseBracket(E.bundle, SO3_CONSTANTS)


def test_shape_errors(E):
    with pytest.raises(ShapeError):
        LieAlgebroid(E.bundle, [[0, 0, 0]])
    with pytest.raises(ShapeError):
        LieAlgebroid(E.bundle, [[0, 0]] * 3)
    with pytest.raises(ShapeError):
        extend_bracket(E, tangent_algebroid(P).bundle.basis(0), E.bundle.basis(0))


@given(seeds)
def test_leibniz_randomized(E, seed):
    rng = random.Random(seed)
    mu, nu, f = random_section(E.bundle, rng), random_section(E.bundle, rng), random_poly(P, rng)
    lhs = E.bracket(mu, f * nu)
    assert lhs - f * E.bracket(mu, nu) - E.rho(mu)(f) * nu == E.bundle.zero()


@given(seeds)
@settings(max_examples=25)
def test_jacobi_on_non_frame_sections(E, seed):
    rng = random.Random(seed)
    x, y, z = (random_section(E.bundle, rng, degree=1) for _ in range(3))
    assert jacobiator(E, x, y, z).is_zero


@given(seeds)
@settings(max_examples=10)
def test_bracket_matches_oracle(E, seed):
    rng = random.Random(seed)
    mu, nu = random_section(E.bundle, rng), random_section(E.bundle, rng)
    want = oracle.alg(E).bracket(oracle.vec(mu), oracle.vec(nu))
    assert oracle.vzero(oracle.vsub(oracle.vec(E.bracket(mu, nu)), want))
