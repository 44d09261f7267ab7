import random

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from agd.geometry import (BundleMorphism, Section, ShapeError, VectorBundle, VectorField, apply_morphism,
                          apply_vf, tangent_bundle, vf_bracket)
from agd.randomgen import random_field, random_poly, random_section
from agd.symexpr import CoordinatePatch, ExprError

P = CoordinatePatch(("x1", "x2", "x3"))
E = VectorBundle(P, ("e1", "e2", "e3"))
seeds = st.integers(min_value=0, max_value=2**32)


def vf(*comps):
    return VectorField(P, list(comps) + [0] * (3 - len(comps)))


class TestApplyVF:
    def test_examples(self):
        assert apply_vf(VectorField.coordinate(P, "x1"), P.parse("x1^2")) == P.parse("2*x1")
        assert apply_vf(vf("x2", "-x1"), P.parse("x1^2 + x2^2")).is_zero
        assert apply_vf(vf(), P.parse("x1*x2/x3")).is_zero

    def test_patch_mismatch(self):
        Q = CoordinatePatch(("y",))
        with pytest.raises(ExprError):
            apply_vf(vf(1), Q.coord("y"))

    @given(seeds)
    def test_leibniz(self, seed):
        rng = random.Random(seed)
        X, f, g = random_field(P, rng), random_poly(P, rng), random_poly(P, rng)
        assert apply_vf(X, f * g) == f * apply_vf(X, g) + g * apply_vf(X, f)


class TestBracket:
    def test_examples(self):
        d1, d2 = VectorField.coordinate(P, 0), VectorField.coordinate(P, 1)
        assert vf_bracket(d1, d2).is_zero
        assert vf_bracket(d1, vf("x1")) == d1

    def test_rotation_fields(self):
        # [x2 d3 - x3 d2, x3 d1 - x1 d3] expanded from the component formula
        X, Y = vf(0, "-x3", "x2"), vf("x3", 0, "-x1")
        assert vf_bracket(X, Y) == vf("x2", "-x1", 0)
        xs = oracle.syms(P)
        assert oracle.vsub(oracle.vec(vf_bracket(X, Y)), oracle.vf_bracket(oracle.vec(X), oracle.vec(Y), xs)) \
            == [0, 0, 0]

    @given(seeds)
    def test_antisymmetry_and_jacobi(self, seed):
        rng = random.Random(seed)
        X, Y, Z = (random_field(P, rng) for _ in range(3))
        assert (vf_bracket(X, Y) + vf_bracket(Y, X)).is_zero
        jac = vf_bracket(X, vf_bracket(Y, Z)) + vf_bracket(Y, vf_bracket(Z, X)) + vf_bracket(Z, vf_bracket(X, Y))
        assert jac.is_zero

    @given(seeds)
    @settings(max_examples=15)
    def test_matches_oracle(self, seed):
        rng = random.Random(seed)
        X, Y = random_field(P, rng), random_field(P, rng)
        want = oracle.vf_bracket(oracle.vec(X), oracle.vec(Y), oracle.syms(P))
        assert oracle.vzero(oracle.vsub(oracle.vec(vf_bracket(X, Y)), want))


class TestBundles:
    def test_frame_names_distinct(self):
        with pytest.raises(ShapeError):
            VectorBundle(P, ("e", "e"))

    def test_rank_zero_is_legal(self):
        Z = VectorBundle(P, ())
        assert Z.rank == 0 and Z.zero().is_zero and len(Z.zero()) == 0

    def test_section_shape(self):
        with pytest.raises(ShapeError):
            Section(E, [P.one()])
        with pytest.raises(ShapeError):
            E.section([1, 2]) + tangent_bundle(P).section([1, 2, 3])

    def test_tangent(self):
        T = tangent_bundle(P)
        assert T.frame == ("d_x1", "d_x2", "d_x3") and T.is_tangent
        assert not VectorBundle(P, T.frame, "F").is_tangent

    def test_section_arithmetic_and_printing(self):
        s = E.section(["x1", 0, -1])
        assert str(P.parse("x2") * s) == "x1*x2*e1 - x2*e3"
        assert s["e1"] == P.coord(0) and s[2] == P.const(-1)
        assert (s - s).is_zero and -(-s) == s

    def test_lift(self):
        Q = CoordinatePatch(("x1", "x2", "x3", "x4"))
        s = E.section(["x1", 0, 0]).lift(E.lift(Q))
        assert s.patch == Q and s[0] == Q.coord("x1")


class TestMorphism:
    def test_zero_identity(self):
        mu = E.section(["x1", "x2^2", 3])
        assert apply_morphism(BundleMorphism.zero(E, tangent_bundle(P)), mu).is_zero
        assert apply_morphism(BundleMorphism.identity(E), mu) == mu

    def test_anchor_matrix_image(self):
        # columns are the rotation fields rho(e_a)
        rho = BundleMorphism.from_images(E, tangent_bundle(P),
                                         [[0, "x3", "-x2"], ["-x3", 0, "x1"], ["x2", "-x1", 0]])
        img = apply_morphism(rho, E.basis("e1"))
        assert isinstance(img, VectorField)
        assert str(img) == "x3*d_x2 - x2*d_x3"

    def test_shape_checks(self):
        with pytest.raises(ShapeError):
            BundleMorphism(E, tangent_bundle(P), [[1, 0, 0]])
        with pytest.raises(ShapeError):
            apply_morphism(BundleMorphism.identity(E), tangent_bundle(P).zero())

    def test_compose_and_linear_algebra(self):
        A = BundleMorphism(E, E, [[1, "x1", 0], [0, 1, 0], [0, 0, 2]])
        B = BundleMorphism(E, E, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        mu = E.section(["x2", 1, "x3"])
        assert A.compose(B)(mu) == A(B(mu))
        assert (A + B)(mu) == A(mu) + B(mu)
        assert (A - A).is_zero

    @given(seeds)
    def test_c_infinity_linear(self, seed):
        rng = random.Random(seed)
        K = BundleMorphism(E, tangent_bundle(P), [[random_poly(P, rng) for _ in range(3)] for _ in range(3)])
        f, mu, nu = random_poly(P, rng), random_section(E, rng), random_section(E, rng)
        assert K(f * mu + nu) == f * K(mu) + K(nu)
