from itertools import combinations, product

import pytest

import oracle
from agd.adjustment import AdjustmentData, Flag, classify
from agd.algebroid import LieAlgebroid, tangent_algebroid, verify_algebroid, verify_morphism
from agd.connection import ETwoFormOnF, FConnection
from agd.extension import build_extension
from agd.fixtures import so3_fields, line_bundle
from agd.geometry import BundleMorphism, ShapeError, VectorBundle, VectorField
from agd.pullback import (Submersion, pullback_action_algebroid, pullback_adjustment, pullback_algebroid,
                          pullback_connection, verify_projection)
from agd.report import PreconditionError, VerificationError
from agd.symexpr import CoordinatePatch


@pytest.fixture(scope="module")
def phi3():
    return Submersion.extend(CoordinatePatch(("x1", "x2", "x3")), ["x4"])


@pytest.fixture(scope="module")
def phi2():
    return Submersion.extend(CoordinatePatch(("x1", "x2")), ["x3"])


class TestSubmersion:
    def test_prefix_required(self):
        with pytest.raises(ShapeError):
            Submersion(CoordinatePatch(("y", "x1")), CoordinatePatch(("x1",)))

    def test_fibre(self, phi3):
        assert phi3.fibre == ("x4",) and phi3.k == 1 and phi3.total.dimension == 4


class TestPullbackAlgebroid:
    def test_tangent_becomes_tangent(self, phi3):
        pb = pullback_algebroid(tangent_algebroid(phi3.base), phi3)
        TN = tangent_algebroid(phi3.total)
        assert pb.rank == 4 and pb.algebroid.bundle == TN.bundle
        assert pb.algebroid.same_structure(TN)
        assert verify_projection(pb).passed

    def test_rank_zero_gives_vertical_bundle(self, phi3):
        Z = LieAlgebroid(VectorBundle(phi3.base, (), "Z"))
        pb = pullback_algebroid(Z, phi3)
        assert pb.algebroid.bundle.frame == ("d_x4",)
        assert pb.algebroid.anchor[0] == VectorField.coordinate(phi3.total, "x4")
        assert verify_algebroid(pb.algebroid).passed

    def test_action_algebroid_as_F(self, so3, phi3):
        pb = pullback_algebroid(so3.E_alg, phi3)
        assert pb.rank == 4 and verify_algebroid(pb.algebroid).passed
        rep = verify_projection(pb)
        assert rep.passed and {"anchor", "bracket", "surjective"} <= {c.name for c in rep}
        assert oracle.is_algebroid(oracle.alg(pb.algebroid))

    def test_wrong_base(self, so3, phi2):
        with pytest.raises(ShapeError):
            pullback_algebroid(so3.F_alg, phi2)

    def test_vertical_name_clash(self, phi3):
        F = LieAlgebroid(VectorBundle(phi3.base, ("d_x4",)), [[0, 0, 0]])
        with pytest.raises(ShapeError):
            pullback_algebroid(F, phi3)


class TestPullbackConnection:
    def test_flat_stays_flat(self, so3, phi3):
        pb = pullback_algebroid(so3.F_alg, phi3)
        assert pullback_connection(pb, so3.nabla).is_flat_table

    def test_mackenzie_table(self, mack, phi2):
        pb = pullback_algebroid(mack.F_alg, phi2)
        n1 = pullback_connection(pb, mack.nabla)
        N = phi2.total
        assert str(n1.gamma("d_x2", "e2")) == "x1*e3"
        assert all(s.is_zero for s in n1.christoffel[2])
        for al, a in product(range(2), range(3)):
            assert n1.christoffel[al][a].components == tuple(c.lift(N) for c in mack.nabla.christoffel[al][a])

    def test_defining_property_on_frames(self, mack, phi2):
        pb = pullback_algebroid(mack.F_alg, phi2)
        n1 = pullback_connection(pb, mack.nabla)
        E1 = n1.E
        for X, mu in product(mack.F_alg.bundle.frame_sections(), mack.E_alg.bundle.frame_sections()):
            assert n1(pb.lift(X), mu.lift(E1)) == mack.nabla(X, mu).lift(E1)


class TestActionPullback:
    def test_same_rotation_fields(self, so3, phi3):
        pb = pullback_algebroid(so3.F_alg, phi3)
        E1, K1 = pullback_action_algebroid(so3.E_alg, None, pb, so3.K)
        assert verify_algebroid(E1).passed and verify_morphism(K1, E1, pb.algebroid).passed
        assert [f.components for f in E1.anchor] == [f.components for f in so3_fields(phi3.total)]

    def test_projection_of_K(self, so3, phi3):
        pb = pullback_algebroid(so3.F_alg, phi3)
        E1, K1 = pullback_action_algebroid(so3.E_alg, None, pb, so3.K)
        for mu in so3.E_alg.bundle.frame_sections():
            assert pb.xi(K1(mu.lift(E1.bundle))) == so3.K(mu).lift(pb.pulled_bundle)

    def test_trivial_action(self, mack, phi2):
        pb = pullback_algebroid(mack.F_alg, phi2)
        E1, K1 = pullback_action_algebroid(mack.E_alg, None, pb, mack.K)
        assert K1.is_zero and E1.has_zero_anchor

    def test_vertical_component_from_a_function(self, so3, phi3):
        # rho_a + rho_a(x1) d4: the rotation action conjugated by x4 -> x4 + x1
        N = phi3.total
        base = so3_fields(N)
        x1 = N.coord("x1")
        fields = [VectorField(N, list(f.components[:3]) + [f(x1)]) for f in base]
        assert not fields[1].components[3].is_zero
        pb = pullback_algebroid(so3.F_alg, phi3)
        E1, K1 = pullback_action_algebroid(so3.E_alg, fields, pb, so3.K)
        assert verify_morphism(K1, E1, pb.algebroid).passed
        assert K1.image(1).components[3] == fields[1].components[3]
        d1, _ = pullback_adjustment(so3, phi3, fields)
        assert d1.is_strict

    def test_vertical_component_breaking_the_action(self, so3, phi3):
        N = phi3.total
        fields = [VectorField(N, list(f.components[:3]) + [v]) for f, v in zip(so3_fields(N), ["x4", 0, 0])]
        pb = pullback_algebroid(so3.F_alg, phi3)
        with pytest.raises(VerificationError) as e:
            pullback_action_algebroid(so3.E_alg, fields, pb, so3.K)
        assert e.value.report["anchor_compatibility"].failed

    def test_fields_must_project(self, so3, phi3):
        N = phi3.total
        fields = [VectorField(N, [1, 0, 0, 0])] * 3
        pb = pullback_algebroid(so3.F_alg, phi3)
        with pytest.raises(VerificationError) as e:
            pullback_action_algebroid(so3.E_alg, fields, pb, so3.K)
        assert e.value.report["projects_to_anchor"].failed

    def test_field_count(self, so3, phi3):
        pb = pullback_algebroid(so3.F_alg, phi3)
        with pytest.raises(ShapeError):
            pullback_action_algebroid(so3.E_alg, so3_fields(phi3.total)[:2], pb, so3.K)


class TestPullbackAdjustment:
    def test_so3_to_r4(self, so3, phi3):
        d1, pb = pullback_adjustment(so3, phi3)
        assert d1.is_strict and all(f is Flag.PASS for f in d1.flags.values())
        assert pb.algebroid.same_structure(tangent_algebroid(phi3.total))
        _, rep = classify(AdjustmentData(d1.E_alg, d1.F_alg, d1.K, d1.nabla, d1.zeta))
        assert rep["strict.dzeta_zeta"].evaluated == 4
        res = build_extension(d1)
        assert res.A.rank == 7 and res.construction["A.jacobi"].passed

    def test_mackenzie_to_r3_is_a_genuine_rank_3_check(self, mack, phi2):
        d1, pb = pullback_adjustment(mack, phi2)
        _, rep = classify(AdjustmentData(d1.E_alg, d1.F_alg, d1.K, d1.nabla, d1.zeta))
        check = rep["strict.dzeta_zeta"]
        assert check.passed and check.evaluated == 1 and check.note == ""
        assert d1.is_strict
        assert build_extension(d1).construction["A.jacobi"].passed

    def test_zeta_prime_vanishes_on_vertical(self, mack, phi2):
        d1, pb = pullback_adjustment(mack, phi2)
        v = pb.algebroid.bundle.basis("d_x3")
        for X in pb.algebroid.bundle.frame_sections():
            assert d1.zeta(v, X).is_zero
        d_1, d_2 = (pb.lift(x) for x in mack.F_alg.bundle.frame_sections())
        assert d1.zeta(d_1, d_2) == mack.zeta(*mack.F_alg.bundle.frame_sections()).lift(d1.E_alg.bundle)

    def test_extension_commutes_with_pullback(self, so3, phi3):
        A = build_extension(so3).A
        d1, _ = pullback_adjustment(so3, phi3)
        A1 = build_extension(d1).A
        N = phi3.total
        # lifted frame of A inside A1: skip the vertical slot (index 3)
        pos = [0, 1, 2, 4, 5, 6]
        for p, q in combinations(range(6), 2):
            want = [c.lift(N) for c in A.table[p][q].components]
            want.insert(3, N.zero())
            assert A1.table[pos[p]][pos[q]].components == tuple(want)

    def test_rank_zero_E(self, phi3):
        base = line_bundle()
        Z = VectorBundle(base.F_alg.patch, (), "Z")
        E = LieAlgebroid(Z, None, None, "Z")
        d = AdjustmentData(E, base.F_alg, BundleMorphism.zero(Z, base.F_alg.bundle),
                           FConnection.flat(base.F_alg, Z), ETwoFormOnF.zero(base.F_alg.bundle, Z))
        d1, _ = pullback_adjustment(d, phi3)
        assert d1.is_strict

    def test_refuses_non_strict(self, phi3):
        with pytest.raises(PreconditionError):
            pullback_adjustment(line_bundle("x3"), phi3)
