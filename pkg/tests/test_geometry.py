import math

import numpy as np
import pytest

from schlafli import geometry as geo

SQ2 = math.sqrt(2)
REGULAR = np.ones(6)
EXTERIOR_REGULAR = math.acos(-1 / 3)


def lengths_of(verts):
    """Edge lengths of explicit vertices under the 1=AB,2=AC,3=BC,4=CD,5=BD,6=AD labeling."""
    v = np.asarray(verts, dtype=float)
    pairs = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)]
    return np.array([np.linalg.norm(v[a] - v[b]) for a, b in pairs])


def brute_exterior_angles(verts):
    """Angle between outward normals at each edge, straight from coordinates."""
    v = np.asarray(verts, dtype=float)
    faces = {"ABC": (0, 1, 2), "ABD": (0, 1, 3), "ACD": (0, 2, 3), "BCD": (1, 2, 3)}
    normals = {}
    for name, (a, b, c) in faces.items():
        n = np.cross(v[b] - v[a], v[c] - v[a])
        n /= np.linalg.norm(n)
        opp = ({0, 1, 2, 3} - {a, b, c}).pop()
        if np.dot(n, v[opp] - v[a]) > 0:
            n = -n
        normals[name] = n
    edge_faces = [("ABC", "ABD"), ("ABC", "ACD"), ("ABC", "BCD"),
                  ("ACD", "BCD"), ("ABD", "BCD"), ("ABD", "ACD")]
    return np.array([math.acos(np.clip(normals[f] @ normals[g], -1, 1)) for f, g in edge_faces])


REG_VERTS = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / (2 * SQ2)


class TestClassify:
    def test_regular(self):
        assert geo.classify(REGULAR) is geo.ExistenceClass.NONDEGENERATE

    def test_triangle_violation(self):
        assert geo.classify([1, 1, 1, 1, 1, 10]) is geo.ExistenceClass.NONEXISTENT

    def test_unit_square_is_flat(self):
        square = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]
        J = lengths_of(square)
        assert np.allclose(J, [1, 1, SQ2, 1, 1, SQ2])
        assert geo.classify(J) is geo.ExistenceClass.FLAT

    def test_listed_square_labeling_is_not_flat(self):
        # (1,1,sqrt2,1,sqrt2,sqrt2) puts D at distance sqrt2 from both A and B,
        # which lifts it out of the plane
        J = [1, 1, SQ2, 1, SQ2, SQ2]
        assert geo.cayley_menger(J) > 0
        assert geo.classify(J) is geo.ExistenceClass.NONDEGENERATE

    def test_degenerate_face(self):
        verts = [[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0]]
        assert geo.classify(lengths_of(verts)) is geo.ExistenceClass.DEGENERATE_FACE

    def test_cayley_menger_regular(self):
        assert geo.cayley_menger(REGULAR) == pytest.approx(288 / 72)

    @pytest.mark.parametrize("perm", geo.RELABELINGS)
    def test_relabeling_invariance(self, perm):
        rng = np.random.default_rng(11)
        for J in [*geo.random_nondegenerate(rng, 3), [1, 1, SQ2, 1, 1, SQ2], [1, 1, 1, 1, 1, 10]]:
            J = np.asarray(J)
            assert geo.classify(J[list(perm)]) is geo.classify(J)

    def test_relabelings_preserve_faces(self):
        faces = {frozenset(f) for f in geo.FACE_EDGES}
        assert len(set(geo.RELABELINGS)) == 24
        for perm in geo.RELABELINGS:
            assert {frozenset(perm[e] for e in f) for f in faces} == faces


class TestEmbed:
    def test_regular_volume(self):
        emb = geo.embed(REGULAR)
        assert emb.volume == pytest.approx(1 / (6 * SQ2), rel=1e-14)
        assert emb.volume == pytest.approx(0.1178511, abs=1e-7)

    def test_inverted_volume(self):
        assert geo.embed(REGULAR, -1).volume == pytest.approx(-1 / (6 * SQ2), rel=1e-14)

    def test_flat_volume(self):
        assert geo.embed([1, 1, SQ2, 1, 1, SQ2]).volume == pytest.approx(0, abs=1e-15)

    def test_frame(self):
        v = geo.embed(np.random.default_rng(2).uniform(1, 1.3, 6)).vertices
        assert np.all(v[0] == 0)
        assert v[1][1] == v[1][2] == 0
        assert v[2][2] == 0

    def test_lengths_round_trip(self):
        for J in geo.random_nondegenerate(np.random.default_rng(3), 50):
            for o in (1, -1):
                assert np.allclose(geo.embed(J, o).edges, J, rtol=1e-12, atol=0)

    def test_normals_point_away(self):
        for J in geo.random_nondegenerate(np.random.default_rng(4), 20):
            for o in (1, -1):
                emb = geo.embed(J, o)
                v = emb.vertices
                for f, (face, opp) in enumerate(zip(geo.FACE_VERTICES, geo.FACE_OPPOSITE)):
                    assert np.linalg.norm(emb.normals[f]) == pytest.approx(1, abs=1e-14)
                    assert emb.normals[f] @ (v[opp] - v[face[0]]) < 0

    def test_nonexistent_raises(self):
        with pytest.raises(geo.NonexistentTetrahedron):
            geo.embed([1, 1, 1, 1, 1, 10])

    def test_degenerate_face_raises(self):
        with pytest.raises(geo.DegenerateFace):
            geo.embed(lengths_of([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0]]))

    def test_negative_edge_rejected(self):
        with pytest.raises(geo.GeometryError):
            geo.as_edges([1, 1, 1, 1, 1, -1])


class TestDihedral:
    def test_regular_against_brute_force(self):
        ref = brute_exterior_angles(REG_VERTS)
        assert np.allclose(ref, EXTERIOR_REGULAR)
        assert np.allclose(geo.dihedral_angles(geo.embed(REGULAR)), ref, atol=1e-14)

    def test_inverted_regular(self):
        assert np.allclose(geo.dihedral_angles(geo.embed(REGULAR, -1)), -EXTERIOR_REGULAR, atol=1e-14)

    def test_random_against_brute_force(self):
        for J in geo.random_nondegenerate(np.random.default_rng(5), 30):
            emb = geo.embed(J)
            assert np.allclose(geo.dihedral_angles(emb), brute_exterior_angles(emb.vertices), atol=1e-11)

    def test_sign_follows_volume(self):
        for J in geo.random_nondegenerate(np.random.default_rng(6), 30):
            assert np.all(geo.dihedral_angles(geo.embed(J, 1)) > 0)
            assert np.all(geo.dihedral_angles(geo.embed(J, -1)) < 0)

    def test_flat_square(self):
        # the fold edges sit at pi, reported on the + branch for either orientation
        for o in (1, -1):
            psi = geo.dihedral_angles(geo.embed([1, 1, SQ2, 1, 1, SQ2], o))
            assert np.allclose(psi, [math.pi, math.pi, 0, math.pi, math.pi, 0], atol=1e-7)

    def test_embedding_psi_field_matches(self):
        emb = geo.embed([1.2, 1.1, 0.9, 1.3, 1.0, 1.05])
        assert np.allclose(emb.psi, geo.dihedral_angles(emb), atol=1e-15)


class TestPhase:
    def test_regular(self):
        assert geo.pr_phase(REGULAR) == pytest.approx(6 * EXTERIOR_REGULAR, rel=1e-14)

    @pytest.mark.parametrize("k", [0.5, 2.0, 7.0])
    def test_scaling(self, k):
        assert geo.pr_phase(k * REGULAR) == pytest.approx(k * 6 * EXTERIOR_REGULAR, rel=1e-13)

    def test_inverted(self):
        assert geo.pr_phase(REGULAR, -1) == pytest.approx(-6 * EXTERIOR_REGULAR, rel=1e-14)

    def test_relabeling_permutes_angles(self):
        J = np.array([1.2, 1.1, 0.9, 1.3, 1.0, 1.05])
        psi = geo.embed(J).psi
        for perm in geo.RELABELINGS:
            assert np.allclose(geo.embed(J[list(perm)]).psi, psi[list(perm)], atol=1e-12)


def fold_square(angle):
    """Unit square folded along its diagonal BC by the given angle."""
    A, B, C = np.array([0, 0, 0.0]), np.array([1, 0, 0.0]), np.array([0, 1, 0.0])
    mid = (B + C) / 2
    axis = (C - B) / np.linalg.norm(C - B)
    r = np.array([1, 1, 0.0]) - mid
    # rotate r about the diagonal
    r = r * math.cos(angle) + np.cross(axis, r) * math.sin(angle) + axis * (axis @ r) * (1 - math.cos(angle))
    return lengths_of([A, B, C, mid + r])


class TestResiduals:
    def test_regular(self):
        rep = geo.residual_report(REGULAR, 1e-5)
        for key in ("schlafli_residual", "euler_residual", "symmetry_residual", "genfun_residual"):
            assert rep[key] <= 1e-6

    def test_doubled(self):
        assert geo.schlafli_residual(2 * REGULAR, 1e-5) <= 1e-6
        assert geo.genfun_residual(2 * REGULAR, 1e-5) <= 1e-6

    def test_near_flat(self):
        J = fold_square(0.2)
        assert geo.classify(J) is geo.ExistenceClass.NONDEGENERATE
        assert geo.classify(fold_square(0.0)) is geo.ExistenceClass.FLAT
        assert geo.schlafli_residual(J, 1e-5) <= 1e-5

    def test_random_interior(self):
        for J in geo.random_nondegenerate(np.random.default_rng(8), 10):
            assert geo.genfun_residual(J) <= 1e-5
            assert geo.schlafli_residual(J) <= 1e-5

    def test_truncation_is_second_order(self):
        J = np.array([1.2, 1.1, 0.9, 1.3, 1.0, 1.05])
        D = geo.jacobian_psi(J, 1e-2)
        D2 = geo.jacobian_psi(J, 5e-3)
        D4 = geo.jacobian_psi(J, 2.5e-3)
        ratio = np.max(np.abs(D - D2)) / np.max(np.abs(D2 - D4))
        assert 3.5 < ratio < 4.5

    def test_inverted_orientation(self):
        J = np.array([1.2, 1.1, 0.9, 1.3, 1.0, 1.05])
        assert np.allclose(geo.jacobian_psi(J, orientation=-1), -geo.jacobian_psi(J), atol=1e-8)

    def test_flat_input_rejected(self):
        with pytest.raises(geo.GeometryError):
            geo.jacobian_psi([1, 1, SQ2, 1, 1, SQ2])

    def test_step_default_scales(self):
        assert geo.default_step(3 * REGULAR) == pytest.approx(3e-5)


def test_edge_faces_consistent():
    for e, (f, g) in enumerate(geo.EDGE_FACES):
        assert e in geo.FACE_EDGES[f] and e in geo.FACE_EDGES[g]
    for f, verts in enumerate(geo.FACE_VERTICES):
        expect = {e for e, pair in enumerate(geo.EDGE_VERTICES) if set(pair) <= set(verts)}
        assert set(geo.FACE_EDGES[f]) == expect
