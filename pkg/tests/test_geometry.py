import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wignerkit.coords import SIGMA
from wignerkit.errors import (
    BadInterval,
    Degenerate,
    NotOnCircle,
    NotUnitary,
    Orthogonal,
    RankMismatch,
    WrongDim,
)
from wignerkit.geometry import (
    CircleRelation,
    LineParam,
    adjacent,
    antipodal_iff_orthogonal,
    circle_angles,
    circles_intersection_count,
    compatible,
    dense_intersection,
    det0_check,
    interval_membership,
    is_rank_k_projection,
    lambda_membership,
    projection_from_param,
    sample_circle,
    sample_interval,
    small_circle,
    sphere_point,
    su2_to_o3,
    sum_frame,
)
from wignerkit.linalg import haar_unitary, make_rng, projector_onto, random_rank1, random_unit_vector

SQ2 = math.sqrt(2.0)
E0 = projector_onto([1, 0])
E1 = projector_onto([0, 1])
PLUS = projector_onto(np.array([1, 1]) / SQ2)
I3 = np.eye(3, dtype=complex)


def oracle_member(P, Q, Z, k=1, tol=1e-8):
    """P + Q - Z is a rank-k projection, judged with numpy's eigensolver."""
    w = np.linalg.eigvalsh(np.asarray(P) + np.asarray(Q) - np.asarray(Z))
    ones = np.sum(np.abs(w - 1) <= tol)
    zeros = np.sum(np.abs(w) <= tol)
    return ones == k and zeros == len(w) - k


class TestLineParam:
    def test_alpha_reduced(self):
        assert LineParam(0.3, 2 * math.pi + 1).alpha == pytest.approx(1.0)

    def test_bad_t(self):
        with pytest.raises(ValueError):
            LineParam(1.5)

    @pytest.mark.parametrize(
        "t, alpha, x",
        [
            (1.0, 0.0, (0.5, 0, 0, 0.5)),
            (0.5, 0.0, (0.5, 0.5, 0, 0)),
            # z = sqrt(t(1-t)) exp(-i alpha) = -i/2 at t = 1/2, alpha = pi/2
            (0.5, math.pi / 2, (0.5, 0, 0.5, 0)),
            (0.0, 1.0, (0.5, 0, 0, -0.5)),
        ],
    )
    def test_sphere_examples(self, t, alpha, x):
        P = projection_from_param(LineParam(t, alpha))
        assert np.allclose(sphere_point(P), x, atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(t=st.floats(0, 1), alpha=st.floats(0, 2 * math.pi))
    def test_param_matrix(self, t, alpha):
        P = projection_from_param(LineParam(t, alpha)).matrix
        z = math.sqrt(t * (1 - t)) * np.exp(-1j * alpha)
        assert np.allclose(P, [[t, z], [np.conj(z), 1 - t]], atol=1e-15)


class TestDet0:
    @pytest.mark.parametrize("t, s, expected", [(0.7, 0.7, True), (0.7, 0.3, False), (0.5, 0.1, True), (0.9, 0.8, False)])
    def test_examples(self, t, s, expected):
        assert det0_check(t, s) is expected

    @settings(max_examples=100, deadline=None)
    @given(t=st.floats(0.5, 1), s=st.floats(0, 1))
    def test_roots(self, t, s):
        # the identity reduces to 2(2t-1)(s-t) = 0
        if abs(2 * (2 * t - 1) * (s - t)) > 1e-10:
            assert not det0_check(t, s)
        assert det0_check(t, t)


class TestSumFrame:
    def test_same(self):
        assert sum_frame(E0, E0).t == pytest.approx(1.0)

    def test_orthogonal(self):
        assert sum_frame(E0, E1).t == pytest.approx(0.5)

    def test_e0_plus(self):
        f = sum_frame(E0, PLUS)
        # largest eigenvalue of [[3/2, 1/2], [1/2, 1/2]] via numpy, halved
        assert f.t == pytest.approx(np.linalg.eigvalsh(E0.matrix + PLUS.matrix)[-1] / 2, abs=1e-14)
        assert f.t == pytest.approx((1 + 1 / SQ2) / 2, abs=1e-14)

    @pytest.mark.parametrize("seed", range(20))
    def test_normal_form(self, seed):
        rng = make_rng(seed)
        n = 2 + seed % 3
        B = np.linalg.qr(rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2)))[0]
        P = projector_onto(B @ random_unit_vector(2, rng))
        Q = projector_onto(B @ random_unit_vector(2, rng))
        f = sum_frame(P, Q)
        assert np.allclose(f.local(P.matrix + Q.matrix), np.diag([2 * f.t, 2 * (1 - f.t)]), atol=1e-12)
        # P sits at angle 0: real nonnegative off-diagonal, Q opposite
        w, z = f.offdiag(P), f.offdiag(Q)
        assert abs(w.imag) <= 1e-12 and w.real >= -1e-12
        assert abs(w + z) <= 1e-12
        assert abs(abs(w) - f.radius) <= 1e-10


class TestLambdaMembership:
    def test_generators_are_members(self):
        assert lambda_membership(E0, PLUS, E0) and lambda_membership(E0, PLUS, PLUS)

    def test_orthogonal_pair_gives_whole_line(self, rng):
        for _ in range(10):
            Z = random_rank1(2, rng)
            assert lambda_membership(E0, E1, Z)

    def test_equal_pair(self, rng):
        assert lambda_membership(E0, E0, E0)
        assert not lambda_membership(E0, E0, random_rank1(2, rng))

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            lambda_membership(E0, E1, np.eye(2))

    def test_stack(self, rng):
        Zs = np.stack([random_rank1(2, rng).matrix for _ in range(5)] + [E0.matrix])
        out = lambda_membership(E0, PLUS, Zs)
        assert out.shape == (6,) and out[-1]

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_oracle(self, seed):
        rng = make_rng(seed)
        P, Q = random_rank1(3, rng), random_rank1(3, rng)
        f = sum_frame(P, Q)
        members = [projection_from_param(LineParam(f.t, a), f.basis) for a in rng.uniform(0, 6, 4)]
        others = [random_rank1(3, rng) for _ in range(4)]
        for Z in members + others:
            assert lambda_membership(P, Q, Z) == oracle_member(P.matrix, Q.matrix, Z.matrix)
        assert all(lambda_membership(P, Q, Z) for Z in members)

    def test_is_rank_k(self):
        assert is_rank_k_projection(np.diag([1.0, 1.0, 0.0]), 2)
        assert not is_rank_k_projection(np.diag([1.0, 0.5, 0.0]), 2)


class TestSmallCircle:
    @pytest.mark.parametrize("t", [0.6, 0.75, 0.9])
    def test_horizontal_circle(self, t):
        # generators with equal t: the circle is the slice x3 = t - 1/2
        P = projection_from_param(LineParam(t, 0.0))
        Q = projection_from_param(LineParam(t, math.pi))
        c = small_circle(P, Q)
        assert np.allclose(c.center, [0, 0, t - 0.5], atol=1e-12)
        assert np.allclose(c.normal, [0, 0, 1], atol=1e-12)
        assert c.radius == pytest.approx(math.sqrt(t * (1 - t)), abs=1e-12)
        for a in np.linspace(0, 2 * math.pi, 7):
            assert c.contains(sphere_point(projection_from_param(LineParam(t, a))))
        assert not c.contains(sphere_point(projection_from_param(LineParam(t / 2, 0.0))))

    def test_points_on_circle(self):
        c = small_circle(E0, PLUS)
        assert all(c.contains(x) for x in c.points(12))

    def test_orthogonal_rejected(self):
        with pytest.raises(Orthogonal):
            small_circle(E0, E1)

    def test_equal_rejected(self):
        with pytest.raises(Degenerate):
            small_circle(E0, E0)

    def test_wrong_dim(self):
        P = projector_onto(I3[:, 0])
        with pytest.raises(WrongDim):
            sphere_point(P)


class TestSampleCircle:
    def test_samples_are_members(self):
        f = sum_frame(E0, PLUS)
        S = sample_circle(f, 64)
        assert len(S) == 64
        assert all(lambda_membership(E0, PLUS, Z) for Z in S)
        assert np.allclose(S[0].matrix, E0.matrix, atol=1e-12)
        assert np.allclose(S[32].matrix, PLUS.matrix, atol=1e-12)

    def test_off_diagonals_on_circle(self):
        f = sum_frame(E0, PLUS)
        offs = np.array([f.offdiag(Z) for Z in sample_circle(f, 16)])
        assert np.allclose(offs, f.radius * np.exp(1j * circle_angles(16)), atol=1e-12)

    @pytest.mark.parametrize("seed", range(30))
    def test_min_overlap(self, seed):
        # smallest tr(P_i P_j) on the circle is (2t - 1)^2, reached by antipodal samples
        rng = make_rng(seed)
        P, Q = random_rank1(2, rng), random_rank1(2, rng)
        f = sum_frame(P, Q)
        S = np.stack([Z.matrix for Z in sample_circle(f, 64)])
        G = np.real(np.einsum("aij,bji->ab", S, S))
        np.fill_diagonal(G, np.inf)
        assert G.min() == pytest.approx((2 * f.t - 1) ** 2, abs=1e-12)
        assert G.min() > 0

    def test_bad_m(self):
        with pytest.raises(ValueError):
            sample_circle(sum_frame(E0, PLUS), 0)


class TestIntersections:
    def test_same_circle(self):
        f = sum_frame(E0, PLUS)
        S = sample_circle(f, 8)
        assert circles_intersection_count(f, S[1], S[5]) is CircleRelation.SAME_CIRCLE

    def test_two_points(self):
        f = sum_frame(E0, PLUS)
        S = sample_circle(f, 8)
        assert circles_intersection_count(f, S[1], S[2]) is CircleRelation.TWO_POINTS
        angles, found = dense_intersection(f, S[1], S[2])
        assert np.allclose(sorted(angles), [0.0, math.pi])
        assert np.allclose(found[0].matrix, S[1].matrix, atol=1e-12)

    def test_not_on_circle(self):
        f = sum_frame(E0, PLUS)
        with pytest.raises(NotOnCircle):
            circles_intersection_count(f, E1, PLUS)
        with pytest.raises(NotOnCircle):
            circles_intersection_count(f, E0, E0)


class TestAntipodal:
    def test_examples(self):
        assert antipodal_iff_orthogonal(E0, E1)
        assert not antipodal_iff_orthogonal(E0, PLUS)

    @pytest.mark.parametrize("seed", range(20))
    def test_overlap_is_sum_norm(self, seed):
        rng = make_rng(seed)
        P, Q = random_rank1(2, rng), random_rank1(2, rng)
        x, y = sphere_point(P).vec, sphere_point(Q).vec
        assert np.trace(P.matrix @ Q.matrix).real == pytest.approx(np.sum((x + y) ** 2), abs=1e-14)


class TestSu2ToO3:
    def test_identity(self):
        assert np.allclose(su2_to_o3(np.eye(2)), np.eye(3))

    def test_conjugation(self):
        assert np.allclose(su2_to_o3(np.eye(2), antilinear=True), np.diag([1, -1, 1]))

    def test_sigma_z(self):
        assert np.allclose(su2_to_o3(SIGMA[3]), np.diag([-1, -1, 1]))

    def test_rejects(self):
        with pytest.raises(NotUnitary):
            su2_to_o3(2 * np.eye(2))
        with pytest.raises(NotUnitary):
            su2_to_o3(np.eye(3))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_homomorphism(self, seed):
        rng = make_rng(seed)
        U, V = haar_unitary(2, rng), haar_unitary(2, rng)
        R = su2_to_o3(U)
        assert np.linalg.norm(su2_to_o3(U @ V) - R @ su2_to_o3(V)) <= 1e-12
        assert np.linalg.norm(R.T @ R - np.eye(3)) <= 1e-12
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.det(su2_to_o3(U, True)) == pytest.approx(-1.0, abs=1e-12)
        P = random_rank1(2, rng)
        moved = sphere_point(U @ P.matrix @ U.conj().T).vec
        assert np.allclose(moved, R @ sphere_point(P).vec, atol=1e-12)


class TestSubspacePredicates:
    def test_compatible_examples(self):
        X, Y = I3[:, [0, 1]], I3[:, [1, 2]]
        assert compatible(X, Y) and adjacent(X, Y)
        Z = np.column_stack([I3[:, 0], (I3[:, 1] + I3[:, 2]) / SQ2])
        assert not compatible(X, Z)
        assert adjacent(X, Z)

    def test_orthogonal_are_compatible(self):
        X, Y = I3[:, [0]], I3[:, [1]]
        assert compatible(X, Y)
        assert not adjacent(I3[:, [0, 1]], I3[:, [0, 1]])

    def test_adjacent_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            adjacent(I3[:, [0]], I3[:, [0, 1]])

    def test_interval_examples(self):
        M, N = I3[:, [0]], I3
        assert interval_membership(M, N, I3[:, [0, 1]], 2)
        assert not interval_membership(M, N, I3[:, [1, 2]], 2)
        with pytest.raises(BadInterval):
            interval_membership(M, N, I3[:, [0]], 1)
        with pytest.raises(BadInterval):
            interval_membership(I3[:, [2]], I3[:, [0, 1]] @ np.eye(2), I3[:, [0, 1]], 2)

    def test_sample_interval(self, rng):
        M, N = I3[:, [0]], I3
        for _ in range(10):
            Z = sample_interval(M, N, 2, rng)
            assert Z.shape == (3, 2)
            assert np.allclose(Z.conj().T @ Z, np.eye(2), atol=1e-12)
            assert interval_membership(M, N, Z, 2)

    @pytest.mark.parametrize("seed", range(10))
    def test_compatible_lambda_is_interval(self, seed):
        # commuting projections: every interval element Z has P_X + P_Y - P_Z a projection
        rng = make_rng(seed)
        W = haar_unitary(4, rng)
        X, Y = W[:, [0, 1]], W[:, [1, 2]]
        M, N = W[:, [1]], W[:, [0, 1, 2]]
        PX, PY = projector_onto(X), projector_onto(Y)
        for _ in range(5):
            Z = sample_interval(M, N, 2, rng)
            assert lambda_membership(PX, PY, projector_onto(Z), 2)
            assert oracle_member(PX.matrix, PY.matrix, projector_onto(Z).matrix, k=2)
