"""Randomised verification suites.

Each ``check_*`` function draws its instances from ``make_rng(seed, ...)``
streams, so a check is reproducible from its seed alone, and returns a
:class:`Check`.  Suites bundle checks into a :class:`RunReport`, which the
CLI prints as JSON.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import classifier as clf
from .coords import embed_isometry
from .errors import WignerKitError
from .geometry import (
    CircleRelation,
    LineParam,
    adjacent,
    antipodal_iff_orthogonal,
    circles_intersection_count,
    compatible,
    dense_intersection,
    interval_membership,
    lambda_membership,
    projection_from_param,
    sample_circle,
    sample_interval,
    sphere_point,
    su2_to_o3,
    sum_frame,
)
from .linalg import (
    haar_unitary,
    make_rng,
    projector_onto,
    random_hermitian,
    random_subspace,
    random_unit_vector,
    subspace_intersection,
    subspace_sum,
)

THEOREM_DIMS = (2, 3, 4, 6)


@dataclass
class Check:
    name: str
    certifies: str
    passed: bool
    worst: float
    count: int
    failing_seed: list | None = None
    detail: str = ""


@dataclass
class RunReport:
    command: str
    seed: int
    dims: list
    trials: int
    checks: list = field(default_factory=list)
    wall_time_s: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        doc = {
            "command": self.command,
            "seed": self.seed,
            "dims": list(self.dims),
            "trials": self.trials,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }
        if self.wall_time_s is not None:
            doc["wall_time_s"] = self.wall_time_s
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"


def _pair_in_plane(n: int, rng: np.random.Generator):
    """Two random rank-one projections inside a random 2-dim subspace of C^n."""
    B = random_subspace(n, 2, rng) if n > 2 else np.eye(2, dtype=complex)
    P = projector_onto(B @ random_unit_vector(2, rng))
    Q = projector_onto(B @ random_unit_vector(2, rng))
    return P, Q


def _frame_member(frame, theta: float):
    # member at angle theta: off-diagonal sqrt(t(1-t)) exp(i theta)
    return projection_from_param(LineParam(frame.t, -theta), frame.basis)


def _member_stack(frame, s: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    S, A = np.meshgrid(s, alpha, indexing="ij")
    v = np.stack([np.sqrt(S), np.sqrt(1 - S) * np.exp(1j * A)]).reshape(2, -1)
    cols = frame.basis @ v
    return np.einsum("ia,ja->aij", cols, cols.conj())


# -- projective line ------------------------------------------------------------

def check_circle_membership(seed: int, trials: int = 50, n: int = 2, s_points: int = 100,
                            alpha_points: int = 64, s_tol: float = 1e-8) -> Check:
    """Grid over (s, alpha): Z is in the Lambda set of (P, Q) iff s == t."""
    violations, count, bad = 0, 0, None
    for i in range(trials):
        P, Q = _pair_in_plane(n, make_rng(seed, 1, i))
        frame = sum_frame(P, Q)
        s = np.append(np.linspace(0.0, 1.0, s_points - 1), frame.t)
        alpha = 2 * np.pi * np.arange(alpha_points) / alpha_points
        member = lambda_membership(P, Q, _member_stack(frame, s, alpha))
        expect = np.repeat(np.abs(s - frame.t) <= s_tol, alpha_points)
        v = int(np.sum(member != expect))
        violations += v
        count += member.size
        if v and bad is None:
            bad = [seed, 1, i]
    return Check("circle_membership_iff_s_equals_t",
                 "a point of the projective line lies on the small circle of two distinct "
                 "non-orthogonal points iff its diagonal parameter equals that of the sum frame",
                 violations == 0, float(violations), count, bad)


def circle_overlaps(seed: int, trials: int = 50, n: int = 2, m: int = 64):
    """Per trial: ``(t, min_{i != j} tr(P_i P_j))`` over ``m`` circle samples."""
    out = []
    for i in range(trials):
        P, Q = _pair_in_plane(n, make_rng(seed, 1, i))
        frame = sum_frame(P, Q)
        S = np.stack([Z.matrix for Z in sample_circle(frame, m)])
        G = np.real(np.einsum("aij,bji->ab", S, S))
        np.fill_diagonal(G, np.inf)
        out.append((frame.t, float(G.min())))
    return out


def check_no_orthogonal_pair(seed: int, trials: int = 50, n: int = 2, m: int = 64,
                             slack: float = 1e-8) -> Check:
    """No two circle samples are orthogonal; the smallest overlap is ``(2t-1)^2``."""
    worst, bad = math.inf, None
    for i, (t, g) in enumerate(circle_overlaps(seed, trials, n, m)):
        bound = (2 * t - 1) ** 2
        margin = g - (bound - slack)
        if (g <= 0 or margin < 0) and bad is None:
            bad = [seed, 1, i]
        worst = min(worst, margin)
    return Check("small_circle_has_no_orthogonal_pair",
                 "a small circle contains no pair of orthogonal points "
                 "(min overlap tr(P_i P_j) = (2t-1)^2 > 0)",
                 bad is None, float(worst), trials, bad)


def check_circle_intersections(seed: int, trials: int = 50, pairs: int = 20, n: int = 2,
                               m: int = 720, sum_tol: float = 1e-9, wz_tol: float = 1e-8,
                               ang_tol: float = 1e-6) -> Check:
    """Two members of a small circle either regenerate it (sums agree, w + z = 0)
    or generate a second circle meeting the first in exactly those two points."""
    worst, count, bad = 0.0, 0, None
    for i in range(trials):
        rng = make_rng(seed, 2, i)
        P, Q = _pair_in_plane(n, rng)
        frame = sum_frame(P, Q)
        for j in range(pairs):
            th1 = rng.uniform(0, 2 * np.pi)
            th2 = th1 + np.pi if j % 2 == 0 else th1 + rng.uniform(0.05, 2 * np.pi - 0.05)
            P1, Q1 = _frame_member(frame, th1), _frame_member(frame, th2)
            same_sum = np.linalg.norm(P1.matrix + Q1.matrix - frame.sum_matrix) <= sum_tol
            try:
                rel = circles_intersection_count(frame, P1, Q1, m=m, ang_tol=ang_tol)
            except WignerKitError:
                rel = None
            wz = abs(frame.offdiag(P1) + frame.offdiag(Q1))
            if same_sum:
                ok = rel is CircleRelation.SAME_CIRCLE and wz <= wz_tol
                worst = max(worst, wz)
            else:
                angles, _ = dense_intersection(frame, P1, Q1, m)
                ok = rel is CircleRelation.TWO_POINTS and len(angles) == 2
            count += 1
            if not ok and bad is None:
                bad = [seed, 2, i, j]
    return Check("circle_intersection_dichotomy",
                 "two distinct points of a small circle regenerate it iff w + z = 0, "
                 "otherwise the two circles meet exactly in those points",
                 bad is None, worst, count, bad)


def check_equivariance(seed: int, trials: int = 50, n: int = 2, m: int = 8) -> Check:
    """Membership in a Lambda set is unchanged by simultaneous unitary or anti-unitary conjugation."""
    count, bad = 0, None
    for i in range(trials):
        rng = make_rng(seed, 3, i)
        P, Q = _pair_in_plane(n, rng)
        frame = sum_frame(P, Q)
        Zs = [Z.matrix for Z in sample_circle(frame, m)]
        Zs += [projector_onto(random_unit_vector(n, rng)).matrix for _ in range(m)]
        Zs = np.stack(Zs)
        U = haar_unitary(n, rng)
        anti = bool(i % 2)
        move = (lambda A: U @ np.conj(A) @ U.conj().T) if anti else (lambda A: U @ A @ U.conj().T)
        before = lambda_membership(P, Q, Zs)
        after = lambda_membership(move(P.matrix), move(Q.matrix), move(Zs), k=1)
        count += len(Zs)
        if (np.any(before != after) or not before[:m].all()) and bad is None:
            bad = [seed, 3, i]
    return Check("lambda_set_equivariance",
                 "U maps the Lambda set of (X, Y) onto the Lambda set of (U X, U Y)",
                 bad is None, 0.0, count, bad)


def check_sphere_rotations(seed: int, trials: int = 100, tol: float = 1e-9) -> Check:
    """Unitaries act on the Bloch vector by rotations, conjugation by a reflection."""
    worst, bad = 0.0, None
    refl = su2_to_o3(np.eye(2), antilinear=True)
    worst = float(np.abs(refl - np.diag([1.0, -1.0, 1.0])).max())
    for i in range(trials):
        rng = make_rng(seed, 4, i)
        U, V = haar_unitary(2, rng), haar_unitary(2, rng)
        RU, RV = su2_to_o3(U), su2_to_o3(V)
        RA = su2_to_o3(U, antilinear=True)
        P = projector_onto(random_unit_vector(2, rng))
        moved = sphere_point(U @ np.conj(P.matrix) @ U.conj().T).vec
        errs = [
            np.linalg.norm(su2_to_o3(U @ V) - RU @ RV),
            np.linalg.norm(RU.T @ RU - np.eye(3)),
            np.linalg.norm(RA.T @ RA - np.eye(3)),
            abs(np.linalg.det(RU) - 1.0),
            abs(np.linalg.det(RA) + 1.0),
            np.linalg.norm(moved - RA @ sphere_point(P).vec),
        ]
        e = float(max(errs))
        worst = max(worst, e)
        if e > tol and bad is None:
            bad = [seed, 4, i]
    return Check("sphere_orthogonal_group",
                 "unitary and anti-unitary maps of the projective line act on the sphere as "
                 "O(3), unitaries as SO(3), homomorphically",
                 worst <= tol, worst, trials, bad)


def check_sphere_points(seed: int, points: int = 1000, pairs: int = 500,
                        x0_tol: float = 1e-12, r_tol: float = 1e-10, ortho_tol: float = 1e-10) -> Check:
    """Rank-one projections land on the sphere; antipodal iff orthogonal."""
    rng = make_rng(seed, 5)
    worst, bad = 0.0, None
    for i in range(points):
        x = sphere_point(projector_onto(random_unit_vector(2, rng)))
        e0, er = abs(x.x0 - 0.5), abs(float(x.vec @ x.vec) - 0.25)
        worst = max(worst, e0, er)
        if (e0 > x0_tol or er > r_tol) and bad is None:
            bad = [seed, 5, "point", i]
    for i in range(pairs):
        v = random_unit_vector(2, rng)
        w = np.array([-np.conj(v[1]), np.conj(v[0])]) if i % 2 == 0 else random_unit_vector(2, rng)
        P, Q = projector_onto(v), projector_onto(w)
        try:
            anti = antipodal_iff_orthogonal(P, Q, ortho_tol)
        except WignerKitError:
            anti = None
        expect = float(np.real(np.trace(P.matrix @ Q.matrix))) <= ortho_tol
        if (anti is None or anti != expect or anti != (i % 2 == 0)) and bad is None:
            bad = [seed, 5, "pair", i]
    return Check("sphere_correspondence",
                 "rank-one projections on C^2 map onto the sphere of radius 1/2 at x0 = 1/2, "
                 "and antipodal points are exactly the orthogonal pairs",
                 bad is None, worst, points + pairs, bad)


# -- classification -------------------------------------------------------------

def check_round_trip(seed: int, dims=THEOREM_DIMS, trials: int = 100,
                     u_tol: float = 1e-8, p_tol: float = 1e-9) -> Check:
    worst, count, bad = 0.0, 0, None
    for n in dims:
        for i in range(trials):
            for kk, kind in enumerate(("isometry", "anti_isometry", "constant")):
                op, truth = clf.generate_with_truth(kind, n, make_rng(seed, 10, n, i, kk))
                v = clf.classify(op, rng=make_rng(seed, 11, n, i, kk))
                if kind == "constant":
                    ok = isinstance(v, clf.TraceConstant)
                    err = np.linalg.norm(v.P.matrix - truth["P"]) if ok else math.inf
                    ok = ok and err <= p_tol
                else:
                    ok = isinstance(v, clf.IsometryInduced) and v.antilinear == truth["antilinear"]
                    err = clf.phase_aligned_error(v.U, truth["U"]) if ok else math.inf
                    ok = ok and err <= u_tol
                worst = max(worst, float(err))
                count += 1
                if not ok and bad is None:
                    bad = [seed, 10, n, i, kk]
    return Check("classification_round_trip",
                 "every linear map preserving rank-one projections is induced by a unitary or "
                 "anti-unitary, or is A -> tr(A) P; the inducing data is recovered",
                 bad is None, worst, count, bad)


def check_trace_identity(seed: int, dims=THEOREM_DIMS, trials: int = 100, samples: int = 20,
                         tol: float = 1e-8) -> Check:
    worst, count, bad = 0.0, 0, None
    for n in dims:
        for i in range(trials):
            for kk, kind in enumerate(("isometry", "anti_isometry", "constant")):
                op = clf.generate(kind, n, make_rng(seed, 10, n, i, kk))
                rng = make_rng(seed, 12, n, i, kk)
                for _ in range(samples):
                    A = random_hermitian(n, rng)
                    gap = abs(np.trace(op(A)).real - np.trace(A).real) / (1 + np.linalg.norm(A))
                    worst = max(worst, float(gap))
                    count += 1
                    if gap > tol and bad is None:
                        bad = [seed, 12, n, i, kk]
    return Check("trace_preservation",
                 "rank-one preservers preserve the trace (rank-one projections span)",
                 bad is None, worst, count, bad)


def check_negative_detection(seed: int, dims=THEOREM_DIMS, trials: int = 50,
                             eps_values=(1e-3, 1e-5), ratio: float = 0.1) -> Check:
    """Perturbed operators are rejected with defect >= ratio * eps; eps = 0 controls pass."""
    bases = ("isometry", "anti_isometry", "constant")
    worst, count, bad = math.inf, 0, None
    for n in dims:
        for i in range(trials):
            base = bases[i % 3]
            for e, eps in enumerate((0.0, *eps_values)):
                op = clf.generate("perturbed", n, make_rng(seed, 13, n, i), eps, base)
                v = clf.classify(op, rng=make_rng(seed, 14, n, i, e))
                if eps == 0.0:
                    want = clf.TraceConstant if base == "constant" else clf.IsometryInduced
                    ok = isinstance(v, want)
                    if ok and want is clf.IsometryInduced:
                        ok = v.antilinear == (base == "anti_isometry")
                else:
                    ok = isinstance(v, clf.NotRankOnePreserving) and v.defect >= ratio * eps
                    if isinstance(v, clf.NotRankOnePreserving):
                        worst = min(worst, v.defect / eps)
                count += 1
                if not ok and bad is None:
                    bad = [seed, 13, n, i, e]
    return Check("perturbation_detection",
                 "maps that are not rank-one preserving are rejected with a reported defect",
                 bad is None, float(worst), count, bad)


def check_line_behavior(seed: int, dims=THEOREM_DIMS, trials: int = 10, pairs: int = 50,
                        sep: float = 1e-8) -> Check:
    """On every projective line the induced map is injective (isometry type) or constant."""
    count, bad = 0, None
    for n in dims:
        for i in range(trials):
            for kk, kind in enumerate(("isometry", "anti_isometry", "constant")):
                op = clf.generate(kind, n, make_rng(seed, 15, n, i, kk))
                v = clf.classify(op, rng=make_rng(seed, 16, n, i, kk))
                rng = make_rng(seed, 17, n, i, kk)
                B = random_subspace(n, 2, rng)
                for _ in range(pairs):
                    X = projector_onto(B @ random_unit_vector(2, rng)).matrix
                    Y = projector_onto(B @ random_unit_vector(2, rng)).matrix
                    d_in = np.linalg.norm(X - Y)
                    d_out = np.linalg.norm(op(X) - op(Y))
                    if isinstance(v, clf.IsometryInduced):
                        ok = d_in <= sep or d_out >= sep
                    else:
                        ok = isinstance(v, clf.TraceConstant) and d_out <= sep
                    count += 1
                    if not ok and bad is None:
                        bad = [seed, 15, n, i, kk]
    return Check("line_injective_or_constant",
                 "the restriction to any projective line is injective or constant",
                 bad is None, 0.0, count, bad)


def check_lambda_images(seed: int, dims=THEOREM_DIMS, trials: int = 10, m: int = 16) -> Check:
    """The induced map sends the Lambda set of (X, Y) into that of (f(X), f(Y))."""
    count, bad = 0, None
    for n in dims:
        for i in range(trials):
            for kk, kind in enumerate(("isometry", "anti_isometry")):
                op = clf.generate(kind, n, make_rng(seed, 18, n, i, kk))
                P, Q = _pair_in_plane(n, make_rng(seed, 19, n, i, kk))
                Zs = np.stack([Z.matrix for Z in sample_circle(sum_frame(P, Q), m)])
                inside = lambda_membership(op(P.matrix), op(Q.matrix), op(Zs), k=1)
                count += m
                if not np.all(inside) and bad is None:
                    bad = [seed, 18, n, i, kk]
    return Check("lambda_set_images",
                 "f maps the Lambda set of (X, Y) into the Lambda set of (f(X), f(Y))",
                 bad is None, 0.0, count, bad)


def check_composition(seed: int, dims=THEOREM_DIMS, trials: int = 10, u_tol: float = 1e-8) -> Check:
    worst, count, bad = 0.0, 0, None
    for n in dims:
        for i in range(trials):
            rng = make_rng(seed, 20, n, i)
            a1, a2 = bool(rng.integers(2)), bool(rng.integers(2))
            U1, U2 = haar_unitary(n, rng), haar_unitary(n, rng)
            op = embed_isometry(U1, a1) @ embed_isometry(U2, a2)
            v = clf.classify(op, rng=make_rng(seed, 21, n, i))
            expect = U1 @ (np.conj(U2) if a1 else U2)
            ok = isinstance(v, clf.IsometryInduced) and v.antilinear == (a1 ^ a2)
            err = clf.phase_aligned_error(v.U, expect) if ok else math.inf
            worst = max(worst, float(err))
            count += 1
            if (not ok or err > u_tol) and bad is None:
                bad = [seed, 20, n, i]
    return Check("composition_closure",
                 "isometry-induced maps compose as a group: flags XOR, unitaries multiply "
                 "(with conjugation after an antilinear factor)",
                 bad is None, worst, count, bad)


# -- k-dimensional subspaces ----------------------------------------------------

def compat_pair(n: int, k: int, overlap: int, rng: np.random.Generator):
    """Two k-dim subspaces spanned by columns of one random unitary, sharing ``overlap`` columns."""
    W = haar_unitary(n, rng)
    return W[:, :k], W[:, k - overlap: 2 * k - overlap]


def incompat_pair(n: int, k: int, adjacent_pair: bool, rng: np.random.Generator):
    """Generic pair, or an adjacent pair whose differing directions are neither equal nor orthogonal."""
    if not adjacent_pair:
        return random_subspace(n, k, rng), random_subspace(n, k, rng)
    W = haar_unitary(n, rng)
    shared = W[:, : k - 1]
    c = rng.uniform(0.2, 0.8) * np.pi / 2
    b = W[:, k - 1]
    d = np.cos(c) * b + np.sin(c) * np.exp(1j * rng.uniform(0, 2 * np.pi)) * W[:, k]
    return np.column_stack([shared, b]), np.column_stack([shared, d])


def _principal_cosines(X, Y) -> np.ndarray:
    return np.linalg.svd(X.conj().T @ Y, compute_uv=False)


def check_compatibility(seed: int, n: int = 4, k: int = 2, pairs: int = 20, tol: float = 1e-8) -> Check:
    """Commuting projections iff all principal angles are 0 or pi/2 (common orthonormal basis)."""
    count, bad = 0, None
    for i in range(pairs):
        for cls in (True, False):
            rng = make_rng(seed, 30, k, i, int(cls))
            if cls:
                overlap = i % 2 if k > 1 else 0
                X, Y = compat_pair(n, k, overlap, rng)
                adj_expect = overlap == k - 1
            else:
                X, Y = incompat_pair(n, k, bool(i % 2), rng)
                adj_expect = bool(i % 2) or k == 1
            cos = _principal_cosines(X, Y)
            oracle = bool(np.all((cos <= 1e-6) | (cos >= 1 - 1e-6)))
            ok = compatible(X, Y, tol) == oracle == cls and adjacent(X, Y) == adj_expect
            count += 1
            if not ok and bad is None:
                bad = [seed, 30, k, i, int(cls)]
    return Check(f"compatibility_k{k}",
                 "subspaces are compatible iff their projections commute; adjacency iff the "
                 "intersection has codimension one",
                 bad is None, 0.0, count, bad)


def check_interval_law(seed: int, n: int = 4, k: int = 2, pairs: int = 20, samples: int = 16) -> Check:
    """Lambda set equals the interval [X ∩ Y, X + Y] exactly for compatible pairs."""
    count, bad = 0, None
    for i in range(pairs):
        for cls in (True, False):
            rng = make_rng(seed, 31, k, i, int(cls))
            if cls:
                X, Y = compat_pair(n, k, i % 2 if k > 1 else 0, rng)
            else:
                X, Y = incompat_pair(n, k, bool(i % 2), rng)
            M, N = subspace_intersection(X, Y), subspace_sum(X, Y)
            PX, PY = projector_onto(X), projector_onto(Y)
            Zs = [X, Y] + [sample_interval(M, N, k, rng) for _ in range(samples)]
            in_interval = [interval_membership(M, N, Z, k) for Z in Zs]
            in_lambda = [bool(lambda_membership(PX, PY, projector_onto(Z), k)) for Z in Zs]
            equal = in_lambda == in_interval
            ok = all(in_interval) and (equal if cls else (not equal and in_lambda[0] and in_lambda[1]))
            count += len(Zs)
            if not ok and bad is None:
                bad = [seed, 31, k, i, int(cls)]
    return Check(f"interval_law_k{k}",
                 "the Lambda set of (X, Y) lies in the interval [X ∩ Y, X + Y] and fills it "
                 "iff X and Y are compatible",
                 bad is None, 0.0, count, bad)


# -- suites ---------------------------------------------------------------------

SUITES = ("lemmas", "theorem", "section5", "all")


def lemma_checks(seed: int, trials: int = 50, n: int = 2) -> list[Check]:
    return [
        check_circle_membership(seed, trials, n),
        check_no_orthogonal_pair(seed, trials, n),
        check_circle_intersections(seed, trials, n=n),
        check_equivariance(seed, trials, n),
        check_sphere_rotations(seed, 2 * trials),
        check_sphere_points(seed, 20 * trials, 10 * trials),
    ]


def theorem_checks(seed: int, dims=THEOREM_DIMS, trials: int = 100) -> list[Check]:
    small = max(1, trials // 10)
    return [
        check_round_trip(seed, dims, trials),
        check_trace_identity(seed, dims, trials),
        check_negative_detection(seed, dims, max(1, trials // 2)),
        check_line_behavior(seed, dims, small),
        check_lambda_images(seed, dims, small),
        check_composition(seed, dims, small),
    ]


def section5_checks(seed: int, n: int = 4, trials: int = 20) -> list[Check]:
    out = []
    for k in (1, 2):
        out += [check_compatibility(seed, n, k, trials), check_interval_law(seed, n, k, trials)]
    return out


def run_suite(suite: str, seed: int, dims=None, trials: int | None = None, timing: bool = False,
              command: str = "") -> RunReport:
    """Run one named suite and collect a :class:`RunReport`."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    start = time.perf_counter()
    checks: list[Check] = []
    used_dims: list[int] = []
    if suite in ("lemmas", "all"):
        n = dims[0] if dims and suite == "lemmas" else 2
        checks += lemma_checks(seed, trials or 50, n)
        used_dims.append(n)
    if suite in ("theorem", "all"):
        d = tuple(dims) if dims and suite == "theorem" else THEOREM_DIMS
        checks += theorem_checks(seed, d, trials or 100)
        used_dims += list(d)
    if suite in ("section5", "all"):
        n = dims[0] if dims and suite == "section5" else 4
        checks += section5_checks(seed, n, trials or 20)
        used_dims.append(n)
    report = RunReport(command or f"verify --suite {suite}", seed, sorted(set(used_dims)),
                       trials or 0, checks)
    if timing:
        report.wall_time_s = round(time.perf_counter() - start, 3)
    return report
