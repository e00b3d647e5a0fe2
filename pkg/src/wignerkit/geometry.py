"""Geometry of rank-one projections on a projective line, and of k-dim subspaces.

Conventions
-----------
* A rank-one projection on a 2-dim frame ``(b0, b1)`` is written
  ``[[t, z], [conj(z), 1 - t]]`` with ``z = sqrt(t(1-t)) exp(-i alpha)``.
  With this sign, Pauli coordinates are
  ``(1/2, sqrt(t(1-t)) cos alpha, sqrt(t(1-t)) sin alpha, t - 1/2)``.
* ``sum_frame(P, Q)`` diagonalises ``P + Q`` as ``diag(2t, 2(1-t))`` with
  ``t >= 1/2``; the phase of ``b1`` is chosen so that ``P`` has a real,
  non-negative off-diagonal entry.  On the resulting circle ``P`` sits at
  angle 0 and ``Q`` at angle pi.
* The "Lambda set" of ``(P, Q)`` is every ``Z`` of the same rank with
  ``P + Q - Z`` again a projection of that rank.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coords import SIGMA, pauli_coords
from .errors import (
    BadInterval,
    Degenerate,
    GeometryError,
    NotOnCircle,
    NotUnitary,
    Orthogonal,
    RankMismatch,
    WrongDim,
    WrongRank,
)
from .linalg import (
    Projection,
    _basis,
    _matrix,
    herm_eig,
    projector_onto,
    rank_eps,
    subspace_intersection,
)

ORTHO_TOL = 1e-10
MEMBER_TOL = 1e-8


@dataclass(frozen=True)
class LineParam:
    t: float
    alpha: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"t must lie in [0, 1], got {self.t}")
        object.__setattr__(self, "alpha", float(self.alpha) % (2 * math.pi))


@dataclass(frozen=True, eq=False)
class SumFrame:
    """Orthonormal 2-frame (columns of ``basis``) diagonalising ``P + Q``."""

    basis: np.ndarray
    t: float

    @property
    def sum_matrix(self) -> np.ndarray:
        B = self.basis
        return (B * np.array([2 * self.t, 2 * (1 - self.t)])) @ B.conj().T

    @property
    def radius(self) -> float:
        """Modulus ``sqrt(t(1-t))`` shared by all off-diagonal entries on the circle."""
        return math.sqrt(max(self.t * (1 - self.t), 0.0))

    def local(self, P) -> np.ndarray:
        """2x2 matrix of ``P`` in this frame."""
        B = self.basis
        return B.conj().T @ _matrix(P) @ B

    def offdiag(self, P) -> complex:
        return complex(self.local(P)[0, 1])


class SpherePoint(NamedTuple):
    x0: float
    x1: float
    x2: float
    x3: float

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])


@dataclass(frozen=True, eq=False)
class SmallCircle:
    """Plane section of the Bloch sphere not passing through its centre."""

    center: np.ndarray
    radius: float
    normal: np.ndarray
    frame: SumFrame

    def points(self, m: int) -> np.ndarray:
        """``m`` equally spaced points ``(x1, x2, x3)`` on the circle."""
        e1 = np.cross(self.normal, [1.0, 0.0, 0.0])
        if np.linalg.norm(e1) < 0.5:
            e1 = np.cross(self.normal, [0.0, 1.0, 0.0])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(self.normal, e1)
        th = 2 * np.pi * np.arange(m) / m
        return self.center + self.radius * (np.outer(np.cos(th), e1) + np.outer(np.sin(th), e2))

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)[-3:]
        on_sphere = abs(x @ x - 0.25) <= tol
        on_plane = abs((x - self.center) @ self.normal) <= tol
        return bool(on_sphere and on_plane)


def _rank(P) -> int:
    return P.rank if isinstance(P, Projection) else rank_eps(_matrix(P))


def projection_from_param(p: LineParam, basis=None) -> Projection:
    """Rank-one projection with parameters ``(t, alpha)`` in an orthonormal 2-frame."""
    B = np.eye(2, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    v = np.array([math.sqrt(p.t), math.sqrt(1 - p.t) * np.exp(1j * p.alpha)])
    return projector_onto(B @ v)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    a = np.abs(v)
    i = int(np.flatnonzero(a >= a.max() - 1e-12)[0])
    return v * (np.conj(v[i]) / a[i])


def sum_frame(P, Q) -> SumFrame:
    """Frame in which ``P + Q = diag(2t, 2(1-t))`` with ``t`` in ``[1/2, 1]``.

    ``t == 1/2`` exactly when ``P`` and ``Q`` are orthogonal; ``t == 1`` when
    they coincide (then the second frame vector is an arbitrary unit vector
    orthogonal to the first).
    """
    Pm, Qm = _matrix(P), _matrix(Q)
    w, V = herm_eig(Pm + Qm)
    b0 = _fix_phase(V[:, -1])
    b1 = V[:, -2]
    off = b0.conj() @ Pm @ b1
    if abs(off) > 1e-300:
        b1 = b1 * (np.conj(off) / abs(off))
    t = min(max(w[-1] / 2.0, 0.5), 1.0)
    return SumFrame(np.column_stack([b0, b1]), float(t))


def is_rank_k_projection(M, k: int, tol: float = MEMBER_TOL) -> bool:
    """Eigenvalues of ``M`` are within ``tol`` of 1 (``k`` times) and 0 (the rest)."""
    w, _ = herm_eig(M)
    n = w.shape[-1]
    top, rest = w[..., n - k:], w[..., : n - k]
    ok = np.all(np.abs(top - 1.0) <= tol, axis=-1) & np.all(np.abs(rest) <= tol, axis=-1)
    return bool(ok) if np.ndim(ok) == 0 else ok


def lambda_membership(P, Q, Z, k: int | None = None, tol: float = MEMBER_TOL) -> bool:
    """Whether ``P + Q - Z`` is a projection of rank ``k`` (the common rank).

    ``Z`` may be a stack ``(m, n, n)``; the result is then a boolean array.
    """
    Zm = _matrix(Z)
    if Zm.ndim == 3:
        ranks = {_rank(P), _rank(Q)}
        if k is not None:
            ranks.add(k)
        if len(ranks) != 1:
            raise RankMismatch(f"ranks {sorted(ranks)} differ")
        return is_rank_k_projection(_matrix(P) + _matrix(Q) - Zm, ranks.pop(), tol)
    ranks = {_rank(P), _rank(Q), _rank(Z)}
    if len(ranks) != 1 or (k is not None and ranks != {k}):
        raise RankMismatch(f"ranks {sorted(ranks)} differ (k={k})")
    k = ranks.pop()
    return is_rank_k_projection(_matrix(P) + _matrix(Q) - _matrix(Z), k, tol)


def _check_circle_frame(frame: SumFrame) -> None:
    if abs(frame.t - 0.5) <= ORTHO_TOL:
        raise Orthogonal("generators are orthogonal: their Lambda set is the whole line")
    if frame.t >= 1.0 - ORTHO_TOL:
        raise Degenerate("generators coincide")


def sphere_point(P) -> SpherePoint:
    """Pauli coordinates of a rank-one projection on C^2 (a point of the Bloch sphere)."""
    Pm = _matrix(P)
    if Pm.shape != (2, 2):
        raise WrongDim(f"sphere points need dim 2, got {Pm.shape}")
    if _rank(P) != 1:
        raise WrongRank("sphere points need a rank-one projection")
    return SpherePoint(*(float(x) for x in pauli_coords(Pm)))


def small_circle(P, Q) -> SmallCircle:
    """Circle on the Bloch sphere traced by the Lambda set of distinct, non-orthogonal ``P, Q``.

    Centre ``O`` is the midpoint of the two sphere points, the radius is the
    distance from ``O`` to either, and the plane is normal to ``O``.
    """
    frame = sum_frame(P, Q)
    _check_circle_frame(frame)
    p, q = sphere_point(P).vec, sphere_point(Q).vec
    O = (p + q) / 2.0
    return SmallCircle(O, float(np.linalg.norm(p - O)), O / np.linalg.norm(O), frame)


def circle_angles(m: int) -> np.ndarray:
    return 2 * np.pi * np.arange(m) / m


def _circle_stack(frame: SumFrame, m: int) -> tuple[np.ndarray, np.ndarray]:
    t = frame.t
    th = circle_angles(m)
    vecs = np.stack([np.full(m, math.sqrt(t)), math.sqrt(1 - t) * np.exp(-1j * th)])
    cols = frame.basis @ vecs
    return np.einsum("ia,ja->aij", cols, cols.conj()), cols


def sample_circle(frame: SumFrame, m: int) -> list[Projection]:
    """``m`` members ``[[t, rho_j], [conj(rho_j), 1-t]]`` with ``rho_j = r exp(2 pi i j/m)``."""
    _check_circle_frame(frame)
    if m < 1:
        raise ValueError("m must be >= 1")
    mats, cols = _circle_stack(frame, m)
    return [Projection(mats[j], 1, cols[:, j:j + 1]) for j in range(m)]


def det0_check(t: float, s: float, tol: float = 1e-12) -> bool:
    """``(2t - s)(1 + s - 2t) == s(1 - s)``: the rank-one condition for ``P + Q - Z``."""
    return abs((2 * t - s) * (1 + s - 2 * t) - s * (1 - s)) <= tol


class CircleRelation(enum.Enum):
    SAME_CIRCLE = "same_circle"
    TWO_POINTS = "two_points"


def dense_intersection(frame: SumFrame, P1, Q1, m: int = 720, tol: float = MEMBER_TOL):
    """Members of the circle through ``P1, Q1`` (sampled ``m`` times) that also
    lie on ``frame``'s circle.  Returns ``(angles, projections)`` where angles
    are measured on the circle of ``P1, Q1`` (``P1`` at 0, ``Q1`` at pi)."""
    inner = sum_frame(P1, Q1)
    _check_circle_frame(inner)
    mats, cols = _circle_stack(inner, m)
    hit = np.atleast_1d(is_rank_k_projection(frame.sum_matrix - mats, 1, tol))
    idx = np.flatnonzero(hit)
    return circle_angles(m)[idx], [Projection(mats[i], 1, cols[:, i:i + 1]) for i in idx]


def _ang(a: float, b: float) -> float:
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi)


def circles_intersection_count(
    frame: SumFrame, P1, Q1, tol: float = MEMBER_TOL, m: int = 720, ang_tol: float = 1e-6
) -> CircleRelation:
    """Relation between the circle of ``frame`` and the one generated by two of its members.

    Off-diagonal entries ``w, z`` of ``P1, Q1`` in the frame decide it: the
    circles coincide iff ``w + z == 0``.  Otherwise they meet in exactly
    ``P1`` and ``Q1``, which is confirmed on a dense sample.
    """
    S = frame.sum_matrix
    for X in (P1, Q1):
        if not is_rank_k_projection(S - _matrix(X), 1, tol):
            raise NotOnCircle("projection is not a member of the frame's circle")
    if np.linalg.norm(_matrix(P1) - _matrix(Q1)) <= tol:
        raise NotOnCircle("the two members must be distinct")
    w, z = frame.offdiag(P1), frame.offdiag(Q1)
    if abs(w + z) <= tol:
        return CircleRelation.SAME_CIRCLE
    _, found = dense_intersection(frame, P1, Q1, m, tol)
    found_angles = sorted(np.angle([frame.offdiag(Z) for Z in found]))
    targets = sorted([np.angle(w), np.angle(z)])
    if len(found_angles) != 2 or any(_ang(a, b) > ang_tol for a, b in zip(found_angles, targets)):
        raise GeometryError(
            f"dense intersection found {len(found_angles)} points, expected the two generators"
        )
    return CircleRelation.TWO_POINTS


def antipodal_iff_orthogonal(P, Q, tol: float = ORTHO_TOL) -> bool:
    """Whether the sphere points of ``P, Q`` are antipodal.

    ``tr(PQ) = |x_P + x_Q|^2`` for points on the sphere, so the antipodality
    test and the orthogonality test ``tr(PQ) <= tol`` must agree; a
    disagreement raises :class:`GeometryError`.
    """
    x, y = sphere_point(P).vec, sphere_point(Q).vec
    antipodal = float(np.sum((x + y) ** 2)) <= tol
    orthogonal = float(np.real(np.trace(_matrix(P) @ _matrix(Q)))) <= tol
    if antipodal != orthogonal:
        raise GeometryError("antipodality and orthogonality disagree")
    return antipodal


def su2_to_o3(U, antilinear: bool = False, tol: float = 1e-10) -> np.ndarray:
    """3x3 orthogonal matrix of the action ``A -> U A U*`` (or ``U conj(A) U*``)
    on the Pauli vector ``(x1, x2, x3)``; ``x0`` is left fixed."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise NotUnitary(f"expected a 2x2 matrix, got {U.shape}")
    if np.linalg.norm(U.conj().T @ U - np.eye(2)) > tol:
        raise NotUnitary("matrix is not unitary")
    s = SIGMA[1:]
    src = np.conj(s) if antilinear else s
    imgs = U @ src @ U.conj().T
    # R[i, j] = tr(sigma_i U sigma_j U*) / 2
    return np.real(np.einsum("iab,jba->ij", s, imgs)) / 2.0


def compatible(X, Y, tol: float = MEMBER_TOL) -> bool:
    """Whether ``X`` and ``Y`` are spanned by subsets of one orthonormal basis,
    i.e. whether their projections commute."""
    PX = _basis(X) @ _basis(X).conj().T
    PY = _basis(Y) @ _basis(Y).conj().T
    return bool(np.linalg.norm(PX @ PY - PY @ PX) <= tol)


def adjacent(X, Y, tol: float = MEMBER_TOL) -> bool:
    """Equal dimension ``k`` and a ``(k-1)``-dimensional intersection."""
    X, Y = _basis(X), _basis(Y)
    if X.shape[1] != Y.shape[1]:
        raise RankMismatch(f"dimensions {X.shape[1]} and {Y.shape[1]} differ")
    return subspace_intersection(X, Y, tol).shape[1] == X.shape[1] - 1


def _inside(X: np.ndarray, N: np.ndarray, tol: float) -> bool:
    if X.shape[1] == 0:
        return True
    return bool(np.linalg.norm(N @ (N.conj().T @ X) - X) <= tol)


def interval_membership(M, N, Z, k: int, tol: float = MEMBER_TOL) -> bool:
    """Whether ``Z`` is ``k``-dimensional with ``M ⊂ Z ⊂ N``."""
    M, N, Z = _basis(M), _basis(N), _basis(Z)
    if not (M.shape[1] < k < N.shape[1]) or not _inside(M, N, tol):
        raise BadInterval(f"need dim M < {k} < dim N and M inside N")
    return Z.shape[1] == k and _inside(Z, N, tol) and _inside(M, Z, tol)


def sample_interval(M, N, k: int, rng: np.random.Generator, tol: float = MEMBER_TOL) -> np.ndarray:
    """Random element of the interval: ``M`` plus a random subspace of ``N ∩ M^⊥``."""
    M, N = _basis(M), _basis(N)
    if not (M.shape[1] < k < N.shape[1]) or not _inside(M, N, tol):
        raise BadInterval(f"need dim M < {k} < dim N and M inside N")
    w, V = herm_eig(N @ N.conj().T - M @ M.conj().T)
    comp = V[:, w > 0.5]
    d = comp.shape[1]
    g = rng.standard_normal((d, k - M.shape[1])) + 1j * rng.standard_normal((d, k - M.shape[1]))
    q, _ = np.linalg.qr(g)
    return np.column_stack([M, comp @ q])
