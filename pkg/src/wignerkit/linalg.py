"""Complex Hermitian numerical kernel.

Arrays are plain numpy: a Hermitian matrix is an ``(n, n)`` complex array, a
subspace basis is an ``(n, k)`` array with orthonormal columns.  Stacks of
matrices (leading batch axes) are accepted wherever noted, which is how the
classifier checks hundreds of images in one Jacobi run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NonFinite, NotAProjection, NotOrthonormal, WrongDim

__all__ = [
    "Projection",
    "make_rng",
    "hermitian",
    "herm_eig",
    "rank_eps",
    "projector_onto",
    "range_basis",
    "as_projection",
    "haar_unitary",
    "random_unit_vector",
    "random_rank1",
    "random_hermitian",
    "random_subspace",
    "subspace_intersection",
    "subspace_sum",
]

EIG_TOL = 1e-13
MAX_SWEEPS = 100


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based (Philox) generator for ``seed``, optionally split by ``keys``.

    ``make_rng(s, i)`` and ``make_rng(s, j)`` are independent streams, so trial
    ``i`` of a suite can be replayed without running trials ``0..i-1``.
    """
    ss = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return np.random.Generator(np.random.Philox(ss))


def hermitian(A) -> np.ndarray:
    """Hermitian matrix built from the upper triangle of ``A``.

    The diagonal is made real and the strict lower triangle is the mirror of
    the upper one, so ``H == H.conj().T`` holds exactly.  Works on stacks.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise WrongDim(f"expected square matrix, got shape {A.shape}")
    upper = np.triu(A, 1)
    diag = np.real(np.diagonal(A, axis1=-2, axis2=-1))
    H = upper + np.conj(np.swapaxes(upper, -1, -2))
    idx = np.arange(A.shape[-1])
    H[..., idx, idx] = diag
    return H


def _jacobi_stack(A: np.ndarray, tol: float, max_sweeps: int):
    # A: (B, n, n) Hermitian, modified in place
    B, n, _ = A.shape
    V = np.broadcast_to(np.eye(n, dtype=complex), (B, n, n)).copy()
    fro = np.linalg.norm(A, axis=(1, 2))
    thresh = tol * fro
    iu = np.triu_indices(n, 1)

    def off_max():
        if n == 1:
            return np.zeros(B)
        return np.abs(A[:, iu[0], iu[1]]).max(axis=1)

    for _ in range(max_sweeps):
        if np.all(off_max() <= thresh):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[:, p, q]
                mag = np.abs(b)
                # entries far below the stopping threshold (or denormal) are dropped
                # without a rotation; dividing by them would overflow
                active = mag > np.maximum(1e-3 * thresh, 1e-290)
                A[~active, p, q] = 0.0
                A[~active, q, p] = 0.0
                if not active.any():
                    continue
                safe = np.where(active, mag, 1.0)
                phase = np.where(active, b / safe, 1.0)
                with np.errstate(over="ignore"):
                    tau = (A[:, q, q].real - A[:, p, p].real) / (2.0 * safe)
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                big = np.abs(tau) > 1e150
                with np.errstate(over="ignore"):
                    t = np.where(big, 0.5 / np.where(big, tau, 1.0),
                                 sgn / (np.abs(tau) + np.sqrt(1.0 + np.where(big, 0.0, tau) ** 2)))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ph = np.conj(phase)
                # 2x2 block of the rotation acting on columns (p, q)
                g00, g01 = c, s
                g10, g11 = -s * ph, c * ph

                cp = A[:, :, p].copy()
                cq = A[:, :, q]
                A[:, :, p] = cp * g00[:, None] + cq * g10[:, None]
                A[:, :, q] = cp * g01[:, None] + cq * g11[:, None]
                rp = A[:, p, :].copy()
                rq = A[:, q, :]
                A[:, p, :] = rp * g00[:, None] + rq * np.conj(g10)[:, None]
                A[:, q, :] = rp * g01[:, None] + rq * np.conj(g11)[:, None]
                A[:, p, q] = 0.0
                A[:, q, p] = 0.0
                A[:, p, p] = A[:, p, p].real
                A[:, q, q] = A[:, q, q].real

                vp = V[:, :, p].copy()
                vq = V[:, :, q]
                V[:, :, p] = vp * g00[:, None] + vq * g10[:, None]
                V[:, :, q] = vp * g01[:, None] + vq * g11[:, None]
    else:
        if not np.all(off_max() <= thresh):
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.real(np.diagonal(A, axis1=1, axis2=2)).copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    return w, V


def herm_eig(A, tol: float = EIG_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix (or stack) by cyclic Jacobi.

    Each step applies a 2x2 unitary rotation that zeroes one off-diagonal
    entry; sweeps continue until the largest off-diagonal modulus is at most
    ``tol * ||A||_F``.

    Returns
    -------
    w : ndarray
        Real eigenvalues in ascending order, shape ``(..., n)``.
    V : ndarray
        Unitary matrix of eigenvectors (columns), shape ``(..., n, n)``.
    """
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise NonFinite("matrix has NaN or Inf entries")
    H = hermitian(A)
    lead = H.shape[:-2]
    n = H.shape[-1]
    stack = H.reshape((-1, n, n)).copy()
    w, V = _jacobi_stack(stack, tol, max_sweeps)
    return w.reshape(lead + (n,)), V.reshape(lead + (n, n))


def rank_eps(A, tol_rel: float = 1e-9) -> int:
    """Number of eigenvalues with modulus above ``tol_rel * max(1, ||A||_F)``."""
    if tol_rel <= 0:
        raise ValueError("tol_rel must be positive")
    A = np.asarray(A)
    w, _ = herm_eig(A)
    scale = max(1.0, float(np.linalg.norm(A)))
    return int(np.sum(np.abs(w) > tol_rel * scale))


@dataclass(frozen=True, eq=False)
class Projection:
    """Orthogonal projection together with an orthonormal basis of its range."""

    matrix: np.ndarray
    rank: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def _check_orthonormal(B: np.ndarray, tol: float) -> None:
    k = B.shape[1]
    err = np.linalg.norm(B.conj().T @ B - np.eye(k))
    if err > tol:
        raise NotOrthonormal(f"basis deviates from orthonormal by {err:.3e}")


def projector_onto(B, tol: float = 1e-10) -> Projection:
    """Projection ``B B*`` onto the span of the orthonormal columns of ``B``."""
    B = np.asarray(B, dtype=complex)
    if B.ndim == 1:
        B = B[:, None]
    _check_orthonormal(B, tol)
    return Projection(hermitian(B @ B.conj().T), B.shape[1], B)


def range_basis(P, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of the eigenspace of ``P`` with eigenvalues above 1/2."""
    w, V = herm_eig(np.asarray(P))
    dist = np.minimum(np.abs(w), np.abs(w - 1.0))
    if np.any(dist > tol):
        raise NotAProjection(f"eigenvalue {w[np.argmax(dist)]:.6g} is not near 0 or 1")
    return V[:, w > 0.5]


def as_projection(P, tol: float = 1e-8) -> Projection:
    """Wrap a projection matrix (or pass a ``Projection`` through)."""
    if isinstance(P, Projection):
        return P
    B = range_basis(P, tol)
    return Projection(hermitian(P), B.shape[1], B)


def _matrix(P) -> np.ndarray:
    return P.matrix if isinstance(P, Projection) else np.asarray(P, dtype=complex)


def _basis(X) -> np.ndarray:
    if isinstance(X, Projection):
        return X.basis
    X = np.asarray(X, dtype=complex)
    return X[:, None] if X.ndim == 1 else X


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary: QR of a complex Ginibre matrix,
    with the phases of ``diag(R)`` moved into ``Q``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unit_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_rank1(n: int, rng: np.random.Generator) -> Projection:
    """Unitarily invariant random rank-one projection."""
    return projector_onto(random_unit_vector(n, rng))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitian(scale * (g + g.conj().T) / 2.0)


def random_subspace(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    return haar_unitary(n, rng)[:, :k]


def _sum_eig(X, Y):
    X, Y = _basis(X), _basis(Y)
    if X.shape[0] != Y.shape[0]:
        raise WrongDim("subspaces live in different ambient dimensions")
    S = X @ X.conj().T + Y @ Y.conj().T
    return herm_eig(S)


def subspace_intersection(X, Y, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of ``X ∩ Y``: eigenvectors of ``P_X + P_Y`` at eigenvalue 2."""
    w, V = _sum_eig(X, Y)
    return V[:, np.abs(w - 2.0) <= tol]


def subspace_sum(X, Y, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of ``X + Y``: range of ``P_X + P_Y``."""
    w, V = _sum_eig(X, Y)
    return V[:, w > tol]
