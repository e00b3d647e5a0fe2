"""Decide whether a linear map on Hermitian matrices sends rank-one projections
to rank-one projections, and if so which of the two possible forms it has:

* ``A -> U A U*`` or ``A -> U conj(A) U*`` for a unitary ``U``, or
* ``A -> tr(A) P`` for a fixed rank-one projection ``P``.

Everything is decided from images of a fixed spanning set of rank-one
projections (the probe set) plus random rank-one projections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coords import SuperOperator, embed_isometry, embed_trace_constant
from .errors import (
    Ambiguous,
    AntilinearityInconsistent,
    DimensionError,
    NotOrthogonalImages,
    PhaseNotUnimodular,
)
from .linalg import (
    Projection,
    as_projection,
    haar_unitary,
    herm_eig,
    make_rng,
    projector_onto,
    random_hermitian,
    random_rank1,
    random_unit_vector,
)

DEFAULT_TOL = 1e-8
N_RESIDUAL_SAMPLES = 20
ANTILINEAR_MARGIN = 0.1

KINDS = ("isometry", "anti_isometry", "constant", "perturbed")


@dataclass(frozen=True, eq=False)
class IsometryInduced:
    U: np.ndarray
    antilinear: bool
    residual: float


@dataclass(frozen=True, eq=False)
class TraceConstant:
    P: Projection
    residual: float


@dataclass(frozen=True, eq=False)
class NotRankOnePreserving:
    witness: Projection
    image: np.ndarray
    defect: float


Verdict = IsometryInduced | TraceConstant | NotRankOnePreserving


@dataclass(frozen=True, eq=False)
class RankOneCheck:
    """Outcome of :func:`check_preserves_rank1`; witness/image are the worst offender."""

    passed: bool
    defect: float
    witness: Projection
    image: np.ndarray

    def __bool__(self) -> bool:
        return self.passed


def probe_vectors(n: int) -> np.ndarray:
    """Unit vectors of the probe set as columns, ``n*n`` of them.

    Order: ``e_i`` for each i, then for each pair i < j the vectors
    ``(e_i + e_j)/sqrt(2)`` and ``(e_i + i e_j)/sqrt(2)``.
    """
    cols = [np.eye(n, dtype=complex)[:, i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = np.zeros(n, dtype=complex)
            v[i] = 1.0
            w = v.copy()
            v[j] = 1.0
            w[j] = 1j
            cols += [v / np.sqrt(2), w / np.sqrt(2)]
    return np.column_stack(cols)


def _pair_index(n: int, j: int) -> int:
    # position of the "+" probe for the pair (0, j); the "i" probe follows it
    return n + 2 * (j - 1)


def _outer_stack(vecs: np.ndarray) -> np.ndarray:
    return np.einsum("ia,ja->aij", vecs, vecs.conj())


def probe_set(n: int) -> np.ndarray:
    """Stack ``(n*n, n, n)`` of the probe projections."""
    return _outer_stack(probe_vectors(n))


def projection_defect(images: np.ndarray) -> np.ndarray:
    """Largest distance of an eigenvalue from {0, 1}, plus ``|tr - 1|``, per image."""
    w, _ = herm_eig(images)
    dist = np.minimum(np.abs(w), np.abs(w - 1.0)).max(axis=-1)
    tr = np.real(np.trace(images, axis1=-2, axis2=-1))
    return dist + np.abs(tr - 1.0)


def _require_dim(L: SuperOperator) -> int:
    n = L.dim
    if n < 2:
        raise DimensionError("operators on 1x1 matrices are not classified")
    return n


def check_preserves_rank1(
    L: SuperOperator,
    trials: int | None = None,
    rng: np.random.Generator | None = None,
    tol: float = DEFAULT_TOL,
) -> RankOneCheck:
    """Evaluate ``L`` on the probe set and ``trials`` random rank-one projections."""
    n = _require_dim(L)
    trials = n * n if trials is None else trials
    if trials < n * n:
        raise ValueError(f"trials must be at least n^2 = {n * n}")
    rng = make_rng(0) if rng is None else rng
    vecs = np.column_stack([probe_vectors(n)] + [random_unit_vector(n, rng) for _ in range(trials)])
    inputs = _outer_stack(vecs)
    images = L(inputs)
    defect = projection_defect(images)
    worst = int(np.argmax(defect))
    return RankOneCheck(
        passed=bool(defect[worst] <= tol),
        defect=float(defect[worst]),
        witness=projector_onto(vecs[:, worst]),
        image=images[worst],
    )


def _top_vector(P: np.ndarray) -> np.ndarray:
    _, V = herm_eig(P)
    return V[..., -1]


def _apply_isometry(U: np.ndarray, antilinear: bool, A: np.ndarray) -> np.ndarray:
    src = np.conj(A) if antilinear else A
    return U @ src @ U.conj().T


def _residual(L: SuperOperator, target, n: int, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(N_RESIDUAL_SAMPLES):
        A = random_hermitian(n, rng)
        gap = np.linalg.norm(L(A) - target(A)) / (1.0 + np.linalg.norm(A))
        worst = max(worst, float(gap))
    return worst


def recover_isometry(
    L: SuperOperator, tol: float = DEFAULT_TOL, rng: np.random.Generator | None = None
) -> tuple[np.ndarray, bool]:
    """Unitary ``U`` and antilinearity flag with ``L(A) = U A U*`` (or ``U conj(A) U*``).

    The columns of ``U`` are the ranges of ``L(E_ii)``.  Their relative phases
    come from the images of ``(e_0 + e_j)/sqrt(2)``, and the images of
    ``(e_0 + i e_j)/sqrt(2)`` tell a linear map (factor +i) from an
    antilinear one (factor -i).  Global phase: the largest entry of the first
    column is real positive, ties going to the lowest index.
    """
    n = _require_dim(L)
    rng = make_rng(0) if rng is None else rng
    images = L(probe_set(n))

    U = _top_vector(images[:n]).T.copy()
    G = U.conj().T @ U
    overlap = np.abs(G - np.diag(np.diag(G))) ** 2
    if overlap.max() > tol:
        raise NotOrthogonalImages(f"images of orthogonal probes overlap ({overlap.max():.3e})")

    u0 = U[:, 0]
    mag = np.abs(u0)
    top = int(np.flatnonzero(mag >= mag.max() - 1e-12)[0])
    U[:, 0] = u0 * (np.conj(u0[top]) / mag[top])
    u0 = U[:, 0]

    signs = []
    for j in range(1, n):
        k = _pair_index(n, j)
        nu = 2.0 * (U[:, j].conj() @ images[k] @ u0)
        if abs(abs(nu) - 1.0) > tol:
            raise PhaseNotUnimodular(f"relative phase for column {j} has modulus {abs(nu):.6g}")
        U[:, j] = nu * U[:, j]
        delta = 2.0 * (U[:, j].conj() @ images[k + 1] @ u0)
        if abs(delta - 1j) <= ANTILINEAR_MARGIN:
            signs.append(False)
        elif abs(delta + 1j) <= ANTILINEAR_MARGIN:
            signs.append(True)
        else:
            raise AntilinearityInconsistent(f"column {j}: factor {delta:.4g} is not near +i or -i")
    if len(set(signs)) > 1:
        raise AntilinearityInconsistent("columns disagree on linear vs antilinear")
    antilinear = bool(signs[0])

    res = _residual(L, lambda A: _apply_isometry(U, antilinear, A), n, rng)
    if res > tol:
        raise Ambiguous(f"recovered isometry does not reproduce L (residual {res:.3e})")
    return U, antilinear


def classify(
    L: SuperOperator,
    tol: float = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
    trials: int | None = None,
):
    """Classify ``L`` as :class:`IsometryInduced`, :class:`TraceConstant` or
    :class:`NotRankOnePreserving`.

    Near-misses are not snapped: any image whose defect exceeds ``tol`` gives
    ``NotRankOnePreserving`` with that defect.
    """
    n = _require_dim(L)
    rng = make_rng(0) if rng is None else rng
    check = check_preserves_rank1(L, trials, rng, tol)
    if not check.passed:
        return NotRankOnePreserving(check.witness, check.image, check.defect)

    images = L(probe_set(n))
    spread = np.linalg.norm(images - images[0], axis=(1, 2)).max()
    # distance to the first image <= tol/2 bounds every pairwise distance by tol
    if spread <= tol / 2:
        P = as_projection(images[0])
        res = _residual(L, lambda A: np.real(np.trace(A)) * P.matrix, n, rng)
        if res > tol:
            raise Ambiguous(f"constant on probes but L(A) != tr(A) P (residual {res:.3e})")
        return TraceConstant(P, res)

    U, antilinear = recover_isometry(L, tol, rng)
    res = _residual(L, lambda A: _apply_isometry(U, antilinear, A), n, rng)
    return IsometryInduced(U, antilinear, res)


def verdict_name(v) -> str:
    if isinstance(v, IsometryInduced):
        return "isometry"
    if isinstance(v, TraceConstant):
        return "constant"
    return "not_preserving"


def _cplx(M) -> list:
    M = np.asarray(M)
    return np.stack([M.real, M.imag], axis=-1).tolist()


def verdict_to_dict(v, seed: int | None = None) -> dict:
    doc: dict = {"verdict": verdict_name(v)}
    if isinstance(v, IsometryInduced):
        doc.update(antilinear=v.antilinear, U=_cplx(v.U), residual=v.residual)
    elif isinstance(v, TraceConstant):
        doc.update(P=_cplx(v.P.matrix), residual=v.residual)
    else:
        doc.update(defect=v.defect, witness=_cplx(v.witness.matrix), image=_cplx(v.image))
    doc["seed"] = seed
    return doc


def phase_aligned_error(U_rec: np.ndarray, U_true: np.ndarray) -> float:
    """``min over phi of ||U_rec - exp(i phi) U_true||_F``."""
    ov = np.trace(U_true.conj().T @ U_rec)
    ph = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(U_rec - ph * U_true))


def generate_with_truth(
    kind: str,
    n: int,
    rng: np.random.Generator,
    eps: float = 0.0,
    base: str = "isometry",
) -> tuple[SuperOperator, dict]:
    """Random operator of the given kind together with its ground truth.

    ``perturbed`` adds ``eps`` times a random matrix of unit Frobenius norm
    to an operator of kind ``base``.
    """
    kind = kind.replace("-", "_")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if n < 2:
        raise DimensionError("n must be >= 2")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if kind == "perturbed":
        op, truth = generate_with_truth(base, n, rng)
        E = rng.standard_normal((n * n, n * n))
        E /= np.linalg.norm(E)
        truth = dict(truth, base=truth["kind"], kind="perturbed", eps=eps)
        return SuperOperator(op.matrix + eps * E), truth
    if kind == "constant":
        P = random_rank1(n, rng)
        return embed_trace_constant(P), {"kind": kind, "P": P.matrix}
    U = haar_unitary(n, rng)
    antilinear = kind == "anti_isometry"
    return embed_isometry(U, antilinear), {"kind": kind, "U": U, "antilinear": antilinear}


def generate(kind: str, n: int, rng: np.random.Generator, eps: float = 0.0, base: str = "isometry") -> SuperOperator:
    return generate_with_truth(kind, n, rng, eps, base)[0]


def truth_to_dict(truth: dict) -> dict:
    out = {}
    for key, val in truth.items():
        out[key] = _cplx(val) if isinstance(val, np.ndarray) else val
    return out
