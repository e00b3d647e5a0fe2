"""Real coordinates on the space of Hermitian n x n matrices.

The fixed orthonormal basis ("herm-orthonormal-v1") is, in order::

    D_i  = E_ii                        i = 0..n-1
    S_ij = (E_ij + E_ji) / sqrt(2)     for each pair i < j, lexicographic,
    A_ij = i (E_ji - E_ij) / sqrt(2)   immediately after its S_ij

It is orthonormal for the Frobenius inner product tr(A B), so coordinates
``c_a = tr(A B_a)`` preserve norms.  For n = 2 the Pauli coordinates used on
the Bloch sphere are related by::

    D_0 = (s0 + s3)/2,  D_1 = (s0 - s3)/2,  S_01 = s1/sqrt(2),  A_01 = s2/sqrt(2)

A linear map on Hermitian matrices is stored as the real n^2 x n^2 matrix
acting on these coordinates (``SuperOperator``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DimensionError, FormatError, NonLinear, NotUnitary, WrongDim, WrongRank
from .linalg import Projection, _matrix, hermitian, random_hermitian, rank_eps

FORMAT = "herm-orthonormal-v1"

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

_R2 = math.sqrt(2.0)
# rows: herm-orthonormal coords (D0, D1, S01, A01); columns: Pauli coords (x0..x3)
PAULI_TO_HERM = np.array(
    [
        [1.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, -1.0],
        [0.0, _R2, 0.0, 0.0],
        [0.0, 0.0, _R2, 0.0],
    ]
)
HERM_TO_PAULI = np.linalg.inv(PAULI_TO_HERM)


@lru_cache(maxsize=None)
def _basis_cached(n: int) -> np.ndarray:
    basis = np.zeros((n * n, n, n), dtype=complex)
    a = 0
    for i in range(n):
        basis[a, i, i] = 1.0
        a += 1
    for i in range(n):
        for j in range(i + 1, n):
            basis[a, i, j] = basis[a, j, i] = 1.0 / _R2
            basis[a + 1, i, j] = -1j / _R2
            basis[a + 1, j, i] = 1j / _R2
            a += 2
    basis.setflags(write=False)
    return basis


def herm_basis(n: int) -> np.ndarray:
    """The ``(n*n, n, n)`` stack of basis matrices (read-only)."""
    if n < 1:
        raise WrongDim("n must be >= 1")
    return _basis_cached(int(n))


def basis_labels(n: int) -> list[str]:
    labels = [f"D{i}" for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            labels += [f"S{i}{j}", f"A{i}{j}"]
    return labels


def trace_vector(n: int) -> np.ndarray:
    """``d_a = tr(B_a)``: ones on the diagonal elements, zero elsewhere."""
    d = np.zeros(n * n)
    d[:n] = 1.0
    return d


def _dim_from_len(m: int) -> int:
    n = math.isqrt(m)
    if n * n != m or n < 1:
        raise DimensionError(f"coordinate length {m} is not a perfect square")
    return n


def to_coords(A) -> np.ndarray:
    """Coordinates ``tr(A B_a)`` of a Hermitian matrix or stack of them."""
    A = np.asarray(A)
    n = A.shape[-1]
    return np.real(np.einsum("...ij,aji->...a", A, herm_basis(n)))


def from_coords(c) -> np.ndarray:
    """Inverse of :func:`to_coords`; accepts stacks along leading axes."""
    c = np.asarray(c, dtype=float)
    n = _dim_from_len(c.shape[-1])
    return hermitian(np.einsum("...a,aij->...ij", c, herm_basis(n)))


def pauli_coords(A) -> np.ndarray:
    """``(x0, x1, x2, x3)`` with ``A = sum x_i sigma_i``, i.e. ``x_i = tr(A sigma_i)/2``."""
    A = _matrix(A)
    if A.shape[-2:] != (2, 2):
        raise WrongDim(f"Pauli coordinates need a 2x2 matrix, got {A.shape}")
    return np.real(np.einsum("...ij,kji->...k", A, SIGMA)) / 2.0


def from_pauli(x) -> np.ndarray:
    return hermitian(np.einsum("...k,kij->...ij", np.asarray(x, dtype=float), SIGMA))


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """Real-linear map on Hermitian n x n matrices, in herm-orthonormal-v1 coordinates."""

    matrix: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DimensionError(f"superoperator matrix must be square, got {M.shape}")
        _dim_from_len(M.shape[0])
        if not np.all(np.isfinite(M)):
            raise FormatError("superoperator has non-finite entries")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self) -> int:
        return math.isqrt(self.matrix.shape[0])

    def __call__(self, A) -> np.ndarray:
        A = _matrix(A)
        if A.shape[-1] != self.dim:
            raise DimensionError(f"operator acts on dim {self.dim}, input has dim {A.shape[-1]}")
        return from_coords(to_coords(A) @ self.matrix.T)

    def __matmul__(self, other: "SuperOperator") -> "SuperOperator":
        """Composition: ``(L1 @ L2)(A) == L1(L2(A))``."""
        if not isinstance(other, SuperOperator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError("cannot compose operators of different dimension")
        return SuperOperator(self.matrix @ other.matrix)

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        if not isinstance(other, SuperOperator):
            return NotImplemented
        return SuperOperator(self.matrix + other.matrix)

    def __mul__(self, scalar: float) -> "SuperOperator":
        return SuperOperator(float(scalar) * self.matrix)

    __rmul__ = __mul__

    @classmethod
    def identity(cls, n: int) -> "SuperOperator":
        return cls(np.eye(n * n))

    @classmethod
    def zero(cls, n: int) -> "SuperOperator":
        return cls(np.zeros((n * n, n * n)))


def superop_from_action(
    apply: Callable[[np.ndarray], np.ndarray],
    n: int,
    rng: np.random.Generator | None = None,
    n_checks: int = 5,
) -> SuperOperator:
    """Tabulate a real-linear map on Hermitian matrices as a :class:`SuperOperator`.

    Column ``a`` is ``to_coords(apply(B_a))``.  Additivity is spot-checked on
    ``n_checks`` random pairs and :class:`NonLinear` is raised on failure.
    """
    basis = herm_basis(n)
    M = np.stack([to_coords(hermitian(apply(B.copy()))) for B in basis], axis=1)
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(n_checks):
        A, B = random_hermitian(n, rng), random_hermitian(n, rng)
        gap = np.linalg.norm(apply(A + B) - apply(A) - apply(B))
        if gap > 1e-8 * (np.linalg.norm(A) + np.linalg.norm(B)):
            raise NonLinear(f"apply is not additive (gap {gap:.3e})")
    return SuperOperator(M)


def _check_unitary(U: np.ndarray, tol: float) -> None:
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise NotUnitary(f"expected square matrix, got {U.shape}")
    err = np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]))
    if err > tol:
        raise NotUnitary(f"||U*U - I||_F = {err:.3e}")


def embed_isometry(U, antilinear: bool = False, tol: float = 1e-10) -> SuperOperator:
    """``A -> U A U*`` or, if ``antilinear``, ``A -> U conj(A) U*``.

    Every anti-unitary is ``U K`` with ``K`` entrywise conjugation in the
    standard basis, and ``K A K = A^T`` for Hermitian ``A``.
    """
    U = np.asarray(U, dtype=complex)
    _check_unitary(U, tol)
    basis = herm_basis(U.shape[0])
    src = np.conj(basis) if antilinear else basis
    images = U @ src @ U.conj().T
    return SuperOperator(to_coords(images).T)


def embed_trace_constant(P) -> SuperOperator:
    """``A -> tr(A) P`` for a rank-one projection ``P``."""
    Pm = _matrix(P)
    rank = P.rank if isinstance(P, Projection) else rank_eps(Pm)
    if rank != 1:
        raise WrongRank(f"trace-constant target must have rank 1, got {rank}")
    n = Pm.shape[0]
    return SuperOperator(np.outer(to_coords(Pm), trace_vector(n)))


def operator_to_json(op: SuperOperator) -> str:
    doc = {"format": FORMAT, "dim": op.dim, "matrix": op.matrix.tolist()}
    return json.dumps(doc, indent=1) + "\n"


def operator_from_json(text: str) -> SuperOperator:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    if doc.get("format") != FORMAT:
        raise FormatError(f"unknown format {doc.get('format')!r}, expected {FORMAT!r}")
    n = doc.get("dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError(f"dim must be a positive integer, got {n!r}")
    rows = doc.get("matrix")
    m = n * n
    if not isinstance(rows, list) or len(rows) != m:
        got = len(rows) if isinstance(rows, list) else type(rows).__name__
        raise FormatError(f"matrix must have {m} rows for dim {n}, got {got}")
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m:
            raise FormatError(f"matrix row {r} must have {m} entries")
        for c, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise FormatError(f"matrix entry [{r}][{c}] is not a finite number: {x!r}")
    return SuperOperator(np.array(rows, dtype=float))


def write_operator(op: SuperOperator, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(operator_to_json(op))


def read_operator(path) -> SuperOperator:
    with open(path, encoding="utf-8") as fh:
        return operator_from_json(fh.read())
