"""Dense complex linear algebra: orthonormalization, ONS extension, Gram
matrices, and Hermitian eigendecomposition.

All routines are deterministic.  Vectors carry their ambient space;
matrices are plain complex ndarrays.
"""

from __future__ import annotations

import numpy as np

from .errors import AllVectorsNegligible, NotHermitian
from .spaces import AmbientSpace, Vector

#: construction-time orthonormality tolerance (absolute)
BUILD_TOL = 1e-12
#: verification tolerance (relative)
VERIFY_TOL = 1e-9


def _stack(vectors) -> np.ndarray:
    """Rows = vector coordinates; all vectors checked to share a space."""
    first = vectors[0]
    for v in vectors[1:]:
        first.same_space(v)
    return np.array([v.coords for v in vectors])


def gram_schmidt(vectors, rank_tol: float | None = None):
    """Orthonormalize `vectors`, dropping numerically dependent ones.

    Modified Gram-Schmidt with one reorthogonalization pass.  A vector whose
    residual after projection is at most ``rank_tol * max input norm`` is
    dropped.  Default rank_tol is 1e-10.

    Raises AllVectorsNegligible if nothing survives.
    """
    if not vectors:
        raise AllVectorsNegligible("no input vectors")
    if rank_tol is None:
        rank_tol = 1e-10
    if rank_tol < 0:
        raise ValueError("rank_tol must be nonnegative")
    space = vectors[0].space
    rows = _stack(vectors)
    scale = max(np.linalg.norm(rows, axis=1).max(), 0.0)
    if scale == 0.0:
        raise AllVectorsNegligible("all inputs are zero")
    basis = []
    for row in rows:
        v = row.copy()
        for _ in range(2):  # reorthogonalize once for stability
            for b in basis:
                v -= np.vdot(b, v) * b
        r = np.linalg.norm(v)
        if r > rank_tol * scale:
            basis.append(v / r)
    if not basis:
        raise AllVectorsNegligible("every vector dropped as dependent")
    return [Vector(b, space) for b in basis]


def extend_ons(ons, count: int, space: AmbientSpace):
    """Extend an orthonormal system by `count` fresh orthonormal vectors.

    The extension draws fresh coordinates from the space's allocator, which
    are orthogonal to everything instantiated so far, so the result is
    deterministic given the allocator state.

    Raises CapacityExceeded if the coordinate budget is insufficient.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if ons:
        G = gram_matrix(ons)
        if np.max(np.abs(G - np.eye(len(ons)))) > 1e-10:
            raise ValueError("input system is not orthonormal to 1e-10")
    indices = space.allocate(count)
    return [space.basis_vector(i) for i in indices]


def gram_matrix(vectors) -> np.ndarray:
    """Matrix of pairwise inner products G[i, j] = <v_i, v_j> (Hermitian)."""
    if not vectors:
        raise ValueError("empty vector list")
    rows = _stack(vectors)
    G = np.conj(rows) @ rows.T
    return 0.5 * (G + np.conj(G.T))  # symmetrize roundoff


def hermitian_eig(M: np.ndarray, tol: float = 1e-10):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues descending, eigenvector columns).  The columns are
    orthonormal and satisfy ``M v_k = w_k v_k`` to solver precision.

    Raises NotHermitian if M deviates from M^H by more than `tol` relative.
    """
    M = np.asarray(M, dtype=np.complex128)
    scale = max(np.max(np.abs(M)), 1e-300)
    if np.max(np.abs(M - np.conj(M.T))) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh(0.5 * (M + np.conj(M.T)))
    order = np.argsort(w)[::-1]
    return w[order].real, V[:, order]
