"""Scale-aware numerical primitives: projective comparison, rank, kernels.

Everything in this library lives in projective space: cameras, fundamental
matrices and epipoles are meaningful only up to a nonzero scalar.  These
helpers make that explicit: ranks are decided by singular-value ratios
against the largest singular value, vectors are compared by angle, and
representatives are normalized to unit norm with a deterministic sign.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInput, RankError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used throughout.

    rank_tol:     singular values below rank_tol * sigma_max count as zero.
    residual_tol: threshold for residuals of algebraic conditions.
    proj_tol:     threshold for projective proportionality of representatives.
    """

    rank_tol: float = 1e-9
    residual_tol: float = 1e-8
    proj_tol: float = 1e-10

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "proj_tol"):
            if not getattr(self, name) > 0:
                raise InvalidInput(f"{name} must be strictly positive")
        if self.rank_tol >= 1:
            raise InvalidInput("rank_tol must be below 1")


DEFAULT_TOL = Tolerances()


def _as_float_array(M, name="input"):
    A = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(A)):
        raise InvalidInput(f"{name} has non-finite entries")
    return A


def proj_normalize(v, sign_rel=1e-8):
    """Unit-norm representative with the first nonzero coordinate positive.

    Works for vectors and matrices (matrices are flattened row-major to pick
    the sign-fixing coordinate).  The sign coordinate is the first entry whose
    magnitude exceeds sign_rel times the largest magnitude, so representatives
    are stable under small perturbations of theoretically-zero entries.
    """
    A = _as_float_array(v)
    norm = np.linalg.norm(A)
    if norm == 0.0:
        raise InvalidInput("cannot normalize a zero vector or matrix")
    A = A / norm
    flat = A.ravel()
    big = np.abs(flat) > sign_rel * np.max(np.abs(flat))
    lead = int(np.argmax(big))
    return A if flat[lead] > 0 else -A


def proj_distance(A, B):
    """Angular distance 1 - |<A,B>| / (||A|| ||B||), in [0, 1].

    Zero exactly when A and B are proportional; invariant under nonzero
    rescaling of either argument; symmetric.
    """
    A = _as_float_array(A, "A")
    B = _as_float_array(B, "B")
    if A.shape != B.shape:
        raise InvalidInput(f"shape mismatch: {A.shape} vs {B.shape}")
    na, nb = np.linalg.norm(A), np.linalg.norm(B)
    if na == 0.0 or nb == 0.0:
        raise InvalidInput("proj_distance requires nonzero inputs")
    c = abs(float(np.dot(A.ravel(), B.ravel()))) / (na * nb)
    return max(0.0, 1.0 - min(c, 1.0))


def rank_with_tol(M, tol=DEFAULT_TOL):
    """Number of singular values at or above rank_tol times the largest one."""
    A = _as_float_array(M, "matrix")
    if A.ndim != 2 or min(A.shape) < 1:
        raise InvalidInput("rank_with_tol expects a nonempty 2-d matrix")
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s / s[0] >= tol.rank_tol))


def right_kernel(M, tol=DEFAULT_TOL):
    """Unit, sign-fixed vector spanning the one-dimensional kernel of M.

    Requires the kernel to be exactly one-dimensional (rank = columns - 1);
    for a 3x3 fundamental matrix that means rank 2, for a 3x4 camera rank 3.
    """
    A = _as_float_array(M, "matrix")
    r = rank_with_tol(A, tol)
    if r != A.shape[1] - 1:
        raise RankError(
            f"kernel is not one-dimensional: rank {r} for shape {A.shape}"
        )
    v = np.linalg.svd(A)[2][-1]
    return proj_normalize(v)


def left_kernel(M, tol=DEFAULT_TOL):
    """Unit, sign-fixed vector spanning the one-dimensional left kernel of M."""
    return right_kernel(_as_float_array(M, "matrix").T, tol)


def cross_matrix(t):
    """Skew-symmetric matrix of the cross product: cross_matrix(t) @ u = t x u."""
    t = _as_float_array(t, "vector")
    if t.shape != (3,):
        raise InvalidInput("cross_matrix expects a 3-vector")
    return np.array([
        [0.0, -t[2], t[1]],
        [t[2], 0.0, -t[0]],
        [-t[1], t[0], 0.0],
    ])


def cross_vector(M, tol=DEFAULT_TOL):
    """Inverse of cross_matrix: the axis vector of a skew-symmetric 3x3 matrix."""
    A = _as_float_array(M, "matrix")
    if A.shape != (3, 3):
        raise InvalidInput("cross_vector expects a 3x3 matrix")
    scale = np.max(np.abs(A))
    if scale == 0.0:
        return np.zeros(3)
    if np.max(np.abs(A + A.T)) > tol.residual_tol * scale:
        raise InvalidInput("matrix is not skew-symmetric")
    return np.array([A[2, 1], A[0, 2], A[1, 0]])
