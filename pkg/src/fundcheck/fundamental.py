"""The fundamental map on camera pairs and camera-level verification.

A camera is a rank-3 real 3x4 matrix; its center is its kernel.  The
fundamental matrix of two cameras with distinct centers is the rank-2 3x3
matrix F such that x^T F y is the 6x6 determinant

    det [ P1  x  0 ]
        [ P2  0  y ]

as a bilinear form in x and y.  Each entry of F is computed literally as one
such determinant with x, y standard basis vectors; the cost is negligible at
this scale and the convention is unambiguous.
"""
import numpy as np

from .exceptions import InvalidCamera, InvalidInput, RankError
from .projective import (
    DEFAULT_TOL,
    cross_matrix,
    proj_normalize,
    rank_with_tol,
    right_kernel,
)


def check_camera(P, tol=DEFAULT_TOL, name="camera"):
    """Validate a 3x4 rank-3 camera; returns it as a float array."""
    P = np.asarray(P, dtype=float)
    if P.shape != (3, 4):
        raise InvalidCamera(f"{name} must be 3x4, got {P.shape}")
    if not np.all(np.isfinite(P)):
        raise InvalidCamera(f"{name} has non-finite entries")
    if rank_with_tol(P, tol) != 3:
        raise InvalidCamera(f"{name} is rank-deficient")
    return P


def camera_center(P, tol=DEFAULT_TOL):
    """Center of a camera: the unit, sign-fixed vector spanning its kernel."""
    P = check_camera(P, tol)
    return right_kernel(P, tol)


def fundamental_map(P1, P2, tol=DEFAULT_TOL):
    """Fundamental matrix of a camera pair, as nine 6x6 determinants.

    Returns the raw 3x3 matrix.  It is (numerically) zero exactly when the
    two centers coincide; otherwise it has rank 2 and its right kernel is
    P2 @ ker(P1).
    """
    P1 = check_camera(P1, tol, "P1")
    P2 = check_camera(P2, tol, "P2")
    M = np.zeros((3, 3, 6, 6))
    M[:, :, 0:3, 0:4] = P1
    M[:, :, 3:6, 0:4] = P2
    for a in range(3):
        M[a, :, a, 4] = 1.0
    for b in range(3):
        M[:, b, 3 + b, 5] = 1.0
    return np.linalg.det(M)


def coincident_centers(P1, P2, tol=DEFAULT_TOL):
    """True when the fundamental matrix of the pair vanishes projectively."""
    F = fundamental_map(P1, P2, tol)
    scale = np.linalg.norm(P1) * np.linalg.norm(P2)
    return np.linalg.norm(F) <= tol.proj_tol * scale


def verify_fundamental(P1, P2, F, tol=DEFAULT_TOL):
    """Check whether F is proportional to the fundamental matrix of (P1, P2).

    F matches exactly when P1^T F P2 is skew-symmetric and nonzero.  Returns
    (ok, residual) with residual = ||M + M^T|| / ||M|| for M = P1^T F P2.
    """
    P1 = np.asarray(P1, dtype=float)
    P2 = np.asarray(P2, dtype=float)
    F = np.asarray(F, dtype=float)
    if not (np.all(np.isfinite(P1)) and np.all(np.isfinite(P2)) and np.all(np.isfinite(F))):
        raise InvalidInput("verify_fundamental requires finite inputs")
    M = P1.T @ F @ P2
    norm = np.linalg.norm(M)
    if norm == 0.0 or norm <= tol.proj_tol * (np.linalg.norm(P1) * np.linalg.norm(F) * np.linalg.norm(P2)):
        return False, 1.0
    residual = float(np.linalg.norm(M + M.T) / norm)
    return residual <= tol.residual_tol, residual


def canonical_pair(F, tol=DEFAULT_TOL):
    """One camera pair whose fundamental matrix is proportional to F.

    P1 = [I | 0] and P2 = [ [a]_x F^T | a ] with a spanning ker F.  Any other
    pair with the same fundamental matrix differs by one shared invertible
    4x4 transform.
    """
    F = np.asarray(F, dtype=float)
    if F.shape != (3, 3):
        raise InvalidInput("canonical_pair expects a 3x3 matrix")
    if rank_with_tol(F, tol) != 2:
        raise RankError("canonical_pair requires a rank-2 matrix")
    a = right_kernel(F, tol)
    P1 = np.hstack([np.eye(3), np.zeros((3, 1))])
    A = cross_matrix(a) @ F.T
    P2 = np.hstack([A / np.linalg.norm(A), a[:, None]])
    ok, residual = verify_fundamental(P1, P2, F, tol)
    if not ok:
        raise RankError(f"canonical pair residual {residual:.2e} above tolerance")
    return P1, P2


def translation_camera(t):
    """Camera [I | t]; the fundamental matrix of two of these is [t2 - t1]_x."""
    t = np.asarray(t, dtype=float)
    if t.shape != (3,):
        raise InvalidInput("translation_camera expects a 3-vector")
    return np.hstack([np.eye(3), t[:, None]])


def normalized_fundamental(P1, P2, tol=DEFAULT_TOL):
    """Unit-Frobenius, sign-fixed fundamental matrix of a camera pair.

    Raises InvalidCamera via check_camera for bad cameras; the caller is
    expected to have ruled out coincident centers (see coincident_centers).
    """
    F = fundamental_map(P1, P2, tol)
    return proj_normalize(F)
