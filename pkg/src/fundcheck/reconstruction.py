"""Camera recovery from complete sets of fundamental matrices.

The anchor pair is recovered first; each remaining view is the null space of
the stacked linear systems expressing that P_a^T F^{am} P_m and
P_b^T F^{bm} P_m are skew-symmetric.  When all epipoles coincide per image
the solution is a one-parameter family and a dedicated path builds it in a
normalized frame.
"""
from dataclasses import dataclass

import numpy as np

from .compatibility import _all_collinear_pattern, _coincident
from .exceptions import (
    DegenerateConfiguration,
    InvalidInput,
    ReconstructionFailed,
)
from .fundamental import canonical_pair, fundamental_map
from .projective import DEFAULT_TOL, proj_distance, proj_normalize, right_kernel
from .sets import FundamentalSet

# Relative gap below which the stacked extension system is treated as having
# a null space of dimension two or more (degenerate triple).
_NULLITY_GAP = 1e-6


@dataclass
class Reconstruction:
    """cameras: list of 3x4 arrays in view order; residual: worst edge
    proj_distance between the cameras' fundamental matrices and the input;
    uniqueness: "Unique" or "Family"."""

    cameras: list
    residual: float
    uniqueness: str

    def camera(self, view, views):
        return self.cameras[views.index(view)]


def _skew_rows(P, F):
    """Linear constraints on X (3x4, row-major) making P^T F X skew-symmetric."""
    A = P.T @ F  # 4x3
    rows = np.zeros((10, 12))
    r = 0
    for p in range(4):
        for q in range(p, 4):
            for k in range(3):
                rows[r, k * 4 + q] += A[p, k]
                rows[r, k * 4 + p] += A[q, k]
            r += 1
    return rows


def extend_camera(Pa, Pb, Fam, Fbm, tol=DEFAULT_TOL):
    """Unique camera P_m with fundamental matrices Fam, Fbm to Pa, Pb.

    Solves the stacked 20x12 skew-symmetry system; raises
    DegenerateConfiguration when the null space is not one-dimensional
    (collinear or near-collinear triple).
    """
    S = np.vstack([_skew_rows(Pa, Fam), _skew_rows(Pb, Fbm)])
    _, s, vt = np.linalg.svd(S)
    if s[-2] / s[0] < _NULLITY_GAP:
        raise DegenerateConfiguration(
            "camera extension system has a null space of dimension >= 2"
        )
    return proj_normalize(vt[-1]).reshape(3, 4)


def _edge_residuals(fset, cameras_by_view, tol):
    worst_edge, worst = None, 0.0
    for (i, j), F in fset.matrices.items():
        Fij = fundamental_map(cameras_by_view[i], cameras_by_view[j], tol)
        if np.linalg.norm(Fij) == 0.0:
            d = 1.0
        else:
            d = proj_distance(Fij, F)
        if d > worst:
            worst_edge, worst = (i, j), d
    return worst_edge, worst


def _anchor_edge(fset):
    """First edge whose two epipoles stay distinct in every third image."""
    for a, b in fset.edges:
        try:
            if all(
                not _coincident(fset, m, a, b)
                and not _coincident(fset, a, b, m)
                and not _coincident(fset, b, a, m)
                for m in fset.views if m not in (a, b)
            ):
                return a, b
        except DegenerateConfiguration:
            continue
    return None


def reconstruct_complete(fset, tol=DEFAULT_TOL):
    """Cameras reproducing every matrix of a complete set, or a failure.

    Raises ReconstructionFailed (with the worst offending edge) when no
    camera set matches within tol.residual_tol.  Fully-collinear inputs are
    delegated to reconstruct_collinear.
    """
    if fset.n < 2:
        raise InvalidInput("need at least two views")
    fsetN = fset.normalized()
    views = fsetN.views
    if fset.n == 2:
        P1, P2 = canonical_pair(fsetN.matrices[fsetN.edges[0]], tol)
        return Reconstruction([P1, P2], 0.0, "Unique")
    if _all_collinear_pattern(fsetN):
        return reconstruct_collinear(fsetN, tol)
    anchor = _anchor_edge(fsetN)
    if anchor is None:
        raise DegenerateConfiguration("no edge separates its views from all others")
    a, b = anchor
    Pa, Pb = canonical_pair(fsetN.F(a, b), tol)
    cams = {a: Pa, b: Pb}
    for m in views:
        if m in cams:
            continue
        cams[m] = extend_camera(Pa, Pb, fsetN.F(a, m), fsetN.F(b, m), tol)
    worst_edge, worst = _edge_residuals(fsetN, cams, tol)
    if worst > tol.residual_tol:
        raise ReconstructionFailed(
            f"no cameras match edge {worst_edge} (distance {worst:.3e})",
            edge=worst_edge, residual=worst,
        )
    return Reconstruction([cams[v] for v in views], worst, "Unique")


def reconstruct_collinear(fset, tol=DEFAULT_TOL, gammas=None):
    """One member of the camera family for an all-collinear set.

    After transforming each image so the common epipole is the first basis
    vector, every matrix has only a lower-right 2x2 block; the cameras are
    built from the blocks of the edges at the first view, with one free
    distinct nonzero scalar per remaining view (gammas; defaults to the view's
    position index).  Uniqueness is always "Family".
    """
    from .epipolar import apply_action, collinear_action

    fsetN = fset.normalized()
    views = fsetN.views
    if not fsetN.complete:
        raise InvalidInput("reconstruct_collinear needs a complete set")
    if not _all_collinear_pattern(fsetN):
        raise InvalidInput("epipoles do not coincide in every image")
    hs = collinear_action(fsetN)
    G = apply_action(fsetN, hs)
    first = views[0]
    if gammas is None:
        gammas = {v: float(k) for k, v in enumerate(views) if k > 0}
    else:
        vals = [gammas[v] for v in views[1:]]
        if len(set(vals)) != len(vals) or any(g == 0 for g in vals):
            raise InvalidInput("gammas must be distinct and nonzero")
    cams = {first: np.array([[0.0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])}
    for v in views[1:]:
        g = G.F(first, v)
        a, b, c, d = g[1, 1], g[1, 2], g[2, 1], g[2, 2]
        cams[v] = np.array([
            [gammas[v], 1.0, 0.0, 0.0],
            [0.0, 0.0, b, d],
            [0.0, 0.0, -a, -c],
        ])
    # undo the per-image transform: if P solves the transformed set, H P
    # solves the original one
    cams = {v: hs[v] @ P for v, P in cams.items()}
    worst_edge, worst = _edge_residuals(fsetN, cams, tol)
    if worst > tol.residual_tol:
        raise ReconstructionFailed(
            f"collinear family does not match edge {worst_edge} (distance {worst:.3e})",
            edge=worst_edge, residual=worst,
        )
    return Reconstruction([cams[v] for v in views], worst, "Family")


# ---------------------------------------------------------------------------
# projective equivalence of camera centers


def _center_coords(cameras, tol):
    """Centers as rows, plus an orthonormal basis of their span."""
    C = np.stack([right_kernel(np.asarray(P, dtype=float), tol) for P in cameras])
    _, s, vt = np.linalg.svd(C)
    r = int(np.sum(s / s[0] >= 1e-9))
    return C @ vt[:r].T, r


def _fit_projective(X, Y, tol, tries=8):
    """Invertible H with H x_i ~ y_i for all rows, or None.

    Null-space vectors of the incidence system are tried in order, then
    seeded random combinations (the null space can have dimension > 1 for
    degenerate configurations, where only generic members are invertible).
    """
    n, r = X.shape
    rows = []
    for x, y in zip(X, Y):
        W = np.linalg.svd(y[None, :])[2][1:]  # basis of y-perp, (r-1) x r
        for w in W:
            rows.append(np.kron(w, x))
    A = np.asarray(rows)
    _, s, vt = np.linalg.svd(A)
    null_dim = max(1, int(np.sum(s / s[0] <= 1e-8)))
    candidates = [vt[-(k + 1)] for k in range(min(null_dim, 3))]
    rng = np.random.default_rng(0)
    for _ in range(tries - len(candidates)):
        w = rng.standard_normal(min(null_dim, 4))
        candidates.append(w @ vt[-len(w):])
    for v in candidates:
        H = v.reshape(r, r)
        sH = np.linalg.svd(H, compute_uv=False)
        if sH[-1] / sH[0] < 1e-8:
            continue
        if all(proj_distance(H @ x, y) <= tol.proj_tol for x, y in zip(X, Y)):
            return H
    return None


def centers_equivalent(A, B, tol=DEFAULT_TOL):
    """Whether two camera lists have projectively equivalent center sets.

    True when an invertible transform of projective 3-space maps the centers
    of A onto the centers of B, fitted in least squares over all centers and
    verified pointwise within tol.proj_tol.  Center sets spanning subspaces
    of different dimensions are never equivalent; lower-dimensional spans are
    compared inside their spans.
    """
    if len(A) != len(B):
        raise InvalidInput("camera lists must have equal length")
    if len(A) == 0:
        raise InvalidInput("camera lists are empty")
    X, ra = _center_coords(A, tol)
    Y, rb = _center_coords(B, tol)
    if ra != rb:
        return False
    if ra == 1:
        return True
    return _fit_projective(X, Y, tol) is not None
