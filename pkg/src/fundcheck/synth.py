"""Deterministic synthetic scenes for every center configuration.

Scenes are generated from a seed and a case tag; the constraint (coplanar,
three-collinear, all-collinear) is imposed by construction, and generic
margins are enforced by rejection so that no scene sits near a
classification boundary.
"""
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .exceptions import InvalidInput
from .projective import DEFAULT_TOL, rank_with_tol
from .sets import FundamentalSet

CASES = ("Case1", "Case2", "Case3", "Case4", "General")

# Rejection margins for sampled centers, far above the 1e-6 classification
# threshold so epipole patterns are never borderline.
_SEPARATION = 1e-2
_COLLINEAR_MARGIN = 5e-2
_COPLANAR_MARGIN = 5e-2
_MAX_TRIES = 1000


@dataclass(frozen=True)
class SceneSpec:
    """n views, a center configuration, a seed, and a dispersion scale."""

    n: int
    case_tag: str = "General"
    seed: int = 0
    spread: float = 1.0

    def __post_init__(self):
        if self.case_tag not in CASES:
            raise InvalidInput(f"case_tag must be one of {CASES}")
        if self.spread <= 0:
            raise InvalidInput("spread must be positive")
        minimum = {"Case1": 4, "Case2": 4, "Case3": 4, "Case4": 2, "General": 2}
        if self.n < minimum[self.case_tag]:
            raise InvalidInput(f"{self.case_tag} needs at least {minimum[self.case_tag]} views")


def _collinear_margin(a, b, c):
    u, v = b - a, c - a
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    return np.linalg.norm(np.cross(u, v)) / (nu * nv)


def _coplanar_margin(a, b, c, d):
    U = np.stack([b - a, c - a, d - a])
    norms = np.linalg.norm(U, axis=1)
    return abs(np.linalg.det(U)) / np.prod(norms)


def _separated(pts):
    return all(np.linalg.norm(p - q) >= _SEPARATION for p, q in combinations(pts, 2))


def _sample_centers(rng, spec):
    n, case, spread = spec.n, spec.case_tag, spec.spread
    for _ in range(_MAX_TRIES):
        if case in ("General", "Case1"):
            pts = [spread * rng.standard_normal(3) for _ in range(n)]
            if not _separated(pts):
                continue
            if any(_collinear_margin(*tri) < _COLLINEAR_MARGIN
                   for tri in combinations(pts, 3)):
                continue
            if case == "Case1" and any(
                    _coplanar_margin(*quad) < _COPLANAR_MARGIN
                    for quad in combinations(pts, 4)):
                continue
            return pts
        if case == "Case2":
            p0 = spread * rng.standard_normal(3)
            u = rng.standard_normal(3)
            u /= np.linalg.norm(u)
            v = rng.standard_normal(3)
            v -= (v @ u) * u
            v /= np.linalg.norm(v)
            ab = spread * rng.standard_normal((n, 2))
            pts = [p0 + a * u + b * v for a, b in ab]
            if not _separated(pts):
                continue
            if any(_collinear_margin(*tri) < _COLLINEAR_MARGIN
                   for tri in combinations(pts, 3)):
                continue
            return pts
        if case == "Case4":
            p0 = spread * rng.standard_normal(3)
            d = rng.standard_normal(3)
            d /= np.linalg.norm(d)
            taus = spread * rng.standard_normal(n)
            pts = [p0 + t * d for t in taus]
            if _separated(pts):
                return pts
            continue
        # Case3: views 1..3 on a line, the rest generic off it
        p0 = spread * rng.standard_normal(3)
        d = rng.standard_normal(3)
        d /= np.linalg.norm(d)
        taus = spread * rng.standard_normal(3)
        line = [p0 + t * d for t in taus]
        rest = [spread * rng.standard_normal(3) for _ in range(n - 3)]
        pts = line + rest
        if not _separated(pts):
            continue
        bad = False
        for tri in combinations(range(n), 3):
            if tri == (0, 1, 2):
                continue
            if _collinear_margin(*(pts[k] for k in tri)) < _COLLINEAR_MARGIN:
                bad = True
                break
        if bad:
            continue
        for quad in combinations(range(n), 4):
            if {0, 1, 2} <= set(quad):
                continue  # any quadruple through the full line is coplanar anyway
            if _coplanar_margin(*(pts[k] for k in quad)) < _COPLANAR_MARGIN:
                bad = True
                break
        if not bad:
            return pts
    raise InvalidInput(f"could not realize {case} with n={n} after {_MAX_TRIES} tries")


def _camera_with_center(rng, center4, tol):
    c = center4 / np.linalg.norm(center4)
    for _ in range(_MAX_TRIES):
        R = rng.standard_normal((3, 4))
        P = R - np.outer(R @ c, c)
        s = np.linalg.svd(P, compute_uv=False)
        if s[-1] / s[0] >= 1e-2:
            return P / np.linalg.norm(P)
    raise InvalidInput("could not sample a well-conditioned camera")


def random_scene(spec, tol=DEFAULT_TOL):
    """Cameras whose centers realize the requested configuration exactly.

    Deterministic: the same spec always returns bit-identical cameras.
    """
    rng = np.random.default_rng(spec.seed)
    pts = _sample_centers(rng, spec)
    centers = [np.append(p, 1.0) for p in pts]
    return [_camera_with_center(rng, c, tol) for c in centers]


def scene_set(spec, tol=DEFAULT_TOL):
    """Cameras plus their complete fundamental set."""
    cams = random_scene(spec, tol)
    return cams, FundamentalSet.from_cameras(cams, tol=tol)


def perturb(fset, epsilon, seed=0):
    """Move each matrix by a seeded random direction of relative size epsilon,
    then re-project to rank 2.  epsilon = 0 returns an identical copy."""
    if epsilon < 0:
        raise InvalidInput("epsilon must be nonnegative")
    if epsilon == 0.0:
        return FundamentalSet(fset.matrices, fset.tol, _normalized=fset._normalized)
    rng = np.random.default_rng(seed)
    mats = {}
    for edge in fset.edges:
        F = fset.matrices[edge]
        D = rng.standard_normal((3, 3))
        G = F + epsilon * np.linalg.norm(F) * D / np.linalg.norm(D)
        u, s, vt = np.linalg.svd(G)
        s[-1] = 0.0
        mats[edge] = (u * s) @ vt
    return FundamentalSet(mats, fset.tol)


def rank2_with_kernels(rng, left, right):
    """Random rank-2 matrix with prescribed unit left/right kernel vectors."""
    L = np.linalg.svd(left[None, :])[2][1:]   # 2x3 basis of left-perp
    R = np.linalg.svd(right[None, :])[2][1:]
    for _ in range(_MAX_TRIES):
        mix = rng.standard_normal((2, 2))
        if rank_with_tol(mix, DEFAULT_TOL) == 2:
            return L.T @ mix @ R
    raise InvalidInput("could not sample an invertible 2x2 mix")
