"""Containers for sets of fundamental matrices on a viewing graph.

A FundamentalSet maps undirected edges (i, j), i < j, of a viewing graph to
rank-2 3x3 matrices.  Accessing the reversed orientation returns the
transpose, so F(j, i) == F(i, j).T always holds.  Epipoles are unit,
sign-fixed kernel vectors and are cached per set.
"""
import numpy as np

from .exceptions import CoincidentCenters, GraphError, InvalidInput, RankError
from .fundamental import check_camera, fundamental_map
from .projective import DEFAULT_TOL, proj_normalize, rank_with_tol, right_kernel


def canonical_edge(i, j):
    if i == j:
        raise InvalidInput(f"self-loop edge ({i},{i})")
    return (i, j) if i < j else (j, i)


class FundamentalSet:
    """A set {F^{ij}} of fundamental matrices indexed by graph edges."""

    def __init__(self, matrices, tol=DEFAULT_TOL, _normalized=False):
        """matrices: dict {(i, j): 3x3 array} with i < j; views are inferred."""
        self.tol = tol
        self.matrices = {}
        views = set()
        for key, M in matrices.items():
            i, j = key
            if not (isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer))):
                raise InvalidInput(f"edge labels must be integers, got {key}")
            if i >= j:
                raise InvalidInput(f"edge keys must satisfy i < j, got {key}")
            M = np.asarray(M, dtype=float)
            if M.shape != (3, 3) or not np.all(np.isfinite(M)):
                raise InvalidInput(f"matrix for edge {key} must be a finite 3x3 array")
            if rank_with_tol(M, tol) != 2:
                raise RankError(f"matrix for edge {key} is not rank 2")
            self.matrices[(int(i), int(j))] = M.copy()
            views.update((int(i), int(j)))
        if not self.matrices:
            raise InvalidInput("a fundamental set needs at least one edge")
        self.views = tuple(sorted(views))
        self.edges = tuple(sorted(self.matrices))
        self._normalized = _normalized
        self._epipoles = {}

    @property
    def n(self):
        return len(self.views)

    @property
    def complete(self):
        n = self.n
        return len(self.edges) == n * (n - 1) // 2

    def has_edge(self, i, j):
        return canonical_edge(i, j) in self.matrices

    def F(self, i, j):
        """Matrix for the ordered pair (i, j); the reverse order transposes."""
        key = canonical_edge(i, j)
        if key not in self.matrices:
            raise GraphError(f"no matrix for edge {key}")
        M = self.matrices[key]
        return M if (i, j) == key else M.T

    def epipole(self, image, other):
        """e_image^other: unit kernel of F^{other, image}.

        The image of camera `other`'s center as seen by camera `image`."""
        key = (image, other)
        if key not in self._epipoles:
            self._epipoles[key] = right_kernel(self.F(other, image), self.tol)
        return self._epipoles[key]

    def epipoles_in_image(self, image, others=None):
        """Epipoles {other: e_image^other} for every neighbor of `image`."""
        if others is None:
            others = [v for v in self.views if v != image and self.has_edge(image, v)]
        return {v: self.epipole(image, v) for v in others}

    def normalized(self):
        """Copy with unit-Frobenius, sign-fixed matrices (identity if already)."""
        if self._normalized:
            return self
        mats = {e: proj_normalize(M) for e, M in self.matrices.items()}
        out = FundamentalSet(mats, self.tol, _normalized=True)
        return out

    def subset(self, views):
        """Restriction to a subset of views (original labels kept)."""
        views = sorted(views)
        mats = {}
        for a in range(len(views)):
            for b in range(a + 1, len(views)):
                key = (views[a], views[b])
                if key in self.matrices:
                    mats[key] = self.matrices[key]
        sub = FundamentalSet(mats, self.tol, _normalized=self._normalized)
        return sub

    @classmethod
    def from_cameras(cls, cameras, edges=None, tol=DEFAULT_TOL, normalize=True):
        """Pairwise fundamental matrices of a list of cameras (views 1..n).

        edges: optional iterable of (i, j) pairs (1-based); defaults to the
        complete graph.  Raises CoincidentCenters when a requested pair has a
        projectively zero fundamental matrix.
        """
        cams = [check_camera(P, tol, f"camera {k + 1}") for k, P in enumerate(cameras)]
        n = len(cams)
        if n < 2:
            raise InvalidInput("need at least two cameras")
        if edges is None:
            edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        mats = {}
        for i, j in (canonical_edge(i, j) for i, j in edges):
            if not (1 <= i <= n and 1 <= j <= n):
                raise InvalidInput(f"edge ({i},{j}) outside 1..{n}")
            F = fundamental_map(cams[i - 1], cams[j - 1], tol)
            scale = np.linalg.norm(cams[i - 1]) * np.linalg.norm(cams[j - 1])
            if np.linalg.norm(F) <= tol.proj_tol * scale:
                raise CoincidentCenters(i, j)
            mats[(i, j)] = proj_normalize(F) if normalize else F
        return cls(mats, tol, _normalized=normalize)
