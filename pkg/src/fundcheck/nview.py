"""The stacked n-view matrix: scale recovery and rank/signature diagnostics.

With per-edge scales recovered from a camera solution, the 3n x 3n symmetric
matrix with blocks lambda_ij F^{ij} has rank 6 with eigenvalue signature
(3, 3) and rank-3 block rows when the centers are not all collinear, and
rank 4 with signature (2, 2) and rank-2 block rows when they are.  The
signature condition is redundant given the rank conditions (generically and
in the collinear case), which rank_only_test exercises.
"""
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .compatibility import UNDETERMINED, _collinear
from .exceptions import InvalidInput, ReconstructionFailed, ScaleRecoveryError
from .fundamental import fundamental_map
from .projective import DEFAULT_TOL, rank_with_tol
from .reconstruction import reconstruct_complete
from .sets import canonical_edge


@dataclass
class NViewMatrix:
    views: tuple
    scales: dict
    matrix: np.ndarray


@dataclass
class NViewDiagnostics:
    mode: str
    rank: int
    signature: tuple
    block_ranks: list
    verdict: bool
    eig_margin: float
    rank_margin: float

    def to_dict(self):
        return {
            "mode": self.mode,
            "rank": self.rank,
            "signature": list(self.signature),
            "block_ranks": list(self.block_ranks),
            "verdict": self.verdict,
            "eig_margin": self.eig_margin,
            "rank_margin": self.rank_margin,
        }


def assemble(fset, scales):
    """Symmetric 3n x 3n matrix with blocks scales[(i,j)] * F^{ij}.

    scales: dict {(i, j): nonzero float}; both orientations may be present but
    must agree (the matrix has to come out symmetric).
    """
    if not fset.complete:
        raise InvalidInput("assemble needs a complete set")
    lam = {}
    for key, v in scales.items():
        i, j = key
        c = canonical_edge(i, j)
        v = float(v)
        if v == 0.0 or not np.isfinite(v):
            raise InvalidInput(f"scale for edge {key} must be finite and nonzero")
        if c in lam and lam[c] != v:
            raise InvalidInput(f"asymmetric scales for edge {c}")
        lam[c] = v
    missing = [e for e in fset.edges if e not in lam]
    if missing:
        raise InvalidInput(f"missing scales for edges {missing}")
    views = fset.views
    pos = {v: k for k, v in enumerate(views)}
    n = len(views)
    M = np.zeros((3 * n, 3 * n))
    for (i, j), F in fset.matrices.items():
        bi, bj = pos[i], pos[j]
        M[3 * bi:3 * bi + 3, 3 * bj:3 * bj + 3] = lam[(i, j)] * F
        M[3 * bj:3 * bj + 3, 3 * bi:3 * bi + 3] = lam[(i, j)] * F.T
    return NViewMatrix(views, lam, M)


def recover_scales(fset, tol=DEFAULT_TOL):
    """Per-edge scales making each scaled matrix equal a solution's output.

    Cameras are reconstructed first; each scale is the Frobenius projection
    coefficient of the reconstructed pair's fundamental matrix onto the
    stored one.  The scale of the first edge is normalized positive.
    """
    try:
        rec = reconstruct_complete(fset, tol)
    except ReconstructionFailed as exc:
        raise ScaleRecoveryError(f"no camera solution: {exc}") from exc
    fsetN = fset.normalized()
    views = fsetN.views
    cams = {v: rec.cameras[k] for k, v in enumerate(views)}
    lam = {}
    for (i, j), F in fsetN.matrices.items():
        ps = fundamental_map(cams[i], cams[j], tol)
        coeff = float(ps.ravel() @ F.ravel()) / float(F.ravel() @ F.ravel())
        if abs(coeff) <= tol.proj_tol:
            raise ScaleRecoveryError(f"vanishing scale for edge {(i, j)}")
        lam[(i, j)] = coeff
    first = fsetN.edges[0]
    if lam[first] < 0:
        v0 = first[0]
        for e in lam:
            if v0 in e:
                lam[e] = -lam[e]
    return lam


def kgg_test(nv, mode, tol=DEFAULT_TOL):
    """Rank, eigenvalue signature, and block-row ranks of an n-view matrix.

    mode "noncollinear" expects rank 6, signature (3, 3), block rows of rank
    3; mode "collinear" expects rank 4, signature (2, 2), block rows of rank
    2.  Eigenvalues are counted against ||M|| * rank_tol, and the margins of
    the smallest counted eigenvalue and singular value are reported.
    """
    M = nv.matrix if isinstance(nv, NViewMatrix) else np.asarray(nv, dtype=float)
    if mode not in ("noncollinear", "collinear"):
        raise InvalidInput(f"unknown mode {mode!r}")
    if M.shape[0] != M.shape[1] or M.shape[0] % 3:
        raise InvalidInput("n-view matrix must be square with 3x3 blocks")
    if np.max(np.abs(M - M.T)) > 1e-12 * max(np.max(np.abs(M)), 1.0):
        raise InvalidInput("n-view matrix must be symmetric")
    n = M.shape[0] // 3
    rank = rank_with_tol(M, tol)
    eig = np.linalg.eigvalsh(M)
    thr = np.max(np.abs(eig)) * tol.rank_tol
    n_pos = int(np.sum(eig > thr))
    n_neg = int(np.sum(eig < -thr))
    counted = eig[np.abs(eig) > thr]
    eig_margin = float(np.min(np.abs(counted)) / np.max(np.abs(eig))) if counted.size else 0.0
    s = np.linalg.svd(M, compute_uv=False)
    rank_margin = float(s[rank - 1] / s[0]) if rank else 0.0
    block_ranks = [rank_with_tol(M[3 * b:3 * b + 3, :], tol) for b in range(n)]
    want_rank, want_sig, want_block = (6, (3, 3), 3) if mode == "noncollinear" else (4, (2, 2), 2)
    verdict = (
        rank == want_rank
        and (n_pos, n_neg) == want_sig
        and all(r == want_block for r in block_ranks)
    )
    return NViewDiagnostics(mode, rank, (n_pos, n_neg), block_ranks, bool(verdict),
                            eig_margin, rank_margin)


def rank_only_test(nv, mode, fset=None, tol=DEFAULT_TOL):
    """Verdict from the rank and block-rank conditions alone.

    The eigenvalue-signature condition is provably redundant in the collinear
    mode, and in the noncollinear mode whenever no three epipoles are
    collinear in any image; the latter precondition is certified from fset
    and the verdict is "Undetermined" when it cannot be.
    """
    if mode == "noncollinear":
        if fset is None:
            return UNDETERMINED
        for v in fset.views:
            others = [w for w in fset.views if w != v]
            for tri in combinations(others, 3):
                if _collinear(fset.normalized(), v, tri):
                    return UNDETERMINED
    diag = kgg_test(nv, mode, tol)
    want_rank, want_block = (6, 3) if mode == "noncollinear" else (4, 2)
    ok = diag.rank == want_rank and all(r == want_block for r in diag.block_ranks)
    return "Compatible" if ok else "Incompatible"


def scale_grid_min_rank(fset, grid=None, tol=DEFAULT_TOL):
    """Smallest effective rank of the 4-view matrix over a coarse scale grid.

    Scales of the edges at the first view are fixed to 1 (rescaling a block
    row and column never changes the rank), and the remaining three edges
    sweep the grid.  Returns (min_rank, min_seventh_sv_ratio): when the
    second value stays large, no grid scaling brings the matrix to rank 6.
    """
    if fset.n != 4 or not fset.complete:
        raise InvalidInput("scale_grid_min_rank expects a complete 4-view set")
    if grid is None:
        grid = [c * 2.0 ** k for k in range(-3, 4) for c in (1.0, -1.0)]
    fsetN = fset.normalized()
    views = fsetN.views
    first = views[0]
    free_edges = [e for e in fsetN.edges if first not in e]
    fixed_edges = [e for e in fsetN.edges if first in e]
    best_rank, best_ratio = 12, np.inf
    for vals in product(grid, repeat=len(free_edges)):
        lam = {e: 1.0 for e in fixed_edges}
        lam.update(dict(zip(free_edges, vals)))
        M = assemble(fsetN, lam).matrix
        s = np.linalg.svd(M, compute_uv=False)
        best_rank = min(best_rank, int(np.sum(s / s[0] >= tol.rank_tol)))
        if len(s) > 6:
            best_ratio = min(best_ratio, float(s[6] / s[0]))
    return best_rank, best_ratio
