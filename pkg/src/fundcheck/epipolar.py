"""Epipoles, epipolar numbers, and the per-view action on matrix sets.

Invertible 3x3 matrices H_i, one per view, act on a set by
F^{ij} -> H_i^T F^{ij} H_j.  The action preserves compatibility and maps
epipoles to H_j^{-1} e_j^i, which makes it the main tool for bringing a set
into a sparse canonical form before evaluating polynomial conditions.
"""
import numpy as np

from .exceptions import DegenerateConfiguration, GraphError, InvalidInput
from .projective import DEFAULT_TOL, proj_normalize, rank_with_tol, right_kernel
from .sets import FundamentalSet


def epipoles(F, tol=DEFAULT_TOL):
    """Both epipoles of a single matrix F = F^{ij}.

    Returns (e_i^j, e_j^i): the left-kernel vector (epipole in image i) and
    the right-kernel vector (epipole in image j), unit and sign-fixed.
    """
    F = np.asarray(F, dtype=float)
    return right_kernel(F.T, tol), right_kernel(F, tol)


def epipolar_number(fset, s, i, j, t):
    """The scalar (e_i^s)^T F^{ij} e_j^t.

    Evaluated with the set's stored matrix representatives and unit epipoles;
    only its vanishing and ratios of such numbers carry projective meaning.
    """
    for a, b in ((s, i), (i, j), (j, t)):
        if not fset.has_edge(a, b):
            raise GraphError(f"edge ({a},{b}) missing")
    return float(fset.epipole(i, s) @ fset.F(i, j) @ fset.epipole(j, t))


def apply_action(fset, hs):
    """Transform a set by per-view matrices: F^{ij} -> H_i^T F^{ij} H_j.

    hs: dict {view: 3x3 invertible array}; views not listed keep H = I.
    The transpose convention is preserved.  Matrices are not re-normalized.
    """
    H = {}
    for v in fset.views:
        Hv = np.asarray(hs.get(v, np.eye(3)), dtype=float)
        if Hv.shape != (3, 3) or not np.all(np.isfinite(Hv)):
            raise InvalidInput(f"action for view {v} must be a finite 3x3 matrix")
        if rank_with_tol(Hv, fset.tol) != 3:
            raise InvalidInput(f"action for view {v} is singular")
        H[v] = Hv
    mats = {(i, j): H[i].T @ M @ H[j] for (i, j), M in fset.matrices.items()}
    return FundamentalSet(mats, fset.tol)


def rescale_collinear_epipoles(fset, image, others):
    """Representatives of three collinear epipoles with e^l = e^j + e^k.

    others must be the three neighbor views sorted ascending (j < k < l).
    Returns {j: alpha*e_image^j, k: beta*e_image^k, l: e_image^l}.
    """
    j, k, l = others
    ej = fset.epipole(image, j)
    ek = fset.epipole(image, k)
    el = fset.epipole(image, l)
    coeffs, *_ = np.linalg.lstsq(np.stack([ej, ek], axis=1), el, rcond=None)
    alpha, beta = float(coeffs[0]), float(coeffs[1])
    resid = np.linalg.norm(alpha * ej + beta * ek - el)
    if min(abs(alpha), abs(beta)) < 1e-6 or resid > 1e-6:
        raise DegenerateConfiguration(
            f"epipoles in image {image} do not form a proper collinear triple"
        )
    return {j: alpha * ej, k: beta * ek, l: el}


def _basis_completion(e):
    """Two unit vectors completing e to a right-handed orthonormal basis."""
    b = np.zeros(3)
    b[int(np.argmin(np.abs(e)))] = 1.0
    u = np.cross(e, b)
    u = u / np.linalg.norm(u)
    v = np.cross(e, u)
    return u, v / np.linalg.norm(v)


def collinear_action(fset, tol=None):
    """Per-view action for a set whose epipoles coincide within each image.

    H_i has the common epipole as first column and an orthonormal completion;
    the transformed matrices have zero first row and first column.
    """
    hs = {}
    for v in fset.views:
        others = [w for w in fset.views if w != v and fset.has_edge(v, w)]
        if not others:
            raise GraphError(f"view {v} has no edges")
        e = fset.epipole(v, others[0])
        u, w = _basis_completion(e)
        hs[v] = np.column_stack([e, u, w])
    return hs


def normalizing_action(fset, case_tag):
    """Per-view action bringing a 4-view set into its case's sparse pattern.

    case_tag: "Case1" (three independent epipoles per image: columns are the
    epipoles of the other views, ascending), "Case2" (distinct collinear
    epipoles: two rescaled epipoles plus x_i = F^{ij} e_j^l), "Case3" (one
    view off a line of three), or "Case4" (all epipoles coincide; works for
    any number of views).  Raises DegenerateConfiguration when some H_i is
    numerically singular.
    """
    if case_tag == "Case4":
        return collinear_action(fset)
    if fset.n != 4 or not fset.complete:
        raise InvalidInput("normalizing_action needs a complete 4-view set")
    views = fset.views
    hs = {}
    if case_tag == "Case1":
        for v in views:
            others = [w for w in views if w != v]
            hs[v] = np.column_stack([fset.epipole(v, w) for w in others])
    elif case_tag == "Case2":
        rescaled = {}
        for v in views:
            others = [w for w in views if w != v]
            rescaled[v] = rescale_collinear_epipoles(fset, v, others)
        for v in views:
            j, k, l = [w for w in views if w != v]
            x = fset.F(v, j) @ rescaled[j][l]
            nx = np.linalg.norm(x)
            if nx < 1e-12:
                raise DegenerateConfiguration(f"zero third column for view {v}")
            hs[v] = np.column_stack([rescaled[v][j], rescaled[v][k], x / nx])
    elif case_tag == "Case3":
        line, off = _case3_roles(fset)
        a, b, c = line
        e1 = rescale_collinear_epipoles(fset, off, [w for w in views if w != off])
        others_off = [w for w in views if w != off]
        x4 = np.cross(e1[others_off[0]], e1[others_off[1]])
        hs[off] = np.column_stack([e1[others_off[0]], e1[others_off[1]],
                                   x4 / np.linalg.norm(x4)])
        for v in line:
            others = [w for w in views if w != v]
            j, l = others[0], others[-1]
            x = fset.F(v, j) @ fset.epipole(j, l)
            nx = np.linalg.norm(x)
            if nx < 1e-12:
                raise DegenerateConfiguration(f"zero third column for view {v}")
            hs[v] = np.column_stack([fset.epipole(v, j), fset.epipole(v, l), x / nx])
    else:
        raise InvalidInput(f"unknown case tag {case_tag!r}")
    for v, Hv in hs.items():
        if rank_with_tol(Hv, fset.tol) != 3:
            raise DegenerateConfiguration(f"normalizing matrix for view {v} is singular")
    return hs


def _case3_roles(fset):
    """Split the four views into (three with a repeated epipole, odd one out)."""
    from .compatibility import quadruple_pattern  # local import to avoid a cycle

    tag, roles = quadruple_pattern(fset, fset.views)
    if tag != "Case3":
        raise InvalidInput("set does not have the three-collinear epipole pattern")
    return roles
