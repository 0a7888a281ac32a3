"""Compatibility decision procedures for complete viewing graphs.

A set of fundamental matrices is compatible when some cameras reproduce every
matrix up to scale.  For three views the classical conditions split by
whether the camera centers are collinear; for four views there are four
epipole configurations (generic, coplanar, three-collinear, all-collinear),
each with its own polynomial test; for more views, compatibility of every
4-view subset is sufficient.  All residuals are evaluated in a fixed gauge:
unit-Frobenius matrices and unit, sign-fixed epipoles.
"""
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exceptions import DegenerateConfiguration, InvalidInput
from .projective import DEFAULT_TOL, Tolerances, cross_matrix, proj_distance
from .sets import FundamentalSet

COMPATIBLE = "Compatible"
INCOMPATIBLE = "Incompatible"
UNDETERMINED = "Undetermined"

CASE1 = "Case1"  # centers in general position; epipoles independent per image
CASE2 = "Case2"  # centers coplanar, no 3 collinear; epipoles distinct, collinear
CASE3 = "Case3"  # exactly 3 centers collinear
CASE4 = "Case4"  # all centers collinear; epipoles coincide per image
TRIPLE_NONCOLLINEAR = "TripleNonCollinear"
TRIPLE_COLLINEAR = "TripleCollinear"
INCONSISTENT = "Inconsistent"

# Epipole coincidence / collinearity threshold for the discrete classification
# step.  Looser than residual_tol on purpose: classification must tolerate
# gauge noise.  Separations inside the gray band (tol, GRAY_FACTOR * tol) are
# refused rather than guessed.
COINCIDENCE_TOL = 1e-6
GRAY_FACTOR = 10.0


@dataclass
class CompatReport:
    """Outcome of a compatibility check.

    residuals is a list of (condition-id, value) pairs; a Compatible verdict
    means every listed residual is at or below tol.residual_tol.
    """

    verdict: str
    case_tag: str | None
    residuals: list
    tol: Tolerances
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict == COMPATIBLE:
            bad = [(cid, v) for cid, v in self.residuals if v > self.tol.residual_tol]
            if bad:
                raise InvalidInput(f"Compatible verdict with residuals above tol: {bad}")

    @property
    def ok(self):
        return self.verdict == COMPATIBLE

    def worst(self):
        """(condition-id, value) of the largest residual, or None."""
        if not self.residuals:
            return None
        return max(self.residuals, key=lambda r: r[1])

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "case": self.case_tag,
            "residuals": [[cid, float(v)] for cid, v in self.residuals],
            "tol": {
                "rank_tol": self.tol.rank_tol,
                "residual_tol": self.tol.residual_tol,
                "proj_tol": self.tol.proj_tol,
            },
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _ids(views):
    return "".join(str(v) for v in views)


# ---------------------------------------------------------------------------
# epipole pattern classification


def _coincident(fset, image, a, b):
    """Whether two epipoles in an image coincide; refuses the gray band."""
    d = proj_distance(fset.epipole(image, a), fset.epipole(image, b))
    if d <= COINCIDENCE_TOL:
        return True
    if d < GRAY_FACTOR * COINCIDENCE_TOL:
        raise DegenerateConfiguration(
            f"epipole separation {d:.2e} in image {image} is inside the "
            "classification gray band"
        )
    return False


def _collinear(fset, image, others):
    """Whether the epipoles of `others` in an image lie on a line."""
    E = np.column_stack([fset.epipole(image, v) for v in others])
    s = np.linalg.svd(E, compute_uv=False)
    ratio = s[-1] / s[0]
    if ratio <= COINCIDENCE_TOL:
        return True
    if ratio < GRAY_FACTOR * COINCIDENCE_TOL:
        raise DegenerateConfiguration(
            f"epipole collinearity ratio {ratio:.2e} in image {image} is inside "
            "the classification gray band"
        )
    return False


def _image_pattern(fset, image, others):
    """('all',), ('pair', (x, y), z) or ('distinct', collinear_flag)."""
    p, q, r = others
    pq = _coincident(fset, image, p, q)
    pr = _coincident(fset, image, p, r)
    qr = _coincident(fset, image, q, r)
    n_same = pq + pr + qr
    if n_same == 3:
        return ("all",)
    if n_same == 0:
        return ("distinct", _collinear(fset, image, others))
    if n_same == 2:
        raise DegenerateConfiguration(
            f"intransitive epipole coincidences in image {image}"
        )
    if pq:
        return ("pair", (p, q), r)
    if pr:
        return ("pair", (p, r), q)
    return ("pair", (q, r), p)


def quadruple_pattern(fset, views):
    """Classify the epipole configuration of a 4-view subset.

    Returns (tag, roles); roles is (line_views, off_view) for Case3, None
    otherwise.  Raises DegenerateConfiguration for borderline separations.
    """
    views = tuple(sorted(views))
    patterns = {}
    for v in views:
        others = tuple(w for w in views if w != v)
        patterns[v] = _image_pattern(fset, v, others)
    kinds = [p[0] for p in patterns.values()]
    if all(k == "all" for k in kinds):
        return CASE4, None
    if all(k == "distinct" for k in kinds):
        flags = [patterns[v][1] for v in views]
        if not any(flags):
            return CASE1, None
        if all(flags):
            return CASE2, None
        return INCONSISTENT, None
    if kinds.count("distinct") == 1 and kinds.count("pair") == 3:
        off = next(v for v in views if patterns[v][0] == "distinct")
        if not patterns[off][1]:
            return INCONSISTENT, None
        line = tuple(v for v in views if v != off)
        for v in line:
            _, pair, odd = patterns[v]
            if odd != off or set(pair) != set(line) - {v}:
                return INCONSISTENT, None
        return CASE3, (line, off)
    return INCONSISTENT, None


def classify_quadruple(fset, views=None):
    """Case tag of a complete 4-view set (Case1..Case4 or Inconsistent)."""
    if views is None:
        if fset.n != 4:
            raise InvalidInput("classify_quadruple needs a 4-view set or explicit views")
        views = fset.views
    return quadruple_pattern(fset.normalized(), views)[0]


def _all_collinear_pattern(fset):
    """True when in every image all epipoles coincide (complete set)."""
    for v in fset.views:
        others = [w for w in fset.views if w != v]
        first = others[0]
        for w in others[1:]:
            if not _coincident(fset, v, first, w):
                return False
    return True


# ---------------------------------------------------------------------------
# triples


def _triple_states(fset, views):
    """Per-image epipole coincidence for a triple: list of three booleans."""
    i, j, k = views
    return [
        _coincident(fset, i, j, k),
        _coincident(fset, j, i, k),
        _coincident(fset, k, i, j),
    ]


def _triple_noncollinear(fset, views, tol):
    i, j, k = views
    cid = f"triple.bilinear.{_ids(views)}"
    states = _triple_states(fset, views)
    if all(states):
        return CompatReport(
            UNDETERMINED, TRIPLE_COLLINEAR, [], tol,
            {"note": "not applicable (coincident epipoles); defer to the collinear test"},
        )
    if any(states):
        return CompatReport(
            INCOMPATIBLE, INCONSISTENT, [(cid, 1.0)], tol,
            {"note": "epipoles coincide in some images but not all"},
        )
    vals = [
        float(fset.epipole(i, k) @ fset.F(i, j) @ fset.epipole(j, k)),
        float(fset.epipole(i, j) @ fset.F(i, k) @ fset.epipole(k, j)),
        float(fset.epipole(j, i) @ fset.F(j, k) @ fset.epipole(k, i)),
    ]
    residuals = [(cid, abs(v)) for v in vals]
    verdict = COMPATIBLE if all(abs(v) <= tol.residual_tol for v in vals) else INCOMPATIBLE
    return CompatReport(verdict, TRIPLE_NONCOLLINEAR, residuals, tol, {"values": vals})


def _triple_collinear(fset, views, tol):
    i, j, k = views
    cid = f"triple.collinear.product.{_ids(views)}"
    states = _triple_states(fset, views)
    if not any(states):
        return CompatReport(
            UNDETERMINED, TRIPLE_NONCOLLINEAR, [], tol,
            {"note": "not applicable (distinct epipoles); defer to the non-collinear test"},
        )
    if not all(states):
        return CompatReport(
            INCOMPATIBLE, INCONSISTENT, [(cid, 1.0)], tol,
            {"note": "epipoles coincide in some images but not all"},
        )
    e = fset.epipole(i, j)  # common epipole in image i
    product = fset.F(i, j).T @ cross_matrix(e) @ fset.F(i, k)
    if np.linalg.norm(product) <= tol.residual_tol:
        return CompatReport(
            INCOMPATIBLE, TRIPLE_COLLINEAR, [(cid, 1.0)], tol,
            {"note": "transfer product is the zero matrix"},
        )
    d = proj_distance(product, fset.F(j, k))
    verdict = COMPATIBLE if d <= tol.residual_tol else INCOMPATIBLE
    return CompatReport(verdict, TRIPLE_COLLINEAR, [(cid, d)], tol, {})


def _triple_dispatch(fset, views, tol):
    """Route a triple to whichever test its epipole pattern selects."""
    try:
        states = _triple_states(fset, views)
    except DegenerateConfiguration as exc:
        return CompatReport(UNDETERMINED, None, [], tol, {"note": str(exc)})
    if all(states):
        return _triple_collinear(fset, views, tol)
    return _triple_noncollinear(fset, views, tol)


def _triple_set(F12, F13, F23, tol):
    return FundamentalSet({(1, 2): F12, (1, 3): F13, (2, 3): F23}, tol).normalized()


def check_triple_noncollinear(F12, F13, F23, tol=DEFAULT_TOL):
    """Triple test for three views with pairwise-distinct epipoles.

    Compatible when, in each image, the two epipoles are distinct and the
    three bilinear epipole-matrix-epipole contractions vanish.  When the
    epipoles coincide the test does not apply and the verdict is Undetermined
    (use check_triple_collinear).
    """
    return _triple_noncollinear(_triple_set(F12, F13, F23, tol), (1, 2, 3), tol)


def check_triple_collinear(F12, F13, F23, tol=DEFAULT_TOL):
    """Triple test for three views whose epipoles coincide in each image.

    Compatible when F12^T [e]_x F13 is proportional to F23, with e the common
    epipole in the first image.
    """
    return _triple_collinear(_triple_set(F12, F13, F23, tol), (1, 2, 3), tol)


def check_triple(F12, F13, F23, tol=DEFAULT_TOL):
    """Triple test with automatic collinear / non-collinear dispatch."""
    return _triple_dispatch(_triple_set(F12, F13, F23, tol), (1, 2, 3), tol)


# ---------------------------------------------------------------------------
# quadruples

# Index patterns (s, i, j, t) of the epipolar numbers on each side of the
# 4-view product identity; every ordered epipole and every matrix appears
# exactly once per side, so the two products can be compared in a fixed gauge.
_LHS_NUMBERS = [(4, 1, 2, 3), (2, 1, 3, 4), (3, 1, 4, 2),
                (4, 2, 3, 1), (1, 2, 4, 3), (2, 3, 4, 1)]
_RHS_NUMBERS = [(3, 1, 2, 4), (4, 1, 3, 2), (2, 1, 4, 3),
                (1, 2, 3, 4), (3, 2, 4, 1), (1, 3, 4, 2)]


def _enumber(fset, views, s, i, j, t):
    """Epipolar number with positions 1..4 mapped to the actual view labels."""
    vs = [views[p - 1] for p in (s, i, j, t)]
    return float(fset.epipole(vs[1], vs[0]) @ fset.F(vs[1], vs[2]) @ fset.epipole(vs[2], vs[3]))


def _triples_pass(fset, views, tol, triple_fn):
    """Run a triple test on every 3-subset; returns (all_ok, residuals, notes)."""
    residuals, notes = [], {}
    ok = True
    for tri in combinations(views, 3):
        rep = triple_fn(fset, tri, tol)
        residuals.extend(rep.residuals)
        if rep.verdict != COMPATIBLE:
            ok = False
            notes[_ids(tri)] = rep.verdict
    return ok, residuals, notes


def _case1(fset, views, tol):
    ok, residuals, notes = _triples_pass(fset, views, tol, _triple_noncollinear)
    numbers_lhs = [_enumber(fset, views, *idx) for idx in _LHS_NUMBERS]
    numbers_rhs = [_enumber(fset, views, *idx) for idx in _RHS_NUMBERS]
    if any(abs(v) <= tol.residual_tol for v in numbers_lhs + numbers_rhs):
        return CompatReport(
            INCOMPATIBLE, INCONSISTENT, residuals + [(f"quad.case1.product.{_ids(views)}", 1.0)],
            tol, {"note": "vanishing epipolar number despite independent epipoles"},
        )
    lhs = float(np.prod(numbers_lhs))
    rhs = float(np.prod(numbers_rhs))
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    residuals.append((f"quad.case1.product.{_ids(views)}", rel))
    verdict = COMPATIBLE if ok and rel <= tol.residual_tol else INCOMPATIBLE
    details = {"lhs": lhs, "rhs": rhs}
    if notes:
        details["failed_triples"] = notes
    return CompatReport(verdict, CASE1, residuals, tol, details)


def _case2(fset, views, tol):
    from .epipolar import rescale_collinear_epipoles

    ok, residuals, notes = _triples_pass(fset, views, tol, _triple_noncollinear)
    try:
        E = {}
        for v in views:
            others = [w for w in views if w != v]
            E[v] = rescale_collinear_epipoles(fset, v, others)
        x = {}
        for v in views:
            others = [w for w in views if w != v]
            j, l = others[0], others[-1]
            x[v] = fset.F(v, j) @ E[j][l]
    except DegenerateConfiguration as exc:
        return CompatReport(UNDETERMINED, CASE2, residuals, tol, {"note": str(exc)})

    # one inner-product condition per excluded view
    for i in views:
        j, k, l = [w for w in views if w != i]
        t1 = float(
            ((fset.F(j, k) @ E[k][i]) @ (fset.F(j, l) @ E[l][i]))
            * ((fset.F(k, j) @ E[j][i]) @ (fset.F(k, l) @ E[l][i]))
            * ((fset.F(l, j) @ E[j][i]) @ (fset.F(l, k) @ E[k][i]))
        )
        t2 = float(
            np.linalg.norm(fset.F(l, j) @ E[j][i]) ** 2
            * np.linalg.norm(fset.F(j, k) @ E[k][i]) ** 2
            * np.linalg.norm(fset.F(k, l) @ E[l][i]) ** 2
        )
        scale = max(abs(t1), abs(t2))
        if scale <= tol.residual_tol ** 2:
            return CompatReport(UNDETERMINED, CASE2, residuals, tol,
                                {"note": f"degenerate inner-product condition for view {i}"})
        rel = abs(t1 + t2) / scale
        residuals.append((f"quad.case2.ijkF.{i}", rel))
        if rel > tol.residual_tol:
            ok = False

    rep = _case2_long_equation(fset, views, E, x, tol)
    if rep is not None:
        return CompatReport(UNDETERMINED, CASE2, residuals, tol, {"note": rep})
    terms = _case2_long_terms(fset, views, E, x)
    rel = abs(sum(terms)) / max(abs(t) for t in terms)
    residuals.append((f"quad.case2.long.{_ids(views)}", rel))
    if rel > tol.residual_tol:
        ok = False
    details = {"long_terms": terms}
    if notes:
        details["failed_triples"] = notes
    return CompatReport(COMPATIBLE if ok else INCOMPATIBLE, CASE2, residuals, tol, details)


def _case2_long_equation(fset, views, E, x, tol):
    """None when all six denominators are safely nonzero, else a note."""
    a, b, c, d = views
    dens = [
        x[b] @ fset.F(b, d) @ E[d][a],
        x[a] @ fset.F(a, b) @ E[b][c],
        x[c] @ fset.F(c, d) @ E[d][a],
        x[a] @ fset.F(a, c) @ E[c][b],
        x[b] @ fset.F(b, c) @ E[c][a],
        E[a][b] @ fset.F(a, d) @ x[d],
    ]
    small = [float(v) for v in dens if abs(v) <= tol.residual_tol]
    if small:
        return f"vanishing denominator in the six-term identity: {small}"
    return None


def _case2_long_terms(fset, views, E, x):
    """The six terms of the coplanar-case rational identity (labels a<b<c<d)."""
    a, b, c, d = views
    F = fset.F
    t1 = -(E[b][c] @ F(b, d) @ x[d]) / (x[b] @ F(b, d) @ E[d][a]) \
        * (x[a] @ F(a, b) @ x[b]) / (x[a] @ F(a, b) @ E[b][c])
    t2 = (E[c][b] @ F(c, d) @ x[d]) / (x[c] @ F(c, d) @ E[d][a]) \
        * (x[a] @ F(a, c) @ x[c]) / (x[a] @ F(a, c) @ E[c][b])
    t3 = (E[c][a] @ F(c, d) @ x[d]) / (x[c] @ F(c, d) @ E[d][a]) \
        * (x[b] @ F(b, c) @ x[c]) / (x[b] @ F(b, c) @ E[c][a])
    t4 = -(E[c][b] @ F(c, d) @ x[d]) / (E[a][b] @ F(a, d) @ x[d]) \
        * (E[a][b] @ F(a, c) @ x[c]) / (x[a] @ F(a, c) @ E[c][b]) \
        * (x[a] @ F(a, d) @ x[d]) / (x[c] @ F(c, d) @ E[d][a])
    t5 = (x[b] @ F(b, d) @ x[d]) / (x[b] @ F(b, d) @ E[d][a])
    t6 = -(x[c] @ F(c, d) @ x[d]) / (x[c] @ F(c, d) @ E[d][a])
    return [float(t) for t in (t1, t2, t3, t4, t5, t6)]


def _case3(fset, views, tol, roles):
    line, off = roles
    residuals, notes = [], {}
    ok = True
    rep = _triple_collinear(fset, tuple(sorted(line)), tol)
    residuals.extend(rep.residuals)
    if rep.verdict != COMPATIBLE:
        ok = False
        notes[_ids(sorted(line))] = rep.verdict
    for pair in combinations(sorted(line), 2):
        tri = tuple(sorted(pair + (off,)))
        rep = _triple_noncollinear(fset, tri, tol)
        residuals.extend(rep.residuals)
        if rep.verdict != COMPATIBLE:
            ok = False
            notes[_ids(tri)] = rep.verdict
    details = {"line": list(line), "off": off}
    if notes:
        details["failed_triples"] = notes
    return CompatReport(COMPATIBLE if ok else INCOMPATIBLE, CASE3, residuals, tol, details)


def _case4(fset, views, tol):
    ok, residuals, notes = _triples_pass(fset, views, tol, _triple_collinear)
    details = {"failed_triples": notes} if notes else {}
    return CompatReport(COMPATIBLE if ok else INCOMPATIBLE, CASE4, residuals, tol, details)


def _quadruple(fset, views, tol):
    """Classify a 4-subset and run its case check."""
    try:
        tag, roles = quadruple_pattern(fset, views)
    except DegenerateConfiguration as exc:
        return CompatReport(UNDETERMINED, None, [], tol, {"note": str(exc)})
    if tag == INCONSISTENT:
        return CompatReport(
            INCOMPATIBLE, INCONSISTENT, [(f"quad.pattern.{_ids(views)}", 1.0)], tol,
            {"note": "epipole pattern matches no four-camera configuration"},
        )
    if tag == CASE1:
        return _case1(fset, views, tol)
    if tag == CASE2:
        return _case2(fset, views, tol)
    if tag == CASE3:
        return _case3(fset, views, tol, roles)
    return _case4(fset, views, tol)


def _expect_case(fset, tol, expected):
    if fset.n != 4 or not fset.complete:
        raise InvalidInput("this check needs a complete 4-view set")
    fsetN = fset.normalized()
    tag, roles = quadruple_pattern(fsetN, fsetN.views)
    if tag != expected:
        raise InvalidInput(f"epipole pattern is {tag}, not {expected}")
    return fsetN, roles


def check_case1(fset, tol=DEFAULT_TOL):
    """Generic-position 4-view check: triples plus the product identity.

    The identity compares two products of six epipolar numbers; each matrix
    and each ordered epipole appears exactly once per side, and the residual
    is the relative gap |lhs - rhs| / max(|lhs|, |rhs|).
    """
    fsetN, _ = _expect_case(fset, tol, CASE1)
    return _case1(fsetN, fsetN.views, tol)


def check_case2(fset, tol=DEFAULT_TOL):
    """Coplanar 4-view check: triples, four inner-product conditions, and the
    six-term rational identity, evaluated with epipoles rescaled so that in
    each image e^l = e^j + e^k and with x_i = F^{ij} e_j^l."""
    fsetN, _ = _expect_case(fset, tol, CASE2)
    return _case2(fsetN, fsetN.views, tol)


def check_case3(fset, tol=DEFAULT_TOL):
    """Three-collinear-centers 4-view check: every triple must pass."""
    fsetN, roles = _expect_case(fset, tol, CASE3)
    return _case3(fsetN, fsetN.views, tol, roles)


def check_case4(fset, tol=DEFAULT_TOL):
    """All-collinear 4-view check: every triple must pass the collinear test."""
    fsetN, _ = _expect_case(fset, tol, CASE4)
    return _case4(fsetN, fsetN.views, tol)


def check_quadruple(fset, tol=DEFAULT_TOL):
    """Classify a complete 4-view set and run the matching case check."""
    if fset.n != 4 or not fset.complete:
        raise InvalidInput("check_quadruple needs a complete 4-view set")
    fsetN = fset.normalized()
    return _quadruple(fsetN, fsetN.views, tol)


# ---------------------------------------------------------------------------
# complete graphs, any number of views


def _anchor_pair(fset):
    """First view pair whose epipoles separate it from every other view.

    Such a pair certifies that the line through its two centers contains no
    other center (in any solution), which lets compatibility be decided from
    the 4-subsets through the pair alone.  Returns None when no pair
    certifies.
    """
    for a, b in combinations(fset.views, 2):
        try:
            ok = all(
                not _coincident(fset, m, a, b)
                and not _coincident(fset, a, b, m)
                and not _coincident(fset, b, a, m)
                for m in fset.views if m not in (a, b)
            )
        except DegenerateConfiguration:
            ok = False
        if ok:
            return (a, b)
    return None


def _family(cid):
    return cid.rsplit(".", 1)[0]


def _aggregate(reports, tol, case_tag):
    """Merge sub-reports: worst residual per condition family, verdict AND."""
    verdict = COMPATIBLE
    worst_by_family = {}
    failing = []
    for key, rep in reports:
        if rep.verdict == INCOMPATIBLE:
            verdict = INCOMPATIBLE
        elif rep.verdict == UNDETERMINED and verdict == COMPATIBLE:
            verdict = UNDETERMINED
        for cid, val in rep.residuals:
            fam = _family(cid)
            if fam not in worst_by_family or val > worst_by_family[fam][1]:
                worst_by_family[fam] = (cid, val)
            if val > tol.residual_tol:
                failing.append((cid, val))
    details = {
        "subchecks": [
            {"views": list(key), "case": rep.case_tag, "verdict": rep.verdict,
             "failing": [[cid, float(v)] for cid, v in rep.residuals if v > tol.residual_tol]}
            for key, rep in reports
        ],
        "failing": failing,
    }
    residuals = sorted(worst_by_family.values())
    if verdict == INCOMPATIBLE:
        bad_tags = [rep.case_tag for _, rep in reports if rep.verdict == INCOMPATIBLE]
        if INCONSISTENT in bad_tags:
            case_tag = INCONSISTENT
    return CompatReport(verdict, case_tag, residuals, tol, details)


def check_complete(fset, tol=DEFAULT_TOL, all_quadruples=False):
    """Decide compatibility of a complete set on n >= 3 views.

    Three views dispatch to the triple tests.  When all epipoles coincide in
    every image, triple-wise compatibility suffices and all triples are
    checked.  Otherwise every 4-subset must pass its case check; when a
    non-degenerate anchor pair is certified the 4-subsets through that pair
    alone are sufficient (pass all_quadruples=True to force the full scan).
    """
    if not fset.complete:
        raise InvalidInput("check_complete needs a complete set; see check_general_graph")
    if fset.n < 3:
        raise InvalidInput("need at least three views")
    fsetN = fset.normalized()
    views = fsetN.views
    if fset.n == 3:
        return _triple_dispatch(fsetN, views, tol)

    try:
        fully_collinear = _all_collinear_pattern(fsetN)
    except DegenerateConfiguration as exc:
        return CompatReport(UNDETERMINED, None, [], tol, {"note": str(exc)})

    if fully_collinear:
        reports = [(tri, _triple_collinear(fsetN, tri, tol))
                   for tri in combinations(views, 3)]
        return _aggregate(reports, tol, CASE4)

    if fset.n == 4:
        return _quadruple(fsetN, views, tol)

    quads = list(combinations(views, 4))
    anchor = None if all_quadruples else _anchor_pair(fsetN)
    if anchor is not None:
        a, b = anchor
        quads = [q for q in quads if a in q and b in q]
    reports = [(q, _quadruple(fsetN, q, tol)) for q in quads]
    case_tag = _global_case_tag(fsetN, reports)
    out = _aggregate(reports, tol, case_tag)
    if anchor is not None:
        out.details["anchor"] = list(anchor)
    return out


def _global_case_tag(fset, reports):
    """Uniform quadruple tag if there is one, else the first quadruple's tag."""
    tags = [rep.case_tag for _, rep in reports if rep.case_tag in
            (CASE1, CASE2, CASE3, CASE4)]
    if tags and all(t == tags[0] for t in tags):
        return tags[0]
    return reports[0][1].case_tag if reports else None


def uniqueness(fset):
    """"Unique" or "Family": whether a compatible set pins its cameras.

    The solution is unique up to a global projective transform unless all
    epipoles in each image coincide (all centers on one line), in which case
    a one-parameter family of center configurations exists.
    """
    if fset.n == 2:
        return "Unique"
    fsetN = fset.normalized()
    return "Family" if _all_collinear_pattern(fsetN) else "Unique"
