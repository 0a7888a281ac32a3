"""JSON documents: cameras, fundamental sets, graphs, and reports.

All documents carry {"kind": ..., "version": 1}; matrices are row-major
nested arrays, edges are [i, j] with 1-based i < j.  Floats serialize via
repr, so a write/read round trip is lossless for double precision.
"""
import json

import numpy as np

from .cycle import ViewingGraph
from .exceptions import SchemaError
from .projective import DEFAULT_TOL
from .sets import FundamentalSet

VERSION = 1
KINDS = ("cameras", "fundamental_set", "graph", "report")


def _check_header(doc, kind):
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    if doc.get("kind") != kind:
        raise SchemaError(f"expected kind {kind!r}, got {doc.get('kind')!r}")
    if doc.get("version") != VERSION:
        raise SchemaError(f"unsupported version {doc.get('version')!r}")


def _matrix(entry, shape, what):
    try:
        M = np.asarray(entry, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{what} is not numeric") from exc
    if M.shape != shape:
        raise SchemaError(f"{what} must have shape {shape}, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise SchemaError(f"{what} has non-finite entries")
    return M


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


def dump_json(doc, path=None):
    text = json.dumps(doc, indent=2)
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text + "\n")
    return text


def cameras_to_doc(cameras, extra=None):
    doc = {"kind": "cameras", "version": VERSION,
           "cameras": [np.asarray(P, dtype=float).tolist() for P in cameras]}
    if extra:
        doc.update(extra)
    return doc


def cameras_from_doc(doc):
    _check_header(doc, "cameras")
    entries = doc.get("cameras")
    if not isinstance(entries, list) or not entries:
        raise SchemaError("cameras document needs a nonempty 'cameras' list")
    return [_matrix(e, (3, 4), f"camera {k + 1}") for k, e in enumerate(entries)]


def fset_to_doc(fset):
    return {
        "kind": "fundamental_set", "version": VERSION,
        "n": fset.n,
        "edges": [list(e) for e in fset.edges],
        "matrices": [fset.matrices[e].tolist() for e in fset.edges],
    }


def fset_from_doc(doc, tol=DEFAULT_TOL):
    _check_header(doc, "fundamental_set")
    edges = doc.get("edges")
    mats = doc.get("matrices")
    if not isinstance(edges, list) or not isinstance(mats, list) or len(edges) != len(mats):
        raise SchemaError("'edges' and 'matrices' must be lists of equal length")
    matrices = {}
    for edge, entry in zip(edges, mats):
        if (not isinstance(edge, list)) or len(edge) != 2:
            raise SchemaError(f"bad edge entry {edge!r}")
        i, j = edge
        if not (isinstance(i, int) and isinstance(j, int) and 0 < i < j):
            raise SchemaError(f"edge must be [i, j] with 1 <= i < j, got {edge}")
        if (i, j) in matrices:
            raise SchemaError(f"duplicate edge {edge}")
        matrices[(i, j)] = _matrix(entry, (3, 3), f"matrix for edge {edge}")
    if "n" in doc:
        n = doc["n"]
        top = max(j for _, j in matrices)
        if not isinstance(n, int) or n < top:
            raise SchemaError(f"'n'={n!r} inconsistent with edges up to view {top}")
    try:
        return FundamentalSet(matrices, tol)
    except Exception as exc:
        raise SchemaError(str(exc)) from exc


def graph_from_doc(doc):
    _check_header(doc, "graph")
    vs, es = doc.get("vertices"), doc.get("edges")
    if not isinstance(vs, list) or not isinstance(es, list):
        raise SchemaError("graph document needs 'vertices' and 'edges' lists")
    try:
        return ViewingGraph(vs, [tuple(e) for e in es])
    except Exception as exc:
        raise SchemaError(str(exc)) from exc


def report_to_doc(report, extra=None):
    doc = {"kind": "report", "version": VERSION}
    doc.update(report.to_dict())
    if extra:
        doc.update(extra)
    return doc
