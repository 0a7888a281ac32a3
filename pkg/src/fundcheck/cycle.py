"""Viewing-graph machinery: cycle residuals on skew edge data and incremental
camera recovery on arbitrary graphs.

Skew-symmetric rank-2 matrices G^{ij} = [g^{ij}]_x are the fundamental
matrices of translation cameras exactly when the vectors g sum to zero
around every directed cycle; it is enough to check a fundamental cycle
basis (spanning tree plus chords), and the cameras are then read off by
accumulating g along tree paths.
"""
from collections import deque

import numpy as np

from .compatibility import COMPATIBLE, INCOMPATIBLE, UNDETERMINED, CompatReport
from .exceptions import (
    CycleConditionViolated,
    DegenerateConfiguration,
    GraphError,
    InvalidInput,
)
from .fundamental import canonical_pair, fundamental_map, translation_camera
from .projective import DEFAULT_TOL, cross_matrix, cross_vector, proj_distance
from .reconstruction import extend_camera
from .sets import canonical_edge


class ViewingGraph:
    """Undirected simple graph of views; vertices are integer labels."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(sorted(set(int(v) for v in vertices)))
        if not self.vertices:
            raise InvalidInput("graph has no vertices")
        seen = set()
        for e in edges:
            i, j = canonical_edge(int(e[0]), int(e[1]))
            if (i, j) in seen:
                raise InvalidInput(f"duplicate edge ({i},{j})")
            if i not in self.vertices or j not in self.vertices:
                raise InvalidInput(f"edge ({i},{j}) uses an unknown vertex")
            seen.add((i, j))
        self.edges = tuple(sorted(seen))
        self._adj = {v: [] for v in self.vertices}
        for i, j in self.edges:
            self._adj[i].append(j)
            self._adj[j].append(i)
        for v in self._adj:
            self._adj[v].sort()

    @classmethod
    def complete(cls, n):
        vs = range(1, n + 1)
        return cls(vs, [(i, j) for i in vs for j in vs if i < j])

    @classmethod
    def of_set(cls, fset):
        return cls(fset.views, fset.edges)

    def neighbors(self, v):
        return tuple(self._adj[v])

    def components(self):
        """Connected components as sorted vertex tuples, smallest-first."""
        unseen = set(self.vertices)
        comps = []
        while unseen:
            root = min(unseen)
            comp, queue = {root}, deque([root])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            unseen -= comp
            comps.append(tuple(sorted(comp)))
        return comps

    def bfs_tree(self, root):
        """Parent map {child: parent} of a breadth-first spanning tree."""
        parent = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
        return parent

    def fundamental_cycles(self):
        """One directed cycle per non-tree edge, per component.

        Each cycle is a list of directed edges (u, v); together they span the
        cycle space, so edge data summing to zero on all of them sums to zero
        on every cycle.
        """
        cycles = []
        for comp in self.components():
            root = comp[0]
            parent = self.bfs_tree(root)
            tree = {canonical_edge(c, p) for c, p in parent.items() if p is not None}
            depth = {}
            for v in parent:
                d, u = 0, v
                while parent[u] is not None:
                    u = parent[u]
                    d += 1
                depth[v] = d
            for i, j in self.edges:
                if i not in comp or canonical_edge(i, j) in tree:
                    continue
                # chord (i, j): close it with the tree path from j back to i
                a, b = i, j
                up_i, up_j = [i], [j]
                while depth[a] > depth[b]:
                    a = parent[a]
                    up_i.append(a)
                while depth[b] > depth[a]:
                    b = parent[b]
                    up_j.append(b)
                while a != b:
                    a, b = parent[a], parent[b]
                    up_i.append(a)
                    up_j.append(b)
                walk = up_j + up_i[::-1][1:]  # j ... meet ... i
                cycle = [(i, j)] + list(zip(walk, walk[1:]))
                cycles.append(cycle)
        return cycles

    def to_dict(self):
        return {"kind": "graph", "version": 1,
                "vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges]}


def skew_data(gvecs):
    """Validated per-edge 3-vectors {(i,j): g}, antisymmetric by convention.

    Keys are canonicalized to i < j; supplying both orientations is allowed
    when they are exact negatives.
    """
    out = {}
    for key, g in gvecs.items():
        i, j = key
        g = np.asarray(g, dtype=float)
        if g.shape != (3,) or not np.all(np.isfinite(g)):
            raise InvalidInput(f"edge {key} needs a finite 3-vector")
        c = canonical_edge(i, j)
        gc = g if (i, j) == c else -g
        if c in out and not np.array_equal(out[c], gc):
            raise InvalidInput(f"conflicting vectors for edge {c}")
        out[c] = gc
    return out


def skew_data_from_matrices(mats, tol=DEFAULT_TOL):
    """Extract g from skew-symmetric matrices [g]_x keyed by edge."""
    return skew_data({e: cross_vector(M, tol) for e, M in mats.items()})


def edge_vector(data, i, j):
    """g for the directed edge (i, j); reversal negates."""
    c = canonical_edge(i, j)
    if c not in data:
        raise GraphError(f"no data for edge {c}")
    return data[c] if (i, j) == c else -data[c]


def cycle_residuals(graph, data):
    """Largest normalized cycle sum over a fundamental cycle basis.

    Returns max over basis cycles of ||sum of g along the cycle|| divided by
    the largest edge norm; 0.0 for forests.  Zero means the cycle condition
    holds for every directed cycle of the graph.
    """
    if not graph.edges:
        raise InvalidInput("graph has no edges")
    for e in graph.edges:
        if e not in data:
            raise GraphError(f"no data for edge {e}")
    scale = max(np.linalg.norm(data[e]) for e in graph.edges)
    if scale == 0.0:
        raise InvalidInput("all edge vectors are zero")
    worst = 0.0
    for cycle in graph.fundamental_cycles():
        total = np.zeros(3)
        for u, v in cycle:
            total += edge_vector(data, u, v)
        worst = max(worst, float(np.linalg.norm(total) / scale))
    return worst


def cameras_from_cycle_solution(graph, data, tol=DEFAULT_TOL):
    """Translation cameras [I | t] reproducing skew edge data on a graph.

    Requires a connected graph and cycle_residuals within tol.residual_tol
    (raises CycleConditionViolated otherwise).  t is zero at the smallest
    vertex and accumulates g along spanning-tree paths; chords are then
    consistent automatically.  Returns {vertex: camera}.
    """
    comps = graph.components()
    if len(comps) != 1:
        raise InvalidInput("graph must be connected")
    residual = cycle_residuals(graph, data)
    if residual > tol.residual_tol:
        raise CycleConditionViolated(
            f"cycle residual {residual:.3e} exceeds {tol.residual_tol:.1e}"
        )
    root = graph.vertices[0]
    parent = graph.bfs_tree(root)
    t = {root: np.zeros(3)}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in graph.neighbors(u):
            if w not in t and parent.get(w) == u:
                t[w] = t[u] + edge_vector(data, u, w)
                queue.append(w)
    return {v: translation_camera(t[v]) for v in graph.vertices}


def check_general_graph(fset, graph=None, tol=DEFAULT_TOL):
    """Compatibility on an arbitrary viewing graph by triangle chaining.

    Seeds cameras from one edge, extends any vertex adjacent to two solved
    vertices (unique when the triple is non-degenerate), then verifies every
    remaining edge.  Verdicts: Compatible when all edges verify, Incompatible
    when a verified contradiction arises, Undetermined when the graph cannot
    be covered by triangle chaining (no exhaustive search is attempted).
    """
    graph = ViewingGraph.of_set(fset) if graph is None else graph
    for e in graph.edges:
        if e not in fset.matrices:
            raise GraphError(f"no matrix for graph edge {e}")
    fsetN = fset.normalized()
    residuals = []
    verdict = COMPATIBLE
    details = {"components": []}
    for comp in graph.components():
        comp_edges = [e for e in graph.edges if e[0] in comp]
        if not comp_edges:
            continue
        cams, note = _chain_component(fsetN, graph, comp, tol)
        if cams is None:
            verdict = UNDETERMINED if verdict == COMPATIBLE else verdict
            details["components"].append({"views": list(comp), "note": note})
            continue
        worst_edge, worst = None, 0.0
        for i, j in comp_edges:
            F = fundamental_map(cams[i], cams[j], tol)
            d = 1.0 if np.linalg.norm(F) == 0.0 else proj_distance(F, fsetN.matrices[(i, j)])
            residuals.append((f"graph.edge.{i}-{j}", d))
            if d > worst:
                worst_edge, worst = (i, j), d
        if worst > tol.residual_tol:
            verdict = INCOMPATIBLE
            details["components"].append(
                {"views": list(comp), "worst_edge": list(worst_edge), "distance": worst})
        else:
            details["components"].append({"views": list(comp), "covered": True})
    if verdict != COMPATIBLE:
        return CompatReport(verdict, None, residuals, tol, details)
    return CompatReport(COMPATIBLE, None, residuals, tol, details)


def _chain_component(fsetN, graph, comp, tol):
    """Cameras for one component by triangle chaining, or (None, reason)."""
    if len(comp) == 1:
        return {comp[0]: translation_camera(np.zeros(3))}, None
    seed = next(e for e in graph.edges if e[0] in comp)
    Pa, Pb = canonical_pair(fsetN.matrices[seed], tol)
    cams = {seed[0]: Pa, seed[1]: Pb}
    pending = [v for v in comp if v not in cams]
    progress = True
    while pending and progress:
        progress = False
        for v in list(pending):
            solved = [u for u in graph.neighbors(v) if u in cams]
            if len(solved) < 2:
                continue
            for k in range(len(solved)):
                for m in range(k + 1, len(solved)):
                    a, b = solved[k], solved[m]
                    try:
                        P = extend_camera(cams[a], cams[b], fsetN.F(a, v), fsetN.F(b, v), tol)
                    except DegenerateConfiguration:
                        continue
                    cams[v] = P
                    pending.remove(v)
                    progress = True
                    break
                if progress:
                    break
            if progress:
                break
    if pending:
        return None, f"triangle chaining stalled with views {pending} unsolved"
    return cams, None
