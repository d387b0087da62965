"""Funnel recognition, certificates, labelings and the extremal arc bound.

A DAG is a funnel when every source-sink path has a private arc, i.e. an arc
no other source-sink path uses.  Equivalently: no vertex with indegree > 1
reaches a vertex with outdegree > 1 (reaching includes the vertex itself).
Equivalently again: the vertices split into a Fork part inducing an
out-forest and a Merge part inducing an in-forest, with no Merge-to-Fork arc.
The functions below implement the degree test, the path-count test, the
certificate search and the canonical labeling; they all agree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import Arc, ArcSet, Dag
from .labeling import Label, Labeling


class NotAFunnel(Exception):
    """Raised when a funnel-only operation is applied to a non-funnel."""


def _tainted(dag: Dag) -> list[bool]:
    """tainted[v]: v or some ancestor of v has indegree > 1 (one topo pass)."""
    tainted = [False] * dag.vertex_count
    for v in dag.topo_order:
        tainted[v] = dag.in_degree(v) > 1 or any(
            tainted[u] for u in dag.in_neighbors(v)
        )
    return tainted


def is_funnel_degree(dag: Dag) -> bool:
    """Degree characterization: no tainted vertex may have outdegree > 1.

    A single vertex carrying both indegree > 1 and outdegree > 1 already
    violates the condition.  Linear time.
    """
    tainted = _tainted(dag)
    return not any(tainted[v] and dag.out_degree(v) > 1 for v in dag.vertices())


@dataclass(frozen=True)
class PathCounts:
    """Per-vertex counts of source-to-v and v-to-sink paths, saturated at 2.

    Saturation keeps the counts linear-time; 2 already means "shared".
    """

    source_paths: tuple[int, ...]
    sink_paths: tuple[int, ...]


def path_counts(dag: Dag) -> PathCounts:
    src = [0] * dag.vertex_count
    snk = [0] * dag.vertex_count
    for v in dag.topo_order:
        src[v] = 1 if dag.in_degree(v) == 0 else min(
            2, sum(src[u] for u in dag.in_neighbors(v))
        )
    for v in reversed(dag.topo_order):
        snk[v] = 1 if dag.out_degree(v) == 0 else min(
            2, sum(snk[w] for w in dag.out_neighbors(v))
        )
    return PathCounts(tuple(src), tuple(snk))


def is_funnel_private_arc(dag: Dag) -> bool:
    """Private-arc characterization via saturating path counts.

    An arc (u, v) is shared when source_paths(u) * sink_paths(v) >= 2, i.e.
    at least two source-sink paths run through it.  The DAG fails to be a
    funnel exactly when some source-sink path consists of shared arcs only,
    which we detect with one forward and one backward pass over shared arcs.
    """
    counts = path_counts(dag)
    src, snk = counts.source_paths, counts.sink_paths

    def shared(u: int, v: int) -> bool:
        return src[u] * snk[v] >= 2

    reach = [False] * dag.vertex_count  # reachable from a source via shared arcs
    for v in dag.topo_order:
        reach[v] = dag.in_degree(v) == 0 or any(
            reach[u] for u in dag.in_neighbors(v) if shared(u, v)
        )
    coreach = [False] * dag.vertex_count  # reaches a sink via shared arcs
    for v in reversed(dag.topo_order):
        coreach[v] = dag.out_degree(v) == 0 or any(
            coreach[w] for w in dag.out_neighbors(v) if shared(v, w)
        )
    return not any(
        shared(u, v) and reach[u] and coreach[v] for u, v in dag.arcs
    )


def is_funnel_by_path_enumeration(dag: Dag, max_vertices: int = 12) -> bool:
    """Brute-force reference check: enumerate every source-sink path.

    Exponential; only meant as a test oracle, hence the small size cap.
    """
    if dag.vertex_count > max_vertices:
        raise ValueError(f"path enumeration capped at {max_vertices} vertices")
    paths: list[tuple[Arc, ...]] = []
    for s in dag.vertices():
        if dag.in_degree(s) > 0:
            continue
        stack: list[tuple[int, tuple[Arc, ...]]] = [(s, ())]
        while stack:
            v, arcs = stack.pop()
            if dag.out_degree(v) == 0:
                paths.append(arcs)
                continue
            for w in dag.out_neighbors(v):
                stack.append((w, arcs + ((v, w),)))
    count: dict[Arc, int] = {}
    for arcs in paths:
        for arc in arcs:
            count[arc] = count.get(arc, 0) + 1
    # Zero-arc paths are isolated vertices; they cannot violate anything.
    return all(
        any(count[arc] == 1 for arc in arcs) for arcs in paths if arcs
    )


@dataclass(frozen=True)
class ForbiddenWitness:
    """A concrete obstruction: two arcs into path[0], two arcs out of path[-1].

    Hosts u1 != u2 and w1 != w2; together with the path arcs these form the
    subgraph whose presence certifies "not a funnel".
    """

    u1: int
    u2: int
    path: tuple[int, ...]
    w1: int
    w2: int

    def arcs(self) -> ArcSet:
        hops = [
            (self.u1, self.path[0]),
            (self.u2, self.path[0]),
            (self.path[-1], self.w1),
            (self.path[-1], self.w2),
        ]
        hops.extend(zip(self.path, self.path[1:]))
        return frozenset(hops)


def find_forbidden_witness(dag: Dag) -> ForbiddenWitness | None:
    """Return an obstruction subgraph, or ``None`` when the DAG is a funnel.

    Picks the first (in topological order) tainted vertex with two out-arcs
    and walks back to the nearest ancestor with two in-arcs, so the witness
    path is as short as a breadth-first search can make it.
    """
    tainted = _tainted(dag)
    vk = None
    for v in dag.topo_order:
        if tainted[v] and dag.out_degree(v) > 1:
            vk = v
            break
    if vk is None:
        return None
    if dag.in_degree(vk) >= 2:
        path = (vk,)
    else:
        parent: dict[int, int] = {}
        queue: deque[int] = deque([vk])
        v0 = None
        while queue and v0 is None:
            x = queue.popleft()
            for u in dag.in_neighbors(x):
                if u in parent:
                    continue
                parent[u] = x
                if dag.in_degree(u) >= 2:
                    v0 = u
                    break
                queue.append(u)
        assert v0 is not None, "tainted fork must have a merge ancestor"
        hops = [v0]
        while hops[-1] != vk:
            hops.append(parent[hops[-1]])
        path = tuple(hops)
    u1, u2 = dag.in_neighbors(path[0])[:2]
    w1, w2 = dag.out_neighbors(path[-1])[:2]
    return ForbiddenWitness(u1, u2, path, w1, w2)


def funnel_labeling(dag: Dag) -> Labeling:
    """Canonical Fork/Merge labeling of a funnel.

    Merge exactly for the tainted vertices (indegree > 1 at the vertex or at
    some ancestor); everything else is Fork.  Raises :class:`NotAFunnel` on
    non-funnels.
    """
    tainted = _tainted(dag)
    labels = Labeling(
        [Label.MERGE if tainted[v] else Label.FORK for v in dag.vertices()]
    )
    for v in dag.vertices():
        if tainted[v] and dag.out_degree(v) > 1:
            raise NotAFunnel(f"vertex {v} merges and forks")
    return labels


def verify_funnel_labeling(dag: Dag, labeling: Labeling) -> bool:
    """Check the funnel-labeling conditions for a total labeling.

    Fork vertices need indegree <= 1, Merge vertices outdegree <= 1, and no
    arc may run from a Merge vertex to a Fork vertex.  A total labeling
    passing this check proves the DAG is a funnel.
    """
    labeling.require_total()
    for v in dag.vertices():
        if labeling[v] is Label.FORK and dag.in_degree(v) > 1:
            return False
        if labeling[v] is Label.MERGE and dag.out_degree(v) > 1:
            return False
    return not any(
        labeling[u] is Label.MERGE and labeling[v] is Label.FORK
        for u, v in dag.arcs
    )


def max_arc_bound(n: int) -> int:
    """Largest arc count a funnel on ``n >= 2`` vertices can have."""
    if n < 2:
        raise ValueError("bound defined for n >= 2")
    return n * n // 4 + n - 2


def extremal_funnel(n: int) -> Dag:
    """A funnel on ``n`` vertices attaining :func:`max_arc_bound`.

    Fork path on the first floor(n/2) vertices, Merge path on the rest, plus
    every Fork-to-Merge arc.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    half = n // 2
    arcs = [(v, v + 1) for v in range(half - 1)]
    arcs += [(v, v + 1) for v in range(half, n - 1)]
    arcs += [(f, m) for f in range(half) for m in range(half, n)]
    return Dag(n, arcs)
