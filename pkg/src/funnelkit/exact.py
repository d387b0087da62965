"""Exact arc deletion distance to a funnel: branch and bound plus reductions.

The search assigns Fork/Merge labels and deletes arcs until the remaining
graph is a funnel with a matching labeling.  Two reduction rules run to a
fixpoint at every node:

* set-label: a vertex whose label is forced by its live degrees and already
  labeled neighbors gets that label (sources are Fork, sinks are Merge, a
  lone Fork in-neighbor passes Fork down, and degree counting settles the
  rest);
* satisfy-label: arcs no optimal completion can keep are deleted -- every
  live Merge-to-Fork arc, all but one in-arc of a Fork vertex that has a
  Fork in-neighbor (smallest id kept), and symmetrically for Merge.

When no rule fires the solver branches: either on the label of the first
(in topological order) vertex whose in- or out-neighborhood pins it down,
or on which single in-arc of an unsatisfied Fork vertex survives (again
symmetrically for Merge).  If neither branch applies the live graph is a
funnel and the labeling is total; this is asserted at every leaf.

Nodes are pruned against the best known solution using a certificate
packing: arc-disjoint obstructions each force one deletion, so their count
lower-bounds the remaining work.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

from .analysis import funnel_labeling, is_funnel_degree
from .approx import approximate_addf
from .graph import Arc, ArcSet, Dag, delete_arcs
from .labeling import Label, Labeling


class TooLarge(Exception):
    """Instance exceeds a hard cap of an exponential-time helper."""


def lower_bound(dag: Dag) -> int:
    """Greedy packing of arc-disjoint obstructions; never exceeds the distance.

    Scans vertices in topological order; a vertex with two free in-arcs
    searches forward for one with two free out-arcs (possibly itself), and a
    hit consumes the two in-arcs, the connecting path and the two out-arcs.
    Zero exactly on funnels.
    """
    return _pack_obstructions(
        dag.vertex_count,
        dag.topo_order,
        dag.in_neighbors,
        dag.out_neighbors,
        set(dag.arcs),
    )


def _pack_obstructions(n, topo, in_neighbors, out_neighbors, alive) -> int:
    free = alive.copy()
    count = 0
    for v in topo:
        while True:
            ins = [u for u in in_neighbors(v) if (u, v) in free]
            if len(ins) < 2:
                break
            hit = _forward_fork(v, out_neighbors, free)
            if hit is None:
                break
            path_arcs, fork, outs = hit
            free.difference_update(path_arcs)
            free.discard((ins[0], v))
            free.discard((ins[1], v))
            free.discard((fork, outs[0]))
            free.discard((fork, outs[1]))
            count += 1
    return count


def _forward_fork(start, out_neighbors, free):
    """BFS over free arcs to the nearest vertex with two free out-arcs."""

    def free_outs(x):
        return [w for w in out_neighbors(x) if (x, w) in free]

    outs = free_outs(start)
    if len(outs) >= 2:
        return [], start, outs
    parent: dict[int, int] = {}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for w in out_neighbors(x):
            if (x, w) not in free or w in parent:
                continue
            parent[w] = x
            outs = free_outs(w)
            # The arc into w is consumed by the path, so discount it if the
            # path would reuse it; out-arcs never coincide with in-arcs.
            if len(outs) >= 2:
                hops = [w]
                while hops[-1] != start:
                    hops.append(parent[hops[-1]])
                hops.reverse()
                return list(zip(hops, hops[1:])), w, outs
            queue.append(w)
    return None


@dataclass
class SolverStats:
    nodes: int = 0
    rr1: int = 0  # labels set by the set-label rule
    rr2: int = 0  # arcs deleted by the satisfy-label rule
    br1: int = 0  # label branches taken
    br2: int = 0  # arc-keep branches taken
    pruned: int = 0
    leaves: int = 0
    timed_out: bool = False


@dataclass(frozen=True)
class ExactResult:
    distance: int
    deletion_set: ArcSet
    labeling: Labeling
    stats: SolverStats


class Solver:
    """Branch-and-bound state: live arc view, labels, trail, incumbent."""

    def __init__(
        self,
        dag: Dag,
        initial_upper_bound: Optional[int] = None,
        *,
        seed_with_approx: bool = True,
        time_limit_ms: Optional[float] = None,
        trace: Optional[Callable[[str], None]] = None,
        use_rr1: bool = True,
    ):
        self.dag = dag
        self.stats = SolverStats()
        self._labels: list[Optional[Label]] = [None] * dag.vertex_count
        self._alive: set[Arc] = set(dag.arcs)
        self._live_in = [dag.in_degree(v) for v in dag.vertices()]
        self._live_out = [dag.out_degree(v) for v in dag.vertices()]
        self._solution: list[Arc] = []
        self._trail: list[tuple] = []
        self._trace = trace
        self._use_rr1 = use_rr1
        self._deadline = (
            time.monotonic() + time_limit_ms / 1000.0
            if time_limit_ms is not None
            else None
        )
        self._best_set: Optional[frozenset[Arc]] = None
        self._best_labels: Optional[Labeling] = None
        self._best_size = len(dag.arcs) + 1  # worse than any real solution
        if seed_with_approx:
            approx = approximate_addf(dag)
            self._best_set = approx.deletion_set
            self._best_labels = approx.labeling
            self._best_size = approx.size
        self._ub_cap = (
            initial_upper_bound + 1 if initial_upper_bound is not None else None
        )

    # ---- bookkeeping ----

    def _say(self, line: str) -> None:
        if self._trace is not None:
            self._trace(line)

    def _cutoff(self) -> int:
        if self._ub_cap is not None:
            return min(self._best_size, self._ub_cap)
        return self._best_size

    def _set_label(self, v: int, lab: Label) -> None:
        self._labels[v] = lab
        self._trail.append(("L", v))

    def _delete_arc(self, u: int, v: int) -> None:
        self._alive.remove((u, v))
        self._live_out[u] -= 1
        self._live_in[v] -= 1
        self._solution.append((u, v))
        self._trail.append(("A", u, v))

    def _undo_to(self, mark: int) -> None:
        while len(self._trail) > mark:
            entry = self._trail.pop()
            if entry[0] == "L":
                self._labels[entry[1]] = None
            else:
                _, u, v = entry
                self._alive.add((u, v))
                self._live_out[u] += 1
                self._live_in[v] += 1
                self._solution.pop()

    def _live_in_neighbors(self, v: int) -> list[int]:
        return [u for u in self.dag.in_neighbors(v) if (u, v) in self._alive]

    def _live_out_neighbors(self, v: int) -> list[int]:
        return [w for w in self.dag.out_neighbors(v) if (v, w) in self._alive]

    # ---- reduction rules ----

    def _rule_label(self, v: int) -> Optional[Label]:
        """Forced label for v, or ``None``.  Fork conditions try first."""
        ind, outd = self._live_in[v], self._live_out[v]
        labels = self._labels
        if ind == 0:
            return Label.FORK
        if ind == 1:
            (u,) = self._live_in_neighbors(v)
            if labels[u] is Label.FORK:
                return Label.FORK
            if outd > 1 and all(
                labels[w] is not None for w in self._live_out_neighbors(v)
            ):
                return Label.FORK
        if outd == 0:
            return Label.MERGE
        if outd == 1:
            (w,) = self._live_out_neighbors(v)
            if labels[w] is Label.MERGE:
                return Label.MERGE
            if ind > 1 and all(
                labels[u] is not None for u in self._live_in_neighbors(v)
            ):
                return Label.MERGE
        return None

    def _rule_satisfy(self, v: int) -> list[Arc]:
        """Arcs around the labeled vertex v that no optimal completion keeps.

        A Merge-to-Fork arc can never stay, whatever happens later, so those
        go unconditionally; with a same-label neighbor on the constrained
        side everything else on that side goes too (smallest id kept).
        """
        lab = self._labels[v]
        doomed: list[Arc] = []
        if lab is Label.FORK:
            ins = self._live_in_neighbors(v)
            keep = next((u for u in ins if self._labels[u] is Label.FORK), None)
            if keep is not None:
                doomed = [(u, v) for u in ins if u != keep]
            else:
                doomed = [(u, v) for u in ins if self._labels[u] is Label.MERGE]
        elif lab is Label.MERGE:
            outs = self._live_out_neighbors(v)
            keep = next((w for w in outs if self._labels[w] is Label.MERGE), None)
            if keep is not None:
                doomed = [(v, w) for w in outs if w != keep]
            else:
                doomed = [(v, w) for w in outs if self._labels[w] is Label.FORK]
        return doomed

    def _reduce(self, seeds) -> None:
        """Run both rules to a joint fixpoint, starting from ``seeds``."""
        pending = deque(seeds)
        queued = set(pending)
        while pending:
            v = pending.popleft()
            queued.discard(v)

            def wake(x: int) -> None:
                if x not in queued:
                    queued.add(x)
                    pending.append(x)

            if self._labels[v] is None:
                if not self._use_rr1:
                    continue
                lab = self._rule_label(v)
                if lab is None:
                    continue
                self._set_label(v, lab)
                self.stats.rr1 += 1
                self._say(f"rr1 {v} {lab.value}")
                wake(v)
                for u in self._live_in_neighbors(v):
                    wake(u)
                for w in self._live_out_neighbors(v):
                    wake(w)
                continue
            for u, w in self._rule_satisfy(v):
                self._delete_arc(u, w)
                self.stats.rr2 += 1
                self._say(f"rr2 {u}->{w}")
                wake(u)
                wake(w)

    # ---- branching ----

    def _branch_label_candidate(self) -> Optional[int]:
        """First unlabeled vertex (topo order) whose neighborhood pins it."""
        labels = self._labels
        for v in self.dag.topo_order:
            if labels[v] is not None:
                continue
            ins = self._live_in_neighbors(v)
            if all(labels[u] is not None for u in ins) or any(
                labels[u] is Label.FORK for u in ins
            ):
                return v
            outs = self._live_out_neighbors(v)
            if all(labels[w] is not None for w in outs) or any(
                labels[w] is Label.MERGE for w in outs
            ):
                return v
        return None

    def _branch_arcs_candidate(self) -> Optional[tuple[int, str]]:
        """First labeled vertex still violating its degree constraint."""
        for v in self.dag.topo_order:
            if self._labels[v] is Label.FORK and self._live_in[v] > 1:
                return v, "in"
            if self._labels[v] is Label.MERGE and self._live_out[v] > 1:
                return v, "out"
        return None

    # ---- search ----

    def _lower_bound_live(self) -> int:
        return _pack_obstructions(
            self.dag.vertex_count,
            self.dag.topo_order,
            self.dag.in_neighbors,
            self.dag.out_neighbors,
            self._alive,
        )

    def _check_leaf(self) -> None:
        # Completeness: with no rule or branch applicable, the labeling must
        # be total and the live graph a funnel for it.  A failure here is a
        # solver bug, not a property of the input.
        labels = self._labels
        for v in self.dag.vertices():
            if labels[v] is None:
                raise RuntimeError(f"leaf with unlabeled vertex {v}")
            if labels[v] is Label.FORK and self._live_in[v] > 1:
                raise RuntimeError(f"leaf with unsatisfied fork {v}")
            if labels[v] is Label.MERGE and self._live_out[v] > 1:
                raise RuntimeError(f"leaf with unsatisfied merge {v}")
        for u, v in self._alive:
            if labels[u] is Label.MERGE and labels[v] is Label.FORK:
                raise RuntimeError(f"leaf with live merge->fork arc ({u}, {v})")

    def _node(self, seeds) -> None:
        self.stats.nodes += 1
        if self._deadline is not None and time.monotonic() > self._deadline:
            self.stats.timed_out = True
            return
        self._reduce(seeds)
        size = len(self._solution)
        if size >= self._cutoff():
            self.stats.pruned += 1
            self._say(f"prune {size}")
            return
        bound = self._lower_bound_live()
        if size + bound >= self._cutoff():
            self.stats.pruned += 1
            self._say(f"prune {size}+{bound}")
            return
        v = self._branch_label_candidate()
        if v is not None:
            for lab in (Label.FORK, Label.MERGE):
                mark = len(self._trail)
                self._set_label(v, lab)
                self.stats.br1 += 1
                self._say(f"br1 {v} {lab.value}")
                self._node([v, *self._live_in_neighbors(v), *self._live_out_neighbors(v)])
                self._undo_to(mark)
                if self.stats.timed_out:
                    return
            return
        cand = self._branch_arcs_candidate()
        if cand is not None:
            v, side = cand
            if side == "in":
                arcs = [(u, v) for u in self._live_in_neighbors(v)]
            else:
                arcs = [(v, w) for w in self._live_out_neighbors(v)]
            for kept in arcs:
                mark = len(self._trail)
                for arc in arcs:
                    if arc != kept:
                        self._delete_arc(*arc)
                self.stats.br2 += 1
                self._say(f"br2 {v} keep {kept[0]}->{kept[1]}")
                touched = {x for arc in arcs for x in arc}
                self._node(sorted(touched))
                self._undo_to(mark)
                if self.stats.timed_out:
                    return
            return
        self.stats.leaves += 1
        self._check_leaf()
        self._say(f"leaf {size}")
        if size < self._best_size:
            self._best_size = size
            self._best_set = frozenset(self._solution)
            self._best_labels = Labeling(self._labels)
            self._say(f"best {size}")

    def run(self) -> ExactResult:
        self._node(list(self.dag.vertices()))
        if self._best_set is None:
            raise RuntimeError("no solution within the given upper bound")
        return ExactResult(
            distance=self._best_size,
            deletion_set=self._best_set,
            labeling=self._best_labels.copy(),
            stats=self.stats,
        )


def solve_addf(
    dag: Dag,
    initial_upper_bound: Optional[int] = None,
    *,
    time_limit_ms: Optional[float] = None,
    trace: Optional[Callable[[str], None]] = None,
) -> ExactResult:
    """Minimum arc deletion distance to a funnel, with set and labeling.

    Seeds the incumbent with the factor-2 approximation (or the caller's
    bound when that is smaller) and explores the reduced branching tree,
    pruning on the obstruction-packing lower bound.  With a time limit the
    incumbent so far is returned and ``stats.timed_out`` is set; the
    distance is then only an upper bound.
    """
    return Solver(
        dag,
        initial_upper_bound,
        time_limit_ms=time_limit_ms,
        trace=trace,
    ).run()


def brute_force_addf(dag: Dag, max_arcs: int = 24) -> ExactResult:
    """Try all arc subsets by size; independent oracle for the solver.

    Subsets of equal size are tried in lexicographic arc order, so the
    returned set is the lexicographically first among the smallest.  Capped
    because the subset lattice explodes; raises :class:`TooLarge` beyond it.
    """
    if dag.arc_count > max_arcs:
        raise TooLarge(f"{dag.arc_count} arcs exceed the {max_arcs}-arc cap")
    stats = SolverStats()
    for k in range(dag.arc_count + 1):
        for subset in combinations(dag.arcs, k):
            stats.nodes += 1
            survivor = delete_arcs(dag, subset)
            if is_funnel_degree(survivor):
                stats.leaves = 1
                return ExactResult(
                    distance=k,
                    deletion_set=frozenset(subset),
                    labeling=funnel_labeling(survivor),
                    stats=stats,
                )
    raise AssertionError("deleting every arc always yields a funnel")
