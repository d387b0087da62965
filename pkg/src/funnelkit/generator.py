"""Instance generators: planted funnels, noise arcs, 3-SAT hardness gadgets.

All randomness comes from SplitMix64 seeded explicitly, never from the
platform default generator, so any instance is reproducible bit-for-bit from
its parameters on any machine or Python version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact import TooLarge
from .graph import Arc, Dag
from .labeling import Label, Labeling

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class NotEnoughSlots(Exception):
    """More arcs requested than absent forward pairs available."""


class InvalidFormula(Exception):
    """Clause list violates the strict 3-CNF shape."""


class SplitMix64:
    """SplitMix64: a fixed, portable 64-bit generator.

    The usual constants (Steele, Lea, Flood 2014); state advances by the
    golden gamma and the output is a finalizing hash of the state.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled to avoid modulo bias."""
        if n <= 0:
            raise ValueError("need a positive range")
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < threshold:
                return x % n


def derive_seed(base: int, index: int) -> int:
    """Stable per-instance seed for suites driven by one base seed."""
    return SplitMix64((base + index * _GOLDEN) & _MASK64).next_u64()


def _sample_pairs(rng: SplitMix64, pool: list[Arc], count: int) -> list[Arc]:
    """``count`` distinct pairs from an explicit pool, partial Fisher-Yates."""
    pool = list(pool)
    for i in range(count):
        j = i + rng.below(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:count]


@dataclass(frozen=True)
class GenParams:
    """Planted-funnel parameters: size, cross-arc density, noise arcs, seed."""

    n: int
    p: float
    s: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one vertex")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        if self.s < 0:
            raise ValueError("noise arc count must be non-negative")


def generate_planted_funnel(params: GenParams) -> tuple[Dag, Labeling]:
    """Random funnel with the identity as topological order.

    Uniform i.i.d. Fork/Merge labels; an out-forest over the Fork vertices
    (each Fork is a root with probability 1/(1 + number of earlier Forks),
    otherwise it hangs under a uniformly chosen earlier Fork) and the mirror
    in-forest over the Merge vertices; then Fork-to-Merge forward arcs drawn
    uniformly without replacement up to ``ceil(p * possible)``.
    """
    rng = SplitMix64(params.seed)
    n = params.n
    labels = [Label.FORK if rng.below(2) == 0 else Label.MERGE for _ in range(n)]
    forks = [v for v in range(n) if labels[v] is Label.FORK]
    merges = [v for v in range(n) if labels[v] is Label.MERGE]

    arcs: list[Arc] = []
    for i, v in enumerate(forks):
        if i and (r := rng.below(i + 1)):
            arcs.append((forks[r - 1], v))
    for i, v in enumerate(reversed(merges)):
        if i and (r := rng.below(i + 1)):
            arcs.append((v, merges[len(merges) - r]))

    # Cross arcs run Fork -> Merge and forward in the vertex order.
    earlier_forks = 0
    fork_prefix = []
    for v in range(n):
        fork_prefix.append(earlier_forks)
        if labels[v] is Label.FORK:
            earlier_forks += 1
    possible = sum(fork_prefix[m] for m in merges)
    target = math.ceil(params.p * possible)
    if target:
        if 2 * target >= possible:
            pool = [(f, m) for m in merges for f in forks if f < m]
            chosen = _sample_pairs(rng, sorted(pool), target)
        else:
            picked: set[Arc] = set()
            while len(picked) < target:
                f = forks[rng.below(len(forks))]
                m = merges[rng.below(len(merges))]
                if f < m and (f, m) not in picked:
                    picked.add((f, m))
            chosen = sorted(picked)
        arcs.extend(chosen)
    return Dag(n, arcs), Labeling(labels)


def add_noise_arcs(dag: Dag, s: int, seed: int) -> Dag:
    """Add ``s`` absent forward arcs (w.r.t. vertex order) chosen uniformly.

    The result stays a simple DAG and its deletion distance is at most ``s``.
    Raises :class:`NotEnoughSlots` when fewer than ``s`` pairs are absent.
    """
    n = dag.vertex_count
    free = n * (n - 1) // 2 - dag.arc_count
    if s > free:
        raise NotEnoughSlots(f"wanted {s} arcs, only {free} slots absent")
    if s == 0:
        return dag
    rng = SplitMix64(seed)
    if 2 * s >= free:
        pool = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if (u, v) not in dag.arc_set
        ]
        extra = _sample_pairs(rng, pool, s)
    else:
        picked: set[Arc] = set()
        while len(picked) < s:
            u = rng.below(n)
            v = rng.below(n)
            if u < v and (u, v) not in dag.arc_set and (u, v) not in picked:
                picked.add((u, v))
        extra = sorted(picked)
    return Dag(n, list(dag.arcs) + extra)


@dataclass(frozen=True)
class CnfFormula:
    """Strict 3-CNF: every clause has three literals over distinct variables.

    Literals are DIMACS-style nonzero integers; variable ids run 1..num_vars.
    """

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise InvalidFormula("negative variable count")
        for clause in self.clauses:
            if len(clause) != 3:
                raise InvalidFormula(f"clause {clause} must have three literals")
            seen = set()
            for lit in clause:
                var = abs(lit)
                if lit == 0 or var > self.num_vars:
                    raise InvalidFormula(f"literal {lit} out of range")
                if var in seen:
                    raise InvalidFormula(f"variable {var} repeats in {clause}")
                seen.add(var)


def parse_dimacs(text: str) -> CnfFormula:
    """Read a DIMACS CNF file (``c`` comments, ``p cnf <n> <m>`` header)."""
    num_vars = None
    num_clauses = None
    literals: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise InvalidFormula(f"bad header {line!r}")
            num_vars, num_clauses = int(fields[2]), int(fields[3])
            continue
        literals.extend(int(tok) for tok in line.split())
    if num_vars is None:
        raise InvalidFormula("missing 'p cnf' header")
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lit in literals:
        if lit == 0:
            clauses.append(tuple(current))
            current = []
        else:
            current.append(lit)
    if current:
        raise InvalidFormula("unterminated clause")
    if len(clauses) != num_clauses:
        raise InvalidFormula(
            f"header declares {num_clauses} clauses, found {len(clauses)}"
        )
    return CnfFormula(num_vars, tuple(clauses))  # type: ignore[arg-type]


def reduce_3sat(formula: CnfFormula) -> tuple[Dag, int]:
    """Gadget DAG whose deletion distance is ``2m + n`` iff satisfiable.

    Variable i (1-based) occupies the id block ``6(i-1)..6(i-1)+5`` as
    [center, true-port, false-port, tap1, tap2, tap3]: both ports feed the
    center, the center feeds the taps.  Clause j occupies
    ``6n + 5j..6n + 5j + 4`` as [hub, spoke1..spoke4]: the spokes feed the
    hub and the hub points at the port of each of its three literals.
    """
    n, m = formula.num_vars, len(formula.clauses)
    arcs: list[Arc] = []
    for i in range(1, n + 1):
        center = 6 * (i - 1)
        true_port, false_port = center + 1, center + 2
        arcs.append((true_port, center))
        arcs.append((false_port, center))
        arcs.extend((center, center + tap) for tap in (3, 4, 5))
    for j, clause in enumerate(formula.clauses):
        hub = 6 * n + 5 * j
        arcs.extend((hub + spoke, hub) for spoke in (1, 2, 3, 4))
        for lit in clause:
            port = 6 * (abs(lit) - 1) + (1 if lit > 0 else 2)
            arcs.append((hub, port))
    return Dag(6 * n + 5 * m, arcs), 2 * m + n


def sat_oracle(formula: CnfFormula, max_vars: int = 20) -> bool:
    """Exhaustive satisfiability check for small formulas."""
    if formula.num_vars > max_vars:
        raise TooLarge(f"{formula.num_vars} variables exceed the {max_vars} cap")
    for assignment in range(1 << formula.num_vars):
        if all(
            any(
                (assignment >> (abs(lit) - 1)) & 1 == (1 if lit > 0 else 0)
                for lit in clause
            )
            for clause in formula.clauses
        ):
            return True
    return False
