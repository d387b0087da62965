"""Instance reports and the benchmark grid runner.

A report is one instance's numbers.  JSON reports and CSV rows contain no
wall-clock data unless timings are requested explicitly, so equal seeds
reproduce byte-identical output.  The invariant chain

    lower_bound <= exact_size <= approx_size <= 2 * exact_size

is checked on every report (it holds even for timed-out exact runs, whose
size is the incumbent upper bound).

CSV columns, in order:

    instance,n,m,seed,gen_n,gen_p,gen_s,is_funnel,lower_bound,approx_size,
    exact_size,timed_out,approx_ratio,lower_ms,approx_ms,exact_ms

A trailing block of '#'-prefixed lines summarizes solved percentages and the
distribution of approximation ratios.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Optional

from .analysis import is_funnel_degree
from .approx import approximate_addf
from .exact import lower_bound, solve_addf
from .generator import GenParams, add_noise_arcs, derive_seed, generate_planted_funnel
from .graph import Dag

REPORT_SCHEMA = "funnelkit-report/1"
WORKERS_ENV = "FUNNELKIT_WORKERS"

CSV_COLUMNS = [
    "instance",
    "n",
    "m",
    "seed",
    "gen_n",
    "gen_p",
    "gen_s",
    "is_funnel",
    "lower_bound",
    "approx_size",
    "exact_size",
    "timed_out",
    "approx_ratio",
    "lower_ms",
    "approx_ms",
    "exact_ms",
]

RATIO_BUCKETS = [1.0, 1.1, 1.25, 1.5, 2.0]


@dataclass
class Report:
    instance: str
    n: int
    m: int
    is_funnel: bool
    seed: Optional[int] = None
    gen: Optional[GenParams] = None
    lower_bound: Optional[int] = None
    approx_size: Optional[int] = None
    exact_size: Optional[int] = None
    timed_out: bool = False
    approx_ratio: Optional[float] = None
    timings_ms: dict = field(default_factory=dict)

    def check(self) -> "Report":
        lo, hi, mid = self.lower_bound, self.approx_size, self.exact_size
        if lo is not None and mid is not None and lo > mid:
            raise RuntimeError(f"{self.instance}: lower bound {lo} above exact {mid}")
        if mid is not None and hi is not None and not mid <= hi <= 2 * mid:
            raise RuntimeError(f"{self.instance}: approx {hi} outside [{mid}, {2 * mid}]")
        return self

    def to_json_dict(self, with_times: bool = False) -> dict:
        out: dict = {
            "schema": REPORT_SCHEMA,
            "instance": self.instance,
            "n": self.n,
            "m": self.m,
            "is_funnel": self.is_funnel,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.gen is not None:
            out["gen"] = {
                "n": self.gen.n,
                "p": self.gen.p,
                "s": self.gen.s,
                "seed": self.gen.seed,
            }
        if self.lower_bound is not None:
            out["lower_bound"] = self.lower_bound
        if self.approx_size is not None:
            out["approx_size"] = self.approx_size
        if self.exact_size is not None:
            out["exact_size"] = self.exact_size
            out["timed_out"] = self.timed_out
        if self.approx_ratio is not None:
            out["approx_ratio"] = self.approx_ratio
        if with_times:
            out["timings_ms"] = {k: round(v, 3) for k, v in self.timings_ms.items()}
        return out


def analyze(
    dag: Dag,
    instance: str,
    mode: str = "all",
    time_limit_ms: Optional[float] = None,
    seed: Optional[int] = None,
    gen: Optional[GenParams] = None,
) -> Report:
    """Run the requested solvers on one instance and assemble its report."""
    if mode not in ("exact", "approx", "lower", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    report = Report(
        instance=instance,
        n=dag.vertex_count,
        m=dag.arc_count,
        is_funnel=is_funnel_degree(dag),
        seed=seed,
        gen=gen,
    )
    if mode in ("lower", "all"):
        start = time.perf_counter()
        report.lower_bound = lower_bound(dag)
        report.timings_ms["lower"] = (time.perf_counter() - start) * 1000
    if mode in ("approx", "all"):
        start = time.perf_counter()
        report.approx_size = approximate_addf(dag).size
        report.timings_ms["approx"] = (time.perf_counter() - start) * 1000
    if mode in ("exact", "all"):
        start = time.perf_counter()
        result = solve_addf(dag, time_limit_ms=time_limit_ms)
        report.timings_ms["exact"] = (time.perf_counter() - start) * 1000
        report.exact_size = result.distance
        report.timed_out = result.stats.timed_out
    if (
        report.approx_size is not None
        and report.exact_size is not None
        and not report.timed_out
    ):
        report.approx_ratio = (
            report.approx_size / report.exact_size if report.exact_size else 1.0
        )
    return report.check()


@dataclass(frozen=True)
class GridSpec:
    """Cartesian benchmark grid over (n, p, s) with seeded replicates."""

    ns: tuple[int, ...] = (50, 100, 200)
    ps: tuple[float, ...] = (0.15, 0.5, 0.85)
    ss: tuple[int, ...] = (5, 15, 25)
    replicates: int = 10
    time_limit_ms: float = 10_000.0
    seed: int = 1

    @classmethod
    def large_scale(cls) -> "GridSpec":
        return cls(
            ns=(250, 300, 500, 1000),
            ps=(0.15, 0.5, 0.85),
            ss=(125, 150, 175),
            replicates=30,
            time_limit_ms=600_000.0,
        )

    @classmethod
    def from_file(cls, path: str) -> "GridSpec":
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
        if not isinstance(raw, dict):
            raise ValueError("grid spec must be a JSON object")
        known = {spec.name for spec in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError("unknown grid keys: " + ", ".join(unknown))
        base = cls()
        return cls(
            ns=tuple(raw.get("ns", base.ns)),
            ps=tuple(raw.get("ps", base.ps)),
            ss=tuple(raw.get("ss", base.ss)),
            replicates=int(raw.get("replicates", base.replicates)),
            time_limit_ms=float(raw.get("time_limit_ms", base.time_limit_ms)),
            seed=int(raw.get("seed", base.seed)),
        )

    def instances(self):
        index = 0
        for n in self.ns:
            for p in self.ps:
                for s in self.ss:
                    for rep in range(self.replicates):
                        yield (
                            f"n{n}-p{p}-s{s}-r{rep}",
                            GenParams(n=n, p=p, s=s, seed=derive_seed(self.seed, index)),
                        )
                        index += 1


def _bench_task(args: tuple[str, GenParams, float]) -> Report:
    instance, params, time_limit_ms = args
    funnel, _ = generate_planted_funnel(params)
    dag = add_noise_arcs(funnel, params.s, derive_seed(params.seed, 1))
    return analyze(
        dag,
        instance,
        mode="all",
        time_limit_ms=time_limit_ms,
        seed=params.seed,
        gen=params,
    )


def run_grid(spec: GridSpec, workers: Optional[int] = None) -> list[Report]:
    """Generate and analyze the whole grid, in its deterministic order.

    Parallel workers (default from the FUNNELKIT_WORKERS variable) only
    spread instances over processes; the report order is always the grid
    order, so output files do not depend on scheduling.
    """
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    tasks = [
        (instance, params, spec.time_limit_ms) for instance, params in spec.instances()
    ]
    if workers <= 1:
        return [_bench_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_bench_task, tasks))


def summarize(reports: list[Report]) -> dict:
    solved = [r for r in reports if r.exact_size is not None and not r.timed_out]
    ratios = [r.approx_ratio for r in solved if r.approx_ratio is not None]
    histogram = []
    for bucket in RATIO_BUCKETS:
        histogram.append((bucket, sum(1 for x in ratios if x <= bucket)))
    return {
        "instances": len(reports),
        "solved": len(solved),
        "solved_pct": 100.0 * len(solved) / len(reports) if reports else 0.0,
        "mean_ratio": sum(ratios) / len(ratios) if ratios else None,
        "ratio_eq_1_pct": (
            100.0 * sum(1 for x in ratios if x == 1.0) / len(ratios) if ratios else None
        ),
        "ratio_histogram": histogram,
    }


def _csv_value(value, fmt: str = "") -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, fmt or ".6f")
    return str(value)


def write_csv(reports: list[Report], with_times: bool = False) -> str:
    """Render reports as CSV text with the trailing summary block."""
    sink = io.StringIO()
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        times = r.timings_ms if with_times else {}
        writer.writerow(
            [
                r.instance,
                r.n,
                r.m,
                _csv_value(r.seed),
                _csv_value(r.gen.n if r.gen else None),
                _csv_value(r.gen.p if r.gen else None),
                _csv_value(r.gen.s if r.gen else None),
                _csv_value(r.is_funnel),
                _csv_value(r.lower_bound),
                _csv_value(r.approx_size),
                _csv_value(r.exact_size),
                _csv_value(r.timed_out),
                _csv_value(r.approx_ratio),
                _csv_value(times.get("lower"), ".3f"),
                _csv_value(times.get("approx"), ".3f"),
                _csv_value(times.get("exact"), ".3f"),
            ]
        )
    summary = summarize(reports)
    sink.write(f"# instances={summary['instances']} solved={summary['solved']}")
    sink.write(f" solved_pct={summary['solved_pct']:.6f}\n")
    if summary["mean_ratio"] is not None:
        sink.write(f"# mean_ratio={summary['mean_ratio']:.6f}")
        sink.write(f" ratio_eq_1_pct={summary['ratio_eq_1_pct']:.6f}\n")
        buckets = " ".join(f"{b:.6f}:{c}" for b, c in summary["ratio_histogram"])
        sink.write(f"# ratio_histogram {buckets}\n")
    return sink.getvalue()
