"""Runtime scaling harness for the full target-family scan.

One row per (n, repeat): wall time of a complete window scan at scale n^c,
with the table-cell count as a machine-independent work measure.  The fitted
log-log slope of mean wall time against n is the headline number; at c=2 the
expected exponent is 4.5 (2n+1 targets, each an O(n * N * sqrt(n)) table).
"""

from __future__ import annotations

import csv
import math
import statistics
import time
from dataclasses import dataclass
from pathlib import Path

from .dp import solve_family
from .instance import gen_random
from .quantize import QuantizationUnderflow, quantize


@dataclass(frozen=True)
class BenchRow:
    n: int
    big_n: int
    c: int
    wall_ms: float
    targets_scanned: int
    table_cells: int


CSV_HEADER = ("n", "N", "c", "wall_ms", "targets_scanned", "table_cells")


def bench_instance(n: int, bits: int, seed: int, c: int):
    """Random instance that quantizes cleanly at this scale; a weight small
    enough to round to zero just bumps the seed."""
    offset = 0
    while True:
        inst = gen_random(n, bits, seed + 1_000_003 * offset)
        try:
            return inst, quantize(inst, c=c)
        except QuantizationUnderflow:
            offset += 1


def run_bench(ns, c: int = 2, repeats: int = 3, bits: int = 16,
              seed: int = 0) -> list[BenchRow]:
    # untimed warm-up so one-time costs (JIT compilation, allocator growth)
    # never land inside a measured scan
    _, q_warm = bench_instance(16, 6, seed, c)
    solve_family(q_warm, first_only=False, want_solution=False, early_stop=False)
    rows = []
    for n in ns:
        for rep in range(repeats):
            _, q = bench_instance(n, bits, seed + rep, c)
            t0 = time.perf_counter()
            scan = solve_family(q, first_only=False, want_solution=False,
                                early_stop=False)
            wall_ms = (time.perf_counter() - t0) * 1000.0
            rows.append(BenchRow(n=n, big_n=q.big_n, c=c, wall_ms=wall_ms,
                                 targets_scanned=scan.targets_scanned,
                                 table_cells=scan.cells))
    return rows


def fit_loglog_slope(rows) -> float:
    """Least-squares slope of log(median wall_ms) against log(n).

    The median over repeats keeps one scheduling hiccup at the cheap end of
    the sweep from tilting the whole fit.
    """
    by_n: dict[int, list[float]] = {}
    for row in rows:
        by_n.setdefault(row.n, []).append(row.wall_ms)
    pts = [(math.log(n), math.log(statistics.median(ms))) for n, ms in sorted(by_n.items())]
    if len(pts) < 2:
        raise ValueError("need at least two distinct n values to fit a slope")
    xbar = sum(x for x, _ in pts) / len(pts)
    ybar = sum(y for _, y in pts) / len(pts)
    sxx = sum((x - xbar) ** 2 for x, _ in pts)
    sxy = sum((x - xbar) * (y - ybar) for x, y in pts)
    return sxy / sxx


def write_csv(rows, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([row.n, row.big_n, row.c, f"{row.wall_ms:.3f}",
                             row.targets_scanned, row.table_cells])
