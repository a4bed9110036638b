"""Wall-clock scaling of the analytic and circuit fidelity paths.

The grid is fixed: both estimation paths, dims {16, 64, 256}, sample
counts {50, 100, 200}. Each cell reports the median over repeated runs
so a single scheduler hiccup cannot skew a row.
"""
from __future__ import annotations

import statistics
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import swaptest

PATHS = ("analytic", "circuit")
DIMS = (16, 64, 256)
SAMPLE_COUNTS = (50, 100, 200)
MIN_REPETITIONS = 5

_PATH_MODES = {"analytic": swaptest.ANALYTIC, "circuit": swaptest.CIRCUIT_EXACT}


@dataclass(frozen=True)
class BenchRow:
    path: str
    dim: int
    samples: int
    median_seconds: float


def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def run_bench(repetitions: int = MIN_REPETITIONS, seed: int = 0) -> list[BenchRow]:
    """Time fidelity estimation over the full path x dim x samples grid."""
    if repetitions < MIN_REPETITIONS:
        raise ValueError(f"repetitions must be >= {MIN_REPETITIONS}")
    rng = np.random.default_rng(seed)
    rows: list[BenchRow] = []
    for path in PATHS:
        mode = _PATH_MODES[path]
        for dim in DIMS:
            template = _random_unit(rng, dim)
            pool = [_random_unit(rng, dim) for _ in range(max(SAMPLE_COUNTS))]
            for samples in SAMPLE_COUNTS:
                batch = pool[:samples]
                times = []
                for _ in range(repetitions):
                    start = time.perf_counter()
                    for vector in batch:
                        swaptest.estimate_fidelity(template, vector, mode=mode)
                    times.append(time.perf_counter() - start)
                rows.append(
                    BenchRow(path, dim, samples, statistics.median(times))
                )
    if any(row.median_seconds < 1e-3 for row in rows):
        warnings.warn(
            "some medians are below 1 ms; timer resolution may dominate",
            RuntimeWarning,
            stacklevel=2,
        )
    return rows


def bench_csv(rows: list[BenchRow]) -> str:
    lines = ["path,dim,samples,median_seconds"]
    for row in rows:
        lines.append(
            f"{row.path},{row.dim},{row.samples},{row.median_seconds:.6f}"
        )
    return "\n".join(lines) + "\n"
