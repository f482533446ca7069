"""Random-graph experiments: signal dimension sweeps and degree/spectrum bounds."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph_core import Graph, barabasi_albert, degree_summary, erdos_renyi, is_connected
from .signal_design import uniform_synergy_signal
from .spectral import laplacian, sym_eig

__all__ = [
    "SweepConfig",
    "SweepResult",
    "BoundsResult",
    "BoundsRecord",
    "NumericalFailure",
    "sample_seed",
    "sample_graph",
    "parse_grid",
    "dimension_sweep",
    "spectral_bounds_experiment",
    "merge_bounds",
    "emit_csv",
    "csv_text",
    "raw_csv_text",
    "worker_count",
]

SWEEP_COLUMNS = ("beta_inv", "mean_dim", "std_dim", "min_dim", "max_dim", "n_samples")
BOUNDS_COLUMNS = ("model", "sample", "d_max", "lambda_n", "d_min", "lambda_2")
EXACT_TOL = 1e-8


class NumericalFailure(ArithmeticError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    model_family: str  # "er" or "ba"
    n: int
    samples: int
    beta_inv_grid: tuple[float, ...] = ()
    master_seed: int = 0
    p: float | None = None
    m_attach: int | None = None

    def __post_init__(self):
        if self.model_family not in ("er", "ba"):
            raise ValueError(f"model_family must be 'er' or 'ba', got {self.model_family!r}")
        if self.model_family == "er" and (self.p is None or not 0.0 <= self.p <= 1.0):
            raise ValueError("er model needs p in [0, 1]")
        if self.model_family == "ba" and (self.m_attach is None or self.m_attach < 1):
            raise ValueError("ba model needs m_attach >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        grid = tuple(float(x) for x in self.beta_inv_grid)
        if any(not x > 0 for x in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("beta_inv_grid must be positive and strictly ascending")
        object.__setattr__(self, "beta_inv_grid", grid)

    @property
    def tag(self) -> str:
        if self.model_family == "er":
            return f"er(p={self.p:g})"
        return f"ba(m={self.m_attach})"


@dataclass(frozen=True, eq=False)
class SweepResult:
    beta_inv: np.ndarray
    mean_dim: np.ndarray
    std_dim: np.ndarray
    min_dim: np.ndarray
    max_dim: np.ndarray
    n_samples: int
    full_revelation_cutoff: float
    per_sample: np.ndarray | None = None
    n: int = 0

    @property
    def rows(self) -> list[tuple]:
        return [
            (float(b), float(m), float(s), int(lo), int(hi), self.n_samples)
            for b, m, s, lo, hi in zip(self.beta_inv, self.mean_dim, self.std_dim, self.min_dim, self.max_dim)
        ]


@dataclass(frozen=True)
class BoundsRecord:
    model: str
    sample: int
    d_max: float
    lambda_n: float
    d_min: float
    lambda_2: float
    connected: bool
    edge_count: int
    anderson_bound: float


@dataclass(frozen=True, eq=False)
class BoundsResult:
    records: list[BoundsRecord]
    violations: dict[str, int] = field(default_factory=dict)

    @property
    def rows(self) -> list[tuple]:
        return [(r.model, r.sample, r.d_max, r.lambda_n, r.d_min, r.lambda_2) for r in self.records]


def worker_count() -> int:
    raw = os.environ.get("LP_THREADS")
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sample_seed(master_seed: int, sample_index: int) -> int:
    """64-bit seed for one sample, independent of scheduling."""
    seq = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(sample_index)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def sample_graph(config: SweepConfig, sample_index: int) -> Graph:
    seed = sample_seed(config.master_seed, sample_index)
    if config.model_family == "er":
        return erdos_renyi(config.n, config.p, seed)
    return barabasi_albert(config.n, config.m_attach, seed)


def parse_grid(text: str) -> tuple[float, ...]:
    """``a:b:step`` inclusive of ``b`` (up to rounding), or comma-separated values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be a:b:step, got {text!r}")
        a, b, step = (float(x) for x in parts)
        if step <= 0 or b < a:
            raise ValueError(f"bad grid {text!r}")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return tuple(round(a + k * step, 12) for k in range(count))
    return tuple(float(x) for x in text.split(",") if x.strip())


def _sweep_one(args) -> np.ndarray:
    config, index = args
    g = sample_graph(config, index)
    spectrum = sym_eig(laplacian(g))
    dims = np.array(
        [uniform_synergy_signal(g, 1.0 / b, spectrum=spectrum).dimension for b in config.beta_inv_grid],
        dtype=int,
    )
    if np.any(np.diff(dims) < 0):
        raise NumericalFailure(f"sample {index}: dimension decreased along the beta_inv grid")
    return dims


def _bounds_one(args) -> BoundsRecord:
    config, index = args
    g = sample_graph(config, index)
    vals = sym_eig(laplacian(g)).eigenvalues
    deg = degree_summary(g)
    iu, ju = np.nonzero(np.triu(g.weights, 1) > 0)
    anderson = float(np.max(deg.degrees[iu] + deg.degrees[ju])) if iu.size else 0.0
    return BoundsRecord(
        model=config.tag,
        sample=index,
        d_max=deg.d_max,
        lambda_n=float(vals[-1]),
        d_min=deg.d_min,
        lambda_2=float(vals[1]),
        connected=is_connected(g),
        edge_count=deg.edge_count,
        anderson_bound=anderson,
    )


def _map_samples(fn, config: SweepConfig) -> list:
    jobs = [(config, s) for s in range(config.samples)]
    workers = min(worker_count(), config.samples)
    if workers <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves sample order, so aggregation is schedule-independent
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def dimension_sweep(config: SweepConfig, keep_samples: bool = False) -> SweepResult:
    """Optimal signal dimension (complete synergy graph) across the beta_inv grid."""
    if not config.beta_inv_grid:
        raise ValueError("sweep needs a nonempty beta_inv grid")
    dims = np.vstack(_map_samples(_sweep_one, config)).astype(float)
    return SweepResult(
        beta_inv=np.array(config.beta_inv_grid),
        mean_dim=dims.mean(axis=0),
        std_dim=dims.std(axis=0),
        min_dim=dims.min(axis=0),
        max_dim=dims.max(axis=0),
        n_samples=config.samples,
        full_revelation_cutoff=2.0 * config.n,
        per_sample=dims.astype(int) if keep_samples else None,
        n=config.n,
    )


def _count_violations(records: list[BoundsRecord]) -> dict[str, int]:
    with_edges = [r for r in records if r.edge_count > 0]
    connected = [r for r in records if r.connected]
    return {
        "samples": len(records),
        "samples_with_edges": len(with_edges),
        "connected_samples": len(connected),
        "grone": sum(r.lambda_n < r.d_max + 1 - EXACT_TOL for r in with_edges),
        "anderson": sum(r.lambda_n > r.anderson_bound + EXACT_TOL for r in with_edges),
        "band_lambda_n_upper": sum(r.lambda_n > r.d_max + 5 for r in with_edges),
        "band_lambda_2_lower": sum(r.lambda_2 < r.d_min - 5 for r in connected),
        "band_lambda_2_upper": sum(r.lambda_2 > r.d_min + EXACT_TOL for r in connected),
    }


def spectral_bounds_experiment(config: SweepConfig) -> BoundsResult:
    """Extreme Laplacian eigenvalues against degree extremes for sampled graphs.

    Raises ``NumericalFailure`` if a sample breaks the lower bound
    ``d_max + 1 <= lambda_n`` or the edge-degree-sum upper bound, both of which
    are theorems for graphs with at least one edge.
    """
    records = _map_samples(_bounds_one, config)
    result = BoundsResult(records, _count_violations(records))
    if result.violations["grone"] or result.violations["anderson"]:
        raise NumericalFailure(f"exact spectral bound violated: {result.violations}")
    return result


def merge_bounds(results: list[BoundsResult]) -> BoundsResult:
    records = [r for res in results for r in res.records]
    return BoundsResult(records, _count_violations(records))


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def csv_text(result: SweepResult | BoundsResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(result, SweepResult):
        writer.writerow(SWEEP_COLUMNS)
    elif isinstance(result, BoundsResult):
        writer.writerow(BOUNDS_COLUMNS)
    else:
        raise TypeError(f"cannot write {type(result).__name__} as CSV")
    for row in result.rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def raw_csv_text(result: SweepResult) -> str:
    if result.per_sample is None:
        raise ValueError("sweep was run without keep_samples")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sample"] + [_fmt(b) for b in result.beta_inv])
    for s, row in enumerate(result.per_sample):
        writer.writerow([s] + [int(x) for x in row])
    return buf.getvalue()


def emit_csv(result: SweepResult | BoundsResult, path) -> None:
    Path(path).write_text(csv_text(result), encoding="utf-8")
