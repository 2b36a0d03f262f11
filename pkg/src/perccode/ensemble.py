"""Monte Carlo ensembles over (p, depth) cells with CSV emission.

Each cell draws ``samples`` independent clusters through the counter-based
streams of :mod:`perccode.percolate` (sample i uses the stream keyed by
``(seed, i)``), tallies them, and estimates means and standard errors of
the final-generation node count, per-generation leaf counts, per-cluster
entropy and average codeword length, plus the extinction frequency.

Clusters without leaves have no defined entropy/length; they are excluded
from those two averages and counted in ``skipped_leafless``.  Standard
errors are sample standard deviation / sqrt(count used).

Determinism: every per-sample result lands in a slot of a preallocated
array indexed by sample, and reductions always run over the full arrays,
so output is byte-identical at any worker count.  The stream key ignores
cell position, so a (p, depth, samples, seed) row is the same whether run
alone or inside any sweep.
"""

from __future__ import annotations

import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .analytic import DomainError, ModelParams
from .infomeasure import measures
from .percolate import RNG_VERSION, cluster_stream, sample_tally, survived

__all__ = [
    "CSV_COLUMNS",
    "EnsembleConfig",
    "EnsembleStats",
    "run_ensemble",
    "sweep",
    "write_csv",
    "csv_text",
]

CSV_COLUMNS = [
    "p",
    "depth",
    "samples",
    "used",
    "skipped_leafless",
    "extinct_frac",
    "mean_N_final",
    "se_N_final",
    "mean_H_bits",
    "se_H_bits",
    "mean_L",
    "se_L",
    "analytic_H_bits",
    "analytic_L",
    "analytic_lambda",
]


@dataclass(frozen=True)
class EnsembleConfig:
    """A (p, depth) grid to sweep: cells are all combinations, row order is
    p-major then depth."""

    p_values: list[float]
    depths: list[int]
    samples: int
    seed: int
    out_path: str | None = None
    rng_version: str = RNG_VERSION

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        for p in self.p_values:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"p must lie in [0, 1], got {p!r}")
        for d in self.depths:
            if d < 1:
                raise ValueError(f"depth must be >= 1, got {d}")


@dataclass(frozen=True)
class EnsembleStats:
    """Estimates for one (p, depth) cell.

    ``used + skipped_leafless == samples``; entropy/length means are 0.0
    with ``used == 0`` when every sample was leafless.  The analytic
    columns hold the closed-form large-depth values where their series
    converge, else None.
    """

    p: float
    depth: int
    samples: int
    seed: int
    used: int
    skipped_leafless: int
    extinct_frac: float
    mean_N_final: float
    se_N_final: float
    mean_H_bits: float
    se_H_bits: float
    mean_L: float
    se_L: float
    mean_leaf_counts: list[float] = field(repr=False)
    se_leaf_counts: list[float] = field(repr=False)
    analytic_H_bits: float | None = None
    analytic_L: float | None = None
    analytic_lambda: float | None = None


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    n = len(values)
    if n == 0:
        return 0.0, 0.0
    mean = float(values.mean())
    if n < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(n))


def _fill_slice(params: ModelParams, depth: int, seed: int, lo: int, hi: int,
                n_final, leaf_counts, entropy, length, alive) -> None:
    p = params.p
    for i in range(lo, hi):
        t = sample_tally(params, depth, cluster_stream(seed, i))
        n_final[i] = t.node_counts[depth]
        leaf_counts[i] = t.leaf_counts
        alive[i] = survived(t)
        m = measures(t, p)
        if m.entropy_bits is not None:
            entropy[i] = m.entropy_bits
            length[i] = m.avg_length


def run_ensemble(
    params: ModelParams, depth: int, samples: int, seed: int, threads: int = 1
) -> EnsembleStats:
    """Estimate one (p, depth) cell from ``samples`` independent clusters."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    n_final = np.zeros(samples, dtype=np.int64)
    leaf_counts = np.zeros((samples, depth), dtype=np.int64)
    entropy = np.full(samples, np.nan)
    length = np.full(samples, np.nan)
    alive = np.zeros(samples, dtype=bool)

    if threads <= 1:
        _fill_slice(params, depth, seed, 0, samples,
                    n_final, leaf_counts, entropy, length, alive)
    else:
        chunk = max(1, -(-samples // (threads * 4)))
        bounds = [(lo, min(lo + chunk, samples)) for lo in range(0, samples, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_fill_slice, params, depth, seed, lo, hi,
                            n_final, leaf_counts, entropy, length, alive)
                for lo, hi in bounds
            ]
            for f in futures:
                f.result()

    usable = ~np.isnan(entropy)
    used = int(np.count_nonzero(usable))
    mean_n, se_n = _mean_se(n_final.astype(float))
    mean_h, se_h = _mean_se(entropy[usable])
    mean_l, se_l = _mean_se(length[usable])
    leaf_mean = [float(x) for x in leaf_counts.mean(axis=0)]
    leaf_se = [
        float(leaf_counts[:, g].std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
        for g in range(depth)
    ]

    try:
        a_h = analytic.expected_entropy(params)
        a_l = analytic.expected_code_length(params)
        a_lam = analytic.lambda_mean(params)
    except DomainError:
        a_h = a_l = a_lam = None

    return EnsembleStats(
        p=params.p,
        depth=depth,
        samples=samples,
        seed=seed,
        used=used,
        skipped_leafless=samples - used,
        extinct_frac=float(np.count_nonzero(~alive)) / samples,
        mean_N_final=mean_n,
        se_N_final=se_n,
        mean_H_bits=mean_h,
        se_H_bits=se_h,
        mean_L=mean_l,
        se_L=se_l,
        mean_leaf_counts=leaf_mean,
        se_leaf_counts=leaf_se,
        analytic_H_bits=a_h,
        analytic_L=a_l,
        analytic_lambda=a_lam,
    )


def _cell(value: float | None) -> str:
    return "" if value is None else repr(value)


def write_csv(rows: list[EnsembleStats], out, rng_version: str = RNG_VERSION) -> None:
    """Emit the fixed-column CSV (leading comment row carries the RNG tag)."""
    out.write(f"# rng_version={rng_version}\n")
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in rows:
        fields = [
            repr(r.p),
            str(r.depth),
            str(r.samples),
            str(r.used),
            str(r.skipped_leafless),
            repr(r.extinct_frac),
            repr(r.mean_N_final),
            repr(r.se_N_final),
            repr(r.mean_H_bits),
            repr(r.se_H_bits),
            repr(r.mean_L),
            repr(r.se_L),
            _cell(r.analytic_H_bits),
            _cell(r.analytic_L),
            _cell(r.analytic_lambda),
        ]
        out.write(",".join(fields) + "\n")


def sweep(config: EnsembleConfig, threads: int = 1, log=sys.stderr) -> list[EnsembleStats]:
    """Run every (p, depth) cell of the grid; write CSV when configured."""
    rows = []
    for p in config.p_values:
        params = ModelParams(p)
        for depth in config.depths:
            rows.append(
                run_ensemble(params, depth, config.samples, config.seed, threads=threads)
            )
            if log is not None:
                print(
                    f"[sweep] p={p} depth={depth} samples={config.samples} done",
                    file=log,
                )
    if config.out_path is not None:
        with open(config.out_path, "w", encoding="ascii", newline="") as fh:
            write_csv(rows, fh, rng_version=config.rng_version)
    return rows


def csv_text(rows: list[EnsembleStats], rng_version: str = RNG_VERSION) -> str:
    """CSV as a string (handy for stdout emission and byte-level tests)."""
    buf = io.StringIO()
    write_csv(rows, buf, rng_version=rng_version)
    return buf.getvalue()
