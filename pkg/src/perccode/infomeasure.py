"""Per-cluster information quantities under the Bernoulli leaf measure.

A leaf at generation n carries un-normalized weight p^n.  For one cluster
(given as its :class:`~perccode.percolate.GenerationTally`) this module
computes the exact normalization Lambda = sum_n L_n p^n, the Shannon
entropy in bits of the normalized leaf distribution, and the average
codeword length (a leaf's codeword length equals its generation).

Only per-generation leaf counts matter, which is what lets the exact
enumeration oracle cross-check these paths without cluster geometry.
A leafless tally has Lambda = 0 and no defined entropy or length;
those raise :class:`UndefinedError` here and are skipped-and-counted
by the ensemble.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .percolate import GenerationTally

__all__ = [
    "UndefinedError",
    "ConfigMeasures",
    "normalization",
    "config_entropy",
    "config_avg_length",
    "measures",
]


class UndefinedError(ValueError):
    """Entropy/length requested for a cluster with zero normalization."""


@dataclass(frozen=True)
class ConfigMeasures:
    """Normalization, entropy (bits) and average codeword length of one
    cluster; the latter two are None when the cluster has no leaves."""

    normalization: float
    entropy_bits: float | None
    avg_length: float | None
    leaf_total: int


def _check_p(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    return float(p)


def normalization(t: GenerationTally, p: float) -> float:
    """Exact leaf-weight normalization Lambda = sum over generations of L_n * p^n."""
    p = _check_p(p)
    return math.fsum(count * p**n for n, count in enumerate(t.leaf_counts) if count)


def _entropy_given_lam(t: GenerationTally, p: float, lam: float) -> float:
    total = 0.0
    for n, count in enumerate(t.leaf_counts):
        w = p**n
        if count and w > 0.0:
            prob = w / lam
            total -= count * prob * math.log2(prob)
    return total


def _avg_length_given_lam(t: GenerationTally, p: float, lam: float) -> float:
    return math.fsum(n * count * p**n for n, count in enumerate(t.leaf_counts) if count) / lam


def config_entropy(t: GenerationTally, p: float) -> float:
    """Shannon entropy (bits) of the normalized leaf distribution.

    Each of the L_n leaves at generation n has probability p^n / Lambda.
    """
    p = _check_p(p)
    lam = normalization(t, p)
    if lam <= 0.0:
        raise UndefinedError("cluster has no leaves within the depth bound (Lambda = 0)")
    return _entropy_given_lam(t, p, lam)


def config_avg_length(t: GenerationTally, p: float) -> float:
    """Probability-weighted mean codeword length sum_n n * L_n * p^n / Lambda."""
    p = _check_p(p)
    lam = normalization(t, p)
    if lam <= 0.0:
        raise UndefinedError("cluster has no leaves within the depth bound (Lambda = 0)")
    return _avg_length_given_lam(t, p, lam)


def measures(t: GenerationTally, p: float) -> ConfigMeasures:
    """All three quantities at once; entropy/length are None when Lambda = 0."""
    p = _check_p(p)
    lam = normalization(t, p)
    leaf_total = sum(t.leaf_counts)
    if lam <= 0.0:
        return ConfigMeasures(
            normalization=0.0, entropy_bits=None, avg_length=None, leaf_total=leaf_total
        )
    return ConfigMeasures(
        normalization=lam,
        entropy_bits=_entropy_given_lam(t, p, lam),
        avg_length=_avg_length_given_lam(t, p, lam),
        leaf_total=leaf_total,
    )
