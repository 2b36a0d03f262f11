"""Ground-truth engines for desk-scale cross-validation.

Two independent routes to exact answers:

* polynomial composition of the offspring generating function gives the
  exact distribution of the generation-n node count (and, via a bivariate
  inner polynomial, the exact joint distribution of node and leaf counts);
* exhaustive enumeration walks every open/closed assignment of a shallow
  truncated tree's edges and pushes each configuration through the same
  ``tally``/``infomeasure`` code paths the simulation uses, weighting by
  p^(#open) q^(#closed).

Both are deliberately capped at small sizes; they exist to validate the
closed forms and the sampler, not to scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .analytic import ModelParams
from .infomeasure import measures
from .percolate import Cluster, Node, tally

__all__ = [
    "SizeError",
    "DistVector",
    "JointDist",
    "ExactStats",
    "node_distribution",
    "joint_leaf_distribution",
    "exact_enumeration",
    "MAX_DIST_GENERATION",
    "MAX_JOINT_GENERATION",
    "MAX_ENUM_DEPTH",
]

MAX_DIST_GENERATION = 12  # dense degree-2^n coefficient vector stays small
MAX_JOINT_GENERATION = 6
MAX_ENUM_DEPTH = 3  # 2^(depth+1)-2 edges -> at most 16384 configurations


class SizeError(ValueError):
    """Requested size exceeds the oracle's deliberate cap."""


@dataclass(frozen=True)
class DistVector:
    """probs[k] = P(node count at the generation equals k)."""

    generation: int
    probs: np.ndarray

    def mean(self) -> float:
        k = np.arange(len(self.probs))
        return float(k @ self.probs)

    def variance(self) -> float:
        k = np.arange(len(self.probs))
        m = float(k @ self.probs)
        return float((k * k) @ self.probs) - m * m


@dataclass(frozen=True)
class JointDist:
    """probs[j, i] = P(node count = j and leaf count = i) at one generation."""

    generation: int
    probs: np.ndarray

    def node_marginal(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def leaf_marginal(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    def leaf_mean(self) -> float:
        i = np.arange(self.probs.shape[1])
        return float(i @ self.leaf_marginal())


@dataclass(frozen=True)
class ExactStats:
    """Exact expectations from exhaustive enumeration of one truncated tree.

    Entropy and codeword length are conditioned on the cluster having at
    least one leaf; ``leafless_probability`` reports the mass of the
    complementary event so users can reweight.
    """

    p: float
    depth: int
    node_mean: list[float]
    node_var: list[float]
    leaf_mean: list[float]
    leaf_var: list[float]
    node_distributions: list[np.ndarray]
    mean_normalization: float
    mean_entropy_bits: float
    mean_avg_length: float
    leafless_probability: float


def _lifted(coeffs: np.ndarray, params: ModelParams) -> np.ndarray:
    # coefficients of p*f(xi) + q
    out = params.p * coeffs
    out[0] += params.q
    return out


def node_distribution(params: ModelParams, n: int) -> DistVector:
    """Exact distribution of the generation-n node count via repeated
    polynomial substitution f_n = (p * f_{n-1} + q)^2, f_0 = identity."""
    if n < 0:
        raise ValueError(f"generation must be >= 0, got {n}")
    if n > MAX_DIST_GENERATION:
        raise SizeError(f"generation {n} exceeds cap {MAX_DIST_GENERATION}")
    coeffs = np.array([0.0, 1.0])
    for _ in range(n):
        lifted = _lifted(coeffs, params)
        coeffs = np.convolve(lifted, lifted)
    return DistVector(generation=n, probs=coeffs)


def joint_leaf_distribution(params: ModelParams, n: int) -> JointDist:
    """Exact joint distribution of (node count, leaf count) at generation n.

    The node-variable polynomial of generation n-1 is composed with the
    bivariate inner polynomial (p * xi * g(zeta) + q)^2, where g is the
    leaf-indicator generating function; coefficient [j, i] of the result
    is P(N_n = j, L_n = i).
    """
    if n < 1:
        raise ValueError(f"generation must be >= 1, got {n}")
    if n > MAX_JOINT_GENERATION:
        raise SizeError(f"generation {n} exceeds cap {MAX_JOINT_GENERATION}")
    p, q, u0, u1 = params.p, params.q, params.u0, params.u1
    # inner[j, i]: coefficient of xi^j zeta^i in (p xi g(zeta) + q)^2
    inner = np.zeros((3, 3))
    inner[0, 0] = q * q
    inner[1, 0] = 2.0 * p * q * u0
    inner[1, 1] = 2.0 * p * q * u1
    inner[2, 0] = p * p * u0 * u0
    inner[2, 1] = 2.0 * p * p * u0 * u1
    inner[2, 2] = p * p * u1 * u1
    outer = node_distribution(params, n - 1).probs
    # Horner evaluation of the outer polynomial at the bivariate inner one
    acc = np.array([[outer[-1]]])
    for c in outer[-2::-1]:
        acc = convolve2d(acc, inner)
        acc[0, 0] += c
    return JointDist(generation=n, probs=acc)


def _heap_generation(k: int) -> int:
    return (k + 1).bit_length() - 1


def _cluster_from_mask(mask: int, depth: int) -> Cluster:
    """Root cluster of one full edge assignment; edge 2m/2m+1 is the
    left/right edge of heap-indexed node m, open iff its bit is set."""
    root = Node(0)
    queue = [(0, root)]
    while queue:
        k, node = queue.pop()
        gen = node.gen
        if gen >= depth:
            continue
        if (mask >> (2 * k)) & 1:
            node.left = Node(gen + 1)
            queue.append((2 * k + 1, node.left))
        if (mask >> (2 * k + 1)) & 1:
            node.right = Node(gen + 1)
            queue.append((2 * k + 2, node.right))
    return Cluster(depth_bound=depth, root=root)


def exact_enumeration(params: ModelParams, depth: int) -> ExactStats:
    """Exact expectations over all 2^E edge configurations (E = 2^(depth+1)-2).

    Each configuration is weighted by p^(#open) q^(#closed) over *all*
    edges of the truncated tree and pushed through the production
    ``tally``/``infomeasure`` code paths.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    if depth > MAX_ENUM_DEPTH:
        raise SizeError(f"depth {depth} exceeds cap {MAX_ENUM_DEPTH}")
    p, q = params.p, params.q
    n_edges = 2 ** (depth + 1) - 2
    pow_p = [p**k for k in range(n_edges + 1)]
    pow_q = [q**k for k in range(n_edges + 1)]

    n_configs = 1 << n_edges
    weights = np.empty(n_configs)
    nodes = np.empty((n_configs, depth + 1))
    leaves = np.empty((n_configs, depth))
    lams = np.empty(n_configs)
    entropies = np.full(n_configs, np.nan)
    lengths = np.full(n_configs, np.nan)
    max_nodes = [2**g for g in range(depth + 1)]
    node_hist = [np.zeros(m + 1) for m in max_nodes]

    for mask in range(n_configs):
        open_count = mask.bit_count()
        w = pow_p[open_count] * pow_q[n_edges - open_count]
        weights[mask] = w
        t = tally(_cluster_from_mask(mask, depth))
        nodes[mask] = t.node_counts
        leaves[mask] = t.leaf_counts
        for gen, count in enumerate(t.node_counts):
            node_hist[gen][count] += w
        m = measures(t, p)
        lams[mask] = m.normalization
        if m.entropy_bits is not None:
            entropies[mask] = m.entropy_bits
            lengths[mask] = m.avg_length

    def wmean(values: np.ndarray) -> float:
        return math.fsum((weights * values).tolist())

    node_mean = [wmean(nodes[:, g]) for g in range(depth + 1)]
    node_var = [
        wmean(nodes[:, g] ** 2) - node_mean[g] ** 2 for g in range(depth + 1)
    ]
    leaf_mean = [wmean(leaves[:, g]) for g in range(depth)]
    leaf_var = [wmean(leaves[:, g] ** 2) - leaf_mean[g] ** 2 for g in range(depth)]

    with_leaves = ~np.isnan(entropies)
    mass_with_leaves = math.fsum(weights[with_leaves].tolist())
    leafless_probability = 1.0 - mass_with_leaves
    if mass_with_leaves > 0.0:
        mean_entropy = (
            math.fsum((weights[with_leaves] * entropies[with_leaves]).tolist())
            / mass_with_leaves
        )
        mean_length = (
            math.fsum((weights[with_leaves] * lengths[with_leaves]).tolist())
            / mass_with_leaves
        )
    else:
        mean_entropy = 0.0
        mean_length = 0.0

    return ExactStats(
        p=p,
        depth=depth,
        node_mean=node_mean,
        node_var=node_var,
        leaf_mean=leaf_mean,
        leaf_var=leaf_var,
        node_distributions=node_hist,
        mean_normalization=wmean(lams),
        mean_entropy_bits=mean_entropy,
        mean_avg_length=mean_length,
        leafless_probability=leafless_probability,
    )
