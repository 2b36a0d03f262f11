"""Sampling of root-anchored percolation clusters on a perfect binary tree.

A cluster is grown generation by generation: each node of generation
``g < depth_bound`` keeps its left and right edge open independently with
probability ``p``, and open edges spawn child nodes.  Off-cluster parts of
the tree are never materialized.  Nodes sitting exactly at ``depth_bound``
spawn nothing and are never counted as leaves.

Randomness comes from counter-based streams: sample ``i`` of master seed
``s`` draws from an independent Philox stream keyed by ``(s, i)``, so a
cluster is a pure function of ``(seed, index, p, depth_bound)`` no matter
how samples are scheduled across threads.  Per generation a single batch
of ``2 * N_g`` uniforms is consumed, nodes in breadth-first order, each
node's left edge value before its right edge value; an edge is open iff
its value is < p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import ModelParams

__all__ = [
    "RNG_VERSION",
    "Node",
    "Cluster",
    "GenerationTally",
    "cluster_stream",
    "sample_cluster",
    "sample_tally",
    "tally",
    "survived",
    "cluster_to_json",
    "cluster_from_json",
    "cluster_to_dot",
]

# Bump when the stream scheme or consumption order changes; emitted in all
# CSV/metadata output so old runs stay attributable.
RNG_VERSION = "philox-key64x2/v1"


@dataclass
class Node:
    """One cluster node: its generation and the two child slots."""

    gen: int
    left: "Node | None" = None
    right: "Node | None" = None

    def is_childless(self) -> bool:
        return self.left is None and self.right is None


@dataclass
class Cluster:
    """A root-anchored open cluster truncated at ``depth_bound``."""

    depth_bound: int
    root: Node


@dataclass
class GenerationTally:
    """Per-generation node counts N_0..N_depth and leaf counts L_0..L_{depth-1}.

    A node counts as a leaf only if it is childless *and* lies strictly
    above the depth bound.
    """

    depth_bound: int
    node_counts: list[int]
    leaf_counts: list[int]


def cluster_stream(seed: int, index: int) -> np.random.Generator:
    """Independent uniform stream for sample ``index`` of master ``seed``."""
    if seed < 0 or index < 0:
        raise ValueError(f"seed and index must be >= 0, got {seed}, {index}")
    return np.random.Generator(np.random.Philox(key=[seed, index]))


def sample_cluster(params: ModelParams, depth_bound: int, stream) -> Cluster:
    """Grow one cluster from a uniform stream (see module docstring for the
    exact consumption order).  ``stream`` needs only a ``random(n)`` method
    returning n floats in [0, 1)."""
    if depth_bound < 0:
        raise ValueError(f"depth_bound must be >= 0, got {depth_bound}")
    p = params.p
    root = Node(0)
    frontier = [root]
    for gen in range(depth_bound):
        u = stream.random(2 * len(frontier))
        nxt = []
        for i, node in enumerate(frontier):
            if u[2 * i] < p:
                node.left = Node(gen + 1)
                nxt.append(node.left)
            if u[2 * i + 1] < p:
                node.right = Node(gen + 1)
                nxt.append(node.right)
        if not nxt:
            break
        frontier = nxt
    return Cluster(depth_bound=depth_bound, root=root)


def sample_tally(params: ModelParams, depth_bound: int, stream) -> GenerationTally:
    """Tally-only sampler consuming the stream exactly like ``sample_cluster``.

    Used by the ensemble hot path when cluster geometry is not needed;
    ``tally(sample_cluster(...))`` on an identically keyed stream gives a
    bit-identical result (property-tested).
    """
    if depth_bound < 0:
        raise ValueError(f"depth_bound must be >= 0, got {depth_bound}")
    p = params.p
    node_counts = [0] * (depth_bound + 1)
    leaf_counts = [0] * depth_bound
    node_counts[0] = 1
    count = 1
    for gen in range(depth_bound):
        opens = stream.random(2 * count) < p
        left = opens[0::2]
        right = opens[1::2]
        leaf_counts[gen] = int(np.count_nonzero(~(left | right)))
        count = int(np.count_nonzero(opens))
        node_counts[gen + 1] = count
        if count == 0:
            break
    return GenerationTally(
        depth_bound=depth_bound, node_counts=node_counts, leaf_counts=leaf_counts
    )


def tally(cluster: Cluster) -> GenerationTally:
    """Count nodes and leaves per generation of one cluster."""
    depth = cluster.depth_bound
    node_counts = [0] * (depth + 1)
    leaf_counts = [0] * depth
    stack = [cluster.root]
    while stack:
        node = stack.pop()
        node_counts[node.gen] += 1
        if node.gen < depth and node.is_childless():
            leaf_counts[node.gen] += 1
        if node.left is not None:
            stack.append(node.left)
        if node.right is not None:
            stack.append(node.right)
    return GenerationTally(
        depth_bound=depth, node_counts=node_counts, leaf_counts=leaf_counts
    )


def survived(t: GenerationTally) -> bool:
    """True iff the cluster still has nodes at the depth bound."""
    return t.node_counts[t.depth_bound] > 0


def _node_to_json(node: Node) -> dict:
    doc: dict = {"gen": node.gen}
    if node.left is not None:
        doc["left"] = _node_to_json(node.left)
    if node.right is not None:
        doc["right"] = _node_to_json(node.right)
    return doc


def cluster_to_json(cluster: Cluster) -> dict:
    """JSON-serializable cluster dump: depth bound plus the recursive
    ``{gen, left?, right?}`` node structure (absent child => absent key)."""
    return {
        "depth_bound": cluster.depth_bound,
        "root": _node_to_json(cluster.root),
    }


def _node_from_json(doc: dict, gen: int, depth_bound: int) -> Node:
    if not isinstance(doc, dict):
        raise ValueError(f"cluster node must be an object, got {type(doc).__name__}")
    if gen > depth_bound:
        raise ValueError(f"cluster node at generation {gen} exceeds depth bound {depth_bound}")
    declared = doc.get("gen", gen)
    if declared != gen:
        raise ValueError(f"node declares generation {declared} but sits at {gen}")
    node = Node(gen)
    if "left" in doc:
        node.left = _node_from_json(doc["left"], gen + 1, depth_bound)
    if "right" in doc:
        node.right = _node_from_json(doc["right"], gen + 1, depth_bound)
    return node


def cluster_from_json(doc: dict) -> Cluster:
    """Parse and validate a cluster dump produced by ``cluster_to_json``."""
    try:
        depth_bound = int(doc["depth_bound"])
        root_doc = doc["root"]
    except (KeyError, TypeError) as exc:
        raise ValueError("cluster document needs 'depth_bound' and 'root'") from exc
    if depth_bound < 0:
        raise ValueError(f"depth_bound must be >= 0, got {depth_bound}")
    return Cluster(depth_bound=depth_bound, root=_node_from_json(root_doc, 0, depth_bound))


def cluster_to_dot(cluster: Cluster) -> str:
    """DOT rendering for graph viewers; node names are root-to-node paths."""
    lines = ["digraph cluster {", "  node [shape=circle];", '  "" [label="root"];']
    stack: list[tuple[Node, str]] = [(cluster.root, "")]
    while stack:
        node, path = stack.pop()
        for bit, child in (("0", node.left), ("1", node.right)):
            if child is None:
                continue
            child_path = path + bit
            lines.append(f'  "{child_path}" [label="{child_path}"];')
            lines.append(f'  "{path}" -> "{child_path}" [label="{bit}"];')
            stack.append((child, child_path))
    lines.append("}")
    return "\n".join(lines) + "\n"
