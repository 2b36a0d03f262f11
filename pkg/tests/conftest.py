"""Shared fixtures: hand-built clusters and scripted uniform streams."""

from __future__ import annotations

import numpy as np
import pytest

from perccode.percolate import Cluster, Node

# Hand-checked seven-leaf cluster at depth bound 5.  Its tally is
# N = [1, 2, 4, 4, 5, 0], L = [0, 0, 1, 1, 5]; the words are exactly the
# prefix-free code the cluster's leaves spell out.
SEVEN_LEAF_WORDS = ("00", "0100", "0101", "1010", "1011", "110", "1110")
SEVEN_LEAF_DEPTH = 5


def cluster_from_codewords(words, depth_bound: int) -> Cluster:
    """Build the prefix closure of a prefix-free word set as a cluster."""
    root = Node(0)
    for word in words:
        node = root
        for gen, bit in enumerate(word, start=1):
            if bit == "0":
                if node.left is None:
                    node.left = Node(gen)
                node = node.left
            else:
                if node.right is None:
                    node.right = Node(gen)
                node = node.right
    return Cluster(depth_bound=depth_bound, root=root)


class FixtureStream:
    """Scripted stand-in for a Generator: hands out preset uniforms."""

    def __init__(self, values):
        self.values = list(values)
        self.cursor = 0

    def random(self, n: int):
        if self.cursor + n > len(self.values):
            raise AssertionError(
                f"fixture stream exhausted: wanted {n} more values at {self.cursor}"
            )
        out = np.array(self.values[self.cursor : self.cursor + n])
        self.cursor += n
        return out


@pytest.fixture
def seven_leaf_cluster() -> Cluster:
    return cluster_from_codewords(SEVEN_LEAF_WORDS, SEVEN_LEAF_DEPTH)
