"""Prefix codes cut out of a cluster: extraction, checks, and bitstreams.

Every leaf of a cluster names one codeword: the root-to-leaf path with
left edges written as 0 and right edges as 1, so a codeword's length is
the leaf's generation.  The cluster's geometry *is* the code; nothing is
rebalanced or optimized.  Because the leaves of a tree are prefix-free,
the resulting code is instantaneous and greedy left-to-right parsing
decodes it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .percolate import Cluster

__all__ = [
    "DecodeError",
    "CodeBook",
    "extract_codebook",
    "kraft_sum",
    "is_prefix_free",
    "encode",
    "decode",
    "bernoulli_weights",
    "symbol_labels",
    "format_codebook",
    "parse_codebook",
]


class DecodeError(ValueError):
    """A bitstring does not parse as a concatenation of codewords."""


@dataclass(frozen=True)
class CodeBook:
    """Codewords as 0/1 strings in lexicographic order.

    A word's generation is its length; the empty word (the root itself is
    the only leaf) is legal but cannot coexist with any other word.
    """

    words: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.words)

    def generations(self) -> tuple[int, ...]:
        return tuple(len(w) for w in self.words)


def extract_codebook(cluster: Cluster) -> CodeBook:
    """Collect one codeword per leaf (childless node above the depth bound)."""
    words = []
    stack = [(cluster.root, "")]
    while stack:
        node, path = stack.pop()
        if node.is_childless():
            # same leaf rule as percolate.tally: depth-bound nodes never count
            if node.gen < cluster.depth_bound:
                words.append(path)
            continue
        if node.left is not None:
            stack.append((node.left, path + "0"))
        if node.right is not None:
            stack.append((node.right, path + "1"))
    return CodeBook(words=tuple(sorted(words)))


def kraft_sum(book: CodeBook) -> float:
    """Sum of 2^-len over codewords; <= 1 for any prefix-free binary code."""
    return sum(2.0 ** -len(w) for w in book.words)


def is_prefix_free(book: CodeBook) -> bool:
    """True iff no codeword is a proper prefix of another (empty book: True)."""
    ordered = sorted(book.words)
    for a, b in zip(ordered, ordered[1:]):
        # in sorted order a proper prefix lands immediately before an extension
        if len(a) < len(b) and b.startswith(a):
            return False
    return True


def encode(book: CodeBook, symbols: list[int]) -> str:
    """Concatenate the codewords of the given entry indices."""
    words = book.words
    out = []
    for i in symbols:
        if not 0 <= i < len(words):
            raise IndexError(f"symbol index {i} out of range for {len(words)} codewords")
        out.append(words[i])
    return "".join(out)


def decode(book: CodeBook, bits: str) -> list[int]:
    """Greedy left-to-right parse of ``bits`` into entry indices.

    Consumes the whole input; raises :class:`DecodeError` when a position
    matches no codeword or the input ends mid-codeword.
    """
    if not bits:
        return []
    if not book.words:
        raise DecodeError("cannot decode with an empty codebook")
    if not is_prefix_free(book):
        raise DecodeError("codebook is not prefix-free; greedy parsing is ambiguous")
    index = {w: i for i, w in enumerate(book.words)}
    if "" in index:
        raise DecodeError("codebook contains the empty codeword; non-empty input cannot parse")
    bad = set(bits) - {"0", "1"}
    if bad:
        raise DecodeError(f"bitstring contains non-bit characters: {sorted(bad)}")
    max_len = max(len(w) for w in book.words)
    out = []
    pos = 0
    n = len(bits)
    while pos < n:
        end = pos + 1
        while True:
            word = bits[pos:end]
            hit = index.get(word)
            if hit is not None:
                out.append(hit)
                pos = end
                break
            if end >= n:
                raise DecodeError(f"input ends mid-codeword after position {pos}")
            if end - pos >= max_len:
                raise DecodeError(f"no codeword matches input at position {pos}")
            end += 1
    return out


def bernoulli_weights(book: CodeBook, p: float) -> list[float]:
    """Normalized leaf weights p^len / sum(p^len) for the book's codewords."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    raw = [p ** len(w) for w in book.words]
    total = sum(raw)
    if total <= 0.0:
        raise ValueError("all codeword weights are zero; cannot normalize")
    return [w / total for w in raw]


def symbol_labels(book: CodeBook) -> list[str]:
    """Presentation labels s1, s2, ... in lexicographic codeword order."""
    return [f"s{i + 1}" for i in range(len(book.words))]


def format_codebook(book: CodeBook, weights: list[float] | None = None) -> str:
    """Stable text form: one codeword per line, lexicographic order, with an
    optional second column holding the normalized probability."""
    if weights is None:
        return "".join(w + "\n" for w in book.words)
    if len(weights) != len(book.words):
        raise ValueError("need exactly one weight per codeword")
    return "".join(f"{w} {x!r}\n" for w, x in zip(book.words, weights))


def parse_codebook(text: str) -> CodeBook:
    """Read the text form back (the optional weight column is ignored)."""
    words = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word = line.split()[0]
        if set(word) - {"0", "1"}:
            raise ValueError(f"line {lineno}: codeword {word!r} is not a 0/1 string")
        words.append(word)
    return CodeBook(words=tuple(sorted(words)))
