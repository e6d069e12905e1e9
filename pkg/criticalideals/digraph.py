import itertools
import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .config import (
    DIGRAPH6_FILE_HEADER,
    DIGRAPH6_HEADER,
    MAX_ENUMERATION_VERTICES,
    MAX_ISOMORPHISM_VERTICES,
    MAX_VERTICES,
)
from .exceptions import CapabilityError, Digraph6ParseError, DigraphError

logger = logging.getLogger(__name__)

# Bitmask over vertex indices: bit v set iff vertex v belongs to the set.
VertexSet = int


def _bit_position(n: int, u: int, v: int) -> int:
    # Row-major, adj[0][0] is the most significant bit.
    return n * n - 1 - (u * n + v)


@dataclass(frozen=True)
class Digraph(object):
    """Simple loop-free digraph on the vertices 0..n-1

    ``rows[u]`` is the out-neighbourhood of ``u`` as a bitmask.
    """

    n: int
    rows: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 < self.n <= MAX_VERTICES:
            raise DigraphError(
                f"vertex count must lie in 1..{MAX_VERTICES}, got {self.n}"
            )
        if len(self.rows) != self.n:
            raise DigraphError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row < 0 or row & ~full:
                raise DigraphError(f"row {u} references a vertex outside 0..{self.n - 1}")
            if row >> u & 1:
                raise DigraphError(f"loop at vertex {u}")

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.arcs()})"

    @classmethod
    def from_code(cls, n: int, code: int) -> "Digraph":
        """Build a digraph from its row-major adjacency code"""
        rows = []
        for u in range(n):
            row = 0
            for v in range(n):
                if code >> _bit_position(n, u, v) & 1:
                    row |= 1 << v
            rows.append(row)
        return cls(n, tuple(rows))

    @property
    def code(self) -> int:
        """Row-major adjacency bit-string read as an integer"""
        code = 0
        for u, v in self.arcs():
            code |= 1 << _bit_position(self.n, u, v)
        return code

    @property
    def full_set(self) -> VertexSet:
        return (1 << self.n) - 1

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def arcs(self) -> List[Tuple[int, int]]:
        return [
            (u, v) for u in range(self.n) for v in range(self.n) if self.rows[u] >> v & 1
        ]

    @property
    def arc_count(self) -> int:
        return sum(bin(row).count("1") for row in self.rows)

    def out_degree(self, u: int) -> int:
        return bin(self.rows[u]).count("1")

    def in_degree(self, v: int) -> int:
        return sum(row >> v & 1 for row in self.rows)

    def out_degrees(self) -> Tuple[int, ...]:
        return tuple(self.out_degree(u) for u in range(self.n))

    def in_degrees(self) -> Tuple[int, ...]:
        return tuple(self.in_degree(v) for v in range(self.n))

    def adjacency(self) -> List[List[int]]:
        return [[self.rows[u] >> v & 1 for v in range(self.n)] for u in range(self.n)]

    def is_bidirectional(self, u: int, v: int) -> bool:
        return self.has_arc(u, v) and self.has_arc(v, u)


@dataclass(frozen=True, order=True)
class CanonicalForm(object):
    """Lexicographically smallest row-major adjacency bit-string of a digraph"""

    n: int
    code: int

    @property
    def bits(self) -> str:
        return format(self.code, f"0{self.n * self.n}b")

    def to_digraph(self) -> Digraph:
        return Digraph.from_code(self.n, self.code)


def from_arcs(n: int, arcs: Iterable[Sequence[int]]) -> Digraph:
    """Build a digraph from an arc list

    Args:
        n (int): vertex count
        arcs (Iterable): ordered pairs (u, v); duplicates collapse to one arc

    Returns:
        Digraph: digraph with exactly the given arcs
    """
    if not isinstance(n, int) or not 0 < n <= MAX_VERTICES:
        raise DigraphError(f"vertex count must lie in 1..{MAX_VERTICES}, got {n}")
    rows = [0] * n
    for arc in arcs:
        if len(arc) != 2:
            raise DigraphError(f"arc {arc!r} is not an ordered pair")
        u, v = int(arc[0]), int(arc[1])
        if not (0 <= u < n and 0 <= v < n):
            raise DigraphError(f"arc ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise DigraphError(f"arc ({u}, {v}) is a loop")
        rows[u] |= 1 << v
    return Digraph(n, tuple(rows))


def from_adjacency(matrix: Sequence[Sequence[int]]) -> Digraph:
    n = len(matrix)
    arcs = []
    for u, row in enumerate(matrix):
        if len(row) != n:
            raise DigraphError("adjacency matrix must be square")
        for v, entry in enumerate(row):
            if entry not in (0, 1):
                raise DigraphError(f"entry ({u}, {v}) = {entry} is not 0 or 1")
            if entry:
                arcs.append((u, v))
    return from_arcs(n, arcs)


def trivial_digraph(n: int) -> Digraph:
    return from_arcs(n, [])


def directed_path(n: int) -> Digraph:
    return from_arcs(n, [(i, i + 1) for i in range(n - 1)])


def directed_cycle(n: int) -> Digraph:
    if n == 2:
        return from_arcs(2, [(0, 1), (1, 0)])
    return from_arcs(n, [(i, (i + 1) % n) for i in range(n)])


def complete_digraph(n: int) -> Digraph:
    return from_arcs(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def transitive_tournament(n: int) -> Digraph:
    return from_arcs(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


# digraph6


def _encode_count(n: int) -> str:
    if n <= 62:
        return chr(63 + n)
    return "~" + "".join(chr(63 + (n >> shift & 63)) for shift in (12, 6, 0))


def emit_digraph6(digraph: Digraph) -> str:
    """Encode a digraph as a digraph6 string

    Args:
        digraph (Digraph): digraph

    Returns:
        str: '&', N(n), then the row-major adjacency bits in 6-bit groups offset by 63
    """
    n = digraph.n
    bits = [digraph.rows[u] >> v & 1 for u in range(n) for v in range(n)]
    bits += [0] * (-len(bits) % 6)
    payload = []
    for idx in range(0, len(bits), 6):
        value = 0
        for bit in bits[idx : idx + 6]:
            value = value << 1 | bit
        payload.append(chr(63 + value))
    return DIGRAPH6_HEADER + _encode_count(n) + "".join(payload)


def parse_digraph6(text: str) -> Digraph:
    """Decode a digraph6 string

    Args:
        text (str): digraph6 string, optionally preceded by '>>digraph6<<'

    Raises:
        Digraph6ParseError: malformed header, invalid byte, truncated payload,
            trailing bytes or nonzero padding bits

    Returns:
        Digraph: decoded digraph
    """
    text = text.strip()
    pos = 0
    if text.startswith(DIGRAPH6_FILE_HEADER):
        pos = len(DIGRAPH6_FILE_HEADER)
    if not text.startswith(DIGRAPH6_HEADER, pos):
        raise Digraph6ParseError("digraph6 string must start with '&'", pos)
    pos += 1

    def byte_at(offset: int) -> int:
        if offset >= len(text):
            raise Digraph6ParseError("unexpected end of input", offset)
        value = ord(text[offset]) - 63
        if not 0 <= value <= 63:
            raise Digraph6ParseError(f"invalid digraph6 byte {text[offset]!r}", offset)
        return value

    first = byte_at(pos)
    if first < 63:
        n = first
        pos += 1
    else:
        if pos + 1 < len(text) and text[pos + 1] == "~":
            raise CapabilityError("vertex counts above 258047 are not supported")
        n = 0
        for offset in range(pos + 1, pos + 4):
            n = n << 6 | byte_at(offset)
        pos += 4
    if n == 0:
        raise Digraph6ParseError("digraph6 string encodes an empty digraph", pos - 1)
    if n > MAX_VERTICES:
        raise CapabilityError(f"digraphs with {n} vertices exceed the cap {MAX_VERTICES}")

    needed = -(-n * n // 6)
    payload = text[pos:]
    if len(payload) < needed:
        raise Digraph6ParseError(
            f"truncated payload: expected {needed} bytes, got {len(payload)}", len(text)
        )
    if len(payload) > needed:
        raise Digraph6ParseError("trailing bytes after payload", pos + needed)

    bits: List[int] = []
    for offset in range(pos, pos + needed):
        value = byte_at(offset)
        bits.extend(value >> shift & 1 for shift in range(5, -1, -1))
    if any(bits[n * n :]):
        raise Digraph6ParseError("nonzero padding bits", pos + needed - 1)

    rows = []
    for u in range(n):
        row = 0
        for v in range(n):
            if bits[u * n + v]:
                row |= 1 << v
        rows.append(row)
    try:
        return Digraph(n, tuple(rows))
    except DigraphError as e:
        raise Digraph6ParseError(e.message, pos) from e


# JSON arc-list form


def to_dict(digraph: Digraph) -> dict:
    return {"n": digraph.n, "arcs": [list(arc) for arc in digraph.arcs()]}


def from_dict(data: dict) -> Digraph:
    try:
        return from_arcs(data["n"], data.get("arcs", []))
    except (KeyError, TypeError) as e:
        raise DigraphError(f"invalid arc-list object: {e}") from e


def to_json(digraph: Digraph) -> str:
    return json.dumps(to_dict(digraph))


def from_json(text: str) -> Digraph:
    try:
        data = json.loads(text)
    except ValueError as e:
        logger.error(str(e))
        raise DigraphError(f"invalid JSON: {e}") from e
    if not isinstance(data, dict):
        raise DigraphError("arc-list JSON must be an object")
    return from_dict(data)


def read_digraph(text: str) -> Digraph:
    """Read a digraph given either as digraph6 or as a JSON arc list"""
    text = text.strip()
    if text.startswith("{"):
        return from_json(text)
    return parse_digraph6(text)


# structure


def to_networkx(digraph: Digraph) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(digraph.n))
    graph.add_edges_from(digraph.arcs())
    return graph


def is_connected(digraph: Digraph) -> bool:
    """True iff the underlying undirected graph is connected"""
    return nx.is_weakly_connected(to_networkx(digraph))


def vertex_set(vertices: Union[VertexSet, Iterable[int]]) -> VertexSet:
    if isinstance(vertices, int):
        return vertices
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(subset: VertexSet) -> List[int]:
    return [v for v in range(subset.bit_length()) if subset >> v & 1]


def induced(digraph: Digraph, subset: Union[VertexSet, Iterable[int]]) -> Digraph:
    """Induced subdigraph on a vertex subset

    Args:
        digraph (Digraph): digraph
        subset (VertexSet or Iterable[int]): nonempty vertex subset

    Returns:
        Digraph: subdigraph on |S| vertices relabelled in increasing order
    """
    mask = vertex_set(subset)
    if mask <= 0:
        raise DigraphError("induced subdigraph needs a nonempty vertex set")
    if mask & ~digraph.full_set:
        raise DigraphError(f"vertex set {bin(mask)} is not a subset of 0..{digraph.n - 1}")
    kept = members(mask)
    rows = []
    for u in kept:
        row = 0
        for new_v, v in enumerate(kept):
            if digraph.rows[u] >> v & 1:
                row |= 1 << new_v
        rows.append(row)
    return Digraph(len(kept), tuple(rows))


def delete_vertex(digraph: Digraph, v: int) -> Digraph:
    return induced(digraph, digraph.full_set & ~(1 << v))


def permute(digraph: Digraph, perm: Sequence[int]) -> Digraph:
    """Relabel vertex u as perm[u]"""
    if sorted(perm) != list(range(digraph.n)):
        raise DigraphError(f"{list(perm)} is not a permutation of 0..{digraph.n - 1}")
    return from_arcs(digraph.n, [(perm[u], perm[v]) for u, v in digraph.arcs()])


# isomorphism


def canonical_form(digraph: Digraph) -> CanonicalForm:
    """Minimize the row-major adjacency code over all vertex permutations

    Args:
        digraph (Digraph): digraph with at most 8 vertices

    Raises:
        CapabilityError: more than 8 vertices

    Returns:
        CanonicalForm: equal for two digraphs iff they are isomorphic
    """
    n = digraph.n
    if n > MAX_ISOMORPHISM_VERTICES:
        raise CapabilityError(
            f"canonical forms are limited to {MAX_ISOMORPHISM_VERTICES} vertices, got {n}"
        )
    return CanonicalForm(n, _minimal_code(n, tuple(digraph.arcs())))


@lru_cache(maxsize=1 << 16)
def _minimal_code(n: int, arcs: Tuple[Tuple[int, int], ...]) -> int:
    best: Optional[int] = None
    for perm in itertools.permutations(range(n)):
        code = 0
        for u, v in arcs:
            code |= 1 << _bit_position(n, perm[u], perm[v])
        if best is None or code < best:
            best = code
    return best or 0


def is_isomorphic(first: Digraph, second: Digraph) -> bool:
    if first.n != second.n or first.arc_count != second.arc_count:
        return False
    if sorted(first.out_degrees()) != sorted(second.out_degrees()):
        return False
    if sorted(first.in_degrees()) != sorted(second.in_degrees()):
        return False
    return canonical_form(first) == canonical_form(second)


def find_induced(digraph: Digraph, pattern: Digraph) -> Optional[Tuple[int, ...]]:
    """Vertices of an induced copy of pattern in digraph, or None"""
    if pattern.n > digraph.n:
        return None
    target = canonical_form(pattern)
    for subset in itertools.combinations(range(digraph.n), pattern.n):
        sub = induced(digraph, subset)
        if sub.arc_count != pattern.arc_count:
            continue
        if canonical_form(sub) == target:
            return subset
    return None


def contains_induced(digraph: Digraph, pattern: Digraph) -> bool:
    return find_induced(digraph, pattern) is not None


# enumeration


def enumerate_connected(n: int) -> Iterator[Digraph]:
    """Connected simple digraphs on n vertices, one per isomorphism class

    All 2^(n(n-1)) labelled arc sets are filtered by connectivity and
    deduplicated through their canonical code; classes come out in ascending
    canonical form and each representative is its own canonical labelling.

    Args:
        n (int): vertex count, 1..5

    Yields:
        Digraph: class representatives
    """
    if not 1 <= n <= MAX_ENUMERATION_VERTICES:
        raise CapabilityError(
            f"enumeration is limited to 1..{MAX_ENUMERATION_VERTICES} vertices, got {n}"
        )
    for code in _connected_canonical_codes(n):
        yield Digraph.from_code(n, code)


@lru_cache(maxsize=None)
def _connected_canonical_codes(n: int) -> Tuple[int, ...]:
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    bits = [(masks >> j & 1).astype(bool) for j in range(len(pairs))]

    neighbours = [np.zeros(len(masks), dtype=np.int64) for _ in range(n)]
    for bit, (u, v) in zip(bits, pairs):
        neighbours[u] |= np.where(bit, 1 << v, 0)
        neighbours[v] |= np.where(bit, 1 << u, 0)
    reach = np.ones(len(masks), dtype=np.int64)
    for _ in range(n - 1):
        grown = reach.copy()
        for u in range(n):
            grown |= np.where(reach >> u & 1 == 1, neighbours[u], 0)
        reach = grown
    connected = reach == (1 << n) - 1
    bits = [bit[connected] for bit in bits]
    logger.debug(f"n={n}: {int(connected.sum())} connected labelled digraphs")

    best = None
    zero = np.uint64(0)
    for perm in itertools.permutations(range(n)):
        code = np.zeros(int(connected.sum()), dtype=np.uint64)
        for bit, (u, v) in zip(bits, pairs):
            code |= np.where(bit, np.uint64(1 << _bit_position(n, perm[u], perm[v])), zero)
        best = code if best is None else np.minimum(best, code)
    classes = tuple(int(code) for code in np.unique(best))
    logger.debug(f"n={n}: {len(classes)} isomorphism classes")
    return classes
