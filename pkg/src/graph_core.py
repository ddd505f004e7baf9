#!/usr/bin/env python3
"""
Graph core for dynkin-walk
Simple graphs with 1-indexed vertices, the Dynkin family D_n, adjacency
matrices, equitable partitions (characteristic matrix C, divisor matrix B),
and the graph6 / edge-list text formats.

The vertex labeling of D_n is inferred, not quoted: the twin pendant
vertices are 1 and 2, both attached to vertex 3, and 3-4-...-n is a path.
This is the only labeling under which the first two rows of W(D_5) agree
and the partition {{1,2},{3},...,{n}} is equitable with the tridiagonal
divisor matrix carrying its single 2 in position (2,1).
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from .errors import (
    EdgeListFormatError,
    Graph6ParseError,
    InvalidParameterError,
    NotEquitableError,
)
from .exact_linalg import BigMatrix, mat_mul

logger = logging.getLogger("dynkin-walk.graph_core")

Edge = Tuple[int, int]

GRAPH6_HEADER = ">>graph6<<"
GRAPH6_MAX_N = 258047


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..n"""
    n: int
    edges: FrozenSet[Edge]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError(f"a graph needs at least one vertex, got n={self.n}")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise InvalidParameterError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise InvalidParameterError(f"edge {u}-{v} leaves the vertex range 1..{self.n}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        edges = list(edges)
        seen = set()
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidParameterError(f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
        return cls(n, frozenset(edges))

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def neighbors(self, v: int) -> List[int]:
        return sorted([b for a, b in self.edges if a == v] + [a for a, b in self.edges if b == v])

    def degrees(self) -> Tuple[int, ...]:
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg[1:])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex i renamed perm[i-1]; perm is a permutation of 1..n"""
        if sorted(perm) != list(range(1, self.n + 1)):
            raise InvalidParameterError("relabeling must be a permutation of 1..n")
        return Graph(self.n, frozenset((perm[u - 1], perm[v - 1]) for u, v in self.edges))


@dataclass(frozen=True)
class Partition:
    """Ordered list of disjoint nonempty vertex cells"""
    cells: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        seen = set()
        for index, cell in enumerate(self.cells, start=1):
            if not cell:
                raise InvalidParameterError(f"cell {index} is empty")
            overlap = seen & cell
            if overlap:
                raise InvalidParameterError(f"vertex {min(overlap)} appears in more than one cell")
            seen |= cell

    @classmethod
    def of(cls, cells: Iterable[Iterable[int]]) -> "Partition":
        return cls(tuple(frozenset(c) for c in cells))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read cells written as '1,2;3;4'"""
        cells = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                cells.append([int(x) for x in chunk.split(",")])
            except ValueError:
                raise InvalidParameterError(f"cannot read partition cell {chunk!r}") from None
        return cls.of(cells)

    def covers(self, n: int) -> bool:
        return set().union(*self.cells) == set(range(1, n + 1)) if self.cells else n == 0

    def cell_of(self) -> Dict[int, int]:
        """Map vertex -> 0-based cell index"""
        return {v: index for index, cell in enumerate(self.cells) for v in cell}

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class DivisorData:
    """Characteristic matrix C (n x k) and divisor matrix B (k x k) of an equitable partition"""
    C: BigMatrix
    B: BigMatrix


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def build_dynkin_d(n: int) -> Graph:
    """D_n: leaves 1 and 2 hang off vertex 3, and 3-4-...-n is a path"""
    if n < 4:
        raise InvalidParameterError(f"D_n is defined for n >= 4, got n={n}")
    edges = [(1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n)]
    return Graph.from_edges(n, edges)


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(1, n)))


def adjacency_matrix(g: Graph) -> BigMatrix:
    """Symmetric 0/1 matrix with zero diagonal"""
    rows = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        rows[u - 1][v - 1] = 1
        rows[v - 1][u - 1] = 1
    return BigMatrix.from_rows(rows)


def from_adjacency(m: BigMatrix) -> Graph:
    if not m.is_square:
        raise InvalidParameterError(f"adjacency matrix must be square, got {m.rows}x{m.cols}")
    edges = set()
    for i in range(m.rows):
        if m[i, i] != 0:
            raise InvalidParameterError(f"nonzero diagonal entry at vertex {i + 1}")
        for j in range(i + 1, m.cols):
            x, y = m[i, j], m[j, i]
            if x != y or x not in (0, 1):
                raise InvalidParameterError(f"entry ({i + 1},{j + 1}) is not a symmetric 0/1 value")
            if x:
                edges.add((i + 1, j + 1))
    return Graph(m.rows, frozenset(edges))


def erdos_renyi(n: int, rng: np.random.Generator, p: float = 0.5) -> Graph:
    """G(n, p): one uniform draw per vertex pair, pairs taken in lexicographic order"""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    draws = rng.random(len(pairs))
    return Graph(n, frozenset(pair for pair, x in zip(pairs, draws) if x < p))


def random_corpus(count: int, n_max: int, seed: int, p: float = 0.5) -> Iterator[Graph]:
    """Reproducible corpus of G(n, p) graphs with n uniform in 1..n_max

    The stream comes from numpy's PCG64 bit generator seeded with `seed`
    (a 128-bit linear congruential generator with a permuted output), so a
    given (count, n_max, seed) always yields the same graphs.
    """
    if count < 1 or n_max < 1:
        raise InvalidParameterError("corpus needs count >= 1 and n_max >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        yield erdos_renyi(n, rng, p)


# ---------------------------------------------------------------------------
# equitable partitions
# ---------------------------------------------------------------------------

def dynkin_partition(n: int) -> Partition:
    """{{1,2},{3},{4},...,{n}}"""
    if n < 4:
        raise InvalidParameterError(f"D_n is defined for n >= 4, got n={n}")
    return Partition.of([[1, 2]] + [[v] for v in range(3, n + 1)])


def characteristic_matrix(p: Partition, n: int) -> BigMatrix:
    """n x k cell-membership indicator"""
    if not p.covers(n):
        raise InvalidParameterError(f"partition does not cover the vertices 1..{n}")
    cell_of = p.cell_of()
    rows = [[0] * len(p) for _ in range(n)]
    for v in range(1, n + 1):
        rows[v - 1][cell_of[v]] = 1
    return BigMatrix.from_rows(rows, cols=len(p))


def divisor_of_partition(g: Graph, p: Partition) -> DivisorData:
    """C and B of an equitable partition; equitability is checked, never assumed"""
    C = characteristic_matrix(p, g.n)
    cell_of = p.cell_of()
    k = len(p)

    counts_by_vertex = {v: [0] * k for v in range(1, g.n + 1)}
    for u, v in g.edges:
        counts_by_vertex[u][cell_of[v]] += 1
        counts_by_vertex[v][cell_of[u]] += 1

    B_rows = []
    for i, cell in enumerate(p.cells):
        members = sorted(cell)
        reference = counts_by_vertex[members[0]]
        for v in members[1:]:
            for j in range(k):
                if counts_by_vertex[v][j] != reference[j]:
                    raise NotEquitableError((i + 1, j + 1))
        B_rows.append(list(reference))
    B = BigMatrix.from_rows(B_rows, cols=k)

    A = adjacency_matrix(g)
    if mat_mul(A, C) != mat_mul(C, B):
        raise NotEquitableError((0, 0), "A*C differs from C*B")
    logger.debug(f"divisor matrix of a {k}-cell partition on {g.n} vertices verified")
    return DivisorData(C, B)


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= GRAPH6_MAX_N:
        return "~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0))
    raise InvalidParameterError(f"graph6 output supports at most {GRAPH6_MAX_N} vertices")


def emit_graph6(g: Graph) -> str:
    """graph6 code of g; vertex i of g is vertex i-1 of the format"""
    bits = [1 if (i, j) in g.edges else 0
            for j in range(2, g.n + 1) for i in range(1, j)]
    bits.extend([0] * (-len(bits) % 6))
    chunks = []
    for start in range(0, len(bits), 6):
        value = 0
        for bit in bits[start:start + 6]:
            value = (value << 1) | bit
        chunks.append(chr(value + 63))
    return _encode_n(g.n) + "".join(chunks)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 string; an optional >>graph6<< header and trailing newline are accepted"""
    base = len(GRAPH6_HEADER) if text.startswith(GRAPH6_HEADER) else 0
    body = text[base:].rstrip("\r\n")
    for index, ch in enumerate(body):
        if not 63 <= ord(ch) <= 126:
            raise Graph6ParseError(base + index, f"character {ch!r} outside the printable range '?'..'~'")
    if not body:
        raise Graph6ParseError(base, "missing vertex count")

    if body[0] != "~":
        n, pos = ord(body[0]) - 63, 1
    else:
        if len(body) < 4:
            raise Graph6ParseError(base + len(body), "truncated long-form vertex count")
        if body[1] == "~":
            raise Graph6ParseError(base + 1, "vertex counts above 258047 are not supported")
        n = 0
        for ch in body[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 4
        if n <= 62:
            raise Graph6ParseError(base + 1, f"long-form header used for n={n}")
    if n < 1:
        raise Graph6ParseError(base, "graph must have at least one vertex")

    pair_count = n * (n - 1) // 2
    expected = (pair_count + 5) // 6
    payload = body[pos:]
    if len(payload) != expected:
        offset = base + pos + min(len(payload), expected)
        raise Graph6ParseError(offset, f"expected {expected} adjacency bytes for n={n}, found {len(payload)}")

    bits = []
    for ch in payload:
        value = ord(ch) - 63
        bits.extend((value >> shift) & 1 for shift in range(5, -1, -1))
    if any(bits[pair_count:]):
        raise Graph6ParseError(base + pos + expected - 1, "nonzero padding bits")

    edges = set()
    index = 0
    for j in range(2, n + 1):
        for i in range(1, j):
            if bits[index]:
                edges.add((i, j))
            index += 1
    return Graph(n, frozenset(edges))


# ---------------------------------------------------------------------------
# edge lists
# ---------------------------------------------------------------------------

def emit_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """First line 'n', then one 'u v' pair per line; blank lines and '#' comments are skipped"""
    lines = [(no, line.split("#", 1)[0].strip()) for no, line in enumerate(text.splitlines(), start=1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines:
        raise EdgeListFormatError(1, "empty input")
    header_no, header = lines[0]
    try:
        n = int(header)
    except ValueError:
        raise EdgeListFormatError(header_no, f"expected the vertex count, got {header!r}") from None
    if n < 1:
        raise EdgeListFormatError(header_no, "vertex count must be at least 1")

    edges = set()
    for no, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(no, f"expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(no, f"non-integer endpoint in {line!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise EdgeListFormatError(no, f"endpoint outside 1..{n}")
        if u == v:
            raise EdgeListFormatError(no, f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in edges:
            raise EdgeListFormatError(no, f"duplicate edge {u}-{v}")
        edges.add(key)
    return Graph(n, frozenset(edges))


def read_graph(text: str) -> Graph:
    """Parse graph6 or edge-list input, whichever the text is"""
    stripped = text.lstrip()
    if stripped.startswith(GRAPH6_HEADER) or (stripped and ord(stripped[0]) >= 63):
        lines = [line for line in stripped.splitlines() if line.strip()]
        if len(lines) != 1:
            raise Graph6ParseError(0, f"expected a single graph6 line, found {len(lines)}")
        return parse_graph6(lines[0].strip())
    return parse_edge_list(text)
