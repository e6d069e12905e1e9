import json
import logging
from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy import ZZ

from .critical import critical_ideal_gens
from .digraph import Digraph, emit_digraph6
from .exceptions import MatrixError
from .zpoly import MinorExpander, evaluate

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]

POINT_OUTDEGREE = "outdegree"
POINT_ZERO = "zero"


def validate_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Copy a rectangular integer matrix, rejecting anything else"""
    matrix = [list(row) for row in rows]
    if len({len(row) for row in matrix}) > 1:
        raise MatrixError("matrix rows have different lengths")
    for r, row in enumerate(matrix):
        for c, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, int):
                raise MatrixError(f"entry ({r}, {c}) = {entry!r} is not an integer")
    return matrix


def read_matrix(text: str) -> IntMatrix:
    """Parse a JSON list of rows or whitespace-separated integer rows"""
    text = text.strip()
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except ValueError as e:
            logger.error(str(e))
            raise MatrixError(f"invalid JSON matrix: {e}") from e
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise MatrixError("JSON matrix must be a list of rows")
        return validate_matrix(rows)
    rows = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append([int(token) for token in line.split()])
        except ValueError as e:
            raise MatrixError(f"line {number}: {e}") from e
    return validate_matrix(rows)


def adjacency_matrix(digraph: Digraph) -> IntMatrix:
    return digraph.adjacency()


def laplacian_matrix(digraph: Digraph) -> IntMatrix:
    """L(D) = diag(out-degrees) - A(D)"""
    matrix = [[-entry for entry in row] for row in digraph.adjacency()]
    for u, degree in enumerate(digraph.out_degrees()):
        matrix[u][u] = degree
    return matrix


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(first: Sequence[Sequence[int]], second: Sequence[Sequence[int]]) -> IntMatrix:
    return [
        [sum(a * b for a, b in zip(row, col)) for col in zip(*second)] for row in first
    ]


@dataclass(frozen=True)
class SnfResult(object):
    """Smith normal form U * M * V = diag(factors, 0, ...)"""

    factors: Tuple[int, ...]
    rank: int
    zero_count: int
    shape: Tuple[int, int]
    U: Optional[Tuple[Tuple[int, ...], ...]] = None
    V: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return self.factors + (0,) * self.zero_count

    def diagonal_matrix(self) -> IntMatrix:
        rows, cols = self.shape
        matrix = [[0] * cols for _ in range(rows)]
        for i, factor in enumerate(self.factors):
            matrix[i][i] = factor
        return matrix

    def lines(self) -> List[str]:
        rendered = [
            f"factors={list(self.factors)} rank={self.rank} zero_count={self.zero_count}"
        ]
        if self.U is not None and self.V is not None:
            rendered.append(f"U={[list(row) for row in self.U]}")
            rendered.append(f"V={[list(row) for row in self.V]}")
        return rendered

    def to_dict(self) -> dict:
        data = {
            "factors": list(self.factors),
            "rank": self.rank,
            "zero_count": self.zero_count,
        }
        if self.U is not None and self.V is not None:
            data["U"] = [list(row) for row in self.U]
            data["V"] = [list(row) for row in self.V]
        return data


class _Elimination(object):
    def __init__(self, matrix: IntMatrix):
        self.A = [list(row) for row in matrix]
        self.rows = len(matrix)
        self.cols = len(matrix[0]) if matrix else 0
        self.U = identity(self.rows)
        self.V = identity(self.cols)

    def swap_rows(self, i: int, j: int) -> None:
        if i != j:
            self.A[i], self.A[j] = self.A[j], self.A[i]
            self.U[i], self.U[j] = self.U[j], self.U[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i != j:
            for row in self.A:
                row[i], row[j] = row[j], row[i]
            for row in self.V:
                row[i], row[j] = row[j], row[i]

    def add_row(self, target: int, source: int, factor: int) -> None:
        """row target += factor * row source"""
        for matrix in (self.A, self.U):
            matrix[target] = [t + factor * s for t, s in zip(matrix[target], matrix[source])]

    def add_col(self, target: int, source: int, factor: int) -> None:
        for matrix in (self.A, self.V):
            for row in matrix:
                row[target] += factor * row[source]

    def negate_row(self, i: int) -> None:
        self.A[i] = [-x for x in self.A[i]]
        self.U[i] = [-x for x in self.U[i]]

    def smallest(self, cells: List[Tuple[int, int]]) -> Optional[Tuple[int, int]]:
        best = None
        for r, c in cells:
            value = self.A[r][c]
            if value and (best is None or abs(value) < abs(self.A[best[0]][best[1]])):
                best = (r, c)
        return best

    def diagonalize(self) -> int:
        """Clear rows and columns around successive pivots, returns the rank"""
        rank = 0
        for t in range(min(self.rows, self.cols)):
            cells = [(r, c) for r in range(t, self.rows) for c in range(t, self.cols)]
            pivot = self.smallest(cells)
            if pivot is None:
                break
            self.swap_rows(t, pivot[0])
            self.swap_cols(t, pivot[1])
            while True:
                p = self.A[t][t]
                for r in range(t + 1, self.rows):
                    if self.A[r][t]:
                        self.add_row(r, t, -(self.A[r][t] // p))
                for c in range(t + 1, self.cols):
                    if self.A[t][c]:
                        self.add_col(c, t, -(self.A[t][c] // p))
                cells = [(t, t)]
                cells += [(r, t) for r in range(t + 1, self.rows)]
                cells += [(t, c) for c in range(t + 1, self.cols)]
                pivot = self.smallest(cells)
                if pivot == (t, t) and all(self.A[r][c] == 0 for r, c in cells[1:]):
                    break
                self.swap_rows(t, pivot[0])
                self.swap_cols(t, pivot[1])
            rank += 1
        return rank

    def repair_chain(self, rank: int) -> None:
        """Turn diag(a, b) into diag(gcd, lcm) until every factor divides the next"""
        for i in range(rank):
            if self.A[i][i] < 0:
                self.negate_row(i)
        for i in range(rank):
            for j in range(i + 1, rank):
                a, b = self.A[i][i], self.A[j][j]
                if b % a == 0:
                    continue
                s, t, g = ZZ.gcdex(ZZ(a), ZZ(b))
                s, t, g = int(s), int(t), int(g)
                self._mix_rows(i, j, ((s, t), (-b // g, a // g)))
                self._mix_cols(i, j, ((1, -t * b // g), (1, s * a // g)))

    def _mix_rows(self, i: int, j: int, block: Tuple[Tuple[int, int], ...]) -> None:
        (p, q), (r, s) = block
        for matrix in (self.A, self.U):
            row_i, row_j = matrix[i], matrix[j]
            matrix[i] = [p * x + q * y for x, y in zip(row_i, row_j)]
            matrix[j] = [r * x + s * y for x, y in zip(row_i, row_j)]

    def _mix_cols(self, i: int, j: int, block: Tuple[Tuple[int, int], ...]) -> None:
        (p, q), (r, s) = block
        for matrix in (self.A, self.V):
            for row in matrix:
                x, y = row[i], row[j]
                row[i], row[j] = p * x + r * y, q * x + s * y


def smith_normal_form(rows: Sequence[Sequence[int]], transforms: bool = False) -> SnfResult:
    """Smith normal form by integral row and column operations

    Pivots are the smallest nonzero magnitude, ties broken by row-major
    position. A 2x2 gcd/lcm repair afterwards enforces the divisibility chain.

    Args:
        rows (Sequence[Sequence[int]]): integer matrix
        transforms (bool, optional): keep the unimodular U and V

    Returns:
        SnfResult: positive invariant factors f_1 | f_2 | ..., rank and optional transforms
    """
    matrix = validate_matrix(rows)
    elimination = _Elimination(matrix)
    rank = elimination.diagonalize()
    elimination.repair_chain(rank)
    factors = tuple(elimination.A[i][i] for i in range(rank))
    size = min(elimination.rows, elimination.cols)
    result = SnfResult(
        factors=factors,
        rank=rank,
        zero_count=size - rank,
        shape=(elimination.rows, elimination.cols),
        U=tuple(tuple(row) for row in elimination.U) if transforms else None,
        V=tuple(tuple(row) for row in elimination.V) if transforms else None,
    )
    logger.debug(f"SNF of {result.shape}: factors={list(factors)}")
    return result


def gcd_minors(rows: Sequence[Sequence[int]], i: int) -> int:
    """Delta_i: gcd of all i x i minors, 0 when they all vanish

    Args:
        rows (Sequence[Sequence[int]]): integer matrix
        i (int): minor size, 1..min(r, c)

    Raises:
        MatrixError: i out of range

    Returns:
        int: nonnegative gcd
    """
    matrix = validate_matrix(rows)
    size = min(len(matrix), len(matrix[0]) if matrix else 0)
    if not 1 <= i <= size:
        raise MatrixError(f"minor size must lie in 1..{size}, got {i}")
    result = 0
    for minor in MinorExpander.for_integers(matrix).minors(i):
        result = gcd(result, abs(int(minor)))
        if result == 1:
            break
    return result


@dataclass(frozen=True)
class GroupSummary(object):
    factors: Tuple[int, ...]
    unit_count: int
    free_rank: int
    rank: int

    def render(self) -> str:
        factors = ",".join(str(f) for f in self.factors)
        return f"factors=[{factors}] free_rank={self.free_rank} unit_count={self.unit_count}"

    def to_dict(self) -> dict:
        return {
            "factors": list(self.factors),
            "free_rank": self.free_rank,
            "unit_count": self.unit_count,
            "rank": self.rank,
        }


def _summarize(diagonal: Sequence[int], n: int, rank: int) -> GroupSummary:
    factors = tuple(f for f in diagonal if f)
    return GroupSummary(
        factors=factors,
        unit_count=sum(1 for f in factors if f == 1),
        free_rank=n - rank,
        rank=rank,
    )


def critical_group(digraph: Digraph) -> GroupSummary:
    """Invariant factors f_1..f_{n-1} of the Laplacian and its free rank"""
    n = digraph.n
    snf = smith_normal_form(laplacian_matrix(digraph))
    if snf.rank < n - 1:
        logger.warning(
            f"{emit_digraph6(digraph)}: Laplacian rank {snf.rank} is below n - 1 = {n - 1}"
        )
    return _summarize(snf.diagonal[: n - 1], n, snf.rank)


def smith_group(digraph: Digraph) -> GroupSummary:
    """Invariant factors of the cokernel of the adjacency matrix"""
    snf = smith_normal_form(adjacency_matrix(digraph))
    return _summarize(snf.diagonal, digraph.n, snf.rank)


def evaluation_point(digraph: Digraph, point_kind: str) -> Tuple[int, ...]:
    if point_kind == POINT_OUTDEGREE:
        return digraph.out_degrees()
    if point_kind == POINT_ZERO:
        return (0,) * digraph.n
    raise MatrixError(f"unknown evaluation point {point_kind!r}")


def evaluation_bridge(digraph: Digraph, i: int, point_kind: str) -> int:
    """gcd of the i-th critical ideal's generators evaluated at a point

    At the out-degree vector this equals Delta_i(L(D)); at the zero vector
    it equals Delta_i(A(D)).

    Args:
        digraph (Digraph): digraph
        i (int): ideal index, 1..n-1
        point_kind (str): "outdegree" or "zero"

    Raises:
        MatrixError: i out of range or unknown point kind

    Returns:
        int: nonnegative gcd of the evaluations
    """
    if not 1 <= i <= digraph.n - 1:
        raise MatrixError(f"ideal index must lie in 1..{digraph.n - 1}, got {i}")
    point = evaluation_point(digraph, point_kind)
    result = 0
    for gen in critical_ideal_gens(digraph, i):
        result = gcd(result, abs(evaluate(gen, point)))
    return result
