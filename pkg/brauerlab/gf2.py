"""Linear algebra over GF(2) and GF(p): int-bitset ranks and galois subspace operations."""
from __future__ import annotations

from typing import Iterable, Sequence

import galois
import numpy as np


def xor_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of integer bitset rows (pivot on the highest set bit)."""
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                break
            row ^= pivots[top]
    return len(pivots)


class _Components:
    """Union-find over column indices."""

    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def component_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over GF(2) of sparse rows given as column-index lists.

    Rows touching disjoint column sets are independent blocks, so the rank is
    the sum of the block ranks; each block is eliminated with local bitsets.
    """
    components = _Components()
    for row in rows:
        for col in row[1:]:
            components.union(row[0], col)
    blocks: dict[int, list[Sequence[int]]] = {}
    for row in rows:
        if row:
            blocks.setdefault(components.find(row[0]), []).append(row)
    total = 0
    for block in blocks.values():
        local: dict[int, int] = {}
        bitsets = []
        for row in block:
            bits = 0
            for col in row:
                bits ^= 1 << local.setdefault(col, len(local))
            bitsets.append(bits)
        total += xor_rank(bitsets)
    return total


# galois-backed subspace operations ---------------------------------------

def _matrix(field, vectors: Sequence[Sequence[int]], width: int):
    return field(np.array([list(v) for v in vectors], dtype=int).reshape(len(vectors), width) % field.characteristic)


def fp_rank(vectors: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p of integer vectors (entries reduced mod p)."""
    if not vectors:
        return 0
    field = galois.GF(p)
    return int(np.linalg.matrix_rank(_matrix(field, vectors, len(vectors[0]))))


def row_basis(vectors: Sequence[Sequence[int]], width: int, p: int = 2) -> list[tuple[int, ...]]:
    """Reduced-echelon basis of the row span, lexicographically least first."""
    if not vectors:
        return []
    field = galois.GF(p)
    space = _matrix(field, vectors, width).row_space()
    return [tuple(int(x) for x in row) for row in space]


def span_intersection(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], width: int, p: int = 2) -> list[tuple[int, ...]]:
    """Reduced-echelon basis of span(a) ∩ span(b) over F_p.

    Left null vectors [x | y] of the stacked matrix satisfy x·A = −y·B, so the
    vectors x·A span the intersection.
    """
    if not a or not b:
        return []
    field = galois.GF(p)
    mat_a = _matrix(field, a, width)
    mat_b = _matrix(field, b, width)
    null = np.concatenate([mat_a, mat_b], axis=0).left_null_space()
    if null.shape[0] == 0:
        return []
    common = null[:, : len(a)] @ mat_a
    return row_basis([tuple(int(x) for x in row) for row in common], width, p)


def in_span(vec: Sequence[int], basis: Sequence[Sequence[int]], p: int = 2) -> bool:
    if not basis:
        return not any(x % p for x in vec)
    return fp_rank(list(basis) + [vec], p) == fp_rank(basis, p)
