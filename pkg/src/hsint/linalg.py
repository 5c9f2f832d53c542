"""Incremental sparse Gaussian elimination over F_p.

Vectors are dicts ``key -> residue``; keys only need a total order.  Each
stored pivot row has its largest key as pivot with coefficient 1, so a
reduction pass walks keys in decreasing order and never revisits a key.
"""

from __future__ import annotations

import heapq
from typing import Dict, Hashable, List, Tuple

Vector = Dict[Hashable, int]


class _Rev:
    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key

    def __lt__(self, other):
        return other.key < self.key


def axpy(acc: Vector, x: Vector, a: int, p: int) -> None:
    """acc += a*x in place."""
    for k, v in x.items():
        w = (acc.get(k, 0) + a * v) % p
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


class Echelon:
    """Row echelon basis of the span of labelled vectors.

    ``add(vec, label)`` either extends the basis or reports the dependency of
    ``vec`` on earlier labels; ``reduce(vec)`` returns the remainder of ``vec``
    modulo the span and the label combination of the reduced-away part.
    """

    def __init__(self, p: int):
        self.p = p
        self.rows: Dict[Hashable, Tuple[Vector, Vector]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Vector) -> Tuple[Vector, Vector]:
        p = self.p
        rows = self.rows
        rem = {k: v % p for k, v in vec.items() if v % p}
        combo: Vector = {}
        heap = [_Rev(k) for k in rem if k in rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap).key
            c = rem.get(k, 0)
            if not c:
                continue
            row, row_combo = rows[k]
            for key, v in row.items():
                if key == k:
                    continue
                present = key in rem
                w = (rem.get(key, 0) - c * v) % p
                if w:
                    rem[key] = w
                    if not present and key in rows:
                        heapq.heappush(heap, _Rev(key))
                elif present:
                    del rem[key]
            del rem[k]
            axpy(combo, row_combo, c, p)
        return rem, combo

    def add(self, vec: Vector, label: Hashable) -> Tuple[bool, Vector]:
        """Returns (True, {}) if vec was independent, else (False, combination)."""
        rem, combo = self.reduce(vec)
        if not rem:
            return False, combo
        p = self.p
        pivot = max(rem)
        inv = pow(rem[pivot], -1, p)
        row = {k: v * inv % p for k, v in rem.items()}
        row_combo = {label: inv}
        axpy(row_combo, combo, -inv, p)
        self.rows[pivot] = (row, row_combo)
        return True, {}

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)[0]


def nullspace_from_columns(columns: List[Tuple[Hashable, Vector]], p: int):
    """Column-by-column elimination.

    Returns (echelon, null_vectors) where each null vector is a label
    combination summing the columns to zero; earlier columns become pivots.
    """
    ech = Echelon(p)
    nulls = []
    for label, vec in columns:
        new, combo = ech.add(vec, label)
        if not new:
            null = {label: 1}
            axpy(null, combo, -1, p)
            nulls.append(null)
    return ech, nulls
