"""Dense GF(2) linear algebra on Python int bitsets.

A vector is an ``int`` whose bit ``k`` is coordinate ``k``. These routines back
the independent oracles (criterion solver, Betti numbers, fundamental-class
counting); the persistence engine only borrows the bit helpers.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class Basis:
    """Incremental echelon basis over GF(2).

    Each stored vector is keyed by its leading bit and remembers which input
    vectors were combined to produce it, so membership queries can also
    return a certificate.
    """

    __slots__ = ("pivots",)

    def __init__(self) -> None:
        # leading bit -> (reduced vector, combination bitset over inserted indices)
        self.pivots: dict[int, tuple[int, int]] = {}

    def copy(self) -> "Basis":
        b = Basis()
        b.pivots = dict(self.pivots)
        return b

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: int) -> tuple[int, int]:
        combo = 0
        pivots = self.pivots
        while vec:
            top = vec.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                break
            vec ^= hit[0]
            combo ^= hit[1]
        return vec, combo

    def add(self, vec: int, tag: int = 0) -> bool:
        """Insert ``vec`` (labelled by bitset ``tag``); False if it was dependent."""
        combo = tag
        pivots = self.pivots
        while vec:
            top = vec.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                pivots[top] = (vec, combo)
                return True
            vec ^= hit[0]
            combo ^= hit[1]
        return False

    def contains(self, vec: int) -> bool:
        return self.reduce(vec)[0] == 0


def rank(vectors: Iterable[int]) -> int:
    basis = Basis()
    return sum(basis.add(v) for v in vectors)


def solve(columns: Sequence[int], target: int) -> int | None:
    """Find ``x`` with XOR of ``columns[j]`` over set bits ``j`` of ``x`` equal to ``target``.

    Returns the bitset ``x`` or None when the system is inconsistent.
    """
    basis = Basis()
    for j, col in enumerate(columns):
        basis.add(col, 1 << j)
    rest, combo = basis.reduce(target)
    if rest:
        return None
    return combo


def count_solutions(columns: Sequence[int], target: int) -> int:
    """Number of GF(2) solutions: 0 or ``2**(ncols - rank)``."""
    basis = Basis()
    r = 0
    for j, col in enumerate(columns):
        r += basis.add(col, 1 << j)
    if not basis.contains(target):
        return 0
    return 1 << (len(columns) - r)


def bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def popcount(x: int) -> int:
    return bin(x).count("1")
