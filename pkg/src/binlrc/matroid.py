"""Matroids given by a rank oracle over subset bitmasks.

``Matroid`` works from any rank function; ``BinaryMatroid`` is backed by a
generator matrix and answers closure and circuit queries with GF(2)
elimination instead of repeated rank calls.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Sequence

from . import gf2
from .gf2 import BitMatrix, bits

MAX_TABLE_GROUND = 16
# kernel scans above this nullity fall back to search by cardinality
MAX_KERNEL_NULLITY = 16


class MatroidAxiomError(ValueError):
    """An explicit rank table violates the rank axioms."""


class ColoopError(ValueError):
    """No circuit exists through a co-loop."""


class Matroid:
    """Matroid on the elements of ``ground`` with a memoised rank oracle.

    The memo is a fill-once dict shared with restrictions; racing writers
    store identical values, so concurrent readers stay consistent.
    """

    def __init__(self, ground: int, rank_fn: Callable[[int], int], _memo: dict[int, int] | None = None):
        self.ground = ground
        self._rank_fn = rank_fn
        self._memo: dict[int, int] = {} if _memo is None else _memo

    @classmethod
    def from_rank_table(cls, n: int, table: Sequence[int]) -> "Matroid":
        """Matroid on {0..n-1} from ranks indexed by subset mask.

        The table is checked against the rank axioms exhaustively, which is
        only attempted for n <= 16.
        """
        if n > MAX_TABLE_GROUND:
            raise ValueError(f"rank tables are limited to {MAX_TABLE_GROUND} elements")
        if len(table) != 1 << n:
            raise ValueError(f"expected {1 << n} table entries, got {len(table)}")
        _check_rank_axioms(n, table)
        ranks = tuple(table)
        return cls(gf2.full_mask(n), ranks.__getitem__)

    # -- basic queries --------------------------------------------------

    @property
    def size(self) -> int:
        return self.ground.bit_count()

    def elements(self) -> list[int]:
        return list(bits(self.ground))

    def rank(self, x: int) -> int:
        x &= self.ground
        r = self._memo.get(x)
        if r is None:
            r = self._rank_fn(x)
            self._memo[x] = r
        return r

    def full_rank(self) -> int:
        return self.rank(self.ground)

    def nullity(self, x: int) -> int:
        x &= self.ground
        return x.bit_count() - self.rank(x)

    def is_independent(self, x: int) -> bool:
        return self.rank(x) == (x & self.ground).bit_count()

    def closure(self, x: int) -> int:
        x &= self.ground
        r = self.rank(x)
        out = x
        for e in bits(self.ground & ~x):
            if self.rank(x | (1 << e)) == r:
                out |= 1 << e
        return out

    def cyc(self, x: int) -> int:
        x &= self.ground
        r = self.rank(x)
        out = 0
        for e in bits(x):
            if self.rank(x & ~(1 << e)) == r:
                out |= 1 << e
        return out

    def is_flat(self, x: int) -> bool:
        return self.closure(x) == x & self.ground

    def is_cyclic(self, x: int) -> bool:
        return self.cyc(x) == x & self.ground

    def is_cyclic_flat(self, x: int) -> bool:
        return self.is_flat(x) and self.is_cyclic(x)

    def is_coloop(self, e: int) -> bool:
        return self.rank(self.ground & ~(1 << e)) < self.full_rank()

    def coloops(self) -> int:
        return sum(1 << e for e in bits(self.ground) if self.is_coloop(e))

    def is_simple(self) -> bool:
        elems = self.elements()
        if any(self.rank(1 << e) == 0 for e in elems):
            return False
        return all(self.rank((1 << a) | (1 << b)) == 2 for a, b in combinations(elems, 2))

    def is_simple_no_coloops(self) -> bool:
        return self.is_simple() and self.coloops() == 0

    def restrict(self, x: int) -> "Matroid":
        return Matroid(x & self.ground, self._rank_fn, self._memo)

    def min_circuit_through(self, e: int) -> int:
        """A minimum-size circuit containing ``e`` (lowest mask among ties)."""
        if not (self.ground >> e) & 1:
            raise ValueError(f"element {e + 1} is not in the ground set")
        if self.is_coloop(e):
            raise ColoopError(f"element {e + 1} is a co-loop")
        bit = 1 << e
        if self.rank(bit) == 0:
            return bit
        others = list(bits(self.ground & ~bit))
        # smallest independent S with e in cl(S); then S + e is a circuit
        for size in range(1, self.full_rank() + 1):
            best = None
            for combo in combinations(others, size):
                s = sum(1 << j for j in combo)
                if self.rank(s | bit) == self.rank(s) == size:
                    cand = s | bit
                    if best is None or cand < best:
                        best = cand
            if best is not None:
                return best
        raise AssertionError("non-coloop without a circuit")  # pragma: no cover

    def is_circuit(self, x: int) -> bool:
        x &= self.ground
        if not x or self.is_independent(x):
            return False
        return all(self.is_independent(x & ~(1 << e)) for e in bits(x))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(size={self.size}, rank={self.full_rank()})"


class BinaryMatroid(Matroid):
    """Column matroid of a binary generator matrix."""

    def __init__(self, matrix: BitMatrix, ground: int | None = None, _memo: dict[int, int] | None = None):
        self.matrix = matrix
        if ground is None:
            ground = matrix.ground
        super().__init__(ground & matrix.ground, self._matrix_rank, _memo)

    def _matrix_rank(self, x: int) -> int:
        return gf2.rank(self.matrix, x)

    def closure(self, x: int) -> int:
        return gf2.closure_mask(self.matrix, x & self.ground, self.ground)

    def cyc(self, x: int) -> int:
        return gf2.cyclic_part(self.matrix, x & self.ground)

    def restrict(self, x: int) -> "BinaryMatroid":
        return BinaryMatroid(self.matrix, x & self.ground, self._memo)

    def cycle_space_basis(self) -> list[int]:
        """Kernel basis over the ground set; each vector is a fundamental circuit."""
        return gf2.cycle_basis(self.matrix, self.ground)

    def min_circuit_through(self, e: int) -> int:
        if not (self.ground >> e) & 1:
            raise ValueError(f"element {e + 1} is not in the ground set")
        bit = 1 << e
        if self.matrix.columns[e] == 0:
            return bit
        if self.is_coloop(e):
            raise ColoopError(f"element {e + 1} is a co-loop")
        basis = self.cycle_space_basis()
        if len(basis) <= MAX_KERNEL_NULLITY:
            # the circuits through e are the minimal supports among cycles
            # containing e, so the lightest such cycle is a circuit
            best = None
            for v in gf2.span_enumerate(basis):
                if v & bit:
                    key = (v.bit_count(), v)
                    if best is None or key < best:
                        best = key
            assert best is not None
            return best[1]
        rest = gf2.low_weight_representation(self.matrix, self.ground, e)
        assert rest is not None
        return rest | bit

    def __repr__(self) -> str:
        return f"BinaryMatroid(size={self.size}, rank={self.full_rank()})"


def _check_rank_axioms(n: int, table: Sequence[int]) -> None:
    # the rank axioms are equivalent to: rank(0) = 0, unit increase, local submodularity
    if table[0] != 0:
        raise MatroidAxiomError("rank of the empty set must be 0")
    full = 1 << n
    for x in range(full):
        rx = table[x]
        for a in range(n):
            abit = 1 << a
            if x & abit:
                continue
            ra = table[x | abit]
            if not rx <= ra <= rx + 1:
                raise MatroidAxiomError(f"unit-increase violated at {gf2.format_set(x)} + {a + 1}")
            for b in range(a + 1, n):
                bbit = 1 << b
                if x & bbit:
                    continue
                if ra + table[x | bbit] < table[x | abit | bbit] + rx:
                    raise MatroidAxiomError(
                        f"submodularity violated at {gf2.format_set(x)} with {a + 1},{b + 1}"
                    )


def uniform_matroid(rank: int, n: int) -> Matroid:
    """U(rank, n) from an explicit table; handy non-binary test case."""
    table = [min(x.bit_count(), rank) for x in range(1 << n)]
    return Matroid.from_rank_table(n, table)
