"""Bit-packed linear algebra over GF(2).

Vectors and subsets are plain Python ints used as bitsets.  A generator
matrix keeps its rows as ints (bit ``j`` is column ``j``) and derives its
columns as ints (bit ``i`` is row ``i``).  Column indices are 0-based in
the API; text I/O and reports are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_COLS = 64
MAX_ENUM_DIM = 24


class MatrixFormatError(ValueError):
    """Raised when matrix text cannot be parsed."""


# -- subset masks -----------------------------------------------------------


def full_mask(n: int) -> int:
    return (1 << n) - 1


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_from_symbols(symbols: Iterable[int]) -> int:
    """Build a mask from 1-based symbol numbers."""
    mask = 0
    for s in symbols:
        if s < 1:
            raise ValueError(f"symbols are 1-based, got {s}")
        mask |= 1 << (s - 1)
    return mask


def symbols(mask: int) -> list[int]:
    """1-based symbol numbers of ``mask``."""
    return [i + 1 for i in bits(mask)]


def format_set(mask: int) -> str:
    return "{" + ",".join(str(s) for s in symbols(mask)) + "}"


# -- matrices ---------------------------------------------------------------


@dataclass(frozen=True)
class BitMatrix:
    """A k x n matrix over GF(2), stored row-wise as bitsets."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        if not 1 <= self.ncols <= MAX_COLS:
            raise ValueError(f"column count must be in 1..{MAX_COLS}, got {self.ncols}")
        limit = full_mask(self.ncols)
        for r in self.rows:
            if r < 0 or r & ~limit:
                raise ValueError("row has bits beyond the column count")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        if not rows:
            raise ValueError("matrix needs at least one row")
        ncols = len(rows[0])
        packed = []
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
            packed.append(sum(1 << j for j, b in enumerate(row) if b & 1))
        return cls(tuple(packed), ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "BitMatrix":
        rows = [0] * nrows
        for j, col in enumerate(columns):
            for i in bits(col):
                if i >= nrows:
                    raise ValueError("column has bits beyond the row count")
                rows[i] |= 1 << j
        return cls(tuple(rows), len(columns))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ground(self) -> int:
        return full_mask(self.ncols)

    @cached_property
    def columns(self) -> tuple[int, ...]:
        cols = [0] * self.ncols
        for i, row in enumerate(self.rows):
            for j in bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    def to_lists(self) -> list[list[int]]:
        return [[(row >> j) & 1 for j in range(self.ncols)] for row in self.rows]

    def encode(self, message: int) -> int:
        """Codeword (as a column bitset) of a message given as a row bitset."""
        word = 0
        for i in bits(message):
            word ^= self.rows[i]
        return word


def parse_matrix(text: str) -> BitMatrix:
    """Parse the '0'/'1' text format (one row per line, optional single spaces)."""
    rows: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        chars = line.split(" ") if " " in line else list(line)
        if any(len(c) != 1 or c not in "01" for c in chars):
            raise MatrixFormatError(f"line {lineno}: expected '0'/'1' characters, got {raw!r}")
        rows.append([int(c) for c in chars])
    if not rows:
        raise MatrixFormatError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MatrixFormatError("rows have different lengths")
    if width > MAX_COLS:
        raise MatrixFormatError(f"at most {MAX_COLS} columns supported, got {width}")
    return BitMatrix.from_rows(rows)


def format_matrix(m: BitMatrix, sep: str = "") -> str:
    return "\n".join(sep.join(str(b) for b in row) for row in m.to_lists()) + "\n"


# -- elimination ------------------------------------------------------------


def _reduce(vec: int, basis: dict[int, int]) -> int:
    # basis maps pivot bit -> vector whose highest set bit is the pivot
    while vec:
        top = vec.bit_length() - 1
        b = basis.get(top)
        if b is None:
            return vec
        vec ^= b
    return 0


def _insert(vec: int, basis: dict[int, int]) -> bool:
    vec = _reduce(vec, basis)
    if vec:
        basis[vec.bit_length() - 1] = vec
        return True
    return False


def rank_of_vectors(vectors: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    return sum(_insert(v, basis) for v in vectors)


def rank(m: BitMatrix, cols: int | None = None) -> int:
    """GF(2) rank of the columns of ``m`` selected by ``cols`` (default: all)."""
    if cols is None:
        cols = m.ground
    columns = m.columns
    return rank_of_vectors(columns[j] for j in bits(cols & m.ground))


class SpanBasis:
    """Echelon basis over a set of columns that remembers how each pivot
    vector was combined, so targets can be expressed in the original columns."""

    def __init__(self) -> None:
        self._vecs: dict[int, tuple[int, int]] = {}  # pivot -> (vector, column mask)

    def __len__(self) -> int:
        return len(self._vecs)

    def reduce(self, vec: int) -> tuple[int, int]:
        combo = 0
        while vec:
            top = vec.bit_length() - 1
            hit = self._vecs.get(top)
            if hit is None:
                break
            vec ^= hit[0]
            combo ^= hit[1]
        return vec, combo

    def add(self, vec: int, index: int) -> int:
        """Insert column ``index``; returns 0 if independent, else the
        dependency mask (a cycle containing ``index``)."""
        rest, combo = self.reduce(vec)
        combo ^= 1 << index
        if rest:
            self._vecs[rest.bit_length() - 1] = (rest, combo)
            return 0
        return combo


def solve_in_span(m: BitMatrix, basis_cols: int, target: int) -> int | None:
    """Mask of the unique subset of ``basis_cols`` whose columns XOR to column
    ``target``, or None if the target is outside their span.

    Raises ValueError if ``basis_cols`` are linearly dependent.
    """
    span = SpanBasis()
    for j in bits(basis_cols):
        if span.add(m.columns[j], j):
            raise ValueError(f"basis columns {format_set(basis_cols)} are dependent")
    rest, combo = span.reduce(m.columns[target])
    return None if rest else combo


def closure_mask(m: BitMatrix, cols: int, ground: int | None = None) -> int:
    """Columns of ``ground`` lying in the span of the columns ``cols``.

    Equivalently, the complement of the union of supports of the codewords
    that vanish on ``cols``; those are found by one elimination pass over
    the rows with pivots taken inside ``cols``.
    """
    if ground is None:
        ground = m.ground
    pivots: list[tuple[int, int]] = []
    blocked = 0
    for row in m.rows:
        for b, prow in pivots:
            if (row >> b) & 1:
                row ^= prow
        part = row & cols
        if part:
            pivots.append(((part & -part).bit_length() - 1, row))
        else:
            blocked |= row
    return (ground & ~blocked) | (cols & ground)


def cyclic_part(m: BitMatrix, cols: int) -> int:
    """Union of all circuits inside ``cols`` (support of its cycle space)."""
    out = 0
    for v in cycle_basis(m, cols):
        out |= v
    return out


def greedy_basis(m: BitMatrix, cols: int) -> int:
    """Lowest-index maximal independent subset of ``cols``."""
    basis: dict[int, int] = {}
    out = 0
    for j in bits(cols):
        if _insert(m.columns[j], basis):
            out |= 1 << j
    return out


def cycle_basis(m: BitMatrix, cols: int | None = None) -> list[int]:
    """Basis of the kernel {x : sum of x_j * column_j = 0} restricted to ``cols``.

    Each basis vector is a fundamental circuit with respect to the
    lowest-index basis of ``cols``.
    """
    if cols is None:
        cols = m.ground
    span = SpanBasis()
    out = []
    for j in bits(cols):
        dep = span.add(m.columns[j], j)
        if dep:
            out.append(dep)
    return out


def span_enumerate(generators: Sequence[int]) -> Iterator[int]:
    """Yield every nonzero XOR combination of independent ``generators``
    (Gray-code order, one XOR per step)."""
    acc = 0
    for i in range(1, 1 << len(generators)):
        acc ^= generators[(i & -i).bit_length() - 1]
        yield acc


def min_distance(m: BitMatrix, cols: int | None = None) -> int:
    """Minimum Hamming weight of the code generated by ``m`` punctured to ``cols``.

    Enumerates all 2^k - 1 nonzero messages, so k is capped at 24.
    """
    if cols is None:
        cols = m.ground
    if m.nrows > MAX_ENUM_DIM:
        raise ValueError(f"k = {m.nrows} exceeds the enumeration cap of {MAX_ENUM_DIM}")
    rows = [r & cols for r in m.rows]
    best = None
    for word in span_enumerate(rows):
        if word:
            w = word.bit_count()
            if best is None or w < best:
                best = w
                if w == 1:
                    break
    if best is None:
        raise ValueError(f"punctured code on {format_set(cols)} has dimension 0")
    return best


# -- storage-code checks ----------------------------------------------------


@dataclass(frozen=True)
class CodeValidation:
    n: int
    k: int
    rank: int
    d: int | None
    zero_columns: tuple[int, ...] = ()
    replicated_columns: tuple[tuple[int, int], ...] = ()
    coloops: tuple[int, ...] = ()
    notes: tuple[str, ...] = field(default=())

    @property
    def degenerate(self) -> bool:
        return bool(self.zero_columns) or self.d is None or self.d < 2

    @property
    def replicated(self) -> bool:
        return bool(self.replicated_columns)

    @property
    def dependent_rows(self) -> bool:
        return self.rank < self.k

    @property
    def ok(self) -> bool:
        """Non-degenerate storage code without replication."""
        return not self.degenerate and not self.replicated

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "rank": self.rank,
            "d": self.d,
            "degenerate": self.degenerate,
            "zero_columns": [j + 1 for j in self.zero_columns],
            "replicated_columns": [[a + 1, b + 1] for a, b in self.replicated_columns],
            "coloops": [j + 1 for j in self.coloops],
            "dependent_rows": self.dependent_rows,
            "d_at_least_2": self.d is not None and self.d >= 2,
            "ok": self.ok,
            "notes": list(self.notes),
        }


def validate_storage_code(m: BitMatrix) -> CodeValidation:
    cols = m.columns
    zero = tuple(j for j, c in enumerate(cols) if c == 0)
    seen: dict[int, int] = {}
    replicated = []
    for j, c in enumerate(cols):
        if c == 0:
            continue
        for i in [i for i, ci in seen.items() if ci == c]:
            replicated.append((i, j))
        seen[j] = c
    replicated.sort()
    full = rank(m)
    coloops = tuple(j for j in range(m.ncols) if rank(m, m.ground & ~(1 << j)) < full)
    notes = []
    if full < m.nrows:
        notes.append(f"rows are dependent: rank {full} < {m.nrows} rows")
    d = None
    if full > 0 and m.nrows <= MAX_ENUM_DIM:
        d = min_distance(m)
    elif m.nrows > MAX_ENUM_DIM:
        notes.append("minimum distance not computed: k above enumeration cap")
    return CodeValidation(
        n=m.ncols,
        k=m.nrows,
        rank=full,
        d=d,
        zero_columns=zero,
        replicated_columns=tuple(replicated),
        coloops=coloops,
        notes=tuple(notes),
    )


def low_weight_representation(m: BitMatrix, pool: int, target: int, max_size: int | None = None) -> int | None:
    """Smallest subset of ``pool`` whose columns XOR to column ``target``
    (ties broken by lowest mask); None if no subset up to ``max_size`` works."""
    want = m.columns[target]
    members = list(bits(pool & ~(1 << target)))
    limit = len(members) if max_size is None else min(max_size, len(members))
    for size in range(1, limit + 1):
        found = None
        for combo in combinations(members, size):
            acc = 0
            for j in combo:
                acc ^= m.columns[j]
            if acc == want:
                mask = sum(1 << j for j in combo)
                if found is None or mask < found:
                    found = mask
        if found is not None:
            return found
    return None
