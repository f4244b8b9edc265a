"""The lattice of cyclic flats of a matroid.

Flats are stored as bitmasks sorted by (cardinality, mask), which makes
reports and DOT output deterministic.  Covering relations are computed by
transitive reduction of inclusion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from . import gf2
from .gf2 import bits
from .matroid import BinaryMatroid, Matroid

CLOSURE_BUDGET = 1 << 20
MAX_CYCLE_NULLITY = 20


class EnumerationBudgetExceeded(RuntimeError):
    pass


class TrichotomyViolation(RuntimeError):
    """A covering edge is neither a rank, nullity nor elementary edge."""

    def __init__(self, lower: int, upper: int, delta_rank: int, delta_nullity: int):
        self.lower = lower
        self.upper = upper
        self.delta_rank = delta_rank
        self.delta_nullity = delta_nullity
        super().__init__(
            f"edge {gf2.format_set(lower)} < {gf2.format_set(upper)} has "
            f"rank step {delta_rank} and nullity step {delta_nullity}"
        )


class EdgeKind(enum.Enum):
    RANK = "rank"
    NULLITY = "nullity"
    ELEMENTARY = "elementary"


@dataclass(frozen=True)
class EdgeLabel:
    kind: EdgeKind
    delta_rank: int
    delta_nullity: int

    @property
    def value(self) -> int:
        if self.kind is EdgeKind.RANK:
            return self.delta_rank
        if self.kind is EdgeKind.NULLITY:
            return self.delta_nullity
        return 1

    def dot_label(self) -> str:
        if self.kind is EdgeKind.RANK:
            return f"ρ={self.delta_rank}"
        if self.kind is EdgeKind.NULLITY:
            return f"η={self.delta_nullity}"
        return "1,1"


def label_edge(lower: int, upper: int, delta_rank: int, delta_nullity: int) -> EdgeLabel:
    if delta_rank > 1 and delta_nullity == 1:
        return EdgeLabel(EdgeKind.RANK, delta_rank, delta_nullity)
    if delta_rank == 1 and delta_nullity > 1:
        return EdgeLabel(EdgeKind.NULLITY, delta_rank, delta_nullity)
    if delta_rank == 1 and delta_nullity == 1:
        return EdgeLabel(EdgeKind.ELEMENTARY, 1, 1)
    raise TrichotomyViolation(lower, upper, delta_rank, delta_nullity)


@dataclass(frozen=True)
class CyclicFlatLattice:
    flats: tuple[int, ...]
    ranks: tuple[int, ...]
    nullities: tuple[int, ...]
    bottom: int
    top: int
    hasse: tuple[tuple[int, int], ...]
    atoms: tuple[int, ...]
    coatoms: tuple[int, ...]
    matroid: Matroid = field(repr=False, compare=False)
    closures: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.flats)

    def index(self, mask: int) -> int:
        return self._index[mask]

    def __contains__(self, mask: int) -> bool:
        return mask in self._index

    @property
    def _index(self) -> dict[int, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {z: i for i, z in enumerate(self.flats)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def join(self, a: int, b: int) -> int:
        return self.matroid.closure(a | b)

    def meet(self, a: int, b: int) -> int:
        return self.matroid.cyc(a & b)

    def below(self, i: int) -> list[int]:
        """Indices of flats strictly contained in flat ``i``."""
        z = self.flats[i]
        return [j for j, y in enumerate(self.flats) if y != z and y & ~z == 0]

    def atoms_below(self, i: int) -> list[int]:
        z = self.flats[i]
        return [a for a in self.atoms if self.flats[a] & ~z == 0]

    def lower_covers(self, i: int) -> list[int]:
        return [lo for lo, hi in self.hasse if hi == i]

    def atom_masks(self) -> list[int]:
        return [self.flats[a] for a in self.atoms]

    def coatom_masks(self) -> list[int]:
        return [self.flats[c] for c in self.coatoms]


# -- enumeration ------------------------------------------------------------


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise EnumerationBudgetExceeded(f"more than {self.limit} closure computations")


def _flats_from_independent_sets(m: Matroid, budget: _Budget) -> set[int]:
    # every flat is the closure of an independent set; extend in index order
    found: set[int] = set()
    elems = m.elements()
    top_rank = m.full_rank()

    def extend(indep: int, size: int, start: int) -> None:
        budget.spend()
        found.add(m.closure(indep))
        if size == top_rank:
            return
        for pos in range(start, len(elems)):
            e = 1 << elems[pos]
            if m.rank(indep | e) == size + 1:
                extend(indep | e, size + 1, pos + 1)

    extend(0, 0, 0)
    return {f for f in found if m.is_cyclic(f)}


def _flats_from_cycles(m: BinaryMatroid, budget: _Budget) -> set[int]:
    # every cyclic flat is a join of closures of circuits, and circuits are
    # supports of cycle-space vectors
    basis = m.cycle_space_basis()
    bottom = m.closure(0)
    gens: set[int] = set()
    for v in gf2.span_enumerate(basis):
        budget.spend()
        gens.add(m.closure(v))
    found = {bottom} | gens
    frontier = list(found)
    gen_list = sorted(gens)
    while frontier:
        nxt = []
        for z in frontier:
            for g in gen_list:
                if g & ~z == 0:
                    continue
                budget.spend()
                j = m.closure(z | g)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return found


def _flats_brute_force(m: Matroid) -> set[int]:
    found = set()
    g = m.ground
    sub = g
    while True:
        if m.is_cyclic_flat(sub):
            found.add(sub)
        if sub == 0:
            break
        sub = (sub - 1) & g
    return found


def enumerate_cyclic_flats(m: Matroid, strategy: str = "auto", budget: int = CLOSURE_BUDGET) -> CyclicFlatLattice:
    """All cyclic flats of ``m`` with their covering relations.

    Strategies: ``"independent"`` (closures of independent sets, any
    matroid), ``"cycles"`` (join-closure of circuit closures, binary only),
    ``"brute"`` (scan every subset; small ground sets) and ``"auto"``.
    """
    spent = _Budget(budget)
    if strategy == "auto":
        strategy = "independent"
        if isinstance(m, BinaryMatroid) and m.size - m.full_rank() <= MAX_CYCLE_NULLITY:
            strategy = "cycles"
    if strategy == "cycles":
        if not isinstance(m, BinaryMatroid):
            raise TypeError("the cycles strategy needs a BinaryMatroid")
        found = _flats_from_cycles(m, spent)
    elif strategy == "independent":
        found = _flats_from_independent_sets(m, spent)
    elif strategy == "brute":
        if m.size > 24:
            raise EnumerationBudgetExceeded("brute force limited to 24 elements")
        found = _flats_brute_force(m)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return build_lattice(m, found, closures=spent.used)


def build_lattice(m: Matroid, found: Iterable[int], closures: int = 0) -> CyclicFlatLattice:
    flats = tuple(sorted(set(found), key=lambda z: (z.bit_count(), z)))
    index = {z: i for i, z in enumerate(flats)}
    bottom_mask = m.closure(0)
    top_mask = m.cyc(m.ground)
    if bottom_mask not in index or top_mask not in index:
        raise AssertionError("enumeration missed the bottom or top cyclic flat")
    n = len(flats)
    # down[j]: bitset of flat indices strictly below flat j
    down = [0] * n
    for j in range(n):
        zj = flats[j]
        acc = 0
        for i in range(j):
            zi = flats[i]
            if zi & ~zj == 0:
                acc |= 1 << i
        down[j] = acc
    hasse = []
    for j in range(n):
        reach = 0
        for i in bits(down[j]):
            reach |= down[i]
        for i in bits(down[j] & ~reach):
            hasse.append((i, j))
    hasse.sort()
    bottom = index[bottom_mask]
    top = index[top_mask]
    # atoms exclude only the bottom and coatoms only the top, so in the
    # two-element lattice {0, 1} the top is an atom and the bottom a coatom
    atoms = tuple(sorted(hi for lo, hi in hasse if lo == bottom))
    coatoms = tuple(sorted(lo for lo, hi in hasse if hi == top))
    return CyclicFlatLattice(
        flats=flats,
        ranks=tuple(m.rank(z) for z in flats),
        nullities=tuple(m.nullity(z) for z in flats),
        bottom=bottom,
        top=top,
        hasse=tuple(hasse),
        atoms=atoms,
        coatoms=coatoms,
        matroid=m,
        closures=closures,
    )


# -- analysis ---------------------------------------------------------------


def classify_edges(lat: CyclicFlatLattice) -> list[tuple[int, int, EdgeLabel]]:
    """Label every covering edge; raises TrichotomyViolation on the first
    edge that fits none of the three binary edge types."""
    out = []
    for lo, hi in lat.hasse:
        dr = lat.ranks[hi] - lat.ranks[lo]
        dn = lat.nullities[hi] - lat.nullities[lo]
        out.append((lo, hi, label_edge(lat.flats[lo], lat.flats[hi], dr, dn)))
    return out


def atoms_coatoms(lat: CyclicFlatLattice) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return lat.atoms, lat.coatoms


@dataclass(frozen=True)
class AtomicityReport:
    atomic: bool
    union_property: bool
    counterexample: int | None = None

    def __bool__(self) -> bool:
        return self.atomic


def is_atomic(lat: CyclicFlatLattice) -> AtomicityReport:
    """Check that every cyclic flat is the join, and also the union, of the
    atoms below it."""
    atomic = True
    union_ok = True
    counterexample = None
    bottom_mask = lat.flats[lat.bottom]
    for i, z in enumerate(lat.flats):
        if i == lat.bottom:
            continue
        atoms = [lat.flats[a] for a in lat.atoms_below(i)]
        union = bottom_mask
        for a in atoms:
            union |= a
        joined = lat.matroid.closure(union)
        if joined != z:
            atomic = False
            counterexample = counterexample if counterexample is not None else z
        if union != z:
            union_ok = False
            counterexample = counterexample if counterexample is not None else z
    return AtomicityReport(atomic, union_ok, counterexample)


class DegenerateCodeError(ValueError):
    pass


def distance_via_flats(m: Matroid, lat: CyclicFlatLattice | None = None) -> int:
    """Minimum distance from nullities: eta(E) + 1 - max eta over proper cyclic flats."""
    if lat is None:
        lat = enumerate_cyclic_flats(m)
    if lat.flats[lat.top] != m.ground:
        raise DegenerateCodeError("the ground set is not a cyclic flat (co-loops present)")
    proper = [eta for z, eta in zip(lat.flats, lat.nullities) if z != m.ground]
    if not proper:
        raise DegenerateCodeError("the lattice has no proper cyclic flat")
    return m.nullity(m.ground) + 1 - max(proper)


# -- export -----------------------------------------------------------------


def to_dot(lat: CyclicFlatLattice, name: str = "cyclic_flats") -> str:
    """Graphviz rendering; edges are labelled by their (rank, nullity) type."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, z in enumerate(lat.flats):
        label = f"{gf2.format_set(z)} ρ={lat.ranks[i]} η={lat.nullities[i]}"
        lines.append(f'  n{i} [label="{label}"];')
    for lo, hi, lab in classify_edges(lat):
        lines.append(f'  n{lo} -> n{hi} [label="{lab.dot_label()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_dict(lat: CyclicFlatLattice) -> dict:
    return {
        "flats": [
            {"elements": gf2.symbols(z), "rank": r, "nullity": eta}
            for z, r, eta in zip(lat.flats, lat.ranks, lat.nullities)
        ],
        "bottom": lat.bottom,
        "top": lat.top,
        "atoms": list(lat.atoms),
        "coatoms": list(lat.coatoms),
        "edges": [
            {"lower": lo, "upper": hi, "kind": lab.kind.value, "delta_rank": lab.delta_rank,
             "delta_nullity": lab.delta_nullity}
            for lo, hi, lab in classify_edges(lat)
        ],
    }
