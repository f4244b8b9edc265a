"""(r, delta)-locality of binary codes.

Covers verification of declared repair sets, discovery of repair sets and
of the atoms that give every symbol (r', 2)-locality, rps-chains with their
alpha statistic, and a three-tier erasure repair planner
(atom -> repair set -> whole code).
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from . import gf2
from .gf2 import BitMatrix, bits, format_set
from .matroid import BinaryMatroid, Matroid
from .zlattice import CyclicFlatLattice, enumerate_cyclic_flats

# local-tier basis search enumerates at most this many candidate bases
MAX_BASIS_CANDIDATES = 20000


class LocalityError(ValueError):
    pass


class LocalityViolation(LocalityError):
    def __init__(self, violations: Sequence[tuple[int, str]]):
        self.violations = list(violations)
        msg = "; ".join(f"{format_set(z)}: {why}" for z, why in self.violations)
        super().__init__(msg)


class CoverageGap(LocalityError):
    def __init__(self, missing: int):
        self.missing = missing
        super().__init__(f"symbols {format_set(missing)} lie in no repair set")


class HypothesisError(ValueError):
    """The input does not satisfy the hypotheses an operation relies on."""


class StructureError(RuntimeError):
    """A structural property guaranteed for simple binary matroids failed."""


class LemmaViolation(RuntimeError):
    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class Unrepairable(RuntimeError):
    pass


# -- repair-set files -------------------------------------------------------

_SET_LINE = re.compile(r"^\s*([A-Za-z_][\w]*)?\s*:\s*(.*)$")


def parse_repair_sets(text: str, n: int | None = None) -> list[int]:
    """Parse lines like ``Z: 1,2,3,5,6,8`` (1-based) into masks."""
    sets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _SET_LINE.match(line)
        if not match:
            raise gf2.MatrixFormatError(f"line {lineno}: expected 'Z: 1,2,3', got {raw!r}")
        try:
            members = [int(tok) for tok in match.group(2).replace(" ", "").split(",") if tok]
        except ValueError as exc:
            raise gf2.MatrixFormatError(f"line {lineno}: {exc}") from None
        if not members:
            raise gf2.MatrixFormatError(f"line {lineno}: empty repair set")
        if n is not None and max(members) > n:
            raise gf2.MatrixFormatError(f"line {lineno}: symbol {max(members)} exceeds n={n}")
        sets.append(gf2.mask_from_symbols(members))
    if not sets:
        raise gf2.MatrixFormatError("no repair sets found")
    return sets


def format_repair_sets(sets: Iterable[int]) -> str:
    return "".join("Z: " + ",".join(map(str, gf2.symbols(z))) + "\n" for z in sets)


# -- profiles ---------------------------------------------------------------


@dataclass(frozen=True)
class RepairSetInfo:
    elems: int
    rank: int
    nullity: int
    local_distance: int
    cyclic_flat: bool

    @property
    def size(self) -> int:
        return self.elems.bit_count()

    @property
    def covered_symbols(self) -> int:
        return self.elems

    def to_dict(self) -> dict:
        return {
            "elements": gf2.symbols(self.elems),
            "size": self.size,
            "rank": self.rank,
            "nullity": self.nullity,
            "local_distance": self.local_distance,
            "cyclic_flat": self.cyclic_flat,
        }


def repair_set_info(m: BinaryMatroid, z: int) -> RepairSetInfo:
    r = m.rank(z)
    d_local = gf2.min_distance(m.matrix, z) if r else 0
    return RepairSetInfo(z, r, m.nullity(z), d_local, m.is_cyclic_flat(z))


@dataclass(frozen=True)
class Delta2Locality:
    r_prime: int
    atom_of: tuple[int, ...]  # per element of the ground set, 0 if outside

    def atoms(self) -> list[int]:
        return sorted({a for a in self.atom_of if a}, key=lambda z: (z.bit_count(), z))


@dataclass(frozen=True)
class LocalityProfile:
    n: int
    k: int
    d: int
    r: int
    delta: int
    ell: int
    repair_sets: tuple[RepairSetInfo, ...]
    atom_cover: tuple[int, ...] | None = None
    r_prime: int | None = None
    notes: tuple[str, ...] = ()

    def sets_containing(self, e: int) -> list[RepairSetInfo]:
        return [z for z in self.repair_sets if (z.elems >> e) & 1]

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "r": self.r,
            "delta": self.delta,
            "ell": self.ell,
            "r_prime": self.r_prime,
            "repair_sets": [z.to_dict() for z in self.repair_sets],
            "notes": list(self.notes),
        }
        if self.atom_cover is not None:
            out["atom_cover"] = [
                {"symbol": e + 1, "atom": gf2.symbols(a)} for e, a in enumerate(self.atom_cover) if a
            ]
        return out


def verify_locality(
    m: BinaryMatroid,
    sets: Sequence[int],
    r: int,
    delta: int,
    *,
    lattice: CyclicFlatLattice | None = None,
    with_atoms: bool = True,
) -> LocalityProfile:
    """Check that ``sets`` give every symbol (r, delta)-locality.

    Raises LocalityViolation listing every failing set, or CoverageGap when
    some symbol is in no set.  For delta > 2 on a code without replication
    the rank/nullity bounds on repair sets are checked as well.
    """
    if r < 1 or delta < 2:
        raise ValueError("need r >= 1 and delta >= 2")
    infos = []
    problems: list[tuple[int, str]] = []
    covered = 0
    for z in sets:
        z &= m.ground
        if not z:
            problems.append((z, "empty set"))
            continue
        info = repair_set_info(m, z)
        infos.append(info)
        covered |= z
        if info.size > r + delta - 1:
            problems.append((z, f"size {info.size} > r + delta - 1 = {r + delta - 1}"))
        if info.local_distance < delta:
            problems.append((z, f"local distance {info.local_distance} < delta = {delta}"))
    simple = m.is_simple_no_coloops()
    notes = []
    if delta > 2 and simple:
        for info in infos:
            if info.size <= r + delta - 1 and info.local_distance >= delta:
                if info.rank > r - 1:
                    problems.append((info.elems, f"rank {info.rank} > r - 1 (binary repair-set bound)"))
                if info.nullity < delta:
                    problems.append((info.elems, f"nullity {info.nullity} < delta (binary repair-set bound)"))
    elif delta > 2:
        notes.append("repair-set rank bound not checked: code is not simple and co-loop free")
    if problems:
        raise LocalityViolation(problems)
    missing = m.ground & ~covered
    if missing:
        raise CoverageGap(missing)

    atom_cover = None
    r_prime = None
    if with_atoms and simple:
        if lattice is None:
            lattice = enumerate_cyclic_flats(m)
        found = discover_delta2_locality(m, lattice, within=sets)
        atom_cover = found.atom_of
        r_prime = found.r_prime
    elif with_atoms:
        notes.append("atom cover skipped: code is not simple and co-loop free")
    return LocalityProfile(
        n=m.size,
        k=m.full_rank(),
        d=gf2.min_distance(m.matrix, m.ground),
        r=r,
        delta=delta,
        ell=max(info.rank for info in infos),
        repair_sets=tuple(infos),
        atom_cover=atom_cover,
        r_prime=r_prime,
        notes=tuple(notes),
    )


def discover_delta2_locality(
    m: Matroid,
    lattice: CyclicFlatLattice | None = None,
    within: Sequence[int] | None = None,
) -> Delta2Locality:
    """Give every element an atom of the cyclic-flat lattice containing it.

    The atom is the closure of a shortest circuit through the element.  With
    ``within``, the circuit is searched inside the repair sets containing the
    element, so the atoms nest inside repair sets.
    """
    if not m.is_simple_no_coloops():
        raise HypothesisError("matroid must be simple and free of co-loops")
    if lattice is None:
        lattice = enumerate_cyclic_flats(m)
    atom_masks = set(lattice.atom_masks())
    atom_of = [0] * (m.ground.bit_length())
    for e in bits(m.ground):
        scopes = [z & m.ground for z in (within or ()) if (z >> e) & 1]
        best = None
        for scope in scopes or [m.ground]:
            local = m.restrict(scope)
            if local.is_coloop(e):
                continue
            atom = m.closure(local.min_circuit_through(e))
            key = (m.rank(atom), atom.bit_count(), atom)
            if best is None or key < best:
                best = key
        if best is None:
            raise HypothesisError(f"no circuit through element {e + 1}")
        atom = best[2]
        if atom not in atom_masks:
            raise StructureError(f"closure {format_set(atom)} of a shortest circuit is not an atom")
        if m.nullity(atom) != 1:
            raise StructureError(f"atom {format_set(atom)} has nullity {m.nullity(atom)}")
        atom_of[e] = atom
    r_prime = max(m.rank(a) for a in atom_of if a)
    return Delta2Locality(r_prime, tuple(atom_of))


def discover_repair_sets(
    m: BinaryMatroid,
    r: int,
    delta: int,
    lattice: CyclicFlatLattice | None = None,
) -> list[int]:
    """Greedy cover of the ground set by cyclic flats Z with d_Z >= delta and
    |Z| <= r + delta - 1, preferring low rank."""
    if lattice is None:
        lattice = enumerate_cyclic_flats(m)
    limit = r + delta - 1
    candidates = []
    for z, rk in zip(lattice.flats, lattice.ranks):
        if rk == 0 or z.bit_count() > limit:
            continue
        if gf2.min_distance(m.matrix, z) >= delta:
            candidates.append((z, rk))
    uncovered = m.ground
    chosen = []
    while uncovered:
        e = (uncovered & -uncovered).bit_length() - 1
        options = [(rk, -(z & uncovered).bit_count(), z) for z, rk in candidates if (z >> e) & 1]
        if not options:
            raise CoverageGap(uncovered)
        z = min(options)[2]
        chosen.append(z)
        uncovered &= ~z
    return chosen


# -- rps-chains -------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    y: int
    x: int
    z: int  # index into the repair-set list
    delta_rank: int
    delta_nullity: int
    coatom_hit: bool


@dataclass(frozen=True)
class RpsChain:
    steps: tuple[ChainStep, ...]
    repair_sets: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.steps)

    @property
    def hits(self) -> int:
        return sum(s.coatom_hit for s in self.steps)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.hits, self.m)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "alpha": str(self.alpha),
            "steps": [
                {
                    "Y": gf2.symbols(s.y),
                    "x": s.x + 1,
                    "Z": gf2.symbols(self.repair_sets[s.z]),
                    "delta_rank": s.delta_rank,
                    "delta_nullity": s.delta_nullity,
                    "coatom_hit": s.coatom_hit,
                }
                for s in self.steps
            ],
        }


def repair_set_coatoms(m: Matroid, z: int, cache: dict[int, frozenset[int]] | None = None) -> frozenset[int]:
    """Coatoms of the cyclic-flat lattice of the restriction to ``z``."""
    if cache is not None and z in cache:
        return cache[z]
    lat = enumerate_cyclic_flats(m.restrict(z))
    out = frozenset(lat.coatom_masks())
    if cache is not None:
        cache[z] = out
    return out


def build_rps_chain(
    m: Matroid,
    repair_sets: Sequence[int],
    picker: str = "first",
    seed: int | None = None,
    coatom_cache: dict[int, frozenset[int]] | None = None,
) -> RpsChain:
    """Join repair sets one at a time until the whole ground set is reached.

    ``picker="first"`` takes the lowest uncovered symbol and the first repair
    set containing it; ``picker="random"`` picks both uniformly using an
    explicit ``seed``.
    """
    sets = tuple(z & m.ground for z in repair_sets)
    covered = 0
    for z in sets:
        covered |= z
    if m.ground & ~covered:
        raise CoverageGap(m.ground & ~covered)
    if picker == "random":
        if seed is None:
            raise ValueError("the random picker needs an explicit seed")
        rng = random.Random(seed)
    elif picker != "first":
        raise ValueError(f"unknown picker {picker!r}")
    if coatom_cache is None:
        coatom_cache = {}

    steps = []
    y = 0
    while y != m.ground:
        free = list(bits(m.ground & ~y))
        x = free[0] if picker == "first" else rng.choice(free)
        holders = [i for i, z in enumerate(sets) if (z >> x) & 1]
        zi = holders[0] if picker == "first" else rng.choice(holders)
        z = sets[zi]
        # i = 1 never counts as a coatom hit
        hit = bool(steps) and (y & z) in repair_set_coatoms(m, z, coatom_cache)
        new_y = m.closure(y | z)
        steps.append(
            ChainStep(
                y=new_y,
                x=x,
                z=zi,
                delta_rank=m.rank(new_y) - m.rank(y),
                delta_nullity=m.nullity(new_y) - m.nullity(y),
                coatom_hit=hit,
            )
        )
        y = new_y
    return RpsChain(tuple(steps), sets)


@dataclass(frozen=True)
class ChainLemmaReport:
    m: int
    alpha: Fraction
    rank_bounds: tuple[int, ...]
    nullity_bounds: tuple[int | None, ...]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "alpha": str(self.alpha),
            "rank_bounds": list(self.rank_bounds),
            "nullity_bounds": list(self.nullity_bounds),
            "ok": True,
        }


def check_chain_lemmas(chain: RpsChain, ell: int, delta: int) -> ChainLemmaReport:
    """Check the per-step rank and nullity bounds of an rps-chain.

    Step 1 must raise the rank by at most ell.  Each later step must raise
    the rank by at most ell - (ell - 1) * hit and the nullity by at least
    delta - hit, where hit says whether the step met a coatom.
    """
    problems = []
    rank_bounds = []
    nullity_bounds: list[int | None] = []
    for i, s in enumerate(chain.steps, start=1):
        hit = int(s.coatom_hit) if i > 1 else 0
        rb = ell - (ell - 1) * hit
        rank_bounds.append(rb)
        if s.delta_rank > rb:
            problems.append(f"step {i}: rank step {s.delta_rank} > {rb}")
        if i == 1:
            nullity_bounds.append(None)
            continue
        nb = delta - hit
        nullity_bounds.append(nb)
        if s.delta_nullity < nb:
            problems.append(f"step {i}: nullity step {s.delta_nullity} < {nb}")
        if s.coatom_hit and s.delta_rank != 1:
            problems.append(f"step {i}: coatom step has rank step {s.delta_rank}")
    alpha = chain.alpha
    if (alpha * chain.m).denominator != 1:
        problems.append("alpha * m is not an integer")  # pragma: no cover
    if problems:
        raise LemmaViolation(problems)
    return ChainLemmaReport(chain.m, alpha, tuple(rank_bounds), tuple(nullity_bounds))


# -- repair planning --------------------------------------------------------


class Tier(enum.Enum):
    ATOM = "AtomRepair"
    LOCAL = "LocalSetRepair"
    GLOBAL = "GlobalRepair"


@dataclass(frozen=True)
class Equation:
    symbol: int
    sources: int

    def text(self) -> str:
        rhs = " ⊕ ".join(f"c{j}" for j in gf2.symbols(self.sources))
        return f"c{self.symbol + 1} = {rhs}"

    def to_dict(self) -> dict:
        return {"symbol": self.symbol + 1, "sources": gf2.symbols(self.sources), "text": self.text()}


@dataclass(frozen=True)
class RepairPlan:
    tier: Tier
    erased: int
    equations: tuple[Equation, ...]
    basis: int
    scope: int = field(default=0)  # atom or repair set used; 0 for global

    @property
    def contacted(self) -> int:
        out = 0
        for eq in self.equations:
            out |= eq.sources
        return out

    def to_dict(self) -> dict:
        return {
            "tier": self.tier.value,
            "erased": gf2.symbols(self.erased),
            "scope": gf2.symbols(self.scope),
            "basis": gf2.symbols(self.basis),
            "contacted": gf2.symbols(self.contacted),
            "equations": [eq.to_dict() for eq in self.equations],
        }


def _equations(code: BitMatrix, basis: int, erased: int) -> tuple[Equation, ...] | None:
    out = []
    for e in bits(erased):
        src = gf2.solve_in_span(code, basis, e)
        if src is None:
            return None
        out.append(Equation(e, src))
    return tuple(out)


def _lightest_basis(code: BitMatrix, pool: int, target_rank: int, erased: int):
    """Basis of ``pool`` minimising the total size of the repair equations."""
    members = list(bits(pool))
    if comb(len(members), target_rank) > MAX_BASIS_CANDIDATES:
        basis = gf2.greedy_basis(code, pool)
        eqs = _equations(code, basis, erased)
        return (basis, eqs) if eqs is not None else None
    best = None
    for combo in combinations(members, target_rank):
        basis = sum(1 << j for j in combo)
        if gf2.rank(code, basis) != target_rank:
            continue
        eqs = _equations(code, basis, erased)
        if eqs is None:
            continue
        key = (sum(eq.sources.bit_count() for eq in eqs), combo)
        if best is None or key < best[0]:
            best = (key, basis, eqs)
    return None if best is None else (best[1], best[2])


def _checked(code: BitMatrix, plan: RepairPlan) -> RepairPlan:
    cols = code.columns
    for eq in plan.equations:
        acc = 0
        for j in bits(eq.sources):
            acc ^= cols[j]
        if acc != cols[eq.symbol] or eq.sources & plan.erased:
            raise AssertionError(f"bad repair identity {eq.text()}")
    return plan


def plan_repair(code: BitMatrix, profile: LocalityProfile, erased: int) -> RepairPlan:
    """Pick the cheapest tier able to rebuild the erased columns.

    A single erasure is rebuilt from its atom.  Up to delta - 1 erasures
    inside one repair set (and fewer than its local distance) are rebuilt
    from a basis of that set's survivors.  Anything else uses an
    information set of all surviving columns.
    """
    ground = code.ground
    erased &= ground
    if not erased:
        raise ValueError("nothing to repair")
    if erased == ground:
        raise Unrepairable("every column is erased")
    count = erased.bit_count()

    if count == 1 and profile.atom_cover:
        e = erased.bit_length() - 1
        atom = profile.atom_cover[e]
        if atom:
            survivors = atom & ~erased
            basis = gf2.greedy_basis(code, survivors)
            eqs = _equations(code, basis, erased)
            if eqs is not None:
                return _checked(code, RepairPlan(Tier.ATOM, erased, eqs, basis, atom))

    if count <= profile.delta - 1:
        for info in sorted(profile.repair_sets, key=lambda z: (z.rank, z.elems)):
            if erased & ~info.elems or count >= info.local_distance:
                continue
            survivors = info.elems & ~erased
            found = _lightest_basis(code, survivors, gf2.rank(code, survivors), erased)
            if found is not None:
                basis, eqs = found
                return _checked(code, RepairPlan(Tier.LOCAL, erased, eqs, basis, info.elems))

    survivors = ground & ~erased
    basis = gf2.greedy_basis(code, survivors)
    eqs = _equations(code, basis, erased)
    if eqs is None:
        raise Unrepairable(f"erasures {format_set(erased)} are not in the span of the survivors")
    return _checked(code, RepairPlan(Tier.GLOBAL, erased, eqs, basis, 0))


def apply_plan(plan: RepairPlan, word: int) -> int:
    """Rebuild the erased positions of ``word`` (a codeword bitset whose
    erased bits are ignored) from the plan's equations."""
    out = word & ~plan.erased
    for eq in plan.equations:
        if (word & eq.sources).bit_count() & 1:
            out |= 1 << eq.symbol
    return out


def simulate_repair(code: BitMatrix, plan: RepairPlan, trials: int = 1000, seed: int = 0) -> int:
    """Encode random messages, erase, repair; returns how many words came back exact."""
    rng = random.Random(seed)
    ok = 0
    for _ in range(trials):
        word = code.encode(rng.getrandbits(code.nrows))
        damaged = word & ~plan.erased
        if apply_plan(plan, damaged) == word:
            ok += 1
    return ok
