"""Property sweeps over small binary codes, plus a search for bound achievers.

Binary matroids and binary codes correspond one to one, so instances are
generated as sets of distinct nonzero columns (distinctness is exactly
simplicity); rank-deficient and co-loop instances are screened out and
counted.
"""

from __future__ import annotations

import json
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from . import bounds, gf2
from .gf2 import BitMatrix, bits, format_matrix, format_set
from .locality import (
    CoverageGap,
    HypothesisError,
    LocalityError,
    StructureError,
    discover_delta2_locality,
    discover_repair_sets,
    verify_locality,
)
from .matroid import BinaryMatroid
from .zlattice import (
    EdgeKind,
    TrichotomyViolation,
    classify_edges,
    distance_via_flats,
    enumerate_cyclic_flats,
    is_atomic,
)

EXAMPLE_1 = """\
1 0 0 0 1 0 1 1 1 1
0 1 0 0 1 1 0 1 1 1
0 0 1 0 0 1 0 1 0 1
0 0 0 1 0 0 1 0 1 1
"""
EXAMPLE_1_REPAIR_SETS = ((1, 2, 3, 5, 6, 8), (2, 3, 6, 7, 9, 10), (1, 4, 6, 7, 8, 10))

MAX_EXHAUSTIVE_N = 9


def example1() -> tuple[BitMatrix, list[int]]:
    """The (10, 4, 4) code with its three rank-3 repair sets."""
    return gf2.parse_matrix(EXAMPLE_1), [gf2.mask_from_symbols(z) for z in EXAMPLE_1_REPAIR_SETS]


# -- instance generation ----------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    k: int
    mode: str = "exhaustive"
    seed: int = 42
    count: int = 1000
    k_min: int = 1

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "exhaustive" and self.n > MAX_EXHAUSTIVE_N:
            raise ValueError(f"exhaustive mode is limited to n <= {MAX_EXHAUSTIVE_N}")
        if not 1 <= self.k <= gf2.MAX_ENUM_DIM or not 1 <= self.n <= gf2.MAX_COLS:
            raise ValueError("n or k out of range")


def screen(matrix: BitMatrix) -> str | None:
    """Why ``matrix`` falls outside the simple, co-loop free, full-rank
    family, or None if it belongs."""
    cols = matrix.columns
    if any(c == 0 for c in cols):
        return "zero_column"
    if len(set(cols)) != len(cols):
        return "replicated"
    full = gf2.rank(matrix)
    if full < matrix.nrows:
        return "rank_deficient"
    if any(gf2.rank(matrix, matrix.ground & ~(1 << j)) < full for j in range(matrix.ncols)):
        return "coloops"
    return None


def exhaustive_column_sets(n_max: int, k: int) -> Iterator[tuple[int, ...]]:
    """Every set of 1..n_max distinct nonzero columns of F_2^k, each once."""
    vectors = range(1, 1 << k)
    for n in range(1, min(n_max, (1 << k) - 1) + 1):
        yield from combinations(vectors, n)


def generate_instances(spec: InstanceSpec, excluded: Counter | None = None) -> Iterator[BitMatrix]:
    if excluded is None:
        excluded = Counter()
    if spec.mode == "exhaustive":
        for k in range(spec.k_min, spec.k + 1):
            for cols in exhaustive_column_sets(spec.n, k):
                matrix = BitMatrix.from_columns(cols, k)
                reason = screen(matrix)
                if reason:
                    excluded[reason] += 1
                    continue
                yield matrix
        return
    rng = random.Random(spec.seed)
    ks = [k for k in range(max(2, spec.k_min), spec.k + 1) if min(spec.n, (1 << k) - 1) > k]
    if not ks:
        raise ValueError("no (n, k) pair admits a co-loop free simple code")
    produced = 0
    while produced < spec.count:
        k = rng.choice(ks)
        n = rng.randint(k + 1, min(spec.n, (1 << k) - 1))
        cols = rng.sample(range(1, 1 << k), n)
        matrix = BitMatrix.from_columns(cols, k)
        reason = screen(matrix)
        if reason:
            excluded[reason] += 1
            continue
        produced += 1
        yield matrix


# -- suites -----------------------------------------------------------------


@dataclass(frozen=True)
class Failure:
    check: str
    detail: str
    matrix: str
    subset: list[int] = field(default_factory=list)
    context: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.check, "detail": self.detail, "matrix": self.matrix,
                "subset": self.subset, "context": self.context}


@dataclass
class SuiteReport:
    suite: str
    instances: int = 0
    excluded: dict[str, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    elapsed: float = 0.0
    checks: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "instances": self.instances,
            "excluded": dict(self.excluded),
            "checks": dict(self.checks),
            "failures": [f.to_dict() for f in self.failures],
            "elapsed": round(self.elapsed, 3),
        }


STRUCTURE_CHECKS = ("distance", "trichotomy", "atomic", "atom_iff_nullity1", "element_in_atom", "delta2")
CASTLE_CHECKS = ("castle_1", "castle_2", "castle_3_4")


def check_structure(matrix: BitMatrix) -> list[Failure]:
    """Lattice facts guaranteed for simple, co-loop free binary matroids."""
    text = format_matrix(matrix)
    out: list[Failure] = []

    def fail(check: str, detail: str, subset: int = 0) -> None:
        out.append(Failure(check, detail, text, gf2.symbols(subset)))

    m = BinaryMatroid(matrix)
    lat = enumerate_cyclic_flats(m)

    d_brute = gf2.min_distance(matrix)
    d_flats = distance_via_flats(m, lat)
    if d_brute != d_flats:
        fail("distance", f"brute force {d_brute} != cyclic-flat formula {d_flats}")

    try:
        classify_edges(lat)
    except TrichotomyViolation as exc:
        fail("trichotomy", str(exc), exc.upper)

    report = is_atomic(lat)
    if not report.atomic:
        fail("atomic", "flat is not the join of its atoms", report.counterexample or 0)
    elif not report.union_property:
        fail("atom_union", "flat is not the union of its atoms", report.counterexample or 0)

    atoms = set(lat.atoms)
    for i, z in enumerate(lat.flats):
        if i != lat.bottom and (i in atoms) != (lat.nullities[i] == 1):
            fail("atom_iff_nullity1", f"atom={i in atoms}, nullity={lat.nullities[i]}", z)

    covered = 0
    for z in lat.atom_masks():
        covered |= z
    if covered != m.ground:
        fail("element_in_atom", "elements outside every atom", m.ground & ~covered)

    try:
        found = discover_delta2_locality(m, lat)
        if not 2 <= found.r_prime <= m.full_rank():
            fail("delta2", f"r' = {found.r_prime} outside 2..k")
        verify_locality(m, found.atoms(), found.r_prime, 2, lattice=lat, with_atoms=False)
    except (HypothesisError, StructureError, LocalityError) as exc:
        fail("delta2", str(exc))
    return out


def replay(failure: Failure) -> list[Failure]:
    """Re-run the structure checks on a failure's matrix."""
    return check_structure(gf2.parse_matrix(failure.matrix))


def verify_structure_suite(spec: InstanceSpec, instances: Iterable[BitMatrix] | None = None) -> SuiteReport:
    report = SuiteReport("structure")
    excluded: Counter = Counter()
    start = time.perf_counter()
    if instances is None:
        source: Iterable[BitMatrix] = generate_instances(spec, excluded)
    else:
        source = _screened(instances, excluded)
    for matrix in source:
        report.instances += 1
        report.checks.update(STRUCTURE_CHECKS)
        report.failures.extend(check_structure(matrix))
    report.excluded = dict(excluded)
    report.elapsed = time.perf_counter() - start
    return report


def _screened(instances: Iterable[BitMatrix], excluded: Counter) -> Iterator[BitMatrix]:
    for matrix in instances:
        reason = screen(matrix)
        if reason:
            excluded[reason] += 1
        else:
            yield matrix


def check_castle(matrix: BitMatrix, repair_sets: Sequence[int], r: int, delta: int) -> list[Failure]:
    """Lattice conditions for a binary (n, k, d, r, delta)-LRC with d > 2."""
    text = format_matrix(matrix)
    out: list[Failure] = []

    def fail(check: str, detail: str, subset: int = 0) -> None:
        out.append(Failure(check, detail, text, gf2.symbols(subset), {"r": r, "delta": delta}))

    m = BinaryMatroid(matrix)
    lat = enumerate_cyclic_flats(m)
    d = gf2.min_distance(matrix)
    if 0 not in lat or m.ground not in lat:
        fail("castle_1", "empty set or ground set is not a cyclic flat")
        return out
    labels = {(lo, hi): lab for lo, hi, lab in classify_edges(lat)}
    top = lat.index(m.ground)
    for lo in lat.lower_covers(top):
        lab = labels[(lo, top)]
        if lab.kind is not EdgeKind.NULLITY or lab.delta_nullity < d - 1:
            fail("castle_2", f"edge below E is {lab.dot_label()}, need nullity >= {d - 1}", lat.flats[lo])

    for e in bits(m.ground):
        holders = [m.closure(z) for z in repair_sets if (z >> e) & 1]
        if delta == 2:
            if not any((x >> e) & 1 and lat.ranks[lat.index(x)] <= r for x in lat.flats):
                fail("castle_3", f"no cyclic flat of rank <= {r} contains symbol {e + 1}")
            continue
        good = False
        for x in holders:
            xi = lat.index(x)
            ok = True
            for lo in lat.lower_covers(xi):
                lab = labels[(lo, xi)]
                if lab.kind is not EdgeKind.NULLITY or lab.delta_nullity < delta - 1:
                    ok = False
                if lat.ranks[lo] > r - 2:
                    ok = False
            good = good or ok
        if not good:
            fail("castle_4", f"no repair-set flat around symbol {e + 1} meets the covering conditions", 1 << e)
    return out


def verify_castle_suite(
    spec: InstanceSpec, r: int, delta: int, instances: Iterable[BitMatrix] | None = None
) -> SuiteReport:
    """Castle checks on generated codes that have d > 2 and admit (r, delta)
    locality through discovered repair sets."""
    report = SuiteReport("castle")
    excluded: Counter = Counter()
    start = time.perf_counter()
    source = generate_instances(spec, excluded) if instances is None else _screened(instances, excluded)
    for matrix in source:
        if gf2.min_distance(matrix) <= 2:
            excluded["d_at_most_2"] += 1
            continue
        m = BinaryMatroid(matrix)
        try:
            sets = discover_repair_sets(m, r, delta)
        except CoverageGap:
            excluded["no_locality"] += 1
            continue
        report.instances += 1
        report.checks.update(CASTLE_CHECKS)
        report.failures.extend(check_castle(matrix, sets, r, delta))
    report.excluded = dict(excluded)
    report.elapsed = time.perf_counter() - start
    return report


def write_counterexample(failure: Failure, directory: Path, stem: str) -> tuple[Path, Path]:
    """Store a failure as a matrix text file plus a JSON annotation."""
    directory.mkdir(parents=True, exist_ok=True)
    mat = directory / f"{stem}.txt"
    ann = directory / f"{stem}.json"
    mat.write_text(failure.matrix, encoding="utf-8")
    ann.write_text(json.dumps(failure.to_dict(), indent=2, sort_keys=True), encoding="utf-8")
    return mat, ann


def load_counterexample(path: Path) -> Failure:
    data = json.loads(path.read_text(encoding="utf-8"))
    return Failure(data["check"], data["detail"], data["matrix"], data.get("subset", []), data.get("context", {}))


# -- exhaustive k_opt oracle -------------------------------------------------


def best_distances(n: int) -> dict[int, int]:
    """Largest minimum distance of a binary linear [n, k] code, for each k.

    Every linear code is equivalent to one with generator [I | P], so
    scanning all P is exhaustive.
    """
    out = {}
    for k in range(1, n + 1):
        width = n - k
        best = 0
        cap = n - k + 1
        for p in range(1 << (k * width)):
            rows = []
            for i in range(k):
                part = (p >> (i * width)) & ((1 << width) - 1)
                rows.append((1 << i) | (part << k))
            d = n
            for word in gf2.span_enumerate(rows):
                w = word.bit_count()
                if w < d:
                    d = w
                    if d <= best:
                        break
            if d > best:
                best = d
                if best == cap:
                    break
        out[k] = best
    return out


def kopt_exhaustive(n: int, d: int, table: dict[int, int] | None = None) -> int:
    """Largest k such that some binary linear [n, k] code has distance >= d."""
    if table is None:
        table = best_distances(n)
    return max((k for k, best in table.items() if best >= d), default=0)


# -- random LRCs ------------------------------------------------------------


@dataclass(frozen=True)
class LrcInstance:
    matrix: BitMatrix
    repair_sets: tuple[int, ...]
    r: int
    delta: int


def _random_subspace(rng: random.Random, k: int, dim: int) -> list[int]:
    while True:
        basis = [rng.randrange(1, 1 << k) for _ in range(dim)]
        if gf2.rank_of_vectors(basis) == dim:
            return list(gf2.span_enumerate(basis))


def random_lrc(rng: random.Random, delta: int = 3, max_tries: int = 10000) -> LrcInstance:
    """A random simple binary code assembled from overlapping local codes.

    Each local group is a random subset of a random 3- or 4-dimensional
    subspace; repair sets are the closures of the groups, and r is the
    smallest value their sizes allow.
    """
    for _ in range(max_tries):
        k = rng.randint(4, 6)
        groups = []
        cols: list[int] = []
        for _ in range(rng.randint(2, 3)):
            span = _random_subspace(rng, k, rng.choice([3, 3, 4]))
            dim = (len(span) + 1).bit_length() - 1
            size = rng.randint(dim + delta - 1, min(len(span), dim + delta + 1))
            group = rng.sample(span, size)
            groups.append(group)
            for c in group:
                if c not in cols:
                    cols.append(c)
        if len(cols) > gf2.MAX_COLS:
            continue
        matrix = BitMatrix.from_columns(cols, k)
        if screen(matrix):
            continue
        m = BinaryMatroid(matrix)
        sets = sorted({m.closure(sum(1 << cols.index(c) for c in g)) for g in groups})
        if any(gf2.min_distance(matrix, z) < delta for z in sets):
            continue
        r = max(z.bit_count() for z in sets) - delta + 1
        try:
            verify_locality(m, sets, r, delta, with_atoms=False)
        except LocalityError:
            continue
        return LrcInstance(matrix, tuple(sets), r, delta)
    raise RuntimeError("could not generate a random LRC")


# -- achiever search --------------------------------------------------------


@dataclass(frozen=True)
class Achiever:
    matrix: BitMatrix
    n: int
    k: int
    d: int
    r: int
    delta: int
    ell: int
    repair_sets: tuple[int, ...]
    bound: int | None
    achieved: bool

    def to_dict(self) -> dict:
        return {
            "matrix": format_matrix(self.matrix).splitlines(),
            "n": self.n, "k": self.k, "d": self.d, "r": self.r, "delta": self.delta, "ell": self.ell,
            "repair_sets": [gf2.symbols(z) for z in self.repair_sets],
            "bound": self.bound, "achieved": self.achieved,
        }


@dataclass
class SearchResult:
    best_codes: list[Achiever] = field(default_factory=list)
    scanned: int = 0
    elapsed: float = 0.0
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "best_codes": [a.to_dict() for a in self.best_codes],
            "stats": {"scanned": self.scanned, "elapsed": round(self.elapsed, 3), "seed": self.seed},
        }


def _random_systematic(rng: random.Random, n: int, k: int) -> BitMatrix:
    width = n - k
    rows = [(1 << i) | (rng.getrandbits(width) << k) for i in range(k)]
    return BitMatrix(tuple(rows), n)


def _as_achiever(matrix: BitMatrix, d_target: int, r: int, delta: int, bound: int | None) -> Achiever | None:
    if screen(matrix) or gf2.min_distance(matrix) != d_target:
        return None
    m = BinaryMatroid(matrix)
    lat = enumerate_cyclic_flats(m)
    try:
        sets = discover_repair_sets(m, r, delta, lat)
        profile = verify_locality(m, sets, r, delta, lattice=lat, with_atoms=False)
    except LocalityError:
        return None
    return Achiever(
        matrix, m.size, m.full_rank(), profile.d, r, delta, profile.ell, tuple(sets),
        bound, bound is not None and profile.d == bound,
    )


def search_achievers(
    n: int,
    k: int,
    d_target: int,
    r: int,
    delta: int,
    budget: int = 1000,
    seed: int = 0,
    candidates: Sequence[BitMatrix] = (),
    keep: int = 5,
) -> SearchResult:
    """Scan seed candidates, then random systematic generator matrices, for
    codes with distance ``d_target`` and (r, delta)-locality."""
    if d_target > n - k + 1:
        raise ValueError(f"d_target {d_target} exceeds the Singleton bound {n - k + 1}")
    bound = bounds.bound_best_corollary(n, k, r, delta) if r >= 2 and delta > 2 else None
    rng = random.Random(seed)
    result = SearchResult(seed=seed)
    seen: set[tuple[int, ...]] = set()
    start = time.perf_counter()

    def pool() -> Iterator[BitMatrix]:
        yield from candidates
        while True:
            yield _random_systematic(rng, n, k)

    for matrix in pool():
        if result.scanned >= budget or len(result.best_codes) >= keep:
            break
        result.scanned += 1
        if matrix.ncols != n or matrix.nrows != k:
            continue
        key = tuple(sorted(matrix.columns))
        if key in seen:
            continue
        seen.add(key)
        found = _as_achiever(matrix, d_target, r, delta, bound)
        if found is not None:
            result.best_codes.append(found)
    result.elapsed = time.perf_counter() - start
    return result
