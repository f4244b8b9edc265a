"""Distance and dimension bounds for locally repairable codes.

Everything here is exact integer or ``Fraction`` arithmetic; no value ever
passes through a float.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable


class BoundDomainError(ValueError):
    pass


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise BoundDomainError(msg)


def _check_nk(n: int, k: int) -> None:
    _check(1 <= k <= n, f"need 1 <= k <= n, got n={n}, k={k}")


def bound_kamath(n: int, k: int, r: int, delta: int) -> int:
    """Singleton-type bound for (r, delta)-locality over any field."""
    _check_nk(n, k)
    _check(r >= 1, "need r >= 1")
    _check(delta >= 2, "need delta >= 2")
    return n - k + 1 - (ceil_div(k, r) - 1) * (delta - 1)


def bound_ell_singleton(n: int, k: int, ell: int, delta: int) -> int:
    """Bound in terms of the largest repair-set rank ell (binary, delta > 2)."""
    _check_nk(n, k)
    _check(ell >= 1, "need ell >= 1")
    _check(delta >= 2, "need delta >= 2")
    return n - k - (ceil_div(k, ell) - 1) * (delta - 1)


def bound_alpha(n: int, k: int, ell: int, delta: int, alpha: Fraction | int | str) -> int:
    """Bound for codes having an rps-chain whose coatom-hit fraction is alpha."""
    _check_nk(n, k)
    _check(ell >= 1, "need ell >= 1")
    _check(delta >= 2, "need delta >= 2")
    alpha = Fraction(alpha)
    _check(0 <= alpha <= 1, f"alpha must lie in [0, 1], got {alpha}")
    steps = ceil_frac(Fraction(k) / (ell - (ell - 1) * alpha))
    return n - k + 1 + delta - ceil_frac(steps * (delta - alpha))


def _divides(a: int, b: int) -> bool:
    return a != 0 and b % a == 0


def bound_noalpha(n: int, k: int, ell: int, delta: int) -> int:
    """The alpha bound optimised over alpha."""
    _check_nk(n, k)
    _check(ell >= 1, "need ell >= 1")
    _check(delta >= 2, "need delta >= 2")
    return n - k + 1 - (ceil_div(k, ell) - 1) * delta + int(_divides(ell, k - 1))


def bound_ldelta(n: int, k: int, ell: int, delta: int) -> int:
    """Combined ell-bound: indicator dropped when ell + 1 == k."""
    _check_nk(n, k)
    _check(ell >= 1, "need ell >= 1")
    _check(delta >= 2, "need delta >= 2")
    ind = _divides(ell, k - 1) and ell + 1 != k
    return n - k + 1 - (ceil_div(k, ell) - 1) * delta + int(ind)


def bound_best_corollary(n: int, k: int, r: int, delta: int) -> int:
    """Bound in n, k, r, delta only, using ell <= r - 1."""
    _check_nk(n, k)
    _check(r >= 2, "need r >= 2")
    _check(delta >= 2, "need delta >= 2")
    ind = _divides(r - 1, k - 1) and r != k
    return n - k + 1 - (ceil_div(k, r - 1) - 1) * delta + int(ind)


# -- k_opt estimators -------------------------------------------------------


def kopt_plotkin(n: int, d: int) -> int:
    """Upper bound on the dimension of a binary linear code of length n and
    minimum distance d.

    Odd d is lifted to (n + 1, d + 1) by a parity extension; then each
    shortening step while n >= 2d costs at most one dimension; finally
    |C| <= 2 * floor(d / (2d - n)) once n < 2d.
    """
    _check(d >= 1 and n >= 0, f"need d >= 1, n >= 0, got n={n}, d={d}")
    if d > n:
        return 0
    if d % 2:
        n, d = n + 1, d + 1
    extra = 0
    if n >= 2 * d:
        extra = n - (2 * d - 1)
        n = 2 * d - 1
    size = 2 * (d // (2 * d - n))
    return extra + size.bit_length() - 1


def kopt_singleton(n: int, d: int) -> int:
    _check(d >= 1 and n >= 0, f"need d >= 1, n >= 0, got n={n}, d={d}")
    return max(0, n - d + 1)


def kopt_griesmer(n: int, d: int) -> int:
    """Largest k with sum_{i<k} ceil(d / 2^i) <= n."""
    _check(d >= 1 and n >= 0, f"need d >= 1, n >= 0, got n={n}, d={d}")
    k, total = 0, 0
    while True:
        total += ceil_div(d, 1 << k)
        if total > n:
            return k
        k += 1


KOPT_ESTIMATORS: dict[str, Callable[[int, int], int]] = {
    "plotkin": kopt_plotkin,
    "griesmer": kopt_griesmer,
    "singleton": kopt_singleton,
}


def cm_table(
    n: int, d: int, r: int, delta: int, kopt: Callable[[int, int], int] = kopt_plotkin
) -> list[tuple[int, int, int]]:
    """Rows (t, n - t(r + delta - 1), t r + kopt(...)) for every feasible t >= 0."""
    _check(n >= 1 and d >= 1 and r >= 1 and delta >= 2, "parameters must be positive, delta >= 2")
    rows = []
    t = 0
    while n - t * (r + delta - 1) >= d:
        rest = n - t * (r + delta - 1)
        rows.append((t, rest, t * r + kopt(rest, d)))
        t += 1
    if not rows:
        raise BoundDomainError(f"no feasible t: n={n} < d={d}")
    return rows


def bound_cm_delta(
    n: int, d: int, r: int, delta: int, kopt: Callable[[int, int], int] = kopt_plotkin
) -> int:
    """Field-size aware dimension bound; t ranges over 0, 1, 2, ..."""
    return min(row[2] for row in cm_table(n, d, r, delta, kopt))


def cm_minimizer(n: int, d: int, r: int, delta: int, kopt: Callable[[int, int], int] = kopt_plotkin) -> int:
    rows = cm_table(n, d, r, delta, kopt)
    best = min(row[2] for row in rows)
    return next(t for t, _, v in rows if v == best)


# -- comparisons ------------------------------------------------------------


def ell_profile_value(k: int, ell: int, delta: int) -> int:
    """k + ceil(k/ell) delta - [ell | k-1 and ell != k-1]."""
    _check(k >= 1 and ell >= 1, "need k, ell >= 1")
    ind = _divides(ell, k - 1) and ell != k - 1
    return k + ceil_div(k, ell) * delta - int(ind)


@dataclass(frozen=True)
class ComparisonReport:
    n: int
    d: int
    r: int
    delta: int
    ell: int
    k: int
    k_max: int
    t_min: int
    lhs: int
    rhs_cm: int
    rhs_new: int
    estimator: str = "plotkin"

    @property
    def tighter(self) -> str:
        if self.rhs_cm < self.rhs_new:
            return "cm"
        if self.rhs_new < self.rhs_cm:
            return "new"
        return "tie"

    def to_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "r": self.r, "delta": self.delta, "ell": self.ell, "k": self.k,
            "k_max": self.k_max, "t_min": self.t_min, "t_range": "t >= 0", "estimator": self.estimator,
            "lhs": self.lhs, "rhs_cm": self.rhs_cm, "rhs_new": self.rhs_new, "tighter": self.tighter,
        }


def compare_cm_vs_new(n: int, d: int, r: int, delta: int, ell: int, k: int, estimator: str = "plotkin") -> ComparisonReport:
    _check(delta > 2, "comparison needs delta > 2")
    kopt = KOPT_ESTIMATORS[estimator]
    k_max = bound_cm_delta(n, d, r, delta, kopt)
    return ComparisonReport(
        n=n, d=d, r=r, delta=delta, ell=ell, k=k,
        k_max=k_max,
        t_min=cm_minimizer(n, d, r, delta, kopt),
        lhs=ell_profile_value(k, ell, delta),
        rhs_cm=ell_profile_value(k_max, ell, delta) if k_max >= 1 else 0,
        rhs_new=n - d + 1 + delta,
        estimator=estimator,
    )


# -- reports ----------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    n: int
    k: int
    r: int
    delta: int
    ell: int | None = None
    alpha: Fraction | None = None
    d: int | None = None
    values: dict[str, int] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def achieved(self, name: str) -> bool | None:
        if self.d is None or name not in self.values:
            return None
        return self.values[name] == self.d

    def to_dict(self) -> dict:
        return {
            "inputs": {
                "n": self.n, "k": self.k, "r": self.r, "delta": self.delta, "ell": self.ell,
                "alpha": None if self.alpha is None else str(self.alpha), "d": self.d,
            },
            "bounds": [
                {"name": name, "value": v, "achieved": self.achieved(name)} for name, v in self.values.items()
            ],
            "notes": list(self.notes),
        }


def evaluate_bounds(
    n: int,
    k: int,
    r: int,
    delta: int,
    ell: int | None = None,
    alpha: Fraction | str | None = None,
    d: int | None = None,
) -> BoundReport:
    """Every distance bound that makes sense for the given parameters.

    Bounds stated for binary codes with delta > 2 are still evaluated when
    delta = 2; the report notes that they do not apply.
    """
    notes = []
    if delta <= 2:
        notes.append("delta <= 2: binary delta > 2 bounds evaluated but not applicable")
    values = {"kamath": bound_kamath(n, k, r, delta)}
    if r >= 2:
        values["corollary"] = bound_best_corollary(n, k, r, delta)
    else:
        notes.append("r < 2: corollary bound undefined")
    if ell is None and r >= 2:
        ell = r - 1
        notes.append("ell taken as r - 1 (its upper bound)")
    if ell is not None:
        values["ell_singleton"] = bound_ell_singleton(n, k, ell, delta)
        values["noalpha"] = bound_noalpha(n, k, ell, delta)
        values["ldelta"] = bound_ldelta(n, k, ell, delta)
        if alpha is not None:
            values["alpha"] = bound_alpha(n, k, ell, delta, Fraction(alpha))
    return BoundReport(
        n=n, k=k, r=r, delta=delta, ell=ell,
        alpha=None if alpha is None else Fraction(alpha),
        d=d, values=values, notes=tuple(notes),
    )


# -- sweeps -----------------------------------------------------------------


SWEEP_HEADER = ("r", "k", "old_bound", "new_bound")


def sweep(n: int, delta: int, r_values: Iterable[int], k_range: Iterable[int]) -> list[tuple[int, int, int, int]]:
    """(r, k, old, new) rows, r ascending then k ascending."""
    rows = []
    ks = sorted(k_range)
    for r in sorted(r_values):
        for k in ks:
            rows.append((r, k, bound_kamath(n, k, r, delta), bound_best_corollary(n, k, r, delta)))
    return rows


def sweep_csv(rows: Iterable[tuple[int, int, int, int]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    writer.writerows(rows)
    return buf.getvalue()
