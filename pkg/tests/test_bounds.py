from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from binlrc import bounds
from binlrc.bounds import BoundDomainError
from binlrc.lab import best_distances, kopt_exhaustive

# values below were evaluated by hand from the closed forms


@pytest.mark.parametrize(
    "fn, args, want",
    [
        (bounds.bound_kamath, (10, 4, 4, 3), 7),
        (bounds.bound_kamath, (50, 10, 5, 3), 39),
        (bounds.bound_ell_singleton, (10, 4, 3, 3), 4),
        (bounds.bound_ell_singleton, (20, 7, 3, 3), 9),
        (bounds.bound_noalpha, (10, 4, 3, 3), 5),
        (bounds.bound_noalpha, (20, 5, 3, 3), 13),
        (bounds.bound_noalpha, (20, 7, 3, 3), 9),
        (bounds.bound_ldelta, (10, 4, 3, 3), 4),
        (bounds.bound_best_corollary, (10, 4, 4, 3), 4),
        (bounds.bound_best_corollary, (50, 10, 5, 3), 35),
    ],
)
def test_hand_values(fn, args, want):
    assert fn(*args) == want


@pytest.mark.parametrize("alpha, want", [(0, 4), (1, 2), (Fraction(1, 2), 5), ("1/2", 5)])
def test_alpha_bound_values(alpha, want):
    assert bounds.bound_alpha(10, 4, 3, 3, alpha) == want


@pytest.mark.parametrize("n, d, want", [(7, 4, 3), (4, 4, 1), (5, 1, 5), (10, 4, 6), (3, 5, 0)])
def test_plotkin_values(n, d, want):
    assert bounds.kopt_plotkin(n, d) == want


def test_cm_table_example():
    rows = bounds.cm_table(10, 4, 4, 3)
    assert [(t, v) for t, _, v in rows] == [(0, 6), (1, 5)]
    assert bounds.bound_cm_delta(10, 4, 4, 3) == 5
    assert bounds.cm_minimizer(10, 4, 4, 3) == 1


def test_comparison_report():
    rep = bounds.compare_cm_vs_new(10, 4, 4, 3, 3, 4)
    assert (rep.k_max, rep.lhs, rep.rhs_new, rep.rhs_cm, rep.tighter) == (5, 10, 10, 11, "new")
    assert rep.to_dict()["t_range"] == "t >= 0"


nkld = st.tuples(st.integers(2, 40), st.integers(2, 40), st.integers(3, 6)).filter(lambda t: t[1] < t[0])


@given(nkld, st.integers(0, 30))
def test_alpha_zero_is_noalpha_without_indicator(params, extra):
    k, ell, delta = params
    n = k + extra
    ind = int((k - 1) % ell == 0)
    assert bounds.bound_alpha(n, k, ell, delta, 0) == bounds.bound_noalpha(n, k, ell, delta) - ind


@given(nkld, st.integers(0, 30))
def test_ldelta_is_min_of_parts(params, extra):
    k, ell, delta = params
    n = k + extra
    want = min(bounds.bound_ell_singleton(n, k, ell, delta), bounds.bound_noalpha(n, k, ell, delta))
    assert bounds.bound_ldelta(n, k, ell, delta) == want


@given(st.integers(3, 40), st.integers(3, 40), st.integers(2, 6), st.integers(0, 30))
def test_corollary_is_ldelta_at_r_minus_1(k, r, delta, extra):
    n = k + extra
    assert bounds.bound_best_corollary(n, k, r, delta) == bounds.bound_ldelta(n, k, r - 1, delta)


def test_plotkin_against_exhaustive_small():
    for n in range(1, 7):
        table = best_distances(n)
        for d in range(1, n + 1):
            assert kopt_exhaustive(n, d, table) <= bounds.kopt_plotkin(n, d)
            assert kopt_exhaustive(n, d, table) <= bounds.kopt_griesmer(n, d)


def test_best_distances_known_codes():
    # [7,4,3] Hamming and [8,4,4] extended Hamming are optimal
    assert best_distances(7)[4] == 3
    assert best_distances(8)[4] == 4


@pytest.mark.parametrize(
    "call",
    [
        lambda: bounds.bound_kamath(3, 4, 2, 3),
        lambda: bounds.bound_kamath(10, 4, 0, 3),
        lambda: bounds.bound_noalpha(10, 4, 3, 1),
        lambda: bounds.bound_alpha(10, 4, 3, 3, Fraction(3, 2)),
        lambda: bounds.bound_best_corollary(10, 4, 1, 3),
        lambda: bounds.cm_table(3, 4, 2, 3),
        lambda: bounds.compare_cm_vs_new(10, 4, 4, 2, 3, 4),
    ],
)
def test_domain_errors(call):
    with pytest.raises(BoundDomainError):
        call()


def test_evaluate_bounds_report():
    rep = bounds.evaluate_bounds(10, 4, 4, 3, d=4)
    assert rep.ell == 3 and any("r - 1" in note for note in rep.notes)
    assert rep.achieved("corollary") and rep.achieved("ldelta") and not rep.achieved("kamath")
    assert rep.achieved("alpha") is None
    low = bounds.evaluate_bounds(10, 4, 4, 2)
    assert any("not applicable" in note for note in low.notes)
    with_alpha = bounds.evaluate_bounds(10, 4, 4, 3, ell=3, alpha="1/2")
    assert with_alpha.values["alpha"] == 5


def test_sweep_csv():
    rows = bounds.sweep(50, 3, range(3, 11), range(2, 50))
    text = bounds.sweep_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "r,k,old_bound,new_bound" and len(lines) == 1 + 8 * 48
    assert "5,10,39,35" in lines
    assert all(new <= old for _, _, old, new in rows)
