import pytest
from hypothesis import given
from hypothesis import strategies as st

from binlrc import gf2
from binlrc.gf2 import BitMatrix, MatrixFormatError
from binlrc.lab import EXAMPLE_1


@st.composite
def matrices(draw, max_k=5, max_n=10):
    k = draw(st.integers(1, max_k))
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=k, max_size=k))
    return BitMatrix(tuple(rows), n)


def naive_rank(vectors):
    # rank through explicit span sizes
    span = {0}
    for v in vectors:
        span |= {s ^ v for s in span}
    return len(span).bit_length() - 1


def naive_distance(m: BitMatrix, cols: int) -> int:
    best = None
    for msg in range(1, 1 << m.nrows):
        w = (m.encode(msg) & cols).bit_count()
        if w and (best is None or w < best):
            best = w
    return best or 0


def test_parse_example1():
    m = gf2.parse_matrix(EXAMPLE_1)
    assert (m.nrows, m.ncols) == (4, 10)
    assert m.to_lists()[0] == [1, 0, 0, 0, 1, 0, 1, 1, 1, 1]
    assert gf2.rank(m) == 4
    assert gf2.min_distance(m) == 4


def test_parse_roundtrip_and_spacing():
    a = gf2.parse_matrix("# comment\n1 0 1\n\n0 1 1\n")
    b = gf2.parse_matrix("101\n011")
    assert a == b
    assert gf2.parse_matrix(gf2.format_matrix(a)) == a


@pytest.mark.parametrize("text", ["", "# only a comment\n", "1 0 2\n", "10\n101\n", "1  0\n"])
def test_parse_rejects(text):
    with pytest.raises(MatrixFormatError):
        gf2.parse_matrix(text)


def test_symbol_helpers():
    mask = gf2.mask_from_symbols([1, 3, 10])
    assert gf2.symbols(mask) == [1, 3, 10]
    assert gf2.format_set(mask) == "{1,3,10}"
    assert gf2.format_set(0) == "{}"
    with pytest.raises(ValueError):
        gf2.mask_from_symbols([0])


@given(matrices())
def test_rank_matches_span_size(m):
    assert gf2.rank(m) == naive_rank(m.columns)
    assert gf2.rank(m) == naive_rank(m.rows)


@given(matrices(max_k=4, max_n=8), st.data())
def test_restricted_distance_matches_enumeration(m, data):
    cols = data.draw(st.integers(0, m.ground))
    if gf2.rank(m, cols) == 0:
        with pytest.raises(ValueError):
            gf2.min_distance(m, cols)
    else:
        assert gf2.min_distance(m, cols) == naive_distance(m, cols)


@given(matrices())
def test_cycle_basis_spans_kernel(m):
    basis = gf2.cycle_basis(m)
    assert len(basis) == m.ncols - gf2.rank(m)
    assert gf2.rank_of_vectors(basis) == len(basis)
    for v in basis:
        acc = 0
        for j in gf2.bits(v):
            acc ^= m.columns[j]
        assert acc == 0


@given(matrices(), st.data())
def test_closure_and_cyclic_part_match_rank_definitions(m, data):
    x = data.draw(st.integers(0, m.ground))
    r = gf2.rank(m, x)
    cl = sum(1 << e for e in range(m.ncols) if gf2.rank(m, x | (1 << e)) == r)
    cyc = sum(1 << e for e in gf2.bits(x) if gf2.rank(m, x & ~(1 << e)) == r)
    assert gf2.closure_mask(m, x) == cl
    assert gf2.cyclic_part(m, x) == cyc


@given(matrices(), st.data())
def test_solve_in_span(m, data):
    basis = gf2.greedy_basis(m, m.ground)
    target = data.draw(st.integers(0, m.ncols - 1))
    combo = gf2.solve_in_span(m, basis, target)
    # the greedy basis spans every column
    assert combo is not None and combo & ~basis == 0
    acc = 0
    for j in gf2.bits(combo):
        acc ^= m.columns[j]
    assert acc == m.columns[target]


def test_solve_outside_span():
    m = gf2.parse_matrix("1 0 1\n0 0 1")
    assert gf2.solve_in_span(m, 0b001, 2) is None


def test_solve_rejects_dependent_basis():
    m = gf2.parse_matrix("1 1 0\n0 0 1")
    with pytest.raises(ValueError):
        gf2.solve_in_span(m, 0b011, 1)


def test_span_enumerate_is_gray_complete():
    gens = [0b001, 0b010, 0b100]
    assert sorted(gf2.span_enumerate(gens)) == list(range(1, 8))


def test_validation_flags():
    ok = gf2.validate_storage_code(gf2.parse_matrix(EXAMPLE_1))
    assert ok.ok and not ok.degenerate and not ok.replicated
    ident = gf2.validate_storage_code(gf2.parse_matrix("100\n010\n001"))
    assert ident.d == 1 and not ident.ok and ident.coloops == (0, 1, 2)
    zero = gf2.validate_storage_code(gf2.parse_matrix("1010\n0110"))
    assert zero.zero_columns == (3,) and zero.degenerate
    rep = gf2.validate_storage_code(gf2.parse_matrix("1101\n0111"))
    assert rep.replicated and not rep.ok
    dep = gf2.validate_storage_code(gf2.parse_matrix("111\n111"))
    assert dep.dependent_rows and dep.rank == 1


def test_low_weight_representation_finds_shortest():
    m = gf2.parse_matrix(EXAMPLE_1)
    rest = gf2.low_weight_representation(m, m.ground, 0)
    assert rest is not None and rest.bit_count() == 2
    # no single column repeats column 1, so weight 2 is optimal
    assert all(m.columns[j] != m.columns[0] for j in range(1, 10))
