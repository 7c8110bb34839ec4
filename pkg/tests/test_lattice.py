import pytest
from hypothesis import given, strategies as st

import oracles as o
from afpotts import lattice as lat
from afpotts.checks import VerifyConfig, suite_lattice
from afpotts.errors import WindowTooSmall
from afpotts.lattice import INFINITY, Direction, Region, Window
from strategies import W2, W3, cell_sets, inner_cells, regions


def cells(R):
    return set(R.cells())


def edge_pairs(E):
    return {frozenset(e) for e in E.edges()}


@given(cell_sets())
def test_boundaries_match_naive(S):
    U = Region.from_cells(W2, S)
    assert cells(lat.internal_boundary(U)) == o.internal_boundary(S)
    assert cells(lat.external_boundary(U)) == o.external_boundary(S)
    assert edge_pairs(lat.edge_boundary(U)) == o.edge_boundary(S)
    assert cells(lat.plus(U)) == S | o.external_boundary(S)


@given(cell_sets(W3, max_size=40))
def test_boundaries_match_naive_3d(S):
    U = Region.from_cells(W3, S)
    assert cells(lat.internal_boundary(U)) == o.internal_boundary(S)
    assert cells(lat.external_boundary(U)) == o.external_boundary(S)


@given(cell_sets())
def test_cofinite_boundaries_are_complements(S):
    """For U = Z^d minus a finite set, the boundaries swap roles."""
    U = Region.from_cells(W2, S).complement()
    assert U.outside_full
    assert cells(lat.internal_boundary(U)) == o.external_boundary(S)
    assert cells(lat.external_boundary(U)) == o.internal_boundary(S)
    assert edge_pairs(lat.edge_boundary(U)) == o.edge_boundary(S)


@given(cell_sets(), st.integers(1, 4))
def test_n_t_matches_naive(S, t):
    U = Region.from_cells(W2, S)
    window_cells = inner_cells(W2, 1)
    got = cells(lat.n_t(U, t)) & set(window_cells)
    assert got == o.n_t(S, t, window_cells)


def test_n_t_rounds_fractional_threshold_up():
    U = Region.from_cells(W2, [(0, 0), (2, 0)])
    assert cells(lat.n_t(U, 1.5)) == {(1, 0)}


@given(cell_sets(), cell_sets())
def test_edges_between_matches_naive(A, B):
    B = B - A
    RA, RB = Region.from_cells(W2, A), Region.from_cells(W2, B)
    assert edge_pairs(lat.edges_between(RA, RB)) == o.edges_between(A, B)


@given(cell_sets())
def test_components_and_diameter_match_naive(S):
    U = Region.from_cells(W2, S)
    comps = [cells(c) for c in lat.connected_components(U)]
    expect = o.components(S)
    assert sorted(map(sorted, comps)) == sorted(map(sorted, expect))
    assert lat.diameter(U) == sum(o.diameter(c) for c in expect)
    assert lat.diam_plus(U) == lat.diameter(U) + 3 * len(expect)


@given(cell_sets(), st.sampled_from(Direction.all(2)))
def test_directional_boundary(S, s):
    U = Region.from_cells(W2, S)
    t = s.vector(2)
    shifted = {tuple(a + b for a, b in zip(v, t)) for v in S}
    assert cells(lat.directional_boundary(U, s)) == S - shifted


@given(cell_sets(max_size=20), st.one_of(st.just("inf"), st.sampled_from(inner_cells(W2, 1))))
def test_closure_matches_naive(S, anchor):
    U = Region.from_cells(W2, S)
    got = lat.co_connected_closure(U, INFINITY if anchor == "inf" else anchor)
    want = o.closure(S, anchor, W2.lo, W2.hi)
    assert set(c for c in W2.cells() if c in got) == want
    assert lat.is_co_connected(got)


@given(regions())
def test_region_algebra(U):
    V = Region.from_cells(W2, [(0, 0), (1, 1)])
    assert U.complement().complement() == U
    assert (U | V).complement() == U.complement() & V.complement()
    assert (U - V).isdisjoint(V)
    assert len(U) == len(cells(U))


def test_cofinite_region_has_no_length():
    with pytest.raises(ValueError):
        len(Region.empty(W2).complement())


def test_shift_out_of_window_raises():
    U = Region.from_cells(W2, [(5, 5)])
    with pytest.raises(WindowTooSmall):
        U.shift((1, 0))


def test_direction_parse_round_trip():
    for s in Direction.all(3):
        assert Direction.parse(str(s)) == s
    with pytest.raises(ValueError):
        Direction.parse("0")


def test_window_basics():
    w = Window((-1, 0), (1, 2))
    assert w.shape == (3, 3)
    assert w.vertex(w.index((1, 2))) == (1, 2)
    assert w.odd[w.local((0, 1))] and not w.odd[w.local((1, 1))]


# ---------------------------------------------------------------------------
# lattice facts as properties


@st.composite
def odd_sets(draw, window=W2):
    """Unions of closed neighbourhoods of even cells and odd singletons."""
    inner = inner_cells(window, 2)
    evens = [c for c in inner if o.is_even(c)]
    odds = [c for c in inner if not o.is_even(c)]
    centers = draw(st.sets(st.sampled_from(evens), max_size=4))
    singles = draw(st.sets(st.sampled_from(odds), min_size=0 if centers else 1, max_size=4))
    S = set(singles)
    for c in centers:
        S |= {c, *o.nbrs(c)}
    return S


@given(odd_sets())
def test_odd_set_boundary_count(S):
    U = Region.from_cells(W2, S)
    assert lat.is_odd_set(U)
    e, od = U.count_parity()
    for s in Direction.all(2):
        assert len(lat.directional_boundary(U, s)) == od - e
    assert len(o.edge_boundary(S)) == 4 * (od - e)


@given(odd_sets(W3))
def test_odd_set_boundary_count_3d(S):
    U = Region.from_cells(W3, S)
    e, od = U.count_parity()
    assert len(lat.edge_boundary(U)) == 6 * (od - e)


@given(cell_sets().filter(bool))
def test_isoperimetry(S):
    b = len(o.edge_boundary(S))
    n = len(S)
    assert b * b >= 16 * n
    if n <= 2:
        assert b >= 2 * n
    else:
        assert b >= 4


@given(odd_sets())
def test_odd_connected_diameter_bound(S):
    for comp in o.components(S):
        assert len(o.edge_boundary(comp)) >= o.diameter(comp)


def test_lattice_suite_passes():
    results = suite_lattice(VerifyConfig(dim=2, trials=80, seed=1))
    assert results and all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_lattice_suite_3d_passes():
    results = suite_lattice(VerifyConfig(dim=3, trials=40, seed=2))
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]
