import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles as o
from afpotts import lattice as lat
from afpotts.breakup import (FourSection, boundary_stats, breakup, breakup_around_set, in_family_rho,
                             in_family_V, kappa, validate_four_section, violation_set)
from afpotts.checks import VerifyConfig, anchor_groups, breakup_properties, suite_breakup
from afpotts.errors import BoundaryConditionError
from afpotts.glauber import init_pure
from afpotts.lattice import Direction, Region, Window
from afpotts.model import BoundaryCondition, Coloring, box_domain, named_domain
from strategies import LAM2, LAM3, colorings

EVEN0 = BoundaryCondition.even(0)


def as_dict(f):
    return {c: f[c] for c in f.lam.cells()}


def assert_matches(K, lab):
    for v, l in lab.items():
        assert K.label(v) == l, v


@given(colorings(), st.data())
def test_breakup_matches_naive(f, data):
    rho = data.draw(st.sampled_from(f.lam.cells()))
    rep = breakup(f, rho)
    assert_matches(rep.section, o.breakup_labels(as_dict(f), f.lam.cells(), rho=rho))


@given(colorings(LAM3), st.data())
def test_breakup_matches_naive_3d(f, data):
    rho = data.draw(st.sampled_from(f.lam.cells()))
    rep = breakup(f, rho)
    assert_matches(rep.section, o.breakup_labels(as_dict(f), f.lam.cells(), rho=rho, margin=2))


@given(colorings(), st.data())
def test_breakup_around_set_matches_naive(f, data):
    T = violation_set(f).cells()
    V = data.draw(st.sets(st.sampled_from(T), max_size=3)) if T else set()
    rep = breakup_around_set(f, Region.from_cells(f.window, V))
    assert_matches(rep.section, o.breakup_labels(as_dict(f), f.lam.cells(), V=V))


@given(colorings(), st.data())
def test_nontrivial_breakup_properties(f, data):
    """Non-trivial breakups are connected four-sections adapted to f and inside the domain."""
    rho = data.draw(st.sampled_from(f.lam.cells()))
    rep = breakup(f, rho)
    K = rep.section
    assert rep.trivial == K.is_trivial
    if rep.trivial:
        return
    assert validate_four_section(K)
    assert rep.adapted and rep.connected
    assert in_family_rho(K, rho)
    assert breakup_properties(f, K) == []


def test_trivial_breakup_around_odd_cell_is_not_a_four_section():
    """Triviality allows one stray cell, which need not satisfy the neighbour rule."""
    f = init_pure(LAM2, EVEN0, 0)
    rep = breakup(f, (0, 1))
    assert rep.trivial and len(rep.section.k123) == 1
    assert not validate_four_section(rep.section)


@given(colorings())
def test_regular_and_singular_edges_match_naive(f):
    rep = breakup(f, f.lam.cells()[0])
    K = rep.section
    lab = {v: K.label(v) for v in K.window.cells()}
    reg, sing = o.regular_singular(lab)
    stats = K.stats
    assert {frozenset(e) for e in stats.regular.edges()} == reg
    assert {frozenset(e) for e in stats.singular.edges()} == sing
    assert K.L == len(reg) and K.M == len(sing)
    for s in Direction.all(2):
        assert set(K.down_boundary(s).cells()) == o.down_boundary(lab, s.vector(2))


@given(colorings())
def test_anchors_in_one_group_share_the_breakup(f):
    groups = anchor_groups(f, f.lam.cells())
    grouped = {rho for g in groups for rho in g}
    for g in groups:
        K = breakup(f, g[0]).section
        assert all(breakup(f, rho).section == K for rho in g[1:])
    for rho in set(f.lam.cells()) - grouped:
        assert breakup(f, rho).trivial


def test_pure_colorings_give_trivial_breakups():
    f = init_pure(LAM2, EVEN0, 3)
    for rho in LAM2.cells():
        rep = breakup(f, rho)
        assert rep.trivial and rep.M == 0 and rep.section.part(3).is_empty()


def test_kappa_table():
    lam = named_domain("plus")
    f = Coloring(lam, EVEN0)
    for v in lam.cells():
        for c in range(3):
            f[v] = c
            assert kappa(f)[lam.window.local(v)] == o.kappa(v, c)


def test_single_defect_section():
    f = init_pure(LAM2, EVEN0, 0)
    f[(2, 2)] = 1  # even cell with a non-zero color
    rep = breakup(f, (2, 2))
    assert not rep.trivial
    assert validate_four_section(rep.section)
    assert set(violation_set(f).cells()) == {(2, 2)}


def test_breakup_rejects_bad_input():
    f = init_pure(LAM2, EVEN0, 0)
    with pytest.raises(ValueError):
        breakup(f, (-1, -1))
    with pytest.raises(ValueError):
        breakup_around_set(f, Region.from_cells(f.window, [(2, 2)]))
    lam = box_domain((5, 5), lat.ODD)
    g = init_pure(lam, BoundaryCondition.odd(0), 0)
    with pytest.raises(BoundaryConditionError):
        breakup(g, lam.cells()[0])


def test_validators_report_clauses():
    w = Window((-2, -2), (3, 3))
    # an odd cell on the boundary of the 0-phase breaks the parity clause
    K = FourSection.from_parts(w, {1: [(0, 0)]})
    v = validate_four_section(K)
    assert not v and v.clause.startswith("(b)")
    assert validate_four_section(FourSection.from_parts(w, {3: [(1, 0)]}))
    assert validate_four_section(FourSection.from_parts(w, {3: [(0, 0)]})).clause == "(b) K0 even"
    bad = FourSection(w, np.where(np.arange(36).reshape(6, 6) == 14, -1, 0))
    assert validate_four_section(bad).clause == "(a) partition"


def test_family_membership():
    w = Window((-3, -3), (4, 4))
    K = FourSection.from_parts(w, {3: lat.plus_cells((0, 0))})
    assert validate_four_section(K)
    assert in_family_rho(K, (1, 0))
    assert not in_family_rho(K, (3, 3))
    assert in_family_V(K, Region.from_cells(w, [(1, 0)]))
    assert in_family_V(K, Region.from_cells(w, [(-2, -2)])).clause == "K123 meets V"


def test_boundary_stats_keys():
    f = init_pure(LAM2, EVEN0, 0)
    f[(2, 2)] = 2
    out = boundary_stats(breakup(f, (2, 2)).section)
    assert set(out) == {"L", "M", "singularities", "revealed", "down_boundary"}
    assert set(out["down_boundary"]) == {str(s) for s in Direction.all(2)}


def test_grow_preserves_section():
    f = init_pure(LAM2, EVEN0, 0)
    f[(2, 2)] = 2
    K = breakup(f, (2, 2)).section
    G = K.grow(2)
    assert all(G.label(v) == K.label(v) for v in G.window.cells())
    assert (G.L, G.M) == (K.L, K.M)


def test_breakup_suite_passes_small():
    results = suite_breakup(VerifyConfig(dim=2, max_cells=5, trials=30, seed=5))
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]
