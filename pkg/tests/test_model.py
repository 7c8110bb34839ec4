import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles as o
from afpotts import lattice as lat
from afpotts.errors import BoundaryConditionError, CapExceeded
from afpotts.lattice import Region, Window
from afpotts.model import (BoundaryCondition, Coloring, box_domain, exact_gibbs, hamiltonian,
                           improper_edges, local_field, named_domain, pattern_bc, validate_bc)

EVEN0 = BoundaryCondition.even(0)

# frozen from oracles.exact_Z (naive enumeration over dicts)
PLUS_B1_Z = 24.672618703461975
PLUS_COUNTS = {0: 18, 1: 8, 2: 12, 3: 16, 4: 58, 5: 24, 6: 20, 7: 24, 8: 36, 9: 8, 10: 8, 12: 10, 16: 1}
PAIR_B05_Z = 4.373248614850582
PAIR_COUNTS = {0: 3, 1: 1, 3: 2, 4: 2, 6: 1}


def tau_of(bc, lam):
    vals = bc.values(lam.window)
    return lambda u: int(vals[lam.window.local(u)])


def test_plus_partition_function_matches_frozen_value():
    g = exact_gibbs(named_domain("plus"), EVEN0, 1.0)
    assert g.Z == pytest.approx(PLUS_B1_Z, abs=1e-12)
    assert {e: int(c) for e, c in enumerate(g.energy_counts) if c} == PLUS_COUNTS
    assert exact_gibbs(named_domain("plus"), EVEN0, math.inf).Z == 18


def test_pair_partition_function_matches_frozen_value():
    lam = named_domain("pair")
    g = exact_gibbs(lam, pattern_bc(lam, EVEN0), 0.5)
    assert g.Z == pytest.approx(PAIR_B05_Z, abs=1e-12)
    assert {e: int(c) for e, c in enumerate(g.energy_counts) if c} == PAIR_COUNTS


def test_dumbbell_ground_states():
    g = exact_gibbs(named_domain("dumbbell"), EVEN0, math.inf)
    assert g.Z == 162 and g.energy_counts[1] == 144 and g.energy_counts[28] == 1


@pytest.mark.parametrize("beta", [0.0, 0.3, 1.0, 2.5])
def test_single_cell_closed_form(beta):
    lam = named_domain("single", 2)
    # odd cell with four even0 neighbours, all colored 0
    assert exact_gibbs(lam, EVEN0, beta).Z == pytest.approx(2 + math.exp(-4 * beta), abs=1e-12)


@pytest.mark.parametrize("name,d,beta", [("plus", 2, 0.7), ("pair", 2, 1.3), ("box2", 2, 0.4),
                                         ("single", 3, 2.0), ("pair", 3, 0.9), ("plus", 2, math.inf)])
def test_state_law_matches_naive(name, d, beta):
    lam = named_domain(name, d)
    bc = pattern_bc(lam, EVEN0)
    g = exact_gibbs(lam, bc, beta)
    law = o.state_law(lam.cells(), tau_of(bc, lam), beta)
    cells = lam.cells()
    for vals, p in law.items():
        code = sum(v * 3 ** i for i, v in enumerate(vals))
        assert g.state_probs[code] == pytest.approx(p, abs=1e-12)
    Z, _ = o.exact_Z(cells, tau_of(bc, lam), beta)
    assert g.Z == pytest.approx(Z, rel=1e-12)
    assert np.allclose(g.marginals.sum(axis=1), 1)


def test_beta_zero_counts_all_states():
    lam = named_domain("box2", 2)
    assert exact_gibbs(lam, pattern_bc(lam, EVEN0), 0.0).Z == 3 ** 4


def test_query_joint_law_marginalizes():
    lam = named_domain("plus")
    g = exact_gibbs(lam, EVEN0, 1.0, query=[(0, 0), (1, 0)])
    joint = g.query_probs.reshape(3, 3)  # index = a + 3b
    assert np.allclose(joint.sum(axis=0), g.marginal((0, 0)))
    assert np.allclose(joint.sum(axis=1), g.marginal((1, 0)))


def test_cap_is_enforced():
    with pytest.raises(CapExceeded):
        exact_gibbs(named_domain("dumbbell"), EVEN0, 1.0, cap=8)


def test_color_swap_symmetry():
    """Swapping colors 1 and 2 in the boundary swaps them in the marginals."""
    lam = named_domain("plus")
    tau = BoundaryCondition.even(0).values(lam.window)
    a = exact_gibbs(lam, BoundaryCondition.explicit(tau), 0.8)
    b = exact_gibbs(lam, BoundaryCondition.explicit((-tau) % 3), 0.8)
    assert np.allclose(a.marginals[:, [0, 2, 1]], b.marginals, atol=1e-12)


@given(st.lists(st.integers(0, 2), min_size=5, max_size=5), st.integers(0, 2))
def test_hamiltonian_matches_naive(vals, i):
    lam = named_domain("plus")
    bc = BoundaryCondition.even(i)
    f = Coloring(lam, bc)
    for c, v in zip(lam.cells(), vals):
        f[c] = v
    colors = {c: int(f.colors[lam.window.local(c)]) for c in lam.window.cells()}
    assert hamiltonian(f) == o.hamiltonian(colors, set(lam.cells()))
    assert {frozenset(e) for e in improper_edges(f).edges()} == o.improper(colors)
    v = (0, 0)
    assert local_field(f, v) == tuple(sum(colors[u] == a for u in o.nbrs(v)) for a in range(3))


def test_boundary_condition_values():
    w = Window((0, 0), (1, 1))
    assert BoundaryCondition.even(1).values(w).tolist() == [[1, 2], [2, 1]]
    assert BoundaryCondition.odd(0).values(w).tolist() == [[1, 0], [0, 1]]
    assert BoundaryCondition.parse("odd-2") == BoundaryCondition.odd(2)
    with pytest.raises(ValueError):
        BoundaryCondition.parse("even3")


def test_validate_bc():
    assert validate_bc(named_domain("plus"), EVEN0)
    assert not validate_bc(named_domain("plus"), BoundaryCondition.odd(0))
    pair = named_domain("pair")
    assert not validate_bc(pair, EVEN0)
    assert validate_bc(pair, pattern_bc(pair, EVEN0))
    w = Window((-1, -1), (4, 4))
    apart = Region.from_cells(w, [(0, 0), (2, 2)])
    assert validate_bc(apart, pattern_bc(apart, EVEN0)).clause == "domain: connected"


@pytest.mark.parametrize("shape", [(4, 4), (4, 5), (6, 6), (4, 4, 4), (5, 4, 6)])
def test_box_domain_is_a_domain_for_matching_condition(shape):
    even = box_domain(shape, lat.EVEN)
    assert validate_bc(even, BoundaryCondition.even(0))
    assert lat.is_odd_set(even)
    odd = box_domain(shape, lat.ODD)
    assert validate_bc(odd, BoundaryCondition.odd(2))


def test_box_domain_rejects_degenerate_boxes():
    with pytest.raises(ValueError):
        box_domain((2, 5))
    with pytest.raises(ValueError):
        box_domain((3, 3), lat.ODD)
    assert len(box_domain((3, 3), lat.EVEN)) == 5


def test_coloring_rejects_bad_boundary():
    lam = named_domain("plus")
    colors = EVEN0.values(lam.window)
    colors[0, 0] = (colors[0, 0] + 1) % 3
    with pytest.raises(BoundaryConditionError):
        Coloring(lam, EVEN0, colors)
    f = Coloring(lam, EVEN0)
    with pytest.raises(ValueError):
        f[(2, 0)] = 1
