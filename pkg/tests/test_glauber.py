import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles as o
from afpotts import lattice as lat
from afpotts.errors import BoundaryConditionError
from afpotts.glauber import (SamplerConfig, _words, advance, heat_bath_probabilities, init_pure,
                             init_uniform, new_state, run, sample_codes, stream_state, weight_table)
from afpotts.model import BoundaryCondition, box_domain, exact_gibbs, hamiltonian, named_domain, pattern_bc

EVEN0 = BoundaryCondition.even(0)


def test_streams_are_reproducible_and_distinct():
    a = _words(stream_state(7, 0), 5)
    assert np.array_equal(a, _words(stream_state(7, 0), 5))
    assert not np.array_equal(a, _words(stream_state(7, 1), 5))
    assert not np.array_equal(a, _words(stream_state(8, 0), 5))


def test_run_is_deterministic():
    lam = box_domain((8, 8))
    cfg = SamplerConfig(beta=1.0, steps=5000, seed=3)
    a = run(lam, EVEN0, cfg).state
    b = run(lam, EVEN0, cfg).state
    assert np.array_equal(a.coloring.colors, b.coloring.colors)
    assert np.array_equal(a.rng_state, b.rng_state)
    c = run(lam, EVEN0, cfg, chain=1).state
    assert not np.array_equal(a.coloring.colors, c.coloring.colors)


def test_split_runs_match_one_run():
    lam = box_domain((6, 7))
    f = init_uniform(lam, EVEN0, 5)
    one = advance(new_state(f.copy(), 5), 0.8, 3000)
    two = advance(advance(new_state(f.copy(), 5), 0.8, 1234), 0.8, 1766)
    assert np.array_equal(one.coloring.colors, two.coloring.colors)


@pytest.mark.parametrize("beta", [0.0, 0.5, 2.0, math.inf])
def test_tracked_energy_matches_recount(beta):
    for d, shape in ((2, (7, 6)), (3, (4, 4, 5))):
        lam = box_domain(shape)
        st_ = run(lam, EVEN0, SamplerConfig(beta=beta, steps=4000, seed=11, init="uniform")).state
        assert st_.energy == hamiltonian(st_.coloring)
        assert st_.step_index == 4000


def test_zero_temperature_never_raises_energy():
    lam = box_domain((8, 8))
    state = new_state(init_uniform(lam, EVEN0, 2), 2)
    last = state.energy
    for _ in range(20):
        advance(state, math.inf, 200)
        assert state.energy <= last
        last = state.energy


@pytest.mark.parametrize("i,kind", [(0, "even"), (2, "even"), (1, "odd")])
def test_init_pure_is_a_ground_state(i, kind):
    bc = BoundaryCondition(kind, i)
    lam = box_domain((6, 6), lat.EVEN if kind == "even" else lat.ODD)
    f = init_pure(lam, bc, 9)
    assert hamiltonian(f) == 0
    main = lam.window.even if kind == "even" else lam.window.odd
    assert np.all(f.colors[lam.mask & main] == i)


def test_init_pure_rejects_explicit_conditions():
    lam = named_domain("pair")
    with pytest.raises(BoundaryConditionError):
        init_pure(lam, pattern_bc(lam, EVEN0), 0)


def test_run_rejects_incompatible_condition():
    with pytest.raises(BoundaryConditionError):
        run(box_domain((5, 5)), BoundaryCondition.odd(0), SamplerConfig(beta=1.0, steps=1))


def test_snapshots_are_taken_on_schedule():
    lam = box_domain((5, 5))
    res = run(lam, EVEN0, SamplerConfig(beta=1.0, steps=1000, snapshot_every=300))
    assert [s for s, _ in res.snapshots] == [300, 600, 900]
    seen = []
    run(lam, EVEN0, SamplerConfig(beta=1.0, steps=1000, snapshot_every=300),
        on_snapshot=lambda k, f: seen.append(k))
    assert seen == [300, 600, 900]


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(beta=-1.0, steps=1)
    with pytest.raises(ValueError):
        SamplerConfig(beta=1.0, steps=1, init="hot")


@given(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)),
       st.sampled_from([0.0, 0.4, 1.0, 3.0, math.inf]))
def test_heat_bath_law(counts, beta):
    p = heat_bath_probabilities(counts, beta)
    assert p.sum() == pytest.approx(1)
    if math.isinf(beta):
        best = min(counts)
        assert all((p[a] > 0) == (counts[a] == best) for a in range(3))
    else:
        w = [math.exp(-beta * c) for c in counts]
        assert np.allclose(p, np.array(w) / sum(w))


def test_weight_table():
    assert weight_table(math.inf, 2).tolist() == [1, 0, 0, 0, 0]
    assert np.allclose(weight_table(0.5, 3), np.exp(-0.5 * np.arange(7)))


def test_sampler_matches_exact_law_on_plus():
    lam = named_domain("plus")
    beta = 0.8
    codes = sample_codes(lam, EVEN0, beta, 60000, seed=4)
    emp = np.bincount(codes, minlength=3 ** 5) / codes.size
    exact = exact_gibbs(lam, EVEN0, beta).state_probs
    assert 0.5 * np.abs(emp - exact).sum() < 0.03
    law = o.state_law(lam.cells(), lambda u: o.even0(u), beta)
    assert max(abs(exact[sum(v * 3 ** i for i, v in enumerate(k))] - p) for k, p in law.items()) < 1e-12
