"""Acceptance runs at full size.

Each test prints a ``PASS``/``FAIL`` line for its criterion, and the lines
are repeated in the terminal summary. Expect several minutes in total.
"""

import math
import random
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.stats import binom

from afpotts.analysis import chain_occupancy, summarize_chains, violations
from afpotts.approx import cover_sum
from afpotts.breakup import breakup, violation_set
from afpotts.checks import (COVER_TOL, VerifyConfig, _sample_breakups, cover_sum_exhaustive, exhaustive_breakups,
                            random_admissible_weights, random_bipartite_graph, random_mod, suite_lattice)
from afpotts.formats import read_pc3
from afpotts.lattice import Direction
from afpotts.model import BoundaryCondition, box_domain, exact_gibbs, named_domain, pattern_bc
from afpotts.glauber import sample_codes
from afpotts.render import render
from afpotts.transform import invert_transform, transform, transformation_checks

TV_BOUND = 0.02
TV_SAMPLES = 10 ** 6
BETAS = (0.0, 0.5, 2.0, math.inf)
FIXTURES = [(2, n) for n in ("single", "pair", "plus", "box2", "dumbbell")] + \
           [(3, n) for n in ("single", "pair", "plus", "box2")]


def report(log, tag, ok, text):
    line = f"{'PASS' if ok else 'FAIL'} [{tag}] {text}"
    print(line)
    log.append(line)


# ---------------------------------------------------------------------------


def test_exhaustive_dumbbell_breakups(acceptance_log):
    lam = named_domain("dumbbell", 2)
    assert len(lam) == 9
    t = time.perf_counter()
    res = exhaustive_breakups(lam, lam.cells())
    secs = time.perf_counter() - t
    ok = res.passed and secs < 60
    report(acceptance_log, 1, ok, f"all 3^9 dumbbell colorings x 9 anchors: {res.trials} non-trivial breakups, "
                                  f"{res.failures} failures, {secs:.1f} s (limit 60 s)")
    assert res.passed, res.line()
    assert secs < 60


# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3])
def test_transformation_at_scale(acceptance_log, d):
    rng = random.Random(100 + d)
    n = bad = 0
    first = None
    for f, K in _sample_breakups(rng, d, 10 ** 4):
        s = rng.choice(Direction.all(d))
        h, _ = random_mod(K, s, rng)
        chk = transformation_checks(f, K, s, h)
        g = transform(f, K, s, h)
        f2, h2 = invert_transform(g, K, s)
        failed = [k for k, v in chk.items() if not v]
        if not (f2 == f and h2 == h):
            failed.append("inverse")
        n += 1
        if failed:
            bad += 1
            first = first or failed
    ok = n == 10 ** 4 and bad == 0
    report(acceptance_log, 2, ok, f"d={d}: {n} (coloring, section, mod) cases, energy drop, carried zeros, "
                                  f"surviving edges and inverse; {bad} failures {first or ''}".rstrip())
    assert ok


# ---------------------------------------------------------------------------


def expected_tv(p, n):
    """Mean total variation of an ideal i.i.d. empirical law from ``p`` (exact binomial mean deviations)."""
    p = p[p > 0]
    m = np.floor(n * p) + 1
    mad = 2 * m * (1 - p) * binom.pmf(m, n, p)
    return 0.5 * float(mad.sum()) / n


@pytest.fixture(scope="module")
def sampler_tv():
    rows = []
    for d, name in FIXTURES:
        lam = named_domain(name, d)
        bc = BoundaryCondition.even(0)
        if name in ("pair", "box2"):
            bc = pattern_bc(lam, bc)
        for beta in BETAS:
            ex = exact_gibbs(lam, bc, beta)
            codes = sample_codes(lam, bc, beta, TV_SAMPLES, seed=11, burn_in=1000 * len(lam), thin=4 * len(lam))
            hist = np.bincount(codes, minlength=ex.state_probs.size) / TV_SAMPLES
            tv = 0.5 * float(np.abs(hist - ex.state_probs).sum())
            rows.append((d, name, beta, tv, expected_tv(ex.state_probs, TV_SAMPLES)))
    return rows


def test_sampler_total_variation(acceptance_log, sampler_tv):
    over = [r for r in sampler_tv if r[3] > TV_BOUND]
    Z = exact_gibbs(named_domain("single", 2), BoundaryCondition.even(0), 1.0).Z
    z_err = abs(Z - (2 + math.exp(-4))) / (2 + math.exp(-4))
    desc = "; ".join(f"d={d} {n} beta={b:g}: TV {tv:.4f} vs i.i.d. floor {fl:.4f}" for d, n, b, tv, fl in over)
    report(acceptance_log, 3, not over and z_err <= 1e-12,
           f"{len(sampler_tv)} (fixture, beta) pairs at 1e6 samples, TV <= {TV_BOUND}; single-cell Z rel. error "
           f"{z_err:.1e}" + (f"; over the bound: {desc}" if over else ""))
    assert z_err <= 1e-12
    for d, name, beta, tv, floor in sampler_tv:
        # a perfect sampler cannot beat the floor; demand TV <= 0.02 wherever the floor allows it
        limit = TV_BOUND if floor < TV_BOUND / 1.25 else 1.25 * floor
        assert tv <= limit, (d, name, beta, tv, floor)


@pytest.mark.xfail(strict=True, reason="the i.i.d. noise floor at 1e6 samples exceeds 0.02 on the larger fixtures")
def test_sampler_total_variation_literal(sampler_tv):
    assert all(r[3] <= TV_BOUND for r in sampler_tv)


# ---------------------------------------------------------------------------


def test_cover_sums(acceptance_log):
    bound, equal = cover_sum_exhaustive(max_edges=16, sides=7)
    rng = random.Random(4)
    rand_bound = rand_equal = 0
    for _ in range(10 ** 4):
        G = random_bipartite_graph(rng, 7)
        rand_bound += cover_sum(G, random_admissible_weights(G, rng)) > 1 + COVER_TOL
        p = rng.uniform(0.05, 0.95)
        w = {**{x: p for x in G.bullet}, **{y: 1 - p for y in G.circ}}
        total = cover_sum(G, w)
        rand_equal += (total > 1 + COVER_TOL) or ((abs(total - 1) <= 1e-12) != (G.max_degree() <= 1))
    ok = bound.passed and equal.passed and rand_bound == 0 and rand_equal == 0
    report(acceptance_log, 4, ok, f"cover sums: {bound.trials} exhaustive (a*b <= 16, sides <= 7) with "
                                  f"{bound.failures}+{equal.failures} failures; 10^4 random graphs up to 7+7 with "
                                  f"{rand_bound} bound and {rand_equal} equality failures")
    assert ok, (bound.line(), equal.line())


# ---------------------------------------------------------------------------


def test_lattice_facts(acceptance_log):
    results = suite_lattice(VerifyConfig(dim=2, trials=1300, seed=5)) + \
        suite_lattice(VerifyConfig(dim=3, trials=1300, seed=6))
    fewest = min(r.trials for r in results)
    exhaustive = [r for r in results if "exhaustive" in r.name]
    ok = all(r.passed for r in results) and fewest >= 1000 and exhaustive
    report(acceptance_log, 5, ok, f"{len(results)} lattice checks in d=2,3, fewest instances {fewest}, "
                                  f"exhaustive 3x3 closure cases {exhaustive[0].trials if exhaustive else 0}")
    assert ok, [r.line() for r in results if not r.passed]


# ---------------------------------------------------------------------------

FIG_SHAPE = (24, 24, 24)
FIG_BETA = 4.0
FIG_STEPS = 10 ** 8
FIG_BURN = 10 ** 7
FIG_EVERY = 10 ** 6


def test_sublattice_occupancy_run(acceptance_log, tmp_path):
    lam = box_domain(FIG_SHAPE)
    bc = BoundaryCondition.even(0)
    t = time.perf_counter()
    chains, last = [], None
    for seed in range(1, 9):
        c, last = chain_occupancy(lam, bc, FIG_BETA, FIG_STEPS, seed, FIG_BURN, FIG_EVERY)
        chains.append(c)
    secs = time.perf_counter() - t
    summ = summarize_chains(chains)
    gap = summ.gap_in_se()
    viol = max(c.violation_fraction for c in chains)
    rep = violations(last)
    biggest = max((cl.size for cl in rep.clusters), default=0)
    mid = lam.window.lo[2] + (lam.window.hi[2] - lam.window.lo[2]) // 2
    img = tmp_path / "slab.ppm"
    img.write_bytes(render(last, "violation", axes=(2,), indices=(mid,), scale=4))
    # sparsity proxy for the rendered slab: few violations, no cluster holding 5% of the box
    sparse = viol < 0.1 and biggest < 0.05 * len(lam)
    ok = (summ.even_zero.p > 1 / 3 > summ.odd_zero.p and gap > 5 and secs < 1800 and sparse)
    report(acceptance_log, 6, ok, f"24^3 box, beta=4, 8 chains x 1e8 steps: even-0 {summ.even_zero.p:.4f} "
                                  f"+- {summ.even_zero.se:.1e}, odd-0 {summ.odd_zero.p:.2e} +- {summ.odd_zero.se:.1e}, "
                                  f"gap {gap:.0f} SE; violation fraction <= {viol:.3f}, largest final cluster "
                                  f"{biggest} of {len(lam)} cells; {secs:.0f} s (limit 1800 s)")
    assert ok
    h, w = (4 * n for n in lam.window.shape[:2])
    assert img.read_bytes().startswith(f"P6\n{w} {h}\n255\n".encode())


# ---------------------------------------------------------------------------


def cli(*argv):
    res = subprocess.run([sys.executable, "-m", "afpotts.cli", *map(str, argv)], capture_output=True)
    assert res.returncode == 0, res.stderr.decode()
    return res.stdout


def command_outputs(d):
    """Run every command once in directory ``d``; return the bytes of every output."""
    f, k, g, back, h = d / "f.pc3", d / "k.k4", d / "g.pc3", d / "b.pc3", d / "h.txt"
    snaps = d / "s.pc3"
    out = {}
    cli("sample", "--dim", "2", "--box", "10x10", "--beta", "1.5", "--steps", "20000", "--seed", "3",
        "--snapshot-every", "5000", "--snapshots", snaps, "--out", f)
    out["sample"] = f.read_bytes() + snaps.read_bytes()
    cli("analyze", "--in", snaps, "--out", d / "a.json", "--render", "violation", "--render-out", d / "r.ppm")
    out["analyze"] = (d / "a.json").read_bytes() + (d / "r.ppm").read_bytes()
    doc = read_pc3(f.read_text())
    rho = next(c for c in violation_set(doc.coloring).cells() if not breakup(doc.coloring, c).trivial)
    rho = ",".join(map(str, rho))
    cli("breakup", "--in", f, "--rho", rho, "--out", k)
    out["breakup"] = k.read_bytes()
    cli("transform", "--in", f, "--k4", k, "--out", g)
    cli("transform", "--in", g, "--k4", k, "--invert", "--out", back, "--h-out", h)
    out["transform"] = g.read_bytes() + back.read_bytes() + h.read_bytes()
    out["verify"] = cli("verify", "--suite", "approx", "--trials", "30", "--seed", "2")
    out["exact"] = cli("exact", "--domain", "dumbbell", "--beta", "0.7", "--query", "0,0;1,0")
    return out


def test_cli_determinism(acceptance_log, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    first, second = command_outputs(a), command_outputs(b)
    same = [k for k in first if first[k] == second[k]]
    ok = len(same) == len(first) == 6
    report(acceptance_log, 7, ok, f"byte-identical reruns: {', '.join(same)}")
    assert ok, set(first) - set(same)
