"""Verification suites shared by the command line and the test-suite.

Each suite returns a list of :class:`CheckResult`, one per property, with
the number of instances examined, the number of failures and the first
counterexample found.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from scipy import ndimage

from . import lattice as lat
from .approx import (BipartiteGraph, FourApprox, PAIRS, SemiOddPair, approximates, bullet_from_circ,
                     circ_from_bullet, compute_D, cover_sum, four_approx_from_candidates,
                     is_semi_odd_pair, is_semi_odd_triple, is_xi_even, is_xi_odd, minimal_cover_masks, recover_K,
                     semi_odd_triple_criterion, validate_four_approx)
from .breakup import (FourSection, breakup, breakup_around_set, breakup_section, in_family_V, kappa, validate_adapted,
                      validate_connected, validate_four_section, violation_set)
from .glauber import SamplerConfig, heat_bath_probabilities, run, sample_codes
from .lattice import Direction, Region, Window
from .model import (BoundaryCondition, Coloring, box_domain, exact_gibbs, hamiltonian, improper_edges,
                    local_field, named_domain)
from .transform import (admissible_mod, independence_number, invert_transform, max_independent_set,
                        transform, transformation_checks)


@dataclass
class CheckResult:
    name: str
    trials: int = 0
    failures: int = 0
    witness: Any = None

    def record(self, ok, witness=None) -> bool:
        self.trials += 1
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness if witness is not None else str(ok)
        return bool(ok)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name}: {self.trials} instances, {self.failures} failures"
        if self.witness is not None:
            out += f"; first counterexample: {self.witness}"
        return out


@dataclass(frozen=True)
class VerifyConfig:
    dim: int = 2
    max_cells: int = 9
    seed: int = 0
    trials: int = 200


def _results(*names: str) -> dict[str, CheckResult]:
    return {n: CheckResult(n) for n in names}


# ---------------------------------------------------------------------------
# generators


def _interior(window: Window, margin: int = 2) -> list:
    return [c for c in window.cells()
            if all(lo + margin <= x <= hi - margin for x, lo, hi in zip(c, window.lo, window.hi))]


def random_set(window: Window, rng: random.Random, p: float | None = None) -> Region:
    """Bernoulli subset of the window interior."""
    p = rng.uniform(0.1, 0.6) if p is None else p
    return Region.from_cells(window, [c for c in _interior(window) if rng.random() < p])


def random_odd_set(window: Window, rng: random.Random) -> Region:
    """Union of closed neighbourhoods of even cells and of odd singletons."""
    inner = _interior(window)
    evens = [c for c in inner if lat.is_even(c)]
    odds = [c for c in inner if not lat.is_even(c)]
    cells = set()
    for c in rng.sample(evens, rng.randint(0, min(4, len(evens)))):
        cells.update(lat.plus_cells(c))
    cells.update(rng.sample(odds, rng.randint(0 if cells else 1, min(4, len(odds)))))
    return Region.from_cells(window, cells)


def _lattice_window(d: int) -> Window:
    n = {1: 14, 2: 10, 3: 7}.get(d, 5)
    return Window((0,) * d, (n - 1,) * d)


def random_coloring(lam: Region, bc: BoundaryCondition, rng: random.Random,
                    beta: float | None = None) -> Coloring:
    """A Glauber sample at a random inverse temperature, so that defects of many sizes appear."""
    beta = rng.choice((0.3, 0.6, 1.0, 2.0)) if beta is None else beta
    cfg = SamplerConfig(beta, rng.randint(0, 40 * len(lam)), seed=rng.getrandbits(32), init="pure")
    return run(lam, bc, cfg).state.coloring


# ---------------------------------------------------------------------------
# small exhaustive grids as bitmasks


class BitGrid:
    """Subsets of an ``n x n`` block, centred in a window with a two-cell margin, as integers."""

    def __init__(self, n: int = 3):
        self.n = n
        self.window = Window((-2, -2), (n + 1, n + 1))
        self.cells = [(r, c) for r in range(n) for c in range(n)]
        self.index = {v: k for k, v in enumerate(self.cells)}
        self.full = (1 << len(self.cells)) - 1
        self.nbr = []
        for v in self.cells:
            m = 0
            for u in lat.neighbors(v):
                if u in self.index:
                    m |= 1 << self.index[u]
            self.nbr.append(m)
        self.rim = 0
        for k, (r, c) in enumerate(self.cells):
            if r in (0, n - 1) or c in (0, n - 1):
                self.rim |= 1 << k
        self.odd = sum(1 << k for k, v in enumerate(self.cells) if not lat.is_even(v))

    def region(self, mask: int) -> Region:
        return Region.from_cells(self.window, [v for k, v in enumerate(self.cells) if mask >> k & 1])

    def components(self, mask: int) -> list[int]:
        comps = []
        rest = mask
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                k = frontier.bit_length() - 1
                frontier &= ~(1 << k)
                new = self.nbr[k] & rest & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        return comps

    def co_connected(self, mask: int) -> bool:
        """The complement in the plane is connected (the outside counts as one piece)."""
        comp = self.full & ~mask
        return all(c & self.rim for c in self.components(comp))


# ---------------------------------------------------------------------------
# lattice


def suite_lattice(cfg: VerifyConfig) -> list[CheckResult]:
    rng = random.Random(cfg.seed)
    d = cfg.dim
    w = _lattice_window(d)
    res = _results("odd-set boundary identity", "isoperimetric inequality", "small and large set bounds",
                   "odd set with an even cell", "diameter bound", "partition boundary connected",
                   "closure properties (random)", "closure properties (exhaustive 3x3)")
    for _ in range(cfg.trials):
        U = random_odd_set(w, rng)
        b = len(lat.edge_boundary(U))
        e, o = U.count_parity()
        per = {len(lat.directional_boundary(U, s)) for s in Direction.all(d)}
        res["odd-set boundary identity"].record(per == {o - e} and b == 2 * d * (o - e), U.cells())
        if e:
            res["odd set with an even cell"].record(b >= d * d, U.cells())
        for comp in lat.connected_components(U):
            bc = len(lat.edge_boundary(comp))
            res["diameter bound"].record(bc >= (d - 1) ** 2 * lat.diameter(comp), comp.cells())
        A = random_set(w, rng) if rng.random() < 0.7 else Region.from_cells(
            w, rng.sample(_interior(w), rng.randint(1, d)))
        if not A.is_empty():
            n = len(A)
            b = len(lat.edge_boundary(A))
            res["isoperimetric inequality"].record(b ** d >= (2 * d) ** d * n ** (d - 1), A.cells())
            ok = (n > d or b >= d * n) and (n < d or b >= d * d)
            res["small and large set bounds"].record(ok, A.cells())
    if d >= 2:
        _partition_checks(res["partition boundary connected"], rng, d, cfg.trials)
        _closure_random(res["closure properties (random)"], rng, w, cfg.trials)
        if d == 2:
            _closure_exhaustive(res["closure properties (exhaustive 3x3)"])
    return [r for r in res.values() if r.trials]


def _boundary_union_connected(labels: np.ndarray, window: Window) -> bool:
    out = Region.empty(window)
    for l in np.unique(labels):
        out = out | lat.internal_boundary(Region(window, labels == l, bool(l == 0)))
    return lat.is_connected(out)


def _co_connected_partition(labels: np.ndarray, window: Window) -> bool:
    for l in np.unique(labels):
        part = Region(window, labels == l, bool(l == 0))
        if not lat.is_co_connected(part):
            return False
    return True


def _partition_checks(res: CheckResult, rng: random.Random, d: int, trials: int):
    n = 4 if d == 2 else 3
    w = Window((-1,) * d, (n,) * d)
    inner = tuple(slice(1, -1) for _ in range(d))
    found = 0
    attempts = 0
    while found < trials and attempts < 200 * trials:
        attempts += 1
        labels = np.zeros(w.shape, np.int8)
        labels[inner] = np.array([rng.randrange(3) for _ in range(n ** d)]).reshape((n,) * d)
        if not _co_connected_partition(labels, w):
            continue
        found += 1
        res.record(_boundary_union_connected(labels, w), labels.tolist())
    if d == 2:
        g = BitGrid(3)
        for code in range(3 ** 9):
            digits = [(code // 3 ** k) % 3 for k in range(9)]
            masks = [sum(1 << k for k in range(9) if digits[k] == l) for l in (1, 2)]
            if not (g.co_connected(masks[0]) and g.co_connected(masks[1])):
                continue
            # the 0-part is cofinite: co-connected when its finite complement is connected
            if len(g.components(masks[0] | masks[1])) > 1:
                continue
            labels = np.zeros(g.window.shape, np.int8)
            for k, v in enumerate(g.cells):
                labels[g.window.local(v)] = digits[k]
            res.record(_boundary_union_connected(labels, g.window), digits)


def _closure_props(A: Region, B: Region, Ap: Region) -> tuple[bool, str]:
    ib, eb = lat.internal_boundary, lat.external_boundary
    if not (ib(Ap).issubset(ib(A)) and eb(Ap).issubset(eb(A))
            and lat.edge_boundary(Ap).issubset(lat.edge_boundary(A))):
        return False, "(a)"
    if not ib(B - Ap).issubset(ib(B)):
        return False, "(b)"
    if lat.is_co_connected(B) and not lat.is_co_connected(B - Ap):
        return False, "(c)"
    if lat.is_connected(B) and not (B.issubset(Ap) or B.isdisjoint(Ap)):
        return False, "(d)"
    return True, ""


def _closure_random(res: CheckResult, rng: random.Random, w: Window, trials: int):
    inner = _interior(w)
    for _ in range(trials):
        A = random_set(w, rng)
        B = random_set(w, rng) - A
        if rng.random() < 0.5:
            B = B.complement() - A
        anchor = lat.INFINITY if rng.random() < 0.3 else rng.choice(inner)
        Ap = lat.co_connected_closure(A, anchor)
        ok, clause = _closure_props(A, B, Ap)
        res.record(ok, (clause, A.cells(), anchor))


def _closure_exhaustive(res: CheckResult):
    """Every subset A of a 3x3 block, every anchor off A, and every B disjoint from A (as bitmasks)."""
    g = BitGrid(3)
    ib, eb = lat.internal_boundary, lat.external_boundary
    for a in range(1 << 9):
        A = g.region(a)
        for anchor in list(g.cells) + [lat.INFINITY]:
            if anchor is not lat.INFINITY and anchor in A:
                continue
            Ap = lat.co_connected_closure(A, anchor)
            ok = ib(Ap).issubset(ib(A)) and eb(Ap).issubset(eb(A))
            ok = ok and lat.edge_boundary(Ap).issubset(lat.edge_boundary(A))
            if not res.record(ok, ("(a)", a, anchor)):
                continue
            ap = sum(1 << k for k, v in enumerate(g.cells) if v in Ap)
            _closure_bits(res, g, a, ap, anchor)


def _closure_bits(res: CheckResult, g: BitGrid, a: int, ap: int, anchor):
    free = g.full & ~a
    sub = free
    while True:
        b = sub
        rest = b & ~ap
        # (b): internal boundary of B - A' lies in the internal boundary of B
        ok_b = all(_is_boundary(g, b, k) for k in range(9) if rest >> k & 1 and _is_boundary(g, rest, k))
        # (c)
        ok_c = not g.co_connected(b) or g.co_connected(rest)
        # (d)
        ok_d = len(g.components(b)) != 1 or (b & ap) in (0, b)
        res.record(ok_b and ok_c and ok_d, (a, b, anchor))
        if sub == 0:
            break
        sub = (sub - 1) & free


def _is_boundary(g: BitGrid, mask: int, k: int) -> bool:
    """Cell ``k`` of ``mask`` has a neighbour outside ``mask`` (the rim sees the outside)."""
    if g.rim >> k & 1:
        return True
    return (g.nbr[k] & ~mask) != 0


# ---------------------------------------------------------------------------
# model


def suite_model(cfg: VerifyConfig) -> list[CheckResult]:
    rng = random.Random(cfg.seed)
    d = cfg.dim
    res = _results("single-cell partition function", "infinite temperature counts states",
                   "color swap symmetry", "energy equals improper edge count", "heat-bath conditional law",
                   "sampler matches exact marginals")
    single = named_domain("single", d)
    even0 = BoundaryCondition.even(0)
    for beta in (0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0):
        Z = exact_gibbs(single, even0, beta).Z
        want = 2 + math.exp(-2 * d * beta)
        res["single-cell partition function"].record(abs(Z - want) <= 1e-12 * want, (beta, Z, want))
    res["single-cell partition function"].record(exact_gibbs(single, even0, math.inf).Z == 2, "inf")
    for name in ("single", "pair", "plus"):
        lam = named_domain(name, d)
        if len(lam) > cfg.max_cells:
            continue
        bc = even0 if name != "pair" else BoundaryCondition.explicit(even0.values(lam.window))
        r = exact_gibbs(lam, bc, 0.0)
        res["infinite temperature counts states"].record(r.Z == 3 ** len(lam), (name, r.Z))
        tau = even0.values(lam.window)
        for beta in (0.5, 2.0):
            z1 = exact_gibbs(lam, BoundaryCondition.explicit(tau), beta).Z
            z2 = exact_gibbs(lam, BoundaryCondition.explicit((-tau) % 3), beta).Z
            res["color swap symmetry"].record(abs(z1 - z2) <= 1e-12 * z1, (name, beta, z1, z2))
    lam = box_domain((6, 5) if d == 2 else (4,) * d)
    for _ in range(cfg.trials):
        f = Coloring(lam, even0)
        f.colors[lam.mask] = [rng.randrange(3) for _ in range(len(lam))]
        naive = 0
        for v in lam.cells():
            for u in lat.neighbors(v):
                if f[u] == f[v] and (u not in lam or u > v):
                    naive += 1
        res["energy equals improper edge count"].record(hamiltonian(f) == naive, f.colors.tolist())
        v = rng.choice(lam.cells())
        counts = local_field(f, v)
        beta = rng.choice((0.0, 0.7, 3.0))
        p = heat_bath_probabilities(counts, beta)
        old = f[v]
        energies = []
        for a in range(3):
            f[v] = a
            energies.append(hamiltonian(f))
        f[v] = old
        w = np.exp(-beta * (np.array(energies) - min(energies)))
        res["heat-bath conditional law"].record(np.allclose(p, w / w.sum(), atol=1e-12), (v, counts, beta))
    for name in ("single", "plus"):
        lam = named_domain(name, d)
        for beta in (0.0, 1.0, math.inf):
            exact = exact_gibbs(lam, even0, beta)
            codes = sample_codes(lam, even0, beta, 20000, seed=cfg.seed)
            n = len(lam)
            digits = (codes[:, None] // 3 ** np.arange(n)) % 3
            emp = np.stack([(digits == a).mean(axis=0) for a in range(3)], axis=1)
            dev = float(np.abs(emp - exact.marginals).max())
            res["sampler matches exact marginals"].record(dev < 0.03, (name, beta, dev))
    return list(res.values())


# ---------------------------------------------------------------------------
# breakups


def all_colorings(lam: Region, bc: BoundaryCondition):
    """Every coloring of ``lam`` in the order of :meth:`Coloring.domain_codes`."""
    base = Coloring(lam, bc)
    idx = np.flatnonzero(lam.mask.ravel())
    n = len(idx)
    pow3 = 3 ** np.arange(n)
    for code in range(3 ** n):
        colors = base.colors.copy()
        colors.reshape(-1)[idx] = (code // pow3) % 3
        yield base.with_colors(colors)


def section_properties(K: FourSection, d: int) -> list[tuple[str, Any]]:
    """Failed properties that depend on the four-section alone."""
    bad = []
    for name, v in (("four-section", validate_four_section(K)), ("connected", validate_connected(K))):
        if not v:
            bad.append((name, str(v)))
    L, M = K.L, K.M
    if not (L + M >= d * d or M >= 2 * d):
        bad.append(("L + M >= d^2 or M >= 2d", (L, M)))
    for s in Direction.all(d):
        D = len(K.down_boundary(s))
        if 2 * d * D < L - 2 * d * M:
            bad.append(("downward boundary bound", (str(s), D, L, M)))
    return bad


def coloring_properties(f: Coloring, K: FourSection, adapted=None) -> list[tuple[str, Any]]:
    """Failed properties linking the four-section to the coloring."""
    bad = []
    adapted = validate_adapted(K, f) if adapted is None else adapted
    if not adapted:
        bad.append(("adapted", str(adapted)))
    if not K.k123.issubset(f.lam):
        bad.append(("non-zero parts inside the domain", (K.k123 - f.lam).cells()))
    imp = improper_edges(f)
    st = K.stats
    if not st.regular.isdisjoint(imp):
        bad.append(("regular boundary is proper", (st.regular & imp).edges()[:1]))
    if not st.singular.issubset(imp):
        bad.append(("singular boundary is improper", (st.singular - imp).edges()[:1]))
    return bad


def breakup_properties(f: Coloring, K: FourSection) -> list[tuple[str, Any]]:
    """Failed properties of a non-trivial breakup, as ``(name, witness)`` pairs."""
    return section_properties(K, f.dim) + coloring_properties(f, K)


def anchor_groups(f: Coloring, rhos) -> list[list]:
    """Anchors sharing one breakup.

    The 0-phase closure depends on the anchor only through the component of
    non-zero kappa labels containing it; anchors with label 0 give trivial
    breakups and are dropped.
    """
    kap = kappa(f)
    kap[~f.lam.mask] = 0
    labels, _ = ndimage.label(kap != 0, structure=ndimage.generate_binary_structure(f.dim, 1))
    groups: dict[int, list] = {}
    for rho in rhos:
        k = int(labels[f.window.local(rho)])
        if k:
            groups.setdefault(k, []).append(tuple(rho))
    return [groups[k] for k in sorted(groups)]


def exhaustive_breakups(lam: Region, rhos, on_case: Callable | None = None) -> CheckResult:
    """Every coloring of ``lam`` under even-0 values, breakups around each ``rho``.

    One breakup is computed per group of :func:`anchor_groups` and checked
    for every anchor of the group. Checks depending only on the four-section
    run once per distinct section.
    """
    rhos = [tuple(r) for r in rhos]
    res = CheckResult(f"breakups of all colorings ({len(lam)} cells, {len(rhos)} anchors)")
    seen: dict[FourSection, list] = {}
    for f in all_colorings(lam, BoundaryCondition.even(0)):
        for group in anchor_groups(f, rhos):
            K = breakup_section(f, group[0])
            if K.is_trivial:
                continue
            if K not in seen:
                seen[K] = section_properties(K, f.dim)
            bad = seen[K] + coloring_properties(f, K)
            for rho in group:
                miss = [] if K.label(rho) else [("rho in K123", rho)]
                res.record(not (bad or miss), (f.domain_codes(), rho, bad + miss))
            if on_case is not None:
                on_case(f, K)
    return res


def _sample_breakups(rng: random.Random, d: int, count: int, max_tries: int | None = None):
    """Glauber samples with non-trivial breakups around random violations."""
    shape = (8, 8) if d == 2 else (5,) * d
    lam = box_domain(shape)
    bc = BoundaryCondition.even(0)
    made = 0
    tries = 0
    max_tries = max_tries or 50 * count
    while made < count and tries < max_tries:
        tries += 1
        f = random_coloring(lam, bc, rng)
        T = violation_set(f).cells()
        if not T:
            continue
        rep = breakup(f, rng.choice(T))
        if rep.trivial:
            continue
        made += 1
        yield f, rep.section


def suite_breakup(cfg: VerifyConfig) -> list[CheckResult]:
    rng = random.Random(cfg.seed)
    d = cfg.dim
    out = []
    lam = named_domain("dumbbell" if cfg.max_cells >= 9 else "plus", 2)
    rhos = lam.cells()
    out.append(exhaustive_breakups(lam, rhos))
    sampled = CheckResult(f"sampled breakups in d={d}")
    around = CheckResult(f"breakups around violation sets in d={d}")
    for f, K in _sample_breakups(rng, d, cfg.trials):
        sampled.record(not (bad := breakup_properties(f, K)), bad)
        T = violation_set(f).cells()
        V = Region.from_cells(f.window, rng.sample(T, rng.randint(1, min(3, len(T)))))
        KV = breakup_around_set(f, V).section
        ok = (validate_four_section(KV) and validate_adapted(KV, f) and in_family_V(KV, V)
              and V.issubset(KV.k123))
        around.record(ok, (f.colors.tolist(), V.cells()))
    out += [sampled, around]
    return out


# ---------------------------------------------------------------------------
# transformation


def random_mod(K: FourSection, s: Direction, rng: random.Random):
    B = max_independent_set(K, s)
    return admissible_mod(K, s, B, [rng.randint(0, 1) for _ in range(len(B))]), B


def suite_transform(cfg: VerifyConfig) -> list[CheckResult]:
    rng = random.Random(cfg.seed)
    d = cfg.dim
    res = _results("energy drops by M", "cells under a 2 carried 0", "improper edges inside blocks survive",
                   "stage bookkeeping", "inverse round-trip", "independent set is maximum",
                   "distinct inputs give distinct images")
    for f, K in _sample_breakups(rng, d, cfg.trials):
        s = rng.choice(Direction.all(d))
        h, B = random_mod(K, s, rng)
        chk = transformation_checks(f, K, s, h)
        res["energy drops by M"].record(chk["energy"], chk["energy"].witness)
        res["cells under a 2 carried 0"].record(chk["twos"], chk["twos"].witness)
        res["improper edges inside blocks survive"].record(chk["kept03"] and chk["kept12"],
                                                           (str(chk["kept03"]), str(chk["kept12"])))
        stages = [chk[f"stage{k}"] for k in range(4)]
        res["stage bookkeeping"].record(all(stages), [str(v) for v in stages])
        g = transform(f, K, s, h)
        f2, h2 = invert_transform(g, K, s)
        res["inverse round-trip"].record(f2 == f and h2 == h, f.colors.tolist())
        D = K.down_boundary(s)
        indep = all(u not in B for v in B.cells() for u in lat.neighbors(v))
        ok = indep and B.issubset(D) and len(B) == independence_number(D.cells()) and 2 * len(B) >= len(D)
        res["independent set is maximum"].record(ok, (D.cells(), B.cells()))
    lam = named_domain("plus", 2)
    for f in all_colorings(lam, BoundaryCondition.even(0)):
        for rho in lam.cells():
            rep = breakup(f, rho)
            if rep.trivial:
                continue
            K = rep.section
            for s in Direction.all(2):
                images = set()
                B = max_independent_set(K, s)
                nb = len(B)
                if nb > 6:
                    continue
                for bits in itertools.product((0, 1), repeat=nb):
                    g = transform(f, K, s, admissible_mod(K, s, B, bits))
                    images.add(g.colors.tobytes())
                res["distinct inputs give distinct images"].record(len(images) == 2 ** nb, (f.domain_codes(), rho))
    return list(res.values())


# ---------------------------------------------------------------------------
# approximations and covers


def brute_minimal_covers(G: BipartiteGraph) -> list[tuple[int, int]]:
    """Inclusion-minimal vertex covers by checking every subset."""
    nb, nc = len(G.bullet), len(G.circ)
    bi = {x: k for k, x in enumerate(G.bullet)}
    ci = {x: nb + k for k, x in enumerate(G.circ)}
    edges = [(1 << bi[u]) | (1 << ci[v]) for u, v in G.edges]
    covers = [m for m in range(1 << (nb + nc)) if all(m & e for e in edges)]
    cover_set = set(covers)
    minimal = []
    for m in covers:
        if all((m & ~(1 << k)) not in cover_set for k in range(nb + nc) if m >> k & 1):
            minimal.append((m & ((1 << nb) - 1), m >> nb))
    return sorted(minimal)


def all_bipartite_graphs(a: int, b: int):
    """Every labelled bipartite graph with parts of sizes ``a`` and ``b``."""
    bullet = tuple(f"b{k}" for k in range(a))
    circ = tuple(f"c{k}" for k in range(b))
    pairs = [(u, v) for u in bullet for v in circ]
    for m in range(1 << len(pairs)):
        yield BipartiteGraph(bullet, circ, tuple(p for k, p in enumerate(pairs) if m >> k & 1))


def random_bipartite_graph(rng: random.Random, max_side: int = 7) -> BipartiteGraph:
    a, b = rng.randint(0, max_side), rng.randint(0, max_side)
    q = rng.random()
    bullet = tuple(f"b{k}" for k in range(a))
    circ = tuple(f"c{k}" for k in range(b))
    return BipartiteGraph(bullet, circ, tuple((u, v) for u in bullet for v in circ if rng.random() < q))


def random_admissible_weights(G: BipartiteGraph, rng: random.Random) -> dict:
    """Per-vertex weights with ``p_u + p_v <= 1`` on every edge."""
    p = {}
    for x in G.bullet:
        p[x] = rng.random()
    for y in G.circ:
        cap = min([1 - p[u] for u, v in G.edges if v == y], default=1.0)
        p[y] = rng.uniform(0, cap)
    return p


COVER_TOL = 2.0 ** -40


def cover_sum_exhaustive(max_edges: int = 16, ps=(0.1, 0.3, 0.5, 0.7, 0.9),
                           sides: int = 7) -> tuple[CheckResult, CheckResult]:
    """All graphs with ``a * b <= max_edges`` and ``a, b <= sides``."""
    bound = CheckResult(f"minimal cover sum at most 1 (all graphs, a*b <= {max_edges})")
    equal = CheckResult("equality exactly when every degree is at most 1")
    for a in range(sides + 1):
        for b in range(sides + 1):
            if a * b > max_edges:
                continue
            for G in all_bipartite_graphs(a, b):
                covers = minimal_cover_masks(G)
                low = G.max_degree() <= 1
                for p in ps:
                    wb, wc = p, 1 - p
                    total = math.fsum(wb ** bin(x).count("1") * wc ** bin(y).count("1") for x, y in covers)
                    bound.record(total <= 1 + COVER_TOL, (G.edges, p, total))
                    equal.record((abs(total - 1) <= 1e-12) == low, (G.edges, p, total))
    return bound, equal


def suite_approx(cfg: VerifyConfig) -> list[CheckResult]:
    rng = random.Random(cfg.seed)
    out = list(cover_sum_exhaustive(max_edges=12 if cfg.trials < 1000 else 16))
    rand = CheckResult("minimal cover sum at most 1 (random weights)")
    charac = CheckResult("minimal cover characterization matches inclusion-minimality")
    for _ in range(cfg.trials):
        G = random_bipartite_graph(rng)
        rand.record(cover_sum(G, random_admissible_weights(G, rng)) <= 1 + COVER_TOL, G.edges)
        H = random_bipartite_graph(rng, 4)
        charac.record(minimal_cover_masks(H) == brute_minimal_covers(H), H.edges)
    out += [rand, charac]
    out += list(approximation_fixture_checks())
    lem = CheckResult(f"K13, K23 xi-odd and K10, K20 xi-even in d={cfg.dim}")
    exact = CheckResult("exact approximation approximates")
    triple = CheckResult("semi-odd triple definition implies the criterion")
    triple_eq = CheckResult("criterion equals definition over semi-odd pairs")
    for f, K in _sample_breakups(rng, cfg.dim, max(cfg.trials // 4, 1)):
        K = K.grow(2)
        xi = lat.edges_between(K.part(1), K.part(2))
        ok = all((is_xi_odd(K.part(1, 3), xi), is_xi_odd(K.part(2, 3), xi),
                  is_xi_even(K.part(1, 0), xi), is_xi_even(K.part(2, 0), xi)))
        lem.record(ok, f.colors.tolist())
        A = FourApprox.exact(K)
        exact.record(validate_four_approx(A) and approximates(A, K), f.colors.tolist())
    g = BitGrid(3)
    for _ in range(cfg.trials * 5):
        codes = [rng.randrange(4) for _ in g.cells]
        U = g.region(sum(1 << k for k, c in enumerate(codes) if c in (1, 2)))
        Ub = g.region(sum(1 << k for k, c in enumerate(codes) if c == 2))
        Uc = g.region(sum(1 << k for k, c in enumerate(codes) if c == 3))
        by_def = bool(is_semi_odd_triple(Ub, U, Uc))
        by_crit = bool(semi_odd_triple_criterion(Ub, U, Uc))
        triple.record(by_crit or not by_def, codes)
        if is_semi_odd_pair(SemiOddPair(Ub, Uc)):
            triple_eq.record(by_crit == by_def, codes)
    out += [lem, exact, triple, triple_eq]
    return out


def pair_fixture():
    """Two undecided adjacent cells surrounded by known cells, with the approximation and window."""
    w = Window((-5, -5), (6, 6))
    X1 = set(lat.plus_cells((-1, 1))) | set(lat.plus_cells((-1, -1)))
    u, v = (0, 0), (1, 0)
    A = FourApprox.from_cells(w, {1: X1}, bullet={(1, 0): [v]}, circ={(1, 0): [u]})
    cands = []
    for lu, lv in itertools.product((0, 1), repeat=2):
        parts = {1: set(X1) | {c for c, l in ((u, lu), (v, lv)) if l}}
        cands.append(FourSection.from_parts(w, parts))
    return A, cands


def triple_fixture():
    """A shared undecided cell between two circ cells leaning towards K1 and K2."""
    w = Window((-5, -5), (8, 6))
    X1 = set(lat.plus_cells((-1, 1))) | set(lat.plus_cells((-1, -1)))
    X2 = set(lat.plus_cells((3, 1))) | set(lat.plus_cells((3, -1)))
    u, v, x = (0, 0), (1, 0), (2, 0)
    A = FourApprox.from_cells(w, {1: X1, 2: X2}, bullet={(1, 0): [v], (2, 0): [v]},
                              circ={(1, 0): [u], (2, 0): [x]})
    cands = []
    for lu, lv, lx in itertools.product((1, 0), (1, 2, 0), (2, 0)):
        parts = {1: set(X1), 2: set(X2)}
        for c, l in ((u, lu), (v, lv), (x, lx)):
            if l:
                parts[l].add(c)
        cands.append(FourSection.from_parts(w, parts))
    return A, cands


def admissible(A: FourApprox, candidates) -> list[FourSection]:
    return [K for K in candidates if validate_four_section(K) and approximates(A, K)]


def approximation_fixture_checks():
    for name, (A, cands) in (("pair", pair_fixture()), ("triple", triple_fixture())):
        res = CheckResult(f"{name} scenario: recovery from D-sets")
        res.record(validate_four_approx(A), "approximation invalid")
        good = admissible(A, cands)
        res.record(len(good) == (2 if name == "pair" else 3), len(good))
        seen_b, seen_c = set(), set()
        for K in good:
            D = compute_D(A, K)
            res.record(recover_K(A, D.bullet, D.circ) == K, "recover")
            res.record(circ_from_bullet(A, D.bullet) == D.circ, "circ from bullet")
            res.record(bullet_from_circ(A, D.circ) == D.bullet, "bullet from circ")
            seen_b.add(tuple(D.bullet[k] for k in PAIRS))
            seen_c.add(tuple(D.circ[k] for k in PAIRS))
        res.record(len(seen_b) == len(good) and len(seen_c) == len(good), "injective")
        B = four_approx_from_candidates(good)
        same = all(B.known[l] == A.known[l] for l in range(4)) and all(
            B.bullet[k] == A.bullet[k] and B.circ[k] == A.circ[k] for k in PAIRS)
        res.record(same, "approximation from candidates")
        yield res


SUITES = {
    "lattice": suite_lattice,
    "model": suite_model,
    "breakup": suite_breakup,
    "transform": suite_transform,
    "approx": suite_approx,
}


def run_suite(name: str, cfg: VerifyConfig) -> list[CheckResult]:
    if name == "all":
        return [r for n in SUITES for r in SUITES[n](cfg)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose {', '.join(SUITES)} or all")
    return SUITES[name](cfg)
