"""Pattern violations, their clusters, and Monte Carlo estimators.

All estimators report binomial or sample standard errors next to their
point values. Accumulators merge associatively so that per-chain results
can be combined in a fixed order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import lattice as lat
from .breakup import violation_set
from .lattice import Region
from .model import Coloring, improper_edges

MIN_SAMPLES = 100


# ---------------------------------------------------------------------------
# violations and clusters


@dataclass(frozen=True)
class Cluster:
    cells: Region
    size: int
    diameter: int
    truncated: bool


@dataclass(frozen=True)
class ViolationReport:
    """Violations ``T``, their outer boundary and the clusters of their union.

    ``index`` holds, for every window cell, the position of its cluster in
    ``clusters`` or -1. A cluster is ``truncated`` when it leaves the domain.
    """

    T: Region
    outer: Region
    clusters: list
    index: np.ndarray

    @property
    def closure(self) -> Region:
        return self.T | self.outer

    def cluster_of(self, v) -> Cluster | None:
        w = self.T.window
        if not w.contains(v):
            return None
        k = int(self.index[w.local(v)])
        return self.clusters[k] if k >= 0 else None


def violations(f: Coloring) -> ViolationReport:
    """Cells off the even-0 pattern and the connected components of ``T`` plus its outer boundary."""
    T = violation_set(f)
    outer = lat.external_boundary(T)
    comps = lat.connected_components(T | outer)
    index = np.full(f.window.shape, -1, np.int32)
    clusters = []
    for k, c in enumerate(comps):
        index[c.mask] = k
        clusters.append(Cluster(c, len(c), lat.diameter(c), not c.issubset(f.lam)))
    return ViolationReport(T, outer, clusters, index)


def violation_cluster(f: Coloring, v) -> Region:
    """Component of ``v`` in ``T`` plus its outer boundary; empty if ``v`` is in neither."""
    rep = violations(f)
    c = rep.cluster_of(v)
    return c.cells if c is not None else Region.empty(f.window)


def singularities(f: Coloring) -> Region:
    """Endpoints of improper edges."""
    return improper_edges(f).endpoints()


def joint_violation_component(f: Coloring, g: Coloring, u) -> Region:
    """Component of ``u`` in the union of the closed neighbourhoods of the even violations of both colorings."""
    if f.window != g.window:
        raise ValueError("colorings must share a window")
    even = lat.parity_region(f.window, lat.EVEN)
    U = lat.plus(violation_set(f) & even) | lat.plus(violation_set(g) & even)
    if u not in U:
        return Region.empty(f.window)
    return lat.component_of(U, u)


# ---------------------------------------------------------------------------
# run statistics


def default_probes(lam: Region) -> tuple:
    """An even cell near the centre of the domain and an odd neighbour of it inside the domain."""
    cells = lam.cells()
    pts = np.array(cells)
    centre = pts.mean(axis=0)
    order = sorted(cells, key=lambda c: (float(np.sum((np.array(c) - centre) ** 2)), c))
    for c in order:
        if lat.is_even(c):
            for n in lat.neighbors(c):
                if n in lam:
                    return c, n
    raise ValueError("domain has no adjacent even/odd pair")


@dataclass
class RunStats:
    """Running counts over samples.

    ``occupancy[p, a]`` counts domain cells of parity ``p`` (0 even, 1 odd)
    with color ``a`` summed over samples. Events at the probes ``u`` (even)
    and ``v`` (odd): ``u_nonzero`` counts ``f(u) != 0``, ``v_zero`` counts
    ``f(v) = 0`` and ``uv_equal`` counts ``f(u) = f(v)``.
    """

    u: tuple
    v: tuple
    samples: int = 0
    occupancy: np.ndarray = field(default_factory=lambda: np.zeros((2, 3), np.int64))
    events: dict = field(default_factory=lambda: {"u_nonzero": 0, "v_zero": 0, "uv_equal": 0})
    cluster_sizes: Counter = field(default_factory=Counter)
    cluster_diameters: Counter = field(default_factory=Counter)
    truncated_clusters: int = 0

    def merge(self, other: "RunStats") -> "RunStats":
        if (self.u, self.v) != (other.u, other.v):
            raise ValueError("probe mismatch")
        out = RunStats(self.u, self.v, self.samples + other.samples, self.occupancy + other.occupancy,
                       {k: self.events[k] + other.events[k] for k in self.events},
                       self.cluster_sizes + other.cluster_sizes,
                       self.cluster_diameters + other.cluster_diameters,
                       self.truncated_clusters + other.truncated_clusters)
        return out

    def to_dict(self) -> dict:
        return {
            "probes": {"u": list(self.u), "v": list(self.v)},
            "samples": self.samples,
            "occupancy_counts": self.occupancy.tolist(),
            "events": dict(self.events),
            "cluster_sizes": {str(k): n for k, n in sorted(self.cluster_sizes.items())},
            "cluster_diameters": {str(k): n for k, n in sorted(self.cluster_diameters.items())},
            "truncated_clusters": self.truncated_clusters,
        }


def new_stats(lam: Region, probes: tuple | None = None) -> RunStats:
    u, v = probes if probes is not None else default_probes(lam)
    u, v = tuple(u), tuple(v)
    if u not in lam or v not in lam:
        raise ValueError("probes must be free cells")
    return RunStats(u, v)


def accumulate(stats: RunStats, f: Coloring, clusters: bool = True) -> RunStats:
    """Add one sample in place and return ``stats``."""
    odd = f.window.odd
    lam = f.lam.mask
    c = f.colors
    for p, par in ((0, ~odd), (1, odd)):
        sel = c[lam & par]
        stats.occupancy[p] += np.bincount(sel, minlength=3)[:3]
    fu, fv = f[stats.u], f[stats.v]
    stats.events["u_nonzero"] += int(fu != 0)
    stats.events["v_zero"] += int(fv == 0)
    stats.events["uv_equal"] += int(fu == fv)
    if clusters:
        for cl in violations(f).clusters:
            if cl.truncated:
                stats.truncated_clusters += 1
                continue
            stats.cluster_sizes[cl.size] += 1
            stats.cluster_diameters[cl.diameter] += 1
    stats.samples += 1
    return stats


def occupancy_bias(stats: RunStats) -> dict:
    """Fraction of even and of odd domain cells carrying each color."""
    out = {}
    for p, name in ((0, "even"), (1, "odd")):
        row = stats.occupancy[p]
        total = int(row.sum())
        out[name] = [float(x) / total if total else float("nan") for x in row]
    return out


@dataclass(frozen=True)
class Estimate:
    p: float
    se: float
    n: int

    def to_dict(self) -> dict:
        return {"p": self.p, "se": self.se, "n": self.n}


def binomial_estimate(k: int, n: int) -> Estimate:
    if n == 0:
        return Estimate(float("nan"), float("nan"), 0)
    p = k / n
    return Estimate(p, math.sqrt(p * (1 - p) / n), n)


def estimate_events(stats: RunStats) -> dict:
    return {k: binomial_estimate(c, stats.samples) for k, c in stats.events.items()}


# ---------------------------------------------------------------------------
# covariance between two windows


@dataclass(frozen=True)
class CovarianceRow:
    distance: int
    pairs: int
    cov: float
    se: float
    samples: int
    insufficient: bool


def _stack(snapshots) -> np.ndarray:
    if isinstance(snapshots, np.ndarray):
        return snapshots
    return np.stack([s.colors for s in snapshots])


def two_window_covariance(snapshots, window: lat.Window, U: Iterable, V: Iterable,
                          a: int = 0, b: int = 0) -> list[CovarianceRow]:
    """Empirical ``Cov(1{f(u)=a}, 1{f(v)=b})`` for ``u`` in ``U`` and ``v`` in ``V``, grouped by L1 distance.

    ``snapshots`` is a sequence of colorings or an array of shape
    ``(n, *window.shape)``. For each distance the per-sample statistic is
    the mean over pairs of the product of centred indicators; the reported
    covariance is its mean (with the ``n / (n - 1)`` correction) and the
    standard error is its sample deviation over ``sqrt(n)``. Fewer than
    :data:`MIN_SAMPLES` samples set ``insufficient``.
    """
    U = [tuple(x) for x in U]
    V = [tuple(x) for x in V]
    if set(U) & set(V):
        raise ValueError("U and V must be disjoint")
    arr = _stack(snapshots)
    n = arr.shape[0]
    if n < 2:
        raise ValueError("need at least two samples")
    X = np.stack([arr[(slice(None),) + window.local(u)] == a for u in U], axis=1).astype(float)
    Y = np.stack([arr[(slice(None),) + window.local(v)] == b for v in V], axis=1).astype(float)
    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    groups: dict[int, list[tuple[int, int]]] = {}
    for iu, u in enumerate(U):
        for iv, v in enumerate(V):
            groups.setdefault(lat.l1(u, v), []).append((iu, iv))
    rows = []
    for r in sorted(groups):
        idx = groups[r]
        per = np.mean([Xc[:, iu] * Yc[:, iv] for iu, iv in idx], axis=0)
        cov = float(per.mean()) * n / (n - 1)
        se = float(per.std(ddof=1) / math.sqrt(n))
        rows.append(CovarianceRow(r, len(idx), cov, se, n, n < MIN_SAMPLES))
    return rows


# ---------------------------------------------------------------------------
# sublattice occupancy across independent chains


@dataclass(frozen=True)
class ChainOccupancy:
    seed: int
    snapshots: int
    even_zero: float
    odd_zero: float
    violation_fraction: float


@dataclass(frozen=True)
class OccupancySummary:
    """Across-chain means and standard errors of the zero fractions per sublattice."""

    chains: list
    even_zero: Estimate
    odd_zero: Estimate

    def gap_in_se(self) -> float:
        """Smaller of the distances of the two means from 1/3, in units of their standard errors."""
        a = (self.even_zero.p - 1 / 3) / self.even_zero.se if self.even_zero.se > 0 else math.inf
        b = (1 / 3 - self.odd_zero.p) / self.odd_zero.se if self.odd_zero.se > 0 else math.inf
        return min(a, b)

    def to_dict(self) -> dict:
        return {
            "chains": [c.__dict__ for c in self.chains],
            "even_zero": self.even_zero.to_dict(),
            "odd_zero": self.odd_zero.to_dict(),
            "gap_in_se": self.gap_in_se(),
        }


def chain_occupancy(lam: Region, bc, beta: float, steps: int, seed: int, burn_in: int,
                    snapshot_every: int) -> tuple[ChainOccupancy, Coloring]:
    """Zero fractions on each sublattice averaged over snapshots taken after ``burn_in`` steps."""
    from .glauber import SamplerConfig, run

    if snapshot_every <= 0 or burn_in % snapshot_every:
        raise ValueError("burn_in must be a multiple of a positive snapshot_every")
    stats = new_stats(lam)
    viol = [0]

    def take(step, f):
        if step > burn_in:
            accumulate(stats, f, clusters=False)
            viol[0] += len(violation_set(f))

    res = run(lam, bc, SamplerConfig(beta, steps, seed, "pure", snapshot_every), on_snapshot=take)
    frac = occupancy_bias(stats)
    n = stats.samples
    vf = viol[0] / (n * len(lam)) if n else float("nan")
    return ChainOccupancy(seed, n, frac["even"][0], frac["odd"][0], vf), res.state.coloring


def summarize_chains(chains: Sequence[ChainOccupancy]) -> OccupancySummary:
    """Means over chains with the standard error of the mean (chains are independent)."""
    def est(xs):
        xs = np.array(xs, float)
        n = xs.size
        se = float(xs.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
        return Estimate(float(xs.mean()), se, n)

    chains = sorted(chains, key=lambda c: c.seed)
    return OccupancySummary(list(chains), est([c.even_zero for c in chains]), est([c.odd_zero for c in chains]))
