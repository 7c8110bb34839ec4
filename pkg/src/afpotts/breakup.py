"""The kappa labeling, breakups and four-section validators.

A four-section is stored as one label array over the coloring's window with
label 0 implied everywhere outside it. All construction steps run inside the
window. This is exact under even-0 boundary values: every cell of the halo is
even with color 0, hence kappa-label 0, so the non-zero-label component of a
free cell never leaves the domain, and every cell outside the domain ends up in
the 0-phase whatever its label. Labels of window cells outside the domain are
therefore set to 0 before the closures are taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import lattice as lat
from .errors import BoundaryConditionError, Verdict, fail, PASS
from .lattice import Direction, EdgeSet, Region, Window
from .model import Coloring


def kappa(f: Coloring) -> np.ndarray:
    """Phase label of every window cell.

    0 for even cells colored 0, 3 for odd cells colored 0, ``f`` for odd cells
    with a non-zero color and ``3 - f`` for even ones.
    """
    odd = f.window.odd
    c = f.colors.astype(np.int8)
    out = np.where(odd, c, (3 - c) % 3).astype(np.int8)
    out[(c == 0) & odd] = 3
    return out


def violation_set(f: Coloring) -> Region:
    """Free cells that break the even-0 pattern."""
    odd = f.window.odd
    bad = np.where(odd, f.colors == 0, f.colors != 0)
    return Region(f.window, bad & f.lam.mask)


def _require_even0(f: Coloring):
    halo = lat.external_boundary(f.lam)
    if np.any(halo.mask & (f.window.odd | (f.colors != 0))):
        raise BoundaryConditionError("breakups need even-0 boundary values on the halo")


# ---------------------------------------------------------------------------
# four-sections


@dataclass(frozen=True)
class BoundaryStats:
    L: int
    M: int
    regular: EdgeSet
    singular: EdgeSet
    singularities: Region
    revealed: Region


class FourSection:
    """Labels 0..3 over a window, label 0 outside it.

    A label of -1 marks a cell claimed by no part; such arrays are accepted
    so that the partition clause can be reported by the validator.
    """


    def __init__(self, window: Window, labels):
        labels = np.array(labels, dtype=np.int8)
        if labels.shape != window.shape:
            raise ValueError("label array does not match the window")
        if not lat.border_clean(labels, 0):
            raise lat.WindowTooSmall("non-zero labels must stay off the window border")
        labels.setflags(write=False)
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def trivial(cls, window: Window) -> "FourSection":
        return cls(window, np.zeros(window.shape, np.int8))

    @classmethod
    def from_parts(cls, window: Window, parts: dict[int, Iterable]) -> "FourSection":
        """Build from explicit cell lists for labels 1, 2, 3; the rest is 0."""
        labels = np.zeros(window.shape, np.int8)
        for label, cells in parts.items():
            for c in cells:
                labels[window.local(c)] = label
        return cls(window, labels)

    def grow(self, k: int = 1) -> "FourSection":
        """The same four-section on a window enlarged by ``k`` on every side."""
        w = self.window.grow(k)
        labels = np.zeros(w.shape, np.int8)
        labels[tuple(slice(k, -k) for _ in range(w.dim))] = self.labels
        return FourSection(w, labels)

    def __eq__(self, other):
        if not isinstance(other, FourSection):
            return NotImplemented
        return self.window == other.window and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash((self.window, self.labels.tobytes()))

    def __repr__(self):
        sizes = [int(np.count_nonzero(self.labels == l)) for l in (1, 2, 3)]
        return f"FourSection(|K1|={sizes[0]}, |K2|={sizes[1]}, |K3|={sizes[2]})"

    def label(self, v) -> int:
        if self.window.contains(v):
            return int(self.labels[self.window.local(v)])
        return 0

    def part(self, *ls: int) -> Region:
        """Union of the parts with the given labels."""
        mask = self.labels == ls[0]
        for l in ls[1:]:
            mask = mask | (self.labels == l)
        return Region(self.window, mask, 0 in ls)

    @property
    def k0(self) -> Region:
        return self.part(0)

    @property
    def k12(self) -> Region:
        return self.part(1, 2)

    @property
    def k123(self) -> Region:
        return self.part(1, 2, 3)

    @property
    def k03(self) -> Region:
        return self.part(0, 3)

    @property
    def is_trivial(self) -> bool:
        return int(np.count_nonzero(self.labels != 0)) <= 1 and not np.any(self.labels == 3)

    def boundary(self) -> EdgeSet:
        """All edges joining different parts."""
        arrays = []
        for a in range(self.window.dim):
            lo, hi = lat._lo_hi(self.labels, a, 0)
            arrays.append(lo != hi)
        return EdgeSet(self.window, arrays)

    @cached_property
    def stats(self) -> BoundaryStats:
        regular = lat.edge_boundary(self.k12)
        singular = self.boundary() - regular
        rev = regular.incidence() >= self.window.dim
        return BoundaryStats(len(regular), len(singular), regular, singular,
                             singular.endpoints(), Region(self.window, rev))

    @property
    def L(self) -> int:
        return self.stats.L

    @property
    def M(self) -> int:
        return self.stats.M

    def down_boundary(self, direction: Direction) -> Region:
        """Cells ``v`` of K12 whose upward neighbour ``v - s`` is outside K12."""
        return lat.directional_boundary(self.k12, direction)

    @cached_property
    def internal_boundaries(self) -> tuple:
        """Internal boundary masks of K0, K1, K2, K3."""
        return tuple(lat.internal_boundary(self.part(l)).mask for l in range(4))

    def internal_boundary_union(self) -> Region:
        return Region(self.window, np.logical_or.reduce(self.internal_boundaries))


def boundary_stats(K: FourSection) -> dict:
    """L, M, singularities, revealed cells and the downward boundary per direction."""
    s = K.stats
    return {
        "L": s.L,
        "M": s.M,
        "singularities": s.singularities,
        "revealed": s.revealed,
        "down_boundary": {str(dr): K.down_boundary(dr) for dr in Direction.all(K.window.dim)},
    }


# ---------------------------------------------------------------------------
# validators


def validate_four_section(K: FourSection) -> Verdict:
    """Partition, parity of the 0- and 3-phase boundaries, and the neighbour rule."""
    w = K.window
    bad = (K.labels < 0) | (K.labels > 3)
    if bad.any():
        return fail("(a) partition", w.vertex(int(np.flatnonzero(bad)[0])))
    b0 = K.internal_boundaries[0] & w.odd
    if b0.any():
        return fail("(b) K0 even", Region(w, b0).cells()[0])
    b3 = K.internal_boundaries[3] & ~w.odd
    if b3.any():
        return fail("(b) K3 odd", Region(w, b3).cells()[0])
    d = w.dim
    for i in range(4):
        Ki = K.part(i)
        surrounded = lat.neighbor_count(Ki) == 2 * d
        allowed = (K.labels == i) | (K.labels == 3 - i)
        wrong = surrounded & ~allowed
        if wrong.any():
            return fail(f"(c) N(v) in K{i} forces v in K{i} or K{3 - i}", Region(w, wrong).cells()[0])
    return PASS


def validate_adapted(K: FourSection, f: Coloring) -> Verdict:
    """Boundary color table and the non-zero-neighbour rule."""
    if K.window != f.window:
        return fail("window mismatch")
    w = K.window
    c = f.colors
    odd = w.odd
    ib = K.internal_boundaries
    zero = (ib[0] | ib[3]) & (c != 0)
    if zero.any():
        return fail("(a) f = 0 on the boundary of K0 and K3", Region(w, zero).cells()[0])
    one = ((odd & ib[1]) | (~odd & ib[2])) & (c != 1)
    if one.any():
        return fail("(a) f = 1 on Odd/K1 and Even/K2 boundaries", Region(w, one).cells()[0])
    two = ((~odd & ib[1]) | (odd & ib[2])) & (c != 2)
    if two.any():
        return fail("(a) f = 2 on Even/K1 and Odd/K2 boundaries", Region(w, two).cells()[0])
    nonzero = lat.neighbor_count(Region(w, c != 0))
    lonely = (ib[1] | ib[2]) & (nonzero == 0)
    if lonely.any():
        return fail("(b) boundary cell of K12 with a non-zero neighbour", Region(w, lonely).cells()[0])
    return PASS


def validate_connected(K: FourSection) -> Verdict:
    """The union of the internal boundaries of the parts is connected."""
    comps = lat.connected_components(K.internal_boundary_union())
    if len(comps) > 1:
        return fail("boundary connected", comps[1].cells()[0])
    return PASS


def in_family_rho(K: FourSection, rho) -> Verdict:
    """rho in K123, K123 finite (always, by storage) and K connected."""
    if rho not in K.k123:
        return fail("rho in K123", tuple(rho))
    return validate_connected(K)


def in_family_V(K: FourSection, V: Region) -> Verdict:
    """Membership in the family of four-sections around the set ``V``."""
    k123 = K.k123
    if k123.isdisjoint(V):
        return fail("K123 meets V")
    bnd = K.internal_boundary_union()
    for comp in lat.connected_components(lat.plus(k123)):
        if comp.outside_full:
            return fail("component of K123+ finite")
        if comp.isdisjoint(V):
            return fail("component of K123+ meets V", comp.cells()[0])
        if not lat.is_connected(comp & bnd):
            return fail("component boundary connected", comp.cells()[0])
    return PASS


# ---------------------------------------------------------------------------
# breakups


@dataclass(frozen=True)
class BreakupReport:
    section: FourSection
    trivial: bool
    adapted: bool
    connected: bool
    L: int
    M: int


def _finish_breakup(f: Coloring, kap: np.ndarray, k0p: Region) -> FourSection:
    w = f.window
    inf = lat.INFINITY
    k3p = lat.co_connected_closure(Region(w, kap == 3) - k0p, inf)
    k2p = lat.co_connected_closure(Region(w, kap == 2) - (k0p | k3p), inf)
    k1p = lat.co_connected_closure(Region(w, kap == 1) - (k0p | k3p | k2p), inf)
    labels = np.full(w.shape, -1, np.int8)
    labels[k0p.mask] = 0
    labels[k3p.mask] = 3
    labels[k2p.mask] = 2
    labels[k1p.mask] = 1
    return FourSection(w, labels)


def _report(K: FourSection, f: Coloring) -> BreakupReport:
    return BreakupReport(K, K.is_trivial, bool(validate_adapted(K, f)),
                         bool(validate_connected(K)), K.L, K.M)


def _free_kappa(f: Coloring) -> np.ndarray:
    _require_even0(f)
    kap = kappa(f)
    kap[~f.lam.mask] = 0
    return kap


def breakup_section(f: Coloring, rho) -> FourSection:
    """The four-section of :func:`breakup` without the report."""
    rho = tuple(rho)
    if rho not in f.lam:
        raise ValueError(f"rho={rho} must be a free cell")
    kap = _free_kappa(f)
    k0p = lat.co_connected_closure(Region(f.window, kap == 0), rho)
    return _finish_breakup(f, kap, k0p)


def breakup(f: Coloring, rho) -> BreakupReport:
    """Breakup of ``f`` around the free cell ``rho``."""
    return _report(breakup_section(f, rho), f)


def breakup_around_set(f: Coloring, V: Region) -> BreakupReport:
    """Breakup around a set of pattern violations."""
    if not V.issubset(violation_set(f)):
        extra = (V - violation_set(f)).cells()
        raise ValueError(f"V must consist of pattern violations; {extra[0]} is not one")
    kap = _free_kappa(f)
    nonzero = Region(f.window, kap != 0)
    removed = Region.empty(f.window)
    for comp in lat.connected_components(nonzero):
        if not comp.isdisjoint(V):
            removed = removed | comp
    return _report(_finish_breakup(f, kap, removed.complement()), f)
