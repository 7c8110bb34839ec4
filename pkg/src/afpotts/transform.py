"""Flip, Shift and Mod, their composite and its inverse.

Throughout, ``direction`` is the downward unit vector ``s``; the upward
neighbour of ``v`` is ``v - s``. Colors are taken mod 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import lattice as lat
from .breakup import FourSection, validate_adapted
from .errors import PASS, NotAdaptedError, NotInImageError, Verdict, fail
from .lattice import DEFAULT_DIRECTION, Direction, Region
from .model import Coloring, improper_edges


def _roll(arr: np.ndarray, t: Sequence[int]) -> np.ndarray:
    """``out[x] = arr[x - t]`` with wrap-around; callers only read cells where no wrap occurs."""
    return np.roll(arr, tuple(t), axis=tuple(range(arr.ndim)))


def _up_labels(K: FourSection, direction: Direction) -> np.ndarray:
    return _roll(K.labels, direction.vector(K.window.dim))


def down_boundary(K: FourSection, direction: Direction = DEFAULT_DIRECTION) -> Region:
    """Cells of K12 whose upward neighbour lies in K0 or K3."""
    return K.down_boundary(direction)


@dataclass(frozen=True)
class ModFunction:
    """A 0/1 function on the downward boundary, stored as its support and its ones."""

    support: Region
    ones: Region

    def __post_init__(self):
        if not self.ones.issubset(self.support):
            raise ValueError("ones must lie inside the support")

    @classmethod
    def zeros(cls, K: FourSection, direction: Direction = DEFAULT_DIRECTION) -> "ModFunction":
        D = down_boundary(K, direction)
        return cls(D, Region.empty(K.window))

    @classmethod
    def from_bits(cls, support: Region, bits: Sequence[int]) -> "ModFunction":
        """Bits listed in lexicographic order of the support cells."""
        cells = support.cells()
        if len(bits) != len(cells):
            raise ValueError("need one bit per support cell")
        return cls(support, Region.from_cells(support.window, [c for c, b in zip(cells, bits) if b]))

    def bits(self) -> list[int]:
        return [int(c in self.ones) for c in self.support.cells()]

    def __call__(self, v) -> int:
        if v not in self.support:
            raise KeyError(tuple(v))
        return int(v in self.ones)


def flip(f: Coloring, K: FourSection) -> Coloring:
    """Negate colors on K2 and add one on K3."""
    verdict = validate_adapted(K, f)
    if not verdict:
        raise NotAdaptedError(str(verdict))
    c = f.colors.astype(np.int16)
    out = np.where(K.labels == 2, -c, c)
    out = np.where(K.labels == 3, c + 1, out)
    return f.with_colors((out % 3).astype(np.int8))


def shift(f1: Coloring, K: FourSection, direction: Direction = DEFAULT_DIRECTION) -> Coloring:
    """Translate K12 downward by one cell, filling the vacated layer with 1 or 0."""
    t = direction.vector(K.window.dim)
    up_lab = _up_labels(K, direction)
    up_col = _roll(f1.colors, t).astype(np.int16)
    k12 = (K.labels == 1) | (K.labels == 2)
    out = f1.colors.astype(np.int16).copy()
    inner = k12 & ((up_lab == 1) | (up_lab == 2))
    out[inner] = up_col[inner] - 1
    out[k12 & (up_lab == 0)] = 1
    out[k12 & (up_lab == 3)] = 0
    return f1.with_colors((out % 3).astype(np.int8))


def _check_mod(K: FourSection, direction: Direction, h: ModFunction) -> Region:
    D = down_boundary(K, direction)
    if h.support != D:
        raise ValueError("h must be defined exactly on the downward boundary of K12")
    return D


def mod(f2: Coloring, K: FourSection, direction: Direction, h: ModFunction) -> Coloring:
    """Write ``h + 1`` under K0 and ``-h`` under K3 on the downward boundary."""
    D = _check_mod(K, direction, h)
    up_lab = _up_labels(K, direction)
    hv = h.ones.mask.astype(np.int16)
    out = f2.colors.astype(np.int16).copy()
    under0 = D.mask & (up_lab == 0)
    under3 = D.mask & (up_lab == 3)
    out[under0] = hv[under0] + 1
    out[under3] = -hv[under3]
    return f2.with_colors((out % 3).astype(np.int8))


def transform(f: Coloring, K: FourSection, direction: Direction = DEFAULT_DIRECTION,
              h: ModFunction | None = None) -> Coloring:
    """Mod after Shift after Flip; ``h`` defaults to the zero function."""
    if h is None:
        h = ModFunction.zeros(K, direction)
    _check_mod(K, direction, h)
    return mod(shift(flip(f, K), K, direction), K, direction, h)


def invert_transform(g: Coloring, K: FourSection,
                     direction: Direction = DEFAULT_DIRECTION) -> tuple[Coloring, ModFunction]:
    """Recover ``(f, h)`` with ``transform(f, K, direction, h) == g``."""
    t = direction.vector(K.window.dim)
    D = down_boundary(K, direction)
    up_lab = _up_labels(K, direction)
    gc = g.colors.astype(np.int16)
    below = _roll(gc, tuple(-x for x in t))
    k12 = (K.labels == 1) | (K.labels == 2)
    f1 = np.where(k12, below + 1, gc)
    hv = np.zeros_like(gc)
    under0 = D.mask & (up_lab == 0)
    under3 = D.mask & (up_lab == 3)
    hv[under0] = gc[under0] - 1
    hv[under3] = -gc[under3]
    hv %= 3
    if np.any(hv[D.mask] > 1):
        cell = Region(K.window, D.mask & (hv > 1)).cells()[0]
        raise NotInImageError(f"recovered h is not 0/1 at {cell}")
    f = np.where(K.labels == 2, -f1, f1)
    f = np.where(K.labels == 3, f1 - 1, f)
    try:
        fc = g.with_colors((f % 3).astype(np.int8))
    except ValueError as exc:
        raise NotInImageError(str(exc)) from exc
    h = ModFunction(D, Region(K.window, D.mask & (hv == 1)))
    verdict = validate_adapted(K, fc)
    if not verdict:
        raise NotInImageError(f"recovered coloring is not adapted: {verdict}")
    if transform(fc, K, direction, h) != g:
        raise NotInImageError("recovered pair does not map back to g")
    return fc, h


# ---------------------------------------------------------------------------
# independent sets


def _matching_size(cells: list) -> int:
    evens = [c for c in cells if lat.is_even(c)]
    odds = [c for c in cells if not lat.is_even(c)]
    if not evens or not odds:
        return 0
    col = {c: j for j, c in enumerate(odds)}
    rows, cols = [], []
    for i, c in enumerate(evens):
        for u in lat.neighbors(c):
            if u in col:
                rows.append(i)
                cols.append(col[u])
    if not rows:
        return 0
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(evens), len(odds)))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return int(np.count_nonzero(match >= 0))


def independence_number(cells) -> int:
    """Size of a maximum independent set of the lattice graph induced on ``cells``.

    The lattice is bipartite, so this is the number of cells minus a maximum
    matching.
    """
    cells = sorted(set(map(tuple, cells)))
    return len(cells) - _matching_size(cells)


def max_independent_set(K: FourSection, direction: Direction = DEFAULT_DIRECTION) -> Region:
    """Lexicographically first maximum independent set of the downward boundary.

    Scanning cells in lexicographic order, a cell is kept exactly when some
    maximum independent set of the remaining graph contains it; this yields
    the maximum set whose sorted cell list is lexicographically smallest.
    """
    D = down_boundary(K, direction)
    chosen = []
    for comp in lat.connected_components(D):
        remaining = set(comp.cells())
        target = independence_number(remaining)
        for v in sorted(remaining):
            if v not in remaining:
                continue
            rest = remaining - {v} - set(lat.neighbors(v))
            if independence_number(rest) == target - 1:
                chosen.append(v)
                remaining = rest
                target -= 1
            else:
                remaining.discard(v)
    return Region.from_cells(K.window, chosen)


def admissible_mod(K: FourSection, direction: Direction, B: Region, bits: Sequence[int]) -> ModFunction:
    """Mod function vanishing off ``B`` with the given bits on ``B`` (lexicographic order)."""
    D = down_boundary(K, direction)
    if not B.issubset(D):
        raise ValueError("B must lie in the downward boundary")
    cells = B.cells()
    if len(bits) != len(cells):
        raise ValueError("need one bit per cell of B")
    return ModFunction(D, Region.from_cells(K.window, [c for c, b in zip(cells, bits) if b]))


# ---------------------------------------------------------------------------
# property checks


def _edge_witness(E: lat.EdgeSet):
    edges = E.edges()
    return edges[0] if edges else None


def _subset(clause: str, A: lat.EdgeSet, B: lat.EdgeSet) -> Verdict:
    extra = A - B
    return fail(clause, _edge_witness(extra)) if len(extra) else PASS


def _equal(clause: str, A: lat.EdgeSet, B: lat.EdgeSet) -> Verdict:
    if A == B:
        return PASS
    return fail(clause, _edge_witness((A - B) | (B - A)))


def transformation_checks(f: Coloring, K: FourSection, direction: Direction,
                          h: ModFunction) -> dict[str, Verdict]:
    """Energy, color and edge bookkeeping of one transformation.

    Keys: ``energy`` (improper edges drop by exactly M), ``twos`` (cells of
    K12 below a 2 of the image carried color 0), ``kept03`` and ``kept12``
    (improper edges inside one block survive, shifted for K12), and the four
    stage identities ``stage0`` .. ``stage3`` tracking improper edges through
    Flip, Shift and Mod. Edge sets are taken inside the window.
    """
    t = direction.vector(K.window.dim)
    up = tuple(-x for x in t)
    f1 = flip(f, K)
    f2 = shift(f1, K, direction)
    g = mod(f2, K, direction, h)
    Ef, E1, E2, Eg = (improper_edges(x) for x in (f, f1, f2, g))
    dK = K.boundary()
    singular = K.stats.singular
    in03 = lat.edges_within(K.k03)
    in12 = lat.edges_within(K.k12)
    out = {}
    if len(Eg) == len(Ef) - K.M:
        out["energy"] = PASS
    else:
        out["energy"] = fail("|E(g)| = |E(f)| - M", (len(Ef), len(Eg), K.M))
    twos = K.k12 & Region(K.window, g.colors == 2).shift(up)
    zeros = Region(K.window, f.colors == 0)
    out["twos"] = PASS if twos.issubset(zeros) else fail("K12 under g=2 has f=0", (twos - zeros).cells()[0])
    out["kept03"] = _subset("E(K03) improper edges survive", (in03 & Ef) - dK, Eg)
    out["kept12"] = _subset("E(K12) improper edges survive shifted", (in12 & Ef) - dK, Eg.shift(up))
    out["stage0"] = _subset("singular boundary is improper", singular, Ef)
    v1 = _equal("Flip removes exactly the singular boundary", E1, Ef - singular)
    out["stage1"] = v1 if not v1 else _subset("Flip leaves improper edges inside blocks", E1, in03 | in12)
    a, b = E1 & in03, (E1 & in12).shift(t)
    v2 = PASS if a.isdisjoint(b) else fail("Shift pieces disjoint", _edge_witness(a & b))
    out["stage2"] = v2 if not v2 else _equal("Shift moves K12 improper edges down", E2, a | b)
    out["stage3"] = _equal("Mod adds no improper edge", Eg, E2)
    return out
