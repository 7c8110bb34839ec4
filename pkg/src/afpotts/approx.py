"""Approximations of four-sections, the sets they leave undecided, and minimal covers.

Regions here may be cofinite (for instance the known 0-phase). Indices follow
one convention: ``i`` ranges over {1, 2}, ``j`` over {0, 3}, and ``bar(l)``
is ``3 - l``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import lattice as lat
from .breakup import FourSection
from .errors import CapExceeded, PASS, Verdict, fail
from .lattice import DEFAULT_DIRECTION, Direction, EdgeSet, Region, Window
from .model import Coloring

PAIRS = ((1, 0), (2, 0), (1, 3), (2, 3))


def bar(l: int) -> int:
    return 3 - l


def _first(U: Region):
    """First cell of ``U`` inside the window, for diagnostics."""
    cells = Region(U.window, U.mask).cells()
    return cells[0] if cells else "outside the window"


def _witness_edge(E: EdgeSet):
    edges = E.edges()
    return edges[0] if edges else None


def _odd_j(window: Window, j: int) -> Region:
    """Odd cells for ``j = 0``, even cells for ``j = 3``; cells outside the window are dropped."""
    return lat.parity_region(window, lat.ODD if j == 0 else lat.EVEN)


def _even_j(window: Window, j: int) -> Region:
    return lat.parity_region(window, lat.EVEN if j == 0 else lat.ODD)


# ---------------------------------------------------------------------------
# xi-odd sets, semi-odd pairs and triples


def xi_internal_boundary(U: Region, xi: EdgeSet) -> Region:
    """Cells of ``U`` joined to a cell outside ``U`` by an edge not in ``xi``."""
    return (lat.edge_boundary(U) - xi).endpoints() & U


def _xi_parity(U: Region, xi: EdgeSet, odd: bool) -> Verdict:
    extra = xi - lat.edge_boundary(U)
    if len(extra):
        return fail("xi lies in the edge boundary", _witness_edge(extra))
    b = xi_internal_boundary(U, xi)
    wrong = b - lat.parity_region(U.window, lat.ODD if odd else lat.EVEN)
    if not wrong.is_empty():
        return fail("xi-boundary parity", _first(wrong))
    return PASS


def is_xi_odd(U: Region, xi: EdgeSet) -> Verdict:
    """``xi`` lies in the edge boundary of ``U`` and the rest of the boundary sits on odd cells."""
    return _xi_parity(U, xi, True)


def is_xi_even(U: Region, xi: EdgeSet) -> Verdict:
    return _xi_parity(U, xi, False)


@dataclass(frozen=True)
class SemiOddPair:
    """Disjoint sets known to lie inside and outside some set; the rest is unknown."""

    bullet: Region
    circ: Region

    def __post_init__(self):
        if not self.bullet.isdisjoint(self.circ):
            raise ValueError("the two sets of a pair must be disjoint")

    @property
    def star(self) -> Region:
        return (self.bullet | self.circ).complement()


def is_semi_odd_pair(p: SemiOddPair) -> Verdict:
    xi = lat.edges_between(p.bullet, p.circ)
    v = is_xi_odd(p.bullet, xi)
    if not v:
        return fail("bullet side " + v.clause, v.witness)
    v = is_xi_even(p.circ, xi)
    if not v:
        return fail("circ side " + v.clause, v.witness)
    return PASS


def is_semi_odd_triple(U_bullet: Region, U: Region, U_circ: Region) -> Verdict:
    """Both ``(U_bullet, U^c)`` and ``(U, U_circ)`` are semi-odd pairs."""
    for name, (a, b) in (("outer", (U_bullet, U.complement())), ("inner", (U, U_circ))):
        if not a.isdisjoint(b):
            return fail(f"{name} pair disjoint", _first(a & b))
        v = is_semi_odd_pair(SemiOddPair(a, b))
        if not v:
            return fail(f"{name} pair: {v.clause}", v.witness)
    return PASS


def semi_odd_triple_criterion(U_bullet: Region, U: Region, U_circ: Region) -> Verdict:
    """Single-condition form of :func:`is_semi_odd_triple`.

    ``U_bullet`` inside ``U``, ``U_circ`` outside, and every edge from an even
    cell of ``U`` to an odd cell outside ``U`` joins ``U_bullet`` to ``U_circ``.
    It is implied by the two-pair definition and equivalent to it whenever
    ``(U_bullet, U_circ)`` is itself a semi-odd pair; without that, the
    parity of ``U_bullet`` against ``U - U_bullet`` (and of ``U_circ`` against
    the rest of the complement) goes unchecked.
    """
    if not U_bullet.issubset(U):
        return fail("U_bullet in U", _first(U_bullet - U))
    if not U_circ.isdisjoint(U):
        return fail("U_circ outside U", _first(U_circ & U))
    w = U.window
    even_in = U & lat.parity_region(w, lat.EVEN)
    odd_out = U.complement() & lat.parity_region(w, lat.ODD)
    extra = lat.edges_between(even_in, odd_out) - lat.edges_between(U_bullet, U_circ)
    if len(extra):
        return fail("even-to-odd boundary edges are known", _witness_edge(extra))
    return PASS


def is_t_tight(p: SemiOddPair, t: float) -> Verdict:
    """The unknown cells induce a subgraph of maximum degree below ``t``."""
    star = p.star
    bad = lat.n_t(star, t) & star
    return fail(f"unknown degree below {t}", _first(bad)) if not bad.is_empty() else PASS


def is_sqrt_d_tight(p: SemiOddPair) -> Verdict:
    """Tightness at ``t = sqrt(d)`` with the exact test ``deg**2 < d``."""
    star = p.star
    d = star.window.dim
    deg = lat.neighbor_count(star)
    bad = star.mask & (deg.astype(np.int64) ** 2 >= d)
    if bad.any():
        return fail("unknown degree below sqrt(d)", Region(star.window, bad).cells()[0])
    return PASS


# ---------------------------------------------------------------------------
# four-approximations


@dataclass(frozen=True)
class FourApprox:
    """Known parts ``known[l]`` and the undecided sets ``bullet[i, j]``, ``circ[i, j]``."""

    known: tuple
    bullet: Mapping
    circ: Mapping

    @property
    def window(self) -> Window:
        return self.known[0].window

    @classmethod
    def from_cells(cls, window: Window, known: Mapping[int, Iterable] = (),
                   bullet: Mapping[tuple, Iterable] = (), circ: Mapping[tuple, Iterable] = ()) -> "FourApprox":
        """Listed cells for labels 1..3 and the undecided sets; every other cell is known 0."""
        known = dict(known)
        bullet = {k: Region.from_cells(window, bullet.get(k, ())) for k in PAIRS} if bullet else \
            {k: Region.empty(window) for k in PAIRS}
        circ = {k: Region.from_cells(window, circ.get(k, ())) for k in PAIRS} if circ else \
            {k: Region.empty(window) for k in PAIRS}
        parts = [Region.from_cells(window, known.get(l, ())) for l in (1, 2, 3)]
        rest = Region.empty(window)
        for r in parts + list(bullet.values()) + list(circ.values()):
            rest = rest | r
        return cls((rest.complement(), *parts), bullet, circ)

    @classmethod
    def exact(cls, K: FourSection) -> "FourApprox":
        """Everything known, nothing undecided."""
        w = K.window
        return cls(tuple(K.part(l) for l in range(4)), {k: Region.empty(w) for k in PAIRS},
                   {k: Region.empty(w) for k in PAIRS})

    def blocks(self) -> list[tuple[str, Region]]:
        """The ten blocks that must partition space."""
        out = [(f"A{l}", self.known[l]) for l in range(4)]
        out += [(f"circ{i}{j}", self.circ[i, j]) for i, j in PAIRS]
        for j in (0, 3):
            out.append((f"bullet1{j}|bullet2{j}", self.bullet[1, j] | self.bullet[2, j]))
        return out


def validate_four_approx(A: FourApprox) -> Verdict:
    """Partition, parity of the undecided sets and their degree bound."""
    w = A.window
    blocks = A.blocks()
    union = Region.empty(w)
    for name, r in blocks:
        if not union.isdisjoint(r):
            return fail(f"(a) partition: {name} overlaps an earlier block", _first(union & r))
        union = union | r
    if union != Region.full(w):
        return fail("(a) partition covers space", _first(union.complement()))
    odd = lat.parity_region(w, lat.ODD)
    even = lat.parity_region(w, lat.EVEN)
    for i, j in PAIRS:
        b_par, c_par = (odd, even) if j == 0 else (even, odd)
        if not A.bullet[i, j].issubset(b_par):
            return fail(f"(b) parity of bullet{i}{j}", _first(A.bullet[i, j] - b_par))
        if not A.circ[i, j].issubset(c_par):
            return fail(f"(b) parity of circ{i}{j}", _first(A.circ[i, j] - c_par))
    cap = math.isqrt(w.dim)
    for i, j in PAIRS:
        U = A.bullet[i, j] | A.circ[i, j]
        deg = lat.neighbor_count(U)
        bad = U.mask & (deg > cap)
        if bad.any():
            return fail(f"(c) degree of undecided {i}{j} at most sqrt(d)", Region(w, bad).cells()[0])
    return PASS


def approximates(A: FourApprox, K: FourSection) -> Verdict:
    """The clauses tying a four-approximation to a particular four-section."""
    if A.window != K.window:
        return fail("window mismatch")
    N = lat.neighborhood
    for l in range(4):
        if not A.known[l].issubset(K.part(l)):
            return fail(f"(d) A{l} in K{l}", _first(A.known[l] - K.part(l)))
    for i, j in PAIRS:
        Ki, Kj = K.part(i), K.part(j)
        Kij = K.part(i, j)
        bu, ci = A.bullet[i, j], A.circ[i, j]
        if not bu.issubset(K.part(1, 2, j)):
            return fail(f"(d) bullet{i}{j} in K12{j}", _first(bu - K.part(1, 2, j)))
        lone = bu - (A.bullet[1, j] & A.bullet[2, j])
        if not lone.issubset(Kij):
            return fail(f"(d) unshared bullet{i}{j} in K{i}{j}", _first(lone - Kij))
        if not ci.issubset(Kij):
            return fail(f"(d) circ{i}{j} in K{i}{j}", _first(ci - Kij))
        if ci & N(bu - Ki) != ci & Kj:
            return fail(f"(e) circ{i}{j} recovery", _first((ci & N(bu - Ki)) ^ (ci & Kj)))
        if bu & N(ci - Kj) != bu & Ki:
            return fail(f"(e) bullet{i}{j} recovery", _first((bu & N(ci - Kj)) ^ (bu & Ki)))
        out = N(bu & Ki) - (ci | Kj)
        if not out.is_empty():
            return fail(f"(f) neighbours of bullet{i}{j} in K{i}", _first(out))
        out = N(ci & Kj) - (bu | Ki)
        if not out.is_empty():
            return fail(f"(f) neighbours of circ{i}{j} in K{j}", _first(out))
    return PASS


# ---------------------------------------------------------------------------
# D-sets


@dataclass(frozen=True)
class DSets:
    bullet: dict
    circ: dict
    star: dict | None = None


def compute_D(A: FourApprox, K: FourSection, g: Coloring | None = None,
              direction: Direction = DEFAULT_DIRECTION) -> DSets:
    """Undecided cells resolved by ``K``; with ``g`` also the circ sets away from cells above a 2."""
    v = approximates(A, K)
    if not v:
        raise ValueError(f"A does not approximate K: {v}")
    bullet = {(i, j): A.bullet[i, j] & K.part(i) for i, j in PAIRS}
    circ = {(i, j): A.circ[i, j] & K.part(j) for i, j in PAIRS}
    star = None
    if g is not None:
        above2 = _above_twos(g, direction)
        star = {k: circ[k] - above2 for k in PAIRS}
    return DSets(bullet, circ, star)


def _above_twos(g: Coloring, direction: Direction) -> Region:
    """Cells ``v`` whose downward neighbour ``v + s`` has color 2."""
    up = tuple(-x for x in direction.vector(g.dim))
    return Region(g.window, g.colors == 2).shift(up)


def circ_star(A: FourApprox, g: Coloring, direction: Direction = DEFAULT_DIRECTION) -> dict:
    """Undecided circ cells whose downward neighbour is not colored 2."""
    above2 = _above_twos(g, direction)
    return {k: A.circ[k] - above2 for k in PAIRS}


def recover_K(A: FourApprox, D_bullet: Mapping, D_circ: Mapping) -> FourSection:
    """Rebuild the four-section from the approximation and both families of D-sets."""
    w = A.window
    parts = {}
    for j in (0, 3):
        r = A.known[j] | D_circ[1, j] | D_circ[2, j]
        r = r | ((A.bullet[1, j] | A.bullet[2, j]) - (D_bullet[1, j] | D_bullet[2, j]))
        parts[j] = r
    for i in (1, 2):
        r = A.known[i] | D_bullet[i, 0] | D_bullet[i, 3]
        r = r | (A.circ[i, 0] - D_circ[i, 0]) | (A.circ[i, 3] - D_circ[i, 3])
        parts[i] = r
    labels = np.full(w.shape, -1, np.int8)
    for l in (0, 3, 1, 2):
        clash = parts[l].mask & (labels != -1)
        if clash.any():
            raise ValueError(f"recovered parts overlap at {Region(w, clash).cells()[0]}")
        labels[parts[l].mask] = l
    if not parts[0].outside_full:
        raise ValueError("recovered 0-part must be cofinite")
    return FourSection(w, labels)


def bullet_from_circ(A: FourApprox, D_circ: Mapping) -> dict:
    N = lat.neighborhood
    return {k: A.bullet[k] & N(A.circ[k] - D_circ[k]) for k in PAIRS}


def circ_from_bullet(A: FourApprox, D_bullet: Mapping) -> dict:
    N = lat.neighborhood
    return {k: A.circ[k] & N(A.bullet[k] - D_bullet[k]) for k in PAIRS}


def shift_partition(A: FourApprox, K: FourSection, direction: Direction = DEFAULT_DIRECTION) -> dict:
    """Split each ``K_i`` cell lying directly below ``K_j`` by what ``A`` knows.

    For every pair ``(i, j)`` returns three disjoint regions whose union is
    the set of cells ``v`` of ``K_i`` with ``v - s`` in ``K_j``: cells outside
    the bullet set whose upper neighbour is not in the circ set, the same
    with the upper neighbour in the circ set, and cells of the bullet set.
    """
    t = direction.vector(A.window.dim)
    out = {}
    for i, j in PAIRS:
        base = K.part(i) & K.part(j).shift(t)
        bu = A.bullet[i, j]
        circ_below = A.circ[i, j].shift(t)
        out[i, j] = (base - bu - circ_below, (base - bu) & circ_below, base & bu)
    return out


# ---------------------------------------------------------------------------
# building approximations from an explicit list of four-sections


ALL_INDEX_SETS = tuple(frozenset(c) for r in range(5) for c in itertools.combinations(range(4), r))


def information_system(candidates: Sequence[FourSection]) -> dict:
    """``A_I`` = intersection over the candidates of the union of their parts in ``I``."""
    if not candidates:
        raise ValueError("need at least one candidate four-section")
    w = candidates[0].window
    system = {}
    for I in ALL_INDEX_SETS:
        r = Region.full(w)
        for K in candidates:
            r = r & (K.part(*sorted(I)) if I else Region.empty(w))
        system[I] = r
    return system


def _A(system: Mapping, *ls: int) -> Region:
    return system[frozenset(ls)]


def four_approx_from_system(system: Mapping) -> FourApprox:
    """Known parts from singletons; undecided sets from the pair and triple parts."""
    w = _A(system, 0).window
    bullet, circ = {}, {}
    for i, j in PAIRS:
        unknown = (_A(system, i, bar(j)) | _A(system, bar(i), j)).complement()
        bullet[i, j] = _odd_j(w, j) & unknown & _A(system, 1, 2, j)
        circ[i, j] = _even_j(w, j) & unknown & _A(system, i, j)
    return FourApprox(tuple(_A(system, l) for l in range(4)), bullet, circ)


def four_approx_from_candidates(candidates: Sequence[FourSection]) -> FourApprox:
    return four_approx_from_system(information_system(candidates))


def is_exhausted(system: Mapping) -> Verdict:
    for I in ALL_INDEX_SETS:
        for J in ALL_INDEX_SETS:
            if system[I] & system[J] != system[I & J]:
                return fail("exhausted", (sorted(I), sorted(J)))
    return PASS


def respects(system: Mapping, K: FourSection) -> Verdict:
    for I in ALL_INDEX_SETS:
        KI = K.part(*sorted(I)) if I else Region.empty(K.window)
        if not system[I].issubset(KI):
            return fail(f"A_{''.join(map(str, sorted(I)))} in K", _first(system[I] - KI))
    return PASS


def separates(U: Region, K: FourSection) -> Verdict:
    """Every boundary edge of ``K`` has an endpoint in ``U``."""
    missed = K.boundary() - lat.edges_touching(U)
    return fail("separates K", _witness_edge(missed)) if len(missed) else PASS


def validate_level1(U: Region, W: Region, K: FourSection) -> Verdict:
    """Singularity and separation clauses; the size clause carries an unspecified constant and is skipped."""
    d = K.window.dim
    st = K.stats
    if W != st.singularities:
        return fail("W is the set of singularities", _first(W ^ st.singularities))
    v = separates(lat.neighborhood(U) | W | lat.n_t(W, d / 18), K)
    if not v:
        return fail("(a) " + v.clause, v.witness)
    for l in range(4):
        Kl = K.part(l)
        lhs = lat.n_t(Kl & st.revealed, d / 9)
        rhs = lat.neighborhood(Kl & U)
        if not lhs.issubset(rhs):
            return fail(f"(b) revealed cells of K{l} are seen by U", _first(lhs - rhs))
    return PASS


def validate_level2(A: Sequence[Region], K: FourSection) -> Verdict:
    """Clauses (a) to (d); the size clause carries an unspecified constant and is skipped."""
    d = K.window.dim
    st = K.stats
    for a, b in itertools.combinations(range(4), 2):
        if not A[a].isdisjoint(A[b]):
            return fail(f"A{a} and A{b} disjoint", _first(A[a] & A[b]))
    near = lat.n_t(st.singularities, d / 18)
    for l in range(4):
        Kl = K.part(l)
        if not A[l].issubset(Kl):
            return fail(f"(a) A{l} in K{l}", _first(A[l] - Kl))
        if not (Kl & st.singularities).issubset(A[l]):
            return fail(f"(b) singular cells of K{l} known", _first((Kl & st.singularities) - A[l]))
        if not (Kl & near).issubset(A[l]):
            return fail(f"(c) cells near singularities of K{l} known", _first((Kl & near) - A[l]))
        lhs = lat.n_t(Kl & st.revealed, d / 9)
        rhs = lat.neighborhood(A[l])
        if not lhs.issubset(rhs):
            return fail(f"(d) revealed cells of K{l} are seen", _first(lhs - rhs))
    return PASS


def validate_level3(A: Sequence[Region], K: FourSection) -> Verdict:
    """Tuple ``(A0, A1, A2, A3, A10, A23, A20, A13)``."""
    A0, A1, A2, A3, A10, A23, A20, A13 = A
    v = validate_level2((A0, A1, A2, A3), K)
    if not v:
        return fail("(a) level-2: " + v.clause, v.witness)
    for name, (ub, U, uc) in (("13/20", (A13, K.part(1, 3), A20)), ("23/10", (A23, K.part(2, 3), A10))):
        v = is_semi_odd_triple(ub, U, uc)
        if not v:
            return fail(f"(b) triple {name}: {v.clause}", v.witness)
    for name, (ub, uc) in (("13/20", (A13, A20)), ("23/10", (A23, A10))):
        if not ub.isdisjoint(uc):
            return fail(f"(c) pair {name} disjoint", _first(ub & uc))
        p = SemiOddPair(ub, uc)
        v = is_semi_odd_pair(p)
        if not v:
            return fail(f"(c) pair {name}: {v.clause}", v.witness)
        v = is_sqrt_d_tight(p)
        if not v:
            return fail(f"(c) pair {name}: {v.clause}", v.witness)
    return PASS


def validate_level4(system: Mapping, K: FourSection) -> Verdict:
    v = is_exhausted(system)
    if not v:
        return v
    a = _A
    v = validate_level3(tuple(a(system, *I) for I in ((0,), (1,), (2,), (3,), (1, 0), (2, 3), (2, 0), (1, 3))), K)
    if not v:
        return fail("(a) level-3: " + v.clause, v.witness)
    v = respects(system, K)
    if not v:
        return fail("(b) " + v.clause, v.witness)
    for name, U, even in (("A0", a(system, 0), True), ("A012", a(system, 0, 1, 2), True),
                          ("A3", a(system, 3), False), ("A123", a(system, 1, 2, 3), False)):
        ok = lat.is_even_set(U) if even else lat.is_odd_set(U)
        if not ok:
            return fail(f"(c) {name} {'even' if even else 'odd'}")
    for j in (0, 3):
        out = lat.neighborhood(a(system, j)) - (a(system, bar(j)) | a(system, 1, 2, j))
        if not out.is_empty():
            return fail(f"(d) neighbours of A{j}", _first(out))
    for i in (1, 2):
        out = lat.neighborhood(a(system, i)) - (a(system, bar(i)) | a(system, i, 0, 3))
        if not out.is_empty():
            return fail(f"(e) neighbours of A{i}", _first(out))
    return PASS


# ---------------------------------------------------------------------------
# bipartite graphs and minimal covers


COVER_CAP = 20


@dataclass(frozen=True)
class BipartiteGraph:
    bullet: tuple
    circ: tuple
    edges: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "bullet", tuple(self.bullet))
        object.__setattr__(self, "circ", tuple(self.circ))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if set(self.bullet) & set(self.circ):
            raise ValueError("the two parts must be disjoint")
        b, c = set(self.bullet), set(self.circ)
        for u, v in self.edges:
            if not (u in b and v in c):
                raise ValueError(f"edge {(u, v)} must go from the bullet part to the circ part")

    @classmethod
    def from_regions(cls, bullet: Region, circ: Region) -> "BipartiteGraph":
        """Lattice graph induced on two finite disjoint regions, keeping edges across them."""
        bc = bullet.cells()
        cset = set(circ.cells())
        edges = [(u, v) for u in bc for v in lat.neighbors(u) if v in cset]
        return cls(tuple(bc), tuple(circ.cells()), tuple(edges))

    def max_degree(self) -> int:
        deg: dict = {}
        for u, v in self.edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return max(deg.values(), default=0)

    def _masks(self):
        bi = {x: k for k, x in enumerate(self.bullet)}
        ci = {x: k for k, x in enumerate(self.circ)}
        nb = [0] * len(self.bullet)
        nc = [0] * len(self.circ)
        for u, v in self.edges:
            nb[bi[u]] |= 1 << ci[v]
            nc[ci[v]] |= 1 << bi[u]
        return nb, nc


def _neigh(masks: list[int], sel: int) -> int:
    out = 0
    k = 0
    while sel:
        if sel & 1:
            out |= masks[k]
        sel >>= 1
        k += 1
    return out


def minimal_cover_masks(G: BipartiteGraph) -> list[tuple[int, int]]:
    """Minimal covers as bitmask pairs over ``G.bullet`` and ``G.circ``.

    A pair is a minimal cover exactly when each side is the neighbourhood of
    what the other side leaves out, so it suffices to enumerate one side.
    """
    nb, nc = G._masks()
    n_b, n_c = len(nb), len(nc)
    if n_b + n_c > COVER_CAP:
        raise CapExceeded(f"minimal covers are enumerated for at most {COVER_CAP} vertices")
    full_b, full_c = (1 << n_b) - 1, (1 << n_c) - 1
    out = []
    if n_b <= n_c:
        for vb in range(1 << n_b):
            vc = _neigh(nb, full_b & ~vb)
            if _neigh(nc, full_c & ~vc) == vb:
                out.append((vb, vc))
    else:
        for vc in range(1 << n_c):
            vb = _neigh(nc, full_c & ~vc)
            if _neigh(nb, full_b & ~vb) == vc:
                out.append((vb, vc))
    out.sort()
    return out


def minimal_vertex_covers(G: BipartiteGraph) -> list[tuple[frozenset, frozenset]]:
    def pick(items, mask):
        return frozenset(x for k, x in enumerate(items) if mask >> k & 1)
    return [(pick(G.bullet, b), pick(G.circ, c)) for b, c in minimal_cover_masks(G)]


def _weights(G: BipartiteGraph, p) -> tuple[list[float], list[float]]:
    if isinstance(p, Mapping):
        wb = [float(p[x]) for x in G.bullet]
        wc = [float(p[x]) for x in G.circ]
    elif isinstance(p, (tuple, list)):
        wb = [float(p[0])] * len(G.bullet)
        wc = [float(p[1])] * len(G.circ)
    else:
        wb = [float(p)] * len(G.bullet)
        wc = [1.0 - float(p)] * len(G.circ)
    for w in wb + wc:
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"weights must lie in [0, 1], got {w}")
    bi = {x: k for k, x in enumerate(G.bullet)}
    ci = {x: k for k, x in enumerate(G.circ)}
    for u, v in G.edges:
        if wb[bi[u]] + wc[ci[v]] > 1.0 + 1e-12:
            raise ValueError(f"weights on edge {(u, v)} sum to more than 1")
    return wb, wc


def cover_sum(G: BipartiteGraph, p) -> float:
    """Sum over minimal covers of the product of the weights of their vertices.

    ``p`` is a number (weight ``p`` on the bullet side and ``1 - p`` on the
    circ side), a pair of per-side weights, or a mapping from vertex to weight.
    """
    wb, wc = _weights(G, p)
    terms = []
    for b, c in minimal_cover_masks(G):
        prod = 1.0
        for k, w in enumerate(wb):
            if b >> k & 1:
                prod *= w
        for k, w in enumerate(wc):
            if c >> k & 1:
                prod *= w
        terms.append(prod)
    return math.fsum(terms)
