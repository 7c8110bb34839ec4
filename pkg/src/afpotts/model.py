"""Colorings, boundary conditions, the Hamiltonian and exact Gibbs enumeration.

Colors live in Z/3 and are stored as ``int8`` arrays over a window that
contains the free cells (the domain) plus at least a one-cell halo. Cells
outside the domain hold the frozen boundary values and are never mutated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import lattice as lat
from .errors import BoundaryConditionError, CapExceeded, Verdict, fail, PASS
from .lattice import Region, Window

DEFAULT_CAP = 16


# ---------------------------------------------------------------------------
# boundary conditions


@dataclass(frozen=True)
class BoundaryCondition:
    """``even-i``, ``odd-i`` or explicit boundary values.

    For ``even-i`` the even cells outside the domain take color ``i`` and the
    odd ones take ``i + 1``; only the halo matters for any computation. An
    explicit condition carries a full-window array whose values off the
    domain are used verbatim.
    """

    kind: str
    color: int = 0
    tau: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("even", "odd", "explicit"):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind != "explicit" and self.color not in (0, 1, 2):
            raise ValueError(f"boundary color must be 0, 1 or 2, got {self.color}")
        if self.kind == "explicit" and self.tau is None:
            raise ValueError("explicit boundary condition needs a tau array")

    @classmethod
    def even(cls, i: int = 0) -> "BoundaryCondition":
        return cls("even", i)

    @classmethod
    def odd(cls, i: int = 0) -> "BoundaryCondition":
        return cls("odd", i)

    @classmethod
    def explicit(cls, tau) -> "BoundaryCondition":
        tau = np.array(tau, dtype=np.int8)
        tau.setflags(write=False)
        return cls("explicit", 0, tau)

    @classmethod
    def parse(cls, text: str) -> "BoundaryCondition":
        """Parse ``even0`` .. ``odd2``."""
        text = text.strip().lower().replace("-", "")
        for kind in ("even", "odd"):
            if text.startswith(kind) and text[len(kind):] in ("0", "1", "2"):
                return cls(kind, int(text[len(kind):]))
        raise ValueError(f"bad boundary condition {text!r}; expected even0..even2 or odd0..odd2")

    @property
    def name(self) -> str:
        return "explicit" if self.kind == "explicit" else f"{self.kind}{self.color}"

    @property
    def dominant_parity(self) -> int | None:
        """Parity of the halo required by the condition (None if explicit)."""
        return {"even": lat.EVEN, "odd": lat.ODD}.get(self.kind)

    def values(self, window: Window) -> np.ndarray:
        """Boundary values over ``window`` (a fresh writable array)."""
        if self.kind == "explicit":
            if self.tau.shape != window.shape:
                raise BoundaryConditionError(
                    f"explicit tau has shape {self.tau.shape}, window has {window.shape}")
            return self.tau.copy()
        main = window.odd if self.kind == "odd" else window.even
        out = np.where(main, self.color, (self.color + 1) % 3).astype(np.int8)
        return out


# ---------------------------------------------------------------------------
# colorings


class Coloring:
    """A color per window cell with the domain ``lam`` free and the rest frozen."""

    __slots__ = ("window", "colors", "lam", "bc")

    def __init__(self, lam: Region, bc: BoundaryCondition, colors=None):
        if lam.outside_full:
            raise ValueError("domain must be finite")
        if lam.touches_border():
            raise BoundaryConditionError("domain window needs a one-cell halo around the domain")
        self.window = lam.window
        self.lam = lam
        self.bc = bc
        tau = bc.values(lam.window)
        if colors is None:
            colors = tau
        else:
            colors = np.array(colors, dtype=np.int8)
            if colors.shape != lam.window.shape:
                raise ValueError("colors do not match the window shape")
            if np.any((colors < 0) | (colors > 2)):
                raise ValueError("colors must lie in {0, 1, 2}")
            off = ~lam.mask
            if np.any(colors[off] != tau[off]):
                raise BoundaryConditionError("colors outside the domain disagree with the boundary condition")
        self.colors = colors

    @property
    def dim(self) -> int:
        return self.window.dim

    def __getitem__(self, v) -> int:
        return int(self.colors[self.window.local(v)])

    def __setitem__(self, v, value: int):
        if v not in self.lam:
            raise ValueError(f"{tuple(v)} is outside the domain; boundary cells are frozen")
        self.colors[self.window.local(v)] = int(value) % 3

    def copy(self) -> "Coloring":
        return Coloring(self.lam, self.bc, self.colors.copy())

    def with_colors(self, colors) -> "Coloring":
        return Coloring(self.lam, self.bc, colors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coloring):
            return NotImplemented
        return (self.lam == other.lam and self.bc == other.bc
                and np.array_equal(self.colors, other.colors))

    def __repr__(self) -> str:
        return f"Coloring(d={self.dim}, |domain|={len(self.lam)}, bc={self.bc.name})"

    def domain_codes(self) -> int:
        """Encode domain colors as ``sum_i f(c_i) 3**i`` over cells in lexicographic order."""
        vals = self.colors[self.lam.mask].astype(np.int64)
        return int(np.dot(vals, 3 ** np.arange(vals.size, dtype=np.int64)))


def improper_edges(f: Coloring) -> lat.EdgeSet:
    """Monochromatic edges with both endpoints in the window."""
    arrays = []
    for a in range(f.dim):
        lo, hi = lat._lo_hi(f.colors, a, -1)
        arrays.append(lo == hi)
    return lat.EdgeSet(f.window, arrays)


def hamiltonian(f: Coloring) -> int:
    """Number of improper edges with at least one endpoint in the domain."""
    total = 0
    for a in range(f.dim):
        lo, hi = lat._lo_hi(f.colors, a, -1)
        mlo, mhi = lat._lo_hi(f.lam.mask, a, False)
        total += int(np.count_nonzero((lo == hi) & (mlo | mhi)))
    return total


def local_field(f: Coloring, v) -> tuple[int, int, int]:
    """Counts of neighbours of ``v`` colored 0, 1 and 2."""
    if v not in f.lam:
        raise ValueError(f"{tuple(v)} is not a free cell")
    counts = [0, 0, 0]
    for u in lat.neighbors(v):
        counts[f[u]] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# validation


def validate_bc(lam: Region, bc: BoundaryCondition) -> Verdict:
    """Check that ``lam`` is a domain compatible with ``bc``."""
    if lam.outside_full or lam.is_empty():
        return fail("domain: finite and non-empty")
    if not lat.is_connected(lam):
        return fail("domain: connected", lam.cells()[0])
    if not lat.is_co_connected(lam):
        return fail("domain: co-connected")
    if lam.touches_border():
        return fail("window: halo around the domain")
    if bc.kind == "explicit":
        if bc.tau.shape != lam.window.shape:
            return fail("explicit: tau shape", bc.tau.shape)
        bad = ((bc.tau < 0) | (bc.tau > 2)) & ~lam.mask
        if bad.any():
            return fail("explicit: tau values in {0,1,2}", lam.window.vertex(int(np.flatnonzero(bad)[0])))
        return PASS
    halo = lat.external_boundary(lam)
    wrong = halo.mask & (lam.window.odd if bc.kind == "even" else lam.window.even)
    if wrong.any():
        cell = lat.Region(lam.window, wrong).cells()[0]
        return fail(f"{bc.name}: external boundary must consist of {bc.kind} cells", cell)
    return PASS


# ---------------------------------------------------------------------------
# named domains


def box_domain(shape: Sequence[int], par: int = lat.EVEN) -> Region:
    """Union of closed neighbourhoods of the interior cells of parity ``par``.

    For ``par`` even this is an odd domain filling the box ``[0, n)`` up to
    its corners, which is what even-i conditions require; ``par`` odd gives
    the even domain used with odd-i conditions.
    """
    shape = tuple(int(n) for n in shape)
    if any(n < 3 for n in shape):
        raise ValueError("every box side must be at least 3")
    window = Window((-1,) * len(shape), tuple(n for n in shape))
    interior = np.zeros(window.shape, bool)
    interior[tuple(slice(2, n) for n in shape)] = True
    centers = interior & (window.odd if par == lat.ODD else window.even)
    if not centers.any():
        raise ValueError(f"box {'x'.join(map(str, shape))} has no interior cell of that parity")
    return lat.plus(Region(window, centers))


def _named_cells(name: str, d: int) -> list[tuple[int, ...]]:
    e0 = (1,) + (0,) * (d - 1)
    origin = (0,) * d
    if name == "single":
        return [e0]
    if name == "pair":
        return [origin, e0]
    if name == "plus":
        return lat.plus_cells(origin)
    if name == "box2":
        return [tuple(int(b) for b in bits) for bits in np.ndindex(*(2,) * d)]
    if name == "dumbbell":
        far = (2,) + (0,) * (d - 1)
        return sorted(set(lat.plus_cells(origin)) | set(lat.plus_cells(far)))
    raise ValueError(f"unknown domain {name!r}; choose single, pair, plus, box2 or dumbbell")


NAMED_DOMAINS = ("single", "pair", "plus", "box2", "dumbbell")


def named_domain(name: str, d: int = 2) -> Region:
    """Tiny fixture domains.

    ``single`` is one odd cell, ``plus`` the closed neighbourhood of the
    origin, ``dumbbell`` two overlapping pluses (9 cells in d=2). These three
    are odd domains. ``pair`` and ``box2`` are not, and are meant for use
    with explicit boundary values.
    """
    cells = _named_cells(name, d)
    return Region.from_cells(Window.around(cells, 1), cells)


def pattern_bc(lam: Region, bc: BoundaryCondition) -> BoundaryCondition:
    """Explicit boundary carrying the ``bc`` pattern, usable on any domain."""
    return BoundaryCondition.explicit(bc.values(lam.window))


# ---------------------------------------------------------------------------
# exact enumeration


@dataclass
class GibbsResult:
    """Exact enumeration output.

    ``energy_counts[E]`` counts colorings of energy ``E``. ``marginals[i, a]``
    is the probability that the ``i``-th domain cell (lexicographic order)
    has color ``a``. ``query_probs`` is the joint law of the query cells,
    indexed by ``sum_k f(q_k) 3**k``. ``state_probs`` is the full joint law
    indexed the same way over domain cells, kept only for small domains.
    """

    beta: float
    cells: list
    Z: float
    energy_counts: np.ndarray
    min_energy: int
    marginals: np.ndarray
    query: list
    query_probs: np.ndarray | None
    state_probs: np.ndarray | None

    def marginal(self, v) -> np.ndarray:
        return self.marginals[self.cells.index(tuple(v))]


def _weights(beta: float, energies: np.ndarray, emin: int) -> np.ndarray:
    if math.isinf(beta):
        return (energies == emin).astype(float)
    return np.exp(-beta * (energies - emin).astype(float))


def exact_gibbs(lam: Region, bc: BoundaryCondition, beta: float, query: Sequence = (),
                cap: int = DEFAULT_CAP, keep_states: int = 12) -> GibbsResult:
    """Enumerate all ``3**|lam|`` colorings.

    Energies are integer counts; probabilities use weights relative to the
    minimum energy, so large ``beta`` does not underflow. For ``beta = inf``
    the law is uniform over minimizers and ``Z`` counts zero-energy states.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    cells = lam.cells()
    n = len(cells)
    if n > cap:
        raise CapExceeded(f"domain has {n} cells, enumeration cap is {cap}")
    window = lam.window
    tau = bc.values(window)
    index = {c: i for i, c in enumerate(cells)}
    inner_edges = []
    fixed = np.zeros((n, 3), np.int64)
    for i, c in enumerate(cells):
        for u in lat.neighbors(c):
            if u in index:
                if index[u] > i:
                    inner_edges.append((i, index[u]))
            else:
                fixed[i, tau[window.local(u)]] += 1
    query = [tuple(q) for q in query]
    qidx = [index[q] for q in query]

    total = 3 ** n
    chunk = 3 ** min(n, 11)
    max_e = len(inner_edges) + int(fixed.sum())
    e_counts = np.zeros(max_e + 1, np.int64)
    cell_counts = np.zeros((n, 3, max_e + 1), np.int64)
    q_counts = np.zeros((3 ** len(qidx), max_e + 1), np.int64) if qidx else None
    keep = n <= keep_states
    state_e = np.empty(total, np.int32) if keep else None
    pow3 = 3 ** np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (codes[:, None] // pow3[None, :]) % 3
        energy = np.zeros(codes.size, np.int64)
        for i, j in inner_edges:
            energy += digits[:, i] == digits[:, j]
        for i in range(n):
            energy += fixed[i][digits[:, i]]
        e_counts += np.bincount(energy, minlength=max_e + 1)
        for i in range(n):
            for a in range(3):
                sel = digits[:, i] == a
                cell_counts[i, a] += np.bincount(energy[sel], minlength=max_e + 1)
        if qidx:
            qcode = np.zeros(codes.size, np.int64)
            for k, i in enumerate(qidx):
                qcode += digits[:, i] * 3 ** k
            np.add.at(q_counts, (qcode, energy), 1)
        if keep:
            state_e[codes] = energy

    levels = np.arange(max_e + 1)
    emin = int(np.flatnonzero(e_counts)[0])
    if math.isinf(beta):
        Z = float(e_counts[0])
    else:
        Z = math.fsum(int(c) * math.exp(-beta * e) for e, c in enumerate(e_counts) if c)
    w = _weights(beta, levels, emin)
    norm = math.fsum((e_counts * w).tolist())
    marg = np.array([[math.fsum((cell_counts[i, a] * w).tolist()) for a in range(3)]
                     for i in range(n)]).reshape(n, 3) / norm
    q_probs = None
    if qidx:
        q_probs = np.array([math.fsum((row * w).tolist()) for row in q_counts]) / norm
    s_probs = _weights(beta, state_e, emin) / norm if keep else None
    return GibbsResult(beta, cells, Z, e_counts, emin, marg, query, q_probs, s_probs)
