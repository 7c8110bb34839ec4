"""Geometry and set calculus on finite windows of Z^d.

A :class:`Region` is a subset of Z^d described by a boolean mask over a finite
axis-aligned :class:`Window` plus a flag saying whether every cell outside the
window belongs to it. Finite sets have the flag off, cofinite sets (such as the
0-phase of a breakup) have it on. Operators that would produce cells outside
the window raise :class:`WindowTooSmall` instead of silently truncating.

Complement connectivity uses a virtual vertex at infinity: the window is
padded by one cell and the whole padding shell is treated as one component.
For finite sets in d >= 2 this is exact, since any two cells far from the set
are joined by a path outside the window.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import ndimage

from .errors import WindowTooSmall

Vertex = tuple[int, ...]

EVEN = 0
ODD = 1


def parity(v: Sequence[int]) -> int:
    """Return 0 for even vertices and 1 for odd ones."""
    return sum(v) & 1


def is_even(v: Sequence[int]) -> bool:
    return parity(v) == EVEN


def neighbors(v: Sequence[int]) -> list[Vertex]:
    """The 2d nearest neighbours of ``v``, ordered +e_0, -e_0, +e_1, ..."""
    v = tuple(int(x) for x in v)
    out = []
    for a in range(len(v)):
        for step in (1, -1):
            w = list(v)
            w[a] += step
            out.append(tuple(w))
    return out


def plus_cells(v: Sequence[int]) -> list[Vertex]:
    """``v`` together with its neighbours."""
    return [tuple(v)] + neighbors(v)


def l1(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(abs(a - b) for a, b in zip(u, v))


@dataclass(frozen=True)
class Direction:
    """A signed unit vector ``sign * e_axis``."""

    axis: int
    sign: int = -1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.axis < 0:
            raise ValueError(f"axis must be non-negative, got {self.axis}")

    def vector(self, d: int) -> Vertex:
        if self.axis >= d:
            raise ValueError(f"axis {self.axis} out of range for d={d}")
        return tuple(self.sign if a == self.axis else 0 for a in range(d))

    def opposite(self) -> "Direction":
        return Direction(self.axis, -self.sign)

    @staticmethod
    def all(d: int) -> list["Direction"]:
        return [Direction(a, s) for a in range(d) for s in (-1, 1)]

    @staticmethod
    def parse(text: str) -> "Direction":
        """Parse ``-0``, ``+2`` and similar."""
        text = text.strip()
        if len(text) < 2 or text[0] not in "+-":
            raise ValueError(f"bad direction {text!r}; expected e.g. -0 or +1")
        return Direction(int(text[1:]), 1 if text[0] == "+" else -1)

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.axis}"


DEFAULT_DIRECTION = Direction(0, -1)


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()


def _as_vertex(v: Iterable[int]) -> Vertex:
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class Window:
    """Inclusive box ``lo <= x <= hi``; cells are indexed row-major."""

    lo: Vertex
    hi: Vertex

    def __post_init__(self):
        lo, hi = _as_vertex(self.lo), _as_vertex(self.hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("lo and hi must be non-empty and of equal length")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError(f"empty window lo={lo} hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def around(cls, cells: Iterable[Sequence[int]], pad: int = 1) -> "Window":
        """Bounding box of ``cells`` grown by ``pad`` on every side."""
        arr = np.array([tuple(c) for c in cells], dtype=np.int64)
        if arr.size == 0:
            raise ValueError("cannot build a window around no cells")
        return cls(tuple(arr.min(0) - pad), tuple(arr.max(0) + pad))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @cached_property
    def shape(self) -> tuple[int, ...]:
        return tuple(h - l + 1 for l, h in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = [1] * self.dim
        for a in range(self.dim - 2, -1, -1):
            out[a] = out[a + 1] * self.shape[a + 1]
        return tuple(out)

    @cached_property
    def odd(self) -> np.ndarray:
        """Boolean array marking odd cells."""
        grids = np.indices(self.shape).sum(axis=0) + sum(self.lo)
        arr = (grids & 1).astype(bool)
        arr.setflags(write=False)
        return arr

    @property
    def even(self) -> np.ndarray:
        return ~self.odd

    def contains(self, v: Sequence[int]) -> bool:
        return all(l <= x <= h for x, l, h in zip(v, self.lo, self.hi))

    def local(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) - l for x, l in zip(v, self.lo))

    def index(self, v: Sequence[int]) -> int:
        return sum((int(x) - l) * s for x, l, s in zip(v, self.lo, self.strides))

    def vertex(self, flat: int) -> Vertex:
        return tuple(int(i) + l for i, l in zip(np.unravel_index(flat, self.shape), self.lo))

    def grow(self, k: int = 1) -> "Window":
        return Window(tuple(x - k for x in self.lo), tuple(x + k for x in self.hi))

    def cells(self) -> list[Vertex]:
        return [tuple(int(x) + l for x, l in zip(idx, self.lo)) for idx in np.ndindex(*self.shape)]


def _pad(arr: np.ndarray, fill, width: int = 1) -> np.ndarray:
    out = np.full(tuple(n + 2 * width for n in arr.shape), fill, dtype=arr.dtype)
    out[tuple(slice(width, width + n) for n in arr.shape)] = arr
    return out


def border_clean(arr: np.ndarray, fill) -> bool:
    """True if every cell on the border of ``arr`` equals ``fill``."""
    if min(arr.shape) <= 2:
        return not np.any(arr != fill)
    inner = arr[tuple(slice(1, -1) for _ in arr.shape)]
    return np.count_nonzero(arr != fill) == np.count_nonzero(inner != fill)


def _axis_slice(ndim: int, axis: int, sl: slice) -> tuple:
    idx = [slice(None)] * ndim
    idx[axis] = sl
    return tuple(idx)


def _shift_array(arr: np.ndarray, t: Sequence[int], fill) -> np.ndarray:
    """``out[x] = arr[x - t]`` with ``fill`` where ``x - t`` leaves the array.

    Raises WindowTooSmall if a value different from ``fill`` is pushed out.
    """
    out = np.full_like(arr, fill)
    src, dst = [], []
    for n, s in zip(arr.shape, t):
        if abs(s) >= n:
            src.append(slice(0, 0))
            dst.append(slice(0, 0))
        elif s >= 0:
            src.append(slice(0, n - s))
            dst.append(slice(s, n))
        else:
            src.append(slice(-s, n))
            dst.append(slice(0, n + s))
    kept = arr[tuple(src)]
    out[tuple(dst)] = kept
    if np.count_nonzero(arr != fill) != np.count_nonzero(kept != fill):
        raise WindowTooSmall(f"shift by {tuple(t)} pushes cells out of the window")
    return out


class Region:
    """Subset of Z^d: a mask over ``window`` plus the value taken outside it."""

    __slots__ = ("window", "mask", "outside_full")

    def __init__(self, window: Window, mask, outside_full: bool = False):
        mask = np.array(mask, dtype=bool)
        if mask.shape != window.shape:
            raise ValueError(f"mask shape {mask.shape} does not match window {window.shape}")
        mask.setflags(write=False)
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "outside_full", bool(outside_full))

    def __setattr__(self, name, value):
        raise AttributeError("Region is immutable")

    # construction
    @classmethod
    def empty(cls, window: Window) -> "Region":
        return cls(window, np.zeros(window.shape, bool))

    @classmethod
    def full(cls, window: Window) -> "Region":
        """All of Z^d."""
        return cls(window, np.ones(window.shape, bool), True)

    @classmethod
    def from_cells(cls, window: Window, cells: Iterable[Sequence[int]]) -> "Region":
        mask = np.zeros(window.shape, bool)
        for c in cells:
            if not window.contains(c):
                raise WindowTooSmall(f"cell {tuple(c)} lies outside {window}")
            mask[window.local(c)] = True
        return cls(window, mask)

    # basic queries
    @property
    def is_finite(self) -> bool:
        return not self.outside_full

    def __contains__(self, v) -> bool:
        if self.window.contains(v):
            return bool(self.mask[self.window.local(v)])
        return self.outside_full

    def __len__(self) -> int:
        if self.outside_full:
            raise ValueError("cofinite region has no finite size")
        return int(np.count_nonzero(self.mask))

    def is_empty(self) -> bool:
        return not self.outside_full and not self.mask.any()

    def cells(self) -> list[Vertex]:
        """Member cells inside the window in lexicographic order."""
        lo = np.array(self.window.lo)
        return [tuple(int(x) for x in row) for row in np.argwhere(self.mask) + lo]

    def __iter__(self):
        if self.outside_full:
            raise ValueError("cannot iterate over a cofinite region")
        return iter(self.cells())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return (
            self.window == other.window
            and self.outside_full == other.outside_full
            and np.array_equal(self.mask, other.mask)
        )

    def __hash__(self) -> int:
        return hash((self.window, self.outside_full, self.mask.tobytes()))

    def __repr__(self) -> str:
        kind = "cofinite" if self.outside_full else "finite"
        return f"Region({kind}, {int(self.mask.sum())} of {self.window.size} cells in window)"

    # set algebra
    def _same(self, other: "Region"):
        if self.window != other.window:
            raise ValueError("regions live on different windows; rewindow first")

    def complement(self) -> "Region":
        return Region(self.window, ~self.mask, not self.outside_full)

    __invert__ = complement

    def __or__(self, other: "Region") -> "Region":
        self._same(other)
        return Region(self.window, self.mask | other.mask, self.outside_full or other.outside_full)

    def __and__(self, other: "Region") -> "Region":
        self._same(other)
        return Region(self.window, self.mask & other.mask, self.outside_full and other.outside_full)

    def __sub__(self, other: "Region") -> "Region":
        self._same(other)
        return Region(self.window, self.mask & ~other.mask, self.outside_full and not other.outside_full)

    def __xor__(self, other: "Region") -> "Region":
        self._same(other)
        return Region(self.window, self.mask ^ other.mask, self.outside_full != other.outside_full)

    def issubset(self, other: "Region") -> bool:
        self._same(other)
        if self.outside_full and not other.outside_full:
            return False
        return not np.any(self.mask & ~other.mask)

    __le__ = issubset

    def isdisjoint(self, other: "Region") -> bool:
        return (self & other).is_empty()

    def parity_part(self, par: int) -> "Region":
        """Even (``par=0``) or odd cells of a finite region."""
        if self.outside_full:
            raise ValueError("parity part of a cofinite region is infinite")
        sel = self.window.odd if par == ODD else ~self.window.odd
        return Region(self.window, self.mask & sel)

    def count_parity(self) -> tuple[int, int]:
        """(number of even cells, number of odd cells) of a finite region."""
        n = len(self)
        n_odd = int(np.count_nonzero(self.mask & self.window.odd))
        return n - n_odd, n_odd

    # geometry
    def touches_border(self) -> bool:
        """True if some border cell of the window differs from the outside value."""
        return not border_clean(self.mask, self.outside_full)

    def rewindow(self, window: Window) -> "Region":
        """The same subset of Z^d expressed on another window."""
        if window.dim != self.window.dim:
            raise ValueError("dimension mismatch")
        out = np.full(window.shape, self.outside_full)
        lo = [max(a, b) for a, b in zip(window.lo, self.window.lo)]
        hi = [min(a, b) for a, b in zip(window.hi, self.window.hi)]
        inside = 0
        if all(l <= h for l, h in zip(lo, hi)):
            dst = tuple(slice(l - w, h - w + 1) for l, h, w in zip(lo, hi, window.lo))
            src = tuple(slice(l - w, h - w + 1) for l, h, w in zip(lo, hi, self.window.lo))
            out[dst] = self.mask[src]
            inside = np.count_nonzero(self.mask[src] != self.outside_full)
        if np.count_nonzero(self.mask != self.outside_full) != inside:
            raise WindowTooSmall("region does not fit in the target window")
        return Region(window, out, self.outside_full)

    def shift(self, t: Sequence[int]) -> "Region":
        """``{u + t : u in self}``."""
        return Region(self.window, _shift_array(self.mask, t, self.outside_full), self.outside_full)


def region_from_mask(window: Window, mask, outside_full: bool = False) -> Region:
    return Region(window, mask, outside_full)


def parity_region(window: Window, par: int) -> Region:
    """Even (``par=0``) or odd cells inside the window, as a finite region."""
    return Region(window, window.odd if par == ODD else ~window.odd)


# ---------------------------------------------------------------------------
# neighbourhood operators


def _neighbor_count_padded(padded: np.ndarray, fill: bool) -> np.ndarray:
    p = _pad(padded, fill)
    d = padded.ndim
    total = np.zeros(padded.shape, np.int16)
    core = tuple(slice(1, -1) for _ in range(d))
    for a in range(d):
        for step in (1, -1):
            sl = list(core)
            sl[a] = slice(1 + step, p.shape[a] - 1 + step)
            total += p[tuple(sl)]
    return total


def neighbor_count(U: Region) -> np.ndarray:
    """Number of neighbours of each window cell that lie in ``U``."""
    padded = _pad(U.mask, U.outside_full)
    return _neighbor_count_padded(padded, U.outside_full)[tuple(slice(1, -1) for _ in range(U.window.dim))]


def _finish(U: Region, padded_result: np.ndarray, outside: bool) -> Region:
    """Crop a result computed on the window grown by one, checking it fits."""
    d = U.window.dim
    inner = tuple(slice(1, -1) for _ in range(d))
    ring = padded_result.copy()
    ring[inner] = outside
    if np.any(ring != outside):
        raise WindowTooSmall("result reaches beyond the window; enlarge it by a halo")
    return Region(U.window, padded_result[inner], outside)


def _padded_views(U: Region):
    padded = _pad(U.mask, U.outside_full)
    return padded, _neighbor_count_padded(padded, U.outside_full)


def n_t(U: Region, t: float) -> Region:
    """Cells having at least ``t`` neighbours in ``U``."""
    d = U.window.dim
    t = int(np.ceil(t))
    padded, cnt = _padded_views(U)
    outside = (2 * d if U.outside_full else 0) >= t
    return _finish(U, cnt >= t, outside)


def neighborhood(U: Region) -> Region:
    """N(U): cells adjacent to some cell of ``U``."""
    return n_t(U, 1)


def plus(U: Region) -> Region:
    """U together with its neighbourhood."""
    return U | neighborhood(U)


def internal_boundary(U: Region) -> Region:
    """Cells of ``U`` with a neighbour outside ``U``."""
    m = U.mask
    if U.outside_full and not border_clean(m, True):
        raise WindowTooSmall("result reaches beyond the window; enlarge it by a halo")
    p = _pad(m, U.outside_full)
    core = tuple(slice(1, -1) for _ in range(m.ndim))
    inner = m.copy()
    for a in range(m.ndim):
        for step in (0, 2):
            sl = list(core)
            sl[a] = slice(step, step + m.shape[a])
            inner &= p[tuple(sl)]
    return Region(U.window, m & ~inner)


def external_boundary(U: Region) -> Region:
    """Cells outside ``U`` with a neighbour in ``U``."""
    padded, cnt = _padded_views(U)
    return _finish(U, ~padded & (cnt > 0), False)


def directional_boundary(U: Region, s: Direction) -> Region:
    """``U \\ (U + s)``: cells ``v`` of ``U`` with ``v - s`` outside ``U``."""
    return U - U.shift(s.vector(U.window.dim))


# ---------------------------------------------------------------------------
# edges


def _axis_pad(mask: np.ndarray, axis: int, fill) -> np.ndarray:
    shape = list(mask.shape)
    shape[axis] += 2
    out = np.full(shape, fill, dtype=mask.dtype)
    out[_axis_slice(mask.ndim, axis, slice(1, -1))] = mask
    return out


def _lo_hi(mask: np.ndarray, axis: int, fill):
    """Values at the lower and upper endpoint of every edge along ``axis``."""
    p = _axis_pad(mask, axis, fill)
    return p[_axis_slice(p.ndim, axis, slice(0, -1))], p[_axis_slice(p.ndim, axis, slice(1, None))]


class EdgeSet:
    """Set of nearest-neighbour edges with at least one endpoint in the window.

    ``arrays[a]`` has the window shape extended by one along axis ``a``; entry
    ``k`` along that axis stands for the edge between window coordinates
    ``lo_a + k - 1`` and ``lo_a + k``.
    """

    __slots__ = ("window", "arrays")

    def __init__(self, window: Window, arrays: Sequence[np.ndarray]):
        arrays = tuple(np.array(a, dtype=bool) for a in arrays)
        for a, arr in enumerate(arrays):
            expect = tuple(n + (1 if b == a else 0) for b, n in enumerate(window.shape))
            if arr.shape != expect:
                raise ValueError(f"edge array {a} has shape {arr.shape}, expected {expect}")
            arr.setflags(write=False)
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "arrays", arrays)

    def __setattr__(self, name, value):
        raise AttributeError("EdgeSet is immutable")

    @classmethod
    def empty(cls, window: Window) -> "EdgeSet":
        return cls(window, [np.zeros(tuple(n + (b == a) for b, n in enumerate(window.shape)), bool)
                            for a in range(window.dim)])

    @classmethod
    def from_pairs(cls, window: Window, pairs: Iterable[tuple[Sequence[int], Sequence[int]]]) -> "EdgeSet":
        arrays = [a.copy() for a in cls.empty(window).arrays]
        for u, v in pairs:
            arrays_idx = cls._locate(window, u, v)
            arrays[arrays_idx[0]][arrays_idx[1]] = True
        return cls(window, arrays)

    @staticmethod
    def _locate(window: Window, u, v):
        u, v = _as_vertex(u), _as_vertex(v)
        diff = [b - a for a, b in zip(u, v)]
        if sorted(map(abs, diff)) != [0] * (len(u) - 1) + [1]:
            raise ValueError(f"{u} and {v} are not adjacent")
        a = next(i for i, x in enumerate(diff) if x)
        upper = v if diff[a] > 0 else u
        idx = list(window.local(upper))
        for b, x in enumerate(idx):
            limit = window.shape[b] + (1 if b == a else 0)
            if not 0 <= x < limit:
                raise WindowTooSmall(f"edge {u}-{v} has no endpoint in the window")
        return a, tuple(idx)

    def __contains__(self, edge) -> bool:
        u, v = edge
        try:
            a, idx = self._locate(self.window, u, v)
        except WindowTooSmall:
            return False
        return bool(self.arrays[a][idx])

    def __len__(self) -> int:
        return int(sum(np.count_nonzero(a) for a in self.arrays))

    def _same(self, other: "EdgeSet"):
        if self.window != other.window:
            raise ValueError("edge sets live on different windows")

    def __or__(self, other):
        self._same(other)
        return EdgeSet(self.window, [a | b for a, b in zip(self.arrays, other.arrays)])

    def __and__(self, other):
        self._same(other)
        return EdgeSet(self.window, [a & b for a, b in zip(self.arrays, other.arrays)])

    def __sub__(self, other):
        self._same(other)
        return EdgeSet(self.window, [a & ~b for a, b in zip(self.arrays, other.arrays)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeSet):
            return NotImplemented
        return self.window == other.window and all(
            np.array_equal(a, b) for a, b in zip(self.arrays, other.arrays))

    def __hash__(self):
        return hash((self.window,) + tuple(a.tobytes() for a in self.arrays))

    def issubset(self, other: "EdgeSet") -> bool:
        self._same(other)
        return all(not np.any(a & ~b) for a, b in zip(self.arrays, other.arrays))

    __le__ = issubset

    def isdisjoint(self, other: "EdgeSet") -> bool:
        return len(self & other) == 0

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        """Sorted list of ``(u, u + e_a)`` pairs."""
        out = []
        for a, arr in enumerate(self.arrays):
            for idx in np.argwhere(arr):
                upper = [int(i) + l for i, l in zip(idx, self.window.lo)]
                lower = list(upper)
                lower[a] -= 1
                out.append((tuple(lower), tuple(upper)))
        out.sort()
        return out

    def __iter__(self):
        return iter(self.edges())

    def __repr__(self) -> str:
        return f"EdgeSet({len(self)} edges)"

    def shift(self, t: Sequence[int]) -> "EdgeSet":
        """``{e + t : e in self}``."""
        return EdgeSet(self.window, [_shift_array(arr, t, False) for arr in self.arrays])

    def incidence(self) -> np.ndarray:
        """Number of edges of the set at each window cell."""
        total = np.zeros(self.window.shape, np.int16)
        for a, arr in enumerate(self.arrays):
            total += arr[_axis_slice(arr.ndim, a, slice(0, -1))]
            total += arr[_axis_slice(arr.ndim, a, slice(1, None))]
        return total

    def endpoints(self) -> Region:
        """Cells incident to some edge of the set."""
        for a, arr in enumerate(self.arrays):
            ends = arr[_axis_slice(arr.ndim, a, slice(0, None, arr.shape[a] - 1))]
            if ends.any():
                raise WindowTooSmall("an edge has an endpoint outside the window")
        return Region(self.window, self.incidence() > 0)


def edge_boundary(U: Region) -> EdgeSet:
    """Edges with exactly one endpoint in ``U``."""
    arrays = []
    for a in range(U.window.dim):
        lo, hi = _lo_hi(U.mask, a, U.outside_full)
        arrays.append(lo != hi)
    return EdgeSet(U.window, arrays)


def edges_between(A: Region, B: Region) -> EdgeSet:
    """Edges with one endpoint in ``A`` and the other in ``B``."""
    A._same(B)
    arrays = []
    for a in range(A.window.dim):
        alo, ahi = _lo_hi(A.mask, a, A.outside_full)
        blo, bhi = _lo_hi(B.mask, a, B.outside_full)
        arrays.append((alo & bhi) | (blo & ahi))
    return EdgeSet(A.window, arrays)


def edges_within(A: Region) -> EdgeSet:
    """Edges with both endpoints in ``A``."""
    arrays = []
    for a in range(A.window.dim):
        lo, hi = _lo_hi(A.mask, a, A.outside_full)
        arrays.append(lo & hi)
    return EdgeSet(A.window, arrays)


def edges_touching(A: Region) -> EdgeSet:
    """Edges with at least one endpoint in ``A``."""
    arrays = []
    for a in range(A.window.dim):
        lo, hi = _lo_hi(A.mask, a, A.outside_full)
        arrays.append(lo | hi)
    return EdgeSet(A.window, arrays)


# ---------------------------------------------------------------------------
# connectivity


@functools.lru_cache(maxsize=None)
def _cross(ndim: int) -> np.ndarray:
    return ndimage.generate_binary_structure(ndim, 1)


def _label(mask: np.ndarray):
    return ndimage.label(mask, structure=_cross(mask.ndim))


def connected_components(U: Region) -> list[Region]:
    """Connected components of ``U``.

    Finite components come in order of their lexicographically smallest cell.
    For a cofinite ``U`` the single infinite component is listed first.
    """
    d = U.window.dim
    inner = tuple(slice(1, -1) for _ in range(d))
    if not U.outside_full:
        labels, n = _label(U.mask)
        return [Region(U.window, labels == k) for k in range(1, n + 1)]
    if d == 1:
        raise ValueError("components of cofinite sets need d >= 2")
    padded = _pad(U.mask, True)
    labels, n = _label(padded)
    inf = labels[(0,) * d]
    out = [Region(U.window, labels[inner] == inf, True)]
    out += [Region(U.window, labels[inner] == k) for k in range(1, n + 1) if k != inf]
    return out


def is_connected(U: Region) -> bool:
    return len(connected_components(U)) <= 1


def is_co_connected(U: Region) -> bool:
    return is_connected(U.complement())


def component_of(U: Region, v: Sequence[int]) -> Region:
    """The connected component of ``U`` containing ``v`` (empty if ``v`` is not in ``U``)."""
    if v not in U:
        return Region.empty(U.window)
    if not U.window.contains(v):
        return connected_components(U)[0]
    for comp in connected_components(U):
        if v in comp:
            return comp
    raise AssertionError("unreachable")


def co_connected_closure(U: Region, anchor) -> Region:
    """Complement of the component of ``Z^d \\ U`` containing ``anchor``.

    ``anchor`` is a vertex or :data:`INFINITY`. The result is all of Z^d when
    the anchor lies in ``U``.
    """
    d = U.window.dim
    if anchor is not INFINITY:
        anchor = _as_vertex(anchor)
        if anchor in U:
            return Region.full(U.window)
        if not U.window.contains(anchor):
            anchor = INFINITY
    if anchor is INFINITY:
        if U.outside_full:
            return Region.full(U.window)
        if d == 1:
            raise ValueError("closure with respect to infinity needs d >= 2")
    # label the complement on a one-cell border standing in for the outside
    labels, _ = _label(_pad(~U.mask, not U.outside_full))
    inner = tuple(slice(1, -1) for _ in range(d))
    k = labels[(0,) * d] if anchor is INFINITY else labels[tuple(x + 1 for x in U.window.local(anchor))]
    comp = labels == k
    return Region(U.window, ~comp[inner], not bool(comp[(0,) * d]))


# ---------------------------------------------------------------------------
# parity classes of sets


def is_odd_set(U: Region) -> bool:
    """Internal boundary consists of odd cells only."""
    return not np.any(internal_boundary(U).mask & ~U.window.odd)


def is_even_set(U: Region) -> bool:
    return not np.any(internal_boundary(U).mask & U.window.odd)


def is_domain(U: Region) -> bool:
    """Finite, non-empty, connected and co-connected."""
    if U.outside_full or U.is_empty():
        return False
    return is_connected(U) and is_co_connected(U)


# ---------------------------------------------------------------------------
# diameters


def _component_diameter(comp: Region) -> int:
    pts = np.argwhere(comp.mask)
    d = pts.shape[1]
    best = 0
    for signs in itertools.product((1, -1), repeat=d - 1):
        proj = pts @ np.array((1,) + signs)
        best = max(best, int(proj.max() - proj.min()))
    return best


def diameter(U: Region) -> int:
    """Sum over connected components of their largest L1 distance."""
    if U.outside_full:
        raise ValueError("diameter of a cofinite region is infinite")
    return sum(_component_diameter(c) for c in connected_components(U))


def diam_plus(U: Region) -> int:
    """Diameter plus three per connected component."""
    if U.outside_full:
        raise ValueError("diameter of a cofinite region is infinite")
    comps = connected_components(U)
    return sum(_component_diameter(c) for c in comps) + 3 * len(comps)
