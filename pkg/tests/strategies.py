"""Hypothesis strategies for small lattice objects."""

from hypothesis import strategies as st

from afpotts.lattice import Region, Window
from afpotts.model import BoundaryCondition, Coloring, box_domain

W2 = Window((-3, -3), (5, 5))
W3 = Window((-2, -2, -2), (3, 3, 3))


def inner_cells(window, margin=1):
    return [c for c in window.cells()
            if all(lo + margin <= x <= hi - margin for x, lo, hi in zip(c, window.lo, window.hi))]


def cell_sets(window=W2, margin=1, max_size=25):
    return st.sets(st.sampled_from(inner_cells(window, margin)), max_size=max_size)


def regions(window=W2, margin=1, max_size=25):
    return cell_sets(window, margin, max_size).map(lambda s: Region.from_cells(window, s))


LAM2 = box_domain((6, 6))
LAM3 = box_domain((4, 4, 4))


@st.composite
def colorings(draw, lam=LAM2):
    """Even-0 pattern with a random number of arbitrary defects."""
    f = Coloring(lam, BoundaryCondition.even(0))
    cells = lam.cells()
    for c in cells:
        f[c] = 0 if sum(c) % 2 == 0 else draw(st.integers(1, 2))
    defects = draw(st.lists(st.tuples(st.sampled_from(cells), st.integers(0, 2)), max_size=len(cells)))
    for c, v in defects:
        f[c] = v
    return f
