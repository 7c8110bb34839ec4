"""Binary PGM/PPM renders of colorings and their pattern violations.

Palettes are fixed:

* value render (PGM P5, grayscale): color 0 -> 0, color 1 -> 128, color 2 -> 255;
* violation render (PPM P6): singularities (cells with a same-colored
  neighbour) red ``(214, 39, 40)``, pattern violations dark blue
  ``(31, 60, 140)``, their outer boundary light blue ``(158, 202, 225)``, the
  rest white ``(255, 255, 255)``. Earlier entries take priority.

Images cover the whole window. Axis 0 runs down the image and axis 1 across;
in ``d >= 3`` every other axis must be fixed by a slab.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import lattice as lat
from .breakup import violation_set
from .model import Coloring, improper_edges

VALUE_GRAY = np.array([0, 128, 255], np.uint8)
SINGULAR = (214, 39, 40)
VIOLATION = (31, 60, 140)
OUTER = (158, 202, 225)
BACKGROUND = (255, 255, 255)


def slab(arr: np.ndarray, window: lat.Window, axes: Sequence[int] = (), indices: Sequence[int] = ()) -> np.ndarray:
    """Fix ``axes`` at lattice coordinates ``indices``; the result must be at most 2-D.

    A 1-D result becomes a single image row.
    """
    axes, indices = list(axes), list(indices)
    if len(axes) != len(indices):
        raise ValueError("give one slab index per slab axis")
    if len(set(axes)) != len(axes) or any(not 0 <= a < window.dim for a in axes):
        raise ValueError(f"slab axes must be distinct and in 0..{window.dim - 1}")
    if window.dim - len(axes) > 2:
        need = window.dim - 2
        raise ValueError(f"d={window.dim} needs {need} slab ax{'is' if need == 1 else 'es'} to make a 2-D image")
    idx: list = [slice(None)] * window.dim
    for a, x in zip(axes, indices):
        if not window.lo[a] <= x <= window.hi[a]:
            raise ValueError(f"slab index {x} on axis {a} lies outside {window.lo[a]}..{window.hi[a]}")
        idx[a] = x - window.lo[a]
    out = arr[tuple(idx)]
    if out.ndim == 0:
        out = out.reshape(1, 1)
    elif out.ndim == 1:
        out = out[None, :]
    return out


def _scale(img: np.ndarray, k: int) -> np.ndarray:
    if k < 1:
        raise ValueError("scale must be a positive integer")
    return np.repeat(np.repeat(img, k, axis=0), k, axis=1)


def pgm(img: np.ndarray) -> bytes:
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(img, np.uint8).tobytes()


def ppm(img: np.ndarray) -> bytes:
    h, w, _ = img.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(img, np.uint8).tobytes()


def value_image(f: Coloring, axes=(), indices=(), scale: int = 1) -> np.ndarray:
    return _scale(VALUE_GRAY[slab(f.colors, f.window, axes, indices)], scale)


def violation_classes(f: Coloring) -> np.ndarray:
    """Per-cell class: 0 background, 1 outer boundary, 2 violation, 3 singularity."""
    T = violation_set(f)
    cls = np.zeros(f.window.shape, np.uint8)
    cls[lat.external_boundary(T).mask] = 1
    cls[T.mask] = 2
    cls[improper_edges(f).endpoints().mask] = 3
    return cls


def violation_image(f: Coloring, axes=(), indices=(), scale: int = 1) -> np.ndarray:
    palette = np.array([BACKGROUND, OUTER, VIOLATION, SINGULAR], np.uint8)
    return _scale(palette[slab(violation_classes(f), f.window, axes, indices)], scale)


def render(f: Coloring, kind: str, axes=(), indices=(), scale: int = 1) -> bytes:
    """Encoded image bytes: PGM for ``value``, PPM for ``violation``."""
    if kind == "value":
        return pgm(value_image(f, axes, indices, scale))
    if kind == "violation":
        return ppm(violation_image(f, axes, indices, scale))
    raise ValueError(f"unknown render {kind!r}; choose value or violation")
