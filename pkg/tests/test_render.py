import numpy as np
import pytest

from afpotts.glauber import init_pure
from afpotts.model import BoundaryCondition, box_domain
from afpotts.render import (BACKGROUND, OUTER, SINGULAR, VALUE_GRAY, VIOLATION, render, slab,
                            violation_classes, violation_image)
from strategies import LAM2

EVEN0 = BoundaryCondition.even(0)


def parse_header(data):
    magic, dims, maxval, rest = data.split(b"\n", 3)
    w, h = map(int, dims.split())
    return magic, w, h, int(maxval), rest


def test_value_render_header_and_pixels():
    f = init_pure(LAM2, EVEN0, 0)
    data = render(f, "value", scale=2)
    magic, w, h, mx, px = parse_header(data)
    assert (magic, mx) == (b"P5", 255)
    assert (h, w) == tuple(2 * n for n in f.window.shape)
    img = np.frombuffer(px, np.uint8).reshape(h, w)
    assert np.array_equal(img[::2, ::2], VALUE_GRAY[f.colors])


def test_pure_violation_render_is_blank():
    f = init_pure(LAM2, EVEN0, 0)
    magic, w, h, _, px = parse_header(render(f, "violation"))
    assert magic == b"P6"
    img = np.frombuffer(px, np.uint8).reshape(h, w, 3)
    assert np.all(img == BACKGROUND)


def test_violation_classes_priority():
    f = init_pure(LAM2, EVEN0, 0)
    f[(2, 2)] = 1
    # (2,2) is now a violation; if it matches an odd neighbour it is also singular
    cls = violation_classes(f)
    w = f.window
    odd_nbr_colors = {f[n] for n in [(1, 2), (3, 2), (2, 1), (2, 3)]}
    assert cls[w.local((2, 2))] == (3 if 1 in odd_nbr_colors else 2)
    img = violation_image(f)
    assert tuple(img[w.local((2, 2))]) in (SINGULAR, VIOLATION)
    assert any(tuple(img[w.local(n)]) in (OUTER, SINGULAR) for n in [(1, 2), (3, 2)])


def test_render_is_deterministic():
    f = init_pure(box_domain((5, 5, 5)), EVEN0, 4)
    a = render(f, "violation", axes=[2], indices=[2])
    assert a == render(f, "violation", axes=[2], indices=[2])


def test_slab_rules():
    f = init_pure(box_domain((4, 4, 4)), EVEN0, 0)
    w = f.window
    with pytest.raises(ValueError):
        render(f, "value")
    assert slab(f.colors, w, [0], [1]).shape == w.shape[1:]
    assert slab(f.colors, w, [0, 1], [1, 1]).shape == (1, w.shape[2])
    with pytest.raises(ValueError):
        slab(f.colors, w, [0], [99])
    with pytest.raises(ValueError):
        slab(f.colors, w, [0, 0], [1, 1])
    with pytest.raises(ValueError):
        render(f, "heat", axes=[0], indices=[1])
