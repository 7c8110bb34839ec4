import math

import pytest
from hypothesis import given, strategies as st

from afpotts.breakup import breakup, violation_set
from afpotts.errors import FormatError
from afpotts.formats import (K4File, Pc3File, box_spec, domain_from_spec, read_h, read_k4, read_pc3,
                             read_pc3_stream, write_h, write_k4, write_pc3)
from afpotts.glauber import init_pure
from afpotts.lattice import Direction
from afpotts.model import BoundaryCondition, Coloring, box_domain, named_domain, pattern_bc
from afpotts.transform import ModFunction, down_boundary
from strategies import LAM2, colorings

EVEN0 = BoundaryCondition.even(0)
betas = st.one_of(st.just(math.inf), st.floats(0, 50, allow_nan=False))


@given(colorings(), betas, st.integers(0, 2 ** 63), st.integers(0, 10 ** 12), st.booleans())
def test_pc3_round_trip(f, beta, seed, steps, as_mask):
    doc = Pc3File(f, "mask" if as_mask else box_spec((6, 6)), beta, seed=seed, steps=steps)
    text = write_pc3(doc)
    back = read_pc3(text)
    assert back == doc
    assert write_pc3(back) == text


def test_pc3_explicit_and_named_round_trip():
    lam = named_domain("pair")
    f = Coloring(lam, pattern_bc(lam, EVEN0))
    f[(0, 0)] = 2
    doc = Pc3File(f, "named pair", 1.5)
    text = write_pc3(doc)
    assert "bc explicit" in text
    assert read_pc3(text) == doc


def test_pc3_stream():
    f = init_pure(LAM2, EVEN0, 0)
    g = f.copy()
    g[(2, 2)] = 1
    text = write_pc3(Pc3File(f, box_spec((6, 6)))) + write_pc3(Pc3File(g, box_spec((6, 6))))
    docs = read_pc3_stream(text)
    assert [d.coloring for d in docs] == [f, g]
    with pytest.raises(FormatError):
        read_pc3(text)


def sample_text():
    f = init_pure(LAM2, EVEN0, 0)
    return write_pc3(Pc3File(f, box_spec((6, 6)), 2.0, seed=3, steps=10))


def mutate(text, lineno, new):
    lines = text.split("\n")
    lines[lineno - 1] = new
    return "\n".join(lines)


@pytest.mark.parametrize("lineno,new,msg", [
    (1, "pc3 2", "line 1"),
    (2, "dim two", "line 2"),
    (3, "window 0 0 1", "line 3"),
    (4, "domain box 6x6 neither", "line 4"),
    (5, "bc even7", "line 5"),
    (6, "beta -1", "line 6"),
    (8, "seed x", "line 8"),
    (11, "01201x01", "line 11"),
])
def test_pc3_errors_carry_line_numbers(lineno, new, msg):
    with pytest.raises(FormatError) as exc:
        read_pc3(mutate(sample_text(), lineno, new))
    assert str(exc.value).startswith(msg)


def test_pc3_rejects_boundary_mismatch_and_bad_bytes():
    text = sample_text()
    body = text.split("\n")
    body[10] = "1" + body[10][1:]  # first window cell is off the domain
    with pytest.raises(FormatError):
        read_pc3("\n".join(body))
    with pytest.raises(FormatError):
        read_pc3(text.replace("\n", "\r\n"))
    with pytest.raises(FormatError):
        read_pc3(text.rstrip("\n"))
    with pytest.raises(FormatError):
        read_pc3("")


def test_domain_spec():
    assert domain_from_spec("box 6x6 even", 2) == box_domain((6, 6))
    assert domain_from_spec("mask", 2) is None
    with pytest.raises(ValueError):
        domain_from_spec("box 6x6 even", 3)
    with pytest.raises(ValueError):
        domain_from_spec("circle 3", 2)


@given(colorings(), st.data())
def test_k4_and_h_round_trip(f, data):
    T = violation_set(f).cells()
    rho = data.draw(st.sampled_from(T or f.lam.cells()))
    rep = breakup(f, rho)
    K = rep.section
    for anchor in (rho, None, [rho, f.lam.cells()[0]]):
        doc = K4File(K, anchor, rep.adapted)
        text = write_k4(doc)
        assert read_k4(text) == doc
        assert write_k4(read_k4(text)) == text
    s = data.draw(st.sampled_from(Direction.all(2)))
    D = down_boundary(K, s)
    bits = data.draw(st.lists(st.integers(0, 1), min_size=len(D), max_size=len(D)))
    h = ModFunction.from_bits(D, bits)
    text = write_h(h, s)
    h2, s2 = read_h(text)
    assert s2 == s and h2.bits() == bits and h2.support == D
    assert write_h(h2, s2) == text


def test_k4_trailer_is_verified():
    f = init_pure(LAM2, EVEN0, 0)
    f[(2, 2)] = 1
    text = write_k4(K4File(breakup(f, (2, 2)).section, (2, 2), True))
    lines = text.split("\n")
    k = next(i for i, l in enumerate(lines) if l.startswith("L "))
    lines[k] = "L 999"
    with pytest.raises(FormatError) as exc:
        read_k4("\n".join(lines))
    assert exc.value.line == k + 1


def test_h_rejects_bad_bits():
    f = init_pure(LAM2, EVEN0, 0)
    f[(2, 2)] = 1
    K = breakup(f, (2, 2)).section
    text = write_h(ModFunction.zeros(K), Direction.parse("-0"))
    with pytest.raises(FormatError):
        read_h(text.replace(" 0\nend", " 2\nend"))
