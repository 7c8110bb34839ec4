"""Text formats for colorings (pc3), four-sections (k4) and mod functions (h).

All three are ASCII with LF newlines, a versioned first line, ``key value``
header lines in a fixed order, a digit body and an ``end`` line. Serializing
a parsed document reproduces the input bytes.

pc3::

    pc3 1
    dim 2
    window -1 -1 4 4          # lo corner then hi corner, inclusive
    domain box 4x4 even       # or: named plus / mask
    bc even0                  # even0..odd2 or explicit
    beta 4.0                  # float repr, inf allowed
    rng xoshiro256starstar-splitmix64-v1
    seed 0
    steps 1000
    data
    010101                    # one digit per cell, rows along the last axis
    ...
    mask                      # only for "domain mask": 1 marks a free cell
    ...
    end

A file may hold several documents back to back (snapshot streams). For
explicit boundary values the off-domain body digits are the values.

k4::

    k4 1
    dim 2
    window -1 -1 4 4
    anchor rho 1 0            # or: anchor set N x1 y1 ... / anchor none
    data
    ...                       # labels 0..3
    L 12
    M 0
    trivial 0
    adapted 1
    connected 1
    end

L, M, trivial and connected are recomputed on parsing and must match.

h::

    h 1
    dim 2
    window -1 -1 4 4
    direction -0
    support 3
    1 0 1                     # coordinates then the bit
    ...
    end
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .breakup import FourSection, validate_connected
from .errors import FormatError
from .glauber import RNG_ID
from .lattice import Direction, Region, Window
from .model import BoundaryCondition, Coloring, box_domain, named_domain
from .transform import ModFunction

PC3_VERSION = 1
K4_VERSION = 1
H_VERSION = 1


# ---------------------------------------------------------------------------
# helpers


class _Lines:
    """Cursor over LF-separated lines with 1-based numbers for errors."""

    def __init__(self, text: str, start: int = 0):
        if "\r" in text:
            raise FormatError("carriage returns are not allowed; use LF newlines")
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        else:
            raise FormatError("file must end with a newline", len(self.lines))
        self.pos = start

    @property
    def lineno(self) -> int:
        return self.pos + 1

    def done(self) -> bool:
        return self.pos >= len(self.lines)

    def next(self, what: str) -> str:
        if self.done():
            raise FormatError(f"unexpected end of file, expected {what}", self.lineno)
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def key(self, key: str) -> list[str]:
        line = self.next(f"'{key}' line")
        parts = line.split(" ")
        if parts[0] != key:
            raise FormatError(f"expected '{key}', got {line!r}", self.lineno - 1)
        return parts[1:]

    def error(self, message: str, back: int = 1) -> FormatError:
        return FormatError(message, self.lineno - back)


def _ints(parts: Sequence[str], lines: _Lines, what: str) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise lines.error(f"{what} must be integers") from None


def _one_int(parts, lines, what) -> int:
    if len(parts) != 1:
        raise lines.error(f"{what} takes one value")
    return _ints(parts, lines, what)[0]


def _version(lines: _Lines, magic: str, version: int):
    parts = lines.key(magic)
    if parts != [str(version)]:
        raise lines.error(f"unsupported {magic} version {' '.join(parts)!r}, expected {version}")


def _read_dim_window(lines: _Lines) -> tuple[int, Window]:
    d = _one_int(lines.key("dim"), lines, "dim")
    if d < 1:
        raise lines.error("dim must be positive")
    coords = _ints(lines.key("window"), lines, "window corners")
    if len(coords) != 2 * d:
        raise lines.error(f"window needs {2 * d} integers")
    try:
        w = Window(tuple(coords[:d]), tuple(coords[d:]))
    except ValueError as exc:
        raise lines.error(str(exc)) from None
    return d, w


def _write_dim_window(w: Window) -> list[str]:
    return [f"dim {w.dim}", "window " + " ".join(str(x) for x in (*w.lo, *w.hi))]


def _body_lines(arr: np.ndarray) -> list[str]:
    rows = arr.reshape(-1, arr.shape[-1])
    table = np.frombuffer(b"0123456789", np.uint8)
    return [table[r].tobytes().decode("ascii") for r in rows]


def _read_body(lines: _Lines, shape: tuple, digits: str) -> np.ndarray:
    n_rows = int(np.prod(shape[:-1])) if len(shape) > 1 else 1
    width = shape[-1]
    rows = []
    for _ in range(n_rows):
        line = lines.next("a body row")
        if len(line) != width:
            raise lines.error(f"body row must have {width} digits, got {len(line)}")
        bad = set(line) - set(digits)
        if bad:
            raise lines.error(f"body digits must be in {digits}, got {sorted(bad)[0]!r}")
        rows.append(np.frombuffer(line.encode("ascii"), np.uint8) - ord("0"))
    return np.array(rows, np.int8).reshape(shape)


def _format_beta(beta: float) -> str:
    return repr(float(beta))


def _parse_beta(parts, lines) -> float:
    if len(parts) != 1:
        raise lines.error("beta takes one value")
    try:
        beta = float(parts[0])
    except ValueError:
        raise lines.error(f"bad beta {parts[0]!r}") from None
    if math.isnan(beta) or beta < 0:
        raise lines.error("beta must be non-negative")
    return beta


# ---------------------------------------------------------------------------
# pc3


def box_spec(shape: Sequence[int], par: str = "even") -> str:
    return "box " + "x".join(str(int(n)) for n in shape) + f" {par}"


def domain_from_spec(spec: str, d: int) -> Region | None:
    """Domain for ``box ...`` or ``named ...``; ``None`` for ``mask``."""
    parts = spec.split(" ")
    if parts == ["mask"]:
        return None
    if parts[0] == "box" and len(parts) == 3 and parts[2] in ("even", "odd"):
        shape = tuple(int(x) for x in parts[1].split("x"))
        if len(shape) != d:
            raise ValueError(f"box {parts[1]} does not have {d} sides")
        return box_domain(shape, 0 if parts[2] == "even" else 1)
    if parts[0] == "named" and len(parts) == 2:
        return named_domain(parts[1], d)
    raise ValueError(f"bad domain {spec!r}; expected 'box NxM even|odd', 'named NAME' or 'mask'")


@dataclass
class Pc3File:
    coloring: Coloring
    domain: str = "mask"
    beta: float = 0.0
    rng: str = RNG_ID
    seed: int = 0
    steps: int = 0

    def __eq__(self, other):
        if not isinstance(other, Pc3File):
            return NotImplemented
        return (self.coloring == other.coloring and self.domain == other.domain
                and _format_beta(self.beta) == _format_beta(other.beta)
                and (self.rng, self.seed, self.steps) == (other.rng, other.seed, other.steps))

    def replace_coloring(self, f: Coloring) -> "Pc3File":
        return Pc3File(f, self.domain, self.beta, self.rng, self.seed, self.steps)


def write_pc3(doc: Pc3File) -> str:
    f = doc.coloring
    if doc.domain != "mask":
        lam = domain_from_spec(doc.domain, f.dim)
        if lam != f.lam:
            raise ValueError(f"domain spec {doc.domain!r} does not describe the coloring's domain")
    out = [f"pc3 {PC3_VERSION}", *_write_dim_window(f.window), f"domain {doc.domain}",
           f"bc {f.bc.name}", f"beta {_format_beta(doc.beta)}", f"rng {doc.rng}",
           f"seed {int(doc.seed)}", f"steps {int(doc.steps)}", "data"]
    out += _body_lines(f.colors)
    if doc.domain == "mask":
        out.append("mask")
        out += _body_lines(f.lam.mask.astype(np.int8))
    out.append("end")
    return "\n".join(out) + "\n"


def _read_pc3_doc(lines: _Lines) -> Pc3File:
    _version(lines, "pc3", PC3_VERSION)
    d, w = _read_dim_window(lines)
    spec = " ".join(lines.key("domain"))
    try:
        lam = domain_from_spec(spec, d)
    except ValueError as exc:
        raise lines.error(str(exc)) from None
    if lam is not None and lam.window != w:
        raise lines.error(f"window does not match domain {spec!r}")
    bc_parts = lines.key("bc")
    if len(bc_parts) != 1:
        raise lines.error("bc takes one value")
    bc_line = lines.lineno - 1
    beta = _parse_beta(lines.key("beta"), lines)
    rng = " ".join(lines.key("rng"))
    seed = _one_int(lines.key("seed"), lines, "seed")
    steps = _one_int(lines.key("steps"), lines, "steps")
    if lines.key("data") != []:
        raise lines.error("'data' takes no value")
    data_line = lines.lineno
    colors = _read_body(lines, w.shape, "012")
    if lam is None:
        if lines.key("mask") != []:
            raise lines.error("'mask' takes no value")
        lam = Region(w, _read_body(lines, w.shape, "01").astype(bool))
    if lines.key("end") != []:
        raise lines.error("'end' takes no value")
    if bc_parts[0] == "explicit":
        bc = BoundaryCondition.explicit(colors)
    else:
        try:
            bc = BoundaryCondition.parse(bc_parts[0])
        except ValueError as exc:
            raise FormatError(str(exc), bc_line) from None
        if BoundaryCondition.parse(bc_parts[0]).name != bc_parts[0]:
            raise FormatError(f"write the boundary condition as {bc.name}", bc_line)
    try:
        f = Coloring(lam, bc, colors)
    except ValueError as exc:
        raise FormatError(f"body inconsistent with domain and bc: {exc}", data_line) from None
    return Pc3File(f, spec, beta, rng, seed, steps)


def read_pc3_stream(text: str) -> list[Pc3File]:
    """All documents of a (possibly multi-document) pc3 text."""
    lines = _Lines(text)
    docs = []
    while not lines.done():
        docs.append(_read_pc3_doc(lines))
    if not docs:
        raise FormatError("empty pc3 file", 1)
    return docs


def read_pc3(text: str) -> Pc3File:
    docs = read_pc3_stream(text)
    if len(docs) != 1:
        raise FormatError(f"expected one pc3 document, found {len(docs)}")
    return docs[0]


# ---------------------------------------------------------------------------
# k4


@dataclass
class K4File:
    """A four-section with its anchor (``rho``, a set of cells, or none) and the adapted flag."""

    section: FourSection
    anchor: object = None
    adapted: bool = False
    anchor_kind: str = field(init=False)

    def __post_init__(self):
        if self.anchor is None:
            self.anchor_kind = "none"
        elif isinstance(self.anchor, tuple) and all(isinstance(x, (int, np.integer)) for x in self.anchor):
            self.anchor_kind = "rho"
            self.anchor = tuple(int(x) for x in self.anchor)
        else:
            self.anchor_kind = "set"
            self.anchor = tuple(sorted(tuple(int(x) for x in c) for c in self.anchor))

    def __eq__(self, other):
        if not isinstance(other, K4File):
            return NotImplemented
        return (self.section == other.section and self.anchor_kind == other.anchor_kind
                and self.anchor == other.anchor and self.adapted == other.adapted)

    def trailer(self) -> dict:
        K = self.section
        return {"L": K.L, "M": K.M, "trivial": int(K.is_trivial), "adapted": int(self.adapted),
                "connected": int(bool(validate_connected(K)))}


def write_k4(doc: K4File) -> str:
    K = doc.section
    out = [f"k4 {K4_VERSION}", *_write_dim_window(K.window)]
    if doc.anchor_kind == "none":
        out.append("anchor none")
    elif doc.anchor_kind == "rho":
        out.append("anchor rho " + " ".join(str(x) for x in doc.anchor))
    else:
        flat = [str(x) for c in doc.anchor for x in c]
        out.append(f"anchor set {len(doc.anchor)}" + "".join(" " + x for x in flat))
    out.append("data")
    out += _body_lines(K.labels)
    out += [f"{k} {v}" for k, v in doc.trailer().items()]
    out.append("end")
    return "\n".join(out) + "\n"


def read_k4(text: str) -> K4File:
    lines = _Lines(text)
    _version(lines, "k4", K4_VERSION)
    d, w = _read_dim_window(lines)
    parts = lines.key("anchor")
    if parts == ["none"]:
        anchor = None
    elif parts and parts[0] == "rho":
        coords = _ints(parts[1:], lines, "rho")
        if len(coords) != d:
            raise lines.error(f"rho needs {d} coordinates")
        anchor = tuple(coords)
    elif parts and parts[0] == "set":
        nums = _ints(parts[1:], lines, "anchor set")
        if not nums or len(nums) != 1 + nums[0] * d:
            raise lines.error("anchor set: a count followed by that many cells")
        anchor = [tuple(nums[1 + k * d: 1 + (k + 1) * d]) for k in range(nums[0])]
    else:
        raise lines.error("anchor must be 'none', 'rho ...' or 'set ...'")
    if lines.key("data") != []:
        raise lines.error("'data' takes no value")
    data_line = lines.lineno
    labels = _read_body(lines, w.shape, "0123")
    try:
        K = FourSection(w, labels)
    except ValueError as exc:
        raise FormatError(str(exc), data_line) from None
    values = {}
    for key in ("L", "M", "trivial", "adapted", "connected"):
        values[key] = (_one_int(lines.key(key), lines, key), lines.lineno - 1)
    if lines.key("end") != []:
        raise lines.error("'end' takes no value")
    if not lines.done():
        raise FormatError("trailing content after 'end'", lines.lineno)
    if values["adapted"][0] not in (0, 1):
        raise FormatError("adapted must be 0 or 1", values["adapted"][1])
    doc = K4File(K, anchor, bool(values["adapted"][0]))
    for key, want in doc.trailer().items():
        got, line = values[key]
        if got != want:
            raise FormatError(f"{key} is {got} but the labels give {want}", line)
    return doc


# ---------------------------------------------------------------------------
# h


def write_h(h: ModFunction, direction: Direction) -> str:
    w = h.support.window
    cells = h.support.cells()
    out = [f"h {H_VERSION}", *_write_dim_window(w), f"direction {direction}", f"support {len(cells)}"]
    for c, b in zip(cells, h.bits()):
        out.append(" ".join(str(x) for x in c) + f" {b}")
    out.append("end")
    return "\n".join(out) + "\n"


def read_h(text: str) -> tuple[ModFunction, Direction]:
    lines = _Lines(text)
    _version(lines, "h", H_VERSION)
    d, w = _read_dim_window(lines)
    parts = lines.key("direction")
    try:
        direction = Direction.parse(" ".join(parts))
        direction.vector(d)
    except ValueError as exc:
        raise lines.error(str(exc)) from None
    n = _one_int(lines.key("support"), lines, "support")
    cells, bits = [], []
    for _ in range(n):
        vals = _ints(lines.next("a support line").split(" "), lines, "support line")
        if len(vals) != d + 1 or vals[-1] not in (0, 1):
            raise lines.error(f"support line needs {d} coordinates and a bit 0/1")
        c = tuple(vals[:-1])
        if not w.contains(c):
            raise lines.error(f"{c} lies outside the window")
        if cells and c <= cells[-1]:
            raise lines.error("support cells must be listed in increasing lexicographic order")
        cells.append(c)
        bits.append(vals[-1])
    if lines.key("end") != []:
        raise lines.error("'end' takes no value")
    if not lines.done():
        raise FormatError("trailing content after 'end'", lines.lineno)
    support = Region.from_cells(w, cells)
    return ModFunction.from_bits(support, bits), direction
