"""Single-site heat-bath Glauber dynamics.

Random numbers come from xoshiro256** (Blackman and Vigna). A 64-bit seed is
split into independent substreams: word ``j`` of the state of stream ``k`` is
``splitmix64_mix(seed + (4k + j + 1) * 0x9E3779B97F4A7C15)``. Chain ``c``
uses stream ``2c`` for its dynamics and ``2c + 1`` for its initial coloring,
so trajectories depend only on ``(seed, chain)`` and are identical across
platforms. The identifier :data:`RNG_ID` is written into every output file.

Each step draws one word to pick a free cell (multiply-high reduction of the
top 32 bits) and one word for a 53-bit uniform used to select the new color
from weights ``exp(-beta * (n_a - min_b n_b))``, where ``n_a`` counts
neighbours of color ``a``. At ``beta = inf`` the weights are 1 on the
minimizers and 0 elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numba
import numpy as np

from .errors import BoundaryConditionError
from .model import BoundaryCondition, Coloring, hamiltonian, validate_bc
from .lattice import Region

RNG_ID = "xoshiro256starstar-splitmix64-v1"
_GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def _splitmix_mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_state(seed: int, stream: int) -> np.ndarray:
    """Initial xoshiro256** state of substream ``stream`` of ``seed``."""
    seed &= _MASK
    words = [_splitmix_mix(seed + (4 * stream + j + 1) * _GOLDEN) for j in range(4)]
    if not any(words):
        words[0] = 1
    return np.array(words, dtype=np.uint64)


def dynamics_stream(chain: int) -> int:
    return 2 * chain


def init_stream(chain: int) -> int:
    return 2 * chain + 1


@numba.njit(cache=True)
def _rotl(x, k):
    return (x << k) | (x >> (np.uint64(64) - k))


@numba.njit(cache=True)
def _next(s):
    result = _rotl(s[1] * np.uint64(5), np.uint64(7)) * np.uint64(9)
    t = s[1] << np.uint64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], np.uint64(45))
    return result


@numba.njit(cache=True)
def _words(s, n):
    out = np.empty(n, np.uint64)
    for i in range(n):
        out[i] = _next(s)
    return out


@numba.njit(cache=True)
def _step(colors, cells, offsets, weights, s):
    """One heat-bath update; returns the energy change."""
    n = np.uint64(cells.shape[0])
    x = _next(s)
    v = cells[np.int64(((x >> np.uint64(32)) * n) >> np.uint64(32))]
    c0 = 0
    c1 = 0
    c2 = 0
    for o in offsets:
        c = colors[v + o]
        if c == 0:
            c0 += 1
        elif c == 1:
            c1 += 1
        else:
            c2 += 1
    m = min(c0, c1, c2)
    w0 = weights[c0 - m]
    w1 = weights[c1 - m]
    w2 = weights[c2 - m]
    u = np.float64(_next(s) >> np.uint64(11)) * (1.0 / 9007199254740992.0)
    r = u * (w0 + w1 + w2)
    if r < w0:
        new = 0
    elif r < w0 + w1 or w2 == 0.0:
        new = 1
    else:
        new = 2
    old = colors[v]
    colors[v] = new
    counts = (c0, c1, c2)
    return counts[new] - counts[old]


@numba.njit(cache=True)
def _run(colors, cells, offsets, weights, s, steps, energy):
    for _ in range(steps):
        energy += _step(colors, cells, offsets, weights, s)
    return energy


@numba.njit(cache=True)
def _sample_codes(colors, cells, offsets, weights, s, burn_in, thin, out):
    """Record the domain state code every ``thin`` steps after ``burn_in`` steps."""
    n = cells.shape[0]
    pos = np.empty(colors.shape[0], np.int64)
    pow3 = np.empty(n, np.int64)
    code = 0
    p = 1
    for i in range(n):
        pos[cells[i]] = i
        pow3[i] = p
        code += colors[cells[i]] * p
        p *= 3
    for _ in range(burn_in):
        _step(colors, cells, offsets, weights, s)
    code = 0
    for i in range(n):
        code += colors[cells[i]] * pow3[i]
    nn = np.uint64(n)
    for k in range(out.shape[0]):
        for _ in range(thin):
            # the step is inlined so the state code can be kept in sync
            x = _next(s)
            i = np.int64(((x >> np.uint64(32)) * nn) >> np.uint64(32))
            v = cells[i]
            c0 = 0
            c1 = 0
            c2 = 0
            for o in offsets:
                c = colors[v + o]
                if c == 0:
                    c0 += 1
                elif c == 1:
                    c1 += 1
                else:
                    c2 += 1
            m = min(c0, c1, c2)
            w0 = weights[c0 - m]
            w1 = weights[c1 - m]
            w2 = weights[c2 - m]
            u = np.float64(_next(s) >> np.uint64(11)) * (1.0 / 9007199254740992.0)
            r = u * (w0 + w1 + w2)
            if r < w0:
                new = 0
            elif r < w0 + w1 or w2 == 0.0:
                new = 1
            else:
                new = 2
            code += (new - colors[v]) * pow3[i]
            colors[v] = new
        out[k] = code
    return out


def weight_table(beta: float, d: int) -> np.ndarray:
    """``exp(-beta * k)`` for ``k = 0..2d``; at infinity only ``k = 0`` survives."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    k = np.arange(2 * d + 1, dtype=float)
    if math.isinf(beta):
        return (k == 0).astype(float)
    return np.exp(-beta * k)


def heat_bath_probabilities(counts, beta: float) -> np.ndarray:
    """Conditional law of the new color given neighbour counts ``(n0, n1, n2)``."""
    counts = np.asarray(counts)
    rel = counts - counts.min()
    if math.isinf(beta):
        w = (rel == 0).astype(float)
    else:
        w = np.exp(-beta * rel.astype(float))
    return w / math.fsum(w.tolist())


def _geometry(lam: Region):
    w = lam.window
    cells = np.flatnonzero(lam.mask.ravel()).astype(np.int64)
    offsets = np.array([s * sign for s in w.strides for sign in (1, -1)], dtype=np.int64)
    return cells, offsets


# ---------------------------------------------------------------------------
# configuration and state


@dataclass(frozen=True)
class SamplerConfig:
    beta: float
    steps: int
    seed: int = 0
    init: str = "pure"
    snapshot_every: int = 0
    kernel: str = "heat-bath"

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if self.init not in ("pure", "uniform", "file"):
            raise ValueError(f"init must be pure, uniform or file, got {self.init!r}")
        if self.snapshot_every < 0:
            raise ValueError("snapshot_every must be non-negative")
        if self.kernel != "heat-bath":
            raise ValueError("only the heat-bath kernel is implemented")


@dataclass
class ChainState:
    coloring: Coloring
    energy: int
    rng_state: np.ndarray
    step_index: int = 0
    _geom: tuple | None = field(default=None, repr=False, compare=False)

    def geometry(self):
        if self._geom is None:
            self._geom = _geometry(self.coloring.lam)
        return self._geom


def init_pure(lam: Region, bc: BoundaryCondition, seed: int, chain: int = 0) -> Coloring:
    """Random pure coloring for an even-i or odd-i condition.

    Cells of the halo parity get the boundary color; the others get one of
    the two remaining colors by a fair coin.
    """
    if bc.kind == "explicit":
        raise BoundaryConditionError("pure initialization needs an even-i or odd-i condition")
    f = Coloring(lam, bc)
    w = lam.window
    main = w.even if bc.kind == "even" else w.odd
    colors = f.colors
    colors[lam.mask & main] = bc.color
    other = lam.mask & ~main
    n = int(np.count_nonzero(other))
    bits = _words(stream_state(seed, init_stream(chain)), n) >> np.uint64(63)
    colors[other] = (bc.color + 1 + bits.astype(np.int64)) % 3
    return f


def init_uniform(lam: Region, bc: BoundaryCondition, seed: int, chain: int = 0) -> Coloring:
    f = Coloring(lam, bc)
    n = len(lam)
    x = _words(stream_state(seed, init_stream(chain)), n)
    f.colors[lam.mask] = (((x >> np.uint64(32)) * np.uint64(3)) >> np.uint64(32)).astype(np.int8)
    return f


def new_state(f: Coloring, seed: int, chain: int = 0) -> ChainState:
    return ChainState(f, hamiltonian(f), stream_state(seed, dynamics_stream(chain)), 0)


def heat_bath_step(state: ChainState, beta: float) -> ChainState:
    """Advance ``state`` by one update in place and return it."""
    return advance(state, beta, 1)


def advance(state: ChainState, beta: float, steps: int) -> ChainState:
    cells, offsets = state.geometry()
    weights = weight_table(beta, state.coloring.dim)
    flat = state.coloring.colors.reshape(-1)
    state.energy = int(_run(flat, cells, offsets, weights, state.rng_state, np.int64(steps),
                            np.int64(state.energy)))
    state.step_index += steps
    return state


@dataclass
class RunResult:
    state: ChainState
    snapshots: list = field(default_factory=list)


def run(lam: Region, bc: BoundaryCondition, cfg: SamplerConfig, initial: Coloring | None = None,
        chain: int = 0, on_snapshot: Callable[[int, Coloring], None] | None = None) -> RunResult:
    """Run one chain; a deterministic function of its arguments.

    With ``snapshot_every > 0`` the coloring after every multiple of that
    many steps is passed to ``on_snapshot`` or, if none is given, collected
    in ``RunResult.snapshots`` as ``(step, Coloring)`` pairs.
    """
    verdict = validate_bc(lam, bc)
    if not verdict:
        raise BoundaryConditionError(str(verdict))
    if cfg.init == "file":
        if initial is None:
            raise ValueError("init=file requires an initial coloring")
        f = initial.copy()
    elif cfg.init == "pure":
        f = init_pure(lam, bc, cfg.seed, chain)
    else:
        f = init_uniform(lam, bc, cfg.seed, chain)
    state = new_state(f, cfg.seed, chain)
    result = RunResult(state)
    every = cfg.snapshot_every
    remaining = cfg.steps
    while remaining > 0:
        todo = min(remaining, every) if every else remaining
        advance(state, cfg.beta, todo)
        remaining -= todo
        if every and state.step_index % every == 0:
            snap = state.coloring.copy()
            if on_snapshot is not None:
                on_snapshot(state.step_index, snap)
            else:
                result.snapshots.append((state.step_index, snap))
    return result


def sample_codes(lam: Region, bc: BoundaryCondition, beta: float, n_samples: int, seed: int,
                 chain: int = 0, burn_in: int = 1000, thin: int | None = None,
                 init: str = "uniform") -> np.ndarray:
    """Domain state codes (see :meth:`Coloring.domain_codes`) along one chain.

    The chain starts from ``init``, runs ``burn_in`` steps and then records the
    state every ``thin`` steps (default ``|lam|``).
    """
    if init == "pure":
        f = init_pure(lam, bc, seed, chain)
    else:
        f = init_uniform(lam, bc, seed, chain)
    cells, offsets = _geometry(lam)
    thin = len(lam) if thin is None else thin
    out = np.empty(n_samples, np.int64)
    s = stream_state(seed, dynamics_stream(chain))
    _sample_codes(f.colors.reshape(-1), cells, offsets, weight_table(beta, lam.window.dim), s,
                  np.int64(burn_in), np.int64(thin), out)
    return out
