"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O or
parse error. Every flag can also come from ``--config FILE`` holding
``key = value`` lines (``#`` starts a comment); flags given on the command
line win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import analysis
from .breakup import breakup, breakup_around_set
from .checks import SUITES, VerifyConfig, run_suite
from .errors import CapExceeded, FormatError, NotAdaptedError, NotInImageError
from .formats import (K4File, Pc3File, box_spec, read_h, read_k4, read_pc3, read_pc3_stream, write_h,
                      write_k4, write_pc3)
from .glauber import RNG_ID, SamplerConfig, run
from .lattice import DEFAULT_DIRECTION, Direction, Region
from .model import NAMED_DOMAINS, BoundaryCondition, box_domain, exact_gibbs, named_domain, pattern_bc, \
    validate_bc
from .render import render
from .transform import ModFunction, admissible_mod, invert_transform, max_independent_set, transform

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# flag parsing helpers


def parse_beta(text: str) -> float:
    text = str(text).strip().lower()
    if text in ("inf", "infinity"):
        return math.inf
    beta = float(text)
    if math.isnan(beta) or beta < 0:
        raise argparse.ArgumentTypeError("beta must be a non-negative number or inf")
    return beta


def _beta_type(text):
    try:
        return parse_beta(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad beta {text!r}") from None


def _bc_type(text):
    try:
        return BoundaryCondition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cell(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad cell {text!r}; write coordinates like 3,-1") from None


def _cells(text: str) -> list:
    return [_cell(c) for c in text.split(";") if c]


def _ints(text: str) -> list:
    try:
        return [int(x) for x in str(text).split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def _direction_type(text):
    try:
        return Direction.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _shape(text: str) -> tuple:
    try:
        shape = tuple(int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad box {text!r}; write e.g. 72x48") from None
    return shape


def read_config(path: str) -> dict:
    """``key = value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError("config lines must read 'key = value'", n)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise FormatError("empty config key", n)
        out[key.replace("-", "_")] = value
    return out


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="ascii")


def _write(path: str | None, data, binary: bool = False):
    if path is None or path == "-":
        if binary:
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
            sys.stdout.flush()
        return
    p = Path(path)
    if binary:
        p.write_bytes(data)
    else:
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)


def _clean(x):
    """JSON-safe copy: non-finite floats become strings."""
    if isinstance(x, float):
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def dump_json(obj: dict) -> str:
    return json.dumps(_clean({"schema_version": SCHEMA_VERSION, **obj}), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands


def _domain(args) -> tuple:
    bc = args.bc
    if args.domain:
        lam = named_domain(args.domain, args.dim or 2)
        return lam, f"named {args.domain}"
    if not args.box:
        raise UsageError("give --box (e.g. 72x48) or --domain")
    shape = args.box
    if args.dim and args.dim != len(shape):
        raise UsageError(f"--box {'x'.join(map(str, shape))} has {len(shape)} sides but --dim is {args.dim}")
    par = "odd" if bc.kind == "odd" else "even"
    return box_domain(shape, 1 if par == "odd" else 0), box_spec(shape, par)


def cmd_sample(args) -> int:
    lam, spec = _domain(args)
    bc = args.bc
    verdict = validate_bc(lam, bc)
    if not verdict:
        raise UsageError(f"domain and boundary condition do not fit: {verdict}")
    initial = None
    if args.init == "file":
        if not args.init_file:
            raise UsageError("--init file needs --init-file")
        initial = read_pc3(_read_text(args.init_file)).coloring
        if initial.lam != lam or initial.bc != bc:
            raise UsageError("--init-file coloring has a different domain or boundary condition")
    if args.snapshot_every and not args.snapshots:
        raise UsageError("--snapshot-every needs --snapshots FILE")
    cfg = SamplerConfig(args.beta, args.steps, args.seed, args.init, args.snapshot_every)
    snaps = []

    def keep(step, f):
        snaps.append(write_pc3(Pc3File(f, spec, args.beta, RNG_ID, args.seed, step)))

    result = run(lam, bc, cfg, initial=initial, on_snapshot=keep if args.snapshot_every else None)
    _write(args.out, write_pc3(Pc3File(result.state.coloring, spec, args.beta, RNG_ID, args.seed, args.steps)))
    if args.snapshots:
        _write(args.snapshots, "".join(snaps))
    return EXIT_OK


def _slab_args(args, d: int):
    axes, idx = _ints(args.slab_axis or ""), _ints(args.slab_index or "")
    if d >= 3 and (not axes or not idx):
        raise UsageError(f"d={d} renders need --slab-axis and --slab-index")
    return axes, idx


def cmd_analyze(args) -> int:
    docs = read_pc3_stream(_read_text(args.input))
    lam = docs[0].coloring.lam
    probes = None
    if args.probe_u or args.probe_v:
        if not (args.probe_u and args.probe_v):
            raise UsageError("give both --probe-u and --probe-v")
        probes = (_cell(args.probe_u), _cell(args.probe_v))
    try:
        stats = analysis.new_stats(lam, probes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for doc in docs:
        if doc.coloring.lam != lam:
            raise FormatError("all documents of a stream must share the domain")
        analysis.accumulate(stats, doc.coloring, clusters=not args.no_clusters)
    out = stats.to_dict()
    out["occupancy_fractions"] = analysis.occupancy_bias(stats)
    out["event_estimates"] = {k: e.to_dict() for k, e in analysis.estimate_events(stats).items()}
    last = docs[-1]
    out["source"] = {"documents": len(docs), "domain": last.domain, "bc": last.coloring.bc.name,
                     "beta": last.beta, "seed": last.seed, "steps": last.steps}
    if args.render:
        if not args.render_out:
            raise UsageError("--render needs --render-out FILE")
        axes, idx = _slab_args(args, last.coloring.dim)
        try:
            img = render(last.coloring, args.render, axes, idx, args.scale)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _write(args.render_out, img, binary=True)
    _write(args.out, dump_json(out))
    return EXIT_OK


def cmd_breakup(args) -> int:
    doc = read_pc3(_read_text(args.input))
    f = doc.coloring
    if bool(args.rho) == bool(args.set):
        raise UsageError("give exactly one of --rho and --set")
    try:
        if args.rho:
            rho = _cell(args.rho)
            rep = breakup(f, rho)
            anchor = rho
        else:
            cells = _cells(args.set)
            rep = breakup_around_set(f, Region.from_cells(f.window, cells))
            anchor = cells
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, write_k4(K4File(rep.section, anchor, rep.adapted)))
    return EXIT_OK


def _section(args, f):
    if args.k4:
        K = read_k4(_read_text(args.k4)).section
        if K.window != f.window:
            raise UsageError("four-section window differs from the coloring's")
        return K
    if args.rho:
        try:
            return breakup(f, _cell(args.rho)).section
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError("give --k4 FILE or --rho CELL")


def cmd_transform(args) -> int:
    doc = read_pc3(_read_text(args.input))
    direction = args.direction
    if args.invert:
        if not args.k4:
            raise UsageError("--invert needs --k4 FILE")
        K = _section(args, doc.coloring)
        f, h = invert_transform(doc.coloring, K, direction)
        _write(args.out, write_pc3(doc.replace_coloring(f)))
        if args.h_out:
            _write(args.h_out, write_h(h, direction))
        return EXIT_OK
    K = _section(args, doc.coloring)
    if args.h and args.bits is not None:
        raise UsageError("give at most one of --h and --bits")
    if args.h:
        h, hdir = read_h(_read_text(args.h))
        if hdir != direction:
            raise UsageError(f"h file is for direction {hdir}, not {direction}")
    elif args.bits is not None:
        B = max_independent_set(K, direction)
        bits = [int(c) for c in args.bits if c in "01"]
        if len(bits) != len(args.bits) or len(bits) != len(B):
            raise UsageError(f"--bits needs one binary digit per cell of the independent set ({len(B)})")
        h = admissible_mod(K, direction, B, bits)
    else:
        h = ModFunction.zeros(K, direction)
    try:
        g = transform(doc.coloring, K, direction, h)
    except ValueError as exc:
        if isinstance(exc, NotAdaptedError):
            raise
        raise UsageError(str(exc)) from None
    _write(args.out, write_pc3(doc.replace_coloring(g)))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = VerifyConfig(dim=args.dim or 2, max_cells=args.max_cells, seed=args.seed, trials=args.trials)
    try:
        results = run_suite(args.suite, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    lines.append(f"{'PASS' if ok else 'FAIL'} suite {args.suite}: {sum(r.passed for r in results)}/{len(results)} checks")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


def _log_z(res) -> float:
    """Logarithm of Z computed relative to the ground energy, so it survives large beta."""
    if math.isinf(res.beta):
        return math.log(res.Z) if res.Z > 0 else -math.inf
    rel = math.fsum(int(c) * math.exp(-res.beta * (e - res.min_energy))
                    for e, c in enumerate(res.energy_counts) if c)
    return -res.beta * res.min_energy + math.log(rel)


def cmd_exact(args) -> int:
    d = args.dim or 2
    lam = named_domain(args.domain, d)
    bc = args.bc
    if not validate_bc(lam, bc):
        bc = pattern_bc(lam, bc)
    query = _cells(args.query) if args.query else ()
    try:
        res = exact_gibbs(lam, bc, args.beta, query=query, cap=args.cap)
    except KeyError as exc:
        raise UsageError(f"query cell {exc} is not in the domain") from None
    out = {
        "domain": args.domain, "dim": d, "bc": args.bc.name, "beta": args.beta,
        "cells": [list(c) for c in res.cells], "Z": res.Z,
        "log_Z": _log_z(res),
        "min_energy": res.min_energy,
        "energy_counts": res.energy_counts.tolist(),
        "marginals": res.marginals.tolist(),
    }
    if query:
        out["query"] = [list(q) for q in res.query]
        out["query_probs"] = res.query_probs.tolist()
    _write(args.out, dump_json(out))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="afpotts", description="Three-state antiferromagnetic Potts model toolkit.")
    p.add_argument("--config", help="file of 'key = value' lines supplying flag values")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("sample", help="run Glauber dynamics and write a pc3 coloring")
    s.add_argument("--dim", type=int)
    s.add_argument("--box", type=_shape, help="box sides, e.g. 72x48")
    s.add_argument("--domain", choices=NAMED_DOMAINS, help="named fixture domain instead of a box")
    s.add_argument("--beta", type=_beta_type, required=True)
    s.add_argument("--bc", type=_bc_type, default=BoundaryCondition.even(0))
    s.add_argument("--steps", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--init", choices=("pure", "uniform", "file"), default="pure")
    s.add_argument("--init-file")
    s.add_argument("--snapshot-every", type=int, default=0)
    s.add_argument("--snapshots", help="pc3 stream receiving the snapshots")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    a = sub.add_parser("analyze", help="statistics and renders of pc3 colorings")
    a.add_argument("--in", dest="input", required=True)
    a.add_argument("--out", help="JSON statistics (default stdout)")
    a.add_argument("--render", choices=("value", "violation"))
    a.add_argument("--render-out")
    a.add_argument("--slab-axis", help="comma-separated axes to fix (d >= 3)")
    a.add_argument("--slab-index", help="comma-separated lattice coordinates for the slab axes")
    a.add_argument("--scale", type=int, default=1)
    a.add_argument("--probe-u", help="even probe cell, e.g. 10,10")
    a.add_argument("--probe-v", help="odd probe cell")
    a.add_argument("--no-clusters", action="store_true")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("breakup", help="four-section of a coloring around a cell or a set")
    b.add_argument("--in", dest="input", required=True)
    b.add_argument("--rho", help="free cell, e.g. 3,2")
    b.add_argument("--set", help="violation cells separated by ';', e.g. '3,2;5,2'")
    b.add_argument("--out")
    b.set_defaults(func=cmd_breakup)

    t = sub.add_parser("transform", help="apply or invert the energy-lowering transformation")
    t.add_argument("--in", dest="input", required=True)
    t.add_argument("--k4", help="four-section file")
    t.add_argument("--rho", help="compute the breakup around this cell instead of reading --k4")
    t.add_argument("--direction", type=_direction_type, default=DEFAULT_DIRECTION)
    t.add_argument("--h", help="h file with the 0/1 values on the downward boundary")
    t.add_argument("--bits", help="0/1 string on the maximum independent set of the downward boundary")
    t.add_argument("--invert", action="store_true")
    t.add_argument("--h-out", help="with --invert: write the recovered h here")
    t.add_argument("--out")
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("verify", help="run property and oracle checks")
    v.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    v.add_argument("--dim", type=int, default=2)
    v.add_argument("--max-cells", type=int, default=9)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("exact", help="exact partition function and marginals of a tiny domain")
    e.add_argument("--dim", type=int, default=2)
    e.add_argument("--domain", choices=NAMED_DOMAINS, default="single")
    e.add_argument("--beta", type=_beta_type, required=True)
    e.add_argument("--bc", type=_bc_type, default=BoundaryCondition.even(0))
    e.add_argument("--query", help="cells for the joint law, separated by ';'")
    e.add_argument("--cap", type=int, default=16)
    e.add_argument("--out")
    e.set_defaults(func=cmd_exact)
    return p


def _config_path(argv: list) -> str | None:
    for k, a in enumerate(argv):
        if a == "--config" and k + 1 < len(argv):
            return argv[k + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def parse_args(parser: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    """Parse ``argv``, taking defaults of the chosen command from ``--config`` if given."""
    path = _config_path(argv)
    if path is None:
        return parser.parse_args(argv)
    subs = parser._subparsers._group_actions[0].choices
    required = {}
    for name, sub in subs.items():
        for act in sub._actions:
            if act.required:
                act.required = False
                required.setdefault(name, []).append(act)
    command = parser.parse_args(argv).command
    sub = subs[command]
    dests = {a.dest: a for a in sub._actions if a.dest != "help"}
    defaults = {}
    for key, raw in read_config(path).items():
        if key not in dests:
            raise UsageError(f"config key {key!r} is not a flag of '{command}'")
        act = dests[key]
        if isinstance(act, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
            continue
        try:
            defaults[key] = act.type(raw) if act.type else raw
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise UsageError(f"config key {key!r}: {exc}") from None
        if act.choices is not None and defaults[key] not in act.choices:
            raise UsageError(f"config key {key!r}: {raw!r} is not one of {', '.join(map(str, act.choices))}")
    sub.set_defaults(**defaults)
    args = parser.parse_args(argv)
    for act in required.get(command, []):
        if getattr(args, act.dest, None) is None:
            raise UsageError(f"{act.option_strings[0]} is required (as a flag or a config key)")
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(build_parser(), argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, CapExceeded, argparse.ArgumentTypeError) as exc:
        print(f"afpotts: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotAdaptedError, NotInImageError) as exc:
        print(f"afpotts: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except FormatError as exc:
        print(f"afpotts: parse error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, UnicodeDecodeError) as exc:
        print(f"afpotts: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
