"""Command-line front end: ``vbsfloer <subcommand> [instance] [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence, TextIO

from .complex import ComplexError, VeeringComplex, cyclic_cover, parse_complex, serialize, validate
from .datasets import bundled_datasets, load_dataset
from .dynamic import (
    Core,
    CoreError,
    RegionError,
    build_dynamic_region,
    cc_complex,
    cc_multiloop_complex,
    check_core,
    core_growth_sequence,
    maximal_core,
)
from .f2 import homology_dim
from .grading import Gradings, strum_resolutions
from .homology import UNRESOLVED, InconsistentCocycle, analyse_block, fibered_report, sfh_report
from .loops import LoopError, MultiLoop, format_multiloop, from_json, has_diagonals, is_embedded, to_json
from .sweep import DEFAULT_CAP, CapExceeded, is_sleek, sweep_class

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNRESOLVED = 2
EXIT_USAGE = 64

COMMANDS = (
    "validate", "states", "gradings", "sweep", "sleek", "core",
    "homology", "report", "fibered-report", "cover",
)


class UsageError(Exception):
    pass


class InvalidInput(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    instance: str | None = None
    input: str | None = None
    cap: int = DEFAULT_CAP
    format: str = "text"
    threads: int = os.cpu_count() or 1
    seed: int | None = None
    state: int | None = None
    loop: str | None = None
    block: int | None = None
    moves: bool = False
    degree: int = 2
    weights: str | None = None
    cocycle: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means "unresolved" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("instance", nargs="?", help="bundled name (fig8, data/fig8) or JSON path")
    common.add_argument("--input", metavar="PATH", help="read the complex from this JSON file")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest sweep class explored")
    common.add_argument("--format", choices=("json", "tsv", "text"), default="text")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    parser = _Parser(prog="vbsfloer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("validate", "states", "gradings", "report"):
        sub.add_parser(name, parents=[common])
    for name in ("sweep", "sleek", "core"):
        p = sub.add_parser(name, parents=[common])
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--state", type=int, help="state index as listed by `states`")
        group.add_argument("--loop", help='multi-loop as JSON, e.g. [[0,"d1"]]')
        if name != "sleek":
            p.add_argument("--moves", action="store_true", help="include the move graph")
    p = sub.add_parser("homology", parents=[common])
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", type=int)
    group.add_argument("--loop")
    group.add_argument("--block", type=int, help="s̃-block id as listed by `gradings`")
    p = sub.add_parser("fibered-report", parents=[common])
    p.add_argument("--cocycle", help="JSON object edge-id -> weight (default: the instance's own)")
    p = sub.add_parser("cover", parents=[common])
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--weights", help="JSON object edge-id -> residue (default: the fiber cocycle)")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
    if cfg.cap < 1:
        raise UsageError("--cap must be positive")
    if cfg.threads < 1:
        raise UsageError("--threads must be positive")
    return cfg


# -- helpers ------------------------------------------------------------------------

def load_instance(cfg: RunConfig) -> VeeringComplex:
    if cfg.input and cfg.instance:
        raise UsageError("give either an instance or --input, not both")
    target = cfg.input or cfg.instance
    if target is None:
        raise UsageError("no instance given")
    name = target[len("data/"):] if target.startswith("data/") else target
    if cfg.input is None and name in bundled_datasets():
        return load_dataset(name)
    path = Path(target)
    if not path.is_file():
        raise UsageError(f"unknown instance {target!r}; bundled: {', '.join(bundled_datasets())}")
    try:
        return parse_complex(path.read_text(encoding="utf-8"))
    except ComplexError as exc:
        raise InvalidInput(str(exc)) from exc


def require_valid(c: VeeringComplex) -> None:
    report = validate(c)
    if not report.ok:
        raise InvalidInput("invalid complex: " + ", ".join(f.check for f in report.failures))


def _json_arg(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc.msg}") from exc


def _edge_map(text: str, what: str) -> dict[int, int]:
    raw = _json_arg(text, what)
    if not isinstance(raw, dict):
        raise UsageError(f"{what} must be a JSON object")
    try:
        return {int(k): int(v) for k, v in raw.items()}
    except (TypeError, ValueError):
        raise UsageError(f"{what} maps edge ids to integers") from None


def target_multiloop(cfg: RunConfig, c: VeeringComplex, g: Gradings | None = None) -> MultiLoop:
    if cfg.loop is not None:
        try:
            return from_json(c, _json_arg(cfg.loop, "--loop"))
        except LoopError as exc:
            raise UsageError(str(exc)) from exc
    g = g or Gradings(c)
    if cfg.state is None or not 0 <= cfg.state < len(g.states):
        raise UsageError(f"--state must lie in 0..{len(g.states) - 1}")
    return g.multiloops[cfg.state]


class Table:
    def __init__(self, header: Sequence[str]):
        self.header = list(header)
        self.rows: list[list[Any]] = []

    def add(self, *row: Any) -> None:
        self.rows.append(list(row))

    def render(self, fmt: str, out: TextIO) -> None:
        if fmt == "json":
            out.write(json.dumps([dict(zip(self.header, r)) for r in self.rows], indent=2) + "\n")
            return
        cells = [[_cell(x) for x in r] for r in self.rows]
        if fmt == "tsv":
            out.write("\t".join(self.header) + "\n")
            for r in cells:
                out.write("\t".join(r) + "\n")
            return
        widths = [max([len(h)] + [len(r[k]) for r in cells]) for k, h in enumerate(self.header)]
        for r in [self.header] + cells:
            out.write("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() + "\n")


def _cell(x: Any) -> str:
    if isinstance(x, (list, dict)):
        return json.dumps(x, separators=(",", ":"))
    if x is None:
        return "-"
    return str(x)


def _emit(cfg: RunConfig, out: TextIO, payload: dict, lines: Sequence[str]) -> None:
    if cfg.format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    elif cfg.format == "tsv":
        for key, value in payload.items():
            out.write(f"{key}\t{_cell(value)}\n")
    else:
        for line in lines:
            out.write(line + "\n")


# -- subcommands ------------------------------------------------------------------

def cmd_validate(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    report = validate(c)
    table = Table(["check", "status", "offenders", "message"])
    for chk in report.checks:
        table.add(chk.check, "pass" if chk.passed else "FAIL", chk.offenders, chk.message)
    table.render(cfg.format, out)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_states(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    g = Gradings(c)
    table = Table(["state", "slots", "multiloop"])
    for i, x in enumerate(g.states):
        slots = {str(s): slot for s, slot in x.assignment} if cfg.format == "json" else x.label()
        loop = to_json(g.multiloops[i]) if cfg.format == "json" else format_multiloop(g.multiloops[i])
        table.add(i, slots, loop)
    table.render(cfg.format, out)
    return EXIT_OK


def cmd_gradings(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    g = Gradings(c)
    tilde = g.s_tilde_partition()
    table = Table(["state", "slots", "spinc", "s_tilde_block"])
    for i, x in enumerate(g.states):
        cls = g.classes[i]
        spinc = cls.as_json() if cfg.format == "json" else cls.describe()
        slots = {str(s): slot for s, slot in x.assignment} if cfg.format == "json" else x.label()
        table.add(i, slots, spinc, tilde.block_of(i).id)
    table.render(cfg.format, out)
    return EXIT_OK


def _move_graph(cls) -> list[dict]:
    return [
        {"from": mv.src, "to": mv.dst, "loop": mv.loop, "position": mv.position,
         "sector": mv.sector, "side": mv.side}
        for mv in cls.moves
    ]


def cmd_sweep(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    m = target_multiloop(cfg, c)
    cls = sweep_class(c, m, cfg.cap)
    bad = next((x for x in cls.members if not is_embedded(c, x)), None)
    payload: dict[str, Any] = {
        "base": to_json(cls.base),
        "size": len(cls),
        "sleek": bad is None,
        "witness": to_json(bad) if bad is not None else None,
        "members": [to_json(x) for x in cls.members],
    }
    if cfg.moves:
        payload["moves"] = _move_graph(cls)
    lines = [
        f"base     {format_multiloop(cls.base)}",
        f"size     {len(cls)}",
        f"sleek    {'yes' if bad is None else 'no'}",
    ]
    if bad is not None:
        lines.append(f"witness  {format_multiloop(bad)}")
    lines += [f"member {i}  {format_multiloop(x)}" for i, x in enumerate(cls.members)]
    if cfg.moves:
        lines += [f"move {mv.src} -> {mv.dst}  sector {mv.sector} {mv.side}" for mv in cls.moves]
    _emit(cfg, out, payload, lines)
    return EXIT_OK


def cmd_sleek(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    m = target_multiloop(cfg, c)
    flag, witness = is_sleek(c, m, cfg.cap)
    payload = {"multiloop": to_json(m), "sleek": flag, "witness": to_json(witness) if witness else None}
    lines = [f"{format_multiloop(m)}  sleek={'yes' if flag else 'no'}"]
    if witness is not None:
        lines.append(f"witness  {format_multiloop(witness)}")
    _emit(cfg, out, payload, lines)
    return EXIT_OK


def cmd_core(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    m = target_multiloop(cfg, c)
    if len(m) != 1:
        raise UsageError("core needs a single loop")
    if has_diagonals(m):
        m = min(strum_resolutions(c, m))
    region = build_dynamic_region(c, m, cfg.cap)
    top = maximal_core(region)
    base = Core(frozenset(), region.base)
    seq = core_growth_sequence(region, base, top)
    dims = [homology_dim(cc_complex(region, k)) for k in [base] + seq]
    payload: dict[str, Any] = {
        "base": to_json(m),
        "class_size": len(region.sweep),
        "region_sectors": region.n_sectors,
        "underlying_sectors": list(region.sector_of),
        "maximal_core_valid": check_core(region, top).valid,
        "growth": [sorted(k.sectors) for k in seq],
        "homology_dims": dims,
    }
    if cfg.moves:
        payload["moves"] = [dict(mv, region_sector=r) for mv, r in zip(_move_graph(region.sweep),
                                                                       region.move_sector)]
    lines = [
        f"base            {format_multiloop(m)}",
        f"class size      {len(region.sweep)}",
        f"region sectors  {region.n_sectors}",
        f"growth          {' '.join(str(sorted(k.sectors)) for k in seq) or '-'}",
        f"homology dims   {' '.join(map(str, dims))}",
    ]
    _emit(cfg, out, payload, lines)
    return EXIT_OK


def cmd_homology(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    g = Gradings(c)
    if cfg.block is not None:
        blocks = g.s_tilde_partition().blocks
        if not 0 <= cfg.block < len(blocks):
            raise UsageError(f"--block must lie in 0..{len(blocks) - 1}")
        rep = analyse_block(g, blocks[cfg.block], cfg.cap)
        payload = {"block": rep.id, "states": list(rep.members), "status": rep.status,
                   "homology_dim": rep.homology_dim}
        lines = [f"block {rep.id}  states {list(rep.members)}  {rep.status}  dim {_cell(rep.homology_dim)}"]
        _emit(cfg, out, payload, lines)
        return EXIT_UNRESOLVED if rep.status == UNRESOLVED else EXIT_OK
    m = target_multiloop(cfg, c, g)
    cls = sweep_class(c, m, cfg.cap)
    sleek = all(is_embedded(c, x) for x in cls.members)
    dim = homology_dim(cc_multiloop_complex(c, cls)) if sleek else None
    payload = {"multiloop": to_json(m), "class_size": len(cls), "sleek": sleek, "homology_dim": dim}
    lines = [f"{format_multiloop(m)}  class {len(cls)}  sleek={'yes' if sleek else 'no'}  dim {_cell(dim)}"]
    _emit(cfg, out, payload, lines)
    return EXIT_OK


def cmd_report(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    rep = sfh_report(c, cfg.cap, cfg.threads)
    if cfg.format == "json":
        payload = {
            "name": rep.name,
            "states": rep.states,
            "blocks": [
                {"block": b.id, "states": list(b.members), "size": b.size, "spinc": b.h1m.as_json(),
                 "status": b.status, "homology_dim": b.homology_dim, "sweep_classes": b.sweep_classes,
                 "top": b.contains_top, "bottom": b.contains_bot}
                for b in rep.blocks
            ],
            "sleek_dim": rep.sleek_dim,
            "top_bonus": rep.top_bonus,
            "bound": rep.bound,
            "unresolved": rep.unresolved,
        }
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        table = Table(["block", "size", "spinc", "status", "dim", "marks"])
        for b in rep.blocks:
            marks = ",".join(x for x, on in (("top", b.contains_top), ("bottom", b.contains_bot)) if on)
            table.add(b.id, b.size, b.h1m.describe(), b.status, b.homology_dim, marks or None)
        table.render(cfg.format, out)
        if cfg.format == "text":
            out.write(f"sleek dimension {rep.sleek_dim}, top bonus {rep.top_bonus}, bound {rep.bound}"
                      f"{f', {rep.unresolved} unresolved' if rep.unresolved else ''}\n")
    return EXIT_UNRESOLVED if rep.unresolved else EXIT_OK


def cmd_fibered(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    omega = _edge_map(cfg.cocycle, "--cocycle") if cfg.cocycle else None
    try:
        rep = fibered_report(c, omega, cfg.cap, cfg.threads)
    except InconsistentCocycle as exc:
        raise InvalidInput(str(exc)) from exc
    if cfg.format == "json":
        payload = {
            "name": rep.name,
            "bottom_pairing": rep.bot_pairing,
            "top_pairing": rep.top_pairing,
            "rows": [r.__dict__ for r in rep.rows],
        }
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        table = Table(["n", "blocks", "sleek_blocks", "dim", "states", "unresolved"])
        for r in rep.rows:
            table.add(r.n, r.blocks, r.sleek_blocks, r.dim, r.states, r.unresolved)
        if cfg.format == "text":
            out.write(f"top grading {rep.top_pairing}\n")
        table.render(cfg.format, out)
    return EXIT_UNRESOLVED if rep.unresolved else EXIT_OK


def cmd_cover(cfg: RunConfig, out: TextIO) -> int:
    c = load_instance(cfg)
    require_valid(c)
    if cfg.degree < 2:
        raise UsageError("--degree must be at least 2")
    weights = _edge_map(cfg.weights, "--weights") if cfg.weights else c.fiber_cocycle
    if weights is None:
        raise UsageError("no --weights given and the instance has no fiber cocycle")
    try:
        cover = cyclic_cover(c, cfg.degree, weights)
    except ComplexError as exc:
        raise InvalidInput(str(exc)) from exc
    report = validate(cover)
    if not report.ok:
        for f in report.failures:
            sys.stderr.write(f"warning: cover fails {f.check}: {f.message}\n")
        return EXIT_INVALID
    out.write(serialize(cover))
    return EXIT_OK


HANDLERS: dict[str, Callable[[RunConfig, TextIO], int]] = {
    "validate": cmd_validate,
    "states": cmd_states,
    "gradings": cmd_gradings,
    "sweep": cmd_sweep,
    "sleek": cmd_sleek,
    "core": cmd_core,
    "homology": cmd_homology,
    "report": cmd_report,
    "fibered-report": cmd_fibered,
    "cover": cmd_cover,
}


def run(cfg: RunConfig, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return HANDLERS[cfg.command](cfg, out)
    except UsageError as exc:
        err.write(f"vbsfloer: {exc}\n")
        return EXIT_USAGE
    except InvalidInput as exc:
        err.write(f"vbsfloer: {exc}\n")
        return EXIT_INVALID
    except CapExceeded as exc:
        err.write(f"vbsfloer: unresolved: {exc}\n")
        return EXIT_UNRESOLVED
    except (CoreError, RegionError) as exc:
        err.write(f"vbsfloer: {exc}\n")
        return EXIT_INVALID


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        sys.stderr.write(f"vbsfloer: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # argparse: --help exits 0, bad usage exits 64
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
