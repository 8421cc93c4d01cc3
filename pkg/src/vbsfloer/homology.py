"""Homology of the sleek summands and the top-level invariant reports."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

from .complex import VeeringComplex
from .dynamic import cc_multiloop_complex
from .f2 import BoundarySquareError, ChainComplexF2, F2Matrix, f2_rank, homology_dim
from .grading import Block, Gradings, H1MClass
from .loops import DIAG, is_embedded
from .states import multiloop_state
from .sweep import DEFAULT_CAP, CapExceeded, sweep_class

SLEEK = "sleek"
NOT_SLEEK = "not-sleek"
MIXED = "mixed"
UNRESOLVED = "unresolved"


class InconsistentCocycle(ValueError):
    pass


@dataclass(frozen=True)
class BlockReport:
    id: int
    members: tuple[int, ...]
    h1m: H1MClass
    status: str
    homology_dim: int | None
    sweep_classes: int
    contains_top: bool
    contains_bot: bool

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def sleek(self) -> bool:
        return self.status == SLEEK


@dataclass(frozen=True)
class Report:
    name: str
    states: int
    blocks: tuple[BlockReport, ...]
    top_bonus: int

    @property
    def sleek_dim(self) -> int:
        return sum(b.homology_dim or 0 for b in self.blocks if b.sleek)

    @property
    def bound(self) -> int:
        return self.sleek_dim + self.top_bonus

    @property
    def unresolved(self) -> int:
        return sum(b.status == UNRESOLVED for b in self.blocks)


def _default_threads(threads: int | None) -> int:
    return max(1, threads if threads else (os.cpu_count() or 1))


def analyse_block(g: Gradings, block: Block, cap: int = DEFAULT_CAP) -> BlockReport:
    """Split a block into sweep classes and take CC homology of the sleek ones."""
    c = g.complex
    index = {x: i for i, x in enumerate(g.states)}
    pending = set(block.members)
    verdicts: list[bool] = []
    dim = 0
    try:
        for i in block.members:
            if i not in pending:
                continue
            cls = sweep_class(c, g.multiloops[i], cap)
            sleek = all(is_embedded(c, m) for m in cls.members)
            verdicts.append(sleek)
            for m in cls.members:
                if is_embedded(c, m):
                    pending.discard(index[multiloop_state(c, m)])
            if sleek:
                dim += homology_dim(cc_multiloop_complex(c, cls))
    except CapExceeded:
        return BlockReport(block.id, block.members, block.h1m, UNRESOLVED, None, len(verdicts),
                           block.contains_top, block.contains_bot)
    if all(verdicts):
        status = SLEEK
    elif any(verdicts):
        status = MIXED
    else:
        status = NOT_SLEEK
    return BlockReport(block.id, block.members, block.h1m, status, dim if status == SLEEK else None,
                       len(verdicts), block.contains_top, block.contains_bot)


def block_reports(g: Gradings, cap: int = DEFAULT_CAP, threads: int | None = None) -> tuple[BlockReport, ...]:
    blocks = g.s_tilde_partition().blocks
    with ThreadPoolExecutor(max_workers=_default_threads(threads)) as pool:
        return tuple(pool.map(lambda b: analyse_block(g, b, cap), blocks))


def sfh_report(c: VeeringComplex, cap: int = DEFAULT_CAP, threads: int | None = None,
               gradings: Gradings | None = None) -> Report:
    """Lower bound from sleek s̃-blocks, plus one for a non-sleek top block."""
    g = gradings or Gradings(c)
    blocks = block_reports(g, cap, threads)
    top = next(b for b in blocks if b.contains_top)
    bonus = 1 if top.status in (NOT_SLEEK, MIXED) else 0
    return Report(c.name, len(g.states), blocks, bonus)


# -- fibered case ----------------------------------------------------------------

def diagonal_weights(c: VeeringComplex, omega: Mapping[int, int]) -> dict[int, int]:
    out = {}
    for s in sorted(c.sectors):
        sec = c.sectors[s]
        left = sum(omega.get(e, 0) for e in sec.left_path)
        right = sum(omega.get(e, 0) for e in sec.right_path)
        if left != right:
            raise InconsistentCocycle(f"sector {s}: left side weighs {left}, right side {right}")
        out[s] = left
    return out


def pairing(c: VeeringComplex, omega: Mapping[int, int], m, diag_w: Mapping[int, int] | None = None) -> int:
    dw = diag_w if diag_w is not None else diagonal_weights(c, omega)
    return sum(dw[x] if kind == DIAG else omega.get(x, 0) for loop in m for kind, x in loop)


@dataclass(frozen=True)
class FiberedRow:
    n: int
    blocks: int
    sleek_blocks: int
    dim: int
    states: int
    unresolved: int


@dataclass(frozen=True)
class FiberedReport:
    name: str
    rows: tuple[FiberedRow, ...]
    top_pairing: int
    bot_pairing: int
    block_pairings: tuple[int, ...]

    def row(self, n: int) -> FiberedRow:
        for r in self.rows:
            if r.n == n:
                return r
        return FiberedRow(n, 0, 0, 0, 0, 0)

    @property
    def unresolved(self) -> int:
        return sum(r.unresolved for r in self.rows)


def fibered_report(c: VeeringComplex, omega: Mapping[int, int] | None = None, cap: int = DEFAULT_CAP,
                   threads: int | None = None, gradings: Gradings | None = None) -> FiberedReport:
    omega = omega if omega is not None else c.fiber_cocycle
    if omega is None:
        raise InconsistentCocycle("no cocycle given and the complex carries none")
    dw = diagonal_weights(c, omega)
    g = gradings or Gradings(c)
    values = [pairing(c, omega, m, dw) for m in g.multiloops]
    blocks = block_reports(g, cap, threads)
    per_block = []
    for b in blocks:
        seen = {values[i] for i in b.members}
        if len(seen) != 1:
            raise InconsistentCocycle(f"block {b.id} pairs to several values {sorted(seen)}")
        per_block.append(seen.pop())
    rows = []
    for n in sorted(set(per_block)):
        mine = [b for b, p in zip(blocks, per_block) if p == n]
        rows.append(FiberedRow(
            n,
            len(mine),
            sum(b.sleek for b in mine),
            sum(b.homology_dim or 0 for b in mine if b.sleek),
            sum(b.size for b in mine),
            sum(b.status == UNRESOLVED for b in mine),
        ))
    top = values[g.index_of(g.top)]
    bot = values[g.index_of(g.bot)]
    if bot != 0:
        raise InconsistentCocycle(f"the all-bottom state pairs to {bot}, expected 0")
    return FiberedReport(c.name, tuple(rows), top, bot, tuple(per_block))


__all__ = [
    "BlockReport",
    "BoundarySquareError",
    "ChainComplexF2",
    "F2Matrix",
    "FiberedReport",
    "FiberedRow",
    "InconsistentCocycle",
    "Report",
    "analyse_block",
    "block_reports",
    "diagonal_weights",
    "f2_rank",
    "fibered_report",
    "homology_dim",
    "pairing",
    "sfh_report",
]
