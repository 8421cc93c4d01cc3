"""Heegaard states and their multi-loops."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .complex import VeeringComplex
from .loops import DIAG, LoopError, MultiLoop, NotEmbeddedError, diag, edge, is_embedded, normalize

SLOTS = ("bottom", "left", "right", "top")


class ChargeError(LoopError):
    """An arc cannot be charged to a sector corner."""


@dataclass(frozen=True, order=True)
class HeegaardState:
    """Corner slot per sector, stored as ``((sector, slot), ...)`` in sector order."""

    assignment: tuple[tuple[int, str], ...]

    @classmethod
    def from_mapping(cls, slots: Mapping[int, str]) -> HeegaardState:
        for s, slot in slots.items():
            if slot not in SLOTS:
                raise ValueError(f"unknown corner slot {slot!r} for sector {s}")
        return cls(tuple(sorted(slots.items())))

    def slot(self, sector: int) -> str:
        return dict(self.assignment)[sector]

    def as_dict(self) -> dict[int, str]:
        return dict(self.assignment)

    def label(self) -> str:
        return ",".join(slot for _, slot in self.assignment)


def slot_vertex(c: VeeringComplex, sector: int, slot: str) -> int:
    sec = c.sectors[sector]
    if slot == "bottom":
        return sec.bottom
    if slot == "left":
        return c.head(sec.left_bottom)
    if slot == "right":
        return c.head(sec.right_bottom)
    if slot == "top":
        return sec.top
    raise ValueError(f"unknown corner slot {slot!r}")


def is_state(c: VeeringComplex, slots: Mapping[int, str]) -> bool:
    if sorted(slots) != sorted(c.sectors):
        return False
    hit = [slot_vertex(c, s, slot) for s, slot in slots.items()]
    return sorted(hit) == sorted(c.vertices)


def enumerate_states(c: VeeringComplex) -> list[HeegaardState]:
    """All states, by backtracking over sectors in id order."""
    order = sorted(c.sectors)
    choices = [[(slot, slot_vertex(c, s, slot)) for slot in SLOTS] for s in order]
    used: set[int] = set()
    picked: list[str] = []
    out: list[HeegaardState] = []

    def go(k: int) -> None:
        if k == len(order):
            out.append(HeegaardState(tuple(zip(order, picked))))
            return
        for slot, v in choices[k]:
            if v in used:
                continue
            used.add(v)
            picked.append(slot)
            go(k + 1)
            picked.pop()
            used.discard(v)

    go(0)
    return out


def canonical_states(c: VeeringComplex) -> tuple[HeegaardState, HeegaardState]:
    """``(x_top, x_bot)``."""
    top = HeegaardState(tuple((s, "top") for s in sorted(c.sectors)))
    bot = HeegaardState(tuple((s, "bottom") for s in sorted(c.sectors)))
    return top, bot


def state_multiloop(c: VeeringComplex, x: HeegaardState) -> MultiLoop:
    succ = {}
    for s, slot in x.assignment:
        sec = c.sectors[s]
        if slot == "bottom":
            continue
        arc = {"left": edge(sec.left_bottom), "right": edge(sec.right_bottom), "top": diag(s)}[slot]
        if sec.bottom in succ:
            raise LoopError(f"vertex {sec.bottom} is the bottom of two sectors")
        succ[sec.bottom] = (arc, slot_vertex(c, s, slot))

    loops = []
    seen: set[int] = set()
    for start in sorted(succ):
        if start in seen:
            continue
        loop = []
        v = start
        while v not in seen:
            if v not in succ:
                raise LoopError(f"arcs of the state do not close up at vertex {v}")
            seen.add(v)
            arc, v = succ[v]
            loop.append(arc)
        if v != start:
            raise LoopError("arcs of the state do not split into vertex-disjoint cycles")
        loops.append(loop)
    return normalize(loops)


def multiloop_state(c: VeeringComplex, m: MultiLoop) -> HeegaardState:
    """Inverse of :func:`state_multiloop`."""
    if not is_embedded(c, m):
        raise NotEmbeddedError("multi-loop visits a vertex twice")
    owner = c.sector_with_bottom_edge()
    slots = {s: "bottom" for s in c.sectors}
    charged: set[int] = set()
    for loop in m:
        for kind, x in loop:
            if kind == DIAG:
                s, slot = x, "top"
            elif x in owner:
                s, slot = owner[x]
            else:
                raise ChargeError(f"edge {x} is not a bottom side of any sector")
            if s in charged:
                raise ChargeError(f"sector {s} charged twice")
            charged.add(s)
            slots[s] = slot
    x = HeegaardState.from_mapping(slots)
    if not is_state(c, slots):
        raise ChargeError("charged corners do not hit every vertex once")
    return x
