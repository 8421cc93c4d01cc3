"""Loops and multi-loops in the augmented graph.

An arc is ``(EDGE, e)`` for a graph edge or ``(DIAG, s)`` for the diagonal of
sector ``s``.  A loop is a tuple of arcs read cyclically, stored at its least
rotation; a multi-loop is a sorted tuple of loops.  Normalized values are
hashable and compare equal exactly when they describe the same multi-loop.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

from .complex import VeeringComplex

EDGE = 0
DIAG = 1

Arc = tuple[int, int]
Loop = tuple[Arc, ...]
MultiLoop = tuple[Loop, ...]

EMPTY: MultiLoop = ()


class LoopError(ValueError):
    pass


class NotEmbeddedError(LoopError):
    pass


def edge(e: int) -> Arc:
    return (EDGE, e)


def diag(s: int) -> Arc:
    return (DIAG, s)


def arc_tail(c: VeeringComplex, arc: Arc) -> int:
    kind, x = arc
    return c.edges[x][0] if kind == EDGE else c.sectors[x].bottom


def arc_head(c: VeeringComplex, arc: Arc) -> int:
    kind, x = arc
    return c.edges[x][1] if kind == EDGE else c.sectors[x].top


def rotation_offset(loop: Sequence[Arc]) -> int:
    """Smallest r such that ``loop[r:] + loop[:r]`` is the least rotation."""
    n = len(loop)
    if n == 0:
        return 0
    seq = list(loop)
    best = 0
    for r in range(1, n):
        if seq[r:] + seq[:r] < seq[best:] + seq[:best]:
            best = r
    return best


def normalize_loop(loop: Sequence[Arc]) -> Loop:
    r = rotation_offset(loop)
    return tuple(loop[r:]) + tuple(loop[:r])


def normalize(loops: Iterable[Sequence[Arc]]) -> MultiLoop:
    out = []
    for loop in loops:
        if not loop:
            raise LoopError("empty loops are not loops")
        out.append(normalize_loop(loop))
    return tuple(sorted(out))


def is_closed(c: VeeringComplex, loop: Sequence[Arc]) -> bool:
    n = len(loop)
    return n > 0 and all(arc_head(c, loop[i]) == arc_tail(c, loop[(i + 1) % n]) for i in range(n))


def check_multiloop(c: VeeringComplex, m: MultiLoop) -> None:
    for loop in m:
        for kind, x in loop:
            if kind == EDGE and x not in c.edges or kind == DIAG and x not in c.sectors:
                raise LoopError(f"unknown arc {(kind, x)}")
        if not is_closed(c, loop):
            raise LoopError(f"arcs of {to_json([loop])[0]} do not compose head to tail")


def vertex_visits(c: VeeringComplex, m: MultiLoop) -> list[int]:
    """Vertices visited, one entry per arc (its tail)."""
    return [arc_tail(c, a) for loop in m for a in loop]


def is_embedded(c: VeeringComplex, m: MultiLoop) -> bool:
    visits = vertex_visits(c, m)
    return len(visits) == len(set(visits))


def has_diagonals(m: MultiLoop) -> bool:
    return any(kind == DIAG for loop in m for kind, _ in loop)


def arc_count(m: MultiLoop) -> int:
    return sum(len(loop) for loop in m)


def to_json(m: MultiLoop) -> list[list[Any]]:
    return [[x if kind == EDGE else f"d{x}" for kind, x in loop] for loop in m]


def _parse_arc(token: Any) -> Arc:
    if isinstance(token, bool):
        raise LoopError(f"bad arc {token!r}")
    if isinstance(token, int):
        return edge(token)
    if isinstance(token, str):
        if token.startswith("d") and token[1:].isdigit():
            return diag(int(token[1:]))
        if token.isdigit():
            return edge(int(token))
    raise LoopError(f"bad arc {token!r}")


def from_json(c: VeeringComplex, data: Any) -> MultiLoop:
    """Parse ``[[edge or "d<sector>", ...], ...]`` and check it closes up."""
    if not isinstance(data, list) or not all(isinstance(loop, list) for loop in data):
        raise LoopError("a multi-loop is a list of lists of arcs")
    m = normalize([_parse_arc(t) for t in loop] for loop in data)
    check_multiloop(c, m)
    return m


def format_multiloop(m: MultiLoop) -> str:
    if not m:
        return "()"
    return " ".join("(" + " ".join(str(t) for t in loop) + ")" for loop in to_json(m))
