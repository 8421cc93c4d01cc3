"""Strums, sweep classes, sleekness, vertex resolutions and branch-loop labelings."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, NamedTuple, Sequence

from .complex import VeeringComplex, branch_loops
from .grading import CycleVector, DiagonalError, Gradings, cycle_vector, side_path
from .loops import (
    DIAG,
    EDGE,
    Loop,
    LoopError,
    MultiLoop,
    arc_tail,
    diag,
    edge,
    has_diagonals,
    is_embedded,
    normalize,
    normalize_loop,
)
from .states import canonical_states, state_multiloop

DEFAULT_CAP = 10**6
SIDES = ("left", "right")


class SiteError(LoopError):
    pass


class CapExceeded(RuntimeError):
    """A closure grew past its cap; carries what was found so far."""

    def __init__(self, partial: Sequence[MultiLoop], frontier: Sequence[MultiLoop], cap: int):
        super().__init__(f"more than {cap} multi-loops (found {len(partial)}, {len(frontier)} unexplored)")
        self.partial = list(partial)
        self.frontier = list(frontier)
        self.cap = cap


class PreconditionError(ValueError):
    pass


# -- single moves ---------------------------------------------------------------

def strum_sites(m: MultiLoop) -> list[tuple[int, int]]:
    return [(i, j) for i, loop in enumerate(m) for j, (kind, _) in enumerate(loop) if kind == DIAG]


def strum(c: VeeringComplex, m: MultiLoop, site: tuple[int, int], side: str) -> MultiLoop:
    i, j = site
    try:
        kind, s = m[i][j]
    except IndexError:
        raise SiteError(f"no arc at {site}") from None
    if kind != DIAG:
        raise SiteError(f"arc at {site} is not a diagonal")
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}")
    loop = m[i]
    new = loop[:j] + side_path(c, s, side) + loop[j + 1:]
    return normalize(list(m[:i]) + [new] + list(m[i + 1:]))


@dataclass(frozen=True)
class UnstrumSite:
    loop: int
    start: int
    sector: int
    side: str


def unstrum_sites(c: VeeringComplex, m: MultiLoop) -> list[UnstrumSite]:
    """Every cyclic window of a loop spelling a full side path of a sector."""
    owner = c.sector_with_bottom_edge()
    out = []
    for i, loop in enumerate(m):
        n = len(loop)
        for p, (kind, e) in enumerate(loop):
            if kind != EDGE or e not in owner:
                continue
            s, side = owner[e]
            path = c.sectors[s].path(side)
            if len(path) > n:
                continue
            if all(loop[(p + k) % n] == (EDGE, path[k]) for k in range(len(path))):
                out.append(UnstrumSite(i, p, s, side))
    return out


def unstrum(c: VeeringComplex, m: MultiLoop, site: UnstrumSite) -> MultiLoop:
    try:
        loop = m[site.loop]
    except IndexError:
        raise SiteError(f"no loop {site.loop}") from None
    path = c.sectors[site.sector].path(site.side)
    n = len(loop)
    rotated = loop[site.start:] + loop[:site.start]
    if len(path) > n or rotated[:len(path)] != tuple((EDGE, e) for e in path):
        raise SiteError("window is not a full side path of the sector")
    new = (diag(site.sector),) + rotated[len(path):]
    return normalize(list(m[:site.loop]) + [new] + list(m[site.loop + 1:]))


def neighbours(c: VeeringComplex, m: MultiLoop) -> Iterator[MultiLoop]:
    for site in strum_sites(m):
        for side in SIDES:
            yield strum(c, m, site, side)
    for site in unstrum_sites(c, m):
        yield unstrum(c, m, site)


# -- sweep classes ----------------------------------------------------------------

class Move(NamedTuple):
    """``dst`` is the strum of ``src`` at arc ``(loop, position)`` toward ``side``."""

    src: int
    dst: int
    loop: int
    position: int
    sector: int
    side: str


@dataclass(frozen=True)
class SweepClass:
    base: MultiLoop
    members: tuple[MultiLoop, ...]
    moves: tuple[Move, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, m: object) -> bool:
        return m in self.index

    @property
    def index(self) -> dict[MultiLoop, int]:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {m: i for i, m in enumerate(self.members)}
            object.__setattr__(self, "_index", idx)
        return idx


def sweep_class(c: VeeringComplex, m: MultiLoop, cap: int = DEFAULT_CAP) -> SweepClass:
    """Breadth-first closure of ``m`` under strums and unstrums."""
    if cap < 1:
        raise ValueError("cap must be positive")
    m = normalize(m)
    seen = {m: 0}
    order = [m]
    queue = deque([m])
    while queue:
        cur = queue.popleft()
        for nxt in neighbours(c, cur):
            if nxt not in seen:
                seen[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
                if len(order) > cap:
                    raise CapExceeded(order, list(queue), cap)
    moves = []
    for i, cur in enumerate(order):
        for site in strum_sites(cur):
            s = cur[site[0]][site[1]][1]
            for side in SIDES:
                moves.append(Move(i, seen[strum(c, cur, site, side)], site[0], site[1], s, side))
    return SweepClass(m, tuple(order), tuple(moves))


def is_sleek(c: VeeringComplex, m: MultiLoop, cap: int = DEFAULT_CAP) -> tuple[bool, MultiLoop | None]:
    """``(True, None)`` if every sweep-equivalent multi-loop is embedded, else a witness."""
    cls = sweep_class(c, m, cap)
    for member in cls.members:
        if not is_embedded(c, member):
            return False, member
    return True, None


# -- resolutions -------------------------------------------------------------------

def rotate_to(c: VeeringComplex, loop: Loop, v: int) -> Loop:
    for p, arc in enumerate(loop):
        if arc_tail(c, arc) == v:
            return loop[p:] + loop[:p]
    raise LoopError(f"loop does not pass through vertex {v}")


def concatenate(c: VeeringComplex, c1: Loop, c2: Loop, v: int) -> Loop:
    """Splice two loops at a vertex they both pass through."""
    if not c1 or not c2:
        raise LoopError("empty loops are not loops")
    return normalize_loop(rotate_to(c, c1, v) + rotate_to(c, c2, v))


def _passes(c: VeeringComplex, m: MultiLoop) -> dict[int, list[tuple[int, int]]]:
    """Vertex -> list of (loop, position of the arc leaving it)."""
    out: dict[int, list[tuple[int, int]]] = {}
    for i, loop in enumerate(m):
        for p, arc in enumerate(loop):
            out.setdefault(arc_tail(c, arc), []).append((i, p))
    return out


def swap_continuations(m: MultiLoop, a: tuple[int, int], b: tuple[int, int]) -> MultiLoop:
    """Exchange the outgoing continuations of two passes through one vertex."""
    (i, p), (j, q) = a, b
    rest = [loop for k, loop in enumerate(m) if k not in (i, j)]
    if i == j:
        loop = m[i]
        p, q = min(p, q), max(p, q)
        return normalize(rest + [loop[p:q], loop[q:] + loop[:p]])
    li = m[i][p:] + m[i][:p]
    lj = m[j][q:] + m[j][:q]
    return normalize(rest + [li + lj])


def vertex_resolutions(c: VeeringComplex, m: MultiLoop) -> frozenset[MultiLoop]:
    """Multi-loops one merge or split away from ``m``."""
    if has_diagonals(m):
        raise DiagonalError("resolutions are taken on graph-edge multi-loops")
    out = set()
    for passes in _passes(c, m).values():
        for a, b in combinations(passes, 2):
            out.add(swap_continuations(m, a, b))
    out.discard(m)
    return frozenset(out)


def representatives_of_cycle(
    c: VeeringComplex, v: CycleVector, cap: int = DEFAULT_CAP
) -> frozenset[MultiLoop]:
    """All multi-loops whose edge multiplicities are ``v``."""
    ids = sorted(c.edges)
    if len(v) != len(ids) or any(x < 0 for x in v):
        raise ValueError("expected a non-negative vector over the edges")
    remaining = Counter({e: x for e, x in zip(ids, v) if x})
    net = Counter()
    for e, x in remaining.items():
        net[c.tail(e)] -= x
        net[c.head(e)] += x
    if any(net.values()):
        raise ValueError("vector is not a cycle")
    out_of: dict[int, list[int]] = {}
    for e in ids:
        out_of.setdefault(c.tail(e), []).append(e)

    found: set[MultiLoop] = set()
    loops: list[tuple[tuple[int, int], ...]] = []

    def extend(path: list[int], start: int) -> None:
        at = c.head(path[-1])
        if at == start:
            loops.append(tuple(edge(e) for e in path))
            search()
            loops.pop()
        for e in out_of.get(at, ()):
            if remaining[e]:
                remaining[e] -= 1
                path.append(e)
                extend(path, start)
                path.pop()
                remaining[e] += 1

    def search() -> None:
        live = [e for e in ids if remaining[e]]
        if not live:
            found.add(normalize(loops))
            if len(found) > cap:
                raise CapExceeded(sorted(found), [], cap)
            return
        e0 = live[0]
        remaining[e0] -= 1
        extend([e0], c.tail(e0))
        remaining[e0] += 1

    search()
    return frozenset(found)


# -- branch-loop labelings ---------------------------------------------------------

@dataclass(frozen=True)
class BranchBipartition:
    """Branch loops split into two label classes; ``E`` holds the lowest loop of each component."""

    loops: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    @property
    def east(self) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab == "E"]

    @property
    def west(self) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab == "W"]

    def as_partition(self) -> frozenset[frozenset[tuple[int, ...]]]:
        return frozenset(
            frozenset(self.loops[i] for i in group) for group in (self.east, self.west)
        )


def orientability_bipartition(c: VeeringComplex) -> BranchBipartition | None:
    loops = branch_loops(c)
    loop_of = {e: i for i, loop in enumerate(loops) for e in loop}
    adj: dict[int, set[int]] = {i: set() for i in range(len(loops))}
    for v in sorted(c.vertices):
        a, b = (loop_of[e] for e in c.outgoing(v))
        if a == b:
            return None
        adj[a].add(b)
        adj[b].add(a)
    labels: dict[int, str] = {}
    for root in range(len(loops)):
        if root in labels:
            continue
        labels[root] = "E"
        queue = deque([root])
        while queue:
            i = queue.popleft()
            other = "W" if labels[i] == "E" else "E"
            for j in sorted(adj[i]):
                if j not in labels:
                    labels[j] = other
                    queue.append(j)
                elif labels[j] != other:
                    return None
    return BranchBipartition(tuple(loops), tuple(labels[i] for i in range(len(loops))))


class BranchCount(NamedTuple):
    count: int
    bound: int


def branch_multiloops(c: VeeringComplex, bip: BranchBipartition) -> list[MultiLoop]:
    """Unions of same-label branch loops, the empty one listed once."""
    out: list[MultiLoop] = []
    for group in (bip.east, bip.west):
        for k in range(len(group) + 1):
            for chosen in combinations(group, k):
                m = normalize([[edge(e) for e in bip.loops[i]] for i in chosen])
                if m not in out:
                    out.append(m)
    return out


def top_block_sleek(c: VeeringComplex, cap: int = DEFAULT_CAP, gradings: Gradings | None = None) -> bool:
    """Whether the s̃-block of the all-top state contains a sleek state."""
    g = gradings or Gradings(c)
    top, _ = canonical_states(c)
    block = g.s_tilde_partition().block_of(g.index_of(top))
    return any(is_sleek(c, g.multiloops[i], cap)[0] for i in block.members)


def sleek_branch_count(c: VeeringComplex, cap: int = DEFAULT_CAP) -> BranchCount:
    bip = orientability_bipartition(c)
    if bip is None:
        raise PreconditionError("branch loops admit no bipartition")
    count = 0
    for m in branch_multiloops(c, bip):
        if is_embedded(c, m) and is_sleek(c, m, cap)[0]:
            count += 1
    bonus = 0 if top_block_sleek(c, cap) else 1
    return BranchCount(count, count + bonus)


def state_class(c: VeeringComplex, x, cap: int = DEFAULT_CAP) -> SweepClass:
    return sweep_class(c, state_multiloop(c, x), cap)


__all__ = [
    "BranchBipartition",
    "BranchCount",
    "CapExceeded",
    "DEFAULT_CAP",
    "Move",
    "PreconditionError",
    "SiteError",
    "SweepClass",
    "UnstrumSite",
    "branch_multiloops",
    "concatenate",
    "cycle_vector",
    "is_sleek",
    "neighbours",
    "orientability_bipartition",
    "representatives_of_cycle",
    "sleek_branch_count",
    "strum",
    "strum_sites",
    "sweep_class",
    "swap_continuations",
    "unstrum",
    "unstrum_sites",
    "vertex_resolutions",
]
