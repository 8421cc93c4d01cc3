"""Dynamic regions of single-loop sweep classes, their cores, and the CC complexes.

The region is assembled from the sweep class alone.  Every strum move carries
the vertices of the old loop onto the new one (the diagonal's tail stays put,
arcs before and after it shift), so union-find over all (member, position)
occurrences glues the loops of the class into one surface-like object.  A
strum site's region sector is the glued vertex at the tail of its diagonal.

Each region sector is split by its diagonal into a left and a right
triangle.  Walking the move graph from the base loop and toggling the triangle
each move sweeps gives every member a position ``X(c)``, a set of triangles
well defined over the two-element field.  Cores and their extremal loops are
read off from these positions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .complex import BLUE, RED, VeeringComplex
from .f2 import ChainComplexF2, F2Matrix
from .grading import side_path
from .loops import Loop, LoopError, MultiLoop, has_diagonals, is_embedded, normalize, rotation_offset
from .sweep import DEFAULT_CAP, SweepClass, sweep_class

Triangle = tuple[int, str]


class RegionError(RuntimeError):
    """The glued region is not consistent (should not happen on valid input)."""


class CoreError(ValueError):
    pass


class NotSleekError(ValueError):
    pass


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class DynamicRegion:
    complex: VeeringComplex
    sweep: SweepClass
    move_sector: tuple[int, ...]
    """Region sector swept by each move of ``sweep.moves``."""
    sector_of: tuple[int, ...]
    """Underlying sector of each region sector."""
    positions: tuple[frozenset[Triangle], ...]
    """Triangles between the base loop and each member."""
    adjacency: dict[int, dict[str, frozenset[int]]] = field(default_factory=dict)
    """For G-only members: region sectors whose left/right side path the loop runs along."""

    @property
    def base(self) -> int:
        return 0

    @property
    def n_sectors(self) -> int:
        return len(self.sector_of)

    @property
    def loops(self) -> tuple[Loop, ...]:
        return tuple(m[0] for m in self.sweep.members)

    def color(self, region_sector: int) -> str:
        return self.complex.sector_color(self.sector_of[region_sector])

    def g_only(self, member: int) -> bool:
        return not has_diagonals(self.sweep.members[member])

    def between(self, a: int, b: int) -> frozenset[Triangle]:
        return self.positions[a] ^ self.positions[b]


def _as_single_loop(c0: Loop | MultiLoop) -> MultiLoop:
    if c0 and isinstance(c0[0][0], int):
        m = normalize([c0])
    else:
        m = normalize(c0)
    if len(m) != 1:
        raise LoopError("dynamic regions are built on a single loop")
    return m


def build_dynamic_region(c: VeeringComplex, c0: Loop | MultiLoop, cap: int = DEFAULT_CAP) -> DynamicRegion:
    m0 = _as_single_loop(c0)
    if has_diagonals(m0):
        raise LoopError("the base loop must use graph edges only")
    cls = sweep_class(c, m0, cap)
    members = cls.members
    uf = _UnionFind()
    for mv in cls.moves:
        loop = members[mv.src][0]
        path = side_path(c, mv.sector, mv.side)
        raw = loop[:mv.position] + path + loop[mv.position + 1:]
        shift = rotation_offset(raw)
        if raw[shift:] + raw[:shift] != members[mv.dst][0]:
            raise RegionError("move target does not match its recorded member")
        grow = len(path) - 1
        for q in range(len(loop)):
            at = q if q <= mv.position else q + grow
            uf.union((mv.src, q), (mv.dst, (at - shift) % len(raw)))

    for i, m in enumerate(members):
        roots = [uf.find((i, q)) for q in range(len(m[0]))]
        if len(set(roots)) != len(roots):
            raise RegionError(f"member {i} has two positions glued together")

    label: dict = {}
    move_sector = []
    sector_of: list[int] = []
    for mv in cls.moves:
        root = uf.find((mv.src, mv.position))
        if root not in label:
            label[root] = len(sector_of)
            sector_of.append(mv.sector)
        r = label[root]
        if sector_of[r] != mv.sector:
            raise RegionError("one region sector covers two different sectors")
        move_sector.append(r)

    positions = _positions(len(members), cls, move_sector)

    adjacency: dict[int, dict[str, set[int]]] = {}
    for mv, r in zip(cls.moves, move_sector):
        if not has_diagonals(members[mv.dst]):
            adjacency.setdefault(mv.dst, {"left": set(), "right": set()})[mv.side].add(r)
    frozen_adj = {
        i: {side: frozenset(v) for side, v in d.items()} for i, d in sorted(adjacency.items())
    }
    return DynamicRegion(c, cls, tuple(move_sector), tuple(sector_of), positions, frozen_adj)


def _positions(n: int, cls: SweepClass, move_sector: Sequence[int]) -> tuple[frozenset[Triangle], ...]:
    edges: dict[int, list[tuple[int, Triangle]]] = {i: [] for i in range(n)}
    for mv, r in zip(cls.moves, move_sector):
        tri = (r, mv.side)
        edges[mv.src].append((mv.dst, tri))
        edges[mv.dst].append((mv.src, tri))
    pos: list[frozenset[Triangle] | None] = [None] * n
    pos[0] = frozenset()
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j, tri in edges[i]:
            expect = pos[i] ^ {tri}
            if pos[j] is None:
                pos[j] = expect
                queue.append(j)
            elif pos[j] != expect:
                raise RegionError("triangle positions are not consistent around a cycle of moves")
    return tuple(p for p in pos if p is not None)


# -- cores -------------------------------------------------------------------------

@dataclass(frozen=True)
class Core:
    sectors: frozenset[int]
    base: int = 0


@dataclass(frozen=True)
class CoreCheck:
    valid: bool
    reason: str
    members: tuple[int, ...] = ()
    lower: int | None = None
    upper: int | None = None


def reachable(region: DynamicRegion, sectors: frozenset[int] | set[int], base: int = 0) -> tuple[int, ...]:
    """Members reachable from ``base`` by moves sweeping only the given region sectors."""
    adj: dict[int, list[int]] = {}
    for mv, r in zip(region.sweep.moves, region.move_sector):
        if r in sectors:
            adj.setdefault(mv.src, []).append(mv.dst)
            adj.setdefault(mv.dst, []).append(mv.src)
    seen = {base}
    queue = deque([base])
    while queue:
        i = queue.popleft()
        for j in adj.get(i, ()):
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return tuple(sorted(seen))


def check_core(region: DynamicRegion, core: Core) -> CoreCheck:
    """Operational core test.

    The reachable set must sweep every chosen sector, contain two graph-edge
    loops whose triangles in between are exactly the chosen ones, and consist
    of precisely the members lying between those two loops.
    """
    k = frozenset(core.sectors)
    if not k <= set(range(region.n_sectors)):
        return CoreCheck(False, "unknown region sector")
    if not region.g_only(core.base):
        return CoreCheck(False, "base loop uses a diagonal")
    members = reachable(region, k, core.base)
    inside = set(members)
    swept = {r for mv, r in zip(region.sweep.moves, region.move_sector) if r in k and mv.src in inside}
    if swept != k:
        return CoreCheck(False, f"sectors {sorted(k - swept)} are never swept", members)
    tri = frozenset((r, side) for r in k for side in ("left", "right"))
    ends = [i for i in members if region.g_only(i)]
    for a in ends:
        for b in ends:
            if b < a or region.between(a, b) != tri:
                continue
            between = [
                i for i in range(len(region.sweep.members))
                if region.between(a, i) <= tri and region.between(i, b) <= tri
            ]
            if tuple(between) == members:
                return CoreCheck(True, "ok", members, a, b)
    return CoreCheck(False, "no pair of graph-edge loops bounds the reachable set", members)


def maximal_core(region: DynamicRegion) -> Core:
    return Core(frozenset(range(region.n_sectors)), region.base)


def core_growth_sequence(region: DynamicRegion, start: Core, stop: Core) -> list[Core]:
    """Cores adding one region sector at a time, ending at ``stop`` (``start`` excluded)."""
    if start.base != stop.base or not start.sectors <= stop.sectors:
        raise CoreError("start must be contained in stop")
    for core in (start, stop):
        chk = check_core(region, core)
        if not chk.valid:
            raise CoreError(f"not a core: {chk.reason}")
    dead: set[frozenset[int]] = set()

    def grow(k: frozenset[int]) -> list[Core] | None:
        if k == stop.sectors:
            return []
        for r in sorted(stop.sectors - k):
            nxt = k | {r}
            if nxt in dead:
                continue
            core = Core(nxt, start.base)
            if check_core(region, core).valid:
                rest = grow(nxt)
                if rest is not None:
                    return [core] + rest
            dead.add(nxt)
        return None

    seq = grow(frozenset(start.sectors))
    if seq is None:
        raise CoreError("no chain of single-sector extensions exists")
    return seq


# -- chain complexes ---------------------------------------------------------------

def _complex_from_moves(
    c: VeeringComplex,
    generators: Sequence[int],
    moves: Sequence[tuple[int, int, int]],
    members: Sequence[MultiLoop],
) -> ChainComplexF2:
    """``moves`` are (src, dst, sector) strum moves with both ends among ``generators``."""
    pos = {g: k for k, g in enumerate(generators)}
    entries = []
    for src, dst, s in moves:
        if src not in pos or dst not in pos:
            continue
        color = c.sector_color(s)
        if color == RED:
            entries.append((pos[dst], pos[src]))
        elif color == BLUE:
            entries.append((pos[src], pos[dst]))
    n = len(generators)
    return ChainComplexF2(tuple(members[g] for g in generators), F2Matrix.from_entries(n, n, entries))


def cc_complex(region: DynamicRegion, core: Core) -> ChainComplexF2:
    """Loops of the core; red strums and blue unstrums inside the core."""
    k = frozenset(core.sectors)
    gens = reachable(region, k, core.base)
    moves = [
        (mv.src, mv.dst, mv.sector)
        for mv, r in zip(region.sweep.moves, region.move_sector)
        if r in k
    ]
    return _complex_from_moves(region.complex, gens, moves, region.sweep.members)


def cc_multiloop_complex(c: VeeringComplex, cls: SweepClass) -> ChainComplexF2:
    """The same rule over a whole sweep class of embedded multi-loops."""
    for m in cls.members:
        if not is_embedded(c, m):
            raise NotSleekError("sweep class contains a non-embedded multi-loop")
    moves = [(mv.src, mv.dst, mv.sector) for mv in cls.moves]
    return _complex_from_moves(c, range(len(cls.members)), moves, cls.members)
