"""Strum resolutions, homology classes in the quotient lattice, and state gradings."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .complex import VeeringComplex
from .lattice import hermite_rows, reduce_mod_rows, smith
from .loops import DIAG, LoopError, MultiLoop, edge, has_diagonals, normalize
from .states import HeegaardState, canonical_states, state_multiloop

CycleVector = tuple[int, ...]
"""Edge multiplicities, indexed by position in sorted edge-id order."""


class DiagonalError(LoopError):
    """The operation needs a multi-loop made of graph edges only."""


def side_path(c: VeeringComplex, sector: int, side: str) -> tuple[tuple[int, int], ...]:
    return tuple(edge(e) for e in c.sectors[sector].path(side))


def strum_resolutions(c: VeeringComplex, m: MultiLoop) -> frozenset[MultiLoop]:
    """Every way of replacing each diagonal by one of its sector's sides."""
    sites = [(i, j) for i, loop in enumerate(m) for j, (kind, _) in enumerate(loop) if kind == DIAG]
    if not sites:
        return frozenset([m])
    out = set()
    for sides in product(("left", "right"), repeat=len(sites)):
        choice = dict(zip(sites, sides))
        loops = []
        for i, loop in enumerate(m):
            new = []
            for j, arc in enumerate(loop):
                if (i, j) in choice:
                    new.extend(side_path(c, arc[1], choice[(i, j)]))
                else:
                    new.append(arc)
            loops.append(new)
        out.add(normalize(loops))
    return frozenset(out)


def edge_index(c: VeeringComplex) -> dict[int, int]:
    return {e: i for i, e in enumerate(sorted(c.edges))}


def cycle_vector(c: VeeringComplex, m: MultiLoop) -> CycleVector:
    if has_diagonals(m):
        raise DiagonalError("cycle vectors are defined for graph-edge multi-loops")
    idx = edge_index(c)
    v = [0] * len(idx)
    for loop in m:
        for _, e in loop:
            v[idx[e]] += 1
    return tuple(v)


def boundary_vector(c: VeeringComplex, sector: int) -> CycleVector:
    idx = edge_index(c)
    v = [0] * len(idx)
    sec = c.sectors[sector]
    for e in sec.left_path:
        v[idx[e]] += 1
    for e in sec.right_path:
        v[idx[e]] -= 1
    return tuple(v)


def is_cycle(c: VeeringComplex, v: Sequence[int]) -> bool:
    net = {u: 0 for u in c.vertices}
    for e, i in edge_index(c).items():
        t, h = c.edges[e]
        net[t] -= v[i]
        net[h] += v[i]
    return not any(net.values())


def epsilon_tilde(c: VeeringComplex, x: HeegaardState) -> frozenset[CycleVector]:
    return frozenset(cycle_vector(c, r) for r in strum_resolutions(c, state_multiloop(c, x)))


@dataclass(frozen=True, order=True)
class H1MClass:
    """Coset of the sector-boundary lattice, keyed by its reduced coordinates.

    ``free`` and ``torsion`` give the same coset in Smith coordinates; they are
    for display and carry no extra information.
    """

    key: tuple[int, ...]
    free: tuple[int, ...] = field(default=(), compare=False)
    torsion: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def describe(self) -> str:
        parts = [",".join(str(x) for x in self.free) or "-"]
        if self.torsion:
            parts.append(" ".join(f"{r}/{d}" for r, d in self.torsion))
        return " ".join(parts)

    def as_json(self) -> dict:
        return {"free": list(self.free), "torsion": [{"residue": r, "order": d} for r, d in self.torsion]}


class HomologyQuotient:
    """The group of cycles of ``G`` modulo sector boundaries.

    Cycles are written in the basis of fundamental cycles of a BFS spanning
    tree: a cycle's coordinates are its values on the non-tree edges.
    """

    def __init__(self, c: VeeringComplex):
        self.complex = c
        self.index = edge_index(c)
        self.tree_edges = _spanning_tree(c)
        self.cotree = [e for e in sorted(c.edges) if e not in self.tree_edges]
        self.relations = [self.coordinates(boundary_vector(c, s)) for s in sorted(c.sectors)]
        self.hnf = hermite_rows(self.relations, len(self.cotree))
        diag, _, right = smith(self.relations, len(self.cotree))
        self.invariant_factors = diag
        self._right = right

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(v[self.index[e]] for e in self.cotree)

    @cached_property
    def rank(self) -> int:
        return len(self.cotree) - len(self.invariant_factors)

    @cached_property
    def torsion_orders(self) -> list[int]:
        return [d for d in self.invariant_factors if d > 1]

    def h1m_class(self, v: Sequence[int]) -> H1MClass:
        if not is_cycle(self.complex, v):
            raise ValueError("vector is not a cycle")
        coords = self.coordinates(v)
        key = reduce_mod_rows(coords, self.hnf)
        n = len(self.cotree)
        y = [sum(coords[i] * self._right[i][j] for i in range(n)) for j in range(n)]
        k = len(self.invariant_factors)
        torsion = tuple((y[j] % d, d) for j, d in enumerate(self.invariant_factors) if d > 1)
        return H1MClass(key, tuple(y[k:]), torsion)


def _spanning_tree(c: VeeringComplex) -> set[int]:
    """Undirected BFS tree from the least vertex, scanning edges in id order."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in c.vertices}
    for e in sorted(c.edges):
        t, h = c.edges[e]
        if t == h:
            continue
        adj[t].append((e, h))
        adj[h].append((e, t))
    tree: set[int] = set()
    if not c.vertices:
        return tree
    start = min(c.vertices)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for e, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    return tree


def h1m_class(c: VeeringComplex, v: Sequence[int]) -> H1MClass:
    return HomologyQuotient(c).h1m_class(v)


@dataclass(frozen=True)
class Block:
    id: int
    members: tuple[int, ...]
    h1m: H1MClass
    contains_top: bool
    contains_bot: bool


@dataclass(frozen=True)
class GradingPartition:
    blocks: tuple[Block, ...]

    def block_of(self, state_index: int) -> Block:
        for b in self.blocks:
            if state_index in b.members:
                return b
        raise KeyError(state_index)

    def sizes(self) -> list[int]:
        return sorted(len(b.members) for b in self.blocks)


class Gradings:
    """States of a complex with their ε̃-sets and classes, computed once."""

    def __init__(self, c: VeeringComplex, states: Sequence[HeegaardState] | None = None):
        from .states import enumerate_states

        self.complex = c
        self.states = list(states) if states is not None else enumerate_states(c)
        self.quotient = HomologyQuotient(c)
        self.top, self.bot = canonical_states(c)
        self.multiloops = [state_multiloop(c, x) for x in self.states]
        self.epsilon = [frozenset(cycle_vector(c, r) for r in strum_resolutions(c, m)) for m in self.multiloops]
        zero = self.quotient.h1m_class([0] * len(c.edges))
        if zero.key != (0,) * len(zero.key):
            raise AssertionError("zero class must reduce to zero")
        self.classes = [self.quotient.h1m_class(min(eps)) for eps in self.epsilon]

    def index_of(self, x: HeegaardState) -> int:
        return self.states.index(x)

    def _partition(self, groups: Iterable[list[int]]) -> GradingPartition:
        ordered = sorted((sorted(g) for g in groups), key=lambda g: g[0])
        top = self.index_of(self.top)
        bot = self.index_of(self.bot)
        blocks = tuple(
            Block(i, tuple(g), self.classes[g[0]], top in g, bot in g) for i, g in enumerate(ordered)
        )
        return GradingPartition(blocks)

    def spinc_partition(self) -> GradingPartition:
        groups: dict[H1MClass, list[int]] = {}
        for i, cls in enumerate(self.classes):
            groups.setdefault(cls, []).append(i)
        return self._partition(groups.values())

    def s_tilde_partition(self) -> GradingPartition:
        parent = list(range(len(self.states)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        holder: dict[CycleVector, int] = {}
        for i, eps in enumerate(self.epsilon):
            for v in eps:
                j = holder.setdefault(v, i)
                if j != i:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
        groups: dict[int, list[int]] = {}
        for i in range(len(self.states)):
            groups.setdefault(find(i), []).append(i)
        return self._partition(groups.values())


def spinc_partition(c: VeeringComplex, states: Sequence[HeegaardState] | None = None) -> GradingPartition:
    return Gradings(c, states).spinc_partition()


def s_tilde_partition(c: VeeringComplex, states: Sequence[HeegaardState] | None = None) -> GradingPartition:
    return Gradings(c, states).s_tilde_partition()


__all__ = [
    "CycleVector",
    "DiagonalError",
    "Block",
    "GradingPartition",
    "Gradings",
    "H1MClass",
    "HomologyQuotient",
    "boundary_vector",
    "cycle_vector",
    "epsilon_tilde",
    "h1m_class",
    "is_cycle",
    "s_tilde_partition",
    "side_path",
    "spinc_partition",
    "strum_resolutions",
]

