"""Combinatorial presentation of a veering branched surface.

A :class:`VeeringComplex` records the dual graph ``G`` (a (2,2)-valent directed
multigraph whose vertices are the triple points), the smooth strands through
each vertex, and the diamond-shaped sectors glued along it.  Everything else in
the package is computed from this object.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Iterable, Mapping

BLUE = "blue"
RED = "red"
COLORS = (BLUE, RED)


class ComplexError(ValueError):
    """Raised for malformed input documents."""


class ParseError(ComplexError):
    def __init__(self, message: str, *, line: int | None = None, column: int | None = None,
                 path: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path is not None:
            where.append(f"field {path}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)
        self.line = line
        self.column = column
        self.path = path


class DuplicateIdError(ParseError):
    pass


class DanglingReferenceError(ParseError):
    pass


class CoverError(ComplexError):
    """A sector does not lift to the requested cyclic cover."""


@dataclass(frozen=True)
class Sector:
    id: int
    bottom: int
    top: int
    left_bottom: int
    right_bottom: int
    left_top: tuple[int, ...]
    right_top: tuple[int, ...]

    @property
    def left_path(self) -> tuple[int, ...]:
        return (self.left_bottom,) + self.left_top

    @property
    def right_path(self) -> tuple[int, ...]:
        return (self.right_bottom,) + self.right_top

    def path(self, side: str) -> tuple[int, ...]:
        if side == "left":
            return self.left_path
        if side == "right":
            return self.right_path
        raise ValueError(f"unknown side {side!r}")


@dataclass(frozen=True)
class VeeringComplex:
    """Dual graph, smoothings and sectors of a veering branched surface.

    Treat instances as immutable; the mappings are not copied defensively.
    """

    name: str
    vertices: Mapping[int, str]
    edges: Mapping[int, tuple[int, int]]
    smoothings: Mapping[int, tuple[tuple[int, int], ...]]
    sectors: Mapping[int, Sector]
    fiber_cocycle: Mapping[int, int] | None = None

    def tail(self, e: int) -> int:
        return self.edges[e][0]

    def head(self, e: int) -> int:
        return self.edges[e][1]

    def color(self, v: int) -> str:
        return self.vertices[v]

    def sector_color(self, s: int) -> str:
        return self.vertices[self.sectors[s].top]

    def is_toggle(self, s: int) -> bool:
        sec = self.sectors[s]
        return self.vertices[sec.bottom] != self.vertices[sec.top]

    def incoming(self, v: int) -> list[int]:
        return [e for e in sorted(self.edges) if self.edges[e][1] == v]

    def outgoing(self, v: int) -> list[int]:
        return [e for e in sorted(self.edges) if self.edges[e][0] == v]

    def sector_with_bottom_edge(self) -> dict[int, tuple[int, str]]:
        """Map each edge to the (sector, side) having it as a bottom side."""
        out: dict[int, tuple[int, str]] = {}
        for s in sorted(self.sectors):
            sec = self.sectors[s]
            out.setdefault(sec.left_bottom, (s, "left"))
            out.setdefault(sec.right_bottom, (s, "right"))
        return out

    def smooth_successor(self) -> dict[int, int]:
        """For each edge, the edge continuing it smoothly at its head."""
        nxt = {}
        for v in sorted(self.smoothings):
            for e_in, e_out in self.smoothings[v]:
                nxt[e_in] = e_out
        return nxt


# -- parsing and serialization ------------------------------------------------

def _require(obj: Any, key: str, kind: type | tuple[type, ...], path: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path=path)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", path=path)
    value = obj[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ParseError(f"expected an integer for {key!r}", path=f"{path}.{key}")
    if not isinstance(value, kind):
        raise ParseError(f"wrong type for {key!r}", path=f"{path}.{key}")
    return value


def _as_id(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError("ids must be non-negative integers", path=path)
    return value


def parse_complex(document: str | bytes | Mapping[str, Any]) -> VeeringComplex:
    """Parse a JSON document (text or already-decoded object) into a complex.

    Only syntax, duplicate ids and dangling references are checked here; use
    :func:`validate` for the structural invariants.
    """
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    else:
        data = document
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", path="$")

    name = _require(data, "name", str, "$")

    vertices: dict[int, str] = {}
    for i, item in enumerate(_require(data, "vertices", list, "$")):
        path = f"vertices[{i}]"
        vid = _as_id(_require(item, "id", int, path), f"{path}.id")
        color = _require(item, "color", str, path)
        if color not in COLORS:
            raise ParseError(f"unknown color {color!r}", path=f"{path}.color")
        if vid in vertices:
            raise DuplicateIdError(f"duplicate vertex id {vid}", path=path)
        vertices[vid] = color

    edges: dict[int, tuple[int, int]] = {}
    for i, item in enumerate(_require(data, "edges", list, "$")):
        path = f"edges[{i}]"
        eid = _as_id(_require(item, "id", int, path), f"{path}.id")
        ends = []
        for key in ("from", "to"):
            v = _as_id(_require(item, key, int, path), f"{path}.{key}")
            if v not in vertices:
                raise DanglingReferenceError(f"edge {eid} references missing vertex {v}",
                                             path=f"{path}.{key}")
            ends.append(v)
        if eid in edges:
            raise DuplicateIdError(f"duplicate edge id {eid}", path=path)
        edges[eid] = (ends[0], ends[1])

    def edge_ref(value: Any, path: str) -> int:
        e = _as_id(value, path)
        if e not in edges:
            raise DanglingReferenceError(f"missing edge {e}", path=path)
        return e

    def vertex_ref(value: Any, path: str) -> int:
        v = _as_id(value, path)
        if v not in vertices:
            raise DanglingReferenceError(f"missing vertex {v}", path=path)
        return v

    smoothings: dict[int, tuple[tuple[int, int], ...]] = {}
    for i, item in enumerate(_require(data, "smoothings", list, "$")):
        path = f"smoothings[{i}]"
        v = vertex_ref(_require(item, "vertex", int, path), f"{path}.vertex")
        pairs = []
        for j, pair in enumerate(_require(item, "pairs", list, path)):
            ppath = f"{path}.pairs[{j}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError("a smoothing pair is [incoming, outgoing]", path=ppath)
            pairs.append((edge_ref(pair[0], ppath + "[0]"), edge_ref(pair[1], ppath + "[1]")))
        if v in smoothings:
            raise DuplicateIdError(f"duplicate smoothing for vertex {v}", path=path)
        smoothings[v] = tuple(pairs)

    sectors: dict[int, Sector] = {}
    for i, item in enumerate(_require(data, "sectors", list, "$")):
        path = f"sectors[{i}]"
        sid = _as_id(_require(item, "id", int, path), f"{path}.id")
        if sid in sectors:
            raise DuplicateIdError(f"duplicate sector id {sid}", path=path)
        chains = {}
        for key in ("left_top", "right_top"):
            raw = _require(item, key, list, path)
            chains[key] = tuple(edge_ref(e, f"{path}.{key}[{j}]") for j, e in enumerate(raw))
        sectors[sid] = Sector(
            id=sid,
            bottom=vertex_ref(_require(item, "bottom", int, path), f"{path}.bottom"),
            top=vertex_ref(_require(item, "top", int, path), f"{path}.top"),
            left_bottom=edge_ref(_require(item, "left_bottom", int, path), f"{path}.left_bottom"),
            right_bottom=edge_ref(_require(item, "right_bottom", int, path), f"{path}.right_bottom"),
            left_top=chains["left_top"],
            right_top=chains["right_top"],
        )

    cocycle = None
    if data.get("fiber_cocycle") is not None:
        raw = data["fiber_cocycle"]
        if not isinstance(raw, dict):
            raise ParseError("fiber_cocycle must be an object", path="fiber_cocycle")
        cocycle = {}
        for key, value in raw.items():
            path = f"fiber_cocycle.{key}"
            try:
                e = int(key)
            except ValueError:
                raise ParseError("cocycle keys are edge ids", path=path) from None
            edge_ref(e, path)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ParseError("cocycle values are non-negative integers", path=path)
            cocycle[e] = value

    return VeeringComplex(name, vertices, edges, smoothings, sectors, cocycle)


def to_document(complex_: VeeringComplex) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "name": complex_.name,
        "vertices": [{"id": v, "color": complex_.vertices[v]} for v in sorted(complex_.vertices)],
        "edges": [{"id": e, "from": complex_.edges[e][0], "to": complex_.edges[e][1]}
                  for e in sorted(complex_.edges)],
        "smoothings": [{"vertex": v, "pairs": [list(p) for p in complex_.smoothings[v]]}
                       for v in sorted(complex_.smoothings)],
        "sectors": [
            {
                "id": s.id,
                "bottom": s.bottom,
                "top": s.top,
                "left_bottom": s.left_bottom,
                "right_bottom": s.right_bottom,
                "left_top": list(s.left_top),
                "right_top": list(s.right_top),
            }
            for s in (complex_.sectors[k] for k in sorted(complex_.sectors))
        ],
    }
    if complex_.fiber_cocycle is not None:
        doc["fiber_cocycle"] = {str(e): complex_.fiber_cocycle[e] for e in sorted(complex_.fiber_cocycle)}
    return doc


def serialize(complex_: VeeringComplex) -> str:
    """Deterministic JSON text: fixed key order, arrays sorted by id."""
    return json.dumps(to_document(complex_), indent=2) + "\n"


# -- validation ---------------------------------------------------------------

@dataclass
class CheckResult:
    check: str
    passed: bool
    offenders: list = field(default_factory=list)
    message: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, check_id: str) -> CheckResult:
        for c in self.checks:
            if c.check == check_id:
                return c
        raise KeyError(check_id)


CHECK_IDS = (
    "valence",
    "smoothing",
    "sector-paths",
    "strands",
    "edge-incidence",
    "bottom-bijection",
    "top-bijection",
    "corner-colors",
    "top-chain-rule",
    "connected",
)


def _check(check_id: str, offenders: Iterable, message: str) -> CheckResult:
    offenders = sorted(set(offenders), key=repr)
    return CheckResult(check_id, not offenders, offenders, message if offenders else "ok")


def validate(complex_: VeeringComplex) -> ValidationReport:
    """Run every structural check; failures are reported, never raised."""
    c = complex_
    ins: dict[int, list[int]] = defaultdict(list)
    outs: dict[int, list[int]] = defaultdict(list)
    for e in sorted(c.edges):
        t, h = c.edges[e]
        outs[t].append(e)
        ins[h].append(e)

    checks = []
    bad = [v for v in c.vertices if len(ins[v]) != 2 or len(outs[v]) != 2]
    checks.append(_check("valence", bad, "vertices without 2 incoming and 2 outgoing edges"))

    bad = []
    for v in c.vertices:
        pairs = c.smoothings.get(v)
        if pairs is None or len(pairs) != 2:
            bad.append(v)
            continue
        if sorted(p[0] for p in pairs) != sorted(ins[v]) or sorted(p[1] for p in pairs) != sorted(outs[v]):
            bad.append(v)
    bad += [v for v in c.smoothings if v not in c.vertices]
    checks.append(_check("smoothing", bad, "smoothing pairs do not cover the edge-ends at these vertices"))

    def path_ok(start_edge: int, chain: tuple[int, ...], bottom: int, top: int) -> bool:
        if c.tail(start_edge) != bottom or not chain:
            return False
        at = c.head(start_edge)
        for e in chain:
            if c.tail(e) != at:
                return False
            at = c.head(e)
        return at == top

    bad = [s.id for s in c.sectors.values()
           if not (path_ok(s.left_bottom, s.left_top, s.bottom, s.top)
                   and path_ok(s.right_bottom, s.right_top, s.bottom, s.top)
                   and s.left_bottom != s.right_bottom)]
    checks.append(_check("sector-paths", bad, "sector sides are not directed paths from bottom to top"))

    # Sides follow one branch loop between corners and switch at the corners.
    smooth = c.smooth_successor()
    bad = []
    for s in c.sectors.values():
        for bottom_edge, chain in ((s.left_bottom, s.left_top), (s.right_bottom, s.right_top)):
            if chain and smooth.get(bottom_edge) == chain[0]:
                bad.append(s.id)
            if any(smooth.get(a) != b for a, b in zip(chain, chain[1:])):
                bad.append(s.id)
        if s.left_top and s.right_top and s.left_top[-1] == s.right_top[-1]:
            bad.append(s.id)
    checks.append(_check("strands", bad, "sector sides do not follow smooth strands between corners"))

    bottoms = Counter()
    tops = Counter()
    for s in c.sectors.values():
        bottoms.update([s.left_bottom, s.right_bottom])
        tops.update(s.left_top + s.right_top)
    bad = [e for e in c.edges if bottoms[e] != 1 or tops[e] != 2]
    checks.append(_check("edge-incidence", bad, "edges without exactly 1 bottom and 2 top occurrences"))

    for key, attr in (("bottom-bijection", "bottom"), ("top-bijection", "top")):
        seen = Counter(getattr(s, attr) for s in c.sectors.values())
        bad = [v for v in c.vertices if seen[v] != 1] + [v for v in seen if v not in c.vertices]
        checks.append(_check(key, bad, f"sector -> {attr} vertex is not a bijection"))

    bad = []
    for s in c.sectors.values():
        col = c.vertices.get(s.top)
        for e in (s.left_bottom, s.right_bottom):
            if c.vertices.get(c.head(e)) != col:
                bad.append(s.id)
    checks.append(_check("corner-colors", bad, "side corners colored differently from the sector"))

    bottom_sector = {}
    for s in c.sectors.values():
        bottom_sector[s.left_bottom] = s.id
        bottom_sector[s.right_bottom] = s.id
    bad = []
    for s in c.sectors.values():
        col = c.vertices.get(s.top)
        for chain in (s.left_top, s.right_top):
            owners = [bottom_sector.get(e) for e in chain]
            if None in owners:
                bad.append(s.id)
                continue
            if len(chain) == 1:
                o = owners[0]
                if c.is_toggle(o) or c.sector_color(o) != col:
                    bad.append(s.id)
            else:
                if not (c.is_toggle(owners[0]) and c.is_toggle(owners[-1])):
                    bad.append(s.id)
                for o in owners[1:-1]:
                    if c.is_toggle(o) or c.sector_color(o) == col:
                        bad.append(s.id)
    checks.append(_check("top-chain-rule", bad, "top sides violate the toggle/fan rule"))

    checks.append(_check("connected", _disconnected_vertices(c), "dual graph is not connected"))
    return ValidationReport(checks)


def _disconnected_vertices(c: VeeringComplex) -> list[int]:
    if not c.vertices:
        return []
    adj: dict[int, set[int]] = defaultdict(set)
    for t, h in c.edges.values():
        adj[t].add(h)
        adj[h].add(t)
    start = min(c.vertices)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return [v for v in c.vertices if v not in seen]


# -- derived structure ----------------------------------------------------------

def branch_loops(complex_: VeeringComplex) -> list[tuple[int, ...]]:
    """Maximal smooth cycles of edges, each starting at its least edge id."""
    nxt = complex_.smooth_successor()
    seen: set[int] = set()
    loops = []
    for e in sorted(complex_.edges):
        if e in seen:
            continue
        loop = []
        cur = e
        while cur not in seen:
            seen.add(cur)
            loop.append(cur)
            cur = nxt[cur]
        loops.append(tuple(loop))
    return loops


def cyclic_cover(complex_: VeeringComplex, n: int, weight: Mapping[int, int]) -> VeeringComplex:
    """The n-fold cyclic cover defined by an edge weighting mod n.

    Vertex ``(v, k)`` gets id ``v * n + k``; the same scheme is used for edges
    and sectors.  Edge ``(e, k)`` runs from ``(tail e, k)`` to
    ``(head e, k + w(e))``.
    """
    if n < 2:
        raise ValueError("cover degree must be at least 2")
    c = complex_
    w = {e: weight.get(e, 0) % n for e in c.edges}

    def lift(x: int, k: int) -> int:
        return x * n + (k % n)

    vertices = {lift(v, k): c.vertices[v] for v in c.vertices for k in range(n)}
    edges = {lift(e, k): (lift(c.tail(e), k), lift(c.head(e), k + w[e])) for e in c.edges for k in range(n)}
    smoothings = {}
    for v, pairs in c.smoothings.items():
        for k in range(n):
            smoothings[lift(v, k)] = tuple((lift(a, k - w[a]), lift(b, k)) for a, b in pairs)

    def lift_path(path: tuple[int, ...], k: int) -> tuple[tuple[int, ...], int]:
        out = []
        for e in path:
            out.append(lift(e, k))
            k = (k + w[e]) % n
        return tuple(out), k

    sectors = {}
    for s in c.sectors.values():
        left_total = sum(w[e] for e in s.left_path) % n
        right_total = sum(w[e] for e in s.right_path) % n
        if left_total != right_total:
            raise CoverError(f"sector {s.id} does not lift: boundary weights {left_total} != {right_total} mod {n}")
        for k in range(n):
            left, _ = lift_path(s.left_path, k)
            right, _ = lift_path(s.right_path, k)
            sid = lift(s.id, k)
            sectors[sid] = Sector(sid, lift(s.bottom, k), lift(s.top, k + left_total),
                                  left[0], right[0], left[1:], right[1:])

    cocycle = None
    if c.fiber_cocycle is not None:
        cocycle = {lift(e, k): c.fiber_cocycle.get(e, 0) for e in c.edges for k in range(n)}
    return VeeringComplex(f"{c.name}-cover{n}", vertices, edges, smoothings, sectors, cocycle)


def holonomy_order(n: int, total_weight: int) -> int:
    """Number of sheets a loop of the given weight closes up after in the n-fold cover."""
    return n // gcd(n, total_weight % n or n)
