"""k-superdiagrams and walled (r,s)-superdiagrams.

Vertices are ``Vertex(row, index)`` with ``row`` 0 for the top row and 1 for
the bottom row and ``index`` 1-based.  Tuple order (top before bottom, then
by index) is the canonical edge-endpoint order used everywhere.
"""
from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

TOP, BOTTOM = 0, 1
ENUMERATION_LIMIT = 6


class DiagramError(ValueError):
    """Invalid diagram data."""


class DiagramParseError(DiagramError):
    def __init__(self, message: str, position: str):
        super().__init__(f"{message} (at {position})")
        self.position = position


class Vertex(NamedTuple):
    row: int
    index: int

    def __str__(self):
        return ("t" if self.row == TOP else "b") + str(self.index)


def T(i: int) -> Vertex:
    return Vertex(TOP, i)


def B(i: int) -> Vertex:
    return Vertex(BOTTOM, i)


def edge_id(u: Vertex, v: Vertex) -> tuple[Vertex, Vertex]:
    if u == v:
        raise DiagramError(f"degenerate edge at {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class KSuperDiagram:
    """A permutation diagram on ``k`` strands with marked edges.

    ``bottom_of[t-1]`` is the bottom vertex joined to top vertex ``t`` and
    marked edges are named by their top vertex.
    """

    k: int
    bottom_of: tuple[int, ...]
    marked: frozenset[int]

    @property
    def parity(self) -> int:
        return len(self.marked) % 2

    @property
    def top_of(self) -> tuple[int, ...]:
        inv = [0] * self.k
        for t, b in enumerate(self.bottom_of, 1):
            inv[b - 1] = t
        return tuple(inv)

    def __str__(self):
        return serialize(self)


def new_k_diagram(k: int, bottom_of: Iterable[int], marked: Iterable[int] = ()) -> KSuperDiagram:
    bottom_of = tuple(int(b) for b in bottom_of)
    marked = frozenset(int(m) for m in marked)
    if k < 1:
        raise DiagramError("k must be at least 1")
    if len(bottom_of) != k or sorted(bottom_of) != list(range(1, k + 1)):
        raise DiagramError(f"bottom_of {bottom_of} is not a permutation of 1..{k}")
    bad = [m for m in marked if not 1 <= m <= k]
    if bad:
        raise DiagramError(f"mark index {min(bad)} out of range 1..{k}")
    return KSuperDiagram(k, bottom_of, marked)


def k_identity(k: int) -> KSuperDiagram:
    return KSuperDiagram(k, tuple(range(1, k + 1)), frozenset())


@dataclass(frozen=True)
class WalledDiagram:
    """An (r,s)-superdiagram: a wall-respecting perfect matching with marks.

    ``edges`` is the sorted tuple of canonical edge ids; ``marked`` is a
    subset of ``edges``.
    """

    r: int
    s: int
    edges: tuple[tuple[Vertex, Vertex], ...]
    marked: frozenset[tuple[Vertex, Vertex]]

    @property
    def size(self) -> int:
        return self.r + self.s

    @property
    def parity(self) -> int:
        return len(self.marked) % 2

    def mate(self) -> dict[Vertex, Vertex]:
        out = {}
        for u, v in self.edges:
            out[u] = v
            out[v] = u
        return out

    def is_marked(self, u: Vertex, v: Vertex) -> bool:
        return edge_id(u, v) in self.marked

    def vertical_edges(self):
        return [e for e in self.edges if e[0].row != e[1].row]

    def horizontal_edges(self, row: int):
        return [e for e in self.edges if e[0].row == row and e[1].row == row]

    def __str__(self):
        return serialize(self)


def _side(r: int, i: int) -> int:
    return 0 if i <= r else 1


def new_walled(r: int, s: int, edges: Iterable, marked: Iterable = ()) -> WalledDiagram:
    if r < 0 or s < 0 or r + s == 0:
        raise DiagramError("need r, s >= 0 with r + s > 0")
    n = r + s
    canon = []
    for e in edges:
        u, v = (Vertex(*x) for x in e)
        canon.append(edge_id(u, v))
    seen: dict[Vertex, int] = {}
    for u, v in canon:
        for x in (u, v):
            if x.row not in (TOP, BOTTOM) or not 1 <= x.index <= n:
                raise DiagramError(f"vertex {x} out of range")
            seen[x] = seen.get(x, 0) + 1
    for row in (TOP, BOTTOM):
        for i in range(1, n + 1):
            deg = seen.get(Vertex(row, i), 0)
            if deg != 1:
                raise DiagramError(f"vertex {Vertex(row, i)} has degree {deg}")
    for u, v in canon:
        if u.row != v.row:
            if _side(r, u.index) != _side(r, v.index):
                raise DiagramError(f"vertical edge {u}-{v} crosses the wall")
        elif _side(r, u.index) == _side(r, v.index):
            raise DiagramError(f"horizontal edge {u}-{v} does not cross the wall")
    edge_set = set(canon)
    mk = set()
    for e in marked:
        u, v = (Vertex(*x) for x in e)
        eid = edge_id(u, v)
        if eid not in edge_set:
            raise DiagramError(f"marked edge {u}-{v} is not an edge")
        mk.add(eid)
    return WalledDiagram(r, s, tuple(sorted(canon)), frozenset(mk))


def walled_identity(r: int, s: int) -> WalledDiagram:
    return new_walled(r, s, [(T(i), B(i)) for i in range(1, r + s + 1)])


# -- generators ---------------------------------------------------------------

_GEN_RE = re.compile(r"^(s|c)_?\{?(\d+)\}?$|^e(_?\{?(\d+),(\d+)\}?)?$")


def _parse_generator_name(name: str, r: int):
    name = name.strip().replace(" ", "")
    m = _GEN_RE.match(name)
    if not m:
        raise DiagramError(f"unknown generator name {name!r}")
    if m.group(1):
        return m.group(1), int(m.group(2))
    if m.group(4) is not None:
        p, q = int(m.group(4)), int(m.group(5))
        if (p, q) != (r, r + 1):
            raise DiagramError(f"only e_{{{r},{r + 1}}} is a generator; use e_pq for {name}")
    return "e", None


def generator(r: int, s: int, name: str) -> WalledDiagram:
    """Generator diagram ``s_i`` (i != r), ``e`` / ``e_{r,r+1}`` or ``c_i``."""
    kind, i = _parse_generator_name(name, r)
    n = r + s
    if kind == "s":
        if not 1 <= i <= n - 1 or i == r:
            raise DiagramError(f"s_{i} is not admissible for (r,s)=({r},{s})")
        perm = list(range(1, n + 1))
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
        return new_walled(r, s, [(T(t), B(b)) for t, b in enumerate(perm, 1)])
    if kind == "c":
        if not 1 <= i <= n:
            raise DiagramError(f"c_{i} is not admissible for (r,s)=({r},{s})")
        return new_walled(r, s, [(T(t), B(t)) for t in range(1, n + 1)], [(T(i), B(i))])
    if r == 0 or s == 0:
        raise DiagramError("e_{r,r+1} is undefined when r or s is 0")
    return e_pq(r, s, r, r + 1)


def e_pq(r: int, s: int, p: int, q: int) -> WalledDiagram:
    if not (1 <= p <= r < q <= r + s):
        raise DiagramError(f"e_{{{p},{q}}} needs 1 <= p <= r < q <= r+s")
    edges = [(T(p), T(q)), (B(p), B(q))]
    edges += [(T(t), B(t)) for t in range(1, r + s + 1) if t not in (p, q)]
    return new_walled(r, s, edges)


# -- flip ---------------------------------------------------------------------

def flip(d: KSuperDiagram, r: int, s: int) -> WalledDiagram:
    """Swap top and bottom vertices right of the wall, keeping marks."""
    if r < 0 or s < 0 or r + s != d.k:
        raise DiagramError(f"flip needs r + s = k ({r} + {s} != {d.k})")

    def moved(v: Vertex) -> Vertex:
        if v.index > r:
            return Vertex(1 - v.row, v.index)
        return v

    edges, marked = [], []
    for t, b in enumerate(d.bottom_of, 1):
        e = (moved(T(t)), moved(B(b)))
        edges.append(e)
        if t in d.marked:
            marked.append(e)
    return new_walled(r, s, edges, marked)


def unflip(d: WalledDiagram) -> KSuperDiagram:
    r = d.r

    def moved(v: Vertex) -> Vertex:
        return Vertex(1 - v.row, v.index) if v.index > r else v

    bottom_of = [0] * d.size
    marked = set()
    for u, v in d.edges:
        a, b = moved(u), moved(v)
        if a.row == BOTTOM:
            a, b = b, a
        bottom_of[a.index - 1] = b.index
        if (u, v) in d.marked:
            marked.add(a.index)
    return new_k_diagram(d.size, bottom_of, marked)


# -- enumeration --------------------------------------------------------------

def _guard(n: int, force: bool):
    if n > ENUMERATION_LIMIT and not force:
        raise DiagramError(f"enumeration of size {n} exceeds guard {ENUMERATION_LIMIT}")


def enumerate_k(k: int, force: bool = False) -> list[KSuperDiagram]:
    _guard(k, force)
    out = []
    for perm in itertools.permutations(range(1, k + 1)):
        for mask in range(1 << k):
            marked = frozenset(i + 1 for i in range(k) if mask >> i & 1)
            out.append(KSuperDiagram(k, perm, marked))
    out.sort(key=serialize)
    return out


def _perfect_matchings_walled(r: int, s: int):
    n = r + s
    left = list(range(1, r + 1))
    right = list(range(r + 1, n + 1))
    for a in range(min(r, s) + 1):
        for top_l in itertools.combinations(left, a):
            for top_r in itertools.permutations(right, a):
                for bot_l in itertools.combinations(left, a):
                    for bot_r in itertools.permutations(right, a):
                        edges = [(T(x), T(y)) for x, y in zip(top_l, top_r)]
                        edges += [(B(x), B(y)) for x, y in zip(bot_l, bot_r)]
                        rest_tl = [x for x in left if x not in top_l]
                        rest_bl = [x for x in left if x not in bot_l]
                        rest_tr = [x for x in right if x not in top_r]
                        rest_br = [x for x in right if x not in bot_r]
                        for pl in itertools.permutations(rest_bl):
                            for pr in itertools.permutations(rest_br):
                                yield edges + [(T(t), B(b)) for t, b in zip(rest_tl, pl)] + [
                                    (T(t), B(b)) for t, b in zip(rest_tr, pr)
                                ]


def enumerate_walled(r: int, s: int, force: bool = False) -> list[WalledDiagram]:
    _guard(r + s, force)
    out = []
    for edges in _perfect_matchings_walled(r, s):
        base = new_walled(r, s, edges)
        for mask in range(1 << len(base.edges)):
            marked = [e for i, e in enumerate(base.edges) if mask >> i & 1]
            out.append(WalledDiagram(r, s, base.edges, frozenset(marked)))
    out.sort(key=serialize)
    return out


def walled_dimension(r: int, s: int) -> int:
    return 2 ** (r + s) * math.factorial(r + s)


# -- serialization ------------------------------------------------------------

def to_json_obj(d) -> dict:
    if isinstance(d, KSuperDiagram):
        return {
            "kind": "k",
            "k": d.k,
            "edges": [{"top": t, "bot": b, "marked": t in d.marked} for t, b in enumerate(d.bottom_of, 1)],
        }
    if isinstance(d, WalledDiagram):
        return {
            "kind": "walled",
            "r": d.r,
            "s": d.s,
            "edges": [{"u": str(u), "v": str(v), "marked": (u, v) in d.marked} for u, v in d.edges],
        }
    raise TypeError(f"not a diagram: {d!r}")


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def serialize(d) -> str:
    return dumps(to_json_obj(d))


_VERTEX_RE = re.compile(r"^([tb])([1-9]\d*)$")


def _parse_vertex(text, where: str) -> Vertex:
    if not isinstance(text, str):
        raise DiagramParseError(f"vertex must be a string, got {text!r}", where)
    m = _VERTEX_RE.match(text)
    if not m:
        raise DiagramParseError(f"malformed vertex name {text!r}", where)
    return Vertex(TOP if m.group(1) == "t" else BOTTOM, int(m.group(2)))


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise DiagramParseError(f"missing field {key!r}", where)
    value = obj[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise DiagramParseError(f"field {key!r} must be an integer", where)
    if kind is bool and not isinstance(value, bool):
        raise DiagramParseError(f"field {key!r} must be a boolean", where)
    if kind is list and not isinstance(value, list):
        raise DiagramParseError(f"field {key!r} must be a list", where)
    return value


def from_json_obj(obj):
    kind = _require(obj, "kind", str, "$")
    edges = _require(obj, "edges", list, "$")
    try:
        if kind == "k":
            k = _require(obj, "k", int, "$")
            bottom_of = [0] * k
            marked = []
            for n, e in enumerate(edges):
                where = f"$.edges[{n}]"
                t = _require(e, "top", int, where)
                b = _require(e, "bot", int, where)
                if not 1 <= t <= k:
                    raise DiagramParseError(f"top vertex {t} out of range", where)
                bottom_of[t - 1] = b
                if _require(e, "marked", bool, where):
                    marked.append(t)
            return new_k_diagram(k, bottom_of, marked)
        if kind == "walled":
            r = _require(obj, "r", int, "$")
            s = _require(obj, "s", int, "$")
            es, marked = [], []
            for n, e in enumerate(edges):
                where = f"$.edges[{n}]"
                u = _parse_vertex(_require(e, "u", str, where), where + ".u")
                v = _parse_vertex(_require(e, "v", str, where), where + ".v")
                es.append((u, v))
                if _require(e, "marked", bool, where):
                    marked.append((u, v))
            return new_walled(r, s, es, marked)
    except DiagramParseError:
        raise
    except DiagramError as exc:
        raise DiagramParseError(str(exc), "$") from exc
    raise DiagramParseError(f"unknown diagram kind {kind!r}", "$.kind")


def parse(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return from_json_obj(obj)
