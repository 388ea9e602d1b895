"""Signed products on k-superdiagrams and walled superdiagrams.

The product ``d1 * d2`` always stacks ``d1`` under ``d2``: the top row of
``d1`` is glued to the bottom row of ``d2``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Union

from .diagram_core import (
    BOTTOM,
    TOP,
    DiagramError,
    KSuperDiagram,
    Vertex,
    WalledDiagram,
    edge_id,
    flip,
    k_identity,
    serialize,
    to_json_obj,
    walled_identity,
)

Diagram = Union[KSuperDiagram, WalledDiagram]


def ambient_of(d: Diagram) -> tuple:
    if isinstance(d, KSuperDiagram):
        return ("k", d.k)
    return ("walled", d.r, d.s)


def _ambient_json(amb: tuple) -> dict:
    if amb[0] == "k":
        return {"kind": "k", "k": amb[1]}
    return {"kind": "walled", "r": amb[1], "s": amb[2]}


class AlgebraElement:
    """Finite integer combination of diagrams sharing one ambient."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: tuple, terms: dict | None = None):
        self.ambient = tuple(ambient)
        clean = {}
        for d, c in (terms or {}).items():
            if ambient_of(d) != self.ambient:
                raise ValueError(f"diagram ambient {ambient_of(d)} differs from {self.ambient}")
            if c:
                clean[d] = int(c)
        self.terms = clean

    @classmethod
    def of(cls, d: Diagram, coeff: int = 1) -> "AlgebraElement":
        return cls(ambient_of(d), {d: coeff})

    @classmethod
    def zero(cls, ambient: tuple) -> "AlgebraElement":
        return cls(ambient)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "AlgebraElement"):
        if self.ambient != other.ambient:
            raise ValueError(f"ambient mismatch {self.ambient} vs {other.ambient}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, 0) + c
        return AlgebraElement(self.ambient, out)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c: int) -> "AlgebraElement":
        return AlgebraElement(self.ambient, {d: c * v for d, v in self.terms.items()})

    def __rmul__(self, c: int) -> "AlgebraElement":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return elem_mul(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.ambient == other.ambient and self.terms == other.terms

    def __hash__(self):
        return hash((self.ambient, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[Diagram, int]]:
        return sorted(self.terms.items(), key=lambda t: serialize(t[0]))

    def to_json(self) -> dict:
        return {
            "ambient": _ambient_json(self.ambient),
            "terms": [{"coeff": str(c), "diagram": to_json_obj(d)} for d, c in self.sorted_terms()],
        }

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{serialize(d)}" for d, c in self.sorted_terms())


@dataclass(frozen=True)
class SignReport:
    rho: int = 0
    ell: int = 0
    c: int = 0
    ell1: int = 0
    rho1: int = 0
    p1: int = 0
    ell2: int = 0
    rho2: int = 0
    p2: int = 0
    loop_detected: bool = False
    kind: str = field(default="walled", compare=False)

    @property
    def exponent(self) -> int:
        if self.kind == "k":
            return self.rho + self.ell
        return self.c + self.ell1 + self.ell2 + self.rho1 + self.rho2 + self.p1 + self.p2

    @property
    def sign(self) -> int:
        return -1 if self.exponent % 2 else 1

    def to_json(self) -> dict:
        if self.kind == "k":
            return {"rho": self.rho, "ell": self.ell, "exponent": self.exponent}
        return {
            "c": self.c,
            "ell1": self.ell1,
            "rho1": self.rho1,
            "p1": self.p1,
            "ell2": self.ell2,
            "rho2": self.rho2,
            "p2": self.p2,
            "loop_detected": self.loop_detected,
            "exponent": self.exponent,
        }


# -- arranging number ---------------------------------------------------------

def stable_relabel(seq: Iterable[int]) -> list[int]:
    """Replace equal entries left to right by consecutive values, keeping order."""
    seq = list(seq)
    order = sorted(range(len(seq)), key=lambda i: (seq[i], i))
    out = [0] * len(seq)
    for rank, i in enumerate(order, 1):
        out[i] = rank
    return out


def inversions(seq: Iterable[int]) -> int:
    seq = list(seq)
    return sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])


def arranging_number(seq: Iterable[int]) -> int:
    return inversions(stable_relabel(seq))


# -- Sergeev normal words -----------------------------------------------------

@dataclass(frozen=True)
class NormalWord:
    """``sign * sigma * c_{i_1} ... c_{i_m}`` with ``sigma`` given as bottom_of."""

    sigma: tuple[int, ...]
    clifford: tuple[int, ...]
    sign: int = 1

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.clifford, self.clifford[1:])):
            raise ValueError(f"clifford indices {self.clifford} must be strictly increasing")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


def clifford_normalize(word: Iterable[int], square: dict | None = None, default_square: int = -1):
    """Sort a Clifford monomial; return (sign, increasing tuple).

    ``square`` maps an index to the value of ``c_i**2``; unlisted indices use
    ``default_square``.
    """
    word = list(word)
    sign = 1
    # bubble sort: each swap of distinct neighbours anticommutes
    n = len(word)
    for a in range(n):
        for b in range(n - 1 - a):
            if word[b] > word[b + 1]:
                word[b], word[b + 1] = word[b + 1], word[b]
                sign = -sign
    out: list[int] = []
    for x in word:
        if out and out[-1] == x:
            out.pop()
            sign *= (square or {}).get(x, default_square)
        else:
            out.append(x)
    return sign, tuple(out)


def _compose(sigma: tuple[int, ...], tau: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sigma[t - 1] for t in tau)


def _inverse(sigma: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for t, b in enumerate(sigma, 1):
        inv[b - 1] = t
    return tuple(inv)


def normal_mul(w1: NormalWord, w2: NormalWord) -> NormalWord:
    if len(w1.sigma) != len(w2.sigma):
        raise ValueError("k mismatch")
    tau_inv = _inverse(w2.sigma)
    word = [tau_inv[i - 1] for i in w1.clifford] + list(w2.clifford)
    sign, cl = clifford_normalize(word)
    return NormalWord(_compose(w1.sigma, w2.sigma), cl, sign * w1.sign * w2.sign)


def phi_k(d: KSuperDiagram) -> NormalWord:
    return NormalWord(d.bottom_of, tuple(sorted(d.marked)), 1)


def phi_k_inv(w: NormalWord) -> KSuperDiagram:
    return KSuperDiagram(len(w.sigma), tuple(w.sigma), frozenset(w.clifford))


# -- Sergeev product ------------------------------------------------------------

def sergeev_mul(d1: KSuperDiagram, d2: KSuperDiagram) -> tuple[AlgebraElement, SignReport]:
    if d1.k != d2.k:
        raise ValueError(f"k mismatch: {d1.k} vs {d2.k}")
    top2 = d2.top_of
    a = [top2[i - 1] for i in sorted(d1.marked)]
    b = sorted(d2.marked)
    rho = len(set(a) & set(b))
    ell = arranging_number(a + b)
    marked = set(a) ^ set(b)
    prod = KSuperDiagram(d1.k, _compose(d1.bottom_of, d2.bottom_of), frozenset(marked))
    report = SignReport(rho=rho, ell=ell, kind="k")
    return AlgebraElement.of(prod, report.sign), report


# -- walled product ---------------------------------------------------------------

def good_vertex(u: Vertex, v: Vertex) -> Vertex:
    """Left vertex of a horizontal edge, top vertex of a vertical one."""
    if u.row == v.row:
        return u if u.index < v.index else v
    return u if u.row == TOP else v


def _good_key(e) -> tuple[int, int]:
    g = good_vertex(*e)
    # bottom row first, then left to right
    return (0 if g.row == BOTTOM else 1, g.index)


@dataclass(frozen=True)
class _Piece:
    owner: int  # 1 for d1, 2 for d2
    edge: tuple
    marked: bool


def _concatenate(d1: WalledDiagram, d2: WalledDiagram):
    """Trace the glued diagram.

    Returns ``(chains, loop)`` where each chain is ``(start, end, pieces)``
    with ``start``/``end`` outer vertices in result coordinates and pieces in
    order from ``start``.  ``loop`` is true if a closed middle-row cycle exists.
    """
    # node names: ("B", i) result bottom = d1 bottom; ("M", i) middle; ("T", i)
    # result top = d2 top.
    def n1(v):
        return ("M", v.index) if v.row == TOP else ("B", v.index)

    def n2(v):
        return ("T", v.index) if v.row == TOP else ("M", v.index)

    adj: dict[tuple, list] = {}
    for owner, d, name in ((1, d1, n1), (2, d2, n2)):
        for e in d.edges:
            piece = _Piece(owner, e, e in d.marked)
            a, b = name(e[0]), name(e[1])
            adj.setdefault(a, []).append((piece, b))
            adj.setdefault(b, []).append((piece, a))
    used: set = set()
    chains = []
    starts = [("B", i) for i in range(1, d1.size + 1)] + [("T", i) for i in range(1, d1.size + 1)]
    for st in starts:
        piece, nxt = adj[st][0]
        if id(piece) in used:
            continue
        pieces = []
        cur, prev_piece = st, None
        while True:
            piece, nxt = next((p, w) for p, w in adj[cur] if p is not prev_piece)
            used.add(id(piece))
            pieces.append(piece)
            cur, prev_piece = nxt, piece
            if cur[0] != "M":
                break
        chains.append((st, cur, pieces))
    n_pieces = len(d1.edges) + len(d2.edges)
    loop = len(used) != n_pieces
    return chains, loop


def _to_vertex(node) -> Vertex:
    return Vertex(TOP if node[0] == "T" else BOTTOM, node[1])


def walled_mul(d1: WalledDiagram, d2: WalledDiagram) -> tuple[AlgebraElement, SignReport]:
    if (d1.r, d1.s) != (d2.r, d2.s):
        raise ValueError(f"shape mismatch ({d1.r},{d1.s}) vs ({d2.r},{d2.s})")
    r, s = d1.r, d1.s
    amb = ("walled", r, s)
    chains, loop = _concatenate(d1, d2)
    if loop:
        return AlgebraElement.zero(amb), SignReport(loop_detected=True)

    # number the marked edges: d1 first, then d2; bottom row then top row
    number: dict[tuple, int] = {}
    counter = 0
    for owner, d in ((1, d1), (2, d2)):
        for e in sorted(d.marked, key=_good_key):
            counter += 1
            number[(owner, e)] = counter

    edges, marked = [], []
    info: dict[int, tuple] = {}  # number -> (color, good index, position, chain)
    for chain_no, (st, en, pieces) in enumerate(chains):
        u, v = _to_vertex(st), _to_vertex(en)
        g = good_vertex(u, v)
        if g != u:
            pieces = pieces[::-1]
        color = "box" if (u.row == BOTTOM and v.row == BOTTOM) else "circle"
        e = edge_id(u, v)
        edges.append(e)
        if sum(p.marked for p in pieces) % 2:
            marked.append(e)
        for pos, p in enumerate(pieces):
            if p.marked:
                info[number[(p.owner, p.edge)]] = (color, g.index, pos, chain_no)

    circles = sorted(i for i, t in info.items() if t[0] == "circle")
    boxes = sorted(i for i, t in info.items() if t[0] == "box")
    c = sum(1 for i in circles for j in boxes if j > i)

    def seq_counts(members):
        seq = [info[i][1] for i in members]
        ell = arranging_number(seq)
        rho = sum(cnt // 2 for val, cnt in Counter(seq).items() if val <= r)
        return ell, rho

    ell1, rho1 = seq_counts(circles)
    ell2, rho2 = seq_counts(boxes)

    def passes(i, j):
        ci, cj = info[i], info[j]
        return ci[3] == cj[3] and cj[2] < ci[2]

    p1 = sum(1 for i in circles for j in circles if j < i and passes(i, j))
    p2 = sum(1 for i in boxes for j in boxes if j > i and passes(i, j))
    report = SignReport(c=c, ell1=ell1, rho1=rho1, p1=p1, ell2=ell2, rho2=rho2, p2=p2)
    prod = WalledDiagram(r, s, tuple(sorted(edges)), frozenset(marked))
    return AlgebraElement.of(prod, report.sign), report


def mul(d1: Diagram, d2: Diagram) -> tuple[AlgebraElement, SignReport]:
    if isinstance(d1, KSuperDiagram) and isinstance(d2, KSuperDiagram):
        return sergeev_mul(d1, d2)
    if isinstance(d1, WalledDiagram) and isinstance(d2, WalledDiagram):
        return walled_mul(d1, d2)
    raise ValueError("cannot multiply diagrams of different kinds")


def elem_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.ambient != y.ambient:
        raise ValueError(f"ambient mismatch {x.ambient} vs {y.ambient}")
    out: dict = {}
    for d1, a in x.terms.items():
        for d2, b in y.terms.items():
            prod, _ = mul(d1, d2)
            for d, c in prod.terms.items():
                out[d] = out.get(d, 0) + a * b * c
    return AlgebraElement(x.ambient, out)


def identity_element(ambient: tuple) -> AlgebraElement:
    if ambient[0] == "k":
        return AlgebraElement.of(k_identity(ambient[1]))
    return AlgebraElement.of(walled_identity(ambient[1], ambient[2]))


def product(ambient: tuple, factors: Iterable) -> AlgebraElement:
    """Left-to-right product of diagrams or elements; empty gives the identity."""
    acc = identity_element(ambient)
    for f in factors:
        if not isinstance(f, AlgebraElement):
            f = AlgebraElement.of(f)
        acc = elem_mul(acc, f)
    return acc


# -- signed flip ----------------------------------------------------------------

@dataclass(frozen=True)
class FlipCounts:
    u: int
    ell: int
    m: int
    x: int
    y: int

    @property
    def sign(self) -> int:
        return -1 if (self.u + (self.ell + self.x) * self.y) % 2 else 1


def flip_counts(d: KSuperDiagram, r: int, s: int) -> FlipCounts:
    if d.k != r + s:
        raise DiagramError(f"flip needs r + s = k ({r} + {s} != {d.k})")
    fd = flip(d, r, s)
    ell = m = x = y = 0
    for u, v in fd.marked:
        if u.row != v.row:
            if u.index <= r:
                ell += 1
            else:
                m += 1
        elif u.row == TOP:
            x += 1
        else:
            y += 1
    right = sorted(t for t in d.marked if t > r)
    u_count = sum(
        1
        for a in range(len(right))
        for b in range(a + 1, len(right))
        if d.bottom_of[right[a] - 1] > d.bottom_of[right[b] - 1]
    )
    return FlipCounts(u_count, ell, m, x, y)


def signed_flip(d: KSuperDiagram, r: int, s: int) -> tuple[WalledDiagram, int]:
    return flip(d, r, s), flip_counts(d, r, s).sign
