"""Generators and relations for the walled Brauer superalgebra.

Words are evaluated directly in the diagram algebra; that evaluation is the
normal-form oracle.  A word is written as whitespace-separated letters
``s<i>``, ``e`` (the generator e_{r,r+1}) and ``c<i>``.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .diagram_core import (
    BOTTOM,
    TOP,
    B,
    T,
    DiagramError,
    KSuperDiagram,
    WalledDiagram,
    e_pq,
    generator,
    new_k_diagram,
    new_walled,
    walled_dimension,
)
from .superalgebra import AlgebraElement, product

_LETTER = re.compile(r"^(?:(s|c)(\d+)|e)$")


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorWord:
    r: int
    s: int
    letters: tuple[str, ...] = ()

    def __post_init__(self):
        for x in self.letters:
            m = _LETTER.match(x)
            if not m:
                raise WordError(f"malformed letter {x!r}")
            try:
                generator(self.r, self.s, x)
            except DiagramError as exc:
                raise WordError(f"inadmissible letter {x!r}: {exc}") from exc

    @classmethod
    def parse(cls, r: int, s: int, text: str) -> "GeneratorWord":
        return cls(r, s, tuple(text.split()))

    def __add__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.r, self.s, self.letters + other.letters)

    def inverse_order(self) -> "GeneratorWord":
        return GeneratorWord(self.r, self.s, self.letters[::-1])

    def __str__(self):
        return " ".join(self.letters) or "1"


def eval_word(w: GeneratorWord | Sequence[str], r: int | None = None, s: int | None = None) -> AlgebraElement:
    """Left-to-right product of generator diagrams."""
    if not isinstance(w, GeneratorWord):
        w = GeneratorWord(r, s, tuple(w))
    return product(("walled", w.r, w.s), [generator(w.r, w.s, x) for x in w.letters])


def _s_run(indices: Iterable[int]) -> list[str]:
    return [f"s{i}" for i in indices]


def transposition_word(r: int, s: int, i: int, j: int) -> list[str]:
    """The word s_i s_{i+1} ... s_{j-1} ... s_{i+1} s_i for the transposition (i j)."""
    if i > j:
        i, j = j, i
    if i == j:
        return []
    if (i <= r) != (j <= r):
        raise WordError(f"({i} {j}) crosses the wall")
    up = _s_run(range(i, j))
    return up + up[-2::-1]


def conjugator_word(r: int, s: int, p: int, q: int) -> list[str]:
    """s_{q-1} ... s_{r+1} s_p ... s_{r-1}."""
    return _s_run(range(q - 1, r, -1)) + _s_run(range(p, r))


def e_pq_word(r: int, s: int, p: int, q: int) -> list[str]:
    if not (1 <= p <= r < q <= r + s):
        raise WordError(f"e_{{{p},{q}}} needs 1 <= p <= r < q <= r+s")
    sig = conjugator_word(r, s, p, q)
    return sig + ["e"] + sig[::-1]


# -- relation checking ----------------------------------------------------------

Side = list  # list of (coefficient, letters)


@dataclass
class RelationResult:
    relation: str
    instance: str
    passed: bool
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out = {"relation": self.relation, "instance": self.instance, "passed": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class RelationCheckReport:
    r: int
    s: int
    results: list[RelationResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(x.passed for x in self.results)

    def summary(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for x in self.results:
            out[x.relation] = out.get(x.relation, True) and x.passed
        return out

    def failures(self) -> list[RelationResult]:
        return [x for x in self.results if not x.passed]

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "passed": self.passed,
            "relations": self.summary(),
            "instances": len(self.results),
            "failures": [x.to_json() for x in self.failures()],
        }


def _side_value(r, s, side: Side) -> AlgebraElement:
    acc = AlgebraElement.zero(("walled", r, s))
    for coeff, letters in side:
        acc = acc + eval_word(GeneratorWord(r, s, tuple(letters))).scale(coeff)
    return acc


def _w(*parts) -> list[str]:
    out: list[str] = []
    for p in parts:
        out.extend(p.split() if isinstance(p, str) else p)
    return out


def presentation_relations(r: int, s: int):
    """Yield ``(relation, instance, lhs, rhs)`` for every admissible instance."""
    n = r + s
    S = [i for i in range(1, n) if i != r]
    C = list(range(1, n + 1))
    has_e = r >= 1 and s >= 1
    one: Side = [(1, [])]

    for i in S:
        yield "symmetric_group", f"s{i}^2", [(1, [f"s{i}"] * 2)], one
        if i + 1 in S:
            yield "symmetric_group", f"braid {i}", [(1, _w(f"s{i} s{i + 1} s{i}"))], [(1, _w(f"s{i + 1} s{i} s{i + 1}"))]
        for j in S:
            if j > i + 1:
                yield "symmetric_group", f"s{i}s{j}", [(1, _w(f"s{i} s{j}"))], [(1, _w(f"s{j} s{i}"))]
    if has_e:
        yield "e_square_and_far_commute", "e^2", [(1, ["e", "e"])], []
        for j in S:
            if j not in (r - 1, r + 1):
                yield "e_square_and_far_commute", f"e s{j}", [(1, _w(f"e s{j}"))], [(1, _w(f"s{j} e"))]
        for j in (r - 1, r + 1):
            if j in S:
                yield "e_s_e", f"e s{j} e", [(1, _w(f"e s{j} e"))], [(1, ["e"])]
        if r - 1 in S and r + 1 in S:
            a, b = f"s{r - 1}", f"s{r + 1}"
            lhs = _w(a, b, "e", b, a, "e")
            rhs = _w("e", a, b, "e", b, a)
            yield "e_conjugate_swap", "", [(1, lhs)], [(1, rhs)]
            yield "walled_brauer_identity", "walled Brauer relation", [(1, lhs)], [(1, _w("e", a, b, "e"))]
    for i in C:
        yield "clifford", f"c{i}^2", [(1, [f"c{i}"] * 2)], [(-1 if i <= r else 1, [])]
        for j in C:
            if j > i:
                yield "clifford", f"c{i}c{j}", [(1, _w(f"c{i} c{j}"))], [(-1, _w(f"c{j} c{i}"))]
    for i in S:
        yield "s_c_mixed", f"s{i}c{i}s{i}", [(1, _w(f"s{i} c{i} s{i}"))], [(1, [f"c{i + 1}"])]
        for j in C:
            if j not in (i, i + 1):
                yield "s_c_mixed", f"s{i}c{j}", [(1, _w(f"s{i} c{j}"))], [(1, _w(f"c{j} s{i}"))]
    if has_e:
        yield "c_e_absorb", "c_r e", [(1, _w(f"c{r} e"))], [(1, _w(f"c{r + 1} e"))]
        yield "c_e_absorb", "e c_r", [(1, _w(f"e c{r}"))], [(1, _w(f"e c{r + 1}"))]
        yield "e_c_relations", "e c_r e", [(1, _w(f"e c{r} e"))], []
        for j in C:
            if j not in (r, r + 1):
                yield "e_c_relations", f"e c{j}", [(1, _w(f"e c{j}"))], [(1, _w(f"c{j} e"))]


def derived_relations(r: int, s: int):
    """Relations among e_{p,q}, transpositions and c_i that follow from the presentation."""
    if r < 1 or s < 1:
        return
    L = range(1, r + 1)
    R = range(r + 1, r + s + 1)

    def E(p, q):
        return e_pq_word(r, s, p, q)

    def t(i, j):
        return transposition_word(r, s, i, j)

    for p in L:
        for q in R:
            tag = f"p={p},q={q}"
            # same-side transpositions away from p, q commute with e_{p,q}
            for side in (L, R):
                for x, y in itertools.combinations(side, 2):
                    if {x, y} & {p, q}:
                        continue
                    yield "e_pq_commutes_with_disjoint_transposition", f"{tag} ({x} {y})", [(1, t(x, y) + E(p, q))], [(1, E(p, q) + t(x, y))]
            for p2 in L:
                if p2 == p:
                    continue
                yield "transposition_moves_e_pq", f"{tag} p'={p2}", [(1, t(p, p2) + E(p, q))], [(1, E(p2, q) + t(p, p2))]
                yield "e_pq_product_shared_end", f"{tag} p'={p2}", [(1, E(p, q) + E(p2, q))], [(1, E(p, q) + t(p, p2))]
            for q2 in R:
                if q2 == q:
                    continue
                yield "transposition_moves_e_pq", f"{tag} q'={q2}", [(1, t(q, q2) + E(p, q))], [(1, E(p, q2) + t(q, q2))]
                yield "e_pq_product_shared_end", f"{tag} q'={q2}", [(1, E(p, q) + E(p, q2))], [(1, E(p, q) + t(q, q2))]
            for p2 in L:
                for q2 in R:
                    if p2 == p or q2 == q:
                        continue
                    inst = f"{tag} p'={p2},q'={q2}"
                    yield "disjoint_e_pq_commute", inst, [(1, E(p, q) + E(p2, q2))], [(1, E(p2, q2) + E(p, q))]
                    yield "e_pq_pair_absorbs_double_swap", inst, [(1, E(p, q) + E(p2, q2) + t(p, p2) + t(q, q2))], [(1, E(p, q) + E(p2, q2))]
            yield "c_slides_along_e_pq", f"{tag} left", [(1, [f"c{q}"] + E(p, q))], [(1, [f"c{p}"] + E(p, q))]
            yield "c_slides_along_e_pq", f"{tag} right", [(1, E(p, q) + [f"c{q}"])], [(1, E(p, q) + [f"c{p}"])]
            for j in range(1, r + s + 1):
                if j not in (p, q):
                    yield "c_commutes_with_e_pq", f"{tag} j={j}", [(1, [f"c{j}"] + E(p, q))], [(1, E(p, q) + [f"c{j}"])]
            yield "e_pq_nilpotent", f"{tag} square", [(1, E(p, q) + E(p, q))], []
            yield "e_pq_nilpotent", f"{tag} c_p", [(1, E(p, q) + [f"c{p}"] + E(p, q))], []


def check_relation(r: int, s: int, relation: str, instance: str, lhs: Side, rhs: Side) -> RelationResult:
    """Compare two signed sums of words; ``lhs`` and ``rhs`` are lists of (coefficient, letters)."""
    a, b = _side_value(r, s, lhs), _side_value(r, s, rhs)
    if a == b:
        return RelationResult(relation, instance, True)
    ce = {
        "r": r,
        "s": s,
        "lhs": [[c, " ".join(w)] for c, w in lhs],
        "rhs": [[c, " ".join(w)] for c, w in rhs],
        "lhs_value": a.to_json(),
        "rhs_value": b.to_json(),
    }
    return RelationResult(relation, instance, False, ce)


def check_presentation_relations(r: int, s: int, derived: bool = True) -> RelationCheckReport:
    rep = RelationCheckReport(r, s)
    sources = [presentation_relations(r, s)]
    if derived:
        sources.append(derived_relations(r, s))
    for src in sources:
        for name, inst, lhs, rhs in src:
            rep.results.append(check_relation(r, s, name, inst, lhs, rhs))
    return rep


# -- Sergeev presentation ---------------------------------------------------------------

def _k_gen(k: int, name: str) -> KSuperDiagram:
    kind, i = name[0], int(name[1:])
    if kind == "s":
        perm = list(range(1, k + 1))
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
        return new_k_diagram(k, perm)
    return new_k_diagram(k, range(1, k + 1), {i})


def check_sergeev_relations(k: int) -> RelationCheckReport:
    """The symmetric group, Clifford and mixed relations inside D_k."""
    amb = ("k", k)

    def val(side):
        acc = AlgebraElement.zero(amb)
        for coeff, letters in side:
            acc = acc + product(amb, [_k_gen(k, x) for x in letters]).scale(coeff)
        return acc

    rels = []
    S = range(1, k)
    for i in S:
        rels.append(("symmetric_group", f"s{i}^2", [(1, [f"s{i}"] * 2)], [(1, [])]))
        if i + 1 < k:
            rels.append(("symmetric_group", f"braid {i}", [(1, _w(f"s{i} s{i + 1} s{i}"))], [(1, _w(f"s{i + 1} s{i} s{i + 1}"))]))
        for j in S:
            if j > i + 1:
                rels.append(("symmetric_group", f"s{i}s{j}", [(1, _w(f"s{i} s{j}"))], [(1, _w(f"s{j} s{i}"))]))
    for i in range(1, k + 1):
        rels.append(("clifford", f"c{i}^2", [(1, [f"c{i}"] * 2)], [(-1, [])]))
        for j in range(i + 1, k + 1):
            rels.append(("clifford", f"c{i}c{j}", [(1, _w(f"c{i} c{j}"))], [(-1, _w(f"c{j} c{i}"))]))
    for i in S:
        rels.append(("s_c_mixed", f"s{i}c{i}s{i}", [(1, _w(f"s{i} c{i} s{i}"))], [(1, [f"c{i + 1}"])]))
        for j in range(1, k + 1):
            if j not in (i, i + 1):
                rels.append(("s_c_mixed", f"s{i}c{j}", [(1, _w(f"s{i} c{j}"))], [(1, _w(f"c{j} s{i}"))]))
    rep = RelationCheckReport(k, 0)
    for name, inst, lhs, rhs in rels:
        rep.results.append(RelationResult(name, inst, val(lhs) == val(rhs)))
    return rep


# -- basis form -------------------------------------------------------------------

@dataclass(frozen=True)
class BasisXForm:
    """``c_P e_{p1,q1} ... e_{pa,qa} sigma c_Q`` multiplied left to right.

    ``sigma`` is given as ``bottom_of``: top vertex ``t`` joins bottom vertex
    ``sigma[t-1]``.
    """

    r: int
    s: int
    P: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    sigma: tuple[int, ...]
    Q: tuple[int, ...]

    def sigma_inv(self, b: int) -> int:
        return self.sigma.index(b) + 1

    def is_valid(self) -> bool:
        r, s = self.r, self.s
        ps = [p for p, _ in self.pairs]
        qs = [q for _, q in self.pairs]
        if ps != sorted(set(ps)) or any(not 1 <= p <= r for p in ps):
            return False
        if len(set(qs)) != len(qs) or any(not r < q <= r + s for q in qs):
            return False
        if sorted(self.sigma) != list(range(1, r + s + 1)):
            return False
        if any((t <= r) != (b <= r) for t, b in enumerate(self.sigma, 1)):
            return False
        inv = [self.sigma_inv(p) for p in ps]
        if inv != sorted(inv):
            return False
        if not set(self.P) <= set(ps) or list(self.P) != sorted(set(self.P)):
            return False
        forbidden = {self.sigma_inv(q) for q in qs}
        return list(self.Q) == sorted(set(self.Q)) and not set(self.Q) & forbidden

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "P": list(self.P),
            "pairs": [list(x) for x in self.pairs],
            "sigma": list(self.sigma),
            "Q": list(self.Q),
        }


def _sigma_diagram(r: int, s: int, sigma: Sequence[int]) -> WalledDiagram:
    return new_walled(r, s, [(T(t), B(b)) for t, b in enumerate(sigma, 1)])


def eval_basis_form(x: BasisXForm) -> AlgebraElement:
    r, s = x.r, x.s
    factors = [generator(r, s, f"c{i}") for i in x.P]
    factors += [e_pq(r, s, p, q) for p, q in x.pairs]
    factors.append(_sigma_diagram(r, s, x.sigma))
    factors += [generator(r, s, f"c{i}") for i in x.Q]
    return product(("walled", r, s), factors)


def decompose_to_basis_form(d: WalledDiagram) -> BasisXForm:
    r, s = d.r, d.s
    bots = sorted((u.index, v.index, (u, v) in d.marked) for u, v in d.horizontal_edges(BOTTOM))
    tops = sorted((u.index, v.index, (u, v) in d.marked) for u, v in d.horizontal_edges(TOP))
    sigma = [0] * (r + s)
    for (pt, qt, _), (pb, qb, _) in zip(tops, bots):
        sigma[pt - 1] = pb
        sigma[qt - 1] = qb
    Q = []
    for u, v in d.vertical_edges():
        sigma[u.index - 1] = v.index
        if (u, v) in d.marked:
            Q.append(u.index)
    Q += [a for a, _, mk in tops if mk]
    P = [a for a, _, mk in bots if mk]
    return BasisXForm(r, s, tuple(P), tuple((a, b) for a, b, _ in bots), tuple(sigma), tuple(sorted(Q)))


def enumerate_basis_forms(r: int, s: int):
    """All tuples satisfying the basis-form conditions."""
    left, right = range(1, r + 1), range(r + 1, r + s + 1)
    sigmas = [
        tuple(a) + tuple(b)
        for a in itertools.permutations(left)
        for b in itertools.permutations(right)
    ]
    for a in range(min(r, s) + 1):
        for ps in itertools.combinations(left, a):
            for qs in itertools.permutations(right, a):
                pairs = tuple(zip(ps, qs))
                for sigma in sigmas:
                    inv = [sigma.index(p) + 1 for p in ps]
                    if inv != sorted(inv):
                        continue
                    forbidden = {sigma.index(q) + 1 for q in qs}
                    free = [t for t in range(1, r + s + 1) if t not in forbidden]
                    for pm in range(1 << a):
                        P = tuple(p for i, p in enumerate(ps) if pm >> i & 1)
                        for qm in range(1 << len(free)):
                            Q = tuple(t for i, t in enumerate(free) if qm >> i & 1)
                            yield BasisXForm(r, s, P, pairs, sigma, Q)


def dim_formulas(r: int, s: int) -> tuple[int, int]:
    factorial = walled_dimension(r, s) if r + s else 1
    total = sum(
        2 ** (r + s) * (math.comb(r, i) * math.comb(s, i) * math.factorial(i)) ** 2
        * math.factorial(r - i) * math.factorial(s - i)
        for i in range(min(r, s) + 1)
    )
    return factorial, total
