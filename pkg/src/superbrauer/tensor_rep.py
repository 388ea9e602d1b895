"""Matrices of diagrams and of q(n) on mixed tensor superspaces.

A letter of ``I = {1..n, 1bar..nbar}`` is stored as an integer code
``value - 1 + n * barred`` so that codes ``0..n-1`` are even and
``n..2n-1`` are odd.  A multi-index is a tuple of codes indexed
lexicographically with the first letter most significant.

Matrices use column = source basis vector, row = image basis vector, and
diagrams act on the right, so ``matrix(d1 d2) = matrix(d2) @ matrix(d1)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .diagram_core import TOP, KSuperDiagram, WalledDiagram, flip
from .exact_linalg import SparseExactMatrix
from .superalgebra import AlgebraElement, flip_counts

DENSE_LIMIT = 10**4


class RepresentationError(ValueError):
    pass


# -- letters and multi-indices ------------------------------------------------

@dataclass(frozen=True)
class IndexLetter:
    value: int
    barred: bool = False

    def code(self, n: int) -> int:
        if not 1 <= self.value <= n:
            raise RepresentationError(f"letter value {self.value} out of range 1..{n}")
        return self.value - 1 + (n if self.barred else 0)

    @property
    def parity(self) -> int:
        return int(self.barred)

    def bar(self) -> "IndexLetter":
        return IndexLetter(self.value, not self.barred)

    @classmethod
    def from_code(cls, code: int, n: int) -> "IndexLetter":
        return cls(code % n + 1, code >= n)

    def __str__(self):
        return f"{self.value}'" if self.barred else str(self.value)


def parity(code: int, n: int) -> int:
    return 1 if code >= n else 0


def bar(code: int, n: int) -> int:
    return (code + n) % (2 * n)


def codes_of(letters: Sequence, n: int) -> tuple[int, ...]:
    return tuple(x.code(n) if isinstance(x, IndexLetter) else int(x) for x in letters)


def basis_index(m: Sequence, n: int) -> int:
    idx = 0
    for c in codes_of(m, n):
        if not 0 <= c < 2 * n:
            raise RepresentationError(f"letter code {c} out of range for n={n}")
        idx = idx * 2 * n + c
    return idx


def unrank(index: int, n: int, length: int) -> tuple[int, ...]:
    base = 2 * n
    if not 0 <= index < base**length:
        raise RepresentationError(f"index {index} out of range")
    out = []
    for _ in range(length):
        index, c = divmod(index, base)
        out.append(c)
    return tuple(reversed(out))


def all_indices(n: int, length: int):
    return itertools.product(range(2 * n), repeat=length)


def multi_parity(m: Sequence[int], n: int) -> int:
    return sum(parity(c, n) for c in m) % 2


def _guard(n: int, length: int):
    if n < 1:
        raise RepresentationError("n must be at least 1")
    if (2 * n) ** length > DENSE_LIMIT:
        raise RepresentationError(f"space of dimension {(2 * n) ** length} exceeds {DENSE_LIMIT}")


# -- weights --------------------------------------------------------------------

def weight_k(d: KSuperDiagram, i: Sequence, j: Sequence, n: int) -> int:
    """Weight of ``d`` with bottom labels ``i`` and top labels ``j``."""
    i, j = codes_of(i, n), codes_of(j, n)
    k = d.k
    if len(i) != k or len(j) != k:
        raise RepresentationError("label length must equal k")
    for t in range(1, k + 1):
        b = d.bottom_of[t - 1]
        want = bar(i[b - 1], n) if t in d.marked else i[b - 1]
        if j[t - 1] != want:
            return 0
    exp = 0
    for t1 in range(1, k + 1):
        for t2 in range(t1 + 1, k + 1):
            b1, b2 = d.bottom_of[t1 - 1], d.bottom_of[t2 - 1]
            if b1 > b2:
                exp += parity(i[b1 - 1], n) * parity(i[b2 - 1], n)
    pj = [parity(c, n) for c in j]
    for b in d.marked:
        exp += sum(pj[:b])
    return -1 if exp % 2 else 1


def _edge_kinds(d: WalledDiagram):
    verts, tops, bots = [], [], []
    for u, v in d.edges:
        mk = (u, v) in d.marked
        if u.row != v.row:
            verts.append((u.index, v.index, mk))  # (top, bottom)
        elif u.row == TOP:
            tops.append((u.index, v.index, mk))  # (left, right)
        else:
            bots.append((u.index, v.index, mk))
    return verts, tops, bots


def _inside(x: int, arc: tuple) -> bool:
    return arc[0] < x < arc[1]


def _interleaved(a: tuple, b: tuple) -> bool:
    return a[0] < b[0] < a[1] < b[1] or b[0] < a[0] < b[1] < a[1]


def _walled_weight_from_kinds(r, verts, tops, bots, i, j, n) -> int:
    for t, b, mk in verts:
        if j[t - 1] != (bar(i[b - 1], n) if mk else i[b - 1]):
            return 0
    for lab, arcs in ((j, tops), (i, bots)):
        for a, b, mk in arcs:
            if lab[b - 1] != (bar(lab[a - 1], n) if mk else lab[a - 1]):
                return 0
    pi = [parity(c, n) for c in i]
    pj = [parity(c, n) for c in j]
    exp = 0
    for a, b, mk in bots:
        exp += pi[b - 1]
    # crossings
    vpar = [(t, b, pi[b - 1]) for t, b, _ in verts]
    for x in range(len(vpar)):
        t1, b1, q1 = vpar[x]
        if not q1:
            continue
        for y in range(x + 1, len(vpar)):
            t2, b2, q2 = vpar[y]
            if q2 and (t1 - t2) * (b1 - b2) < 0:
                exp += 1
    tpar = [(a, b, pj[b - 1]) for a, b, _ in tops]
    bpar = [(a, b, pi[b - 1]) for a, b, _ in bots]
    for t, b, q in vpar:
        if not q:
            continue
        for a1, b1, q1 in tpar:
            if q1 and _inside(t, (a1, b1)):
                exp += 1
        for a1, b1, q1 in bpar:
            if q1 and _inside(b, (a1, b1)):
                exp += 1
    for arcs in (tpar, bpar):
        for x in range(len(arcs)):
            for y in range(x + 1, len(arcs)):
                if arcs[x][2] and arcs[y][2] and _interleaved(arcs[x][:2], arcs[y][:2]):
                    exp += 1
    # marked-edge exponents
    marked_bottom = sorted(a for a, b, mk in bots if mk)
    for rank, a in enumerate(marked_bottom, 1):
        exp += sum(pi[:a]) + rank
    marked_top = [t for t, b, mk in verts if mk] + [a for a, b, mk in tops if mk]
    for b in marked_top:
        exp += sum(pj[:b]) if b <= r else sum(pj[: b - 1])
    return -1 if exp % 2 else 1


def weight_walled(d: WalledDiagram, i: Sequence, j: Sequence, n: int) -> int:
    i, j = codes_of(i, n), codes_of(j, n)
    if len(i) != d.size or len(j) != d.size:
        raise RepresentationError("label length must equal r+s")
    verts, tops, bots = _edge_kinds(d)
    return _walled_weight_from_kinds(d.r, verts, tops, bots, i, j, n)


# -- diagram matrices -----------------------------------------------------------

def phi_matrix(d: KSuperDiagram, n: int) -> SparseExactMatrix:
    """Matrix of the right action of a k-superdiagram on V^{(x)k}."""
    k = d.k
    _guard(n, k)
    N = (2 * n) ** k
    entries = {}
    for i in all_indices(n, k):
        j = tuple(
            bar(i[b - 1], n) if t in d.marked else i[b - 1] for t, b in enumerate(d.bottom_of, 1)
        )
        w = weight_k(d, i, j, n)
        if w:
            entries[(basis_index(j, n), basis_index(i, n))] = w
    return SparseExactMatrix(N, N, entries)


def _walled_entries(d: WalledDiagram, n: int, coeff: int, acc: dict):
    size = d.size
    verts, tops, bots = _edge_kinds(d)
    for i in all_indices(n, size):
        ok = True
        for a, b, mk in bots:
            if i[b - 1] != (bar(i[a - 1], n) if mk else i[a - 1]):
                ok = False
                break
        if not ok:
            continue
        j = [0] * size
        for t, b, mk in verts:
            j[t - 1] = bar(i[b - 1], n) if mk else i[b - 1]
        for free in itertools.product(range(2 * n), repeat=len(tops)):
            for (a, b, mk), x in zip(tops, free):
                j[a - 1] = x
                j[b - 1] = bar(x, n) if mk else x
            w = _walled_weight_from_kinds(d.r, verts, tops, bots, i, j, n)
            if w:
                key = (basis_index(j, n), basis_index(i, n))
                v = acc.get(key, 0) + coeff * w
                if v:
                    acc[key] = v
                else:
                    acc.pop(key, None)


def psi_matrix(x, n: int) -> SparseExactMatrix:
    """Matrix on V^{(x)r} (x) W^{(x)s} of a walled diagram or algebra element."""
    if isinstance(x, WalledDiagram):
        x = AlgebraElement.of(x)
    if not isinstance(x, AlgebraElement) or x.ambient[0] != "walled":
        raise RepresentationError("psi_matrix needs a walled diagram or element")
    r, s = x.ambient[1], x.ambient[2]
    _guard(n, r + s)
    N = (2 * n) ** (r + s)
    acc: dict = {}
    for d, c in x.sorted_terms():
        _walled_entries(d, n, c, acc)
    return SparseExactMatrix(N, N, acc)


def sergeev_matrix(x, n: int) -> SparseExactMatrix:
    """phi_matrix extended linearly over algebra elements of D_k."""
    if isinstance(x, KSuperDiagram):
        return phi_matrix(x, n)
    k = x.ambient[1]
    N = (2 * n) ** k
    out = SparseExactMatrix.zero(N, N)
    for d, c in x.sorted_terms():
        out = out + phi_matrix(d, n).scale(c)
    return out


# -- q(n) ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QnGenerator:
    """``e_{i,j}`` (even) or ``e_{i,jbar}`` (odd), 1 <= i, j <= n."""

    i: int
    j: int
    barred: bool = False

    @property
    def parity(self) -> int:
        return int(self.barred)

    def check(self, n: int):
        if not (1 <= self.i <= n and 1 <= self.j <= n):
            raise RepresentationError(f"generator indices ({self.i},{self.j}) out of range 1..{n}")

    def __str__(self):
        return f"e_{self.i},{self.j}{chr(39) if self.barred else ''}"


def qn_generators(n: int) -> list[QnGenerator]:
    return [QnGenerator(i, j, b) for b in (False, True) for i in range(1, n + 1) for j in range(1, n + 1)]


def qn_on_v(g: QnGenerator, n: int, k: int) -> list[tuple[int, int]]:
    """Single-factor action on V: list of (image code, coefficient)."""
    jj = g.j - 1 + (n if g.barred else 0)
    ii = g.i - 1
    out = []
    if jj == k:
        out.append((ii, 1))
    if bar(jj, n) == k:
        out.append((bar(ii, n), 1))
    return out


def qn_on_w(g: QnGenerator, n: int, k: int) -> list[tuple[int, int]]:
    """Single-factor action on W = V*."""
    jj = g.j - 1 + (n if g.barred else 0)
    ii = g.i - 1
    sign = -1 if (parity(jj, n) * parity(k, n)) % 2 == 0 else 1
    out = []
    if ii == k:
        out.append((jj, sign))
    if bar(ii, n) == k:
        out.append((bar(jj, n), sign))
    return out


def qn_gen_matrix(g: QnGenerator, n: int, shape) -> SparseExactMatrix:
    """Action of ``g`` on V^{(x)r} (x) W^{(x)s}; ``shape`` is ``(r, s)`` or ``k``."""
    g.check(n)
    r, s = (shape, 0) if isinstance(shape, int) else shape
    size = r + s
    _guard(n, size)
    N = (2 * n) ** size
    entries: dict = {}
    for m in all_indices(n, size):
        col = basis_index(m, n)
        pre = 0
        for pos in range(size):
            act = qn_on_v if pos < r else qn_on_w
            koszul = -1 if (g.parity * pre) % 2 else 1
            for code, c in act(g, n, m[pos]):
                img = m[:pos] + (code,) + m[pos + 1:]
                key = (basis_index(img, n), col)
                v = entries.get(key, 0) + koszul * c
                if v:
                    entries[key] = v
                else:
                    entries.pop(key, None)
            pre += parity(m[pos], n)
    return SparseExactMatrix(N, N, entries)


def qn_element_matrix(g: QnGenerator, n: int) -> SparseExactMatrix:
    """The 2n x 2n matrix of ``g`` acting on V."""
    return qn_gen_matrix(g, n, 1)


def p_matrix(n: int) -> SparseExactMatrix:
    """The odd operator P on V: v_i -> -v_ibar, v_ibar -> v_i."""
    entries = {}
    for a in range(n):
        entries[(a + n, a)] = -1
        entries[(a, a + n)] = 1
    return SparseExactMatrix(2 * n, 2 * n, entries)


def grading_matrix(n: int, length: int) -> SparseExactMatrix:
    N = (2 * n) ** length
    return SparseExactMatrix(
        N, N, {(x, x): (-1 if multi_parity(unrank(x, n, length), n) else 1) for x in range(N)}
    )


# -- Sergeev generator actions --------------------------------------------------------

def sergeev_gen_action(name: str, n: int, k: int) -> SparseExactMatrix:
    """Right action of ``s_j`` (graded place swap) or ``c_j`` (P in slot j)."""
    kind, idx = name[0], int(name.lstrip("sc_{").rstrip("}"))
    _guard(n, k)
    if kind == "s" and not 1 <= idx <= k - 1:
        raise RepresentationError(f"s_{idx} inadmissible for k={k}")
    if kind == "c" and not 1 <= idx <= k:
        raise RepresentationError(f"c_{idx} inadmissible for k={k}")
    if kind not in "sc":
        raise RepresentationError(f"unknown generator {name!r}")
    N = (2 * n) ** k
    entries = {}
    for m in all_indices(n, k):
        col = basis_index(m, n)
        if kind == "s":
            a, b = m[idx - 1], m[idx]
            img = m[: idx - 1] + (b, a) + m[idx + 1:]
            sign = -1 if parity(a, n) * parity(b, n) else 1
        else:
            x = m[idx - 1]
            img = m[: idx - 1] + (bar(x, n),) + m[idx:]
            sign = -1 if parity(x, n) == 0 else 1
            if sum(parity(c, n) for c in m[: idx - 1]) % 2:
                sign = -sign
        entries[(basis_index(img, n), col)] = sign
    return SparseExactMatrix(N, N, entries)


def word_matrix(letters: Iterable[str], n: int, k: int) -> SparseExactMatrix:
    """Matrix of a Sergeev word x1 x2 ... xm acting on the right."""
    N = (2 * n) ** k
    out = SparseExactMatrix.identity(N)
    for name in letters:
        out = sergeev_gen_action(name, n, k) @ out
    return out


def permutation_word(sigma: Sequence[int]) -> list[str]:
    """A word in s_j whose product (left to right) is the permutation sigma."""
    # reduce sigma to the identity by right multiplication with s_j
    cur = list(sigma)
    letters: list[str] = []
    k = len(cur)
    while True:
        for j in range(k - 1):
            if cur[j] > cur[j + 1]:
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                letters.append(f"s{j + 1}")
                break
        else:
            break
    return letters[::-1]


# -- flip of endomorphisms ------------------------------------------------------------

def _p(codes: Sequence[int], n: int) -> int:
    ps = [parity(c, n) for c in codes]
    tot, acc = 0, 0
    for q in ps:
        tot += acc * q
        acc += q
    return tot


def flip_endomorphism(m: SparseExactMatrix, n: int, r: int, s: int) -> SparseExactMatrix:
    """Rewrite an operator on V^{(x)(r+s)} as one on V^{(x)r} (x) W^{(x)s}.

    Realizes ``f (x) g -> f (x) g*`` with the dual-basis sign
    ``(-1)^{(|iR|+|jR|)|iR| + p(iR) + p(jR)}``.
    """
    size = r + s
    entries = {}
    for (row, col), v in m.entries.items():
        jj = unrank(row, n, size)
        ii = unrank(col, n, size)
        iL, jR_new = ii[:r], ii[r:]
        jL, iR_new = jj[:r], jj[r:]
        e = (multi_parity(iR_new, n) + multi_parity(jR_new, n)) * multi_parity(iR_new, n)
        e += _p(iR_new, n) + _p(jR_new, n)
        new_col = basis_index(iL + iR_new, n)
        new_row = basis_index(jL + jR_new, n)
        entries[(new_row, new_col)] = -v if e % 2 else v
    return SparseExactMatrix(m.n_rows, m.n_cols, entries)


def signed_flip_matrix(d: KSuperDiagram, n: int, r: int, s: int) -> SparseExactMatrix:
    """Psi of the signed Flip of ``d``."""
    return psi_matrix(flip(d, r, s), n).scale(flip_counts(d, r, s).sign)
