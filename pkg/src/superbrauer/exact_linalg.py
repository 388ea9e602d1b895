"""Sparse exact linear algebra.

Matrices are stored row-wise as ``{row: {col: value}}`` with values that are
Python ints or :class:`fractions.Fraction` (always reduced, zero never
stored).  Rank is computed by fraction-free elimination over the integers or,
for large systems, modulo three random primes in ``(2**30, 2**31)``.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

from sympy import nextprime

Rational = Fraction

EXACT_UNKNOWN_LIMIT = 3000
PRIME_LOW = 2**30
PRIME_HIGH = 2**31


def _normalize(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    return value


class SparseExactMatrix:
    """Immutable sparse matrix over the rationals."""

    __slots__ = ("n_rows", "n_cols", "_rows")

    def __init__(self, n_rows: int, n_cols: int, entries: Mapping | None = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("negative dimension")
        self.n_rows = n_rows
        self.n_cols = n_cols
        rows: dict[int, dict[int, object]] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < n_rows and 0 <= j < n_cols):
                raise IndexError(f"entry ({i}, {j}) outside {n_rows}x{n_cols}")
            v = _normalize(Fraction(v) if not isinstance(v, (int, Fraction)) else v)
            if v != 0:
                rows.setdefault(i, {})[j] = v
        self._rows = rows

    @classmethod
    def _from_rows(cls, n_rows, n_cols, rows):
        m = cls.__new__(cls)
        m.n_rows = n_rows
        m.n_cols = n_cols
        m._rows = {i: r for i, r in rows.items() if r}
        return m

    @classmethod
    def from_rows(cls, n_rows: int, n_cols: int, rows: Mapping[int, Mapping[int, object]]):
        return cls(n_rows, n_cols, {(i, j): v for i, r in rows.items() for j, v in r.items()})

    @classmethod
    def identity(cls, n: int) -> "SparseExactMatrix":
        return cls._from_rows(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def zero(cls, n_rows: int, n_cols: int) -> "SparseExactMatrix":
        return cls._from_rows(n_rows, n_cols, {})

    @classmethod
    def from_dense(cls, dense) -> "SparseExactMatrix":
        dense = [list(row) for row in dense]
        n_cols = len(dense[0]) if dense else 0
        return cls(len(dense), n_cols, {(i, j): v for i, row in enumerate(dense) for j, v in enumerate(row)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def entries(self) -> dict[tuple[int, int], object]:
        return {(i, j): v for i, r in self._rows.items() for j, v in r.items()}

    def row(self, i: int) -> dict[int, object]:
        return dict(self._rows.get(i, {}))

    def rows(self) -> Iterable[tuple[int, dict[int, object]]]:
        for i in sorted(self._rows):
            yield i, self._rows[i]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def get(self, i: int, j: int):
        return self._rows.get(i, {}).get(j, 0)

    def to_dense(self) -> list[list]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseExactMatrix":
        rows: dict[int, dict[int, object]] = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return SparseExactMatrix._from_rows(self.n_cols, self.n_rows, rows)

    def scale(self, c) -> "SparseExactMatrix":
        c = _normalize(Fraction(c))
        if c == 0:
            return SparseExactMatrix.zero(self.n_rows, self.n_cols)
        rows = {i: {j: _normalize(v * c) for j, v in r.items()} for i, r in self._rows.items()}
        return SparseExactMatrix._from_rows(self.n_rows, self.n_cols, rows)

    def __add__(self, other: "SparseExactMatrix") -> "SparseExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            target = rows.setdefault(i, {})
            for j, v in r.items():
                s = _normalize(target.get(j, 0) + v)
                if s == 0:
                    target.pop(j, None)
                else:
                    target[j] = s
        return SparseExactMatrix._from_rows(self.n_rows, self.n_cols, rows)

    def __neg__(self) -> "SparseExactMatrix":
        return self.scale(-1)

    def __sub__(self, other: "SparseExactMatrix") -> "SparseExactMatrix":
        return self + (-other)

    def __matmul__(self, other: "SparseExactMatrix") -> "SparseExactMatrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, tuple(sorted(self.entries.items()))))

    def is_zero(self) -> bool:
        return not self._rows

    def flatten(self) -> dict[int, object]:
        """Row-major flattening: entry (i, j) goes to position i*n_cols + j."""
        return {i * self.n_cols + j: v for i, r in self._rows.items() for j, v in r.items()}

    def to_json(self) -> dict:
        return {
            "rows": self.n_rows,
            "cols": self.n_cols,
            "entries": [[i, j, str(v)] for (i, j), v in sorted(self.entries.items())],
        }

    def __repr__(self):
        return f"SparseExactMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz()})"


def mat_mul(a: SparseExactMatrix, b: SparseExactMatrix) -> SparseExactMatrix:
    if a.n_cols != b.n_rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    brows = b._rows
    rows: dict[int, dict[int, object]] = {}
    for i, ar in a._rows.items():
        acc: dict[int, object] = {}
        for k, av in ar.items():
            br = brows.get(k)
            if br is None:
                continue
            for j, bv in br.items():
                acc[j] = acc.get(j, 0) + av * bv
        acc = {j: _normalize(v) for j, v in acc.items() if v != 0}
        if acc:
            rows[i] = acc
    return SparseExactMatrix._from_rows(a.n_rows, b.n_cols, rows)


@dataclass(frozen=True)
class RankResult:
    rank: int
    probabilistic: bool
    primes: tuple[int, ...] = ()
    agreed: bool = True


def _integer_rows(rows: Iterable[Mapping[int, object]]) -> list[dict[int, int]]:
    out = []
    for r in rows:
        if not r:
            continue
        denoms = [v.denominator for v in r.values() if isinstance(v, Fraction)]
        m = lcm(*denoms) if denoms else 1
        ir = {j: int(v * m) for j, v in r.items() if v != 0}
        if ir:
            out.append(ir)
    return out


def _eliminate(rows: list[dict[int, int]], prime: int | None) -> int:
    """Sparse Gaussian elimination; returns the rank.

    Pivot choice: column with fewest nonzeros, then shortest row in that
    column; ties go to the lowest (row, col).  With ``prime=None`` the
    elimination is fraction-free over Z with row-content reduction.
    """
    live: dict[int, dict[int, int]] = {}
    col_rows: dict[int, set[int]] = {}
    for rid, r in enumerate(rows):
        if prime is not None:
            r = {j: v % prime for j, v in r.items() if v % prime}
        if not r:
            continue
        live[rid] = r
        for j in r:
            col_rows.setdefault(j, set()).add(rid)

    heap = [(len(s), j) for j, s in col_rows.items()]
    heapq.heapify(heap)

    def drop(j, rid):
        s = col_rows[j]
        s.discard(rid)
        if s:
            heapq.heappush(heap, (len(s), j))
        else:
            del col_rows[j]

    def add(j, rid):
        s = col_rows.setdefault(j, set())
        s.add(rid)
        heapq.heappush(heap, (len(s), j))

    rank = 0
    while heap:
        cnt, pc = heapq.heappop(heap)
        s = col_rows.get(pc)
        if s is None or len(s) != cnt:
            continue
        pr = min(s, key=lambda i: (len(live[i]), i))
        prow = live.pop(pr)
        for j in prow:
            drop(j, pr)
        rank += 1
        pv = prow[pc]
        targets = sorted(col_rows.get(pc, ()))
        if prime is not None:
            inv = pow(pv, prime - 2, prime)
        for t in targets:
            trow = live[t]
            tv = trow[pc]
            if prime is not None:
                f = tv * inv % prime
                for j, v in prow.items():
                    old = trow.get(j)
                    nv = ((old or 0) - f * v) % prime
                    if nv:
                        trow[j] = nv
                        if old is None:
                            add(j, t)
                    elif old is not None:
                        del trow[j]
                        drop(j, t)
            else:
                g = gcd(pv, tv)
                mp, mt = pv // g, tv // g
                new = {j: v * mp for j, v in trow.items()}
                for j, v in prow.items():
                    new[j] = new.get(j, 0) - mt * v
                for j in trow:
                    if not new[j]:
                        drop(j, t)
                for j, v in new.items():
                    if v and j not in trow:
                        add(j, t)
                new = {j: v for j, v in new.items() if v}
                content = 0
                for v in new.values():
                    content = gcd(content, v)
                    if content == 1:
                        break
                if content > 1:
                    new = {j: v // content for j, v in new.items()}
                trow.clear()
                trow.update(new)
            if not trow:
                del live[t]
    return rank


def random_primes(count: int = 3, seed: int = 42) -> tuple[int, ...]:
    """Distinct primes in (2**30, 2**31), reproducible from ``seed``."""
    rng = random.Random(seed)
    primes: list[int] = []
    while len(primes) < count:
        p = nextprime(rng.randrange(PRIME_LOW, PRIME_HIGH - 2**16))
        if p not in primes:
            primes.append(p)
    return tuple(primes)


def rank_of_rows(rows: Iterable[Mapping[int, object]], mode: str = "exact", seed: int = 42) -> RankResult:
    """Rank of the matrix whose rows are the given sparse row dicts."""
    irows = _integer_rows(rows)
    if mode == "exact":
        return RankResult(_eliminate(irows, None), False)
    if mode != "modular":
        raise ValueError(f"unknown rank mode {mode!r}")
    primes = random_primes(3, seed)
    ranks = {_eliminate([dict(r) for r in irows], p) for p in primes}
    if len(ranks) != 1:
        # Modular rank only undershoots; the largest value is the closest bound.
        return RankResult(max(ranks), True, primes, agreed=False)
    return RankResult(ranks.pop(), True, primes)


def rank(a: SparseExactMatrix, mode: str = "exact", seed: int = 42) -> int:
    return rank_of_rows((r for _, r in a.rows()), mode, seed).rank


def rank_result(a: SparseExactMatrix, mode: str = "exact", seed: int = 42) -> RankResult:
    return rank_of_rows((r for _, r in a.rows()), mode, seed)


def nullspace_dim(a: SparseExactMatrix, mode: str = "exact", seed: int = 42) -> int:
    return a.n_cols - rank(a, mode, seed)


def choose_mode(unknowns: int) -> str:
    return "exact" if unknowns <= EXACT_UNKNOWN_LIMIT else "modular"
