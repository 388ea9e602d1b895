"""Supercentralizer dimensions, image ranks and duality certificates."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import exact_linalg as xl
from .diagram_core import (
    enumerate_k,
    enumerate_walled,
    generator,
    e_pq,
    to_json_obj,
)
from .exact_linalg import SparseExactMatrix
from .superalgebra import mul, signed_flip
from .tensor_rep import (
    all_indices,
    flip_endomorphism,
    multi_parity,
    phi_matrix,
    psi_matrix,
    qn_gen_matrix,
    qn_generators,
    unrank,
)

CENTRALIZER_LIMIT = 300
EXHAUSTIVE_PAIR_LIMIT = 10_000
SAMPLE_PAIRS = 500
DEFAULT_SEED = 42


class GuardError(ValueError):
    pass


def _guard(n: int, size: int, force: bool = False):
    if n < 1:
        raise GuardError("n must be at least 1")
    if (2 * n) ** size > CENTRALIZER_LIMIT and not force:
        raise GuardError(f"(2n)^{size} = {(2 * n) ** size} exceeds guard {CENTRALIZER_LIMIT}")


@dataclass
class Check:
    name: str
    passed: bool
    counterexample: dict | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class DualityReport:
    n: int
    r: int | None = None
    s: int | None = None
    k: int | None = None
    algebra_dim: int = 0
    image_rank: int = 0
    centralizer_dim_even: int = 0
    centralizer_dim_odd: int = 0
    homomorphism_checked: int = 0
    injective: bool = False
    surjective: bool = False
    probabilistic: bool = False
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def centralizer_total(self) -> int:
        return self.centralizer_dim_even + self.centralizer_dim_odd

    def to_json(self) -> dict:
        out = {"n": self.n}
        if self.k is not None:
            out["k"] = self.k
        else:
            out["r"], out["s"] = self.r, self.s
        out.update(
            algebra_dim=self.algebra_dim,
            image_rank=self.image_rank,
            centralizer_dim_even=self.centralizer_dim_even,
            centralizer_dim_odd=self.centralizer_dim_odd,
            homomorphism_checked=self.homomorphism_checked,
            injective=self.injective,
            surjective=self.surjective,
            probabilistic=self.probabilistic,
            passed=self.passed,
            checks=[c.to_json() for c in self.checks],
        )
        return out


# -- centralizer ------------------------------------------------------------------

def _weights(n: int, r: int, s: int) -> list[tuple[int, ...]]:
    """e_{i,i} eigenvalues of every basis vector of the mixed space."""
    out = []
    for m in all_indices(n, r + s):
        w = [0] * n
        for pos, c in enumerate(m):
            w[c % n] += 1 if pos < r else -1
        out.append(tuple(w))
    return out


def centralizer_system(n: int, r: int, s: int, p: int):
    """Constraint rows for the parity-``p`` block, after weight pruning.

    Returns ``(rows, unknowns, raw_unknowns)``.  Unknowns ``X[a, b]`` whose
    ``e_{i,i}`` weights differ are forced to zero by the diagonal generators
    and are removed up front; the remaining equations are restricted to the
    surviving unknowns.
    """
    size = r + s
    N = (2 * n) ** size
    par = [multi_parity(unrank(x, n, size), n) for x in range(N)]
    wts = _weights(n, r, s)
    raw = sum(1 for a in range(N) for b in range(N) if (par[a] + par[b]) % 2 == p)
    var: dict[tuple[int, int], int] = {}
    for a in range(N):
        for b in range(N):
            if (par[a] + par[b]) % 2 == p and wts[a] == wts[b]:
                var[(a, b)] = len(var)
    by_row: dict[int, list[int]] = {}
    by_col: dict[int, list[int]] = {}
    for (a, b) in var:
        by_row.setdefault(a, []).append(b)
        by_col.setdefault(b, []).append(a)
    rows = []
    for g in qn_generators(n):
        if not g.barred and g.i == g.j:
            continue  # the pruning already encodes these equations
        G = qn_gen_matrix(g, n, (r, s))
        gcols: dict[int, dict[int, int]] = {}
        for (a, k), v in G.entries.items():
            gcols.setdefault(k, {})[a] = v
        sign = -1 if (g.parity * p) % 2 else 1
        eqs: dict[tuple[int, int], dict[int, int]] = {}
        # (G X)[a, b] = sum_k G[a, k] X[k, b]
        for (k, b), x in var.items():
            for a, v in gcols.get(k, {}).items():
                row = eqs.setdefault((a, b), {})
                row[x] = row.get(x, 0) + v
        # - sign * (X G)[a, b] = - sign * sum_k X[a, k] G[k, b]
        for (k, b), v in G.entries.items():
            for a in by_col.get(k, ()):
                x = var[(a, k)]
                row = eqs.setdefault((a, b), {})
                row[x] = row.get(x, 0) - sign * v
        for key in sorted(eqs):
            row = {x: v for x, v in eqs[key].items() if v}
            if row:
                rows.append(row)
    return rows, len(var), raw


def centralizer_dim(n: int, r: int, s: int, mode: str | None = None, seed: int = DEFAULT_SEED,
                    force: bool = False) -> tuple[int, int, bool]:
    """Dimensions of the even and odd supercentralizer pieces.

    ``mode=None`` picks exact elimination when the raw parity block has at
    most 3000 unknowns and the three-prime modular path otherwise.
    """
    dims, results = _centralizer_blocks(n, r, s, mode, seed, force)
    return dims[0], dims[1], any(res.probabilistic for res in results)


def _centralizer_blocks(n, r, s, mode, seed, force):
    _guard(n, r + s, force)
    dims, results = [], []
    for p in (0, 1):
        rows, unknowns, raw = centralizer_system(n, r, s, p)
        res = xl.rank_of_rows(rows, mode or xl.choose_mode(raw), seed)
        results.append(res)
        dims.append(unknowns - res.rank)
    return dims, results


def sergeev_centralizer_dim(n: int, k: int, mode: str | None = None, seed: int = DEFAULT_SEED,
                            force: bool = False) -> tuple[int, int, bool]:
    return centralizer_dim(n, k, 0, mode, seed, force)


# -- image rank -------------------------------------------------------------------------

def _flat_rows(mats):
    return [m.flatten() for m in mats]


def image_rank(n: int, r: int, s: int, mode: str = "exact", seed: int = DEFAULT_SEED,
               force: bool = False) -> int:
    _guard(n, r + s, force)
    mats = [psi_matrix(d, n) for d in enumerate_walled(r, s)]
    return xl.rank_of_rows(_flat_rows(mats), mode, seed).rank


def sergeev_image_rank(n: int, k: int, mode: str = "exact", seed: int = DEFAULT_SEED,
                       force: bool = False) -> int:
    _guard(n, k, force)
    mats = [phi_matrix(d, n) for d in enumerate_k(k)]
    return xl.rank_of_rows(_flat_rows(mats), mode, seed).rank


# -- checks -------------------------------------------------------------------------------

def _pairs(basis, seed: int, trials: int | None = None):
    if trials is None and len(basis) ** 2 <= EXHAUSTIVE_PAIR_LIMIT:
        return [(a, b) for a in basis for b in basis]
    rng = random.Random(seed)
    count = trials if trials is not None else SAMPLE_PAIRS
    return [(rng.choice(basis), rng.choice(basis)) for _ in range(count)]


def homomorphism_check(basis, n: int, matrix_of, seed: int, trials: int | None = None) -> tuple[Check, int]:
    cache: dict = {}

    def mat(d):
        if d not in cache:
            cache[d] = matrix_of(d, n)
        return cache[d]

    pairs = _pairs(basis, seed, trials)
    dim = mat(basis[0]).n_rows
    for a, b in pairs:
        prod, _ = mul(a, b)
        lhs = SparseExactMatrix.zero(dim, dim)
        for d, c in prod.sorted_terms():
            lhs = lhs + mat(d).scale(c)
        if lhs != mat(b) @ mat(a):
            ce = {"left": to_json_obj(a), "right": to_json_obj(b), "n": n}
            return Check("homomorphism", False, ce), len(pairs)
    return Check("homomorphism", True, detail=f"{len(pairs)} pairs"), len(pairs)


def supercommutation_check(basis, n: int, shape, matrix_of) -> Check:
    gens = [(g, qn_gen_matrix(g, n, shape)) for g in qn_generators(n)]
    for d in basis:
        D = matrix_of(d, n)
        for g, G in gens:
            sign = -1 if (g.parity * d.parity) % 2 else 1
            if G @ D != (D @ G).scale(sign):
                ce = {"diagram": to_json_obj(d), "generator": {"i": g.i, "j": g.j, "barred": g.barred}, "n": n}
                return Check("supercommutation", False, ce)
    return Check("supercommutation", True, detail=f"{len(basis)} diagrams x {len(gens)} generators")


def verify_mixed_duality(n: int, r: int, s: int, seed: int = DEFAULT_SEED, trials: int | None = None,
                         mode: str | None = None, force: bool = False) -> DualityReport:
    _guard(n, r + s, force)
    basis = enumerate_walled(r, s)
    rep = DualityReport(n=n, r=r, s=s, algebra_dim=len(basis))
    hom, count = homomorphism_check(basis, n, psi_matrix, seed, trials)
    rep.homomorphism_checked = count if hom.passed else 0
    rep.checks.append(hom)
    rep.checks.append(supercommutation_check(basis, n, (r, s), psi_matrix))
    rep.image_rank = image_rank(n, r, s, force=force)
    (even, odd), results = _centralizer_blocks(n, r, s, mode, seed, force)
    rep.centralizer_dim_even, rep.centralizer_dim_odd = even, odd
    rep.probabilistic = any(res.probabilistic for res in results)
    if rep.probabilistic:
        agreed = all(res.agreed for res in results)
        primes = sorted({p for res in results for p in res.primes})
        rep.checks.append(Check("modular_primes_agree", agreed, None if agreed else {"primes": primes},
                                detail=f"primes {primes}"))
    rep.injective = rep.image_rank == rep.algebra_dim
    rep.surjective = rep.image_rank == rep.centralizer_total
    rep.checks.append(Check("image_within_centralizer", rep.image_rank <= rep.centralizer_total,
                            detail=f"{rep.image_rank} <= {rep.centralizer_total}"))
    return rep


def verify_sergeev_duality(n: int, k: int, seed: int = DEFAULT_SEED, trials: int | None = None,
                           mode: str | None = None, force: bool = False) -> DualityReport:
    _guard(n, k, force)
    basis = enumerate_k(k)
    rep = DualityReport(n=n, k=k, algebra_dim=len(basis))
    hom, count = homomorphism_check(basis, n, phi_matrix, seed, trials)
    rep.homomorphism_checked = count if hom.passed else 0
    rep.checks.append(hom)
    rep.checks.append(supercommutation_check(basis, n, k, phi_matrix))
    rep.image_rank = sergeev_image_rank(n, k, force=force)
    (even, odd), results = _centralizer_blocks(n, k, 0, mode, seed, force)
    rep.centralizer_dim_even, rep.centralizer_dim_odd = even, odd
    rep.probabilistic = any(res.probabilistic for res in results)
    if rep.probabilistic:
        agreed = all(res.agreed for res in results)
        primes = sorted({p for res in results for p in res.primes})
        rep.checks.append(Check("modular_primes_agree", agreed, None if agreed else {"primes": primes},
                                detail=f"primes {primes}"))
    rep.injective = rep.image_rank == rep.algebra_dim
    rep.surjective = rep.image_rank == rep.centralizer_total
    rep.checks.append(Check("image_within_centralizer", rep.image_rank <= rep.centralizer_total,
                            detail=f"{rep.image_rank} <= {rep.centralizer_total}"))
    return rep


def flip_square_holds(d, n: int, r: int, s: int) -> bool:
    fd, sign = signed_flip(d, r, s)
    return flip_endomorphism(phi_matrix(d, n), n, r, s) == psi_matrix(fd, n).scale(sign)


def verify_flip_square(n: int, r: int, s: int, marked_only: bool | None = None, force: bool = False) -> Check:
    """Check the commuting square for every k-superdiagram with k = r+s.

    ``marked_only=False`` restricts to unmarked diagrams.
    """
    _guard(n, r + s, force)
    count = 0
    for d in enumerate_k(r + s):
        if marked_only is False and d.marked:
            continue
        count += 1
        if not flip_square_holds(d, n, r, s):
            return Check("flip_square", False, {"diagram": to_json_obj(d), "n": n, "r": r, "s": s})
    return Check("flip_square", True, detail=f"{count} diagrams")


def verify_centralizer_relations(n: int, r: int, s: int, force: bool = False) -> list[Check]:
    """The matrix relations satisfied by the images of sigma, e_{p,q} and c_i.

    Products are written in the opposite algebra: ``x y`` is ``M(y) @ M(x)``.
    """
    _guard(n, r + s, force)
    size = r + s
    N = (2 * n) ** size
    I = SparseExactMatrix.identity(N)
    Z = SparseExactMatrix.zero(N, N)

    def op(*ms):
        out = I
        for m in ms:
            out = m @ out
        return out

    c = {i: psi_matrix(generator(r, s, f"c{i}"), n) for i in range(1, size + 1)}
    checks: list[Check] = []

    def record(name, ok, **ctx):
        checks.append(Check(name, ok, None if ok else dict(ctx, n=n, r=r, s=s)))

    ok = True
    for i in range(1, size + 1):
        want = I.scale(-1) if i <= r else I
        ok_i = op(c[i], c[i]) == want
        if not ok_i:
            record("clifford_square", False, i=i)
            ok = False
    if ok:
        record("clifford_square", True)
    ok = all(op(c[i], c[j]) == op(c[j], c[i]).scale(-1) for i in c for j in c if i != j)
    record("clifford_anticommute", ok)

    perms = [d for d in enumerate_walled(r, s) if not d.marked and not d.horizontal_edges(0)]
    ok = True
    for sig in perms:
        S = psi_matrix(sig, n)
        bottom = {u.index: v.index for u, v in sig.edges}
        for j in range(1, size + 1):
            if op(S, c[j]) != op(c[bottom[j]], S):
                record("sigma_c", False, sigma=to_json_obj(sig), j=j)
                ok = False
                break
        if not ok:
            break
    if ok:
        record("sigma_c", True)

    if r >= 1 and s >= 1:
        results = {k: True for k in ("e_square", "e_c_e", "c_e_swap", "e_c_swap", "e_c_commute")}
        for p in range(1, r + 1):
            for q in range(r + 1, size + 1):
                E = psi_matrix(e_pq(r, s, p, q), n)
                results["e_square"] &= op(E, E) == Z
                results["e_c_e"] &= op(E, c[p], E) == Z
                results["c_e_swap"] &= op(c[p], E) == op(c[q], E)
                results["e_c_swap"] &= op(E, c[p]) == op(E, c[q])
                for pp in range(1, size + 1):
                    if pp not in (p, q):
                        results["e_c_commute"] &= op(E, c[pp]) == op(c[pp], E)
        for name, ok in results.items():
            record(name, ok)
    return checks
