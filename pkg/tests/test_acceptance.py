"""End-to-end acceptance checks, each with its own time budget.

Run directly (``python3 tests/test_acceptance.py``) or under pytest; either
way one PASS/FAIL line is printed per criterion.
"""
from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from superbrauer.diagram_core import B, T, enumerate_k, enumerate_walled, generator, new_k_diagram, new_walled
from superbrauer.duality_lab import (
    homomorphism_check,
    supercommutation_check,
    verify_centralizer_relations,
    verify_flip_square,
    verify_mixed_duality,
    verify_sergeev_duality,
)
from superbrauer.exact_linalg import SparseExactMatrix
from superbrauer.presentation import (
    check_presentation_relations,
    check_sergeev_relations,
    decompose_to_basis_form,
    dim_formulas,
    eval_basis_form,
)
from superbrauer.superalgebra import (
    AlgebraElement,
    elem_mul,
    normal_mul,
    phi_k,
    phi_k_inv,
    product,
    sergeev_mul,
    walled_mul,
)
from superbrauer.tensor_rep import (
    IndexLetter,
    all_indices,
    permutation_word,
    phi_matrix,
    psi_matrix,
    weight_k,
    weight_walled,
    word_matrix,
)

from test_tensor_rep import marked_arcs_diagram, marked_arcs_weight_formula

RESULTS: list[str] = []


def dimension_counts():
    out = []
    for r, s in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        count = len(enumerate_walled(r, s))
        fac, tot = dim_formulas(r, s)
        out.append((f"({r},{s}) {count}", count == fac == tot == {2: 8, 3: 48, 4: 384}[r + s]))
    return out


def sergeev_homomorphism():
    out = []
    for k in (2, 3):
        bad = 0
        basis = enumerate_k(k)
        for a in basis:
            for b in basis:
                prod, _ = sergeev_mul(a, b)
                ((d, c),) = prod.sorted_terms()
                w = normal_mul(phi_k(a), phi_k(b))
                bad += phi_k_inv(w) != d or w.sign != c
        out.append((f"k={k} {len(basis) ** 2} pairs, {bad} mismatches", bad == 0))
    return out


def worked_sign_examples():
    d1 = new_k_diagram(5, (2, 1, 4, 3, 5), {1, 2, 3, 4})
    d2 = new_k_diagram(5, (2, 3, 1, 5, 4), {3, 4})
    _, rep = sergeev_mul(d1, d2)
    first = (rep.rho, rep.ell) == (1, 4) and rep.sign == -1
    w1 = new_walled(3, 3, [(T(1), B(1)), (T(3), B(3)), (T(5), B(4)), (T(6), B(6)), (T(2), T(4)), (B(2), B(5))],
                    [(T(1), B(1)), (T(6), B(6)), (T(2), T(4)), (B(2), B(5))])
    w2 = new_walled(3, 3, [(T(3), B(2)), (T(5), B(5)), (B(3), B(4)), (B(1), B(6)), (T(1), T(6)), (T(2), T(4))],
                    [(B(3), B(4)), (B(1), B(6)), (T(1), T(6))])
    expected = new_walled(3, 3, [(T(1), T(6)), (T(2), T(4)), (T(3), B(3)), (T(5), B(4)), (B(1), B(6)),
                                 (B(2), B(5))], [(T(1), T(6)), (B(1), B(6)), (B(2), B(5))])
    prod, rep2 = walled_mul(w1, w2)
    counts = (rep2.c, rep2.ell1, rep2.rho1, rep2.p1, rep2.ell2, rep2.rho2, rep2.p2)
    second = counts == (2, 2, 1, 1, 3, 1, 1) and prod == AlgebraElement.of(expected, -1)
    return [(f"k-diagram pair (rho, ell) = {(rep.rho, rep.ell)}", first),
            (f"walled pair counts {counts}, sign {rep2.sign}", second)]


def diagram_matrix_equals_word_matrix():
    out = []
    for k in (1, 2, 3):
        bad = 0
        for d in enumerate_k(k):
            w = phi_k(d)
            letters = permutation_word(w.sigma) + [f"c{i}" for i in w.clifford]
            bad += word_matrix(letters, 2, k) != phi_matrix(d, 2)
        out.append((f"k={k} {bad} mismatches", bad == 0))
    return out


def weight_examples():
    n = 2

    def lab(text):
        return tuple(IndexLetter(int(x[0]), x.endswith("'")).code(n) for x in text.split())

    d = new_k_diagram(5, (3, 1, 5, 2, 4), {1, 4, 5})
    wt = weight_k(d, lab("1 2 1' 1' 2'"), lab("1 1 2' 2' 1"), n)
    arcs = marked_arcs_diagram()
    bad = sum(weight_walled(arcs, i, j, n) != marked_arcs_weight_formula(i, j)
              for i in all_indices(n, 4) for j in all_indices(n, 4))
    return [(f"k-diagram labeling weight {wt}", wt == -1), (f"walled formula over 4^8 labelings, {bad} mismatches",
                                                           bad == 0)]


def supercommutation():
    out = []
    for r, s in [(1, 1), (2, 1)]:
        c = supercommutation_check(enumerate_walled(r, s), 2, (r, s), psi_matrix)
        out.append((f"({r},{s}) {c.detail}", c.passed))
    return out


def flip_square():
    out = []
    for r, s in [(1, 1), (2, 1)]:
        c = verify_flip_square(2, r, s)
        out.append((f"({r},{s}) {c.detail}", c.passed))
    return out


def mixed_homomorphism():
    out = []
    for (r, s), trials in [((1, 1), None), ((2, 1), 500), ((2, 2), 500)]:
        c, count = homomorphism_check(enumerate_walled(r, s), 2, psi_matrix, seed=42, trials=trials)
        out.append((f"({r},{s}) {count} pairs", c.passed and count == (64 if trials is None else trials)))
    return out


def associativity():
    basis = enumerate_walled(2, 2)
    rng = random.Random(42)
    bad = 0
    for _ in range(1000):
        a, b, c = (AlgebraElement.of(rng.choice(basis)) for _ in range(3))
        bad += elem_mul(elem_mul(a, b), c) != elem_mul(a, elem_mul(b, c))
    return [(f"1000 triples at (2,2), {bad} failures", bad == 0)]


def duality():
    out = []
    rep = verify_sergeev_duality(2, 2)
    out.append((f"Sergeev (n,k)=(2,2) image {rep.image_rank}",
                rep.passed and rep.injective and rep.surjective and rep.algebra_dim == 8))
    rep = verify_mixed_duality(2, 1, 1, mode="exact")
    out.append((f"(2,1,1) image {rep.image_rank}, exact",
                rep.passed and rep.injective and rep.surjective and rep.algebra_dim == 8 and not rep.probabilistic))
    rep = verify_mixed_duality(3, 2, 1)
    agreed = any(c.name == "modular_primes_agree" and c.passed for c in rep.checks)
    out.append((f"(3,2,1) image {rep.image_rank}, modular, primes agree {agreed}",
                rep.passed and rep.injective and rep.surjective and rep.algebra_dim == 48
                and rep.probabilistic and agreed))
    rep = verify_mixed_duality(1, 1, 1)
    out.append((f"(1,1,1) surjective {rep.surjective} (image {rep.image_rank} = centralizer {rep.centralizer_total})",
                rep.passed and rep.surjective and rep.image_rank == rep.centralizer_total))
    # Expected to be non-injective; the computed image has full rank 8.
    out.append((f"(1,1,1) not injective: image {rep.image_rank} of {rep.algebra_dim}", not rep.injective))
    return out


def relations():
    out = []
    for r, s in [(2, 2), (3, 2)]:
        rep = check_presentation_relations(r, s)
        out.append((f"({r},{s}) {len(rep.results)} instances, {len(rep.failures())} failures", rep.passed))
    out.append(("Sergeev relations k=3", check_sergeev_relations(3).passed))
    for r, s in [(1, 1), (2, 1), (2, 2)]:
        checks = verify_centralizer_relations(2, r, s)
        out.append((f"matrix relations n=2 ({r},{s})", all(c.passed for c in checks)))
    return out


def basis_form_round_trip():
    basis = enumerate_walled(2, 2)
    forms, bad = set(), 0
    for d in basis:
        x = decompose_to_basis_form(d)
        forms.add(x)
        bad += not x.is_valid() or eval_basis_form(x) != AlgebraElement.of(d)
    return [(f"384 diagrams, {bad} failures, {len(forms)} distinct forms", bad == 0 and len(forms) == 384)]


def zero_products():
    out = []
    for r, s in [(1, 1), (2, 2)]:
        amb = ("walled", r, s)
        e, c = generator(r, s, "e"), generator(r, s, f"c{r}")
        prod, rep = walled_mul(e, e)
        ece = product(amb, [e, c, e])
        _, rep2 = walled_mul(single_diagram(product(amb, [e, c])), e)
        E, C = psi_matrix(e, 2), psi_matrix(c, 2)
        N = E.n_rows
        zero = SparseExactMatrix.zero(N, N)
        ok = prod.is_zero() and rep.loop_detected and ece.is_zero() and rep2.loop_detected
        ok = ok and E @ E == zero and E @ C @ E == zero
        out.append((f"({r},{s}) diagrams and n=2 matrices", ok))
    return out


def single_diagram(x: AlgebraElement):
    ((d, _),) = x.sorted_terms()
    return d


CRITERIA = [
    ("dimension_counts", dimension_counts, 1),
    ("sergeev_homomorphism", sergeev_homomorphism, 5),
    ("worked_sign_examples", worked_sign_examples, 5),
    ("diagram_matrix_equals_word_matrix", diagram_matrix_equals_word_matrix, 10),
    ("weight_examples", weight_examples, 30),
    ("supercommutation", supercommutation, 30),
    ("flip_square", flip_square, 30),
    ("mixed_homomorphism", mixed_homomorphism, 60),
    ("associativity", associativity, 60),
    ("duality", duality, 300),
    ("relations", relations, 60),
    ("basis_form_round_trip", basis_form_round_trip, 30),
    ("zero_products", zero_products, 5),
]


def evaluate(name, fn, limit):
    start = time.perf_counter()
    parts = fn()
    elapsed = time.perf_counter() - start
    ok = all(p for _, p in parts) and elapsed < limit
    failed = [d for d, p in parts if not p]
    detail = "; ".join(failed) if failed else "; ".join(d for d, _ in parts)
    line = f"{'PASS' if ok else 'FAIL'} {name} ({elapsed:.1f}s, limit {limit}s): {detail}"
    return ok, line


@pytest.mark.parametrize("name, fn, limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, fn, limit):
    ok, line = evaluate(name, fn, limit)
    RESULTS.append(line)
    print(line)
    assert ok, line


def main() -> int:
    failures = 0
    for name, fn, limit in CRITERIA:
        ok, line = evaluate(name, fn, limit)
        print(line, flush=True)
        failures += not ok
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
