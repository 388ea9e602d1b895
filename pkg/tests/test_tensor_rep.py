import itertools

import pytest
from hypothesis import given, strategies as st

from superbrauer.diagram_core import (
    B,
    BOTTOM,
    TOP,
    T,
    WalledDiagram,
    enumerate_k,
    enumerate_walled,
    generator,
    k_identity,
    new_k_diagram,
    new_walled,
    walled_identity,
)
from superbrauer.exact_linalg import SparseExactMatrix, rank
from superbrauer.superalgebra import AlgebraElement, phi_k
from superbrauer.tensor_rep import (
    IndexLetter,
    QnGenerator,
    RepresentationError,
    all_indices,
    basis_index,
    p_matrix,
    permutation_word,
    phi_matrix,
    psi_matrix,
    qn_element_matrix,
    qn_gen_matrix,
    qn_generators,
    sergeev_gen_action,
    unrank,
    weight_k,
    weight_walled,
    word_matrix,
)

from conftest import k_diagrams, walled_basis


def L(text, n=2):
    """Letters like "1 2 1' 2'" (a prime marks a bar)."""
    return tuple(IndexLetter(int(x[0]), x.endswith("'")).code(n) for x in text.split())


def test_k_diagram_weight_example():
    d = new_k_diagram(5, (3, 1, 5, 2, 4), {1, 4, 5})
    assert weight_k(d, L("1 2 1' 1' 2'"), L("1 1 2' 2' 1"), 2) == -1


def test_identity_weights():
    d = k_identity(2)
    for i in all_indices(2, 2):
        for j in all_indices(2, 2):
            assert weight_k(d, i, j, 2) == (1 if i == j else 0)
    w = walled_identity(1, 1)
    assert weight_walled(w, L("1 2'"), L("1 2'"), 2) == 1


@given(k_diagrams(3), st.data())
def test_unique_consistent_labeling(d, data):
    i = data.draw(st.tuples(*[st.integers(0, 3)] * 3))
    nonzero = [j for j in all_indices(2, 3) if weight_k(d, i, j, 2)]
    assert len(nonzero) == 1


def marked_arcs_diagram():
    return new_walled(2, 2, [(B(1), B(3)), (T(2), B(2)), (T(3), B(4)), (T(1), T(4))],
                      [(B(1), B(3)), (T(2), B(2)), (T(3), B(4))])


def marked_arcs_weight_formula(i, j, n=2):
    def p(x):
        return int(x >= n)

    def bar(x):
        return (x + n) % (2 * n)

    i1, i2, i3, i4 = i
    j1, j2, j3, j4 = j
    if not (bar(i1) == i3 and bar(i2) == j2 and bar(i4) == j3 and j1 == j4):
        return 0
    exp = p(i3)
    exp += p(i2) * p(i3) + p(i2) * p(j4) + p(i4) * p(j4)
    exp += (p(i1) + 1) + (p(j1) + p(j2)) + (p(j1) + p(j2))
    return -1 if exp % 2 else 1


def test_walled_weight_closed_form():
    d = marked_arcs_diagram()
    for i in all_indices(2, 4):
        for j in all_indices(2, 4):
            assert weight_walled(d, i, j, 2) == marked_arcs_weight_formula(i, j)


def test_cup_cap_at_n_one():
    e = generator(1, 1, "e")
    brute = {}
    for i in all_indices(1, 2):
        for j in all_indices(1, 2):
            w = weight_walled(e, i, j, 1)
            if w:
                brute[(basis_index(j, 1), basis_index(i, 1))] = w
    m = psi_matrix(e, 1)
    assert m == SparseExactMatrix(4, 4, brute)
    assert rank(m) == 1
    # a closed loop carries the superdimension of C^{1|1}, which is zero
    assert (m @ m).is_zero()


@pytest.mark.parametrize("r, s", [(1, 1), (2, 1)])
def test_matrix_entries_and_columns(r, s):
    for d in enumerate_walled(r, s):
        m = psi_matrix(d, 2)
        assert set(m.entries.values()) <= {1, -1}
        cols = {}
        for (row, col) in m.entries:
            cols[col] = cols.get(col, 0) + 1
        if not d.horizontal_edges(TOP):
            assert all(v == 1 for v in cols.values())
        if not d.horizontal_edges(TOP) and not d.horizontal_edges(BOTTOM):
            assert len(cols) == m.n_cols


@pytest.mark.parametrize("k", [1, 2, 3])
def test_k_matrices_one_entry_per_column(k):
    for d in enumerate_k(k):
        m = phi_matrix(d, 2)
        cols = [c for (_, c) in m.entries]
        assert sorted(cols) == list(range(m.n_cols))
        assert set(m.entries.values()) <= {1, -1}


def test_identity_matrices():
    assert phi_matrix(k_identity(2), 2) == SparseExactMatrix.identity(16)
    assert psi_matrix(walled_identity(1, 1), 2) == SparseExactMatrix.identity(16)


def test_p_matrix():
    assert p_matrix(1).to_dense() == [[0, 1], [-1, 0]]
    for n in (1, 2, 3):
        P = p_matrix(n)
        assert P @ P == SparseExactMatrix.identity(2 * n).scale(-1)
        for (row, col) in P.entries:
            assert (row >= n) != (col >= n)


@pytest.mark.parametrize("n", [1, 2])
def test_qn_generators_supercommute_with_p(n):
    P = p_matrix(n)
    for g in qn_generators(n):
        G = qn_element_matrix(g, n)
        sign = -1 if g.parity else 1
        assert G @ P == (P @ G).scale(sign)


def test_qn_on_v_at_n_one():
    g = QnGenerator(1, 1)
    assert qn_element_matrix(g, 1) == SparseExactMatrix.identity(2)


def dual_action_oracle(g, n):
    """(g w)(v) = (-1)^{|g||w|} w(S(g) v) with S(g) = -g and w_k(v_j) = delta."""
    G = qn_element_matrix(g, n).to_dense()
    N = 2 * n
    out = [[0] * N for _ in range(N)]
    for k in range(N):  # source w_k
        pk = int(k >= n)
        for j in range(N):  # coefficient of w_j is (g w_k)(v_j)
            out[j][k] = -((-1) ** (g.parity * pk)) * G[k][j]
    return out


@pytest.mark.parametrize("n", [1, 2])
def test_dual_action_matches_abstract_formula(n):
    for g in qn_generators(n):
        assert qn_gen_matrix(g, n, (0, 1)).to_dense() == dual_action_oracle(g, n)


def test_dual_action_example():
    m = qn_gen_matrix(QnGenerator(1, 1, True), 1, (0, 1))
    assert m.get(1, 0) == -1


@pytest.mark.parametrize("n, shape", [(1, 2), (2, (1, 1)), (1, (2, 1))])
def test_coproduct_is_a_lie_superalgebra_map(n, shape):
    gens = qn_generators(n)
    mats = {g: qn_gen_matrix(g, n, shape) for g in gens}
    small = {g: qn_element_matrix(g, n) for g in gens}
    for a, b in itertools.product(gens, repeat=2):
        sign = -1 if a.parity * b.parity else 1
        bracket = small[a] @ small[b] - (small[b] @ small[a]).scale(sign)
        # expand the bracket in the spanning set, then compare actions
        coeffs = decompose_in_generators(bracket, gens, small, n)
        expected = SparseExactMatrix.zero(*mats[a].shape)
        for g, c in coeffs.items():
            expected = expected + mats[g].scale(c)
        assert mats[a] @ mats[b] - (mats[b] @ mats[a]).scale(sign) == expected


def decompose_in_generators(m, gens, small, n):
    coeffs = {}
    for g in gens:
        # e_{i,j} has entry 1 at (i, j); e_{i,jbar} has entry 1 at (i, j+n)
        col = g.j - 1 + (n if g.barred else 0)
        v = m.get(g.i - 1, col)
        if v:
            coeffs[g] = v
    rebuilt = SparseExactMatrix.zero(2 * n, 2 * n)
    for g, c in coeffs.items():
        rebuilt = rebuilt + small[g].scale(c)
    assert rebuilt == m
    return coeffs


def test_sergeev_generator_examples():
    s1 = sergeev_gen_action("s1", 1, 2)
    bb = basis_index((1, 1), 1)
    assert s1.get(bb, bb) == -1
    assert sergeev_gen_action("c1", 1, 1) == p_matrix(1)
    c2 = sergeev_gen_action("c2", 1, 2)
    assert c2.get(basis_index((1, 1), 1), basis_index((1, 0), 1)) == 1
    with pytest.raises(RepresentationError):
        sergeev_gen_action("s2", 1, 2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_diagram_matrix_is_word_matrix(k):
    for d in enumerate_k(k):
        w = phi_k(d)
        letters = permutation_word(w.sigma) + [f"c{i}" for i in w.clifford]
        assert word_matrix(letters, 2, k) == phi_matrix(d, 2)


@given(st.permutations(range(1, 6)))
def test_permutation_word(sigma):
    cur = list(range(1, 6))
    for x in permutation_word(sigma):
        j = int(x[1:])
        # right multiplication by s_j on bottom_of swaps tops j and j+1
        cur[j - 1], cur[j] = cur[j], cur[j - 1]
    assert tuple(cur) == tuple(sigma)


def forget_marks(d: WalledDiagram) -> WalledDiagram:
    return WalledDiagram(d.r, d.s, d.edges, frozenset())


def mark_sequences(d: WalledDiagram):
    a = sorted(u.index for u, v in d.marked if u.row == BOTTOM and v.row == BOTTOM)
    b = sorted(u.index for u, v in d.marked if u.row == TOP)
    return a, b


@pytest.mark.parametrize("r, s", [(1, 1), (2, 1)])
def test_marks_factor_through_clifford_generators(r, s):
    n = 2
    for d in walled_basis(r, s):
        a, b = mark_sequences(d)
        factors = [generator(r, s, f"c{x}") for x in a] + [forget_marks(d)]
        factors += [generator(r, s, f"c{x}") for x in b]
        out = SparseExactMatrix.identity((2 * n) ** (r + s))
        for f in factors:
            out = psi_matrix(f, n) @ out
        assert out == psi_matrix(d, n)


def test_psi_of_elements_is_linear():
    e = AlgebraElement.of(generator(1, 1, "e"))
    one = AlgebraElement.of(walled_identity(1, 1))
    assert psi_matrix(e.scale(2) + one, 2) == psi_matrix(e, 2).scale(2) + SparseExactMatrix.identity(16)


def test_index_helpers():
    assert unrank(basis_index((3, 0, 2), 2), 2, 3) == (3, 0, 2)
    assert IndexLetter.from_code(3, 2) == IndexLetter(2, True)
    with pytest.raises(RepresentationError):
        IndexLetter(3).code(2)
    with pytest.raises(RepresentationError):
        psi_matrix(walled_identity(4, 3), 2)
