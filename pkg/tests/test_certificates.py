from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcsp_sos.certificates import (PseudoExpectation, build_xor_pseudoexpectation,
                                   check_pseudoexpectation, duality_gap, from_distribution,
                                   fuzz_candidates, hand_xor_refutation, ldl_psd, xor_dependency)
from mcsp_sos.errors import DegreeTooHigh, NotExpander, TooLarge
from mcsp_sos.formulas import gen_xor_system, xor_pool
from mcsp_sos.graphs import BipartiteGraph, random_graph
from mcsp_sos.oracles import xor_eval, xor_sat
from mcsp_sos.proofs import proof_degree, verify_proof

# odd cycle: x1+x2 = 0, x2+x3 = 0, x1+x3 = 1
CYCLE = BipartiteGraph(2, 3, 2, ((1, 2), (2, 3), (1, 3), (1, 2)))
CYCLE_B = (0, 0, 1, 0)


def det(M):
    A = [[Fraction(x) for x in r] for r in M]
    n, d = len(A), Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if A[r][i] != 0), None)
        if p is None:
            return Fraction(0)
        if p != i:
            A[i], A[p] = A[p], A[i]
            d = -d
        d *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            for c in range(i, n):
                A[r][c] -= f * A[i][c]
    return d


def psd_by_minors(M):
    n = len(M)
    for k in range(1, n + 1):
        for S in combinations(range(n), k):
            if det([[M[i][j] for j in S] for i in S]) < 0:
                return False
    return True


small = st.integers(-3, 3)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                    min_size=1, max_size=3)))
def test_ldl_matches_principal_minors(rows):
    # Gram-type and perturbed symmetric matrices
    n = len(rows[0])
    M = [[sum(r[i] * r[j] for r in rows) for j in range(n)] for i in range(n)]
    assert ldl_psd(M)[0]
    M[0][0] -= 1
    assert ldl_psd(M)[0] == psd_by_minors(M)


def test_ldl_zero_pivot():
    assert not ldl_psd([[0, 1], [1, 0]])[0]
    assert ldl_psd([[0, 0], [0, 0]])[0]


def test_true_distribution_is_valid():
    G = random_graph(2, 3, 2, seed=0)
    beta = (1, 0, 1)
    b = xor_eval(G, beta)
    Phi = gen_xor_system(G, b)
    pool = Phi.pool
    sols = [dict(zip(pool.base_ids(), x)) for x in product((0, 1), repeat=3)
            if xor_eval(G, x) == b]
    E = from_distribution(sols, pool, 2)
    assert check_pseudoexpectation(E, Phi)


def test_uniform_toy_values():
    pool = xor_pool(2)
    E = build_xor_pseudoexpectation(gen_xor_system(CYCLE, CYCLE_B, constraints=[]), CYCLE,
                                    CYCLE_B, 2, require_expansion=False)
    assert E[(1,)] == Fraction(1, 2) and E[(1, 2)] == Fraction(1, 4)


def test_single_constraint():
    Phi = gen_xor_system(CYCLE, CYCLE_B, constraints=[0])
    E = build_xor_pseudoexpectation(Phi, CYCLE, CYCLE_B, 2, r=4, c=1.5)
    assert E[(1, 2)] == Fraction(1, 2)
    assert check_pseudoexpectation(E, Phi)


def test_invalid_candidates():
    pool = xor_pool(1)
    P = gen_xor_system(BipartiteGraph(1, 1, 1, ((1,), (1,))), (0, 0))
    E1 = PseudoExpectation(1, {(): 1, (1,): 2}, pool)
    assert check_pseudoexpectation(E1, P.without(["xor"])).valid
    E2 = PseudoExpectation(2, {(): 1, (1,): 2}, pool)
    v = check_pseudoexpectation(E2, P.without(["xor"]))
    assert not v and v.check == "psd"
    E3 = PseudoExpectation(1, {(): 2, (1,): 0}, pool)
    assert check_pseudoexpectation(E3, P).check == "normalization"
    E4 = PseudoExpectation(1, {(): 1, (1,): 1}, pool)
    assert check_pseudoexpectation(E4, P).check == "axiom"


def test_odd_cycle_refutation_and_certificate():
    Phi = gen_xor_system(CYCLE, CYCLE_B, constraints=[0, 1, 2])
    assert not xor_sat(CYCLE, CYCLE_B, [0, 1, 2])
    T = xor_dependency(CYCLE, CYCLE_B, [0, 1, 2])
    assert sorted(T) == [0, 1, 2]
    pi = hand_xor_refutation(Phi, CYCLE, CYCLE_B)
    assert verify_proof(Phi, pi, require_refutation=True)
    assert proof_degree(pi, Phi) == 6
    E = build_xor_pseudoexpectation(Phi, CYCLE, CYCLE_B, 1, r=2, c=1.5)
    assert check_pseudoexpectation(E, Phi)
    with pytest.raises(NotExpander):
        build_xor_pseudoexpectation(Phi, CYCLE, CYCLE_B, 2, c=1.5)
    with pytest.raises(DegreeTooHigh):
        build_xor_pseudoexpectation(Phi, CYCLE, CYCLE_B, 2, r=2)


def test_dependency_none_when_satisfiable():
    assert xor_dependency(CYCLE, (0, 0, 0, 0)) is None


def test_hand_refutation_guard():
    G = random_graph(4, 6, 3, seed=0)
    b = [1] * 16
    Phi = gen_xor_system(G, b)
    with pytest.raises(TooLarge):
        hand_xor_refutation(Phi, G, b, T=list(range(9)))


def test_fuzz_rejected_and_gap():
    Phi = gen_xor_system(CYCLE, CYCLE_B, constraints=[0])
    E = build_xor_pseudoexpectation(Phi, CYCLE, CYCLE_B, 2, r=4, c=1.5)
    for pi in fuzz_candidates(Phi, 2, 300, seed=1):
        assert not verify_proof(Phi, pi)
        assert duality_gap(E, Phi, pi) >= 1
