from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcsp_sos.circuits import (ONE, ZERO, CircuitBuilder, CircuitIR, Const, Gate, GateRef,
                               HeuristicCircuit, Var, alpha_bits, alpha_index, all_alphas,
                               circuit_to_structure_assignment, clamp_to_slice, compile_function,
                               dual_rail_xor_circuit, eval_circuit, eval_outputs,
                               is_slice_function, layout_for_budget, monotonize_slice,
                               partial_heuristic, slice_rails, structure_to_circuit,
                               threshold_circuit, to_slice, trivial_heuristic, truth_table,
                               tt_from_hex, tt_to_hex, weight)
from mcsp_sos.errors import BadLevel, BudgetExceeded, InputTooLarge, NotSliceFunction


def tables(n):
    return st.lists(st.integers(0, 1), min_size=2 ** n, max_size=2 ** n).map(tuple)


any_table = st.integers(0, 4).flatmap(tables)


def slice_of(tt, n, level):
    return tuple(v if weight(i) == level else int(weight(i) > level) for i, v in enumerate(tt))


# ---------------------------------------------------------------- basics

def test_alpha_indexing_is_msb_first():
    assert alpha_index((1, 0)) == 2
    assert alpha_bits(2, 2) == (1, 0)
    assert all_alphas(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_hex_round_trip():
    assert tt_from_hex("6", 2) == (0, 1, 1, 0)
    assert tt_to_hex((0, 1, 1, 0)) == "6"
    assert tt_from_hex("96", 3) == (1, 0, 0, 1, 0, 1, 1, 0)
    with pytest.raises(ValueError):
        tt_from_hex("ff", 2)


def test_gate_arity_checked():
    with pytest.raises(ValueError):
        Gate("NEG", Var(1), Var(2))
    with pytest.raises(ValueError):
        Gate("OR", Var(1))
    with pytest.raises(ValueError):
        CircuitIR(1, (Gate("OR", GateRef(1), ZERO),))
    with pytest.raises(ValueError):
        CircuitIR(1, (Gate("OR", Var(2), ZERO),))


def test_eval_small_circuit():
    # x1 XOR x2 by hand
    C = CircuitIR(2, (Gate("OR", Var(1), Var(2)), Gate("AND", Var(1), Var(2)),
                      Gate("NEG", GateRef(2)), Gate("AND", GateRef(1), GateRef(3))))
    assert truth_table(C) == (0, 1, 1, 0)
    assert [eval_circuit(C, a) for a in all_alphas(2)] == [0, 1, 1, 0]


def test_json_round_trip():
    C = compile_function((0, 1, 1, 0, 1, 0, 0, 1))
    assert CircuitIR.from_json(C.to_json()) == C
    H = partial_heuristic((0, 1, 1, 0), [0, 3])
    assert HeuristicCircuit.from_json(H.to_json()) == H


# ---------------------------------------------------------------- compilation

@given(any_table)
def test_compile_function_is_exact_and_bounded(tt):
    C = compile_function(tt)
    assert truth_table(C) == tt
    n = len(tt).bit_length() - 1
    assert C.size <= 2 * 2 ** n


def test_compile_refuses_large_inputs():
    with pytest.raises(InputTooLarge):
        compile_function((0,) * 2 ** 13)


def test_builder_hash_conses():
    b = CircuitBuilder(2)
    w1 = b.and_(Var(1), Var(2))
    w2 = b.and_(Var(2), Var(1))
    assert w1 == w2 and len(b.gates) == 1
    assert b.or_(w1, ONE) == ONE and b.and_(w1, ZERO) == ZERO


def test_padding_keeps_output_last():
    b = CircuitBuilder(2)
    C = b.build(b.xor(Var(1), Var(2)), pad_to=7)
    assert C.size == 7 and truth_table(C) == (0, 1, 1, 0)
    with pytest.raises(BudgetExceeded):
        b.build(b.xor(Var(1), Var(2)), pad_to=2)


def test_layout_for_budget():
    C = compile_function((0, 0, 0, 1))
    L = layout_for_budget(C, 4)
    assert L.size == 4 and truth_table(L) == truth_table(C)
    assert L.gates[-1] == C.gates[-1]
    with pytest.raises(BudgetExceeded):
        layout_for_budget(L, 3)


@given(tables(2), st.integers(0, 3))
def test_structure_assignment_round_trip(tt, extra):
    C = compile_function(tt)
    s = C.size + extra
    vals = circuit_to_structure_assignment(C, s)
    D = structure_to_circuit(vals, 2, s)
    assert D == layout_for_budget(C, s)
    assert truth_table(D) == tt


# ---------------------------------------------------------------- slices

def test_threshold():
    for n in range(4):
        for level in range(n + 1):
            C = threshold_circuit(n, level)
            assert C.neg_count() == 0
            for idx in range(2 ** n):
                assert eval_circuit(C, alpha_bits(idx, n)) == int(weight(idx) >= level)
    with pytest.raises(BadLevel):
        threshold_circuit(2, 3)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(tables(n), st.integers(0, n))))
def test_clamp_and_to_slice(args):
    tt, level = args
    n = len(tt).bit_length() - 1
    want = slice_of(tt, n, level)
    C = compile_function(tt)
    assert truth_table(clamp_to_slice(C, level)) == want
    M = to_slice(C, level)
    assert M.neg_count() == 0
    assert truth_table(M) == want


def test_slice_rails_are_exact_on_slice():
    tt = (0, 1, 1, 0, 1, 0, 0, 1)
    C = compile_function(tt)
    b = CircuitBuilder(3)
    (p, q), = slice_rails(b, C, 2)
    R = b.build_multi([p, q])
    assert R.neg_count() == 0
    for idx in range(8):
        if weight(idx) == 2:
            assert eval_outputs(R, alpha_bits(idx, 3)) == (tt[idx], 1 - tt[idx])


def test_monotonize_slice():
    tt = slice_of((0, 1, 1, 0, 1, 0, 0, 1), 3, 1)
    assert is_slice_function(tt, 3, 1) is None
    M = monotonize_slice(compile_function(tt), 1)
    assert M.neg_count() == 0 and truth_table(M) == tt
    with pytest.raises(NotSliceFunction) as e:
        monotonize_slice(compile_function((0, 1, 1, 0)), 1)
    assert e.value.point == (1, 1)


def test_dual_rail_xor():
    m = 3
    C = dual_rail_xor_circuit(m)
    assert C.neg_count() == 0
    for bits in product((0, 1), repeat=m):
        alpha = tuple(x for y in bits for x in (y, 1 - y))
        assert eval_circuit(C, alpha) == sum(bits) % 2


# ---------------------------------------------------------------- heuristics

def test_heuristics():
    H = trivial_heuristic(2)
    assert all(H.answer(a) is None for a in all_alphas(2))
    tt = (0, 1, 1, 1)
    H = partial_heuristic(tt, [1, 2])
    assert [H.answer(a) for a in all_alphas(2)] == [None, 1, 1, None]
    with pytest.raises(ValueError):
        HeuristicCircuit(compile_function(tt), 1)
