from itertools import product

import pytest

from mcsp_sos.circuits import partial_heuristic, trivial_heuristic, truth_table, weight
from mcsp_sos.errors import (BadParameters, BudgetTooSmall, CoverageViolation, NotSliceFunction,
                             SupportTooLarge)
from mcsp_sos.graphs import BipartiteGraph, random_graph
from mcsp_sos.oracles import enumerate_slice_functions, xor_eval, xor_sat
from mcsp_sos.polynomials import decompose_boolean_zero, expand_witness
from mcsp_sos.reduction import (Fixed, Parity, build_monotone_restriction, build_restriction,
                                check_k_determined, check_m_independent, general_scaffold,
                                hand_census, lift_to_hat, parity_polynomial, plan_formula_sat,
                                restricted_xor_system, scaffold_size, scaffold_with_beta)


def expected_table(plan, beta):
    par = xor_eval(plan.graph, beta)
    return tuple(g.bit if isinstance(g, Fixed) else par[al] for al, g in enumerate(plan.gout_spec))


G2 = BipartiteGraph(2, 3, 2, ((1, 2), (2, 3), (1, 3), (1, 2)))
TT2 = (0, 1, 1, 0)


@pytest.fixture(scope="module")
def plan2():
    return build_restriction(TT2, trivial_heuristic(2), G2)


def test_scaffold_realizes_every_beta(plan2):
    assert plan2.scaffold.size == plan2.s
    for beta in product((0, 1), repeat=plan2.m):
        assert truth_table(scaffold_with_beta(plan2, beta)) == expected_table(plan2, beta)


def test_plan_basics(plan2):
    assert plan2.is_natural()
    assert plan2.remaining_vars == hand_census(plan2)
    assert all(isinstance(g, Parity) for g in plan2.gout_spec)
    assert plan2.to_json()["remaining_vars"] == plan2.remaining_vars


def test_m_independent(plan2):
    v = check_m_independent(plan2)
    assert v.ok, v.reason
    for beta, tab in v.mapping.items():
        assert tab == expected_table(plan2, beta)


def test_k_determined_and_output_is_parity(plan2):
    gs = check_k_determined(plan2)
    for al, g in enumerate(plan2.gout_spec):
        assert gs[("outwire", plan2.s, al)] == parity_polynomial(g.nbrs, plan2.Y)
    with pytest.raises(SupportTooLarge):
        check_k_determined(plan2, k=1, check_completions=False)


def test_lift_leaves_boolean_zeros(plan2):
    res = lift_to_hat(plan2)
    assert {a.family for a in res.P.axioms} <= {"ax-correct", "bool"}
    for tag, q, wit in res.Q[:200]:
        assert expand_witness(wit) == q


@pytest.mark.parametrize("b", list(product((0, 1), repeat=4)))
def test_formula_sat_matches_xor_sat(b):
    plan = build_restriction(b, trivial_heuristic(2), G2)
    sat, beta = plan_formula_sat(plan)
    assert sat == xor_sat(G2, b).sat
    if sat:
        assert xor_eval(G2, beta) == b
    assert len(restricted_xor_system(plan).axioms) > 4


def test_partial_heuristic_fixes_outputs():
    tt = (0, 1, 1, 1)
    H = partial_heuristic(tt, [0, 3])
    H = type(H)(H.circuit, 2)
    plan = build_restriction(tt, H, G2)
    assert plan.gout_spec[0] == Fixed(0) and plan.gout_spec[3] == Fixed(1)
    assert check_m_independent(plan).ok
    assert plan.remaining_vars == hand_census(plan)


def test_loose_plan_is_not_independent():
    plan = build_restriction(TT2, trivial_heuristic(2), G2, loose=True)
    assert not check_m_independent(plan).ok


def test_without_elimination_still_independent():
    G = BipartiteGraph(1, 1, 1, ((1,), (1,)))
    plan = build_restriction((0, 1), trivial_heuristic(1), G, eliminate=False)
    assert check_m_independent(plan).ok
    assert plan.remaining_vars > hand_census(plan)


def test_errors():
    H = trivial_heuristic(2)
    with pytest.raises(BudgetTooSmall) as e:
        build_restriction(TT2, H, G2, s=5)
    assert e.value.required == scaffold_size(H, G2)
    bad = partial_heuristic((1, 1, 1, 1), [0])
    with pytest.raises(CoverageViolation):
        build_restriction(TT2, type(bad)(bad.circuit, 4), G2)
    with pytest.raises(BadParameters):
        build_restriction((0, 1), trivial_heuristic(1), G2)


def test_monotone_plan():
    G = BipartiteGraph(2, 2, 1, ((1,), (2,), (1,), (2,)))
    for tt in enumerate_slice_functions(2, 1):
        plan = build_monotone_restriction(tt, trivial_heuristic(2), G, None, 1)
        assert plan.scaffold.neg_count() == 0
        for beta in product((0, 1), repeat=2):
            got = truth_table(scaffold_with_beta(plan, beta))
            assert got == expected_table(plan, beta)
            assert all(got[al] == int(weight(al) > 1) for al in range(4) if weight(al) != 1)
    assert check_m_independent(plan).ok
    with pytest.raises(NotSliceFunction):
        build_monotone_restriction((0, 1, 1, 0), trivial_heuristic(2), G, None, 1)
