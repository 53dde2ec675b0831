import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcsp_sos.circuits import compile_function, truth_table
from mcsp_sos.errors import BadParameters, DimensionMismatch
from mcsp_sos.formulas import (VarCatalog, cnf_to_polysystem, dimacs_text, emit_json,
                               expected_family_counts, gen_circuit_cnf, gen_circuit_formula,
                               gen_monotone_formula, gen_xor_system, honest_assignment,
                               restrict_system, system_from_json, system_to_json)
from mcsp_sos.graphs import random_graph
from mcsp_sos.oracles import xor_eval
from mcsp_sos.polynomials import evaluate


def full_point(P, base_vals):
    """Extend base values to bars."""
    pool = P.pool
    pt = dict(base_vals)
    for v, b in base_vals.items():
        pt[pool.bar(v)] = 1 - b
    return pt


def violated(P, pt):
    return [a.tag for a in P.axioms if evaluate(a.poly, pt) != 0]


tables2 = st.lists(st.integers(0, 1), min_size=4, max_size=4).map(tuple)


def test_desk_counts():
    cat = VarCatalog(2, 3)
    assert cat.structure_count() == 51
    assert cat.evaluation_count() == 36


@pytest.mark.parametrize("n,s", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2)])
def test_family_counts_match_closed_forms(n, s):
    tt = tuple(random.Random(n * 10 + s).randint(0, 1) for _ in range(2 ** n))
    P = gen_circuit_formula(tt, s)
    exp = {k: v for k, v in expected_family_counts(n, s).items() if v}
    assert P.family_counts() == exp
    assert P.max_degree() <= 3


def test_bad_parameters():
    with pytest.raises(BadParameters):
        gen_circuit_formula((0, 1, 1), 2)
    with pytest.raises(BadParameters):
        gen_circuit_formula((0, 1), 0)


@given(tables2)
def test_honest_assignment_satisfies_formula(tt):
    C = compile_function(tt)
    P = gen_circuit_formula(tt, C.size + 1)
    pt = full_point(P, honest_assignment(C, P.pool))
    assert violated(P, pt) == []


def test_wrong_function_is_rejected():
    C = compile_function((0, 1, 1, 0))
    P = gen_circuit_formula((0, 1, 1, 1), C.size)
    pt = full_point(P, honest_assignment(C, P.pool))
    bad = violated(P, pt)
    assert bad and all(t.startswith("ax-correct") for t in bad)


def test_flipped_wire_is_rejected():
    C = compile_function((0, 1, 1, 0))
    P = gen_circuit_formula((0, 1, 1, 0), C.size)
    base = honest_assignment(C, P.pool)
    v = P.pool.v("outwire", 1, 0)
    base[v] ^= 1
    assert violated(P, full_point(P, base))


def test_no_gate_in_first_gate():
    C = compile_function((0, 1, 1, 0))
    P = gen_circuit_formula((0, 1, 1, 0), C.size)
    base = honest_assignment(C, P.pool)
    cat = P.pool
    for fam in ("isfromconst", "isfromgate"):
        base[cat.v(fam, 1, 1)] ^= 1
    assert any(t.startswith("no-gate-in") for t in violated(P, full_point(P, base)))


@given(tables2)
@settings(max_examples=20)
def test_cnf_satisfied_by_honest_extension(tt):
    C = compile_function(tt)
    F = gen_circuit_cnf(tt, C.size)
    assert F.max_width() <= 4
    vals = honest_assignment(C, F.catalog)
    assert F.satisfied_by(vals)
    Q = cnf_to_polysystem(F)
    assert violated(Q, full_point(Q, vals)) == []


def test_cnf_golden_header():
    F = gen_circuit_cnf((0, 0), 1)
    text = dimacs_text(F)
    assert text.splitlines()[0] == "p cnf 21 50"
    assert all(line.endswith(" 0") for line in text.splitlines()[1:])


def test_json_round_trip():
    P = gen_circuit_formula((0, 1, 1, 0), 2)
    buf = io.StringIO()
    emit_json(P, buf)
    Q = system_from_json(buf.getvalue())
    assert Q.index() == P.index()
    assert system_to_json(Q) == system_to_json(P)


def test_monotone_restriction_drops_neg():
    Q, tau = gen_monotone_formula((0, 0, 0, 1), 2)
    assert set(tau.values()) == {0}
    assert not any(v in Q.variables() for v in tau)


def test_restrict_system_substitutes():
    P = gen_circuit_formula((0, 1), 1)
    cat = P.pool
    Q = restrict_system(P, {cat.v("isneg", 1): 1, cat.v("isor", 1): 0, cat.v("isand", 1): 0})
    assert len(Q) < len(P)
    assert cat.v("isneg", 1) not in Q.variables()


def test_xor_system():
    G = random_graph(2, 4, 2, seed=3)
    beta = (1, 0, 1, 1)
    b = xor_eval(G, beta)
    P = gen_xor_system(G, b)
    pool = P.pool
    pt = {pool.id(("x", i)): beta[i - 1] for i in range(1, 5)}
    assert violated(P, full_point(P, pt)) == []
    flipped = list(b)
    flipped[0] ^= 1
    P2 = gen_xor_system(G, flipped)
    assert violated(P2, full_point(P2, pt)) == ["xor(0)"]
    with pytest.raises(DimensionMismatch):
        gen_xor_system(G, [0])
