import itertools

import pytest

from mcsp_sos.circuits import compile_function, truth_table
from mcsp_sos.errors import FunctionComputable, InvalidInputProof, WitnessMismatch
from mcsp_sos.formulas import cnf_to_polysystem, gen_circuit_cnf, gen_circuit_formula
from mcsp_sos.oracles import min_circuit_size
from mcsp_sos.polynomials import Polynomial
from mcsp_sos.proofs import NS, ProofObject, proof_degree, verify_proof
from mcsp_sos.refuter import (circuit_monomial_count, cnf_refutation_from_polynomial,
                              derive_monomial_sum, derive_substituted_axioms, derive_wrong_output,
                              enumerate_circuit_monomials, build_upper_bound_refutation,
                              translate_cnf_refutation)

XOR = (0, 1, 1, 0)


def all_tables(n):
    return [tuple((i >> j) & 1 for j in range(2 ** n)) for i in range(2 ** (2 ** n))]


def test_monomial_count_matches_enumeration():
    for s, n in [(1, 1), (1, 2), (2, 1)]:
        ms = list(enumerate_circuit_monomials(s, n))
        assert len(ms) == circuit_monomial_count(s, n)
        assert len({m.mono for m in ms}) == len(ms)


@pytest.mark.parametrize("s,n", [(1, 1), (1, 2), (2, 1)])
def test_monomial_sum(s, n):
    pi = derive_monomial_sum(s, n)     # verifies internally
    assert verify_proof(gen_circuit_formula((0,) * 2 ** n, s), pi)


def test_decoded_circuits_are_sound():
    # every monomial that decodes to a circuit describes it exactly
    for cm in enumerate_circuit_monomials(1, 2):
        if cm.circuit is not None:
            assert cm.circuit.size == 1


def test_wrong_output_derivation():
    cms = [cm for cm in enumerate_circuit_monomials(1, 2) if cm.circuit is not None]
    for cm in cms[:40]:
        tab = truth_table(cm.circuit)
        for al, alpha in enumerate(itertools.product((0, 1), repeat=2)):
            pi = derive_wrong_output(cm, alpha, tab[al])
            assert verify_proof(gen_circuit_formula((0,) * 4, 1), pi)
        with pytest.raises(WitnessMismatch):
            derive_wrong_output(cm, (0, 0), 1 - tab[0], verify=False)


@pytest.mark.parametrize("tt", [t for t in all_tables(2) if min_circuit_size(t) > 1])
def test_refutation_s1(tt):
    r = build_upper_bound_refutation(tt, 1, report=True)
    P = gen_circuit_formula(tt, 1)
    assert verify_proof(P, r.proof, require_refutation=True)
    assert r.degree == proof_degree(r.proof, P) <= 30


def test_computable_function_raises():
    with pytest.raises(FunctionComputable) as e:
        build_upper_bound_refutation((0, 0, 0, 1), 1)
    assert truth_table(e.value.circuit) == (0, 0, 0, 1)


def test_tampered_refutation_rejected():
    P = gen_circuit_formula(XOR, 1)
    pi = build_upper_bound_refutation(XOR, 1)
    tag = sorted(pi.multipliers)[0]
    bad = dict(pi.multipliers)
    bad[tag] = bad[tag] + 1
    assert not verify_proof(P, ProofObject(NS, bad, (), pi.target))


@pytest.mark.parametrize("gate", [False, True])
def test_substituted_axioms(gate):
    n, v = (3, 1) if not gate else (1, 4)
    res = derive_substituted_axioms(v, 1, n, gate=gate)
    top = v - 1 if gate else n
    assert len(res.ax3) == len(res.ax4) == len(res.ax5) == top
    P = gen_circuit_formula((0,) * 2 ** n, v)
    for lst in (res.ax3, res.ax4, res.ax5):
        for pi in lst:
            assert verify_proof(P, pi)
            assert proof_degree(pi, P) <= 6


def test_cnf_translation_round_trip():
    pi = build_upper_bound_refutation(XOR, 1)
    pc = cnf_refutation_from_polynomial(pi, XOR, 1)
    assert verify_proof(cnf_to_polysystem(gen_circuit_cnf(XOR, 1)), pc, require_refutation=True)
    rep = translate_cnf_refutation(pc, XOR, 1, report=True)
    assert verify_proof(gen_circuit_formula(XOR, 1), rep.proof, require_refutation=True)
    assert rep.degree_out >= rep.degree_in and rep.inflation < 3


def test_translation_rejects_bad_input():
    with pytest.raises(InvalidInputProof):
        translate_cnf_refutation(ProofObject(NS, {}), XOR, 1)
