"""The degree-O(s) refutation of Circuit_s(f) and the CNF-to-polynomial proof translation.

Circuit monomials pick one option per structural group of every gate:
the operation, and per input wire its source kind, the constant literal
(constval or its bar), an input index and (for v > 1) a gate index.
Summing all of them gives 1 modulo the structure axioms; each single
monomial is refuted by evaluating its circuit on an input where it
disagrees with f.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .circuits import (CircuitIR, Const, Gate, GateRef, Var, alpha_bits, eval_circuit,
                       eval_gates, truth_table)
from .config import limits
from .errors import (FunctionComputable, InvalidInputProof, NotBooleanZero, TooLarge,
                     WitnessMismatch)
from .formulas import (PolySystem, VarCatalog, bool_tag, cnf_to_polysystem, family_of,
                       gen_circuit_cnf, gen_circuit_formula, neg_tag)
from .polynomials import (Polynomial, VarPool, bar_eliminate, decompose_boolean_zero,
                          mono_mul, multilinearize)
from .proofs import (NS, ProofAccumulator, ProofObject, proof_degree, restrict_proof,
                     verify_proof)

OP_FAMS = (("NEG", "isneg"), ("OR", "isor"), ("AND", "isand"))
SRC_FAMS = (("const", "isfromconst"), ("var", "isfromvar"), ("gate", "isfromgate"))


# ---------------------------------------------------------------- circuit monomials

@dataclass(frozen=True)
class CircuitMonomial:
    mono: tuple                 # sorted variable ids
    choices: tuple              # per gate: (op, wire1, wire2); wire = (src, cv, i, u)
    circuit: CircuitIR | None   # None if gate 1 claims a gate input
    bad_wire: tuple | None = None  # (1, a) for that case


def circuit_monomial_count(s: int, n: int) -> int:
    c = 1
    for v in range(1, s + 1):
        c *= 3 * (3 * 2 * n * max(1, v - 1)) ** 2
    return c


def _gate_options(v: int, cat: VarCatalog):
    X = cat.v
    n = cat.n
    wires = []
    for a in (1, 2):
        opts = []
        for src, fam in SRC_FAMS:
            for cv in (1, 0):
                cvid = X("constval", v, a) if cv else cat.bar(X("constval", v, a))
                for i in range(1, n + 1):
                    for u in (range(1, v) if v > 1 else (None,)):
                        ids = [X(fam, v, a), cvid, X("isvar", v, a, i)]
                        if u is not None:
                            ids.append(X("isgate", v, a, u))
                        opts.append((tuple(ids), (src, cv, i, u)))
        wires.append(opts)
    out = []
    for op, fam in OP_FAMS:
        for (ids1, w1), (ids2, w2) in product(wires[0], wires[1]):
            out.append(((X(fam, v),) + ids1 + ids2, (op, w1, w2)))
    return out


def _decode(choices, n: int):
    gates = []
    for v, (op, *ws) in enumerate(choices, start=1):
        wires = []
        for a, (src, cv, i, u) in enumerate(ws, start=1):
            if src == "const":
                wires.append(Const(cv))
            elif src == "var":
                wires.append(Var(i))
            elif v == 1:
                return None, (1, a)
            else:
                wires.append(GateRef(u))
        gates.append(Gate(op, wires[0], None if op == "NEG" else wires[1]))
    return CircuitIR(n, tuple(gates)), None


def enumerate_circuit_monomials(s: int, n: int, catalog: VarCatalog | None = None,
                                guard: bool = True):
    """Stream all circuit monomials in lexicographic choice order."""
    cnt = circuit_monomial_count(s, n)
    if guard and cnt > limits().circuit_monomials:
        raise TooLarge(f"{cnt} circuit monomials exceed the limit")
    cat = catalog or VarCatalog(n, s)
    per_gate = [_gate_options(v, cat) for v in range(1, s + 1)]
    for combo in product(*per_gate):
        ids = []
        for g_ids, _ in combo:
            ids.extend(g_ids)
        choices = tuple(c for _, c in combo)
        C, bad = _decode(choices, n)
        yield CircuitMonomial(tuple(sorted(ids)), choices, C, bad)


def monomial_assignment(cm: CircuitMonomial, cat: VarCatalog) -> dict:
    """Structure keys -> bits: variables of the monomial are 1, the rest 0."""
    vals = {k: 0 for k in cat.keys if cat.is_structure(cat.id(k))}
    for x in cm.mono:
        if cat.is_bar(x):
            vals[cat.key(x)] = 0
        else:
            vals[cat.key(x)] = 1
    return vals


# ---------------------------------------------------------------- Σ m − 1

def _structure_groups(s: int, cat: VarCatalog):
    """(axiom tag, group variables, via-negation flag) in induction order."""
    X = cat.v
    for v in range(1, s + 1):
        yield f"ax-fn({v})", [X(f, v) for _, f in OP_FAMS], False
        for a in (1, 2):
            yield f"ax-from({v},{a})", [X(f, v, a) for _, f in SRC_FAMS], False
            cv = X("constval", v, a)
            yield neg_tag(cat, cv), [cv, cat.bar(cv)], True
            yield f"ax-in-gt({v},{a})", [X("isvar", v, a, i) for i in range(1, cat.n + 1)], False
            if v > 1:
                yield f"ax-in-gt2({v},{a})", [X("isgate", v, a, u) for u in range(1, v)], False


def _monomial_sum_into(acc: ProofAccumulator, s: int, cat: VarCatalog):
    M = [()]
    for tag, group, via_neg in _structure_groups(s, cat):
        c = -1 if via_neg else 1
        for m in M:
            acc.add_mono(tag, m, c)
        M = [mono_mul(m, (x,)) for m in M for x in group]
    return M


def derive_monomial_sum(s: int, n: int, verify: bool = True) -> ProofObject:
    """Nullstellensatz derivation of Σ_{m ∈ M_s} m − 1 (s = 0 gives 0)."""
    if circuit_monomial_count(s, n) > limits().circuit_monomials:
        raise TooLarge("too many circuit monomials")
    if s == 0:
        return ProofObject(NS, {}, (), Polynomial())
    cat = VarCatalog(n, s)
    acc = ProofAccumulator()
    M = _monomial_sum_into(acc, s, cat)
    tgt = {m: 1 for m in M}
    tgt[()] = tgt.get((), 0) - 1
    acc.target = {m: c for m, c in tgt.items() if c}
    pi = acc.proof()
    if verify:
        _must_verify(gen_circuit_formula((0,) * 2 ** n, s), pi)
    return pi


# ---------------------------------------------------------------- m·(out − b)

def _div(m: tuple, *xs) -> tuple:
    out = list(m)
    for x in xs:
        out.remove(x)
    return tuple(out)


def _add(D: dict, tag: str, mono: tuple, c):
    d = D.setdefault(tag, {})
    v = d.get(mono, 0) + c
    if v:
        d[mono] = v
    else:
        del d[mono]


def _merge(D: dict, E: dict, c=1, times: int | None = None):
    """D += c·E, or D += c·x·E when ``times`` is a variable x."""
    for tag, d in E.items():
        for mono, v in d.items():
            _add(D, tag, mono if times is None else mono_mul(mono, (times,)), c * v)


class _Deriver:
    def __init__(self, cm: CircuitMonomial, alpha: tuple, cat: VarCatalog):
        self.m = cm.mono
        self.ch = cm.choices
        self.alpha = alpha
        self.al = sum(b << (len(alpha) - 1 - i) for i, b in enumerate(alpha))
        self.cat = cat
        self.memo: dict = {}

    def wire(self, v: int, a: int):
        X, cat, m, al = self.cat.v, self.cat, self.m, self.al
        src, cv, i, u = self.ch[v - 1][a]
        D: dict = {}
        if src == "const":
            fc = X("isfromconst", v, a)
            cvid = X("constval", v, a)
            if cv:
                _add(D, f"inwire-const({v},{a},{al})", _div(m, fc), 1)
                _add(D, bool_tag(cat, cvid), _div(m, cvid), 1)
            else:
                nb = cat.bar(cvid)
                base = _div(m, nb)               # m'·fc
                _add(D, f"inwire-const({v},{a},{al})", _div(m, fc), 1)
                _add(D, neg_tag(cat, cvid), mono_mul(base, (cvid,)), -1)
                _add(D, bool_tag(cat, cvid), base, -1)
            return cv, D
        if src == "var":
            _add(D, f"inwire-var({v},{a},{i},{al})", _div(m, X("isfromvar", v, a), X("isvar", v, a, i)), 1)
            return self.alpha[i - 1], D
        _add(D, f"inwire-gate({v},{a},{u},{al})", _div(m, X("isfromgate", v, a), X("isgate", v, a, u)), 1)
        bu, Du = self.gate(u)
        _merge(D, Du)
        return bu, D

    def gate(self, v: int):
        if v in self.memo:
            return self.memo[v]
        X, cat, m, al = self.cat.v, self.cat, self.m, self.al
        op = self.ch[v - 1][0]
        in1, in2 = X("inwire", v, 1, al), X("inwire", v, 2, al)
        c1, Q1 = self.wire(v, 1)
        D: dict = {}
        if op == "NEG":
            _add(D, f"ax-neg({v},{al})", _div(m, X("isneg", v)), 1)
            _add(D, neg_tag(cat, in1), m, -1)
            _merge(D, Q1, -1)
            b = 1 - c1
        else:
            c2, Q2 = self.wire(v, 2)
            if op == "OR":
                _add(D, f"ax-or({v},{al})", _div(m, X("isor", v)), 1)
                _add(D, neg_tag(cat, in2), mono_mul(m, (cat.bar(in1),)), 1)
                _add(D, neg_tag(cat, in1), m, 1)
                _add(D, neg_tag(cat, in1), mono_mul(m, (in2,)), -1)
                _merge(D, Q2, 1)
                _merge(D, Q2, -1, times=in1)
                if not c2:
                    _merge(D, Q1, 1)
                b = c1 | c2
            else:
                _add(D, f"ax-and({v},{al})", _div(m, X("isand", v)), 1)
                _merge(D, Q2, 1, times=in1)
                if c2:
                    _merge(D, Q1, 1)
                b = c1 & c2
        self.memo[v] = (b, D)
        return b, D


def _to_proof(D: dict, target: Polynomial) -> ProofObject:
    return ProofObject(NS, {t: Polynomial._raw(d) for t, d in D.items() if d}, (), target)


def derive_wrong_output(cm: CircuitMonomial, alpha: Sequence[int], b: int,
                        catalog: VarCatalog | None = None, verify: bool = True) -> ProofObject:
    """Derivation of m·(outwire_α(s) − b), by induction over the circuit of m."""
    if cm.circuit is None:
        raise WitnessMismatch("monomial does not describe a circuit")
    s = len(cm.choices)
    n = cm.circuit.n_inputs
    alpha = tuple(alpha)
    if eval_circuit(cm.circuit, alpha) != b:
        raise WitnessMismatch(f"circuit outputs {1 - b} on {alpha}, not {b}")
    cat = catalog or VarCatalog(n, s)
    bs, D = _Deriver(cm, alpha, cat).gate(s)
    assert bs == b
    al = sum(x << (n - 1 - i) for i, x in enumerate(alpha))
    out = cat.v("outwire", s, al)
    pi = _to_proof(D, Polynomial({mono_mul(cm.mono, (out,)): 1, cm.mono: -b}))
    if verify:
        _must_verify(gen_circuit_formula((0,) * 2 ** n, s), pi)
    return pi


# ---------------------------------------------------------------- assembly

@dataclass
class RefutationReport:
    proof: ProofObject
    degree: int
    size: int
    monomials: int


def build_upper_bound_refutation(tt: Sequence[int], s: int, verify: bool = True,
                                 report: bool = False):
    """Σ m − 1 plus a derivation of −m for every circuit monomial m."""
    tt = tuple(int(x) for x in tt)
    n = len(tt).bit_length() - 1
    cat = VarCatalog(n, s)
    P = gen_circuit_formula(tt, s, cat)
    acc = ProofAccumulator()
    _monomial_sum_into(acc, s, cat)
    X = cat.v
    count = 0
    for cm in enumerate_circuit_monomials(s, n, cat):
        count += 1
        m = cm.mono
        if cm.circuit is None:
            _, a = cm.bad_wire
            fg = X("isfromgate", 1, a)
            acc.add_mono(f"no-gate-in(1,{a})", _div(m, fg), -1)
            continue
        table = truth_table(cm.circuit)
        al = next((i for i in range(2 ** n) if table[i] != tt[i]), None)
        if al is None:
            raise FunctionComputable(f"a size-{s} circuit computes f", cm.circuit)
        alpha = alpha_bits(al, n)
        b = table[al]
        sigma = 2 * b - 1            # −m = σ·(m·(out − b) − m·(out − f(α)))
        _, D = _Deriver(cm, alpha, cat).gate(s)
        for tag, d in D.items():
            for mono, c in d.items():
                acc.add_mono(tag, mono, sigma * c)
        acc.add_mono(f"ax-correct({al})", m, -sigma)
    acc.target = {(): -1}
    pi = acc.proof()
    if verify:
        _must_verify(P, pi)
    if report:
        return RefutationReport(pi, proof_degree(pi, P), sum(len(q) for q in pi.multipliers.values()), count)
    return pi


def _must_verify(P, pi: ProofObject):
    v = verify_proof(P, pi)
    if not v:
        raise AssertionError(f"internal derivation failed to verify: {v.reason}")


# ---------------------------------------------------------------- local derivations

class NotDerivable(Exception):
    pass


def _indicator(point: dict) -> Polynomial:
    p = Polynomial.const(1)
    for x, b in sorted(point.items()):
        p = p * (Polynomial.var(x) if b else 1 - Polynomial.var(x))
    return p


def derive_locally(target: Polynomial, axioms: Mapping[str, Polynomial], pool: VarPool,
                   max_vars: int = 12) -> ProofObject:
    """Derive a target from a few axioms by pointwise interpolation.

    Bars are eliminated with negation axioms.  On every cube point where
    the target is nonzero, some axiom must be nonzero too; its multiplier
    gets the matching multiple of the point indicator.  What is left
    vanishes on the cube and is absorbed by Boolean axioms.
    """
    T0, tneg = bar_eliminate(target, pool)
    A0 = {}
    aneg = {}
    for tag, a in axioms.items():
        A0[tag], aneg[tag] = bar_eliminate(a, pool)
    V = set(T0.variables())
    for a in A0.values():
        V |= a.variables()
    if len(V) > max_vars:
        raise TooLarge(f"local derivation over {len(V)} variables")
    mult: dict = {t: Polynomial() for t in axioms}
    vs = sorted(V)
    for bits in product((0, 1), repeat=len(vs)):
        pt = dict(zip(vs, bits))
        tv = T0.evaluate(pt)
        if not tv:
            continue
        for tag in axioms:
            av = A0[tag].evaluate(pt)
            if av:
                mult[tag] = mult[tag] + _indicator(pt).scale(tv / av if tv % av else tv // av)
                break
        else:
            raise NotDerivable(f"target nonzero at a common zero of the axioms: {pt}")
    R = T0
    for tag, t in mult.items():
        if t:
            R = R - t * A0[tag]
    wit = decompose_boolean_zero(R)
    out: dict = {t: q for t, q in mult.items() if q}
    negm: dict = dict(tneg)
    for tag, t in mult.items():
        for x, q in aneg[tag].items():
            negm[x] = negm.get(x, Polynomial()) - t * q
    for x, q in negm.items():
        if q:
            out[neg_tag(pool, x)] = out.get(neg_tag(pool, x), Polynomial()) + q
    for q, x in wit:
        out[bool_tag(pool, x)] = out.get(bool_tag(pool, x), Polynomial()) + q
    return ProofObject(NS, out, (), target)


def derive_by_products(target: Polynomial, pairs: Mapping[tuple, str], pool: VarPool) -> ProofObject:
    """Expand and cancel: bar-eliminate, multilinearize, and charge every
    remaining term to a product-zero axiom x_j·x_j' = 0 it contains."""
    T0, tneg = bar_eliminate(target, pool)
    R, wit = multilinearize(T0)
    out: dict = {}
    for mono, c in R.sorted_terms():
        hit = None
        for i in range(len(mono)):
            for j in range(i + 1, len(mono)):
                if (mono[i], mono[j]) in pairs:
                    hit = (mono[i], mono[j])
                    break
            if hit:
                break
        if hit is None:
            raise NotDerivable(f"term {mono} contains no product-zero pair")
        tag = pairs[hit]
        out[tag] = out.get(tag, Polynomial()) + Polynomial.mono(_div(mono, *hit), c)
    for x, q in tneg.items():
        out[neg_tag(pool, x)] = out.get(neg_tag(pool, x), Polynomial()) + q
    for q, x in wit:
        out[bool_tag(pool, x)] = out.get(bool_tag(pool, x), Polynomial()) + q
    return ProofObject(NS, out, (), target)


# ---------------------------------------------------------------- Appendix A

def prefix_sum(cat: VarCatalog, v: int, a: int, i: int, gate: bool = False) -> Polynomial:
    fam = "isgate" if gate else "isvar"
    return Polynomial({(cat.v(fam, v, a, j),): 1 for j in range(1, i + 1)})


@dataclass
class SubstitutedAxioms:
    ax3: list   # index i-1
    ax4: list
    ax5: list
    targets: dict


def derive_substituted_axioms(v: int, a: int, n: int, gate: bool = False,
                              s: int | None = None, verify: bool = True) -> SubstitutedAxioms:
    """Derivations of the prefix-sum images of the three chain clauses.

    For the input chain (gate=False) the selectors are isvar(v,a,·) and
    the length is n; for gate=True they are isgate(v,a,·) with length
    v − 1 and the catalog needs s ≥ v.
    """
    s = s or v
    cat = VarCatalog(n, s)
    fam = "isgate" if gate else "isvar"
    top = v - 1 if gate else n
    X = {j: cat.v(fam, v, a, j) for j in range(1, top + 1)}
    pz = "prod-zero-gate" if gate else "prod-zero-in"
    pairs = {(X[j], X[k]): f"{pz}({v},{a},{j},{k})" for j in range(1, top + 1) for k in range(j + 1, top + 1)}
    one = Polynomial.const(1)
    res = SubstitutedAxioms([], [], [], {})
    P = gen_circuit_formula((0,) * 2 ** n, s, cat) if verify else None
    for i in range(1, top + 1):
        S = prefix_sum(cat, v, a, i, gate)
        Sp = prefix_sum(cat, v, a, i - 1, gate)
        x = Polynomial.var(X[i])
        t3 = S * (one - Sp) * (one - x)             # ¬L_i ∨ L_{i−1} ∨ X_i
        t4 = (one - S) * Sp                          # L_i ∨ ¬L_{i−1}
        t5 = (one - S) * (one - Polynomial.var(cat.bar(X[i])))   # L_i ∨ ¬X_i
        for lst, t, name in ((res.ax3, t3, "ax3"), (res.ax4, t4, "ax4"), (res.ax5, t5, "ax5")):
            pi = derive_by_products(t, pairs, cat)
            if verify:
                _must_verify(P, pi)
            lst.append(pi)
            res.targets[(name, i)] = t
    return res


def extension_substitution(cnf_cat: VarCatalog) -> dict:
    """ρ: isvarless(v,a,i) ↦ Σ_{j≤i} isvar(v,a,j), bars ↦ 1 − that sum."""
    rho = {}
    for k in cnf_cat.keys:
        if k[0] == "isvarless":
            _, v, a, i = k
            fam = "isvar"
        elif k[0] == "isgateless":
            _, v, a, i = k
            fam = "isgate"
        else:
            continue
        S = Polynomial({(cnf_cat.id((fam, v, a, j)),): 1 for j in range(1, i + 1)})
        x = cnf_cat.id(k)
        rho[x] = S
        rho[cnf_cat.bar(x)] = 1 - S
    return rho


def transport(p: Polynomial, src: VarPool, dst: VarPool) -> Polynomial:
    """Rename variables by key (bars to bars)."""
    memo: dict = {}

    def tr(x):
        if x not in memo:
            y = dst.id(src.key(x))
            memo[x] = dst.bar(y) if src.is_bar(x) else y
        return memo[x]

    return Polynomial._raw({tuple(sorted(tr(x) for x in m)): c for m, c in p.items()})


def transport_proof(pi: ProofObject, src: VarPool, dst: VarPool) -> ProofObject:
    return ProofObject(pi.kind, {t: transport(q, src, dst) for t, q in pi.multipliers.items()},
                       tuple(transport(q, src, dst) for q in pi.squares), transport(pi.target, src, dst))


def compose(pi: ProofObject, derivs: Mapping[str, ProofObject]) -> ProofObject:
    """Replace every axiom tag T of π that has a derivation D_T (target = that
    axiom) by D_T's multipliers times π's multiplier for T."""
    acc: dict = {}

    def add(tag, q):
        d = acc.setdefault(tag, {})
        for m, c in q.items():
            v = d.get(m, 0) + c
            if v:
                d[m] = v
            else:
                del d[m]

    for tag, t in pi.multipliers.items():
        D = derivs.get(tag)
        if D is None:
            add(tag, t)
            continue
        for t2, q in D.multipliers.items():
            add(t2, t * q)
    return ProofObject(pi.kind, {t: Polynomial._raw(d) for t, d in acc.items() if d},
                       pi.squares, pi.target)


def _cnf_tag_groups(cnf_sys: PolySystem) -> dict:
    out: dict = {}
    for ax in cnf_sys.axioms:
        if ax.tag.startswith("cnf:"):
            out.setdefault(ax.tag[4:].split("#")[0], {})[ax.tag] = ax.poly
    return out


def _chain_derivation(tag: str, target: Polynomial, cat: VarCatalog) -> ProofObject:
    """Derivation of a substituted input-cnf / gate-cnf clause image."""
    group = tag[4:].split("#")[0]
    fam_name = group.split("(")[0]
    v, a = (int(z) for z in group[group.index("(") + 1:-1].split(","))
    gate = fam_name == "gate-cnf"
    fam = "isgate" if gate else "isvar"
    top = v - 1 if gate else cat.n
    X = {j: cat.v(fam, v, a, j) for j in range(1, top + 1)}
    pz = "prod-zero-gate" if gate else "prod-zero-in"
    pairs = {(X[j], X[k]): f"{pz}({v},{a},{j},{k})" for j in range(1, top + 1) for k in range(j + 1, top + 1)}
    gt = f"ax-in-gt2({v},{a})" if gate else f"ax-in-gt({v},{a})"
    # the unit clause image 1 − S_top is −(ax-in-gt)
    S = prefix_sum(cat, v, a, top, gate)
    if target == 1 - S:
        return ProofObject(NS, {gt: Polynomial.const(-1)}, (), target)
    return derive_by_products(target, pairs, cat)


def substituted_axiom_derivations(tt: Sequence[int], s: int, verify: bool = True):
    """For every axiom of Circuit^CNF_s(f)↾ρ, a derivation from Circuit_s(f).

    Returns (restricted CNF system transported to the polynomial catalog,
    {tag: derivation}).
    """
    tt = tuple(tt)
    n = len(tt).bit_length() - 1
    F = gen_circuit_cnf(tt, s)
    Pc = cnf_to_polysystem(F)
    rho = extension_substitution(F.catalog)
    from .formulas import restrict_system
    Pr = restrict_system(Pc, rho)
    cat = VarCatalog(n, s)
    P = gen_circuit_formula(tt, s, cat)
    pindex = P.index()
    derivs: dict = {}
    axioms_t = {}
    for ax in Pr.axioms:
        tgt = transport(ax.poly, F.catalog, cat)
        axioms_t[ax.tag] = tgt
        if ax.tag in pindex and pindex[ax.tag] == tgt:
            continue                      # Boolean / negation axioms of base variables
        fam = family_of(ax.tag)
        if fam in ("bool", "negation"):
            # axioms of extension variables: S² − S
            pi = _ext_bool_derivation(ax.tag, tgt, cat)
        elif ax.tag.startswith("cnf:input-cnf") or ax.tag.startswith("cnf:gate-cnf"):
            pi = _chain_derivation(ax.tag, tgt, cat)
        else:
            pi = derive_locally(tgt, _poly_axioms_for_clause(ax.tag, pindex), cat)
        if verify:
            _must_verify(P, pi)
        derivs[ax.tag] = pi
    return axioms_t, derivs, P


def _ext_bool_derivation(tag: str, tgt: Polynomial, cat: VarCatalog) -> ProofObject:
    name = tag[tag.index("[") + 1:-1].lstrip("~")
    from .polynomials import parse_key
    _, v, a, i = parse_key(name)
    gate = name.startswith("isgateless")
    fam = "isgate" if gate else "isvar"
    X = {j: cat.v(fam, v, a, j) for j in range(1, i + 1)}
    pz = "prod-zero-gate" if gate else "prod-zero-in"
    pairs = {(X[j], X[k]): f"{pz}({v},{a},{j},{k})" for j in range(1, i + 1) for k in range(j + 1, i + 1)}
    return derive_by_products(tgt, pairs, cat)


_CLAUSE_TO_AXIOM = {
    "from": "ax-from", "fn": "ax-fn", "no-gate-in": "no-gate-in",
    "inwire-const": "inwire-const", "inwire-var": "inwire-var", "inwire-gate": "inwire-gate",
    "neg": "ax-neg", "or": "ax-or", "and": "ax-and", "correct": "ax-correct",
}


def _poly_axioms_for_clause(tag: str, pindex: Mapping) -> dict:
    group = tag[4:].split("#")[0]
    fam = group.split("(")[0]
    return {_CLAUSE_TO_AXIOM[fam] + group[len(fam):]: pindex[_CLAUSE_TO_AXIOM[fam] + group[len(fam):]]}


@dataclass
class TranslationReport:
    proof: ProofObject
    degree_in: int
    degree_out: int

    @property
    def inflation(self) -> float:
        return self.degree_out / max(1, self.degree_in)


def translate_cnf_refutation(pi_cnf: ProofObject, tt: Sequence[int], s: int,
                             report: bool = False):
    """Turn a refutation of the CNF translation into one of Circuit_s(f)."""
    tt = tuple(int(x) for x in tt)
    F = gen_circuit_cnf(tt, s)
    Pc = cnf_to_polysystem(F)
    if not verify_proof(Pc, pi_cnf, require_refutation=True):
        raise InvalidInputProof("input proof does not refute the CNF translation")
    rho = extension_substitution(F.catalog)
    pr, _ = restrict_proof(pi_cnf, rho, Pc)
    axioms_t, derivs, P = substituted_axiom_derivations(tt, s)
    pr_t = transport_proof(pr, F.catalog, P.pool)
    out = compose(pr_t, derivs)
    _must_verify(P, out)
    if report:
        return TranslationReport(out, proof_degree(pi_cnf, Pc), proof_degree(out, P))
    return out


def cnf_refutation_from_polynomial(pi: ProofObject, tt: Sequence[int], s: int) -> ProofObject:
    """Re-express a refutation of Circuit_s(f) over the CNF translation.

    Each polynomial axiom is derived locally from the clause polynomials of
    its group (the input and gate chains together with their extension
    variables); Boolean and negation axioms carry over by name.
    """
    tt = tuple(int(x) for x in tt)
    n = len(tt).bit_length() - 1
    F = gen_circuit_cnf(tt, s)
    Pc = cnf_to_polysystem(F)
    cat = VarCatalog(n, s)
    P = gen_circuit_formula(tt, s, cat)
    groups = _cnf_tag_groups(Pc)
    pin = transport_proof(pi, cat, F.catalog)
    pindex = P.index()
    derivs: dict = {}
    for tag in pin.multipliers:
        fam = family_of(tag)
        if fam in ("bool", "negation"):
            continue
        tgt = transport(pindex[tag], cat, F.catalog)
        group = _axiom_group(tag)
        pi_t = derive_locally(tgt, groups[group], F.catalog)
        derivs[tag] = pi_t
    out = compose(pin, derivs)
    _must_verify(Pc, out)
    return out


def _axiom_group(tag: str) -> str:
    fam = family_of(tag)
    args = tag[len(fam):]
    inv = {v: k for k, v in _CLAUSE_TO_AXIOM.items()}
    if fam in inv:
        return inv[fam] + args
    nums = args[1:-1].split(",")
    if fam in ("ax-in-gt", "prod-zero-in"):
        return f"input-cnf({nums[0]},{nums[1]})"
    if fam in ("ax-in-gt2", "prod-zero-gate"):
        return f"gate-cnf({nums[0]},{nums[1]})"
    raise KeyError(tag)
