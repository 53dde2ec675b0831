"""Restrictions of Circuit_s(f) that leave an XOR system over m free variables.

The scaffold circuit starts with m Y-gates ``OR(Const 0, constval(v,2))``
whose second constant stays free; these free constants are the
variables Y.  After the Y-gates come the heuristic circuit, the neighbor
selectors, the guarded inputs and an XOR chain.  Evaluation variables are
eliminated by simulating the scaffold symbolically: a wire's value at
input α is a Boolean function of β ∈ {0,1}^m, stored as a 2^m-bit mask.
Constants become constants, functions equal to an earlier wire (or its
complement) become that literal, and only genuinely new functions keep
their own variable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .circuits import (ONE, ZERO, CircuitBuilder, CircuitIR, Const, Gate, HeuristicCircuit, Var,
                       alpha_bits, circuit_to_structure_assignment, clamp_wire, dual_rail_xor_chain,
                       eval_circuit, shannon_wire, slice_rails, truth_table, var_masks, weight)
from .config import limits
from .errors import (BadParameters, BudgetTooSmall, CoverageViolation, NotSliceFunction,
                     QAxiomNotBooleanZero, SupportTooLarge, TooLarge)
from .formulas import (PolySystem, VarCatalog, family_of, gen_circuit_formula, gen_xor_system,
                       monotone_tau, restrict_system)
from .graphs import BipartiteGraph, neighbor_table
from .oracles import Solver, heuristic_contract_check, slice_function_check
from .polynomials import (Polynomial, complete_substitution, decompose_boolean_zero,
                          substitute)
from .errors import NotBooleanZero


@dataclass(frozen=True)
class Fixed:
    bit: int


@dataclass(frozen=True)
class Parity:
    nbrs: tuple


@dataclass
class RestrictionPlan:
    tt: tuple
    s: int
    graph: BipartiteGraph
    scaffold: CircuitIR          # exactly s gates, Y-gates first
    rho: dict                    # variable id -> int | Polynomial
    Y: tuple                     # constval(i,2) ids of the Y-gates
    gout_spec: tuple
    remaining_vars: int
    wire_masks: dict             # evaluation variable key -> mask over β
    monotone: bool = False
    level: int | None = None
    free_eval: tuple = ()
    catalog: VarCatalog | None = None
    heuristic_size: int = 0

    @property
    def m(self) -> int:
        return len(self.Y)

    @property
    def n(self) -> int:
        return self.graph.n

    def is_natural(self) -> bool:
        cat = self.catalog
        for v, img in self.rho.items():
            if not cat.is_structure(v):
                continue
            if isinstance(img, Polynomial):
                for x in img.variables():
                    if cat.is_evaluation(x):
                        return False
        return True

    def to_json(self) -> dict:
        cat = self.catalog

        def img(x):
            return x if isinstance(x, int) else x.to_text(cat)

        spec = [{"fixed": g.bit} if isinstance(g, Fixed) else {"parity": list(g.nbrs)}
                for g in self.gout_spec]
        return {"s": self.s, "n": self.n, "truthtable": list(self.tt), "monotone": self.monotone,
                "level": self.level, "Y": [cat.name(y) for y in self.Y],
                "rho": {cat.name(v): img(x) for v, x in sorted(self.rho.items()) if not cat.is_bar(v)},
                "gout_spec": spec, "remaining_vars": self.remaining_vars,
                "graph": self.graph.to_json(), "scaffold": self.scaffold.to_json()}


# ---------------------------------------------------------------- scaffolds

def _finish(b: CircuitBuilder, out, s: int, heuristic_size: int, factor: int):
    L = b.build(out)
    need = max(L.size, factor * heuristic_size)
    if s < need:
        raise BudgetTooSmall(f"scaffold needs s >= {need}, got {s}", need)
    return b.build(out, pad_to=s)


def general_scaffold(C_f: HeuristicCircuit, G: BipartiteGraph, s: int | None):
    n, m = G.n, G.m
    b = CircuitBuilder(n)
    ys = [b.raw("OR", ZERO, ZERO) for _ in range(m)]
    b.keep = m
    xs = [Var(i) for i in range(1, n + 1)]
    valid, value = b.embed(C_f.circuit)
    nvalid = b.neg(valid)
    guards = []
    for i in range(1, m + 1):
        sel = shannon_wire(b, neighbor_table(G, i), xs)
        guards.append(b.and_(b.and_(sel, nvalid), ys[i - 1]))
    chi = ZERO
    for g in guards:
        chi = b.xor(chi, g)
    out = b.or_(b.and_(valid, value), chi)
    if s is None:
        L = b.build(out)
        s = max(L.size, 2 * C_f.size)
    return _finish(b, out, s, C_f.size, 2)


def monotone_scaffold(C_f: HeuristicCircuit, G: BipartiteGraph, s: int | None, level: int):
    n, m = G.n, G.m
    b = CircuitBuilder(n)
    ys = [b.raw("OR", ZERO, ZERO) for _ in range(m)]
    ybs = [b.raw("OR", ZERO, ZERO) for _ in range(m)]
    b.keep = 2 * m
    xs = [Var(i) for i in range(1, n + 1)]
    (vp, vn), (cp, _) = slice_rails(b, C_f.circuit, level)
    c1 = clamp_wire(b, vp, xs, level)
    c1bar = clamp_wire(b, vn, xs, level)
    c2 = clamp_wire(b, cp, xs, level)
    pos, neg = [], []
    from .graphs import neighbor_circuit
    for i in range(1, m + 1):
        (sp, sn), = slice_rails(b, neighbor_circuit(G, i), level)
        sel = clamp_wire(b, sp, xs, level)
        selbar = clamp_wire(b, sn, xs, level)
        y_mon = clamp_wire(b, ys[i - 1], xs, level)
        yb_mon = clamp_wire(b, ybs[i - 1], xs, level)
        pos.append(b.and_(b.and_(sel, c1bar), y_mon))
        neg.append(b.or_(b.or_(selbar, c1), yb_mon))
    p, _ = dual_rail_xor_chain(b, pos, neg)
    out = b.or_(b.and_(c1, c2), p)
    if s is None:
        L = b.build(out)
        s = max(L.size, 10 * C_f.size)
    L = _finish(b, out, s, C_f.size, 10)
    assert L.neg_count() == 0
    return L


def scaffold_size(C_f: HeuristicCircuit, G: BipartiteGraph, monotone: bool = False, level=None) -> int:
    L = monotone_scaffold(C_f, G, None, level) if monotone else general_scaffold(C_f, G, None)
    return L.size


# ---------------------------------------------------------------- elimination

def _parity_mask(nbrs, ym, full):
    acc = 0
    for i in nbrs:
        acc ^= ym[i - 1]
    return acc


def _simulate(L: CircuitIR, alpha, ym: list, ybar: dict, full: int):
    """Gate masks at input α; gates 1..m are Y-gates, ybar maps Ȳ-gate -> i."""
    m = len(ym)
    gm = []

    def val(w):
        if w.kind == "const":
            return full if w.index else 0
        if w.kind == "var":
            return full if alpha[w.index - 1] else 0
        return gm[w.index - 1]

    for v, g in enumerate(L.gates, start=1):
        if v <= m:
            gm.append(ym[v - 1])
        elif v in ybar:
            gm.append(full ^ ym[ybar[v] - 1])
        elif g.op == "NEG":
            gm.append(full ^ val(g.in1))
        elif g.op == "OR":
            gm.append(val(g.in1) | val(g.in2))
        else:
            gm.append(val(g.in1) & val(g.in2))
    return gm, val


def _eliminate(L: CircuitIR, cat: VarCatalog, m: int, ybar: dict, Y: list, eliminate: bool):
    """Images of all evaluation variables plus their β-functions."""
    n = cat.n
    W = 2 ** m
    full = (1 << W) - 1
    ym = list(var_masks(m)) if m else []
    X = cat.v
    rho: dict = {}
    masks: dict = {}
    free: list = []
    for al in range(2 ** n):
        alpha = alpha_bits(al, n)
        gm, val = _simulate(L, alpha, ym, ybar, full)
        lit: dict = {}
        for i in range(m):
            lit.setdefault(ym[i], Polynomial.var(Y[i]))
            lit.setdefault(full ^ ym[i], Polynomial.var(cat.bar(Y[i])))

        def image(mask, own):
            if mask == 0:
                return 0
            if mask == full:
                return 1
            if mask in lit:
                return lit[mask]
            lit[mask] = Polynomial.var(own)
            lit[full ^ mask] = Polynomial.var(cat.bar(own))
            return None

        for v, g in enumerate(L.gates, start=1):
            wires = (g.in1, g.in2 if g.in2 is not None else ZERO)
            for a, w in enumerate(wires, start=1):
                key = ("inwire", v, a, al)
                mk = gm[v - 1] if a == 2 and (v <= m or v in ybar) else val(w)
                masks[key] = mk
                if eliminate:
                    img = image(mk, X(*key))
                    if img is None:
                        free.append(X(*key))
                    else:
                        rho[X(*key)] = img
                else:
                    free.append(X(*key))
            key = ("outwire", v, al)
            mk = gm[v - 1]
            masks[key] = mk
            if eliminate:
                img = image(mk, X(*key))
                if img is None:
                    free.append(X(*key))
                else:
                    rho[X(*key)] = img
            else:
                free.append(X(*key))
    return rho, masks, free


def _structure_rho(L: CircuitIR, cat: VarCatalog, m: int, ybar: dict, loose: bool):
    vals = circuit_to_structure_assignment(L, cat.s)
    rho = {cat.id(k): b for k, b in vals.items()}
    Y = [cat.v("constval", i, 2) for i in range(1, m + 1)]
    for y in Y:
        del rho[y]
    for v, i in ybar.items():
        rho[cat.v("constval", v, 2)] = Polynomial.var(cat.bar(Y[i - 1]))
    if loose:
        del rho[cat.v("constval", 1, 1)]
    return rho, Y


def _plan(tt, L: CircuitIR, G: BipartiteGraph, spec, s, ybar, monotone, level, C_f,
          eliminate=True, loose=False):
    n, m = G.n, G.m
    cat = VarCatalog(n, s)
    rho, Y = _structure_rho(L, cat, m, ybar, loose)
    erho, masks, free = _eliminate(L, cat, m, ybar, Y, eliminate)
    rho.update(erho)
    full = (1 << 2 ** m) - 1
    ym = list(var_masks(m)) if m else []
    for al in range(2 ** n):
        got = masks[("outwire", s, al)]
        want = spec[al]
        exp = (full if want.bit else 0) if isinstance(want, Fixed) else _parity_mask(want.nbrs, ym, full)
        if got != exp:
            raise AssertionError(f"scaffold output at input {al} does not match its specification")
    census = m + len(free) + (1 if loose else 0)
    return RestrictionPlan(tuple(tt), s, G, L, rho, tuple(Y), tuple(spec), census, masks,
                           monotone, level, tuple(free), cat, C_f.size)


def build_restriction(tt: Sequence[int], C_f: HeuristicCircuit, G: BipartiteGraph,
                      s: int | None = None, eliminate: bool = True, loose: bool = False) -> RestrictionPlan:
    """Plan for Circuit_s(f).  s=None uses the exact scaffold size.

    ``eliminate=False`` keeps every evaluation variable and ``loose=True``
    additionally leaves constval(1,1) unset (which implies no elimination,
    since the first Y-gate is then no longer a function of Y alone).  Both
    exist to exercise the checks on plans that are not fully restricted.
    """
    tt = tuple(int(x) for x in tt)
    n = len(tt).bit_length() - 1
    if n != G.n or C_f.n != n:
        raise BadParameters("truth table, heuristic and graph disagree on n")
    verdict = heuristic_contract_check(C_f, tt, C_f.t_bound)
    if not verdict:
        raise CoverageViolation(f"heuristic contract fails: {verdict.reason} {verdict.witness or ''}")
    if loose:
        eliminate = False
    L = general_scaffold(C_f, G, s)
    valid = truth_table(C_f.circuit, 0)
    spec = tuple(Fixed(tt[al]) if valid[al] else Parity(G.adj[al]) for al in range(2 ** n))
    return _plan(tt, L, G, spec, L.size, {}, False, None, C_f, eliminate, loose)


def build_monotone_restriction(tt: Sequence[int], C_f: HeuristicCircuit, G: BipartiteGraph,
                               s: int | None, level: int) -> RestrictionPlan:
    tt = tuple(int(x) for x in tt)
    n = len(tt).bit_length() - 1
    sv = slice_function_check(tt, level)
    if not sv:
        raise NotSliceFunction(f"f is not a {level}-slice function", sv.witness)
    verdict = heuristic_contract_check(C_f, tt, C_f.t_bound, level)
    if not verdict:
        raise CoverageViolation(f"heuristic contract fails on the slice: {verdict.reason}")
    L = monotone_scaffold(C_f, G, s, level)
    m = G.m
    ybar = {m + i: i for i in range(1, m + 1)}
    valid = truth_table(C_f.circuit, 0)
    spec = []
    for al in range(2 ** n):
        w = weight(al)
        if w > level:
            spec.append(Fixed(1))
        elif w < level:
            spec.append(Fixed(0))
        elif valid[al]:
            spec.append(Fixed(tt[al]))
        else:
            spec.append(Parity(G.adj[al]))
    return _plan(tt, L, G, tuple(spec), L.size, ybar, True, level, C_f)


def scaffold_with_beta(plan: RestrictionPlan, beta: Sequence[int]) -> CircuitIR:
    """The concrete circuit obtained by fixing Y = β."""
    m = plan.m
    gates = list(plan.scaffold.gates)
    for i in range(m):
        gates[i] = Gate("OR", ZERO, Const(beta[i]))
        if plan.monotone:
            gates[m + i] = Gate("OR", ZERO, Const(1 - beta[i]))
    return CircuitIR(plan.scaffold.n_inputs, tuple(gates))


def hand_census(plan: RestrictionPlan) -> int:
    """m + 3 per χ-chain step that combines two active guards (walks the spec)."""
    total = plan.m
    for g in plan.gout_spec:
        if isinstance(g, Parity):
            total += 3 * max(0, len(g.nbrs) - 1)
    return total


# ---------------------------------------------------------------- checks

def apply_restriction(P: PolySystem, rho: dict) -> PolySystem:
    return restrict_system(P, rho)


def base_formula(plan: RestrictionPlan) -> PolySystem:
    """Circuit_s(f) (or its monotone restriction) without the correctness axioms."""
    P = gen_circuit_formula(plan.tt, plan.s, plan.catalog)
    if plan.monotone:
        P = restrict_system(P, monotone_tau(plan.catalog))
    return P.without(["ax-correct"])


def _completions(plan: RestrictionPlan, P: PolySystem | None):
    P = base_formula(plan) if P is None else P.without(["ax-correct"])
    Q = apply_restriction(P, plan.rho)
    cat = plan.catalog
    sigma = complete_substitution(plan.rho, cat)
    m = plan.m
    if 2 ** m > limits().completions:
        raise TooLarge("too many β assignments")
    solver_vars = Q.variables() | set(plan.Y)
    base = sorted({cat.base(x) for x in solver_vars})
    order = topological_order(plan)
    out = {}
    for beta in product((0, 1), repeat=m):
        assume = dict(zip(plan.Y, beta))
        S = Solver(Q, order=order, assume=assume, variables=solver_vars)
        out[beta] = S.all_solutions(project=base)
    return out, base, sigma


def topological_order(plan: RestrictionPlan) -> list:
    """Structure variables first, then evaluation variables wire by wire."""
    cat = plan.catalog
    order = [x for x in cat.base_ids() if cat.is_structure(x)]
    for al in range(2 ** plan.n):
        for v in range(1, plan.s + 1):
            order += [cat.v("inwire", v, 1, al), cat.v("inwire", v, 2, al), cat.v("outwire", v, al)]
    return order


def _image_value(x: int, sigma: dict, vals: dict, cat: VarCatalog):
    img = sigma.get(x, Polynomial.var(x))
    if not isinstance(img, Polynomial):
        return img
    full = dict(vals)
    full.update({cat.bar(v): 1 - b for v, b in vals.items()})
    return img.evaluate(full)


@dataclass
class IndependenceVerdict:
    ok: bool
    mapping: dict           # β -> truth table (or list of tables when not unique)
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_m_independent(plan: RestrictionPlan, P: PolySystem | None = None) -> IndependenceVerdict:
    """Every β must extend to exactly one truth table."""
    sols, base, sigma = _completions(plan, P)
    cat = plan.catalog
    outs = [cat.v("outwire", plan.s, al) for al in range(2 ** plan.n)]
    mapping = {}
    ok = True
    reason = ""
    for beta, lst in sols.items():
        tables = set()
        for tup in lst:
            vals = dict(zip(base, tup))
            tables.add(tuple(_image_value(o, sigma, vals, cat) for o in outs))
        if len(tables) != 1:
            ok = False
            reason = reason or f"β={beta} admits {len(tables)} truth tables"
            mapping[beta] = sorted(tables)
        else:
            mapping[beta] = tables.pop()
    return IndependenceVerdict(ok, mapping, reason)


def mobius(mask: int, support: Sequence[int], m: int, Y: Sequence[int]) -> Polynomial:
    """Multilinear polynomial over Y[support] agreeing with the β-function mask."""
    k = len(support)
    vals = {}
    for bits in product((0, 1), repeat=k):
        idx = 0
        for i, b in zip(support, bits):
            if b:
                idx |= 1 << (m - i)
        vals[bits] = (mask >> idx) & 1
    coef = dict(vals)
    for j in range(k):
        for bits in list(coef):
            if bits[j]:
                lo = bits[:j] + (0,) + bits[j + 1:]
                coef[bits] = coef[bits] - coef[lo]
    terms = {}
    for bits, c in coef.items():
        if c:
            terms[tuple(Y[i - 1] for i, b in zip(support, bits) if b)] = c
    return Polynomial(terms)


def mask_support(mask: int, m: int) -> list:
    out = []
    W = 2 ** m
    for i in range(1, m + 1):
        bit = 1 << (m - i)
        for idx in range(W):
            if not idx & bit and ((mask >> idx) & 1) != ((mask >> (idx | bit)) & 1):
                out.append(i)
                break
    return out


def check_k_determined(plan: RestrictionPlan, P: PolySystem | None = None, k: int | None = None,
                       check_completions: bool = True) -> dict:
    """g-polynomials of every evaluation variable; raises SupportTooLarge."""
    k = plan.graph.k if k is None else k
    m = plan.m
    lim = limits().interp_support
    gs = {}
    for key, mask in plan.wire_masks.items():
        sup = mask_support(mask, m)
        if len(sup) > k:
            raise SupportTooLarge(f"{key} depends on {len(sup)} > {k} variables of Y", key)
        if len(sup) > lim:
            raise TooLarge("interpolation support too large")
        gs[key] = mobius(mask, sup, m, plan.Y)
    if check_completions:
        sols, base, sigma = _completions(plan, P)
        cat = plan.catalog
        for beta, lst in sols.items():
            if not lst:
                raise AssertionError(f"no completion for β={beta}")
            yv = dict(zip(plan.Y, beta))
            for tup in lst:
                vals = dict(zip(base, tup))
                for key, g in gs.items():
                    if _image_value(cat.id(key), sigma, vals, cat) != g.evaluate(yv):
                        raise AssertionError(f"{key} disagrees with its g-polynomial at β={beta}")
    return gs


def parity_polynomial(nbrs: Sequence[int], Y: Sequence[int]) -> Polynomial:
    """Multilinear form of ⊕_{i∈N} y_i: Σ_{∅≠S⊆N} (−2)^{|S|−1} Π_{i∈S} y_i."""
    terms = {}
    nb = list(nbrs)
    for bits in product((0, 1), repeat=len(nb)):
        S = [Y[i - 1] for i, b in zip(nb, bits) if b]
        if S:
            terms[tuple(S)] = (-2) ** (len(S) - 1)
    return Polynomial(terms)


@dataclass
class LiftResult:
    rho_hat: dict
    P: PolySystem
    Q: list           # (tag, polynomial, witness)


def lift_to_hat(plan: RestrictionPlan, P: PolySystem | None = None, gs: dict | None = None) -> LiftResult:
    """ρ̂ = ρ with bars eliminated and evaluation variables replaced by g."""
    cat = plan.catalog
    if gs is None:
        gs = check_k_determined(plan, P, check_completions=False)
    if P is None:
        P = gen_circuit_formula(plan.tt, plan.s, cat)
        if plan.monotone:
            P = restrict_system(P, monotone_tau(cat))
    rho_hat: dict = {}
    for v, img in plan.rho.items():
        if cat.is_evaluation(v):
            continue
        if isinstance(img, Polynomial):
            x = img.single_var()
            img = 1 - Polynomial.var(cat.base(x)) if cat.is_bar(x) else img
        rho_hat[v] = img
        rho_hat[cat.bar(v)] = 1 - img if isinstance(img, Polynomial) else 1 - img
    for y in plan.Y:
        rho_hat[cat.bar(y)] = 1 - Polynomial.var(y)
    for key, g in gs.items():
        x = cat.id(key)
        rho_hat[x] = g
        rho_hat[cat.bar(x)] = 1 - g
    Ps, Qs = [], []
    ybases = set(plan.Y)
    from .formulas import Axiom
    from .polynomials import CompiledSubstitution
    comp = CompiledSubstitution(rho_hat)
    for ax in P.axioms:
        q = substitute(ax.poly, comp, None, multilinear=False, complete=False)
        if not q:
            continue
        fam = ax.family
        if fam == "ax-correct" or (fam == "bool" and q.variables() <= ybases and ax.poly.variables() <= ybases):
            Ps.append(Axiom(ax.tag, q))
            continue
        try:
            wit = decompose_boolean_zero(q)
        except NotBooleanZero as e:
            raise QAxiomNotBooleanZero(f"{ax.tag} does not vanish on the cube at {e.point}") from None
        Qs.append((ax.tag, q, wit))
    return LiftResult(rho_hat, PolySystem(cat, tuple(Ps), {"kind": "lifted"}), Qs)


def restricted_xor_system(plan: RestrictionPlan) -> PolySystem:
    """Φ(G, f) restricted to the inputs whose output is a parity."""
    us = [al for al, g in enumerate(plan.gout_spec) if isinstance(g, Parity)]
    return gen_xor_system(plan.graph, plan.tt, constraints=us)


def plan_formula_sat(plan: RestrictionPlan, P: PolySystem | None = None):
    """Exhaustive satisfiability of Circuit_s(f)↾ρ over all 2^m values of Y."""
    if P is None:
        P = gen_circuit_formula(plan.tt, plan.s, plan.catalog)
        if plan.monotone:
            P = restrict_system(P, monotone_tau(plan.catalog))
    Q = apply_restriction(P, plan.rho)
    vs = Q.variables() | set(plan.Y)
    for beta in product((0, 1), repeat=plan.m):
        r = Solver(Q, assume=dict(zip(plan.Y, beta)), variables=vs).solve()
        if r.sat:
            return True, beta
    return False, None
