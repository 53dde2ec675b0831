"""Generators for the circuit-size formulas, their CNF variant and XOR systems.

Variable keys are tuples such as ``("isvar", v, a, i)`` or
``("outwire", v, alpha)`` where ``alpha`` is the input index (α_1 most
significant).  Ids follow the catalog order: structure families, then the
CNF extension families, then evaluation families; inside a family keys are
sorted lexicographically.  Bar ids are base id + number of base variables.

Besides the families listed in the encoding, every system contains the
axiom ``isfromgate(1,a) = 0``: gate 1 has no gate inputs, and without it
the wires of gate 1 could take arbitrary values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, NamedTuple, Sequence

from .circuits import alpha_bits
from .errors import BadParameters, DimensionMismatch
from .polynomials import (Polynomial, VarPool, boolean_axiom, negation_axiom,
                          parse_polynomial, substitute)

STRUCTURE_FAMILIES = ("isneg", "isor", "isand", "isfromconst", "isfromvar", "isfromgate",
                      "constval", "isvar", "isgate")
EXTENSION_FAMILIES = ("isvarless", "isgateless")
EVALUATION_FAMILIES = ("outwire", "inwire")


def family_of(tag: str) -> str:
    return tag.split("(")[0].split("[")[0].split("#")[0]


class Axiom(NamedTuple):
    tag: str
    poly: Polynomial

    @property
    def family(self) -> str:
        return family_of(self.tag)


def _keys(n: int, s: int, extension: bool):
    fams: dict = {f: [] for f in STRUCTURE_FAMILIES + EXTENSION_FAMILIES + EVALUATION_FAMILIES}
    N = 2 ** n
    for v in range(1, s + 1):
        for f in ("isneg", "isor", "isand"):
            fams[f].append((f, v))
        for a in (1, 2):
            for f in ("isfromconst", "isfromvar", "isfromgate", "constval"):
                fams[f].append((f, v, a))
            for i in range(1, n + 1):
                fams["isvar"].append(("isvar", v, a, i))
                if extension:
                    fams["isvarless"].append(("isvarless", v, a, i))
            for u in range(1, v):
                fams["isgate"].append(("isgate", v, a, u))
                if extension:
                    fams["isgateless"].append(("isgateless", v, a, u))
        for al in range(N):
            fams["outwire"].append(("outwire", v, al))
            for a in (1, 2):
                fams["inwire"].append(("inwire", v, a, al))
    out = []
    for f in STRUCTURE_FAMILIES + EXTENSION_FAMILIES + EVALUATION_FAMILIES:
        out.extend(sorted(fams[f]))
    return out


class VarCatalog(VarPool):
    """Variable pool of Circuit_s(f) (with extension variables for the CNF)."""

    def __init__(self, n: int, s: int, extension: bool = False):
        if n < 1 or s < 1:
            raise BadParameters(f"need n >= 1 and s >= 1, got n={n}, s={s}")
        super().__init__(_keys(n, s, extension))
        self.n, self.s, self.extension = n, s, extension

    def v(self, *key) -> int:
        return self.id(tuple(key))

    def family_count(self, fam: str) -> int:
        return sum(1 for k in self.keys if k[0] == fam)

    def structure_count(self) -> int:
        return sum(1 for k in self.keys if k[0] in STRUCTURE_FAMILIES)

    def evaluation_count(self) -> int:
        return sum(1 for k in self.keys if k[0] in EVALUATION_FAMILIES)

    def is_structure(self, v: int) -> bool:
        return self.key(v)[0] in STRUCTURE_FAMILIES

    def is_evaluation(self, v: int) -> bool:
        return self.key(v)[0] in EVALUATION_FAMILIES


@dataclass(frozen=True)
class PolySystem:
    pool: VarPool
    axioms: tuple
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        tags = [a.tag for a in self.axioms]
        if len(set(tags)) != len(tags):
            raise ValueError("duplicate axiom tags")

    def __len__(self):
        return len(self.axioms)

    def __iter__(self):
        return iter(self.axioms)

    def index(self) -> dict:
        return {a.tag: a.poly for a in self.axioms}

    def family_counts(self) -> dict:
        out: dict = {}
        for a in self.axioms:
            out[a.family] = out.get(a.family, 0) + 1
        return out

    def without(self, families: Iterable[str]) -> "PolySystem":
        fams = set(families)
        return PolySystem(self.pool, tuple(a for a in self.axioms if a.family not in fams), self.meta)

    def variables(self) -> set:
        out = set()
        for a in self.axioms:
            out |= a.poly.variables()
        return out

    def max_degree(self) -> int:
        return max((a.poly.degree() for a in self.axioms), default=0)


def bool_tag(pool: VarPool, v: int) -> str:
    return f"bool[{pool.name(v)}]"


def neg_tag(pool: VarPool, v: int) -> str:
    return f"negation[{pool.name(v)}]"


def boolean_and_negation(pool: VarPool, base_ids: Iterable[int] | None = None):
    ids = list(pool.base_ids() if base_ids is None else base_ids)
    for v in ids:
        yield Axiom(bool_tag(pool, v), boolean_axiom(v))
    for v in ids:
        yield Axiom(bool_tag(pool, pool.bar(v)), boolean_axiom(pool.bar(v)))
    for v in ids:
        yield Axiom(neg_tag(pool, v), negation_axiom(v, pool.bar(v)))


# ---------------------------------------------------------------- Circuit_s(f)

def _check_tt(tt: Sequence[int]) -> int:
    n = len(tt).bit_length() - 1
    if n < 1 or len(tt) != 2 ** n or any(b not in (0, 1) for b in tt):
        raise BadParameters("truth table must be a 0/1 vector of length 2^n, n >= 1")
    return n


def iter_circuit_axioms(tt: Sequence[int], s: int, cat: VarCatalog):
    """Yield the axioms of Circuit_s(f) in canonical order."""
    n = cat.n
    N = 2 ** n
    X = cat.v
    P = Polynomial.var

    def bar(v):
        return P(cat.bar(v))

    for v in range(1, s + 1):
        for a in (1, 2):
            yield Axiom(f"ax-from({v},{a})", P(X("isfromconst", v, a)) + P(X("isfromvar", v, a))
                        + P(X("isfromgate", v, a)) - 1)
    for v in range(1, s + 1):
        yield Axiom(f"ax-fn({v})", P(X("isneg", v)) + P(X("isor", v)) + P(X("isand", v)) - 1)
    for v in range(1, s + 1):
        for a in (1, 2):
            yield Axiom(f"ax-in-gt({v},{a})",
                        Polynomial({(X("isvar", v, a, i),): 1 for i in range(1, n + 1)}) - 1)
    for v in range(2, s + 1):
        for a in (1, 2):
            yield Axiom(f"ax-in-gt2({v},{a})",
                        Polynomial({(X("isgate", v, a, u),): 1 for u in range(1, v)}) - 1)
    for a in (1, 2):
        yield Axiom(f"no-gate-in(1,{a})", P(X("isfromgate", 1, a)))
    for v in range(1, s + 1):
        for a in (1, 2):
            for i, j in combinations(range(1, n + 1), 2):
                yield Axiom(f"prod-zero-in({v},{a},{i},{j})",
                            Polynomial.mono((X("isvar", v, a, i), X("isvar", v, a, j))))
    for v in range(1, s + 1):
        for a in (1, 2):
            for u, u2 in combinations(range(1, v), 2):
                yield Axiom(f"prod-zero-gate({v},{a},{u},{u2})",
                            Polynomial.mono((X("isgate", v, a, u), X("isgate", v, a, u2))))
    for v in range(1, s + 1):
        for a in (1, 2):
            fc, fv, fg, cv = (X("isfromconst", v, a), X("isfromvar", v, a),
                              X("isfromgate", v, a), X("constval", v, a))
            for al in range(N):
                w = X("inwire", v, a, al)
                yield Axiom(f"inwire-const({v},{a},{al})", Polynomial({(fc, w): 1, (fc, cv): -1}))
            for i in range(1, n + 1):
                iv = X("isvar", v, a, i)
                for al in range(N):
                    w = X("inwire", v, a, al)
                    bit = alpha_bits(al, n)[i - 1]
                    yield Axiom(f"inwire-var({v},{a},{i},{al})",
                                Polynomial({(fv, iv, w): 1, (fv, iv): -bit}))
            for u in range(1, v):
                ig = X("isgate", v, a, u)
                for al in range(N):
                    w = X("inwire", v, a, al)
                    o = X("outwire", u, al)
                    yield Axiom(f"inwire-gate({v},{a},{u},{al})",
                                Polynomial({(fg, ig, w): 1, (fg, ig, o): -1}))
    for v in range(1, s + 1):
        ng, og, ag = X("isneg", v), X("isor", v), X("isand", v)
        for al in range(N):
            out = X("outwire", v, al)
            i1, i2 = X("inwire", v, 1, al), X("inwire", v, 2, al)
            b1, b2 = cat.bar(i1), cat.bar(i2)
            yield Axiom(f"ax-neg({v},{al})", Polynomial({(ng, out): 1, (ng, b1): -1}))
            yield Axiom(f"ax-or({v},{al})", Polynomial({(og, out): 1, (og,): -1, (og, b1, b2): 1}))
            yield Axiom(f"ax-and({v},{al})", Polynomial({(ag, out): 1, (ag, i1, i2): -1}))
    for al in range(N):
        yield Axiom(f"ax-correct({al})", P(X("outwire", s, al)) - tt[al])
    yield from boolean_and_negation(cat)


def gen_circuit_formula(tt: Sequence[int], s: int, catalog: VarCatalog | None = None) -> PolySystem:
    tt = tuple(int(b) for b in tt)
    n = _check_tt(tt)
    if s < 1:
        raise BadParameters("s must be >= 1")
    cat = catalog or VarCatalog(n, s)
    return PolySystem(cat, tuple(iter_circuit_axioms(tt, s, cat)),
                      {"kind": "circuit", "n": n, "s": s, "tt": tt})


def expected_family_counts(n: int, s: int) -> dict:
    """Closed forms from the quantifier ranges of each axiom family."""
    N = 2 ** n
    V = (3 * s + 6 * s + 2 * s + 2 * s * n + 2 * comb(s, 2)) + 3 * s * N
    return {
        "ax-from": 2 * s, "ax-fn": s, "ax-in-gt": 2 * s, "ax-in-gt2": 2 * (s - 1),
        "no-gate-in": 2,
        "prod-zero-in": 2 * s * comb(n, 2), "prod-zero-gate": 2 * comb(s, 3),
        "inwire-const": 2 * s * N, "inwire-var": 2 * s * n * N, "inwire-gate": 2 * comb(s, 2) * N,
        "ax-neg": s * N, "ax-or": s * N, "ax-and": s * N, "ax-correct": N,
        "bool": 2 * V, "negation": V,
    }


def restrict_system(P: PolySystem, rho: dict, drop_zero: bool = True) -> PolySystem:
    """Formal substitution of every axiom; "0 = 0" axioms are dropped."""
    from .polynomials import CompiledSubstitution, complete_substitution
    sigma = CompiledSubstitution(complete_substitution(rho, P.pool))
    out = []
    for ax in P.axioms:
        q = substitute(ax.poly, sigma, P.pool, multilinear=False, complete=False)
        if q or not drop_zero:
            out.append(Axiom(ax.tag, q))
    return PolySystem(P.pool, tuple(out), dict(P.meta))


def monotone_tau(cat: VarCatalog) -> dict:
    return {cat.v("isneg", v): 0 for v in range(1, cat.s + 1)}


def gen_monotone_formula(tt: Sequence[int], s: int):
    """Circuit_s(f) restricted by τ = {isneg(v) → 0}.  Returns (system, τ)."""
    P = gen_circuit_formula(tt, s)
    tau = monotone_tau(P.pool)
    Q = restrict_system(P, tau)
    Q.meta["kind"] = "monotone"
    return Q, tau


# ---------------------------------------------------------------- CNF

@dataclass(frozen=True)
class CnfFormula:
    catalog: VarCatalog
    clauses: tuple        # of (tag, literals); literal = ±base id
    meta: dict = field(default_factory=dict, compare=False)

    def max_width(self) -> int:
        return max((len(c) for _, c in self.clauses), default=0)

    def satisfied_by(self, values: dict) -> bool:
        """values: base id -> bit."""
        for _, c in self.clauses:
            if not any((values[abs(l)] == 1) == (l > 0) for l in c):
                return False
        return True


def _simplify(clause):
    """Literals are ints or Python bools (True/False = constant literal)."""
    out = []
    for l in clause:
        if l is True:
            return None
        if l is False:
            continue
        out.append(l)
    return tuple(out)


def iter_cnf_clauses(tt: Sequence[int], s: int, cat: VarCatalog):
    n = cat.n
    N = 2 ** n
    X = cat.v

    def group(tag, clauses):
        k = 0
        for c in clauses:
            c = _simplify(c)
            if c is None:
                continue
            yield (f"{tag}#{k}", c)
            k += 1

    def one_of(ids):
        yield tuple(ids)
        for x, y in combinations(ids, 2):
            yield (-x, -y)

    def equiv(guard, lhs, rhs_clauses_pos, rhs_clauses_neg):
        # guard -> (lhs ≡ rhs) given clause forms of rhs and ¬rhs
        for c in rhs_clauses_pos:
            yield tuple(-g for g in guard) + (-lhs,) + c
        for c in rhs_clauses_neg:
            yield tuple(-g for g in guard) + (lhs,) + c

    def lit(x, positive=True):
        if isinstance(x, bool):
            return x if positive else (not x)
        return x if positive else -x

    for v in range(1, s + 1):
        for a in (1, 2):
            yield from group(f"from({v},{a})", one_of([X("isfromconst", v, a), X("isfromvar", v, a),
                                                      X("isfromgate", v, a)]))
    for v in range(1, s + 1):
        yield from group(f"fn({v})", one_of([X("isneg", v), X("isor", v), X("isand", v)]))
    for a in (1, 2):
        yield from group(f"no-gate-in(1,{a})", [(-X("isfromgate", 1, a),)])

    def chain(tag, sel, less, top):
        cl = [(less[top],)]
        for x, y in combinations(range(1, top + 1), 2):
            cl.append((-sel[x], -sel[y]))
        for i in range(1, top + 1):
            prev = less[i - 1]
            # L_i ≡ L_{i-1} ∨ X_i
            cl.append((-less[i], lit(prev), sel[i]))
            cl.append((less[i], lit(prev, False)))
            cl.append((less[i], -sel[i]))
        return group(tag, cl)

    for v in range(1, s + 1):
        for a in (1, 2):
            sel = {i: X("isvar", v, a, i) for i in range(1, n + 1)}
            less = {0: False, **{i: X("isvarless", v, a, i) for i in range(1, n + 1)}}
            yield from chain(f"input-cnf({v},{a})", sel, less, n)
    for v in range(2, s + 1):
        for a in (1, 2):
            sel = {u: X("isgate", v, a, u) for u in range(1, v)}
            less = {0: False, **{u: X("isgateless", v, a, u) for u in range(1, v)}}
            yield from chain(f"gate-cnf({v},{a})", sel, less, v - 1)
    for v in range(1, s + 1):
        for a in (1, 2):
            fc, fv, fg, cv = (X("isfromconst", v, a), X("isfromvar", v, a),
                              X("isfromgate", v, a), X("constval", v, a))
            for al in range(N):
                w = X("inwire", v, a, al)
                yield from group(f"inwire-const({v},{a},{al})",
                                 equiv([fc], w, [(cv,)], [(-cv,)]))
            for i in range(1, n + 1):
                iv = X("isvar", v, a, i)
                for al in range(N):
                    w = X("inwire", v, a, al)
                    bit = bool(alpha_bits(al, n)[i - 1])
                    yield from group(f"inwire-var({v},{a},{i},{al})",
                                     equiv([fv, iv], w, [(bit,)], [(not bit,)]))
            for u in range(1, v):
                ig = X("isgate", v, a, u)
                for al in range(N):
                    w = X("inwire", v, a, al)
                    o = X("outwire", u, al)
                    yield from group(f"inwire-gate({v},{a},{u},{al})",
                                     equiv([fg, ig], w, [(o,)], [(-o,)]))
    for v in range(1, s + 1):
        ng, og, ag = X("isneg", v), X("isor", v), X("isand", v)
        for al in range(N):
            out = X("outwire", v, al)
            i1, i2 = X("inwire", v, 1, al), X("inwire", v, 2, al)
            yield from group(f"neg({v},{al})", equiv([ng], out, [(-i1,)], [(i1,)]))
            yield from group(f"or({v},{al})", equiv([og], out, [(i1, i2)], [(-i1,), (-i2,)]))
            yield from group(f"and({v},{al})", equiv([ag], out, [(i1,), (i2,)], [(-i1, -i2)]))
    for al in range(N):
        yield from group(f"correct({al})", [(lit(X("outwire", s, al), bool(tt[al])),)])


def gen_circuit_cnf(tt: Sequence[int], s: int) -> CnfFormula:
    tt = tuple(int(b) for b in tt)
    n = _check_tt(tt)
    if s < 1:
        raise BadParameters("s must be >= 1")
    cat = VarCatalog(n, s, extension=True)
    clauses = tuple(iter_cnf_clauses(tt, s, cat))
    assert all(len(c) <= 4 for _, c in clauses)
    return CnfFormula(cat, clauses, {"kind": "cnf", "n": n, "s": s, "tt": tt})


def clause_polynomial(clause, pool: VarPool) -> Polynomial:
    """∏ (1 − z) over the literals; a negative literal is the bar variable."""
    out = Polynomial.const(1)
    for l in clause:
        z = l if l > 0 else pool.bar(-l)
        out = out * (1 - Polynomial.var(z))
    return out


def cnf_to_polysystem(F: CnfFormula) -> PolySystem:
    axioms = [Axiom(f"cnf:{tag}", clause_polynomial(c, F.catalog)) for tag, c in F.clauses]
    axioms.extend(boolean_and_negation(F.catalog))
    return PolySystem(F.catalog, tuple(axioms), dict(F.meta, kind="cnf-poly"))


def extend_with_prefix_ors(values: dict, cat: VarCatalog) -> dict:
    """Fill isvarless/isgateless from isvar/isgate (keys -> bits)."""
    out = dict(values)
    for v in range(1, cat.s + 1):
        for a in (1, 2):
            acc = 0
            for i in range(1, cat.n + 1):
                acc |= out[("isvar", v, a, i)]
                out[("isvarless", v, a, i)] = acc
            acc = 0
            for u in range(1, v):
                acc |= out[("isgate", v, a, u)]
                out[("isgateless", v, a, u)] = acc
    return out


# ---------------------------------------------------------------- XOR systems

def xor_pool(m: int) -> VarPool:
    return VarPool([("x", v) for v in range(1, m + 1)])


def xor_axiom(pool: VarPool, nbrs: Iterable[int], b: int) -> Polynomial:
    p = Polynomial.const(1)
    for v in nbrs:
        p = p * (1 - 2 * Polynomial.var(pool.id(("x", v))))
    return p - (1 - 2 * b)


def gen_xor_system(G, b: Sequence[int], constraints: Iterable[int] | None = None) -> PolySystem:
    """Φ(G, b): one product axiom per left vertex (or per listed constraint)."""
    N = 2 ** G.n
    if len(b) != N:
        raise DimensionMismatch(f"b has length {len(b)}, expected {N}")
    pool = xor_pool(G.m)
    us = range(N) if constraints is None else sorted(constraints)
    axioms = [Axiom(f"xor({u})", xor_axiom(pool, G.adj[u], int(b[u]))) for u in us]
    axioms.extend(boolean_and_negation(pool))
    return PolySystem(pool, tuple(axioms), {"kind": "xor", "n": G.n, "m": G.m, "b": list(b)})


# ---------------------------------------------------------------- emitters

def emit_dimacs(F: CnfFormula, sink) -> None:
    sink.write(f"p cnf {F.catalog.n_base} {len(F.clauses)}\n")
    for _, c in F.clauses:
        sink.write(" ".join(str(l) for l in c) + " 0\n")


def dimacs_text(F: CnfFormula) -> str:
    import io
    buf = io.StringIO()
    emit_dimacs(F, buf)
    return buf.getvalue()


def system_to_json(obj) -> dict:
    if isinstance(obj, CnfFormula):
        return {"format": "cnf", "meta": _jsonable(obj.meta), "variables": obj.catalog.names(),
                "clauses": [{"tag": t, "lits": list(c)} for t, c in obj.clauses]}
    return {"format": "polysystem", "meta": _jsonable(obj.meta), "variables": obj.pool.names(),
            "axioms": [{"tag": a.tag, "poly": a.poly.to_text(obj.pool)} for a in obj.axioms]}


def _jsonable(meta: dict) -> dict:
    out = {}
    for k, v in meta.items():
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def emit_json(obj, sink) -> None:
    json.dump(system_to_json(obj), sink, indent=1)
    sink.write("\n")


def system_from_json(d) -> PolySystem:
    if isinstance(d, str):
        d = json.loads(d)
    if d.get("format") != "polysystem":
        raise ValueError("not a polynomial system file")
    meta = d.get("meta", {})
    if meta.get("kind") in ("circuit", "monotone") and "n" in meta:
        pool = VarCatalog(meta["n"], meta["s"])
    elif meta.get("kind") == "cnf-poly":
        pool = VarCatalog(meta["n"], meta["s"], extension=True)
    else:
        pool = VarPool.from_names(d["variables"])
    if pool.names() != d["variables"]:
        pool = VarPool.from_names(d["variables"])
    axioms = tuple(Axiom(a["tag"], parse_polynomial(a["poly"], pool)) for a in d["axioms"])
    return PolySystem(pool, axioms, meta)


# ---------------------------------------------------------------- search order

def circuit_var_order(cat: VarCatalog) -> list:
    """Gate-major order: structure of gate v, then its wires input by input."""
    order = []
    X = cat.v
    for v in range(1, cat.s + 1):
        order += [X("isneg", v), X("isor", v), X("isand", v)]
        for a in (1, 2):
            order += [X("isfromconst", v, a), X("isfromvar", v, a), X("isfromgate", v, a),
                      X("constval", v, a)]
            for i in range(1, cat.n + 1):
                order.append(X("isvar", v, a, i))
                if cat.extension:
                    order.append(X("isvarless", v, a, i))
            for u in range(1, v):
                order.append(X("isgate", v, a, u))
                if cat.extension:
                    order.append(X("isgateless", v, a, u))
        for al in range(2 ** cat.n):
            order += [X("inwire", v, 1, al), X("inwire", v, 2, al), X("outwire", v, al)]
    return order


def honest_assignment(C, cat: VarCatalog) -> dict:
    """Full assignment (base id -> bit) describing C and its wire values."""
    from .circuits import circuit_to_structure_assignment, eval_gates, layout_for_budget
    L = layout_for_budget(C, cat.s)
    vals = circuit_to_structure_assignment(L, cat.s)
    n = cat.n
    for al in range(2 ** n):
        alpha = alpha_bits(al, n)
        gv = eval_gates(L, alpha)
        for v, g in enumerate(L.gates, start=1):
            vals[("outwire", v, al)] = gv[v - 1]
            for a, w in ((1, g.in1), (2, g.in2)):
                if w is None or w.kind == "const":
                    val = w.index if w is not None else 0
                elif w.kind == "var":
                    val = alpha[w.index - 1]
                else:
                    val = gv[w.index - 1]
                vals[("inwire", v, a, al)] = val
    if cat.extension:
        vals = extend_with_prefix_ors(vals, cat)
    return {cat.id(k): b for k, b in vals.items()}
