"""Gate-list circuits over {NEG, OR, AND}, a hash-consing builder, and the
slice/monotone transforms.

Conventions
-----------
* Inputs ``alpha`` are bit tuples ``(a_1, ..., a_n)``.  Truth tables are
  tuples of length 2^n indexed by ``sum(a_i * 2^(n-i))``, i.e. ``a_1`` is
  the most significant bit and inputs are listed lexicographically.
* A wire is ``Wire(kind, index)`` with kind ``'const' | 'var' | 'gate'``;
  variables and gates are 1-based.
* NEG gates carry ``in2 = None``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

from .config import limits
from .errors import BadLevel, BudgetExceeded, InputTooLarge, NotSliceFunction

OPS = ("NEG", "OR", "AND")


class Wire(NamedTuple):
    kind: str
    index: int

    def __repr__(self):
        return {"const": "C", "var": "x", "gate": "g"}[self.kind] + str(self.index)


def Const(b: int) -> Wire:
    return Wire("const", int(b))


def Var(i: int) -> Wire:
    return Wire("var", i)


def GateRef(u: int) -> Wire:
    return Wire("gate", u)


ZERO = Const(0)
ONE = Const(1)


@dataclass(frozen=True)
class Gate:
    op: str
    in1: Wire
    in2: Wire | None = None

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown op {self.op}")
        if (self.op == "NEG") != (self.in2 is None):
            raise ValueError(f"{self.op} gate with wrong arity")


@dataclass(frozen=True)
class CircuitIR:
    n_inputs: int
    gates: tuple
    outputs: tuple | None = None  # defaults to (last gate,)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for v, g in enumerate(self.gates, start=1):
            for w in (g.in1, g.in2):
                if w is None:
                    continue
                _check_wire(w, self.n_inputs, v)
        if self.outputs is None:
            if not self.gates:
                raise ValueError("a circuit needs at least one gate")
        else:
            object.__setattr__(self, "outputs", tuple(self.outputs))
            for w in self.outputs:
                _check_wire(w, self.n_inputs, len(self.gates) + 1)

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def output_wires(self) -> tuple:
        return self.outputs if self.outputs is not None else (GateRef(self.size),)

    def neg_count(self) -> int:
        return sum(g.op == "NEG" for g in self.gates)

    def to_json(self) -> dict:
        d = {"n": self.n_inputs, "gates": [_gate_json(g) for g in self.gates]}
        if self.outputs is not None:
            d["outputs"] = [_wire_json(w) for w in self.outputs]
        return d

    @classmethod
    def from_json(cls, d) -> "CircuitIR":
        if isinstance(d, str):
            d = json.loads(d)
        gates = []
        for g in d["gates"]:
            in2 = _wire_from(g["in2"]) if g.get("in2") is not None and g["op"] != "NEG" else None
            gates.append(Gate(g["op"], _wire_from(g["in1"]), in2))
        outs = d.get("outputs")
        return cls(d["n"], tuple(gates),
                   tuple(_wire_from(w) for w in outs) if outs is not None else None)


def _check_wire(w: Wire, n: int, v: int):
    if w.kind == "const":
        ok = w.index in (0, 1)
    elif w.kind == "var":
        ok = 1 <= w.index <= n
    elif w.kind == "gate":
        ok = 1 <= w.index < v
    else:
        ok = False
    if not ok:
        raise ValueError(f"bad wire {w!r} at gate {v}")


def _wire_json(w: Wire) -> dict:
    return {w.kind: w.index}


def _wire_from(d) -> Wire:
    (k, i), = d.items()
    return Wire(k, int(i))


def _gate_json(g: Gate) -> dict:
    d = {"op": g.op, "in1": _wire_json(g.in1)}
    if g.in2 is not None:
        d["in2"] = _wire_json(g.in2)
    return d


# ---------------------------------------------------------------- truth tables

def alpha_index(alpha: Sequence[int]) -> int:
    idx = 0
    for a in alpha:
        idx = 2 * idx + a
    return idx


def alpha_bits(idx: int, n: int) -> tuple:
    return tuple((idx >> (n - i)) & 1 for i in range(1, n + 1))


def all_alphas(n: int):
    return [alpha_bits(i, n) for i in range(2 ** n)]


def weight(idx: int) -> int:
    return bin(idx).count("1")


def tt_from_hex(hexstr: str, n: int) -> tuple:
    """Hex digits read left to right give f(α_0), f(α_1), ...; padded to 2^n bits."""
    size = 2 ** n
    hexstr = hexstr.lower().removeprefix("0x") or "0"
    bits = "".join(f"{int(ch, 16):04b}" for ch in hexstr)
    if len(bits) < size:
        bits = bits + "0" * (size - len(bits))
    if len(bits) > size and set(bits[size:]) - {"0"}:
        raise ValueError(f"truth table {hexstr!r} too long for n={n}")
    return tuple(int(b) for b in bits[:size])


def tt_to_hex(tt: Sequence[int]) -> str:
    bits = "".join(str(b) for b in tt)
    bits = bits + "0" * (-len(bits) % 4)
    return "".join(f"{int(bits[i:i + 4], 2):x}" for i in range(0, len(bits), 4))


def tt_to_mask(tt: Sequence[int]) -> int:
    return sum(1 << i for i, b in enumerate(tt) if b)


def mask_to_tt(mask: int, n: int) -> tuple:
    return tuple((mask >> i) & 1 for i in range(2 ** n))


@lru_cache(maxsize=None)
def var_masks(n: int) -> tuple:
    """Bit i of mask j is α_j at input index i."""
    out = []
    for j in range(1, n + 1):
        m = 0
        for idx in range(2 ** n):
            if (idx >> (n - j)) & 1:
                m |= 1 << idx
        out.append(m)
    return tuple(out)


# ---------------------------------------------------------------- evaluation

def _wire_val(w: Wire, alpha, vals):
    if w.kind == "const":
        return w.index
    if w.kind == "var":
        return alpha[w.index - 1]
    return vals[w.index - 1]


def eval_gates(C: CircuitIR, alpha: Sequence[int]) -> list:
    if len(alpha) != C.n_inputs:
        raise ValueError(f"expected {C.n_inputs} inputs, got {len(alpha)}")
    vals = []
    for g in C.gates:
        a = _wire_val(g.in1, alpha, vals)
        if g.op == "NEG":
            vals.append(1 - a)
        else:
            b = _wire_val(g.in2, alpha, vals)
            vals.append(a | b if g.op == "OR" else a & b)
    return vals


def eval_circuit(C: CircuitIR, alpha: Sequence[int]) -> int:
    vals = eval_gates(C, alpha)
    return _wire_val(C.output_wires[0], alpha, vals)


def eval_outputs(C: CircuitIR, alpha: Sequence[int]) -> tuple:
    vals = eval_gates(C, alpha)
    return tuple(_wire_val(w, alpha, vals) for w in C.output_wires)


def simulate_masks(C: CircuitIR, inputs: Sequence[int] | None = None, width: int | None = None):
    """Bit-parallel simulation.  Returns (gate masks, output masks)."""
    n = C.n_inputs
    if inputs is None:
        inputs = var_masks(n)
        width = 2 ** n
    full = (1 << width) - 1

    def val(w, gm):
        if w.kind == "const":
            return full if w.index else 0
        if w.kind == "var":
            return inputs[w.index - 1]
        return gm[w.index - 1]

    gm = []
    for g in C.gates:
        a = val(g.in1, gm)
        if g.op == "NEG":
            gm.append(full ^ a)
        elif g.op == "OR":
            gm.append(a | val(g.in2, gm))
        else:
            gm.append(a & val(g.in2, gm))
    return gm, [val(w, gm) for w in C.output_wires]


def truth_table(C: CircuitIR, output: int = 0) -> tuple:
    _, outs = simulate_masks(C)
    return mask_to_tt(outs[output], C.n_inputs)


def depth(C: CircuitIR) -> int:
    d = []
    for g in C.gates:
        ws = [g.in1] if g.in2 is None else [g.in1, g.in2]
        d.append(1 + max((d[w.index - 1] if w.kind == "gate" else 0) for w in ws))
    return d[-1] if d else 0


# ---------------------------------------------------------------- builder

class CircuitBuilder:
    """Incremental construction with constant folding and hash-consing.

    ``raw`` gates bypass both (used for the Y-gates of the reduction scaffold
    and for padding).
    """

    def __init__(self, n: int, fold: bool = True):
        self.n = n
        self.fold = fold
        self.keep = 0  # leading gates never pruned
        self.gates: list[Gate] = []
        self._cache: dict = {}

    def raw(self, op, a, b=None) -> Wire:
        self.gates.append(Gate(op, a, b))
        return GateRef(len(self.gates))

    def _mk(self, op, a, b=None) -> Wire:
        if op != "NEG" and b < a:
            a, b = b, a
        key = (op, a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        w = self.raw(op, a, b)
        self._cache[key] = w
        return w

    def neg(self, a: Wire) -> Wire:
        if self.fold and a.kind == "const":
            return Const(1 - a.index)
        return self._mk("NEG", a)

    def or_(self, a: Wire, b: Wire) -> Wire:
        if self.fold:
            if a == ONE or b == ONE:
                return ONE
            if a == ZERO:
                return b
            if b == ZERO or a == b:
                return a
        return self._mk("OR", a, b)

    def and_(self, a: Wire, b: Wire) -> Wire:
        if self.fold:
            if a == ZERO or b == ZERO:
                return ZERO
            if a == ONE:
                return b
            if b == ONE or a == b:
                return a
        return self._mk("AND", a, b)

    def xor(self, a: Wire, b: Wire) -> Wire:
        """(a ∨ b) ∧ ¬(a ∧ b): the four-gate OR, AND, NEG, AND pattern."""
        if self.fold:
            if a == ZERO:
                return b
            if b == ZERO:
                return a
            if a == ONE:
                return self.neg(b)
            if b == ONE:
                return self.neg(a)
        o = self.or_(a, b)
        n = self.and_(a, b)
        return self.and_(o, self.neg(n))

    def or_all(self, ws) -> Wire:
        out = ZERO
        for w in ws:
            out = self.or_(out, w)
        return out

    def and_all(self, ws) -> Wire:
        out = ONE
        for w in ws:
            out = self.and_(out, w)
        return out

    def embed(self, C: CircuitIR, inputs: Sequence[Wire] | None = None) -> list:
        """Copy C in; ``inputs[i-1]`` replaces x_i.  Returns C's output wires."""
        if inputs is None:
            inputs = [Var(i) for i in range(1, C.n_inputs + 1)]
        loc: list[Wire] = []

        def tr(w):
            if w.kind == "const":
                return w
            if w.kind == "var":
                return inputs[w.index - 1]
            return loc[w.index - 1]

        for g in C.gates:
            if g.op == "NEG":
                loc.append(self.neg(tr(g.in1)))
            elif g.op == "OR":
                loc.append(self.or_(tr(g.in1), tr(g.in2)))
            else:
                loc.append(self.and_(tr(g.in1), tr(g.in2)))
        return [tr(w) for w in C.output_wires]

    def build(self, output: Wire, pad_to: int | None = None, prune: bool = True) -> CircuitIR:
        """Finish with ``output`` as the last gate (padding goes before it)."""
        gates = list(self.gates)
        if output.kind != "gate" or output.index != len(gates):
            gates.append(Gate("OR", output, ZERO))
        if prune:
            gates = _prune(gates, [GateRef(len(gates))], keep=self.keep)[0]
        if pad_to is not None:
            if len(gates) > pad_to:
                raise BudgetExceeded(f"circuit has {len(gates)} gates, budget {pad_to}")
            if len(gates) <= self.keep and len(gates) < pad_to:
                gates.append(Gate("OR", GateRef(len(gates)), ZERO))
            last = gates[-1]
            gates = gates[:-1] + [Gate("OR", ZERO, ZERO)] * (pad_to - len(gates)) + [last]
        return CircuitIR(self.n, tuple(gates))

    def build_multi(self, outputs: Sequence[Wire], prune: bool = True) -> CircuitIR:
        gates = list(self.gates)
        outs = list(outputs)
        if prune:
            gates, outs = _prune(gates, outs, keep=self.keep)
        return CircuitIR(self.n, tuple(gates), tuple(outs))


def _prune(gates, outputs, keep=0):
    """Drop gates not reachable from the outputs (the first ``keep`` stay)."""
    live = set()
    stack = [w.index for w in outputs if w.kind == "gate"] + list(range(1, keep + 1))
    while stack:
        u = stack.pop()
        if u in live:
            continue
        live.add(u)
        g = gates[u - 1]
        for w in (g.in1, g.in2):
            if w is not None and w.kind == "gate" and w.index not in live:
                stack.append(w.index)
    new_idx = {}
    out = []
    for u, g in enumerate(gates, start=1):
        if u not in live:
            continue

        def tr(w):
            if w is None or w.kind != "gate":
                return w
            return GateRef(new_idx[w.index])

        out.append(Gate(g.op, tr(g.in1), tr(g.in2)))
        new_idx[u] = len(out)
    outs = [GateRef(new_idx[w.index]) if w.kind == "gate" else w for w in outputs]
    return out, outs


# ---------------------------------------------------------------- compilation

def shannon_wire(b: CircuitBuilder, tt: Sequence[int], inputs: Sequence[Wire]) -> Wire:
    """Shannon decomposition on inputs[0], inputs[1], ... with memoized subtables."""
    n = len(inputs)
    memo: dict = {}

    def rec(level, sub):
        # sub: truth table over inputs[level:], as a tuple
        if all(x == 0 for x in sub):
            return ZERO
        if all(x == 1 for x in sub):
            return ONE
        key = (level, sub)
        if key in memo:
            return memo[key]
        half = len(sub) // 2
        f0, f1 = sub[:half], sub[half:]
        x = inputs[level]
        if f0 == f1:
            w = rec(level + 1, f0)
        else:
            w0 = rec(level + 1, f0)
            w1 = rec(level + 1, f1)
            if w0 == ZERO and w1 == ONE:
                w = x
            elif w0 == ONE and w1 == ZERO:
                w = b.neg(x)
            elif w0 == ZERO:
                w = b.and_(x, w1)
            elif w1 == ONE:
                w = b.or_(x, w0)
            elif w1 == ZERO:
                w = b.and_(b.neg(x), w0)
            elif w0 == ONE:
                w = b.or_(b.neg(x), w1)
            else:
                w = b.or_(b.and_(x, w1), b.and_(b.neg(x), w0))
        memo[key] = w
        return w

    if len(tt) != 2 ** n:
        raise ValueError("truth table length must be 2^n")
    return rec(0, tuple(tt))


def compile_function(tt: Sequence[int], n: int | None = None) -> CircuitIR:
    tt = tuple(int(x) for x in tt)
    if n is None:
        n = max(0, len(tt).bit_length() - 1)
    if len(tt) != 2 ** n:
        raise ValueError("truth table length must be a power of two")
    if n > limits().compile_n:
        raise InputTooLarge(f"n={n} exceeds compile bound {limits().compile_n}")
    b = CircuitBuilder(n)
    w = shannon_wire(b, tt, [Var(i) for i in range(1, n + 1)])
    C = b.build(w)
    assert C.size <= 2 * 2 ** n, C.size
    assert truth_table(C) == tt
    return C


# ---------------------------------------------------------------- thresholds

def threshold_wire(b: CircuitBuilder, xs: Sequence[Wire], level: int, strict: bool = False) -> Wire:
    """Monotone T_{≥level} (T_{>level} if strict) over the given wires."""
    if strict:
        level += 1
    if level <= 0:
        return ONE
    if level > len(xs):
        return ZERO
    # t[j] = [at least j of the inputs seen so far are 1]
    t = [ONE] + [ZERO] * level
    for x in xs:
        for j in range(level, 0, -1):
            t[j] = b.or_(t[j], b.and_(t[j - 1], x))
    return t[level]


def threshold_circuit(n: int, level: int, strict: bool = False) -> CircuitIR:
    if not 0 <= level <= n:
        raise BadLevel(f"level {level} outside [0, {n}]")
    b = CircuitBuilder(n)
    return b.build(threshold_wire(b, [Var(i) for i in range(1, n + 1)], level, strict))


def clamp_wire(b: CircuitBuilder, w: Wire, xs: Sequence[Wire], level: int) -> Wire:
    return b.or_(b.and_(w, threshold_wire(b, xs, level)), threshold_wire(b, xs, level, strict=True))


def clamp_to_slice(C: CircuitIR, level: int) -> CircuitIR:
    """(C ∧ T_{≥ℓ}) ∨ T_{>ℓ}.  Keeps whatever NEG gates C has."""
    n = C.n_inputs
    if not 0 <= level <= n:
        raise BadLevel(f"level {level} outside [0, {n}]")
    b = CircuitBuilder(n)
    out, = b.embed(C)[:1]
    xs = [Var(i) for i in range(1, n + 1)]
    return b.build(clamp_wire(b, out, xs, level))


# ---------------------------------------------------------------- monotone

def slice_rails(b: CircuitBuilder, C: CircuitIR, level: int, inputs: Sequence[Wire] | None = None):
    """Dual-rail NEG-free copy of C that is exact on the ℓ-slice.

    Returns one ``(pos, neg)`` pair per output of C.  On weight-ℓ inputs,
    ``pos`` equals the output and ``neg`` its complement.  Negations are
    pushed to the literals; ¬x_i is replaced by T_{≥ℓ} over the other
    inputs.  Nothing is clamped here.
    """
    n = C.n_inputs
    if inputs is None:
        inputs = [Var(i) for i in range(1, n + 1)]
    neg_lit: dict = {}

    def lit_neg(i):
        if i not in neg_lit:
            others = [inputs[j] for j in range(n) if j != i - 1]
            neg_lit[i] = threshold_wire(b, others, level)
        return neg_lit[i]

    rails: list = []

    def rail(w, want):  # want 0 -> pos, 1 -> neg
        if w.kind == "const":
            return Const(w.index ^ want)
        if w.kind == "var":
            return inputs[w.index - 1] if not want else lit_neg(w.index)
        return rails[w.index - 1][want]()

    for g in C.gates:
        rails.append(_lazy_rails(b, g, rail))
    return [(rail(w, 0), rail(w, 1)) for w in C.output_wires]


def _lazy_rails(b, g, rail):
    cache = {}

    def pos():
        if 0 not in cache:
            if g.op == "NEG":
                cache[0] = rail(g.in1, 1)
            elif g.op == "OR":
                cache[0] = b.or_(rail(g.in1, 0), rail(g.in2, 0))
            else:
                cache[0] = b.and_(rail(g.in1, 0), rail(g.in2, 0))
        return cache[0]

    def neg():
        if 1 not in cache:
            if g.op == "NEG":
                cache[1] = rail(g.in1, 0)
            elif g.op == "OR":
                cache[1] = b.and_(rail(g.in1, 1), rail(g.in2, 1))
            else:
                cache[1] = b.or_(rail(g.in1, 1), rail(g.in2, 1))
        return cache[1]

    return (pos, neg)


def is_slice_function(tt: Sequence[int], n: int, level: int):
    """Return None if tt is an ℓ-slice function, else a violating input index."""
    for idx, v in enumerate(tt):
        w = weight(idx)
        if (w < level and v != 0) or (w > level and v != 1):
            return idx
    return None


def monotonize_slice(C: CircuitIR, level: int) -> CircuitIR:
    n = C.n_inputs
    if not 0 <= level <= n:
        raise BadLevel(f"level {level} outside [0, {n}]")
    bad = is_slice_function(truth_table(C), n, level)
    if bad is not None:
        raise NotSliceFunction(f"circuit is not a {level}-slice function (input {alpha_bits(bad, n)})",
                               alpha_bits(bad, n))
    return to_slice(C, level)


def to_slice(C: CircuitIR, level: int) -> CircuitIR:
    """NEG-free circuit for the ℓ-slice function agreeing with C on the slice."""
    n = C.n_inputs
    b = CircuitBuilder(n)
    (pos, _), = slice_rails(b, C, level)[:1]
    xs = [Var(i) for i in range(1, n + 1)]
    out = b.build(clamp_wire(b, pos, xs, level))
    assert out.neg_count() == 0
    return out


def dual_rail_xor(b: CircuitBuilder, p1, n1, p2, n2):
    """(pos, neg) rails of x1 ⊕ x2 without NEG gates."""
    pos = b.and_(b.or_(p1, p2), b.or_(n1, n2))
    neg = b.or_(b.and_(n1, n2), b.and_(p1, p2))
    return pos, neg


def dual_rail_xor_chain(b: CircuitBuilder, pos: Sequence[Wire], neg: Sequence[Wire]):
    """Fold dual_rail_xor over the rails; returns (pos, neg) of the parity."""
    if len(pos) != len(neg):
        raise ValueError("rail lists differ in length")
    if not pos:
        return ZERO, ONE
    p, q = pos[0], neg[0]
    for p2, q2 in zip(pos[1:], neg[1:]):
        p, q = dual_rail_xor(b, p, q, p2, q2)
    return p, q


def dual_rail_xor_circuit(m: int) -> CircuitIR:
    """Standalone chain on 2m inputs: x_{2i-1} is rail i positive, x_{2i} negative."""
    b = CircuitBuilder(2 * m)
    p, _ = dual_rail_xor_chain(b, [Var(2 * i - 1) for i in range(1, m + 1)],
                               [Var(2 * i) for i in range(1, m + 1)])
    return b.build(p)


# ---------------------------------------------------------------- structure assignment

def layout_for_budget(C: CircuitIR, s: int) -> CircuitIR:
    """Pad C to exactly s gates: padding OR(0,0) gates go before the output gate."""
    if C.size > s:
        raise BudgetExceeded(f"circuit of size {C.size} exceeds budget {s}")
    if C.size == s:
        return C
    gates = list(C.gates)
    last = gates.pop()
    gates += [Gate("OR", ZERO, ZERO)] * (s - C.size)
    gates.append(last)
    return CircuitIR(C.n_inputs, tuple(gates))


def gate_structure(v: int, g: Gate, n: int) -> dict:
    """Structure-variable values realizing gate g at position v."""
    out = {("isneg", v): int(g.op == "NEG"), ("isor", v): int(g.op == "OR"),
           ("isand", v): int(g.op == "AND")}
    wires = (g.in1, g.in2 if g.in2 is not None else ZERO)
    for a, w in enumerate(wires, start=1):
        out[("isfromconst", v, a)] = int(w.kind == "const")
        out[("isfromvar", v, a)] = int(w.kind == "var")
        out[("isfromgate", v, a)] = int(w.kind == "gate")
        out[("constval", v, a)] = w.index if w.kind == "const" else 0
        sel_i = w.index if w.kind == "var" else 1
        for i in range(1, n + 1):
            out[("isvar", v, a, i)] = int(i == sel_i)
        if v > 1:
            sel_u = w.index if w.kind == "gate" else 1
            for u in range(1, v):
                out[("isgate", v, a, u)] = int(u == sel_u)
    return out


def circuit_to_structure_assignment(C: CircuitIR, s: int) -> dict:
    """Map structure-variable keys to bits realizing C inside a size-s formula.

    Unused selector groups take their canonical default (index 1, constant
    0).  When |C| < s the output gate moves to position s and the gap is
    filled with OR(Const 0, Const 0).
    """
    L = layout_for_budget(C, s)
    out = {}
    for v, g in enumerate(L.gates, start=1):
        out.update(gate_structure(v, g, C.n_inputs))
    return out


def structure_to_circuit(values, n: int, s: int) -> CircuitIR:
    """Decode a structure assignment (key -> bit) back into a circuit."""
    gates = []
    for v in range(1, s + 1):
        ops = [op for op, fam in (("NEG", "isneg"), ("OR", "isor"), ("AND", "isand"))
               if values[(fam, v)]]
        if len(ops) != 1:
            raise ValueError(f"gate {v} has {len(ops)} operations")
        ws = []
        for a in (1, 2):
            if values[("isfromconst", v, a)]:
                ws.append(Const(values[("constval", v, a)]))
            elif values[("isfromvar", v, a)]:
                ws.append(Var(next(i for i in range(1, n + 1) if values[("isvar", v, a, i)])))
            else:
                ws.append(GateRef(next(u for u in range(1, v) if values[("isgate", v, a, u)])))
        gates.append(Gate(ops[0], ws[0], None if ops[0] == "NEG" else ws[1]))
    return CircuitIR(n, tuple(gates))


# ---------------------------------------------------------------- heuristic circuits

@dataclass(frozen=True)
class HeuristicCircuit:
    """Two-output circuit: output 1 is the validity bit, output 2 the value."""
    circuit: CircuitIR
    t_bound: int

    def __post_init__(self):
        if len(self.circuit.output_wires) != 2:
            raise ValueError("a heuristic circuit has exactly two outputs")

    @property
    def n(self) -> int:
        return self.circuit.n_inputs

    @property
    def size(self) -> int:
        return self.circuit.size

    def answer(self, alpha):
        """The committed bit, or None for ⊥."""
        valid, value = eval_outputs(self.circuit, alpha)
        return value if valid else None

    def validity_table(self) -> tuple:
        return truth_table(self.circuit, 0)

    def value_table(self) -> tuple:
        return truth_table(self.circuit, 1)

    def to_json(self) -> dict:
        return {"circuit": self.circuit.to_json(), "t_bound": self.t_bound}

    @classmethod
    def from_json(cls, d) -> "HeuristicCircuit":
        if isinstance(d, str):
            d = json.loads(d)
        return cls(CircuitIR.from_json(d["circuit"]), d["t_bound"])


def trivial_heuristic(n: int) -> HeuristicCircuit:
    """Always ⊥."""
    return HeuristicCircuit(CircuitIR(n, (), (ZERO, ZERO)), 2 ** n)


def partial_heuristic(tt: Sequence[int], known: Sequence[int]) -> HeuristicCircuit:
    """Commits to tt exactly on the input indices in ``known``."""
    n = len(tt).bit_length() - 1
    known = set(known)
    b = CircuitBuilder(n)
    xs = [Var(i) for i in range(1, n + 1)]
    valid = shannon_wire(b, [int(i in known) for i in range(2 ** n)], xs)
    value = shannon_wire(b, [tt[i] if i in known else 0 for i in range(2 ** n)], xs)
    return HeuristicCircuit(b.build_multi([valid, value]), 2 ** n - len(known))
