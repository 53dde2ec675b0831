"""Brute-force ground truth: circuit size, XOR satisfiability, contracts, SAT."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .circuits import (HeuristicCircuit, alpha_bits, is_slice_function, truth_table,
                       tt_to_mask, var_masks, weight)
from .config import limits
from .errors import TooLarge
from .formulas import PolySystem, family_of


# ---------------------------------------------------------------- formula_sat

@dataclass
class SatResult:
    sat: bool
    assignment: dict | None = None   # base id -> bit
    nodes: int = 0

    def __bool__(self):
        return self.sat


class Solver:
    """Depth-first search over base variables with bar pairing.

    Each axiom is checked as soon as its last variable (in search order) is
    set.  Failed subtrees are memoized on the values of the already-set
    variables that still occur in unchecked axioms, which keeps the search
    exact while collapsing repeated states.
    """

    def __init__(self, P: PolySystem, order: Sequence[int] | None = None,
                 assume: dict | None = None, variables: Iterable[int] | None = None):
        pool = P.pool
        self.pool = pool
        present = {pool.base(v) for v in P.variables()}
        if variables is not None:
            present |= {pool.base(v) for v in variables}
        assume = {pool.base(v): (b if not pool.is_bar(v) else 1 - b) for v, b in (assume or {}).items()}
        seq = [v for v in assume if v in present]
        seen = set(seq)
        for v in list(order or []) + sorted(present):
            v = pool.base(v)
            if v in present and v not in seen:
                seq.append(v)
                seen.add(v)
        self.order = seq
        self.pos = {v: i for i, v in enumerate(seq)}
        N = len(seq)
        self.domain = [(0, 1)] * N
        for v, b in assume.items():
            if v in self.pos:
                self.domain[self.pos[v]] = (b,)
        self.unsat = False
        checks: list = [[] for _ in range(N)]
        last_of = []
        for ax in P.axioms:
            terms = []
            for mono, c in ax.poly.items():
                lits = tuple(sorted({2 * self.pos[pool.base(x)] + int(pool.is_bar(x)) for x in mono}))
                terms.append((c, lits))
            ps = {l >> 1 for _, ls in terms for l in ls}
            if not ps:
                if any(c for c, _ in terms):
                    self.unsat = True
                continue
            if len(ps) == 1:
                p = next(iter(ps))
                ok = tuple(b for b in self.domain[p] if _eval_terms(terms, _single(p, b)) == 0)
                self.domain[p] = ok
                continue
            last = max(ps)
            checks[last].append(terms)
            last_of.append((ps, last))
        if any(not d for d in self.domain):
            self.unsat = True
        self.checks = checks
        # live[d]: positions < d occurring in an axiom not yet fully assigned at depth d
        ends = [-1] * N
        for ps, last in last_of:
            for p in ps:
                if last > ends[p]:
                    ends[p] = last
        self.live = []
        for d in range(N + 1):
            self.live.append(tuple(p for p in range(d) if ends[p] >= d))

    def _run(self, want_all: bool, project=None, node_limit=None, memo=True):
        N = len(self.order)
        node_limit = node_limit or 4 * limits().completions
        if self.unsat:
            return [], 0
        vals = [0, 1] * N
        state = [0] * (N + 1)
        keys = [None] * (N + 1)
        found_at = [0] * (N + 1)
        failed: set = set()
        sols: list = []
        proj = None if project is None else [self.pos[v] for v in project if v in self.pos]
        nodes = 0
        d = 0
        checks, domain, live = self.checks, self.domain, self.live
        while d >= 0:
            if d == N:
                if proj is None:
                    sols.append({self.order[p]: vals[2 * p] for p in range(N)})
                else:
                    sols.append(tuple(vals[2 * p] for p in proj))
                if not want_all:
                    return sols, nodes
                d -= 1
                continue
            dom = domain[d]
            if state[d] >= len(dom):
                if memo and len(sols) == found_at[d] and keys[d] is not None:
                    if len(failed) < 4_000_000:
                        failed.add(keys[d])
                d -= 1
                continue
            b = dom[state[d]]
            state[d] += 1
            nodes += 1
            if nodes > node_limit:
                raise TooLarge(f"search exceeded {node_limit} nodes")
            vals[2 * d] = b
            vals[2 * d + 1] = 1 - b
            ok = True
            for terms in checks[d]:
                s = 0
                for c, lits in terms:
                    for l in lits:
                        if not vals[l]:
                            break
                    else:
                        s += c
                if s:
                    ok = False
                    break
            if not ok:
                continue
            d += 1
            if d < N:
                state[d] = 0
                found_at[d] = len(sols)
                if memo:
                    key = (d, tuple(vals[2 * p] for p in live[d]))
                    if key in failed:
                        d -= 1
                        continue
                    keys[d] = key
        return sols, nodes

    def solve(self, node_limit=None) -> SatResult:
        sols, nodes = self._run(False, node_limit=node_limit)
        if sols:
            return SatResult(True, sols[0], nodes)
        return SatResult(False, None, nodes)

    def all_solutions(self, project=None, node_limit=None) -> list:
        sols, _ = self._run(True, project=project, node_limit=node_limit)
        return sols


def _single(p, b):
    vals = {2 * p: b, 2 * p + 1: 1 - b}
    return vals


def _eval_terms(terms, vals):
    s = 0
    for c, lits in terms:
        if all(vals[l] for l in lits):
            s += c
    return s


def formula_sat(P: PolySystem, free_vars: Sequence[int] | None = None,
                order: Sequence[int] | None = None, assume: dict | None = None,
                node_limit: int | None = None) -> SatResult:
    """Exhaustive Boolean search for a common zero of all axioms.

    ``free_vars``, when given, must cover every variable of P (bars count
    through their base) and is capped by the configured free-variable limit.
    Without it the search runs over all variables of P and is bounded by a
    node budget instead.
    """
    if free_vars is not None:
        fv = {P.pool.base(v) for v in free_vars}
        lim = limits().sat_free_vars
        if len(fv) > lim:
            raise TooLarge(f"{len(fv)} free variables exceed the limit {lim}")
        missing = {P.pool.base(v) for v in P.variables()} - fv - set(assume or {})
        if missing:
            raise ValueError(f"variables outside free_vars: {sorted(missing)[:5]}")
    return Solver(P, order=order, assume=assume, variables=free_vars).solve(node_limit)


def circuit_formula_sat(P: PolySystem, node_limit=None) -> SatResult:
    """formula_sat with the gate-major order suited to circuit formulas."""
    from .formulas import circuit_var_order
    return Solver(P, order=circuit_var_order(P.pool)).solve(node_limit)


# ---------------------------------------------------------------- min_circuit_size

def _one_gate(avail: Sequence[int], full: int, monotone: bool) -> set:
    out = set()
    if not monotone:
        out.update(full ^ a for a in avail)
    for a, b in combinations(avail, 2):
        out.add(a | b)
        out.add(a & b)
    out.update(avail)  # OR(a, a)
    return out


def min_circuit_size(tt: Sequence[int], s_max: int = 4, monotone: bool = False):
    """Smallest size of a circuit computing tt, or None if it exceeds s_max.

    Level j holds the sets of j distinct intermediate functions reachable by
    j gates.  A minimal circuit never repeats a function and never computes
    a constant or an input before its output gate, so these sets cover all
    minimal circuits.
    """
    n = len(tt).bit_length() - 1
    if n > 3 or s_max > 4:
        raise TooLarge("min_circuit_size supports n <= 3 and s_max <= 4")
    full = (1 << (2 ** n)) - 1
    target = tt_to_mask(tt)
    basis = (0, full) + var_masks(n)
    bset = set(basis)
    level = {frozenset()}
    budget = limits().mcs_states
    for size in range(1, s_max + 1):
        nxt = set()
        for S in level:
            avail = basis + tuple(S)
            cand = _one_gate(avail, full, monotone)
            if target in cand:
                return size
            if size < s_max:
                for g in cand:
                    if g not in bset and g not in S:
                        nxt.add(S | {g})
        if len(nxt) > budget:
            raise TooLarge(f"{len(nxt)} search states")
        level = nxt
    return None


def reference_min_size(tt: Sequence[int], s_max: int, monotone: bool = False):
    """Unpruned enumeration of every gate list (validation reference)."""
    n = len(tt).bit_length() - 1
    full = (1 << (2 ** n)) - 1
    target = tt_to_mask(tt)
    basis = [0, full] + list(var_masks(n))

    def rec(vals, left):
        avail = basis + vals
        opts = []
        if not monotone:
            opts += [full ^ a for a in avail]
        for a, b in product(avail, repeat=2):
            opts.append(a | b)
            opts.append(a & b)
        for g in opts:
            if left == 1:
                if g == target:
                    return True
            elif rec(vals + [g], left - 1):
                return True
        return False

    for s in range(1, s_max + 1):
        if rec([], s):
            return s
    return None


def csize_table(n: int, s_max: int = 4, monotone: bool = False) -> dict:
    return {f: min_circuit_size(mask_tt, s_max, monotone)
            for f, mask_tt in ((i, tuple((i >> j) & 1 for j in range(2 ** n)))
                               for i in range(2 ** (2 ** n)))}


# ---------------------------------------------------------------- xor_sat

@dataclass
class XorResult:
    sat: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.sat


def solve_gf2(rows: Sequence[tuple], m: int) -> XorResult:
    """rows: (mask over bits 0..m-1, rhs).  Free variables are set to 0."""
    pivots: dict = {}  # pivot bit -> (mask, rhs)
    for mask, rhs in rows:
        for bit, (pm, pr) in pivots.items():
            if mask >> bit & 1:
                mask ^= pm
                rhs ^= pr
        if not mask:
            if rhs:
                return XorResult(False)
            continue
        bit = mask.bit_length() - 1
        for b2, (pm, pr) in list(pivots.items()):
            if pm >> bit & 1:
                pivots[b2] = (pm ^ mask, pr ^ rhs)
        pivots[bit] = (mask, rhs)
    x = [0] * m
    for bit, (pm, pr) in pivots.items():
        x[bit] = pr  # fully reduced: other pivot bits cleared, free bits are 0
    return XorResult(True, tuple(x))


def xor_rows(G, b: Sequence[int], constraints: Iterable[int] | None = None) -> list:
    us = range(2 ** G.n) if constraints is None else constraints
    return [(sum(1 << (v - 1) for v in G.adj[u]), int(b[u])) for u in us]


def xor_sat(G, b: Sequence[int], constraints: Iterable[int] | None = None) -> XorResult:
    if G.m > 30:
        raise TooLarge("xor_sat supports m <= 30")
    return solve_gf2(xor_rows(G, b, constraints), G.m)


def xor_eval(G, beta: Sequence[int]) -> tuple:
    """f_{G,β}(α) for every α."""
    return tuple(sum(beta[v - 1] for v in G.adj[u]) % 2 for u in range(2 ** G.n))


def in_family(G, b: Sequence[int]) -> bool:
    return xor_sat(G, b).sat


# ---------------------------------------------------------------- contracts

@dataclass
class ContractVerdict:
    valid: bool
    bottom_count: int
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.valid


def heuristic_contract_check(C: HeuristicCircuit, tt: Sequence[int], t: int,
                             level: int | None = None) -> ContractVerdict:
    n = C.n
    valid = truth_table(C.circuit, 0)
    value = truth_table(C.circuit, 1)
    bottoms = 0
    for idx in range(2 ** n):
        if level is not None and weight(idx) != level:
            continue
        if not valid[idx]:
            bottoms += 1
        elif value[idx] != tt[idx]:
            return ContractVerdict(False, bottoms, alpha_bits(idx, n), "wrong committed value")
    if bottoms > t:
        return ContractVerdict(False, bottoms, None, f"{bottoms} bottom inputs exceed t={t}")
    return ContractVerdict(True, bottoms)


@dataclass
class SliceVerdict:
    valid: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.valid


def slice_function_check(tt: Sequence[int], level: int) -> SliceVerdict:
    n = len(tt).bit_length() - 1
    bad = is_slice_function(tt, n, level)
    return SliceVerdict(True) if bad is None else SliceVerdict(False, alpha_bits(bad, n))


def enumerate_slice_functions(n: int, level: int):
    """All of M_n(ℓ): free values on the weight-ℓ inputs, lexicographic."""
    mid = [i for i in range(2 ** n) if weight(i) == level]
    for bits in product((0, 1), repeat=len(mid)):
        tt = [int(weight(i) > level) for i in range(2 ** n)]
        for i, b in zip(mid, bits):
            tt[i] = b
        yield tuple(tt)


def slice_family_size(n: int, level: int) -> int:
    return 2 ** comb(n, level)
