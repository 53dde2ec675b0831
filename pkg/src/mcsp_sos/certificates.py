"""Pseudo-expectations for XOR systems and exact checks on them.

A pseudo-expectation is stored on multilinear 0/1 monomials over the base
variables.  Bars are read as 1 − x and powers collapse (x² = x), so the
Boolean and negation axioms are satisfied by construction; what remains
to check is the XOR axioms and positivity of the moment matrix.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .config import limits
from .errors import DegreeTooHigh, NotExpander, TooLarge
from .formulas import PolySystem, gen_xor_system
from .graphs import BipartiteGraph, ExpansionCertificate, certify_expansion
from .polynomials import Polynomial, VarPool, parse_polynomial
from .proofs import NS, SOS, ProofObject, claimed_lhs, proof_degree, verify_proof


def _norm(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class PseudoExpectation:
    degree: int
    values: dict            # sorted tuple of base ids -> rational
    pool: VarPool

    def __getitem__(self, mono) -> Fraction:
        return self.values[tuple(sorted(set(mono)))]

    def monomials(self, deg: int | None = None):
        deg = self.degree if deg is None else deg
        return [m for m in self.values if len(m) <= deg]

    def apply(self, p: Polynomial):
        """Ẽ[p] after x̄ → 1 − x and x² → x."""
        pool = self.pool
        total = Fraction(0)
        for mono, c in p.items():
            pos, neg = set(), set()
            for v in mono:
                if pool.is_bar(v):
                    neg.add(pool.base(v))
                else:
                    pos.add(v)
            neg -= pos            # x·(1 − x) = 0 on the cube, handled below
            if any(pool.bar(v) in mono for v in pos):
                continue
            neg = sorted(neg)
            for r in range(len(neg) + 1):
                for sub in combinations(neg, r):
                    key = tuple(sorted(pos | set(sub)))
                    if len(key) > self.degree:
                        raise DegreeTooHigh(f"Ẽ is undefined on a degree-{len(key)} monomial")
                    total += c * (-1) ** r * self.values[key]
        return _norm(total)

    def to_json(self) -> dict:
        pool = self.pool
        return {"degree": self.degree,
                "values": {("1" if not m else "*".join(pool.name(v) for v in m)): str(c)
                           for m, c in sorted(self.values.items(), key=lambda t: (len(t[0]), t[0]))}}

    @classmethod
    def from_json(cls, d, pool: VarPool) -> "PseudoExpectation":
        if isinstance(d, str):
            d = json.loads(d)
        vals = {}
        for k, c in d["values"].items():
            mono = () if k == "1" else tuple(sorted(pool.id_of_name(x) for x in k.split("*")))
            vals[mono] = _norm(Fraction(c))
        return cls(d["degree"], vals, pool)


def _base_monomials(ids: Sequence[int], d: int):
    for r in range(d + 1):
        yield from combinations(sorted(ids), r)


def from_character_values(chi: dict, pool: VarPool, d: int) -> PseudoExpectation:
    """χ_S = Π_{i∈S}(1 − 2y_i); y_A = 2^{−|A|} Σ_{S⊆A} (−1)^{|S|} χ_S."""
    ids = list(pool.base_ids())
    vals = {}
    for A in _base_monomials(ids, d):
        tot = Fraction(0)
        for r in range(len(A) + 1):
            for S in combinations(A, r):
                tot += (-1) ** r * chi.get(S, 0)
        vals[A] = _norm(tot / 2 ** len(A))
    return PseudoExpectation(d, vals, pool)


def from_distribution(points: Iterable[dict], pool: VarPool, d: int) -> PseudoExpectation:
    """The true expectation under the uniform distribution on ``points``."""
    pts = list(points)
    ids = list(pool.base_ids())
    vals = {}
    for A in _base_monomials(ids, d):
        vals[A] = _norm(Fraction(sum(all(p[v] for v in A) for p in pts), len(pts)))
    return PseudoExpectation(d, vals, pool)


def _constraints_of(Phi: PolySystem) -> list:
    return sorted(int(a.tag[4:-1]) for a in Phi.axioms if a.tag.startswith("xor("))


def build_xor_pseudoexpectation(Phi: PolySystem, G: BipartiteGraph, b: Sequence[int], d: int,
                                r: int | None = None, c=2, width: int | None = None,
                                require_expansion: bool = True,
                                certificate: ExpansionCertificate | None = None):
    """Ẽ[χ_S] = ±1 for parities S implied by at most ``width`` constraints, else 0.

    The constraints are read off Φ.  Expansion is certified on them up to
    size r (default 2d) unless a certificate is supplied.  ``width``
    defaults to r // 2 so that two derivations of the same S differ by at
    most r constraints, which expansion forces to be nonempty.
    """
    us = _constraints_of(Phi)
    r = 2 * d if r is None else r
    if d > r / 2 and require_expansion:
        raise DegreeTooHigh(f"degree {d} exceeds r/2 = {r / 2}")
    if require_expansion:
        cert = certificate or certify_expansion(G, r, c, working=us)
        if not cert.verified:
            raise NotExpander(f"expansion fails on {cert.witness}")
    width = r // 2 if width is None else width
    lim = limits().closure_subsets
    total = sum(comb(len(us), j) for j in range(width + 1))
    if total > lim:
        raise TooLarge(f"closure needs {total} subsets, limit {lim}")
    ids = [Phi.pool.id(("x", v)) for v in range(1, G.m + 1)]
    masks = {u: sum(1 << (v - 1) for v in G.adj[u]) for u in us}
    chi: dict = {}
    for j in range(width + 1):
        for T in combinations(us, j):
            acc, par = 0, 0
            for u in T:
                acc ^= masks[u]
                par ^= int(b[u])
            if bin(acc).count("1") > d:
                continue
            S = tuple(ids[i] for i in range(G.m) if acc >> i & 1)
            sign = 1 - 2 * par
            if chi.get(S, sign) != sign:
                raise NotExpander(f"parity on {S} is derived with both signs (constraints {T})")
            chi[S] = sign
    return from_character_values(chi, Phi.pool, d)


# ---------------------------------------------------------------- checks

@dataclass
class PEVerdict:
    valid: bool
    check: str = ""
    witness: object = None
    pivots: tuple = ()

    def __bool__(self):
        return self.valid


def moment_matrix(E: PseudoExpectation):
    half = E.degree // 2
    ids = sorted({v for m in E.values for v in m})
    rows = list(_base_monomials(ids, half))
    M = [[E[a + b] for b in rows] for a in rows]
    return rows, M


def ldl_psd(M) -> tuple:
    """Exact LDLᵀ with symmetric (largest diagonal) pivoting.

    Returns (ok, pivots, witness).  A negative pivot, or a zero pivot
    with a nonzero entry in its row, proves the matrix is not PSD.
    """
    A = [[Fraction(x) for x in row] for row in M]
    idx = list(range(len(A)))
    pivots = []
    while idx:
        i = max(idx, key=lambda j: A[j][j])
        p = A[i][i]
        if p < 0:
            return False, tuple(pivots), ("negative pivot", i, p)
        if p == 0:
            for j in idx:
                for l in idx:
                    if A[j][l] != 0:
                        return False, tuple(pivots), ("zero pivot with nonzero entry", j, l)
            pivots.extend([Fraction(0)] * len(idx))
            break
        pivots.append(p)
        idx.remove(i)
        row = {j: A[i][j] for j in idx}
        for j in idx:
            if row[j]:
                f = row[j] / p
                Aj = A[j]
                for l in idx:
                    if row[l]:
                        Aj[l] -= f * row[l]
    return True, tuple(pivots), None


def check_pseudoexpectation(E: PseudoExpectation, P: PolySystem, d: int | None = None) -> PEVerdict:
    """(i) normalization and domain, (ii) Ẽ[p·q] = 0, (iii) exact PSD.

    Axioms of degree above d are skipped in (ii): no degree-d proof can
    use them.
    """
    d = E.degree if d is None else d
    pool = P.pool
    ids = sorted(pool.base_ids())
    if E.values.get((), None) != 1:
        return PEVerdict(False, "normalization", E.values.get(()))
    for A in _base_monomials(ids, d):
        if A not in E.values:
            return PEVerdict(False, "domain", A)
    for ax in P.axioms:
        dp = ax.poly.degree()
        if dp > d:
            continue
        for q in _base_monomials(ids, d - dp):
            qp = Polynomial({q: 1})
            val = E.apply(ax.poly * qp)
            if val != 0:
                return PEVerdict(False, "axiom", (ax.tag, q, val))
    rows, M = moment_matrix(E)
    ok, piv, wit = ldl_psd(M)
    if not ok:
        return PEVerdict(False, "psd", wit, piv)
    return PEVerdict(True, "", None, piv)


def duality_gap(E: PseudoExpectation, P: PolySystem, pi: ProofObject):
    """Ẽ[Σ t_i p_i + Σ s_j²] − Ẽ[target].

    For a valid Ẽ and a proof of degree ≤ d this is Σ Ẽ[s_j²] − Ẽ[target],
    which is at least 1 for target −1.  A verified proof would make it 0.
    """
    return E.apply(claimed_lhs(P, pi)) - E.apply(pi.target)


# ---------------------------------------------------------------- refutations

def xor_dependency(G: BipartiteGraph, b: Sequence[int], constraints: Iterable[int] | None = None):
    """Constraints T with ⊕N(T) = ∅ and odd ⊕b_T, or None if satisfiable."""
    us = range(2 ** G.n) if constraints is None else constraints
    pivots: dict = {}
    for u in us:
        mask = sum(1 << (v - 1) for v in G.adj[u])
        rhs, comb_ = int(b[u]), 1 << u
        while mask:
            bit = mask.bit_length() - 1
            if bit not in pivots:
                pivots[bit] = (mask, rhs, comb_)
                break
            pm, pr, pc = pivots[bit]
            mask ^= pm
            rhs ^= pr
            comb_ ^= pc
        if not mask and rhs:
            return tuple(i for i in range(comb_.bit_length()) if comb_ >> i & 1)
    return None


def hand_xor_refutation(Phi: PolySystem, G: BipartiteGraph, b: Sequence[int], T: Sequence[int] | None = None):
    """Nullstellensatz refutation multiplying the constraints of a dependency T.

    With A_u = Π_{v∈N(u)} (1 − 2x_v) and c_u = 1 − 2b_u:
    Π A_u − Π c_u = Σ_j (Π_{i<j} c_i)(A_j − c_j)(Π_{i>j} A_i), and Π A_u is a
    product of squares (1 − 2x)² = 1 + 4(x² − x), so Π A_u − 1 is a
    combination of Boolean axioms.  Π c_u = −1 leaves 2 = Σ …; scale by −1/2.
    """
    pool = Phi.pool
    if T is None:
        T = xor_dependency(G, b, _constraints_of(Phi))
        if T is None:
            raise ValueError("system is satisfiable")
    if G.k * len(T) > 24:
        raise TooLarge(f"hand refutation would have degree {G.k * len(T)}")
    X = {v: Polynomial.var(pool.id(("x", v))) for v in range(1, G.m + 1)}
    A = {u: _prod(1 - 2 * X[v] for v in G.adj[u]) for u in T}
    c = {u: 1 - 2 * int(b[u]) for u in T}
    mult: dict = {}
    T = list(T)
    for j, u in enumerate(T):
        pre = 1
        for i in T[:j]:
            pre *= c[i]
        post = _prod(A[i] for i in T[j + 1:])
        _acc(mult, f"xor({u})", post.scale(pre))
    # Π A_u as a product of squares F_l = (1 − 2x)²
    count: dict = {}
    for u in T:
        for v in G.adj[u]:
            count[v] = count.get(v, 0) + 1
    factors = []
    for v, e in sorted(count.items()):
        assert e % 2 == 0
        factors += [v] * (e // 2)
    for l, v in enumerate(factors):
        post = _prod((1 - 2 * X[w]) * (1 - 2 * X[w]) for w in factors[l + 1:])
        from .formulas import bool_tag
        _acc(mult, bool_tag(pool, X[v].single_var()), post.scale(-4))
    pi = ProofObject(NS, mult, (), Polynomial.const(2))
    return pi.scale(Fraction(-1, 2))


def _prod(it):
    p = Polynomial.const(1)
    for q in it:
        p = p * q
    return p


def _acc(mult, tag, q):
    mult[tag] = mult[tag] + q if tag in mult else q


def fuzz_candidates(P: PolySystem, d: int, count: int, seed: int):
    """Random degree-≤d refutation attempts (target −1).

    Mixes sparse random multipliers, squares of random linear forms and
    "near misses" that scale a true identity 0 = Σ t·p by a random factor
    and then claim −1.
    """
    rng = random.Random(seed)
    pool = P.pool
    ids = sorted(pool.base_ids()) + sorted(pool.bar(v) for v in pool.base_ids())
    usable = [a for a in P.axioms if a.poly.degree() <= d]
    coeffs = [Fraction(x, y) for x in range(-3, 4) for y in (1, 2, 3)]

    def rand_poly(deg, terms):
        t = {}
        for _ in range(terms):
            r = rng.randint(0, deg)
            mono = tuple(sorted(rng.choice(ids) for _ in range(r)))
            t[mono] = t.get(mono, 0) + rng.choice(coeffs)
        return Polynomial(t)

    for i in range(count):
        mult = {}
        for _ in range(rng.randint(1, 6)):
            if not usable:
                break
            ax = rng.choice(usable)
            q = rand_poly(d - ax.poly.degree(), rng.randint(1, 3))
            if q:
                _acc(mult, ax.tag, q)
        squares = ()
        if i % 2 and d >= 2:
            squares = tuple(rand_poly(d // 2, rng.randint(1, 3)) for _ in range(rng.randint(1, 2)))
        kind = SOS if squares else NS
        yield ProofObject(kind, mult, squares, Polynomial.const(-1))
