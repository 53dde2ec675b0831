"""SoS / Nullstellensatz proof objects, exact verification and restriction.

A proof claims ``Σ t_i·p_i + Σ s_j² = target``.  Multipliers are keyed by
axiom tag.  Verification expands everything with exact arithmetic; the
Boolean and negation axioms are ordinary axioms with their own
multipliers, so nothing is reduced modulo x² = x.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .formulas import Axiom, PolySystem
from .polynomials import (Polynomial, VarPool, complete_substitution, mono_mul,
                          parse_polynomial, substitute)

SOS = "SoS"
NS = "Nullstellensatz"


@dataclass(frozen=True)
class ProofObject:
    kind: str
    multipliers: dict          # tag -> Polynomial
    squares: tuple = ()
    target: Polynomial = field(default_factory=lambda: Polynomial.const(-1))

    def __post_init__(self):
        if self.kind not in (SOS, NS):
            raise ValueError(f"unknown proof kind {self.kind}")
        object.__setattr__(self, "squares", tuple(self.squares))
        object.__setattr__(self, "multipliers", {t: q for t, q in self.multipliers.items() if q})
        if self.kind == NS and self.squares:
            raise ValueError("a Nullstellensatz derivation has no squares")

    def is_refutation(self) -> bool:
        return self.target == Polynomial.const(-1)

    def scale(self, c) -> "ProofObject":
        """Multiply by a scalar.  Negative scalars need a square-free proof."""
        if c < 0 and self.squares:
            raise ValueError("cannot negate a proof with squares")
        if self.squares:
            from math import isqrt
            r = Fraction(c).limit_denominator()
            num, den = r.numerator, r.denominator
            if isqrt(num) ** 2 != num or isqrt(den) ** 2 != den:
                raise ValueError("scaling squares needs a rational square")
            root = Fraction(isqrt(num), isqrt(den))
            sq = tuple(s.scale(root) for s in self.squares)
        else:
            sq = ()
        return ProofObject(self.kind, {t: q.scale(c) for t, q in self.multipliers.items()},
                           sq, self.target.scale(c))

    def __add__(self, other: "ProofObject") -> "ProofObject":
        mult = dict(self.multipliers)
        for t, q in other.multipliers.items():
            mult[t] = mult[t] + q if t in mult else q
        kind = SOS if SOS in (self.kind, other.kind) else NS
        return ProofObject(kind, mult, self.squares + other.squares, self.target + other.target)


def derivation(target: Polynomial, multipliers: Mapping) -> ProofObject:
    return ProofObject(NS, dict(multipliers), (), target)


class ProofAccumulator:
    """Mutable builder: ``add(tag, q)`` adds q to the multiplier of ``tag``.

    Multipliers are kept as raw dicts so that summing many small
    derivations stays cheap.
    """

    def __init__(self):
        self.mult: dict = {}
        self.target: dict = {}

    def add(self, tag: str, q, c=1):
        if isinstance(q, Polynomial):
            items = q.items()
        else:
            items = q.items()
        d = self.mult.setdefault(tag, {})
        for m, v in items:
            x = d.get(m, 0) + c * v
            if x:
                d[m] = x
            else:
                del d[m]

    def add_mono(self, tag: str, mono, c):
        d = self.mult.setdefault(tag, {})
        x = d.get(mono, 0) + c
        if x:
            d[mono] = x
        else:
            del d[mono]

    def add_target(self, p: Polynomial, c=1):
        for m, v in p.items():
            x = self.target.get(m, 0) + c * v
            if x:
                self.target[m] = x
            else:
                del self.target[m]

    def merge(self, pi: ProofObject, c=1):
        for t, q in pi.multipliers.items():
            self.add(t, q, c)
        self.add_target(pi.target, c)

    def proof(self) -> ProofObject:
        mult = {t: Polynomial._raw(d) for t, d in self.mult.items() if d}
        return ProofObject(NS, mult, (), Polynomial._raw(dict(self.target)))


@dataclass
class Verdict:
    accepted: bool
    residual: Polynomial | None = None
    reason: str = ""

    def __bool__(self):
        return self.accepted


def claimed_lhs(P: PolySystem | Mapping, pi: ProofObject) -> Polynomial:
    index = P.index() if isinstance(P, PolySystem) else P
    acc: dict = {}
    get = acc.get
    for tag, t in pi.multipliers.items():
        p = index[tag]
        pt = p.terms
        for m1, c1 in t.items():
            for m2, c2 in pt.items():
                m = mono_mul(m1, m2)
                acc[m] = get(m, 0) + c1 * c2
    for s in pi.squares:
        st = list(s.items())
        for m1, c1 in st:
            for m2, c2 in st:
                m = mono_mul(m1, m2)
                acc[m] = get(m, 0) + c1 * c2
    return Polynomial._raw({m: c for m, c in acc.items() if c})


def verify_proof(P: PolySystem | Mapping, pi: ProofObject, require_refutation: bool = False) -> Verdict:
    index = P.index() if isinstance(P, PolySystem) else P
    missing = [t for t in pi.multipliers if t not in index]
    if missing:
        return Verdict(False, None, f"unknown axiom tags: {missing[:3]}")
    if pi.kind == NS and pi.squares:
        return Verdict(False, None, "Nullstellensatz proof with squares")
    if require_refutation and not pi.is_refutation():
        return Verdict(False, None, "target is not -1")
    res = claimed_lhs(index, pi) - pi.target
    if res:
        return Verdict(False, res, f"residual with {len(res)} terms")
    return Verdict(True, Polynomial(), "")


def proof_degree(pi: ProofObject, P: PolySystem | Mapping) -> int:
    index = P.index() if isinstance(P, PolySystem) else P
    d = 0
    for tag, t in pi.multipliers.items():
        d = max(d, t.degree() + index[tag].degree())
    for s in pi.squares:
        d = max(d, 2 * s.degree())
    return d


def proof_size(pi: ProofObject) -> int:
    return (sum(len(t) for t in pi.multipliers.values()) + sum(len(s) for s in pi.squares)
            + len(pi.target))


def restrict_proof(pi: ProofObject, rho: Mapping, P: PolySystem):
    """Substitute ρ formally into π and P.  Returns (π′, P↾ρ).

    Axioms that become 0 are dropped from P↾ρ together with their
    multipliers; their contribution t·0 vanishes identically.
    """
    from .formulas import restrict_system
    from .polynomials import CompiledSubstitution
    sigma = CompiledSubstitution(complete_substitution(rho, P.pool))
    Pr = restrict_system(P, sigma.sigma)
    keep = set(Pr.index())
    mult = {}
    for tag, t in pi.multipliers.items():
        if tag in keep:
            mult[tag] = substitute(t, sigma, P.pool, multilinear=False, complete=False)
    sq = tuple(substitute(s, sigma, P.pool, multilinear=False, complete=False) for s in pi.squares)
    tgt = substitute(pi.target, sigma, P.pool, multilinear=False, complete=False)
    return ProofObject(pi.kind, mult, sq, tgt), Pr


def substitution_degree(rho: Mapping) -> int:
    k = 1
    for img in rho.values():
        if isinstance(img, Polynomial):
            k = max(k, img.degree())
    return k


# ---------------------------------------------------------------- JSON

def proof_to_json(pi: ProofObject, pool: VarPool | None) -> dict:
    return {"kind": pi.kind, "target": pi.target.to_text(pool),
            "multipliers": {t: q.to_text(pool) for t, q in sorted(pi.multipliers.items())},
            "squares": [s.to_text(pool) for s in pi.squares]}


def proof_from_json(d, pool: VarPool | None) -> ProofObject:
    if isinstance(d, str):
        d = json.loads(d)
    return ProofObject(d["kind"], {t: parse_polynomial(q, pool) for t, q in d["multipliers"].items()},
                       tuple(parse_polynomial(s, pool) for s in d.get("squares", [])),
                       parse_polynomial(d["target"], pool))


def dump_proof(pi: ProofObject, pool, sink) -> None:
    json.dump(proof_to_json(pi, pool), sink, indent=1)
    sink.write("\n")


def toy_system(axioms: Mapping[str, Polynomial], pool: VarPool | None = None) -> PolySystem:
    """PolySystem from explicit tagged polynomials (no Boolean axioms added)."""
    if pool is None:
        vs = set()
        for p in axioms.values():
            vs |= p.variables()
        pool = VarPool([("x", v) for v in range(1, max(vs, default=0) + 1)])
    return PolySystem(pool, tuple(Axiom(t, p) for t, p in axioms.items()), {"kind": "toy"})
