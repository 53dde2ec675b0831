"""Sparse polynomials with exact rational coefficients.

A monomial is a sorted tuple of variable ids; a repeated id is a power, so
``(3, 3, 5)`` is ``x3^2 * x5``.  Multilinear monomials simply have no
repeats.  Coefficients are Python ints, or ``Fraction`` when a division
happened.  A :class:`VarPool` owns the ids and the bar pairing
``x <-> x̄``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .errors import BarInconsistency, NotBooleanZero, UnassignedVariable

Monomial = tuple


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _fmt_coeff(c) -> str:
    if type(c) is Fraction:
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _order_key(item):
    m = item[0]
    return (len(m), m)


class Polynomial:
    """Immutable sparse polynomial ``{monomial: coeff}`` with no zero entries."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping | None = None):
        t = {}
        if terms:
            for m, c in terms.items():
                if c:
                    m = tuple(sorted(m))
                    v = t.get(m, 0) + c
                    if v:
                        t[m] = v
                    else:
                        t.pop(m, None)
        self._t = {m: _norm(c) for m, c in t.items()}
        self._h = None

    @classmethod
    def _raw(cls, t: dict) -> "Polynomial":
        # trusted: sorted monomials, nonzero coefficients
        p = cls.__new__(cls)
        p._t = {m: _norm(c) for m, c in t.items()}
        p._h = None
        return p

    # constructors
    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, v: int) -> "Polynomial":
        return cls._raw({(v,): 1})

    @classmethod
    def mono(cls, m: Iterable[int], c=1) -> "Polynomial":
        return cls._raw({tuple(sorted(m)): c} if c else {})

    # access
    @property
    def terms(self) -> dict:
        """The term map.  Treat as read-only."""
        return self._t

    def items(self):
        return self._t.items()

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def degree(self) -> int:
        return max((len(m) for m in self._t), default=0)

    def variables(self) -> set:
        out = set()
        for m in self._t:
            out.update(m)
        return out

    def constant_term(self):
        return self._t.get((), 0)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and () in self._t)

    def single_var(self):
        """Return v if the polynomial is exactly the variable v, else None."""
        if len(self._t) == 1:
            (m, c), = self._t.items()
            if c == 1 and len(m) == 1:
                return m[0]
        return None

    def is_multilinear(self) -> bool:
        return all(len(set(m)) == len(m) for m in self._t)

    # arithmetic
    @staticmethod
    def _lift(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return Polynomial.const(x)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                del out[m]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Polynomial":
        if not c:
            return Polynomial()
        return Polynomial._raw({m: v * c for m, v in self._t.items()})

    def times_mono(self, mono: Monomial, c=1) -> "Polynomial":
        if not c:
            return Polynomial()
        return Polynomial._raw({mono_mul(m, mono): v * c for m, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if len(other._t) == 1:
            (m, c), = other._t.items()
            return self.times_mono(m, c)
        if len(self._t) == 1:
            (m, c), = self._t.items()
            return other.times_mono(m, c)
        out: dict = {}
        get = out.get
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = mono_mul(m1, m2)
                out[m] = get(m, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Polynomial.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # evaluation
    def evaluate(self, assignment: Mapping[int, object]):
        return evaluate(self, assignment)

    # text
    def sorted_terms(self):
        return sorted(self._t.items(), key=_order_key)

    def to_text(self, pool: "VarPool | None" = None) -> str:
        if not self._t:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            bits = [_fmt_coeff(c)]
            i = 0
            while i < len(m):
                j = i
                while j < len(m) and m[j] == m[i]:
                    j += 1
                name = pool.name(m[i]) if pool is not None else f"x{m[i]}"
                bits.append(name if j - i == 1 else f"{name}^{j - i}")
                i = j
            parts.append("*".join(bits))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"


def parse_polynomial(text: str, pool: "VarPool | None" = None) -> Polynomial:
    """Inverse of :meth:`Polynomial.to_text`."""
    text = text.strip()
    if text == "0":
        return Polynomial()
    out = {}
    for term in text.split(" + "):
        coeff, *factors = term.split("*")
        c = Fraction(coeff)
        mono = []
        for f in factors:
            name, _, e = f.partition("^")
            if pool is not None:
                v = pool.id_of_name(name)
            else:
                if not name.startswith("x"):
                    raise ValueError(f"cannot parse variable {name!r} without a pool")
                v = int(name[1:])
            mono.extend([v] * (int(e) if e else 1))
        m = tuple(sorted(mono))
        out[m] = out.get(m, 0) + c
    return Polynomial(out)


# ---------------------------------------------------------------- variables

def format_key(key) -> str:
    if isinstance(key, str):
        return key
    fam, *args = key
    return f"{fam}({','.join(str(a) for a in args)})"


_KEY_RE = re.compile(r"^([A-Za-z_][\w\-]*)\(([-\d,]*)\)$")


def parse_key(name: str):
    mt = _KEY_RE.match(name)
    if not mt:
        return name
    args = tuple(int(a) for a in mt.group(2).split(",") if a != "")
    return (mt.group(1),) + args


class VarPool:
    """Base variables get ids 1..B; the bar of id v is v + B."""

    def __init__(self, keys: Iterable):
        self.keys = list(keys)
        self.n_base = len(self.keys)
        self._id = {}
        for i, k in enumerate(self.keys):
            if k in self._id:
                raise ValueError(f"duplicate variable {k!r}")
            self._id[k] = i + 1
        self._name_id = None

    def __len__(self):
        return 2 * self.n_base

    def id(self, key) -> int:
        return self._id[key]

    def get(self, key, default=None):
        return self._id.get(key, default)

    def __contains__(self, key):
        return key in self._id

    def key(self, v: int):
        return self.keys[self.base(v) - 1]

    def base(self, v: int) -> int:
        return v - self.n_base if v > self.n_base else v

    def is_bar(self, v: int) -> bool:
        return v > self.n_base

    def bar(self, v: int) -> int:
        if not 1 <= v <= 2 * self.n_base:
            raise KeyError(v)
        return v - self.n_base if v > self.n_base else v + self.n_base

    def base_ids(self) -> range:
        return range(1, self.n_base + 1)

    def all_ids(self) -> range:
        return range(1, 2 * self.n_base + 1)

    def name(self, v: int) -> str:
        s = format_key(self.key(v))
        return "~" + s if self.is_bar(v) else s

    def id_of_name(self, name: str) -> int:
        if self._name_id is None:
            self._name_id = {}
            for v in self.all_ids():
                self._name_id[self.name(v)] = v
        return self._name_id[name]

    def complete(self, assignment: Mapping[int, int]) -> dict:
        """Add bar values 1 - x for every assigned variable missing its partner."""
        out = dict(assignment)
        for v, x in assignment.items():
            out.setdefault(self.bar(v), 1 - x)
        return out

    def names(self) -> list:
        return [format_key(k) for k in self.keys]

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "VarPool":
        return cls(parse_key(n) for n in names)


def var(v: int) -> Polynomial:
    return Polynomial.var(v)


def const(c) -> Polynomial:
    return Polynomial.const(c)


def boolean_axiom(v: int) -> Polynomial:
    return Polynomial._raw({(v, v): 1, (v,): -1})


def negation_axiom(v: int, vbar: int) -> Polynomial:
    return Polynomial({(): 1, (v,): -1, (vbar,): -1})


# ---------------------------------------------------------------- reductions

def multilinearize(p: Polynomial):
    """Return ``(reduced, witness)`` with p = reduced + Σ q·(x²−x).

    ``witness`` is a list of ``(q, x)`` pairs, one per variable that needed
    reducing, in increasing variable order.
    """
    out: dict = {}
    wit: dict = {}
    for m, c in p.items():
        cur = m
        while True:
            x = None
            for i in range(len(cur) - 1):
                if cur[i] == cur[i + 1]:
                    x = cur[i]
                    break
            if x is None:
                break
            e = cur.count(x)
            rest = tuple(y for y in cur if y != x)
            w = wit.setdefault(x, {})
            # c·r·x^e = c·r·x + c·r·Σ_{j<e-1} x^j (x²−x)
            for j in range(e - 1):
                mj = mono_mul(rest, (x,) * j)
                w[mj] = w.get(mj, 0) + c
            cur = mono_mul(rest, (x,))
        out[cur] = out.get(cur, 0) + c
    reduced = Polynomial._raw({m: c for m, c in out.items() if c})
    witness = []
    for x in sorted(wit):
        q = Polynomial._raw({m: c for m, c in wit[x].items() if c})
        if q:
            witness.append((q, x))
    return reduced, witness


def expand_witness(witness) -> Polynomial:
    acc: dict = {}
    for q, x in witness:
        for m, c in q.items():
            for mm, s in ((mono_mul(m, (x, x)), 1), (mono_mul(m, (x,)), -1)):
                v = acc.get(mm, 0) + s * c
                if v:
                    acc[mm] = v
                else:
                    acc.pop(mm, None)
    return Polynomial._raw(acc)


def decompose_boolean_zero(p: Polynomial):
    """Write a polynomial vanishing on {0,1}^n as Σ q_i·(x_i² − x_i)."""
    reduced, witness = multilinearize(p)
    if reduced:
        # a nonzero multilinear polynomial is nonzero at the indicator of a
        # minimal monomial of its support
        m = min(reduced.terms, key=lambda t: (len(t), t))
        point = {v: (1 if v in m else 0) for v in p.variables()}
        raise NotBooleanZero(
            f"polynomial does not vanish on the cube (value {reduced.evaluate(point)} at "
            f"support {m})", point)
    return witness


def evaluate(p: Polynomial, assignment: Mapping[int, object]):
    total = 0
    for m, c in p.items():
        t = c
        for v in m:
            try:
                x = assignment[v]
            except KeyError:
                raise UnassignedVariable(f"variable {v} unassigned") from None
            if not x:
                t = 0
                break
            t *= x
        total += t
    return _norm(total)


def boolean_points(variables: Iterable[int]):
    vs = sorted(variables)
    for bits in product((0, 1), repeat=len(vs)):
        yield dict(zip(vs, bits))


def is_boolean_zero(p: Polynomial) -> bool:
    return not multilinearize(p)[0]


# ---------------------------------------------------------------- substitution

def bar_eliminate(p: Polynomial, pool: VarPool, only: set | None = None):
    """Replace every bar variable x̄ by 1 − x.

    Returns ``(q, mult)`` where ``mult`` maps a base id x to the multiplier
    of the negation axiom 1 − x − x̄, so that
    ``p = q + Σ mult[x]·(1 − x − x̄)`` holds formally.  ``only`` limits the
    elimination to the given base ids.
    """
    cur = dict(p.terms)
    mult: dict = {}
    while True:
        target = None
        for m in cur:
            for v in m:
                if pool.is_bar(v) and (only is None or pool.base(v) in only):
                    target = v
                    break
            if target is not None:
                break
        if target is None:
            break
        x = pool.base(target)
        # split p = p0 + x̄·p1 (p1 may still contain x̄)
        p1: dict = {}
        rest: dict = {}
        for m, c in cur.items():
            if target in m:
                i = m.index(target)
                r = m[:i] + m[i + 1:]
                p1[r] = p1.get(r, 0) + c
            else:
                rest[m] = rest.get(m, 0) + c
        # x̄·p1 = (1 − x)·p1 − p1·(1 − x − x̄)
        mm = mult.setdefault(x, {})
        for r, c in p1.items():
            mm[r] = mm.get(r, 0) - c
            rest[r] = rest.get(r, 0) + c
            rx = mono_mul(r, (x,))
            rest[rx] = rest.get(rx, 0) - c
        cur = {m: c for m, c in rest.items() if c}
    out = Polynomial._raw(cur)
    mult_p = {x: Polynomial._raw({m: c for m, c in d.items() if c}) for x, d in mult.items()}
    return out, {x: q for x, q in mult_p.items() if q}


def _complementary(a, b, pool: VarPool | None) -> bool:
    pa = a if isinstance(a, Polynomial) else Polynomial.const(a)
    pb = b if isinstance(b, Polynomial) else Polynomial.const(b)
    s = pa + pb - 1
    if not s:
        return True
    if pool is None:
        return False
    q, _ = bar_eliminate(s, pool)
    return is_boolean_zero(q)


def complete_substitution(sigma: Mapping[int, object], pool: VarPool | None) -> dict:
    """Extend σ to bar partners; raise BarInconsistency on clashes."""
    out = dict(sigma)
    if pool is None:
        return out
    for v, img in sigma.items():
        b = pool.bar(v)
        if b in sigma:
            if not _complementary(img, sigma[b], pool):
                raise BarInconsistency(
                    f"{pool.name(v)} and {pool.name(b)} have non-complementary images")
            continue
        if isinstance(img, Polynomial):
            y = img.single_var()
            out[b] = Polynomial.var(pool.bar(y)) if y is not None else 1 - img
        else:
            out[b] = 1 - img
    return out


class CompiledSubstitution:
    """σ preprocessed for repeated application (already bar-complete)."""

    def __init__(self, sigma: Mapping[int, object]):
        self.sigma = sigma
        kind = {}
        for v, img in sigma.items():
            if isinstance(img, Polynomial):
                y = img.single_var()
                if y is not None:
                    kind[v] = (1, y)
                elif img.is_constant():
                    kind[v] = (0, img.constant_term())
                else:
                    kind[v] = (2, img)
            else:
                kind[v] = (0, img)
        self.kind = kind


def substitute(p: Polynomial, sigma: Mapping[int, object], pool: VarPool | None = None,
               multilinear: bool = True, complete: bool = True) -> Polynomial:
    """Compose p with σ (variables not in σ are kept).

    Images are constants or Polynomials.  With a pool the substitution is
    first extended to bar partners.  ``multilinear=False`` keeps the formal
    composition, which is what proof restriction needs.
    """
    if isinstance(sigma, CompiledSubstitution):
        kind = sigma.kind
    else:
        if complete and pool is not None:
            sigma = complete_substitution(sigma, pool)
        kind = CompiledSubstitution(sigma).kind
    acc: dict = {}
    for m, c in p.items():
        coef = c
        keep = []
        polys = []
        for v in m:
            k = kind.get(v)
            if k is None:
                keep.append(v)
            elif k[0] == 0:
                coef = coef * k[1]
                if not coef:
                    break
            elif k[0] == 1:
                keep.append(k[1])
            else:
                polys.append(k[1])
        if not coef:
            continue
        mono = tuple(sorted(keep))
        if not polys:
            v = acc.get(mono, 0) + coef
            if v:
                acc[mono] = v
            else:
                del acc[mono]
            continue
        prod_t = {mono: coef}
        for q in polys:
            nxt: dict = {}
            for m1, c1 in prod_t.items():
                for m2, c2 in q.items():
                    mm = mono_mul(m1, m2)
                    nxt[mm] = nxt.get(mm, 0) + c1 * c2
            prod_t = {mm: cc for mm, cc in nxt.items() if cc}
        for mm, cc in prod_t.items():
            v = acc.get(mm, 0) + cc
            if v:
                acc[mm] = v
            else:
                del acc[mm]
    out = Polynomial._raw(acc)
    if multilinear:
        out = multilinearize(out)[0]
    return out
