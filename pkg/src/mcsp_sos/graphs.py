"""Bipartite constraint graphs, exhaustive expansion certificates, neighbor circuits."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .circuits import CircuitIR, alpha_bits, compile_function
from .config import limits
from .errors import BadParameters, CertificationFailed, TooLarge


@dataclass(frozen=True)
class BipartiteGraph:
    n: int
    m: int
    k: int
    adj: tuple          # adj[u] = sorted tuple of right vertices in 1..m
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "adj", tuple(tuple(a) for a in self.adj))
        if len(self.adj) != 2 ** self.n:
            raise BadParameters(f"need {2 ** self.n} neighbor lists, got {len(self.adj)}")
        for u, a in enumerate(self.adj):
            if len(a) != self.k:
                raise BadParameters(f"vertex {u} has degree {len(a)}, expected {self.k}")
            if list(a) != sorted(set(a)):
                raise BadParameters(f"neighbor list of {u} not sorted and duplicate-free")
            if a and not (1 <= a[0] and a[-1] <= self.m):
                raise BadParameters(f"neighbor of {u} outside 1..{self.m}")

    def neighbors(self, u: int) -> tuple:
        return self.adj[u]

    def nbr_mask(self, u: int) -> int:
        return sum(1 << (v - 1) for v in self.adj[u])

    def right_neighbors(self, i: int) -> list:
        return [u for u, a in enumerate(self.adj) if i in a]

    def relabel(self, perm: Sequence[int]) -> "BipartiteGraph":
        """perm[i-1] is the new label of right vertex i."""
        return BipartiteGraph(self.n, self.m, self.k,
                              tuple(tuple(sorted(perm[v - 1] for v in a)) for a in self.adj), self.seed)

    def to_json(self) -> dict:
        w = max(1, (self.n + 3) // 4)
        return {"n": self.n, "m": self.m, "k": self.k, "seed": self.seed,
                "adj": {format(u, f"0{w}x"): list(a) for u, a in enumerate(self.adj)}}

    @classmethod
    def from_json(cls, d) -> "BipartiteGraph":
        if isinstance(d, str):
            d = json.loads(d)
        adj = [None] * (2 ** d["n"])
        for h, a in d["adj"].items():
            adj[int(h, 16)] = tuple(a)
        return cls(d["n"], d["m"], d["k"], tuple(adj), d.get("seed"))


@dataclass(frozen=True)
class ExpansionCertificate:
    r: int
    c: float
    verified: bool
    method: str = "exhaustive"
    working: tuple | None = None     # left vertices checked (None = all)
    witness: tuple | None = None     # violating set, if any
    seed: int | None = None
    checked: int = 0

    def to_json(self) -> dict:
        return {"r": self.r, "c": self.c, "verified": self.verified, "method": self.method,
                "working": None if self.working is None else list(self.working),
                "witness": None if self.witness is None else list(self.witness),
                "seed": self.seed, "checked": self.checked}


def certify_expansion(G: BipartiteGraph, r: int, c=2, working: Sequence[int] | None = None) -> ExpansionCertificate:
    """Exact check that |N(W)| >= c|W| for every W with |W| <= r."""
    us = list(range(2 ** G.n)) if working is None else sorted(working)
    total = sum(comb(len(us), j) for j in range(1, r + 1))
    lim = limits().expansion_subsets
    if total > lim:
        raise TooLarge(f"{total} subsets exceed the limit {lim}")
    masks = {u: G.nbr_mask(u) for u in us}
    checked = 0
    for j in range(1, r + 1):
        for W in combinations(us, j):
            checked += 1
            acc = 0
            for u in W:
                acc |= masks[u]
            if bin(acc).count("1") < c * j:
                return ExpansionCertificate(r, c, False, "exhaustive",
                                            None if working is None else tuple(us), W, G.seed, checked)
    return ExpansionCertificate(r, c, True, "exhaustive",
                                None if working is None else tuple(us), None, G.seed, checked)


def random_graph(n: int, m: int, k: int, seed: int) -> BipartiteGraph:
    if not 1 <= k <= m:
        raise BadParameters(f"need 1 <= k <= m, got k={k}, m={m}")
    rng = random.Random(seed)
    adj = tuple(tuple(sorted(rng.sample(range(1, m + 1), k))) for _ in range(2 ** n))
    return BipartiteGraph(n, m, k, adj, seed)


def greedy_graph(n: int, m: int, k: int, r: int, seed: int, c=2, tries: int = 20000):
    """Seeded random greedy: keep a random k-set only if every set of at most
    r chosen left vertices containing it still expands.  None if stuck."""
    rng = random.Random(seed)
    N = 2 ** n
    adj, masks = [], []
    for _ in range(tries):
        if len(adj) == N:
            break
        cand = tuple(sorted(rng.sample(range(1, m + 1), k)))
        mk = sum(1 << (v - 1) for v in cand)
        ok = True
        for j in range(r):
            for W in combinations(masks, j):
                acc = mk
                for w in W:
                    acc |= w
                if bin(acc).count("1") < c * (j + 1):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            adj.append(cand)
            masks.append(mk)
    if len(adj) < N:
        return None
    rng.shuffle(adj)
    return BipartiteGraph(n, m, k, tuple(adj), seed)


def build_desk_expander(n: int, m: int, k: int, r: int, seed: int, c=2,
                        max_retries: int = 200, working: Sequence[int] | None = None,
                        method: str = "random"):
    """Seeded graphs until one certifies as an (r, k, c)-expander.

    Attempt j uses seed ``seed + j``; the certificate records the seed that
    succeeded.  ``method="greedy"`` grows each attempt with greedy_graph
    instead of sampling it outright; certification is exhaustive either way.
    """
    if n > 20:
        raise BadParameters("n <= 20")
    if method not in ("random", "greedy"):
        raise BadParameters(f"unknown method {method}")
    for j in range(max_retries):
        if method == "greedy":
            G = greedy_graph(n, m, k, r, seed + j, c)
            if G is None:
                continue
        else:
            G = random_graph(n, m, k, seed + j)
        cert = certify_expansion(G, r, c, working)
        if cert.verified:
            return G, cert
    raise CertificationFailed(f"no ({r},{k},{c})-expander with n={n}, m={m} in {max_retries} tries")


def neighbor_table(G: BipartiteGraph, i: int) -> tuple:
    return tuple(int(i in G.adj[u]) for u in range(2 ** G.n))


def neighbor_circuit(G: BipartiteGraph, i: int) -> CircuitIR:
    """sel_i: 1 exactly on the left vertices adjacent to right vertex i."""
    return compile_function(neighbor_table(G, i), G.n)


def alpha_of(u: int, n: int) -> tuple:
    return alpha_bits(u, n)
