"""Degree-2 pseudo-expectation for an unsatisfiable XOR system on a certified expander.

Grows a seeded (r, k, c)-expander, draws b until the system is
unsatisfiable, builds and checks Ẽ, then runs a fuzz corpus of candidate
refutations against the verifier and records the smallest duality gap.

    python3 scripts/xor_certificate.py --fuzz 10000 --out cert.json
"""

import argparse
import json
import random
import time
from dataclasses import asdict, dataclass

from mcsp_sos.certificates import (build_xor_pseudoexpectation, check_pseudoexpectation,
                                   duality_gap, fuzz_candidates)
from mcsp_sos.formulas import gen_xor_system
from mcsp_sos.graphs import build_desk_expander
from mcsp_sos.oracles import xor_sat
from mcsp_sos.proofs import verify_proof


@dataclass
class CertConfig:
    n: int = 5
    m: int = 24
    k: int = 3
    r: int = 4
    c: float = 2
    degree: int = 2
    seed: int = 0
    b_seed: int = 8
    fuzz: int = 10_000
    method: str = "greedy"


def run(cfg: CertConfig) -> dict:
    t0 = time.perf_counter()
    G, cert = build_desk_expander(cfg.n, cfg.m, cfg.k, cfg.r, cfg.seed, cfg.c, method=cfg.method)
    print(f"expander certified (graph seed {G.seed}, {cert.checked} sets) in {time.perf_counter() - t0:.1f}s")
    rng = random.Random(cfg.b_seed)
    tries = 0
    while True:
        tries += 1
        b = tuple(rng.randint(0, 1) for _ in range(2 ** cfg.n))
        if not xor_sat(G, b).sat:
            break
    Phi = gen_xor_system(G, b)
    E = build_xor_pseudoexpectation(Phi, G, b, cfg.degree, r=cfg.r, c=cfg.c, certificate=cert)
    v = check_pseudoexpectation(E, Phi, cfg.degree)
    print(f"b after {tries} draws; pseudo-expectation valid={v.valid} {v.check}")
    accepted, gaps = 0, []
    for pi in fuzz_candidates(Phi, cfg.degree, cfg.fuzz, seed=cfg.seed):
        if verify_proof(Phi, pi):
            accepted += 1
        gaps.append(duality_gap(E, Phi, pi))
    print(f"fuzz: {accepted} of {cfg.fuzz} accepted, min gap {min(gaps) if gaps else None}")
    return {"config": asdict(cfg), "graph": G.to_json(), "certificate": cert.to_json(),
            "b": list(b), "valid": v.valid, "failed_check": v.check or None,
            "pivots": [str(p) for p in v.pivots], "fuzz_accepted": accepted,
            "min_gap": str(min(gaps)) if gaps else None}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--fuzz", type=int, default=10_000)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    res = run(CertConfig(seed=args.seed, fuzz=args.fuzz))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(res, fh, indent=1)


if __name__ == "__main__":
    main()
