"""Degree and size of the upper-bound refutation across s.

For every f on n inputs with csize(f) > s, builds and verifies the
refutation and prints degree, size and the number of circuit monomials.
The per-s maxima are the regression values checked by the acceptance
suite.  Optionally also measures the CNF translation's degree change.

    python3 scripts/degree_regression.py --n 2 --s 1 2 --translate
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from mcsp_sos.formulas import gen_circuit_formula
from mcsp_sos.oracles import min_circuit_size
from mcsp_sos.proofs import verify_proof
from mcsp_sos.refuter import (build_upper_bound_refutation, cnf_refutation_from_polynomial,
                              translate_cnf_refutation)


@dataclass
class DegreeConfig:
    n: tuple = (1, 2)
    s: tuple = (1, 2)
    translate: bool = False
    rows: list = field(default_factory=list)


def tables(n):
    return [tuple((i >> j) & 1 for j in range(2 ** n)) for i in range(2 ** (2 ** n))]


def run(cfg: DegreeConfig) -> dict:
    best: dict = {}
    for n in cfg.n:
        for tt in tables(n):
            cs = min_circuit_size(tt, 4)
            for s in cfg.s:
                if cs <= s:
                    continue
                t0 = time.perf_counter()
                rep = build_upper_bound_refutation(tt, s, verify=False, report=True)
                ok = bool(verify_proof(gen_circuit_formula(tt, s), rep.proof, require_refutation=True))
                row = {"n": n, "tt": "".join(map(str, tt)), "s": s, "csize": cs, "degree": rep.degree,
                       "size": rep.size, "monomials": rep.monomials, "verified": ok,
                       "seconds": round(time.perf_counter() - t0, 2)}
                if cfg.translate and s == 1:
                    pc = cnf_refutation_from_polynomial(rep.proof, tt, s)
                    tr = translate_cnf_refutation(pc, tt, s, report=True)
                    row.update(cnf_degree=tr.degree_in, translated_degree=tr.degree_out)
                cfg.rows.append(row)
                best[s] = max(best.get(s, 0), rep.degree)
                print(json.dumps(row), flush=True)
                del rep
    print("max degree by s:", best)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--s", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--translate", action="store_true")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    cfg = DegreeConfig(tuple(args.n), tuple(args.s), args.translate)
    best = run(cfg)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"config": asdict(cfg), "max_degree": best}, fh, indent=1)


if __name__ == "__main__":
    main()
