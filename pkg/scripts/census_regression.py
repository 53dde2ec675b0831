"""Remaining-variable census of restriction plans against t·k + m.

Sweeps seeded random graphs and heuristics, prints one row per plan and
the constant c = ceil(max census / (t·k + m)) used by the acceptance test.

    python3 scripts/census_regression.py --out census.json
"""

import argparse
import json
import math
import random
from dataclasses import asdict, dataclass, field

from mcsp_sos.circuits import HeuristicCircuit, partial_heuristic, trivial_heuristic
from mcsp_sos.graphs import random_graph
from mcsp_sos.reduction import build_restriction, hand_census


@dataclass
class CensusConfig:
    ns: tuple = (2, 3, 4)
    ks: tuple = (1, 2, 3, 4, 5, 6)
    extra_m: tuple = (0, 2, 5)
    known_fractions: tuple = (0.0, 0.25, 0.5, 0.75)
    seed: int = 0
    rows: list = field(default_factory=list)


def run(cfg: CensusConfig):
    rng = random.Random(cfg.seed)
    worst = 0.0
    for n in cfg.ns:
        N = 2 ** n
        for k in cfg.ks:
            for dm in cfg.extra_m:
                m = k + dm
                G = random_graph(n, m, k, rng.randrange(10 ** 6))
                tt = tuple(rng.randint(0, 1) for _ in range(N))
                for frac in cfg.known_fractions:
                    known = rng.sample(range(N), int(frac * N))
                    H = partial_heuristic(tt, known) if known else trivial_heuristic(n)
                    t = N - len(known)
                    plan = build_restriction(tt, HeuristicCircuit(H.circuit, t), G)
                    census = plan.remaining_vars
                    assert census == hand_census(plan)
                    ratio = census / (t * k + m)
                    worst = max(worst, ratio)
                    cfg.rows.append({"n": n, "m": m, "k": k, "t": t, "s": plan.s,
                                     "census": census, "ratio": round(ratio, 4)})
                    print(f"n={n} m={m:2d} k={k} t={t:2d} s={plan.s:4d} census={census:4d} "
                          f"ratio={ratio:.3f}", flush=True)
    c = math.ceil(worst)
    print(f"max ratio {worst:.4f}  ->  c = {c}")
    return worst, c


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    cfg = CensusConfig(seed=args.seed)
    worst, c = run(cfg)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"config": asdict(cfg), "max_ratio": worst, "c": c}, fh, indent=1)


if __name__ == "__main__":
    main()
