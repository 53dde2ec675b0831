"""Command-line frontend.  ``mcsp-sos <command> --help`` lists the flags."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from contextlib import contextmanager

from . import certificates, formulas, graphs, oracles, proofs, reduction, refuter
from .circuits import HeuristicCircuit, tt_from_hex, tt_to_hex, trivial_heuristic
from .errors import MCSPError


def parse_tt(text: str, n: int) -> tuple:
    """A 0/1 string of length 2^n, or hex digits (optionally 0x-prefixed)."""
    text = text.strip()
    if len(text) == 2 ** n and set(text) <= {"0", "1"} and not text.startswith("0x"):
        return tuple(int(c) for c in text)
    return tt_from_hex(text, n)


def parse_bits(text: str) -> tuple:
    text = text.strip()
    if set(text) - {"0", "1", ","}:
        raise ValueError(f"not a bit string: {text!r}")
    return tuple(int(c) for c in text.replace(",", ""))


def _load(path: str):
    with open(path) as fh:
        return json.load(fh)


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _dump(obj, path):
    with _sink(path) as fh:
        json.dump(obj, fh, indent=1, sort_keys=False)
        fh.write("\n")


def _graph(path: str) -> graphs.BipartiteGraph:
    d = _load(path)
    return graphs.BipartiteGraph.from_json(d.get("graph", d))


def _heuristic(args, n: int) -> HeuristicCircuit:
    if getattr(args, "heuristic", None) in (None, "trivial"):
        return trivial_heuristic(n)
    return HeuristicCircuit.from_json(_load(args.heuristic))


# ---------------------------------------------------------------- commands

def cmd_gen_formula(args):
    tt = parse_tt(args.truthtable, args.n)
    if args.monotone:
        P, _ = formulas.gen_monotone_formula(tt, args.s)
    else:
        P = formulas.gen_circuit_formula(tt, args.s)
    d = formulas.system_to_json(P)
    d["seed"] = args.seed
    _dump(d, args.out)


def cmd_gen_cnf(args):
    tt = parse_tt(args.truthtable, args.n)
    F = formulas.gen_circuit_cnf(tt, args.s)
    if args.format == "dimacs":
        with _sink(args.out) as fh:
            formulas.emit_dimacs(F, fh)
    else:
        d = formulas.system_to_json(F)
        d["seed"] = args.seed
        _dump(d, args.out)


def cmd_gen_xor(args):
    G = _graph(args.graph)
    cons = None if args.constraints is None else [int(x) for x in args.constraints.split(",")]
    P = formulas.gen_xor_system(G, parse_bits(args.b), cons)
    d = formulas.system_to_json(P)
    d["seed"] = args.seed
    _dump(d, args.out)


def cmd_gen_graph(args):
    if args.r is None:
        G = graphs.random_graph(args.n, args.m, args.k, args.seed)
        cert = None
    else:
        G, cert = graphs.build_desk_expander(args.n, args.m, args.k, args.r, args.seed, args.c,
                                             max_retries=args.retries, method=args.method)
    out = {"graph": G.to_json(), "seed": args.seed}
    if cert is not None:
        out["certificate"] = cert.to_json()
    _dump(out, args.out)


def _plan_from_args(args):
    G = _graph(args.graph)
    tt = parse_tt(args.truthtable, G.n)
    C = _heuristic(args, G.n)
    if args.monotone:
        return reduction.build_monotone_restriction(tt, C, G, args.s, args.level), C
    return reduction.build_restriction(tt, C, G, args.s), C


def cmd_restrict(args):
    plan, C = _plan_from_args(args)
    d = plan.to_json()
    d["heuristic"] = C.to_json()
    d["seed"] = args.seed
    _dump(d, args.out)


def _plan_from_json(d):
    G = graphs.BipartiteGraph.from_json(d["graph"])
    C = HeuristicCircuit.from_json(d["heuristic"]) if "heuristic" in d else trivial_heuristic(G.n)
    if d.get("monotone"):
        plan = reduction.build_monotone_restriction(d["truthtable"], C, G, d["s"], d["level"])
    else:
        plan = reduction.build_restriction(d["truthtable"], C, G, d["s"])
    if plan.to_json()["rho"] != d["rho"]:
        raise MCSPError("stored restriction differs from the rebuilt one")
    return plan


def cmd_check_plan(args):
    plan = _plan_from_json(_load(args.plan))
    res = {"natural": plan.is_natural(), "remaining_vars": plan.remaining_vars}
    mi = reduction.check_m_independent(plan)
    res["m_independent"] = mi.ok
    gs = reduction.check_k_determined(plan)
    res["k_determined"] = True
    res["parity_outputs"] = all(
        gs[("outwire", plan.s, al)] == (reduction.parity_polynomial(g.nbrs, plan.Y)
                                        if isinstance(g, reduction.Parity) else g.bit)
        for al, g in enumerate(plan.gout_spec))
    _dump(res, args.out)
    if not all(v for k, v in res.items() if k != "remaining_vars"):
        return 1
    return 0


def cmd_refute_upper(args):
    tt = parse_tt(args.truthtable, args.n)
    rep = refuter.build_upper_bound_refutation(tt, args.s, verify=not args.no_verify, report=True)
    d = proofs.proof_to_json(rep.proof, formulas.VarCatalog(args.n, args.s))
    d["meta"] = {"n": args.n, "s": args.s, "truthtable": list(tt), "degree": rep.degree,
                 "size": rep.size, "circuit_monomials": rep.monomials, "seed": args.seed}
    _dump(d, args.out)
    print(f"degree {rep.degree}, size {rep.size}, monomials {rep.monomials}", file=sys.stderr)


def cmd_translate_cnf(args):
    tt = parse_tt(args.truthtable, args.n)
    F = formulas.gen_circuit_cnf(tt, args.s)
    pi = proofs.proof_from_json(_load(args.proof), F.catalog)
    rep = refuter.translate_cnf_refutation(pi, tt, args.s, report=True)
    d = proofs.proof_to_json(rep.proof, formulas.VarCatalog(args.n, args.s))
    d["meta"] = {"degree_in": rep.degree_in, "degree_out": rep.degree_out, "seed": args.seed}
    _dump(d, args.out)


def cmd_verify(args):
    P = formulas.system_from_json(_load(args.system))
    pi = proofs.proof_from_json(_load(args.proof), P.pool)
    v = proofs.verify_proof(P, pi, require_refutation=args.refutation)
    if v:
        print(f"accepted: degree {proofs.proof_degree(pi, P)}, size {proofs.proof_size(pi)}")
        return 0
    print(f"rejected: {v.reason}", file=sys.stderr)
    return 1


def cmd_certify_xor(args):
    G = _graph(args.graph)
    b = parse_bits(args.b)
    Phi = formulas.gen_xor_system(G, b)
    sat = oracles.xor_sat(G, b)
    E = certificates.build_xor_pseudoexpectation(Phi, G, b, args.degree, r=args.r, c=args.c)
    v = certificates.check_pseudoexpectation(E, Phi, args.degree)
    d = E.to_json()
    d.update({"valid": v.valid, "failed_check": v.check or None, "xor_sat": sat.sat, "seed": args.seed})
    _dump(d, args.out)
    return 0 if v else 1


def cmd_oracle(args):
    if args.which == "mcs":
        tt = parse_tt(args.truthtable, args.n)
        r = oracles.min_circuit_size(tt, args.s_max, args.monotone)
        print(f"> {args.s_max}" if r is None else r)
    elif args.which == "xorsat":
        r = oracles.xor_sat(_graph(args.graph), parse_bits(args.b))
        print("SAT " + "".join(map(str, r.witness)) if r else "UNSAT")
    elif args.which == "contract":
        C = HeuristicCircuit.from_json(_load(args.heuristic))
        tt = parse_tt(args.truthtable, C.n)
        v = oracles.heuristic_contract_check(C, tt, args.t, args.level)
        print(f"{'valid' if v else 'invalid'} bottom={v.bottom_count}" + ("" if v else f" {v.reason} {v.witness}"))
        return 0 if v else 1
    elif args.which == "sat":
        P = formulas.system_from_json(_load(args.system))
        r = oracles.formula_sat(P)
        if r.sat:
            ones = sorted(P.pool.name(v) for v, b in r.assignment.items() if b)
            print("SAT " + " ".join(ones))
        else:
            print("UNSAT")
    return 0


def params_report(n: int, s: int, t=None, eps: float = 0.1, gamma: float = 1.0) -> str:
    M = 2 ** n
    lines = []
    exp_d = math.log(s) / math.log(n) if n > 1 else float("inf")
    lines.append(f"inputs n = {n}, circuit size s = {s}, left vertices M = 2^n = {M}")
    lines.append(f"d(eps) relation: the bounds apply once s >= n^d(eps); here s = n^{exp_d:.3f}, "
                 f"so they apply whenever d(eps) <= {exp_d:.3f}")
    lines.append(f"degree lower bound: Omega_eps(s^(1-eps)) with s^(1-eps) = {s ** (1 - eps):.4g}")
    tt_ = s if t is None else t
    lines.append(f"size lower bound (t >= s, heuristic of size s/2 = {s / 2:g}, t = {tt_}): "
                 f"exp(Omega_eps(s^(2-eps)/t)) with s^(2-eps)/t = {s ** (2 - eps) / tt_:.4g}")
    lines.append(f"monotone size lower bound uses a heuristic of size s/10 = {s / 10:g}")
    lines.append(f"expander (gamma = {gamma:g}, eps = {eps:g}): right side N <= d^2 * r^(1+gamma), "
                 f"left degree d = O(((log M)(log r)/eps)^(1+1/gamma)) with log M = {n * math.log(2):.4g}")
    lines.append("size-degree tradeoff: a system of degree k over N Boolean variables needing "
                 "degree d has minimum SoS size at least exp(Omega((d-k)^2/N))")
    return "\n".join(lines)


def cmd_params_report(args):
    print(params_report(args.n, args.s, args.t, args.eps, args.gamma))


def cmd_pipeline(args):
    """Run the argv lists of a manifest in order; ``{work}`` expands to the work dir."""
    man = _load(args.manifest)
    work = args.workdir or man.get("workdir") or os.path.dirname(os.path.abspath(args.manifest))
    os.makedirs(work, exist_ok=True)
    seed = man.get("seed", args.seed)
    digests = []
    for step in man["steps"]:
        argv = [a.replace("{work}", work) for a in step] + ["--seed", str(seed)]
        code = main(argv)
        if code:
            print(f"step {' '.join(step)} failed with {code}", file=sys.stderr)
            return code
        outs = [argv[i + 1] for i, a in enumerate(argv[:-1]) if a == "--out"]
        for p in outs:
            with open(p, "rb") as fh:
                digests.append({"file": os.path.relpath(p, work), "sha256": hashlib.sha256(fh.read()).hexdigest()})
    _dump({"seed": seed, "outputs": digests}, args.out)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcsp-sos", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="randomness seed, recorded in outputs")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("gen-formula", cmd_gen_formula, help="polynomial encoding Circuit_s(f) as JSON")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--truthtable", required=True)
    sp.add_argument("--monotone", action="store_true")

    sp = add("gen-cnf", cmd_gen_cnf, help="CNF encoding (DIMACS or JSON)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--truthtable", required=True)
    sp.add_argument("--format", choices=["dimacs", "json"], default="dimacs")

    sp = add("gen-xor", cmd_gen_xor, help="XOR system over a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--constraints", default=None, help="comma-separated left vertices")

    sp = add("gen-graph", cmd_gen_graph, help="seeded random graph, certified when --r is given")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--c", type=float, default=2)
    sp.add_argument("--method", choices=["random", "greedy"], default="random")
    sp.add_argument("--retries", type=int, default=200)

    for name, fn in (("restrict", cmd_restrict),):
        sp = add(name, fn, help="restriction plan for Circuit_s(f)")
        sp.add_argument("--graph", required=True)
        sp.add_argument("--truthtable", required=True)
        sp.add_argument("--s", type=int, default=None, help="default: exact scaffold size")
        sp.add_argument("--heuristic", default="trivial")
        sp.add_argument("--monotone", action="store_true")
        sp.add_argument("--level", type=int, default=None)

    sp = add("check-plan", cmd_check_plan, help="naturalness, m-independence, k-determinedness")
    sp.add_argument("--plan", required=True)

    sp = add("refute-upper", cmd_refute_upper, help="explicit refutation when csize(f) > s")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--truthtable", required=True)
    sp.add_argument("--no-verify", action="store_true")

    sp = add("translate-cnf", cmd_translate_cnf, help="CNF refutation to polynomial refutation")
    sp.add_argument("--proof", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--truthtable", required=True)

    sp = add("verify", cmd_verify, help="exact proof check")
    sp.add_argument("--system", required=True)
    sp.add_argument("--proof", required=True)
    sp.add_argument("--refutation", action="store_true", help="require target -1")

    sp = add("certify-xor", cmd_certify_xor, help="pseudo-expectation for an XOR system")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--c", type=float, default=2)

    sp = add("oracle", cmd_oracle, help="brute-force ground truth")
    osub = sp.add_subparsers(dest="which", required=True)
    o = osub.add_parser("mcs", parents=[common])
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--truthtable", required=True)
    o.add_argument("--s-max", type=int, default=4)
    o.add_argument("--monotone", action="store_true")
    o = osub.add_parser("xorsat", parents=[common])
    o.add_argument("--graph", required=True)
    o.add_argument("--b", required=True)
    o = osub.add_parser("contract", parents=[common])
    o.add_argument("--heuristic", required=True)
    o.add_argument("--truthtable", required=True)
    o.add_argument("--t", type=int, required=True)
    o.add_argument("--level", type=int, default=None)
    o = osub.add_parser("sat", parents=[common])
    o.add_argument("--system", required=True)

    sp = add("params-report", cmd_params_report, help="symbolic parameter relations")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, default=None)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--gamma", type=float, default=1.0)

    sp = add("pipeline", cmd_pipeline, help="replay a JSON manifest of commands")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--workdir", default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        code = args.fn(args)
    except (MCSPError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return int(code or 0)


if __name__ == "__main__":
    sys.exit(main())
