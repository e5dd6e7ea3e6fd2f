"""Command-line front end.

Exit codes: 0 means YES (or success), 1 means NO (or a failed cross-check),
2 means an error.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

from .errors import BudgetExceeded, CsrError, NotBinary, WrongAlgorithm
from .generators import FAMILIES, GenParams, generate
from .implication import (
    build_implication_graph,
    count_non_boolean,
    decide_boolean,
    nb_implication_graph,
    nb_partition_solve,
)
from .io import (
    dumps_instance,
    load_instance,
    parse_kkclique,
    parse_lclique,
    parse_rword,
    read_json,
    save_instance,
)
from .model import primal_graph
from .oracle import (
    build_solution_graph,
    is_reconfigurable,
    shortest_reconfiguration,
    shortest_walk,
    validate_walk,
)
from .reduce import greedy_identify_twins
from .specialcase import detect_lhr, solve_lhr_k3_detail
from .structural import (
    compute_treedepth_decomposition,
    cover_of,
    kernelize_td,
    kernelize_vc_weighted,
    minimum_vertex_cover,
    solve_vc_csg,
)
from .transform import (
    hitting_set_gadget,
    kk_clique_to_2csr,
    labeled_clique_to_hr,
    lcr4_to_2csr3,
    pad_complete,
    rword_to_lhr_path,
)

ALGORITHMS = ("auto", "oracle", "boolean", "nb", "lhr3", "vc-csg", "td-kernel")
NB_SMALL = 3
VC_SMALL = 4


@dataclass
class SolveReport:
    answer: bool
    algorithm: str
    opt: object = None
    witness: list = None
    timings: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def lines(self, labels=None):
        out = ["YES" if self.answer else "NO"]
        if self.opt is not None:
            out.append(f"OPT={'inf' if self.opt == math.inf else self.opt}")
        out.append(f"# algorithm: {self.algorithm}")
        for key in sorted(self.stats):
            out.append(f"# {key}: {self.stats[key]}")
        if self.witness is not None:
            for i in range(1, len(self.witness)):
                a, b = self.witness[i - 1], self.witness[i]
                for v in a:
                    if a[v] != b[v]:
                        x, y = (a[v], b[v]) if labels is None else (labels[a[v]], labels[b[v]])
                        out.append(f"# step {i}: {v} {x} -> {y}")
        return out


def _is_lhr(csp):
    if not csp.constraints or any(c.arity != 2 for c in csp.constraints):
        return None
    return detect_lhr(csp)


def auto_choice(inst):
    csp = inst.csp
    if csp.k == 2 and csp.max_arity <= 2:
        return "boolean"
    if csp.k <= 3 and _is_lhr(csp) is not None:
        return "lhr3"
    if csp.max_arity <= 2 and count_non_boolean(csp) <= NB_SMALL:
        return "nb"
    if len(minimum_vertex_cover(primal_graph(csp.graph))) <= VC_SMALL:
        return "vc-csg"
    return "td-kernel"


def dispatch(inst, algo="auto", shortest=False, witness=False, cover=None, limit=None):
    """Run one selector and return a ``SolveReport``.

    ``shortest`` and ``witness`` always come from the oracle on the input
    instance; ``shortest`` with ``auto`` selects the oracle outright.
    """
    if algo not in ALGORITHMS:
        raise WrongAlgorithm(f"unknown algorithm {algo!r}")
    if shortest and algo not in ("auto", "oracle"):
        raise WrongAlgorithm("--shortest is only available with the oracle")
    if algo == "auto":
        algo = "oracle" if shortest else auto_choice(inst)
    stats = {}
    t0 = time.perf_counter()
    opt = None
    if algo == "oracle":
        if shortest:
            opt = shortest_reconfiguration(inst, limit)
            answer = opt != math.inf
        else:
            answer = is_reconfigurable(inst, limit)
    elif algo == "boolean":
        answer = decide_boolean(inst)
    elif algo == "nb":
        stats["nb"] = count_non_boolean(inst.csp)
        answer = nb_partition_solve(inst, limit)
    elif algo == "lhr3":
        if inst.csp.max_arity != 2 or any(c.arity != 2 for c in inst.csp.constraints):
            raise WrongAlgorithm("lhr3 needs a 2-uniform instance")
        answer, branches = solve_lhr_k3_detail(inst, limit=limit)
        stats["branches"] = ",".join(branches) or "none"
    elif algo == "vc-csg":
        cover = cover_of(inst, cover)
        stats["cover"] = ",".join(v for v in inst.csp.vertices if v in cover)
        answer = solve_vc_csg(inst, cover, limit)
    else:
        td = compute_treedepth_decomposition(inst.csp.graph)
        kernel, _ = kernelize_td(inst, td)
        stats["treedepth"] = f"{td.depth()} ({'exact' if td.exact else 'heuristic'})"
        stats["kernel_vertices"] = f"{inst.csp.n} -> {kernel.csp.n}"
        answer = is_reconfigurable(kernel, limit)
    timings = {"solve": time.perf_counter() - t0}
    walk = None
    if witness and answer:
        t1 = time.perf_counter()
        walk = shortest_walk(inst, limit)
        validate_walk(inst, walk)
        timings["witness"] = time.perf_counter() - t1
    return SolveReport(answer, algo, opt, walk, timings, stats)


def _parse_cover(text):
    if text is None:
        return None
    return [x for x in (s.strip() for s in text.split(",")) if x]


def cmd_solve(args):
    inst = load_instance(args.input)
    report = dispatch(
        inst,
        args.algo,
        shortest=args.shortest,
        witness=args.witness,
        cover=_parse_cover(args.cover),
    )
    if args.emit_solution_graph:
        sg = build_solution_graph(inst.csp, inst.weights)
        with open(args.emit_solution_graph, "w", encoding="utf-8") as fh:
            fh.write(sg.emit())
    if args.emit_implication_graph:
        if inst.csp.k == 2:
            ig = build_implication_graph(inst.csp)
        else:
            if inst.csp.max_arity > 2:
                raise NotBinary("implication graphs need hyperedges of size at most two")
            ig = nb_implication_graph(inst)
        with open(args.emit_implication_graph, "w", encoding="utf-8") as fh:
            fh.write("" if ig is None else ig.emit())
    print("\n".join(report.lines(inst.csp.domain.labels)))
    return 0 if report.answer else 1


def cmd_kernelize(args):
    inst = load_instance(args.input)
    trace = []
    before = inst.csp.n
    extra = {}
    if args.rule == "twins":
        out = greedy_identify_twins(inst, inst.csp.vertices, weighted=args.weighted, trace=trace)
    elif args.rule == "vc-weighted":
        cover = cover_of(inst, _parse_cover(args.cover))
        extra["cover"] = [v for v in inst.csp.vertices if v in cover]
        out = kernelize_vc_weighted(inst, cover, trace=trace)
    else:
        td = compute_treedepth_decomposition(inst.csp.graph)
        out, td = kernelize_td(inst, td, trace=trace)
        extra["treedepth"] = td.depth()
        extra["treedepth_exact"] = td.exact
    save_instance(out, args.output)
    report = {
        "rule": args.rule,
        "vertices_before": before,
        "vertices_after": out.csp.n,
        "applications": [list(t) for t in trace],
        **extra,
    }
    with open(args.output + ".report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")
    print(f"vertices: {before} -> {out.csp.n} ({len(trace)} identifications)")
    return 0


TRANSFORMS = {
    "k3hard": ("instance", lcr4_to_2csr3),
    "pad": ("instance", pad_complete),
    "hitting": ("instance", hitting_set_gadget),
    "kkclique": (parse_kkclique, kk_clique_to_2csr),
    "lclique": (parse_lclique, labeled_clique_to_hr),
    "rword": (parse_rword, rword_to_lhr_path),
}


def cmd_transform(args):
    reader, compile_ = TRANSFORMS[args.reduction]
    if reader == "instance":
        src = load_instance(args.input)
    else:
        src = reader(read_json(args.input))
    out = compile_(src)
    save_instance(out, args.output)
    print(f"n={out.csp.n} k={out.csp.k}")
    return 0


def analyze_lines(inst):
    csp = inst.csp
    lines = [f"n: {csp.n}", f"k: {csp.k}", f"max arity: {csp.max_arity}"]
    lines.append(f"vc: {len(minimum_vertex_cover(primal_graph(csp.graph)))}")
    td = compute_treedepth_decomposition(csp.graph)
    lines.append(f"tree-depth: {td.depth()} ({'exact' if td.exact else 'heuristic'})")
    lines.append(f"nb: {count_non_boolean(csp)}")
    form = _is_lhr(csp)
    lines.append(f"lhr: yes, |V(H)|={len(form.values)}" if form is not None else "lhr: no")
    return lines


def cmd_analyze(args):
    print("\n".join(analyze_lines(load_instance(args.input))))
    return 0


def _gen_params(args):
    return GenParams(
        n=args.n,
        k=args.k,
        arity=args.arity,
        density=args.density,
        tightness=args.tightness,
        family=args.family,
        endpoints=args.endpoints,
    )


def cmd_gen(args):
    inst = generate(_gen_params(args), args.seed)
    if args.output:
        save_instance(inst, args.output)
    else:
        sys.stdout.write(dumps_instance(inst))
    return 0


def crosscheck(params, seed, count, algos=None, limit=None):
    """Compare each selector with the oracle on ``count`` generated instances.

    Returns rows ``(algo, agree, disagree, skipped)``. Instance ``i`` uses seed
    ``seed + i``; a selector whose preconditions fail is counted as skipped.
    """
    algos = [a for a in (algos or ALGORITHMS) if a != "oracle"]
    table = {a: [0, 0, 0] for a in algos}
    for i in range(count):
        inst = generate(params, seed + i)
        try:
            truth = is_reconfigurable(inst, limit)
        except BudgetExceeded:
            for a in algos:
                table[a][2] += 1
            continue
        for a in algos:
            try:
                got = dispatch(inst, a, limit=limit).answer
            except (WrongAlgorithm, NotBinary, BudgetExceeded):
                table[a][2] += 1
                continue
            table[a][0 if got == truth else 1] += 1
    return [(a, *table[a]) for a in algos]


def cmd_crosscheck(args):
    algos = args.algos.split(",") if args.algos else None
    rows = crosscheck(_gen_params(args), args.seed, args.count, algos)
    print(f"{'algorithm':<10} {'agree':>6} {'disagree':>8} {'skipped':>7} result")
    bad = False
    for a, ok, wrong, skipped in rows:
        bad = bad or wrong > 0
        print(f"{a:<10} {ok:>6} {wrong:>8} {skipped:>7} {'FAIL' if wrong else 'PASS'}")
    return 1 if bad else 0


def _add_gen_options(p):
    p.add_argument("--family", choices=FAMILIES, default="random")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--tightness", type=float, default=0.6)
    p.add_argument("--endpoints", choices=("extremes", "random"), default="extremes")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="csr", description="Constraint satisfaction reconfiguration toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide reconfigurability")
    p.add_argument("--input", required=True)
    p.add_argument("--algo", choices=ALGORITHMS, default="auto")
    p.add_argument("--shortest", action="store_true", help="also report the weighted optimum (oracle)")
    p.add_argument("--witness", action="store_true", help="print a validated reconfiguration walk")
    p.add_argument("--cover", help="comma-separated vertex cover for vc-csg")
    p.add_argument("--emit-solution-graph", metavar="PATH")
    p.add_argument("--emit-implication-graph", metavar="PATH")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("kernelize", help="apply a reduction rule and write the kernel")
    p.add_argument("--rule", choices=("twins", "td", "vc-weighted"), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--cover")
    p.add_argument("--weighted", action="store_true", help="twins: add removed weights to the kept twin")
    p.set_defaults(run=cmd_kernelize)

    p = sub.add_parser("transform", help="compile a source instance")
    p.add_argument("--reduction", choices=sorted(TRANSFORMS), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("analyze", help="print structural parameters")
    p.add_argument("--input", required=True)
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("gen", help="generate a random instance")
    _add_gen_options(p)
    p.add_argument("--output")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("crosscheck", help="compare algorithms with the oracle")
    _add_gen_options(p)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--algos", help="comma-separated selectors (default: all)")
    p.set_defaults(run=cmd_crosscheck)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (CsrError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
