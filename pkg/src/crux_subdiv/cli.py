"""Command-line entry point: ``crux-subdiv <command> [flags]``.

Every command prints one JSON document (or writes it to ``--out``). Exit
codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from ._accel import backend_name
from .crux import (
    as_fraction,
    clique_number,
    crux_bounds,
    crux_exact,
    expansion_profile,
    np_gadget,
    sse_crux_consistency,
)
from .expansion import (
    DEFAULT_EXACT_THRESHOLD,
    ExactCheckInfeasible,
    ExpanderParams,
    ExtractionError,
    check_robust_expander,
    extract_robust_expander,
)
from .experiments import experiment_bipartite_obstruction, experiment_dichotomy, experiment_jung
from .generators import generate
from .graph import Graph, GraphError, average_degree, components, parse_graph, serialize_graph
from .pipeline import PipelineConfig, pipeline_find_subdivision
from .subdivision import max_subdivision_bruteforce, verify_subdivision

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(Fraction(text))
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from err


def _load_graph(args) -> Graph:
    if (args.spec is None) == (args.graph is None):
        raise UsageError("give exactly one of --spec or --graph")
    if args.spec is not None:
        try:
            spec = json.loads(args.spec)
        except json.JSONDecodeError as err:
            raise UsageError(f"--spec is not valid JSON: {err}") from err
        if isinstance(spec, dict) and spec.get("kind") == "gnp" and "seed" not in spec:
            spec["seed"] = args.seed
        return generate(spec)
    text = sys.stdin.read() if args.graph == "-" else _read(args.graph)
    return parse_graph(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err}") from err


def _config(args) -> PipelineConfig:
    data = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(_read(args.config))
        except json.JSONDecodeError as err:
            raise UsageError(f"--config is not valid JSON: {err}") from err
    if getattr(args, "seed", None) is not None and "seed" not in data:
        data["seed"] = args.seed
    try:
        return PipelineConfig.from_json(data)
    except (TypeError, ValueError) as err:
        raise UsageError(f"bad config: {err}") from err


def _emit(args, payload, text: Optional[str] = None):
    out = text if text is not None else json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


# commands --------------------------------------------------------------


def cmd_gen(args) -> int:
    g = _load_graph(args)
    _emit(args, None, serialize_graph(g) + "\n")
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = _load_graph(args)
    d = average_degree(g) if g.n else Fraction(0)
    comps = components(g)
    _emit(
        args,
        {
            "n": g.n,
            "m": g.m,
            "d": float(d),
            "d_exact": _fmt(d),
            "δ": g.min_degree() if g.n else 0,
            "Δ": g.max_degree() if g.n else 0,
            "min_degree": g.min_degree() if g.n else 0,
            "max_degree": g.max_degree() if g.n else 0,
            "components": len(comps),
            "largest_component": max((len(c) for c in comps), default=0),
            "backend": backend_name(),
        },
    )
    return EXIT_OK


def cmd_extract_expander(args) -> int:
    g = _load_graph(args)
    params = ExpanderParams(float(args.eps), float(args.k))
    threshold = DEFAULT_EXACT_THRESHOLD if args.mode == "exact" else 0
    status = "ok"
    try:
        ex = extract_robust_expander(g, params, exact_threshold=threshold, trials=args.trials, seed=args.seed)
        sub, witness, iters = ex.subgraph, ex.witness.to_json(), ex.iterations
    except ExtractionError as err:
        sub, witness, iters, status = err.best, None, None, "iteration-cap"
    h = sub.graph
    dh = average_degree(h)
    _emit(
        args,
        {
            "status": status,
            "vertices": list(sub.ids),
            "n": h.n,
            "m": h.m,
            "d": _fmt(dh),
            "δ": h.min_degree(),
            "d_input": _fmt(average_degree(g)),
            "iterations": iters,
            "witness": witness,
        },
    )
    return EXIT_OK


def cmd_check_expander(args) -> int:
    g = _load_graph(args)
    params = ExpanderParams(float(args.eps), float(args.k))
    w = check_robust_expander(g, params, args.mode, trials=args.trials, seed=args.seed)
    _emit(args, w.to_json())
    return EXIT_OK


def cmd_crux(args) -> int:
    g = _load_graph(args)
    if args.mode == "exact":
        rep = crux_exact(g, args.alpha)
    else:
        rep = crux_bounds(g, args.alpha, seed=args.seed)
    _emit(args, rep.to_json())
    return EXIT_OK


def cmd_profile(args) -> int:
    g = _load_graph(args)
    rep = expansion_profile(g, args.delta, args.mode, trials=args.trials, seed=args.seed)
    _emit(args, rep.to_json())
    return EXIT_OK


def cmd_sse(args) -> int:
    g = _load_graph(args)
    rep = sse_crux_consistency(g, args.eps)
    _emit(args, rep.to_json())
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_find_subdivision(args) -> int:
    g = _load_graph(args)
    if args.mode == "exact":
        t, cert = max_subdivision_bruteforce(g)
        trace = None
    else:
        res = pipeline_find_subdivision(g, _config(args))
        t, cert, trace = res.t, res.certificate, res
    if args.trace and trace is not None:
        Path(args.trace).write_text(trace.trace_jsonl() + "\n")
    violations = verify_subdivision(g, cert) if cert is not None else []
    _emit(
        args,
        {
            "t": t,
            "certificate": cert.to_json() if cert else None,
            "verified": not violations,
            "violations": violations,
        },
    )
    return EXIT_FAIL if violations else EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args)
    if not args.cert:
        raise UsageError("verify needs --cert")
    data = _read(args.cert)
    try:
        parsed = json.loads(data)
    except json.JSONDecodeError:
        parsed = None  # the verifier reports unparseable text as malformed
    if isinstance(parsed, dict) and "paths" not in parsed and isinstance(parsed.get("certificate"), dict):
        data = parsed["certificate"]  # a find-subdivision report
    violations = verify_subdivision(g, data)
    _emit(args, {"valid": not violations, "violations": violations})
    return EXIT_FAIL if violations else EXIT_OK


def cmd_gadget(args) -> int:
    g = _load_graph(args)
    gp = np_gadget(g, args.k, args.eps)
    d = average_degree(gp)
    _emit(
        args,
        {
            "k": args.k,
            "eps": _fmt(args.eps),
            "n": gp.n,
            "m": gp.m,
            "d": _fmt(d),
            "omega": clique_number(gp),
            "graph": serialize_graph(gp),
        },
    )
    return EXIT_OK


def _experiment_out(args, rep) -> int:
    if args.csv:
        Path(args.csv).write_text(rep.to_csv())
    _emit(args, None, rep.dumps() + "\n")
    return EXIT_OK


def cmd_exp_dichotomy(args) -> int:
    rep = experiment_dichotomy(args.n, args.p, args.trials, _config(args), args.seed)
    return _experiment_out(args, rep)


def cmd_exp_jung(args) -> int:
    rep = experiment_jung(args.a, args.copies, _config(args))
    return _experiment_out(args, rep)


def cmd_exp_bipartite(args) -> int:
    host = None
    if args.host:
        try:
            host = json.loads(args.host)
        except json.JSONDecodeError as err:
            raise UsageError(f"--host is not valid JSON: {err}") from err
    rep = experiment_bipartite_obstruction(args.t, args.c, args.seed, host)
    return _experiment_out(args, rep)


# parser ----------------------------------------------------------------


def _p_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad probability list {text!r}") from err


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crux-subdiv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")
    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("--spec", help="generator spec as JSON")
    graph_in.add_argument("--graph", help="edge-list file ('-' for stdin)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, graph=True):
        p = sub.add_parser(name, help=help_, parents=[common] + ([graph_in] if graph else []))
        p.set_defaults(fn=fn)
        return p

    add("gen", cmd_gen, "write a generated graph as an edge list")
    add("analyze", cmd_analyze, "basic graph statistics")

    p = add("extract-expander", cmd_extract_expander, "extract a robust expander subgraph")
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--trials", type=int)

    p = add("check-expander", cmd_check_expander, "test the robust expander condition")
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--trials", type=int)

    p = add("crux", cmd_crux, "crux order (exact) or certified bounds (sampled)")
    p.add_argument("--alpha", type=_rational, default=Fraction(1, 100))
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")

    p = add("profile", cmd_profile, "small-set expansion profile")
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--trials", type=int)

    p = add("sse", cmd_sse, "check the expansion-profile and crux inequality")
    p.add_argument("--eps", type=_rational, default=Fraction(1, 2))

    p = add("find-subdivision", cmd_find_subdivision, "largest clique subdivision found")
    p.add_argument("--config", help="pipeline config JSON file")
    p.add_argument("--mode", choices=("exact", "sampled"), default="sampled",
                   help="exact runs the exhaustive oracle (n <= 12)")
    p.add_argument("--trace", help="write the stage trace as JSON lines")

    p = add("verify", cmd_verify, "verify a subdivision certificate")
    p.add_argument("--cert", help="certificate JSON file")

    p = add("gadget", cmd_gadget, "clique-to-crux reduction graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=_rational, default=Fraction(1, 2))

    p = add("experiment-dichotomy", cmd_exp_dichotomy, "pipeline t on G(n, p) across p", graph=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=_p_list, required=True, help="comma-separated probabilities")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--config")
    p.add_argument("--csv", help="also write per-trial rows as CSV")

    p = add("experiment-jung", cmd_exp_jung, "t on K_{a,a} versus copies of it", graph=False)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--copies", type=int, default=2)
    p.add_argument("--config")
    p.add_argument("--csv")

    p = add("experiment-bipartite", cmd_exp_bipartite, "max cross edges over small splits", graph=False)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--host", help="generator spec overriding the random host")
    p.add_argument("--csv")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (UsageError, GraphError, ExactCheckInfeasible, ValueError) as err:
        print(f"crux-subdiv {args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
