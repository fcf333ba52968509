"""
Command-line entry point for the private densest-subgraph toolkit.

    dsg --algo ledp --input g.el --eps 4 --delta 1e-6 --trials 20 --seed 7 --out r.csv
    dsg gen planted --n 200 --k 30 --pin 0.85 --pout 0.01 --seed 1 --out g.el
    dsg summarize r.csv
    dsg replay run.jsonl
"""
import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from src import config
from src.graph.density import density, directed_density
from src.graph.edge_list import read_edge_list, write_edge_list
from src.graph.generators import gnp, planted_dense, planted_directed, random_costs
from src.graph.graphs import NodeWeightedGraph
from src.harness.runner import ALGORITHMS, RunSettings, graph_kind, replay_transcript, run_trials, write_results
from src.harness.summary import format_summary, summarize
from src.utils.error_handler import DSGError, ErrorResponse, InvalidArgumentError
from src.utils.logger import get_logger
from src.utils.logging_config import configure_logging

logger = get_logger(__name__)

COMMANDS = ("run", "gen", "summarize", "replay")
GENERATORS = ("planted", "gnp", "planted-directed", "weights")


def _add_run_parser(subparsers) -> None:
    run = subparsers.add_parser("run", help="run an algorithm for a number of trials")
    run.add_argument("--algo", required=True, choices=ALGORITHMS)
    run.add_argument("--input", required=True, help="edge-list file")
    run.add_argument("--eps", type=float)
    run.add_argument("--delta", type=float)
    run.add_argument("--c", type=float)
    run.add_argument("--beta", type=float)
    run.add_argument("--eta", type=float)
    run.add_argument("--T", type=int, help="override the number of MWU rounds")
    run.add_argument("--sigma", type=float, help="override the per-round gaussian scale")
    run.add_argument("--zero-noise", action="store_true", help="non-private debugging run")
    run.add_argument("--trials", type=int, default=1)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", default="-", help="result file ('-' for stdout)")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--reveal-truth", action="store_true",
                     help="add the non-private true_density and lambda_star columns")
    run.add_argument("--reference-density", type=float,
                     help="public reference optimum (e.g. a planted block density) for summaries")
    run.add_argument("--transcript", help="save trial 0's transcript as JSON lines")
    run.add_argument("--value-mode", choices=("whp", "expectation"), default="whp")
    run.add_argument("--mode", choices=("local", "central"), default="local", help="runtime execution mode")
    run.add_argument("--n-jobs", type=int)
    run.add_argument("--config", help="key=value settings file")
    run.add_argument("--no-progress", action="store_true")


def _add_gen_parser(subparsers) -> None:
    gen = subparsers.add_parser("gen", help="generate benchmark graphs")
    gen.add_argument("generator", choices=GENERATORS)
    gen.add_argument("--n", type=int)
    gen.add_argument("--k", type=int, help="planted block size")
    gen.add_argument("--s-size", type=int, help="planted source block size")
    gen.add_argument("--t-size", type=int, help="planted target block size")
    gen.add_argument("--p", type=float, help="edge probability for gnp")
    gen.add_argument("--pin", type=float)
    gen.add_argument("--pout", type=float)
    gen.add_argument("--input", help="base edge list for 'weights'")
    gen.add_argument("--low", type=float, default=1.0)
    gen.add_argument("--high", type=float, default=10.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsg", description="Private densest subgraph experiments")
    parser.add_argument("--debug", action="store_true")
    subparsers = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(subparsers)
    _add_gen_parser(subparsers)

    summary = subparsers.add_parser("summarize", help="aggregate result rows")
    summary.add_argument("results")
    summary.add_argument("--acceptance-c", type=float)
    summary.add_argument("--config")

    replay = subparsers.add_parser("replay", help="re-run the curator over a saved transcript")
    replay.add_argument("transcript")
    return parser


def _normalize_argv(argv: Sequence[str]) -> List[str]:
    """``dsg --algo ...`` is shorthand for ``dsg run --algo ...``."""
    argv = list(argv)
    positional = [a for a in argv if a != "--debug"]
    if positional and positional[0] not in COMMANDS and positional[0] not in ("-h", "--help"):
        debug = ["--debug"] if "--debug" in argv else []
        return debug + ["run"] + positional
    return argv


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise InvalidArgumentError(f"gen {args.generator} needs {', '.join(missing)}")


def cmd_run(args: argparse.Namespace) -> int:
    flags = {
        "eps": args.eps,
        "delta": args.delta,
        "c": args.c,
        "beta": args.beta,
        "eta": args.eta,
        "T": args.T,
        "sigma": args.sigma,
        "n_jobs": args.n_jobs,
    }
    resolved = resolve_run_settings(flags, args.config)
    settings = RunSettings(
        algo=args.algo,
        eps=resolved.get("eps"),
        delta=resolved["delta"],
        c=resolved["c"],
        beta=resolved["beta"],
        eta=resolved["eta"],
        T=resolved.get("T"),
        sigma=resolved.get("sigma"),
        zero_noise=args.zero_noise,
        trials=args.trials,
        seed=args.seed,
        value_mode=args.value_mode,
        runtime_mode="central" if args.algo.startswith("centralized") else args.mode,
        reveal_truth=args.reveal_truth,
        reference_density=args.reference_density,
        T_cap=resolved["T_cap"],
        n_jobs=resolved["n_jobs"],
        transcript=args.transcript,
    )
    if settings.zero_noise:
        logger.warning("zero-noise run: output is NOT private")
    graph = read_edge_list(args.input, kind=graph_kind(args.algo)).graph
    rows, _ = run_trials(graph, settings, progress=not args.no_progress)
    write_results(rows, args.out, fmt=args.format, reveal_truth=args.reveal_truth)
    return 0


def resolve_run_settings(flags: Dict[str, Any], config_path: Optional[str]) -> Dict[str, Any]:
    resolved = config.resolve_settings(flags, config_path)
    for key in ("trials", "T", "n_jobs", "T_cap"):
        if resolved.get(key) is not None:
            resolved[key] = int(resolved[key])
    return resolved


def cmd_gen(args: argparse.Namespace) -> int:
    info: Dict[str, Any] = {"generator": args.generator, "out": args.out}
    if args.generator == "planted":
        _require(args, "n", "k", "pin", "pout")
        graph, block = planted_dense(args.n, args.k, args.pin, args.pout, seed=args.seed, return_block=True)
        info.update(planted_density=float(density(graph, block)) if block else 0.0, block=block)
    elif args.generator == "gnp":
        _require(args, "n", "p")
        graph = gnp(args.n, args.p, seed=args.seed)
    elif args.generator == "planted-directed":
        _require(args, "n", "s_size", "t_size", "pin", "pout")
        graph, sources, targets = planted_directed(args.n, args.s_size, args.t_size, args.pin, args.pout,
                                                   seed=args.seed)
        info.update(planted_density=directed_density(graph, sources, targets), sources=sources, targets=targets)
    else:
        _require(args, "input")
        base = read_edge_list(args.input).graph
        graph = NodeWeightedGraph(base, random_costs(base.n, args.low, args.high, seed=args.seed))
        info.update(c_max=float(graph.c_max))
    write_edge_list(graph, args.out)
    info.update(n=graph.n, m=graph.graph.m if isinstance(graph, NodeWeightedGraph) else graph.m)
    print(json.dumps(info))
    return 0


def cmd_summarize(args: argparse.Namespace) -> int:
    acceptance_c = args.acceptance_c
    if acceptance_c is None:
        acceptance_c = config.resolve_settings({}, args.config)["acceptance_c"]
    sys.stdout.write(format_summary(summarize(args.results, acceptance_c=acceptance_c)))
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    print(json.dumps(replay_transcript(args.transcript)))
    return 0


HANDLERS = {"run": cmd_run, "gen": cmd_gen, "summarize": cmd_summarize, "replay": cmd_replay}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and dispatch.

    Returns:
        Exit code: 0 ok, 2 bad arguments, 3 bad input, 4 infeasible privacy
        parameters, 1 anything else
    """
    argv = _normalize_argv(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    configure_logging(debug=args.debug)
    try:
        return HANDLERS[args.command](args)
    except DSGError as e:
        logger.error(f"{args.command} failed: {e}")
        print(json.dumps(ErrorResponse.from_exception(e)), file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"{args.command} failed unexpectedly: {e}")
        print(json.dumps(ErrorResponse.from_exception(e, include_traceback=args.debug)), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
