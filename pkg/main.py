"""
Sparse Random Graph Rank Toolkit - Command Line

Subcommands:
- gen:        sample a random graph and write it as an edge list
- ks:         Karp-Sipser leaf removal summary (optionally dump the core)
- cycles:     special-cycle report
- rank:       rank / corank of A(G) or B(G)
- predict:    combinatorial corank prediction (optionally with the exact defect)
- params:     analytic constants at a density c
- experiment: Monte-Carlo suite with CSV and JSON output

Usage:
    python main.py gen --model gnp --n 1000 --p 0.004 --seed 7 --out g.txt
    python main.py predict --in g.txt --with-exact
    python main.py experiment --suite rank-char --c 4 --trials 200 --out results.csv --json summary.json
"""

import argparse
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from src.analytics import analytic_summary
from src.core import ExperimentSchema, KSRankError
from src.cycles import enumerate_special_cycles, isolated_cycle_census
from src.generators import SamplerConfig, sample_graph
from src.graph_core import BipartiteGraph
from src.graph_io import load_edge_list, write_edge_list
from src.harness import run_suite, write_frame
from src.linalg import rank_adjacency, rank_biadjacency
from src.peeling import karp_sipser
from src.predictor import predict


def setup_logging(output_dir: Path, quiet: bool = False) -> logging.Logger:
    """Setup file and console logging for experiment runs"""

    log_dir = output_dir / "logs"
    log_dir.mkdir(parents=True, exist_ok=True)

    logger = logging.getLogger('ksrank')
    logger.setLevel(logging.INFO)

    # Clear existing handlers
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    log_file = log_dir / f"experiment_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(logging.INFO)

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(logging.WARNING if quiet else logging.INFO)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    file_handler.setFormatter(formatter)
    console_handler.setFormatter(formatter)

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)

    return logger


def emit(payload: Dict) -> None:
    print(json.dumps(payload, indent=2, default=str))


def read_degrees(path: str) -> List[int]:
    """Whitespace-separated degree list; ``#`` starts a comment"""
    tokens = []
    for line in Path(path).read_text(encoding='utf-8').splitlines():
        tokens.extend(line.split('#', 1)[0].split())
    return [int(t) for t in tokens]


# =============================================================================
# Subcommands
# =============================================================================

def cmd_gen(args) -> int:
    config = SamplerConfig(
        model=args.model,
        n=args.n or 0,
        n1=args.n1 or 0,
        n2=args.n2 or 0,
        p=args.p,
        m=args.m,
        degrees=read_degrees(args.degrees) if args.degrees else None,
        seed=args.seed,
        method=args.method,
    )
    graph = sample_graph(config)
    write_edge_list(graph, args.out)
    emit({'model': args.model, 'seed': config.seed, 'graph': repr(graph), 'out': args.out})
    return 0


def cmd_ks(args) -> int:
    graph = load_edge_list(args.input, bipartite=args.bipartite)
    result = karp_sipser(graph, keep_trace=args.trace)
    payload = result.summary()
    if args.trace:
        payload['trace'] = [list(pair) for pair in result.trace]
    if args.core_out:
        write_edge_list(result.core, args.core_out)
        payload['core_out'] = args.core_out
    emit(payload)
    return 0


def cmd_cycles(args) -> int:
    graph = load_edge_list(args.input, bipartite=args.bipartite)
    report = enumerate_special_cycles(graph, max_length=args.max_len)
    payload = report.to_dict()
    payload['q'] = isolated_cycle_census(graph).q
    emit(payload)
    return 0


def cmd_rank(args) -> int:
    graph = load_edge_list(args.input, bipartite=args.bipartite)
    if isinstance(graph, BipartiteGraph):
        report = rank_biadjacency(graph, method=args.method)
    else:
        report = rank_adjacency(graph, method=args.method)
    emit(report.to_dict())
    return 0


def cmd_predict(args) -> int:
    graph = load_edge_list(args.input, bipartite=args.bipartite)
    emit(predict(graph, with_exact=args.with_exact, method=args.method).to_dict())
    return 0


def cmd_params(args) -> int:
    emit(analytic_summary(args.c, include_two_core=args.two_core, trunc_mean=args.trunc_mean))
    return 0


def cmd_experiment(args) -> int:
    out_path = Path(args.out)
    output_dir = out_path.parent if str(out_path.parent) else Path('.')
    logger = setup_logging(output_dir, quiet=args.quiet)

    logger.info("=" * 80)
    logger.info(f"SPARSE GRAPH RANK EXPERIMENT - {args.suite.upper()}")
    logger.info("=" * 80)
    logger.info(f"Started: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

    overrides = {
        'n': args.n,
        'c': args.c,
        'm': args.m,
        'n1': args.n1,
        'n2': args.n2,
        'trials': args.trials,
        'seed': args.seed,
        'model': args.model,
    }

    try:
        logger.info("\n🎲 STEP 1: Running trials")
        logger.info("-" * 50)
        table, summary = run_suite(
            args.suite,
            workers=args.workers,
            progress=not args.quiet,
            bipartite=args.bipartite,
            **overrides,
        )

        logger.info("\n💾 STEP 2: Writing results")
        logger.info("-" * 50)
        write_frame(table, out_path, 'scan' if args.suite == 'critical-scan' else 'trials')
        logger.info(f"✅ Results table: {out_path}")
        if args.json:
            json_path = Path(args.json)
            json_path.parent.mkdir(parents=True, exist_ok=True)
            with open(json_path, 'w', encoding='utf-8') as f:
                json.dump(summary, f, indent=2, default=str)
            logger.info(f"✅ Summary: {json_path}")

        for key in ('agreement_rate', 'nonsingular_frequency', 'ks_bound_chain_holds', 'excluded_failed'):
            if key in summary:
                logger.info(f"📊 {key}: {summary[key]}")
        if 'timing' in summary:
            logger.info(f"⏱️  Trial time: {summary['timing']['total_seconds']:.1f}s total")
        logger.info("=" * 80)
        return 0

    except Exception as e:
        logger.error(f"❌ Experiment failed with error: {str(e)}")
        logger.exception("Full error traceback:")
        raise


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ksrank',
        description='Karp-Sipser peeling, special cycles and exact ranks of sparse random graphs',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help='sample a random graph')
    gen.add_argument('--model', required=True, choices=ExperimentSchema.MODELS)
    gen.add_argument('--n', type=int)
    gen.add_argument('--n1', type=int)
    gen.add_argument('--n2', type=int)
    gen.add_argument('--p', type=float)
    gen.add_argument('--m', type=int)
    gen.add_argument('--degrees', help='file with a degree sequence (degseq model)')
    gen.add_argument('--method', default='configuration', choices=('configuration', 'pairs'))
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--out', required=True)
    gen.set_defaults(func=cmd_gen)

    def add_input(p):
        p.add_argument('--in', dest='input', required=True, help='edge-list file')
        p.add_argument('--bipartite', action='store_true')

    ks = sub.add_parser('ks', help='Karp-Sipser leaf removal')
    add_input(ks)
    ks.add_argument('--trace', action='store_true')
    ks.add_argument('--core-out', help='write the core as an edge list')
    ks.set_defaults(func=cmd_ks)

    cycles = sub.add_parser('cycles', help='special-cycle report')
    add_input(cycles)
    cycles.add_argument('--max-len', type=int)
    cycles.set_defaults(func=cmd_cycles)

    rank = sub.add_parser('rank', help='rank of A(G) or B(G)')
    add_input(rank)
    rank.add_argument('--method', default='modular', choices=('modular', 'exact'))
    rank.set_defaults(func=cmd_rank)

    pred = sub.add_parser('predict', help='combinatorial corank prediction')
    add_input(pred)
    pred.add_argument('--with-exact', action='store_true')
    pred.add_argument('--method', default='modular', choices=('modular', 'exact'))
    pred.set_defaults(func=cmd_predict)

    params = sub.add_parser('params', help='analytic constants')
    params.add_argument('--c', type=float, required=True)
    params.add_argument('--two-core', action='store_true')
    params.add_argument('--trunc-mean', type=float)
    params.set_defaults(func=cmd_params)

    exp = sub.add_parser('experiment', help='Monte-Carlo experiment suite')
    exp.add_argument('--suite', required=True, choices=sorted(ExperimentSchema.SUITES))
    exp.add_argument('--model', choices=ExperimentSchema.MODELS)
    exp.add_argument('--n', type=int)
    exp.add_argument('--n1', type=int)
    exp.add_argument('--n2', type=int)
    exp.add_argument('--c', type=float)
    exp.add_argument('--m', type=int)
    exp.add_argument('--trials', type=int)
    exp.add_argument('--seed', type=int)
    exp.add_argument('--bipartite', action='store_true')
    exp.add_argument('--workers', type=int, help='worker processes (default: KSRANK_WORKERS or all cores)')
    exp.add_argument('--out', required=True, help='CSV output path')
    exp.add_argument('--json', help='JSON summary path')
    exp.add_argument('--quiet', action='store_true')
    exp.set_defaults(func=cmd_experiment)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the toolkit"""
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KSRankError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("\n⚠️  Interrupted by user", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
