"""
Command Line Interface

Subcommands:
    eval        Score predicted partitions against a reference partition
    generate    Write a planted-partition or LFR-lite benchmark
    rank        Rank algorithms from an algorithm,network,score CSV
    experiment  Run the perturbation experiment and rank its synthetic algorithms

Every failure prints a single ``error: <reason>`` line to stderr and
returns a nonzero exit code: 1 for usage or configuration errors, 2 for
invalid input files, 3 for degenerate computations and infeasible
generator configurations.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence

from dotenv import dotenv_values, load_dotenv

from src import __tool__, __version__
from src.evaluation.evaluate import (
    PartitionEvaluator,
    build_report,
    file_digest,
    parse_measures,
    report_to_csv,
    report_to_json,
    round_float,
    round_floats,
)
from src.experiment.perturbation import ExperimentConfig, run_perturbation_experiment
from src.generation.benchmark_generator import (
    LfrConfig,
    PlantedConfig,
    empirical_mixing,
    generate_lfr,
    generate_planted,
    write_benchmark,
)
from src.graph.graph_model import load_graph
from src.partition.partition_model import load_partition
from src.ranking.ranking_stats import ScoreMatrix, rank_table
from src.utils.config_loader import (
    REPORT_FORMATS,
    WEIGHT_SCHEMES,
    ZERO_WEIGHT_POLICIES,
    load_config,
    setup_logging,
    validate_config,
)
from src.utils.exceptions import CommEvalError, ConfigurationError, InputError

logger = logging.getLogger(__name__)

SEED_ENV = 'COMMEVAL_SEED'


class CommandParser(argparse.ArgumentParser):
    """Argument parser whose usage errors become ConfigurationError."""

    def error(self, message: str):
        raise ConfigurationError(message)


# Argument types --------------------------------------------------------------

def _bounded(kind: Callable[[str], Any], low=None, high=None, high_open: bool = False,
             low_open: bool = False) -> Callable[[str], Any]:
    def parse(text: str):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {kind.__name__} value: {text!r}") from None
        if low is not None and (value < low or (low_open and value == low)):
            raise argparse.ArgumentTypeError(f"{value} is below the allowed range")
        if high is not None and (value > high or (high_open and value == high)):
            raise argparse.ArgumentTypeError(f"{value} is above the allowed range")
        return value
    parse.__name__ = kind.__name__
    return parse


mixing_type = _bounded(float, 0.0, 1.0, high_open=True)
positive_int = _bounded(int, 1)
positive_float = _bounded(float, 0.0, low_open=True)
exponent_type = _bounded(float, 1.0, low_open=True)
alpha_type = _bounded(float, 0.0, 1.0, low_open=True, high_open=True)
fraction_type = _bounded(float, 0.0, 1.0)


def _seed_type(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed: {text!r}") from None


def env_seed() -> Optional[int]:
    """
    Seed from the COMMEVAL_SEED environment variable, if set.

    Raises:
        ConfigurationError: If the variable is not an integer
    """
    value = os.environ.get(SEED_ENV)
    if value is None or not value.strip():
        return None
    try:
        return int(value.strip(), 0)
    except ValueError:
        raise ConfigurationError(f"{SEED_ENV} is not an integer: {value!r}") from None


# Parser --------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', help="YAML configuration file (default: config.yaml)")
    parser.add_argument('--verbose', '-v', action='store_true', help="log progress at INFO level")


GENERATOR_FLAGS: Dict[str, Dict[str, Callable[[str], Any]]] = {
    'planted': {
        'nodes': positive_int,
        'communities': positive_int,
        'mu': mixing_type,
        'avg_degree': positive_float,
        'seed': _seed_type,
    },
    'lfr': {
        'nodes': positive_int,
        'mu': mixing_type,
        'gamma': exponent_type,
        'beta_c': exponent_type,
        'avg_degree': positive_float,
        'max_degree': positive_int,
        'min_community': positive_int,
        'max_community': positive_int,
        'max_sweeps': positive_int,
        'max_retries': positive_int,
        'seed': _seed_type,
    },
}


def build_parser() -> CommandParser:
    parser = CommandParser(
        prog=__tool__,
        description="Evaluate community structures with classic and topological measures.",
    )
    parser.add_argument('--version', action='version', version=f"{__tool__} {__version__}")
    commands = parser.add_subparsers(dest='command', parser_class=CommandParser)
    commands.required = True

    evaluate = commands.add_parser('eval', help="score predicted partitions against a reference")
    evaluate.add_argument('--graph', required=True, help="edge-list file")
    evaluate.add_argument('--reference', required=True, help="reference partition file")
    evaluate.add_argument('--predicted', required=True, nargs='+', help="predicted partition file(s)")
    evaluate.add_argument('--measures', help="comma separated measure names (default: all)")
    evaluate.add_argument('--weights', choices=WEIGHT_SCHEMES, help="node weight scheme")
    evaluate.add_argument('--format', choices=REPORT_FORMATS, help="report format")
    evaluate.add_argument('--on-zero-weights', choices=ZERO_WEIGHT_POLICIES,
                          help="policy when every node weight is zero")
    evaluate.add_argument('--contributions', action='store_true',
                          help="include the per-node contributions to the topological purity")
    evaluate.add_argument('--workers', type=positive_int, help="partitions evaluated concurrently")
    _add_common(evaluate)
    evaluate.set_defaults(handler=cmd_eval)

    generate = commands.add_parser('generate', help="generate a benchmark graph")
    generators = generate.add_subparsers(dest='generator', parser_class=CommandParser)
    generators.required = True
    for kind, flags in GENERATOR_FLAGS.items():
        sub = generators.add_parser(kind, help=f"{kind} benchmark")
        sub.add_argument('--output-graph', required=True, help="edge-list file to write")
        sub.add_argument('--output-communities', required=True, help="partition file to write")
        sub.add_argument('--config-file', help="key=value file with generator parameters")
        for name, kind_type in flags.items():
            sub.add_argument('--' + name.replace('_', '-'), dest=name, type=kind_type)
        _add_common(sub)
        sub.set_defaults(handler=cmd_generate)

    rank = commands.add_parser('rank', help="rank algorithms by per-network scores")
    rank.add_argument('scores', help="CSV file with header algorithm,network,score")
    rank.add_argument('--alpha', type=alpha_type, help="significance level")
    rank.add_argument('--format', choices=('text', 'json', 'both'), default='both')
    _add_common(rank)
    rank.set_defaults(handler=cmd_rank)

    experiment = commands.add_parser('experiment', help="run the perturbation experiment")
    experiment.add_argument('--output-dir', required=True, help="directory for score CSVs and report")
    experiment.add_argument('--networks', type=_bounded(int, 2))
    experiment.add_argument('--nodes', type=positive_int)
    experiment.add_argument('--mu', type=mixing_type)
    experiment.add_argument('--generator', choices=('lfr', 'planted'))
    experiment.add_argument('--seed', type=_seed_type)
    experiment.add_argument('--weights', choices=WEIGHT_SCHEMES, dest='weight_scheme')
    experiment.add_argument('--targeted-fraction', type=fraction_type)
    _add_common(experiment)
    experiment.set_defaults(handler=cmd_experiment)

    return parser


# Commands ------------------------------------------------------------------

def cmd_eval(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    """Evaluate predicted partitions and print the report."""
    settings = config['evaluation']
    measures = parse_measures(args.measures if args.measures is not None else settings['measures'])
    fmt = args.format or config['report']['format']
    digits = int(config['report']['float_digits'])

    graph = load_graph(args.graph)
    reference = load_partition(args.reference, graph.nodes)
    predicted = [load_partition(path, graph.nodes) for path in args.predicted]

    evaluator = PartitionEvaluator(
        graph,
        reference,
        measures=measures,
        weight_scheme=args.weights or settings['weight_scheme'],
        on_zero_weights=args.on_zero_weights or settings['on_zero_weights'],
        with_contributions=args.contributions,
    )
    results = evaluator.evaluate_many(
        predicted, list(args.predicted), workers=args.workers or int(settings['workers'])
    )

    inputs = {
        'graph': {'path': args.graph, 'sha256': file_digest(args.graph)},
        'reference': {'path': args.reference, 'sha256': file_digest(args.reference)},
        'predicted': [{'path': path, 'sha256': file_digest(path)} for path in args.predicted],
    }
    report = build_report(results, inputs, measures, digits)

    if fmt == 'json':
        sys.stdout.write(report_to_json(report))
    else:
        sys.stdout.write(report_to_csv(report))
        if args.contributions:
            for result in results:
                sys.stdout.write("\n")
                table = result.contributions.copy()
                table.insert(0, 'predicted', result.label)
                sys.stdout.write(table.to_csv(index=False, lineterminator="\n",
                                              float_format=f'%.{digits}g'))
    for warning in report['warnings']:
        logger.warning(warning)
    return 0


def _typed(kind: str, values: Dict[str, Optional[str]], source: str) -> Dict[str, Any]:
    """Convert key=value strings with the generator flag types."""
    flags = GENERATOR_FLAGS[kind]
    typed = {}
    for key, raw in values.items():
        name = key.strip().lower().replace('-', '_')
        if name not in flags:
            raise ConfigurationError(f"{source}: unknown {kind} parameter '{key}'")
        if raw is None:
            raise ConfigurationError(f"{source}: parameter '{key}' has no value")
        try:
            typed[name] = flags[name](raw.strip())
        except argparse.ArgumentTypeError as e:
            raise ConfigurationError(f"{source}: {key}: {e}") from None
    return typed


def generator_parameters(args: argparse.Namespace, config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge generator parameters: config defaults, then the key=value file,
    then explicit flags, then the COMMEVAL_SEED environment variable.
    """
    kind = args.generator
    params = {
        key: value for key, value in config['generation'][kind].items()
        if key in GENERATOR_FLAGS[kind]
    }
    if args.config_file:
        path = Path(args.config_file)
        if not path.is_file():
            raise ConfigurationError(f"generator config file not found: {path}")
        params.update(_typed(kind, dotenv_values(path), str(path)))
    for name in GENERATOR_FLAGS[kind]:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    seed = env_seed()
    if seed is not None:
        params['seed'] = seed
    return params


def cmd_generate(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    """Generate a benchmark, write its files and print a summary line."""
    params = generator_parameters(args, config)
    n = int(params.pop('nodes'))
    if args.generator == 'planted':
        graph, partition = generate_planted(PlantedConfig(
            n=n,
            c=int(params['communities']),
            mu=float(params['mu']),
            avg_degree=float(params['avg_degree']),
            seed=int(params['seed']),
        ))
    else:
        graph, partition = generate_lfr(LfrConfig(n=n, **params))

    mixing = empirical_mixing(graph, partition)
    write_benchmark(graph, partition, args.output_graph, args.output_communities)
    print(f"nodes={graph.node_count} edges={graph.edge_count} mixing={round_float(mixing, 12)!r}")
    return 0


def _json(payload: Any, digits: int) -> str:
    return json.dumps(round_floats(payload, digits), indent=2, sort_keys=True) + "\n"


def cmd_rank(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    """Print the significance-grouped ranking of a score CSV."""
    alpha = args.alpha if args.alpha is not None else float(config['ranking']['alpha'])
    matrix = ScoreMatrix.from_csv(args.scores)
    table = rank_table(matrix, alpha)
    if args.format in ('text', 'both'):
        sys.stdout.write(table.to_text())
    if args.format in ('json', 'both'):
        sys.stdout.write(_json(table.to_dict(), int(config['report']['float_digits'])))
    return 0


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding='utf-8', newline='\n')
    except OSError as e:
        raise InputError(f"cannot write file: {e.strerror or e}", str(path)) from e


def _output_dir(path: str) -> Path:
    output = Path(path)
    try:
        output.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise InputError(f"cannot create output directory: {e.strerror or e}", str(output)) from e
    return output


def cmd_experiment(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    """Run the perturbation experiment, write score files and print rank tables."""
    seed = env_seed()
    cfg = ExperimentConfig.from_config(
        config,
        networks=args.networks,
        nodes=args.nodes,
        mu=args.mu,
        generator=args.generator,
        seed=seed if seed is not None else args.seed,
        weight_scheme=args.weight_scheme,
        targeted_fraction=args.targeted_fraction,
    )
    output = _output_dir(args.output_dir)
    result = run_perturbation_experiment(cfg, progress=sys.stderr.isatty())

    digits = int(config['report']['float_digits'])
    tables = result.rank_tables()
    for measure, table in tables.items():
        _write_text(
            output / f"{measure}.csv",
            result.scores[result.scores['measure'] == measure]
            .drop(columns='measure')
            .to_csv(index=False, lineterminator="\n", float_format=f'%.{digits}g'),
        )
        sys.stdout.write(table.to_text() + "\n")
    _write_text(
        output / "targeted.csv",
        result.targeted.to_csv(index=False, lineterminator="\n", float_format=f'%.{digits}g'),
    )

    report = {
        'tool': __tool__,
        'version': __version__,
        'config': {
            'networks': cfg.networks,
            'generator': cfg.generator,
            'nodes': cfg.nodes,
            'mu': cfg.mu,
            'fractions': list(cfg.fractions),
            'targeted_fraction': cfg.targeted_fraction,
            'seed': cfg.seed,
            'weight_scheme': cfg.weight_scheme.value,
            'alpha': cfg.alpha,
        },
        'rankings': {measure: table.to_dict() for measure, table in tables.items()},
        'targeted': result.targeted.to_dict(orient='records'),
        'targeted_separation': result.targeted_separation,
    }
    _write_text(output / "report.json", _json(report, digits))

    separated = int((result.targeted['high_weight'] < result.targeted['low_weight']).sum())
    print(f"targeted: high-weight F' below low-weight F' on {separated}/{cfg.networks} networks")
    return 0


# Entry point ---------------------------------------------------------------

def _one_line(error: BaseException) -> str:
    return " ".join(str(error).split()) or type(error).__name__


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line and return the process exit code.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])
    """
    load_dotenv(Path.cwd() / ".env")
    try:
        args = build_parser().parse_args(argv)
        try:
            config = load_config(args.config)
        except FileNotFoundError as e:
            raise ConfigurationError(str(e)) from e
        validate_config(config)
        setup_logging(config, verbose=args.verbose)
        return args.handler(args, config)
    except CommEvalError as e:
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else 0
