from __future__ import annotations

import argparse
import logging
import sys
import time
import typing

from .. import exceptions
from . import commands
from . import config
from . import output

if typing.TYPE_CHECKING:
    from ..spec import typedefs


logger = logging.getLogger(__name__)

max_console_rows = 40

help_text = {
    'repro-compression': 'compression error of the stored clock state',
    'repro-stopwatch': 'coherent against incoherent inaccuracy for k events',
    'repro-figure3': 'analytic advantage surface under dephasing',
    'repro-bounds': 'check exact errors and inaccuracies against their bounds',
    'sweep': 'run a parameter grid of one study',
    'network': 'sum of frequencies along a chain of nodes',
}


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    # values stay strings here and are validated by build_run_config
    parser.add_argument('--n', help='number of clock qubits')
    parser.add_argument('--k', help='number of events')
    parser.add_argument('--T', help='total elapsed time')
    parser.add_argument('--gamma', help='dephasing rate')
    parser.add_argument('--p', help='single-qubit purity parameter(s)')
    parser.add_argument('--P', help='confidence level of the inaccuracy')
    parser.add_argument('--trials', help='Monte Carlo trials')
    parser.add_argument('--seed', help='base random seed')
    parser.add_argument(
        '--window-policy',
        dest='window_policy',
        help='asymptotic, qubit-budget=q, or qubit-fill=q',
    )
    parser.add_argument('--slack', help='additive slack of the memory bound')
    parser.add_argument('--k-max', dest='k_max', help='largest k of the surface')
    parser.add_argument('--T0', help='time spent at each network node')
    parser.add_argument('--J', help='spin values, list or doubling range 4..512')
    parser.add_argument('--omegas', help='comma list of node frequencies')
    parser.add_argument(
        '--param',
        action='append',
        metavar='KEY=VALUE',
        help='override any parameter, may be repeated',
    )
    parser.add_argument('--out', help='output path for rows')
    parser.add_argument('--format', choices=['csv', 'json'], help='output format')
    parser.add_argument('--verbose', action='store_true', help='debug logging')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qstopwatch',
        description='simulate compressed quantum stopwatches',
        allow_abbrev=False,
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in config.commands:
        subparser = subparsers.add_parser(
            command, help=help_text[command], allow_abbrev=False
        )
        _add_common_arguments(subparser)
        if command == 'sweep':
            subparser.add_argument(
                '--study',
                default='stopwatch',
                choices=sorted(commands.study_classes),
            )
            subparser.add_argument(
                '--axis',
                action='append',
                metavar='KEY=V1,V2',
                help='grid axis, may be repeated',
            )
            subparser.add_argument(
                '--executor', default='serial', choices=['serial', 'parallel']
            )
            subparser.add_argument(
                '--output-dir',
                dest='output_dir',
                help='store one result file per job and resume from it',
            )
            subparser.add_argument('--n-processes', dest='n_processes')
    return parser


def _sweep_options(args: argparse.Namespace, verbose: bool) -> dict[str, typing.Any]:
    axes = dict(config.parse_axis(text) for text in args.axis or [])
    n_processes = None
    if args.n_processes is not None:
        try:
            n_processes = int(args.n_processes)
        except ValueError:
            raise exceptions.ConfigError(
                'invalid value for n-processes: ' + repr(args.n_processes)
            )
    return {
        'study': args.study,
        'axes': axes,
        'executor': args.executor,
        'output_dir': args.output_dir,
        'n_processes': n_processes,
        'verbose': verbose,
    }


def write_result(
    result: commands.CommandResult,
    run_config: typedefs.RunConfig,
    start_time: float,
    end_time: float,
) -> None:
    path = run_config['output_path']
    if path is None:
        return
    if run_config['output_format'] == 'json':
        output.write_json(result.rows, path, result.summary)
    else:
        output.write_csv(result.rows, path)
    metadata = output.build_metadata(run_config, start_time, end_time)
    output.write_metadata(metadata, path)
    logger.info('wrote %d rows to %s', len(result.rows), path)


def print_result(result: commands.CommandResult) -> None:
    for table in result.tables:
        output.print_rows(table.rows[:max_console_rows], table.title, table.columns)
        if len(table.rows) > max_console_rows:
            print('...', len(table.rows) - max_console_rows, 'more rows')
        print()
    output.print_summary(result.summary)


def main(argv: typing.Sequence[str] | None = None) -> int:
    """exit status 0 on success, 1 on a violated bound, 2 on bad configuration"""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )

    start_time = time.time()
    try:
        run_config = config.build_run_config(args)
        if run_config['command'] == 'sweep':
            options = _sweep_options(args, run_config['verbose'])
            result = commands.run_command(run_config, **options)
        else:
            result = commands.run_command(run_config)
    except (exceptions.ConfigError, exceptions.InvalidArgument) as e:
        print('error:', e, file=sys.stderr)
        return 2
    except exceptions.BoundViolation as e:
        print('bound violated:', e, file=sys.stderr)
        return 1
    end_time = time.time()

    write_result(result, run_config, start_time, end_time)
    print_result(result)
    if not result.ok:
        logger.warning('%s reported violated bounds', run_config['command'])
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
