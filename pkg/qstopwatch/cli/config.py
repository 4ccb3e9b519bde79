from __future__ import annotations

import argparse
import typing

from .. import exceptions
from ..compression import windows

if typing.TYPE_CHECKING:
    from ..spec import typedefs


param_types: typing.Mapping[str, typing.Callable[[str], typing.Any]] = {
    'n': int,
    'k': int,
    'T': float,
    'gamma': float,
    'P': float,
    'p': float,
    'window_policy': str,
    'trials': int,
    'seed': int,
    'slack': float,
    'k_max': int,
    'T0': float,
}

commands: tuple[str, ...] = (
    'repro-compression',
    'repro-stopwatch',
    'repro-figure3',
    'repro-bounds',
    'sweep',
    'network',
)

# values a command runs with when neither a flag nor --param sets them
command_defaults: typing.Mapping[str, typing.Mapping[str, typing.Any]] = {
    'repro-compression': {
        'n': 16,
        'p': 1.0,
        'window_policy': 'qubit-budget=4',
        'seed': 0,
    },
    'repro-stopwatch': {
        'n': 8,
        'k': 4,
        'T': 1.0,
        'gamma': 0.0,
        'P': 0.9,
        'trials': 100000,
        'seed': 0,
    },
    'repro-figure3': {'gamma': 0.2, 'k_max': 50, 'n': 1000, 'P': 0.9, 'seed': 0},
    'repro-bounds': {
        'slack': 2.0,
        'P': 0.9,
        'trials': 10000,
        'seed': 0,
        'window_policy': 'qubit-budget=4',
        'J_values': [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0],
        'p_values': [0.7, 0.8, 0.9, 0.99],
    },
    'sweep': {'seed': 0},
    'network': {
        'k': 5,
        'T0': 1.0,
        'n': 256,
        'P': 0.9,
        'trials': 10000,
        'seed': 0,
        'window_policy': 'asymptotic',
    },
}


def parse_param(key: str, raw: str) -> typing.Any:
    if key not in param_types:
        raise exceptions.ConfigError(
            'unknown parameter ' + repr(key) + ', expected one of '
            + ', '.join(sorted(param_types))
        )
    try:
        value = param_types[key](raw)
    except ValueError:
        raise exceptions.ConfigError(
            'invalid value for ' + key + ': ' + repr(raw)
        )
    if key == 'window_policy':
        try:
            windows.parse_window_policy(value)
        except exceptions.InvalidArgument as e:
            raise exceptions.ConfigError(str(e))
    return value


def parse_override(text: str) -> tuple[str, typing.Any]:
    if '=' not in text:
        raise exceptions.ConfigError('override must look like KEY=VALUE: ' + text)
    key, raw = text.split('=', 1)
    key = key.strip().replace('-', '_')
    return key, parse_param(key, raw.strip())


def parse_float_list(text: str) -> list[float]:
    """comma list '0.7,0.9' or doubling range '4..512'"""
    text = text.strip()
    try:
        if '..' in text:
            start_text, stop_text = text.split('..', 1)
            start = float(start_text)
            stop = float(stop_text)
            if start <= 0 or stop < start:
                raise ValueError()
            values = []
            value = start
            while value <= stop * (1 + 1e-12):
                values.append(value)
                value *= 2
            return values
        return [float(token) for token in text.split(',') if token.strip() != '']
    except ValueError:
        raise exceptions.ConfigError('invalid list: ' + repr(text))


def parse_axis(text: str) -> tuple[str, list[typing.Any]]:
    if '=' not in text:
        raise exceptions.ConfigError('axis must look like KEY=V1,V2: ' + text)
    key, raw = text.split('=', 1)
    key = key.strip()
    if key == 'window_policy':
        values = [parse_param(key, token) for token in raw.split(';')]
    elif key == 'J':
        values = [float(value) for value in parse_float_list(raw)]
    else:
        values = [parse_param(key, token) for token in raw.split(',')]
    if len(values) == 0:
        raise exceptions.ConfigError('axis ' + key + ' has no values')
    return key, values


def with_defaults(command: str, params: typing.Mapping[str, typing.Any]) -> typedefs.RunParams:
    if command not in command_defaults:
        raise exceptions.ConfigError('unknown command: ' + str(command))
    resolved: dict[str, typing.Any] = {
        key: list(value) if isinstance(value, list) else value
        for key, value in command_defaults[command].items()
    }
    resolved.update(params)
    if command == 'network' and 'omegas' not in resolved:
        resolved['omegas'] = [0.2] * resolved['k']
    return typing.cast('typedefs.RunParams', resolved)


def build_run_config(args: argparse.Namespace) -> typedefs.RunConfig:
    if args.command not in commands:
        raise exceptions.ConfigError('unknown command: ' + str(args.command))

    params: dict[str, typing.Any] = {}
    for key in param_types:
        value = getattr(args, key, None)
        if value is None:
            continue
        # repro-bounds sweeps a list of p values
        if key == 'p' and args.command == 'repro-bounds':
            params['p_values'] = parse_float_list(str(value))
        else:
            params[key] = parse_param(key, str(value))
    if getattr(args, 'J', None) is not None:
        params['J_values'] = parse_float_list(args.J)
    if getattr(args, 'omegas', None) is not None:
        params['omegas'] = parse_float_list(args.omegas)
    for text in getattr(args, 'param', None) or []:
        key, value = parse_override(text)
        params[key] = value

    if 'P' in params and not 0 < params['P'] < 1:
        raise exceptions.ConfigError('P must be in (0, 1)')
    if 'slack' in params and params['slack'] < 0:
        raise exceptions.ConfigError('slack must be non-negative')
    if 'trials' in params and params['trials'] < 100:
        raise exceptions.ConfigError('trials must be at least 100')

    output_format = args.format
    if output_format is None:
        if args.out is not None and args.out.endswith('.json'):
            output_format = 'json'
        else:
            output_format = 'csv'

    return {
        'command': args.command,
        'params': with_defaults(args.command, params),
        'output_path': args.out,
        'output_format': output_format,
        'verbose': bool(args.verbose),
    }
