from __future__ import annotations

import csv
import json
import math
import numbers
import typing

if typing.TYPE_CHECKING:
    from ..spec import typedefs


def format_csv_value(value: typing.Any) -> str:
    """17 significant digits for floats, '.' decimal regardless of locale"""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return '%.17g' % float(value)
    return str(value)


def get_fieldnames(rows: typing.Sequence[typedefs.Row]) -> list[str]:
    """union of row keys, in order of first appearance"""
    fieldnames: list[str] = []
    for row in rows:
        for key in row:
            if key not in fieldnames:
                fieldnames.append(key)
    return fieldnames


def _sort_token(value: typing.Any) -> tuple[int, float, str]:
    if value is None:
        return (2, 0.0, '')
    if isinstance(value, numbers.Real) and not isinstance(value, bool):
        number = float(value)
        if math.isnan(number):
            return (1, 0.0, 'nan')
        return (0, number, '')
    return (1, 0.0, str(value))


def sort_rows(
    rows: typing.Sequence[typedefs.Row], fieldnames: typing.Sequence[str]
) -> list[typedefs.Row]:
    return sorted(
        rows, key=lambda row: [_sort_token(row.get(key)) for key in fieldnames]
    )


def write_csv(rows: typing.Sequence[typedefs.Row], path: str) -> None:
    fieldnames = get_fieldnames(rows)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(fieldnames)
        for row in sort_rows(rows, fieldnames):
            writer.writerow([format_csv_value(row.get(key)) for key in fieldnames])


def _json_default(value: typing.Any) -> typing.Any:
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    return str(value)


def write_json(
    rows: typing.Sequence[typedefs.Row],
    path: str,
    summary: typing.Mapping[str, typing.Any] | None = None,
) -> None:
    fieldnames = get_fieldnames(rows)
    data = {
        'rows': [dict(row) for row in sort_rows(rows, fieldnames)],
        'summary': dict(summary or {}),
    }
    with open(path, 'w') as f:
        json.dump(data, f, indent=2, sort_keys=True, default=_json_default)
        f.write('\n')


def metadata_path(output_path: str) -> str:
    return output_path + '.meta.json'


def build_metadata(
    config: typedefs.RunConfig, start_time: float, end_time: float
) -> typedefs.RunMetadata:
    import tooltime

    from .. import __version__

    return {
        'version': __version__,
        'config': config,
        'seed': config['params']['seed'],
        'start_time': tooltime.timestamp_to_iso_pretty(start_time),
        'end_time': tooltime.timestamp_to_iso_pretty(end_time),
        'duration_seconds': end_time - start_time,
    }


def write_metadata(metadata: typedefs.RunMetadata, output_path: str) -> None:
    with open(metadata_path(output_path), 'w') as f:
        json.dump(metadata, f, indent=2, sort_keys=True, default=_json_default)
        f.write('\n')


#
# # console
#


def format_cell(value: typing.Any) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return '%.4g' % float(value)
    return str(value)


def print_rows(
    rows: typing.Sequence[typedefs.Row],
    title: str,
    columns: typing.Sequence[str] | None = None,
) -> None:
    import toolstr

    if columns is None:
        columns = get_fieldnames(rows)
    toolstr.print_header(title)
    if len(rows) == 0:
        print('no rows')
        return
    toolstr.print_table(
        [[format_cell(row.get(column)) for column in columns] for row in rows],
        labels=list(columns),
    )


def print_summary(summary: typing.Mapping[str, typing.Any]) -> None:
    import toolstr

    for key, value in summary.items():
        toolstr.print_bullet(key=key, value=format_cell(value))
