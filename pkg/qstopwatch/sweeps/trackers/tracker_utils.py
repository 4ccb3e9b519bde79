from __future__ import annotations

import typing

from ... import exceptions

if typing.TYPE_CHECKING:
    from .. import sweep_class
    from . import tracker


def create_tracker(
    tracker: str | None = None,
    *,
    output_dir: str | None = None,
    sweep: sweep_class.Sweep,
) -> tracker.Tracker:
    # determine tracker
    if tracker is None:
        if output_dir is not None:
            tracker = 'file'
        else:
            tracker = 'memory'

    if tracker == 'memory':
        from . import memory_tracker

        return memory_tracker.MemoryTracker(sweep=sweep)

    elif tracker == 'file':
        from . import file_tracker

        if output_dir is None:
            raise exceptions.ConfigError('must specify output_dir for file tracker')

        return file_tracker.FileTracker(sweep=sweep, output_dir=output_dir)

    else:
        raise exceptions.ConfigError('unknown tracker: ' + str(tracker))
