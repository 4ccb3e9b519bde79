from __future__ import annotations


class StopwatchError(Exception):
    pass


class InvalidArgument(StopwatchError, ValueError):
    """argument outside the domain of an operation"""


class ConfigError(StopwatchError):
    """invalid run configuration, cli flag, or environment setting"""


class BoundViolation(StopwatchError):
    """a measured quantity fell on the wrong side of an analytic bound"""
