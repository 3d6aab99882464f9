"""
Errors of the experiment runner.
"""


class ConfigInvalid(ValueError):
    """The experiment configuration is malformed or inconsistent."""


class IoFailure(OSError):
    """Reading a config or writing an artifact failed."""
