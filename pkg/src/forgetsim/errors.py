"""Error types shared across the package."""


class ConfigError(ValueError):
    """A configuration value is out of range or inconsistent."""


class ScheduleComplete(Exception):
    """A fixed presentation schedule has no entries left."""
