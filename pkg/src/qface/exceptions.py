"""Exception types shared across the package."""


class NormDriftError(RuntimeError):
    """State norm drifted beyond tolerance after a gate; indicates a simulator bug."""


class PgmParseError(ValueError):
    """Malformed PGM file. Carries the byte offset where parsing failed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class DataError(ValueError):
    """Dataset-level problem: missing files, bad counts, unusable vectors."""


class ConfigError(ValueError):
    """Invalid run configuration: bad flag value, unknown config key, inconsistent settings."""
