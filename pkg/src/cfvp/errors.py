"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid user-supplied configuration. Carries the offending field name."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class EdgeListParseError(ValueError):
    """Malformed edge-list input. Carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ScriptError(RuntimeError):
    """A forced-outcome replay script did not cover an attempted transmission."""
