class DomainError(ValueError):
    """An argument is outside the domain of the model."""


class ConfigError(ValueError):
    """A scenario file could not be parsed or failed validation."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
