class ConfigError(ValueError):
    """Invalid or unknown configuration value; ``key`` names the offender."""

    def __init__(self, key: str, reason: str):
        self.key = key
        super().__init__(f"{key}: {reason}")


class ContractViolation(ValueError):
    """A caller broke an operation's precondition."""
