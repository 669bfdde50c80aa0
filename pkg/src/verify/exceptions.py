REGISTRY_MISMATCH = 'registered checks {registered} differ from the fixed check list {expected}'


class RegistryError(RuntimeError):
    ...


class SkipCheck(Exception):
    """Raised inside a check whose preconditions do not hold for the configuration."""
