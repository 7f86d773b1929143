"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter or input value is outside its documented domain."""


class ConfigurationError(ValueError):
    """A combination of otherwise-valid settings is inconsistent
    (for example a scale ladder that does not fit the sample rate)."""
