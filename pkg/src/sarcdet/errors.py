"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Inputs or configuration violate a documented contract."""


class FormatError(ValueError):
    """A data, embedding, interchange, or model file is malformed."""
