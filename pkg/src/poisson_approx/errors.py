class InapplicableBound(ValueError):
    """Raised when a bound's hypotheses do not hold for the given input."""
