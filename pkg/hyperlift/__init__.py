"""hyperlift: exact verification of extended quadratic and cubic hypergeometric transformations."""

__version__ = "0.1.0"
