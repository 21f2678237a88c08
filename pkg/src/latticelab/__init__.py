"""latticelab: desk-scale numerical laboratory for lattice-count and
divisor-sum error terms, double exponential sums, the two spacing
problems, and the exponent optimization that ties them together."""

__version__ = "0.1.0"

from latticelab.exponents import theta_star  # noqa: F401
