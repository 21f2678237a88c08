"""Phase families for the double exponential sums.

Every phase that shows up in the circle/divisor reduction has the shape

    F(z) = scale / (z + shift) + offset        on  z in [1, 2]:

1/z for the divisor sum; 1/(z +- 1/4) and 1/(4z) -+ (M/4T) for the four
circle-problem sums (the constant offset encodes the -+1/4 phase shift of
the corresponding sawtooth argument).  Derivatives up to order three are
closed-form, which the derivative-condition checks rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["PhaseFamily", "standard_family", "five_families"]


@dataclass(frozen=True)
class PhaseFamily:
    """F(z) = scale/(z + shift) + offset, smooth on [1, 2]."""

    scale: float
    shift: float = 0.0
    offset: float = 0.0
    name: str = ""

    def __post_init__(self):
        if self.scale == 0.0:
            raise ValueError("scale must be nonzero")
        if not (self.shift > -1.0):
            # keep the pole z = -shift strictly left of [1, 2]
            raise ValueError("pole would intrude on [1, 2]")

    def value(self, z):
        return self.scale / (z + self.shift) + self.offset

    def d1(self, z):
        u = z + self.shift
        return -self.scale / (u * u)

    def d2(self, z):
        u = z + self.shift
        return 2.0 * self.scale / (u * u * u)

    def d3(self, z):
        u = z + self.shift
        return -6.0 * self.scale / (u * u * u * u)

    def deriv(self, z, order: int):
        if order == 0:
            return self.value(z)
        if order == 1:
            return self.d1(z)
        if order == 2:
            return self.d2(z)
        if order == 3:
            return self.d3(z)
        raise ValueError("only orders 0..3 are provided")

    def __call__(self, z):
        return self.value(z)


def standard_family() -> PhaseFamily:
    """F(z) = 1/z, the divisor-sum phase."""
    return PhaseFamily(scale=1.0, shift=0.0, name="1/z")


def five_families(m_param: float, t_param: float) -> tuple[PhaseFamily, ...]:
    """The five phases of the reduction, for block parameters (M, T).

    1/z, 1/(z+1/4), 1/(z-1/4), 1/(4z) - M/(4T), 1/(4z) + M/(4T).
    """
    if not (0 < m_param <= t_param):
        raise ValueError("need 0 < M <= T")
    c = m_param / (4.0 * t_param)
    return (
        PhaseFamily(1.0, 0.0, 0.0, "1/z"),
        PhaseFamily(1.0, 0.25, 0.0, "1/(z+1/4)"),
        PhaseFamily(1.0, -0.25, 0.0, "1/(z-1/4)"),
        PhaseFamily(0.25, 0.0, -c, "1/(4z)-M/(4T)"),
        PhaseFamily(0.25, 0.0, +c, "1/(4z)+M/(4T)"),
    )
