"""Exponent optimization pipeline.

The closing computation of the lab: the exponent curve

    f(x) = -(8/25) x - (1/200) (sqrt(2(1-14x)) - 5 sqrt(-1-8x))^2 + 51/200

is compared against g(x) = -x on [-3/8, -0.3].  Their unique intersection
defines theta* = 0.3144831759741...; the admissible parameter range is
x in [-3/8, -theta*], on which a norm exponent q(x) in [4, 4.35] is chosen.
Two side inequalities guarantee that the choice of q is feasible, and an
algebraic identity ties the q-dependent exponent back to f(x).

Everything here is a plain function of x; the heavy machinery lives in the
other modules.  Exact rational arithmetic (fractions.Fraction) is used
wherever a form is polynomial, so those checks carry no float error at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "ThetaResult",
    "ExponentGrid",
    "exponent_final",
    "exponent_final_exact",
    "theta_star",
    "q_of_x",
    "check_ineq_1",
    "check_ineq_2",
    "ineq_2_polynomial_exact",
    "algebra_identity",
    "corollary_exponent",
    "export_curve",
    "CURVE_COLUMNS",
]

# Bracket containing the unique root of f(x) + x.
BRACKET = (-0.35, -0.3)

# Comparisons between algebraically equivalent float forms are allowed this
# much absolute slack; at the x = -3/8 boundary several forms meet exactly
# and plain float evaluation wobbles by a few ulp around equality.
_FORM_TOL = 1e-12


class ConsistencyError(AssertionError):
    """Two algebraically equivalent reformulations disagreed numerically."""


@dataclass(frozen=True)
class ThetaResult:
    """Root of f(x) + x = 0 on the bracket, reported as theta* = -root."""

    theta_star: float
    residual: float
    bracket: tuple[float, float]
    iterations: int


def exponent_final(x: float) -> float:
    """The exponent curve f(x); strictly increasing on [-3/8, -theta*].

    Requires 1 - 14x > 0 and -1 - 8x >= 0, i.e. x <= -1/8.
    """
    a = 2.0 * (1.0 - 14.0 * x)
    b = -1.0 - 8.0 * x
    if a <= 0.0 or b < 0.0:
        raise ValueError(f"x={x} outside the domain of the exponent curve")
    bracket = math.sqrt(a) - 5.0 * math.sqrt(b)
    return -(8.0 / 25.0) * x - bracket * bracket / 200.0 + 51.0 / 200.0


def exponent_final_exact(x: Fraction) -> Fraction:
    """Exact rational value of f(x), when it exists.

    (sqrt(A) - sqrt(B))^2 = A + B - 2 sqrt(AB) with A = 2(1-14x) and
    B = 25(-1-8x) is rational exactly when A*B is a rational square; the
    lower endpoint x = -3/8 (A = 25/2, B = 50, AB = 625) is such a point.
    """
    x = Fraction(x)
    a = 2 * (1 - 14 * x)
    b = 25 * (-1 - 8 * x)
    ab = a * b
    num, den = ab.numerator, ab.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise ValueError(f"(bracket)^2 is irrational at x={x}")
    bracket_sq = a + b - 2 * Fraction(rn, rd)
    return -Fraction(8, 25) * x - bracket_sq / 200 + Fraction(51, 200)


@lru_cache(maxsize=None)
def theta_star(tol: float = 1e-12) -> ThetaResult:
    """Bisect f(x) + x on [-0.35, -0.3] and return theta* = -root.

    tol is the bracket width at which bisection stops; it must be >= 1e-14
    (below that float64 bisection cannot make progress).
    """
    if tol < 1e-14:
        raise ValueError("tol below 1e-14 is not resolvable in float64")
    lo, hi = BRACKET
    g_lo = exponent_final(lo) + lo
    g_hi = exponent_final(hi) + hi
    if g_lo * g_hi >= 0.0:
        raise RuntimeError("no sign change on the bracket; implementation bug")
    iterations = 0
    while hi - lo > tol and iterations < 200:
        mid = 0.5 * (lo + hi)
        g_mid = exponent_final(mid) + mid
        if g_mid == 0.0:
            lo = hi = mid
            break
        if g_lo * g_mid < 0.0:
            hi = mid
        else:
            lo, g_lo = mid, g_mid
        iterations += 1
    root = 0.5 * (lo + hi)
    return ThetaResult(
        theta_star=-root,
        residual=abs(exponent_final(root) + root),
        bracket=BRACKET,
        iterations=iterations,
    )


def _x_range() -> tuple[float, float]:
    return (-3.0 / 8.0, -theta_star().theta_star)


def _require_in_range(x: float, slack: float = 1e-12) -> None:
    lo, hi = _x_range()
    if not (lo - slack <= x <= hi + slack):
        raise ValueError(f"x={x} outside [{lo}, {hi}]")


def q_of_x(x: float) -> float:
    """Norm exponent q(x) = 2 / (5 sqrt((-1-8x)/(2(1-14x))) - 1) + 2.

    Strictly increasing from 4 (at x = -3/8) to about 4.2916 (at -theta*).
    """
    _require_in_range(x)
    s = math.sqrt((-1.0 - 8.0 * x) / (2.0 * (1.0 - 14.0 * x)))
    return 2.0 / (5.0 * s - 1.0) + 2.0


def check_ineq_1(x: float) -> bool:
    """Feasibility inequality for the counting condition, at q = q_of_x(x).

    Evaluates both the printed fractional form

        ((7/25)x - 1/50) / ((41/25)x + 49/100)  <  (q-2)/(q-4)

    and the reduced form  -17(8x+3)/(164x+49) < 2/(q-4), asserting they
    agree.  The q = 4 endpoint is handled as the limit: both right-hand
    sides -> +infinity, so the inequality holds vacuously there.
    """
    _require_in_range(x)
    q = q_of_x(x)
    if abs(q - 4.0) <= _FORM_TOL:
        return True
    lhs_orig = ((7.0 / 25.0) * x - 1.0 / 50.0) / ((41.0 / 25.0) * x + 49.0 / 100.0)
    rhs_orig = (q - 2.0) / (q - 4.0)
    lhs_red = -17.0 * (8.0 * x + 3.0) / (164.0 * x + 49.0)
    rhs_red = 2.0 / (q - 4.0)
    holds_orig = lhs_orig < rhs_orig + _FORM_TOL
    holds_red = lhs_red < rhs_red + _FORM_TOL
    if holds_orig != holds_red:
        raise ConsistencyError(
            f"ineq-1 forms disagree at x={x}: printed={holds_orig} reduced={holds_red}"
        )
    return holds_orig


def ineq_2_polynomial_exact(x: Fraction) -> bool:
    """(8x+3)(4888x+683) <= 0, decided in exact rational arithmetic."""
    x = Fraction(x)
    return (8 * x + 3) * (4888 * x + 683) <= 0


def check_ineq_2(x: float) -> bool:
    """Tail-domination inequality, in all of its equivalent forms.

    Printed form:   ((24/25)x + 47/200)/((7/25)x - 1/50) <= 2/(q-2)
    Rearranged:     (248x+43)/(56x-4) <= 5 sqrt((-1-8x)/(2(1-14x)))
    Squared:        ((248x+43)/(56x-4))^2 <= 25(-1-8x)/(2(1-14x))
    Polynomial:     (8x+3)(4888x+683) <= 0   [exact, Fraction arithmetic]

    The polynomial verdict is returned; the float forms are required to
    agree with it up to the boundary slack (at x = -3/8 every form holds
    with equality and float evaluation sits within a few ulp of it).
    """
    _require_in_range(x)
    q = q_of_x(x)
    exact = ineq_2_polynomial_exact(Fraction(x))

    lhs_p = ((24.0 / 25.0) * x + 47.0 / 200.0) / ((7.0 / 25.0) * x - 1.0 / 50.0)
    rhs_p = 2.0 / (q - 2.0)
    ratio = (248.0 * x + 43.0) / (56.0 * x - 4.0)
    rhs_r = 5.0 * math.sqrt((-1.0 - 8.0 * x) / (2.0 * (1.0 - 14.0 * x)))
    rhs_s = 25.0 * (-1.0 - 8.0 * x) / (2.0 * (1.0 - 14.0 * x))

    forms = {
        "printed": lhs_p <= rhs_p + _FORM_TOL,
        "rearranged": ratio <= rhs_r + _FORM_TOL,
        "squared": ratio * ratio <= rhs_s + _FORM_TOL * max(1.0, rhs_s),
    }
    for name, holds in forms.items():
        if holds != exact:
            raise ConsistencyError(
                f"ineq-2 form {name!r} disagrees with the exact polynomial "
                f"form at x={x}: {holds} vs {exact}"
            )
    return exact


def algebra_identity(x: float) -> float:
    """Residual of the identity collapsing the q-dependent exponent.

    With q = q_of_x(x),

        36x/(25q) + 29/(100q) + ((14x-1)/50) (q-4)/(q(q-2))
            = -(1/200)(sqrt(2(1-14x)) - 5 sqrt(-1-8x))^2,

    so the returned absolute residual of (lhs - rhs) must vanish to float
    precision.  Defined for q > 4 (the q = 4 endpoint makes the middle term
    trivially zero and is checked separately).
    """
    _require_in_range(x)
    q = q_of_x(x)
    if q <= 4.0 + 1e-15:
        raise ValueError("identity is evaluated for q > 4 only")
    lhs = (
        36.0 * x / (25.0 * q)
        + 29.0 / (100.0 * q)
        + ((14.0 * x - 1.0) / 50.0) * (q - 4.0) / (q * (q - 2.0))
    )
    bracket = math.sqrt(2.0 * (1.0 - 14.0 * x)) - 5.0 * math.sqrt(-1.0 - 8.0 * x)
    rhs = -bracket * bracket / 200.0
    return abs(lhs - rhs)


def corollary_exponent(x: float) -> float:
    """The q-form of the exponent; identical to exponent_final on the range.

    -(8/25)x + 51/200 + 36x/(25q) + 29/(100q) + ((14x-1)/50)(q-4)/(q(q-2))
    with q = q_of_x(x).
    """
    _require_in_range(x)
    q = q_of_x(x)
    return (
        -(8.0 / 25.0) * x
        + 51.0 / 200.0
        + 36.0 * x / (25.0 * q)
        + 29.0 / (100.0 * q)
        + ((14.0 * x - 1.0) / 50.0) * (q - 4.0) / (q * (q - 2.0))
    )


@dataclass(frozen=True)
class ExponentGrid:
    """Sample points of [-3/8, -theta*], endpoints included.

    The upper endpoint is -theta*, so constructing a grid computes the root
    first.  step is the nominal spacing; the actual points are uniform with
    both endpoints exact.
    """

    x_lo: float
    x_hi: float
    step: float

    @classmethod
    def default(cls, n: int = 10_001) -> "ExponentGrid":
        if n < 2:
            raise ValueError("grid needs at least two points")
        lo = -3.0 / 8.0
        hi = -theta_star().theta_star
        return cls(x_lo=lo, x_hi=hi, step=(hi - lo) / (n - 1))

    def points(self) -> np.ndarray:
        n = int(round((self.x_hi - self.x_lo) / self.step)) + 1
        return np.linspace(self.x_lo, self.x_hi, n)


CURVE_COLUMNS = ("x", "f", "neg_x", "f_plus_x")


def export_curve(
    n: int = 801, lo: float = -0.38, hi: float = -0.3
) -> np.ndarray:
    """Table (x, f(x), -x, f(x)+x) over [lo, hi] for plotting.

    The last column changes sign exactly once, at x = -theta* (within one
    grid step).
    """
    if not (lo < hi):
        raise ValueError("empty curve range")
    xs = np.linspace(lo, hi, n)
    f = np.array([exponent_final(float(x)) for x in xs])
    return np.column_stack([xs, f, -xs, f + xs])
