"""Exact circle and divisor error terms and their sawtooth recompositions.

The two error terms under study are

    circle_error(X)  = #{(m,n) in Z^2 : m^2 + n^2 <= X} - pi X
    divisor_error(X) = sum_{n <= X} d(n) - X ln X - (2 gamma - 1) X

with the integer parts computed exactly (Python integers, exact integer
square roots) and the main terms in float64.  Both admit recompositions as
short sums of the sawtooth psi(t) = {t} - 1/2, correct up to a bounded
additive constant, which is what connects them to the exponential-sum
machinery in the rest of the package.

Precision policy, in one place: EULER_GAMMA and math.pi are float64
constants accurate to ~16 significant digits; integer square roots use
math.isqrt (never a float round-trip, which fails near perfect squares);
arbitrary-precision Python integers make overflow impossible, so the
"exact" columns are exact for any desk-scale X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EULER_GAMMA",
    "SawtoothConfig",
    "ErrorSample",
    "divisor_count",
    "divisor_sum",
    "divisor_sum_direct",
    "lattice_count",
    "lattice_count_exhaustive",
    "lattice_counts_upto",
    "divisor_error",
    "circle_error",
    "sawtooth",
    "sawtooth_series",
    "error_via_sawtooth",
    "hardy_ratio_max",
    "error_sample",
]

# Euler's constant, 16 significant digits (float64 resolution).
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class SawtoothConfig:
    """Truncation length Y >= 1 of the sawtooth Fourier expansion."""

    y: float = 1.0e4

    def __post_init__(self):
        if not (self.y >= 1.0 and math.isfinite(self.y)):
            raise ValueError("truncation length must be finite and >= 1")


@dataclass(frozen=True)
class ErrorSample:
    """One X with its exact count/sum, float main term, and error term."""

    x: int
    exact: int
    main_term: float
    error: float


def divisor_count(n: int) -> int:
    """d(n) by trial division; the elementary oracle."""
    if n < 1:
        raise ValueError("n must be >= 1")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


def divisor_sum(x: int) -> int:
    """sum_{n <= x} d(n) by the hyperbola identity.

    2 * sum_{m <= isqrt(x)} floor(x/m) - isqrt(x)^2, exact in O(sqrt x).
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    r = math.isqrt(x)
    return 2 * sum(x // m for m in range(1, r + 1)) - r * r


def divisor_sum_direct(x: int) -> int:
    """sum_{n <= x} d(n) = sum_{d <= x} floor(x/d), enumerated in full.

    O(x) oracle, independent of the hyperbola folding; chunked so that a
    10^7-scale x stays within a few tens of MB.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    total = 0
    chunk = 1 << 20
    for start in range(1, x + 1, chunk):
        d = np.arange(start, min(start + chunk, x + 1), dtype=np.int64)
        total += int((x // d).sum())
    return total


def lattice_count(x: int) -> int:
    """#{(m,n) in Z^2 : m^2 + n^2 <= x} by exact per-row counting."""
    if x < 0:
        raise ValueError("x must be >= 0")
    r = math.isqrt(x)
    total = 2 * r + 1  # the m = 0 row
    for m in range(1, r + 1):
        total += 2 * (2 * math.isqrt(x - m * m) + 1)
    return total


def lattice_count_exhaustive(x: int) -> int:
    """Quadrant enumeration oracle: every |m|, |n| <= isqrt(x) is tested."""
    if x < 0:
        raise ValueError("x must be >= 0")
    r = math.isqrt(x)
    count = 0
    for m in range(-r, r + 1):
        mm = m * m
        for n in range(-r, r + 1):
            if mm + n * n <= x:
                count += 1
    return count


def lattice_counts_upto(x_max: int) -> np.ndarray:
    """Array N with N[X] = lattice_count(X) for every X in [0, x_max].

    One pass over all first-quadrant pairs with multiplicity weights; the
    histogram of the norms m^2 + n^2 is then cumulated.  Exact (counts stay
    far below 2^53).
    """
    if x_max < 0:
        raise ValueError("x_max must be >= 0")
    r = math.isqrt(x_max)
    hist = np.zeros(x_max + 1, dtype=np.float64)
    for m in range(0, r + 1):
        rem = x_max - m * m
        n_max = math.isqrt(rem)
        n = np.arange(0, n_max + 1, dtype=np.int64)
        w = np.full(n_max + 1, 4.0 if m > 0 else 2.0)
        w[0] = 2.0 if m > 0 else 1.0
        hist += np.bincount(m * m + n * n, weights=w, minlength=x_max + 1)
    counts = np.cumsum(hist)
    return counts.astype(np.int64)


def divisor_error(x: int) -> float:
    """Delta(X) = divisor_sum(X) - X ln X - (2 gamma - 1) X."""
    exact = divisor_sum(x)
    main = x * math.log(x) + (2.0 * EULER_GAMMA - 1.0) * x
    return float(exact) - main


def circle_error(x: int) -> float:
    """R(X) = lattice_count(X) - pi X."""
    return float(lattice_count(x)) - math.pi * x


def sawtooth(t):
    """psi(t) = (t - floor(t)) - 1/2; 1-periodic.  Accepts arrays.

    For t a hair below an integer, float rounding makes t - floor(t) hit
    1.0 exactly; that case is folded back to 0.0 so the value stays in
    [-1/2, 1/2).
    """
    if isinstance(t, np.ndarray):
        frac = t - np.floor(t)
        frac = np.where(frac >= 1.0, frac - 1.0, frac)
        return frac - 0.5
    frac = t - math.floor(t)
    if frac >= 1.0:
        frac -= 1.0
    return frac - 0.5


def sawtooth_series(t: float, cfg: SawtoothConfig) -> float:
    """Truncated Fourier expansion of the sawtooth.

    Returns -sum_{1<=h<=Y} sin(2 pi h t) / (pi h), the partial sums of the
    classical expansion psi(t) = -(1/pi) sum_h sin(2 pi h t)/h; it
    approaches sawtooth(t) as Y grows, with residual O(1/(1 + ||t|| Y)).
    (With the opposite overall sign the partial sums converge to -psi(t),
    which no truncation length can repair; the sign here is the one the
    convergence oracle fixes.)
    """
    h = np.arange(1, int(cfg.y) + 1, dtype=np.float64)
    return float(-np.sum(np.sin(2.0 * math.pi * h * t) / (math.pi * h)))


def _psi_sum(args: np.ndarray) -> float:
    return float(np.sum(args - np.floor(args) - 0.5))


def error_via_sawtooth(kind: str, x: int, variant: str = "corrected") -> float:
    """Sawtooth recomposition of the divisor / circle error term.

    divisor:  -2 sum_{m <= sqrt X} psi(X/m); differs from divisor_error(X)
    by a bounded quantity (empirically < 1.1 at desk scale).

    circle:  a combination of four sawtooth sums at the arguments
    X/(4m+1), X/(4m-1), X/(4m) - 1/4, X/(4m) + 1/4.  Two variants:

    * "corrected" (default): signs -4 [ S1 - S2 + S3 - S4 ] with the
      summation ranges that the chi_{-4} hyperbola split actually
      produces: 4m+1 <= sqrt(X) in S1, 4m-1 <= sqrt(X) in S2, and the
      co-divisor range m <= sqrt(X) in S3, S4.  Tracks circle_error
      within ~3 at desk scale.
    * "printed": the duplicated-fourth-sum form with every range
      m <= sqrt(X); the last two sums cancel identically, and the result
      drifts O(sqrt X) from the truth.  Kept only for comparison.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if kind == "divisor":
        r = math.isqrt(x)
        m = np.arange(1, r + 1, dtype=np.float64)
        return -2.0 * _psi_sum(x / m)
    if kind != "circle":
        raise ValueError(f"unknown kind {kind!r}")
    r = math.isqrt(x)
    if variant == "printed":
        m = np.arange(1, r + 1, dtype=np.float64)
        s1 = _psi_sum(x / (4.0 * m + 1.0))
        s2 = _psi_sum(x / (4.0 * m - 1.0))
        s3 = _psi_sum(x / (4.0 * m) - 0.25)
        return -4.0 * (s1 - s2 + s3 - s3)
    if variant == "corrected":
        m1 = np.arange(0, (r - 1) // 4 + 1, dtype=np.float64)  # 4m+1 <= r
        m2 = np.arange(1, (r + 1) // 4 + 1, dtype=np.float64)  # 4m-1 <= r
        me = np.arange(1, r + 1, dtype=np.float64)
        s1 = _psi_sum(x / (4.0 * m1 + 1.0))
        s2 = _psi_sum(x / (4.0 * m2 - 1.0)) if len(m2) else 0.0
        s3 = _psi_sum(x / (4.0 * me) - 0.25)
        s4 = _psi_sum(x / (4.0 * me) + 0.25)
        return -4.0 * (s1 - s2 + s3 - s4)
    raise ValueError(f"unknown variant {variant!r}")


def hardy_ratio_max(x_max: int = 10**6) -> float:
    """max over 2 <= X <= x_max of |circle_error(X)| / (X ln X)^{1/4}."""
    if x_max < 2:
        raise ValueError("x_max must be >= 2")
    counts = lattice_counts_upto(x_max)
    xs = np.arange(2, x_max + 1, dtype=np.float64)
    r = counts[2:].astype(np.float64) - math.pi * xs
    return float(np.max(np.abs(r) / (xs * np.log(xs)) ** 0.25))


def error_sample(kind: str, x: int) -> ErrorSample:
    """Assemble the (X, exact, main term, error) row for one X."""
    if kind == "divisor":
        exid = divisor_sum(x)
        main = x * math.log(x) + (2.0 * EULER_GAMMA - 1.0) * x
    elif kind == "circle":
        exid = lattice_count(x)
        main = math.pi * x
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return ErrorSample(x=x, exact=exid, main_term=main, error=float(exid) - main)
