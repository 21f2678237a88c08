"""Double exponential sums: direct evaluation and every bound in the chain.

The object of study is

    S = sum_{H<=h<=2H} g(h/H) sum_{M<=m<=2M} G(m/M) e((hT/M) F(m/M))

for a phase family F.  This module evaluates S directly (two independent
summation orders), classifies (H, M, T) into the two admissible parameter
cases, derives the block of secondary parameters (N, R, K, L, eta, Q-range),
and evaluates the bound formulas: the elementary one, the two-line "middle"
form, the closed "final" form of S/H, and the post-sieve maximum over Q.

Conventions, stated once:

* ">>", "<<" and "~" comparisons carry an explicit constant ``margin``
  (default 1.0) — nothing is hidden.
* hidden log-powers are carried as explicit (log T)^a multipliers; the
  final form takes the multiplier as an argument so the middle form at the
  case-A parameter N reproduces it exactly.
* the first case-A guard is "if M < T^(7/16)" by default; the variant with
  a negative exponent, which is vacuous for M >= 1, sits behind
  ``literal_small_m_guard`` without guessing intent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from latticelab.phases import PhaseFamily

__all__ = [
    "SumSpec",
    "ConditionConstants",
    "DerivedParams",
    "CaseClassification",
    "ParameterDomainError",
    "PhasePrecisionWarning",
    "eval_sum",
    "check_phase_conditions",
    "classify_case",
    "case_a_n",
    "case_b_n",
    "derive_params",
    "simple_bound",
    "condition_n_check",
    "condition_case_a_simplified",
    "bound_middle_form",
    "bound_final_form",
    "large_sieve_bound",
    "case_a_log_factor",
    "GUARD_LOG_EXP",
    "CASE_A_N_LOG_EXP",
    "CASE_B_N_LOG_EXP",
]

GUARD_LOG_EXP = 171.0 / 140.0
CASE_A_N_LOG_EXP = 969.0 / 14000.0
CASE_B_N_LOG_EXP = 969.0 / 5600.0


class ParameterDomainError(ValueError):
    """A derived parameter left its admissible domain."""


class PhasePrecisionWarning(UserWarning):
    """The phase h*T/M*F exceeds 2^53; e(phase) loses float precision."""


Weight = Optional[Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class SumSpec:
    """Parameters of the double sum.  The regime of interest has T >= M."""

    h: float
    m: float
    t: float
    phase: PhaseFamily
    g: Weight = None
    big_g: Weight = None

    def __post_init__(self):
        if self.h < 1.0 or self.m < 1.0:
            raise ValueError("need H >= 1 and M >= 1")


@dataclass(frozen=True)
class ConditionConstants:
    """Derivative-condition constants C1..C5 (each >= 2) and B0 > 0.

    The defaults are the smallest integers for which all five phase
    families pass the derivative checks jointly (verified by grid
    minimization over [1, 2]); C5 = 3 is the value for which the first
    second-case condition always holds in the reduction; B0 is never
    pinned down and defaults to 1.
    """

    c1: float = 16.0
    c2: float = 16.0
    c3: float = 19.0
    c4: float = 171.0
    c5: float = 3.0
    b0: float = 1.0

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c4", "c5"):
            if getattr(self, name) < 2.0:
                raise ValueError(f"{name} must be >= 2")
        if self.b0 <= 0.0:
            raise ValueError("b0 must be positive")


@dataclass(frozen=True)
class CaseClassification:
    case_a: bool
    case_b: bool

    @property
    def labels(self) -> tuple[str, ...]:
        out = []
        if self.case_a:
            out.append("A")
        if self.case_b:
            out.append("B")
        return tuple(out) if out else ("Neither",)


@dataclass(frozen=True)
class DerivedParams:
    """The secondary parameter block, evaluated at Q = R.

    R = (M^3/(NT))^(1/2); L = H/R and K = N/R (the Q = R values of HQ/R^2
    and NQ/R^2); eta = R^2/(NH), so eta*K*L = 1 exactly.  Q ranges over
    [R, 3H]; q2 is the sieve cutoff R (H/R)^(39/119) log(2H/R)^(-3/4).
    degenerate flags R > H, where L < 1 and the heavy machinery does not
    apply.
    """

    h: float
    m: float
    t: float
    n: float
    r: float
    k: float
    l: float
    eta: float
    q_min: float
    q_max: float
    q2: float
    degenerate: bool


def _as_weight(w: Weight) -> Callable[[np.ndarray], np.ndarray]:
    if w is None:
        return lambda u: np.ones_like(u)
    return lambda u: np.asarray(w(u), dtype=np.float64)


def eval_sum(spec: SumSpec, order: str = "hm", chunk: int = 1 << 22) -> complex:
    """Evaluate S by direct summation, in the given accumulation order.

    order="hm" accumulates over h with the inner m-sums vectorized;
    order="mh" does the transpose.  The two orders differ only in float
    accumulation and must agree to ~1e-9 relative for desk parameters.
    """
    if order not in ("hm", "mh"):
        raise ValueError("order must be 'hm' or 'mh'")
    hh = np.arange(math.ceil(spec.h), math.floor(2.0 * spec.h) + 1, dtype=np.float64)
    mm = np.arange(math.ceil(spec.m), math.floor(2.0 * spec.m) + 1, dtype=np.float64)
    if len(hh) == 0 or len(mm) == 0:
        return 0.0 + 0.0j
    gw = _as_weight(spec.g)(hh / spec.h)
    big_gw = _as_weight(spec.big_g)(mm / spec.m)
    phi = (spec.t / spec.m) * np.asarray(spec.phase.value(mm / spec.m), dtype=np.float64)

    peak = float(np.max(np.abs(hh))) * float(np.max(np.abs(phi)))
    if peak > 2.0**53:
        warnings.warn(
            f"phase magnitude {peak:.3g} exceeds 2^53; unit-circle values "
            "are no longer reliable",
            PhasePrecisionWarning,
        )

    two_pi_i = 2.0j * math.pi
    total = 0.0 + 0.0j
    if order == "hm":
        rows = max(1, chunk // max(1, len(mm)))
        for start in range(0, len(hh), rows):
            hb = hh[start : start + rows]
            inner = np.exp(two_pi_i * hb[:, None] * phi[None, :]) @ big_gw
            total += complex(np.sum(gw[start : start + rows] * inner))
    else:
        rows = max(1, chunk // max(1, len(hh)))
        for start in range(0, len(mm), rows):
            pb = phi[start : start + rows]
            inner = np.exp(two_pi_i * pb[:, None] * hh[None, :]) @ gw
            total += complex(np.sum(big_gw[start : start + rows] * inner))
    return total


def check_phase_conditions(
    family: PhaseFamily,
    constants: ConditionConstants | None = None,
    grid_points: int = 1001,
) -> bool:
    """Derivative conditions on [1, 2], from the analytic closed forms.

    True iff C_r >= |F^(r)| >= 1/C_r for r = 1, 2, 3 and
    |F' F''' - 3 (F'')^2| >= 1/C4, everywhere on a >= 1000-point grid.
    """
    if grid_points < 1000:
        raise ValueError("the check is specified on a grid of >= 1000 points")
    c = constants or ConditionConstants()
    z = np.linspace(1.0, 2.0, grid_points)
    d1, d2, d3 = np.abs(family.d1(z)), np.abs(family.d2(z)), np.abs(family.d3(z))
    wron = np.abs(family.d1(z) * family.d3(z) - 3.0 * family.d2(z) ** 2)
    for dv, cap in ((d1, c.c1), (d2, c.c2), (d3, c.c3)):
        if dv.max() > cap or dv.min() < 1.0 / cap:
            return False
    return bool(wron.min() >= 1.0 / c.c4)


def classify_case(
    h: float,
    m: float,
    t: float,
    constants: ConditionConstants | None = None,
    literal_small_m_guard: bool = False,
) -> CaseClassification:
    """Admissibility cases for (H, M, T); both labels may hold at once.

    Case A: H >= M^-9 T^4 (log T)^(171/140) when M is below the small-M
    guard threshold; H >= M^11 T^-6 (log T)^(171/140) when M > T^(9/16);
    and always H <= M T^(-49/164).  The small-M threshold is T^(7/16) by
    default (literal_small_m_guard=True uses T^(-7/16), which no M >= 1 is
    below, making that guard vacuous).

    Case B: M <= C5 sqrt(T) and H <= min(M^(35/69) T^(-2/23),
    B0 M^(3/2) T^(-1/2)).
    """
    if min(h, m, t) <= 0.0:
        raise ValueError("H, M, T must be positive")
    c = constants or ConditionConstants()
    log_t = math.log(t)
    if log_t <= 0.0:
        raise ValueError("need T > 1")
    guard_pow = (-7.0 / 16.0) if literal_small_m_guard else (7.0 / 16.0)
    lam = log_t**GUARD_LOG_EXP

    ok_small = (m >= t**guard_pow) or (h >= m**-9.0 * t**4.0 * lam)
    ok_large = (m <= t ** (9.0 / 16.0)) or (h >= m**11.0 * t**-6.0 * lam)
    case_a = ok_small and ok_large and (h <= m * t ** (-49.0 / 164.0))

    cap = min(m ** (35.0 / 69.0) * t ** (-2.0 / 23.0), c.b0 * m**1.5 * t**-0.5)
    case_b = (m <= c.c5 * math.sqrt(t)) and (h <= cap)
    return CaseClassification(case_a=case_a, case_b=case_b)


def case_a_log_factor(t: float) -> float:
    """(log T)^(969/14000), the explicit log-power inside the case-A N."""
    return math.log(t) ** CASE_A_N_LOG_EXP


def case_a_n(h: float, m: float, t: float) -> float:
    """N = H (M/H)^(41/25) T^(-49/100) (log T)^(969/14000)."""
    return h * (m / h) ** (41.0 / 25.0) * t ** (-49.0 / 100.0) * case_a_log_factor(t)


def case_b_n(h: float, m: float, t: float) -> float:
    """N = min(M^(7/8)(log T)^(969/5600) / (T^(3/20) H^(29/40)),
    M^2/(H^(1/3) T^(2/3)))."""
    first = (
        m ** (7.0 / 8.0)
        * math.log(t) ** CASE_B_N_LOG_EXP
        / (t ** (3.0 / 20.0) * h ** (29.0 / 40.0))
    )
    second = m**2.0 / (h ** (1.0 / 3.0) * t ** (2.0 / 3.0))
    return min(first, second)


def derive_params(h: float, m: float, t: float, case: str = "A") -> DerivedParams:
    """Derive (N, R, K, L, eta, Q-range) from (H, M, T) in the given case.

    Evaluated at Q = R (where the post-sieve maximum sits): L = H/R,
    K = N/R, eta = R^2/(NH).  Flags the degenerate regime R > H.  q2 is
    NaN when H <= R/2 makes its logarithm non-positive (necessarily a
    degenerate point).
    """
    if min(h, m, t) <= 0.0:
        raise ParameterDomainError("H, M, T must be positive")
    if case == "A":
        n = case_a_n(h, m, t)
    elif case == "B":
        n = case_b_n(h, m, t)
    else:
        raise ValueError("case must be 'A' or 'B'")
    if n <= 0.0 or not math.isfinite(n):
        raise ParameterDomainError(f"derived N={n} is not positive and finite")
    r = math.sqrt(m**3 / (n * t))
    if r <= 0.0 or not math.isfinite(r):
        raise ParameterDomainError(f"derived R={r} is not positive and finite")
    degenerate = r > h
    if 2.0 * h / r > 1.0:
        q2 = r * (h / r) ** (39.0 / 119.0) * math.log(2.0 * h / r) ** (-0.75)
    else:
        q2 = math.nan
    return DerivedParams(
        h=h,
        m=m,
        t=t,
        n=n,
        r=r,
        k=n / r,
        l=h / r,
        eta=r * r / (n * h),
        q_min=r,
        q_max=3.0 * h,
        q2=q2,
        degenerate=degenerate,
    )


def simple_bound(h: float, m: float, t: float) -> tuple[float, float]:
    """Elementary single-sum bound and its simplified form.

    Returns (H ((HT/M^2)^-1 + M (HT/M^3)^(1/2)),  H^(3/2) T^(1/2) / M^(1/2));
    the two agree within a factor 2 whenever M <= (HT)^(3/5).  Requires
    M <= sqrt(T).
    """
    if m > math.sqrt(t):
        raise ParameterDomainError("simple bound requires M <= sqrt(T)")
    full = h * ((h * t / m**2) ** -1.0 + m * (h * t / m**3) ** 0.5)
    simplified = h**1.5 * t**0.5 / m**0.5
    return full, simplified


def _require_q(q: float) -> None:
    if not (4.0 <= q <= 4.5):
        raise ValueError(f"q={q} outside [4, 4.5]")


def condition_n_check(
    h: float, m: float, t: float, q: float, n: float, margin: float = 1.0
) -> bool:
    """N^(6-q) >= margin * H^(2q-6) (M^3/T)^(4-q).

    At q = 4 this collapses to N^2 >= margin * H^2.
    """
    _require_q(q)
    return n ** (6.0 - q) >= margin * h ** (2.0 * q - 6.0) * (m**3 / t) ** (4.0 - q)


def condition_case_a_simplified(
    h: float, m: float, t: float, q: float, margin: float = 1.0
) -> bool:
    """The closed case-A form of the condition:

        margin * H^((2q-6)/(6-q) + 16/25) M^(34/25)
            <= T^(51/100) (log T)^(969/14000).

    Against condition_n_check at the case-A N, the two sides differ by the
    factor (M^3/T^... ) — they carry the same T-power content exactly when
    M = T^(1/3), and this form implies the direct one whenever
    M >= T^(1/3) (the regime of the final application).
    """
    _require_q(q)
    lhs = margin * h ** ((2.0 * q - 6.0) / (6.0 - q) + 16.0 / 25.0) * m ** (34.0 / 25.0)
    rhs = t ** (51.0 / 100.0) * case_a_log_factor(t)
    return lhs <= rhs


def bound_middle_form(h: float, m: float, t: float, q: float, n: float) -> float:
    """The two-line product bound for S, as a function of N.

    (M^(5/2)/T^(1/2)) (H^2 T/M^3)^(11/(17q)) (TH/M^3)^(1-2/q-(q-4)/(q(q-2)))
    * N^(1/2-57/(17q)-2(q-4)/(q(q-2)))
    * (1 + (M^3/(HT))^(2/(q-2)) (T^(1/2)/M^(3/2)) N^(3/2-4/(q-2)))^(1/q).

    Both N-exponents are negative on q in [4, 4.5], so the value is
    strictly decreasing in N.
    """
    _require_q(q)
    if n <= 0.0:
        raise ParameterDomainError("N must be positive")
    frac = (q - 4.0) / (q * (q - 2.0))
    main = (
        m**2.5
        / t**0.5
        * (h * h * t / m**3) ** (11.0 / (17.0 * q))
        * (t * h / m**3) ** (1.0 - 2.0 / q - frac)
        * n ** (0.5 - 57.0 / (17.0 * q) - 2.0 * frac)
    )
    bracket = 1.0 + (m**3 / (h * t)) ** (2.0 / (q - 2.0)) * (
        t**0.5 / m**1.5
    ) * n ** (1.5 - 4.0 / (q - 2.0))
    return main * bracket ** (1.0 / q)


def bound_final_form(
    h: float, m: float, t: float, q: float, log_factor: float = 1.0
) -> float:
    """The closed form of the S/H bound.

    (H/M)^(-8/25 + 36/(25q) + 7(q-4)/(25q(q-2)))
    * T^(51/200 + 29/(100q) - (q-4)/(50q(q-2)))
    * (1 + (H/M)^(14/(25(q-2)) - 24/25) T^(-1/(25(q-2)) - 47/200))^(1/q).

    log_factor is the explicit (log T)-power multiplier carried by the
    case-A N; passing case_a_log_factor(t) makes this expression equal to
    bound_middle_form(..., n=case_a_n(h, m, t)) / h exactly, rather than
    "up to hidden logs".  log_factor=1 gives the bare closed form.
    """
    _require_q(q)
    frac = (q - 4.0) / (q * (q - 2.0))
    rho = 0.5 - 57.0 / (17.0 * q) - 2.0 * frac
    main = (h / m) ** (-8.0 / 25.0 + 36.0 / (25.0 * q) + 7.0 * frac / 25.0) * t ** (
        51.0 / 200.0 + 29.0 / (100.0 * q) - frac / 50.0
    )
    term = (h / m) ** (14.0 / (25.0 * (q - 2.0)) - 24.0 / 25.0) * t ** (
        -1.0 / (25.0 * (q - 2.0)) - 47.0 / 200.0
    )
    bracket = 1.0 + term * log_factor ** (1.5 - 4.0 / (q - 2.0))
    return main * log_factor**rho * bracket ** (1.0 / q)


GqLike = Union[float, Callable[[float], float]]


def large_sieve_bound(
    params: DerivedParams, q: float, gq: GqLike, grid_points: int = 65
) -> float:
    """max over Q in [R, Q2] of (R/Q)^(3-6/q) (MR/N) (H/R)^(22/(17q)) Gq.

    gq may be a constant or a callable Q -> Gq value (the mean-value norm
    evaluated at the Q-dependent block K = NQ/R^2, L = HQ/R^2).  With the
    proven upper bound plugged in, the maximum sits at Q = R: both
    Q-dependent factors decay in Q for q >= 4.
    """
    _require_q(q)
    if not (math.isfinite(params.q2) and params.q2 >= params.q_min):
        raise ParameterDomainError("empty Q range: Q2 < R (degenerate block)")
    if grid_points < 1:
        raise ValueError("need at least one grid point")
    if grid_points == 1:
        qs = np.array([params.q_min])
    else:
        qs = np.geomspace(params.q_min, params.q2, grid_points)
    gq_fn = (lambda _: float(gq)) if not callable(gq) else gq
    best = -math.inf
    for q_val in qs:
        val = (
            (params.r / q_val) ** (3.0 - 6.0 / q)
            * (params.m * params.r / params.n)
            * (params.h / params.r) ** (22.0 / (17.0 * q))
            * gq_fn(float(q_val))
        )
        best = max(best, val)
    return best
