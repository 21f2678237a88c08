"""The second spacing problem: minor-arc data and close-pair counting.

Each reduced fraction a/r whose value lies in the range of the scaled
phase derivative phi'(m) = (T/M^2) F'(m/M) on [M, 2M] labels a minor arc.
The arc carries a data tuple (m, mu, nu, c, kappa, a_bar):

    m      nearest integer to the solution of phi'(m) = a/r,
    mu     (1/2)(T/M^3) F''(m/M),
    nu     (phi'(m) - a/r) / (2 mu),          |nu| <= 1 (else boundary),
    c      floor(r (T/M) F(m/M) - mu nu^2),
    kappa  the fractional part of the same quantity,
    a_bar  the inverse of a mod r, in [0, r),

and the 4-vector (a_bar/r, a_bar c/r, 1/sqrt(mu r^3), kappa/sqrt(mu r^3)).
Two arcs are "close" when the four window conditions hold; every close
pair is certified by a determinant-one integer matrix whose lower-left
entry gamma is pinned into (-r r1/2, r r1/2] and obeys |gamma| <= D1 r r1.

Sign conventions: the five phase families have F' < 0 on [1, 2], so a is
negative there; mu keeps its sign (positive for all five families, whose
F'' > 0), and arcs with mu < 0 from custom phases are flagged rather than
silently dropped — the vector entries then use |mu r^3| on request.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from latticelab.phases import PhaseFamily

__all__ = [
    "MinorArcData",
    "PairWindow",
    "UnimodMatrix",
    "PairCountReport",
    "OutOfArcError",
    "NonInvertibleError",
    "OrientationError",
    "mod_inverse",
    "nearest_int_distance",
    "arc_data",
    "enumerate_arcs",
    "arc_vector",
    "pair_matrix",
    "pair_matrix_bruteforce",
    "window_preset",
    "count_close_pairs",
]


class OutOfArcError(ValueError):
    """a/r falls outside the range of the phase derivative on [M, 2M]."""


class NonInvertibleError(ValueError):
    """gcd(a, r) != 1: no inverse modulo r."""


class OrientationError(ValueError):
    """mu r^3 <= 0: the vector normalization loses its meaning."""


def mod_inverse(a: int, r: int) -> int:
    """The inverse of a modulo r, in [0, r).  Requires gcd(a, r) = 1."""
    if r < 1:
        raise ValueError("modulus must be >= 1")
    if math.gcd(a, r) != 1:
        raise NonInvertibleError(f"gcd({a}, {r}) != 1")
    return pow(a, -1, r)


def nearest_int_distance(x: float) -> float:
    """||x||: distance to the nearest integer, via min(frac, 1 - frac)."""
    frac = x - math.floor(x)
    if frac >= 1.0:
        frac -= 1.0
    return min(frac, 1.0 - frac)


@dataclass(frozen=True)
class MinorArcData:
    a: int
    r: int
    m: int
    mu: float
    nu: float
    c: int
    kappa: float
    a_bar: int
    boundary: bool  # |nu| exceeded 1 after rounding m to an integer
    negative_curvature: bool  # mu < 0 (impossible for the five families)


@dataclass(frozen=True)
class PairWindow:
    """Window widths (D1, D2, D3, D4) with D1 < 1/2, all positive."""

    d1: float
    d2: float
    d3: float
    d4: float

    def __post_init__(self):
        for name in ("d1", "d2", "d3", "d4"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.d1 >= 0.5:
            raise ValueError("d1 must be < 1/2")


@dataclass(frozen=True)
class UnimodMatrix:
    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        if self.alpha * self.delta - self.beta * self.gamma != 1:
            raise ValueError("determinant must be 1")

    def apply(self, a: int, r: int) -> tuple[int, int]:
        return (self.alpha * a + self.beta * r, self.gamma * a + self.delta * r)


def _phase_slope(family: PhaseFamily, m_scale: float, t: float, m: float) -> float:
    return (t / m_scale**2) * family.d1(m / m_scale)


def arc_data(
    a: int, r: int, family: PhaseFamily, m_scale: float, t: float
) -> MinorArcData:
    """Construct the data tuple of the arc labelled by the reduced a/r.

    The root of phi'(m) = a/r is located by bisection on [M, 2M] (phi' is
    strictly monotone for the closed-form phases, whose F'' has one sign)
    to 1e-9 relative, then rounded half-to-even.  |nu| > 1 after rounding
    marks a boundary arc: reported via the flag, never dropped silently.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if math.gcd(a, r) != 1:
        raise NonInvertibleError(f"a/r = {a}/{r} is not reduced")
    target = a / r
    lo, hi = float(m_scale), 2.0 * float(m_scale)
    f_lo = _phase_slope(family, m_scale, t, lo) - target
    f_hi = _phase_slope(family, m_scale, t, hi) - target
    if f_lo == 0.0:
        root = lo
    elif f_hi == 0.0:
        root = hi
    elif f_lo * f_hi > 0.0:
        raise OutOfArcError(f"a/r = {a}/{r} outside the phase-slope range")
    else:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            f_mid = _phase_slope(family, m_scale, t, mid) - target
            if f_mid == 0.0:
                lo = hi = mid
                break
            if f_lo * f_mid < 0.0:
                hi, f_hi = mid, f_mid
            else:
                lo, f_lo = mid, f_mid
            if hi - lo <= 1e-9 * m_scale:
                break
        root = 0.5 * (lo + hi)
    m = int(round(root))  # banker's rounding, ties to even
    mu = 0.5 * (t / m_scale**3) * family.d2(m / m_scale)
    if mu == 0.0:
        raise OrientationError("vanishing curvature: nu is undefined")
    nu = (_phase_slope(family, m_scale, t, m) - target) / (2.0 * mu)
    y = r * (t / m_scale) * family.value(m / m_scale) - mu * nu * nu
    c = math.floor(y)
    kappa = y - c
    if kappa >= 1.0:  # float fold at the ceiling
        c += 1
        kappa = 0.0
    return MinorArcData(
        a=a,
        r=r,
        m=m,
        mu=mu,
        nu=nu,
        c=c,
        kappa=kappa,
        a_bar=mod_inverse(a, r),
        boundary=abs(nu) > 1.0,
        negative_curvature=mu < 0.0,
    )


def enumerate_arcs(
    family: PhaseFamily, m_scale: float, t: float, r_max: int
) -> list[MinorArcData]:
    """All arcs with denominator r <= r_max whose a/r lies in range."""
    lo = _phase_slope(family, m_scale, t, float(m_scale))
    hi = _phase_slope(family, m_scale, t, 2.0 * float(m_scale))
    lo, hi = min(lo, hi), max(lo, hi)
    arcs = []
    for r in range(1, r_max + 1):
        a_lo = math.ceil(lo * r)
        a_hi = math.floor(hi * r)
        for a in range(a_lo, a_hi + 1):
            if a == 0 or math.gcd(a, r) != 1:
                continue
            arcs.append(arc_data(a, r, family, m_scale, t))
    return arcs


def arc_vector(
    d: MinorArcData, reduce_mod_1: bool = False, allow_negative_curvature: bool = False
) -> np.ndarray:
    """(a_bar/r, a_bar c/r, 1/sqrt(mu r^3), kappa/sqrt(mu r^3)).

    With reduce_mod_1 the first two entries are folded into [0, 1).  For
    mu < 0, |mu r^3| is used under allow_negative_curvature; otherwise an
    OrientationError is raised.
    """
    w = d.mu * d.r**3
    if w <= 0.0:
        if not (allow_negative_curvature and w < 0.0):
            raise OrientationError(f"mu r^3 = {w} <= 0")
        w = -w
    inv_root = 1.0 / math.sqrt(w)
    first = d.a_bar / d.r
    second = d.a_bar * d.c / d.r
    if reduce_mod_1:
        first %= 1.0
        second %= 1.0
    return np.array([first, second, inv_root, d.kappa * inv_root])


def pair_matrix(a: int, r: int, a1: int, r1: int) -> UnimodMatrix:
    """The unique determinant-one integer matrix sending (a, r) to (a1, r1)
    with its lower-left entry gamma normalized to (-r r1/2, r r1/2].

    Built from the extended-Euclid factorizations U (a, r)^T = (1, 0)^T and
    U1 (a1, r1)^T = (1, 0)^T: the solutions are U1^-1 [[1, b], [0, 1]] U
    with b an integer, and gamma moves by r r1 per unit of b.
    """
    if math.gcd(a, r) != 1 or math.gcd(a1, r1) != 1:
        raise ValueError("both fractions must be reduced")
    if r < 1 or r1 < 1:
        raise ValueError("denominators must be >= 1")
    g, u, v = _extended_gcd(a, r)
    g1, u1, v1 = _extended_gcd(a1, r1)
    assert g == 1 and g1 == 1
    # U = [[u, v], [-r, a]], U1^-1 = [[a1, -v1], [r1, u1]]
    gamma0 = r1 * u - u1 * r
    modulus = r * r1
    # shift gamma into (-modulus/2, modulus/2]
    b, gamma = divmod(gamma0, modulus)
    if 2 * gamma > modulus:
        gamma -= modulus
        b += 1
    alpha = a1 * u - (a1 * b - v1) * r
    beta = a1 * v + (a1 * b - v1) * a
    delta = r1 * v + (r1 * b + u1) * a
    mat = UnimodMatrix(alpha=alpha, beta=beta, gamma=gamma, delta=delta)
    if mat.apply(a, r) != (a1, r1):
        raise AssertionError("construction failed to reproduce the target pair")
    return mat


def _extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def pair_matrix_bruteforce(a: int, r: int, a1: int, r1: int) -> UnimodMatrix:
    """Exhaustive search over the gamma window; oracle for small r r1."""
    if math.gcd(a, r) != 1 or math.gcd(a1, r1) != 1:
        raise ValueError("both fractions must be reduced")
    modulus = r * r1
    hits = []
    for gamma in range(-(modulus // 2) + (0 if modulus % 2 else 1), modulus // 2 + 1):
        num_delta = r1 - gamma * a
        if num_delta % r:
            continue
        delta = num_delta // r
        # alpha delta - beta gamma = 1 and alpha a + beta r = a1:
        # the 2x2 system has determinant delta r + gamma a = r1
        num_alpha = r + gamma * a1
        num_beta = delta * a1 - a
        if num_alpha % r1 or num_beta % r1:
            continue
        hits.append(
            UnimodMatrix(
                alpha=num_alpha // r1,
                beta=num_beta // r1,
                gamma=gamma,
                delta=delta,
            )
        )
    if len(hits) != 1:
        raise AssertionError(f"expected exactly one matrix, found {len(hits)}")
    return hits[0]


def window_preset(k_scale: int, l_scale: int) -> PairWindow:
    """The window set tied to a spacing block (K, L):

    D1 = 1/(K L), D2 = 1/L, D3 = 1/(L sqrt(K)), D4 = sqrt(K)/L.

    D3 and D4 translate the unsimplified third and fourth closeness
    conditions (stated for the vector entries) directly into widths for
    the ratio and kappa-difference forms.
    """
    if k_scale * l_scale <= 2:
        raise ValueError("preset needs K L > 2 so that D1 < 1/2")
    return PairWindow(
        d1=1.0 / (k_scale * l_scale),
        d2=1.0 / l_scale,
        d3=1.0 / (l_scale * math.sqrt(k_scale)),
        d4=math.sqrt(k_scale) / l_scale,
    )


@dataclass(frozen=True)
class PairCountReport:
    count: int
    n_arcs: int
    window: PairWindow
    gamma_violations: tuple[tuple[int, int, int, int], ...]
    matrix_histogram: tuple[tuple[tuple[int, int, int, int], int], ...]

    @property
    def violation_free(self) -> bool:
        return not self.gamma_violations


def count_close_pairs(
    arcs: Sequence[MinorArcData],
    window: PairWindow,
    kappa_mod_1: bool = False,
) -> PairCountReport:
    """Count ordered pairs of arcs satisfying the four window conditions:

        || a_bar/r - a_bar1/r1 ||           <= D1,
        || a_bar c/r - a_bar1 c1/r1 ||      <= D2,
        | mu1 r1^3 / (mu r^3) - 1 |         <= D3,
        | kappa - kappa1 |                  <= D4,

    over the full Cartesian square (coincident pairs included; they pass
    trivially).  kappa_mod_1 switches the fourth condition to the circle
    distance || kappa - kappa1 ||.

    For every counted pair the certificate |gamma| <= D1 r r1 is checked
    on its pair matrix; violations are collected (expected none), and a
    histogram of the occurring matrices is reported.
    """
    n = len(arcs)
    u = np.array([d.a_bar / d.r for d in arcs])
    v = np.array([d.a_bar * d.c / d.r for d in arcs])
    w = np.array([d.mu * d.r**3 for d in arcs])
    kap = np.array([d.kappa for d in arcs])
    if np.any(w <= 0.0):
        raise OrientationError("close-pair counting requires mu r^3 > 0")

    def circ(x):
        frac = x - np.floor(x)
        return np.minimum(frac, 1.0 - frac)

    count = 0
    passing: list[tuple[int, int]] = []
    for i in range(n):
        du = circ(u - u[i])
        dv = circ(v - v[i])
        dw = np.abs(w / w[i] - 1.0)
        dk = np.abs(kap - kap[i])
        if kappa_mod_1:
            dk = circ(kap - kap[i])
        hit = (du <= window.d1) & (dv <= window.d2) & (dw <= window.d3) & (dk <= window.d4)
        count += int(np.count_nonzero(hit))
        passing.extend((i, int(j)) for j in np.flatnonzero(hit))

    violations = []
    hist: Counter = Counter()
    for i, j in passing:
        di, dj = arcs[i], arcs[j]
        mat = pair_matrix(di.a, di.r, dj.a, dj.r)
        key = (mat.alpha, mat.beta, mat.gamma, mat.delta)
        hist[key] += 1
        if abs(mat.gamma) > window.d1 * di.r * dj.r:
            violations.append(key)
    return PairCountReport(
        count=count,
        n_arcs=n,
        window=window,
        gamma_violations=tuple(violations),
        matrix_histogram=tuple(sorted(hist.items())),
    )
