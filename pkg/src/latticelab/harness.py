"""Experiment configuration, sweeps, and the one-shot verification suite.

The suite is a registry of named checks, one per acceptance criterion,
each returning a CheckResult with a pass flag and a human-readable
detail string.  run_suite executes the checks selected by the subcommand
and assembles a RunReport whose exit status is 0 iff every assertion
passed.  Sweeps produce the plot-ready tables described per module; all
randomness flows through one seeded generator recorded in the output.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from latticelab import error_terms as et
from latticelab import exp_sums as es
from latticelab import exponents as ex
from latticelab import first_spacing as fs
from latticelab import second_spacing as ss
from latticelab.persist import LatticeCountCache
from latticelab.phases import standard_family

__all__ = [
    "ExperimentConfig",
    "CheckResult",
    "RunReport",
    "UsageError",
    "SUBCOMMANDS",
    "CRITERIA",
    "run_suite",
    "run_check",
    "sweep_error_terms",
    "sweep_expsum",
    "sweep_spacing1",
    "sweep_spacing2",
    "sweep_exponents",
    "verify_case_reduction",
    "COUNT_SWEEP",
    "GQ_SWEEP",
]


class UsageError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: str = "verify-all"
    x_max: int = 10**6
    grid: int = 10_001
    tol: float = 1e-10
    margin: float = 1.0
    eps: float = 0.05
    seed: int = 20240801
    out: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"subcommand: unknown value {self.subcommand!r}")
        if self.x_max < 1:
            raise UsageError("x_max: must be >= 1 (empty sweep range)")
        if self.grid < 2:
            raise UsageError("grid: needs at least two points")
        if self.tol <= 0:
            raise UsageError("tol: must be positive")
        if self.margin <= 0:
            raise UsageError("margin: must be positive")
        if self.eps < 0:
            raise UsageError("eps: must be >= 0")
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"format: must be csv or json, got {self.fmt!r}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


@dataclass(frozen=True)
class RunReport:
    checks: tuple[CheckResult, ...]
    wall_clock: float
    config: ExperimentConfig

    @property
    def exit_status(self) -> int:
        return 0 if all(c.passed for c in self.checks) else 1

    def summary_lines(self) -> list[str]:
        lines = [
            f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail} "
            f"[{c.elapsed:.3f}s]"
            for c in self.checks
        ]
        n_fail = sum(not c.passed for c in self.checks)
        lines.append(
            f"{len(self.checks) - n_fail}/{len(self.checks)} checks passed "
            f"in {self.wall_clock:.2f}s"
        )
        return lines


# ---------------------------------------------------------------------------
# shared fixtures
# ---------------------------------------------------------------------------


def log_spaced_sample(x_max: int, per_decade: int = 10) -> list[int]:
    n = max(2, int(per_decade * math.log10(max(10, x_max))) + 1)
    vals = sorted({int(round(10 ** e)) for e in np.linspace(0.0, math.log10(x_max), n)})
    return [v for v in vals if v >= 1]


# documented sweep for the Diophantine counters: per K the L values, with
# eta in {1/K, 2/K} and beta in {0, 1/2, 1}^2, window scale 1
COUNT_SWEEP: dict[int, tuple[int, ...]] = {
    4: (2, 3),
    8: (2, 7),
    16: (2, 15),
    32: (3, 8),
    64: (3, 16),
}

# documented sweep for the quadrature norm (config-valid blocks, q = 4)
GQ_SWEEP: tuple[tuple[int, int], ...] = ((4, 2), (4, 3), (8, 2), (8, 3), (16, 2), (16, 3))


# ---------------------------------------------------------------------------
# acceptance criteria
# ---------------------------------------------------------------------------


def _crit_theta_star(cfg: ExperimentConfig) -> tuple[bool, str]:
    res = ex.theta_star()
    ok_value = abs(res.theta_star - 0.3144831759741) < 1e-10
    # time the uncached computation
    raw = ex.theta_star.__wrapped__
    timings = []
    for _ in range(5):
        t0 = time.perf_counter()
        raw(1e-12)
        timings.append(time.perf_counter() - t0)
    fastest = min(timings)
    ok_time = fastest < 1e-3
    return (
        ok_value and ok_time,
        f"theta*={res.theta_star:.13f} (residual {res.residual:.2e}), "
        f"solve time {fastest * 1e6:.0f}us",
    )


def _crit_q_of_x(cfg: ExperimentConfig) -> tuple[bool, str]:
    t = ex.theta_star().theta_star
    q_lo = ex.q_of_x(-3.0 / 8.0)
    q_hi = ex.q_of_x(-t)
    xs = ex.ExponentGrid.default(10_001).points()
    qs = np.array([ex.q_of_x(float(x)) for x in xs])
    increasing = bool(np.all(np.diff(qs) > 0))
    ok = abs(q_lo - 4.0) < 1e-12 and 4.29 <= q_hi <= 4.30 and increasing
    return ok, f"q(-3/8)={q_lo:.14f}, q(-theta*)={q_hi:.6f}, increasing={increasing}"


def _crit_exponent_final(cfg: ExperimentConfig) -> tuple[bool, str]:
    t = ex.theta_star().theta_star
    lo = ex.exponent_final(-3.0 / 8.0)
    exact = ex.exponent_final_exact(Fraction(-3, 8)) == Fraction(5, 16)
    hi = ex.exponent_final(-t)
    xs = ex.ExponentGrid.default(10_001).points()
    es_vals = np.array([ex.exponent_final(float(x)) for x in xs])
    increasing = bool(np.all(np.diff(es_vals) > 0))
    ok = (
        abs(lo - 0.3125) < 1e-12
        and exact
        and abs(hi - t) < 1e-9
        and increasing
    )
    return ok, (
        f"E(-3/8)={lo!r} (exact 5/16: {exact}), |E(-theta*)-theta*|="
        f"{abs(hi - t):.2e}, increasing={increasing}"
    )


def _crit_inequalities(cfg: ExperimentConfig) -> tuple[bool, str]:
    xs = ex.ExponentGrid.default(10_001).points()
    ok1 = all(ex.check_ineq_1(float(x)) for x in xs)
    ok2 = all(ex.check_ineq_2(float(x)) for x in xs)  # raises on form clash
    exact = all(ex.ineq_2_polynomial_exact(Fraction(float(x))) for x in xs)
    ok = ok1 and ok2 and exact
    return ok, f"ineq1 all true: {ok1}, ineq2 all true: {ok2}, exact rational: {exact}"


def _crit_algebra_identity(cfg: ExperimentConfig) -> tuple[bool, str]:
    xs = ex.ExponentGrid.default(10_001).points()
    worst_resid = 0.0
    for x in xs:
        x = float(x)
        if ex.q_of_x(x) > 4.0 + 1e-6:
            worst_resid = max(worst_resid, ex.algebra_identity(x))
    worst_gap = max(
        abs(ex.corollary_exponent(float(x)) - ex.exponent_final(float(x))) for x in xs
    )
    ok = worst_resid < 1e-9 and worst_gap < 1e-9
    return ok, f"identity residual <= {worst_resid:.2e}, q-form gap <= {worst_gap:.2e}"


def _crit_exact_counting(cfg: ExperimentConfig) -> tuple[bool, str]:
    t0 = time.perf_counter()
    x_cap = 10**4
    # divisor sums for every X <= 10^4 against a full divisor sieve
    d = np.zeros(x_cap + 1, dtype=np.int64)
    for i in range(1, x_cap + 1):
        d[i::i] += 1
    direct = np.cumsum(d)
    ok_div_small = all(et.divisor_sum(x) == int(direct[x]) for x in range(1, x_cap + 1))
    # 100 seeded random X <= 10^7 against the O(X) enumeration
    rng = cfg.rng()
    xs = rng.integers(1, 10**7 + 1, size=100)
    ok_div_rand = all(et.divisor_sum(int(x)) == et.divisor_sum_direct(int(x)) for x in xs)
    # lattice counts for every X <= 10^4 against quadrant enumeration
    counts = et.lattice_counts_upto(x_cap)
    ok_lat = all(et.lattice_count(x) == int(counts[x]) for x in range(0, x_cap + 1))
    elapsed = time.perf_counter() - t0
    ok = ok_div_small and ok_div_rand and ok_lat and elapsed < 60.0
    return ok, (
        f"divisor<=1e4: {ok_div_small}, divisor random 1e7: {ok_div_rand}, "
        f"lattice<=1e4: {ok_lat}, runtime {elapsed:.1f}s < 60s"
    )


def _crit_sawtooth_recomposition(cfg: ExperimentConfig) -> tuple[bool, str]:
    xs = log_spaced_sample(10**6)
    worst_div = max(
        abs(et.divisor_error(x) - et.error_via_sawtooth("divisor", x)) for x in xs
    )
    worst_circ = max(
        abs(et.circle_error(x) - et.error_via_sawtooth("circle", x)) for x in xs
    )
    ok = worst_div <= 3.0 and worst_circ <= 8.0
    return ok, f"divisor gap <= {worst_div:.3f} (cap 3), circle gap <= {worst_circ:.3f} (cap 8)"


def _crit_crude_bounds_hardy(cfg: ExperimentConfig) -> tuple[bool, str]:
    xs = log_spaced_sample(10**6)
    ok_delta = all(abs(et.divisor_error(x)) <= math.sqrt(x) + 3.0 for x in xs)
    ok_r = all(abs(et.circle_error(x)) <= 8.0 * math.sqrt(x) + 8.0 for x in xs)
    ratio = et.hardy_ratio_max(10**6)
    ok = ok_delta and ok_r and ratio >= 0.1
    return ok, (
        f"|delta|<=sqrt(X)+3: {ok_delta}, |R|<=8sqrt(X)+8: {ok_r}, "
        f"hardy ratio {ratio:.4f} >= 0.1"
    )


def _count_sweep_points() -> Iterator[tuple[int, int, float, float, float]]:
    for k, l_vals in COUNT_SWEEP.items():
        for l in l_vals:
            for eta in (1.0 / k, 2.0 / k):
                for b1 in (0.0, 0.5, 1.0):
                    for b2 in (0.0, 0.5, 1.0):
                        yield k, l, eta, b1, b2


def _crit_count_bounds(cfg: ExperimentConfig) -> tuple[bool, str]:
    t0 = time.perf_counter()
    checked = 0
    failures = []
    for k, l, eta, b1, b2 in _count_sweep_points():
        cnt = fs.count_localized(k, l, eta, b1, b2)
        three_term = (
            eta ** (2 * (b1 + b2)) * k * k * l
            + eta ** (2 * b1) * k * k
            + eta ** (2 * b2) * l * l
        )
        cap = 100.0 * k**1.05 * l * three_term
        if cnt > cap:
            failures.append((k, l, eta, b1, b2, "upper", cnt, cap))
        vacuous = (eta**b1 * k >= k - 1) and (eta**b2 * l >= l - 1)
        if vacuous and cnt < k * k * l * l:
            failures.append((k, l, eta, b1, b2, "floor", cnt, k * k * l * l))
        checked += 1
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300.0
    return ok, (
        f"{checked} sweep points, {len(failures)} violations, "
        f"runtime {elapsed:.1f}s < 300s"
        + (f"; first: {failures[0]}" if failures else "")
    )


def _crit_gq_range(cfg: ExperimentConfig) -> tuple[bool, str]:
    failures = []
    worst_doubling = 0.0
    for k, l in GQ_SWEEP:
        config = fs.SpacingConfig(k, l, 1.0 / k, 4.0)
        g1 = fs.gq_norm(config, resolution=1)
        g2 = fs.gq_norm(config, resolution=2)
        drift = abs(g2 - g1) / g1
        worst_doubling = max(worst_doubling, drift)
        lo = 0.1 * math.sqrt(k * l)
        hi = 10.0 * k**0.55 * l**0.5
        if not (lo <= g1 <= hi):
            failures.append((k, l, "range", g1, lo, hi))
        if drift >= 0.01:
            failures.append((k, l, "doubling", drift))
    ok = not failures
    return ok, (
        f"{len(GQ_SWEEP)} blocks in range, doubling drift <= "
        f"{worst_doubling:.2e} (< 1%)" + (f"; first: {failures[0]}" if failures else "")
    )


def _crit_pair_matrix(cfg: ExperimentConfig) -> tuple[bool, str]:
    mismatches = 0
    checked = 0
    for r in range(1, 21):
        for a in range(1, r + 1):
            if math.gcd(a, r) != 1:
                continue
            for r1 in range(1, 21):
                for a1 in range(1, r1 + 1):
                    if math.gcd(a1, r1) != 1:
                        continue
                    fast = ss.pair_matrix(a, r, a1, r1)
                    slow = ss.pair_matrix_bruteforce(a, r, a1, r1)
                    checked += 1
                    if fast != slow:
                        mismatches += 1
                        continue
                    if fast.apply(a, r) != (a1, r1):
                        mismatches += 1
                    if not (-r * r1 / 2 < fast.gamma <= r * r1 / 2):
                        mismatches += 1
    # gamma certificate on an enumerated arc set
    arcs = [
        d
        for d in ss.enumerate_arcs(standard_family(), 32.0, 1.0e5, 16)
        if 8 <= d.r <= 16
    ]
    report = ss.count_close_pairs(arcs[:700], ss.PairWindow(0.02, 0.1, 0.05, 0.2))
    ok = mismatches == 0 and report.violation_free and report.count > 0
    return ok, (
        f"{checked} matrix pairs vs exhaustive search, {mismatches} mismatches; "
        f"gamma certificate: {report.count} close pairs, "
        f"{len(report.gamma_violations)} violations"
    )


def _recompute_arc_vector(d: ss.MinorArcData, m_scale: float, t: float) -> np.ndarray:
    """Independent re-evaluation of the vector entries from the raw
    definitions (separate inverse path, no reuse of arc internals)."""
    fam = standard_family()
    g, u, _ = ss._extended_gcd(d.a, d.r)
    assert g == 1
    a_bar = u % d.r
    mu = 0.5 * (t / m_scale**3) * (2.0 / (d.m / m_scale) ** 3)
    slope = (t / m_scale**2) * (-1.0 / (d.m / m_scale) ** 2)
    nu = (slope - d.a / d.r) / (2.0 * mu)
    y = d.r * (t / m_scale) * fam.value(d.m / m_scale) - mu * nu * nu
    c = math.floor(y)
    kappa = y - c
    root = math.sqrt(mu * d.r**3)
    return np.array([a_bar / d.r, a_bar * c / d.r, 1.0 / root, kappa / root])


def _crit_arc_enumeration(cfg: ExperimentConfig) -> tuple[bool, str]:
    m_scale, t = 32.0, 1.0e5
    arcs = ss.enumerate_arcs(standard_family(), m_scale, t, 40)
    n_boundary = sum(d.boundary for d in arcs)
    ok_nu = all(abs(d.nu) <= 1.0 for d in arcs if not d.boundary)
    ok_kappa = all(0.0 <= d.kappa < 1.0 for d in arcs)
    worst_rel = 0.0
    for d in arcs[:: max(1, len(arcs) // 2000)]:
        vec = ss.arc_vector(d)
        ref = _recompute_arc_vector(d, m_scale, t)
        denom = np.maximum(np.abs(ref), 1e-300)  # kappa = 0 gives a 0/0 pair
        worst_rel = max(worst_rel, float(np.max(np.abs(vec - ref) / denom)))
    ok = ok_nu and ok_kappa and worst_rel < 1e-12
    return ok, (
        f"{len(arcs)} arcs ({n_boundary} boundary), |nu|<=1: {ok_nu}, "
        f"kappa in [0,1): {ok_kappa}, vector recompute rel err "
        f"{worst_rel:.2e} < 1e-12"
    )


def _crit_middle_form_monotone(cfg: ExperimentConfig) -> tuple[bool, str]:
    h, m, t = 50.0, 3.0e5, 1.0e12
    ns = np.geomspace(2.0, 1.0e6, 400)
    ok = True
    for q in (4.0, 4.125, 4.25, 4.375, 4.5):
        vals = np.array([es.bound_middle_form(h, m, t, q, float(n)) for n in ns])
        if not np.all(np.diff(vals) < 0):
            ok = False
    return ok, f"strictly decreasing in N on [2, 1e6] for all five q values: {ok}"


def verify_case_reduction(
    t: float = 1.0e12, n_points: int = 1000, seed: int = 20240801
) -> tuple[int, int]:
    """Numeric verification of the case-II reduction at finite T.

    Samples (x, M-exponent) with M = T^mexp, H = M T^x subject to the
    final-argument restrictions (M <= sqrt(T), H between its two lower
    bounds and M T^-theta*), keeping points where the first-case
    condition H >= M^-9 T^4 (log T)^(171/140) fails.  For each such point
    both second-case conditions (C5 = 3, B0 = 1) and the two-sided
    reduction window M^(-27/23) T^(53/92) < H < M^-9 T^4 (log T)^(171/140)
    must hold.  Returns (violations, points checked).
    """
    theta = ex.theta_star().theta_star
    rng = np.random.default_rng(seed)
    log_t = math.log(t)
    lam_guard = log_t ** es.GUARD_LOG_EXP
    checked = 0
    violations = 0
    x_lo = 2.0 * theta - 1.0
    h_floor_exp = (7.0 * theta - 2.0) / 2.0
    attempts = 0
    while checked < n_points and attempts < 200 * n_points:
        attempts += 1
        x = float(rng.uniform(x_lo, -theta))
        mexp = float(rng.uniform(0.0, 0.5))
        m = t**mexp
        h = m * t**x
        if h < 1.0 or h < t**h_floor_exp or h > m * t**-theta:
            continue
        if h >= m**-9.0 * t**4.0 * lam_guard:
            continue  # case I holds; not the regime under test
        checked += 1
        ok_b1 = m <= 3.0 * math.sqrt(t)
        ok_b2 = h <= min(m ** (35.0 / 69.0) * t ** (-2.0 / 23.0), m**1.5 * t**-0.5)
        ok_red = m ** (-27.0 / 23.0) * t ** (53.0 / 92.0) < h < m**-9.0 * t**4.0 * lam_guard
        if not (ok_b1 and ok_b2 and ok_red):
            violations += 1
    if checked < n_points:
        raise RuntimeError("sampler failed to produce enough admissible points")
    return violations, checked


def _crit_case_reduction(cfg: ExperimentConfig) -> tuple[bool, str]:
    violations, checked = verify_case_reduction(seed=cfg.seed)
    ok = violations == 0 and checked == 1000
    return ok, f"{checked} sampled points with case I failing, {violations} violations"


CRITERIA: dict[str, tuple[str, Callable[[ExperimentConfig], tuple[bool, str]]]] = {
    "crit-01-theta-star": ("exponents", _crit_theta_star),
    "crit-02-q-of-x": ("exponents", _crit_q_of_x),
    "crit-03-exponent-final": ("exponents", _crit_exponent_final),
    "crit-04-inequalities": ("exponents", _crit_inequalities),
    "crit-05-algebra-identity": ("exponents", _crit_algebra_identity),
    "crit-06-exact-counting": ("error-terms", _crit_exact_counting),
    "crit-07-sawtooth-recomposition": ("error-terms", _crit_sawtooth_recomposition),
    "crit-08-crude-bounds-hardy": ("error-terms", _crit_crude_bounds_hardy),
    "crit-09-count-bounds": ("spacing1", _crit_count_bounds),
    "crit-10-gq-range": ("spacing1", _crit_gq_range),
    "crit-11-pair-matrix": ("spacing2", _crit_pair_matrix),
    "crit-12-arc-enumeration": ("spacing2", _crit_arc_enumeration),
    "crit-13-middle-form-monotone": ("expsum", _crit_middle_form_monotone),
    "crit-14-case-reduction": ("expsum", _crit_case_reduction),
}

SUBCOMMANDS = ("error-terms", "expsum", "spacing1", "spacing2", "exponents", "verify-all")


def run_check(name: str, cfg: ExperimentConfig) -> CheckResult:
    _, fn = CRITERIA[name]
    t0 = time.perf_counter()
    try:
        passed, detail = fn(cfg)
    except Exception as exc:  # a crash is a failure with the reason recorded
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(name=name, passed=passed, detail=detail, elapsed=time.perf_counter() - t0)


def run_suite(cfg: ExperimentConfig) -> RunReport:
    t0 = time.perf_counter()
    selected = [
        name
        for name, (group, _) in CRITERIA.items()
        if cfg.subcommand == "verify-all" or group == cfg.subcommand
    ]
    checks = tuple(run_check(name, cfg) for name in selected)
    return RunReport(checks=checks, wall_clock=time.perf_counter() - t0, config=cfg)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

ERROR_TERMS_HEADER = (
    "x",
    "divisor_exact",
    "divisor_error",
    "circle_exact",
    "circle_error",
    "divisor_sawtooth_gap",
    "circle_sawtooth_gap",
    "hardy_pointwise",
)


def sweep_error_terms(cfg: ExperimentConfig, cache: Optional[LatticeCountCache] = None):
    """Rows over a log-spaced X sample up to x_max; lattice counts go
    through the persistent cache when one is supplied."""
    xs = log_spaced_sample(cfg.x_max)
    if not xs:
        raise UsageError("x_max: empty sweep range")
    for x in xs:
        dsum = et.divisor_sum(x)
        lcount = cache.get(x) if cache is not None else et.lattice_count(x)
        derr = float(dsum) - (x * math.log(x) + (2.0 * et.EULER_GAMMA - 1.0) * x)
        cerr = float(lcount) - math.pi * x
        yield (
            x,
            dsum,
            derr,
            lcount,
            cerr,
            abs(derr - et.error_via_sawtooth("divisor", x)),
            abs(cerr - et.error_via_sawtooth("circle", x)),
            abs(cerr) / (x * math.log(x)) ** 0.25 if x > 1 else 0.0,
        )


EXPSUM_HEADER = (
    "h",
    "m",
    "t",
    "q",
    "abs_s",
    "simple_bound",
    "final_bound",
    "case_label",
    "degenerate",
)


def sweep_expsum(cfg: ExperimentConfig):
    """|S| against the bound formulas on a small documented grid."""
    fam = standard_family()
    for t in (1.0e4, 1.0e5, 1.0e6):
        for m in (32.0, 64.0, 128.0):
            if m > math.sqrt(t):
                continue
            for h in (2.0, 4.0, 8.0):
                q = 4.25
                s_val = abs(es.eval_sum(es.SumSpec(h, m, t, fam)))
                bound, _ = es.simple_bound(h, m, t)
                final = es.bound_final_form(h, m, t, q)
                label = "+".join(es.classify_case(h, m, t).labels)
                try:
                    degenerate = es.derive_params(h, m, t, "A").degenerate
                except es.ParameterDomainError:
                    degenerate = True
                yield (h, m, t, q, s_val, bound, final, label, degenerate)


SPACING1_HEADER = (
    "k",
    "l",
    "eta",
    "q",
    "beta1",
    "beta2",
    "count_localized",
    "count_unlocalized",
    "plate_count_bound",
    "gq_norm",
    "gq_upper_bound",
)


def sweep_spacing1(cfg: ExperimentConfig, gq_max_k: int = 16):
    """Counting sweep rows; the quadrature norm is evaluated only for
    config-valid blocks with K <= gq_max_k (cost guard), else NaN."""
    for k, l, eta, b1, b2 in _count_sweep_points():
        cnt_loc = fs.count_localized(k, l, eta, b1, b2)
        cnt_unloc = fs.count_unlocalized(k, l, eta)
        bound = fs.plate_count_bound(k, l, eta, b1, b2, eps=cfg.eps)
        gq = math.nan
        upper = math.nan
        if k <= gq_max_k and l < k and k <= 1.0 / eta <= k * l:
            config = fs.SpacingConfig(k, l, eta, 4.0)
            gq = fs.gq_norm(config)
            upper = fs.gq_upper_bound(k, l, eta, 4.0, eps=cfg.eps)
        yield (k, l, eta, 4.0, b1, b2, cnt_loc, cnt_unloc, bound, gq, upper)


SPACING2_HEADER = ("a", "r", "m", "mu", "nu", "c", "kappa", "a_bar")


def sweep_spacing2(cfg: ExperimentConfig, r_max: int = 40):
    """Arc dump for the standard phase at (M, T) = (32, 1e5)."""
    for d in ss.enumerate_arcs(standard_family(), 32.0, 1.0e5, r_max):
        yield (d.a, d.r, d.m, d.mu, d.nu, d.c, d.kappa, d.a_bar)


def spacing2_pair_report(cfg: ExperimentConfig) -> dict:
    arcs = [
        d
        for d in ss.enumerate_arcs(standard_family(), 32.0, 1.0e5, 16)
        if 8 <= d.r <= 16
    ]
    window = ss.window_preset(16, 4)
    rep = ss.count_close_pairs(arcs, window)
    return {
        "n_arcs": rep.n_arcs,
        "count": rep.count,
        "window": {
            "d1": window.d1,
            "d2": window.d2,
            "d3": window.d3,
            "d4": window.d4,
        },
        "gamma_violations": [list(v) for v in rep.gamma_violations],
        "distinct_matrices": len(rep.matrix_histogram),
    }


CURVE_HEADER = ex.CURVE_COLUMNS


def sweep_exponents(cfg: ExperimentConfig):
    table = ex.export_curve(n=cfg.grid)
    for row in table:
        yield tuple(float(v) for v in row)


def theta_report(cfg: ExperimentConfig) -> dict:
    res = ex.theta_star(tol=max(cfg.tol, 1e-14))
    return {
        "theta_star": res.theta_star,
        "residual": res.residual,
        "bracket": [res.bracket[0], res.bracket[1]],
        "iterations": res.iterations,
    }
