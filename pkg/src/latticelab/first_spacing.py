"""The first spacing problem: mean values of three-frequency sums.

The central quantity is the averaged norm

    G_q = || sum_{k~K} sum_{l~L} a_kl e(l x1 + k l x2 + l sqrt(k) x3) ||
          over the box |x1| <= 1, |x2| <= 1, |x3| <= 1/(eta L sqrt(K)),

with |a_kl| <= 1.  For all-ones coefficients and q = 4 the q-th power of
G_q is equivalent to counting near-solutions of the Diophantine system

    l1 + l2 = l3 + l4,
    k1 l1 + k2 l2 = k3 l3 + k4 l4,
    |l1 sqrt(k1) + l2 sqrt(k2) - l3 sqrt(k3) - l4 sqrt(k4)| <= w eta L sqrt(K),

optionally with the localization cuts diam(k_i) <= eta^beta1 K and
diam(l_i) <= eta^beta2 L coming from a plate decomposition of the grid's
image on the light cone xi1^2 + xi2^2 = xi3^2.  This module provides:
the quadrature norm (with an exact q = 4 counting-identity oracle), the
counters (vectorized plus brute-force oracles), the cone parametrization
and plate partition, and every bound formula of the chain.

Range convention, used everywhere: "k ~ K" means k in [K, 2K), an integer.

The plate-localization role of (beta1, beta2) — beta1 scaling the k-cut,
beta2 the l-cut — is the one the downstream optimization depends on; the
opposite assignment is available via swap_beta_roles on plate_partition.
Epsilon powers (K^eps, eta^-eps) are explicit factors with default 0.05,
never silently dropped; window and margin constants are explicit inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

import numpy as np

__all__ = [
    "SpacingConfig",
    "ConePoint",
    "Plate",
    "DecouplingConstant",
    "ResolutionError",
    "AssumptionError",
    "PlateDomainError",
    "all_ones",
    "nyquist_floor",
    "gq_norm",
    "gq_norm_exact_q4",
    "count_unlocalized",
    "count_localized",
    "count_localized_bruteforce",
    "count_unlocalized_bruteforce",
    "cone_map",
    "cone_residual_exact",
    "cone_grid",
    "plate_partition",
    "decoupling_constant",
    "solve_betas",
    "plate_count_bound",
    "gq_upper_bound",
]


class ResolutionError(ValueError):
    """Quadrature resolution below the Nyquist floor: refused, not guessed."""


class AssumptionError(ValueError):
    """The q > 4 admissibility assumption (L/K)^((q-2)/(q-4)) <= eta failed."""


class PlateDomainError(ValueError):
    """Plate dimensions below one grid step: the partition is refused."""


@dataclass(frozen=True)
class SpacingConfig:
    """Parameters (K, L, eta, q) with 1 <= L < K <= 1/eta <= K L, 4 <= q <= 4.5."""

    k: int
    l: int
    eta: float
    q: float

    def __post_init__(self):
        if not (1 <= self.l < self.k):
            raise ValueError("need 1 <= L < K")
        if not (0.0 < self.eta < 1.0):
            raise ValueError("need 0 < eta < 1")
        if not (self.k <= 1.0 / self.eta <= self.k * self.l):
            raise ValueError("need K <= 1/eta <= K L")
        if not (4.0 <= self.q <= 4.5):
            raise ValueError("need 4 <= q <= 4.5")

    @property
    def x3_halfwidth(self) -> float:
        return 1.0 / (self.eta * self.l * math.sqrt(self.k))


def all_ones(k_scale: int, l_scale: int) -> np.ndarray:
    """Coefficient grid a_kl = 1, indexed [k - K, l - L]."""
    return np.ones((k_scale, l_scale), dtype=np.complex128)


def _validated_coeffs(cfg: SpacingConfig, coeffs: Optional[np.ndarray]) -> np.ndarray:
    if coeffs is None:
        return all_ones(cfg.k, cfg.l)
    arr = np.asarray(coeffs, dtype=np.complex128)
    if arr.shape != (cfg.k, cfg.l):
        raise ValueError(f"coefficient grid must have shape ({cfg.k}, {cfg.l})")
    if np.max(np.abs(arr)) > 1.0 + 1e-12:
        raise ValueError("coefficients must satisfy |a_kl| <= 1")
    return arr


# ---------------------------------------------------------------------------
# quadrature norm
# ---------------------------------------------------------------------------


def nyquist_floor(cfg: SpacingConfig) -> tuple[int, int, int]:
    """Minimum per-axis midpoint counts: spacing <= 1/(8 max frequency).

    Frequencies are bounded by 2L, 4KL and 2L sqrt(2K) on the three axes;
    the axis ranges are 2, 2 and 2/(eta L sqrt(K)).
    """
    n1 = math.ceil(2.0 * 8.0 * 2.0 * cfg.l)
    n2 = math.ceil(2.0 * 8.0 * 4.0 * cfg.k * cfg.l)
    n3 = math.ceil(2.0 * cfg.x3_halfwidth * 8.0 * 2.0 * cfg.l * math.sqrt(2.0 * cfg.k))
    return n1, n2, n3


def gq_norm(
    cfg: SpacingConfig,
    coeffs: Optional[np.ndarray] = None,
    resolution: int = 1,
) -> float:
    """Averaged L^q norm by tensor midpoint quadrature.

    resolution is an integer multiplier on the Nyquist-floor grid; values
    below 1 are refused.  Doubling the resolution changes the result by
    well under 1% at the floor (the x1/x2 axes are alias-free there, so
    the refinement only moves the x3 axis).
    """
    if resolution < 1:
        raise ResolutionError("resolution multiplier below the Nyquist floor")
    a = _validated_coeffs(cfg, coeffs)
    n1, n2, n3 = (n * resolution for n in nyquist_floor(cfg))
    k_n, l_n = cfg.k, cfg.l

    ks = np.arange(k_n, 2 * k_n, dtype=np.float64)
    ls = np.arange(l_n, 2 * l_n, dtype=np.float64)
    freq_l = ls
    freq_kl = (ks[:, None] * ls[None, :]).reshape(-1)
    freq_ls = (np.sqrt(ks)[:, None] * ls[None, :]).reshape(-1)

    x1 = -1.0 + (np.arange(n1) + 0.5) * (2.0 / n1)
    x2 = -1.0 + (np.arange(n2) + 0.5) * (2.0 / n2)
    w3 = cfg.x3_halfwidth
    x3 = -w3 + (np.arange(n3) + 0.5) * (2.0 * w3 / n3)

    two_pi_i = 2.0j * math.pi
    e1 = np.exp(two_pi_i * freq_l[:, None] * x1[None, :])  # (L, n1)
    e2 = np.exp(two_pi_i * freq_kl[:, None] * x2[None, :])  # (K*L, n2)
    e3 = np.exp(two_pi_i * freq_ls[:, None] * x3[None, :])  # (K*L, n3)
    a_flat = a.reshape(-1)

    acc = 0.0
    e1_t = np.ascontiguousarray(e1.T)  # (n1, L)
    for j3 in range(n3):
        c = a_flat * e3[:, j3]
        h_l = (c[:, None] * e2).reshape(k_n, l_n, n2).sum(axis=0)  # (L, n2)
        f = e1_t @ h_l  # (n1, n2)
        acc += float(np.sum(np.abs(f) ** cfg.q))
    return (acc / (n1 * n2 * n3)) ** (1.0 / cfg.q)


def gq_norm_exact_q4(cfg: SpacingConfig, coeffs: Optional[np.ndarray] = None) -> float:
    """Exact averaged L^4 norm via the counting identity.

    Expanding |f|^4 and averaging term by term: the x1 and x2 averages
    kill every tuple that misses the two linear equations (integer
    frequencies over full periods), and the x3 average weighs the
    surviving tuples by sinc of the sqrt-frequency mismatch.  Quadratic
    cost in K^2 L^2; intended as an oracle for small grids.
    """
    a = _validated_coeffs(cfg, coeffs)
    k_n, l_n = cfg.k, cfg.l
    pairs = k_n * l_n * k_n * l_n
    if pairs > 300_000:
        raise ValueError("exact q=4 oracle is for small grids only")
    ks = np.arange(k_n, 2 * k_n, dtype=np.int64)
    ls = np.arange(l_n, 2 * l_n, dtype=np.int64)
    kk = np.repeat(ks, l_n)
    llv = np.tile(ls, k_n)
    amp = a.reshape(-1)
    p1 = k_n * l_n
    i = np.repeat(np.arange(p1), p1)
    j = np.tile(np.arange(p1), p1)
    key = (llv[i] + llv[j]) * (8 * k_n * l_n * 4) + (kk[i] * llv[i] + kk[j] * llv[j])
    s = llv[i] * np.sqrt(kk[i]) + llv[j] * np.sqrt(kk[j])
    amp2 = amp[i] * amp[j]

    order = np.lexsort((s, key))
    key, s, amp2 = key[order], s[order], amp2[order]
    x3w = cfg.x3_halfwidth
    total = 0.0 + 0.0j
    boundaries = np.flatnonzero(np.diff(key)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [len(key)]))
    for lo, hi in zip(starts, ends):
        sv = s[lo:hi]
        av = amp2[lo:hi]
        weights = np.sinc(2.0 * (sv[:, None] - sv[None, :]) * x3w)
        total += av.conj() @ weights @ av
    if abs(total.imag) > 1e-9 * max(1.0, abs(total.real)):
        raise AssertionError("counting identity produced a non-real value")
    return float(total.real) ** 0.25


# ---------------------------------------------------------------------------
# Diophantine counting
# ---------------------------------------------------------------------------


def _sorted_pair_table(k_scale: int, l_scale: int):
    """All ordered (k1,l1,k2,l2), lex-sorted by (l-sum, kl-sum, sqrt-sum)."""
    ks = np.arange(k_scale, 2 * k_scale, dtype=np.int64)
    ls = np.arange(l_scale, 2 * l_scale, dtype=np.int64)
    kk = np.repeat(ks, l_scale)
    ll = np.tile(ls, k_scale)
    p1 = k_scale * l_scale
    i = np.repeat(np.arange(p1), p1)
    j = np.tile(np.arange(p1), p1)
    k1, l1, k2, l2 = kk[i], ll[i], kk[j], ll[j]
    key1 = l1 + l2
    key2 = k1 * l1 + k2 * l2
    s = l1 * np.sqrt(k1.astype(np.float64)) + l2 * np.sqrt(k2.astype(np.float64))
    order = np.lexsort((s, key2, key1))
    return (
        key1[order],
        key2[order],
        s[order],
        np.minimum(k1, k2)[order],
        np.maximum(k1, k2)[order],
        np.minimum(l1, l2)[order],
        np.maximum(l1, l2)[order],
    )


def _window_bounds(key1, key2, s, win):
    """Per-pair half-open candidate ranges [lo, hi) within the same
    (key1, key2) run, restricted to |s_j - s_i| <= win.

    Within each key1 group, key2 runs are separated by a rank offset
    larger than the window, so one monotone searchsorted per group
    suffices; the offset magnitudes keep float64 slack many orders below
    any window used outside the brute-force-verified regime.
    """
    n = len(s)
    lo = np.empty(n, dtype=np.int64)
    hi = np.empty(n, dtype=np.int64)
    group_edges = np.flatnonzero(np.diff(key1)) + 1
    starts = np.concatenate(([0], group_edges))
    ends = np.concatenate((group_edges, [n]))
    for a, b in zip(starts, ends):
        k2s = key2[a:b]
        ss = s[a:b]
        ranks = np.searchsorted(np.unique(k2s), k2s).astype(np.float64)
        span = (ss[-1] - ss[0]) + 2.0 * win + 1.0
        z = ranks * span + (ss - ss[0])
        lo[a:b] = a + np.searchsorted(z, z - win, side="left")
        hi[a:b] = a + np.searchsorted(z, z + win, side="right")
    return lo, hi


def count_unlocalized(
    k_scale: int,
    l_scale: int,
    eta: float,
    window_scale: float = 1.0,
    n: int = 2,
) -> int:
    """Ordered solutions of the three-condition system, no localization.

    Counts tuples (k1..k4, l1..l4) with k_i in [K, 2K), l_i in [L, 2L),
    l1+l2 = l3+l4, k1 l1 + k2 l2 = k3 l3 + k4 l4, and the sqrt-sum within
    window_scale * eta L sqrt(K).  Only the n = 2 (eight-variable) system
    is enumerable at desk scale.
    """
    if n != 2:
        raise ValueError("only n=2 is supported by exhaustive enumeration")
    if k_scale > 64:
        raise ValueError("enumeration is capped at K <= 64")
    win = window_scale * eta * l_scale * math.sqrt(k_scale)
    key1, key2, s, *_ = _sorted_pair_table(k_scale, l_scale)
    lo, hi = _window_bounds(key1, key2, s, win)
    return int((hi - lo).sum())


def count_localized(
    k_scale: int,
    l_scale: int,
    eta: float,
    beta1: float,
    beta2: float,
    window_scale: float = 1.0,
    n: int = 2,
) -> int:
    """Solutions of the system with the localization cuts added:

        diam(k1..k4) <= eta^beta1 K,   diam(l1..l4) <= eta^beta2 L.

    Always <= count_unlocalized; equal when both cuts are vacuous.
    """
    if n != 2:
        raise ValueError("only n=2 is supported by exhaustive enumeration")
    if k_scale > 64:
        raise ValueError("enumeration is capped at K <= 64")
    dk_cap = eta**beta1 * k_scale
    dl_cap = eta**beta2 * l_scale
    if dk_cap >= k_scale - 1 and dl_cap >= l_scale - 1:
        return count_unlocalized(k_scale, l_scale, eta, window_scale, n)
    win = window_scale * eta * l_scale * math.sqrt(k_scale)
    key1, key2, s, kmin, kmax, lmin, lmax = _sorted_pair_table(k_scale, l_scale)
    lo, hi = _window_bounds(key1, key2, s, win)
    counts = hi - lo
    total = 0
    chunk_target = 5_000_000
    pos = 0
    n_pairs = len(s)
    while pos < n_pairs:
        end = pos
        budget = 0
        while end < n_pairs and budget + counts[end] <= chunk_target:
            budget += counts[end]
            end += 1
        if end == pos:
            end = pos + 1
            budget = int(counts[pos])
        c = counts[pos:end]
        if budget > 0:
            ii = np.repeat(np.arange(pos, end), c)
            offsets = np.concatenate(([0], np.cumsum(c)))[:-1]
            jj = (
                np.arange(budget)
                - np.repeat(offsets, c)
                + np.repeat(lo[pos:end], c)
            )
            dk = np.maximum(kmax[ii], kmax[jj]) - np.minimum(kmin[ii], kmin[jj])
            dl = np.maximum(lmax[ii], lmax[jj]) - np.minimum(lmin[ii], lmin[jj])
            total += int(np.count_nonzero((dk <= dk_cap) & (dl <= dl_cap)))
        pos = end
    return total


def count_localized_bruteforce(
    k_scale: int,
    l_scale: int,
    eta: float,
    beta1: float,
    beta2: float,
    window_scale: float = 1.0,
) -> int:
    """Plain-loop oracle over all (k1..k4, l1..l3); small grids only."""
    if k_scale**4 * l_scale**3 > 2_000_000:
        raise ValueError("brute-force oracle is for small grids only")
    win = window_scale * eta * l_scale * math.sqrt(k_scale)
    dk_cap = eta**beta1 * k_scale
    dl_cap = eta**beta2 * l_scale
    k_range = range(k_scale, 2 * k_scale)
    l_range = range(l_scale, 2 * l_scale)
    roots = {k: math.sqrt(k) for k in k_range}
    total = 0
    for k1 in k_range:
        for k2 in k_range:
            for k3 in k_range:
                for k4 in k_range:
                    if max(k1, k2, k3, k4) - min(k1, k2, k3, k4) > dk_cap:
                        continue
                    for l1 in l_range:
                        for l2 in l_range:
                            for l3 in l_range:
                                l4 = l1 + l2 - l3
                                if l4 < l_scale or l4 >= 2 * l_scale:
                                    continue
                                if max(l1, l2, l3, l4) - min(l1, l2, l3, l4) > dl_cap:
                                    continue
                                if k1 * l1 + k2 * l2 != k3 * l3 + k4 * l4:
                                    continue
                                gap = abs(
                                    l1 * roots[k1]
                                    + l2 * roots[k2]
                                    - l3 * roots[k3]
                                    - l4 * roots[k4]
                                )
                                if gap <= win:
                                    total += 1
    return total


def count_unlocalized_bruteforce(
    k_scale: int, l_scale: int, eta: float, window_scale: float = 1.0
) -> int:
    """Brute-force oracle without localization (vacuous diameter caps)."""
    return count_localized_bruteforce(k_scale, l_scale, eta, 0.0, 0.0, window_scale)


# ---------------------------------------------------------------------------
# cone geometry and plates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConePoint:
    """Image of a grid point (k, l) on the truncated light cone."""

    xi1: float
    xi2: float
    xi3: float
    k: int
    l: int


def cone_map(k: int, l: int, k_scale: int, l_scale: int) -> ConePoint:
    """(k, l) -> (s sqrt(t), s(t-1)/2, s(t+1)/2) with s = l/L, t = k/K.

    The image satisfies xi3^2 - xi2^2 = xi1^2 exactly ((t+1)^2 - (t-1)^2
    = 4t), and the map is invertible: l = L (xi3 - xi2),
    k = K (xi3 + xi2)/(xi3 - xi2).
    """
    if not (k_scale <= k < 2 * k_scale and l_scale <= l < 2 * l_scale):
        raise ValueError("grid point outside [K, 2K) x [L, 2L)")
    s = l / l_scale
    t = k / k_scale
    return ConePoint(
        xi1=s * math.sqrt(t),
        xi2=s * (t - 1.0) / 2.0,
        xi3=s * (t + 1.0) / 2.0,
        k=k,
        l=l,
    )


def cone_residual_exact(k: int, l: int, k_scale: int, l_scale: int) -> Fraction:
    """xi3^2 - xi2^2 - xi1^2 in exact rational arithmetic (xi1^2 = s^2 t)."""
    s = Fraction(l, l_scale)
    t = Fraction(k, k_scale)
    return (s * (t + 1) / 2) ** 2 - (s * (t - 1) / 2) ** 2 - s * s * t


def cone_grid(k_scale: int, l_scale: int) -> list[ConePoint]:
    return [
        cone_map(k, l, k_scale, l_scale)
        for k in range(k_scale, 2 * k_scale)
        for l in range(l_scale, 2 * l_scale)
    ]


@dataclass(frozen=True)
class Plate:
    """A rectangular block of grid points from the cone decomposition."""

    index: tuple[int, int]
    beta1: float
    beta2: float
    members: tuple[tuple[int, int], ...]
    k_range: tuple[int, int]
    l_range: tuple[int, int]


def plate_partition(
    points: Iterable[ConePoint],
    eta: float,
    beta1: float,
    beta2: float,
    swap_beta_roles: bool = False,
) -> list[Plate]:
    """Partition grid points into plates of k-extent ~ eta^beta1 K and
    l-extent ~ eta^beta2 L (exact disjoint blocks; every point lands in
    exactly one plate).

    Requires eta^beta1 K >= 1 and eta^beta2 L >= 1 — below one grid step
    the partition is refused.  swap_beta_roles exchanges which exponent
    scales which axis (the other printed convention).
    """
    pts = list(points)
    if not pts:
        return []
    k_scale = min(p.k for p in pts)
    l_scale = min(p.l for p in pts)
    b_k, b_l = (beta2, beta1) if swap_beta_roles else (beta1, beta2)
    wk = eta**b_k * k_scale
    wl = eta**b_l * l_scale
    if wk < 1.0:
        raise PlateDomainError(f"eta^beta K = {wk} < 1: plate below one k-step")
    if wl < 1.0:
        raise PlateDomainError(f"eta^beta L = {wl} < 1: plate below one l-step")
    wk_i, wl_i = int(wk), int(wl)
    buckets: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for p in pts:
        idx = ((p.k - k_scale) // wk_i, (p.l - l_scale) // wl_i)
        buckets.setdefault(idx, []).append((p.k, p.l))
    plates = []
    for idx in sorted(buckets):
        members = tuple(sorted(buckets[idx]))
        ks = [m[0] for m in members]
        ls = [m[1] for m in members]
        plates.append(
            Plate(
                index=idx,
                beta1=beta1,
                beta2=beta2,
                members=members,
                k_range=(min(ks), max(ks)),
                l_range=(min(ls), max(ls)),
            )
        )
    return plates


# ---------------------------------------------------------------------------
# decoupling constant and the bound pipeline
# ---------------------------------------------------------------------------


class DecouplingConstant(NamedTuple):
    full: float
    simplified: float
    terms: tuple[float, float, float]


def decoupling_constant(
    beta1: float, beta2: float, q: float, eta: float
) -> DecouplingConstant:
    """The three-term plate-decoupling constant and its q >= 4 reduction.

    terms = (eta^(-b(1/2-1/q)), eta^(-b(1-2/q)+1/q), eta^(-(b-1/2)(1-2/q)))
    with b = beta1 + beta2; for q >= 4 the second term dominates the third
    (their exponents differ by 2/q - 1/2 <= 0), so the simplified constant
    keeps only the first two.
    """
    if not (0.5 <= beta1 <= 1.0):
        raise ValueError("beta1 must lie in [1/2, 1]")
    if not (0.0 <= beta2 <= 1.0):
        raise ValueError("beta2 must lie in [0, 1]")
    if q < 2.0:
        raise ValueError("q must be >= 2")
    if not (0.0 < eta < 1.0):
        raise ValueError("eta must lie in (0, 1)")
    b = beta1 + beta2
    t1 = eta ** (-b * (0.5 - 1.0 / q))
    t2 = eta ** (-b * (1.0 - 2.0 / q) + 1.0 / q)
    t3 = eta ** (-(b - 0.5) * (1.0 - 2.0 / q))
    return DecouplingConstant(full=t1 + t2 + t3, simplified=t1 + t2, terms=(t1, t2, t3))


def _check_assumption(k_scale: int, l_scale: int, eta: float, q: float) -> None:
    if q > 4.0:
        lhs = (l_scale / k_scale) ** ((q - 2.0) / (q - 4.0))
        if lhs > eta:
            raise AssumptionError(
                f"(L/K)^((q-2)/(q-4)) = {lhs:.6g} > eta = {eta:.6g}"
            )


def solve_betas(
    k_scale: int, l_scale: int, eta: float, q: float
) -> tuple[float, float]:
    """The optimizing plate exponents: beta1 + beta2 = 2/(q-2) and
    eta^beta1 K = eta^beta2 L = (eta^(beta1+beta2) K L)^(1/2).

    Solving: beta1 = beta/2 + log(L/K)/(2 log eta).  Requires q >= 4,
    L <= K, and for q > 4 the admissibility assumption
    (L/K)^((q-2)/(q-4)) <= eta.  The returned beta1 is >= 1/2 and both
    common products are >= 1 (they equal sqrt(eta^beta K L) with
    eta^beta K L >= eta K L >= 1).
    """
    if q < 4.0:
        raise ValueError("q must be >= 4")
    if not (1 <= l_scale <= k_scale):
        raise ValueError("need 1 <= L <= K")
    if not (0.0 < eta < 1.0):
        raise ValueError("eta must lie in (0, 1)")
    _check_assumption(k_scale, l_scale, eta, q)
    beta = 2.0 / (q - 2.0)
    beta1 = beta / 2.0 + math.log(l_scale / k_scale) / (2.0 * math.log(eta))
    return beta1, beta - beta1


def plate_count_bound(
    k_scale: int,
    l_scale: int,
    eta: float,
    beta1: float,
    beta2: float,
    eps: float = 0.05,
) -> float:
    """Fourth root of the localized-count bound:

        K^(1/4+eps) L^(1/4)
        (eta^(2(b1+b2)) K^2 L + eta^(2 b1) K^2 + eta^(2 b2) L^2)^(1/4).

    The K^eps factor is explicit and reported, default eps = 0.05.
    """
    three_term = (
        eta ** (2.0 * (beta1 + beta2)) * k_scale**2 * l_scale
        + eta ** (2.0 * beta1) * k_scale**2
        + eta ** (2.0 * beta2) * l_scale**2
    )
    return k_scale ** (0.25 + eps) * l_scale**0.25 * three_term**0.25


def gq_upper_bound(
    k_scale: int, l_scale: int, eta: float, q: float, eps: float = 0.05
) -> float:
    """The proven mean-value bound

        eta^(-eps) eta^((q-4)/(q(q-2))) (K L)^(1-2/q)
        (1 + eta^(2/(q-2)) K)^(1/q),

    valid for q = 4 outright and for q > 4 under the admissibility
    assumption (checked; AssumptionError names the failed inequality).
    At q = 4 and eps = 0 this is (K L)^(1/2) (1 + eta K)^(1/4), within
    2^(1/4) of (K L)^(1/2) whenever eta K <= 1.
    """
    if q < 4.0:
        raise ValueError("q must be >= 4")
    _check_assumption(k_scale, l_scale, eta, q)
    kl = float(k_scale * l_scale)
    return (
        eta ** (-eps)
        * eta ** ((q - 4.0) / (q * (q - 2.0)))
        * kl ** (1.0 - 2.0 / q)
        * (1.0 + eta ** (2.0 / (q - 2.0)) * k_scale) ** (1.0 / q)
    )
