"""Maximum-likelihood estimation for the epsilon-skew Burr III family.

The log-likelihood for a sample x_1..x_n, written with s_i = sign(x_i - mu)
(sign(0) = +1) and z_i = s_i (x_i - mu) / (sigma (1 + s_i eps)), is

    l = n log(ck / (2 sigma)) - (c+1) sum log z_i - (k+1) sum log(1 + z_i**-c)

The fitter runs cyclic coordinate ascent in the order mu, sigma, c, k, eps.
Each coordinate is updated by solving its score equation (k has a closed
form); an update is kept only if the log-likelihood does not decrease, and
a golden-section line search on the same coordinate takes over whenever
the root step is unavailable or goes downhill.  A pattern step after each
cycle extrapolates along the displacement the cycle produced, which cuts
through the slow zigzag coordinate ascent suffers on the curved ridge that
couples mu and eps.  All window and tolerance choices are relative, so
fits commute with affine changes of the data.

When c*k < 1 the density diverges at every observation, so the exact
likelihood has an integrable spike at each data point and its supremum
over mu is infinite.  The fitter therefore maximizes a bounded working
objective in which every |x_i - mu| is floored at the sample resolution
(half the median gap between adjacent order statistics -- below that
distance the sample cannot localize mu anyway).  The floor caps each
spike at the level of an ordinary point's contribution, leaving nothing
for the optimizer to chase, and the working objective equals the exact
log-likelihood whenever mu keeps the floor distance from every
observation.  In the spiked regime the mu score has a pole at every data
point and no root, so the mu update switches to direct search.  Whenever
mu ends up within the floor distance of an observation -- always the
case in the spiked regime, and occasionally just above c*k = 1 where the
repulsion of data points is too weak to push mu out of the dead zone --
the mu component is dropped from the convergence norm, since no score
equation holds at such a pin, and the two objectives differ at the
solution by a bounded amount: below c*k = 1 the floor truncates an
infinite spike (exact above working), just above it the floor slightly
inflates the pinned point's contribution (working above exact).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .distribution import Params
from .errors import (
    BracketError,
    DegenerateDataError,
    DensityLimitWarning,
    DomainError,
    NoBracketError,
    NonConvergenceError,
    SmallSampleError,
)
from .special_math import find_root

__all__ = [
    "COORD_NAMES",
    "FitConfig",
    "FitResult",
    "StandardizedSample",
    "fit_ml",
    "loglik",
    "moment_init",
    "score",
    "solve_coordinate",
    "standardize",
]

COORD_NAMES = ("mu", "sigma", "c", "k", "eps")

_MIN_N = 20
_EPS_EDGE = 1e-9  # distance kept between eps and the ends of (-1, 1)


@dataclass(frozen=True)
class StandardizedSample:
    """Signs and folded magnitudes of a sample relative to given parameters."""

    s: np.ndarray
    z: np.ndarray


def _split_sample(x, mu, sigma, eps, floor=0.0):
    d = x - mu
    s = np.where(d >= 0.0, 1.0, -1.0)
    z = np.maximum(np.abs(d), floor) / (sigma * (1.0 + s * eps))
    return d, s, z


def standardize(p, data):
    """StandardizedSample of the data under p; z_i = 0 marks a tie with mu."""
    _, s, z = _split_sample(np.asarray(data.values, dtype=float), p.mu, p.sigma, p.eps)
    return StandardizedSample(s=s, z=z)


def _data_resolution(x):
    """Half the median gap between adjacent distinct order statistics."""
    gaps = np.diff(np.sort(x))
    gaps = gaps[gaps > 0.0]
    if gaps.size == 0:
        raise DegenerateDataError("all observations identical")
    return 0.5 * float(np.median(gaps))


def _loglik_arrays(x, mu, sigma, c, k, eps):
    n = x.size
    _, _, z = _split_sample(x, mu, sigma, eps)
    const = n * math.log(c * k / (2.0 * sigma))
    if np.any(z == 0.0):
        ck = c * k
        if ck > 1.0:
            return -math.inf
        if ck < 1.0:
            return math.inf
        # c*k = 1: tied points contribute exactly the constant term
        z = z[z > 0.0]
    lz = np.log(z)
    return const - (c + 1.0) * lz.sum() - (k + 1.0) * np.logaddexp(0.0, -c * lz).sum()


def loglik(p, data):
    """Log-likelihood of the sample under p.

    A data point exactly at mu is assigned its density limit, so the
    result is -inf when c*k > 1 and +inf (with a DensityLimitWarning)
    when c*k < 1; at c*k = 1 the tied contribution is finite and exact.
    Always equals the sum of pointwise log densities.
    """
    val = _loglik_arrays(
        np.asarray(data.values, dtype=float), p.mu, p.sigma, p.c, p.k, p.eps
    )
    if val == math.inf:
        warnings.warn(
            "a data point coincides with mu and c*k < 1: likelihood unbounded",
            DensityLimitWarning,
            stacklevel=2,
        )
    return float(val)


def _tmix(z, c):
    """1 / (1 + z**c), evaluated through logs so huge z**c cannot overflow."""
    return np.exp(-np.logaddexp(0.0, c * np.log(z)))


def _score_arrays(x, mu, sigma, c, k, eps):
    n = x.size
    d, s, z = _split_sample(x, mu, sigma, eps)
    lz = np.log(z)
    t = np.exp(-np.logaddexp(0.0, c * lz))
    ckp = c * (k + 1.0)
    g_mu = (((c + 1.0) - ckp * t) / d).sum()
    g_sigma = (n * c - ckp * t.sum()) / sigma
    g_c = n / c - lz.sum() + (k + 1.0) * (lz * t).sum()
    g_k = n / k - np.logaddexp(0.0, -c * lz).sum()
    g_eps = (((c + 1.0) - ckp * t) / (s + eps)).sum()
    return np.array([g_mu, g_sigma, g_c, g_k, g_eps])


def score(p, data):
    """Score vector (d l / d mu, d sigma, d c, d k, d eps) at p.

    Undefined when a data point equals mu exactly; perturb mu first.
    """
    x = np.asarray(data.values, dtype=float)
    if np.any(x == p.mu):
        raise DomainError("score is undefined with a data point exactly at mu")
    return _score_arrays(x, p.mu, p.sigma, p.c, p.k, p.eps)


def _work_score(x, mu, sigma, c, k, eps, floor):
    """Score of the working (resolution-floored) objective.

    Points inside the floor contribute a constant to the objective, hence
    nothing to the mu component; the other components use the floored z.
    Identical to the exact score when mu is off-floor for every point.
    """
    n = x.size
    d, s, z = _split_sample(x, mu, sigma, eps, floor)
    lz = np.log(z)
    t = np.exp(-np.logaddexp(0.0, c * lz))
    coef = (c + 1.0) - c * (k + 1.0) * t
    live = np.abs(d) > floor
    g_mu = (np.where(live, coef, 0.0) / np.where(live, d, 1.0)).sum()
    g_sigma = (n * c - c * (k + 1.0) * t.sum()) / sigma
    g_c = n / c - lz.sum() + (k + 1.0) * (lz * t).sum()
    g_k = n / k - np.logaddexp(0.0, -c * lz).sum()
    g_eps = (coef / (s + eps)).sum()
    return np.array([g_mu, g_sigma, g_c, g_k, g_eps])


def _mu_pinned(x, mu, floor):
    """True when mu sits at or inside the resolution floor of a data point."""
    return bool(np.min(np.abs(x - mu)) <= floor * (1.0 + 1e-9))


def _scaled_score_norm(g, p, include_mu, include_c=True):
    """Max-norm of the score in relative coordinates (log sigma, log c, ...).

    Only free coordinates count.  include_c is cleared when c is held
    fixed.  The mu component only counts when include_mu is set: the
    fitter drops it whenever mu is pinned at the resolution floor of an
    observation (always the case in the c*k < 1 comb regime), where the
    mu score cannot vanish.
    """
    parts = [p.sigma * abs(g[1]), p.k * abs(g[3]), abs(g[4])]
    if include_c:
        parts.append(p.c * abs(g[2]))
    if include_mu:
        parts.append(p.sigma * abs(g[0]))
    return max(parts)


def _fit_loglik(x, mu, sigma, c, k, eps, floor):
    """Bounded working objective maximized by the optimizer.

    The exact log-likelihood with each |x_i - mu| floored; see the module
    docstring.  Agrees with the exact value to the last bit whenever
    min |x_i - mu| >= floor.
    """
    n = x.size
    _, _, z = _split_sample(x, mu, sigma, eps, floor)
    lz = np.log(z)
    return (
        n * math.log(c * k / (2.0 * sigma))
        - (c + 1.0) * lz.sum()
        - (k + 1.0) * np.logaddexp(0.0, -c * lz).sum()
    )


@dataclass(frozen=True)
class FitConfig:
    """Knobs for fit_ml.

    score_tol is the threshold on the scaled score max-norm; None means
    1e-5 * n.  init=None selects the moment-based start.  fixed_c pins c
    and removes it from the update cycle (4 free parameters).
    """

    max_cycles: int = 500
    param_tol: float = 1e-6
    score_tol: float | None = None
    init: Params | None = None
    fixed_c: float | None = None

    def __post_init__(self):
        if self.max_cycles < 1:
            raise DomainError("max_cycles must be at least 1")
        if not self.param_tol > 0.0:
            raise DomainError("param_tol must be positive")
        if self.score_tol is not None and not self.score_tol > 0.0:
            raise DomainError("score_tol must be positive")
        if self.fixed_c is not None and not self.fixed_c > 0.0:
            raise DomainError("fixed_c must be positive")


@dataclass(frozen=True)
class FitResult:
    """Outcome of fit_ml.

    loglik is the maximized working objective (equal to the last trace
    entry); it coincides with the exact log-likelihood at params unless
    mu sits within the resolution floor of an observation: always the
    case when the fitted c*k < 1, where the exact value is at least as
    large, and occasionally just above c*k = 1, where the floor inflates
    the value by a bounded amount (see the module docstring).
    score_norm is the scaled norm of the working score, omitting
    the mu component when mu is pinned at the floor of an observation
    (always the case when the fitted c*k < 1), where the mu score cannot
    vanish (see the module docstring).  trace holds (cycle, loglik)
    pairs and never decreases in its second column.
    """

    params: Params
    loglik: float
    aic: float
    converged: bool
    cycles: int
    score_norm: float
    free_params: int
    trace: tuple[tuple[int, float], ...]


# -- single score components of the working objective, cheap per scan node --


def _comp_mu(x, mu, sigma, c, k, eps, floor):
    d, _, z = _split_sample(x, mu, sigma, eps, floor)
    t = _tmix(z, c)
    coef = (c + 1.0) - c * (k + 1.0) * t
    live = np.abs(d) > floor
    return float((np.where(live, coef, 0.0) / np.where(live, d, 1.0)).sum())


def _comp_sigma_scaled(x, mu, sigma, c, k, eps, floor):
    # sigma * dl/dsigma = c * (n - (k+1) * sum 1/(1+z**c))
    _, _, z = _split_sample(x, mu, sigma, eps, floor)
    return float(c * (x.size - (k + 1.0) * _tmix(z, c).sum()))


def _comp_c(x, mu, sigma, c, k, eps, floor):
    _, _, z = _split_sample(x, mu, sigma, eps, floor)
    lz = np.log(z)
    t = np.exp(-np.logaddexp(0.0, c * lz))
    return float(x.size / c - lz.sum() + (k + 1.0) * (lz * t).sum())


def _comp_eps(x, mu, sigma, c, k, eps, floor):
    _, s, z = _split_sample(x, mu, sigma, eps, floor)
    t = _tmix(z, c)
    return float((((c + 1.0) - c * (k + 1.0) * t) / (s + eps)).sum())


def _brent_root(f, a, b, tol):
    return find_root(f, a, b, tol=tol, max_iter=200).root


def _scan_brackets(xs, vals):
    """Adjacent sign-change pairs (a, b) from a scan, plus exact zeros."""
    pairs = []
    for a, b, fa, fb in zip(xs, xs[1:], vals, vals[1:]):
        if not (math.isfinite(fa) and math.isfinite(fb)):
            continue
        if fa == 0.0:
            pairs.append((float(a), float(a)))
        elif (fa > 0.0) != (fb > 0.0):
            pairs.append((float(a), float(b)))
    if vals and math.isfinite(vals[-1]) and vals[-1] == 0.0:
        pairs.append((float(xs[-1]), float(xs[-1])))
    return pairs


def _mu_window(x, sigma, eps):
    lo, hi = np.quantile(x, [0.05, 0.95])
    return max(4.0 * sigma * (1.0 + abs(eps)), float(hi - lo))


def _eps_grid():
    inner = np.linspace(0.05, 0.8, 16)
    outer = 1.0 - np.geomspace(1e-8, 0.1, 8)[::-1]
    pos = np.concatenate([inner, outer])
    return np.concatenate([-pos[::-1], [0.0], pos])


def _comb_mu_update(x, p, width, floor):
    """Best mu in the c*k < 1 regime: value scan plus golden refinement.

    In that regime the exact mu score has a pole at every data point and
    the likelihood equation no root, so the update maximizes the working
    objective directly.
    """

    def f(m):
        return _fit_loglik(x, m, p.sigma, p.c, p.k, p.eps, floor)

    grid = p.mu + np.linspace(-width, width, 41)
    vals = [f(float(m)) for m in grid]
    i = int(np.argmax(vals))
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, grid.size - 1)])
    m, _ = _golden_max(f, lo, hi)
    return float(m)


def solve_coordinate(p, which, data, cfg=None):
    """Solve the score equation for one coordinate, holding the others at p.

    Returns the new coordinate value.  Raises NoBracketError when no sign
    change of that score component can be located, and NonConvergenceError
    if a bracketed solve stalls.  `which` is one of COORD_NAMES.  The
    score used is that of the resolution-floored working objective, which
    matches the exact score whenever mu keeps the floor distance from all
    observations.  For mu with c*k < 1 the score equation has no root
    (dl/dmu has a pole at every observation), so the update instead
    maximizes the working objective and returns its argmax.
    """
    if which not in COORD_NAMES:
        raise DomainError(f"unknown coordinate {which!r}")
    x = np.asarray(data.values, dtype=float)
    n = x.size
    res_tol = 1e-9 * n
    floor = _data_resolution(x)

    if which == "k":
        # dl/dk = n/k - sum log(1 + z**-c) vanishes at exactly one k
        _, _, z = _split_sample(x, p.mu, p.sigma, p.eps, floor)
        denom = np.logaddexp(0.0, -p.c * np.log(z)).sum()
        if not (denom > 0.0 and math.isfinite(denom)):
            raise NoBracketError("k update undefined for this configuration")
        return float(n / denom)

    if which == "sigma":
        # strictly decreasing in log sigma, so one-sided expansion suffices
        def g(ls):
            return _comp_sigma_scaled(x, p.mu, math.exp(ls), p.c, p.k, p.eps, floor)

        ls0 = math.log(p.sigma)
        g0 = g(ls0)
        if g0 == 0.0:
            return p.sigma
        direction = 1.0 if g0 > 0.0 else -1.0
        near, step = ls0, 1.0
        while step <= 128.0:
            far = ls0 + direction * step
            gfar = g(far)
            if (gfar > 0.0) != (g0 > 0.0) or gfar == 0.0:
                a, b = sorted((near, far))
                return math.exp(_brent_root(g, a, b, res_tol * max(1.0, p.c)))
            near = far
            step *= 2.0
        raise NoBracketError("sigma score has no sign change in range")

    if which == "c":

        def g(lc):
            return _comp_c(x, p.mu, p.sigma, math.exp(lc), p.k, p.eps, floor)

        lc0 = math.log(p.c)
        offsets = (-16.0, -8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 8.0)
        grid = [lc0 + o for o in offsets]
        pairs = _scan_brackets(grid, [g(v) for v in grid])
        if not pairs:
            raise NoBracketError("c score has no sign change in the scan range")
        a, b = min(pairs, key=lambda ab: min(abs(ab[0] - lc0), abs(ab[1] - lc0)))
        if a == b:
            return math.exp(a)
        return math.exp(_brent_root(g, a, b, res_tol))

    if which == "eps":

        def g(e):
            return _comp_eps(x, p.mu, p.sigma, p.c, p.k, e, floor)

        grid = np.clip(_eps_grid(), -1.0 + _EPS_EDGE, 1.0 - _EPS_EDGE)
        grid = np.unique(np.append(grid, p.eps)).tolist()
        pairs = _scan_brackets(grid, [g(v) for v in grid])
        if not pairs:
            raise NoBracketError("eps score has no sign change in (-1, 1)")
        a, b = min(pairs, key=lambda ab: min(abs(ab[0] - p.eps), abs(ab[1] - p.eps)))
        if a == b:
            return a
        return _brent_root(g, a, b, res_tol)

    # mu.  With c*k < 1: direct search (no root exists).  Otherwise scan a
    # symmetric window for sign changes of the working mu score, refine
    # each bracket, and keep the root with the best likelihood.
    width = _mu_window(x, p.sigma, p.eps)
    if p.c * p.k < 1.0:
        return _comb_mu_update(x, p, width, floor)

    def g(m):
        return _comp_mu(x, m, p.sigma, p.c, p.k, p.eps, floor)

    grid = (p.mu + np.linspace(-width, width, 41)).tolist()
    pairs = _scan_brackets(grid, [g(v) for v in grid])
    if not pairs:
        raise NoBracketError("mu score has no sign change in the scan window")
    tol_mu = res_tol / p.sigma
    best_mu, best_ll = None, -math.inf
    for a, b in pairs:
        if a == b:
            root = a
        else:
            try:
                root = _brent_root(g, a, b, tol_mu)
            except (BracketError, NonConvergenceError):
                continue
        ll = _fit_loglik(x, root, p.sigma, p.c, p.k, p.eps, floor)
        if ll > best_ll:
            best_mu, best_ll = root, ll
    if best_mu is None:
        raise NoBracketError("mu score brackets did not refine to a root")
    return float(best_mu)


_INIT_SHAPE_GRID = ((2.0, 1.0), (5.0, 0.2), (1.5, 3.0), (20.0, 0.2))


def moment_init(data, fixed_c=None):
    """Quantile-based starting point.

    mu from the median, sigma from the normalized IQR, eps from the sign
    imbalance around mu, and (c, k) as the best of a small shape grid by
    likelihood.  Raises DegenerateDataError when the IQR vanishes.
    """
    x = np.asarray(data.values, dtype=float)
    mu0 = float(np.median(x))
    q25, q75 = np.quantile(x, [0.25, 0.75])
    sigma0 = float(q75 - q25) / 1.349
    if not (sigma0 > 0.0 and math.isfinite(sigma0)):
        raise DegenerateDataError("interquartile range is zero; scale is unidentified")
    eps0 = float(np.clip(1.0 - 2.0 * np.mean(x < mu0), -0.9, 0.9))
    floor = _data_resolution(x)
    if fixed_c is not None:
        pairs = tuple((float(fixed_c), k) for k in (1.0, 0.2, 3.0, 0.07))
    else:
        pairs = _INIT_SHAPE_GRID
    best_pair, best_ll = pairs[0], -math.inf
    for c0, k0 in pairs:
        ll = _fit_loglik(x, mu0, sigma0, c0, k0, eps0, floor)
        if ll > best_ll:
            best_pair, best_ll = (c0, k0), ll
    return Params(mu=mu0, sigma=sigma0, c=best_pair[0], k=best_pair[1], eps=eps0)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, a, b, iters=90):
    """Golden-section maximization; returns the best probed (x, f(x))."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    best = (x1, f1) if f1 >= f2 else (x2, f2)
    for _ in range(iters):
        if b - a <= 1e-12 * (1.0 + abs(a) + abs(b)):
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
            if f1 > best[1]:
                best = (x1, f1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
            if f2 > best[1]:
                best = (x2, f2)
    return best


def _golden_update(x, p, which, floor):
    """Line-search fallback on one coordinate; returns (params, loglik)."""

    def ll_with(**kw):
        q = replace(p, **kw)
        return _fit_loglik(x, q.mu, q.sigma, q.c, q.k, q.eps, floor)

    if which == "mu":
        half = 4.0 * p.sigma * (1.0 + abs(p.eps))
        m, ll = _golden_max(lambda v: ll_with(mu=v), p.mu - half, p.mu + half)
        return replace(p, mu=m), ll
    if which == "eps":
        v, ll = _golden_max(lambda e: ll_with(eps=e), -1.0 + _EPS_EDGE, 1.0 - _EPS_EDGE)
        return replace(p, eps=v), ll
    cur = getattr(p, which)
    lv = math.log(cur)
    v, ll = _golden_max(lambda u: ll_with(**{which: math.exp(u)}), lv - 2.0, lv + 2.0)
    return replace(p, **{which: math.exp(v)}), ll


def _pattern_step(x, p_prev, p, ll, floor):
    """Extrapolate along the last cycle's displacement while it improves.

    Doubles the step in the fit's natural coordinates (log scale for
    sigma, c, k); a ridge accelerator in the usual pattern-search sense.
    """
    dm = p.mu - p_prev.mu
    dls = math.log(p.sigma / p_prev.sigma)
    dlc = math.log(p.c / p_prev.c)
    dlk = math.log(p.k / p_prev.k)
    de = p.eps - p_prev.eps
    if dm == dls == dlc == dlk == de == 0.0:
        return p, ll
    t = 1.0
    while t <= 64.0:
        q = Params(
            mu=p.mu + t * dm,
            sigma=p.sigma * math.exp(t * dls),
            c=p.c * math.exp(t * dlc),
            k=p.k * math.exp(t * dlk),
            eps=float(np.clip(p.eps + t * de, -1.0 + _EPS_EDGE, 1.0 - _EPS_EDGE)),
        )
        q_ll = _fit_loglik(x, q.mu, q.sigma, q.c, q.k, q.eps, floor)
        if not q_ll > ll:
            break
        p, ll = q, q_ll
        t *= 2.0
    return p, ll


def _rel_change(p_new, p_old):
    return max(
        abs(p_new.mu - p_old.mu) / p_new.sigma,
        abs(p_new.sigma - p_old.sigma) / p_new.sigma,
        abs(p_new.c - p_old.c) / p_new.c,
        abs(p_new.k - p_old.k) / p_new.k,
        abs(p_new.eps - p_old.eps),
    )


_START_EPS = (0.0, 0.6, -0.6)  # eps values seeding the multi-start ascents


def _start_points(data, fixed_c):
    """Deterministic initial values spanning the mu-eps ridge.

    The first start is moment_init.  The others re-seed eps directly and
    place mu at the empirical (1 - eps)/2 quantile, where the population
    CDF equals that level at mu; the likelihood couples mu and eps along
    a shallow curved ridge, so a single start sometimes converges to a
    local optimum on the wrong part of it.
    """
    base = moment_init(data, fixed_c)
    x = np.asarray(data.values, dtype=float)
    starts = [base]
    for e0 in _START_EPS[1:]:
        mu0 = float(np.quantile(x, 0.5 * (1.0 - e0)))
        starts.append(replace(base, mu=mu0, eps=e0))
    return starts


def _ascend(x, data, p, cfg, floor, score_tol):
    """One coordinate-ascent run from p; returns (p, ll, converged, cycles, trace)."""
    ll = _fit_loglik(x, p.mu, p.sigma, p.c, p.k, p.eps, floor)
    if math.isnan(ll):
        raise DegenerateDataError("likelihood undefined at the starting point")
    active = tuple(c for c in COORD_NAMES if not (c == "c" and cfg.fixed_c is not None))
    trace = [(0, float(ll))]
    converged = False
    cycle = 0
    for cycle in range(1, cfg.max_cycles + 1):
        p_prev = p
        for name in active:
            cand, cand_ll = None, -math.inf
            try:
                val = solve_coordinate(p, name, data, cfg)
                cand = replace(p, **{name: val})
                cand_ll = _fit_loglik(
                    x, cand.mu, cand.sigma, cand.c, cand.k, cand.eps, floor
                )
            except (NoBracketError, NonConvergenceError, BracketError, DomainError):
                pass
            if cand is not None and cand_ll >= ll:
                p, ll = cand, cand_ll
                continue
            alt, alt_ll = _golden_update(x, p, name, floor)
            if alt_ll > ll:
                p, ll = alt, alt_ll
        p, ll = _pattern_step(x, p_prev, p, ll, floor)
        trace.append((cycle, float(ll)))
        g = _work_score(x, p.mu, p.sigma, p.c, p.k, p.eps, floor)
        norm = _scaled_score_norm(
            g,
            p,
            include_mu=not _mu_pinned(x, p.mu, floor),
            include_c=cfg.fixed_c is None,
        )
        if _rel_change(p, p_prev) <= cfg.param_tol and norm <= score_tol:
            converged = True
            break
    return p, ll, converged, cycle, trace


def fit_ml(data, cfg=None):
    """Maximum-likelihood fit by cyclic coordinate ascent.

    Requires at least 20 observations.  Unless cfg.init pins the start,
    the ascent is repeated from a small set of initial values spanning
    the mu-eps ridge and the best final likelihood wins; the reported
    trace is the winning run's and never decreases.  Convergence means
    both the relative parameter change over a full cycle and the scaled
    score norm fell below their tolerances; otherwise the best point
    found is returned with converged=False.
    """
    cfg = cfg or FitConfig()
    x = np.asarray(data.values, dtype=float)
    n = x.size
    if n < _MIN_N:
        raise SmallSampleError(f"need at least {_MIN_N} observations, got {n}")
    if np.all(x == x[0]):
        raise DegenerateDataError("all observations identical")
    floor = _data_resolution(x)
    score_tol = cfg.score_tol if cfg.score_tol is not None else 1e-5 * n

    if cfg.init is not None:
        starts = [cfg.init]
    else:
        starts = _start_points(data, cfg.fixed_c)
    if cfg.fixed_c is not None:
        starts = [
            s if s.c == cfg.fixed_c else replace(s, c=float(cfg.fixed_c))
            for s in starts
        ]

    best = None
    for s in starts:
        p, ll, converged, cycle, trace = _ascend(x, data, s, cfg, floor, score_tol)
        if best is None or ll > best[1]:
            best = (p, ll, converged, cycle, trace)
    p, ll, converged, cycle, trace = best

    g = _work_score(x, p.mu, p.sigma, p.c, p.k, p.eps, floor)
    norm = _scaled_score_norm(
        g,
        p,
        include_mu=not _mu_pinned(x, p.mu, floor),
        include_c=cfg.fixed_c is None,
    )
    free = 4 if cfg.fixed_c is not None else 5
    return FitResult(
        params=p,
        loglik=float(ll),
        aic=2.0 * free - 2.0 * float(ll),
        converged=converged,
        cycles=cycle,
        score_norm=float(norm),
        free_params=free,
        trace=tuple(trace),
    )
