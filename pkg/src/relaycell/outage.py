"""Outage probability under correlated lognormal shadowing.

Each link's SIR in dB is the desired median plus its shadowing term, minus
the dB value of a sum of 18 lognormal interferer powers. The sum is matched
to a single lognormal either by Fenton-Wilkinson (first two linear moments)
or by Schwartz-Yeh (exact pairwise log-domain moments, folded one component
at a time). Monte Carlo evaluation draws the same correlated shadowing
directly and serves both as validator and as the only evaluator for
amplify-and-forward relaying.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy.special import erfc, expit

from .errors import DomainError
from .geometry import Link, sector_mask, worst_case_interferer_positions
from .propagation import correlated_normals
from .sir import Backend, direct_link_distances, link_distances

LN10_OVER_10 = np.log(10.0) / 10.0
MC_CHUNK = 1 << 15
SY_TOL_DB = 1e-9
SY_MAX_ORDER = 256


class Scheme(str, enum.Enum):
    NO_RELAY = "norelay"
    DF = "df"
    AF = "af"


class SumMethod(str, enum.Enum):
    FW = "fw"
    SY = "sy"


class DfMode(str, enum.Enum):
    PRODUCT = "eq20"
    MIN_RATE = "minrate"


def q_function(x):
    """Gaussian tail probability Q(x) = erfc(x / sqrt(2)) / 2."""
    out = 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))
    return out if out.ndim else float(out)


# -- lognormal sums ---------------------------------------------------------

def _equicorrelated_cov(stds, rho):
    cov = rho * np.outer(stds, stds)
    np.fill_diagonal(cov, stds * stds)
    return cov


def _fenton_wilkinson(mu, cov):
    # natural-log domain
    var = np.diag(cov)
    mean_lin = np.exp(mu + 0.5 * var)
    m1 = mean_lin.sum()
    m2 = np.sum(np.exp(mu[:, None] + mu[None, :]
                       + 0.5 * (var[:, None] + var[None, :] + 2.0 * cov)))
    s2 = max(np.log(m2 / (m1 * m1)), 0.0)
    return np.log(m1) - 0.5 * s2, s2


def _pair_expectations(mu_w, sd_w, order):
    nodes, weights = hermegauss(order)
    weights = weights / np.sqrt(2.0 * np.pi)
    w = mu_w + sd_w * nodes
    g = np.logaddexp(0.0, w)
    return weights @ g, weights @ (g * g), weights @ expit(w)


def _fold_pair(mu1, v1, mu2, v2, c12, order):
    """Exact mean/variance of ln(e^Y1 + e^Y2) for jointly Gaussian Y1, Y2.

    Writes the sum as Y1 + g(W) with W = Y2 - Y1 and g(w) = ln(1 + e^w);
    Cov(Y1, g(W)) follows from Stein's lemma. Also returns E[g'(W)], the
    weight that carries covariances with the remaining components.
    """
    mu_w = mu2 - mu1
    sd_w = np.sqrt(max(v1 + v2 - 2.0 * c12, 0.0))
    e_g, e_g2, e_s = _pair_expectations(mu_w, sd_w, order)
    mean = mu1 + e_g
    var = v1 + (e_g2 - e_g * e_g) + 2.0 * (c12 - v1) * e_s
    return mean, max(var, 0.0), e_s


def _schwartz_yeh_at(mu, cov, order):
    mu_z, v_z = mu[0], cov[0, 0]
    c_z = cov[0].copy()
    for k in range(1, len(mu)):
        mu_z, v_z, e_s = _fold_pair(mu_z, v_z, mu[k], cov[k, k], c_z[k], order)
        c_z = (1.0 - e_s) * c_z + e_s * cov[k]
    return mu_z, v_z


def _schwartz_yeh(mu, cov):
    # Gauss-Hermite nodes from numpy lose accuracy beyond order 256
    order = 16
    var_noise = 64.0 * np.finfo(float).eps * max(1.0, float(np.max(np.diag(cov))))
    prev = _schwartz_yeh_at(mu, cov, order)
    while order < SY_MAX_ORDER:
        order *= 2
        cur = _schwartz_yeh_at(mu, cov, order)
        d_mean = abs(cur[0] - prev[0]) / LN10_OVER_10
        d_std = abs(np.sqrt(cur[1]) - np.sqrt(prev[1])) / LN10_OVER_10
        if d_mean < SY_TOL_DB and (d_std < SY_TOL_DB or abs(cur[1] - prev[1]) <= var_noise):
            return cur
        prev = cur
    return prev


def lognormal_sum_moments(component_means_db, component_stds_db, rho, method=SumMethod.FW):
    """dB-domain (mean, std) of a sum of equicorrelated lognormal powers."""
    means = np.atleast_1d(np.asarray(component_means_db, dtype=float))
    stds = np.atleast_1d(np.asarray(component_stds_db, dtype=float))
    if means.size == 0 or means.shape != stds.shape:
        raise DomainError("component means and stds must be non-empty and of equal length")
    if np.any(stds < 0):
        raise DomainError("component stds must be non-negative")
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [0, 1], got {rho}")
    if means.size == 1:
        return float(means[0]), float(stds[0])
    mu = LN10_OVER_10 * means
    cov = _equicorrelated_cov(LN10_OVER_10 * stds, rho)
    if SumMethod(method) is SumMethod.FW:
        m, v = _fenton_wilkinson(mu, cov)
    else:
        m, v = _schwartz_yeh(mu, cov)
    return float(m / LN10_OVER_10), float(np.sqrt(v) / LN10_OVER_10)


# -- analytic link models ---------------------------------------------------

@dataclass(frozen=True)
class ShadowedLinkModel:
    mean_db: float
    std_db: float
    method: SumMethod
    link: Link


def _medians_db(dist, gamma):
    return -10.0 * gamma * np.log10(np.asarray(dist, dtype=float))


def shadowed_model_from_distances(desired, dist, gamma, sigma, rho,
                                  method=SumMethod.FW, link=Link.MS_BS):
    """Gaussian-in-dB SIR model for one desired and several interferer paths.

    All shadowing terms, desired included, share pairwise correlation ``rho``.
    A common shift of every interferer term shifts the dB sum one-for-one,
    so the desired/interference-sum covariance is rho * sigma^2.
    """
    dist = np.asarray(dist, dtype=float)
    med = _medians_db(dist, gamma)
    sum_mean, sum_std = lognormal_sum_moments(med, np.full(dist.size, sigma), rho, method)
    mean = float(_medians_db(desired, gamma)) - sum_mean
    var = sigma * sigma + sum_std * sum_std - 2.0 * rho * sigma * sigma
    return ShadowedLinkModel(mean, float(np.sqrt(max(var, 0.0))), SumMethod(method), Link(link))


def shadowed_link_model(link, layout, params, method=SumMethod.FW,
                        backend=Backend.CLOSED, mask=None):
    desired, dist = link_distances(layout, link, backend)
    if mask is not None:
        dist = dist[np.asarray(mask, dtype=bool)]
    return shadowed_model_from_distances(desired, dist, params.gamma(link),
                                         params.sigma(link), params.rho, method, link)


def no_relay_model(D, params, method=SumMethod.FW, backend=Backend.CLOSED):
    """Conventional cell: the direct link reaches the cell edge (d = D)."""
    desired, dist = direct_link_distances(D, D, backend)
    return shadowed_model_from_distances(desired, dist, params.gamma_b, params.sigma_d,
                                         params.rho, method, Link.MS_BS)


def outage_single_link(model, threshold_db):
    """P(SIR < threshold), a Gaussian CDF in dB."""
    thr = np.asarray(threshold_db, dtype=float)
    if model.std_db == 0.0:
        out = (model.mean_db < thr).astype(float)
    else:
        out = np.asarray(q_function((model.mean_db - thr) / model.std_db))
    return out if out.ndim else float(out)


def outage_df(p_r, p_m, mode=DfMode.PRODUCT):
    """Decode-and-forward outage from the two hop outages.

    ``eq20`` (product) multiplies the hop outages; ``minrate`` declares outage when
    either hop fails.
    """
    p_r = np.asarray(p_r, dtype=float)
    p_m = np.asarray(p_m, dtype=float)
    if np.any((p_r < 0) | (p_r > 1) | (p_m < 0) | (p_m > 1)):
        raise DomainError("hop outage probabilities must lie in [0, 1]")
    if DfMode(mode) is DfMode.PRODUCT:
        out = p_r * p_m
    else:
        out = 1.0 - (1.0 - p_r) * (1.0 - p_m)
    return out if out.ndim else float(out)


def af_equivalent_sir(g_br, g_rm):
    g_br = np.asarray(g_br, dtype=float)
    g_rm = np.asarray(g_rm, dtype=float)
    if np.any(g_br <= 0) or np.any(g_rm <= 0):
        raise DomainError("hop SIRs must be positive")
    with np.errstate(invalid="ignore"):
        out = g_br * g_rm / (g_br + g_rm + 1.0)
    # one hop noiseless: the other hop alone limits the chain
    out = np.where(np.isinf(g_rm), g_br, np.where(np.isinf(g_br), g_rm, out))
    return out if out.ndim else float(out)


# -- sectoring --------------------------------------------------------------

def apply_sectoring(layout, sector):
    """Mask over the 18 direct-link interferers kept by an inner-region sector.

    The sector is centred on the bearing from the BS to the worst-case
    inner-region MS (along relay 1's axis). ``sector`` is the sector width in
    degrees; 0 or 360 disables sectoring.
    """
    width = float(sector)
    if width in (0.0, 360.0):
        return np.ones(18, dtype=bool)
    if not 0.0 < width < 360.0:
        raise DomainError(f"sector width must lie in (0, 360), got {sector}")
    pts = worst_case_interferer_positions(layout, Link.MS_BS)
    return sector_mask(pts, (0.0, 0.0), 0.0, width)


# -- Monte Carlo ------------------------------------------------------------

_STREAMS = {"inner": 0, "frn_bs": 1, "ms_frn": 2, "norelay": 3}


def stream(seed, *key):
    """Seed sequence for a named random stream, independent of worker count."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key + tuple(key))
    return np.random.SeedSequence(int(seed), spawn_key=tuple(key))


def _chunk_sir_db(args):
    ss, n, offsets_db, sigma, rho, masks = args
    rng = np.random.default_rng(ss)
    xi = sigma * correlated_normals(rng, n, offsets_db.size + 1, rho)
    power = 10.0 ** ((offsets_db[None, :] + xi[:, 1:]) / 10.0)
    out = np.empty((len(masks), n))
    for row, mask in enumerate(masks):
        out[row] = xi[:, 0] - 10.0 * np.log10(power[:, mask].sum(axis=1))
    return out


def link_sir_samples_db(desired, dist, gamma, sigma, rho, n_samples, seed,
                        masks=None, worker_count=1):
    """Shadowed SIR samples in dB, shape (len(masks), n_samples).

    Every mask is evaluated on the same draws. Samples are generated in fixed
    chunks whose seeds depend only on ``seed`` and the chunk index, so the
    result does not depend on ``worker_count``.
    """
    dist = np.asarray(dist, dtype=float)
    if masks is None:
        masks = [np.ones(dist.size, dtype=bool)]
    masks = [np.asarray(m, dtype=bool) for m in masks]
    # interferer medians relative to the desired median
    offsets = _medians_db(dist, gamma) - float(_medians_db(desired, gamma))
    base = seed if isinstance(seed, np.random.SeedSequence) else stream(seed)
    jobs = []
    for i, start in enumerate(range(0, n_samples, MC_CHUNK)):
        n = min(MC_CHUNK, n_samples - start)
        jobs.append((stream(base, i), n, offsets, sigma, rho, masks))
    if worker_count > 1:
        with ThreadPoolExecutor(max_workers=worker_count) as pool:
            parts = list(pool.map(_chunk_sir_db, jobs))
    else:
        parts = [_chunk_sir_db(job) for job in jobs]
    return np.concatenate(parts, axis=1)


def empirical_outage(samples_db, thresholds_db):
    """Fraction of samples strictly below each threshold."""
    ordered = np.sort(np.asarray(samples_db, dtype=float))
    counts = np.searchsorted(ordered, np.asarray(thresholds_db, dtype=float), side="left")
    return counts / ordered.size


@dataclass(frozen=True)
class OutageCurve:
    thresholds_db: np.ndarray
    p_out: np.ndarray
    scheme: Scheme
    sector: int
    source: str


def _hop_samples(layout, params, link, n_samples, seed, backend, worker_count):
    desired, dist = link_distances(layout, link, backend)
    return link_sir_samples_db(desired, dist, params.gamma(link), params.sigma(link),
                               params.rho, n_samples, stream(seed, _STREAMS[link.value]),
                               worker_count=worker_count)[0]


def relayed_outage_mc(layout, params, scheme, thresholds_db, n_samples, seed,
                      backend=Backend.CLOSED, df_mode=DfMode.PRODUCT, worker_count=1):
    """Outage of the two-hop relayed chain alone (outer-region users)."""
    scheme = Scheme(scheme)
    br = _hop_samples(layout, params, Link.FRN_BS, n_samples, seed, backend, worker_count)
    rm = _hop_samples(layout, params, Link.MS_FRN, n_samples, seed, backend, worker_count)
    if scheme is Scheme.AF:
        g = af_equivalent_sir(10.0 ** (br / 10.0), 10.0 ** (rm / 10.0))
        return empirical_outage(10.0 * np.log10(g), thresholds_db)
    if scheme is not Scheme.DF:
        raise DomainError(f"{scheme.value} is not a relaying scheme")
    if DfMode(df_mode) is DfMode.PRODUCT:
        return empirical_outage(br, thresholds_db) * empirical_outage(rm, thresholds_db)
    return empirical_outage(np.minimum(br, rm), thresholds_db)


def inner_outage_mc(layout, params, thresholds_db, n_samples, seed, sector=0,
                    backend=Backend.CLOSED, worker_count=1):
    desired, dist = link_distances(layout, Link.MS_BS, backend)
    mask = apply_sectoring(layout, sector)
    samples = link_sir_samples_db(desired, dist, params.gamma_b, params.sigma_d, params.rho,
                                  n_samples, stream(seed, _STREAMS["inner"]),
                                  masks=[mask], worker_count=worker_count)[0]
    return empirical_outage(samples, thresholds_db)


def no_relay_outage_mc(D, params, thresholds_db, n_samples, seed,
                       backend=Backend.CLOSED, worker_count=1):
    desired, dist = direct_link_distances(D, D, backend)
    samples = link_sir_samples_db(desired, dist, params.gamma_b, params.sigma_d, params.rho,
                                  n_samples, stream(seed, _STREAMS["norelay"]),
                                  worker_count=worker_count)[0]
    return empirical_outage(samples, thresholds_db)


def inner_fraction(layout):
    return layout.d_ratio ** 2


def monte_carlo_outage(layout, params, scheme, thresholds, n_samples, seed, sector=0,
                       backend=Backend.CLOSED, df_mode=DfMode.PRODUCT, worker_count=1,
                       cell_average=True):
    """Empirical outage curve with common random numbers across thresholds.

    For DF/AF with ``cell_average`` the curve is the area-weighted mix of the
    inner region's direct link (sectored by ``sector``) and the relayed
    outer region. NoRelay is the conventional cell's edge user, unsectored.
    Random streams are keyed by link, so calls that differ only in
    ``sector``, ``scheme`` or ``cell_average`` share their draws.
    """
    thr = np.asarray(thresholds, dtype=float)
    if np.any(np.diff(thr) < 0):
        raise DomainError("thresholds must be in ascending order")
    scheme = Scheme(scheme)
    if scheme is Scheme.NO_RELAY:
        p = no_relay_outage_mc(layout.D, params, thr, n_samples, seed, backend, worker_count)
    else:
        p = relayed_outage_mc(layout, params, scheme, thr, n_samples, seed,
                              backend, df_mode, worker_count)
        if cell_average:
            f = inner_fraction(layout)
            p_in = inner_outage_mc(layout, params, thr, n_samples, seed, sector,
                                   backend, worker_count)
            p = f * p_in + (1.0 - f) * p
    return OutageCurve(thr, np.clip(p, 0.0, 1.0), scheme, int(sector), "monte_carlo")


def outage_af(layout, params, threshold_db, n_samples, seed,
              backend=Backend.CLOSED, worker_count=1):
    """Amplify-and-forward outage of the relayed chain, by Monte Carlo."""
    if n_samples < 10_000:
        raise DomainError(f"need at least 10^4 samples, got {n_samples}")
    p = relayed_outage_mc(layout, params, Scheme.AF, [threshold_db], n_samples, seed,
                          backend, worker_count=worker_count)
    return float(p[0])


def analytic_outage(layout, params, scheme, thresholds, method=SumMethod.FW, sector=0,
                    backend=Backend.CLOSED, df_mode=DfMode.PRODUCT, cell_average=True):
    """Lognormal-approximation outage curve for NoRelay and DF."""
    thr = np.asarray(thresholds, dtype=float)
    scheme = Scheme(scheme)
    if scheme is Scheme.AF:
        raise DomainError("amplify-and-forward outage is evaluated by Monte Carlo only")
    if scheme is Scheme.NO_RELAY:
        p = outage_single_link(no_relay_model(layout.D, params, method, backend), thr)
    else:
        p_r = outage_single_link(
            shadowed_link_model(Link.FRN_BS, layout, params, method, backend), thr)
        p_m = outage_single_link(
            shadowed_link_model(Link.MS_FRN, layout, params, method, backend), thr)
        p = outage_df(p_r, p_m, df_mode)
        if cell_average:
            mask = apply_sectoring(layout, sector)
            inner = shadowed_link_model(Link.MS_BS, layout, params, method, backend, mask)
            f = inner_fraction(layout)
            p = f * outage_single_link(inner, thr) + (1.0 - f) * p
    return OutageCurve(thr, np.atleast_1d(p), scheme, int(sector), "analytic")
