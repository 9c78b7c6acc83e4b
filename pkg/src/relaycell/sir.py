"""Worst-case signal-to-interference ratios for the three link classes.

Two backends are provided. ``closed`` evaluates the closed forms
for the two-tier worst case; ``geometric`` sums the 18 interferer powers at
the coordinates produced by :mod:`relaycell.geometry`. The closed forms are
18-term distance-power sums, so each is also exposed as an explicit set of
interferer distances aligned with :func:`relaycell.geometry.tier_centers`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import Link, direct_link_interferer_positions, interferer_distances
from .propagation import path_loss

HALF_SQRT3 = 0.5 * np.sqrt(3.0)


class Backend(str, enum.Enum):
    CLOSED = "closed"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class WorstCaseSir:
    i_bm: float
    i_br: float
    i_rm: float
    backend: Backend = Backend.CLOSED

    def as_db(self):
        return tuple(10.0 * np.log10(v) for v in (self.i_bm, self.i_br, self.i_rm))

    def for_link(self, link):
        return {Link.MS_BS: self.i_bm, Link.FRN_BS: self.i_br,
                Link.MS_FRN: self.i_rm}[Link(link)]


def _check_ratio(name, value):
    if not 0.0 < value < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {value}")


def sir_closed_form_bm(d_ratio, gamma_b):
    """Direct MS-BS link, inner-region radius ``d_ratio`` = d/D."""
    _check_ratio("d_ratio", d_ratio)
    x, g = d_ratio, gamma_b
    denom = 6.0 * ((HALF_SQRT3 * (2.0 - x)) ** -g
                   + (HALF_SQRT3 * (4.0 - x)) ** -g
                   + (HALF_SQRT3 * (3.0 - x)) ** -g)
    return x ** -g / denom


def _chi_bases(D, dr):
    # (i, j) pairs of the chi terms, each contributing a "+dr^2" and a "-dr^2" base
    return {(i, j): (i * D * D + j * dr * D + dr * dr, i * D * D + j * dr * D - dr * dr)
            for i, j in ((3, 3), (12, 6), (9, 3))}


def sir_closed_form_br(dr, D, gamma_r):
    """Relay-to-BS link with relays at distance ``dr`` in a cell of radius ``D``.

    Every term is read as a positive distance raised to -gamma_r; a
    non-positive squared-distance base raises :class:`DomainError`.
    """
    if not D > 0 or not 0.0 < dr < D:
        raise DomainError(f"need 0 < dr < D, got dr={dr}, D={D}")
    g = gamma_r
    total = (3 * D + dr) ** -g + (3 * D - dr) ** -g + 2 * (3 * D * D + dr * dr) ** (-g / 2)
    chi_sum = 0.0
    for (i, j), (plus, minus) in _chi_bases(D, dr).items():
        for label, base in (("+", plus), ("-", minus)):
            if base <= 0:
                raise DomainError(f"chi_{i},{j} base ({label}dr^2) is non-positive: {base}")
        chi_sum += plus ** (-g / 2) + minus ** (-g / 2)
    total += 2 * (chi_sum + (12 * D * D + dr * dr) ** (-g / 2))
    return dr ** -g / total


def sir_closed_form_rm(dm_ratio, d_ratio, gamma_m):
    """MS-relay link; the bracketed interferer terms use d/D, the signal d_m/D."""
    _check_ratio("dm_ratio", dm_ratio)
    _check_ratio("d_ratio", d_ratio)
    x, g = d_ratio, gamma_m
    denom = 6.0 * ((HALF_SQRT3 * (1.0 + x)) ** -g
                   + (HALF_SQRT3 * (3.0 + x)) ** -g
                   + (HALF_SQRT3 * (2.0 + x)) ** -g)
    return dm_ratio ** -g / denom


def closed_form_distances(layout, link):
    """Interferer distances implied by the closed forms, in metres.

    Rows follow the tier-centre order: first tier, 3D ring, 2*sqrt(3)*D ring,
    each ring at bearings start + 60k. The three distinct closed-form terms of
    the MS links are assigned to the rings in increasing order.
    """
    D, dr, x = layout.D, layout.dr, layout.d_ratio
    link = Link(link)
    if link is Link.MS_BS:
        return direct_link_distances(D, layout.d, Backend.CLOSED)[1]
    if link is Link.MS_FRN:
        rings = [HALF_SQRT3 * (1 + x), HALF_SQRT3 * (2 + x), HALF_SQRT3 * (3 + x)]
        return D * np.repeat(rings, 6)
    chi = _chi_bases(D, dr)
    p33, m33 = chi[(3, 3)]
    p93, m93 = chi[(9, 3)]
    p126, m126 = chi[(12, 6)]
    side = 3 * D * D + dr * dr
    top = 12 * D * D + dr * dr
    # bearings 30, 90, 150, 210, 270, 330 / 0, 60, ..., 300 / 30, ..., 330;
    # cells left of the BS (negative x) take the "-dr^2" chi base
    sq = np.array([
        p33, side, m33, m33, side, p33,
        (3 * D + dr) ** 2, p93, m93, (3 * D - dr) ** 2, m93, p93,
        p126, top, m126, m126, top, p126,
    ])
    if np.any(sq <= 0):
        raise DomainError("non-positive squared distance in closed-form relay terms")
    return np.sqrt(sq)


def link_distances(layout, link, backend=Backend.CLOSED):
    """(desired distance, 18 interferer distances) for ``link``."""
    desired = layout.desired_distance(link)
    if Backend(backend) is Backend.CLOSED:
        return desired, closed_form_distances(layout, link)
    return desired, interferer_distances(layout, link)


def direct_link_distances(D, d, backend=Backend.CLOSED):
    """MS-BS (desired, interferer) distances for an inner radius ``d`` <= D.

    Unlike :func:`link_distances` this admits d = D, the edge user of a
    conventional cell without relays.
    """
    if not D > 0 or not 0.0 < d <= D:
        raise DomainError(f"need 0 < d <= D, got d={d}, D={D}")
    if Backend(backend) is Backend.CLOSED:
        x = d / D
        rings = [HALF_SQRT3 * (2 - x), HALF_SQRT3 * (3 - x), HALF_SQRT3 * (4 - x)]
        return d, D * np.repeat(rings, 6)
    pts = direct_link_interferer_positions(D, d)
    return d, np.hypot(pts[:, 0], pts[:, 1])


def sir_from_distances(desired, interferers, gamma, mask=None):
    """desired^-gamma / sum_i dist_i^-gamma over the (optionally masked) set."""
    dist = np.asarray(interferers, dtype=float)
    if mask is not None:
        dist = dist[np.asarray(mask, dtype=bool)]
    if dist.size == 0:
        return np.inf
    return desired ** -gamma / np.sum(dist ** -gamma)


def sir_geometric(layout, link, gamma):
    desired, dist = link_distances(layout, link, Backend.GEOMETRIC)
    return sir_from_distances(desired, dist, gamma)


@dataclass(frozen=True)
class NoiseFloor:
    """Additive thermal noise for SINR; transmit powers per link class in dBm."""

    noise_dbm: float = -100.0
    p_ms_dbm: float = 2.0
    p_frn_dbm: float = 20.0

    def tx_dbm(self, link):
        return self.p_frn_dbm if Link(link) is Link.FRN_BS else self.p_ms_dbm


def _sinr(desired, dist, link, params, noise):
    gamma = params.gamma(link)
    tx_mw = 10.0 ** (noise.tx_dbm(link) / 10.0)
    signal = tx_mw / path_loss(desired, gamma, params)
    interference = np.sum(tx_mw / path_loss(dist, gamma, params))
    return signal / (interference + 10.0 ** (noise.noise_dbm / 10.0))


def worst_case_sir(layout, params, backend=Backend.CLOSED, noise=None):
    """Worst-case SIR triple; with ``noise`` set the ratios become SINRs."""
    backend = Backend(backend)
    if noise is None and backend is Backend.CLOSED:
        return WorstCaseSir(
            i_bm=sir_closed_form_bm(layout.d_ratio, params.gamma_b),
            i_br=sir_closed_form_br(layout.dr, layout.D, params.gamma_r),
            i_rm=sir_closed_form_rm(layout.dm_ratio, layout.d_ratio, params.gamma_m),
            backend=backend,
        )
    values = []
    for link in (Link.MS_BS, Link.FRN_BS, Link.MS_FRN):
        desired, dist = link_distances(layout, link, backend)
        if noise is None:
            values.append(sir_from_distances(desired, dist, params.gamma(link)))
        else:
            values.append(_sinr(desired, dist, link, params, noise))
    return WorstCaseSir(*map(float, values), backend=backend)
