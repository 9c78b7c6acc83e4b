"""Hexagonal cell layout with a ring of six fixed relays.

Cells have circumradius ``D`` with vertices at bearings 0, 60, ..., 300
degrees, so the six neighbouring cells sit at distance sqrt(3)*D on bearings
30, 90, ..., 330 degrees. Relay k sits on the radial axis toward vertex k,
at distance ``dr`` from the base station.

Interference is taken from the two tiers of co-channel cells around the home
cell (18 cells, frequency reuse 1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

SQRT3 = np.sqrt(3.0)
N_INTERFERERS = 18


class Link(str, enum.Enum):
    MS_BS = "ms_bs"
    FRN_BS = "frn_bs"
    MS_FRN = "ms_frn"


def _ring(radius, start_deg):
    ang = np.deg2rad(start_deg + 60.0 * np.arange(6))
    return radius * np.column_stack([np.cos(ang), np.sin(ang)])


def tier_centers(D):
    """Centres of the 18 co-channel cells.

    Rows 0-5 are the first tier (distance sqrt(3)*D), rows 6-11 the
    second-tier cells at 3*D, rows 12-17 the second-tier cells at 2*sqrt(3)*D.
    """
    return np.vstack([
        _ring(SQRT3 * D, 30.0),
        _ring(3.0 * D, 0.0),
        _ring(2.0 * SQRT3 * D, 30.0),
    ])


def relay_positions(dr):
    return _ring(dr, 0.0)


@dataclass(frozen=True)
class RegionId:
    """Routing region of a point: the inner region or relay k's outer region."""

    kind: str
    k: int | None = None

    @classmethod
    def inner(cls):
        return cls("inner")

    @classmethod
    def outer(cls, k):
        if not 1 <= k <= 6:
            raise DomainError(f"relay index must be in 1..6, got {k}")
        return cls("outer", k)

    @property
    def is_inner(self):
        return self.kind == "inner"

    def __str__(self):
        return "Inner" if self.is_inner else f"Outer({self.k})"


@dataclass(frozen=True)
class CellLayout:
    D: float
    dr: float
    frn_positions: np.ndarray = field(repr=False, compare=False)
    tier_centers: np.ndarray = field(repr=False, compare=False)

    @property
    def d(self):
        """Inner-region radius; the BS/relay bisector sits halfway out."""
        return self.dr / 2.0

    @property
    def dm(self):
        """Furthest MS-to-relay distance: relay to the vertex on its axis."""
        return self.D - self.dr

    @property
    def dr_ratio(self):
        return self.dr / self.D

    @property
    def d_ratio(self):
        return self.d / self.D

    @property
    def dm_ratio(self):
        return self.dm / self.D

    def receiver(self, link):
        """Position of the receiving node for ``link`` in the home cell."""
        if Link(link) is Link.MS_FRN:
            return self.frn_positions[0].copy()
        return np.zeros(2)

    def desired_distance(self, link):
        link = Link(link)
        if link is Link.MS_BS:
            return self.d
        if link is Link.FRN_BS:
            return self.dr
        return self.dm


def build_layout(D, dr_ratio):
    if not D > 0:
        raise DomainError(f"cell radius D must be positive, got {D}")
    if not 0.0 < dr_ratio < 1.0:
        raise DomainError(f"dr_ratio must lie in (0, 1), got {dr_ratio}")
    dr = dr_ratio * D
    return CellLayout(
        D=float(D),
        dr=float(dr),
        frn_positions=relay_positions(dr),
        tier_centers=tier_centers(D),
    )


def hexagon_area(D):
    return 1.5 * SQRT3 * D * D


def in_hexagon(points, D, tol=1e-9):
    """Mask of points inside the home-cell hexagon (boundary included)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    normals = _ring(1.0, 30.0)
    apothem = 0.5 * SQRT3 * D
    return np.all(pts @ normals.T <= apothem * (1.0 + tol), axis=1)


def classify_region(point, layout):
    p = np.asarray(point, dtype=float)
    if not in_hexagon(p, layout.D)[0]:
        raise DomainError(f"point {tuple(p)} lies outside the cell hexagon")
    to_bs = np.hypot(*p)
    to_frn = np.hypot(*(layout.frn_positions - p).T)
    k = int(np.argmin(to_frn))
    # ties go to the direct link
    if to_bs <= to_frn[k] * (1.0 + 1e-12):
        return RegionId.inner()
    return RegionId.outer(k + 1)


def classify_points(points, layout):
    """Vectorised routing: 0 for the inner region, k in 1..6 for relay k."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    to_bs = np.hypot(pts[:, 0], pts[:, 1])
    diff = pts[:, None, :] - layout.frn_positions[None, :, :]
    to_frn = np.hypot(diff[..., 0], diff[..., 1])
    k = np.argmin(to_frn, axis=1)
    nearest = to_frn[np.arange(len(pts)), k]
    return np.where(to_bs <= nearest * (1.0 + 1e-12), 0, k + 1)


def squared_ratio_areas(D, d_ratio):
    """(A1, A2) under the area model (d/D)^2 : 1 - (d/D)^2 for any 0 <= d/D <= 1."""
    if not 0.0 <= d_ratio <= 1.0:
        raise DomainError(f"d/D must lie in [0, 1], got {d_ratio}")
    cell = hexagon_area(D)
    a1 = cell * d_ratio ** 2
    return a1, cell - a1


def region_areas(layout):
    return squared_ratio_areas(layout.D, layout.d_ratio)


def area_ratio(layout):
    frac = layout.d_ratio ** 2
    return frac / (1.0 - frac)


def _displace_toward(points, target, dist):
    delta = np.asarray(target, dtype=float) - points
    norm = np.hypot(delta[:, 0], delta[:, 1])[:, None]
    return points + dist * delta / norm


def interferer_positions(D, dr, link):
    """Worst-case positions of the 18 co-channel interferers.

    Unlike :func:`worst_case_interferer_positions` this accepts the degenerate
    ``dr = 0`` so limit cases can be inspected.

    MS_BS: each interfering cell's inner-region MS closest to the home BS.
    FRN_BS: relay 1 of every interfering cell (same orientation everywhere).
    MS_FRN: the MS in each interfering relay-1 region closest to home relay 1.
    """
    if not D > 0 or not 0.0 <= dr < D:
        raise DomainError(f"need D > 0 and 0 <= dr < D, got D={D}, dr={dr}")
    centers = tier_centers(D)
    frn1 = np.array([dr, 0.0])
    link = Link(link)
    if link is Link.MS_BS:
        return _displace_toward(centers, np.zeros(2), dr / 2.0)
    if link is Link.FRN_BS:
        return centers + frn1
    return _displace_toward(centers + frn1, frn1, D - dr)


def worst_case_interferer_positions(layout, link):
    return interferer_positions(layout.D, layout.dr, link)


def interferer_distances(layout, link):
    pts = worst_case_interferer_positions(layout, link)
    rel = pts - layout.receiver(link)
    return np.hypot(rel[:, 0], rel[:, 1])


def direct_link_interferer_positions(D, d):
    """MS-BS interferers when the inner region has radius ``d`` (0 <= d <= D).

    Used for the conventional cell without relays, where the direct link
    reaches the cell edge (d = D).
    """
    if not D > 0 or not 0.0 <= d <= D:
        raise DomainError(f"need D > 0 and 0 <= d <= D, got D={D}, d={d}")
    return _displace_toward(tier_centers(D), np.zeros(2), d)


def bearings_deg(points, origin=(0.0, 0.0)):
    rel = np.atleast_2d(points) - np.asarray(origin, dtype=float)
    return np.rad2deg(np.arctan2(rel[:, 1], rel[:, 0]))


def sector_mask(points, origin, axis_deg, width_deg, tol_deg=1e-9):
    """Points whose bearing from ``origin`` lies within the sector.

    The sector is centred on ``axis_deg``; its edges are inclusive.
    """
    off = (bearings_deg(points, origin) - axis_deg + 180.0) % 360.0 - 180.0
    return np.abs(off) <= 0.5 * width_deg + tol_deg
