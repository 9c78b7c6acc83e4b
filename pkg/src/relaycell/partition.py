"""Orthogonal split of the uplink band among direct, relay-BS and MS-relay links.

The three bands solve

    w1 + w2 + w3 = W
    w2 * log2(1 + I_RM) = w3 * log2(1 + I_BR)            (hop rates match)
    w1 * log2(1 + I_BM) / (w2 * log2(1 + I_RM)) = A1/A2    (rates follow area)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class BandPartition:
    w1: float
    w2: float
    w3: float
    r1: float
    r_chain: float
    delta: float

    @property
    def total(self):
        return self.w1 + self.w2 + self.w3


def _spectral_efficiencies(sirs):
    vals = (sirs.i_bm, sirs.i_rm, sirs.i_br)
    if not all(v > 0 for v in vals):
        raise DomainError(f"all SIRs must be positive, got {vals}")
    return tuple(float(np.log2(1.0 + v)) for v in vals)


def partition_bandwidth(W, sirs, area_ratio, omit_area_factor=False):
    """Solve the three-band partition.

    ``area_ratio`` is A1/A2. With ``omit_area_factor`` the direct band drops
    the area-ratio factor and the bands no longer sum to ``W``; kept only for
    auditing.
    """
    if not W > 0:
        raise DomainError(f"bandwidth W must be positive, got {W}")
    if not area_ratio >= 0:
        raise DomainError(f"area ratio must be non-negative, got {area_ratio}")
    l_bm, l_rm, l_br = _spectral_efficiencies(sirs)
    delta = area_ratio * l_rm / l_bm + l_rm / l_br + 1.0
    w2 = W / delta
    w3 = (l_rm / l_br) * w2
    w1 = (l_rm / l_bm) * w2
    if not omit_area_factor:
        w1 *= area_ratio
    return BandPartition(w1=w1, w2=w2, w3=w3, r1=w1 * l_bm, r_chain=w2 * l_rm, delta=delta)


def link_rates(partition, sirs):
    """(R1, R2, R3) in bit/s; the two hops of the relayed chain carry equal rate."""
    l_bm, _, _ = _spectral_efficiencies(sirs)
    return partition.w1 * l_bm, partition.r_chain, partition.r_chain
