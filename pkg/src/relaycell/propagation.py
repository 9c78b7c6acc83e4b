"""Path loss and correlated lognormal shadowing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import Link

SPEED_OF_LIGHT = 299_792_458.0  # m/s


@dataclass(frozen=True)
class PropagationParams:
    f: float = 5e9
    d0: float = 1.0
    gamma_b: float = 3.5
    gamma_r: float = 2.5
    gamma_m: float = 3.5
    sigma_d: float = 8.0
    sigma_r: float = 5.0
    sigma_m: float = 8.0
    rho: float = 0.5

    def __post_init__(self):
        if not self.f > 0:
            raise DomainError("carrier frequency f must be positive")
        if not self.d0 > 0:
            raise DomainError("reference distance d0 must be positive")
        for name in ("gamma_b", "gamma_r", "gamma_m"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        for name in ("sigma_d", "sigma_r", "sigma_m"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be non-negative")
        if not 0.0 <= self.rho <= 1.0:
            raise DomainError(f"rho must lie in [0, 1], got {self.rho}")

    def gamma(self, link):
        return {Link.MS_BS: self.gamma_b, Link.FRN_BS: self.gamma_r,
                Link.MS_FRN: self.gamma_m}[Link(link)]

    def sigma(self, link):
        return {Link.MS_BS: self.sigma_d, Link.FRN_BS: self.sigma_r,
                Link.MS_FRN: self.sigma_m}[Link(link)]


def path_loss(dist, gamma, params):
    """Linear path loss (4*pi*f/c)^2 * (dist/d0)^gamma with unit antenna gains."""
    dist = np.asarray(dist, dtype=float)
    if np.any(dist <= 0):
        raise DomainError("distance must be positive")
    k = (4.0 * np.pi * params.f / SPEED_OF_LIGHT) ** 2
    out = k * (dist / params.d0) ** gamma
    return out if out.ndim else float(out)


def path_loss_db(dist, gamma, params):
    return 10.0 * np.log10(path_loss(dist, gamma, params))


def _check_shadowing(sigma, rho):
    if not sigma >= 0:
        raise DomainError(f"sigma must be non-negative, got {sigma}")
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [0, 1], got {rho}")


def correlated_normals(rng, size, k, rho):
    """Standard normals of shape ``size + (k,)``, equicorrelated with ``rho``.

    Built from a shared component sqrt(rho)*Z0 plus independent
    sqrt(1-rho)*Zi.
    """
    size = (size,) if isinstance(size, (int, np.integer)) else tuple(size)
    common = rng.standard_normal(size + (1,))
    own = rng.standard_normal(size + (k,))
    return np.sqrt(rho) * common + np.sqrt(1.0 - rho) * own


def sample_shadowing(n, sigma, rho, seed):
    """One joint draw of ``n`` equicorrelated shadowing terms in dB."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    _check_shadowing(sigma, rho)
    rng = np.random.default_rng(seed)
    return sigma * correlated_normals(rng, (), n, rho)
