"""Relay placement, band partitioning and shadowed outage for relay-enhanced
OFDMA hexagonal cells."""

__version__ = "0.1.0"

from .config import ScenarioConfig, load_config, parse_config
from .errors import ConfigError, DomainError
from .geometry import CellLayout, Link, RegionId, build_layout, classify_region, region_areas
from .partition import BandPartition, link_rates, partition_bandwidth
from .placement import PlacementResult, optimize_placement, user_density
from .propagation import PropagationParams, path_loss, sample_shadowing
from .sir import Backend, WorstCaseSir, worst_case_sir

__all__ = [
    "Backend", "BandPartition", "CellLayout", "ConfigError", "DomainError", "Link",
    "PlacementResult", "PropagationParams", "RegionId", "ScenarioConfig", "WorstCaseSir",
    "build_layout", "classify_region", "link_rates", "load_config", "optimize_placement",
    "parse_config", "partition_bandwidth", "path_loss", "region_areas", "sample_shadowing",
    "user_density", "worst_case_sir",
]
