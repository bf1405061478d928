"""Explicit bounds guaranteeing primes between consecutive perfect k-th powers."""

from .constants import CATALOG, build_catalog, load_constants, zhat
from .coverage import chain_coverage, rect_region, sequence_gap_N, theorem_unconditional
from .engine import BoundConfig, FixedZ, PointwiseZhat, bound_breakdown, guarantees_prime
from .search import minimal_threshold, minimal_Z, optimize_c

__all__ = [
    "CATALOG", "build_catalog", "load_constants", "zhat",
    "chain_coverage", "rect_region", "sequence_gap_N", "theorem_unconditional",
    "BoundConfig", "FixedZ", "PointwiseZhat", "bound_breakdown", "guarantees_prime",
    "minimal_threshold", "minimal_Z", "optimize_c",
]

__version__ = "0.1.0"
