"""Deterministic random angle tuples for experiments and tests."""

from __future__ import annotations

import math

import numpy as np

from .core import TWO_PI, AngleTuple

DEFAULT_MARGIN = 0.05


def sample_angle_tuple(rng: np.random.Generator,
                       margin: float = DEFAULT_MARGIN) -> AngleTuple:
    """Draw a valid angle tuple away from the degenerate boundary.

    Four independent uniforms on (margin, pi - margin) are rescaled to sum
    2*pi; draws whose rescaled components leave the margin band are
    rejected and redrawn.
    """
    lo, hi = margin, math.pi - margin
    while True:
        raw = rng.uniform(lo, hi, 4)
        scaled = raw * (TWO_PI / raw.sum())
        if np.all((scaled > lo) & (scaled < hi)):
            return AngleTuple(*scaled)


def substream(seed: int, sample_id: int) -> np.random.Generator:
    """Per-sample generator; output is independent of execution order."""
    return np.random.default_rng((seed, sample_id))
