"""Named filter configurations for the four reference energy dynamics.

Versioned constants, not tunables:

- "lfd": unit low-pass gain plus a high-pass gain small enough that the
  combined response decreases on all of [0, 2], for every graph.
- "hfd_inc_osq": high-pass gain five times the low-pass gain; the combined
  response rises everywhere and exceeds the spectrum, so the sensitivity
  budget grows (more squashing).
- "dhfd_inc_osq": the same pair with the kernel block zeroed (delayed onset).
- "dhfd_dec_osq": kernel block zeroed and the response held at or below
  (1 - margin) * lambda, the delayed-HFD regime that leaves the sensitivity
  budget alone.

unit_gain rescales a preset's gains so its peak combined response is 1;
simulation verdicts are scale-invariant, while deep training is not.
"""

from __future__ import annotations

import numpy as np

from .dynamics import delayed_hfd_construct
from .filters import FilterSpec, combined_response, heat_high, heat_low
from .spectral import SpectralDecomposition, zero_multiplicity

__all__ = ["PRESET_NAMES", "preset_filter_pair", "LFD_HIGH_GAIN",
           "HFD_HIGH_OVER_LOW", "DHFD_MARGIN"]

PRESET_NAMES = ("lfd", "hfd_inc_osq", "dhfd_inc_osq", "dhfd_dec_osq")

# Largest constant keeping exp(-x) + g * exp(x) decreasing on [0, 2] is
# exp(-4); half that leaves headroom.
LFD_HIGH_GAIN = 0.5 * float(np.exp(-4.0))
HFD_HIGH_OVER_LOW = 5.0
DHFD_MARGIN = 0.05


def preset_filter_pair(name: str, decomp: SpectralDecomposition,
                       *, unit_gain: bool = False) -> tuple[FilterSpec, FilterSpec]:
    """Build the named preset's (low, high) filter specs for a decomposition."""
    n = decomp.n
    k = zero_multiplicity(decomp)
    if name == "lfd":
        theta1 = np.ones(n)
        theta2 = np.full(n, LFD_HIGH_GAIN)
    elif name == "hfd_inc_osq":
        theta1 = np.ones(n)
        theta2 = np.full(n, HFD_HIGH_OVER_LOW)
    elif name == "dhfd_inc_osq":
        theta1 = np.ones(n)
        theta2 = np.full(n, HFD_HIGH_OVER_LOW)
        theta1[:k] = 0.0
        theta2[:k] = 0.0
    elif name == "dhfd_dec_osq":
        theta1, theta2 = delayed_hfd_construct(decomp, k, DHFD_MARGIN)
    else:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    pair = (FilterSpec(heat_low(), theta=theta1), FilterSpec(heat_high(), theta=theta2))
    if unit_gain:
        peak = float(np.abs(combined_response(pair[0], pair[1], decomp).values).max())
        if peak > 1.0:
            pair = (FilterSpec(heat_low(), theta=theta1 / peak),
                    FilterSpec(heat_high(), theta=theta2 / peak))
    return pair
