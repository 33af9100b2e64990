"""Unit conventions and the single angular-frequency conversion point.

Internally everything runs in angular frequencies (rad/us) and times in
microseconds.  Public interfaces (CLI, config files, CSV output, the
``from_mhz``-style constructors) use ordinary frequencies in MHz and
durations in ns.  All 2*pi factors live here so the conversion happens
exactly once at the boundary.
"""

from __future__ import annotations

import math

TWO_PI = 2.0 * math.pi


def mhz_to_angular(f_mhz: float) -> float:
    """Ordinary frequency in MHz -> angular frequency in rad/us."""
    return TWO_PI * f_mhz


def angular_to_mhz(omega: float) -> float:
    """Angular frequency in rad/us -> ordinary frequency in MHz."""
    return omega / TWO_PI


def ns_to_us(t_ns: float) -> float:
    return 1e-3 * t_ns


def us_to_ns(t_us: float) -> float:
    return 1e3 * t_us
