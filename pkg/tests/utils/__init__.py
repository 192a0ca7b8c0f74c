"""
Test utilities module.
"""

from .forms import (
    flat_algebra,
    forms,
    heisenberg,
    hyperbolic_plane,
    is_exactly_zero,
    nilpotent_seven,
    round_three_sphere,
    vanishes,
)

__all__ = [
    "flat_algebra",
    "forms",
    "heisenberg",
    "hyperbolic_plane",
    "is_exactly_zero",
    "nilpotent_seven",
    "round_three_sphere",
    "vanishes",
]
