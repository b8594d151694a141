"""p-adic Schottky groups: Bruhat-Tits trees, harmonic measures, theta
periods, and the Abel-Jacobi map into the Jacobian torus."""

from ._padicjac import (
    Group,
    MathError,
    UsageError,
    apartment_pairing,
    cross_ratio_valuation,
    run,
)

__all__ = [
    "Group",
    "MathError",
    "UsageError",
    "apartment_pairing",
    "cross_ratio_valuation",
    "run",
]
