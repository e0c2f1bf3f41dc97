"""Qualitative likelihood x severity risk matrix over 1-5 ordinals.

The numeric scales, the clamp formula, the rounded mean, and the band
thresholds are configuration choices of this toolkit, fixed so results are
deterministic; reports label matrix outputs as qualitative and
configuration-defined.
"""
from __future__ import annotations

from dataclasses import dataclass

BANDS = (
    (4, "Low"),        # magnitude 1-4
    (9, "Moderate"),   # 5-9
    (14, "High"),      # 10-14
    (25, "Critical"),  # 15-25
)


class RangeError(ValueError):
    pass


def _check(name: str, value: int) -> None:
    if not isinstance(value, int) or not 1 <= value <= 5:
        raise RangeError(f"{name} must be an integer in 1..5, got {value!r}")


@dataclass(frozen=True)
class MagnitudeResult:
    likelihood: int
    severity: int
    magnitude: int
    band: str


def likelihood(hazard: int, response: int) -> int:
    """Hazard drivers push likelihood up, response drivers pull it down."""
    _check("hazard", hazard)
    _check("response", response)
    return max(1, min(5, hazard - response + 3))


def severity(intensity: int, sensitivity: int, vulnerability: int) -> int:
    """Round-half-up mean of intensity, asset sensitivity, and vulnerability."""
    for name, value in (("intensity", intensity), ("sensitivity", sensitivity),
                        ("vulnerability", vulnerability)):
        _check(name, value)
    total = intensity + sensitivity + vulnerability
    return (2 * total + 3) // 6  # floor((sum/3) + 1/2)


def band_for(magnitude: int) -> str:
    for upper, name in BANDS:
        if magnitude <= upper:
            return name
    raise RangeError(f"magnitude {magnitude} outside 1..25")


def magnitude(likelihood_value: int, severity_value: int) -> MagnitudeResult:
    _check("likelihood", likelihood_value)
    _check("severity", severity_value)
    product = likelihood_value * severity_value
    return MagnitudeResult(likelihood_value, severity_value, product,
                           band_for(product))


def assess_annotation(hazard: int, response: int, intensity: int,
                      sensitivity: int, vulnerability: int) -> MagnitudeResult:
    """Full matrix evaluation from the five 1-5 determinant ordinals."""
    return magnitude(likelihood(hazard, response),
                     severity(intensity, sensitivity, vulnerability))
