from typing import Optional, Sequence

from django.core.exceptions import ValidationError

from integrability.errors import SingularWeightError
from integrability.tensor import MAX_SITES
from integrability.weights import POLE_TOLERANCE, Regime, RegimeFamily


def validate_regime_family(family: str):
    if family not in RegimeFamily.values:
        raise ValidationError(f"Unknown regime {family}. Use one of {', '.join(RegimeFamily.values)}")


def validate_anisotropy(family: str, eta: complex):
    if family not in RegimeFamily.values:
        return
    try:
        Regime(family, eta)
    except (ValueError, SingularWeightError):
        raise ValidationError(f"Anisotropy η={eta} gives φ(η) below {POLE_TOLERANCE} in the {family} regime")


def validate_site_count(site_count: int):
    if not 1 <= site_count <= MAX_SITES - 1:
        raise ValidationError(f"Lattice size L must lie in 1..{MAX_SITES - 1}, got {site_count}")


def validate_magnon_count(magnon_count: int, site_count: int):
    if magnon_count < 0:
        raise ValidationError(f"Number of roots M must be non-negative, got {magnon_count}")
    if magnon_count > site_count:
        raise ValidationError(f"Number of roots M={magnon_count} exceeds lattice size L={site_count}")


def validate_positive(value: float, name: str):
    if not value > 0:
        raise ValidationError(f"{name} must be positive, got {value}")


def validate_xi(xi: Optional[Sequence[complex]], site_count: int):
    if xi is not None and len(xi) != site_count:
        raise ValidationError(f"Explicit ξ list must have L={site_count} entries, got {len(xi)}")


def validate_permutation_cap(cap: int):
    if cap < 1:
        raise ValidationError(f"Permutation cap must be at least 1, got {cap}")
