import dataclasses
import json
from logging import getLogger
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from integrability.bethe import SolverSettings
from integrability.utils import ComplexCodec
from integrability.vertex_model import LatticeSpec, sample_lattice
from integrability.weights import Regime, RegimeFamily

from .validators import (validate_anisotropy,
                         validate_magnon_count,
                         validate_permutation_cap,
                         validate_positive,
                         validate_regime_family,
                         validate_site_count,
                         validate_xi)

logger = getLogger(__name__)

RANDOM_XI = "random"


@dataclasses.dataclass
class RunConfig:
    """One laboratory run. Every key of the JSON configuration file maps onto a field."""
    regime: str = RegimeFamily.rational
    eta: complex = 1
    L: int = 6
    M: int = 2
    xi: Optional[Tuple[complex, ...]] = None
    xi_spread: float = 2.0
    xi_center: complex = 0
    tolerance: float = dataclasses.field(default_factory=lambda: settings.LAB_TOLERANCE)
    seed: int = dataclasses.field(default_factory=lambda: settings.LAB_SEED)
    permutation_cap: int = dataclasses.field(default_factory=lambda: settings.LAB_PERMUTATION_CAP)
    output_dir: str = dataclasses.field(default_factory=lambda: settings.LAB_OUTPUT_DIR)
    solver_legs: int = dataclasses.field(default_factory=lambda: settings.LAB_SOLVER_LEGS)
    solver_steps: int = dataclasses.field(default_factory=lambda: settings.LAB_SOLVER_STEPS)
    solver_tolerance: float = dataclasses.field(default_factory=lambda: settings.LAB_SOLVER_TOLERANCE)
    spectral_samples: int = 3
    dwbc_size: int = 5
    dwbc_samples: int = 5

    @classmethod
    def from_document(cls, document: Dict[str, Any]) -> "RunConfig":
        known = {field.name for field in dataclasses.fields(cls)}
        unknown = sorted(set(document) - known)
        if unknown:
            raise ValidationError(f"Unknown configuration keys: {', '.join(unknown)}")
        values = dict(document)
        try:
            for key in ("eta", "xi_center"):
                if key in values:
                    values[key] = ComplexCodec.decode(values[key])
            if values.get("xi") == RANDOM_XI:
                values["xi"] = None
            elif values.get("xi") is not None:
                values["xi"] = ComplexCodec.decode_list(values["xi"])
        except (TypeError, ValueError) as e:
            raise ValidationError(f"Malformed configuration: {e}") from e
        return cls(**values)

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        try:
            document = json.loads(Path(path).read_text())
        except FileNotFoundError:
            raise ValidationError(f"Configuration file {path} does not exist") from None
        except json.JSONDecodeError as e:
            raise ValidationError(f"Configuration file {path} is not valid JSON: {e}") from e
        if not isinstance(document, dict):
            raise ValidationError(f"Configuration file {path} must hold a JSON object")
        logger.info(f"Loaded run configuration {path}")
        return cls.from_document(document)

    def full_clean(self):
        errors: Dict[str, ValidationError] = {}
        checks = {
            "regime": lambda: validate_regime_family(self.regime),
            "eta": lambda: validate_anisotropy(self.regime, self.eta),
            "L": lambda: validate_site_count(self.L),
            "M": lambda: validate_magnon_count(self.M, self.L),
            "xi": lambda: validate_xi(self.xi, self.L),
            "xi_spread": lambda: validate_positive(self.xi_spread, "ξ spread"),
            "tolerance": lambda: validate_positive(self.tolerance, "Tolerance"),
            "solver_tolerance": lambda: validate_positive(self.solver_tolerance, "Solver tolerance"),
            "solver_legs": lambda: validate_positive(self.solver_legs, "Solver legs"),
            "solver_steps": lambda: validate_positive(self.solver_steps, "Solver steps"),
            "permutation_cap": lambda: validate_permutation_cap(self.permutation_cap),
            "spectral_samples": lambda: validate_positive(self.spectral_samples, "Number of spectral samples"),
            "dwbc_size": lambda: validate_positive(self.dwbc_size, "Domain-wall size"),
            "dwbc_samples": lambda: validate_positive(self.dwbc_samples, "Number of domain-wall samples"),
        }
        for field, check in checks.items():
            try:
                check()
            except ValidationError as e:
                errors[field] = e
        if errors:
            raise ValidationError(errors)

    def build_regime(self) -> Regime:
        return Regime(self.regime, self.eta)

    def generator(self) -> np.random.Generator:
        """The single source of randomness of a run."""
        return np.random.default_rng(self.seed)

    def build_lattice(self, rng: np.random.Generator) -> LatticeSpec:
        if self.xi is not None:
            return LatticeSpec(self.L, self.xi)
        return sample_lattice(self.L, self.build_regime(), rng, spread=self.xi_spread, center=self.xi_center)

    def solver_settings(self) -> SolverSettings:
        return SolverSettings(legs=self.solver_legs, steps=self.solver_steps, tolerance=self.solver_tolerance)

    def to_document(self) -> Dict[str, Any]:
        document = dataclasses.asdict(self)
        document["regime"] = str(self.regime)
        document["eta"] = ComplexCodec.encode(self.eta)
        document["xi_center"] = ComplexCodec.encode(self.xi_center)
        document["xi"] = RANDOM_XI if self.xi is None else ComplexCodec.encode_list(self.xi)
        return document
