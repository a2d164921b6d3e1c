import abc
import cmath
import dataclasses

import numpy as np
from django.db import models

from .errors import SingularWeightError

# |φ| below this is treated as an exact zero of a denominator
POLE_TOLERANCE = 1e-12


class RegimeFamily(models.TextChoices):
    rational = ("rational", "Rational, φ(t) = t")
    trigonometric = ("trigonometric", "Trigonometric, φ(t) = sin t")


class AbstractWeightFamily(abc.ABC):

    @staticmethod
    @abc.abstractmethod
    def phi(t: complex) -> complex:
        raise NotImplementedError()

    @staticmethod
    @abc.abstractmethod
    def phi_log_derivative(t: complex) -> complex:
        """φ'(t)/φ(t)."""
        raise NotImplementedError()


class RationalWeightFamily(AbstractWeightFamily):

    @staticmethod
    def phi(t: complex) -> complex:
        return complex(t)

    @staticmethod
    def phi_log_derivative(t: complex) -> complex:
        return 1 / complex(t)


class TrigonometricWeightFamily(AbstractWeightFamily):

    @staticmethod
    def phi(t: complex) -> complex:
        return cmath.sin(t)

    @staticmethod
    def phi_log_derivative(t: complex) -> complex:
        return cmath.cos(t) / cmath.sin(t)


@dataclasses.dataclass(frozen=True)
class Regime:
    family: str
    eta: complex

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        if self.family not in RegimeFamily.values:
            raise ValueError(f"Unknown regime {self.family}. Use one of {', '.join(RegimeFamily.values)}")
        if abs(self.phi(self.eta)) < POLE_TOLERANCE:
            raise ValueError(f"Anisotropy η={self.eta} gives φ(η)=0 in the {self.family} regime")

    @property
    def weights(self) -> AbstractWeightFamily:
        match self.family:
            case RegimeFamily.rational:
                return RationalWeightFamily()
            case RegimeFamily.trigonometric:
                return TrigonometricWeightFamily()
            case _:
                raise NotImplementedError(f"Regime {self.family} not implemented")

    def phi(self, t: complex) -> complex:
        return self.weights.phi(t)

    def __str__(self):
        return f"{self.family} (η={self.eta})"


def _denominator(t: complex, regime: Regime, what: str) -> complex:
    value = regime.phi(t)
    if abs(value) < POLE_TOLERANCE:
        raise SingularWeightError(f"{what}: φ({t}) vanishes in the {regime.family} regime")
    return value


def c_tilde(t: complex, regime: Regime) -> complex:
    return regime.phi(t) / _denominator(t + regime.eta, regime, f"c̃({t})")


def b_tilde(t: complex, regime: Regime) -> complex:
    return regime.phi(regime.eta) / _denominator(t + regime.eta, regime, f"b̃({t})")


def c_tilde_inverse(t: complex, regime: Regime) -> complex:
    """1/c̃(t), finite on the poles of c̃ itself."""
    return regime.phi(t + regime.eta) / _denominator(t, regime, f"c̃⁻¹({t})")


def c_tilde_log_derivative(t: complex, regime: Regime) -> complex:
    """d/dt log c̃(t)."""
    family = regime.weights
    return family.phi_log_derivative(t) - family.phi_log_derivative(t + regime.eta)


def s_matrix(t1: complex, t2: complex, regime: Regime) -> np.ndarray:
    """S(t1, t2) normalized to a = 1, basis (|00⟩, |01⟩, |10⟩, |11⟩)."""
    t = t1 - t2
    c = c_tilde(t, regime)
    b = b_tilde(t, regime)
    return np.array([[1, 0, 0, 0],
                     [0, c, b, 0],
                     [0, b, c, 0],
                     [0, 0, 0, 1]], dtype=complex)
