"""
Bethe ansatz equations, a desk-scale root solver and eigenvector verification.

The solver runs three homotopies:
  1. free magnons on the homogeneous chain (interaction switched off),
  2. interaction switched on, s: 0 -> 1, on the homogeneous chain,
  3. inhomogeneities deformed from their mean to the target values.
Each leg is solved by damped Newton iteration on the logarithm of the
equations, with branches tracked by continuity along the path; a leg that
fails to converge is retried with half the step.
"""
import abc
import cmath
import dataclasses
import math
from logging import getLogger
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (DegenerateParametersError,
                     DegenerateRootsError,
                     RootCollisionError,
                     SingularWeightError,
                     SolverFailureError)
from .utils import ComplexCodec
from .vertex_model import LatticeSpec, apply_b_operators, eigenvalue_lambda, transfer, vacuum_eigenvalue
from .weights import Regime, RegimeFamily, c_tilde, c_tilde_inverse, c_tilde_log_derivative

logger = getLogger(__name__)

# roots closer than this (in |φ(q_i − q_j)|) are treated as coinciding
DISTINCTNESS_TOLERANCE = 1e-8
NEWTON_TOLERANCE = 1e-14
LEG_TOLERANCE = 1e-10
MIN_DAMPING = 2 ** -20
STATE_NORM_TOLERANCE = 1e-12
FALLBACK_ATTEMPTS = 5
# a homotopy leg is halved at most this many times before the attempt is abandoned
MAX_REFINEMENTS = 6


@dataclasses.dataclass(frozen=True)
class SolverSettings:
    legs: int = 20
    steps: int = 200
    tolerance: float = 1e-12


@dataclasses.dataclass(frozen=True)
class BetheRoots:
    q: Tuple[complex, ...]
    residual: float
    lattice: LatticeSpec
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(complex(root) for root in self.q))

    @property
    def M(self) -> int:
        return len(self.q)

    @property
    def L(self) -> int:
        return self.lattice.site_count

    def matches(self, lattice: LatticeSpec, regime: Regime, tolerance: float = 1e-12) -> bool:
        if lattice.site_count != self.L or regime.family != self.regime.family:
            return False
        if abs(regime.eta - self.regime.eta) > tolerance:
            return False
        return all(abs(mine - theirs) <= tolerance for mine, theirs in zip(self.lattice.xi, lattice.xi))

    def to_document(self) -> Dict[str, Any]:
        return {
            "L": self.L,
            "M": self.M,
            "regime": str(self.regime.family),
            "eta": ComplexCodec.encode(self.regime.eta),
            "xi": ComplexCodec.encode_list(self.lattice.xi),
            "q": ComplexCodec.encode_list(self.q),
            "residual": self.residual,
        }

    @classmethod
    def from_document(cls, document: Dict[str, Any]) -> "BetheRoots":
        try:
            regime = Regime(document["regime"], ComplexCodec.decode(document["eta"]))
            lattice = LatticeSpec(int(document["L"]), ComplexCodec.decode_list(document["xi"]))
            q = ComplexCodec.decode_list(document["q"])
            residual = float(document["residual"])
        except KeyError as e:
            raise ValueError(f"Roots document lacks field {e}") from e
        if len(q) != int(document.get("M", len(q))):
            raise ValueError(f"Roots document declares M={document['M']} but lists {len(q)} roots")
        return cls(q=q, residual=residual, lattice=lattice, regime=regime)

    def __str__(self):
        roots = ", ".join(f"{root:.10g}" for root in self.q)
        return f"Bethe roots ({roots}) on {self.lattice}, {self.regime}, residual {self.residual:.3e}"


def check_distinct(q: Sequence[complex], regime: Regime):
    for i in range(len(q)):
        for j in range(i + 1, len(q)):
            if abs(regime.phi(q[i] - q[j])) <= DISTINCTNESS_TOLERANCE:
                raise DegenerateRootsError(f"Roots q_{i + 1}={q[i]} and q_{j + 1}={q[j]} coincide")


def _min_separation(q: Sequence[complex], regime: Regime) -> float:
    return min((abs(regime.phi(q[i] - q[j])) for i in range(len(q)) for j in range(i + 1, len(q))),
               default=math.inf)


def _scattering(q: Sequence[complex], i: int, regime: Regime) -> complex:
    """∏_{α≠i} c̃(q_α − q_i) / c̃(q_i − q_α)."""
    value = complex(1)
    for alpha, other in enumerate(q):
        if alpha != i:
            value *= c_tilde(other - q[i], regime) * c_tilde_inverse(q[i] - other, regime)
    return value


def bae_residual(q: Sequence[complex], lattice: LatticeSpec, regime: Regime) -> List[float]:
    """|a(q_i) − ∏_{α≠i} c̃(q_α − q_i)/c̃(q_i − q_α)| for every root."""
    q = [complex(root) for root in q]
    check_distinct(q, regime)
    return [abs(vacuum_eigenvalue(root, lattice, regime) - _scattering(q, i, regime)) for i, root in enumerate(q)]


def quantum_numbers(site_count: int, magnon_count: int) -> Tuple[float, ...]:
    """Symmetric Bethe quantum numbers I_i ∈ Z + (M − 1 − L)/2 packed around zero."""
    shift = 0.5 if site_count % 2 else 0.0
    numbers = tuple(i - (magnon_count + 1) / 2 + shift for i in range(1, magnon_count + 1))
    if any(abs(number) >= site_count / 2 for number in numbers):
        raise SolverFailureError(f"No regular free-magnon start for M={magnon_count} on L={site_count}", [])
    return numbers


def _allowed_quantum_numbers(site_count: int, magnon_count: int) -> List[float]:
    offset = (magnon_count - 1 - site_count) / 2
    candidates = [offset + k for k in range(-2 * site_count, 2 * site_count)]
    return sorted(number for number in candidates if abs(number) < site_count / 2)


def free_magnon_roots(numbers: Sequence[float], lattice: LatticeSpec, regime: Regime) -> np.ndarray:
    """Roots of −c̃(ξ̄ − q) = exp(2πiI/L), the non-interacting limit of the homogeneous chain."""
    center = lattice.homogeneous().xi[0]
    roots = []
    for number in numbers:
        z = cmath.exp(2j * math.pi * number / lattice.site_count)
        if regime.family == RegimeFamily.rational:
            shift = -z * regime.eta / (1 + z)
        else:
            shift = cmath.atan(-z * cmath.sin(regime.eta) / (1 + z * cmath.cos(regime.eta)))
        roots.append(center - shift)
    return np.array(roots, dtype=complex)


def _continuous_log(value: complex, reference: complex) -> complex:
    logarithm = cmath.log(value)
    turns = round((reference.imag - logarithm.imag) / (2 * math.pi))
    return logarithm + 2j * math.pi * turns


class AbstractBetheSystem(abc.ABC):
    """Nonlinear system G_s(q) = 0 followed from s = 0 to s = 1."""

    @abc.abstractmethod
    def residual(self, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError()

    @abc.abstractmethod
    def jacobian(self, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError()

    @abc.abstractmethod
    def set_parameter(self, fraction: float):
        raise NotImplementedError()

    @abc.abstractmethod
    def snapshot(self) -> Any:
        raise NotImplementedError()

    @abc.abstractmethod
    def restore(self, state: Any):
        raise NotImplementedError()

    def accept(self, q: np.ndarray):
        pass


class InteractionSystem(AbstractBetheSystem):
    """L·log v(q_i) − s Σ_{α≠i} log w(q_α − q_i) − 2πi I_i on the homogeneous chain.

    v(q) = −c̃(ξ̄ − q), w(x) = φ(η − x)/φ(η + x).
    """

    def __init__(self, numbers: Sequence[float], q: np.ndarray, lattice: LatticeSpec, regime: Regime):
        self.numbers = np.array(numbers, dtype=float)
        self.site_count = lattice.site_count
        self.center = lattice.homogeneous().xi[0]
        self.regime = regime
        self.coupling = 0.0
        self.v_logs = 2j * math.pi * self.numbers / self.site_count
        size = len(numbers)
        self.w_logs = np.zeros((size, size), dtype=complex)
        for i in range(size):
            for alpha in range(size):
                if alpha != i:
                    self.w_logs[i, alpha] = cmath.log(self._w(q[alpha] - q[i]))

    def _v(self, root: complex) -> complex:
        return -c_tilde(self.center - root, self.regime)

    def _w(self, x: complex) -> complex:
        denominator = self.regime.phi(self.regime.eta + x)
        if denominator == 0:
            raise SingularWeightError(f"Scattering phase has a pole at x={x}")
        return self.regime.phi(self.regime.eta - x) / denominator

    def _logs(self, q: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        size = len(q)
        v_logs = np.array([_continuous_log(self._v(q[i]), self.v_logs[i]) for i in range(size)])
        w_logs = np.zeros((size, size), dtype=complex)
        for i in range(size):
            for alpha in range(size):
                if alpha != i:
                    w_logs[i, alpha] = _continuous_log(self._w(q[alpha] - q[i]), self.w_logs[i, alpha])
        return v_logs, w_logs

    def residual(self, q: np.ndarray) -> np.ndarray:
        v_logs, w_logs = self._logs(q)
        return self.site_count * v_logs - self.coupling * w_logs.sum(axis=1) - 2j * math.pi * self.numbers

    def jacobian(self, q: np.ndarray) -> np.ndarray:
        weights = self.regime.weights
        eta = self.regime.eta

        def scattering_derivative(x: complex) -> complex:
            return -(weights.phi_log_derivative(eta - x) + weights.phi_log_derivative(eta + x))

        size = len(q)
        matrix = np.zeros((size, size), dtype=complex)
        for i in range(size):
            matrix[i, i] = -self.site_count * c_tilde_log_derivative(self.center - q[i], self.regime)
            for j in range(size):
                if j == i:
                    continue
                derivative = scattering_derivative(q[j] - q[i])
                matrix[i, i] += self.coupling * derivative
                matrix[i, j] = -self.coupling * derivative
        return matrix

    def accept(self, q: np.ndarray):
        self.v_logs, self.w_logs = self._logs(q)

    def set_parameter(self, fraction: float):
        self.coupling = fraction

    def snapshot(self) -> Any:
        return self.coupling, self.v_logs.copy(), self.w_logs.copy()

    def restore(self, state: Any):
        self.coupling, self.v_logs, self.w_logs = state


class InhomogeneousSystem(AbstractBetheSystem):
    """Log r_i(q), r_i = a(q_i) ∏_{α≠i} c̃(q_i − q_α)/c̃(q_α − q_i); zero exactly on the equations.

    The parameter τ deforms ξ from their mean (τ = 0) to the target lattice (τ = 1).
    """

    def __init__(self, target: LatticeSpec, regime: Regime):
        self.target = target
        self.center = target.homogeneous().xi[0]
        self.lattice = target.homogeneous()
        self.regime = regime

    def set_parameter(self, fraction: float):
        self.lattice = LatticeSpec(self.target.site_count,
                                   tuple(self.center + fraction * (xi - self.center) for xi in self.target.xi))

    def snapshot(self) -> Any:
        return self.lattice

    def restore(self, state: Any):
        self.lattice = state

    def residual(self, q: np.ndarray) -> np.ndarray:
        ratios = [vacuum_eigenvalue(q[i], self.lattice, self.regime) / _scattering(q, i, self.regime)
                  for i in range(len(q))]
        return np.log(np.array(ratios, dtype=complex))

    def jacobian(self, q: np.ndarray) -> np.ndarray:
        size = len(q)
        matrix = np.zeros((size, size), dtype=complex)
        for i in range(size):
            matrix[i, i] = -sum(c_tilde_log_derivative(xi - q[i], self.regime) for xi in self.lattice.xi)
            for j in range(size):
                if j == i:
                    continue
                forward = c_tilde_log_derivative(q[i] - q[j], self.regime)
                backward = c_tilde_log_derivative(q[j] - q[i], self.regime)
                matrix[i, i] += forward + backward
                matrix[i, j] = -(forward + backward)
        return matrix


def _norm(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if values.size else 0.0


def newton(system: AbstractBetheSystem,
           q: np.ndarray,
           steps: int,
           label: str,
           trace: List[str]) -> np.ndarray:
    residual = system.residual(q)
    norm = _norm(residual)
    step = 0
    while step < steps and norm > NEWTON_TOLERANCE:
        step += 1
        try:
            delta = np.linalg.solve(system.jacobian(q), -residual)
        except np.linalg.LinAlgError:
            trace.append(f"{label}: singular Jacobian after {step} steps")
            raise SolverFailureError(f"Singular Jacobian at {label}", trace) from None
        damping = 1.0
        candidate_norm = math.inf
        while damping >= MIN_DAMPING:
            candidate = q + damping * delta
            try:
                candidate_residual = system.residual(candidate)
                candidate_norm = _norm(candidate_residual)
            except (ValueError, ArithmeticError):
                candidate_norm = math.inf
            if np.isfinite(candidate_norm) and candidate_norm < norm:
                break
            damping /= 2
        if not candidate_norm < norm:
            # machine precision reached or no descent direction
            break
        q, residual, norm = candidate, candidate_residual, candidate_norm
        system.accept(q)
    trace.append(f"{label}: {step} Newton steps, residual {norm:.3e}")
    if norm > LEG_TOLERANCE:
        raise SolverFailureError(f"Newton iteration did not converge at {label}", trace)
    return q


def _check_collision(q: np.ndarray, regime: Regime, label: str, trace: List[str]):
    separation = _min_separation(list(q), regime)
    if separation < DISTINCTNESS_TOLERANCE:
        trace.append(f"{label}: roots collided (min |φ(q_i − q_j)| = {separation:.3e})")
        raise RootCollisionError(f"Roots collided at {label}: {'; '.join(trace[-3:])}")


def _follow(system: AbstractBetheSystem,
            q: np.ndarray,
            regime: Regime,
            settings: SolverSettings,
            name: str,
            trace: List[str]) -> np.ndarray:
    """Carry a root set from parameter 0 to 1; a failed leg is retried at half the step."""
    base_step = 1.0 / settings.legs
    min_step = base_step / 2 ** MAX_REFINEMENTS
    fraction = 0.0
    step = base_step
    while fraction < 1.0:
        target = min(1.0, fraction + step)
        state = system.snapshot()
        label = f"{name}={target:.4f}"
        try:
            system.set_parameter(target)
            candidate = newton(system, q, settings.steps, label, trace)
            _check_collision(candidate, regime, label, trace)
        except (SolverFailureError, RootCollisionError, SingularWeightError):
            system.restore(state)
            if step / 2 < min_step:
                raise
            step /= 2
            trace.append(f"{name}: leg refined to {step:.3e}")
            logger.debug(f"Refining homotopy leg at {label} to {step:.3e}")
            continue
        q, fraction = candidate, target
        step = min(base_step, 2 * step)
    return q


def _solve_from(numbers: Sequence[float],
                lattice: LatticeSpec,
                regime: Regime,
                settings: SolverSettings,
                trace: List[str]) -> np.ndarray:
    homogeneous = lattice.homogeneous()
    q = free_magnon_roots(numbers, homogeneous, regime)
    trace.append(f"free magnons I={tuple(numbers)}")
    _check_collision(q, regime, "free magnons", trace)
    q = _follow(InteractionSystem(numbers, q, homogeneous, regime), q, regime, settings, "interaction s", trace)
    return _follow(InhomogeneousSystem(lattice, regime), q, regime, settings, "inhomogeneity τ", trace)


def solve_bae(magnon_count: int,
              lattice: LatticeSpec,
              regime: Regime,
              seed: int,
              settings: Optional[SolverSettings] = None) -> BetheRoots:
    """Solve the Bethe equations for M roots; `seed` drives the choice of fallback quantum numbers."""
    settings = settings or SolverSettings()
    if not 0 <= magnon_count <= lattice.site_count:
        raise ValueError(f"Number of roots M={magnon_count} must lie in 0..L={lattice.site_count}")
    if magnon_count == 0:
        return BetheRoots(q=(), residual=0.0, lattice=lattice, regime=regime)

    rng = np.random.default_rng(seed)
    allowed = _allowed_quantum_numbers(lattice.site_count, magnon_count)
    attempts: List[Tuple[float, ...]] = []
    try:
        attempts.append(quantum_numbers(lattice.site_count, magnon_count))
    except SolverFailureError as e:
        logger.warning(f"{e}, trying random quantum numbers")
    if len(allowed) >= magnon_count:
        for _ in range(FALLBACK_ATTEMPTS):
            attempts.append(tuple(sorted(rng.choice(allowed, size=magnon_count, replace=False))))

    trace: List[str] = []
    failure: Optional[Exception] = None
    for numbers in attempts:
        try:
            q = _solve_from(numbers, lattice, regime, settings, trace)
            residual = max(bae_residual(q, lattice, regime))
            trace.append(f"final residual {residual:.3e}")
            if residual >= settings.tolerance:
                raise SolverFailureError(f"Residual {residual:.3e} above solve tolerance {settings.tolerance}",
                                         trace)
            roots = BetheRoots(q=tuple(q), residual=residual, lattice=lattice, regime=regime)
            logger.info(f"Solved {roots}")
            return roots
        except (SolverFailureError, RootCollisionError, DegenerateRootsError, SingularWeightError) as e:
            logger.warning(f"Solver attempt with I={numbers} failed: {e}")
            failure = e
    if isinstance(failure, RootCollisionError):
        raise failure
    raise SolverFailureError(f"No root set found for M={magnon_count} on {lattice}", trace)


def bethe_state(q: Sequence[complex], lattice: LatticeSpec, regime: Regime) -> np.ndarray:
    """B(q_1) ... B(q_M)|0⟩."""
    return apply_b_operators(q, lattice, regime)


def verify_eigenstate(q: Sequence[complex],
                      lattice: LatticeSpec,
                      regime: Regime,
                      t_samples: Sequence[complex]) -> float:
    """max over t of ‖Z(t)|φ⟩ − Λ(t)|φ⟩‖ / ‖|φ⟩‖ with |φ⟩ = B(q_1) ... B(q_M)|0⟩."""
    state = bethe_state(q, lattice, regime)
    norm = float(np.linalg.norm(state))
    if norm < STATE_NORM_TOLERANCE:
        raise DegenerateParametersError(f"Bethe state has vanishing norm {norm:.3e} on {lattice}")
    residual = 0.0
    for t in t_samples:
        eigenvalue = eigenvalue_lambda(t, q, lattice, regime)
        deviation = transfer(t, lattice, regime) @ state - eigenvalue * state
        residual = max(residual, float(np.linalg.norm(deviation)) / norm)
    return residual
