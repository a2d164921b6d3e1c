"""
Coordinate wave function ψ(x_1, ..., x_M) of the Bethe state B(q_1) ... B(q_M)|0⟩.

The closed formula is a sum over permutations P of the roots,
    ψ(x) = Σ_P A(P) ∏_i φ_{P(i)}(x_i),
    φ_j(x) = ∏_{l>x} c̃(ξ_l − q_j) · b̃(ξ_x − q_j),
    A(P) = ∏_{i>j} c̃⁻¹(q_{P(i)} − q_{P(j)}),
and the oracle is the matrix element ⟨x|B(q_1) ... B(q_M)|0⟩ taken from the
monodromy matrix directly. Permutations are 0-based tuples, P[i] = root index
in slot i.
"""
import dataclasses
from collections import defaultdict
from logging import getLogger
from typing import Dict, List, Sequence, Tuple

import numpy as np
from django.db import models

from .bethe import bae_residual, check_distinct
from .errors import DegenerateParametersError, SiteRangeError
from .tensor import StateIndex
from .utils import Permutation, all_permutations
from .vertex_model import LatticeSpec, apply_b_operators
from .weights import Regime, b_tilde, c_tilde, c_tilde_inverse

logger = getLogger(__name__)

DEFAULT_PERMUTATION_CAP = 9
# oracle amplitudes below this fraction of the largest one are left out of the ratio
ZERO_AMPLITUDE_FRACTION = 1e-12

Configuration = Tuple[int, ...]


class WaveProvenance(models.TextChoices):
    formula = ("formula", "Permutation-sum formula")
    oracle = ("oracle", "Matrix element of the monodromy")


def validate_configuration(x: Sequence[int], site_count: int) -> Configuration:
    x = tuple(int(site) for site in x)
    for site in x:
        if not 1 <= site <= site_count:
            raise SiteRangeError(f"Configuration {x} has site {site} outside of 1..{site_count}")
    if any(left >= right for left, right in zip(x, x[1:])):
        raise ValueError(f"Configuration {x} is not strictly increasing")
    return x


@dataclasses.dataclass(frozen=True)
class WaveTable:
    entries: Dict[Configuration, complex]
    provenance: str
    site_count: int
    magnon_count: int

    def __post_init__(self):
        expected = StateIndex.sector(self.site_count, self.magnon_count)
        if sorted(self.entries) != expected:
            raise ValueError(f"Wave table must cover all {len(expected)} configurations of "
                             f"M={self.magnon_count} on L={self.site_count}")

    def configurations(self) -> List[Configuration]:
        return sorted(self.entries)

    def max_abs(self) -> float:
        return max((abs(value) for value in self.entries.values()), default=0.0)


@dataclasses.dataclass(frozen=True)
class RatioStatistic:
    constant: complex
    relative_spread: float
    used: int
    excluded: int


@dataclasses.dataclass(frozen=True)
class PeriodicityResult:
    residual: float
    bae_residual: float


def phi_single(x: int, root: complex, lattice: LatticeSpec, regime: Regime) -> complex:
    """φ(x) = ∏_{l>x} c̃(ξ_l − q) · b̃(ξ_x − q)."""
    value = b_tilde(lattice.xi_at(x) - root, regime)
    for site in range(x + 1, lattice.site_count + 1):
        value *= c_tilde(lattice.xi_at(site) - root, regime)
    return value


def phi_factor(slot: int,
               x: int,
               permutation: Permutation,
               q: Sequence[complex],
               lattice: LatticeSpec,
               regime: Regime) -> complex:
    return phi_single(x, q[permutation[slot]], lattice, regime)


def phi_single_alternate(x: int, root: complex, lattice: LatticeSpec, regime: Regime) -> complex:
    """Same factor written as a(q) · c̃⁻¹(ξ_x − q) b̃(ξ_x − q) ∏_{l<x} c̃⁻¹(ξ_l − q)."""
    value = c_tilde_inverse(lattice.xi_at(x) - root, regime) * b_tilde(lattice.xi_at(x) - root, regime)
    for site in range(1, lattice.site_count + 1):
        value *= c_tilde(lattice.xi_at(site) - root, regime)
    for site in range(1, x):
        value *= c_tilde_inverse(lattice.xi_at(site) - root, regime)
    return value


def phi_factor_alternate(slot: int,
                         x: int,
                         permutation: Permutation,
                         q: Sequence[complex],
                         lattice: LatticeSpec,
                         regime: Regime) -> complex:
    return phi_single_alternate(x, q[permutation[slot]], lattice, regime)


def amplitude(permutation: Permutation, q: Sequence[complex], regime: Regime) -> complex:
    value = complex(1)
    for i in range(len(permutation)):
        for j in range(i):
            value *= c_tilde_inverse(q[permutation[i]] - q[permutation[j]], regime)
    return value


def cyclic_shift(permutation: Permutation) -> Permutation:
    """P∘C with C(i) = i + 1 mod M."""
    size = len(permutation)
    return tuple(permutation[(i + 1) % size] for i in range(size))


def _phi_table(q: Sequence[complex], lattice: LatticeSpec, regime: Regime) -> np.ndarray:
    """table[j, x − 1] = φ_j(x)."""
    return np.array([[phi_single(x, root, lattice, regime) for x in range(1, lattice.site_count + 1)]
                     for root in q], dtype=complex).reshape(len(q), lattice.site_count)


def _term(x: Configuration, permutation: Permutation, q: Sequence[complex], table: np.ndarray,
          regime: Regime) -> complex:
    value = amplitude(permutation, q, regime)
    for slot, site in enumerate(x):
        value *= table[permutation[slot], site - 1]
    return value


def psi_formula(x: Sequence[int],
                q: Sequence[complex],
                lattice: LatticeSpec,
                regime: Regime,
                cap: int = DEFAULT_PERMUTATION_CAP) -> complex:
    x = validate_configuration(x, lattice.site_count)
    if len(x) != len(q):
        raise ValueError(f"Configuration {x} has {len(x)} particles, {len(q)} roots given")
    check_distinct(q, regime)
    table = _phi_table(q, lattice, regime)
    return sum((_term(x, permutation, q, table, regime) for permutation in all_permutations(len(q), cap)),
               complex(0))


def psi_formula_partitioned(x: Sequence[int],
                            q: Sequence[complex],
                            lattice: LatticeSpec,
                            regime: Regime,
                            cap: int = DEFAULT_PERMUTATION_CAP) -> complex:
    """The permutation sum grouped by the root placed in the last slot."""
    x = validate_configuration(x, lattice.site_count)
    check_distinct(q, regime)
    if not q:
        return complex(1)
    table = _phi_table(q, lattice, regime)
    groups: Dict[int, complex] = defaultdict(complex)
    for permutation in all_permutations(len(q), cap):
        groups[permutation[-1]] += _term(x, permutation, q, table, regime)
    return sum(groups.values(), complex(0))


def psi_oracle(x: Sequence[int], q: Sequence[complex], lattice: LatticeSpec, regime: Regime) -> complex:
    """⟨x|B(q_1) ... B(q_M)|0⟩; an unordered configuration is sorted into the sector first."""
    x = validate_configuration(sorted(x), lattice.site_count)
    if len(x) != len(q):
        raise ValueError(f"Configuration {x} has {len(x)} particles, {len(q)} roots given")
    state = apply_b_operators(q, lattice, regime)
    return complex(state[StateIndex.from_occupied_sites(x, lattice.site_count)])


def wave_table_formula(q: Sequence[complex],
                       lattice: LatticeSpec,
                       regime: Regime,
                       cap: int = DEFAULT_PERMUTATION_CAP) -> WaveTable:
    check_distinct(q, regime)
    table = _phi_table(q, lattice, regime)
    permutations = list(all_permutations(len(q), cap))
    entries = {
        x: sum((_term(x, permutation, q, table, regime) for permutation in permutations), complex(0))
        for x in StateIndex.sector(lattice.site_count, len(q))
    }
    return WaveTable(entries, WaveProvenance.formula, lattice.site_count, len(q))


def wave_table_oracle(q: Sequence[complex], lattice: LatticeSpec, regime: Regime) -> WaveTable:
    state = apply_b_operators(q, lattice, regime)
    entries = {x: complex(state[StateIndex.from_occupied_sites(x, lattice.site_count)])
               for x in StateIndex.sector(lattice.site_count, len(q))}
    return WaveTable(entries, WaveProvenance.oracle, lattice.site_count, len(q))


def ratio_statistic(formula: WaveTable, oracle: WaveTable) -> RatioStatistic:
    """Constant ψ_formula/ψ_oracle and its relative spread over configurations with nonzero oracle value."""
    if formula.configurations() != oracle.configurations():
        raise ValueError("Wave tables cover different configurations")
    threshold = ZERO_AMPLITUDE_FRACTION * oracle.max_abs()
    used = [x for x in oracle.configurations() if abs(oracle.entries[x]) > threshold]
    if not used:
        raise DegenerateParametersError("Oracle wave function vanishes identically")
    if len(used) < len(oracle.entries):
        logger.warning(f"{len(oracle.entries) - len(used)} configurations with vanishing oracle amplitude "
                       f"excluded from the ratio")
    reference = max(used, key=lambda x: abs(oracle.entries[x]))
    constant = formula.entries[reference] / oracle.entries[reference]
    if constant == 0:
        raise DegenerateParametersError("Formula wave function vanishes on the largest oracle amplitude")
    spread = max(abs(formula.entries[x] / oracle.entries[x] - constant) for x in used) / abs(constant)
    return RatioStatistic(constant=constant, relative_spread=float(spread), used=len(used),
                          excluded=len(oracle.entries) - len(used))


def check_alternate_phi(q: Sequence[complex], lattice: LatticeSpec, regime: Regime) -> float:
    """max relative difference of the two forms of φ_j(x) over all roots and sites."""
    residual = 0.0
    for root in q:
        for x in range(1, lattice.site_count + 1):
            direct = phi_single(x, root, lattice, regime)
            alternate = phi_single_alternate(x, root, lattice, regime)
            residual = max(residual, abs(direct - alternate) / max(abs(direct), abs(alternate), 1e-300))
    return residual


def check_periodicity(q: Sequence[complex],
                      lattice: LatticeSpec,
                      regime: Regime,
                      cap: int = DEFAULT_PERMUTATION_CAP) -> PeriodicityResult:
    """max_P |A(P)/A(P∘C) − ∏_l c̃⁻¹(ξ_l − q_{P(1)})|, co-reported with the Bethe equation residual."""
    check_distinct(q, regime)
    if not q:
        return PeriodicityResult(residual=0.0, bae_residual=0.0)
    residual = 0.0
    for permutation in all_permutations(len(q), cap):
        ratio = amplitude(permutation, q, regime) / amplitude(cyclic_shift(permutation), q, regime)
        expected = complex(1)
        for xi in lattice.xi:
            expected *= c_tilde_inverse(xi - q[permutation[0]], regime)
        residual = max(residual, abs(ratio - expected))
    return PeriodicityResult(residual=residual, bae_residual=max(bae_residual(q, lattice, regime), default=0.0))
