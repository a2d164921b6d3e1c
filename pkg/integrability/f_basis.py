"""
Factorizing operator F and the F-basis forms of the monodromy entries.

F = F̂_1 ... F̂_L with F̂_i = (1 − n_i) + T_i n_i and
T_n = S_{n+1,n}(ξ_{n+1}, ξ_n) ... S_{L,n}(ξ_L, ξ_n).
"""
import dataclasses
from logging import getLogger
from typing import Dict, Optional

import numpy as np

from .errors import DegenerateParametersError, SingularWeightError, SiteRangeError
from .tensor import (PERMUTATION,
                     LinearOperator,
                     SiteOperatorKind,
                     StateIndex,
                     apply_two_site,
                     site_operator)
from .vertex_model import LatticeSpec, apply_b_operators, monodromy_entries
from .weights import POLE_TOLERANCE, Regime, b_tilde, c_tilde, c_tilde_inverse, s_matrix

logger = getLogger(__name__)

CONDITION_LIMIT = 1e12


@dataclasses.dataclass(frozen=True)
class FactorizingOperator:
    F: LinearOperator
    F_inv: LinearOperator
    lattice: LatticeSpec
    regime: Regime

    def inverse_residual(self) -> float:
        return (self.F @ self.F_inv - LinearOperator.identity(self.lattice.site_count)).max_abs()

    def condition(self) -> float:
        return float(np.linalg.cond(self.F.matrix))


def _check_lattice_site(site: int, lattice: LatticeSpec):
    if not 1 <= site <= lattice.site_count:
        raise SiteRangeError(f"Site {site} outside of lattice 1..{lattice.site_count}")


def _occupations(site_count: int) -> np.ndarray:
    """Matrix of shape (2^L, L): occupation of every site in every basis state."""
    states = np.arange(2 ** site_count)
    shifts = site_count - np.arange(1, site_count + 1)
    return (states[:, None] >> shifts[None, :]) & 1


def t_n_operator(n: int, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    _check_lattice_site(n, lattice)
    result = LinearOperator.identity(lattice.site_count)
    for k in range(n + 1, lattice.site_count + 1):
        try:
            gate = s_matrix(lattice.xi_at(k), lattice.xi_at(n), regime)
        except SingularWeightError as e:
            raise SingularWeightError(f"Factor S_{k},{n} of T_{n} is singular: {e}") from e
        result = result @ apply_two_site(gate, k, n, lattice.site_count)
    return result


def f_hat(i: int, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    number = site_operator(SiteOperatorKind.number, i, lattice.site_count)
    identity = LinearOperator.identity(lattice.site_count)
    return identity - number + t_n_operator(i, lattice, regime) @ number


def build_f(lattice: LatticeSpec, regime: Regime) -> FactorizingOperator:
    result = LinearOperator.identity(lattice.site_count)
    for i in range(1, lattice.site_count + 1):
        result = result @ f_hat(i, lattice, regime)
    condition = np.linalg.cond(result.matrix)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise DegenerateParametersError(f"Factorizing operator is numerically singular "
                                        f"(condition {condition:.3e}) for {lattice}")
    logger.debug(f"Factorizing operator built for {lattice}, condition {condition:.3e}")
    inverse = LinearOperator(np.linalg.inv(result.matrix), lattice.site_count)
    return FactorizingOperator(F=result, F_inv=inverse, lattice=lattice, regime=regime)


def conjugate(operator: LinearOperator, factorizing: FactorizingOperator) -> LinearOperator:
    """F⁻¹ · operator · F."""
    return factorizing.F_inv @ operator @ factorizing.F


def check_factorization(lattice: LatticeSpec, regime: Regime, i: int) -> float:
    """‖F − S_{i+1,i}(ξ_{i+1}, ξ_i) P_{i,i+1} F' P_{i,i+1}‖, F' built on the swapped lattice."""
    if not 1 <= i < lattice.site_count:
        raise SiteRangeError(f"Adjacent transposition ({i}, {i + 1}) outside of 1..{lattice.site_count}")
    site_count = lattice.site_count
    swap = apply_two_site(PERMUTATION, i, i + 1, site_count)
    swapped = build_f(lattice.swapped(i), regime).F
    s_factor = apply_two_site(s_matrix(lattice.xi_at(i + 1), lattice.xi_at(i), regime), i + 1, i, site_count)
    return (build_f(lattice, regime).F - s_factor @ swap @ swapped @ swap).max_abs()


def af_closed(t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    """A^F(t) = ∏_i (c̃(ξ_i − t)(1 − n_i) + n_i), diagonal."""
    occupations = _occupations(lattice.site_count)
    empty_weights = np.array([c_tilde(xi - t, regime) for xi in lattice.xi])
    diagonal = np.prod(np.where(occupations == 1, 1, empty_weights[None, :]), axis=1)
    return LinearOperator(np.diag(diagonal), lattice.site_count)


def b_site(i: int, t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    """B_i(t): raises site i with amplitude b̃(ξ_i − t) ∏_{k≠i}[c̃(ξ_k − t)/c̃(ξ_k − ξ_i) on empty k]."""
    _check_lattice_site(i, lattice)
    site_count = lattice.site_count
    xi_i = lattice.xi_at(i)
    empty_weights = np.array([
        1 if k == i else c_tilde(lattice.xi_at(k) - t, regime) * c_tilde_inverse(lattice.xi_at(k) - xi_i, regime)
        for k in range(1, site_count + 1)
    ])
    return _single_flip(i, b_tilde(xi_i - t, regime), empty_weights, np.ones(site_count, dtype=complex),
                        raising=True, lattice=lattice)


def c_site(i: int, t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    """C_i(t): lowers site i with amplitude b̃(ξ_i − t) ∏_{k≠i}[c̃(ξ_k − t) on empty k, c̃⁻¹(ξ_i − ξ_k) on occupied k]."""
    _check_lattice_site(i, lattice)
    site_count = lattice.site_count
    xi_i = lattice.xi_at(i)
    empty_weights = np.array([1 if k == i else c_tilde(lattice.xi_at(k) - t, regime)
                              for k in range(1, site_count + 1)])
    occupied_weights = np.array([1 if k == i else c_tilde_inverse(xi_i - lattice.xi_at(k), regime)
                                 for k in range(1, site_count + 1)])
    return _single_flip(i, b_tilde(xi_i - t, regime), empty_weights, occupied_weights,
                        raising=False, lattice=lattice)


def _single_flip(i: int,
                 local: complex,
                 empty_weights: np.ndarray,
                 occupied_weights: np.ndarray,
                 raising: bool,
                 lattice: LatticeSpec) -> LinearOperator:
    site_count = lattice.site_count
    occupations = _occupations(site_count)
    bit = 1 << (site_count - i)
    sources = np.flatnonzero(occupations[:, i - 1] == (0 if raising else 1))
    weights = np.where(occupations[sources] == 1, occupied_weights[None, :], empty_weights[None, :])
    matrix = np.zeros((2 ** site_count, 2 ** site_count), dtype=complex)
    matrix[sources ^ bit, sources] = local * np.prod(weights, axis=1)
    return LinearOperator(matrix, site_count)


def bf_closed(t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    result = LinearOperator.zeros(lattice.site_count)
    for i in range(1, lattice.site_count + 1):
        result = result + b_site(i, t, lattice, regime)
    return result


def cf_closed(t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    result = LinearOperator.zeros(lattice.site_count)
    for i in range(1, lattice.site_count + 1):
        result = result + c_site(i, t, lattice, regime)
    return result


def check_diagonalization(t: complex, factorizing: FactorizingOperator) -> float:
    entries = monodromy_entries(t, factorizing.lattice, factorizing.regime)
    return conjugate(entries.A, factorizing).off_diagonal_mass()


def check_closed_forms(t: complex,
                       lattice: LatticeSpec,
                       regime: Regime,
                       factorizing: Optional[FactorizingOperator] = None) -> Dict[str, float]:
    factorizing = factorizing or build_f(lattice, regime)
    entries = monodromy_entries(t, lattice, regime)
    return {
        "A": (conjugate(entries.A, factorizing) - af_closed(t, lattice, regime)).max_abs(),
        "B": (conjugate(entries.B, factorizing) - bf_closed(t, lattice, regime)).max_abs(),
        "C": (conjugate(entries.C, factorizing) - cf_closed(t, lattice, regime)).max_abs(),
    }


def check_matrix_elements(lattice: LatticeSpec,
                          regime: Regime,
                          factorizing: Optional[FactorizingOperator] = None) -> float:
    """max over occupation sets n of ‖F|n⟩ − B(ξ_{n_1}) ... B(ξ_{n_M})|0⟩‖."""
    factorizing = factorizing or build_f(lattice, regime)
    residual = 0.0
    for index in range(2 ** lattice.site_count):
        occupied = StateIndex.occupied_sites(index, lattice.site_count)
        column = factorizing.F.matrix[:, index]
        created = apply_b_operators([lattice.xi_at(site) for site in occupied], lattice, regime)
        residual = max(residual, float(np.max(np.abs(column - created))))
    return residual


def check_commutation(t: complex, t_prime: complex, lattice: LatticeSpec, regime: Regime) -> float:
    """max over i of ‖B_i(t) A^F(t′) − c̃(ξ_i − t′) A^F(t′) B_i(t)‖."""
    diagonal = af_closed(t_prime, lattice, regime)
    residual = 0.0
    for i in range(1, lattice.site_count + 1):
        flip = b_site(i, t, lattice, regime)
        factor = c_tilde(lattice.xi_at(i) - t_prime, regime)
        residual = max(residual, (flip @ diagonal - factor * (diagonal @ flip)).max_abs())
    return residual


def exchange_factor(i: int, j: int, lattice: LatticeSpec, regime: Regime, t: complex = 0) -> complex:
    """S̃_ij = c̃(ξ_i − t) c̃(ξ_j − ξ_i) / (c̃(ξ_j − t) c̃(ξ_i − ξ_j))."""
    xi_i, xi_j = lattice.xi_at(i), lattice.xi_at(j)
    denominators = {
        f"c̃(ξ_{j} − t)": c_tilde(xi_j - t, regime),
        f"c̃(ξ_{i} − ξ_{j})": c_tilde(xi_i - xi_j, regime),
    }
    for name, value in denominators.items():
        if abs(value) < POLE_TOLERANCE:
            raise SingularWeightError(f"Exchange factor S̃_{i}{j}: denominator {name} vanishes")
    numerator = c_tilde(xi_i - t, regime) * c_tilde(xi_j - xi_i, regime)
    return numerator / (denominators[f"c̃(ξ_{j} − t)"] * denominators[f"c̃(ξ_{i} − ξ_{j})"])


def check_exchange(i: int, j: int, lattice: LatticeSpec, regime: Regime, t: complex = 0) -> float:
    """‖B_i B_j − S̃_ij B_j B_i‖ with both flips at the common spectral parameter t."""
    if i == j:
        raise ValueError(f"Exchange relation needs two distinct sites, got {i} twice")
    first = b_site(i, t, lattice, regime)
    second = b_site(j, t, lattice, regime)
    factor = exchange_factor(i, j, lattice, regime, t)
    return (first @ second - factor * (second @ first)).max_abs()
