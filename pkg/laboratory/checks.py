import abc
import dataclasses
from typing import Any, Dict, List, Optional

import numpy as np

from integrability import dwbc, f_basis, vertex_model, wavefunction
from integrability.bethe import BetheRoots, solve_bae, verify_eigenstate
from integrability.f_basis import FactorizingOperator
from integrability.utils import ComplexCodec
from integrability.vertex_model import LatticeSpec
from integrability.weights import Regime

from .configs import RunConfig

# spectral parameters are drawn from a box of half-width SPECTRAL_SPREAD·|η| around the lattice centre
SPECTRAL_SPREAD = 0.25


@dataclasses.dataclass
class CheckContext:
    config: RunConfig
    lattice: LatticeSpec
    regime: Regime
    rng: np.random.Generator
    roots: Optional[BetheRoots] = None
    factorizing: Optional[FactorizingOperator] = None

    def spectral_point(self) -> complex:
        roots = self.roots.q if self.roots is not None else ()
        return vertex_model.sample_spectral_point(self.rng, self.lattice, self.regime, SPECTRAL_SPREAD, avoid=roots)

    def spectral_points(self, count: Optional[int] = None) -> List[complex]:
        return [self.spectral_point() for _ in range(count or self.config.spectral_samples)]

    def require_factorizing(self) -> FactorizingOperator:
        if self.factorizing is None:
            self.factorizing = f_basis.build_f(self.lattice, self.regime)
        return self.factorizing

    def require_roots(self) -> BetheRoots:
        if self.roots is None:
            raise RuntimeError("No Bethe roots available: the root solve did not succeed")
        return self.roots


@dataclasses.dataclass
class CheckOutcome:
    residual: float
    parameters: Dict[str, Any] = dataclasses.field(default_factory=dict)
    details: Dict[str, Any] = dataclasses.field(default_factory=dict)


def _encode_points(points: List[complex]) -> List[List[float]]:
    return ComplexCodec.encode_list(points)


class AbstractCheck(abc.ABC):
    name: str
    tolerance_factor: float = 1.0

    @abc.abstractmethod
    def run(self, context: CheckContext) -> CheckOutcome:
        raise NotImplementedError()

    def __str__(self):
        return self.name


class UnitarityCheck(AbstractCheck):
    name = "unitarity"

    def run(self, context: CheckContext) -> CheckOutcome:
        pairs = [(context.spectral_point(), context.spectral_point()) for _ in range(context.config.spectral_samples)]
        residual = max(vertex_model.check_unitarity(t1, t2, context.regime) for t1, t2 in pairs)
        return CheckOutcome(residual, {"pairs": [_encode_points(list(pair)) for pair in pairs]})


class YangBaxterCheck(AbstractCheck):
    name = "yang_baxter"

    def run(self, context: CheckContext) -> CheckOutcome:
        triples = [context.spectral_points(3) for _ in range(context.config.spectral_samples)]
        residual = max(vertex_model.check_yang_baxter(*triple, context.regime) for triple in triples)
        return CheckOutcome(residual, {"triples": [_encode_points(triple) for triple in triples]})


class VacuumActionsCheck(AbstractCheck):
    name = "vacuum_actions"

    def run(self, context: CheckContext) -> CheckOutcome:
        points = context.spectral_points()
        residual = max(vertex_model.check_vacuum_actions(t, context.lattice, context.regime) for t in points)
        return CheckOutcome(residual, {"t": _encode_points(points)})


class BCommutationCheck(AbstractCheck):
    name = "b_commutation"

    def run(self, context: CheckContext) -> CheckOutcome:
        t, t_prime = context.spectral_points(2)
        residual = vertex_model.check_b_commutation(t, t_prime, context.lattice, context.regime)
        return CheckOutcome(residual, {"t": _encode_points([t, t_prime])})


class TransferCommutationCheck(AbstractCheck):
    name = "transfer_commutation"

    def run(self, context: CheckContext) -> CheckOutcome:
        t, t_prime = context.spectral_points(2)
        residual = vertex_model.check_transfer_commutation(t, t_prime, context.lattice, context.regime)
        return CheckOutcome(residual, {"t": _encode_points([t, t_prime])})


class FactorizationCheck(AbstractCheck):
    name = "f_factorization"

    def run(self, context: CheckContext) -> CheckOutcome:
        residuals = {str(i): f_basis.check_factorization(context.lattice, context.regime, i)
                     for i in range(1, context.lattice.site_count)}
        return CheckOutcome(max(residuals.values(), default=0.0), details={"per_transposition": residuals})


class InverseCheck(AbstractCheck):
    name = "f_inverse"

    def run(self, context: CheckContext) -> CheckOutcome:
        factorizing = context.require_factorizing()
        return CheckOutcome(factorizing.inverse_residual(), details={"condition": factorizing.condition()})


class MatrixElementsCheck(AbstractCheck):
    name = "f_matrix_elements"

    def run(self, context: CheckContext) -> CheckOutcome:
        residual = f_basis.check_matrix_elements(context.lattice, context.regime, context.require_factorizing())
        return CheckOutcome(residual)


class ClosedFormsCheck(AbstractCheck):
    name = "f_closed_forms"

    def run(self, context: CheckContext) -> CheckOutcome:
        factorizing = context.require_factorizing()
        points = context.spectral_points()
        per_operator = {"A": 0.0, "B": 0.0, "C": 0.0, "A_off_diagonal": 0.0}
        for t in points:
            for operator, residual in f_basis.check_closed_forms(t, context.lattice, context.regime,
                                                                 factorizing).items():
                per_operator[operator] = max(per_operator[operator], residual)
            per_operator["A_off_diagonal"] = max(per_operator["A_off_diagonal"],
                                                 f_basis.check_diagonalization(t, factorizing))
        return CheckOutcome(max(per_operator.values()), {"t": _encode_points(points)}, per_operator)


class CommutationCheck(AbstractCheck):
    name = "b_site_commutation"

    def run(self, context: CheckContext) -> CheckOutcome:
        pairs = [(context.spectral_point(), context.spectral_point()) for _ in range(context.config.spectral_samples)]
        residual = max(f_basis.check_commutation(t, t_prime, context.lattice, context.regime) for t, t_prime in pairs)
        return CheckOutcome(residual, {"pairs": [_encode_points(list(pair)) for pair in pairs]})


class ExchangeCheck(AbstractCheck):
    name = "b_site_exchange"

    def run(self, context: CheckContext) -> CheckOutcome:
        site_count = context.lattice.site_count
        residuals = {f"{i},{j}": f_basis.check_exchange(i, j, context.lattice, context.regime)
                     for i in range(1, site_count + 1) for j in range(1, site_count + 1) if i != j}
        return CheckOutcome(max(residuals.values(), default=0.0), {"t": 0}, {"per_pair": residuals})


class BaeSolveCheck(AbstractCheck):
    name = "bae_solve"

    def run(self, context: CheckContext) -> CheckOutcome:
        config = context.config
        context.roots = solve_bae(config.M, context.lattice, context.regime, config.seed, config.solver_settings())
        return CheckOutcome(context.roots.residual, {"M": config.M},
                            {"q": ComplexCodec.encode_list(context.roots.q)})


class EigenvectorCheck(AbstractCheck):
    name = "eigenvector"
    tolerance_factor = 10

    def run(self, context: CheckContext) -> CheckOutcome:
        roots = context.require_roots()
        points = context.spectral_points(max(3, context.config.spectral_samples))
        residual = verify_eigenstate(roots.q, context.lattice, context.regime, points)
        return CheckOutcome(residual, {"t": _encode_points(points)})


class WavefunctionCheck(AbstractCheck):
    name = "wavefunction_formula_vs_oracle"
    tolerance_factor = 10

    def run(self, context: CheckContext) -> CheckOutcome:
        roots = context.require_roots()
        formula = wavefunction.wave_table_formula(roots.q, context.lattice, context.regime,
                                                  context.config.permutation_cap)
        oracle = wavefunction.wave_table_oracle(roots.q, context.lattice, context.regime)
        statistic = wavefunction.ratio_statistic(formula, oracle)
        partitioned = max(
            abs(wavefunction.psi_formula_partitioned(x, roots.q, context.lattice, context.regime,
                                                     context.config.permutation_cap) - formula.entries[x])
            for x in formula.configurations()
        ) / max(formula.max_abs(), 1e-300)
        return CheckOutcome(statistic.relative_spread, details={
            "constant": ComplexCodec.encode(statistic.constant),
            "used": statistic.used,
            "excluded": statistic.excluded,
            "partition_residual": partitioned,
        })


class AlternatePhiCheck(AbstractCheck):
    name = "alternate_phi"

    def run(self, context: CheckContext) -> CheckOutcome:
        roots = context.require_roots()
        return CheckOutcome(wavefunction.check_alternate_phi(roots.q, context.lattice, context.regime))


class PeriodicityCheck(AbstractCheck):
    name = "periodicity"
    tolerance_factor = 10

    def run(self, context: CheckContext) -> CheckOutcome:
        roots = context.require_roots()
        result = wavefunction.check_periodicity(roots.q, context.lattice, context.regime,
                                                context.config.permutation_cap)
        return CheckOutcome(result.residual, details={"bae_residual": result.bae_residual})


class DwbcCheck(AbstractCheck):
    name = "dwbc_sum_vs_recurrence"

    def run(self, context: CheckContext) -> CheckOutcome:
        config = context.config
        size = min(config.dwbc_size, config.permutation_cap)
        residual = 0.0
        symmetry = 0.0
        column_order = 0.0
        for _ in range(config.dwbc_samples):
            data = dwbc.sample_input(size, context.regime, context.rng)
            total = dwbc.phi_sum(data, config.permutation_cap)
            residual = max(residual, dwbc.relative_difference(total, dwbc.phi_recurrence(data)))
            order = list(context.rng.permutation(size))
            shuffled = dwbc.phi_sum(dwbc.permuted_columns(data, order), config.permutation_cap)
            column_order = max(column_order, dwbc.relative_difference(total, shuffled))
            symmetry = max(symmetry, dwbc.row_symmetry_spread(data))
        return CheckOutcome(max(residual, column_order), {"size": size, "samples": config.dwbc_samples},
                            {"sum_vs_recurrence": residual,
                             "column_reordering": column_order,
                             "row_symmetry_spread": symmetry})


class DwbcOracleCheck(AbstractCheck):
    name = "dwbc_oracle"

    def run(self, context: CheckContext) -> CheckOutcome:
        config = context.config
        size = min(config.dwbc_size, config.permutation_cap, context.lattice.site_count)
        data = dwbc.sample_input(size, context.regime, context.rng)
        residual = dwbc.relative_difference(dwbc.phi_oracle(data), dwbc.phi_recurrence(data))
        return CheckOutcome(residual, {"size": size})


DEFAULT_CHECKS: List[AbstractCheck] = [
    UnitarityCheck(),
    YangBaxterCheck(),
    VacuumActionsCheck(),
    BCommutationCheck(),
    TransferCommutationCheck(),
    FactorizationCheck(),
    InverseCheck(),
    MatrixElementsCheck(),
    ClosedFormsCheck(),
    CommutationCheck(),
    ExchangeCheck(),
    BaeSolveCheck(),
    EigenvectorCheck(),
    WavefunctionCheck(),
    AlternatePhiCheck(),
    PeriodicityCheck(),
    DwbcCheck(),
    DwbcOracleCheck(),
]
