"""
Partition function Φ_M of the six-vertex model with domain-wall boundary conditions.

Row parameters μ_1..μ_M are the inhomogeneities of the occupied sites, column
parameters q_1..q_M the spectral parameters of the B operators.
"""
import dataclasses
import time
from itertools import product
from logging import getLogger
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bethe import check_distinct
from .errors import SingularWeightError
from .tensor import MAX_SITES
from .utils import Permutation, all_permutations
from .vertex_model import LatticeSpec, apply_b_operators, is_separated, sample_complex
from .weights import Regime, b_tilde, c_tilde, c_tilde_inverse

logger = getLogger(__name__)

DEFAULT_PERMUTATION_CAP = 9


@dataclasses.dataclass(frozen=True)
class DwbcInput:
    mu: Tuple[complex, ...]
    q: Tuple[complex, ...]
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(complex(value) for value in self.mu))
        object.__setattr__(self, "q", tuple(complex(value) for value in self.q))
        if len(self.mu) != len(self.q):
            raise ValueError(f"Domain-wall input needs as many rows as columns, got {len(self.mu)} and {len(self.q)}")
        check_distinct(self.q, self.regime)

    @property
    def M(self) -> int:
        return len(self.q)


@dataclasses.dataclass(frozen=True)
class DwbcBenchmark:
    size: int
    permutation_sum: complex
    recurrence: complex
    relative_error: float
    sum_seconds: float
    recurrence_seconds: float


@dataclasses.dataclass(frozen=True)
class WeightTables:
    """b[i, k] = b̃(μ_i − q_k), c[i, k] = c̃(μ_i − q_k), c_inv[k, l] = c̃⁻¹(q_k − q_l) (zero on the diagonal)."""
    b: np.ndarray
    c: np.ndarray
    c_inv: np.ndarray

    @classmethod
    def of(cls, data: DwbcInput) -> "WeightTables":
        size, regime = data.M, data.regime
        b = np.zeros((size, size), dtype=complex)
        c = np.zeros((size, size), dtype=complex)
        c_inv = np.zeros((size, size), dtype=complex)
        for i, k in product(range(size), repeat=2):
            try:
                b[i, k] = b_tilde(data.mu[i] - data.q[k], regime)
                c[i, k] = c_tilde(data.mu[i] - data.q[k], regime)
            except SingularWeightError as e:
                raise SingularWeightError(f"Domain-wall weight of row {i + 1}, column {k + 1}: {e}") from e
            if i != k:
                c_inv[i, k] = c_tilde_inverse(data.q[i] - data.q[k], regime)
        return cls(b=b, c=c, c_inv=c_inv)


def phi_term(permutation: Permutation, data: DwbcInput, tables: Optional[WeightTables] = None) -> complex:
    """∏_i b̃(μ_i − q_{P(i)}) ∏_{i>j} c̃(μ_i − q_{P(j)}) c̃⁻¹(q_{P(i)} − q_{P(j)})."""
    if sorted(permutation) != list(range(data.M)):
        raise ValueError(f"{permutation} is not a permutation of {data.M} columns")
    tables = tables or WeightTables.of(data)
    value = complex(1)
    for i, column in enumerate(permutation):
        value *= tables.b[i, column]
        for earlier in permutation[:i]:
            value *= tables.c[i, earlier] * tables.c_inv[column, earlier]
    return value


def phi_sum(data: DwbcInput, cap: int = DEFAULT_PERMUTATION_CAP) -> complex:
    tables = WeightTables.of(data)
    return sum((phi_term(permutation, data, tables) for permutation in all_permutations(data.M, cap)),
               complex(0))


def phi_recurrence(data: DwbcInput) -> complex:
    """Φ over the surviving columns S with rows 1..|S|:
    Φ(S) = Σ_{i∈S} b̃(μ_|S| − q_i) ∏_{α∈S∖i} c̃(μ_|S| − q_α)/c̃(q_i − q_α) Φ(S∖i), Φ(∅) = 1.
    """
    tables = WeightTables.of(data)
    memo: Dict[int, complex] = {0: complex(1)}

    def evaluate(columns: int) -> complex:
        if columns in memo:
            return memo[columns]
        members = [i for i in range(data.M) if columns >> i & 1]
        row = len(members) - 1
        value = complex(0)
        for i in members:
            term = tables.b[row, i]
            for alpha in members:
                if alpha != i:
                    term *= tables.c[row, alpha] * tables.c_inv[i, alpha]
            value += term * evaluate(columns & ~(1 << i))
        memo[columns] = value
        return value

    return evaluate((1 << data.M) - 1)


def phi_oracle(data: DwbcInput) -> complex:
    """⟨1...1|B(q_1) ... B(q_M)|0⟩ on the M-site lattice with inhomogeneities μ."""
    if data.M == 0:
        return complex(1)
    if data.M > MAX_SITES - 1:
        raise ValueError(f"Matrix-element oracle limited to {MAX_SITES - 1} rows, got {data.M}")
    lattice = LatticeSpec(data.M, data.mu)
    state = apply_b_operators(data.q, lattice, data.regime)
    return complex(state[-1])


def row_symmetry_spread(data: DwbcInput) -> float:
    """Largest relative change of Φ under adjacent transpositions of the row parameters."""
    reference = phi_recurrence(data)
    if reference == 0:
        return 0.0
    spread = 0.0
    for i in range(data.M - 1):
        mu = list(data.mu)
        mu[i], mu[i + 1] = mu[i + 1], mu[i]
        swapped = phi_recurrence(DwbcInput(tuple(mu), data.q, data.regime))
        spread = max(spread, abs(swapped - reference) / abs(reference))
    return spread


def relative_difference(left: complex, right: complex) -> float:
    scale = max(abs(left), abs(right))
    return abs(left - right) / scale if scale else 0.0


def benchmark(data: DwbcInput, cap: int = DEFAULT_PERMUTATION_CAP) -> DwbcBenchmark:
    started = time.perf_counter()
    total = phi_sum(data, cap)
    sum_seconds = time.perf_counter() - started
    started = time.perf_counter()
    recurrence = phi_recurrence(data)
    recurrence_seconds = time.perf_counter() - started
    result = DwbcBenchmark(size=data.M,
                           permutation_sum=total,
                           recurrence=recurrence,
                           relative_error=relative_difference(total, recurrence),
                           sum_seconds=sum_seconds,
                           recurrence_seconds=recurrence_seconds)
    logger.info(f"Domain-wall M={data.M}: permutation sum {sum_seconds:.4f}s, "
                f"recurrence {recurrence_seconds:.4f}s, relative error {result.relative_error:.3e}")
    return result


def sample_input(size: int,
                 regime: Regime,
                 rng: np.random.Generator,
                 row_spread: float = 0.5,
                 column_spread: float = 1.5,
                 attempts: int = 1000) -> DwbcInput:
    """Rows in a box of half-width row_spread·|η| around 0, columns of half-width column_spread·|η| around η/2.

    Each column is redrawn until |φ(q_k − q_l)| and |φ(q_k − μ_i)|, |φ(q_k − μ_i − η)| are all at least
    0.3·|φ(η)|.
    """
    mu = tuple(sample_complex(rng, row_spread * abs(regime.eta)) for _ in range(size))
    q: List[complex] = []
    for column in range(1, size + 1):
        for _ in range(attempts):
            candidate = sample_complex(rng, column_spread * abs(regime.eta), center=0.5 * regime.eta)
            if is_separated(candidate, q, regime) and is_separated(candidate, mu, regime, shifts=(0, -regime.eta)):
                q.append(candidate)
                break
        else:
            raise ValueError(f"Could not place column {column} of a domain-wall input of size {size} "
                             f"in {attempts} attempts")
    return DwbcInput(mu, tuple(q), regime)


def permuted_columns(data: DwbcInput, order: Sequence[int]) -> DwbcInput:
    return DwbcInput(data.mu, tuple(data.q[i] for i in order), data.regime)
