"""
Occupation-basis indexing and dense operator algebra on (C^2)^{⊗L}.

Site convention: site 1 is the most significant bit of the basis index, site L
the least significant one. A set bit is an occupied site (spin up). Every
operator in the package is a dense complex matrix over this basis, row index =
out-state, column index = in-state.
"""
import dataclasses
from itertools import combinations
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from django.db import models

from .errors import SiteRangeError

MAX_SITES = 12

SIGMA_RAISE = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)
NUMBER = np.array([[0, 0], [0, 1]], dtype=complex)
PERMUTATION = np.array([[1, 0, 0, 0],
                        [0, 0, 1, 0],
                        [0, 1, 0, 0],
                        [0, 0, 0, 1]], dtype=complex)


class SiteOperatorKind(models.TextChoices):
    raise_ = ("raise", "Raising operator σ†")
    lower = ("lower", "Lowering operator σ⁻")
    number = ("number", "Occupation number n")


SITE_MATRICES = {
    SiteOperatorKind.raise_: SIGMA_RAISE,
    SiteOperatorKind.lower: SIGMA_LOWER,
    SiteOperatorKind.number: NUMBER,
}


class StateIndex:
    """Bijection between occupation bitstrings and basis indices."""

    @staticmethod
    def encode(bits: Sequence[int]) -> int:
        index = 0
        for bit in bits:
            if bit not in (0, 1):
                raise ValueError(f"Occupation must be 0 or 1, got {bit}")
            index = (index << 1) | bit
        return index

    @staticmethod
    def decode(index: int, site_count: int) -> Tuple[int, ...]:
        if not 0 <= index < 2 ** site_count:
            raise ValueError(f"Index {index} outside of basis of {site_count} sites")
        return tuple((index >> (site_count - site)) & 1 for site in range(1, site_count + 1))

    @staticmethod
    def occupation(index: int) -> int:
        return bin(index).count("1")

    @staticmethod
    def from_occupied_sites(sites: Iterable[int], site_count: int) -> int:
        index = 0
        for site in sites:
            _check_site(site, site_count)
            index |= 1 << (site_count - site)
        return index

    @staticmethod
    def occupied_sites(index: int, site_count: int) -> Tuple[int, ...]:
        bits = StateIndex.decode(index, site_count)
        return tuple(site for site, bit in enumerate(bits, start=1) if bit)

    @staticmethod
    def sector(site_count: int, occupation: int) -> List[Tuple[int, ...]]:
        """Ordered configurations x_1 < ... < x_M of the given occupation."""
        return list(combinations(range(1, site_count + 1), occupation))


@dataclasses.dataclass(frozen=True, eq=False)
class LinearOperator:
    matrix: np.ndarray
    site_count: int

    def __post_init__(self):
        dim = 2 ** self.site_count
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"Operator on {self.site_count} sites needs shape ({dim}, {dim}), "
                             f"got {self.matrix.shape}")
        matrix = np.array(self.matrix, dtype=complex)
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return 2 ** self.site_count

    @classmethod
    def identity(cls, site_count: int) -> "LinearOperator":
        return cls(np.eye(2 ** site_count, dtype=complex), site_count)

    @classmethod
    def zeros(cls, site_count: int) -> "LinearOperator":
        return cls(np.zeros((2 ** site_count, 2 ** site_count), dtype=complex), site_count)

    def _compatible(self, other: "LinearOperator"):
        if self.site_count != other.site_count:
            raise ValueError(f"Operators act on {self.site_count} and {other.site_count} sites")

    def __matmul__(self, other: Union["LinearOperator", np.ndarray]):
        if isinstance(other, LinearOperator):
            self._compatible(other)
            return LinearOperator(self.matrix @ other.matrix, self.site_count)
        return self.matrix @ np.asarray(other, dtype=complex)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        self._compatible(other)
        return LinearOperator(self.matrix + other.matrix, self.site_count)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        self._compatible(other)
        return LinearOperator(self.matrix - other.matrix, self.site_count)

    def __mul__(self, scalar: complex) -> "LinearOperator":
        return LinearOperator(complex(scalar) * self.matrix, self.site_count)

    __rmul__ = __mul__

    def commutator(self, other: "LinearOperator") -> "LinearOperator":
        return self @ other - other @ self

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0

    def off_diagonal_mass(self) -> float:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return float(np.max(np.abs(off)))

    def is_close(self, other: "LinearOperator", tolerance: float) -> bool:
        return max_abs_diff(self, other) < tolerance

    def __str__(self):
        return f"LinearOperator on {self.site_count} sites"


def max_abs_diff(left: LinearOperator, right: LinearOperator) -> float:
    """Uniform operator distance of the suite: max-abs entrywise difference."""
    return (left - right).max_abs()


def _check_site(site: int, site_count: int):
    if not 1 <= site <= site_count:
        raise SiteRangeError(f"Site {site} outside of lattice 1..{site_count}")


def _check_site_count(site_count: int):
    if site_count < 1:
        raise SiteRangeError(f"Lattice must have at least one site, got {site_count}")
    if site_count > MAX_SITES:
        raise SiteRangeError(f"Lattice of {site_count} sites exceeds desk scale ({MAX_SITES} sites)")


def vacuum_state(site_count: int) -> np.ndarray:
    _check_site_count(site_count)
    state = np.zeros(2 ** site_count, dtype=complex)
    state[0] = 1.0
    return state


def basis_state(index: int, site_count: int) -> np.ndarray:
    state = np.zeros(2 ** site_count, dtype=complex)
    state[index] = 1.0
    return state


def site_operator(kind: str, site: int, site_count: int) -> LinearOperator:
    _check_site_count(site_count)
    _check_site(site, site_count)
    try:
        local = SITE_MATRICES[SiteOperatorKind(kind)]
    except ValueError:
        raise ValueError(f"Unknown site operator kind {kind}. "
                         f"Use one of {', '.join(SiteOperatorKind.values)}") from None
    left = np.eye(2 ** (site - 1), dtype=complex)
    right = np.eye(2 ** (site_count - site), dtype=complex)
    return LinearOperator(np.kron(np.kron(left, local), right), site_count)


def apply_two_site(gate: np.ndarray, first: int, second: int, site_count: int) -> LinearOperator:
    """Embed a 4×4 gate acting on sites (first, second), first slot = `first`."""
    _check_site_count(site_count)
    _check_site(first, site_count)
    _check_site(second, site_count)
    if first == second:
        raise SiteRangeError(f"Two-site gate needs distinct sites, got {first} twice")
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (4, 4):
        raise ValueError(f"Two-site gate must be 4x4, got {gate.shape}")
    dim = 2 ** site_count
    states = np.arange(dim)
    shift_first = site_count - first
    shift_second = site_count - second
    bit_first = (states >> shift_first) & 1
    bit_second = (states >> shift_second) & 1
    cleared = states & ~((1 << shift_first) | (1 << shift_second))
    columns = 2 * bit_first + bit_second
    matrix = np.zeros((dim, dim), dtype=complex)
    for row in range(4):
        targets = cleared | ((row >> 1) << shift_first) | ((row & 1) << shift_second)
        matrix[targets, states] = gate[row, columns]
    return LinearOperator(matrix, site_count)


def swap_sites(first: int, second: int, site_count: int) -> LinearOperator:
    return apply_two_site(PERMUTATION, first, second, site_count)


def product(operators: Sequence[LinearOperator], site_count: int) -> LinearOperator:
    """Ordered product O_1 O_2 ... O_n (O_n acts first on kets)."""
    result = np.eye(2 ** site_count, dtype=complex)
    for operator in operators:
        result = result @ operator.matrix
    return LinearOperator(result, site_count)
