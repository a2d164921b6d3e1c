from itertools import permutations
from logging import getLogger
from typing import Iterator, List, Sequence, Tuple, Union

from .errors import PermutationCapError

logger = getLogger(__name__)

ComplexPair = List[float]
Permutation = Tuple[int, ...]


class ComplexCodec:
    """Complex numbers in documents are [re, im] pairs; bare numbers are accepted on input."""

    @staticmethod
    def encode(value: complex) -> ComplexPair:
        value = complex(value)
        return [value.real, value.imag]

    @staticmethod
    def decode(value: Union[ComplexPair, Sequence[float], float, int]) -> complex:
        if isinstance(value, (int, float)):
            return complex(value)
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        raise ValueError(f"Cannot read complex number from {value!r}, expected [re, im]")

    @classmethod
    def encode_list(cls, values: Sequence[complex]) -> List[ComplexPair]:
        return [cls.encode(value) for value in values]

    @classmethod
    def decode_list(cls, values: Sequence) -> Tuple[complex, ...]:
        return tuple(cls.decode(value) for value in values)


def check_permutation_cap(size: int, cap: int):
    if size > cap:
        logger.warning(f"Refusing a {size}! permutation sum, cap is {cap}")
        raise PermutationCapError(f"Sum over {size}! permutations exceeds the configured cap of {cap}")


def all_permutations(size: int, cap: int) -> Iterator[Permutation]:
    """0-based permutations P of range(size), P[i] = image of slot i."""
    check_permutation_cap(size, cap)
    return permutations(range(size))
