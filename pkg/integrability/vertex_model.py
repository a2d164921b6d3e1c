import dataclasses
from itertools import product as cartesian
from logging import getLogger
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConventionError, SingularWeightError, SiteRangeError
from .tensor import (MAX_SITES,
                     LinearOperator,
                     StateIndex,
                     apply_two_site,
                     vacuum_state)
from .weights import POLE_TOLERANCE, Regime, c_tilde, c_tilde_inverse, s_matrix

logger = getLogger(__name__)

# sampling rejects configurations with |φ(·)| below this
GENERICITY_GUARD = 1e-6
# sampled points keep |φ(·)| at least this fraction of |φ(η)| apart
SAMPLE_SEPARATION = 0.3
VACUUM_TOLERANCE = 1e-12


@dataclasses.dataclass(frozen=True)
class LatticeSpec:
    site_count: int
    xi: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(complex(value) for value in self.xi))
        if self.site_count < 1:
            raise SiteRangeError(f"Lattice must have at least one site, got {self.site_count}")
        # one extra slot is reserved for the auxiliary space of the monodromy
        if self.site_count > MAX_SITES - 1:
            raise SiteRangeError(f"Lattice of {self.site_count} sites exceeds desk scale ({MAX_SITES - 1})")
        if len(self.xi) != self.site_count:
            raise ValueError(f"Lattice of {self.site_count} sites needs {self.site_count} inhomogeneities, "
                             f"got {len(self.xi)}")

    @property
    def L(self) -> int:
        return self.site_count

    def xi_at(self, site: int) -> complex:
        """ξ of a 1-based site, extended periodically (ξ_{l+L} = ξ_l)."""
        return self.xi[(site - 1) % self.site_count]

    def genericity_violations(self, regime: Regime, threshold: float = GENERICITY_GUARD) -> List[str]:
        violations = []
        for i in range(1, self.site_count + 1):
            for j in range(1, self.site_count + 1):
                if i == j:
                    continue
                difference = self.xi_at(i) - self.xi_at(j)
                if abs(regime.phi(difference)) < threshold:
                    violations.append(f"φ(ξ_{i} − ξ_{j}) ≈ 0")
                if abs(regime.phi(difference + regime.eta)) < threshold:
                    violations.append(f"φ(ξ_{i} − ξ_{j} + η) ≈ 0")
        return violations

    def is_generic(self, regime: Regime, threshold: float = GENERICITY_GUARD) -> bool:
        return not self.genericity_violations(regime, threshold)

    def swapped(self, site: int) -> "LatticeSpec":
        """The lattice with sites `site` and `site + 1` (and their ξ) exchanged."""
        if not 1 <= site < self.site_count:
            raise SiteRangeError(f"Adjacent transposition ({site}, {site + 1}) outside of 1..{self.site_count}")
        xi = list(self.xi)
        xi[site - 1], xi[site] = xi[site], xi[site - 1]
        return LatticeSpec(self.site_count, tuple(xi))

    def homogeneous(self) -> "LatticeSpec":
        mean = sum(self.xi) / self.site_count
        return LatticeSpec(self.site_count, (mean,) * self.site_count)

    def __str__(self):
        return f"L={self.site_count}, ξ=({', '.join(f'{value:.4g}' for value in self.xi)})"


def sample_complex(rng: np.random.Generator, spread: float, center: complex = 0) -> complex:
    return complex(center) + spread * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))


def is_separated(value: complex,
                 others: Sequence[complex],
                 regime: Regime,
                 shifts: Sequence[complex] = (0,),
                 separation: float = SAMPLE_SEPARATION) -> bool:
    """|φ(value − other + shift)| ≥ separation·|φ(η)| for every other value and shift."""
    floor = separation * abs(regime.phi(regime.eta))
    return all(abs(regime.phi(value - other + shift)) >= floor for other in others for shift in shifts)


def sample_lattice(site_count: int,
                   regime: Regime,
                   rng: np.random.Generator,
                   spread: float = 2.0,
                   center: complex = 0,
                   attempts: int = 1000) -> LatticeSpec:
    """ξ drawn from a box of half-width spread·|η| around center, each site kept apart from the earlier ones.

    Sites closer than SAMPLE_SEPARATION (in |φ(ξ_i − ξ_j)| and |φ(ξ_i − ξ_j ± η)| relative to
    |φ(η)|) are redrawn.
    """
    scale = spread * abs(regime.eta)
    shifts = (0, regime.eta, -regime.eta)
    xi: List[complex] = []
    rejected = 0
    for site in range(1, site_count + 1):
        for _ in range(attempts):
            candidate = sample_complex(rng, scale, center)
            if is_separated(candidate, xi, regime, shifts):
                xi.append(candidate)
                break
            rejected += 1
        else:
            raise ValueError(f"Could not place site {site} of {site_count} at separation {SAMPLE_SEPARATION} "
                             f"in {attempts} attempts, widen the spread")
    if rejected:
        logger.debug(f"Lattice of {site_count} sites sampled after {rejected} rejected draws")
    return LatticeSpec(site_count, tuple(xi))


def sample_spectral_point(rng: np.random.Generator,
                          lattice: LatticeSpec,
                          regime: Regime,
                          spread: float = 0.25,
                          avoid: Sequence[complex] = (),
                          attempts: int = 1000) -> complex:
    """t within spread·|η| of the lattice centre, kept off the weight poles t = ξ_α + η and away from `avoid`."""
    center = sum(lattice.xi) / lattice.site_count
    for _ in range(attempts):
        t = sample_complex(rng, spread * abs(regime.eta), center)
        if is_separated(t, lattice.xi, regime, shifts=(-regime.eta,)) and is_separated(t, avoid, regime):
            return t
    raise ValueError(f"No spectral point away from the poles of {lattice} found in {attempts} draws")


@dataclasses.dataclass(frozen=True)
class MonodromyEntries:
    A: LinearOperator
    B: LinearOperator
    C: LinearOperator
    D: LinearOperator
    t: complex
    vacuum_eigenvalue: complex


def vacuum_eigenvalue(t: complex, lattice: LatticeSpec, regime: Regime) -> complex:
    """a(t) = ∏_α c̃(ξ_α − t)."""
    value = complex(1)
    for xi in lattice.xi:
        value *= c_tilde(xi - t, regime)
    return value


def _site_factor(site: int, t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    auxiliary = lattice.site_count + 1
    try:
        gate = s_matrix(lattice.xi_at(site), t, regime)
    except SingularWeightError as e:
        raise SingularWeightError(f"Monodromy factor of site {site} is singular at t={t}: {e}") from e
    return apply_two_site(gate, site, auxiliary, auxiliary)


def monodromy(t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    """T_0(t) = S_{10}(ξ_1, t) ... S_{L0}(ξ_L, t), auxiliary space appended as site L + 1."""
    result = LinearOperator.identity(lattice.site_count + 1)
    for site in range(1, lattice.site_count + 1):
        result = result @ _site_factor(site, t, lattice, regime)
    return result


def monodromy_reference(t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    """Brute-force T_0(t): factors built entry by entry, contracted right to left."""
    site_count = lattice.site_count + 1
    dim = 2 ** site_count
    result = np.eye(dim, dtype=complex)
    for site in range(lattice.site_count, 0, -1):
        gate = s_matrix(lattice.xi_at(site), t, regime)
        factor = np.zeros((dim, dim), dtype=complex)
        for column in range(dim):
            bits = StateIndex.decode(column, site_count)
            for out_site, out_auxiliary in cartesian((0, 1), repeat=2):
                amplitude = gate[2 * out_site + out_auxiliary, 2 * bits[site - 1] + bits[-1]]
                if amplitude == 0:
                    continue
                out_bits = list(bits)
                out_bits[site - 1] = out_site
                out_bits[-1] = out_auxiliary
                factor[StateIndex.encode(out_bits), column] += amplitude
        result = factor @ result
    return LinearOperator(result, site_count)


def extract_entries(monodromy_operator: LinearOperator,
                    t: complex,
                    lattice: LatticeSpec,
                    regime: Regime) -> MonodromyEntries:
    """Split T_0 into its auxiliary blocks ⟨out|T_0|in⟩.

    A = ⟨1|T_0|1⟩, B = ⟨0|T_0|1⟩, C = ⟨1|T_0|0⟩, D = ⟨0|T_0|0⟩; the assignment is
    accepted only if it reproduces the pseudovacuum actions.
    """
    site_count = lattice.site_count
    if monodromy_operator.site_count != site_count + 1:
        raise ValueError(f"Monodromy must act on {site_count + 1} sites, got {monodromy_operator.site_count}")
    dim = 2 ** site_count
    blocks = monodromy_operator.matrix.reshape(dim, 2, dim, 2)
    entries = MonodromyEntries(A=LinearOperator(blocks[:, 1, :, 1], site_count),
                               B=LinearOperator(blocks[:, 0, :, 1], site_count),
                               C=LinearOperator(blocks[:, 1, :, 0], site_count),
                               D=LinearOperator(blocks[:, 0, :, 0], site_count),
                               t=complex(t),
                               vacuum_eigenvalue=vacuum_eigenvalue(t, lattice, regime))
    residual = vacuum_action_residual(entries)
    if residual > VACUUM_TOLERANCE * max(1.0, abs(entries.vacuum_eigenvalue)):
        logger.error(f"Vacuum actions fail at t={t} on {lattice}")
        raise ConventionError(f"Monodromy blocks violate the pseudovacuum actions (residual {residual:.3e})")
    return entries


def monodromy_entries(t: complex, lattice: LatticeSpec, regime: Regime) -> MonodromyEntries:
    return extract_entries(monodromy(t, lattice, regime), t, lattice, regime)


def vacuum_action_residual(entries: MonodromyEntries) -> float:
    site_count = entries.A.site_count
    vacuum = vacuum_state(site_count)
    residuals = [
        np.max(np.abs(entries.A @ vacuum - entries.vacuum_eigenvalue * vacuum)),
        np.max(np.abs(entries.D @ vacuum - vacuum)),
        np.max(np.abs(entries.C @ vacuum)),
    ]
    created = entries.B @ vacuum
    outside_one_particle = [abs(created[index]) for index in range(2 ** site_count)
                            if StateIndex.occupation(index) != 1]
    residuals.append(max(outside_one_particle, default=0.0))
    return float(max(residuals))


def b_operator(t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    return monodromy_entries(t, lattice, regime).B


def apply_b_operators(roots: Sequence[complex],
                      lattice: LatticeSpec,
                      regime: Regime,
                      state: Optional[np.ndarray] = None) -> np.ndarray:
    """B(q_1) B(q_2) ... B(q_M) |state⟩ (vacuum by default)."""
    vector = vacuum_state(lattice.site_count) if state is None else np.asarray(state, dtype=complex)
    for root in reversed(list(roots)):
        vector = b_operator(root, lattice, regime) @ vector
    return vector


def transfer(t: complex, lattice: LatticeSpec, regime: Regime) -> LinearOperator:
    """Z(t) = A(t) + D(t)."""
    entries = monodromy_entries(t, lattice, regime)
    return entries.A + entries.D


def eigenvalue_lambda(t: complex, roots: Sequence[complex], lattice: LatticeSpec, regime: Regime) -> complex:
    """Λ(t) = a(t) ∏_α c̃⁻¹(q_α − t) + ∏_α c̃⁻¹(t − q_α)."""
    for index, root in enumerate(roots, start=1):
        if abs(regime.phi(t - root)) < POLE_TOLERANCE:
            raise SingularWeightError(f"Λ(t) has a pole at t = q_{index} = {root}; "
                                      f"evaluate at a shifted point t ± ε instead")
    first = vacuum_eigenvalue(t, lattice, regime)
    second = complex(1)
    for root in roots:
        first *= c_tilde_inverse(root - t, regime)
        second *= c_tilde_inverse(t - root, regime)
    return first + second


def exact_spectrum(t: complex, lattice: LatticeSpec, regime: Regime) -> np.ndarray:
    return np.linalg.eigvals(transfer(t, lattice, regime).matrix)


def check_unitarity(t1: complex, t2: complex, regime: Regime) -> float:
    identity = np.eye(4, dtype=complex)
    return float(np.max(np.abs(s_matrix(t1, t2, regime) @ s_matrix(t2, t1, regime) - identity)))


def check_yang_baxter(t1: complex, t2: complex, t3: complex, regime: Regime) -> float:
    """‖S_12 S_13 S_23 − S_23 S_13 S_12‖ on three spaces."""
    s12 = apply_two_site(s_matrix(t1, t2, regime), 1, 2, 3)
    s13 = apply_two_site(s_matrix(t1, t3, regime), 1, 3, 3)
    s23 = apply_two_site(s_matrix(t2, t3, regime), 2, 3, 3)
    return (s12 @ s13 @ s23 - s23 @ s13 @ s12).max_abs()


def check_vacuum_actions(t: complex, lattice: LatticeSpec, regime: Regime) -> float:
    entries = extract_entries(monodromy(t, lattice, regime), t, lattice, regime)
    return vacuum_action_residual(entries)


def check_b_commutation(t: complex, t_prime: complex, lattice: LatticeSpec, regime: Regime) -> float:
    return b_operator(t, lattice, regime).commutator(b_operator(t_prime, lattice, regime)).max_abs()


def check_transfer_commutation(t: complex, t_prime: complex, lattice: LatticeSpec, regime: Regime) -> float:
    return transfer(t, lattice, regime).commutator(transfer(t_prime, lattice, regime)).max_abs()
