"""Entry points behind the management commands."""
from logging import getLogger
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from integrability import dwbc
from integrability.bethe import BetheRoots, solve_bae
from integrability.utils import ComplexCodec
from integrability.wavefunction import RatioStatistic, ratio_statistic, wave_table_formula, wave_table_oracle

from .configs import RunConfig
from .documents import (DWBC_FILE,
                        ROOTS_FILE,
                        WAVE_TABLE_FILE,
                        ProvenanceMismatchError,
                        read_roots,
                        write_json,
                        write_report,
                        write_roots,
                        write_wave_table)
from .reports import CheckReport
from .suite import VerificationSuite

logger = getLogger(__name__)

# the matrix-element oracle builds dense operators on M + 1 sites
ORACLE_MAX_SIZE = 8


def run_verify(config: RunConfig, write: bool = True) -> CheckReport:
    config.full_clean()
    report = VerificationSuite(config).run()
    if write:
        write_report(report, Path(config.output_dir))
    return report


def run_solve(config: RunConfig, out_path: Optional[Path] = None) -> Tuple[BetheRoots, Path]:
    config.full_clean()
    rng = config.generator()
    lattice = config.build_lattice(rng)
    roots = solve_bae(config.M, lattice, config.build_regime(), config.seed, config.solver_settings())
    path = write_roots(roots, Path(out_path) if out_path else Path(config.output_dir) / ROOTS_FILE)
    return roots, path


def run_wavefunction(config: RunConfig,
                     roots_path: Path,
                     out_path: Optional[Path] = None) -> Tuple[RatioStatistic, Path]:
    """Formula and oracle wave tables for a stored root set; nothing is written unless both succeed."""
    config.full_clean()
    roots = read_roots(roots_path)
    regime = config.build_regime()
    lattice = config.build_lattice(config.generator())
    if not roots.matches(lattice, regime):
        raise ProvenanceMismatchError(f"Roots in {roots_path} were solved for {roots.lattice}, {roots.regime}; "
                                      f"this run describes {lattice}, {regime}")
    formula = wave_table_formula(roots.q, lattice, regime, config.permutation_cap)
    oracle = wave_table_oracle(roots.q, lattice, regime)
    statistic = ratio_statistic(formula, oracle)
    logger.info(f"Wave function ratio {statistic.constant:.12g}, relative spread {statistic.relative_spread:.3e} "
                f"over {statistic.used} configurations ({statistic.excluded} excluded)")
    path = Path(out_path) if out_path else Path(config.output_dir) / WAVE_TABLE_FILE
    write_wave_table(path, formula, oracle, statistic, roots)
    return statistic, path


def run_dwbc(config: RunConfig, size: Optional[int] = None) -> Tuple[Dict[str, Any], Path]:
    config.full_clean()
    size = config.dwbc_size if size is None else size
    regime = config.build_regime()
    data = dwbc.sample_input(size, regime, config.generator())
    result = dwbc.benchmark(data, config.permutation_cap)
    document: Dict[str, Any] = {
        "M": size,
        "regime": str(regime.family),
        "eta": ComplexCodec.encode(regime.eta),
        "mu": ComplexCodec.encode_list(data.mu),
        "q": ComplexCodec.encode_list(data.q),
        "permutation_sum": ComplexCodec.encode(result.permutation_sum),
        "recurrence": ComplexCodec.encode(result.recurrence),
        "relative_error": result.relative_error,
        "row_symmetry_spread": dwbc.row_symmetry_spread(data),
        "wall_time": {"permutation_sum": result.sum_seconds, "recurrence": result.recurrence_seconds},
    }
    if size <= ORACLE_MAX_SIZE:
        document["oracle"] = ComplexCodec.encode(dwbc.phi_oracle(data))
    path = write_json(Path(config.output_dir) / DWBC_FILE, document)
    return document, path

