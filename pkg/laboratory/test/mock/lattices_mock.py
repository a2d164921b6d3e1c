import json
from pathlib import Path
from typing import Any, Dict

from integrability.vertex_model import LatticeSpec
from integrability.weights import Regime, RegimeFamily

RATIONAL = Regime(RegimeFamily.rational, 1)
TRIGONOMETRIC = Regime(RegimeFamily.trigonometric, 0.9)

# two coinciding sites at zero with one root: every amplitude is known in closed form
CLOSED_LATTICE = LatticeSpec(2, (0, 0))
CLOSED_ROOT = 0.5

LATTICE_4 = LatticeSpec(4, (0.1 + 0.05j, -0.25 + 0.1j, 0.3 - 0.15j, -0.05 - 0.3j))
LATTICE_5 = LatticeSpec(5, (0.1 + 0.05j, -0.2 + 0.1j, 0.25 - 0.15j, -0.05 - 0.25j, 0.15 + 0.2j))

# distinct roots that solve nothing in particular
OFF_SHELL_ROOTS = (0.4 + 0.3j, 0.6 - 0.2j, 0.55 + 0.1j)

SPECTRAL_POINTS = (0.2 + 0.1j, -0.3 + 0.25j, 0.05 - 0.2j)


def small_run_document(output_dir: Path, **overrides: Any) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "regime": "rational",
        "eta": [1.0, 0.0],
        "L": 3,
        "M": 1,
        "xi": "random",
        "spectral_samples": 2,
        "dwbc_size": 3,
        "dwbc_samples": 2,
        "output_dir": str(output_dir),
    }
    document.update(overrides)
    return document


def write_run_config(path: Path, output_dir: Path, **overrides: Any) -> Path:
    path.write_text(json.dumps(small_run_document(output_dir, **overrides)))
    return path
