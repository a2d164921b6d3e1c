"""Files written and read by the laboratory. Every write is atomic: temporary file, then rename."""
import csv
import io
import json
import os
import tempfile
from logging import getLogger
from pathlib import Path
from typing import Any, Dict, List, Tuple

from integrability.bethe import BetheRoots
from integrability.utils import ComplexCodec
from integrability.wavefunction import RatioStatistic, WaveTable

from .reports import CheckReport

logger = getLogger(__name__)

REPORT_JSON = "report.json"
REPORT_TABLE = "report.txt"
ROOTS_FILE = "roots.json"
WAVE_TABLE_FILE = "wavetable.csv"
DWBC_FILE = "dwbc.json"


class ProvenanceMismatchError(ValueError):
    """A roots document was solved for another lattice or regime."""


def atomic_write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    descriptor, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(descriptor, "w", encoding="utf-8", newline="") as stream:
            stream.write(text)
            stream.flush()
            os.fsync(stream.fileno())
        os.replace(temporary, path)
    except BaseException:
        Path(temporary).unlink(missing_ok=True)
        raise
    logger.info(f"Wrote {path}")
    return path


def dump_json(document: Any) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, document: Any) -> Path:
    return atomic_write_text(path, dump_json(document))


def read_json(path: Path) -> Dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"File {path} does not exist")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"File {path} is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise ValueError(f"File {path} must hold a JSON object")
    return document


def write_report(report: CheckReport, output_dir: Path) -> Tuple[Path, Path]:
    output_dir = Path(output_dir)
    return (atomic_write_text(output_dir / REPORT_JSON, report.to_json()),
            atomic_write_text(output_dir / REPORT_TABLE, report.to_table()))


def write_roots(roots: BetheRoots, path: Path) -> Path:
    return write_json(path, roots.to_document())


def read_roots(path: Path) -> BetheRoots:
    return BetheRoots.from_document(read_json(path))


def wave_table_rows(formula: WaveTable, oracle: WaveTable) -> List[List[str]]:
    if formula.magnon_count != oracle.magnon_count:
        raise ValueError("Formula and oracle tables describe different numbers of particles")
    header = [f"x_{i}" for i in range(1, formula.magnon_count + 1)] + ["re", "im", "provenance"]
    rows = [header]
    for table in (formula, oracle):
        for configuration in table.configurations():
            value = table.entries[configuration]
            rows.append([str(site) for site in configuration] + [repr(float(value.real)), repr(float(value.imag)),
                                                                  str(table.provenance)])
    return rows


def render_wave_table(formula: WaveTable, oracle: WaveTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(wave_table_rows(formula, oracle))
    return buffer.getvalue()


def ratio_document(statistic: RatioStatistic, roots: BetheRoots) -> Dict[str, Any]:
    return {
        "constant": ComplexCodec.encode(statistic.constant),
        "relative_spread": statistic.relative_spread,
        "used": statistic.used,
        "excluded": statistic.excluded,
        "roots": roots.to_document(),
    }


def ratio_path(wave_table_path: Path) -> Path:
    path = Path(wave_table_path)
    return path.with_name(f"{path.stem}.ratio.json")


def write_wave_table(path: Path, formula: WaveTable, oracle: WaveTable, statistic: RatioStatistic,
                     roots: BetheRoots) -> Tuple[Path, Path]:
    table_text = render_wave_table(formula, oracle)
    sidecar_text = dump_json(ratio_document(statistic, roots))
    return atomic_write_text(path, table_text), atomic_write_text(ratio_path(path), sidecar_text)


def read_wave_table(path: Path) -> Dict[str, Dict[Tuple[int, ...], complex]]:
    """Provenance -> configuration -> amplitude, as written by `write_wave_table`."""
    tables: Dict[str, Dict[Tuple[int, ...], complex]] = {}
    with Path(path).open(encoding="utf-8", newline="") as stream:
        reader = csv.reader(stream)
        header = next(reader)
        size = len(header) - 3
        for row in reader:
            configuration = tuple(int(site) for site in row[:size])
            tables.setdefault(row[-1], {})[configuration] = complex(float(row[size]), float(row[size + 1]))
    return tables
