import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import CommandError, call_command
from django.test import SimpleTestCase

from laboratory.documents import (DWBC_FILE,
                                  REPORT_JSON,
                                  REPORT_TABLE,
                                  ROOTS_FILE,
                                  WAVE_TABLE_FILE,
                                  ratio_path,
                                  read_json,
                                  read_wave_table)
from laboratory.test.mock.lattices_mock import CLOSED_ROOT, write_run_config


class CommandTestCase(SimpleTestCase):
    directory: tempfile.TemporaryDirectory
    output_dir: Path

    def setUp(self) -> None:
        self.directory = tempfile.TemporaryDirectory()
        self.output_dir = Path(self.directory.name) / "output"

    def tearDown(self) -> None:
        self.directory.cleanup()

    def config_path(self, name: str = "lab.json", **overrides) -> Path:
        return write_run_config(Path(self.directory.name) / name, self.output_dir, **overrides)

    def call(self, command: str, **options) -> str:
        stdout = StringIO()
        call_command(command, stdout=stdout, **options)
        return stdout.getvalue()


class VerifyCommandTestCase(CommandTestCase):

    def test_writes_report(self):
        output = self.call("verify", config=self.config_path())
        self.assertIn("checks passed", output)
        self.assertTrue((self.output_dir / REPORT_TABLE).is_file())
        report = read_json(self.output_dir / REPORT_JSON)
        self.assertTrue(report["passed"])

    def test_failing_checks_give_nonzero_exit(self):
        with self.assertRaises(CommandError):
            self.call("verify", config=self.config_path(), tolerance=1e-30)
        self.assertFalse(read_json(self.output_dir / REPORT_JSON)["passed"])

    def test_invalid_configuration(self):
        with self.assertRaisesRegex(CommandError, "Invalid run configuration"):
            self.call("verify", config=self.config_path(L=0))
        with self.assertRaises(CommandError):
            self.call("verify", config=self.config_path(sites=3))
        self.assertFalse(self.output_dir.exists())


class SolveAndWavefunctionTestCase(CommandTestCase):

    def closed_config(self, name: str = "closed.json", **overrides) -> Path:
        values = {"L": 2, "M": 1, "xi": [0, 0]}
        values.update(overrides)
        return self.config_path(name, **values)

    def test_closed_case(self):
        config = self.closed_config()
        self.call("solve", config=config)
        roots = read_json(self.output_dir / ROOTS_FILE)
        self.assertAlmostEqual(roots["q"][0][0], CLOSED_ROOT, places=10)
        self.assertAlmostEqual(roots["q"][0][1], 0, places=10)

        output = self.call("wavefunction", config=config, roots=self.output_dir / ROOTS_FILE)
        self.assertIn("relative spread", output)
        tables = read_wave_table(self.output_dir / WAVE_TABLE_FILE)
        for provenance in ("formula", "oracle"):
            self.assertAlmostEqual(tables[provenance][(1,)], -2, places=10)
            self.assertAlmostEqual(tables[provenance][(2,)], 2, places=10)
        ratio = read_json(ratio_path(self.output_dir / WAVE_TABLE_FILE))
        self.assertAlmostEqual(ratio["constant"][0], 1, places=10)

    def test_custom_output_paths(self):
        config = self.closed_config()
        roots_path = Path(self.directory.name) / "mine" / "roots.json"
        table_path = Path(self.directory.name) / "mine" / "table.csv"
        self.call("solve", config=config, out=roots_path)
        self.call("wavefunction", config=config, roots=roots_path, out=table_path)
        self.assertTrue(table_path.is_file())
        self.assertTrue(ratio_path(table_path).is_file())

    def test_missing_roots_write_nothing(self):
        with self.assertRaisesRegex(CommandError, "not found"):
            self.call("wavefunction", config=self.closed_config(), roots=Path(self.directory.name) / "none.json")
        self.assertFalse((self.output_dir / WAVE_TABLE_FILE).exists())

    def test_mismatched_roots_are_refused(self):
        self.call("solve", config=self.closed_config())
        other = self.closed_config("other.json", xi=[0.1, 0])
        with self.assertRaisesRegex(CommandError, "mismatched"):
            self.call("wavefunction", config=other, roots=self.output_dir / ROOTS_FILE)
        self.assertFalse((self.output_dir / WAVE_TABLE_FILE).exists())

    def test_empty_sector(self):
        config = self.closed_config(M=0)
        self.call("solve", config=config)
        self.call("wavefunction", config=config, roots=self.output_dir / ROOTS_FILE)
        lines = (self.output_dir / WAVE_TABLE_FILE).read_text().splitlines()
        self.assertEqual(lines[0], "re,im,provenance")
        self.assertEqual(len(lines), 3)
        tables = read_wave_table(self.output_dir / WAVE_TABLE_FILE)
        self.assertEqual(tables, {"formula": {(): 1}, "oracle": {(): 1}})


class DwbcCommandTestCase(CommandTestCase):

    def test_writes_benchmark(self):
        output = self.call("dwbc", config=self.config_path(), size=3)
        self.assertIn("Φ_3", output)
        document = json.loads((self.output_dir / DWBC_FILE).read_text())
        self.assertEqual(document["M"], 3)
        self.assertLess(document["relative_error"], 1e-10)
        self.assertIn("oracle", document)
        self.assertEqual(set(document["wall_time"]), {"permutation_sum", "recurrence"})

    def test_size_above_cap(self):
        with self.assertRaises(CommandError):
            self.call("dwbc", config=self.config_path(permutation_cap=3), size=4)
