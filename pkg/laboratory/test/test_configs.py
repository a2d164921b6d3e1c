import tempfile
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from laboratory.configs import RANDOM_XI, RunConfig
from laboratory.validators import validate_anisotropy, validate_permutation_cap, validate_site_count


class RunConfigValidationTestCase(SimpleTestCase):

    def assertInvalid(self, field: str, **values):
        with self.assertRaises(ValidationError) as context:
            RunConfig(**values).full_clean()
        self.assertIn(field, context.exception.error_dict)

    def test_defaults_are_valid(self):
        config = RunConfig()
        config.full_clean()
        self.assertEqual(config.seed, settings.LAB_SEED)
        self.assertEqual(config.tolerance, settings.LAB_TOLERANCE)

    def test_more_roots_than_sites(self):
        self.assertInvalid("M", L=3, M=4)

    def test_negative_roots(self):
        self.assertInvalid("M", M=-1)

    def test_non_positive_tolerance(self):
        self.assertInvalid("tolerance", tolerance=0)

    def test_explicit_xi_must_match_lattice(self):
        self.assertInvalid("xi", L=3, xi=(0.1, 0.2))

    def test_unknown_regime(self):
        self.assertInvalid("regime", regime="elliptic")

    def test_degenerate_anisotropy(self):
        self.assertInvalid("eta", regime="trigonometric", eta=0)

    def test_lattice_too_large(self):
        self.assertInvalid("L", L=12, M=1)

    def test_validators(self):
        self.assertRaises(ValidationError, lambda: validate_anisotropy("rational", 0))
        self.assertRaises(ValidationError, lambda: validate_site_count(0))
        self.assertRaises(ValidationError, lambda: validate_permutation_cap(0))


class RunConfigDocumentTestCase(SimpleTestCase):

    def test_complex_values_are_decoded(self):
        config = RunConfig.from_document({"eta": [0.5, 0.1], "L": 2, "M": 1, "xi": [[0.1, 0.0], 0.2]})
        self.assertEqual(config.eta, 0.5 + 0.1j)
        self.assertEqual(config.xi, (0.1 + 0j, 0.2 + 0j))
        config.full_clean()

    def test_random_xi(self):
        self.assertIsNone(RunConfig.from_document({"xi": RANDOM_XI}).xi)
        self.assertEqual(RunConfig().to_document()["xi"], RANDOM_XI)

    def test_unknown_key(self):
        self.assertRaises(ValidationError, lambda: RunConfig.from_document({"sites": 4}))

    def test_malformed_complex(self):
        self.assertRaises(ValidationError, lambda: RunConfig.from_document({"eta": [1, 2, 3]}))

    def test_missing_file(self):
        self.assertRaises(ValidationError, lambda: RunConfig.from_file(Path("/nonexistent/lab.json")))

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "lab.json"
            path.write_text("{not json")
            self.assertRaises(ValidationError, lambda: RunConfig.from_file(path))

    def test_example_file_is_valid(self):
        config = RunConfig.from_file(Path(settings.BASE_DIR) / "lab.example.json")
        config.full_clean()
        self.assertEqual(config.L, 6)
        self.assertIsNone(config.xi)

    def test_document_round_trip(self):
        config = RunConfig(regime="trigonometric", eta=0.9 + 0.1j, L=3, M=1, xi=(0.1, 0.2j, -0.1))
        self.assertEqual(RunConfig.from_document(config.to_document()), config)


class RunConfigLatticeTestCase(SimpleTestCase):

    def test_same_seed_same_lattice(self):
        config = RunConfig(L=4, seed=3)
        self.assertEqual(config.build_lattice(config.generator()), config.build_lattice(config.generator()))

    def test_explicit_xi(self):
        config = RunConfig(L=2, M=1, xi=(0, 0))
        self.assertEqual(config.build_lattice(config.generator()).xi, (0j, 0j))

    def test_solver_settings(self):
        config = RunConfig(solver_legs=7)
        self.assertEqual(config.solver_settings().legs, 7)
        self.assertEqual(config.solver_settings().tolerance, settings.LAB_SOLVER_TOLERANCE)
