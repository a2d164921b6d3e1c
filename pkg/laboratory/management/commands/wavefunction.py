from pathlib import Path

from django.core.management.base import CommandError

from integrability.errors import DegenerateParametersError, PermutationCapError
from laboratory.documents import ProvenanceMismatchError
from laboratory.management.base import LaboratoryCommand
from laboratory.runs import run_wavefunction


class Command(LaboratoryCommand):
    help = "Export formula and oracle wave tables for a stored root set"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--roots", type=Path, required=True, help="Roots document written by `solve`")
        parser.add_argument("--out", type=Path, help="Wave table path (default: <output-dir>/wavetable.csv)")

    def handle(self, *args, **options):
        config = self.load_config(options)
        try:
            statistic, path = run_wavefunction(config, options["roots"], options.get("out"))
        except FileNotFoundError as e:
            raise CommandError(f"Roots document not found: {e}") from e
        except ProvenanceMismatchError as e:
            raise CommandError(f"Refusing mismatched roots: {e}") from e
        except (ValueError, DegenerateParametersError, PermutationCapError) as e:
            raise CommandError(f"Wave function export failed: {e}") from e
        self.stdout.write(f"Ratio formula/oracle {statistic.constant:.12g}, relative spread "
                          f"{statistic.relative_spread:.3e}\nWritten to {path}\n")
