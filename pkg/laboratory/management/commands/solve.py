from pathlib import Path

from django.core.management.base import CommandError

from integrability.errors import DegenerateRootsError, RootCollisionError, SolverFailureError
from laboratory.management.base import LaboratoryCommand
from laboratory.runs import run_solve


class Command(LaboratoryCommand):
    help = "Solve the Bethe equations for the configured lattice and write the roots document"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--out", type=Path, help="Roots document path (default: <output-dir>/roots.json)")

    def handle(self, *args, **options):
        config = self.load_config(options)
        try:
            roots, path = run_solve(config, options.get("out"))
        except (SolverFailureError, RootCollisionError, DegenerateRootsError) as e:
            raise CommandError(f"Root solve failed: {e}") from e
        self.stdout.write(f"{roots}\nWritten to {path}\n")
