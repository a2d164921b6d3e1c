from django.core.management.base import CommandError

from laboratory.management.base import LaboratoryCommand
from laboratory.runs import run_verify


class Command(LaboratoryCommand):
    help = "Run the full verification suite and write report.json and report.txt"

    def handle(self, *args, **options):
        config = self.load_config(options)
        report = run_verify(config)
        self.stdout.write(report.to_table())
        if not report.passed:
            names = ", ".join(record.name for record in report.failures)
            raise CommandError(f"{len(report.failures)} of {len(report.records)} checks failed: {names}")
