from pathlib import Path
from typing import Any, Dict

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from laboratory.configs import RunConfig


def validation_message(error: ValidationError) -> str:
    if hasattr(error, "error_dict"):
        return "; ".join(f"{field}: {' '.join(messages)}" for field, messages in error.message_dict.items())
    return " ".join(error.messages)


class LaboratoryCommand(BaseCommand):
    """Shared flags of the laboratory commands: configuration file and its overrides."""

    def add_arguments(self, parser):
        parser.add_argument("--config", type=Path, help="JSON run configuration (defaults from settings if omitted)")
        parser.add_argument("--tolerance", type=float, help="Override the check tolerance")
        parser.add_argument("--seed", type=int, help="Override the random seed")
        parser.add_argument("--output-dir", type=Path, help="Directory for written files")

    def load_config(self, options: Dict[str, Any]) -> RunConfig:
        try:
            config = RunConfig.from_file(options["config"]) if options.get("config") else RunConfig()
            if options.get("tolerance") is not None:
                config.tolerance = options["tolerance"]
            if options.get("seed") is not None:
                config.seed = options["seed"]
            if options.get("output_dir") is not None:
                config.output_dir = str(options["output_dir"])
            config.full_clean()
        except (ValidationError, TypeError) as e:
            message = validation_message(e) if isinstance(e, ValidationError) else str(e)
            raise CommandError(f"Invalid run configuration: {message}") from e
        return config
