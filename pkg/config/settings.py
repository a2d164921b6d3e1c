"""
Django settings for the verification laboratory.

The project has no web surface and no database: Django provides settings,
logging configuration, management commands and the test runner.
"""
import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get("SECRET_KEY", "laboratory-has-no-web-surface")

# If debug variable is presented then it is debug mode. The value of debug variable has no actual effect
DEBUG = "DEBUG" in os.environ

ALLOWED_HOSTS: list = []

INSTALLED_APPS = [
    'laboratory',
]

DATABASES: dict = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "level": os.environ.get("LAB_LOG_LEVEL", "INFO"),
            "formatter": "verbose"
        },
    },
    "root": {
        "handlers": ["console"],
        "level": os.environ.get("LAB_LOG_LEVEL", "INFO"),
    },
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {message}",
            "style": "{",
        },
        "simple": {
            "format": "{levelname} {asctime} {message}",
            "style": "{",
        },
    }
}

# Laboratory defaults; a run configuration file overrides them per run

LAB_TOLERANCE = float(os.environ.get("LAB_TOLERANCE", "1e-10"))

LAB_SEED = int(os.environ.get("LAB_SEED", "20240101"))

LAB_PERMUTATION_CAP = int(os.environ.get("LAB_PERMUTATION_CAP", "9"))

LAB_OUTPUT_DIR = os.environ.get("LAB_OUTPUT_DIR", str(BASE_DIR / "output"))

LAB_SOLVER_LEGS = int(os.environ.get("LAB_SOLVER_LEGS", "20"))

LAB_SOLVER_STEPS = int(os.environ.get("LAB_SOLVER_STEPS", "200"))

LAB_SOLVER_TOLERANCE = float(os.environ.get("LAB_SOLVER_TOLERANCE", "1e-12"))
