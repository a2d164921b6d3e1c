import re
from pathlib import Path

from django.conf import settings
from django.test import SimpleTestCase

from laboratory.checks import DEFAULT_CHECKS


class ReadmeTestCase(SimpleTestCase):
    text: str

    def setUp(self) -> None:
        self.text = (Path(settings.BASE_DIR) / "README.md").read_text()

    def test_images_exist(self):
        for target in re.findall(r"!\[[^\]]*\]\(([^)]+)\)", self.text):
            self.assertTrue((Path(settings.BASE_DIR) / target).is_file(), target)

    def test_every_check_is_listed(self):
        for check in DEFAULT_CHECKS:
            self.assertIn(f"`{check.name}`", self.text)
