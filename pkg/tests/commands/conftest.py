import json

import pytest
from click.testing import CliRunner

from ppa_explorer import data_path
from ppa_explorer.config import Config


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def write_arch(tmp_path):
    """Default architecture with overrides, written to a file."""
    def _write(**overrides) -> str:
        with open(data_path(Config.ARCH_FILE), 'r', encoding='utf-8') as f:
            arch = json.load(f)
        arch.update(overrides)
        path = tmp_path / 'arch.json'
        path.write_text(json.dumps(arch))
        return str(path)
    return _write
