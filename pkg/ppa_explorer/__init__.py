"""Quantization-aware PPA modeling and design space exploration."""
import os

from ppa_explorer.config import Config

__version__ = Config.TOOL_VERSION

DATA_DIR = os.path.join(os.path.abspath(os.path.dirname(__file__)), 'data')


def data_path(filename: str) -> str:
    """Absolute path of a bundled data file."""
    return os.path.join(DATA_DIR, filename)
