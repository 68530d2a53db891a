"""Bundled example programs."""
from importlib import resources
from pathlib import Path


def grover_path() -> Path:
    """Filesystem path of the bundled Grover search program."""
    return Path(str(resources.files(__package__) / "grover.qdl"))


def grover_source() -> str:
    return (resources.files(__package__) / "grover.qdl").read_text()
