"""Bundled structure and machine files."""
from importlib import resources

from ..lattice_core import FiniteStructure, parse_structure


def fixture_text(filename: str) -> str:
    return resources.files(__name__).joinpath(filename).read_text(encoding="utf-8")


def fixture_path(filename: str):
    return resources.files(__name__).joinpath(filename)


def load_fixture(name: str) -> FiniteStructure:
    """Load ``<name>.lat`` from the bundled set."""
    return parse_structure(fixture_text(f"{name}.lat"))


def fixture_names(suffix: str = ".lat") -> list:
    return sorted(p.name[: -len(suffix)] for p in resources.files(__name__).iterdir()
                  if p.name.endswith(suffix))
