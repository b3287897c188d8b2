"""Shared fixtures: the two shipped level-one Maass cusp forms."""

import pytest

from periodlab.maass_forms import fixture_directory, load_form


def _find(prefix: str):
    for path in sorted(fixture_directory().glob(f"{prefix}_*.json")):
        return load_form(str(path))
    raise FileNotFoundError(f"no {prefix} fixture installed")


@pytest.fixture(scope="session")
def even_form():
    return _find("even")


@pytest.fixture(scope="session")
def odd_form():
    return _find("odd")
