from pathlib import Path

import pytest

TESTS = Path(__file__).parent


@pytest.fixture
def golden_dir():
    return TESTS / "golden"


@pytest.fixture
def fixtures_dir():
    return TESTS / "fixtures"


@pytest.fixture
def docs_dir():
    return TESTS.parent / "docs"
