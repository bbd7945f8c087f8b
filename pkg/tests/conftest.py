import os

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from src.config import settings

hypothesis_settings.register_profile(
    "ci",
    max_examples=300,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
hypothesis_settings.register_profile("dev", max_examples=60, deadline=None)
hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive acceptance grids (deselect with -m 'not slow')")


@pytest.fixture
def full_divisor_sums(monkeypatch):
    """Divisor sums over every divisor instead of the squarefree ones"""
    monkeypatch.setattr(settings, "FULL_DIVISOR_SUMS", True)


@pytest.fixture
def paper_literal_default(monkeypatch):
    monkeypatch.setattr(settings, "DEFAULT_MEET_MODE", "paper-literal")
