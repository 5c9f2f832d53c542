import pytest

from hsint.logint import context


@pytest.fixture
def cold_cache():
    """Budgets count branches actually explored, so start without memoised curve data."""
    context.cache_clear()
    yield
    context.cache_clear()
