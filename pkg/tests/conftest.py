"""Shared fixtures: isolated settings, generated tables for the eager kinds."""

import pytest
import structlog

from src.config.settings import get_settings
from src.models.cells import ModelKind
from src.tables import generate_table, lazy_oracle
from src.tables.cache import clear_table_cache


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Point the table cache at a temporary directory and reset cached state."""
    monkeypatch.setenv("ACYTHIN_TABLE_CACHE_DIR", str(tmp_path / "tables"))
    monkeypatch.delenv("ACYTHIN_CHECK_INVARIANTS", raising=False)
    get_settings.cache_clear()
    clear_table_cache()
    yield
    get_settings.cache_clear()
    clear_table_cache()
    structlog.reset_defaults()


@pytest.fixture(scope="session")
def tri_table():
    return generate_table(ModelKind.SIMPLEX2)


@pytest.fixture(scope="session")
def tet_table():
    return generate_table(ModelKind.SIMPLEX3)


@pytest.fixture(scope="session")
def pixel_table():
    return generate_table(ModelKind.CUBE2)


@pytest.fixture(scope="session")
def voxel_table():
    return generate_table(ModelKind.CUBE3)


@pytest.fixture(scope="session")
def voxel_oracle():
    return lazy_oracle(ModelKind.CUBE3)


@pytest.fixture(scope="session")
def tables(tri_table, tet_table, pixel_table, voxel_table):
    return {
        ModelKind.SIMPLEX2: tri_table,
        ModelKind.SIMPLEX3: tet_table,
        ModelKind.CUBE2: pixel_table,
        ModelKind.CUBE3: voxel_table,
    }
