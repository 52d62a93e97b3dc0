"""Process-wide table cache backing --auto-table.

Tables live on disk under <table_cache_dir>/<kind>-v<version>.acy and in a
module-level dict once loaded.
"""

from pathlib import Path

import structlog

from src.config.settings import get_settings
from src.errors import CorruptTableError
from src.models.cells import ModelKind
from src.tables.acyclicity import TABLE_FORMAT_VERSION, AcyclicityLookup, generate_table, lazy_oracle
from src.tables.storage import load_table, save_table

logger = structlog.get_logger()

# Module-level singleton
_tables: dict[tuple[ModelKind, bool], AcyclicityLookup] = {}


def table_cache_path(kind: ModelKind, cache_dir: Path | None = None) -> Path:
    cache_dir = Path(cache_dir) if cache_dir is not None else get_settings().table_cache_dir
    return cache_dir.expanduser() / f"{kind.value}-v{TABLE_FORMAT_VERSION}.acy"


def get_table(
    kind: ModelKind,
    eager_simplex4: bool = False,
    jobs: int | None = None,
    cache_dir: Path | None = None,
) -> AcyclicityLookup:
    """Get or create the table for a kind.

    Simplex4 is served by the lazy oracle unless eager_simplex4 is set. Other kinds
    are loaded from the cache directory, or generated and saved there. A corrupt
    cache file is regenerated.
    """
    key = (kind, eager_simplex4 and kind is ModelKind.SIMPLEX4)
    cached = _tables.get(key)
    if cached is not None:
        return cached

    if kind is ModelKind.SIMPLEX4 and not eager_simplex4:
        _tables[key] = lazy_oracle(kind)
        return _tables[key]

    path = table_cache_path(kind, cache_dir)
    table = None
    if path.exists():
        try:
            table = load_table(path)
            logger.info("table_cache_hit", kind=kind.value, path=str(path))
        except CorruptTableError as exc:
            logger.warning("table_cache_corrupt", kind=kind.value, path=str(path), field=exc.field)
    if table is None:
        table = generate_table(kind, jobs=jobs or get_settings().jobs, eager_simplex4=eager_simplex4)
        save_table(table, path)
    _tables[key] = table
    return table


def clear_table_cache() -> None:
    """Forget loaded tables. Files on disk are kept."""
    _tables.clear()
