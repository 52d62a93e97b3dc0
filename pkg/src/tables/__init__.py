"""Acyclicity tables: generation, storage, analysis and the on-disk cache."""

from src.tables.acyclicity import (
    TABLE_FORMAT_VERSION,
    AcyclicityLookup,
    AcyclicityTable,
    LazyOracle,
    generate_table,
    iter_closed_masks,
    lazy_oracle,
)
from src.tables.analysis import analyze_euler_claims, audit_collapsibility, table_stats
from src.tables.storage import load_table, save_table

__all__ = [
    "TABLE_FORMAT_VERSION",
    "AcyclicityLookup",
    "AcyclicityTable",
    "LazyOracle",
    "analyze_euler_claims",
    "audit_collapsibility",
    "generate_table",
    "iter_closed_masks",
    "lazy_oracle",
    "load_table",
    "save_table",
    "table_stats",
]
