"""On-disk table format.

Layout, little-endian:
    magic "ACYC" | version u16 | kind tag u8 | n u8 | flags u8 | reserved u8 |
    generator fingerprint 8 bytes | 2^n bits packed LSB first | BLAKE2b-64 checksum
The checksum covers the header and the bits.
"""

import hashlib
import struct
from pathlib import Path

import numpy as np
import structlog

from src.errors import CorruptTableError
from src.models.cells import ModelKind, get_model_cell
from src.models.schemas import TableMeta
from src.tables.acyclicity import TABLE_FORMAT_VERSION, AcyclicityTable

logger = structlog.get_logger()

MAGIC = b"ACYC"
HEADER = struct.Struct("<4sHBBBx8s")
CHECKSUM_SIZE = 8
FLAG_CLOSED_ONLY = 0x01


def encode_header(table: AcyclicityTable) -> bytes:
    return HEADER.pack(
        MAGIC,
        table.meta.format_version,
        table.kind.tag,
        table.n,
        FLAG_CLOSED_ONLY if table.meta.closed_only else 0,
        bytes.fromhex(table.meta.generator_fingerprint),
    )


def _checksum(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=CHECKSUM_SIZE).digest()


def table_checksum(table: AcyclicityTable) -> str:
    """Hex checksum exactly as written at the end of the table file."""
    return _checksum(encode_header(table) + table.bits.tobytes()).hex()


def save_table(table: AcyclicityTable, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = encode_header(table) + table.bits.tobytes()
    path.write_bytes(payload + _checksum(payload))
    logger.info("table_saved", kind=table.kind.value, path=str(path), bytes=len(payload) + CHECKSUM_SIZE)
    return path


def load_table(path: str | Path) -> AcyclicityTable:
    """Read and validate a table file.

    Raises:
        CorruptTableError: Named after the first field that failed validation
        FileNotFoundError: Path does not exist
    """
    data = Path(path).read_bytes()
    if len(data) < HEADER.size + CHECKSUM_SIZE:
        raise CorruptTableError("length", f"{len(data)} bytes is shorter than the header")
    magic, version, tag, n, flags, fingerprint = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptTableError("magic", f"expected {MAGIC!r}, found {magic!r}")
    if version != TABLE_FORMAT_VERSION:
        raise CorruptTableError("version", f"unsupported format version {version}")
    try:
        kind = ModelKind.from_tag(tag)
    except ValueError as exc:
        raise CorruptTableError("kind", str(exc)) from exc
    if n != kind.element_count:
        raise CorruptTableError("n", f"{kind.value} has {kind.element_count} elements, header says {n}")
    expected = HEADER.size + (1 << n) // 8 + CHECKSUM_SIZE
    if len(data) != expected:
        raise CorruptTableError("length", f"expected {expected} bytes, found {len(data)}")
    if _checksum(data[:-CHECKSUM_SIZE]) != data[-CHECKSUM_SIZE:]:
        raise CorruptTableError("checksum", "table contents do not match the stored checksum")
    if fingerprint.hex() != get_model_cell(kind).fingerprint:
        raise CorruptTableError(
            "fingerprint", "table was generated for a different boundary ordering or sign convention"
        )

    bits = np.frombuffer(data, dtype=np.uint8, count=(1 << n) // 8, offset=HEADER.size).copy()
    meta = TableMeta(
        format_version=version,
        generator_fingerprint=fingerprint.hex(),
        closed_only=bool(flags & FLAG_CLOSED_ONLY),
    )
    logger.debug("table_loaded", kind=kind.value, path=str(path))
    return AcyclicityTable(kind, bits, meta)
