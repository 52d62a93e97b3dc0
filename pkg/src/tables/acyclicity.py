"""Acyclicity tables: one bit per configuration of a model cell.

Bit j of a table answers whether the configuration with canonical index j is
acyclic. Only closed configurations can be acyclic. Every other entry is 0.
"""

import threading
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Protocol

import numpy as np
import structlog

from src.errors import KindMismatchError, MalformedCellError, TableRefusedError
from src.homology.chain_complex import mask_is_acyclic
from src.models.cells import Configuration, ModelCell, ModelKind, get_model_cell
from src.models.schemas import TableMeta

logger = structlog.get_logger()

TABLE_FORMAT_VERSION = 1


class AcyclicityLookup(Protocol):
    """What the thinning engine needs from a table."""

    kind: ModelKind

    def lookup(self, index: int) -> bool: ...

    def require_kind(self, kind: ModelKind) -> None: ...


def _require_kind(own: ModelKind, other: ModelKind) -> None:
    if own is not other:
        raise KindMismatchError(f"{own.value} table used with a {other.value} complex")


class AcyclicityTable:
    """Immutable bit-packed table (least-significant bit first within each byte)."""

    def __init__(self, kind: ModelKind, bits: np.ndarray, meta: TableMeta):
        expected = (1 << kind.element_count) // 8
        if bits.dtype != np.uint8 or bits.shape != (expected,):
            raise ValueError(f"{kind.value} table needs {expected} packed bytes, got {bits.shape}")
        self.kind = kind
        self.meta = meta
        self.bits = bits
        self.bits.flags.writeable = False
        self._bytes = bits.tobytes()

    @property
    def n(self) -> int:
        return self.kind.element_count

    def lookup(self, index: int) -> bool:
        return bool(self._bytes[index >> 3] >> (index & 7) & 1)

    def query(self, c: Configuration) -> bool:
        self.require_kind(c.kind)
        return self.lookup(c.mask)

    def require_kind(self, kind: ModelKind) -> None:
        _require_kind(self.kind, kind)

    def acyclic_count(self) -> int:
        return int(np.unpackbits(self.bits).sum(dtype=np.int64))

    def set_indices(self) -> np.ndarray:
        """Canonical indices of all set bits, ascending."""
        return np.flatnonzero(np.unpackbits(self.bits, bitorder="little"))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AcyclicityTable):
            return NotImplemented
        return self.kind is other.kind and self._bytes == other._bytes

    def __repr__(self) -> str:
        return f"AcyclicityTable(kind={self.kind.value}, n={self.n})"


class LazyOracle:
    """Memoizing acyclicity oracle that computes entries on first use.

    Safe for concurrent queries: a racing computation stores the same verdict.
    """

    def __init__(self, kind: ModelKind):
        self.kind = kind
        self._model = get_model_cell(kind)
        self._memo: dict[int, bool] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def lookup(self, index: int) -> bool:
        verdict = self._memo.get(index)
        if verdict is not None:
            self.hits += 1
            return verdict
        if not 0 <= index <= self._model.full_mask:
            raise MalformedCellError(f"index {index} outside the {self.kind.value} table")
        verdict = self._model.is_closed_mask(index) and mask_is_acyclic(self._model, index)
        with self._lock:
            self.misses += 1
            return self._memo.setdefault(index, verdict)

    def query(self, c: Configuration) -> bool:
        self.require_kind(c.kind)
        return self.lookup(c.mask)

    def require_kind(self, kind: ModelKind) -> None:
        _require_kind(self.kind, kind)

    def __len__(self) -> int:
        return len(self._memo)


def lazy_oracle(kind: ModelKind) -> LazyOracle:
    return LazyOracle(kind)


def iter_closed_masks(model: ModelCell, start: int = 0, mask: int = 0) -> Iterator[int]:
    """Depth-first enumeration of closed configurations.

    Elements are decided in ordinal order. Faces precede cofaces in every ordering,
    so an element may join only when all of its faces are already in.

    Args:
        model: Model cell
        start: 0-based position of the first undecided element
        mask: Members already fixed for positions below start
    """
    n = model.n
    face_masks = model.face_masks

    def walk(position: int, current: int) -> Iterator[int]:
        if position == n:
            yield current
            return
        yield from walk(position + 1, current)
        if not face_masks[position + 1] & ~current:
            yield from walk(position + 1, current | 1 << position)

    return walk(start, mask)


def _acyclic_masks(kind: ModelKind, vertex_subsets: list[int]) -> np.ndarray:
    """Acyclic closed masks whose vertex part is one of the given subsets."""
    model = get_model_cell(kind)
    vertices = kind.vertex_count
    found = [
        mask
        for subset in vertex_subsets
        for mask in iter_closed_masks(model, start=vertices, mask=subset)
        if mask_is_acyclic(model, mask)
    ]
    return np.asarray(found, dtype=np.int64)


def generate_table(
    kind: ModelKind, jobs: int = 1, eager_simplex4: bool = False
) -> AcyclicityTable:
    """Compute the full acyclicity table of a model kind.

    The enumeration is split by vertex subset across worker processes and merged by
    bitwise OR, so the result does not depend on jobs.

    Args:
        kind: Model kind
        jobs: Worker processes
        eager_simplex4: Permit the 2^30-entry Simplex4 table

    Raises:
        TableRefusedError: Simplex4 requested without eager_simplex4
    """
    if kind is ModelKind.SIMPLEX4 and not eager_simplex4:
        raise TableRefusedError(
            "eager simp4 generation allocates 128 MiB; use the lazy oracle or pass --eager"
        )
    model = get_model_cell(kind)
    jobs = max(1, jobs)
    started = time.perf_counter()
    logger.info("pipeline_start", stage="generate_table", kind=kind.value, n=model.n, jobs=jobs)

    subsets = list(range(1 << kind.vertex_count))
    chunks = [subsets[i::jobs] for i in range(jobs)]
    if jobs == 1:
        results = [_acyclic_masks(kind, subsets)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_acyclic_masks, [kind] * jobs, chunks))

    bits = np.zeros((1 << model.n) // 8, dtype=np.uint8)
    indices = np.concatenate(results) if results else np.zeros(0, dtype=np.int64)
    np.bitwise_or.at(bits, indices >> 3, (1 << (indices & 7)).astype(np.uint8))

    table = AcyclicityTable(
        kind,
        bits,
        TableMeta(format_version=TABLE_FORMAT_VERSION, generator_fingerprint=model.fingerprint),
    )
    logger.info(
        "pipeline_complete",
        stage="generate_table",
        kind=kind.value,
        acyclic=int(len(indices)),
        seconds=round(time.perf_counter() - started, 3),
    )
    return table
