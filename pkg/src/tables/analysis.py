"""Table statistics, Euler-characteristic claims and the collapsibility audit."""

import time
from functools import lru_cache

import numpy as np
import structlog

from src.config.settings import get_settings
from src.homology.chain_complex import mask_components, mask_homology, mask_is_acyclic
from src.models.cells import ModelCell, ModelKind, get_model_cell
from src.models.schemas import CollapseAuditReport, EulerReport, TableStats
from src.tables.acyclicity import AcyclicityLookup, AcyclicityTable, iter_closed_masks
from src.tables.storage import HEADER, CHECKSUM_SIZE, table_checksum

logger = structlog.get_logger()

SAMPLED_KINDS = (ModelKind.CUBE3, ModelKind.SIMPLEX4)


def _verdict_function(model: ModelCell, table: AcyclicityLookup | None):
    if table is None:
        return lambda mask: mask_is_acyclic(model, mask)
    table.require_kind(model.kind)
    return table.lookup


def table_stats(table: AcyclicityTable) -> TableStats:
    model = get_model_cell(table.kind)
    closed = sum(1 for _ in iter_closed_masks(model))
    return TableStats(
        kind=table.kind.value,
        n=table.n,
        byte_size=HEADER.size + table.bits.nbytes + CHECKSUM_SIZE,
        closed_count=closed,
        acyclic_count=table.acyclic_count(),
        checksum=table_checksum(table),
    )


def analyze_euler_claims(kind: ModelKind, table: AcyclicityLookup | None = None) -> EulerReport:
    """Count closed configurations that the Euler characteristic misclassifies.

    euler_only_false_positives counts chi = 1 configurations that are not acyclic.
    euler_plus_connected_false_positives counts those that are also connected.
    The enumeration is exhaustive for every kind.
    """
    model = get_model_cell(kind)
    verdict = _verdict_function(model, table)
    started = time.perf_counter()
    logger.info("pipeline_start", stage="euler_report", kind=kind.value)

    closed = acyclic = euler_only = euler_connected = 0
    euler_only_witness = connected_witness = None
    for mask in iter_closed_masks(model):
        closed += 1
        if verdict(mask):
            acyclic += 1
            continue
        if model.euler_characteristic(mask) != 1:
            continue
        euler_only += 1
        if euler_only_witness is None:
            euler_only_witness = mask
        if mask_components(model, mask) == 1:
            euler_connected += 1
            if connected_witness is None:
                connected_witness = mask

    witness_betti = None
    if connected_witness is not None:
        witness_betti = mask_homology(model, connected_witness).betti

    report = EulerReport(
        kind=kind.value,
        closed_count=closed,
        acyclic_count=acyclic,
        euler_only_false_positives=euler_only,
        euler_plus_connected_false_positives=euler_connected,
        euler_only_witness=euler_only_witness,
        euler_plus_connected_witness=connected_witness,
        witness_betti=witness_betti,
    )
    logger.info(
        "pipeline_complete",
        stage="euler_report",
        kind=kind.value,
        euler_only=euler_only,
        euler_plus_connected=euler_connected,
        seconds=round(time.perf_counter() - started, 3),
    )
    return report


@lru_cache(maxsize=None)
def coface_masks(kind: ModelKind) -> tuple[int, ...]:
    """For each ordinal, the mask of boundary elements having it as a facet."""
    model = get_model_cell(kind)
    masks = [0] * (model.n + 1)
    for element in model.elements:
        for face in model.face_lattice[element.ordinal]:
            masks[face] |= element.bit
    return tuple(masks)


def collapses_to_point(kind: ModelKind, mask: int, state_budget: int) -> bool | None:
    """Depth-first search for a free-face collapse sequence ending in one vertex.

    A face is free when exactly one of its cofaces is present. Visited states
    are memoized.

    Returns:
        True if a collapse sequence exists, False if the search space is exhausted,
        None if the state budget ran out first
    """
    cofaces = coface_masks(kind)
    stack = [mask]
    seen = {mask}
    states = 0
    while stack:
        state = stack.pop()
        states += 1
        if state.bit_count() == 1:
            return True
        if states > state_budget:
            return None
        rest = state
        while rest:
            low = rest & -rest
            rest ^= low
            present = cofaces[low.bit_length()] & state
            if present and not present & (present - 1):
                successor = state & ~(low | present)
                if successor not in seen:
                    seen.add(successor)
                    stack.append(successor)
    return False


def audit_collapsibility(
    kind: ModelKind,
    table: AcyclicityLookup | None = None,
    exhaustive: bool | None = None,
    sample_size: int | None = None,
    seed: int | None = None,
    state_budget: int | None = None,
) -> CollapseAuditReport:
    """Check that acyclic closed configurations collapse to a vertex.

    Cube3 and Simplex4 are audited on a seeded sample unless exhaustive is set.
    A configuration that fails or exceeds the budget is reported as a
    counterexample candidate.
    """
    settings = get_settings()
    model = get_model_cell(kind)
    verdict = _verdict_function(model, table)
    if exhaustive is None:
        exhaustive = kind not in SAMPLED_KINDS
    sample_size = settings.collapse_sample_size if sample_size is None else sample_size
    seed = settings.sample_seed if seed is None else seed
    state_budget = settings.collapse_state_budget if state_budget is None else state_budget

    started = time.perf_counter()
    logger.info("pipeline_start", stage="collapse_audit", kind=kind.value, exhaustive=exhaustive)

    candidates = [mask for mask in iter_closed_masks(model) if verdict(mask)]
    if not exhaustive and len(candidates) > sample_size:
        rng = np.random.default_rng(seed)
        chosen = np.sort(rng.choice(len(candidates), size=sample_size, replace=False))
        candidates = [candidates[i] for i in chosen]

    failures = []
    for mask in candidates:
        if collapses_to_point(kind, mask, state_budget) is not True:
            failures.append(mask)
            logger.warning("collapse_candidate", kind=kind.value, index=mask)

    report = CollapseAuditReport(
        kind=kind.value,
        audited=len(candidates),
        collapsible=len(candidates) - len(failures),
        counterexample_candidates=failures,
        exhaustive=exhaustive,
    )
    logger.info(
        "pipeline_complete",
        stage="collapse_audit",
        kind=kind.value,
        audited=report.audited,
        failures=len(failures),
        seconds=round(time.perf_counter() - started, 3),
    )
    return report
