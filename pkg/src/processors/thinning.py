"""Queue-driven thinning of top-cell complexes.

thin_topology removes simple cells until none remain. thin_shape works layer by
layer and stops as soon as every alive cell lies on the current boundary, which
keeps a one-cell-thick shell of the original shape. Both test simplicity right
before every removal, so homology is preserved whatever the stopping point.
"""

import time
from collections import deque
from typing import Callable, Literal

import structlog

from src.complex.top_cells import TopCellComplex
from src.config.settings import get_settings
from src.errors import InvariantViolationError, SizeLimitError
from src.models.schemas import ThinningOutcome, ThinningStats
from src.tables.acyclicity import AcyclicityLookup

logger = structlog.get_logger()

Mode = Literal["topology", "shape"]


def simple_cells(complex_: TopCellComplex, table: AcyclicityLookup) -> list[int]:
    """Alive cells that are currently simple, in id order."""
    return [t for t in complex_.alive_cells() if complex_.is_simple(t, table)]


def _all_touch_boundary(complex_: TopCellComplex) -> bool:
    return all(complex_.touches_current_boundary(t) for t in complex_.alive_cells())


def _step_checker(complex_: TopCellComplex, verify_steps: bool) -> Callable[[int], None] | None:
    """Per-removal Betti check for small inputs, or None when disabled."""
    if not verify_steps:
        return None
    limit = get_settings().debug_mv_max_cells
    if len(complex_) > limit:
        raise SizeLimitError(
            f"per-removal homology check accepts at most {limit} cells, input has {len(complex_)}"
        )
    # Imported here: verify builds full complexes and is only needed in debug runs.
    from src.processors.verify import betti_of_complex

    expected = betti_of_complex(complex_)

    def check(removed: int) -> None:
        current = betti_of_complex(complex_)
        if current != expected:
            raise InvariantViolationError(
                f"removing cell {removed} changed homology from {expected} to {current}"
            )

    return check


def _outcome(
    complex_: TopCellComplex,
    algorithm: str,
    removed_order: list[tuple[int, int]],
    passes: int,
    pushes: int,
    max_neighbors: int,
) -> ThinningOutcome:
    return ThinningOutcome(
        algorithm=algorithm,
        kind=complex_.kind.value,
        kept=complex_.alive_cells(),
        removed_order=removed_order,
        passes=passes,
        stats=ThinningStats(
            initial_count=len(complex_),
            kept_count=complex_.alive_count,
            queue_pushes=pushes,
            max_neighbor_count=max_neighbors,
        ),
    )


def thin_topology(
    complex_: TopCellComplex,
    table: AcyclicityLookup,
    verify_steps: bool = False,
    check_invariants: bool | None = None,
) -> ThinningOutcome:
    """Remove simple cells until none is left.

    The initial scan enqueues every simple cell in input order (pass 0). Each
    removal in pass p enqueues the alive neighbors of the removed cell with pass p+1.
    Dead cells are skipped and every dequeued cell is re-tested before removal.

    Args:
        complex_: Complex to thin in place
        table: Acyclicity lookup for the complex's kind
        verify_steps: Recompute Betti numbers after every removal
        check_invariants: Run the final no-simple-cell sweep and the push bound check

    Raises:
        KindMismatchError: Table built for another kind
        SizeLimitError: verify_steps on an input that is too large
        InvariantViolationError: A checked invariant failed
    """
    table.require_kind(complex_.kind)
    check_invariants = get_settings().check_invariants if check_invariants is None else check_invariants
    step_check = _step_checker(complex_, verify_steps)
    started = time.perf_counter()
    logger.info("pipeline_start", stage="thin_topology", kind=complex_.kind.value, cells=len(complex_))

    queue: deque[tuple[int, int]] = deque((t, 0) for t in simple_cells(complex_, table))
    pushes = len(queue)
    removed_order: list[tuple[int, int]] = []
    passes = 0
    while queue:
        t, pass_number = queue.popleft()
        if not complex_.alive[t] or not complex_.is_simple(t, table):
            continue
        complex_.remove(t)
        removed_order.append((t, pass_number))
        passes = max(passes, pass_number + 1)
        if step_check:
            step_check(t)
        for n in complex_.neighbors(t):
            queue.append((n, pass_number + 1))
            pushes += 1

    max_neighbors = complex_.max_neighbor_count()
    if check_invariants:
        leftover = simple_cells(complex_, table)
        if leftover:
            raise InvariantViolationError(f"cells {leftover[:10]} are still simple after thinning")
        bound = (max_neighbors + 1) * len(complex_)
        if pushes > bound:
            raise InvariantViolationError(f"{pushes} queue pushes exceed the bound {bound}")

    outcome = _outcome(complex_, "topo", removed_order, passes, pushes, max_neighbors)
    logger.info(
        "pipeline_complete",
        stage="thin_topology",
        kept=outcome.stats.kept_count,
        removed=len(removed_order),
        passes=passes,
        pushes=pushes,
        seconds=round(time.perf_counter() - started, 3),
    )
    return outcome


def thin_shape(
    complex_: TopCellComplex,
    table: AcyclicityLookup,
    verify_steps: bool = False,
    check_invariants: bool | None = None,
) -> ThinningOutcome:
    """Layer-synchronized thinning that stops at a one-cell-thick shell.

    Queue L holds the current layer and queue K the next one. When L runs empty the
    queues swap. The run stops when every alive cell has a facet on the current
    boundary (checked after the initial scan and after each layer), when a layer
    removes nothing, or when no candidates remain.
    """
    table.require_kind(complex_.kind)
    check_invariants = get_settings().check_invariants if check_invariants is None else check_invariants
    step_check = _step_checker(complex_, verify_steps)
    started = time.perf_counter()
    logger.info("pipeline_start", stage="thin_shape", kind=complex_.kind.value, cells=len(complex_))

    current: deque[int] = deque(simple_cells(complex_, table))
    pushes = len(current)
    removed_order: list[tuple[int, int]] = []
    layer = 0
    stopped_on_shell = _all_touch_boundary(complex_)
    while current and not stopped_on_shell:
        following: dict[int, None] = {}
        removed_in_layer = 0
        while current:
            t = current.popleft()
            if not complex_.alive[t] or not complex_.is_simple(t, table):
                continue
            complex_.remove(t)
            removed_order.append((t, layer))
            removed_in_layer += 1
            if step_check:
                step_check(t)
            for n in complex_.neighbors(t):
                if n not in following:
                    following[n] = None
                    pushes += 1
        logger.debug("layer_complete", layer=layer, removed=removed_in_layer, alive=complex_.alive_count)
        if not removed_in_layer:
            break
        layer += 1
        current = deque(following)
        stopped_on_shell = _all_touch_boundary(complex_)

    max_neighbors = complex_.max_neighbor_count()
    if check_invariants and not stopped_on_shell:
        leftover = simple_cells(complex_, table)
        if leftover:
            raise InvariantViolationError(f"cells {leftover[:10]} are still simple after thinning")

    passes = removed_order[-1][1] + 1 if removed_order else 0
    outcome = _outcome(complex_, "shape", removed_order, passes, pushes, max_neighbors)
    logger.info(
        "pipeline_complete",
        stage="thin_shape",
        kept=outcome.stats.kept_count,
        removed=len(removed_order),
        passes=passes,
        stopped_on_shell=stopped_on_shell,
        seconds=round(time.perf_counter() - started, 3),
    )
    return outcome


def thin_anchored(
    complex_: TopCellComplex,
    table: AcyclicityLookup,
    mode: Mode = "topology",
    verify_steps: bool = False,
    check_invariants: bool | None = None,
) -> ThinningOutcome:
    """Thin a complex built with anchors in the selected mode.

    Anchored facets are excluded from every complement configuration and their
    cofaces are never removed, so the result stays attached to each anchored patch.
    An empty anchor set behaves exactly like the unanchored mode.
    """
    if mode == "topology":
        return thin_topology(complex_, table, verify_steps, check_invariants)
    if mode == "shape":
        return thin_shape(complex_, table, verify_steps, check_invariants)
    raise ValueError(f"unknown thinning mode {mode!r}")
