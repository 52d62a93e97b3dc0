"""Acceptance checks for acyclic-thinning.

Runs the worked example, table exhaustives, Euler claims, the thinning suite,
the no-simple-cell sweep, the per-removal homology check, the collapse audit,
the 40^3 vs 80^3 timing check, determinism and the negative control.

Run directly: python scripts/verify_acceptance.py
"""

import sys
import tempfile
import time
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import numpy as np

from src.complex.top_cells import build
from src.config.logging import configure_logging
from src.demo.meshes import EXPECTED_BETTI, make_shape, voxel_block
from src.errors import EXIT_CERTIFICATION, InvariantViolationError
from src.homology.chain_complex import is_acyclic, mask_homology
from src.main import main as cli_main
from src.mesh_io import read_skeleton, write_skeleton
from src.models.cells import Configuration, ModelKind, get_model_cell, paper_index
from src.processors.thinning import simple_cells, thin_anchored, thin_topology
from src.processors.verify import certify
from src.tables import (
    analyze_euler_claims,
    audit_collapsibility,
    generate_table,
    iter_closed_masks,
    lazy_oracle,
)

SUITE = ["fan", "annulus", "mobius", "tet-ball", "tet-torus", "voxel-ball", "voxel-torus"]
EAGER_KINDS = (ModelKind.SIMPLEX2, ModelKind.CUBE2, ModelKind.SIMPLEX3, ModelKind.CUBE3)
MAX_TIMING_RATIO = 10.0
MAX_LARGE_SECONDS = 60.0

_tables = {}


def table_for(kind: ModelKind):
    if kind not in _tables:
        if kind is ModelKind.SIMPLEX4:
            _tables[kind] = lazy_oracle(kind)
        else:
            _tables[kind] = generate_table(kind)
    return _tables[kind]


def check_worked_example() -> bool:
    """The tetrahedron configuration {0,1,2,3,01,02,12,012} has two components."""
    print("\nWorked example")
    print("-" * 50)
    c = Configuration(ModelKind.SIMPLEX3, frozenset({1, 2, 3, 4, 5, 6, 8, 11}))
    index = paper_index(c)
    if index != 2430:
        print(f"  FAIL: paper_index {index}, expected 2430")
        return False
    print(f"  PASS: paper_index {index} for {c.labels()}")
    if is_acyclic(get_model_cell(c.kind), c) or table_for(c.kind).lookup(c.mask):
        print("  FAIL: configuration reported acyclic")
        return False
    print("  PASS: configuration is not acyclic")
    return True


def check_table_exhaustives() -> bool:
    """Every closed configuration's bit matches a fresh homology computation."""
    print("\nTable exhaustives")
    print("-" * 50)
    for kind in EAGER_KINDS:
        model = get_model_cell(kind)
        table = table_for(kind)
        masks = list(iter_closed_masks(model))
        if kind is ModelKind.CUBE3 and len(masks) > 100_000:
            rng = np.random.default_rng(0)
            masks = [masks[i] for i in rng.choice(len(masks), size=100_000, replace=False)]
        started = time.perf_counter()
        mismatches = [m for m in masks if table.lookup(m) != mask_homology(model, m).reduced_acyclic]
        if mismatches:
            print(f"  FAIL: {kind.value}: {len(mismatches)} mismatches, first index {mismatches[0]}")
            return False
        expected = sum(1 for m in iter_closed_masks(model) if table.lookup(m))
        if table.acyclic_count() != expected:
            print(f"  FAIL: {kind.value}: bits set outside closed configurations")
            return False
        print(f"  PASS: {kind.value}: {len(masks)} configurations in {time.perf_counter() - started:.1f}s")
    return True


def check_euler_claims() -> bool:
    """Connected with chi = 1 implies acyclic for tet and voxel, not for simp4."""
    print("\nEuler claims")
    print("-" * 50)
    kinds = (ModelKind.SIMPLEX3, ModelKind.CUBE3)
    for kind in kinds:
        report = analyze_euler_claims(kind)
        if report.euler_plus_connected_false_positives:
            print(f"  FAIL: {kind.value}: {report.euler_plus_connected_false_positives} connected witnesses")
            return False
        if not report.euler_only_false_positives:
            print(f"  FAIL: {kind.value}: no disconnected chi = 1 configuration found")
            return False
        print(
            f"  PASS: {kind.value}: chi alone misleads {report.euler_only_false_positives} times, "
            "chi with connectivity never"
        )
    report = analyze_euler_claims(ModelKind.SIMPLEX4)
    witness = report.euler_plus_connected_witness
    if witness is None:
        print("  FAIL: simp4: no connected chi = 1 non-acyclic witness")
        return False
    summary = mask_homology(get_model_cell(ModelKind.SIMPLEX4), witness)
    if summary.reduced_acyclic:
        print(f"  FAIL: simp4 witness {witness} is acyclic on recomputation")
        return False
    print(f"  PASS: simp4 witness {witness} with betti {summary.betti}")
    return True


def _thin(name: str, mode: str, anchored: bool):
    mesh = make_shape(name)
    table = table_for(mesh.kind)
    unanchored = build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape)
    anchors = unanchored.boundary_faces()[:1] if anchored else ()
    complex_ = build(mesh.cells, mesh.kind, anchors, grid_shape=mesh.grid_shape)
    return mesh, complex_, thin_anchored(complex_, table, mode=mode), table


def check_suite_homology() -> bool:
    """Both algorithms and the anchored variant keep the Betti numbers of the suite."""
    print("\nThinning suite")
    print("-" * 50)
    started = time.perf_counter()
    for name in SUITE:
        for mode, anchored in (("topology", False), ("shape", False), ("topology", True)):
            mesh, _, outcome, _ = _thin(name, mode, anchored)
            kept = [mesh.cells[i] for i in outcome.kept]
            report = certify(mesh.cells, kept, mesh.kind, mesh.grid_shape)
            label = f"{name} {mode}{' anchored' if anchored else ''}"
            if not report.isomorphic or report.betti_out != EXPECTED_BETTI[name]:
                print(f"  FAIL: {label}: {report.betti_in} -> {report.betti_out}")
                return False
            print(f"  PASS: {label}: kept {len(kept)}/{len(mesh.cells)}, betti {report.betti_out}")
    print(f"  Suite time: {time.perf_counter() - started:.1f}s")
    return True


def check_no_simple_left() -> bool:
    print("\nNo simple cell after topology thinning")
    print("-" * 50)
    for name in SUITE:
        _, complex_, _, table = _thin(name, "topology", False)
        leftover = simple_cells(complex_, table)
        if leftover:
            print(f"  FAIL: {name}: cells {leftover[:5]} still simple")
            return False
    print(f"  PASS: {len(SUITE)} meshes")
    return True


def check_per_removal_homology() -> bool:
    print("\nPer-removal homology check")
    print("-" * 50)
    for name in ("fan", "annulus", "mobius", "tet-ball", "tet-torus", "pixel-annulus"):
        mesh = make_shape(name)
        complex_ = build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape)
        try:
            thin_topology(complex_, table_for(mesh.kind), verify_steps=True)
        except InvariantViolationError as exc:
            print(f"  FAIL: {name}: {exc}")
            return False
        print(f"  PASS: {name}")
    return True


def check_collapse_audit() -> bool:
    print("\nCollapse audit")
    print("-" * 50)
    for kind in EAGER_KINDS:
        report = audit_collapsibility(kind, table_for(kind), exhaustive=True)
        if not report.passed:
            print(f"  FAIL: {kind.value}: candidates {report.counterexample_candidates[:5]}")
            return False
        sampled = "" if report.exhaustive else " (sampled)"
        print(f"  PASS: {kind.value}: {report.collapsible}/{report.audited} collapse{sampled}")
    return True


def check_timing() -> bool:
    """Thinning an 8x larger block stays within a constant factor of linear time."""
    print("\nTiming")
    print("-" * 50)
    table = table_for(ModelKind.CUBE3)
    seconds = []
    for size in (40, 80):
        mesh = voxel_block(size)
        started = time.perf_counter()
        complex_ = build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape)
        outcome = thin_topology(complex_, table)
        seconds.append(time.perf_counter() - started)
        print(f"  {size}^3 block: kept {outcome.stats.kept_count} in {seconds[-1]:.2f}s")
    ratio = seconds[1] / max(seconds[0], 1e-9)
    if ratio > MAX_TIMING_RATIO:
        print(f"  FAIL: ratio {ratio:.1f} exceeds {MAX_TIMING_RATIO:g}")
        return False
    if seconds[1] >= MAX_LARGE_SECONDS:
        print(f"  FAIL: 80^3 block took {seconds[1]:.1f}s, limit {MAX_LARGE_SECONDS:g}s")
        return False
    print(f"  PASS: ratio {ratio:.1f} for 8x the cells")
    return True


def check_determinism() -> bool:
    print("\nDeterminism")
    print("-" * 50)
    with tempfile.TemporaryDirectory() as tmp:
        contents = set()
        for run in range(3):
            _, _, outcome, _ = _thin("tet-torus", "topology", False)
            path = Path(tmp) / f"run{run}.skel"
            write_skeleton(outcome, path)
            contents.add(path.read_bytes())
        if len(contents) != 1:
            print("  FAIL: skeleton files differ across runs")
            return False
    print("  PASS: identical skeletons across 3 runs")
    if generate_table(ModelKind.SIMPLEX3, jobs=1) != generate_table(ModelKind.SIMPLEX3, jobs=3):
        print("  FAIL: tet table depends on jobs")
        return False
    print("  PASS: tet table identical for jobs 1 and 3")
    return True


def check_negative_control() -> bool:
    """Dropping a kept cell from the annulus skeleton breaks the ring."""
    print("\nNegative control")
    print("-" * 50)
    with tempfile.TemporaryDirectory() as tmp:
        prefix = Path(tmp) / "annulus"
        cli_main(["demo", "--shape", "annulus", "--out", str(prefix)])
        mesh_arg = f"{prefix}.node,{prefix}.ele"
        _, _, outcome, _ = _thin("annulus", "topology", False)
        skeleton = Path(tmp) / "punctured.skel"
        skeleton.write_text("\n".join(str(i) for i in outcome.kept[1:]) + "\n", encoding="utf-8")
        code = cli_main(["verify", "--mesh", mesh_arg, "--skeleton", str(skeleton)])
        if code != EXIT_CERTIFICATION:
            print(f"  FAIL: verify exited {code}, expected {EXIT_CERTIFICATION}")
            return False
        kept = read_skeleton(skeleton)
    print(f"  PASS: punctured ring of {len(kept)} cells fails certification")
    return True


def main() -> None:
    configure_logging("WARNING", False)

    print("=" * 70)
    print("acyclic-thinning acceptance")
    print("=" * 70)

    checks = [
        ("Worked example", check_worked_example),
        ("Table exhaustives", check_table_exhaustives),
        ("Euler claims", check_euler_claims),
        ("Suite homology", check_suite_homology),
        ("No simple cell left", check_no_simple_left),
        ("Per-removal homology", check_per_removal_homology),
        ("Collapse audit", check_collapse_audit),
        ("Timing", check_timing),
        ("Determinism", check_determinism),
        ("Negative control", check_negative_control),
    ]

    results = []
    for name, check_func in checks:
        try:
            passed = check_func()
            results.append((name, passed))
        except Exception as e:
            print(f"\n  ERROR: {e}")
            results.append((name, False))

    print("\n" + "=" * 70)
    print("Acceptance summary")
    print("=" * 70)
    for name, passed in results:
        print(f"  {'PASS' if passed else 'FAIL'}  {name}")
    passed_count = sum(1 for _, passed in results if passed)
    print(f"\nTotal: {passed_count}/{len(results)} checks passed")
    print("=" * 70)
    sys.exit(0 if passed_count == len(results) else 1)


if __name__ == "__main__":
    main()
