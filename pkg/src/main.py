"""Command-line front end: acythin.

Subcommands:
- gen-tables   generate an acyclicity table file
- table-stats  print table statistics, optionally the Euler report and collapse audit
- thin         thin a mesh or voxel grid and write the skeleton
- verify       compare the homology of a mesh and a skeleton file
- info         print cell, boundary and Euler counts of a mesh
- demo         write one of the built-in meshes to disk

Exit codes: 0 success, 1 usage, 2 parse, 3 certification failure, 4 invariant violation.
"""

import argparse
import sys
from pathlib import Path

import structlog

from src.complex.top_cells import build
from src.config.logging import configure_logging
from src.config.settings import get_settings
from src.demo.meshes import SHAPES, make_shape
from src.errors import (
    EXIT_CERTIFICATION,
    EXIT_OK,
    EXIT_USAGE,
    MalformedCellError,
    ThinningError,
)
from src.mesh_io import (
    read_anchors,
    read_simplicial,
    read_skeleton,
    read_voxels,
    write_simplicial,
    write_skeleton,
    write_voxels,
    write_vtk,
)
from src.models.cells import ModelKind
from src.models.mesh import Mesh
from src.models.schemas import CertificationReport, MeshInfo
from src.processors.thinning import simple_cells, thin_anchored
from src.processors.verify import certify, face_counts
from src.tables import (
    analyze_euler_claims,
    audit_collapsibility,
    generate_table,
    load_table,
    save_table,
    table_stats,
)
from src.tables.acyclicity import AcyclicityLookup
from src.tables.cache import get_table

logger = structlog.get_logger()

ALGORITHMS = {"topo": "topology", "shape": "shape"}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the usage code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _print_fields(model) -> None:
    for key, value in model.model_dump().items():
        print(f"{key} = {value}")


def _add_mesh_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--mesh", help="TetGen pair NODE,ELE")
    source.add_argument("--voxels", help="VOX occupancy grid")


def _add_table_source(parser: argparse.ArgumentParser, required: bool) -> None:
    source = parser.add_mutually_exclusive_group(required=required)
    source.add_argument("--table", type=Path, help="acyclicity table file")
    source.add_argument(
        "--auto-table", action="store_true", help="generate or reuse a cached table for the mesh kind"
    )
    parser.add_argument("--eager", action="store_true", help="build the full simp4 table")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes for table generation")


def _load_mesh(args: argparse.Namespace) -> Mesh:
    if args.mesh:
        parts = args.mesh.split(",")
        if len(parts) != 2:
            raise MalformedCellError("--mesh expects NODE,ELE")
        return read_simplicial(*parts)
    return read_voxels(args.voxels)


def _resolve_table(args: argparse.Namespace, kind: ModelKind) -> AcyclicityLookup | None:
    if getattr(args, "table", None):
        table = load_table(args.table)
        table.require_kind(kind)
        return table
    if getattr(args, "auto_table", False):
        return get_table(kind, eager_simplex4=args.eager, jobs=args.jobs)
    return None


def _print_certification(report: CertificationReport) -> int:
    print(f"betti {tuple(report.betti_in)}={tuple(report.betti_out)}")
    print(f"torsion_free {report.torsion_free_in}={report.torsion_free_out}")
    print(f"isomorphic = {report.isomorphic}")
    return EXIT_OK if report.isomorphic else EXIT_CERTIFICATION


def cmd_gen_tables(args: argparse.Namespace) -> int:
    kind = ModelKind(args.model)
    jobs = args.jobs or get_settings().jobs
    table = generate_table(kind, jobs=jobs, eager_simplex4=args.eager)
    save_table(table, args.out)
    _print_fields(table_stats(table))
    return EXIT_OK


def cmd_table_stats(args: argparse.Namespace) -> int:
    table = load_table(args.table)
    _print_fields(table_stats(table))
    status = EXIT_OK
    if args.euler_report:
        _print_fields(analyze_euler_claims(table.kind, table))
    if args.collapse_audit:
        report = audit_collapsibility(table.kind, table, exhaustive=args.exhaustive or None)
        _print_fields(report)
        if not report.passed:
            status = EXIT_CERTIFICATION
    return status


def cmd_thin(args: argparse.Namespace) -> int:
    mesh = _load_mesh(args)
    table = _resolve_table(args, mesh.kind)
    anchors = read_anchors(args.anchors, mesh.kind, mesh.grid_shape) if args.anchors else ()
    complex_ = build(
        mesh.cells,
        mesh.kind,
        anchors,
        grid_shape=mesh.grid_shape,
        check_invariants=args.check_invariants or None,
    )
    outcome = thin_anchored(
        complex_,
        table,
        mode=ALGORITHMS[args.algorithm],
        verify_steps=args.debug_mv,
        check_invariants=args.check_invariants or None,
    )
    write_skeleton(outcome, args.out)
    print(f"kept {outcome.stats.kept_count} of {outcome.stats.initial_count} cells in {outcome.passes} passes")

    if args.vtk:
        kept = outcome.kept_set
        removal_pass = [-1] * len(mesh.cells)
        for cell, pass_number in outcome.removed_order:
            removal_pass[cell] = pass_number
        write_vtk(mesh, [i in kept for i in range(len(mesh.cells))], args.vtk, removal_pass)

    if args.certify:
        report = certify(mesh.cells, [mesh.cells[i] for i in outcome.kept], mesh.kind, mesh.grid_shape)
        return _print_certification(report)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    mesh = _load_mesh(args)
    kept_ids = read_skeleton(args.skeleton)
    bad = [i for i in kept_ids if not 0 <= i < len(mesh.cells)]
    if bad:
        raise MalformedCellError(f"skeleton lists cell ids outside the mesh: {bad[:5]}")
    report = certify(mesh.cells, [mesh.cells[i] for i in kept_ids], mesh.kind, mesh.grid_shape)
    return _print_certification(report)


def cmd_info(args: argparse.Namespace) -> int:
    mesh = _load_mesh(args)
    complex_ = build(mesh.cells, mesh.kind, grid_shape=mesh.grid_shape)
    counts = face_counts(mesh.cells, mesh.kind, mesh.grid_shape)
    table = _resolve_table(args, mesh.kind)
    info = MeshInfo(
        kind=mesh.kind.value,
        cells=len(mesh.cells),
        boundary_faces=len(complex_.boundary_faces()),
        euler_characteristic=sum((-1) ** d * n for d, n in enumerate(counts)),
        face_counts=counts,
        initially_simple=len(simple_cells(complex_, table)) if table is not None else None,
    )
    _print_fields(info)
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    mesh = make_shape(args.shape)
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    if mesh.kind.is_cubical:
        path = prefix.with_name(prefix.name + ".vox")
        write_voxels(mesh, path)
        print(path)
    else:
        node, ele = prefix.with_name(prefix.name + ".node"), prefix.with_name(prefix.name + ".ele")
        write_simplicial(mesh, node, ele)
        print(f"{node},{ele}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = _Parser(prog="acythin", description="Topology-preserving thinning with acyclicity tables")
    parser.add_argument("--log-level", default=settings.log_level)
    parser.add_argument("--log-json", action="store_true", default=settings.log_json)
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen-tables", help="generate an acyclicity table")
    gen.add_argument("--model", required=True, choices=[k.value for k in ModelKind])
    gen.add_argument("--out", required=True, type=Path)
    gen.add_argument("--eager", action="store_true", help="permit the 2^30-entry simp4 table")
    gen.add_argument("--jobs", type=int, default=None)
    gen.set_defaults(handler=cmd_gen_tables)

    stats = commands.add_parser("table-stats", help="print table statistics")
    stats.add_argument("--table", required=True, type=Path)
    stats.add_argument("--euler-report", action="store_true")
    stats.add_argument("--collapse-audit", action="store_true")
    stats.add_argument("--exhaustive", action="store_true", help="audit voxel/simp4 without sampling")
    stats.set_defaults(handler=cmd_table_stats)

    thin = commands.add_parser("thin", help="thin a mesh")
    _add_mesh_source(thin)
    _add_table_source(thin, required=True)
    thin.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="topo")
    thin.add_argument("--anchors", type=Path)
    thin.add_argument("--out", required=True, type=Path)
    thin.add_argument("--vtk", type=Path)
    thin.add_argument("--certify", action="store_true")
    thin.add_argument("--debug-mv", action="store_true", help="check homology after every removal")
    thin.add_argument("--check-invariants", action="store_true")
    thin.set_defaults(handler=cmd_thin)

    verify = commands.add_parser("verify", help="certify a skeleton against its mesh")
    _add_mesh_source(verify)
    verify.add_argument("--skeleton", required=True, type=Path)
    verify.set_defaults(handler=cmd_verify)

    info = commands.add_parser("info", help="print mesh statistics")
    _add_mesh_source(info)
    _add_table_source(info, required=False)
    info.set_defaults(handler=cmd_info)

    demo = commands.add_parser("demo", help="write a built-in mesh")
    demo.add_argument("--shape", required=True, choices=sorted(SHAPES))
    demo.add_argument("--out", required=True)
    demo.set_defaults(handler=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_json)
    try:
        return args.handler(args)
    except ThinningError as exc:
        logger.error("command_failed", command=args.command, error=str(exc), error_type=type(exc).__name__)
        return exc.exit_code
    except OSError as exc:
        logger.error("command_failed", command=args.command, error=str(exc), error_type=type(exc).__name__)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
