"""Pydantic models for everything the library reports.

Homology summaries, table metadata and statistics, audit reports, thinning
outcomes and certification results. All of them are plain data and serialize
with model_dump() for the CLI's JSON output.
"""

from pydantic import BaseModel, ConfigDict, Field, computed_field


# Homology
class HomologySummary(BaseModel):
    """Betti numbers and torsion verdict of a chain complex."""

    model_config = ConfigDict(frozen=True)

    betti: list[int]
    torsion_free: bool
    euler_characteristic: int

    @computed_field
    @property
    def reduced_acyclic(self) -> bool:
        return self.torsion_free and self.betti[:1] == [1] and not any(self.betti[1:])


# Tables
class TableMeta(BaseModel):
    """Header fields of a stored acyclicity table."""

    format_version: int
    generator_fingerprint: str
    closed_only: bool = True


class TableStats(BaseModel):
    """Summary printed by table-stats."""

    kind: str
    n: int
    byte_size: int
    closed_count: int
    acyclic_count: int
    checksum: str


class EulerReport(BaseModel):
    """Counts of closed configurations where the Euler characteristic misleads.

    Witnesses are canonical indices of one offending configuration per count.
    """

    kind: str
    closed_count: int
    acyclic_count: int
    euler_only_false_positives: int
    euler_plus_connected_false_positives: int
    euler_only_witness: int | None = None
    euler_plus_connected_witness: int | None = None
    witness_betti: list[int] | None = None
    exhaustive: bool = True


class CollapseAuditReport(BaseModel):
    """Outcome of the free-face collapse search over acyclic closed configurations."""

    kind: str
    audited: int
    collapsible: int
    counterexample_candidates: list[int] = Field(default_factory=list)
    exhaustive: bool = True

    @computed_field
    @property
    def passed(self) -> bool:
        return not self.counterexample_candidates and self.collapsible == self.audited


# Thinning
class ThinningStats(BaseModel):
    initial_count: int
    kept_count: int
    queue_pushes: int
    max_neighbor_count: int = 0


class ThinningOutcome(BaseModel):
    """Result of one thinning run.

    removed_order lists (cell id, pass number) in removal order.
    """

    algorithm: str
    kind: str
    kept: list[int]
    removed_order: list[tuple[int, int]]
    passes: int
    stats: ThinningStats

    @property
    def kept_set(self) -> set[int]:
        return set(self.kept)


# Verification
class CertificationReport(BaseModel):
    """Homology of the input next to the homology of the kept cells."""

    betti_in: list[int]
    betti_out: list[int]
    torsion_free_in: bool
    torsion_free_out: bool
    euler_in: int
    euler_out: int

    @computed_field
    @property
    def isomorphic(self) -> bool:
        return self.betti_in == self.betti_out and self.torsion_free_in == self.torsion_free_out


class MeshInfo(BaseModel):
    """Counts printed by the info command."""

    kind: str
    cells: int
    boundary_faces: int
    euler_characteristic: int
    face_counts: list[int]
    initially_simple: int | None = None
