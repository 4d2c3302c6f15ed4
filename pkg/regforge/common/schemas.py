"""
JSON file formats shared by the CLI, the generators and the suite runner, with converters to the core types.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, Field, ValidationError, field_validator

from regforge.common.errors import InputError
from regforge.common.rational import format_rational, parse_rational
from regforge.common.reports import EditCertificate
from regforge.modules.hypergraph.core import KGraph, VertexLayout
from regforge.modules.partitions.hierarchy import Cell, KPartitionHierarchy

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)


class ClassSpec(BaseModel):
    """One vertex class; vertices default to the next contiguous block of ids"""
    label: str
    size: int
    vertices: Optional[List[int]] = None


class InstanceFile(BaseModel):
    """k classes and the edges of a hypergraph on them (uniformity defaults to k)"""
    k: int
    classes: List[ClassSpec]
    edges: List[List[int]] = Field(default_factory=list)
    uniformity: Optional[int] = None
    provenance: Dict[str, Any] = Field(default_factory=dict)


class CellSpec(BaseModel):
    polyad: List[int]
    edges: List[List[int]] = Field(default_factory=list)


class LevelSpec(BaseModel):
    s: int
    cells: List[CellSpec]


class PartitionFile(BaseModel):
    """A k-partition: vertex parts then the cells of every level 2..rank"""
    rank: int
    vertex_parts: List[List[int]]
    levels: List[LevelSpec] = Field(default_factory=list)


class AssemblyFile(BaseModel):
    """Levels H_1..H_s of an assembled partition; levels[j][p] lists the edges of part p of H_(j+1)"""
    k: int
    classes: List[ClassSpec]
    levels: List[List[List[List[int]]]]
    index_maps: List[List[int]] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    provenance: Dict[str, Any] = Field(default_factory=dict)


class CertificateFile(BaseModel):
    """One edit certificate per auxiliary graph (or a single one for a bipartite check)"""
    sides: List[EditCertificate]


class CheckerConfig(BaseModel):
    """Options of one regularity check"""
    notion: str = "delta"
    delta: Optional[str] = None
    epsilon: Optional[str] = None
    mode: str = "perfect"
    factor: str = "1/2"
    rs_mode: str = "exact"

    @field_validator("delta", "epsilon", "factor")
    @classmethod
    def _exact(cls, value: Optional[str]) -> Optional[str]:
        return None if value is None else format_rational(parse_rational(value))

    @field_validator("notion")
    @classmethod
    def _notion(cls, value: str) -> str:
        if value not in ("delta", "rs"):
            raise ValueError(f"Unknown notion {value!r}")
        return value


class ExperimentConfig(BaseModel):
    """A reproducible CLI invocation"""
    command: str
    suite: Optional[str] = None
    seeds: List[int] = Field(default_factory=list)
    params: Dict[str, Any] = Field(default_factory=dict)
    jobs: int = 1
    out: Optional[str] = None
    csv: Optional[str] = None
    markdown: Optional[str] = None


def load_json(path: str, model: Type[Model]) -> Model:
    """Read and validate a JSON file; every failure becomes an InputError."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"Malformed JSON in {path}: {e}") from e
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        raise InputError(f"{path} does not match the {model.__name__} schema: {e}") from e


def dump_json(model: BaseModel) -> str:
    """Byte-stable JSON rendering"""
    return json.dumps(model.model_dump(), sort_keys=True, indent=2)


def layout_from_instance(instance: InstanceFile) -> VertexLayout:
    if len(instance.classes) != instance.k:
        raise InputError(f"Instance declares k={instance.k} but lists {len(instance.classes)} classes")
    sets = []
    start = 0
    for class_spec in instance.classes:
        if class_spec.vertices is None:
            sets.append(list(range(start, start + class_spec.size)))
        else:
            if len(set(class_spec.vertices)) != class_spec.size:
                found = len(set(class_spec.vertices))
                raise InputError(f"Class {class_spec.label!r} lists {found} vertices, size {class_spec.size}")
            sets.append(class_spec.vertices)
        start += class_spec.size
    return VertexLayout.from_sets(sets, [class_spec.label for class_spec in instance.classes])


def kgraph_from_instance(instance: InstanceFile) -> KGraph:
    return KGraph.build(layout_from_instance(instance), instance.uniformity or instance.k, instance.edges)


def instance_from_kgraph(graph: KGraph, provenance: Optional[Dict[str, Any]] = None) -> InstanceFile:
    classes = []
    start = 0
    for vertex_class in graph.layout.classes:
        contiguous = vertex_class.vertices == tuple(range(start, start + len(vertex_class.vertices)))
        classes.append(ClassSpec(label=vertex_class.label, size=len(vertex_class.vertices),
                                 vertices=None if contiguous else list(vertex_class.vertices)))
        start += len(vertex_class.vertices)
    return InstanceFile(k=graph.layout.num_classes, classes=classes,
                        edges=[list(e) for e in graph.sorted_edges()],
                        uniformity=None if graph.k == graph.layout.num_classes else graph.k,
                        provenance=provenance or {})


def hierarchy_from_file(partition: PartitionFile) -> KPartitionHierarchy:
    levels = sorted(partition.levels, key=lambda level: level.s)
    if [level.s for level in levels] != list(range(2, partition.rank + 1)):
        raise InputError(f"A rank-{partition.rank} partition needs levels 2..{partition.rank}")
    return KPartitionHierarchy(
        tuple(frozenset(part) for part in partition.vertex_parts),
        tuple(tuple(Cell(frozenset(tuple(sorted(e)) for e in cell.edges), frozenset(cell.polyad))
                    for cell in level.cells) for level in levels),
    )


def hierarchy_to_file(partition: KPartitionHierarchy) -> PartitionFile:
    return PartitionFile(
        rank=partition.rank,
        vertex_parts=[sorted(part) for part in partition.vertex_parts],
        levels=[LevelSpec(s=s, cells=[CellSpec(polyad=sorted(c.polyad), edges=[list(e) for e in sorted(c.edges)])
                                      for c in partition.cells(s)])
                for s in range(2, partition.rank + 1)],
    )
