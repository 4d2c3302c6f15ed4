"""
Report and certificate models shared by the checkers, generators and the CLI.
All rationals are carried as "p/q" strings so reports serialize without float round-trips.
"""
from typing import Any, Dict, FrozenSet, List, Optional, Tuple
from pydantic import BaseModel, Field


def freeze(value: Any) -> Any:
    """Turn nested JSON lists into tuples so they can be used as vertices and edges."""
    if isinstance(value, (list, tuple)):
        return tuple(freeze(v) for v in value)
    return value


def thaw(value: Any) -> Any:
    """Inverse of freeze, for JSON output."""
    if isinstance(value, (list, tuple)):
        return [thaw(v) for v in value]
    return value


class Witness(BaseModel):
    """Evidence for a failed check"""
    left: List[Any] = Field(default_factory=list)
    right: List[Any] = Field(default_factory=list)
    density: Optional[str] = None
    threshold: Optional[str] = None
    location: Optional[str] = None
    members: List[Any] = Field(default_factory=list)


class RegularityReport(BaseModel):
    """Verdict of any regularity or validity checker"""
    verdict: bool
    mode: str = "exact"
    witness: Optional[Witness] = None
    edits: int = 0
    elapsed_ms: int = 0
    notes: List[str] = Field(default_factory=list)
    stats: Dict[str, Any] = Field(default_factory=dict)


class EditCertificate(BaseModel):
    """Edges to add to and remove from a bipartite graph"""
    added: List[Any] = Field(default_factory=list)
    removed: List[Any] = Field(default_factory=list)

    def added_edges(self) -> FrozenSet[Tuple[Any, Any]]:
        return frozenset(freeze(e) for e in self.added)

    def removed_edges(self) -> FrozenSet[Tuple[Any, Any]]:
        return frozenset(freeze(e) for e in self.removed)

    @property
    def size(self) -> int:
        return len(self.added_edges()) + len(self.removed_edges())


class ApproxRefineReport(BaseModel):
    """Outcome of an approximate refinement test"""
    verdict: bool
    beta: str
    bad_mass: int
    assignment: List[Optional[int]]


class ClaimReport(BaseModel):
    """Implication check: vacuous when a hypothesis fails, else holds or violated"""
    claim: str
    status: str
    details: Dict[str, Any] = Field(default_factory=dict)
    report: Optional[RegularityReport] = None
    notes: List[str] = Field(default_factory=list)


class CountingReport(BaseModel):
    """Exact clique count of a complex against the dense counting band"""
    count: int
    band_low: str
    band_high: str
    in_band: bool
    top_edges: int
    exceptional_edges: int
    exceptional_allowed: str
    extensions_ok: bool
    mode: str = "heuristic"
    notes: List[str] = Field(default_factory=list)


class InequalityCheck(BaseModel):
    """One machine-checked growth inequality"""
    name: str
    k: Optional[int] = None
    i: Optional[int] = None
    status: str
    detail: str = ""


class GrowthReport(BaseModel):
    checks: List[InequalityCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)


class InstanceResult(BaseModel):
    """Per-instance outcome of a suite run"""
    suite: str
    instance: str
    seed: int
    verdict: bool
    detail: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None
    elapsed_ms: int = 0


class RunReport(BaseModel):
    """Config echo plus per-instance verdicts of a CLI run"""
    provenance: Dict[str, Any] = Field(default_factory=dict)
    results: List[InstanceResult] = Field(default_factory=list)
    summary: Dict[str, int] = Field(default_factory=dict)

    def summarize(self) -> "RunReport":
        passed = sum(1 for r in self.results if r.verdict)
        self.summary = {"total": len(self.results), "passed": passed, "failed": len(self.results) - passed}
        return self
