"""Output document schemas for pdelaunay.

This module provides Pydantic models for:
- Rational strings, canonical representatives and forms
- Delaunay, perfection and oracle certificates
- certify documents and scan reports
"""
from enum import Enum
from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, Field, StringConstraints

RationalStr = Annotated[str, StringConstraints(pattern=r"^-?\d+(/[1-9]\d*)?$")]


class FamilyName(str, Enum):
    """Polytope families accepted on the command line."""

    P = "P"
    G = "G"


class RepModel(BaseModel):
    """Canonical representative (l, a) in Λ(d, n)."""

    l: int = Field(..., description="Signed count of unit entries")  # noqa: E741
    a: int = Field(..., description="Multiple of j/n")
    d: int = Field(..., ge=1)
    n: int = Field(..., ge=1)


class RadialFormModel(BaseModel):
    A: RationalStr
    B: RationalStr
    d: int = Field(..., ge=1)


class InhomQuadraticModel(BaseModel):
    gram: List[List[RationalStr]]
    linear: List[RationalStr]
    constant: RationalStr


class DiagramTargetModel(BaseModel):
    phi1: RationalStr
    phi2: RationalStr


class MarginModel(BaseModel):
    l: int  # noqa: E741
    a: int
    phi1: RationalStr
    phi2: RationalStr
    margin: RationalStr


class DelaunayCertificateModel(BaseModel):
    """Diagram certificate of the Delaunay property."""

    kind: str = Field(default="delaunay")
    d: int
    s: int
    k: int
    n: int
    alpha: RationalStr
    beta: RationalStr
    targets: List[DiagramTargetModel]
    on_line: List[Optional[RepModel]]
    margins: List[MarginModel]
    min_margin: Optional[RationalStr] = None
    derived_form: RadialFormModel
    status: str
    reason: Optional[str] = None
    failure_witness: Optional[RepModel] = None
    curve_consistent: bool


class FrameModel(BaseModel):
    origin: List[RationalStr]
    generators: List[List[RationalStr]]


class PerfectionCertificateModel(BaseModel):
    """Rank certificate of perfection, with the data needed to re-check it."""

    kind: str = Field(default="perfection")
    family: str
    m: int = Field(..., ge=0, description="Affine dimension")
    vertex_count: int
    columns: int
    rank: int
    nullity: int
    status: str
    generator: Optional[InhomQuadraticModel] = None
    frame: FrameModel
    vertices: List[List[RationalStr]]


class OracleResultModel(BaseModel):
    kind: str = Field(default="oracle")
    status: str
    boundary_count: int
    radius: RationalStr
    nodes: int
    witness: Optional[List[RationalStr]] = None
    reason: Optional[str] = None


class CertifyDocument(BaseModel):
    """Output of `pdelaunay certify`."""

    family: FamilyName
    d: int
    s: Optional[int] = None
    k: Optional[int] = None
    status: str
    delaunay: DelaunayCertificateModel
    perfection: Optional[PerfectionCertificateModel] = None
    oracle: Optional[OracleResultModel] = None


class VertexSetMetaModel(BaseModel):
    family: str
    d: int
    s: Optional[int] = None
    k: Optional[int] = None
    normalization: Optional[str] = None
    ambient_dim: int


class VertexSetDocument(BaseModel):
    """Output of `pdelaunay construct --format json`."""

    meta: VertexSetMetaModel
    count: int
    affine_dim: int
    vertices: List[List[RationalStr]]


class ScanRecord(BaseModel):
    """One (d, s, k) cell of a scan."""

    d: int
    s: int
    k: int
    n: int
    in_regime: bool = Field(..., description="d >= k(2s+1)+1")
    outcome: str = Field(..., description="certified, failed, skipped or error")
    delaunay_status: Optional[str] = None
    perfection_status: Optional[str] = None
    oracle_status: Optional[str] = None
    nullity: Optional[int] = None
    alpha: Optional[RationalStr] = None
    beta: Optional[RationalStr] = None
    min_margin: Optional[RationalStr] = None
    reason: Optional[str] = None
    error_code: Optional[str] = None
    runtime_ms: Optional[int] = None


class ScanSummary(BaseModel):
    cells: int
    certified: int
    failed: int
    skipped: int
    errors: int
    in_regime_failures: int


class ScanReport(BaseModel):
    """Output of `pdelaunay scan`."""

    parameters: Dict[str, Any]
    records: List[ScanRecord]
    summary: ScanSummary
