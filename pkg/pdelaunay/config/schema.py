"""Pydantic schemas for pdelaunay configuration validation."""
from pydantic import BaseModel, Field


class OracleConfig(BaseModel):
    """Brute force lattice-point oracle configuration."""

    node_budget: int = Field(default=10**8, gt=0, description="Maximum enumeration nodes before giving up")


class ScanConfig(BaseModel):
    """Parameter grid scan configuration."""

    jobs: int = Field(default=1, gt=0, description="Worker processes for scan")
    d_min: int = Field(default=3, ge=3, description="Smallest dimension visited by scan")
    oracle: bool = Field(default=False, description="Run the brute force oracle on every cell")
    perfection: bool = Field(default=True, description="Compute perfection certificates on every cell")
    timings: bool = Field(default=False, description="Record runtime_ms in scan reports")


class OutputConfig(BaseModel):
    """Serialization configuration."""

    indent: int = Field(default=2, ge=0, description="JSON indentation")
    approx_columns: bool = Field(default=False, description="Add *_approx float columns to CSV output")


class PerfectDelaunayConfig(BaseModel):
    """Root configuration schema."""

    oracle: OracleConfig = Field(default_factory=OracleConfig, description="Oracle settings")
    scan: ScanConfig = Field(default_factory=ScanConfig, description="Scan settings")
    output: OutputConfig = Field(default_factory=OutputConfig, description="Output settings")
