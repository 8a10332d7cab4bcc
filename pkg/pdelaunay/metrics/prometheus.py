"""Prometheus metrics for certificate runs.

All collectors live in a dedicated registry so that ``--metrics-out`` writes
only pdelaunay series.
"""
from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

registry = CollectorRegistry()

# Certificates produced, by kind (delaunay, perfection, oracle, cross_check) and status
certificates_total = Counter(
    "pdelaunay_certificates_total",
    "Total certificates computed",
    ["kind", "status"],
    registry=registry,
)

certificate_latency_ms = Histogram(
    "pdelaunay_certificate_latency_ms",
    "Certificate computation time in milliseconds",
    ["kind"],
    buckets=[1, 10, 50, 100, 500, 1000, 5000, 30000, 120000],
    registry=registry,
)

# Lattice enumeration work done by the brute force oracle
enumeration_nodes_total = Counter(
    "pdelaunay_enumeration_nodes_total",
    "Total nodes visited by lattice point enumeration",
    registry=registry,
)

# Scan cells by outcome: certified, failed, skipped, error
scan_cells_total = Counter(
    "pdelaunay_scan_cells_total",
    "Total scan cells processed",
    ["outcome"],
    registry=registry,
)


def record_certificate(kind: str, status: str, latency_ms: float) -> None:
    certificates_total.labels(kind=kind, status=status).inc()
    certificate_latency_ms.labels(kind=kind).observe(latency_ms)


def export_metrics(path: str) -> None:
    """Write the registry in Prometheus text format."""
    write_to_textfile(path, registry)
