"""Service layer for pdelaunay commands."""
import json
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pdelaunay.app.schemas import (
    CertifyDocument,
    FamilyName,
    ScanRecord,
    ScanReport,
    ScanSummary,
    VertexSetDocument,
)
from pdelaunay.core.certify import (
    BruteForceResult,
    CertificateStatus,
    DelaunayCertificate,
    bruteforce_delaunay,
    delaunay_certificate,
    diagram,
    oracle_form,
    perfection_certificate,
)
from pdelaunay.core.errors import (
    BudgetExceededError,
    ErrorCode,
    ExitCode,
    ParameterOutOfRange,
    PerfectDelaunayError,
)
from pdelaunay.core.exact_arith import format_rational, zero_vector
from pdelaunay.core.forms import InhomQuadratic, as_inhom, eval_phi12, phi_main
from pdelaunay.core.lattice import (
    AffineLattice,
    affine_lattice_from_points,
    estimate_nodes,
    odd_class,
)
from pdelaunay.core.logging import structured_logger
from pdelaunay.core.polytopes import (
    Normalization,
    VertexSet,
    construct_G,
    construct_P,
    section_vector,
)
from pdelaunay.metrics.prometheus import (
    enumeration_nodes_total,
    record_certificate,
    scan_cells_total,
)

logger = logging.getLogger(__name__)


def _elapsed_ms(start: float) -> int:
    return int((time.perf_counter() - start) * 1000)


def dump_json(payload: Dict[str, Any], indent: int = 2) -> str:
    return json.dumps(payload, sort_keys=True, indent=indent, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write text to path via a temporary file in the same directory."""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def validate_family_parameters(family: FamilyName, d: int, s: Optional[int], k: Optional[int]) -> None:
    if family is FamilyName.P and (s is None or k is None):
        raise ParameterOutOfRange("Family P needs --s and --k")


def build_vertex_set(
    family: FamilyName,
    d: int,
    s: Optional[int] = None,
    k: Optional[int] = None,
    normalization: Normalization = Normalization.HALF,
) -> VertexSet:
    validate_family_parameters(family, d, s, k)
    if family is FamilyName.G:
        return construct_G(d)
    return construct_P(d, s, k, normalization)


def vertex_set_document(vs: VertexSet) -> Dict[str, Any]:
    return VertexSetDocument.model_validate(vs.to_dict()).model_dump(mode="json")


# --- oracle ----------------------------------------------------------------------


@dataclass
class OracleJob:
    """Vertex set, form and lattice handed to the brute force oracle."""

    vertices: VertexSet
    form: InhomQuadratic
    lattice: AffineLattice


def oracle_job(family: FamilyName, d: int, s: Optional[int], k: Optional[int],
               cert: Optional[DelaunayCertificate] = None) -> OracleJob:
    if family is FamilyName.G:
        vs = construct_G(d)
        f = as_inhom(phi_main(d + 1, 1, 2), zero_vector(d + 1), 0)
        return OracleJob(vs, f, affine_lattice_from_points(vs.vertices))
    vs = construct_P(d, s, k, Normalization.INTEGRAL)
    f = as_inhom(oracle_form(d, s, k, cert), zero_vector(d), 0)
    return OracleJob(vs, f, odd_class(d, k))


def guarded_bruteforce(job: OracleJob, node_budget: int) -> BruteForceResult:
    """Brute force oracle run, refused up front when the node estimate exceeds the budget."""
    radius = job.form.evaluate(job.vertices.vertices[0])
    estimate = estimate_nodes(job.lattice, job.form, radius)
    if estimate > node_budget:
        raise BudgetExceededError(
            f"Estimated {estimate} enumeration nodes exceeds the budget of {node_budget}",
            estimate=estimate,
            budget=node_budget,
        )
    return bruteforce_delaunay(job.vertices, job.form, job.lattice, node_budget)


def run_oracle(job: OracleJob, node_budget: int) -> BruteForceResult:
    start = time.perf_counter()
    result = guarded_bruteforce(job, node_budget)
    enumeration_nodes_total.inc(result.nodes)
    record_certificate("oracle", result.status.value, _elapsed_ms(start))
    return result


# --- certify -----------------------------------------------------------------------


@dataclass
class CertifyOutcome:
    document: Dict[str, Any]
    exit_code: ExitCode


def run_certify(
    family: FamilyName,
    d: int,
    s: Optional[int] = None,
    k: Optional[int] = None,
    oracle: bool = False,
    node_budget: int = 10**8,
) -> CertifyOutcome:
    """Delaunay certificate, perfection certificate and optionally the oracle.

    G-topes are sections of P(d+1, 1, 2): their Delaunay certificate is the
    diagram certificate of that parent polytope.
    """
    validate_family_parameters(family, d, s, k)
    started = start = time.perf_counter()
    if family is FamilyName.G:
        if d < 6:
            raise ParameterOutOfRange(f"G-topes need d >= 6, got {d}", d=d)
        cert = delaunay_certificate(d + 1, 1, 2)
    else:
        cert = delaunay_certificate(d, s, k)
    record_certificate("delaunay", cert.status.value, _elapsed_ms(start))

    start = time.perf_counter()
    vs = build_vertex_set(family, d, s, k, Normalization.HALF)
    perfection = perfection_certificate(vs)
    record_certificate("perfection", perfection.status.value, _elapsed_ms(start))

    oracle_result = None
    if oracle and cert.certified:
        oracle_result = run_oracle(oracle_job(family, d, s, k, cert), node_budget)

    certified = (
        cert.certified
        and perfection.perfect
        and (oracle_result is None or oracle_result.certified)
    )
    if oracle and not cert.certified:
        logger.info("Skipping the oracle: the Delaunay certificate failed")

    document = CertifyDocument.model_validate(
        {
            "family": family.value,
            "d": d,
            "s": s,
            "k": k,
            "status": (CertificateStatus.CERTIFIED if certified else CertificateStatus.FAILED).value,
            "delaunay": cert.to_dict(),
            "perfection": perfection.to_dict(),
            "oracle": oracle_result.to_dict() if oracle_result else None,
        }
    ).model_dump(mode="json")

    structured_logger.log_run(
        command="certify",
        family=family.value,
        d=d,
        s=s,
        k=k,
        outcome="success" if certified else "refuted",
        status=document["status"],
        runtime_ms=_elapsed_ms(started),
        witness=cert.failure_witness or (oracle_result.witness if oracle_result else None),
    )
    return CertifyOutcome(document, ExitCode.CERTIFIED if certified else ExitCode.REFUTED)


# --- diagram -------------------------------------------------------------------------


def _approx(value: Fraction) -> str:
    return f"{float(value):.12g}"


def diagram_csv(d: int, k: int, s: Optional[int] = None, approx: bool = False) -> str:
    """CSV rows l,a,phi1,phi2 sorted by (phi2, phi1); --s adds an on_line column."""
    points = diagram(d, k)
    targets = set()
    if s is not None:
        if not 1 <= s < d:
            raise ParameterOutOfRange(f"s must satisfy 1 <= s < d, got s={s}", d=d, s=s)
        targets = {eval_phi12(section_vector(d, k, s)), eval_phi12(section_vector(d, k, s + 1))}
    header = ["l", "a", "phi1", "phi2"]
    if s is not None:
        header.append("on_line")
    if approx:
        header.extend(["phi1_approx", "phi2_approx"])
    lines = [",".join(header)]
    for p in points:
        row = [str(p.rep.l), str(p.rep.a), format_rational(p.phi1), format_rational(p.phi2)]
        if s is not None:
            row.append("true" if p.coordinates in targets else "false")
        if approx:
            row.extend([_approx(p.phi1), _approx(p.phi2)])
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# --- scan --------------------------------------------------------------------------


def scan_grid(d_min: int, d_max: int, s_max: int, k_max: int) -> List[Tuple[int, int, int]]:
    if d_max < d_min:
        raise ParameterOutOfRange(f"--d-max ({d_max}) is below d_min ({d_min})")
    if s_max < 1 or k_max < 2:
        raise ParameterOutOfRange(f"Need --s-max >= 1 and --k-max >= 2, got {s_max}, {k_max}")
    return [
        (d, s, k)
        for d in range(d_min, d_max + 1)
        for s in range(1, s_max + 1)
        for k in range(2, k_max + 1)
    ]


def certify_cell(
    d: int, s: int, k: int, oracle: bool, perfection: bool, node_budget: int
) -> Tuple[Dict[str, Any], int, int]:
    """Certify one scan cell; returns (record, enumeration nodes, runtime_ms).

    Runs in worker processes, so it touches no shared state.
    """
    n = d - 2 * k
    record: Dict[str, Any] = {
        "d": d,
        "s": s,
        "k": k,
        "n": n,
        "in_regime": d >= k * (2 * s + 1) + 1,
    }
    if n < 1:
        record.update(outcome="skipped", reason="d - 2k < 1")
        return record, 0, 0
    if s + 1 > d:
        record.update(outcome="skipped", reason="s + 1 > d")
        return record, 0, 0

    start = time.perf_counter()
    nodes = 0
    try:
        cert = delaunay_certificate(d, s, k)
        min_margin = cert.min_margin
        record.update(
            delaunay_status=cert.status.value,
            alpha=format_rational(cert.line.alpha),
            beta=format_rational(cert.line.beta),
            min_margin=format_rational(min_margin) if min_margin is not None else None,
            reason=cert.reason,
        )
        certified = cert.certified
        if perfection:
            pc = perfection_certificate(construct_P(d, s, k, Normalization.HALF))
            record.update(perfection_status=pc.status.value, nullity=pc.nullity)
            certified = certified and pc.perfect
        if oracle and cert.certified:
            job = oracle_job(FamilyName.P, d, s, k, cert)
            result = guarded_bruteforce(job, node_budget)
            nodes = result.nodes
            record["oracle_status"] = result.status.value
            certified = certified and result.certified
        record["outcome"] = "certified" if certified else "failed"
    except PerfectDelaunayError as exc:
        refuted = ExitCode.from_error_code(exc.code) is ExitCode.REFUTED
        record.update(
            outcome="failed" if refuted else "error",
            error_code=exc.code.value,
            reason=exc.message,
        )
    return record, nodes, _elapsed_ms(start)


def _summarize(records: List[Dict[str, Any]]) -> Dict[str, int]:
    def count(outcome: str) -> int:
        return sum(1 for r in records if r["outcome"] == outcome)

    return {
        "cells": len(records),
        "certified": count("certified"),
        "failed": count("failed"),
        "skipped": count("skipped"),
        "errors": count("error"),
        "in_regime_failures": sum(
            1 for r in records if r["in_regime"] and r["outcome"] in ("failed", "error")
        ),
    }


def _log_and_metric_cell(record: Dict[str, Any], nodes: int, runtime_ms: int) -> None:
    """Helper to update metrics and log one scan cell."""
    outcome = record["outcome"]
    scan_cells_total.labels(outcome=outcome).inc()
    if outcome != "skipped":
        if record.get("delaunay_status"):
            record_certificate("delaunay", record["delaunay_status"], runtime_ms)
        if record.get("perfection_status"):
            record_certificate("perfection", record["perfection_status"], runtime_ms)
        if record.get("oracle_status"):
            record_certificate("oracle", record["oracle_status"], runtime_ms)
        enumeration_nodes_total.inc(nodes)
    structured_logger.log_run(
        command="scan",
        family="P",
        d=record["d"],
        s=record["s"],
        k=record["k"],
        outcome={"certified": "success", "failed": "refuted"}.get(outcome, outcome),
        status=outcome,
        runtime_ms=runtime_ms,
        error_code=ErrorCode.normalize(record.get("error_code")),
        witness=record.get("reason"),
        level="ERROR" if outcome == "error" else "INFO",
    )


def run_scan(
    d_max: int,
    s_max: int,
    k_max: int,
    d_min: int = 3,
    jobs: int = 1,
    oracle: bool = False,
    perfection: bool = True,
    node_budget: int = 10**8,
    timings: bool = False,
) -> Tuple[Dict[str, Any], ExitCode]:
    """Certify every (d, s, k) cell of the grid; records sorted by (d, s, k).

    Exit code: 2 if an in-regime cell errored, 1 if one failed, else 0.
    """
    cells = scan_grid(d_min, d_max, s_max, k_max)
    args = [(d, s, k, oracle, perfection, node_budget) for d, s, k in cells]
    logger.info(f"Scanning {len(cells)} cells with {jobs} job(s)")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(certify_cell, *zip(*args)))
    else:
        results = [certify_cell(*a) for a in args]

    records = []
    for record, nodes, runtime_ms in results:
        _log_and_metric_cell(record, nodes, runtime_ms)
        if timings and record["outcome"] != "skipped":
            record["runtime_ms"] = runtime_ms
        records.append(record)
    records.sort(key=lambda r: (r["d"], r["s"], r["k"]))

    report = ScanReport(
        parameters={
            "d_min": d_min,
            "d_max": d_max,
            "s_max": s_max,
            "k_max": k_max,
            "oracle": oracle,
            "perfection": perfection,
        },
        records=[ScanRecord.model_validate(r) for r in records],
        summary=ScanSummary.model_validate(_summarize(records)),
    ).model_dump(mode="json", exclude_none=True)

    in_regime = [r for r in records if r["in_regime"]]
    if any(r["outcome"] == "error" for r in in_regime):
        return report, ExitCode.USAGE
    if any(r["outcome"] == "failed" for r in in_regime):
        return report, ExitCode.REFUTED
    return report, ExitCode.CERTIFIED
