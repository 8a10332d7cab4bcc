"""Delaunay and perfection certificates, the brute force oracle and the
determinant checks of the coefficient systems.

The Delaunay certificate works in the (φ₁, φ₂) diagram: the lattice points
that can violate emptiness are represented by the finite set M, and a form
α·φ₁ + β·φ₂ certifies the section polytope when the line α·φ₁ + β·φ₂ = 1 passes
through the images of v_s and v_{s+1} and every other point of M lies strictly
above it.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pdelaunay.core.errors import (
    DegenerateLineError,
    ParameterOutOfRange,
    PerfectDelaunayError,
    UsageError,
)
from pdelaunay.core.exact_arith import (
    IncrementalEchelon,
    RationalMatrix,
    Vector,
    determinant,
    format_rational,
    neg,
    parse_rational,
    scale,
    sub,
    vector,
    zero_vector,
)
from pdelaunay.core.forms import (
    InhomQuadratic,
    PairForm,
    RadialForm,
    as_inhom,
    eval_phi12,
    pair_to_radial,
    phi_main,
)
from pdelaunay.core.lattice import (
    AffineLattice,
    CanonicalRep,
    ScaledLattice,
    affine_lattice_from_points,
    canonical_rep,
    enumerate_M,
    enumerate_with_stats,
    odd_class,
)
from pdelaunay.core.polytopes import (
    Normalization,
    VertexSet,
    affine_dimension,
    check_parameters,
    construct_P,
    section_vector,
)

logger = logging.getLogger(__name__)

Point2 = Tuple[Fraction, Fraction]


class CertificateStatus(str, Enum):
    CERTIFIED = "certified"
    FAILED = "failed"
    PERFECT = "perfect"
    NOT_PERFECT = "not_perfect"
    VIOLATION = "violation"


# --- diagram -----------------------------------------------------------------


@dataclass(frozen=True)
class DiagramPoint:
    rep: CanonicalRep
    phi1: Fraction
    phi2: Fraction

    @property
    def coordinates(self) -> Point2:
        return self.phi1, self.phi2


def rep_phi12(rep: CanonicalRep) -> Point2:
    """(φ₁, φ₂) of a representative: (height², |l| − l²/d)."""
    height = rep.height
    return height * height, abs(rep.l) - Fraction(rep.l * rep.l, rep.d)


def diagram(d: int, k: int) -> List[DiagramPoint]:
    """Images of M in the (φ₁, φ₂) plane, sorted by (φ₂, φ₁)."""
    points = [DiagramPoint(rep, *rep_phi12(rep)) for rep in enumerate_M(d, k)]
    return sorted(points, key=lambda p: (p.phi2, p.phi1, p.rep))


def curve_point(d: int, n: int, t: int) -> Point2:
    """Point of the curve t ↦ ((t + (1−t)·d/n)², t − t²/d) traced by the
    section vectors v_t."""
    height = t + Fraction((1 - t) * d, n)
    return height * height, t - Fraction(t * t, d)


# --- Delaunay certificate ------------------------------------------------------


def supporting_line(p: Point2, q: Point2) -> PairForm:
    """Pair form (α, β) with α·φ₁ + β·φ₂ = 1 through p and q.

    The form's dimension is not known here and is set to 1; callers rebuild it.
    """
    if p == q:
        raise DegenerateLineError("Both targets map to the same diagram point", point=p)
    det = p[0] * q[1] - q[0] * p[1]
    if det == 0:
        raise DegenerateLineError("Targets are collinear with the origin", p=p, q=q)
    alpha = (q[1] - p[1]) / det
    beta = (p[0] - q[0]) / det
    return PairForm(alpha, beta, 1)


@dataclass(frozen=True)
class Margin:
    rep: CanonicalRep
    phi1: Fraction
    phi2: Fraction
    value: Fraction

    def to_dict(self) -> dict:
        return {
            "l": self.rep.l,
            "a": self.rep.a,
            "phi1": format_rational(self.phi1),
            "phi2": format_rational(self.phi2),
            "margin": format_rational(self.value),
        }


@dataclass(frozen=True)
class DelaunayCertificate:
    d: int
    s: int
    k: int
    line: PairForm
    targets: Tuple[Point2, Point2]
    on_line: Tuple[Optional[CanonicalRep], Optional[CanonicalRep]]
    margins: Tuple[Margin, ...]
    derived_form: RadialForm
    status: CertificateStatus
    curve_consistent: bool
    reason: Optional[str] = None
    failure_witness: Optional[CanonicalRep] = None

    @property
    def n(self) -> int:
        return self.d - 2 * self.k

    @property
    def certified(self) -> bool:
        return self.status is CertificateStatus.CERTIFIED

    @property
    def min_margin(self) -> Optional[Fraction]:
        if not self.margins:
            return None
        return min(m.value for m in self.margins)

    def to_dict(self) -> Dict[str, Any]:
        min_margin = self.min_margin
        return {
            "kind": "delaunay",
            "d": self.d,
            "s": self.s,
            "k": self.k,
            "n": self.n,
            "alpha": format_rational(self.line.alpha),
            "beta": format_rational(self.line.beta),
            "targets": [
                {"phi1": format_rational(t[0]), "phi2": format_rational(t[1])} for t in self.targets
            ],
            "on_line": [rep.to_dict() if rep else None for rep in self.on_line],
            "margins": [m.to_dict() for m in self.margins],
            "min_margin": format_rational(min_margin) if min_margin is not None else None,
            "derived_form": self.derived_form.to_dict(),
            "status": self.status.value,
            "reason": self.reason,
            "failure_witness": self.failure_witness.to_dict() if self.failure_witness else None,
            "curve_consistent": self.curve_consistent,
        }


def _member_of(v: Vector, lat: ScaledLattice, members: set) -> Tuple[Optional[CanonicalRep], CanonicalRep]:
    """Representative of ±v found in M (or None), and the representative of v."""
    rep = canonical_rep(v, lat)
    if rep in members:
        return rep, rep
    opposite = canonical_rep(neg(v), lat)
    if opposite in members:
        return opposite, rep
    return None, rep


def _with_negations(reps) -> set:
    found = {r for r in reps if r is not None}
    return found | {r.negated() for r in found}


def _curve_consistent(d: int, k: int, s: int) -> bool:
    n = d - 2 * k
    indices = set(range(0, d // (2 * k) + 1)) | {s, s + 1}
    return all(
        curve_point(d, n, t) == eval_phi12(section_vector(d, k, t)) for t in sorted(indices) if t <= d
    )


def delaunay_certificate(d: int, s: int, k: int) -> DelaunayCertificate:
    """Diagram certificate for the section polytope with parameters (d, s, k)."""
    check_parameters(d, s, k)
    lat = ScaledLattice.for_parameters(d, k)
    members = enumerate_M(d, k)
    member_set = set(members)

    vs, vs1 = section_vector(d, k, s), section_vector(d, k, s + 1)
    targets = (eval_phi12(vs), eval_phi12(vs1))
    pair = supporting_line(*targets)
    line = PairForm(pair.alpha, pair.beta, d)

    status, reason, witness = CertificateStatus.CERTIFIED, None, None
    on_line = []
    for v in (vs, vs1):
        found, rep = _member_of(v, lat, member_set)
        on_line.append(found)
        if found is None and witness is None:
            status, reason, witness = CertificateStatus.FAILED, "target_not_in_M", rep

    skipped = _with_negations(on_line)
    margins = []
    for rep in members:
        if rep in skipped:
            continue
        phi1, phi2 = rep_phi12(rep)
        margins.append(Margin(rep, phi1, phi2, line.evaluate_pair(phi1, phi2) - 1))

    if witness is None and not line.is_positive_definite:
        status, reason = CertificateStatus.FAILED, "non_positive_coefficients"
    if witness is None and reason is None:
        offending = next((m for m in margins if m.value <= 0), None)
        if offending is not None:
            status, reason, witness = CertificateStatus.FAILED, "margin_not_positive", offending.rep

    cert = DelaunayCertificate(
        d=d,
        s=s,
        k=k,
        line=line,
        targets=targets,
        on_line=(on_line[0], on_line[1]),
        margins=tuple(margins),
        derived_form=pair_to_radial(line),
        status=status,
        curve_consistent=_curve_consistent(d, k, s),
        reason=reason,
        failure_witness=witness,
    )
    logger.debug(f"Delaunay certificate ({d},{s},{k}): {status.value} {reason or ''}".rstrip())
    return cert


def revalidate_delaunay(payload: Dict[str, Any]) -> bool:
    """Re-check a serialized Delaunay certificate from its payload alone.

    Returns True when the payload's status is reproduced: a "certified"
    payload must satisfy every claim; a "failed" one must name the same line,
    reason and witness as a fresh computation.
    """
    try:
        if payload.get("status") == CertificateStatus.FAILED.value:
            return _delaunay_failure_reproduced(payload)
        if payload.get("status") != CertificateStatus.CERTIFIED.value:
            return False
        return _delaunay_claims_hold(payload)
    except (KeyError, TypeError, ValueError, PerfectDelaunayError) as exc:
        logger.debug(f"Delaunay payload rejected: {exc}")
        return False


def _delaunay_failure_reproduced(payload: Dict[str, Any]) -> bool:
    cert = delaunay_certificate(int(payload["d"]), int(payload["s"]), int(payload["k"]))
    if cert.certified:
        return False
    expected_witness = cert.failure_witness.to_dict() if cert.failure_witness else None
    return (
        payload.get("reason") == cert.reason
        and payload.get("failure_witness") == expected_witness
        and parse_rational(payload["alpha"]) == cert.line.alpha
        and parse_rational(payload["beta"]) == cert.line.beta
    )


def _delaunay_claims_hold(payload: Dict[str, Any]) -> bool:
    d, s, k = int(payload["d"]), int(payload["s"]), int(payload["k"])
    line = PairForm(parse_rational(payload["alpha"]), parse_rational(payload["beta"]), d)
    if not line.is_positive_definite:
        return False
    lat = ScaledLattice.for_parameters(d, k)
    members = enumerate_M(d, k)
    member_set = set(members)

    targets, on_line = [], []
    for entry in payload["on_line"]:
        if entry is None:
            return False
        if int(entry["d"]) != d or int(entry["n"]) != lat.n:
            return False
        rep = CanonicalRep(int(entry["l"]), int(entry["a"]), d, lat.n)
        if rep not in member_set:
            return False
        point = rep_phi12(rep)
        if line.evaluate_pair(*point) != 1:
            return False
        targets.append(point)
        on_line.append(rep)
    if len(set(targets)) != 2:
        return False
    # The targets must be the images of ±v_s and ±v_{s+1}.
    expected = {eval_phi12(section_vector(d, k, s)), eval_phi12(section_vector(d, k, s + 1))}
    if set(targets) != expected:
        return False

    reported = {(int(m["l"]), int(m["a"])): parse_rational(m["margin"]) for m in payload["margins"]}
    recomputed = {}
    skipped = _with_negations(on_line)
    for rep in members:
        if rep in skipped:
            continue
        point = rep_phi12(rep)
        value = line.evaluate_pair(*point) - 1
        if value <= 0:
            return False
        recomputed[(rep.l, rep.a)] = value
    if reported != recomputed:
        return False
    if recomputed and parse_rational(payload["min_margin"]) != min(recomputed.values()):
        return False
    derived = pair_to_radial(line)
    form = payload["derived_form"]
    return parse_rational(form["A"]) == derived.A and parse_rational(form["B"]) == derived.B


# --- perfection certificate ----------------------------------------------------


def _monomial_row(coords: Sequence[int]) -> List[int]:
    """[cᵢ·cⱼ for i ≤ j] + [cᵢ] + [1]."""
    m = len(coords)
    row = [coords[i] * coords[j] for i in range(m) for j in range(i, m)]
    row.extend(coords)
    row.append(1)
    return row


def _generator_quadratic(coefficients: Sequence[Fraction], m: int) -> InhomQuadratic:
    gram = [[Fraction(0)] * m for _ in range(m)]
    index = 0
    for i in range(m):
        for j in range(i, m):
            if i == j:
                gram[i][i] = coefficients[index]
            else:
                gram[i][j] = gram[j][i] = coefficients[index] / 2
            index += 1
    linear = tuple(coefficients[index:index + m])
    return InhomQuadratic(RationalMatrix.from_rows(gram), linear, coefficients[index + m])


def _evaluation_rank(coords: Sequence[Sequence[int]], m: int) -> Tuple[int, Optional[InhomQuadratic]]:
    """Rank of the monomial evaluation matrix and, at nullity 1, its kernel generator.

    Rows are added until the rank reaches C(m+2, 2) − 1; the candidate
    generator is then evaluated on every point, and any non-vanishing point
    proves full rank.
    """
    columns = comb(m + 2, 2)
    if m == 0:
        return 1, None
    target = columns - 1
    echelon = IncrementalEchelon(columns)
    for c in coords:
        if echelon.rank == target:
            break
        echelon.add(_monomial_row(c))
    if echelon.rank < target:
        return echelon.rank, None
    (kernel,) = echelon.nullspace()
    generator = _generator_quadratic(kernel, m)
    if any(generator.evaluate(c) != 0 for c in coords):
        return columns, None
    return target, generator


@dataclass(frozen=True)
class PerfectionCertificate:
    vertex_set: VertexSet
    frame: AffineLattice
    rank: int
    generator: Optional[InhomQuadratic]

    @property
    def m(self) -> int:
        return self.frame.rank

    @property
    def columns(self) -> int:
        return comb(self.m + 2, 2)

    @property
    def nullity(self) -> int:
        return self.columns - self.rank

    @property
    def status(self) -> CertificateStatus:
        return CertificateStatus.PERFECT if self.nullity == 1 else CertificateStatus.NOT_PERFECT

    @property
    def perfect(self) -> bool:
        return self.nullity == 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "perfection",
            "family": self.vertex_set.meta.family.value,
            "m": self.m,
            "vertex_count": len(self.vertex_set),
            "columns": self.columns,
            "rank": self.rank,
            "nullity": self.nullity,
            "status": self.status.value,
            "generator": self.generator.to_dict() if self.generator else None,
            "frame": self.frame.to_dict(),
            "vertices": [[format_rational(v) for v in vertex] for vertex in self.vertex_set],
        }


def perfection_certificate(vs: VertexSet) -> PerfectionCertificate:
    """Rank of the space of quadratic functions vanishing on the vertices.

    Vertices are written in integer coordinates of the affine lattice they
    generate; the polytope is perfect iff that space is one-dimensional.
    """
    frame = affine_lattice_from_points(vs.vertices)
    coords = [frame.coordinates(v) for v in vs.vertices]
    rank, generator = _evaluation_rank(coords, frame.rank)
    cert = PerfectionCertificate(vs, frame, rank, generator)
    logger.debug(
        f"Perfection of {vs.meta.family.value}: m={cert.m}, rank={rank}/{cert.columns}, "
        f"nullity={cert.nullity}"
    )
    return cert


def revalidate_perfection(payload: Dict[str, Any]) -> bool:
    """Re-check a serialized perfection certificate from its payload alone."""
    try:
        return _perfection_claims_hold(payload)
    except (KeyError, TypeError, ValueError, PerfectDelaunayError) as exc:
        logger.debug(f"Perfection payload rejected: {exc}")
        return False


def _perfection_claims_hold(payload: Dict[str, Any]) -> bool:
    frame_data = payload["frame"]
    frame = AffineLattice(
        vector(frame_data["origin"]), tuple(vector(g) for g in frame_data["generators"])
    )
    vertices = [vector(v) for v in payload["vertices"]]
    if not vertices or len(vertices) != int(payload["vertex_count"]):
        return False
    if frame.rank != affine_dimension(vertices) or frame.rank != int(payload["m"]):
        return False
    coords = [frame.coordinates(v) for v in vertices]
    if any(c is None for c in coords):
        return False
    rank, generator = _evaluation_rank(coords, frame.rank)
    columns = comb(frame.rank + 2, 2)
    if rank != int(payload["rank"]) or columns - rank != int(payload["nullity"]):
        return False
    if payload.get("generator") is None:
        return generator is None
    data = payload["generator"]
    reported = InhomQuadratic(
        RationalMatrix.from_rows(data["gram"]), vector(data["linear"]), parse_rational(data["constant"])
    )
    return not reported.is_zero() and all(reported.evaluate(c) == 0 for c in coords)


# --- brute force oracle ----------------------------------------------------------


@dataclass(frozen=True)
class BruteForceResult:
    status: CertificateStatus
    boundary_count: int
    radius: Fraction
    nodes: int
    witness: Optional[Vector] = None
    reason: Optional[str] = None

    @property
    def certified(self) -> bool:
        return self.status is CertificateStatus.CERTIFIED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "oracle",
            "status": self.status.value,
            "boundary_count": self.boundary_count,
            "radius": format_rational(self.radius),
            "nodes": self.nodes,
            "witness": [format_rational(v) for v in self.witness] if self.witness else None,
            "reason": self.reason,
        }


def bruteforce_delaunay(
    vs: VertexSet, f: InhomQuadratic, lat: AffineLattice, node_budget: Optional[int] = None
) -> BruteForceResult:
    """Check that the ellipsoid {f ≤ R} holds no lattice point inside and
    exactly the vertices on its boundary."""
    values = {f.evaluate(v) for v in vs.vertices}
    if len(values) != 1:
        raise UsageError(f"Vertices are not equidistant under the form ({len(values)} distinct values)")
    (radius,) = values
    points, nodes = enumerate_with_stats(lat, f, radius, node_budget)
    vertex_set = set(vs.vertices)
    boundary = 0
    for p in points:
        value = f.evaluate(p)
        if value < radius:
            return BruteForceResult(CertificateStatus.VIOLATION, boundary, radius, nodes, p, "interior_point")
        if p not in vertex_set:
            return BruteForceResult(
                CertificateStatus.VIOLATION, boundary, radius, nodes, p, "boundary_non_vertex"
            )
        boundary += 1
    if boundary != len(vertex_set):
        missing = min(vertex_set - set(points))
        return BruteForceResult(
            CertificateStatus.VIOLATION, boundary, radius, nodes, missing, "vertex_not_in_lattice"
        )
    return BruteForceResult(CertificateStatus.CERTIFIED, boundary, radius, nodes)


def oracle_form(d: int, s: int, k: int, cert: Optional[DelaunayCertificate] = None) -> RadialForm:
    """phi_main when admissible, otherwise the form derived from the diagram line."""
    try:
        return phi_main(d, s, k)
    except ParameterOutOfRange:
        if cert is None:
            cert = delaunay_certificate(d, s, k)
        return cert.derived_form


# --- cross check ---------------------------------------------------------------


@dataclass(frozen=True)
class CrossCheckResult:
    d: int
    s: int
    k: int
    congruent: bool
    form: RadialForm
    minimal_norm: Optional[Fraction]
    minimal_count: int
    vertex_count: int
    nodes: int
    witness: Optional[Vector] = None

    @property
    def status(self) -> CertificateStatus:
        ok = (
            self.congruent
            and self.witness is None
            and self.minimal_count == self.vertex_count
        )
        return CertificateStatus.CERTIFIED if ok else CertificateStatus.FAILED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "cross_check",
            "d": self.d,
            "s": self.s,
            "k": self.k,
            "congruent": self.congruent,
            "form": self.form.to_dict(),
            "minimal_norm": format_rational(self.minimal_norm) if self.minimal_norm is not None else None,
            "minimal_count": self.minimal_count,
            "vertex_count": self.vertex_count,
            "nodes": self.nodes,
            "status": self.status.value,
            "witness": [format_rational(v) for v in self.witness] if self.witness else None,
        }


def cross_minimality_check(
    d: int, s: int, k: int, form: Optional[RadialForm] = None, node_budget: Optional[int] = None
) -> CrossCheckResult:
    """(i) all integral vertices are congruent modulo 2Λ⁰'s linear part, i.e.
    (u − v)/2 lies in the half lattice for every pair of vertices; (ii) the
    minimal vectors of Λ⁰ under the form are exactly the integral vertices."""
    vs = construct_P(d, s, k, Normalization.INTEGRAL)
    odd = odd_class(d, k)
    half = odd.linear_part().scaled(Fraction(1, 2))
    reference = vs.vertices[0]
    congruent = all(half.contains(scale(sub(v, reference), Fraction(1, 2))) for v in vs.vertices)

    if form is None:
        form = oracle_form(d, s, k)
    f = as_inhom(form, zero_vector(d), 0)
    norms = {f.evaluate(v) for v in vs.vertices}
    norm = max(norms)
    points, nodes = enumerate_with_stats(odd, f, norm, node_budget)
    minimum = min((f.evaluate(p) for p in points), default=None)
    minimal = [p for p in points if f.evaluate(p) == minimum]
    vertex_set = set(vs.vertices)
    witness = next((p for p in minimal if p not in vertex_set), None)
    return CrossCheckResult(d, s, k, congruent, form, minimum, len(minimal), len(vs), nodes, witness)


# --- coefficient system determinants ------------------------------------------------


def _diagonal_row(d: int, n: int, sigma: int) -> List[Fraction]:
    """Coefficients of (t, α, β, δ) in the norm of a diagonal vector with σ ones."""
    nn = Fraction(1, n)
    return [
        1 - 2 * sigma * nn + sigma * sigma * nn * nn,
        sigma - 2 * sigma * sigma * nn + sigma * sigma * (d - 1) * nn * nn,
        2 * sigma - 2 * sigma * (sigma + d - 1) * nn + 2 * sigma * sigma * (d - 1) * nn * nn,
        sigma * (sigma - 1)
        - 2 * sigma * sigma * (d - 2) * nn
        + sigma * sigma * (d - 1) * (d - 2) * nn * nn,
    ]


def diagonal_system(d: int, k: int, s: int) -> RationalMatrix:
    n = d - 2 * k
    return RationalMatrix.from_rows(
        [
            _diagonal_row(d, n, s - 1),
            _diagonal_row(d, n, s),
            [1, d - 1, 0, 0],
            [0, 0, 2 * (d - 1), (d - 1) * (d - 2)],
        ]
    )


def off_diagonal_system(d: int, k: int, s: int) -> RationalMatrix:
    """Coefficients of (α, β, δ); the last row is scaled by −n to clear its denominator."""
    n = d - 2 * k
    u = Fraction(2 * s, n)
    return RationalMatrix.from_rows(
        [
            [2, 4 * (d - 2), (d - 2) * (d - 3)],
            [2 - 2 * u, 4 * (s - 1) - 2 * u * (s + d - 3), (s - 1) * (s - 2) - u * (s - 1) * (d - 3)],
            [0, 4, 2 * (d - 3) - n],
        ]
    )


@dataclass(frozen=True)
class DeterminantCheck:
    d: int
    k: int
    s: int
    det4: Fraction
    det3: Fraction
    closed4: Fraction
    closed3: Fraction

    @property
    def match(self) -> bool:
        return self.det4 == self.closed4 and self.det3 == self.closed3

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "k": self.k,
            "s": self.s,
            "det4": format_rational(self.det4),
            "det3": format_rational(self.det3),
            "closed4": format_rational(self.closed4),
            "closed3": format_rational(self.closed3),
            "match": self.match,
        }


def thm7_determinants(d: int, k: int, s: int) -> DeterminantCheck:
    """Determinants of the two linear systems constraining the invariant forms,
    with their closed forms (2/n)(d−1)(s−d+1)(s−d)(d−2−n) and 8(d−2−n)(s−d+1)."""
    n = d - 2 * k
    if n < 1:
        raise ParameterOutOfRange(f"d - 2k must be >= 1, got d={d}, k={k}", d=d, k=k)
    if s < 1:
        raise ParameterOutOfRange(f"s must be >= 1, got {s}", s=s)
    det4 = determinant(diagonal_system(d, k, s))
    det3 = determinant(off_diagonal_system(d, k, s))
    closed4 = Fraction(2, n) * (d - 1) * (s - d + 1) * (s - d) * (d - 2 - n)
    closed3 = Fraction(8 * (d - 2 - n) * (s - d + 1))
    return DeterminantCheck(d, k, s, det4, det3, closed4, closed3)
