"""Vertex sets of the symmetric polytopes P and the asymmetric G-topes.

Vertices are generated on integer grids (scaled by the common denominator)
and converted to fractions once, so large instances share Fraction objects.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from pdelaunay.core.errors import ParameterOutOfRange, UsageError
from pdelaunay.core.exact_arith import (
    IncrementalEchelon,
    Scalar,
    Vector,
    common_denominator,
    dot,
    format_rational,
    vector,
)

logger = logging.getLogger(__name__)


class Normalization(str, Enum):
    """Scale of the symmetric polytope: ±D/2 (half) or ±D (integral)."""

    HALF = "half"
    INTEGRAL = "integral"


class Family(str, Enum):
    P_HALF = "P-half"
    P_INTEGRAL = "P-integral"
    G_SECTION = "G-section"
    CUSTOM = "custom"


@dataclass(frozen=True)
class VertexSetMeta:
    family: Family
    d: int
    s: Optional[int] = None
    k: Optional[int] = None
    normalization: Optional[Normalization] = None
    ambient_dim: int = 0

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "d": self.d,
            "s": self.s,
            "k": self.k,
            "normalization": self.normalization.value if self.normalization else None,
            "ambient_dim": self.ambient_dim,
        }


@dataclass(frozen=True)
class VertexSet:
    """Sorted, duplicate-free vertices with their construction metadata."""

    vertices: Tuple[Vector, ...]
    meta: VertexSetMeta

    @classmethod
    def from_points(cls, points: Iterable[Sequence[Scalar]], meta: Optional[VertexSetMeta] = None) -> "VertexSet":
        vertices = tuple(sorted({vector(p) for p in points}))
        if not vertices:
            raise UsageError("A vertex set needs at least one point")
        dim = len(vertices[0])
        if any(len(v) != dim for v in vertices):
            raise UsageError("Vertices differ in dimension")
        if meta is None:
            meta = VertexSetMeta(Family.CUSTOM, dim, ambient_dim=dim)
        return cls(vertices, meta)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.vertices)

    @cached_property
    def affine_dim(self) -> int:
        return affine_dimension(self.vertices)

    def to_csv(self) -> str:
        lines = [",".join(format_rational(v) for v in vertex) for vertex in self.vertices]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "meta": self.meta.to_dict(),
            "count": len(self.vertices),
            "affine_dim": self.affine_dim,
            "vertices": [[format_rational(v) for v in vertex] for vertex in self.vertices],
        }


def affine_dimension(points: Sequence[Vector]) -> int:
    """Dimension of the affine hull of ``points``."""
    if not points:
        raise UsageError("Affine dimension of an empty point set")
    origin = points[0]
    dim = len(origin)
    scale = common_denominator(v for p in points for v in p)
    echelon = IncrementalEchelon(dim)
    for p in points[1:]:
        echelon.add([int((a - b) * scale) for a, b in zip(p, origin)])
        if echelon.rank == dim:
            break
    return echelon.rank


def check_parameters(d: int, s: int, k: int) -> int:
    """Validate (d, s, k) for the symmetric family and return n = d − 2k."""
    if s < 1:
        raise ParameterOutOfRange(f"s must be >= 1, got {s}", d=d, s=s, k=k)
    if k < 2:
        raise ParameterOutOfRange(f"k must be >= 2, got {k}", d=d, s=s, k=k)
    n = d - 2 * k
    if n < 1:
        raise ParameterOutOfRange(f"d - 2k must be >= 1, got d={d}, k={k}", d=d, s=s, k=k)
    if s + 1 > d:
        raise ParameterOutOfRange(f"s + 1 must be <= d, got s={s}, d={d}", d=d, s=s, k=k)
    return n


def _patterns(d: int, ones: int, high: int, low: int) -> Iterator[Tuple[int, ...]]:
    """All permutations of [high^ones, low^(d−ones)]."""
    for chosen in combinations(range(d), ones):
        row = [low] * d
        for i in chosen:
            row[i] = high
        yield tuple(row)


def _diagonal_rows(d: int, s: int, n: int) -> Set[Tuple[int, ...]]:
    """n·D: permutations of n·[1^s, 0] − (s−1)·j and n·[1^(s+1), 0] − s·j."""
    rows = set(_patterns(d, s, n - (s - 1), -(s - 1)))
    rows.update(_patterns(d, s + 1, n - s, -s))
    return rows


def _to_vectors(rows: Iterable[Tuple[int, ...]], denominator: int) -> Tuple[Vector, ...]:
    cache: Dict[int, Fraction] = {}

    def convert(v: int) -> Fraction:
        value = cache.get(v)
        if value is None:
            value = cache[v] = Fraction(v, denominator)
        return value

    return tuple(tuple(convert(v) for v in row) for row in sorted(rows))


def construct_D(d: int, s: int, k: int) -> List[Vector]:
    """The diagonal set D: both generator families under all coordinate permutations."""
    n = check_parameters(d, s, k)
    return list(_to_vectors(_diagonal_rows(d, s, n), n))


def construct_P(d: int, s: int, k: int, normalization: Normalization = Normalization.HALF) -> VertexSet:
    """Vertex set ±D/2 (half) or ±D (integral); 2·C(d+1, s+1) vertices."""
    n = check_parameters(d, s, k)
    normalization = Normalization(normalization)
    rows = _diagonal_rows(d, s, n)
    rows.update(tuple(-v for v in row) for row in list(rows))
    denominator = 2 * n if normalization is Normalization.HALF else n
    family = Family.P_HALF if normalization is Normalization.HALF else Family.P_INTEGRAL
    meta = VertexSetMeta(family, d, s, k, normalization, d)
    vs = VertexSet(_to_vectors(rows, denominator), meta)
    logger.debug(f"Constructed {family.value}({d},{s},{k}) with {len(vs)} vertices")
    return vs


def construct_G(d: int) -> VertexSet:
    """G-tope of dimension d: vertices v of P(d+1, 1, 2, half) with u·v = 1/2,
    u = [−1, −1, 1^(d−1)]."""
    if d < 6:
        raise ParameterOutOfRange(f"G-topes need d >= 6, got {d}", d=d)
    ambient = d + 1
    n = check_parameters(ambient, 1, 2)
    rows = _diagonal_rows(ambient, 1, n)
    rows.update(tuple(-v for v in row) for row in list(rows))
    # u·(row / 2n) = 1/2  <=>  u·row = n
    u = section_functional(d)
    section = {row for row in rows if dot(u, row) == n}
    meta = VertexSetMeta(Family.G_SECTION, d, 1, 2, Normalization.HALF, ambient)
    vs = VertexSet(_to_vectors(section, 2 * n), meta)
    expected = comb(d + 2, 2) - 1
    if len(vs) != expected:
        raise UsageError(f"G-tope of dimension {d} has {len(vs)} vertices, expected {expected}")
    return vs


def section_functional(d: int) -> Vector:
    """u = [−1, −1, 1^(d−1)] in dimension d + 1."""
    return (Fraction(-1), Fraction(-1)) + (Fraction(1),) * (d - 1)


def section_vector(d: int, k: int, l: int) -> Vector:  # noqa: E741
    """v_l = [1^l, 0^(d−l)] − (l−1)·j/n."""
    n = d - 2 * k
    if n < 1:
        raise ParameterOutOfRange(f"d - 2k must be >= 1, got d={d}, k={k}", d=d, k=k)
    if not 0 <= l <= d:
        raise UsageError(f"Section index l must lie in [0, {d}], got {l}")
    shift = Fraction(l - 1, n)
    return tuple((Fraction(1) if i < l else Fraction(0)) - shift for i in range(d))


@dataclass(frozen=True)
class SymmetryReport:
    centrally_symmetric: bool
    center: Optional[Vector]
    affine_dim: int

    def to_dict(self) -> dict:
        return {
            "centrally_symmetric": self.centrally_symmetric,
            "center": [format_rational(v) for v in self.center] if self.center is not None else None,
            "affine_dim": self.affine_dim,
        }


def symmetry_and_dim(vs: VertexSet) -> SymmetryReport:
    """Central symmetry about the barycenter, and the affine dimension."""
    count = len(vs.vertices)
    dim = len(vs.vertices[0])
    barycenter = tuple(sum((v[i] for v in vs.vertices), Fraction(0)) / count for i in range(dim))
    doubled = tuple(2 * c for c in barycenter)
    members = set(vs.vertices)
    symmetric = all(tuple(c - x for c, x in zip(doubled, v)) in members for v in vs.vertices)
    return SymmetryReport(symmetric, barycenter if symmetric else None, vs.affine_dim)
