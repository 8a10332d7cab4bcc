"""The lattice Λ = Zᵈ + Z·(j/n), its odd class, and lattice point enumeration.

Points of Λ are written λ = z + a·j/n with z ∈ Zᵈ and 0 ≤ a < n. The
canonical representative of a point whose integer parts take two consecutive
values is (l, a) with point [1^l, 0^(d−|l|)] + a·j/n (negative l meaning
entries −1) and window −d/2 ≤ l < d/2.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from pdelaunay.core.errors import (
    BudgetExceededError,
    IndefiniteFormError,
    NotInLatticeError,
    NotTwoValuedError,
    ParameterOutOfRange,
    UsageError,
)
from pdelaunay.core.exact_arith import (
    RationalMatrix,
    Scalar,
    Vector,
    common_denominator,
    dot,
    format_rational,
    ldlt,
    neg,
    solve_ldlt,
    sub,
    to_rational,
    unit_vector,
    vector,
)
from pdelaunay.core.forms import InhomQuadratic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScaledLattice:
    """Λ = Zᵈ + Z·(j/n) for 1 ≤ n < d."""

    d: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterOutOfRange(f"d - 2k must be >= 1, got n={self.n}", d=self.d, n=self.n)
        if self.n >= self.d:
            raise ParameterOutOfRange(f"n must be < d, got n={self.n}, d={self.d}", d=self.d, n=self.n)

    @classmethod
    def for_parameters(cls, d: int, k: int) -> "ScaledLattice":
        if k < 1:
            raise ParameterOutOfRange(f"k must be >= 1, got {k}", d=d, k=k)
        n = d - 2 * k
        if n < 1:
            raise ParameterOutOfRange(f"d - 2k must be >= 1, got d={d}, k={k}", d=d, k=k)
        return cls(d, n)

    @property
    def j_over_n(self) -> Vector:
        return (Fraction(1, self.n),) * self.d

    def decompose(self, x: Sequence[Scalar]) -> Optional[Tuple[Tuple[int, ...], int]]:
        """Split x into (z, a) with x = z + a·j/n and 0 ≤ a < n; None if x ∉ Λ."""
        x = vector(x)
        if len(x) != self.d:
            raise UsageError(f"Vector of length {len(x)} for a lattice in dimension {self.d}")
        scaled = [v * self.n for v in x]
        if any(v.denominator != 1 for v in scaled):
            return None
        ints = [v.numerator for v in scaled]
        a = ints[0] % self.n
        if any((v - a) % self.n for v in ints):
            return None
        return tuple((v - a) // self.n for v in ints), a

    def contains(self, x: Sequence[Scalar]) -> bool:
        return self.decompose(x) is not None


@dataclass(frozen=True)
class ParityFunctional:
    """l⁰ = (−1^k, 1^(d−k)); l⁰·λ is an integer for λ ∈ Λ and l⁰·j = n."""

    d: int
    k: int

    def __post_init__(self):
        ScaledLattice.for_parameters(self.d, self.k)

    @property
    def n(self) -> int:
        return self.d - 2 * self.k

    @property
    def lattice(self) -> ScaledLattice:
        return ScaledLattice(self.d, self.n)

    @property
    def vector(self) -> Vector:
        return (Fraction(-1),) * self.k + (Fraction(1),) * (self.d - self.k)

    def value(self, x: Sequence[Scalar]) -> Fraction:
        return dot(self.vector, vector(x))


def parity(lam: Sequence[Scalar], pf: ParityFunctional) -> int:
    """(l⁰·λ) mod 2 for λ ∈ Λ."""
    lam = vector(lam)
    if not pf.lattice.contains(lam):
        raise NotInLatticeError(f"{[format_rational(v) for v in lam]} is not in the lattice")
    return pf.value(lam).numerator % 2


@dataclass(frozen=True, order=True)
class CanonicalRep:
    """Canonical representative (l, a) of a two-valued lattice point."""

    l: int  # noqa: E741
    a: int
    d: int
    n: int

    def __post_init__(self):
        if not -self.d <= 2 * self.l < self.d:
            raise UsageError(f"l={self.l} outside the window -d/2 <= l < d/2 for d={self.d}")

    @property
    def parity(self) -> int:
        return (self.l + self.a) % 2

    @property
    def height(self) -> Fraction:
        """Coordinate sum j·λ = l + a·d/n."""
        return self.l + Fraction(self.a * self.d, self.n)

    def point(self) -> Vector:
        sign = 1 if self.l >= 0 else -1
        shift = Fraction(self.a, self.n)
        size = abs(self.l)
        return tuple(
            (Fraction(sign) if i < size else Fraction(0)) + shift for i in range(self.d)
        )

    def negated(self) -> "CanonicalRep":
        return canonical_rep(neg(self.point()), ScaledLattice(self.d, self.n))

    def to_dict(self) -> dict:
        return {"l": self.l, "a": self.a, "d": self.d, "n": self.n}

    def __str__(self) -> str:
        return f"({self.l},{self.a})"


def canonical_rep(lam: Sequence[Scalar], lat: ScaledLattice) -> CanonicalRep:
    """Canonical representative of λ ∈ Λ; NotTwoValuedError if its integer
    parts (after removing the multiple of j/n) span more than two values."""
    lam = vector(lam)
    parts = lat.decompose(lam)
    if parts is None:
        raise NotInLatticeError(f"{[format_rational(v) for v in lam]} is not in the lattice")
    z, a0 = parts
    low, high = min(z), max(z)
    if high - low > 1:
        raise NotTwoValuedError(
            f"Integer parts take values in [{low}, {high}]", low=low, high=high
        )
    ones = sum(1 for v in z if v == high) if high != low else 0
    l, a = ones, a0 + low * lat.n  # noqa: E741
    if 2 * l >= lat.d:
        # [1^c, 0^(d-c)] = j - [0^c, 1^(d-c)]
        l, a = ones - lat.d, a + lat.n  # noqa: E741
    return CanonicalRep(l, a, lat.d, lat.n)


def enumerate_M(d: int, k: int) -> List[CanonicalRep]:
    """Representatives of odd parity with 0 ≤ l·n + a·d < d, plus j/n; sorted by l."""
    lat = ScaledLattice.for_parameters(d, k)
    n = lat.n
    reps = [CanonicalRep(0, 1, d, n)]
    for l in range(-(d // 2), (d + 1) // 2):  # noqa: E741
        if l == 0:
            continue
        a = -((l * n) // d)
        if (l + a) % 2 == 1:
            reps.append(CanonicalRep(l, a, d, n))
    return sorted(reps)


def hermite_normal_form(rows: Sequence[Sequence[int]], cols: int) -> List[List[int]]:
    """Row-style reduced Hermite normal form of the integer span of ``rows``.

    Rows of the result have strictly increasing pivots, positive pivot
    entries, and entries above each pivot reduced into [0, pivot).
    """
    basis: List[List[int]] = []
    pivots: List[int] = []
    for row in rows:
        vec = list(row)
        if len(vec) != cols:
            raise UsageError(f"Row of length {len(vec)}, expected {cols}")
        index = 0
        for j in range(cols):
            if vec[j] == 0:
                continue
            while index < len(pivots) and pivots[index] < j:
                index += 1
            if index == len(pivots) or pivots[index] != j:
                if vec[j] < 0:
                    vec = [-v for v in vec]
                basis.insert(index, vec)
                pivots.insert(index, j)
                break
            base = basis[index]
            a, b = base[j], vec[j]
            if b % a == 0:
                q = b // a
                vec = [v - q * w for v, w in zip(vec, base)]
                continue
            g, x, y = _xgcd(a, b)
            new_base = [x * w + y * v for w, v in zip(base, vec)]
            vec = [(a // g) * v - (b // g) * w for w, v in zip(base, vec)]
            if new_base[j] < 0:
                new_base = [-v for v in new_base]
            basis[index] = new_base
    for i, pivot in enumerate(pivots):
        p = basis[i][pivot]
        for h in range(i):
            q = basis[h][pivot] // p
            if q:
                basis[h] = [v - q * w for v, w in zip(basis[h], basis[i])]
    return basis


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """g, x, y with a·x + b·y = g = gcd(a, b) > 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_r, -old_x, -old_y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class AffineLattice:
    """origin + Z-span of ``generators`` (rows in Hermite normal form)."""

    origin: Vector
    generators: Tuple[Vector, ...]
    _scale: int = field(init=False, repr=False, compare=False)
    _int_rows: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _pivots: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        origin = vector(self.origin)
        generators = tuple(vector(g) for g in self.generators)
        if any(len(g) != len(origin) for g in generators):
            raise UsageError("Generators and origin differ in dimension")
        scale = common_denominator(v for g in generators for v in g)
        int_rows = tuple(tuple(int(v * scale) for v in g) for g in generators)
        pivots = []
        for row in int_rows:
            pivot = next((j for j, v in enumerate(row) if v != 0), None)
            if pivot is None or (pivots and pivot <= pivots[-1]) or row[pivot] < 0:
                raise UsageError("Affine lattice generators must be in echelon form")
            pivots.append(pivot)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "_scale", scale)
        object.__setattr__(self, "_int_rows", int_rows)
        object.__setattr__(self, "_pivots", tuple(pivots))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def dimension(self) -> int:
        """Ambient dimension."""
        return len(self.origin)

    @property
    def basis(self) -> Optional[RationalMatrix]:
        """Generators as matrix columns (None for a single point)."""
        if not self.generators:
            return None
        return RationalMatrix.from_rows(self.generators).transpose()

    def coordinates(self, x: Sequence[Scalar]) -> Optional[Tuple[int, ...]]:
        """Integer coordinates of x in the generator basis, or None if x ∉ lattice."""
        diff = sub(vector(x), self.origin)
        scaled = [v * self._scale for v in diff]
        if any(v.denominator != 1 for v in scaled):
            return None
        rest = [v.numerator for v in scaled]
        coords = []
        for row, pivot in zip(self._int_rows, self._pivots):
            q, r = divmod(rest[pivot], row[pivot])
            if r:
                return None
            if q:
                rest = [v - q * w for v, w in zip(rest, row)]
            coords.append(q)
        if any(rest):
            return None
        return tuple(coords)

    def contains(self, x: Sequence[Scalar]) -> bool:
        return self.coordinates(x) is not None

    def point(self, coords: Sequence[int]) -> Vector:
        if len(coords) != self.rank:
            raise UsageError(f"Expected {self.rank} coordinates, got {len(coords)}")
        entries = list(self.origin)
        for c, g in zip(coords, self.generators):
            if c:
                entries = [e + c * v for e, v in zip(entries, g)]
        return tuple(entries)

    def linear_part(self) -> "AffineLattice":
        return AffineLattice(tuple(Fraction(0) for _ in self.origin), self.generators)

    def scaled(self, c: Scalar) -> "AffineLattice":
        c = to_rational(c)
        if c <= 0:
            raise UsageError(f"Lattice scale factor must be positive, got {c}")
        return AffineLattice(
            tuple(v * c for v in self.origin),
            tuple(tuple(v * c for v in g) for g in self.generators),
        )

    def to_dict(self) -> dict:
        return {
            "origin": [format_rational(v) for v in self.origin],
            "generators": [[format_rational(v) for v in g] for g in self.generators],
        }


def affine_lattice_from_points(points: Sequence[Sequence[Scalar]]) -> AffineLattice:
    """Affine lattice generated by ``points``: origin = first point, Hermite
    normal form basis of the differences, independent of point order."""
    if not points:
        raise UsageError("affine_lattice_from_points needs at least one point")
    pts = [vector(p) for p in points]
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise UsageError("Points differ in dimension")
    origin = pts[0]
    diffs = [sub(p, origin) for p in pts[1:]]
    scale = common_denominator(v for diff in diffs for v in diff)
    int_rows = [[int(v * scale) for v in diff] for diff in diffs]
    hnf = hermite_normal_form(int_rows, dim)
    return AffineLattice(origin, tuple(tuple(Fraction(v, scale) for v in row) for row in hnf))


def odd_class(d: int, k: int) -> AffineLattice:
    """Λ⁰ = {λ ∈ Λ : l⁰·λ odd} = e₁ + Λ_even."""
    lat = ScaledLattice.for_parameters(d, k)
    first = unit_vector(d, 0)
    points = [first, tuple(3 * v for v in first)]
    points.extend(unit_vector(d, i) for i in range(1, d))
    points.append(lat.j_over_n)
    return affine_lattice_from_points(points)


def restrict_form(f: InhomQuadratic, lat: AffineLattice) -> InhomQuadratic:
    """Pull f back to integer coordinates y of the lattice: g(y) = f(o + B·y)."""
    if f.dimension != lat.dimension:
        raise UsageError(f"Quadratic in dimension {f.dimension}, lattice in {lat.dimension}")
    images = [f.gram.mat_vec(g) for g in lat.generators]
    gram = [[dot(lat.generators[i], images[j]) for j in range(lat.rank)] for i in range(lat.rank)]
    origin_image = f.gram.mat_vec(lat.origin)
    linear = tuple(2 * dot(g, origin_image) + dot(g, f.linear) for g in lat.generators)
    return InhomQuadratic(RationalMatrix.from_rows(gram), linear, f.evaluate(lat.origin))


def _integer_window(center: Fraction, radius_sq: Fraction) -> range:
    """Integers y with (y − center)² ≤ radius_sq."""
    if radius_sq < 0:
        return range(0)
    r = isqrt(math.floor(radius_sq))
    lo = math.floor(center) - r - 1
    while (lo - center) ** 2 > radius_sq:
        if lo > center:
            return range(0)
        lo += 1
    hi = math.ceil(center) + r + 1
    while (hi - center) ** 2 > radius_sq:
        hi -= 1
    return range(lo, hi + 1)


@dataclass
class _Ellipsoid:
    """Lattice-coordinate data shared by enumeration and node estimates."""

    restricted: InhomQuadratic
    lower: RationalMatrix
    diag: Tuple[Fraction, ...]
    center: Vector
    slack: Fraction


def _prepare(lat: AffineLattice, f: InhomQuadratic, bound: Scalar) -> _Ellipsoid:
    restricted = restrict_form(f, lat)
    try:
        decomposition = ldlt(restricted.gram)
    except IndefiniteFormError as exc:
        raise UsageError("Quadratic part is not positive definite on the lattice span") from exc
    if not decomposition.is_positive_definite:
        raise UsageError("Quadratic part is only semidefinite on the lattice span")
    center = solve_ldlt(decomposition, tuple(-v / 2 for v in restricted.linear))
    slack = to_rational(bound) - restricted.evaluate(center)
    return _Ellipsoid(restricted, decomposition.lower, decomposition.diag, center, slack)


def estimate_nodes(lat: AffineLattice, f: InhomQuadratic, bound: Scalar) -> int:
    """Upper-bound style estimate ∏(2⌊√(T/Dᵢ)⌋ + 1) of the search tree size."""
    if lat.rank == 0:
        return 1
    ell = _prepare(lat, f, bound)
    if ell.slack < 0:
        return 0
    total = 1
    for pivot in ell.diag:
        total *= 2 * isqrt(math.floor(ell.slack / pivot)) + 1
    return total


def enumerate_with_stats(
    lat: AffineLattice, f: InhomQuadratic, bound: Scalar, node_budget: Optional[int] = None
) -> Tuple[List[Vector], int]:
    """Enumerate {x ∈ lat : f(x) ≤ bound}; returns (sorted points, visited nodes)."""
    bound = to_rational(bound)
    if lat.rank == 0:
        inside = [lat.origin] if f.evaluate(lat.origin) <= bound else []
        return inside, 1
    ell = _prepare(lat, f, bound)
    if ell.slack < 0:
        return [], 0

    rank = lat.rank
    lower, diag, center = ell.lower, ell.diag, ell.center
    coords = [0] * rank
    found: List[Vector] = []
    nodes = 0

    def descend(i: int, remaining: Fraction) -> None:
        nonlocal nodes
        shift = sum(
            (lower[j, i] * (coords[j] - center[j]) for j in range(i + 1, rank)), Fraction(0)
        )
        level_center = center[i] - shift
        for y in _integer_window(level_center, remaining / diag[i]):
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise BudgetExceededError(
                    f"Enumeration exceeded the node budget of {node_budget}", budget=node_budget
                )
            coords[i] = y
            left = remaining - diag[i] * (y - level_center) ** 2
            if i == 0:
                found.append(lat.point(coords))
            else:
                descend(i - 1, left)
        coords[i] = 0

    descend(rank - 1, ell.slack)
    points = sorted(p for p in found if f.evaluate(p) <= bound)
    logger.debug(f"Enumerated {len(points)} lattice points in {nodes} nodes (rank {rank})")
    return points, nodes


def enumerate_in_ellipsoid(
    lat: AffineLattice, f: InhomQuadratic, bound: Scalar, node_budget: Optional[int] = None
) -> List[Vector]:
    """Sorted list of lattice points x with f(x) ≤ bound."""
    points, _ = enumerate_with_stats(lat, f, bound, node_budget)
    return points


def minimal_vectors(
    lat: AffineLattice, f: InhomQuadratic, bound: Scalar, node_budget: Optional[int] = None
) -> Tuple[Optional[Fraction], List[Vector], int]:
    """Minimum of f over lat (searched up to ``bound``) and the points attaining it."""
    points, nodes = enumerate_with_stats(lat, f, bound, node_budget)
    if not points:
        return None, [], nodes
    values: Dict[Vector, Fraction] = {p: f.evaluate(p) for p in points}
    minimum = min(values.values())
    return minimum, [p for p in points if values[p] == minimum], nodes
