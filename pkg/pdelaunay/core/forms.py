"""Quadratic forms used by the certificates.

Three shapes appear:

* ``PairForm``: α·φ₁ + β·φ₂ in the two diagram functions
  φ₁(x) = (j·x)² and φ₂(x) = |x|² − (j·x)²/d.
* ``RadialForm``: A·|x|² + B·(j·x)², the same forms written in the
  coordinates of the ambient space.
* ``InhomQuadratic``: xᵀGx + c·x + e, a general inhomogeneous quadratic
  function (the shape of an empty ellipsoid or of a perfection generator).
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from pdelaunay.core.errors import (
    IndefiniteFormError,
    NotProportionalError,
    ParameterOutOfRange,
    UsageError,
)
from pdelaunay.core.exact_arith import (
    RationalMatrix,
    Scalar,
    Vector,
    dot,
    format_rational,
    to_rational,
    vector,
)


def eval_phi12(x: Sequence[Scalar]) -> Tuple[Fraction, Fraction]:
    """Evaluate (φ₁, φ₂) at x.

    φ₁ is the squared coordinate sum, φ₂ the squared norm of the projection
    onto the hyperplane j⊥.
    """
    x = vector(x)
    if not x:
        raise UsageError("eval_phi12 needs a non-empty vector")
    total = sum(x, Fraction(0))
    phi1 = total * total
    phi2 = dot(x, x) - phi1 / len(x)
    return phi1, phi2


def _freeze(obj, **values) -> None:
    for name, value in values.items():
        object.__setattr__(obj, name, value)


@dataclass(frozen=True)
class PairForm:
    """α·φ₁ + β·φ₂ in dimension d."""

    alpha: Fraction
    beta: Fraction
    d: int

    def __post_init__(self):
        _freeze(self, alpha=to_rational(self.alpha), beta=to_rational(self.beta))
        if self.d < 1:
            raise UsageError(f"Dimension must be positive, got {self.d}")

    @property
    def is_positive_definite(self) -> bool:
        return self.alpha > 0 and self.beta > 0

    def evaluate_pair(self, phi1: Fraction, phi2: Fraction) -> Fraction:
        return self.alpha * phi1 + self.beta * phi2

    def evaluate(self, x: Sequence[Scalar]) -> Fraction:
        x = vector(x)
        if len(x) != self.d:
            raise UsageError(f"Vector of length {len(x)} for a form in dimension {self.d}")
        return self.evaluate_pair(*eval_phi12(x))

    def to_dict(self) -> dict:
        return {"alpha": format_rational(self.alpha), "beta": format_rational(self.beta), "d": self.d}


@dataclass(frozen=True)
class RadialForm:
    """A·|x|² + B·(j·x)² in dimension d."""

    A: Fraction
    B: Fraction
    d: int

    def __post_init__(self):
        _freeze(self, A=to_rational(self.A), B=to_rational(self.B))
        if self.d < 1:
            raise UsageError(f"Dimension must be positive, got {self.d}")

    @property
    def is_positive_definite(self) -> bool:
        # Eigenvalues: A on j⊥, A + B·d along j.
        return self.A > 0 and self.A + self.B * self.d > 0

    def evaluate(self, x: Sequence[Scalar]) -> Fraction:
        x = vector(x)
        if len(x) != self.d:
            raise UsageError(f"Vector of length {len(x)} for a form in dimension {self.d}")
        total = sum(x, Fraction(0))
        return self.A * dot(x, x) + self.B * total * total

    def gram(self) -> RationalMatrix:
        off = self.B
        diag = self.A + self.B
        return RationalMatrix.from_rows(
            [[diag if i == j else off for j in range(self.d)] for i in range(self.d)]
        )

    def scaled(self, c: Scalar) -> "RadialForm":
        c = to_rational(c)
        return RadialForm(self.A * c, self.B * c, self.d)

    def to_dict(self) -> dict:
        return {"A": format_rational(self.A), "B": format_rational(self.B), "d": self.d}


@dataclass(frozen=True)
class InhomQuadratic:
    """f(x) = xᵀ·gram·x + linear·x + constant."""

    gram: RationalMatrix
    linear: Vector
    constant: Fraction

    def __post_init__(self):
        if not self.gram.is_symmetric():
            raise UsageError("InhomQuadratic gram must be square and symmetric")
        _freeze(self, linear=vector(self.linear), constant=to_rational(self.constant))
        if len(self.linear) != self.gram.rows:
            raise UsageError(
                f"Linear part has length {len(self.linear)}, gram is {self.gram.rows}x{self.gram.cols}"
            )

    @property
    def dimension(self) -> int:
        return self.gram.rows

    def quadratic_value(self, x: Sequence[Fraction]) -> Fraction:
        return dot(x, self.gram.mat_vec(x))

    def evaluate(self, x: Sequence[Scalar]) -> Fraction:
        x = vector(x)
        if len(x) != self.dimension:
            raise UsageError(f"Vector of length {len(x)} for a quadratic in dimension {self.dimension}")
        return self.quadratic_value(x) + dot(self.linear, x) + self.constant

    def coefficients(self) -> Tuple[Fraction, ...]:
        """Flat coefficient tuple: gram upper triangle, linear part, constant."""
        upper = tuple(
            self.gram[i, j] for i in range(self.dimension) for j in range(i, self.dimension)
        )
        return upper + self.linear + (self.constant,)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients())

    def scaled(self, c: Scalar) -> "InhomQuadratic":
        c = to_rational(c)
        return InhomQuadratic(
            self.gram.scaled(c), tuple(v * c for v in self.linear), self.constant * c
        )

    def to_dict(self) -> dict:
        return {
            "gram": self.gram.to_strings(),
            "linear": [format_rational(v) for v in self.linear],
            "constant": format_rational(self.constant),
        }


def pair_to_radial(pf: PairForm) -> RadialForm:
    """Rewrite α·φ₁ + β·φ₂ as A·|x|² + B·(j·x)²."""
    return RadialForm(pf.beta, pf.alpha - pf.beta / pf.d, pf.d)


def radial_to_pair(rf: RadialForm) -> PairForm:
    return PairForm(rf.A / rf.d + rf.B, rf.A, rf.d)


def phi_main(d: int, s: int, k: int) -> RadialForm:
    """Closed-form positive definite form making the section polytope Delaunay.

    Defined for s ≥ 1, k ≥ 2 and d ≥ k(2s+1) + 1.
    """
    if s < 1 or k < 2:
        raise ParameterOutOfRange(f"phi_main needs s >= 1 and k >= 2, got s={s}, k={k}", d=d, s=s, k=k)
    if d < k * (2 * s + 1) + 1:
        raise ParameterOutOfRange(
            f"phi_main needs d >= k(2s+1)+1 = {k * (2 * s + 1) + 1}, got d={d}", d=d, s=s, k=k
        )
    A = 4 * k * (d - k * (2 * s + 1))
    B = d * d - (4 * k + 2 * s + 1) * d + 4 * k * (2 * s + k)
    form = RadialForm(A, B, d)
    if not form.is_positive_definite:
        raise IndefiniteFormError(f"phi_main({d},{s},{k}) is not positive definite", A=A, B=B)
    return form


def as_inhom(rf: RadialForm, center: Sequence[Scalar], radius_sq: Scalar) -> InhomQuadratic:
    """InhomQuadratic of x ↦ φ(x − c) − R²."""
    c = vector(center)
    if len(c) != rf.d:
        raise UsageError(f"Center of length {len(c)} for a form in dimension {rf.d}")
    gram = rf.gram()
    gc = gram.mat_vec(c)
    return InhomQuadratic(gram, tuple(-2 * v for v in gc), dot(c, gc) - to_rational(radius_sq))


def degenerate_perfect_form(a: Sequence[Scalar]) -> InhomQuadratic:
    """p(x) = (a·x)(a·x − 1), vanishing on the two layers a·x ∈ {0, 1}."""
    a = vector(a)
    if not any(a):
        raise UsageError("degenerate_perfect_form needs a non-zero functional")
    gram = RationalMatrix.from_rows([[ai * aj for aj in a] for ai in a])
    return InhomQuadratic(gram, tuple(-v for v in a), Fraction(0))


def proportional(f: InhomQuadratic, g: InhomQuadratic) -> Fraction:
    """Return c ≠ 0 with g = c·f, or raise NotProportionalError."""
    if f.dimension != g.dimension:
        raise UsageError(f"Cannot compare quadratics in dimensions {f.dimension} and {g.dimension}")
    fc, gc = f.coefficients(), g.coefficients()
    index = next((i for i, v in enumerate(fc) if v != 0), None)
    if index is None:
        raise UsageError("Reference quadratic is identically zero")
    c = gc[index] / fc[index]
    if c == 0:
        raise NotProportionalError("Second quadratic vanishes where the first does not")
    for i, (a, b) in enumerate(zip(fc, gc)):
        if b != c * a:
            raise NotProportionalError(
                f"Coefficient {i} breaks proportionality (ratio {format_rational(c)})", index=i
            )
    return c
