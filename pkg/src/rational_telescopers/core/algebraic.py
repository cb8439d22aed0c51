"""
Residues of rational functions at the roots of an irreducible polynomial in z.

For an irreducible d in K[x, y][z] of z-degree n, an element of
K(x, y)(beta) with d(beta) = 0 is stored by its coordinates in the power
basis 1, beta, ..., beta^(n-1). Derivations in x or y act through the
derivation matrix of beta; shifts in a variable d does not depend on act
coordinatewise.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Sequence, Tuple

from ..exceptions.telescoping_exceptions import ZeroDivisorError
from ..utils.logging_config import get_logger
from .algebra import (
    FIELD,
    RING,
    Kind,
    MPoly,
    RatFun,
    act,
    as_ratfun,
    coefficients_in,
    common_denominator,
    degree,
    derivative,
    format_poly,
    free_of,
    from_univariate,
    gcd_mpoly,
    inverse_mod,
    lcm_mpoly,
    multiplicity,
    poly_gen,
    primitive_part,
    squarefree_decompose,
    to_univariate,
    univariate_fraction,
)

logger = get_logger(__name__)


def _coords(f: RatFun, modulus: MPoly) -> Tuple[RatFun, ...]:
    d_u = to_univariate(modulus, "z")
    num_u, den_u = univariate_fraction(f, "z")
    rem_u = (num_u * inverse_mod(den_u % d_u, d_u)) % d_u
    coeffs = coefficients_in(from_univariate(rem_u, "z"), "z")
    n = degree(modulus, "z")
    return tuple(coeffs) + (FIELD.zero,) * (n - len(coeffs))


@dataclass(frozen=True)
class AlgebraicElement:
    """
    An element of K(x, y)(beta), beta a root of modulus.

    Attributes:
        modulus: Irreducible polynomial of positive z-degree
        coords: Coordinates in the power basis, free of z
    """

    modulus: MPoly
    coords: Tuple[RatFun, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != degree(self.modulus, "z"):
            raise ValueError(
                f"{len(self.coords)} coordinates for modulus of z-degree {degree(self.modulus, 'z')}"
            )

    @classmethod
    def of(cls, f: RatFun, modulus: MPoly) -> "AlgebraicElement":
        """
        The image of f, whose denominator must be coprime to modulus.

        Raises:
            NotCoprimeError: If the denominator vanishes at beta
        """
        return cls(modulus, _coords(as_ratfun(f), modulus))

    @classmethod
    def zero(cls, modulus: MPoly) -> "AlgebraicElement":
        return cls(modulus, (FIELD.zero,) * degree(modulus, "z"))

    @property
    def degree(self) -> int:
        return len(self.coords)

    def value(self) -> RatFun:
        """The canonical representative as a polynomial in z."""
        z = FIELD.gens[2]
        return sum((c * z**i for i, c in enumerate(self.coords)), FIELD.zero)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "AlgebraicElement") -> None:
        if self.modulus != other.modulus:
            raise ValueError("elements of different extensions")

    def __add__(self, other: "AlgebraicElement") -> "AlgebraicElement":
        self._check(other)
        return AlgebraicElement(self.modulus, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AlgebraicElement":
        return AlgebraicElement(self.modulus, tuple(-a for a in self.coords))

    def __sub__(self, other: "AlgebraicElement") -> "AlgebraicElement":
        return self + (-other)

    def __mul__(self, other: "AlgebraicElement") -> "AlgebraicElement":
        self._check(other)
        return AlgebraicElement.of(self.value() * other.value(), self.modulus)

    def scale(self, c: RatFun) -> "AlgebraicElement":
        """Multiply by a scalar free of z."""
        c = as_ratfun(c)
        if not free_of(c, "z"):
            raise ValueError("scalars must be free of z")
        return AlgebraicElement(self.modulus, tuple(c * a for a in self.coords))

    def inverse(self) -> "AlgebraicElement":
        """
        Multiplicative inverse.

        Raises:
            ZeroDivisorError: For the zero element
        """
        if self.is_zero():
            raise ZeroDivisorError("the zero residue has no inverse")
        return AlgebraicElement.of(1 / self.value(), self.modulus)

    def derivative(self, var: str) -> "AlgebraicElement":
        """D_var, with D_var(beta) = -d_var(modulus)/d_z(modulus) at beta."""
        matrix = derivation_matrix(self.modulus, var)
        coords = [derivative(c, var) for c in self.coords]
        for i, c in enumerate(self.coords):
            if c:
                for j, m in enumerate(matrix[i]):
                    coords[j] += c * m
        return AlgebraicElement(self.modulus, tuple(coords))

    def act(self, var: str, kind: Kind, power: int = 1) -> "AlgebraicElement":
        """
        Apply an atomic operator.

        Raises:
            ValueError: For a shift in a variable the modulus depends on
        """
        if kind == Kind.D:
            result = self
            for _ in range(power):
                result = result.derivative(var)
            return result
        if not free_of(self.modulus, var):
            raise ValueError(f"{kind.value}{var} moves the root of {format_poly(self.modulus)}")
        return AlgebraicElement(self.modulus, tuple(act(c, var, kind, power) for c in self.coords))

    def valuation(self, w: MPoly) -> float:
        """Smallest order of w over the coordinates; infinity for zero."""
        orders = [
            multiplicity(w, c.numer) - multiplicity(w, c.denom) for c in self.coords if c
        ]
        return min(orders) if orders else float("inf")


@lru_cache(maxsize=None)
def derivation_matrix(modulus: MPoly, var: str) -> Tuple[Tuple[RatFun, ...], ...]:
    """
    Matrix of D_var on the power basis: row i holds the coordinates of D_var(beta^i).

    Args:
        modulus: Irreducible polynomial of positive z-degree
        var: x or y

    Returns:
        Tuple of rows, each of length deg_z(modulus)
    """
    n = degree(modulus, "z")
    image = AlgebraicElement.of(
        -FIELD(modulus.diff(poly_gen(var))) / FIELD(modulus.diff(poly_gen("z"))), modulus
    )
    z = FIELD.gens[2]
    rows = [tuple(FIELD.zero for _ in range(n))]
    for i in range(1, n):
        rows.append(_coords(i * z ** (i - 1) * image.value(), modulus))
    return tuple(rows)


def residue(a: RatFun, modulus: MPoly) -> AlgebraicElement:
    """
    Residue of a/modulus at a root beta: a(beta)/d_z(modulus)(beta).

    Args:
        a: Numerator, polynomial in z
        modulus: Irreducible denominator

    Returns:
        AlgebraicElement: the residue in power-basis coordinates
    """
    return AlgebraicElement.of(as_ratfun(a) / FIELD(modulus.diff(poly_gen("z"))), modulus)


def residue_fraction(gamma: AlgebraicElement, modulus: MPoly) -> RatFun:
    """The fraction G/modulus, deg_z G < deg_z modulus, whose residue at every root is gamma."""
    g = AlgebraicElement.of(gamma.value() * FIELD(modulus.diff(poly_gen("z"))), modulus)
    return g.value() / FIELD(modulus)


class VectorHermite(NamedTuple):
    """
    a = D_var(certificate) + certificate*matrix + remainder, coordinatewise.

    The remainder's denominator divides special * squarefree.
    """

    certificate: Tuple[RatFun, ...]
    remainder: Tuple[RatFun, ...]
    squarefree: MPoly
    special: MPoly


def _split_special(den: MPoly, special: MPoly, var: str) -> Tuple[MPoly, MPoly]:
    normal, part = den, RING.one
    while True:
        g = gcd_mpoly(normal, special)
        if degree(g, var) <= 0:
            return normal, part
        normal = normal.exquo(g)
        part *= g


def vector_hermite_reduce(
    avec: Sequence[RatFun], matrix: Sequence[Sequence[RatFun]], var: str = "y"
) -> VectorHermite:
    """
    Hermite reduction for D_var(c) + c*matrix on vectors over K(var).

    Repeated factors of the denominators that do not divide the
    denominators of the matrix are lowered to multiplicity one.

    Args:
        avec: Vector to reduce
        matrix: Square matrix, rows indexed like avec
        var: Differentiation variable

    Returns:
        VectorHermite
    """
    n = len(avec)
    a = [as_ratfun(c) for c in avec]
    b = [FIELD.zero] * n
    special = primitive_part(common_denominator(m for row in matrix for m in row), var)
    v = poly_gen(var)
    while True:
        den = primitive_part(common_denominator(a), var)
        normal, _ = _split_special(den, special, var)
        parts = squarefree_decompose(normal, var)
        top = max((k for _, k in parts), default=0)
        if top <= 1:
            break
        p = next(part for part, k in parts if k == top)
        full = common_denominator(a)
        rest = full.exquo(p**top)
        p_u = to_univariate(p, var)
        factor_u = to_univariate(rest * p.diff(v) * (1 - top), var) % p_u
        inv_u = inverse_mod(factor_u, p_u)
        shares: List[RatFun] = []
        for c in a:
            num_u, den_u = univariate_fraction(c * FIELD(full), var)
            u_u = (num_u.quo_ground(den_u.LC) * inv_u) % p_u
            shares.append(from_univariate(u_u, var) / FIELD(p) ** (top - 1))
        for i in range(n):
            correction = derivative(shares[i], var)
            for k in range(n):
                if shares[k] and matrix[k][i]:
                    correction += shares[k] * matrix[k][i]
            a[i] -= correction
            b[i] += shares[i]
        logger.debug(f"vector hermite: lowered {format_poly(p)} from multiplicity {top}")
    den = primitive_part(common_denominator(a), var)
    normal, part = _split_special(den, special, var)
    squarefree = RING.one
    for piece, _ in squarefree_decompose(normal, var):
        squarefree = lcm_mpoly(squarefree, piece)
    return VectorHermite(tuple(b), tuple(a), squarefree, part)
