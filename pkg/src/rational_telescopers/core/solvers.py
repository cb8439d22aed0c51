"""
Linear solvers behind the exactness and existence tests.

Everything here is exact: a returned solution has been substituted back
into its equation. Searches that depend on degree or order bounds raise
:class:`BoundExceededError` when the bounds run out instead of guessing.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from ..exceptions.telescoping_exceptions import BoundExceededError, VerificationError
from ..utils.logging_config import get_logger
from .algebra import (
    FIELD,
    INDEX,
    RING,
    Kind,
    MPoly,
    Q,
    RatFun,
    act,
    as_ratfun,
    common_denominator,
    degree,
    derivative,
    format_poly,
    gen,
    irreducible_factors,
    lcm_mpoly,
    linear_relations,
    primitive_part,
    solve_linear,
    squarefree_decompose,
)
from .algebraic import AlgebraicElement
from .operators import OrePoly
from .reductions import abramov_reduce, hermite_reduce, q_abramov_reduce

logger = get_logger(__name__)


@dataclass(frozen=True)
class SolverBounds:
    """
    Search bounds for the bounded solvers.

    Attributes:
        max_degree: Largest numerator degree tried by the rational ODE solver
        max_multiplicity: Largest denominator multiplicity tried
        max_order: Largest operator order tried by relation searches
    """

    max_degree: int = 12
    max_multiplicity: int = 8
    max_order: int = 6

    def __post_init__(self) -> None:
        for name in ("max_degree", "max_multiplicity", "max_order"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "SolverBounds":
        """
        Parse ``"N:M:B"``.

        Raises:
            ValueError: On malformed text
        """
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"bounds must look like N:M:B, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as e:
            raise ValueError(f"bounds must be integers, got {text!r}") from e


def solve_shift_first_order(
    a: RatFun, var: str = "y", kind: Kind = Kind.S, twist: int = 0
) -> Optional[RatFun]:
    """
    Rational b with q^twist * theta(b) - b = a, theta the shift of kind in var.

    A q-power twist is removed by multiplying with var^twist: the equation
    becomes T(B) - B = var^twist * a with b = var^-twist * B.

    Args:
        a: Right-hand side
        var: Shifted variable
        kind: S or T
        twist: Exponent of the q-power factor; only allowed for T

    Returns:
        The verified solution or None when none exists

    Raises:
        ValueError: On a derivation kind or a twist on an ordinary shift
    """
    a = as_ratfun(a)
    if kind == Kind.D:
        raise ValueError("first-order shift equations need S or T")
    if twist and kind == Kind.S:
        raise ValueError("q-power twists need a q-shift")
    if not a:
        return FIELD.zero
    if kind == Kind.S:
        red = abramov_reduce(a, var)
        if red.numerator:
            return None
        b = red.certificate
    else:
        v = gen(var)
        red = q_abramov_reduce(a * v**twist, var)
        if red.numerator or red.constant:
            return None
        b = red.certificate / v**twist
    if Q**twist * act(b, var, kind, 1) - b != a:
        raise VerificationError("first-order solution does not satisfy its equation")
    return b


def rational_antiderivative(alpha: RatFun, var: str = "y") -> Optional[RatFun]:
    """Rational g with D_var(g) = alpha, or None when alpha has no rational antiderivative."""
    red = hermite_reduce(as_ratfun(alpha), var)
    if red.numerator:
        return None
    if derivative(red.certificate, var) != alpha:
        raise VerificationError("antiderivative does not differentiate back")
    return red.certificate


def _coefficient_columns(vectors: Sequence[Sequence[RatFun]]) -> List[List[RatFun]]:
    """Coefficients of the (y, z)-monomials of each vector over a shared denominator."""
    den = FIELD(common_denominator(c for vec in vectors for c in vec))
    tables: List[Dict[Tuple[int, int, int], Dict[Tuple[int, ...], int]]] = []
    scales: List[List[RatFun]] = []
    keys = set()
    y_idx, z_idx = INDEX["y"], INDEX["z"]
    for vec in vectors:
        table: Dict[Tuple[int, int, int], Dict[Tuple[int, ...], int]] = {}
        scale = []
        for j, c in enumerate(vec):
            scaled = as_ratfun(c) * den
            scale.append(FIELD(scaled.denom))
            for monom, coeff in scaled.numer.iterterms():
                key = (j, monom[y_idx], monom[z_idx])
                rest = tuple(0 if i in (y_idx, z_idx) else e for i, e in enumerate(monom))
                table.setdefault(key, {})[rest] = coeff
                keys.add(key)
        tables.append(table)
        scales.append(scale)
    ordered = sorted(keys)
    return [
        [FIELD(RING.from_dict(table.get(key, {}))) / scale[key[0]] for key in ordered]
        for table, scale in zip(tables, scales)
    ]


def kx_nullspace(vectors: Sequence[Sequence[RatFun]]) -> List[List[RatFun]]:
    """
    All relations sum(e_i * vectors[i]) = 0 with e_i in Q(q)(x).

    Entries may depend on y and z; coefficients of their monomials are
    compared after clearing a common denominator.

    Returns:
        Basis of the relation space; empty when the vectors are independent
    """
    if not vectors:
        return []
    return linear_relations(_coefficient_columns(vectors))


def _default_step(kind: Kind) -> Callable[[List[RatFun]], List[RatFun]]:
    return lambda vec: [act(c, "x", kind, 1) for c in vec]


def annihilator_search(
    vector: Sequence[RatFun],
    kind: Kind,
    bounds: SolverBounds,
    step: Optional[Callable[[List[RatFun]], List[RatFun]]] = None,
) -> Optional[OrePoly]:
    """
    Smallest-order L in x annihilating every component of vector.

    Args:
        vector: Components to annihilate
        kind: Kind of the operator in x
        bounds: max_order caps the search
        step: Image of a component vector under the operator; componentwise
            action by default

    Returns:
        The verified annihilator, or None when none exists within the bound
    """
    step = step or _default_step(kind)
    images = [list(vector)]
    for order in range(bounds.max_order + 1):
        if order:
            images.append(step(images[-1]))
        relations = kx_nullspace(images)
        if relations:
            operator = OrePoly(kind, relations[0])
            combined = [
                sum((e * img[j] for e, img in zip(relations[0], images)), FIELD.zero)
                for j in range(len(vector))
            ]
            if any(combined):
                raise VerificationError("annihilator does not annihilate")
            logger.debug(f"annihilator of order {operator.order} found")
            return operator
    return None


def _ansatz_degrees(den_degree: int, bounds: SolverBounds) -> List[int]:
    return sorted({max(0, min(den_degree + t, bounds.max_degree)) for t in (-1, 0, 1, 2)})


def bounded_ode_rational_solve(
    matrix: Sequence[Sequence[RatFun]],
    rhs: Sequence[RatFun],
    bounds: SolverBounds,
    var: str = "y",
) -> List[RatFun]:
    """
    Rational c with D_var(c) + c*matrix = rhs, by an ansatz c = N/E.

    E runs over powers of the squarefree part of the denominators involved
    and N over polynomials in var of bounded degree.

    Returns:
        The verified solution

    Raises:
        BoundExceededError: If no solution exists within the bounds
    """
    n = len(rhs)
    rhs = [as_ratfun(c) for c in rhs]
    if not any(rhs):
        return [FIELD.zero] * n
    involved = lcm_mpoly(
        common_denominator(m for row in matrix for m in row), common_denominator(rhs)
    )
    base = RING.one
    for part, _ in squarefree_decompose(primitive_part(involved, var), var):
        base *= part
    v = gen(var)
    for mult in range(bounds.max_multiplicity + 1):
        den = FIELD(base) ** mult
        for deg in _ansatz_degrees(degree(den.numer, var), bounds):
            unknowns = [(i, t) for i in range(n) for t in range(deg + 1)]
            columns = []
            for i, t in unknowns:
                trial = v**t / den
                columns.append(
                    [
                        (derivative(trial, var) if j == i else FIELD.zero) + trial * as_ratfun(matrix[i][j])
                        for j in range(n)
                    ]
                )
            coefficient_rows = _coefficient_columns(columns + [rhs])
            solution = solve_linear(coefficient_rows[:-1], coefficient_rows[-1])
            if solution is None:
                continue
            c = [FIELD.zero] * n
            for (i, t), e in zip(unknowns, solution):
                c[i] += e * v**t / den
            check = [
                derivative(c[j], var) + sum((c[i] * as_ratfun(matrix[i][j]) for i in range(n)), FIELD.zero)
                for j in range(n)
            ]
            if check != rhs:
                raise VerificationError("bounded ODE solution does not satisfy the system")
            logger.debug(f"bounded ODE solve: multiplicity {mult}, degree {deg}")
            return c
    raise BoundExceededError(
        f"no rational solution with multiplicity <= {bounds.max_multiplicity} "
        f"and degree <= {bounds.max_degree}",
        (bounds.max_degree, bounds.max_multiplicity),
    )


class Separability(NamedTuple):
    """
    Outcome of the separability test for an algebraic residue.

    status is "separable" with an annihilating telescoper, "nonseparable"
    with the factor whose valuations certify it, or "unsupported".
    """

    status: str
    telescoper: Optional[OrePoly] = None
    factor: Optional[MPoly] = None


def _valuation_candidates(alpha: AlgebraicElement) -> List[MPoly]:
    den = common_denominator(alpha.coords)
    return [p for p, _ in irreducible_factors(den) if degree(p, "x") > 0 and degree(p, "y") > 0]


def algebraic_nonseparable_test(alpha: AlgebraicElement, bounds: SolverBounds) -> Separability:
    """
    Decide whether an algebraic residue is annihilated by an operator in D_x.

    Separable when a K(x)-relation among D_x^i(alpha), i <= max_order, is
    found. Nonseparable when for a factor w of the coordinate denominators,
    depending on x and y, the w-valuations of D_x^i(alpha) drop by exactly
    one at every step i = 0..max_order: then no K(x)-combination can cancel
    the most negative one. Unsupported otherwise.
    """

    def step(vec: List[RatFun]) -> List[RatFun]:
        return list(AlgebraicElement(alpha.modulus, tuple(vec)).derivative("x").coords)

    operator = annihilator_search(alpha.coords, Kind.D, bounds, step)
    if operator is not None:
        return Separability("separable", telescoper=operator)
    if bounds.max_order < 1:
        return Separability("unsupported")
    images = [alpha]
    for _ in range(bounds.max_order):
        images.append(images[-1].derivative("x"))
    for w in _valuation_candidates(alpha):
        orders = [img.valuation(w) for img in images]
        if orders[0] < 0 and all(b == a - 1 for a, b in zip(orders, orders[1:])):
            logger.info(f"residue is not separable: valuations at {format_poly(w)} are {orders}")
            return Separability("nonseparable", factor=w)
    return Separability("unsupported")
