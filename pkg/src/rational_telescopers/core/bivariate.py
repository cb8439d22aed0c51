"""
Telescopers for rational functions in x and y.

A telescoper for f is a nonzero L in x with L(f) = Theta_y(g). Existence
is read off the remainder of f under the reduction for Theta_y; witnesses
come from a K(x)-relation among the remainders of f, d(f), d^2(f), ...
reduced over one set of representatives.
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..exceptions.telescoping_exceptions import VerificationError
from ..utils.logging_config import get_logger
from .algebra import (
    FIELD,
    INDEX,
    RING,
    Kind,
    MPoly,
    RatFun,
    act,
    as_ratfun,
    degree,
    format_poly,
    free_of,
    irreducible_factors,
    normalize_poly,
)
from .equivalence import integer_linear, q_integer_linear
from .operators import OrePoly, theta
from .reductions import abramov_reduce, common_reduce, hermite_reduce, q_abramov_reduce
from .solvers import SolverBounds, kx_nullspace
from .verdicts import Reason, Verdict, Witness

logger = get_logger(__name__)

BIVARIATE_PAIRS = tuple((dx, dy) for dx in Kind for dy in Kind)

Step = Callable[[List[RatFun]], List[RatFun]]


def x_content(p: MPoly) -> MPoly:
    """Normalized gcd of the coefficients of p as a polynomial in y and z."""
    groups: Dict[Tuple[int, int], Dict[Tuple[int, ...], int]] = {}
    y_idx, z_idx = INDEX["y"], INDEX["z"]
    for monom, coeff in p.iterterms():
        rest = tuple(0 if i in (y_idx, z_idx) else e for i, e in enumerate(monom))
        groups.setdefault((monom[y_idx], monom[z_idx]), {})[rest] = coeff
    result = RING.zero
    for terms in groups.values():
        result = result.gcd(RING.from_dict(terms))
    return normalize_poly(result)


def split_content(p: MPoly) -> Optional[Tuple[MPoly, MPoly]]:
    """
    Split p as b(x) * c(y, z).

    Returns:
        The pair (b, c), or None when the part left after removing the
        x-content still involves x
    """
    b = x_content(p)
    c = p.exquo(b)
    if degree(c, "x") > 0:
        return None
    return b, normalize_poly(c)


def bivariate_remainder(f: RatFun, kind: Kind, var: str = "y") -> Tuple[RatFun, RatFun]:
    """
    Remainder of f under the reduction for Theta_var.

    Returns:
        Tuple (remainder, constant); the constant is the part free of var
        left by a q-reduction and zero otherwise
    """
    if kind == Kind.D:
        return hermite_reduce(f, var).remainder, FIELD.zero
    if kind == Kind.S:
        return abramov_reduce(f, var).remainder, FIELD.zero
    red = q_abramov_reduce(f, var)
    return FIELD(red.numerator) / FIELD(red.denominator), red.constant


def reduction_telescoper(
    components: Sequence[RatFun],
    dx: Kind,
    var: str,
    kind: Kind,
    bounds: SolverBounds,
    step: Optional[Step] = None,
) -> Optional[Tuple[OrePoly, List[RatFun]]]:
    """
    Smallest-order L in x with L(v) = Theta_var(G) componentwise.

    The images v, d(v), d^2(v), ... are reduced together; the first
    K(x)-relation among their remainders gives L and the same combination
    of certificates gives G.

    Args:
        components: The vector v
        dx: Kind of the operator in x
        var: Variable of Theta_var
        kind: Kind of Theta_var
        bounds: max_order caps the order of L
        step: Image of a component vector under d; componentwise by default

    Returns:
        (L, G) or None when no relation exists within the bound
    """
    step = step or (lambda vec: [act(c, "x", dx, 1) for c in vec])
    width = len(components)
    images: List[RatFun] = list(components)
    current = list(components)
    for order in range(bounds.max_order + 1):
        if order:
            current = step(current)
            images.extend(current)
        reduced = common_reduce(images, var, kind)
        remainders = [[reduced[i * width + j][1] for j in range(width)] for i in range(order + 1)]
        relations = kx_nullspace(remainders)
        if relations:
            e = relations[0]
            certificates = [
                sum((e[i] * reduced[i * width + j][0] for i in range(order + 1)), FIELD.zero)
                for j in range(width)
            ]
            logger.debug(f"reduction relation of order {order} in {var}")
            return OrePoly(dx, e), certificates
    return None


def bivariate_witness(f: RatFun, dx: Kind, kind: Kind, bounds: SolverBounds) -> Optional[Witness]:
    """A verified witness L(f) = Theta_y(g), or None beyond the bounds."""
    found = reduction_telescoper([f], dx, "y", kind, bounds)
    if found is None:
        return None
    operator, (g,) = found
    if operator.apply(f) != theta(g, "y", kind):
        raise VerificationError("bivariate witness does not verify")
    return Witness(operator, g)


def _criterion(f: RatFun, dx: Kind, kind: Kind) -> Optional[Verdict]:
    remainder, constant = bivariate_remainder(f, kind)
    if dx == kind == Kind.D or not (remainder or constant):
        return None
    if dx == kind:
        for p, _ in irreducible_factors(remainder.denom):
            if degree(p, "y") <= 0:
                continue
            if dx == Kind.S and integer_linear(p, ("x", "y")) is None:
                return Verdict.not_exists(Reason.NOT_INTEGER_LINEAR, format_poly(p))
            if dx == Kind.T and q_integer_linear(p, ("x", "y"), signed=True) is None:
                return Verdict.not_exists(Reason.NOT_Q_INTEGER_LINEAR, format_poly(p))
        return None
    for den in (remainder.denom, constant.denom):
        if split_content(den) is None:
            return Verdict.not_exists(Reason.NOT_SPLIT, format_poly(den))
    return None


def decide_bivariate(
    f: RatFun, pair: Tuple[Kind, Kind], bounds: Optional[SolverBounds] = None
) -> Verdict:
    """
    Decide whether f has a telescoper of the given type.

    Args:
        f: Rational function in x and y; z may appear as a parameter when
            the kinds differ or both are derivations
        pair: Kinds of the operator in x and of Theta_y
        bounds: Bounds for the witness search

    Returns:
        Verdict: exists, with a verified witness when one is found within
        the bounds, or not_exists with the offending factor

    Raises:
        ValueError: If z appears in a case whose criterion is stated over K(x, y)
    """
    dx, kind = Kind(pair[0]), Kind(pair[1])
    f = as_ratfun(f)
    bounds = bounds or SolverBounds()
    if dx == kind != Kind.D and not free_of(f, "z"):
        raise ValueError(f"({dx.value}x, {kind.value}y) needs a function free of z")
    if not f:
        return Verdict.exists(Witness(OrePoly.one(dx)))
    failed = _criterion(f, dx, kind)
    if failed is not None:
        logger.info(f"no ({dx.value}x, {kind.value}y) telescoper: {failed.reason.value} at {failed.detail}")
        return failed
    return Verdict.exists(bivariate_witness(f, dx, kind, bounds))
