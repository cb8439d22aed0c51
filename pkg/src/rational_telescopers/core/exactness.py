"""
Exactness tests: whether f = Theta_y(u) + Theta_z(v) for rational u, v.

Supported pairs (Theta_y, Theta_z) are (D, D), (S, S), (T, S), (T, T),
(S, D) and (T, D). Every positive answer carries certificates that are
checked against f before they are returned.
"""

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple, Union

from ..exceptions.telescoping_exceptions import BoundExceededError, VerificationError
from ..utils.logging_config import get_logger
from .algebra import (
    FIELD,
    FactoredDen,
    GroupSpec,
    Kind,
    MPoly,
    Q,
    RatFun,
    act,
    as_ratfun,
    coefficients_in,
    degree,
    derivative,
    format_poly,
    gen,
    normalize_poly,
    partial_fraction,
    substitute,
)
from .algebraic import AlgebraicElement, derivation_matrix, residue, residue_fraction, vector_hermite_reduce
from .equivalence import extended_gcd, stabilizer_lattice
from .operators import theta
from .reductions import (
    BlockItem,
    ReducedForm,
    hermite_reduce,
    orbit_normal_form,
    restrict_factors,
    telescoping_certificate,
)
from .solvers import (
    SolverBounds,
    bounded_ode_rational_solve,
    rational_antiderivative,
    solve_shift_first_order,
)
from .verdicts import Reason

logger = get_logger(__name__)

EXACT = "exact"
NOT_EXACT = "not_exact"
UNSUPPORTED = "unsupported"

EXACTNESS_PAIRS = (
    (Kind.D, Kind.D),
    (Kind.S, Kind.S),
    (Kind.T, Kind.S),
    (Kind.T, Kind.T),
    (Kind.S, Kind.D),
    (Kind.T, Kind.D),
)


@dataclass(frozen=True)
class ExactVerdict:
    """
    Outcome of an exactness test.

    Attributes:
        status: exact, not_exact or unsupported
        u: Theta_y certificate when exact
        v: Theta_z certificate when exact
        reason: Reason code when not exact
        branch: Branch code when unsupported
        detail: The offending factor, printed
    """

    status: str
    u: RatFun = FIELD.zero
    v: RatFun = FIELD.zero
    reason: Optional[Reason] = None
    branch: Optional[Reason] = None
    detail: Optional[str] = None

    @property
    def is_exact(self) -> bool:
        return self.status == EXACT

    @classmethod
    def exact(cls, u: RatFun, v: RatFun) -> "ExactVerdict":
        return cls(EXACT, u, v)

    @classmethod
    def not_exact(cls, reason: Reason, detail: Optional[str] = None) -> "ExactVerdict":
        return cls(NOT_EXACT, reason=reason, detail=detail)

    @classmethod
    def unsupported(cls, branch: Reason, detail: Optional[str] = None) -> "ExactVerdict":
        return cls(UNSUPPORTED, branch=branch, detail=detail)


def _unimodular(m: int, k: int) -> Tuple[int, int]:
    g, (alpha, beta) = extended_gcd([m, k])
    if g != 1:
        raise ValueError(f"orbit direction ({m}, {k}) is not primitive")
    return alpha, beta


def orbit_coordinates(
    m: int, k: int, kind: Kind
) -> Tuple[Dict[str, RatFun], Dict[str, RatFun]]:
    """
    A change of variables turning theta_y^m theta_z^k into theta_Y.

    With alpha*m + beta*k = 1 the new variables are Y = alpha*y + beta*z and
    W = m*z - k*y for shifts, Y = y^alpha z^beta and W = y^-k z^m for
    q-dilations. Y and W are written in the slots of y and z.

    Returns:
        Tuple (to_new, to_old): substitutions expressing old variables in the
        new ones and back
    """
    alpha, beta = _unimodular(m, k)
    y, z = gen("y"), gen("z")
    if kind == Kind.S:
        to_new = {"y": m * y - beta * z, "z": k * y + alpha * z}
        to_old = {"y": alpha * y + beta * z, "z": m * z - k * y}
    else:
        to_new = {"y": y**m * z ** (-beta), "z": y**k * z**alpha}
        to_old = {"y": y**alpha * z**beta, "z": y ** (-k) * z**m}
    return to_new, to_old


def solve_along_orbit(
    a: RatFun, power: int, exponents: Dict[str, int], s: int, theta_y: Kind, theta_z: Kind
) -> Optional[RatFun]:
    """
    Rational b with q^(-s*power) * psi(b) - b = a, psi = theta_y^m theta_z^k.

    Args:
        a: Right-hand side
        power: Power of the orbit denominator
        exponents: m and k keyed by y and z, m > 0
        s: q-exponent of the stabilizer relation
        theta_y: Kind of theta_y
        theta_z: Kind of theta_z

    Returns:
        The verified solution or None
    """
    m, k = exponents.get("y", 0), exponents.get("z", 0)
    twist = -s * power
    if k == 0:
        if m != 1:
            raise ValueError(f"stabilizer theta_y^{m} is not primitive")
        b = solve_shift_first_order(a, "y", theta_y, twist)
    else:
        if theta_y != theta_z:
            raise ValueError("a mixed orbit direction must not move z")
        to_new, to_old = orbit_coordinates(m, k, theta_y)
        solution = solve_shift_first_order(substitute(a, to_new), "y", theta_y, twist)
        b = None if solution is None else substitute(solution, to_old)
    if b is not None:
        group = GroupSpec.of(y=theta_y, z=theta_z)
        if Q**twist * group.act(b, exponents) - b != a:
            raise VerificationError("orbit equation solution fails")
    return b


def _exact_orbit_item(
    rep: MPoly, item: BlockItem, theta_y: Kind, theta_z: Kind
) -> Union[Tuple[RatFun, RatFun], ExactVerdict]:
    group = GroupSpec.of(y=theta_y, z=theta_z)
    basis = stabilizer_lattice(rep, group)
    if not basis or basis[0][0].get("y", 0) == 0:
        return ExactVerdict.not_exact(Reason.NO_ORBIT_RELATION, format_poly(rep))
    exponents, s = basis[0]
    if exponents["y"] < 0:
        exponents, s = {v: -e for v, e in exponents.items()}, -s
    if extended_gcd([exponents["y"], exponents.get("z", 0)])[0] != 1:
        return ExactVerdict.unsupported(Reason.NONPRIMITIVE_ORBIT, format_poly(rep))
    b = solve_along_orbit(item.numerator, item.power, exponents, s, theta_y, theta_z)
    if b is None:
        return ExactVerdict.not_exact(Reason.NOT_SUMMABLE, format_poly(rep))
    w = b / FIELD(rep) ** item.power
    m, k = exponents["y"], exponents.get("z", 0)
    u = telescoping_certificate(act(w, "z", theta_z, k), "y", theta_y, m)
    v = telescoping_certificate(w, "z", theta_z, k)
    return u, v


def _exact_shifts(f: RatFun, theta_y: Kind, theta_z: Kind, den: FactoredDen) -> ExactVerdict:
    form = orbit_normal_form(f, theta_y, theta_z, GroupSpec.of(y=theta_y, z=theta_z), den)
    u, v = form.u, form.v
    if form.scalar_part:
        g = solve_shift_first_order(form.scalar_part, "y", theta_y)
        if g is None:
            return ExactVerdict.not_exact(Reason.SCALAR_NOT_SUMMABLE)
        u += g
    for block in form.blocks:
        for item in block.items:
            result = _exact_orbit_item(block.representative, item, theta_y, theta_z)
            if isinstance(result, ExactVerdict):
                return result
            u += result[0]
            v += result[1]
    return ExactVerdict.exact(u, v)


def _exact_shift_derivation(f: RatFun, theta_y: Kind, den: FactoredDen) -> ExactVerdict:
    form = orbit_normal_form(f, theta_y, Kind.D, GroupSpec.of(y=theta_y), den)
    u, v = form.u, form.v
    for block in form.blocks:
        d = block.representative
        if degree(d, "y") > 0:
            return ExactVerdict.not_exact(Reason.DEN_DEPENDS_ON_Y, format_poly(d))
        z = gen("z")
        for item in block.items:
            for i, c in enumerate(coefficients_in(item.numerator, "z")):
                b = solve_shift_first_order(c, "y", theta_y)
                if b is None:
                    return ExactVerdict.not_exact(Reason.NOT_SUMMABLE, format_poly(d))
                u += b * z**i / block.denominator(item)
    return ExactVerdict.exact(u, v)


def integrate_residue(
    alpha: AlgebraicElement, bounds: SolverBounds
) -> Union[AlgebraicElement, ExactVerdict]:
    """
    An algebraic gamma with D_y(gamma) = alpha, or the reason none was found.

    Coordinates are integrated one by one when D_y does not mix them;
    otherwise vector Hermite reduction removes the repeated poles and a
    bounded ansatz solves for the rest.
    """
    d = alpha.modulus
    matrix = derivation_matrix(d, "y")
    if not any(m for row in matrix for m in row):
        coords = []
        for c in alpha.coords:
            g = rational_antiderivative(c, "y")
            if g is None:
                return ExactVerdict.not_exact(Reason.RESIDUE_NOT_INTEGRABLE, format_poly(d))
            coords.append(g)
        return AlgebraicElement(d, tuple(coords))
    reduced = vector_hermite_reduce(alpha.coords, matrix, "y")
    if degree(reduced.squarefree, "y") > 0:
        return ExactVerdict.not_exact(Reason.RESIDUE_NOT_INTEGRABLE, format_poly(d))
    coords = list(reduced.certificate)
    if any(reduced.remainder):
        try:
            extra = bounded_ode_rational_solve(matrix, reduced.remainder, bounds, "y")
        except BoundExceededError as e:
            logger.info(f"residue integration over {format_poly(d)} ran out of bounds: {e}")
            return ExactVerdict.unsupported(Reason.BOUND_EXCEEDED, format_poly(d))
        coords = [a + b for a, b in zip(coords, extra)]
    gamma = AlgebraicElement(d, tuple(coords))
    if gamma.derivative("y") != alpha:
        raise VerificationError("integrated residue does not differentiate back")
    return gamma


def _exact_derivations(f: RatFun, den: FactoredDen, bounds: SolverBounds) -> ExactVerdict:
    den.require_irreducible("z")
    red = hermite_reduce(f, "z")
    v = red.certificate
    rest = red.remainder
    if not rest:
        return ExactVerdict.exact(FIELD.zero, v)
    parts = partial_fraction(rest, "z", restrict_factors(den, rest.denom, "z"))
    u = FIELD.zero
    leftover = FIELD.zero
    for term in parts.terms:
        gamma = integrate_residue(residue(term.numerator, term.factor), bounds)
        if isinstance(gamma, ExactVerdict):
            return gamma
        g = residue_fraction(gamma, term.factor)
        u += g
        leftover += term.value() - derivative(g, "y")
    tail = hermite_reduce(leftover, "z")
    if tail.numerator:
        raise VerificationError("residue-free part is not D_z-exact")
    return ExactVerdict.exact(u, v + tail.certificate)


def is_exact(
    f: RatFun,
    pair: Tuple[Kind, Kind],
    den: Optional[FactoredDen] = None,
    bounds: Optional[SolverBounds] = None,
) -> ExactVerdict:
    """
    Decide whether f = Theta_y(u) + Theta_z(v).

    Args:
        f: Rational function in x, y, z; x is a parameter
        pair: Kinds of (Theta_y, Theta_z)
        den: Factorization of f's denominator; z-factors of z-degree >= 2
            must be asserted irreducible
        bounds: Bounds for the residue integration of the (D, D) case

    Returns:
        ExactVerdict: exact with verified certificates, not_exact with a
        reason, or unsupported when the bounds ran out

    Raises:
        ValueError: For an unsupported pair
        FactorizationRequiredError: If a needed factorization is missing
    """
    pair = (Kind(pair[0]), Kind(pair[1]))
    if pair not in EXACTNESS_PAIRS:
        raise ValueError(f"no exactness test for ({pair[0].value}y, {pair[1].value}z)")
    f = as_ratfun(f)
    if not f:
        return ExactVerdict.exact(FIELD.zero, FIELD.zero)
    den = den or FactoredDen.trivial(f.denom)
    bounds = bounds or SolverBounds()
    theta_y, theta_z = pair
    if pair == (Kind.D, Kind.D):
        verdict = _exact_derivations(f, den, bounds)
    elif theta_z == Kind.D:
        verdict = _exact_shift_derivation(f, theta_y, den)
    else:
        verdict = _exact_shifts(f, theta_y, theta_z, den)
    if verdict.is_exact and theta(verdict.u, "y", theta_y) + theta(verdict.v, "z", theta_z) != f:
        raise VerificationError("exactness certificates do not reproduce the input")
    logger.debug(f"exactness for ({theta_y.value}y, {theta_z.value}z): {verdict.status}")
    return verdict


def absorb_exact_blocks(
    form: ReducedForm, theta_y: Kind, theta_z: Kind, bounds: Optional[SolverBounds] = None
) -> ReducedForm:
    """
    Move exact block items into the certificates.

    Items whose test ran out of bounds stay and mark their block unsupported.
    """
    extra: Dict[str, RatFun] = {"y": FIELD.zero, "z": FIELD.zero}
    blocks = []
    for block in form.blocks:
        kept: List[BlockItem] = []
        unsupported = block.unsupported
        for item in block.items:
            image = block.group.act(FIELD(block.representative), dict(item.label)).numer
            den = FactoredDen.of([(normalize_poly(image), item.power)])
            verdict = is_exact(item.numerator / block.denominator(item), (theta_y, theta_z), den, bounds)
            if verdict.is_exact:
                extra["y"] += verdict.u
                extra["z"] += verdict.v
                continue
            kept.append(item)
            unsupported = unsupported or verdict.status == UNSUPPORTED
        if kept:
            blocks.append(replace(block, items=tuple(kept), unsupported=unsupported))
    return form.with_blocks(blocks, extra)
