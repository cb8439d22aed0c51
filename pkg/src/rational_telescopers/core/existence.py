"""
Telescoper existence for rational functions in x, y and z.

A telescoper of type (d_x, Theta_y, Theta_z) for f is a nonzero operator L
in x with L(f) = Theta_y(g) + Theta_z(h) for rational g, h. The eighteen
supported types fall into six families by which of the three operators are
derivations; each family has its own decision procedure on the orbit
normal form of f. Witnesses are built where the procedure allows it and
are always checked before they are reported.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from ..exceptions.telescoping_exceptions import BoundExceededError, VerificationError
from ..utils.logging_config import get_logger
from .algebra import (
    FIELD,
    RING,
    FactoredDen,
    GroupSpec,
    Kind,
    MPoly,
    RatFun,
    act,
    bezout_split,
    as_ratfun,
    coefficients_in,
    degree,
    derivative,
    format_poly,
    free_of,
    gen,
    irreducible_factors,
    multiplicity,
    normalize_poly,
    scalar_ratio,
    substitute,
)
from .algebraic import AlgebraicElement, derivation_matrix, residue, residue_fraction, vector_hermite_reduce
from .bivariate import (
    BIVARIATE_PAIRS,
    bivariate_remainder,
    decide_bivariate,
    reduction_telescoper,
    split_content,
    x_content,
)
from .equivalence import (
    InvarianceWitness,
    extended_gcd,
    invariance_search,
    lattice_invariance,
    restrict_stabilizer,
    stabilizer_lattice,
)
from .exactness import EXACT, UNSUPPORTED, is_exact, orbit_coordinates
from .operators import OrePoly, ore_mul, theta
from .reductions import Block, BlockItem, hermite_reduce, orbit_normal_form, telescoping_certificate
from .solvers import SolverBounds, algebraic_nonseparable_test, annihilator_search, kx_nullspace
from .verdicts import EXISTS, Reason, Verdict, Witness, combine_witnesses, merge_parts

logger = get_logger(__name__)

D, S, T = Kind.D, Kind.S, Kind.T

FAMILIES: Dict[Tuple[Kind, Kind, Kind], int] = {
    (D, D, D): 1,
    (D, S, S): 2,
    (D, T, S): 2,
    (D, T, T): 2,
    (S, D, D): 3,
    (T, D, D): 3,
    (S, S, D): 4,
    (S, T, D): 4,
    (T, S, D): 4,
    (T, T, D): 4,
    (S, S, S): 5,
    (S, T, S): 5,
    (S, T, T): 5,
    (T, S, S): 5,
    (T, T, S): 5,
    (T, T, T): 5,
    (D, S, D): 6,
    (D, T, D): 6,
}


@dataclass(frozen=True)
class TelescoperType:
    """
    Kinds of the operator in x and of Theta_y, Theta_z.

    theta_z is None for the bivariate types in x and y.
    """

    dx: Kind
    theta_y: Kind
    theta_z: Optional[Kind] = None

    def __post_init__(self) -> None:
        if self.theta_z is None:
            if (self.dx, self.theta_y) not in BIVARIATE_PAIRS:
                raise ValueError(f"unsupported bivariate type {self}")
        elif (self.dx, self.theta_y, self.theta_z) not in FAMILIES:
            raise ValueError(f"unsupported telescoper type {self}")

    @classmethod
    def parse(cls, text: str) -> "TelescoperType":
        """
        Parse ``"Dx,Sy,Dz"`` or ``"Sx,Ty"``; ``qS`` is accepted for T.

        Raises:
            ValueError: On malformed or unsupported types
        """
        tokens = [t.strip() for t in text.split(",") if t.strip()]
        if len(tokens) not in (2, 3):
            raise ValueError(f"a type names two or three operators, got {text!r}")
        kinds = []
        for token, var in zip(tokens, ("x", "y", "z")):
            if token.startswith("q") and len(token) == 3:
                token = "T" + token[2:] if token[1].upper() == "S" else token
            if len(token) != 2 or token[1] != var or token[0].upper() not in ("D", "S", "T"):
                raise ValueError(f"expected an operator on {var}, got {token!r}")
            kinds.append(Kind(token[0].upper()))
        return cls(*kinds)

    @property
    def bivariate(self) -> bool:
        return self.theta_z is None

    @property
    def family(self) -> int:
        """Family 1 to 6 of a trivariate type, 0 for bivariate types."""
        if self.theta_z is None:
            return 0
        return FAMILIES[(self.dx, self.theta_y, self.theta_z)]

    def __str__(self) -> str:
        names = [f"{self.dx.value}x", f"{self.theta_y.value}y"]
        if self.theta_z is not None:
            names.append(f"{self.theta_z.value}z")
        return ",".join(names)


ALL_TYPES = tuple(TelescoperType(*k) for k in FAMILIES) + tuple(
    TelescoperType(*pair) for pair in BIVARIATE_PAIRS
)


class _Parts:
    """Per-part outcomes of one decision over a reduced form."""

    def __init__(self, dx: Kind) -> None:
        self.dx = dx
        self.witnesses: List[Witness] = []
        self.failures: List[Verdict] = []
        self.missing = False

    def add(self, witness: Optional[Witness]) -> None:
        if witness is None:
            self.missing = True
        else:
            self.witnesses.append(witness)

    def add_verdict(self, verdict: Verdict, scale: Optional[Callable[[RatFun], RatFun]] = None) -> None:
        """Record a bivariate verdict whose certificate is a Theta_y certificate."""
        if verdict.status != EXISTS:
            self.failures.append(verdict)
        elif verdict.telescoper is None:
            self.missing = True
        else:
            g = verdict.certificates[0]
            self.witnesses.append(Witness(verdict.telescoper, scale(g) if scale else g))

    def fail(self, verdict: Verdict) -> None:
        self.failures.append(verdict)

    def verdict(self, u: RatFun = FIELD.zero, v: RatFun = FIELD.zero) -> Verdict:
        """Combine the parts of f = Theta_y(u) + Theta_z(v) + sum of parts."""
        failed = merge_parts(self.failures)
        if failed is not None:
            return failed
        if self.missing:
            return Verdict.exists()
        combined = combine_witnesses(self.witnesses) if self.witnesses else Witness(OrePoly.one(self.dx))
        operator = combined.telescoper
        return Verdict.exists(
            Witness(operator, operator.apply(u) + combined.g, operator.apply(v) + combined.h)
        )


def _item_den(block: Block, item: BlockItem) -> FactoredDen:
    image = block.group.act(FIELD(block.representative), dict(item.label)).numer
    return FactoredDen.of([(normalize_poly(image), item.power)])


def _item_value(block: Block, item: BlockItem) -> RatFun:
    return item.numerator / block.denominator(item)


def _exact_part(block: Block, item: BlockItem, pair: Tuple[Kind, Kind], bounds: SolverBounds, parts: _Parts,
                reason: Reason, value: Optional[RatFun] = None) -> None:
    value = _item_value(block, item) if value is None else value
    verdict = is_exact(value, pair, _item_den(block, item), bounds)
    if verdict.status == EXACT:
        parts.add(Witness(OrePoly.one(parts.dx), verdict.u, verdict.v))
    elif verdict.status == UNSUPPORTED:
        parts.fail(Verdict.unsupported(verdict.branch, verdict.detail))
    else:
        parts.fail(Verdict.not_exists(reason, format_poly(block.representative)))


def _hermite_certificate(f: RatFun) -> RatFun:
    red = hermite_reduce(f, "z")
    if red.numerator:
        raise VerificationError("residue-free part is not D_z-exact")
    return red.certificate


def _invariant_along(p: MPoly, group: GroupSpec, exponents: Dict[str, int]) -> bool:
    image = group.act(FIELD(p), exponents)
    return all(degree(image.denom, v) <= 0 for v in ("x", "y", "z")) and (
        scalar_ratio(image.numer, p) is not None
    )


def build_invariant_telescoper(pullbacks: List[RatFun], step: int, kind: Kind) -> Optional[OrePoly]:
    """
    L = sum e_i d^(i*step) from the first K(x)-relation among pullbacks.

    pullbacks[i] is the i-th image under d^step moved back onto the
    original denominator; the relation must hold for all of them at once.

    Returns:
        The operator, or None when the pullbacks are independent
    """
    relations = kx_nullspace([[p] for p in pullbacks])
    if not relations:
        return None
    coeffs = [FIELD.zero] * ((len(pullbacks) - 1) * step + 1)
    for i, e in enumerate(relations[0]):
        coeffs[i * step] = e
    return OrePoly(kind, coeffs)


def _invariant_witness(
    f: RatFun, relation: InvarianceWitness, kinds: Dict[str, Kind], bounds: SolverBounds
) -> Optional[Witness]:
    """
    Witness for a fraction whose denominator is invariant under the relation.

    The x-content of the denominator is moved into the operator. Images
    under d^(i*m) are moved back along the relation onto the denominator,
    and a K(x)-relation among the moved numerators gives the telescoper.
    """
    dx = kinds["x"]
    content = x_content(f.denom)
    scaled = f * FIELD(content)
    m, n, k = relation.m, relation.n, relation.k
    pullbacks: List[RatFun] = []
    certificates: List[Tuple[RatFun, RatFun]] = []
    for i in range(bounds.max_order + 1):
        image = act(scaled, "x", dx, i * m)
        moved = act(image, "y", kinds["y"], -i * n)
        if k:
            moved = act(moved, "z", kinds["z"], -i * k)
        lifted = act(moved, "z", kinds["z"], i * k) if k else moved
        g = telescoping_certificate(lifted, "y", kinds["y"], i * n)
        h = telescoping_certificate(moved, "z", kinds["z"], i * k) if k else FIELD.zero
        pullbacks.append(moved)
        certificates.append((g, h))
        operator = build_invariant_telescoper(pullbacks, m, dx)
        if operator is None:
            continue
        padded = list(operator.coeffs) + [FIELD.zero] * (i * m + 1 - len(operator.coeffs))
        coeffs = [padded[j * m] for j in range(i + 1)]
        g_total = sum((e * c[0] for e, c in zip(coeffs, certificates)), FIELD.zero)
        h_total = sum((e * c[1] for e, c in zip(coeffs, certificates)), FIELD.zero)
        full = ore_mul(operator, OrePoly(dx, [FIELD(content)]))
        logger.debug(f"invariant witness with step {m}: order {full.order}")
        return Witness(full, g_total, h_total)
    return None


def _add_invariant_witness(
    parts: _Parts, f: RatFun, relation: InvarianceWitness, kinds: Dict[str, Kind], bounds: SolverBounds,
    d: MPoly,
) -> None:
    witness = _invariant_witness(f, relation, kinds, bounds)
    if witness is None:
        parts.fail(Verdict.unsupported(Reason.BOUND_EXCEEDED, format_poly(d)))
    else:
        parts.add(witness)


def _decide_family1(f: RatFun, t: TelescoperType, den: FactoredDen, bounds: SolverBounds) -> Verdict:
    found = reduction_telescoper([f], t.dx, "z", t.theta_z, bounds)
    if found is None:
        return Verdict.exists()
    operator, (h,) = found
    return Verdict.exists(Witness(operator, FIELD.zero, h))


def _orbit_direction(rep: MPoly, group: GroupSpec) -> Optional[Tuple[Dict[str, int], int]]:
    basis = stabilizer_lattice(rep, group)
    if not basis or basis[0][0].get("y", 0) == 0:
        return None
    exponents, s = basis[0]
    if exponents["y"] < 0:
        exponents, s = {v: -e for v, e in exponents.items()}, -s
    return exponents, s


def _family2_item(
    block: Block, item: BlockItem, t: TelescoperType, direction: Tuple[Dict[str, int], int],
    bounds: SolverBounds, parts: _Parts,
) -> None:
    exponents, s = direction
    m, k = exponents["y"], exponents.get("z", 0)
    if extended_gcd([m, k])[0] != 1:
        parts.fail(Verdict.unsupported(Reason.NONPRIMITIVE_ORBIT, format_poly(block.representative)))
        return
    twist = -s * item.power
    y = gen("y")
    if k:
        to_new, to_old = orbit_coordinates(m, k, t.theta_y)
        moved = substitute(item.numerator, to_new)
    else:
        to_old = None
        moved = item.numerator
    verdict = decide_bivariate(moved * y**twist, (t.dx, t.theta_y), bounds)
    if verdict.status != EXISTS:
        parts.fail(Verdict(verdict.status, reason=verdict.reason, branch=verdict.branch,
                           detail=format_poly(block.representative)))
        return
    if verdict.telescoper is None:
        parts.add(None)
        return
    b = verdict.certificates[0] / y**twist
    if to_old is not None:
        b = substitute(b, to_old)
    w = b / block.denominator(item)
    g = telescoping_certificate(act(w, "z", t.theta_z, k), "y", t.theta_y, m)
    h = telescoping_certificate(w, "z", t.theta_z, k)
    parts.add(Witness(verdict.telescoper, g, h))


def _decide_family2(f: RatFun, t: TelescoperType, den: FactoredDen, bounds: SolverBounds) -> Verdict:
    group = GroupSpec.of(y=t.theta_y, z=t.theta_z)
    form = orbit_normal_form(f, t.theta_y, t.theta_z, group, den, absorb_exact=True, bounds=bounds)
    parts = _Parts(t.dx)
    if form.scalar_part:
        parts.add_verdict(decide_bivariate(form.scalar_part, (t.dx, t.theta_y), bounds))
    for block in form.blocks:
        d = block.representative
        if block.unsupported:
            parts.fail(Verdict.unsupported(Reason.BOUND_EXCEEDED, format_poly(d)))
            continue
        if degree(d, "x") > 0:
            parts.fail(Verdict.not_exists(Reason.DEN_DEPENDS_ON_X, format_poly(d)))
            continue
        direction = _orbit_direction(d, group)
        for item in block.items:
            if direction is not None:
                _family2_item(block, item, t, direction, bounds, parts)
                continue
            coefficients = coefficients_in(item.numerator, "z")
            unsplit = [c for c in coefficients if c and split_content(c.denom) is None]
            if unsplit:
                parts.fail(Verdict.not_exists(Reason.NOT_SPLIT, format_poly(unsplit[0].denom)))
                continue
            parts.add(_annihilator_witness(coefficients, t.dx, bounds))
    return parts.verdict(form.u, form.v)


def _annihilator_witness(vector: List[RatFun], dx: Kind, bounds: SolverBounds) -> Optional[Witness]:
    operator = annihilator_search(vector, dx, bounds)
    return None if operator is None else Witness(operator)


def _family3_invariant(
    block: Block, item: BlockItem, t: TelescoperType, bounds: SolverBounds, parts: _Parts
) -> None:
    d = block.representative
    value = _item_value(block, item)
    alpha = residue(item.numerator, d)
    reduced = vector_hermite_reduce(alpha.coords, derivation_matrix(d, "y"), "y")
    if degree(reduced.squarefree, "y") > 0 and degree(reduced.squarefree, "x") > 0:
        parts.fail(Verdict.not_exists(Reason.NOT_SPLIT, format_poly(reduced.squarefree)))
        return
    operator = annihilator_search(reduced.remainder, t.dx, bounds)
    if operator is None:
        parts.add(None)
        return
    lifted = AlgebraicElement(d, tuple(operator.apply(c) for c in reduced.certificate))
    g = residue_fraction(lifted, d)
    h = _hermite_certificate(operator.apply(value) - derivative(g, "y"))
    parts.add(Witness(operator, g, h))


def _decide_family3(f: RatFun, t: TelescoperType, den: FactoredDen, bounds: SolverBounds) -> Verdict:
    group = GroupSpec.of(x=t.dx)
    form = orbit_normal_form(f, D, D, group, den, transport=())
    parts = _Parts(t.dx)
    for block in form.blocks:
        for item in block.items:
            if free_of(block.representative, "x"):
                _family3_invariant(block, item, t, bounds, parts)
            else:
                _exact_part(block, item, (D, D), bounds, parts, Reason.NO_ORBIT_RELATION)
    return parts.verdict(form.u, form.v)


def _check_numerator_factors(
    c: MPoly, group: GroupSpec, exponents: Dict[str, int], parts: _Parts
) -> bool:
    for p, _ in irreducible_factors(c):
        if degree(p, "y") > 0 and not _invariant_along(p, group, exponents):
            parts.fail(Verdict.not_exists(Reason.NOT_INVARIANT, format_poly(p)))
            return False
    return True


def _placed(factor: RatFun) -> Callable[[RatFun], RatFun]:
    def place(g: RatFun) -> RatFun:
        return g * factor

    return place


def _decide_family4(f: RatFun, t: TelescoperType, den: FactoredDen, bounds: SolverBounds) -> Verdict:
    group = GroupSpec.of(x=t.dx, y=t.theta_y)
    kinds = {"x": t.dx, "y": t.theta_y, "z": D}
    form = orbit_normal_form(f, t.theta_y, D, group, den, transport=("y",), absorb_exact=True, bounds=bounds)
    parts = _Parts(t.dx)
    for block in form.blocks:
        d = block.representative
        if block.unsupported:
            parts.fail(Verdict.unsupported(Reason.BOUND_EXCEEDED, format_poly(d)))
            continue
        relation = invariance_search(d, group)
        if relation is None:
            parts.fail(Verdict.not_exists(Reason.NO_ORBIT_RELATION, format_poly(d)))
            continue
        for item in block.items:
            if free_of(d, "x") and free_of(d, "y"):
                z = gen("z")
                for i, c in enumerate(coefficients_in(item.numerator, "z")):
                    if c:
                        placed = _placed(z**i / block.denominator(item))
                        parts.add_verdict(decide_bivariate(c, (t.dx, t.theta_y), bounds), placed)
                continue
            along = {"x": relation.m, "y": -relation.n}
            if _check_numerator_factors(item.numerator.denom, group, along, parts):
                _add_invariant_witness(parts, _item_value(block, item), relation, kinds, bounds, d)
    return parts.verdict(form.u, form.v)


def _shared_relation(
    d: MPoly, factors: List[Tuple[MPoly, int]], group: GroupSpec
) -> Tuple[Optional[InvarianceWitness], List[Tuple[MPoly, int]], List[Tuple[MPoly, int]]]:
    """
    One group element fixing d and as many of the factors as possible.

    Factors are taken in order; a factor joins when d and the factors taken
    so far still share an element with a nonzero x-exponent.

    Returns:
        The relation, the factors it fixes and the remaining factors
    """
    basis = stabilizer_lattice(d, group)
    fixed: List[Tuple[MPoly, int]] = []
    rest: List[Tuple[MPoly, int]] = []
    for p, e in factors:
        narrowed = restrict_stabilizer(basis, p, group)
        if lattice_invariance(d, narrowed, group) is None:
            rest.append((p, e))
        else:
            basis = narrowed
            fixed.append((p, e))
    return lattice_invariance(d, basis, group), fixed, rest


def _family5_item(
    block: Block, item: BlockItem, t: TelescoperType, bounds: SolverBounds, parts: _Parts
) -> None:
    group = GroupSpec.of(x=t.dx, y=t.theta_y, z=t.theta_z)
    kinds = {"x": t.dx, "y": t.theta_y, "z": t.theta_z}
    d = block.representative
    value = _item_value(block, item)
    c = item.numerator.denom
    factors = [(p, e) for p, e in irreducible_factors(c) if degree(p, "y") > 0]
    relation, fixed, rest = _shared_relation(d, factors, group)
    if relation is None:
        parts.fail(Verdict.not_exists(Reason.NO_ORBIT_RELATION, format_poly(d)))
        return
    logger.debug(f"direction {relation.exponents()} fixes {format_poly(d)} and {len(fixed)} factors")
    if not rest:
        _add_invariant_witness(parts, value, relation, kinds, bounds, d)
        return
    if _orbit_direction(d, GroupSpec.of(y=t.theta_y, z=t.theta_z)) is None:
        parts.fail(Verdict.not_exists(Reason.NOT_INVARIANT, format_poly(rest[0][0])))
        return
    c1, c2 = RING.one, RING.one
    for p, e in fixed:
        c1 *= p**e
    for p, e in rest:
        c2 *= p**e
    polynomial = item.numerator * FIELD(c)
    b1, b2 = bezout_split(polynomial, c1, c2, "y")
    remaining = FIELD(c) / FIELD(c1 * c2)
    first = b1 / FIELD(c1) / remaining / block.denominator(item)
    second = b2 / FIELD(c2) / remaining / block.denominator(item)
    _exact_part(block, item, (t.theta_y, t.theta_z), bounds, parts, Reason.REMAINDER_NOT_EXACT, value=second)
    if first:
        _add_invariant_witness(parts, first, relation, kinds, bounds, d)


def _decide_family5(f: RatFun, t: TelescoperType, den: FactoredDen, bounds: SolverBounds) -> Verdict:
    group = GroupSpec.of(x=t.dx, y=t.theta_y, z=t.theta_z)
    form = orbit_normal_form(
        f, t.theta_y, t.theta_z, group, den, transport=("y", "z"), absorb_exact=True, bounds=bounds
    )
    parts = _Parts(t.dx)
    if form.scalar_part:
        parts.add_verdict(decide_bivariate(form.scalar_part, (t.dx, t.theta_y), bounds))
    for block in form.blocks:
        d = block.representative
        if block.unsupported:
            parts.fail(Verdict.unsupported(Reason.BOUND_EXCEEDED, format_poly(d)))
            continue
        if invariance_search(d, group) is None:
            parts.fail(Verdict.not_exists(Reason.NO_ORBIT_RELATION, format_poly(d)))
            continue
        for item in block.items:
            _family5_item(block, item, t, bounds, parts)
    return parts.verdict(form.u, form.v)


def _family6_item(
    block: Block, item: BlockItem, t: TelescoperType, bounds: SolverBounds, parts: _Parts
) -> None:
    d = block.representative
    value = _item_value(block, item)
    alpha = residue(item.numerator, d)
    if free_of(d, "y"):
        for c in alpha.coords:
            remainder, constant = bivariate_remainder(c, t.theta_y)
            for den in (remainder.denom, constant.denom):
                if split_content(den) is None:
                    parts.fail(Verdict.not_exists(Reason.NOT_SPLIT, format_poly(den)))
                    return

        def step(vec: List[RatFun]) -> List[RatFun]:
            return list(AlgebraicElement(d, tuple(vec)).derivative("x").coords)

        found = reduction_telescoper(alpha.coords, t.dx, "y", t.theta_y, bounds, step)
        if found is None:
            parts.add(None)
            return
        operator, certificates = found
        g = residue_fraction(AlgebraicElement(d, tuple(certificates)), d)
        h = _hermite_certificate(operator.apply(value) - theta(g, "y", t.theta_y))
        parts.add(Witness(operator, g, h))
        return
    outcome = algebraic_nonseparable_test(alpha, bounds)
    if outcome.status == "separable":
        operator = outcome.telescoper
        parts.add(Witness(operator, FIELD.zero, _hermite_certificate(operator.apply(value))))
    elif outcome.status == "nonseparable":
        parts.fail(Verdict.not_exists(Reason.NONSEPARABLE_RESIDUE, format_poly(outcome.factor)))
    else:
        parts.fail(Verdict.unsupported(Reason.ALG_SEPARABILITY_UNDECIDED, format_poly(d)))


def _decide_family6(f: RatFun, t: TelescoperType, den: FactoredDen, bounds: SolverBounds) -> Verdict:
    group = GroupSpec.of(y=t.theta_y)
    form = orbit_normal_form(f, t.theta_y, D, group, den, absorb_exact=True, bounds=bounds)
    parts = _Parts(t.dx)
    for block in form.blocks:
        if block.unsupported:
            parts.fail(Verdict.unsupported(Reason.BOUND_EXCEEDED, format_poly(block.representative)))
            continue
        for item in block.items:
            _family6_item(block, item, t, bounds, parts)
    return parts.verdict(form.u, form.v)


_DECIDERS = {
    1: _decide_family1,
    2: _decide_family2,
    3: _decide_family3,
    4: _decide_family4,
    5: _decide_family5,
    6: _decide_family6,
}


def _certificates_hold(f: RatFun, operator: OrePoly, t: TelescoperType, g: RatFun, h: RatFun) -> bool:
    image = operator.apply(f)
    expected = theta(g, "y", t.theta_y)
    if t.theta_z is not None:
        expected += theta(h, "z", t.theta_z)
    return image == expected


def decide(
    f: RatFun,
    t: "TelescoperType | str",
    den: Optional[FactoredDen] = None,
    bounds: Optional[SolverBounds] = None,
) -> Verdict:
    """
    Decide whether f has a telescoper of type t.

    Args:
        f: Rational function in x, y, z
        t: Telescoper type or its name, e.g. ``"Sx,Sy,Dz"``
        den: Factorization of f's denominator; z-factors of z-degree >= 2
            must be asserted irreducible
        bounds: Bounds for the searches behind witnesses and residues

    Returns:
        Verdict: exists with a verified witness when one was built,
        not_exists with a reason code, or unsupported with a branch code

    Raises:
        FactorizationRequiredError: If a needed factorization is missing
        BadFactorizationError: If den does not match f
        VerificationError: If an internal certificate fails its check
    """
    t = TelescoperType.parse(t) if isinstance(t, str) else t
    bounds = bounds or SolverBounds()
    f = as_ratfun(f)
    if t.bivariate:
        verdict = decide_bivariate(f, (t.dx, t.theta_y), bounds)
    elif not f:
        verdict = Verdict.exists(Witness(OrePoly.one(t.dx)))
    else:
        den = den or FactoredDen.trivial(f.denom)
        try:
            verdict = _DECIDERS[t.family](f, t, den, bounds)
        except BoundExceededError as e:
            verdict = Verdict.unsupported(Reason.BOUND_EXCEEDED, str(e))
    if verdict.telescoper is not None:
        g, h = verdict.certificates
        if not _certificates_hold(f, verdict.telescoper, t, g, h):
            raise VerificationError(f"telescoper {verdict.telescoper} does not verify for {t}")
    logger.info(
        f"{t}: {verdict.status}"
        + (f" ({(verdict.reason or verdict.branch).value})" if verdict.status != EXISTS else "")
        + (f", L = {verdict.telescoper}" if verdict.telescoper is not None else "")
    )
    return verdict


@dataclass(frozen=True)
class Verification:
    """
    Outcome of a telescoper check.

    undecided marks a check whose exactness test ran out of bounds.
    """

    ok: bool
    undecided: bool = False
    certificates: Optional[Tuple[RatFun, RatFun]] = None

    def __bool__(self) -> bool:
        return self.ok


def _image_den(den: Optional[FactoredDen], operator: OrePoly, image: RatFun) -> FactoredDen:
    if den is None:
        return FactoredDen.trivial(image.denom)
    candidates = {
        normalize_poly(act(FIELD(p), "x", operator.kind, i).numer) if operator.kind != D else p
        for p, _ in den.factors
        for i in range(operator.order + 1)
    }
    factors = [(p, multiplicity(p, image.denom)) for p in candidates]
    return FactoredDen.of([(p, k) for p, k in factors if k], asserted=den.asserted)


def verify_telescoper(
    operator: OrePoly,
    f: RatFun,
    t: "TelescoperType | str",
    certificates: Optional[Tuple[RatFun, RatFun]] = None,
    den: Optional[FactoredDen] = None,
    bounds: Optional[SolverBounds] = None,
) -> Verification:
    """
    Check that operator is a telescoper of type t for f.

    With certificates the identity L(f) = Theta_y(g) + Theta_z(h) is checked
    directly; without them L(f) goes through the exactness test.

    Raises:
        ValueError: For the zero operator
    """
    t = TelescoperType.parse(t) if isinstance(t, str) else t
    if operator.is_zero():
        raise ValueError("the zero operator is not a telescoper")
    if operator.kind != t.dx:
        return Verification(False)
    f = as_ratfun(f)
    if certificates is not None:
        g, h = certificates
        return Verification(_certificates_hold(f, operator, t, g, h), certificates=certificates)
    image = operator.apply(f)
    if t.bivariate:
        remainder, constant = bivariate_remainder(image, t.theta_y)
        return Verification(not remainder and not constant)
    verdict = is_exact(image, (t.theta_y, t.theta_z), _image_den(den, operator, image), bounds)
    if verdict.status == UNSUPPORTED:
        return Verification(False, undecided=True)
    return Verification(verdict.is_exact, certificates=(verdict.u, verdict.v) if verdict.is_exact else None)
