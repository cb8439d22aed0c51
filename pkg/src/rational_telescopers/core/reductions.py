"""
Additive reductions of rational functions.

Each reduction writes f = Theta(g) + r where Theta is D, S - 1 or T - 1 in
one variable and r is a remainder in normal form: squarefree denominator
for Hermite reduction, shift-free or q-shift-free denominator for the
Abramov reductions. Orbit normal forms apply the same moves along several
group generators at once.
"""

from collections import defaultdict
from dataclasses import dataclass, field as dataclass_field
from typing import TYPE_CHECKING, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from ..exceptions.telescoping_exceptions import VerificationError
from ..utils.logging_config import get_logger
from .algebra import (
    FIELD,
    INDEX,
    Q,
    RING,
    FactoredDen,
    GroupSpec,
    Kind,
    MPoly,
    RatFun,
    SimpleFraction,
    act,
    bezout_split,
    coefficients_in,
    degree,
    format_poly,
    from_univariate,
    gcd_mpoly,
    gen,
    multiplicity,
    normalize_poly,
    partial_fraction,
    poly_gen,
    poly_key,
    primitive_part,
    squarefree_decompose,
    univariate_fraction,
)
from .equivalence import OrbitMember, dispersion, orbit_partition
from .operators import theta

if TYPE_CHECKING:
    from .solvers import SolverBounds

logger = get_logger(__name__)


class HermiteReduction(NamedTuple):
    """f = D_var(certificate) + numerator/denominator with a squarefree denominator."""

    certificate: RatFun
    numerator: MPoly
    denominator: MPoly

    @property
    def remainder(self) -> RatFun:
        return FIELD(self.numerator) / FIELD(self.denominator)


class ShiftReduction(NamedTuple):
    """f = S_var(g) - g + numerator/denominator with a shift-free denominator."""

    certificate: RatFun
    numerator: MPoly
    denominator: MPoly

    @property
    def remainder(self) -> RatFun:
        return FIELD(self.numerator) / FIELD(self.denominator)


class QShiftReduction(NamedTuple):
    """f = T_var(g) - g + constant + numerator/denominator, constant free of var."""

    certificate: RatFun
    constant: RatFun
    numerator: MPoly
    denominator: MPoly

    @property
    def remainder(self) -> RatFun:
        return self.constant + FIELD(self.numerator) / FIELD(self.denominator)


@dataclass(frozen=True)
class BlockItem:
    """numerator / psi_label(representative)^power, psi_label built from untransported generators."""

    label: Tuple[Tuple[str, int], ...]
    power: int
    numerator: RatFun


@dataclass(frozen=True)
class Block:
    """All remainder fractions over one orbit."""

    representative: MPoly
    members: Tuple[OrbitMember, ...]
    items: Tuple[BlockItem, ...]
    group: GroupSpec
    unsupported: bool = False

    def denominator(self, item: BlockItem) -> RatFun:
        return self.group.act(FIELD(self.representative), dict(item.label)) ** item.power

    def value(self) -> RatFun:
        """Sum of the items."""
        return sum((i.numerator / self.denominator(i) for i in self.items), FIELD.zero)

    def powers(self) -> Dict[int, RatFun]:
        """Numerators keyed by power, for blocks without labels."""
        result: Dict[int, RatFun] = {}
        for item in self.items:
            result[item.power] = result.get(item.power, FIELD.zero) + item.numerator
        return result


def _integrate_polynomial(p: RatFun, var: str) -> RatFun:
    v = gen(var)
    return sum(
        (c / (k + 1) * v ** (k + 1) for k, c in enumerate(coefficients_in(p, var))),
        FIELD.zero,
    )


def sum_polynomial(p: RatFun, var: str) -> RatFun:
    """
    Antidifference of a polynomial in var: g with g(var+1) - g = p.

    Terms are removed from the top degree down.
    """
    v = gen(var)
    remaining = p
    result = FIELD.zero
    while remaining:
        coeffs = coefficients_in(remaining, var)
        n = len(coeffs) - 1
        term = coeffs[-1] / (n + 1) * v ** (n + 1)
        result += term
        remaining -= act(term, var, Kind.S, 1) - term
    return result


def q_sum_laurent(terms: Dict[int, RatFun], var: str) -> Tuple[RatFun, RatFun]:
    """
    Split a Laurent polynomial sum(c_i var^i) into T_var(g) - g plus c_0.

    Returns:
        Tuple (g, c_0)
    """
    v = gen(var)
    g = FIELD.zero
    for i, c in terms.items():
        if i:
            g += c * v**i / (Q**i - 1)
    return g, terms.get(0, FIELD.zero)


def _split_polynomial_part(f: RatFun, var: str) -> Tuple[RatFun, RatFun]:
    num_u, den_u = univariate_fraction(f, var)
    poly_u, rem_u = divmod(num_u, den_u)
    return from_univariate(poly_u, var), from_univariate(rem_u, var) / FIELD(f.denom)


def _bezout_solve(a, b, c):
    s, _, h = a.gcdex(b)
    s = s.quo_ground(h.LC)
    first = (s * c) % b
    second = (c - first * a).exquo(b)
    return first, second


def hermite_reduce(f: RatFun, var: str = "z") -> HermiteReduction:
    """
    Hermite reduction of f in var over the other variables.

    Uses the quadratic variant over K(others)[var]; the polynomial part is
    integrated termwise.

    Args:
        f: Rational function
        var: Distinguished variable

    Returns:
        HermiteReduction: deg_var(numerator) < deg_var(denominator) and the
        denominator is squarefree in var
    """
    num_u, den_u = univariate_fraction(f, var)
    poly_u, rem_u = divmod(num_u, den_u)
    certificate = _integrate_polynomial(from_univariate(poly_u, var), var)
    v = den_u.ring.gens[0]
    lead = den_u.LC
    a = rem_u.quo_ground(lead)
    d = den_u.monic()
    dm = d.gcd(d.diff(v))
    ds = d.exquo(dm)
    while dm.degree() > 0:
        dm2 = dm.gcd(dm.diff(v))
        dms = dm.exquo(dm2)
        coeff = -(ds * dm.diff(v)).exquo(dm)
        b, c = _bezout_solve(coeff, dms, a)
        a = c - b.diff(v) * ds.exquo(dms)
        certificate += from_univariate(b, var) / from_univariate(dm, var)
        dm = dm2
    quotient, rest = divmod(a, ds)
    certificate += _integrate_polynomial(from_univariate(quotient, var), var)
    remainder = from_univariate(rest, var) / from_univariate(ds, var)
    logger.debug(f"hermite reduction in {var}: remainder degree {degree(remainder.denom, var)}")
    return HermiteReduction(certificate, remainder.numer, remainder.denom)


def telescoping_certificate(c: RatFun, var: str, kind: Kind, n: int) -> RatFun:
    """
    G with theta^n(c) - c = theta(G) - G for the automorphism theta of kind.

    Args:
        c: Rational function
        var: Acted-on variable
        kind: S or T
        n: Integer exponent

    Returns:
        RatFun: the telescoping sum of the intermediate images
    """
    if n >= 0:
        return sum((act(c, var, kind, i) for i in range(n)), FIELD.zero)
    return -sum((act(c, var, kind, -i) for i in range(1, -n + 1)), FIELD.zero)


def orbit_shift_reduce(a: RatFun, b: RatFun, var: str, kind: Kind, n: int) -> Tuple[RatFun, RatFun]:
    """
    Move a/theta^n(b) onto the denominator b.

    Returns:
        Tuple (g, residual) with a/theta^n(b) = theta(g) - g + residual and
        residual = theta^-n(a)/b
    """
    residual = act(a, var, kind, -n) / b
    return telescoping_certificate(residual, var, kind, n), residual


def coprime_base(polys: Sequence[MPoly], var: str) -> List[MPoly]:
    """
    Pairwise coprime squarefree pieces covering the var-parts of polys.

    Every input is, up to a factor free of var, a product of powers of the
    pieces. Pieces are primitive in var and normalized.
    """
    base: List[MPoly] = []
    for p in polys:
        for part, _ in squarefree_decompose(p, var):
            pending = [part]
            while pending:
                u = pending.pop()
                if degree(u, var) <= 0:
                    continue
                for i, w in enumerate(base):
                    g = gcd_mpoly(u, w)
                    if degree(g, var) > 0:
                        del base[i]
                        base.append(g)
                        rest = primitive_part(w.exquo(g), var)
                        if degree(rest, var) > 0:
                            base.append(rest)
                        pending.append(primitive_part(u.exquo(g), var))
                        break
                else:
                    base.append(u)
    return sorted(base, key=poly_key)


def shift_base(polys: Sequence[MPoly], var: str, kind: Kind) -> List[MPoly]:
    """
    Coprime base of polys refined until it is stable under shifts.

    Two pieces either have coprime shifts or one is a shift of the other up
    to a scalar.
    """
    pieces = coprime_base(polys, var)
    if not pieces:
        return []
    product = RING.one
    for p in pieces:
        product *= p
    distances = [k for k in dispersion(product, product, var, kind) if k]
    changed = True
    while changed:
        changed = False
        for i, u in enumerate(pieces):
            for w in pieces:
                for k in distances:
                    g = gcd_mpoly(u, act(FIELD(w), var, kind, k).numer)
                    if 0 < degree(g, var) < degree(u, var):
                        rest = primitive_part(u.exquo(g), var)
                        pieces[i : i + 1] = [g, rest]
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return pieces


def _with_multiplicities(pieces: Sequence[MPoly], den: MPoly) -> FactoredDen:
    factors = []
    for p in pieces:
        k = multiplicity(p, den)
        if k:
            factors.append((p, k))
    return FactoredDen.of(factors, asserted=False)


def _transport(
    term: SimpleFraction,
    member: OrbitMember,
    representative: MPoly,
    group: GroupSpec,
    moved: Sequence[str],
) -> Tuple[Dict[str, RatFun], RatFun, Tuple[Tuple[str, int], ...]]:
    exps = dict(member.exponents)
    label = {v: e for v, e in exps.items() if v not in moved}
    target = group.act(FIELD(representative), label) ** term.power
    remaining = {v: e for v, e in exps.items() if v in moved}
    numerator = term.numerator / member.scalar**term.power
    certificates: Dict[str, RatFun] = {}
    for v in moved:
        n = remaining.pop(v, 0)
        if not n:
            continue
        kind = group.kind_of(v)
        rest = group.act(target, remaining)
        g, residual = orbit_shift_reduce(numerator, rest, v, kind, n)
        certificates[v] = certificates.get(v, FIELD.zero) + g
        numerator = act(numerator, v, kind, -n)
    return certificates, numerator, tuple(sorted(label.items()))


def _orbit_reduce(
    fractions: Iterable[SimpleFraction], factors: Sequence[MPoly], group: GroupSpec, moved: Sequence[str]
) -> Tuple[Dict[str, RatFun], List["Block"]]:
    orbits = orbit_partition(factors, group)
    owner = {}
    for orbit in orbits:
        for member in orbit.members:
            owner[member.factor] = (orbit, member)
    certificates: Dict[str, RatFun] = defaultdict(lambda: FIELD.zero)
    collected: Dict[MPoly, Dict[Tuple, RatFun]] = defaultdict(lambda: defaultdict(lambda: FIELD.zero))
    for term in fractions:
        orbit, member = owner[normalize_poly(term.factor)]
        certs, numerator, label = _transport(term, member, orbit.representative, group, moved)
        for v, g in certs.items():
            certificates[v] += g
        collected[orbit.representative][(label, term.power)] += numerator
    blocks = []
    for orbit in orbits:
        items = tuple(
            BlockItem(label, power, numerator)
            for (label, power), numerator in sorted(
                collected.get(orbit.representative, {}).items(), key=lambda kv: (kv[0][1], kv[0][0])
            )
            if numerator
        )
        if items:
            blocks.append(Block(orbit.representative, orbit.members, items, group))
    return dict(certificates), blocks


def _reduce_proper(
    propers: Sequence[RatFun], var: str, kind: Kind
) -> List[Tuple[RatFun, RatFun]]:
    """Move proper fractions along one shift over a shared base and shared representatives."""
    nonzero = [f.denom for f in propers if f]
    pieces = shift_base(nonzero, var, kind)
    group = GroupSpec.of(**{var: kind})
    results = []
    for f in propers:
        if not f:
            results.append((FIELD.zero, FIELD.zero))
            continue
        parts = partial_fraction(f, var, _with_multiplicities(pieces, f.denom))
        certs, blocks = _orbit_reduce(parts.terms, pieces, group, (var,))
        results.append((certs.get(var, FIELD.zero), sum((b.value() for b in blocks), FIELD.zero)))
    return results


def abramov_reduce(f: RatFun, var: str = "z") -> ShiftReduction:
    """
    Abramov reduction: f = S_var(g) - g + a/b with b shift-free in var.

    Args:
        f: Rational function
        var: Distinguished variable

    Returns:
        ShiftReduction: deg_var(a) < deg_var(b), gcd(b, b(var + k)) = 1 for k != 0
    """
    poly, proper = _split_polynomial_part(f, var)
    certificate = sum_polynomial(poly, var)
    if not proper:
        return ShiftReduction(certificate, RING.zero, RING.one)
    [(cert, remainder)] = _reduce_proper([proper], var, Kind.S)
    return ShiftReduction(certificate + cert, remainder.numer, remainder.denom)


def _laurent_split(f: RatFun, var: str) -> Tuple[Dict[int, RatFun], RatFun]:
    """Laurent polynomial part of f in var and the proper rest with var not dividing its denominator."""
    idx_power = min(m[INDEX[var]] for m in f.denom.itermonoms())
    poly, proper = _split_polynomial_part(f, var)
    terms: Dict[int, RatFun] = {i: c for i, c in enumerate(coefficients_in(poly, var)) if c}
    if not idx_power or not proper:
        return terms, proper
    v = poly_gen(var)
    monomial = v**idx_power
    rest_den = f.denom.exquo(monomial)
    b1, b2 = bezout_split(proper * FIELD(f.denom), monomial, rest_den, var)
    for i, c in enumerate(coefficients_in(b1, var)):
        if c:
            terms[i - idx_power] = terms.get(i - idx_power, FIELD.zero) + c
    return terms, b2 / FIELD(rest_den)


def q_abramov_reduce(f: RatFun, var: str = "z") -> QShiftReduction:
    """
    q-Abramov reduction: f = T_var(g) - g + c + a/b.

    Powers of var in the denominator are absorbed into g; c is free of var
    and b is q-shift-free in var and not divisible by var.
    """
    terms, proper = _laurent_split(f, var)
    certificate, constant = q_sum_laurent(terms, var)
    if not proper:
        return QShiftReduction(certificate, constant, RING.zero, RING.one)
    [(cert, remainder)] = _reduce_proper([proper], var, Kind.T)
    return QShiftReduction(certificate + cert, constant, remainder.numer, remainder.denom)


def common_reduce(functions: Sequence[RatFun], var: str, kind: Kind) -> List[Tuple[RatFun, RatFun]]:
    """
    Reduce several functions along Theta_var with one set of representatives.

    The remainders depend linearly on the inputs: a combination with
    coefficients free of var is Theta_var-exact exactly when the same
    combination of remainders vanishes.

    Args:
        functions: Rational functions
        var: Distinguished variable
        kind: Kind of Theta_var

    Returns:
        List of (certificate, remainder) pairs, one per function
    """
    if kind == Kind.D:
        reductions = [hermite_reduce(f, var) for f in functions]
        return [(r.certificate, r.remainder) for r in reductions]
    heads: List[Tuple[RatFun, RatFun]] = []
    propers: List[RatFun] = []
    for f in functions:
        if kind == Kind.S:
            poly, proper = _split_polynomial_part(f, var)
            heads.append((sum_polynomial(poly, var), FIELD.zero))
        else:
            terms, proper = _laurent_split(f, var)
            heads.append(q_sum_laurent(terms, var))
        propers.append(proper)
    results = []
    for (g, c), (cert, rem) in zip(heads, _reduce_proper(propers, var, kind)):
        results.append((g + cert, c + rem))
    return results


@dataclass(frozen=True)
class ReducedForm:
    """
    f = sum_v Theta_v(certificate_v) + scalar_part + sum of blocks.

    Attributes:
        kinds: Kind of Theta_v per certificate variable
        certificates: Certificates per variable
        scalar_part: Part free of z left by a q-reduction in z
        blocks: Remainder blocks, one per orbit
    """

    kinds: Tuple[Tuple[str, Kind], ...]
    certificates: Tuple[Tuple[str, RatFun], ...]
    scalar_part: RatFun = FIELD.zero
    blocks: Tuple[Block, ...] = dataclass_field(default_factory=tuple)

    def certificate(self, var: str) -> RatFun:
        return dict(self.certificates).get(var, FIELD.zero)

    @property
    def u(self) -> RatFun:
        return self.certificate("y")

    @property
    def v(self) -> RatFun:
        return self.certificate("z")

    def remainder(self) -> RatFun:
        """scalar_part plus all blocks."""
        return sum((b.value() for b in self.blocks), self.scalar_part)

    def reconstruct(self) -> RatFun:
        """Rebuild the reduced function."""
        kinds = dict(self.kinds)
        total = self.remainder()
        for var, g in self.certificates:
            total += theta(g, var, kinds[var])
        return total

    def with_blocks(self, blocks: Sequence[Block], extra: Dict[str, RatFun]) -> "ReducedForm":
        """Replace the blocks and add to the certificates."""
        certs = dict(self.certificates)
        for var, g in extra.items():
            certs[var] = certs.get(var, FIELD.zero) + g
        return ReducedForm(self.kinds, tuple(sorted(certs.items())), self.scalar_part, tuple(blocks))

    @property
    def unsupported(self) -> bool:
        return any(b.unsupported for b in self.blocks)


def restrict_factors(den: FactoredDen, poly: MPoly, var: str) -> FactoredDen:
    """Factors of den depending on var with their multiplicities in poly."""
    factors = []
    for p, _ in den.factors_in(var):
        k = multiplicity(p, poly)
        if k:
            factors.append((p, k))
    return FactoredDen(tuple(factors), FIELD.one, den.asserted)


def orbit_normal_form(
    f: RatFun,
    theta_y: Kind,
    theta_z: Kind,
    group: GroupSpec,
    den: FactoredDen,
    transport: Optional[Sequence[str]] = None,
    absorb_exact: bool = False,
    bounds: Optional["SolverBounds"] = None,
) -> ReducedForm:
    """
    Reduce f along z and then along the orbits of group.

    The z-part is removed first: Hermite reduction for D_z, polynomial
    antidifference for S_z, Laurent part for T_z. Remainder fractions over
    the supplied irreducible factors are then moved onto orbit
    representatives along the generators in ``transport`` (all group
    generators by default); the other generators label the items.

    Args:
        f: Rational function
        theta_y: Kind of Theta_y
        theta_z: Kind of Theta_z
        group: Orbit group
        den: Factorization of f's denominator
        transport: Generators to move along
        absorb_exact: Absorb (Theta_y, Theta_z)-exact block fractions
        bounds: Solver bounds for the exactness tests

    Returns:
        ReducedForm: Verified to reconstruct f

    Raises:
        FactorizationRequiredError: If a z-factor of degree >= 2 is unasserted
        VerificationError: If the reconstruction fails
    """
    den.require_irreducible("z")
    moved = tuple(transport) if transport is not None else group.variables
    kinds: Dict[str, Kind] = {v: group.kind_of(v) for v in moved}
    kinds["y"] = kinds.get("y", theta_y)
    kinds["z"] = theta_z if theta_z == Kind.D else kinds.get("z", theta_z)
    certificates: Dict[str, RatFun] = {v: FIELD.zero for v in kinds}
    scalar_part = FIELD.zero
    if theta_z == Kind.D:
        red = hermite_reduce(f, "z")
        certificates["z"] += red.certificate
        rest = red.remainder
    elif theta_z == Kind.S:
        poly, rest = _split_polynomial_part(f, "z")
        certificates["z"] += sum_polynomial(poly, "z")
    else:
        terms, rest = _laurent_split(f, "z")
        g, scalar_part = q_sum_laurent(terms, "z")
        certificates["z"] += g
    blocks: List[Block] = []
    if rest:
        local = restrict_factors(den, rest.denom, "z")
        parts = partial_fraction(rest, "z", local)
        certs, blocks = _orbit_reduce(parts.terms, [p for p, _ in local.factors], group, moved)
        for v, g in certs.items():
            certificates[v] += g
    form = ReducedForm(
        tuple(sorted(kinds.items())), tuple(sorted(certificates.items())), scalar_part, tuple(blocks)
    )
    if form.reconstruct() != f:
        raise VerificationError("orbit normal form does not reconstruct its input")
    if absorb_exact:
        from .exactness import absorb_exact_blocks

        form = absorb_exact_blocks(form, theta_y, theta_z, bounds)
    logger.debug(
        f"normal form under {group}: {len(form.blocks)} blocks, "
        f"representatives {[format_poly(b.representative) for b in form.blocks]}"
    )
    return form
