"""
Exact arithmetic over Q(q) for rational functions in x, y and z.

Polynomials are sparse sympy ``PolyElement`` values of ``RING = ZZ[x,y,z,q]``
and rational functions are ``FracElement`` values of its fraction field
``FIELD``. The parameter q is a generator, so it is never evaluated.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import ZZ
from sympy.polys.fields import FracElement, FracField, field
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex, lex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing, ring

from ..exceptions.telescoping_exceptions import (
    BadFactorizationError,
    FactorizationRequiredError,
    NotCoprimeError,
    ValidationError,
    ZeroDenominatorError,
)
from ..utils.logging_config import get_logger

logger = get_logger(__name__)

FIELD, X, Y, Z, Q = field("x,y,z,q", ZZ, grlex)
RING: PolyRing = FIELD.ring

RatFun = FracElement
MPoly = PolyElement
Scalar = Union[int, Fraction, PolyElement, FracElement]

VARIABLES = ("x", "y", "z")
GENERATORS = ("x", "y", "z", "q")
INDEX = {name: i for i, name in enumerate(GENERATORS)}


class Kind(str, Enum):
    """Kinds of the atomic operators acting on one variable."""

    D = "D"
    S = "S"
    T = "T"


def gen(var: str) -> RatFun:
    """Return the generator ``var`` of the rational function field."""
    return FIELD.gens[INDEX[var]]


def poly_gen(var: str) -> MPoly:
    """Return the generator ``var`` of the polynomial ring."""
    return RING.gens[INDEX[var]]


def as_ratfun(value: Scalar) -> RatFun:
    """
    Coerce an integer, fraction, polynomial or rational function into FIELD.

    Args:
        value: The value to coerce

    Returns:
        RatFun: The value as an element of FIELD
    """
    if isinstance(value, FracElement):
        return value
    if isinstance(value, PolyElement):
        return FIELD(value)
    if isinstance(value, Fraction):
        return FIELD(value.numerator) / FIELD(value.denominator)
    return FIELD(int(value))


def as_mpoly(value: Scalar) -> MPoly:
    """Coerce an integer, polynomial or polynomial-valued RatFun into RING."""
    if isinstance(value, PolyElement):
        return value
    if isinstance(value, FracElement):
        if value.denom != 1:
            raise ValueError(f"{value} is not a polynomial")
        return value.numer
    return RING(int(value))


def normalize(num: Scalar, den: Scalar = 1) -> RatFun:
    """
    Build the canonical rational function num/den.

    Args:
        num: Numerator
        den: Denominator

    Returns:
        RatFun: Reduced fraction with canonical denominator sign

    Raises:
        ZeroDenominatorError: If den is zero
    """
    den_value = as_ratfun(den)
    if not den_value:
        raise ZeroDenominatorError(f"zero denominator for numerator {num}")
    return as_ratfun(num) / den_value


def degree(p: Union[MPoly, RatFun], var: str) -> int:
    """Degree in ``var``; -1 for zero. For a RatFun the numerator degree is used."""
    if isinstance(p, FracElement):
        p = p.numer
    if not p:
        return -1
    return int(p.degree(INDEX[var]))


def free_of(f: Union[MPoly, RatFun], var: str) -> bool:
    """Return True when f does not depend on ``var``."""
    if isinstance(f, FracElement):
        return degree(f.numer, var) <= 0 and degree(f.denom, var) <= 0
    return degree(f, var) <= 0


def is_polynomial_in(f: RatFun, var: str) -> bool:
    """Return True when f is a polynomial in ``var`` over the other variables."""
    return free_of(f.denom, var)


def q_content(p: MPoly) -> MPoly:
    """Greatest common divisor in ZZ[q] of the coefficients of p in x, y, z."""
    groups: Dict[Tuple[int, ...], Dict[Tuple[int, ...], int]] = {}
    for monom, coeff in p.iterterms():
        groups.setdefault(monom[:3], {})[(0, 0, 0, monom[3])] = coeff
    content = RING.zero
    for terms in groups.values():
        content = content.gcd(RING.from_dict(terms))
    if content and content.LC < 0:
        content = -content
    return content


def normalize_poly(p: MPoly) -> MPoly:
    """
    Canonical representative of p up to a nonzero Q(q) scalar.

    The q-content is divided out and the leading integer coefficient made
    positive, so two polynomials agree up to a scalar iff their normal forms
    are equal. The result is rebuilt from its terms so that its hash agrees
    with equality.
    """
    if not p:
        return p
    p = p.exquo(q_content(p))
    if p.LC < 0:
        p = -p
    return RING.from_dict(dict(p.iterterms()))


def scalar_ratio(p1: MPoly, p2: MPoly) -> Optional[RatFun]:
    """Return c in Q(q) with p1 = c*p2, or None when no such scalar exists."""
    if not p1 or not p2:
        return None
    if normalize_poly(p1) != normalize_poly(p2):
        return None
    return FIELD(p1) / FIELD(p2)


def gcd_mpoly(p: MPoly, r: MPoly) -> MPoly:
    """
    Normalized greatest common divisor over Q(q)[x, y, z].

    Args:
        p: First polynomial
        r: Second polynomial

    Returns:
        MPoly: Normalized gcd; gcd(p, 0) is the normal form of p
    """
    return normalize_poly(as_mpoly(p).gcd(as_mpoly(r)))


def content(p: MPoly, var: str) -> MPoly:
    """Normalized gcd of the coefficients of p viewed as a polynomial in ``var``."""
    idx = INDEX[var]
    groups: Dict[int, Dict[Tuple[int, ...], int]] = {}
    for monom, coeff in p.iterterms():
        rest = monom[:idx] + (0,) + monom[idx + 1 :]
        groups.setdefault(monom[idx], {})[rest] = coeff
    result = RING.zero
    for terms in groups.values():
        result = result.gcd(RING.from_dict(terms))
        if result == 1 or result == -1:
            break
    return normalize_poly(result)


def primitive_part(p: MPoly, var: str) -> MPoly:
    """Normalized primitive part of p with respect to ``var``."""
    if not p:
        return p
    return normalize_poly(p.exquo(content(p, var)))


def squarefree_decompose(p: MPoly, var: str) -> List[Tuple[MPoly, int]]:
    """
    Squarefree decomposition of p in ``var`` (Yun's algorithm).

    Args:
        p: Nonzero polynomial
        var: Distinguished variable

    Returns:
        List[Tuple[MPoly, int]]: Parts with multiplicities; their product
        equals p up to a factor free of var
    """
    v = poly_gen(var)
    pp = primitive_part(p, var)
    if degree(pp, var) <= 0:
        return []
    dp = pp.diff(v)
    b = pp.gcd(dp)
    c = pp.exquo(b)
    d = dp.exquo(b) - c.diff(v)
    parts: List[Tuple[MPoly, int]] = []
    multiplicity = 1
    while degree(c, var) > 0:
        a = c.gcd(d)
        if degree(a, var) > 0:
            parts.append((normalize_poly(a), multiplicity))
        c = c.exquo(a)
        d = d.exquo(a) - c.diff(v)
        multiplicity += 1
    return parts


def multiplicity(p: MPoly, den: MPoly) -> int:
    """Largest k with p**k dividing den; p must not be a scalar."""
    k = 0
    while den:
        try:
            den = den.exquo(p)
        except ExactQuotientFailed:
            break
        k += 1
    return k


def is_squarefree(p: MPoly, var: str) -> bool:
    """Return True when p has no repeated factor depending on ``var``."""
    if degree(p, var) <= 0:
        return True
    return degree(p.gcd(p.diff(poly_gen(var))), var) <= 0


def lcm_mpoly(p: MPoly, r: MPoly) -> MPoly:
    """Normalized least common multiple over Q(q)[x, y, z]."""
    return normalize_poly((p * r).exquo(gcd_mpoly(p, r)))


def common_denominator(values: Iterable[RatFun]) -> MPoly:
    """Normalized lcm of the denominators of values."""
    result = RING.one
    for f in values:
        result = lcm_mpoly(result, as_ratfun(f).denom)
    return result


def irreducible_factors(p: MPoly) -> List[Tuple[MPoly, int]]:
    """
    Irreducible factors of p over Q(q) with multiplicities.

    Factors free of x, y and z are dropped; the rest are normalized.
    """
    _, factors = as_mpoly(p).factor_list()
    result = []
    for f, k in factors:
        if any(degree(f, v) > 0 for v in VARIABLES):
            result.append((normalize_poly(f), k))
    return sorted(result, key=lambda item: poly_key(item[0]))


def shift(f: RatFun, var: str, k: int = 1) -> RatFun:
    """Apply the shift ``var -> var + k`` to f."""
    if k == 0 or free_of(f, var):
        return f
    v = poly_gen(var)
    return FIELD.new(f.numer.compose(v, v + k), f.denom.compose(v, v + k))


def _q_scale(p: MPoly, idx: int, k: int) -> Tuple[MPoly, int]:
    terms = {}
    for monom, coeff in p.iterterms():
        terms[monom] = (monom[3] + k * monom[idx], coeff)
    low = min((e for e, _ in terms.values()), default=0)
    offset = min(low, 0)
    scaled = RING.from_dict(
        {m[:3] + (e - offset,): c for m, (e, c) in terms.items()}
    )
    return scaled, offset


def q_shift(f: RatFun, var: str, k: int = 1) -> RatFun:
    """Apply the q-dilation ``var -> q^k * var`` to f."""
    if k == 0 or free_of(f, var):
        return f
    idx = INDEX[var]
    num, a = _q_scale(f.numer, idx, k)
    den, b = _q_scale(f.denom, idx, k)
    return FIELD.new(num, den) * Q ** (a - b)


def derivative(f: RatFun, var: str) -> RatFun:
    """Partial derivative of f with respect to ``var``."""
    return f.diff(gen(var))


def act(f: RatFun, var: str, kind: Kind, power: int = 1) -> RatFun:
    """Apply the automorphism or derivation of ``kind`` on ``var`` ``power`` times."""
    if kind == Kind.S:
        return shift(f, var, power)
    if kind == Kind.T:
        return q_shift(f, var, power)
    if power < 0:
        raise ValueError("derivations have no inverse")
    for _ in range(power):
        f = derivative(f, var)
    return f


def _evaluate_poly(p: MPoly, values: Sequence[RatFun]) -> RatFun:
    powers: Dict[Tuple[int, int], RatFun] = {}
    total = FIELD.zero
    for monom, coeff in p.iterterms():
        term = FIELD(coeff)
        for i, e in enumerate(monom):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = values[i] ** e
                term *= powers[key]
        total += term
    return total


def substitute(f: RatFun, images: Mapping[str, RatFun]) -> RatFun:
    """
    Simultaneous substitution of rational functions for x, y or z.

    Args:
        f: Rational function
        images: Map from variable name to its image

    Returns:
        RatFun: f with the variables replaced
    """
    values = [as_ratfun(images[v]) if v in images else gen(v) for v in GENERATORS]
    return _evaluate_poly(f.numer, values) / _evaluate_poly(f.denom, values)


def coefficients_in(f: RatFun, var: str) -> List[RatFun]:
    """
    Coefficients of f as a polynomial in ``var``, lowest degree first.

    Raises:
        ValueError: If f is not a polynomial in var
    """
    if not is_polynomial_in(f, var):
        raise ValueError(f"{f} is not a polynomial in {var}")
    idx = INDEX[var]
    den = FIELD(f.denom)
    buckets: Dict[int, Dict[Tuple[int, ...], int]] = {}
    for monom, coeff in f.numer.iterterms():
        rest = monom[:idx] + (0,) + monom[idx + 1 :]
        buckets.setdefault(monom[idx], {})[rest] = coeff
    top = max(buckets, default=-1)
    return [
        FIELD(RING.from_dict(buckets[e])) / den if e in buckets else FIELD.zero
        for e in range(top + 1)
    ]


def from_coefficients(coeffs: Sequence[RatFun], var: str) -> RatFun:
    """Inverse of :func:`coefficients_in`."""
    v = gen(var)
    return sum((c * v**i for i, c in enumerate(coeffs)), FIELD.zero)


@lru_cache(maxsize=None)
def univariate_view(var: str) -> Tuple[FracField, PolyRing]:
    """
    The ring K(others)[var] used for division and extended gcd in ``var``.

    Returns:
        Tuple of the coefficient field K and the univariate ring over it
    """
    others = ",".join(g for g in GENERATORS if g != var)
    coeff_field = field(others, ZZ, grlex)[0]
    uni = ring(var, coeff_field.to_domain(), lex)[0]
    return coeff_field, uni


def to_univariate(p: MPoly, var: str) -> PolyElement:
    """Convert a polynomial of RING into K(others)[var]."""
    coeff_field, uni = univariate_view(var)
    idx = INDEX[var]
    buckets: Dict[int, Dict[Tuple[int, ...], int]] = {}
    for monom, coeff in p.iterterms():
        buckets.setdefault(monom[idx], {})[monom[:idx] + monom[idx + 1 :]] = coeff
    return uni.from_dict(
        {(e,): coeff_field(coeff_field.ring.from_dict(d)) for e, d in buckets.items()}
    )


def _lift(p: PolyElement, idx: int) -> RatFun:
    return FIELD(
        RING.from_dict({m[:idx] + (0,) + m[idx:]: c for m, c in p.iterterms()})
    )


def from_univariate(u: PolyElement, var: str) -> RatFun:
    """Convert an element of K(others)[var] back into FIELD."""
    idx = INDEX[var]
    v = gen(var)
    total = FIELD.zero
    for (e,), c in u.iterterms():
        total += _lift(c.numer, idx) / _lift(c.denom, idx) * v**e
    return total


def univariate_fraction(f: RatFun, var: str) -> Tuple[PolyElement, PolyElement]:
    """Numerator and denominator of f as elements of K(others)[var]."""
    return to_univariate(f.numer, var), to_univariate(f.denom, var)


def univariate_of(f: RatFun, var: str) -> PolyElement:
    """f as an element of K(others)[var]; f must be a polynomial in var."""
    num, den = univariate_fraction(f, var)
    if den.degree() > 0:
        raise ValueError(f"{f} is not a polynomial in {var}")
    return num.quo_ground(den.LC)


def inverse_mod(a: PolyElement, m: PolyElement) -> PolyElement:
    """
    Inverse of a modulo m in K[var].

    Raises:
        NotCoprimeError: If a and m share a factor in var
    """
    s, _, h = a.gcdex(m)
    if h.degree() > 0:
        raise NotCoprimeError(f"{a} is not invertible modulo {m}")
    return (s.quo_ground(h.LC)) % m


@dataclass(frozen=True)
class FactoredDen:
    """
    A denominator given by its asserted factors.

    Attributes:
        factors: Normalized, pairwise coprime, squarefree factors with
            multiplicities
        unit: Nonzero scalar in Q(q)
        asserted: Whether irreducibility of the factors is asserted by the caller
    """

    factors: Tuple[Tuple[MPoly, int], ...]
    unit: RatFun = FIELD.one
    asserted: bool = True

    @classmethod
    def of(
        cls, factors: Iterable[Tuple[MPoly, int]], asserted: bool = True
    ) -> "FactoredDen":
        """Build a FactoredDen, merging repeated factors and moving scalars to the unit."""
        merged: Dict[MPoly, int] = {}
        unit = FIELD.one
        for p, k in factors:
            p = as_mpoly(p)
            if all(degree(p, v) <= 0 for v in VARIABLES):
                unit *= FIELD(p) ** k
                continue
            n = normalize_poly(p)
            unit *= (FIELD(p) / FIELD(n)) ** k
            merged[n] = merged.get(n, 0) + k
        ordered = tuple(sorted(merged.items(), key=lambda item: poly_key(item[0])))
        return cls(ordered, unit, asserted)

    @classmethod
    def trivial(cls, den: MPoly) -> "FactoredDen":
        """
        Unasserted factors read off den without factoring.

        The squarefree parts in z are kept whole; the part of den free of z
        is one more factor.
        """
        factors = list(squarefree_decompose(den, "z"))
        rest = content(den, "z")
        if any(degree(rest, v) > 0 for v in VARIABLES):
            factors.append((rest, 1))
        return cls.of(factors, asserted=False)

    def expand(self) -> RatFun:
        """Product of the factors with multiplicities times the unit."""
        result = self.unit
        for p, k in self.factors:
            result *= FIELD(p) ** k
        return result

    def factors_in(self, var: str) -> List[Tuple[MPoly, int]]:
        """Factors that depend on ``var``."""
        return [(p, k) for p, k in self.factors if degree(p, var) > 0]

    def require_irreducible(self, var: str) -> None:
        """
        Check that every factor of var-degree >= 2 is asserted irreducible.

        Raises:
            FactorizationRequiredError: For an unasserted higher-degree factor
        """
        if self.asserted:
            return
        for p, _ in self.factors:
            if degree(p, var) >= 2:
                raise FactorizationRequiredError(
                    f"factor {format_poly(p)} has {var}-degree {degree(p, var)} "
                    "and must be supplied factored"
                )

    def validate(self) -> None:
        """
        Check squarefreeness and pairwise coprimality of the factors.

        Raises:
            ValidationError: Naming the offending factor or pair
        """
        for p, _ in self.factors:
            for var in VARIABLES:
                if not is_squarefree(p, var):
                    raise ValidationError(
                        f"factor {format_poly(p)} is not squarefree",
                        (format_poly(p), format_poly(p)),
                    )
        for i, (p, _) in enumerate(self.factors):
            for r, _ in self.factors[i + 1 :]:
                g = gcd_mpoly(p, r)
                if not g.is_ground:
                    raise ValidationError(
                        f"factors {format_poly(p)} and {format_poly(r)} "
                        f"share {format_poly(g)}",
                        (format_poly(p), format_poly(r)),
                    )

    def matches(self, den: MPoly, var: str) -> bool:
        """Whether the var-dependent factors reproduce den's var-primitive part."""
        product = RING.one
        for p, k in self.factors_in(var):
            product *= p**k
        return primitive_part(product, var) == primitive_part(den, var)


@dataclass(frozen=True)
class SimpleFraction:
    """A partial fraction numerator / factor**power."""

    factor: MPoly
    power: int
    numerator: RatFun

    def value(self) -> RatFun:
        """The fraction as a rational function."""
        return self.numerator / FIELD(self.factor) ** self.power


@dataclass(frozen=True)
class PartialFractions:
    """Polynomial part plus simple fractions of a rational function."""

    polynomial: RatFun
    terms: Tuple[SimpleFraction, ...]

    def reconstruct(self) -> RatFun:
        """Sum of all components."""
        return sum((t.value() for t in self.terms), self.polynomial)


def partial_fraction(f: RatFun, var: str, den: FactoredDen) -> PartialFractions:
    """
    Partial fraction decomposition of f in ``var`` over the other variables.

    Args:
        f: Rational function
        var: Distinguished variable
        den: Factorization of f's denominator; var-free factors are units

    Returns:
        PartialFractions: Numerators have var-degree below their factor's

    Raises:
        BadFactorizationError: If den does not reproduce f's denominator
    """
    if not den.matches(f.denom, var):
        raise BadFactorizationError(
            f"supplied factors do not reproduce the denominator {format_poly(f.denom)}"
        )
    num_u, den_u = univariate_fraction(f, var)
    poly_u, rem_u = divmod(num_u, den_u)
    terms: List[SimpleFraction] = []
    for p, k in den.factors_in(var):
        p_u = to_univariate(p, var)
        pk_u = p_u**k
        cofactor = den_u.exquo(pk_u)
        block = (rem_u * inverse_mod(cofactor % pk_u, pk_u)) % pk_u
        for j in range(k, 0, -1):
            block, digit = divmod(block, p_u)
            if digit:
                terms.append(SimpleFraction(p, j, from_univariate(digit, var)))
    logger.debug(f"partial fractions in {var}: {len(terms)} terms")
    return PartialFractions(from_univariate(poly_u, var), tuple(terms))


def bezout_split(
    b: RatFun, c1: MPoly, c2: MPoly, var: str
) -> Tuple[RatFun, RatFun]:
    """
    Split b/(c1*c2) into b1/c1 + b2/c2.

    Args:
        b: Polynomial in var (coefficients may be rational in the other variables)
        c1: First denominator
        c2: Second denominator, coprime to c1 in var
        var: Distinguished variable

    Returns:
        Tuple (b1, b2) with deg_var(b2) < deg_var(c2); the polynomial part is in b1

    Raises:
        NotCoprimeError: If c1 and c2 share a factor depending on var
    """
    c1_u, c2_u = to_univariate(as_mpoly(c1), var), to_univariate(as_mpoly(c2), var)
    b_u = univariate_of(as_ratfun(b), var)
    s, _, h = c1_u.gcdex(c2_u)
    if h.degree() > 0:
        raise NotCoprimeError(
            f"{format_poly(as_mpoly(c1))} and {format_poly(as_mpoly(c2))} "
            f"are not coprime in {var}"
        )
    b2_u = (b_u * s.quo_ground(h.LC)) % c2_u
    b1_u = (b_u - b2_u * c1_u).exquo(c2_u)
    return from_univariate(b1_u, var), from_univariate(b2_u, var)


def poly_key(p: MPoly) -> Tuple:
    """Deterministic sort key: total degree first, then the sorted term list."""
    terms = sorted(p.iterterms(), reverse=True)
    return (
        max((sum(m[:3]) for m, _ in terms), default=-1),
        len(terms),
        tuple((m, int(c)) for m, c in terms),
    )


def _format_monomial(monom: Tuple[int, ...], coeff: int) -> str:
    parts = []
    for name, e in zip(("q", "x", "y", "z"), (monom[3],) + tuple(monom[:3])):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    magnitude = abs(coeff)
    if not parts:
        return str(magnitude)
    if magnitude != 1:
        parts.insert(0, str(magnitude))
    return "*".join(parts)


def format_poly(p: MPoly) -> str:
    """Compact infix form, e.g. ``q*x^2+y-3``."""
    if not p:
        return "0"
    terms = sorted(
        p.iterterms(), key=lambda t: (sum(t[0][:3]), t[0][:3], t[0][3]), reverse=True
    )
    out = []
    for i, (monom, coeff) in enumerate(terms):
        body = _format_monomial(monom, int(coeff))
        if coeff < 0:
            out.append(f"-{body}")
        else:
            out.append(body if i == 0 else f"+{body}")
    return "".join(out)


def is_single_term(p: MPoly) -> bool:
    """Return True for monomials times an integer."""
    return len(p) == 1


def format_ratfun(f: RatFun) -> str:
    """Compact infix form of a rational function."""
    num = format_poly(f.numer)
    if f.denom == 1:
        return num
    if not is_single_term(f.numer):
        num = f"({num})"
    den = format_poly(f.denom)
    if not is_single_term(f.denom) or int(f.denom.LC) != 1:
        den = f"({den})"
    return f"{num}/{den}"


@dataclass(frozen=True)
class GroupSpec:
    """
    A free abelian group generated by shifts and q-dilations of some variables.

    Attributes:
        generators: Pairs (variable, kind) with kind S or T, in x, y, z order
    """

    generators: Tuple[Tuple[str, Kind], ...]

    def __post_init__(self) -> None:
        names = [v for v, _ in self.generators]
        if not names:
            raise ValueError("a group needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError(f"repeated generator variable in {names}")
        for v, kind in self.generators:
            if v not in VARIABLES or kind not in (Kind.S, Kind.T):
                raise ValueError(f"invalid generator {kind}{v}")

    @classmethod
    def of(cls, **kinds: Kind) -> "GroupSpec":
        """Build from keyword arguments, e.g. ``GroupSpec.of(x=Kind.T, y=Kind.S)``."""
        return cls(tuple((v, Kind(kinds[v])) for v in VARIABLES if v in kinds))

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """
        Parse ``"sy"``, ``"tx,sy,sz"`` or ``"Tx,Sy"`` style group names.

        Raises:
            ValueError: On unknown generator names
        """
        kinds: Dict[str, Kind] = {}
        for token in text.replace(" ", "").split(","):
            if len(token) != 2 or token[1] not in VARIABLES:
                raise ValueError(f"unknown group generator {token!r}")
            kinds[token[1]] = Kind(token[0].upper())
        return cls.of(**kinds)

    @property
    def variables(self) -> Tuple[str, ...]:
        """The acted-on variables."""
        return tuple(v for v, _ in self.generators)

    def kind_of(self, var: str) -> Optional[Kind]:
        """Kind of the generator on var, or None."""
        for v, kind in self.generators:
            if v == var:
                return kind
        return None

    def act(self, f: RatFun, exponents: Mapping[str, int]) -> RatFun:
        """Apply the group element with the given exponents."""
        for v, kind in self.generators:
            f = act(f, v, kind, exponents.get(v, 0))
        return f

    def __str__(self) -> str:
        return ",".join(f"{kind.value.lower()}{v}" for v, kind in self.generators)


@lru_cache(maxsize=None)
def parameter_field(params: Tuple[str, ...]) -> FracField:
    """The field Q(params) used as ground field for exact linear algebra."""
    return field(",".join(params), ZZ, grlex)[0]


def _project(p: MPoly, params: Tuple[str, ...], target: PolyRing) -> PolyElement:
    idxs = [INDEX[v] for v in params]
    terms = {}
    for monom, coeff in p.iterterms():
        if any(e for i, e in enumerate(monom) if i not in idxs):
            raise ValueError(f"{format_poly(p)} depends on more than {params}")
        terms[tuple(monom[i] for i in idxs)] = coeff
    return target.from_dict(terms)


def to_parameter_field(f: RatFun, params: Tuple[str, ...]) -> FracElement:
    """Convert f, which must only involve ``params``, into Q(params)."""
    target = parameter_field(params)
    return target.new(
        _project(f.numer, params, target.ring), _project(f.denom, params, target.ring)
    )


def from_parameter_field(c: FracElement, params: Tuple[str, ...]) -> RatFun:
    """Embed an element of Q(params) back into FIELD."""
    idxs = [INDEX[v] for v in params]

    def embed(p: PolyElement) -> RatFun:
        terms = {}
        for monom, coeff in p.iterterms():
            full = [0, 0, 0, 0]
            for i, e in zip(idxs, monom):
                full[i] = e
            terms[tuple(full)] = coeff
        return FIELD(RING.from_dict(terms))

    return embed(c.numer) / embed(c.denom)


def linear_relations(
    columns: Sequence[Sequence[RatFun]], params: Tuple[str, ...] = ("x", "q")
) -> List[List[RatFun]]:
    """
    Basis of all relations sum(e_i * columns[i]) = 0 with e_i in Q(params).

    Args:
        columns: Vectors whose entries only involve ``params``
        params: Generators of the ground field

    Returns:
        List of relation vectors; empty when the columns are independent
    """
    count = len(columns)
    if count == 0:
        return []
    height = max(len(c) for c in columns)
    target = parameter_field(params)
    zero = target.zero
    rows = []
    for i in range(height):
        row = [
            to_parameter_field(col[i], params) if i < len(col) else zero
            for col in columns
        ]
        if any(row):
            rows.append(row)
    if not rows:
        rows = [[zero] * count]
    matrix = DomainMatrix(rows, (len(rows), count), target.to_domain())
    basis = matrix.nullspace().to_list()
    return [[from_parameter_field(e, params) for e in vec] for vec in basis]


def solve_linear(
    columns: Sequence[Sequence[RatFun]],
    rhs: Sequence[RatFun],
    params: Tuple[str, ...] = ("x", "q"),
) -> Optional[List[RatFun]]:
    """Some e with sum(e_i * columns[i]) = rhs, or None when the system is inconsistent."""
    for vec in linear_relations(list(columns) + [rhs], params):
        if vec[-1]:
            return [-e / vec[-1] for e in vec[:-1]]
    return None
