"""
Operator actions on rational functions and Ore polynomials in one variable.

The atomic operators are the derivation D_v, the shift S_v and the
q-dilation T_v. An :class:`OrePoly` is a skew polynomial in a single
operator acting on x, with coefficients in Q(q)(x).
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from ..exceptions.telescoping_exceptions import KindMismatchError, ZeroDivisorError
from ..utils.logging_config import get_logger
from .algebra import (
    FIELD,
    Kind,
    RatFun,
    act,
    as_ratfun,
    format_ratfun,
    free_of,
    linear_relations,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class OperatorKind:
    """An atomic operator: a kind acting on one variable."""

    variable: str
    kind: Kind

    def __post_init__(self) -> None:
        if self.variable not in ("x", "y", "z"):
            raise ValueError(f"unknown variable {self.variable}")

    @property
    def symbol(self) -> str:
        """Printed name such as ``Sx``."""
        return f"{self.kind.value}{self.variable}"


def apply_atomic(kind: OperatorKind, f: RatFun) -> RatFun:
    """
    Apply one atomic operator to f.

    Args:
        kind: The operator
        f: Rational function

    Returns:
        RatFun: D_v(f), S_v(f) or T_v(f)
    """
    return act(f, kind.variable, kind.kind, 1)


def theta(f: RatFun, var: str, kind: Kind) -> RatFun:
    """The difference/derivation Theta_v: D_v(f), S_v(f) - f or T_v(f) - f."""
    if kind == Kind.D:
        return act(f, var, kind, 1)
    return act(f, var, kind, 1) - f


Monomial = Tuple[Tuple[OperatorKind, int], ...]


@dataclass(frozen=True)
class GeneralOperator:
    """
    A sum of operator monomials with rational-function coefficients.

    Each monomial is a product of powers of atomic operators on distinct
    variables, so the order of the factors does not matter.
    """

    terms: Tuple[Tuple[RatFun, Monomial], ...]

    def apply(self, f: RatFun) -> RatFun:
        """Apply the operator to f."""
        return ore_apply(self, f)


def ore_apply(operator: GeneralOperator, f: RatFun) -> RatFun:
    """
    Apply a general operator to f.

    Args:
        operator: Coefficient-weighted sum of operator monomials
        f: Rational function

    Returns:
        RatFun: sum of c * (composed atomic actions)(f)
    """
    total = FIELD.zero
    for coeff, monomial in operator.terms:
        g = f
        for atom, power in monomial:
            g = act(g, atom.variable, atom.kind, power)
        total += as_ratfun(coeff) * g
    return total


def _check_coefficient(c: RatFun) -> RatFun:
    c = as_ratfun(c)
    if not (free_of(c, "y") and free_of(c, "z")):
        raise ValueError(f"Ore coefficient {format_ratfun(c)} depends on y or z")
    return c


class OrePoly:
    """
    A skew polynomial sum(c_i * d^i) in the operator d acting on x.

    Coefficients live in Q(q)(x); index i is the power of d. The zero
    operator has no coefficients.
    """

    __slots__ = ("kind", "coeffs")

    def __init__(self, kind: Kind, coeffs: Sequence[RatFun] = ()) -> None:
        values = [_check_coefficient(c) for c in coeffs]
        while values and not values[-1]:
            values.pop()
        self.kind = Kind(kind)
        self.coeffs: Tuple[RatFun, ...] = tuple(values)

    @classmethod
    def one(cls, kind: Kind) -> "OrePoly":
        """The identity operator."""
        return cls(kind, [FIELD.one])

    @classmethod
    def generator(cls, kind: Kind) -> "OrePoly":
        """The operator d itself."""
        return cls(kind, [FIELD.zero, FIELD.one])

    @property
    def order(self) -> int:
        """Order in d; -1 for the zero operator."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> RatFun:
        """Leading coefficient."""
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        """Whether this is the zero operator."""
        return not self.coeffs

    def _same_kind(self, other: "OrePoly") -> None:
        if self.kind != other.kind:
            raise KindMismatchError(
                f"cannot combine {self.kind.value}x and {other.kind.value}x operators"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrePoly):
            return NotImplemented
        return self.kind == other.kind and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.kind, self.coeffs))

    def __add__(self, other: "OrePoly") -> "OrePoly":
        self._same_kind(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return OrePoly(
            self.kind,
            [
                (self.coeffs[i] if i < len(self.coeffs) else FIELD.zero)
                + (other.coeffs[i] if i < len(other.coeffs) else FIELD.zero)
                for i in range(size)
            ],
        )

    def __neg__(self) -> "OrePoly":
        return OrePoly(self.kind, [-c for c in self.coeffs])

    def __sub__(self, other: "OrePoly") -> "OrePoly":
        return self + (-other)

    def __mul__(self, other: "OrePoly") -> "OrePoly":
        return ore_mul(self, other)

    def scale(self, c: RatFun) -> "OrePoly":
        """Left multiplication by a coefficient."""
        c = _check_coefficient(c)
        return OrePoly(self.kind, [c * a for a in self.coeffs])

    def shift_left(self) -> "OrePoly":
        """The product d * self, via d*a = sigma(a)*d + delta(a)."""
        result = [FIELD.zero] * (len(self.coeffs) + 1)
        for i, a in enumerate(self.coeffs):
            if self.kind == Kind.D:
                result[i + 1] += a
                result[i] += act(a, "x", Kind.D, 1)
            else:
                result[i + 1] += act(a, "x", self.kind, 1)
        return OrePoly(self.kind, result)

    def apply(self, f: RatFun) -> RatFun:
        """Apply the operator to a rational function in x, y, z."""
        total = FIELD.zero
        g = as_ratfun(f)
        for i, c in enumerate(self.coeffs):
            if i:
                g = act(g, "x", self.kind, 1)
            if c:
                total += c * g
        return total

    def monic(self) -> "OrePoly":
        """Divide by the leading coefficient."""
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def normalized(self) -> "OrePoly":
        """
        Scale to polynomial coefficients with trivial content.

        The leading coefficient gets a positive leading integer coefficient.
        """
        if self.is_zero():
            return self
        den = FIELD.one
        for c in self.coeffs:
            den = den * FIELD(c.denom) / FIELD(den.numer.gcd(c.denom))
        polys = [(c * den).numer for c in self.coeffs]
        g = polys[0].ring.zero
        for p in polys:
            g = g.gcd(p)
        scaled = [FIELD(p.exquo(g)) for p in polys]
        if scaled[-1].numer.LC < 0:
            scaled = [-c for c in scaled]
        return OrePoly(self.kind, scaled)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        symbol = f"{self.kind.value}x"
        pieces: List[str] = []
        for i in range(self.order, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            negative = c.numer.LC < 0
            magnitude = -c if negative else c
            single = magnitude.denom == 1 and len(magnitude.numer) == 1
            text = format_ratfun(magnitude)
            power = "" if i == 0 else symbol if i == 1 else f"{symbol}^{i}"
            if i == 0:
                body = text if single or not pieces else f"({text})"
            elif magnitude == 1:
                body = power
            else:
                body = f"{text}*{power}" if single else f"({text})*{power}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"OrePoly({self.kind.value}x: {self})"


def ore_mul(a: OrePoly, b: OrePoly) -> OrePoly:
    """
    Product a*b in the skew polynomial ring.

    Raises:
        KindMismatchError: If the operators have different kinds
    """
    a._same_kind(b)
    result = OrePoly(a.kind)
    power = b
    for i, c in enumerate(a.coeffs):
        if i:
            power = power.shift_left()
        if c:
            result = result + power.scale(c)
    return result


def _monomial(kind: Kind, c: RatFun, k: int) -> OrePoly:
    return OrePoly(kind, [FIELD.zero] * k + [c])


def ore_rdiv(a: OrePoly, b: OrePoly) -> Tuple[OrePoly, OrePoly]:
    """
    Right division a = quotient*b + remainder with order(remainder) < order(b).

    Raises:
        KindMismatchError: If the operators have different kinds
        ZeroDivisorError: If b is zero
    """
    a._same_kind(b)
    if b.is_zero():
        raise ZeroDivisorError("right division by the zero operator")
    quotient = OrePoly(a.kind)
    remainder = a
    while remainder.order >= b.order:
        k = remainder.order - b.order
        lead_b = act(b.leading, "x", b.kind, k) if b.kind != Kind.D else b.leading
        term = _monomial(a.kind, remainder.leading / lead_b, k)
        quotient = quotient + term
        remainder = remainder - ore_mul(term, b)
    return quotient, remainder


def ore_lclm(a: OrePoly, b: OrePoly) -> OrePoly:
    """
    Least common left multiple, normalized to leading coefficient 1.

    The remainders of d^i * a modulo b are collected for increasing i until
    they become linearly dependent over Q(q)(x).

    Raises:
        KindMismatchError: If the operators have different kinds
    """
    a._same_kind(b)
    if a.is_zero() or b.is_zero():
        raise ZeroDivisorError("the LCLM of the zero operator is undefined")
    rows: List[OrePoly] = []
    remainders: List[List[RatFun]] = []
    power = a
    for i in range(b.order + 1):
        if i:
            power = power.shift_left()
        rows.append(power)
        _, rem = ore_rdiv(power, b)
        remainders.append(list(rem.coeffs))
        relations = linear_relations(remainders)
        if relations:
            vec = relations[0]
            result = OrePoly(a.kind)
            for e, row in zip(vec, rows):
                if e:
                    result = result + row.scale(e)
            logger.debug(f"lclm of orders {a.order}, {b.order}: order {result.order}")
            return result.monic()
    raise AssertionError("LCLM search exceeded order bound")


def ore_lclm_many(ops: Sequence[OrePoly]) -> OrePoly:
    """LCLM of a nonempty sequence of operators."""
    result = ops[0].monic()
    for op in ops[1:]:
        result = ore_lclm(result, op)
    return result


def right_quotient(multiple: OrePoly, factor: OrePoly) -> OrePoly:
    """The operator q with multiple = q*factor; the division must be exact."""
    quotient, remainder = ore_rdiv(multiple, factor)
    if not remainder.is_zero():
        raise ValueError(f"{factor} does not right-divide {multiple}")
    return quotient

