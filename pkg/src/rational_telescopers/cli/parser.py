"""
Expression front end.

Rational functions are written with the variables x, y, z, the parameter q,
integer literals, ``+ - * / ^`` and parentheses. The polynomials written as
divisors are kept: they become the asserted factorization of the
denominator. Telescopers additionally use the operator symbols Sx, Tx and Dx.
"""

import re
from dataclasses import dataclass
from typing import FrozenSet, List, NamedTuple, Optional, Tuple, Union

from ..core.algebra import (
    FIELD,
    RING,
    VARIABLES,
    FactoredDen,
    Kind,
    MPoly,
    RatFun,
    format_poly,
    free_of,
    gen,
    multiplicity,
    normalize_poly,
    poly_key,
)
from ..core.operators import OrePoly, ore_mul
from ..exceptions.telescoping_exceptions import ExpressionSyntaxError, ValidationError
from ..utils.logging_config import get_logger

logger = get_logger(__name__)

TOKENS = {
    "number": r"\d+",
    "name": r"[A-Za-z]+",
    "op": r"[-+*/^]",
    "lpar": r"\(",
    "rpar": r"\)",
    "skip": r"\s+",
    "error": r".",
}
TOKEN_REGEX = re.compile("|".join(f"(?P<{name}>{text})" for name, text in TOKENS.items()))

VARIABLE_NAMES = ("x", "y", "z", "q")
OPERATOR_NAMES = {"Sx": Kind.S, "Tx": Kind.T, "Dx": Kind.D}

BINDING_POWER = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
PREFIX_POWER = 30

Value = Union[RatFun, OrePoly]


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """
    Split text into tokens; an ``end`` token closes the list.

    Raises:
        ExpressionSyntaxError: On a character outside the grammar
    """
    tokens = []
    for match in TOKEN_REGEX.finditer(text):
        kind = match.lastgroup or "error"
        if kind == "skip":
            continue
        if kind == "error":
            raise ExpressionSyntaxError(f"unexpected character {match.group()!r}", match.start())
        tokens.append(Token(kind, match.group(), match.start()))
    tokens.append(Token("end", "", len(text)))
    return tokens


@dataclass(frozen=True)
class Parsed:
    """
    A parsed subexpression.

    Attributes:
        value: The rational function, or an operator when Sx/Tx/Dx occur
        atoms: The polynomial factors of a written product, empty otherwise
        divisors: Every polynomial written as a divisor inside the subexpression
    """

    value: Value
    atoms: Tuple[MPoly, ...] = ()
    divisors: FrozenSet[MPoly] = frozenset()


def _is_polynomial(value: Value) -> bool:
    return not isinstance(value, OrePoly) and value.denom == 1


def _lift(value: Value, kind: Kind) -> OrePoly:
    return value if isinstance(value, OrePoly) else OrePoly(kind, [value])


def _operator_kind(*values: Value) -> Optional[Kind]:
    for value in values:
        if isinstance(value, OrePoly):
            return value.kind
    return None


class ExpressionParser:
    """
    Pratt parser over the token list.

    Args:
        text: The expression
        operators: Whether Sx, Tx and Dx are accepted
    """

    def __init__(self, text: str, operators: bool = False) -> None:
        self.text = text
        self.operators = operators
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.token
        if token.kind != "end":
            self.index += 1
        return token

    def expect(self, kind: str, text: str) -> None:
        if self.token.kind != kind:
            raise ExpressionSyntaxError(f"expected {text!r}", self.token.position)
        self.advance()

    def parse(self) -> Parsed:
        """
        Parse the whole text.

        Raises:
            ExpressionSyntaxError: With the position of the first offending token
        """
        result = self.expression(0)
        if self.token.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.token.text!r}", self.token.position)
        return result

    def expression(self, rbp: int) -> Parsed:
        left = self.prefix(self.advance())
        while self.token.kind == "op" and BINDING_POWER[self.token.text] > rbp:
            left = self.infix(self.advance(), left)
        return left

    def prefix(self, token: Token) -> Parsed:
        if token.kind == "number":
            return Parsed(FIELD(int(token.text)))
        if token.kind == "name":
            return self.name(token)
        if token.kind == "lpar":
            inner = self.expression(0)
            self.expect("rpar", ")")
            return inner
        if token.kind == "op" and token.text in "+-":
            operand = self.expression(PREFIX_POWER)
            if token.text == "+":
                return operand
            return Parsed(-operand.value, operand.atoms, operand.divisors)
        if token.kind == "end":
            raise ExpressionSyntaxError("unexpected end of input", token.position)
        raise ExpressionSyntaxError(f"unexpected {token.text!r}", token.position)

    def name(self, token: Token) -> Parsed:
        if token.text in VARIABLE_NAMES:
            value = gen(token.text)
            return Parsed(value, (value.numer,) if token.text != "q" else ())
        if self.operators and token.text in OPERATOR_NAMES:
            return Parsed(OrePoly.generator(OPERATOR_NAMES[token.text]))
        raise ExpressionSyntaxError(f"unknown name {token.text!r}", token.position)

    def infix(self, token: Token, left: Parsed) -> Parsed:
        if token.text == "^":
            right = self.expression(BINDING_POWER["^"] - 1)
            return self.power(token, left, right)
        right = self.expression(BINDING_POWER[token.text])
        divisors = left.divisors | right.divisors
        kind = _operator_kind(left.value, right.value)
        if token.text in "+-":
            if kind is not None:
                a, b = _lift(left.value, kind), _lift(right.value, kind)
                return Parsed(a + b if token.text == "+" else a - b, divisors=divisors)
            value = left.value + right.value if token.text == "+" else left.value - right.value
            return Parsed(value, (value.numer,) if _is_polynomial(value) and value else (), divisors)
        if token.text == "*":
            if kind is not None:
                return Parsed(ore_mul(_lift(left.value, kind), _lift(right.value, kind)), divisors=divisors)
            return Parsed(left.value * right.value, left.atoms + right.atoms, divisors)
        if isinstance(right.value, OrePoly):
            raise ExpressionSyntaxError("cannot divide by an operator", token.position)
        if not right.value:
            raise ExpressionSyntaxError("division by zero", token.position)
        if kind is not None:
            return Parsed(ore_mul(left.value, OrePoly(kind, [1 / right.value])), divisors=divisors)
        if _is_polynomial(right.value):
            divisors |= frozenset(right.atoms)
        return Parsed(left.value / right.value, (), divisors)

    def power(self, token: Token, base: Parsed, exponent: Parsed) -> Parsed:
        e = exponent.value
        if isinstance(e, OrePoly) or e.denom != 1 or not e.numer.is_ground or int(e.numer.LC) < 0:
            raise ExpressionSyntaxError("exponents must be nonnegative integers", token.position)
        k = int(e.numer.LC) if e else 0
        if isinstance(base.value, OrePoly):
            result = OrePoly.one(base.value.kind)
            for _ in range(k):
                result = ore_mul(result, base.value)
            return Parsed(result, divisors=base.divisors)
        atoms = base.atoms if k else ()
        return Parsed(base.value**k, atoms, base.divisors)


def _involves_variables(p: MPoly) -> bool:
    return not all(free_of(p, v) for v in VARIABLES)


def _written_factors(value: RatFun, divisors: FrozenSet[MPoly]) -> List[Tuple[MPoly, int]]:
    candidates = sorted({normalize_poly(p) for p in divisors if _involves_variables(p)}, key=poly_key)
    factors = []
    for p in candidates:
        k = multiplicity(p, value.denom)
        if k:
            factors.append((p, k))
    product = RING.one
    for p, k in factors:
        product *= p**k
    expected = normalize_poly(value.denom) if _involves_variables(value.denom) else RING.one
    if normalize_poly(product) != expected:
        raise ValidationError(
            f"written factors do not reproduce the denominator {format_poly(value.denom)}",
            (format_poly(expected), format_poly(product)),
        )
    return factors


def parse_expression(text: str, check_factors: bool = False) -> Tuple[RatFun, FactoredDen]:
    """
    Parse a rational function and the factorization of its denominator.

    Args:
        text: The expression
        check_factors: Check squarefreeness and pairwise coprimality of the
            written factors instead of trusting them

    Returns:
        Tuple (f, den); den asserts the written divisors as irreducible

    Raises:
        ExpressionSyntaxError: On malformed input, with the position
        ValidationError: When the written factors are inconsistent
    """
    parsed = ExpressionParser(text).parse()
    value = parsed.value
    den = FactoredDen.of(_written_factors(value, parsed.divisors))
    if check_factors:
        den.validate()
    logger.debug(f"parsed {text!r}: {len(den.factors)} written factors")
    return value, den


def parse_operator(text: str) -> OrePoly:
    """
    Parse a telescoper such as ``"x*Sx - (x+1)"``.

    Raises:
        ExpressionSyntaxError: On malformed input or an operator-free text
        KindMismatchError: When Sx, Tx and Dx are mixed
    """
    value = ExpressionParser(text, operators=True).parse().value
    if not isinstance(value, OrePoly):
        raise ExpressionSyntaxError("expected an operator in Sx, Tx or Dx", 0)
    return value
