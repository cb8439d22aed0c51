"""
Shift and q-shift equivalence of polynomials.

Group elements are products of shifts ``v -> v + k`` and q-dilations
``v -> q^k v``. Two polynomials are equivalent under a group when one is a
q-power multiple of the image of the other. Relations are found by exact
linear algebra over the integers and always verified by substitution.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, QQ, ZZ
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

from ..exceptions.telescoping_exceptions import BoundExceededError, VerificationError
from ..utils.logging_config import get_logger
from .algebra import (
    FIELD,
    GENERATORS,
    INDEX,
    Q,
    RING,
    GroupSpec,
    Kind,
    MPoly,
    RatFun,
    coefficients_in,
    content,
    degree,
    format_poly,
    free_of,
    gcd_mpoly,
    gen,
    normalize_poly,
    poly_gen,
    poly_key,
    q_shift,
    shift,
    substitute,
)

logger = get_logger(__name__)

EXT, *_EXT_GENS = ring("x,y,z,q,s1,s2,s3", QQ, grlex)
PARAMS, *_PARAM_GENS = ring("s1,s2,s3", QQ, grlex)
_SHIFTED, _T, _K = ring("t,k", ZZ, grlex)
_DILATED, _TD, _W, _QD = ring("t,w,q", ZZ, grlex)

SAMPLE_POINTS = (
    {"x": 3, "y": 7, "z": 11, "q": 5},
    {"x": 13, "y": 2, "z": 17, "q": 3},
    {"x": -5, "y": 19, "z": 4, "q": 7},
    {"x": 23, "y": -9, "z": 29, "q": 11},
)


@dataclass(frozen=True)
class IntegerLinear:
    """p = r(a1*v1 + a2*v2 [+ a3*v3]) with r given by its coefficients."""

    variables: Tuple[str, ...]
    direction: Tuple[int, ...]
    coefficients: Tuple[RatFun, ...]

    def value(self) -> RatFun:
        """Rebuild the polynomial from the shape."""
        form = sum((a * gen(v) for a, v in zip(self.direction, self.variables)), FIELD.zero)
        return sum((c * form**i for i, c in enumerate(self.coefficients)), FIELD.zero)


@dataclass(frozen=True)
class QIntegerLinear:
    """p = v^offset * r(v^direction); direction is None for a monomial in the variables."""

    variables: Tuple[str, ...]
    offset: Tuple[int, ...]
    direction: Optional[Tuple[int, ...]]
    coefficients: Tuple[MPoly, ...]

    def value(self) -> RatFun:
        """Rebuild the polynomial from the shape."""
        def monomial(exps: Sequence[int]) -> RatFun:
            result = FIELD.one
            for v, e in zip(self.variables, exps):
                result *= gen(v) ** e
            return result

        step = self.direction or tuple(0 for _ in self.variables)
        total = FIELD.zero
        for k, c in enumerate(self.coefficients):
            total += FIELD(c) * monomial([o + k * d for o, d in zip(self.offset, step)])
        return total


@dataclass(frozen=True)
class GroupRelation:
    """psi(p1) = q^s * p2 for the group element psi with the given exponents."""

    exponents: Tuple[Tuple[str, int], ...]
    s: int = 0

    def as_dict(self) -> Dict[str, int]:
        """Exponents keyed by variable."""
        return dict(self.exponents)


@dataclass(frozen=True)
class InvarianceWitness:
    """theta_x^m(d) = q^s * theta_y^n * theta_z^k(d) with m minimal and positive."""

    m: int
    n: int = 0
    k: int = 0
    s: int = 0

    def exponents(self) -> Dict[str, int]:
        """The stabilizing group element theta_x^m theta_y^-n theta_z^-k."""
        return {"x": self.m, "y": -self.n, "z": -self.k}


@dataclass(frozen=True)
class OrbitMember:
    """A factor equal to scalar * psi(representative)."""

    factor: MPoly
    exponents: Tuple[Tuple[str, int], ...]
    scalar: RatFun


@dataclass(frozen=True)
class Orbit:
    """One block of an orbit partition."""

    representative: MPoly
    members: Tuple[OrbitMember, ...]


def _primitive_direction(values: Sequence[Fraction]) -> Tuple[int, ...]:
    denominators = 1
    for v in values:
        denominators = denominators * v.denominator // gcd(denominators, v.denominator)
    ints = [int(v * denominators) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints] if g else ints
    for v in ints:
        if v:
            if v < 0:
                ints = [-e for e in ints]
            break
    return tuple(ints)


def _as_rational(f: RatFun) -> Optional[Fraction]:
    if not (f.numer.is_ground and f.denom.is_ground):
        return None
    return Fraction(int(f.numer.LC) if f.numer else 0, int(f.denom.LC))


def integer_linear(p: MPoly, variables: Sequence[str]) -> Optional[IntegerLinear]:
    """
    Detect p = r(a1*v1 + ... + an*vn) with a primitive integer direction.

    The partial derivatives must be proportional by rational constants.

    Args:
        p: Nonzero polynomial
        variables: Two or three variable names

    Returns:
        Optional[IntegerLinear]: The shape, verified by resubstitution
    """
    variables = tuple(variables)
    grads = [p.diff(poly_gen(v)) for v in variables]
    pivot = next((i for i, g in enumerate(grads) if g), None)
    if pivot is None:
        direction = tuple(1 if i == 0 else 0 for i in range(len(variables)))
        return IntegerLinear(variables, direction, (FIELD(p),))
    ratios = []
    for g in grads:
        ratio = _as_rational(FIELD(g) / FIELD(grads[pivot]))
        if ratio is None:
            return None
        ratios.append(ratio)
    direction = _primitive_direction(ratios)
    lead = next(i for i, a in enumerate(direction) if a)
    images = {v: FIELD.zero for v in variables}
    images[variables[lead]] = gen(variables[lead]) / direction[lead]
    coeffs = tuple(coefficients_in(substitute(FIELD(p), images), variables[lead]))
    shape = IntegerLinear(variables, direction, coeffs)
    if shape.value() != FIELD(p):
        return None
    return shape


def q_integer_linear(
    p: MPoly, variables: Sequence[str], signed: bool = False
) -> Optional[QIntegerLinear]:
    """
    Detect p = v^offset * r(v^direction), a monomial times a polynomial in one monomial.

    The projected support must lie on a line through lattice points. With
    ``signed`` the direction may mix positive and negative exponents, so
    ``x + y = y * (1 + x/y)`` is accepted; otherwise its entries must be
    nonnegative.
    """
    variables = tuple(variables)
    idxs = [INDEX[v] for v in variables]
    buckets: Dict[Tuple[int, ...], Dict[Tuple[int, ...], int]] = {}
    for monom, coeff in p.iterterms():
        key = tuple(monom[i] for i in idxs)
        rest = tuple(0 if i in idxs else e for i, e in enumerate(monom))
        buckets.setdefault(key, {})[rest] = coeff
    points = sorted(buckets)
    polys = {e: RING.from_dict(d) for e, d in buckets.items()}
    if len(points) == 1:
        return QIntegerLinear(variables, points[0], None, (polys[points[0]],))
    base = points[0]
    diff = [b - a for a, b in zip(base, points[1])]
    g = 0
    for d in diff:
        g = gcd(g, d)
    step = [d // g for d in diff]
    positions: Dict[Tuple[int, ...], int] = {}
    for e in points:
        delta = [b - a for a, b in zip(base, e)]
        k = None
        for d, s in zip(delta, step):
            if s:
                if d % s:
                    return None
                k = d // s
                break
        if k is None or any(d != k * s for d, s in zip(delta, step)):
            return None
        positions[e] = k
    if next(s for s in step if s) < 0:
        step = [-s for s in step]
        positions = {e: -k for e, k in positions.items()}
    if not signed and any(s < 0 for s in step):
        return None
    low = min(positions.values())
    offset = tuple(b + low * s for b, s in zip(base, step))
    coeffs = [RING.zero] * (max(positions.values()) - low + 1)
    for e, k in positions.items():
        coeffs[k - low] = polys[e]
    shape = QIntegerLinear(variables, offset, tuple(step), tuple(coeffs))
    if shape.value() != FIELD(p):
        return None
    return shape


def integer_affine_solve(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], unknowns: int
) -> Optional[Tuple[List[int], List[List[int]]]]:
    """
    All integer solutions of rows * u = rhs.

    Args:
        rows: Coefficient rows (rational entries)
        rhs: Right-hand side
        unknowns: Number of unknowns

    Returns:
        Optional pair (particular solution, basis of the kernel lattice)
    """
    if not rows:
        return [0] * unknowns, [[int(i == j) for j in range(unknowns)] for i in range(unknowns)]
    int_rows: List[List[int]] = []
    int_rhs: List[int] = []
    for row, b in zip(rows, rhs):
        values = [Fraction(v) for v in row] + [Fraction(b)]
        scale = 1
        for v in values:
            scale = scale * v.denominator // gcd(scale, v.denominator)
        int_rows.append([int(v * scale) for v in values[:-1]])
        int_rhs.append(int(values[-1] * scale))
    a, s, t = smith_normal_decomp(Matrix(int_rows), domain=ZZ)
    c = s * Matrix(int_rhs)
    rank = 0
    while rank < min(a.rows, a.cols) and a[rank, rank] != 0:
        rank += 1
    w = [0] * unknowns
    for i in range(rank):
        d = int(a[i, i])
        if int(c[i]) % d:
            return None
        w[i] = int(c[i]) // d
    if any(int(c[i]) for i in range(rank, a.rows)):
        return None
    particular = t * Matrix(w)
    kernel = [[int(t[i, j]) for i in range(unknowns)] for j in range(rank, unknowns)]
    return [int(v) for v in particular], kernel


def _embed(p: MPoly):
    return EXT.from_dict({m + (0, 0, 0): c for m, c in p.iterterms()})


def _equations(diff) -> List:
    buckets: Dict[Tuple[int, ...], Dict[Tuple[int, ...], object]] = {}
    for monom, coeff in diff.iterterms():
        buckets.setdefault(monom[:4], {})[monom[4:]] = coeff
    return [PARAMS.from_dict(d) for d in buckets.values()]


def _fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _total_degree(p) -> int:
    return max((sum(m) for m in p.itermonoms()), default=-1)


def _integer_roots(p) -> List[int]:
    roots = []
    _, factors = p.factor_list()
    for f, _ in factors:
        if _total_degree(f) != 1:
            continue
        a = _fraction(f.coeff(_PARAM_GENS[0]))
        if not a:
            continue
        root = -_fraction(f.const()) / a
        if root.denominator == 1:
            roots.append(int(root))
    return sorted(set(roots), key=lambda r: (abs(r), -r))


def shift_solutions(
    p1: MPoly, p2: MPoly, variables: Sequence[str]
) -> Optional[Tuple[List[int], List[List[int]]]]:
    """
    All integer vectors t with p1(v + t) = p2.

    Equations are collected layer by layer from the coefficients of
    p1(v + t) - p2; linear ones are solved over the integers and the
    parametrization is substituted back until every coefficient vanishes.

    Returns:
        Optional pair (particular solution, basis of the stabilizer lattice of p1)

    Raises:
        BoundExceededError: If only nonlinear equations in several parameters remain
    """
    variables = tuple(variables)
    count = len(variables)
    if count == 0:
        return ([], []) if p1 == p2 else None
    if any(degree(p1, v) != degree(p2, v) for v in variables):
        return None
    source, target = _embed(p1), _embed(p2)
    base = [0] * count
    basis = [[int(i == j) for j in range(count)] for i in range(count)]
    for _ in range(4 * count + 4):
        images = []
        for i, v in enumerate(variables):
            offset = EXT(base[i])
            for j, vec in enumerate(basis):
                offset += vec[i] * _EXT_GENS[4 + j]
            images.append((EXT.gens[INDEX[v]], EXT.gens[INDEX[v]] + offset))
        eqs = [e for e in _equations(source.compose(images) - target) if e]
        if not eqs:
            return base, basis
        if any(e.is_ground for e in eqs):
            return None
        linear = [e for e in eqs if _total_degree(e) <= 1]
        dim = len(basis)
        if linear:
            rows = [[_fraction(e.coeff(_PARAM_GENS[j])) for j in range(dim)] for e in linear]
            rhs = [-_fraction(e.const()) for e in linear]
            solved = integer_affine_solve(rows, rhs, dim)
            if solved is None:
                return None
            part, kernel = solved
            base = [b + sum(part[j] * basis[j][i] for j in range(dim)) for i, b in enumerate(base)]
            basis = [
                [sum(vec[j] * basis[j][i] for j in range(dim)) for i in range(count)]
                for vec in kernel
            ]
            continue
        if dim == 1:
            common = eqs[0]
            for e in eqs[1:]:
                common = common.gcd(e)
            roots = _integer_roots(common)
            if not roots:
                return None
            base = [b + roots[0] * basis[0][i] for i, b in enumerate(base)]
            basis = []
            continue
        raise BoundExceededError(
            f"nonlinear shift conditions for {format_poly(p1)} in {dim} parameters",
            "shift-equivalence",
        )
    raise VerificationError(f"shift equivalence of {format_poly(p1)} did not settle")


def _split_by(p: MPoly, variables: Sequence[str]) -> Dict[Tuple[int, ...], MPoly]:
    idxs = [INDEX[v] for v in variables]
    buckets: Dict[Tuple[int, ...], Dict[Tuple[int, ...], int]] = {}
    for monom, coeff in p.iterterms():
        key = tuple(monom[i] for i in idxs)
        rest = tuple(0 if i in idxs else e for i, e in enumerate(monom))
        buckets.setdefault(key, {})[rest] = coeff
    return {k: RING.from_dict(d) for k, d in buckets.items()}


def q_power_ratio(a: MPoly, b: MPoly) -> Optional[int]:
    """The integer r with a = q^r * b, or None."""
    if not a or not b:
        return None
    ratio = FIELD(a) / FIELD(b)
    num, den = ratio.numer, ratio.denom
    if len(num) != 1 or len(den) != 1:
        return None
    (m1, c1), = num.iterterms()
    (m2, c2), = den.iterterms()
    if c1 != 1 or c2 != 1 or any(m1[:3]) or any(m2[:3]):
        return None
    return m1[3] - m2[3]


def _top_coefficient(p: MPoly, variables: Sequence[str]) -> MPoly:
    parts = _split_by(p, variables)
    top = max(parts, key=lambda e: (sum(e), e))
    return parts[top]


def relation_space(
    p1: MPoly, p2: MPoly, group: GroupSpec
) -> Optional[Tuple[List[int], List[List[int]]]]:
    """
    All group relations psi(p1) = q^s * p2 as an affine lattice.

    Coordinates are the group exponents in x, y, z order followed by s.

    Returns:
        Optional pair (particular relation, kernel basis)
    """
    dilated = [v for v, k in group.generators if k == Kind.T]
    shifted = [v for v, k in group.generators if k == Kind.S]
    parts1, parts2 = _split_by(p1, dilated), _split_by(p2, dilated)
    if set(parts1) != set(parts2):
        return None
    powers: Dict[Tuple[int, ...], int] = {}
    for e, c in parts1.items():
        r = (
            q_power_ratio(_top_coefficient(c, shifted), _top_coefficient(parts2[e], shifted))
            if shifted
            else q_power_ratio(c, parts2[e])
        )
        if r is None:
            return None
        powers[e] = r
    # s - a.e = r_e for every exponent e of the dilated variables
    rows = [[Fraction(-x) for x in e] + [Fraction(1)] for e in powers]
    solved = integer_affine_solve(rows, [Fraction(r) for r in powers.values()], len(dilated) + 1)
    if solved is None:
        return None
    q_part, q_kernel = solved
    low = min(0, min(powers.values()))
    lhs = RING.zero
    rhs = RING.zero
    qq = poly_gen("q")
    for e, c in parts1.items():
        mono = RING.one
        for v, x in zip(dilated, e):
            mono *= poly_gen(v) ** x
        lhs += c * mono * qq ** (-low)
        rhs += parts2[e] * mono * qq ** (powers[e] - low)
    shifts = shift_solutions(lhs, rhs, shifted)
    if shifts is None:
        return None
    s_part, s_kernel = shifts
    order = group.variables

    def assemble(dvec: Sequence[int], svec: Sequence[int], s: int) -> List[int]:
        values = dict(zip(dilated, dvec))
        values.update(zip(shifted, svec))
        return [values[v] for v in order] + [s]

    particular = assemble(q_part[:-1], s_part, q_part[-1])
    kernel = [assemble(k[:-1], [0] * len(shifted), k[-1]) for k in q_kernel]
    kernel += [assemble([0] * len(dilated), k, 0) for k in s_kernel]
    return particular, kernel


def _verify(p1: MPoly, p2: MPoly, group: GroupSpec, exps: Dict[str, int], s: int) -> None:
    if group.act(FIELD(p1), exps) != Q**s * FIELD(p2):
        raise VerificationError(
            f"relation {exps}, q^{s} between {format_poly(p1)} and {format_poly(p2)} fails"
        )


def group_equiv(p1: MPoly, p2: MPoly, group: GroupSpec) -> Optional[GroupRelation]:
    """
    Find psi in the group and an integer s with psi(p1) = q^s * p2.

    Args:
        p1: Nonzero polynomial
        p2: Nonzero polynomial
        group: Generators acting on some of x, y, z

    Returns:
        Optional[GroupRelation]: A verified relation
    """
    space = relation_space(p1, p2, group)
    if space is None:
        return None
    particular, _ = space
    exps = dict(zip(group.variables, particular[:-1]))
    _verify(p1, p2, group, exps, particular[-1])
    return GroupRelation(tuple(sorted(exps.items())), particular[-1])


def shift_equiv(p1: MPoly, p2: MPoly, variables: Sequence[str]) -> Optional[Dict[str, int]]:
    """Shift vector v with p1(vars + v) = p2, or None."""
    if not _same_top(p1, p2, variables):
        return None
    group = GroupSpec.of(**{v: Kind.S for v in variables})
    relation = group_equiv(p1, p2, group)
    if relation is None or relation.s != 0:
        return None
    return relation.as_dict()


def _same_top(p1: MPoly, p2: MPoly, variables: Sequence[str]) -> bool:
    idxs = [INDEX[v] for v in variables]

    def top(p: MPoly) -> Dict[Tuple[int, ...], int]:
        deg = max(sum(m[i] for i in idxs) for m in p.itermonoms())
        return {m: c for m, c in p.iterterms() if sum(m[i] for i in idxs) == deg}

    return top(p1) == top(p2)


def q_shift_equiv(
    p1: MPoly, p2: MPoly, variables: Sequence[str]
) -> Optional[Tuple[Dict[str, int], int]]:
    """Exponents m and s with p1(q^m v) = q^s * p2, or None."""
    group = GroupSpec.of(**{v: Kind.T for v in variables})
    relation = group_equiv(p1, p2, group)
    if relation is None:
        return None
    return relation.as_dict(), relation.s


def stabilizer_lattice(d: MPoly, group: GroupSpec) -> List[Tuple[Dict[str, int], int]]:
    """
    Basis of all (psi, s) with psi(d) = q^s * d.

    Returns:
        List of (exponents, s) pairs; empty when only the identity stabilizes d
    """
    space = relation_space(d, d, group)
    if space is None:
        raise VerificationError(f"{format_poly(d)} is not equivalent to itself")
    _, kernel = space
    return [(dict(zip(group.variables, vec[:-1])), vec[-1]) for vec in kernel]


def extended_gcd(values: Sequence[int]) -> Tuple[int, List[int]]:
    g, coeffs = 0, [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g, coeffs = abs(v), [0] * len(values)
            coeffs[i] = 1 if v > 0 else -1
            continue
        a, b = g, abs(v)
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            quo = a // b
            a, b = b, a - quo * b
            x0, x1 = x1, x0 - quo * x1
            y0, y1 = y1, y0 - quo * y1
        coeffs = [c * x0 for c in coeffs]
        coeffs[i] += y0 * (1 if v > 0 else -1)
        g = a
    return g, coeffs


def restrict_stabilizer(
    basis: Sequence[Tuple[Dict[str, int], int]], p: MPoly, group: GroupSpec
) -> List[Tuple[Dict[str, int], int]]:
    """
    Sublattice of basis whose elements also map p to a q-power multiple of itself.

    The q-exponents of basis are kept; those of p are dropped.
    """
    if not basis:
        return []
    others = [exps for exps, _ in stabilizer_lattice(p, group)]
    variables = group.variables
    rows = [
        [Fraction(b[v]) for b, _ in basis] + [Fraction(-o[v]) for o in others] for v in variables
    ]
    solved = integer_affine_solve(rows, [Fraction(0)] * len(variables), len(basis) + len(others))
    result: List[Tuple[Dict[str, int], int]] = []
    for vec in solved[1] if solved is not None else []:
        coeffs = vec[: len(basis)]
        exps = {v: sum(c * b[v] for c, (b, _) in zip(coeffs, basis)) for v in variables}
        if any(exps.values()):
            result.append((exps, sum(c * s for c, (_, s) in zip(coeffs, basis))))
    return result


def lattice_invariance(
    d: MPoly, basis: Sequence[Tuple[Dict[str, int], int]], group: GroupSpec
) -> Optional[InvarianceWitness]:
    """The element of minimal positive x-exponent in a stabilizer sublattice of d."""
    m, coeffs = extended_gcd([exps["x"] for exps, _ in basis])
    if m == 0:
        return None
    exps = {v: sum(c * b[v] for c, (b, _) in zip(coeffs, basis)) for v in group.variables}
    s = sum(c * t for c, (_, t) in zip(coeffs, basis))
    _verify(d, d, group, exps, s)
    return InvarianceWitness(m=exps["x"], n=-exps.get("y", 0), k=-exps.get("z", 0), s=s)


def invariance_search(d: MPoly, group: GroupSpec) -> Optional[InvarianceWitness]:
    """
    Minimal m > 0 with theta_x^m(d) = q^s * theta_y^n * theta_z^k(d).

    The x-components of a stabilizer basis generate m*Z; a combination
    reaching the generator is built with the extended Euclidean algorithm.

    Args:
        d: Nonzero polynomial
        group: Group containing a generator on x

    Returns:
        Optional[InvarianceWitness]: Verified witness with minimal m
    """
    if group.kind_of("x") is None:
        raise ValueError("invariance needs a generator acting on x")
    witness = lattice_invariance(d, stabilizer_lattice(d, group), group)
    if witness is not None:
        logger.debug(f"invariance of {format_poly(d)} under {group}: {witness}")
    return witness


def orbit_partition(factors: Sequence[MPoly], group: GroupSpec) -> List[Orbit]:
    """
    Partition factors into orbits under the group.

    The smallest factor in the fixed term order represents its orbit; each
    member records exponents and the q-power with member = scalar * psi(rep).
    """
    blocks: List[Tuple[MPoly, List[OrbitMember]]] = []
    for p in sorted({normalize_poly(f) for f in factors}, key=poly_key):
        for rep, members in blocks:
            relation = group_equiv(rep, p, group)
            if relation is not None:
                members.append(OrbitMember(p, relation.exponents, Q ** (-relation.s)))
                break
        else:
            identity = tuple((v, 0) for v in group.variables)
            blocks.append((p, [OrbitMember(p, identity, FIELD.one)]))
    return [Orbit(rep, tuple(members)) for rep, members in blocks]


def rational_separable(r: RatFun) -> Optional[Tuple[MPoly, MPoly]]:
    """
    Split the denominator of r into an x-only part times a y-only part.

    Returns:
        Optional pair (b1 free of y, c1 free of x)
    """
    den = r.denom
    b1 = content(den, "y")
    c1 = den.exquo(b1)
    if not free_of(c1, "x"):
        return None
    return normalize_poly(b1), normalize_poly(c1)


def _specialize(p: MPoly, var: str, point: Dict[str, int], keep_q: bool) -> Dict[Tuple[int, ...], int]:
    idx = INDEX[var]
    terms: Dict[Tuple[int, ...], int] = {}
    for monom, coeff in p.iterterms():
        value = int(coeff)
        for name, e in zip(GENERATORS, monom):
            if name == var or (keep_q and name == "q") or not e:
                continue
            value *= point[name] ** e
        key = (monom[idx], monom[3]) if keep_q else (monom[idx],)
        terms[key] = terms.get(key, 0) + value
    return {k: v for k, v in terms.items() if v}


def _specialization_keeps_degree(special: Dict[Tuple[int, ...], int], p: MPoly, var: str) -> bool:
    return max((k[0] for k in special), default=-1) == degree(p, var)


def shift_dispersion(a: MPoly, b: MPoly, var: str) -> List[int]:
    """
    All integers k with gcd(a, b(var + k)) of positive degree in var.

    Candidates come from the integer roots of a resultant at a sample
    point of the other variables; each is then checked exactly.
    """
    if degree(a, var) <= 0 or degree(b, var) <= 0:
        return []
    for point in SAMPLE_POINTS:
        sa, sb = _specialize(a, var, point, False), _specialize(b, var, point, False)
        if not (_specialization_keeps_degree(sa, a, var) and _specialization_keeps_degree(sb, b, var)):
            continue
        fa = _SHIFTED.from_dict({(e, 0): c for (e,), c in sa.items()})
        fb = _SHIFTED.from_dict({(e, 0): c for (e,), c in sb.items()}).compose(_T, _T + _K)
        res = fa.resultant(fb)
        if not res:
            continue
        candidates = set()
        _, factors = res.factor_list()
        for f, _ in factors:
            if f.degree() == 1:
                terms = dict(f.iterterms())
                c1, c0 = int(terms[(1,)]), int(terms.get((0,), 0))
                if c0 % c1 == 0:
                    candidates.add(-c0 // c1)
        image = FIELD(b)
        return sorted(
            k for k in candidates
            if degree(gcd_mpoly(a, shift(image, var, k).numer), var) > 0
        )
    raise BoundExceededError(f"no usable sample point for {format_poly(a)}", "dispersion")


def q_dispersion(a: MPoly, b: MPoly, var: str) -> List[int]:
    """
    All integers k with gcd(a, b(q^k var)) of positive degree in var.

    Both polynomials must have a nonzero constant term in var.
    """
    if degree(a, var) <= 0 or degree(b, var) <= 0:
        return []
    for point in SAMPLE_POINTS:
        sa, sb = _specialize(a, var, point, True), _specialize(b, var, point, True)
        if not (_specialization_keeps_degree(sa, a, var) and _specialization_keeps_degree(sb, b, var)):
            continue
        fa = _DILATED.from_dict({(e, 0, j): c for (e, j), c in sa.items()})
        fb = _DILATED.from_dict({(e, 0, j): c for (e, j), c in sb.items()}).compose(_TD, _W * _TD)
        res = fa.resultant(fb)
        if not res:
            continue
        # roots w = q^k show up as factors w*q^i - q^j
        candidates = set()
        _, factors = res.factor_list()
        for f, _ in factors:
            terms = dict(f.iterterms())
            if len(terms) != 2:
                continue
            (m1, c1), (m2, c2) = sorted(terms.items(), reverse=True)
            if m1[0] == 1 and m2[0] == 0 and c1 == -c2:
                candidates.add(m2[1] - m1[1])
        image = FIELD(b)
        return sorted(
            k for k in candidates
            if degree(gcd_mpoly(a, q_shift(image, var, k).numer), var) > 0
        )
    raise BoundExceededError(f"no usable sample point for {format_poly(a)}", "dispersion")


def dispersion(a: MPoly, b: MPoly, var: str, kind: Kind) -> List[int]:
    """Shift or q-shift dispersion set depending on ``kind``."""
    if kind == Kind.S:
        return shift_dispersion(a, b, var)
    if kind == Kind.T:
        return q_dispersion(a, b, var)
    raise ValueError("dispersion needs a shift or a q-shift")

