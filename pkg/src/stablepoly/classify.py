"""Closed-form factorization patterns for the small shapes the families need.

* a x^2 + b x + c over F_{2^k}: number of roots from an absolute trace.
* x^3 + a x + b over F_{2^k}: trace test plus cube tests on the roots of
  x^2 + b x + a^3.
* x^4 - a for Q = 1 mod 4: irreducible iff a is a non-square.
* x^4 + c x + d over F_{3^k}: read off from the roots of the resolvent
  x^3 - d x - c^2 and a few quadratic characters.
* discriminant parity: for squarefree f with r irreducible factors,
  r = deg f (mod 2) iff disc(f) is a square.

Every classifier works at any tower level; the test-suite cross-checks each
against ``factor_pattern``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DegreeUnsupported,
    EvenCharacteristic,
    NotSquarefree,
    WrongResidueClass,
    ZeroConstantTerm,
    ZeroLeadingCoefficient,
    ZeroLinearCoefficient,
)
from .gftower import FieldDescriptor, FieldElement, is_cube, is_square, power, trace
from .polyring import FactorPattern, Poly, discriminant, factor_pattern, is_squarefree, roots_in_field

EXHAUSTIVE_SOLVE_LIMIT = 1 << 12

SPLITS = FactorPattern(((1, 1), (1, 1), (1, 1)))
LINEAR_QUADRATIC = FactorPattern(((1, 1), (2, 1)))
IRREDUCIBLE_CUBIC = FactorPattern(((3, 1),))


def _abs_trace_bit(e: FieldElement) -> int:
    return int(trace(e, 0))


def _field_bits(e: FieldElement) -> int:
    return e.desc.degree(e.level)


# ---------------------------------------------------------------------------
# characteristic-2 quadratics


def _trace_one_element(desc: FieldDescriptor, level: int) -> FieldElement:
    """First element in canonical order with absolute trace 1."""
    for n in range(1, desc.cardinality(level)):
        e = desc.from_index(n, level)
        if _abs_trace_bit(e) == 1:
            return e
    raise ArithmeticError("no element of trace one")


def artin_schreier_root(c: FieldElement) -> FieldElement:
    """A solution z of z^2 + z = c in F_{2^k}; requires Tr(c) = 0.

    With theta of trace 1, z = sum_{i=1}^{k-1} (theta + ... + theta^(2^(i-1))) c^(2^i)
    satisfies z^2 + z = c + theta Tr(c). For odd k, theta = 1 gives the half-trace.
    """
    k = _field_bits(c)
    desc, level = c.desc, c.level
    theta = desc.one(level) if k % 2 else _trace_one_element(desc, level)
    z = desc.zero(level)
    theta_sum = desc.zero(level)
    theta_pow = theta
    c_pow = c
    for _ in range(1, k):
        theta_sum = theta_sum + theta_pow
        theta_pow = theta_pow * theta_pow
        c_pow = c_pow * c_pow
        z = z + theta_sum * c_pow
    return z


def char2_quadratic_solutions(a: FieldElement, b: FieldElement, c: FieldElement) -> list[FieldElement]:
    """Solutions of a x^2 + b x + c = 0 in F_{2^k}, sorted canonically.

    b = 0 gives the unique square root of c/a; otherwise there are two
    solutions when Tr(a c / b^2) = 0 and none when it is 1.
    """
    if a.desc.p != 2:
        raise ValueError("characteristic-2 solver called over odd characteristic")
    if a.is_zero():
        raise ZeroLeadingCoefficient("leading coefficient must be nonzero")
    desc, level = a.desc, a.level
    q = desc.cardinality(level)
    if b.is_zero():
        return [power(c / a, q // 2)]
    t = a * c / (b * b)
    if _abs_trace_bit(t):
        return []
    if q <= EXHAUSTIVE_SOLVE_LIMIT:
        return roots_in_field(Poly.from_elements([c, b, a]))
    z = artin_schreier_root(t)
    x = b / a * z
    sols = [x, x + b / a]
    return sorted(sols, key=lambda e: e.index())


def char2_quadratic_count(a: FieldElement, b: FieldElement, c: FieldElement) -> int:
    """Number of solutions from the trace test alone."""
    if a.is_zero():
        raise ZeroLeadingCoefficient("leading coefficient must be nonzero")
    if b.is_zero():
        return 1
    return 0 if _abs_trace_bit(a * c / (b * b)) else 2


# ---------------------------------------------------------------------------
# cubic trinomials in characteristic 2


def is_cube_over_quadratic(t: FieldElement, conj: FieldElement, q: int) -> bool:
    """Cube test for t in F_{Q^2} with Q = 2 mod 3, given its conjugate t^Q.

    t is a cube iff t^((Q^2-1)/3) = 1. Writing w = t^(Q-1) = conj/t, that
    power is w^((Q+1)/3), which halves the exponent length.
    """
    if t.is_zero():
        return True
    if q % 3 != 2:
        raise ValueError("shortcut needs Q = 2 mod 3")
    w = conj / t
    return power(w, (q + 1) // 3).is_one()


@dataclass(frozen=True)
class CubicTrinomialVerdict:
    pattern: FactorPattern
    trace_matches: bool
    roots_level: str  # "base" or "quadratic extension"
    t1: FieldElement | None = None
    t2: FieldElement | None = None
    cubes: tuple[bool, ...] = ()


def cubic_trinomial_verdict(a: FieldElement, b: FieldElement, both_roots: bool = True) -> CubicTrinomialVerdict:
    """Factorization pattern of x^3 + a x + b over F_{2^k} from traces and cube tests."""
    if a.desc.p != 2:
        raise ValueError("cubic trinomial criterion is for characteristic 2")
    if b.is_zero():
        raise ZeroConstantTerm("x^3 + a x has the factor x; use factor_pattern")
    desc, level = a.desc, a.level
    k = _field_bits(a)
    q = desc.cardinality(level)
    one = desc.one(level)
    a3 = a * a * a
    tr_lhs = _abs_trace_bit(a3 / (b * b))
    tr_one = k % 2
    if tr_lhs != tr_one:
        return CubicTrinomialVerdict(LINEAR_QUADRATIC, False, "")
    if a.is_zero():
        # roots of x^2 + b x are 0 and b; 0 is trivially a cube, so only b decides
        t1, t2 = b, desc.zero(level)
        cubes = (is_cube(b) if k % 2 == 0 else True,)
        if k % 2:
            # odd k has Tr(0) = 0 != Tr(1); unreachable, kept for clarity
            return CubicTrinomialVerdict(LINEAR_QUADRATIC, False, "")
        pattern = SPLITS if cubes[0] else IRREDUCIBLE_CUBIC
        return CubicTrinomialVerdict(pattern, True, "base", t1, t2, cubes)
    if k % 2 == 0:
        t1, t2 = char2_quadratic_solutions(one, b, a3)
        cubes = (is_cube(t1), is_cube(t2)) if both_roots else (is_cube(t1),)
        where = "base"
    else:
        # x^2 + b x + a^3 is irreducible here; adjoin one root
        ext = desc.truncate(level).extend(Poly.from_elements([a3, b, one]), check=False)
        top = ext.height
        t1 = ext.gen(top)
        bb = b.with_descriptor(ext).embed(top, ext) if level == desc.height else b.embed(top, ext)
        t2 = bb - t1
        cubes = (is_cube_over_quadratic(t1, t2, q),)
        if both_roots:
            cubes += (is_cube_over_quadratic(t2, t1, q),)
        where = "quadratic extension"
    if len(set(cubes)) != 1:
        raise ArithmeticError("roots of x^2 + b x + a^3 disagree on cubicity")
    pattern = SPLITS if cubes[0] else IRREDUCIBLE_CUBIC
    return CubicTrinomialVerdict(pattern, True, where, t1, t2, cubes)


def cubic_trinomial_pattern(a: FieldElement, b: FieldElement) -> FactorPattern:
    return cubic_trinomial_verdict(a, b).pattern


# ---------------------------------------------------------------------------
# binomial quartics and the parity law


def quartic_binomial_irreducible(a: FieldElement) -> bool:
    """x^4 - a over a field with Q = 1 mod 4: irreducible iff a is a non-square."""
    q = a.desc.cardinality(a.level)
    if q % 4 != 1:
        raise WrongResidueClass(f"field size {q} is not 1 mod 4")
    if a.is_zero():
        raise ValueError("a must be nonzero")
    return not is_square(a)


def parity_check(f: Poly) -> bool:
    """Whether (number of irreducible factors = deg f mod 2) <=> disc(f) square holds for f."""
    if f.desc.p == 2:
        raise EvenCharacteristic("parity law needs odd characteristic")
    if not 2 <= f.degree <= 4:
        raise DegreeUnsupported(f"parity check needs degree 2..4, got {f.degree}")
    if not is_squarefree(f):
        raise NotSquarefree("parity law needs a squarefree polynomial")
    r = factor_pattern(f).count
    return ((r - f.degree) % 2 == 0) == is_square(discriminant(f))


# ---------------------------------------------------------------------------
# quartics x^4 + c x + d in characteristic 3

SPLITS_LINEAR = "SplitsLinear"
TWO_QUADRATICS = "TwoIrreducibleQuadratics"
UNIQUE_ROOT = "UniqueRoot"
EXACTLY_TWO_ROOTS = "ExactlyTwoRoots"
IRREDUCIBLE = "Irreducible"
INSEPARABLE = "Inseparable"

CASE_PATTERNS = {
    SPLITS_LINEAR: FactorPattern(((1, 1),) * 4),
    TWO_QUADRATICS: FactorPattern(((2, 1), (2, 1))),
    UNIQUE_ROOT: FactorPattern(((1, 1), (3, 1))),
    EXACTLY_TWO_ROOTS: FactorPattern(((1, 1), (1, 1), (2, 1))),
    IRREDUCIBLE: FactorPattern(((4, 1),)),
    INSEPARABLE: FactorPattern(((1, 1), (1, 3))),
}


@dataclass(frozen=True)
class QuarticChar3Verdict:
    """Case of x^4 + c x + d with the resolvent data that decided it.

    ``roots`` are the resolvent roots in the field, ``r`` a square root of
    the square root used for the quadratic split (when one exists) and
    ``residues`` the quadratic characters that were consulted.
    """

    case: str
    c: FieldElement
    d: FieldElement
    roots: tuple[FieldElement, ...] = ()
    r: FieldElement | None = None
    residues: dict = field(default_factory=dict)

    @property
    def pattern(self) -> FactorPattern:
        return CASE_PATTERNS[self.case]

    def quartic(self) -> Poly:
        z = self.c.desc.zero(self.c.level)
        return Poly.from_elements([self.d, self.c, z, z, self.c.desc.one(self.c.level)])


def resolvent_cubic(c: FieldElement, d: FieldElement) -> Poly:
    """x^3 - d x - c^2."""
    z = c.desc.zero(c.level)
    return Poly.from_elements([-(c * c), -d, z, c.desc.one(c.level)])


def quadratic_split(c: FieldElement, r: FieldElement) -> tuple[Poly, Poly]:
    """(x^2 + r x + c/r - r^2, x^2 - r x - c/r - r^2)."""
    one = c.desc.one(c.level)
    s = c / r
    r2 = r * r
    return Poly.from_elements([s - r2, r, one]), Poly.from_elements([-s - r2, -r, one])


def _square_root(u: FieldElement) -> FieldElement:
    roots = roots_in_field(Poly.from_elements([-u, u.desc.zero(u.level), u.desc.one(u.level)]))
    if not roots:
        raise ArithmeticError("element has no square root")
    return roots[0]


def quartic_char3_classify(c: FieldElement, d: FieldElement) -> QuarticChar3Verdict:
    """Factorization case of x^4 + c x + d over F_{3^k} from its resolvent cubic."""
    if c.desc.p != 3:
        raise ValueError("this classifier is for characteristic 3")
    if c.is_zero():
        raise ZeroLinearCoefficient("c = 0 is outside the resolvent criterion; use factor_pattern")
    h = QuarticChar3Verdict(INSEPARABLE, c, d).quartic()
    if d.is_zero():
        # x^4 + c x = x (x + c^(1/3))^3
        cube_root = power(c, c.desc.cardinality(c.level) // 3)
        return QuarticChar3Verdict(INSEPARABLE, c, d, (), cube_root, {})
    g = resolvent_cubic(c, d)
    roots = tuple(roots_in_field(g))
    if not roots:
        return QuarticChar3Verdict(UNIQUE_ROOT, c, d, roots)
    squares = [is_square(u) for u in roots]
    if len(roots) == 1:
        u = roots[0]
        if not squares[0]:
            return QuarticChar3Verdict(IRREDUCIBLE, c, d, roots, None, {"root_square": False})
        r = _square_root(u)
        _check_split(h, c, r)
        stated = not is_square(r ** 4 - (c * c) / (r * r))
        m_sq = is_square(-(r * r) - c / r)
        p_sq = is_square(-(r * r) + c / r)
        exactly_one = m_sq != p_sq
        if stated != exactly_one:
            raise ArithmeticError("the two forms of the two-root condition disagree")
        if not exactly_one:
            raise ArithmeticError("single square resolvent root without exactly one square discriminant")
        return QuarticChar3Verdict(
            EXACTLY_TWO_ROOTS, c, d, roots, r,
            {"root_square": True, "minus": m_sq, "plus": p_sq, "r4_minus_c2r-2_nonsquare": stated},
        )
    if len(roots) != 3:
        raise ArithmeticError("separable resolvent cannot have exactly two roots")
    sq_roots = [u for u, s in zip(roots, squares) if s]
    if len(sq_roots) == 3:
        res = {}
        for j, u in enumerate(roots):
            r = _square_root(u)
            _check_split(h, c, r)
            res[j] = (is_square(-(r * r) - c / r), is_square(-(r * r) + c / r))
        if all(a and b for a, b in res.values()):
            r0 = _square_root(roots[0])
            return QuarticChar3Verdict(SPLITS_LINEAR, c, d, roots, r0, {"discriminants": res})
    elif len(sq_roots) == 1:
        r = _square_root(sq_roots[0])
        _check_split(h, c, r)
        m_sq = is_square(-(r * r) - c / r)
        p_sq = is_square(-(r * r) + c / r)
        if not m_sq and not p_sq:
            return QuarticChar3Verdict(
                TWO_QUADRATICS, c, d, roots, r, {"root_squares": tuple(squares), "minus": m_sq, "plus": p_sq}
            )
    raise ArithmeticError("resolvent data matches none of the five cases")


def _check_split(h: Poly, c: FieldElement, r: FieldElement) -> None:
    """A square resolvent root r^2 must give h = (x^2 + r x + c/r - r^2)(x^2 - r x - c/r - r^2)."""
    left, right = quadratic_split(c, r)
    if left * right != h:
        raise ArithmeticError("quadratic split witness does not re-expand to the quartic")


def unique_nonsquare_resolvent_root(c: FieldElement, d: FieldElement) -> tuple[int, FieldElement | None, bool]:
    """(number of distinct resolvent roots, the root if unique, whether it is a non-square).

    Root count is deg gcd(x^Q - x, g), so this works in fields far beyond
    exhaustive reach.
    """
    from .polyring import FrobeniusPowers, gcd

    g = resolvent_cubic(c, d)
    x = Poly.x(c.desc, c.level)
    lin = gcd(FrobeniusPowers(g)[1] - x, g)
    count = lin.degree
    if count != 1:
        return count, None, False
    root = -lin.coeff(0)
    return 1, root, not is_square(root)
