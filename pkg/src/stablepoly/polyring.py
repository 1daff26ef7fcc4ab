"""Dense univariate polynomials over a tower level.

Coefficients are stored as one array of shape ``(deg + 1, *level_shape)`` so a
product of polynomials is a single multivariate convolution followed by the
tower reduction, exactly as for field elements.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import DegreeOverflow, DegreeUnsupported, DivisionByZero, LevelMismatch, ParseError
from .gftower import FieldDescriptor, FieldElement, _inv_raw, _mul_raw, _prime_factors

DEFAULT_DEGREE_CAP = 3 ** 12
EXHAUSTIVE_ROOT_LIMIT = 1 << 16


def _item_offsets(text: str) -> list[int]:
    """Character offset where each top-level comma-separated item starts."""
    offsets, depth = [0], 0
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            offsets.append(i + 1)
    return offsets


class Poly:
    """Polynomial with coefficients in one level of a tower, ascending order."""

    __slots__ = ("desc", "level", "c")

    def __init__(self, desc: FieldDescriptor, level: int, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs) % desc.p
        shape = desc.shape(level)
        if coeffs.shape[1:] != shape:
            raise LevelMismatch(f"coefficient shape {coeffs.shape[1:]} does not match level {level}")
        n = coeffs.shape[0]
        while n and not coeffs[n - 1].any():
            n -= 1
        coeffs = coeffs[:n]
        coeffs.setflags(write=False)
        self.desc = desc
        self.level = level
        self.c = coeffs

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_elements(cls, elems: Sequence[FieldElement]) -> "Poly":
        if not elems:
            raise ValueError("need at least one coefficient to fix the level")
        e0 = elems[0]
        for e in elems[1:]:
            e0._check(e)
        desc = max((e.desc for e in elems), key=lambda d: d.height)
        return cls(desc, e0.level, np.stack([e.arr for e in elems]))

    @classmethod
    def from_ints(cls, desc: FieldDescriptor, values: Iterable[int], level: int | None = None) -> "Poly":
        level = desc.height if level is None else level
        values = [int(v) % desc.p for v in values]
        arr = np.zeros((len(values),) + desc.shape(level), dtype=desc.dtype)
        for i, v in enumerate(values):
            arr[(i,) + (0,) * level] = v
        return cls(desc, level, arr)

    @classmethod
    def parse(cls, desc: FieldDescriptor, text: str, level: int | None = None) -> "Poly":
        """Parse ``c0,c1,...`` with each coefficient in the nested-list element encoding."""
        import json

        level = desc.height if level is None else level
        try:
            data = json.loads("[" + text + "]")
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad polynomial {text!r}: {exc.msg}", min(max(exc.pos - 1, 0), len(text))) from None
        if not data:
            raise ParseError("empty polynomial", 0)
        elems = []
        for i, item in enumerate(data):
            try:
                elems.append(desc.element(item, level))
            except (ParseError, ValueError) as exc:
                pos = _item_offsets(text)[i]
                raise ParseError(f"coefficient {i}: {exc}", pos) from None
        return cls.from_elements(elems)

    @classmethod
    def x(cls, desc: FieldDescriptor, level: int | None = None) -> "Poly":
        level = desc.height if level is None else level
        return cls.monomial(desc.one(level), 1)

    @classmethod
    def monomial(cls, coef: FieldElement, k: int) -> "Poly":
        arr = np.zeros((k + 1,) + coef.arr.shape, dtype=coef.desc.dtype)
        arr[k] = coef.arr
        return cls(coef.desc, coef.level, arr)

    @classmethod
    def constant(cls, coef: FieldElement) -> "Poly":
        return cls(coef.desc, coef.level, coef.arr[None, ...].copy())

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        return self.c.shape[0] - 1

    def is_zero(self) -> bool:
        return self.c.shape[0] == 0

    def coeff(self, i: int) -> FieldElement:
        if 0 <= i < self.c.shape[0]:
            return FieldElement(self.desc, self.level, self.c[i].copy())
        return self.desc.zero(self.level)

    def coeffs(self) -> list[FieldElement]:
        return [self.coeff(i) for i in range(self.c.shape[0])]

    def coeffs_array(self) -> np.ndarray:
        return self.c

    def lc(self) -> FieldElement:
        if self.is_zero():
            return self.desc.zero(self.level)
        return self.coeff(self.degree)

    def is_monic(self) -> bool:
        return not self.is_zero() and self.lc().is_one()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.c[-1]
        if self.level == 0:
            inv = pow(int(lc), -1, self.desc.p)
            return Poly(self.desc, 0, self.c * inv)
        return self.scale_raw(_inv_raw(self.desc, self.level, lc))

    def _zero_like(self) -> "Poly":
        return Poly(self.desc, self.level, np.zeros((0,) + self.desc.shape(self.level), dtype=self.desc.dtype))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.level != self.level or not self.desc.compatible(other.desc, self.level):
                raise LevelMismatch(f"polynomials over levels {self.level} and {other.level}")
            return other
        if isinstance(other, FieldElement):
            if other.level != self.level or not self.desc.compatible(other.desc, self.level):
                raise LevelMismatch("constant lives in a different level")
            return Poly.constant(other)
        if isinstance(other, int):
            return Poly.constant(self.desc.scalar(other, self.level))
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def _desc_with(self, other: "Poly") -> FieldDescriptor:
        return self.desc if self.desc.height >= other.desc.height else other.desc

    # -- ring operations ----------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(self.c.shape[0], other.c.shape[0])
        out = np.zeros((n,) + self.c.shape[1:], dtype=self.desc.dtype)
        out[: self.c.shape[0]] += self.c
        out[: other.c.shape[0]] += other.c
        return Poly(self._desc_with(other), self.level, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.desc, self.level, -self.c)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return Poly(self.desc, self.level, self.c * (other % self.desc.p))
        if isinstance(other, FieldElement):
            self._coerce(other)
            return self.scale_raw(other.arr)
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return self._zero_like()
        desc = self._desc_with(other)
        if self.level == 0:
            prod = K.conv(self.c, other.c, desc.p)
            return Poly(desc, 0, prod % desc.p)
        prod = K.conv(self.c, other.c, desc.p)
        return Poly(desc, self.level, K.reduce_levels(prod, desc._reducers[: self.level], desc.p, lead=1))

    __rmul__ = __mul__

    def scale_raw(self, arr: np.ndarray) -> "Poly":
        """Multiply every coefficient by the level element stored in ``arr``."""
        if self.is_zero():
            return self
        if self.level == 0:
            return Poly(self.desc, 0, self.c * int(arr))
        prod = K.conv(self.c, arr[None, ...], self.desc.p)
        return Poly(self.desc, self.level, K.reduce_levels(prod, self.desc._reducers[: self.level], self.desc.p, lead=1))

    def __pow__(self, k: int) -> "Poly":
        result = Poly.constant(self.desc.one(self.level))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        return poly_divmod(self, self._coerce(other))

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElement)):
            other = self._coerce(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return (
            self.level == other.level
            and self.desc.compatible(other.desc, self.level)
            and np.array_equal(self.c, other.c)
        )

    def __hash__(self) -> int:
        return hash((self.level, self.c.tobytes()))

    def __call__(self, x):
        """Evaluate at a field element, or compose with another polynomial."""
        if isinstance(x, Poly):
            return compose(self, x)
        if isinstance(x, int):
            x = self.desc.scalar(x, self.level)
        if x.level != self.level:
            raise LevelMismatch("evaluation point lives in a different level")
        desc = self.desc if self.desc.height >= x.desc.height else x.desc
        if self.is_zero():
            return desc.zero(self.level)
        acc = self.c[-1]
        for i in range(self.degree - 1, -1, -1):
            acc = (_mul_raw(desc, self.level, acc, x.arr) + self.c[i]) % desc.p
        return FieldElement(desc, self.level, np.asarray(acc))

    def derivative(self) -> "Poly":
        if self.degree < 1:
            return self._zero_like()
        k = np.arange(1, self.degree + 1).reshape((-1,) + (1,) * self.level)
        return Poly(self.desc, self.level, self.c[1:] * k)

    def embed(self, level: int, desc: FieldDescriptor | None = None) -> "Poly":
        """The same polynomial with coefficients viewed in a higher level."""
        desc = desc or self.desc
        if level == self.level and desc is self.desc:
            return self
        if not self.desc.compatible(desc, self.level):
            raise LevelMismatch("descriptors disagree below the coefficient level")
        if level < self.level:
            return Poly.from_elements([e.embed(level, desc) for e in self.coeffs()])
        arr = np.zeros((self.c.shape[0],) + desc.shape(level), dtype=desc.dtype)
        arr[(slice(None),) + (0,) * (level - self.level)] = self.c
        return Poly(desc, level, arr)

    def encode(self) -> str:
        return ",".join(self.coeff(i).encode() for i in range(self.c.shape[0])) or "0"

    def __repr__(self) -> str:
        return f"Poly({self.encode()}, level={self.level})"

    def pretty(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c.is_zero():
                continue
            cs = c.encode()
            if i == 0:
                terms.append(cs)
            else:
                mon = "x" if i == 1 else f"x^{i}"
                terms.append(mon if c.is_one() else f"{cs}*{mon}")
        return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------
# arithmetic helpers

def poly_divmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder of f by g (long division)."""
    if g.is_zero():
        raise DivisionByZero("polynomial division by zero")
    desc = f._desc_with(g)
    p = desc.p
    level = f.level
    dg = g.degree
    if f.degree < dg:
        return f._zero_like(), f
    r = np.array(f.c, dtype=desc.dtype)
    nq = f.degree - dg + 1
    q = np.zeros((nq,) + r.shape[1:], dtype=desc.dtype)
    if level == 0:
        ginv = pow(int(g.c[-1]), -1, p)
        gc = g.c.astype(desc.dtype)
        for i in range(f.degree, dg - 1, -1):
            c = int(r[i]) % p
            if c == 0:
                continue
            t = c * ginv % p
            q[i - dg] = t
            r[i - dg: i + 1] = (r[i - dg: i + 1] - t * gc) % p
        return Poly(desc, 0, q), Poly(desc, 0, r[:dg])
    monic = g.c[-1].sum() == 1 and g.c[-1][(0,) * level] == 1
    ginv = None if monic else _inv_raw(desc, level, g.c[-1])
    # coefficients lying in the prime field scale without a tower reduction
    origin = (0,) * level
    gterms = []
    for j in range(dg):
        cj = g.c[j]
        if not cj.any():
            continue
        scalar = int(cj[origin]) if np.count_nonzero(cj) == 1 and cj[origin] else None
        gterms.append((j, scalar, cj))
    for i in range(f.degree, dg - 1, -1):
        c = r[i] % p
        if not c.any():
            continue
        t = c if monic else _mul_raw(desc, level, c, ginv)
        q[i - dg] = t
        r[i] = 0
        for j, scalar, cj in gterms:
            prod = t * scalar if scalar is not None else _mul_raw(desc, level, t, cj)
            r[i - dg + j] = (r[i - dg + j] - prod) % p
    return Poly(desc, level, q), Poly(desc, level, r[:dg])


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor (zero if both are zero)."""
    f = f._coerce(f)
    g = f._coerce(g)
    while not g.is_zero():
        f, g = g, poly_divmod(f, g)[1]
    return f.monic()


def derivative(f: Poly) -> Poly:
    return f.derivative()


def compose(f: Poly, g: Poly) -> Poly:
    """f(g(x)) by Horner's rule."""
    g = f._coerce(g)
    if f.is_zero():
        return f
    acc = Poly.constant(f.coeff(f.degree))
    for i in range(f.degree - 1, -1, -1):
        acc = acc * g + f.coeff(i)
    return acc


def iterate(f: Poly, n: int, cap: int = DEFAULT_DEGREE_CAP) -> Poly:
    """The n-th iterate f(f(...f(x))); iterate(f, 0) is x."""
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    if max(f.degree, 1) ** n > cap:
        raise DegreeOverflow(f"degree {f.degree}^{n} exceeds the cap {cap}")
    acc = Poly.x(f.desc, f.level)
    for _ in range(n):
        acc = compose(f, acc)
    return acc


def mulmod(a: Poly, b: Poly, m: Poly) -> Poly:
    return poly_divmod(a * b, m)[1]


def powmod(a: Poly, k: int, m: Poly) -> Poly:
    """a^k mod m by square-and-multiply; k is an unbounded natural."""
    result = poly_divmod(Poly.constant(a.desc.one(a.level)), m)[1]
    if k == 0:
        return result
    base = poly_divmod(a, m)[1]
    result = base
    for bit in bin(k)[3:]:
        result = mulmod(result, result, m)
        if bit == "1":
            result = mulmod(result, base, m)
    return result


def compose_mod(h: Poly, g: Poly, m: Poly) -> Poly:
    """h(g) mod m by Horner's rule."""
    if h.is_zero():
        return h
    acc = Poly.constant(h.coeff(h.degree))
    for i in range(h.degree - 1, -1, -1):
        acc = poly_divmod(acc * g + h.coeff(i), m)[1]
    return acc


class FrobeniusPowers:
    """x^(Q^j) mod f for the field size Q of f's coefficient level.

    The Q-power map is an algebra endomorphism of F_Q[x]/(f), so
    x^(Q^(j+1)) = (x^(Q^j))(x^Q) mod f; that composition is used unless
    raising to the Q-th power directly is cheaper (small Q).
    """

    def __init__(self, f: Poly):
        self.f = f
        self.q = f.desc.cardinality(f.level)
        x = Poly.x(f.desc, f.level)
        self._x = poly_divmod(x, f)[1]
        self._pows = [self._x]
        self._direct = self.q.bit_length() <= 2 * max(f.degree - 1, 1)

    def __getitem__(self, j: int) -> Poly:
        while len(self._pows) <= j:
            prev = self._pows[-1]
            if self._direct:
                nxt = powmod(prev, self.q, self.f)
            elif len(self._pows) == 1:
                nxt = powmod(self._x, self.q, self.f)
            else:
                nxt = compose_mod(prev, self._pows[1], self.f)
            self._pows.append(nxt)
        return self._pows[j]


def is_irreducible(f: Poly) -> bool:
    """Rabin's test over f's coefficient field F_Q.

    f of degree k is irreducible iff x^(Q^k) = x mod f and
    gcd(x^(Q^(k/l)) - x, f) = 1 for every prime l dividing k.
    """
    k = f.degree
    if k < 1:
        raise DegreeUnsupported("irreducibility needs degree >= 1")
    if k == 1:
        return True
    f = f.monic()
    frob = FrobeniusPowers(f)
    x = frob._x
    for ell in _prime_factors(k):
        if gcd(frob[k // ell] - x, f).degree != 0:
            return False
    return frob[k] == x


def _element_table(desc: FieldDescriptor, level: int) -> np.ndarray:
    return desc.all_elements_array(level)


def evaluate_all(f: Poly) -> np.ndarray:
    """Values of f at every element of its level, in canonical order."""
    desc, level, p = f.desc, f.level, f.desc.p
    xs = _element_table(desc, level)
    if f.is_zero():
        return np.zeros_like(xs)
    acc = np.broadcast_to(f.c[-1], xs.shape).astype(np.int64)
    reducers = desc._reducers[:level]
    for i in range(f.degree - 1, -1, -1):
        if level == 0:
            acc = (acc * xs + int(f.c[i])) % p
        else:
            prod = K.batch_multiply(acc, xs, p)
            acc = (K.reduce_levels(prod, reducers, p, lead=1) + f.c[i]) % p
    return acc


def roots_in_field(f: Poly) -> list[FieldElement]:
    """Distinct roots of f in its coefficient field, in canonical order."""
    if f.degree < 1:
        raise DegreeUnsupported("root finding needs degree >= 1")
    desc, level = f.desc, f.level
    q = desc.cardinality(level)
    if q <= EXHAUSTIVE_ROOT_LIMIT:
        vals = evaluate_all(f)
        flat = vals.reshape(vals.shape[0], -1)
        hits = np.nonzero(~flat.any(axis=1))[0]
        return [desc.from_index(int(n), level) for n in hits]
    f = f.monic()
    g = gcd(FrobeniusPowers(f)[1] - Poly.x(desc, level), f)
    if g.degree < 1:
        return []
    roots = []
    for factor in equal_degree_split(g, 1):
        roots.append(-factor.coeff(0))
    return sorted(roots, key=lambda e: e.index())


def _trial_polys(desc: FieldDescriptor, level: int, max_degree: int):
    """Deterministic trial polynomials x + s, then higher degrees, canonical order."""
    q = desc.cardinality(level)
    n = q
    while True:
        digits = []
        m = n
        while m:
            m, r = divmod(m, q)
            digits.append(desc.from_index(r, level))
        if len(digits) - 1 > max_degree:
            return
        yield Poly.from_elements(digits)
        n += 1


def equal_degree_split(g: Poly, k: int) -> list[Poly]:
    """Split a monic squarefree product of degree-k irreducibles into its factors.

    Cantor-Zassenhaus with a fixed enumerated sequence of trial polynomials
    instead of random ones; output sorted canonically.
    """
    desc, level = g.desc, g.level
    if g.degree == k:
        return [g]
    if g.degree % k:
        raise ValueError("degree is not a multiple of the factor degree")
    p = desc.p
    q = desc.cardinality(level)
    one = Poly.constant(desc.one(level))
    for t in _trial_polys(desc, level, g.degree - 1):
        if p == 2:
            # absolute trace map F_{Q^k} -> F_2 evaluated at t
            bits = desc.degree(level) * k
            acc = poly_divmod(t, g)[1]
            s = acc
            for _ in range(bits - 1):
                acc = mulmod(acc, acc, g)
                s = s + acc
            h = gcd(s, g)
        else:
            h = gcd(powmod(t, (q ** k - 1) // 2, g) - one, g)
        if 0 < h.degree < g.degree:
            left = equal_degree_split(h, k)
            right = equal_degree_split(poly_divmod(g, h)[0].monic(), k)
            return sorted(left + right, key=_canonical_key)
    raise ArithmeticError("trial sequence failed to split")


def _canonical_key(f: Poly) -> tuple:
    return (f.degree, [f.coeff(i).index() for i in range(f.degree, -1, -1)])


# ---------------------------------------------------------------------------
# factorization patterns

@dataclass(frozen=True)
class FactorPattern:
    """Degrees of the irreducible factors with their multiplicities.

    ``factors`` holds one ``(degree, multiplicity)`` pair per distinct
    irreducible factor, sorted.
    """

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @property
    def degree(self) -> int:
        return sum(d * m for d, m in self.factors)

    @property
    def count(self) -> int:
        """Number of irreducible factors counted with multiplicity."""
        return sum(m for _, m in self.factors)

    def is_squarefree(self) -> bool:
        return all(m == 1 for _, m in self.factors)

    def is_irreducible(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1

    def summary(self) -> tuple[tuple[int, int], ...]:
        """(degree, number of factors of that degree) for squarefree patterns."""
        cnt = Counter()
        for d, m in self.factors:
            cnt[d] += m
        return tuple(sorted(cnt.items()))

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "FactorPattern":
        return cls(tuple((d, 1) for d in degrees))

    def __str__(self) -> str:
        parts = []
        for d, m in self.factors:
            parts.append(f"{d}" if m == 1 else f"{d}^{m}")
        return "[" + ",".join(parts) + "]"


def _pth_root(f: Poly) -> Poly:
    """g with g(x^p) = f, coefficients replaced by their p-th roots."""
    desc, level, p = f.desc, f.level, f.desc.p
    # inverse Frobenius on the coefficient field is x -> x^(Q/p)
    e = desc.cardinality(level) // p
    coeffs = [f.coeff(i) ** e for i in range(0, f.degree + 1, p)]
    return Poly.from_elements(coeffs)


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun-style decomposition f = prod g_i^i for monic f, handling f' = 0."""
    f = f.monic()
    p = f.desc.p
    out: list[tuple[Poly, int]] = []
    if f.degree < 1:
        return out
    i = 1
    c = gcd(f, f.derivative())
    w = poly_divmod(f, c)[0]
    while w.degree >= 1:
        y = gcd(w, c)
        z = poly_divmod(w, y)[0]
        if z.degree >= 1:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = poly_divmod(c, y)[0]
    if c.degree >= 1:
        for g, m in squarefree_decomposition(_pth_root(c.monic())):
            out.append((g, m * p))
    return out


def distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Distinct-degree factorization of a monic squarefree f: (product, degree)."""
    out = []
    frob = FrobeniusPowers(f)
    x = Poly.x(f.desc, f.level)
    rest = f
    i = 1
    while rest.degree >= 2 * i:
        xi = poly_divmod(frob[i], rest)[1]
        g = gcd(xi - x, rest)
        if g.degree >= 1:
            out.append((g, i))
            rest = poly_divmod(rest, g)[0].monic()
        i += 1
    if rest.degree >= 1:
        out.append((rest, rest.degree))
    return out


def factor_pattern(f: Poly) -> FactorPattern:
    """Factorization pattern via squarefree plus distinct-degree decomposition."""
    if f.degree < 1:
        raise DegreeUnsupported("factor_pattern needs degree >= 1")
    factors: list[tuple[int, int]] = []
    for g, mult in squarefree_decomposition(f):
        for part, d in distinct_degree(g):
            factors.extend([(d, mult)] * (part.degree // d))
    return FactorPattern(tuple(factors))


# ---------------------------------------------------------------------------
# discriminants

_DISC = {
    2: [(1, (0, 2, 0)), (-4, (1, 0, 1))],  # exponents of (c, b, a) for a x^2 + b x + c
    3: [  # a x^3 + b x^2 + c x + d; exponents of (d, c, b, a)
        (1, (0, 2, 2, 0)),
        (-4, (0, 3, 0, 1)),
        (-4, (1, 0, 3, 0)),
        (-27, (2, 0, 0, 2)),
        (18, (1, 1, 1, 1)),
    ],
    4: [  # a x^4 + b x^3 + c x^2 + d x + e; exponents of (e, d, c, b, a)
        (256, (3, 0, 0, 0, 3)),
        (-192, (2, 1, 0, 1, 2)),
        (-128, (2, 0, 2, 0, 2)),
        (144, (1, 2, 1, 0, 2)),
        (-27, (0, 4, 0, 0, 2)),
        (144, (2, 0, 1, 2, 1)),
        (-6, (1, 2, 0, 2, 1)),
        (-80, (1, 1, 2, 1, 1)),
        (18, (0, 3, 1, 1, 1)),
        (16, (1, 0, 4, 0, 1)),
        (-4, (0, 2, 3, 0, 1)),
        (-27, (2, 0, 0, 4, 0)),
        (18, (1, 1, 1, 3, 0)),
        (-4, (0, 3, 0, 3, 0)),
        (-4, (1, 0, 3, 2, 0)),
        (1, (0, 2, 2, 2, 0)),
    ],
}


def discriminant(f: Poly) -> FieldElement:
    """Discriminant of a polynomial of degree 2, 3 or 4 by its closed form."""
    d = f.degree
    if d not in _DISC:
        raise DegreeUnsupported(f"closed-form discriminant only for degrees 2-4, got {d}")
    cs = f.coeffs()
    total = f.desc.zero(f.level)
    for coef, exps in _DISC[d]:
        term = f.desc.scalar(coef, f.level)
        for c, e in zip(cs, exps):
            for _ in range(e):
                term = term * c
        total = total + term
    return total


def is_squarefree(f: Poly) -> bool:
    return gcd(f, f.derivative()).degree == 0
