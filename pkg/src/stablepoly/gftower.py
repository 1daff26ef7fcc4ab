"""Exact arithmetic in towers of finite field extensions.

A :class:`FieldDescriptor` fixes a prime ``p`` and a list of monic moduli; the
modulus of level ``i`` is a polynomial over level ``i - 1`` (level 0 is F_p).
Elements are stored as integer arrays whose axis 0 holds the coefficients
with respect to the newest generator, so a level-2 element prints as
``[[1,0],[2,1]]``.

Trace, norm, inversion and the residue tests descend one level at a time
through relative traces and relative norms, so nothing here ever iterates
over the conjugates of an element in a large field. The definitional
conjugate sums are kept as ``trace_by_conjugates``/``norm_by_conjugates`` for
cross-checking at small sizes.
"""

from __future__ import annotations

import json
import math
from typing import Iterator, Sequence

import numpy as np

from . import _kernels as K
from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    LevelMismatch,
    ModulusNotMonic,
    ModulusReducible,
    NotPrime,
    ParseError,
)

__all__ = [
    "FieldDescriptor",
    "FieldElement",
    "make_tower",
    "prime_field",
    "field_of_order",
    "is_prime",
    "add",
    "sub",
    "mul",
    "inv",
    "power",
    "frobenius",
    "trace",
    "norm",
    "is_square",
    "is_cube",
    "euler_is_square",
    "euler_is_cube",
    "trace_by_conjugates",
    "norm_by_conjugates",
]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class FieldDescriptor:
    """A prime and an ordered list of extension moduli.

    Instances are immutable; the caches below only memoize values derived
    from the moduli. Use :func:`make_tower` to build one with verification.
    """

    def __init__(self, p: int, moduli: Sequence[np.ndarray] = ()):
        self.p = int(p)
        self.dtype = K.dtype_for(self.p)
        mods = []
        for m in moduli:
            m = np.array(m, dtype=self.dtype)
            m.setflags(write=False)
            mods.append(m)
        self.moduli = tuple(mods)
        self.degrees = tuple(m.shape[0] - 1 for m in self.moduli)
        self._reducers = [K.LevelReducer(m) for m in self.moduli]
        keys = [f"p={self.p}".encode()]
        for m in self.moduli:
            keys.append(keys[-1] + b"|" + repr(m.shape).encode() + m.astype(np.int64).tobytes())
        self._keys = tuple(keys)
        self._power_sums: dict[int, list[np.ndarray]] = {}

    # -- structure -------------------------------------------------------
    @property
    def height(self) -> int:
        return len(self.moduli)

    def degree(self, level: int | None = None) -> int:
        """Extension degree of ``level`` over F_p."""
        level = self.height if level is None else level
        return math.prod(self.degrees[:level])

    def cardinality(self, level: int | None = None) -> int:
        return self.p ** self.degree(level)

    def shape(self, level: int) -> tuple[int, ...]:
        return tuple(reversed(self.degrees[:level]))

    def compatible(self, other: "FieldDescriptor", level: int) -> bool:
        if self is other:
            return True
        if level > self.height or level > other.height:
            return False
        return self._keys[level] == other._keys[level]

    def truncate(self, level: int) -> "FieldDescriptor":
        return FieldDescriptor(self.p, self.moduli[:level])

    def extend(self, modulus, check: bool = True) -> "FieldDescriptor":
        """Return a descriptor with one more level defined by ``modulus``.

        ``modulus`` is a :class:`~stablepoly.polyring.Poly` over the current
        top level. With ``check=False`` the caller vouches for irreducibility
        (the stability engine does so once a Capelli step has certified it).
        """
        arr = _modulus_array(self, modulus)
        if check:
            _verify_modulus(self, arr, self.height + 1)
        return FieldDescriptor(self.p, self.moduli + (arr,))

    # -- elements ----------------------------------------------------------
    def zero(self, level: int | None = None) -> "FieldElement":
        level = self.height if level is None else level
        return FieldElement(self, level, np.zeros(self.shape(level), dtype=self.dtype))

    def one(self, level: int | None = None) -> "FieldElement":
        return self.scalar(1, level)

    def scalar(self, value: int, level: int | None = None) -> "FieldElement":
        level = self.height if level is None else level
        arr = np.zeros(self.shape(level), dtype=self.dtype)
        arr[(0,) * level] = int(value) % self.p
        return FieldElement(self, level, arr)

    def gen(self, level: int | None = None) -> "FieldElement":
        """The residue class of x defining ``level`` (level >= 1)."""
        level = self.height if level is None else level
        if level < 1:
            raise LevelMismatch("level 0 has no generator")
        arr = np.zeros(self.shape(level), dtype=self.dtype)
        arr[(1,) + (0,) * (level - 1)] = 1
        return FieldElement(self, level, arr)

    def element(self, data, level: int | None = None) -> "FieldElement":
        """Build an element from nested coefficient lists; a bare int is a prime-field scalar."""
        level = self.height if level is None else level
        try:
            arr = np.asarray(np.array(data, dtype=self.dtype) % self.p)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"malformed element {data!r}: {exc}") from None
        if arr.ndim == 0 and level:
            return self.scalar(int(arr), level)
        shape = self.shape(level)
        if arr.shape != shape:
            arr = _fit(arr, shape, self.dtype)
        return FieldElement(self, level, arr)

    def from_index(self, n: int, level: int | None = None) -> "FieldElement":
        """Element number ``n`` in canonical order (base-p digits, innermost first)."""
        level = self.height if level is None else level
        shape = self.shape(level)
        size = math.prod(shape)
        digits = []
        for _ in range(size):
            n, r = divmod(n, self.p)
            digits.append(r)
        arr = np.array(digits, dtype=self.dtype).reshape(shape)
        return FieldElement(self, level, arr)

    def elements(self, level: int | None = None) -> Iterator["FieldElement"]:
        level = self.height if level is None else level
        for n in range(self.cardinality(level)):
            yield self.from_index(n, level)

    def all_elements_array(self, level: int | None = None) -> np.ndarray:
        """Every element of ``level`` as one batch array, in canonical order."""
        level = self.height if level is None else level
        shape = self.shape(level)
        size = math.prod(shape)
        count = self.p ** size
        idx = np.arange(count, dtype=np.int64)
        digits = np.empty((count, size), dtype=np.int64)
        for k in range(size):
            digits[:, k] = idx % self.p
            idx //= self.p
        return digits.reshape((count,) + shape)

    def parse_element(self, text: str, level: int | None = None) -> "FieldElement":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad element {text!r}: {exc.msg}", exc.pos) from None
        return self.element(data, level)

    # -- encoding ----------------------------------------------------------
    def encode(self) -> str:
        parts = [str(self.p)]
        for lvl, m in enumerate(self.moduli):
            parts.append(",".join(_encode_array(m[i]) for i in range(m.shape[0])))
        return "; ".join(parts)

    @classmethod
    def parse(cls, text: str, check: bool = True) -> "FieldDescriptor":
        parts = [s.strip() for s in text.split(";")]
        try:
            p = int(parts[0])
        except ValueError:
            raise ParseError(f"bad characteristic {parts[0]!r}", 0) from None
        moduli = []
        for part in parts[1:]:
            try:
                moduli.append(json.loads("[" + part + "]"))
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad modulus {part!r}: {exc.msg}", exc.pos) from None
        return make_tower(p, moduli) if check else FieldDescriptor(p, _arrays_from_lists(p, moduli))

    def __repr__(self) -> str:
        return f"FieldDescriptor({self.encode()!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldDescriptor) and self._keys[-1] == other._keys[-1]

    def __hash__(self) -> int:
        return hash(self._keys[-1])

    # -- cached per-level data ------------------------------------------
    def power_sums(self, level: int) -> list[np.ndarray]:
        """Relative traces of 1, x, ..., x^(e-1) for the modulus of ``level``.

        Newton's identities on the modulus coefficients; the results live in
        level - 1.
        """
        cached = self._power_sums.get(level)
        if cached is not None:
            return cached
        m = self.moduli[level - 1]
        e = m.shape[0] - 1
        below = level - 1
        c = [m[i] for i in range(e + 1)]
        sums = [self.scalar(e, below).arr]
        for i in range(1, e):
            acc = np.zeros(self.shape(below), dtype=self.dtype)
            for j in range(1, i):
                acc = acc + _mul_raw(self, below, c[e - j], sums[i - j])
            acc = acc + (i % self.p) * c[e - i]
            sums.append((-acc) % self.p)
        self._power_sums[level] = sums
        return sums


class FieldElement:
    """An element of one level of a tower; immutable."""

    __slots__ = ("desc", "level", "arr")

    def __init__(self, desc: FieldDescriptor, level: int, arr: np.ndarray):
        self.desc = desc
        self.level = level
        arr.setflags(write=False)
        self.arr = arr

    # -- helpers -----------------------------------------------------------
    def _check(self, other: "FieldElement") -> FieldDescriptor:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if self.level != other.level or not self.desc.compatible(other.desc, self.level):
            raise LevelMismatch(f"level {self.level} vs level {other.level}")
        return self.desc if self.desc.height >= other.desc.height else other.desc

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.desc.scalar(other, self.level)
        return other

    def is_zero(self) -> bool:
        return not self.arr.any()

    def is_one(self) -> bool:
        return self == self.desc.one(self.level)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def in_level(self, level: int) -> bool:
        """True when the element lies in the (embedded) subfield ``level``."""
        if level >= self.level:
            return True
        head = (0,) * (self.level - level)
        rest = self.arr.copy()
        rest[head] = 0
        return not rest.any()

    def embed(self, level: int, desc: FieldDescriptor | None = None) -> "FieldElement":
        """The same element viewed at a higher ``level`` (or a lower one it lies in)."""
        desc = desc or self.desc
        if level == self.level:
            return FieldElement(desc, level, self.arr) if desc is not self.desc else self
        if level > self.level:
            arr = np.zeros(desc.shape(level), dtype=desc.dtype)
            arr[(0,) * (level - self.level)] = self.arr
            return FieldElement(desc, level, arr)
        if not self.in_level(level):
            raise LevelMismatch(f"element does not lie in level {level}")
        arr = self.arr[(0,) * (self.level - level)].copy()
        return FieldElement(desc, level, arr)

    def with_descriptor(self, desc: FieldDescriptor) -> "FieldElement":
        if not self.desc.compatible(desc, self.level):
            raise LevelMismatch("descriptors disagree below this element's level")
        return FieldElement(desc, self.level, self.arr)

    def coeffs(self) -> list["FieldElement"]:
        """Coordinates over the level below."""
        if self.level == 0:
            raise LevelMismatch("level-0 elements have no coordinates")
        return [FieldElement(self.desc, self.level - 1, self.arr[i].copy()) for i in range(self.arr.shape[0])]

    def index(self) -> int:
        n = 0
        for v in reversed(self.arr.ravel().tolist()):
            n = n * self.desc.p + int(v)
        return n

    def __int__(self) -> int:
        if self.level != 0 and not self.in_level(0):
            raise ValueError("element is not in the prime field")
        return int(self.arr.ravel()[0])

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        desc = self._check(other)
        return FieldElement(desc, self.level, (self.arr + other.arr) % desc.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        desc = self._check(other)
        return FieldElement(desc, self.level, (self.arr - other.arr) % desc.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return FieldElement(self.desc, self.level, (-self.arr) % self.desc.p)

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.desc, self.level, (self.arr * (other % self.desc.p)) % self.desc.p)
        desc = self._check(other)
        return FieldElement(desc, self.level, _mul_raw(desc, self.level, self.arr, other.arr))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        return power(self, k)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return FieldElement(self.desc, self.level, _inv_raw(self.desc, self.level, self.arr))

    def square(self) -> "FieldElement":
        return self * self

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.desc.scalar(other, self.level)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (
            self.level == other.level
            and self.desc.compatible(other.desc, self.level)
            and np.array_equal(self.arr, other.arr)
        )

    def __hash__(self) -> int:
        return hash((self.level, self.arr.tobytes()))

    def encode(self) -> str:
        return _encode_array(self.arr)

    def __repr__(self) -> str:
        return f"FieldElement({self.encode()}, level={self.level})"

    __str__ = encode

    # -- maps ---------------------------------------------------------------
    def frobenius(self, base_level: int = 0) -> "FieldElement":
        return frobenius(self, base_level)

    def trace(self, base_level: int = 0) -> "FieldElement":
        return trace(self, base_level)

    def norm(self, base_level: int = 0) -> "FieldElement":
        return norm(self, base_level)


# ---------------------------------------------------------------------------
# raw kernels on arrays

# Relative degrees up to this use division-free cofactor expansion; larger
# ones (single-step extensions such as F_2^13) use Gaussian elimination.
COFACTOR_MAX_DEGREE = 4


def _mul_raw(desc: FieldDescriptor, level: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    p = desc.p
    if level == 0:
        return np.asarray((int(a) * int(b)) % p, dtype=desc.dtype)
    prod = K.conv(a, b, p)
    return K.reduce_levels(prod, desc._reducers[:level], p)


def _det_and_cofactors(desc, level, mat):
    """Determinant and first-row cofactors of a square matrix over ``level``."""
    n = len(mat)
    mul = lambda x, y: _mul_raw(desc, level, x, y)  # noqa: E731
    p = desc.p

    def det(rows, cols):
        if len(rows) == 1:
            return mat[rows[0]][cols[0]]
        if len(rows) == 2:
            r0, r1 = rows
            c0, c1 = cols
            return (mul(mat[r0][c0], mat[r1][c1]) - mul(mat[r0][c1], mat[r1][c0])) % p
        acc = np.zeros(desc.shape(level), dtype=desc.dtype)
        r = rows[0]
        for k, c in enumerate(cols):
            if not mat[r][c].any():
                continue
            minor = det(rows[1:], cols[:k] + cols[k + 1:])
            term = mul(mat[r][c], minor)
            acc = acc + term if k % 2 == 0 else acc - term
        return acc % p

    rows = list(range(1, n))
    cofactors = []
    for j in range(n):
        if n == 1:
            cof = desc.one(level).arr
        else:
            minor = det(rows, list(range(j)) + list(range(j + 1, n)))
            cof = minor if j % 2 == 0 else (-minor) % p
        cofactors.append(cof)
    total = np.zeros(desc.shape(level), dtype=desc.dtype)
    for j in range(n):
        if mat[0][j].any():
            total = total + mul(mat[0][j], cofactors[j])
    return total % p, cofactors


def _mult_matrix(desc, level, a):
    """Matrix over level-1 of multiplication by ``a`` (columns a*x^j)."""
    e = desc.degrees[level - 1]
    x = desc.gen(level).arr
    cols = [a]
    for _ in range(1, e):
        cols.append(_mul_raw(desc, level, cols[-1], x))
    # mat[i][j] = coefficient i of column j
    return [[cols[j][i] for j in range(e)] for i in range(e)]


def _inv_raw(desc: FieldDescriptor, level: int, a: np.ndarray) -> np.ndarray:
    p = desc.p
    if level == 0:
        v = int(a)
        if v == 0:
            raise DivisionByZero("inverse of zero")
        return np.asarray(pow(v, -1, p), dtype=desc.dtype)
    if not a.any():
        raise DivisionByZero("inverse of zero")
    mat = _mult_matrix(desc, level, a)
    if len(mat) > COFACTOR_MAX_DEGREE:
        _, sol = _gauss(desc, level - 1, mat, solve=True)
        return np.stack(sol)
    det, cof = _det_and_cofactors(desc, level - 1, mat)
    if not det.any():
        raise DivisionByZero("inverse of zero")
    dinv = _inv_raw(desc, level - 1, det)
    out = np.stack([_mul_raw(desc, level - 1, c, dinv) for c in cof])
    return out


def _gauss(desc, level, mat, solve=False):
    """Determinant of ``mat`` over ``level`` and, with ``solve``, x with mat x = e_0."""
    p = desc.p
    n = len(mat)
    zero = np.zeros(desc.shape(level), dtype=desc.dtype)
    rows = [[np.asarray(v) % p for v in row] + ([desc.one(level).arr if i == 0 else zero] if solve else []) for i, row in enumerate(mat)]
    mul = lambda x, y: _mul_raw(desc, level, x, y)  # noqa: E731
    det = desc.one(level).arr
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col].any()), None)
        if piv is None:
            if solve:
                raise DivisionByZero("inverse of zero")
            return zero, None
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = (-det) % p
        pinv = _inv_raw(desc, level, rows[col][col])
        det = mul(det, rows[col][col])
        rows[col] = [mul(v, pinv) for v in rows[col]]
        for r in range(n):
            if r == col or not rows[r][col].any():
                continue
            f = rows[r][col]
            rows[r] = [(v - mul(f, w)) % p for v, w in zip(rows[r], rows[col])]
    return det % p, ([rows[i][n] for i in range(n)] if solve else None)


def _rel_norm_raw(desc, level, a):
    mat = _mult_matrix(desc, level, a)
    if len(mat) > COFACTOR_MAX_DEGREE:
        return _gauss(desc, level - 1, mat)[0]
    det, _ = _det_and_cofactors(desc, level - 1, mat)
    return det


def _rel_trace_raw(desc, level, a):
    sums = desc.power_sums(level)
    acc = np.zeros(desc.shape(level - 1), dtype=desc.dtype)
    for i, s in enumerate(sums):
        if a[i].any() and s.any():
            acc = acc + _mul_raw(desc, level - 1, a[i], s)
    return acc % desc.p


def _fit(arr, shape, dtype):
    arr = np.asarray(arr, dtype=dtype)
    if arr.ndim != len(shape):
        raise ParseError(f"element has {arr.ndim} nesting levels, expected {len(shape)}")
    region = tuple(slice(0, min(a, b)) for a, b in zip(arr.shape, shape))
    spill = arr.copy()
    spill[region] = 0
    if spill.any():
        raise ParseError("element has more coefficients than the extension degree")
    out = np.zeros(shape, dtype=dtype)
    out[region] = arr[region]
    return out


def _encode_array(arr: np.ndarray) -> str:
    return json.dumps(np.asarray(arr).tolist(), separators=(",", ":"))


# ---------------------------------------------------------------------------
# public operations

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, k: int) -> FieldElement:
    """a**k by left-to-right square-and-multiply; k is an unbounded natural."""
    k = int(k)
    desc, level = a.desc, a.level
    if k < 0:
        return power(a.inverse(), -k)
    if k == 0:
        return desc.one(level)
    if a.is_zero():
        return a
    order = desc.cardinality(level) - 1
    k %= order
    if k == 0:
        return desc.one(level)
    if level == 0:
        return desc.scalar(pow(int(a.arr), k, desc.p), 0)
    base = a.arr
    acc = base
    for bit in bin(k)[3:]:
        acc = _mul_raw(desc, level, acc, acc)
        if bit == "1":
            acc = _mul_raw(desc, level, acc, base)
    return FieldElement(desc, level, acc)


def _check_base(e: FieldElement, base_level: int) -> None:
    if not 0 <= base_level <= e.level:
        raise LevelMismatch(f"base level {base_level} is not below level {e.level}")


def frobenius(e: FieldElement, base_level: int = 0) -> FieldElement:
    """e raised to the cardinality of ``base_level``."""
    _check_base(e, base_level)
    if e.level == base_level:
        return e
    return power(e, e.desc.cardinality(base_level))


def trace(e: FieldElement, base_level: int = 0) -> FieldElement:
    """Trace from e's level down to ``base_level``, by relative-trace descent."""
    _check_base(e, base_level)
    desc, arr = e.desc, e.arr
    for lvl in range(e.level, base_level, -1):
        arr = _rel_trace_raw(desc, lvl, arr)
    return FieldElement(desc, base_level, np.asarray(arr))


def norm(e: FieldElement, base_level: int = 0) -> FieldElement:
    """Norm from e's level down to ``base_level``, by relative-norm descent."""
    _check_base(e, base_level)
    desc, arr = e.desc, e.arr
    for lvl in range(e.level, base_level, -1):
        arr = _rel_norm_raw(desc, lvl, arr)
    return FieldElement(desc, base_level, np.asarray(arr))


def _conjugates(e: FieldElement, base_level: int) -> list[FieldElement]:
    _check_base(e, base_level)
    count = e.desc.degree(e.level) // e.desc.degree(base_level)
    out = [e]
    for _ in range(count - 1):
        out.append(frobenius(out[-1], base_level))
    return out


def trace_by_conjugates(e: FieldElement, base_level: int = 0) -> FieldElement:
    """Sum of the Frobenius conjugates over ``base_level``; the definition of the trace."""
    conj = _conjugates(e, base_level)
    total = conj[0]
    for c in conj[1:]:
        total = total + c
    if not total.in_level(base_level):
        raise ArithmeticError("conjugate sum left the base field")
    return total.embed(base_level)


def norm_by_conjugates(e: FieldElement, base_level: int = 0) -> FieldElement:
    conj = _conjugates(e, base_level)
    total = conj[0]
    for c in conj[1:]:
        total = total * c
    if not total.in_level(base_level):
        raise ArithmeticError("conjugate product left the base field")
    return total.embed(base_level)


def is_square(e: FieldElement) -> bool:
    """Quadratic character by norm descent to F_p; zero counts as a square.

    In odd characteristic e^((Q-1)/2) = N(e)^((p-1)/2) with N the norm to the
    prime field, so the Legendre symbol of the norm decides squareness.
    """
    p = e.desc.p
    if p == 2:
        raise EvenCharacteristic("every element is a square in characteristic 2")
    if e.is_zero():
        return True
    n = int(norm(e, 0).arr)
    return pow(n, (p - 1) // 2, p) == 1


def euler_is_square(e: FieldElement) -> bool:
    """Euler's criterion evaluated directly at e's own level."""
    if e.desc.p == 2:
        raise EvenCharacteristic("every element is a square in characteristic 2")
    if e.is_zero():
        return True
    q = e.desc.cardinality(e.level)
    return power(e, (q - 1) // 2).is_one()


def is_cube(e: FieldElement) -> bool:
    """Cubic character; zero counts as a cube.

    When 3 does not divide Q - 1 cubing is a bijection. Otherwise the test
    e^((Q-1)/3) = 1 is evaluated as N(e)^((Q_L-1)/3) with N the norm to the
    lowest level L whose multiplicative group has order divisible by 3.
    """
    if e.is_zero():
        return True
    desc = e.desc
    q = desc.cardinality(e.level)
    if (q - 1) % 3:
        return True
    low = next(lvl for lvl in range(e.level + 1) if (desc.cardinality(lvl) - 1) % 3 == 0)
    n = norm(e, low)
    return power(n, (desc.cardinality(low) - 1) // 3).is_one()


def euler_is_cube(e: FieldElement) -> bool:
    if e.is_zero():
        return True
    q = e.desc.cardinality(e.level)
    if (q - 1) % 3:
        return True
    return power(e, (q - 1) // 3).is_one()


# ---------------------------------------------------------------------------
# construction

def _arrays_from_lists(p: int, moduli) -> list[np.ndarray]:
    out = []
    degs: list[int] = []
    dtype = K.dtype_for(p)
    for level, m in enumerate(moduli, start=1):
        if hasattr(m, "coeffs_array"):
            arr = np.array(m.coeffs_array(), dtype=dtype) % p
        else:
            shape = tuple(reversed(degs))
            rows = [_fit(np.array(c, dtype=dtype) % p, shape, dtype) for c in m]
            if not rows:
                raise ModulusNotMonic(f"modulus of level {level} is empty")
            arr = np.stack(rows)
        while arr.shape[0] > 1 and not arr[-1].any():
            arr = arr[:-1]
        degs.append(arr.shape[0] - 1)
        out.append(arr)
    return out


def _modulus_array(desc: FieldDescriptor, modulus) -> np.ndarray:
    if hasattr(modulus, "coeffs_array"):
        if modulus.level != desc.height or not modulus.desc.compatible(desc, desc.height):
            raise LevelMismatch("modulus must be a polynomial over the top level")
        arr = np.array(modulus.coeffs_array(), dtype=desc.dtype)
    else:
        shape = desc.shape(desc.height)
        arr = np.stack([_fit(np.array(c, dtype=desc.dtype) % desc.p, shape, desc.dtype) for c in modulus])
        while arr.shape[0] > 1 and not arr[-1].any():
            arr = arr[:-1]
    return arr


def _verify_modulus(base: FieldDescriptor, arr: np.ndarray, level: int) -> None:
    from .polyring import Poly, is_irreducible

    e = arr.shape[0] - 1
    one = base.one(base.height).arr
    if e < 1:
        raise ModulusReducible(level, f"modulus of level {level} has degree {e}")
    if not np.array_equal(arr[-1], one):
        raise ModulusNotMonic(f"modulus of level {level} is not monic")
    if e < 2:
        raise ModulusReducible(level, f"modulus of level {level} has degree {e} < 2")
    if not is_irreducible(Poly(base, base.height, arr)):
        raise ModulusReducible(level)


def make_tower(p: int, moduli: Sequence = ()) -> FieldDescriptor:
    """Verified tower F_p ⊂ level 1 ⊂ ... from ascending-coefficient moduli.

    Each modulus is a list of level-(i-1) coefficients in the nested-list
    encoding, or a :class:`~stablepoly.polyring.Poly`.
    """
    p = int(p)
    if p >= 1 << 32 or not is_prime(p):
        raise NotPrime(f"{p} is not a prime below 2^32")
    desc = FieldDescriptor(p)
    for m in moduli:
        if hasattr(m, "coeffs_array"):
            arr = np.array(m.coeffs_array(), dtype=desc.dtype) % p
        else:
            shape = desc.shape(desc.height)
            if not len(m):
                raise ModulusNotMonic("empty modulus")
            arr = np.stack([_fit(np.array(c, dtype=desc.dtype) % p, shape, desc.dtype) for c in m])
            while arr.shape[0] > 1 and not arr[-1].any():
                arr = arr[:-1]
        _verify_modulus(desc, arr, desc.height + 1)
        desc = FieldDescriptor(p, desc.moduli + (arr,))
    return desc


def prime_field(p: int) -> FieldDescriptor:
    return make_tower(p)


def first_irreducible(desc: FieldDescriptor, degree: int, shape: str = "monic"):
    """First irreducible monic polynomial of ``degree`` over the top level.

    Lower coefficients run through the field in canonical order, constant
    term fastest. With ``shape="artin"`` only x^2 + x + c is searched.
    """
    from .polyring import Poly, is_irreducible

    level = desc.height
    q = desc.cardinality(level)
    one = desc.one(level)
    if shape == "artin":
        x_coef = desc.one(level)
        for n in range(q):
            c = desc.from_index(n, level)
            f = Poly.from_elements([c, x_coef, one])
            if is_irreducible(f):
                return f
        raise ArithmeticError("no irreducible x^2 + x + c")
    for n in range(q ** degree):
        coeffs = []
        for _ in range(degree):
            n, r = divmod(n, q)
            coeffs.append(desc.from_index(r, level))
        f = Poly.from_elements(coeffs + [one])
        if is_irreducible(f):
            return f
    raise ArithmeticError(f"no irreducible polynomial of degree {degree}")


def field_of_order(q: int) -> FieldDescriptor:
    """F_q as F_p or F_p[x]/(first irreducible of degree m) for q = p^m."""
    q = int(q)
    for p in _prime_factors(q):
        m, r = 0, q
        while r % p == 0:
            r //= p
            m += 1
        if r != 1:
            break
        base = make_tower(p)
        if m == 1:
            return base
        return base.extend(first_irreducible(base, m), check=False)
    raise NotPrime(f"{q} is not a prime power")

