"""Array kernels shared by the tower and polynomial layers.

Every element of a tower level is an integer ndarray whose axes run from the
top level down to level 1 (axis 0 indexes powers of the newest generator), so
``arr.tolist()`` is the canonical nested encoding. Polynomials prepend one
axis for the powers of x.

Multiplication is a full multivariate linear convolution followed by
reduction modulo the level moduli, top level first.
"""

from __future__ import annotations

import itertools

import gmpy2
import numpy as np

# Dense operands with more coefficients than this go through Kronecker
# substitution into a single GMP product; below it the schoolbook shift-add
# loop is used. The schoolbook path is the oracle in the test-suite.
KRONECKER_THRESHOLD = 512

_WIDTHS = ((8, np.uint8), (16, np.uint16), (32, np.uint32), (64, np.uint64))

# p below this keeps every intermediate of a reduction step inside int64
_INT64_SAFE_P = 1 << 20


def dtype_for(p: int):
    return np.int64 if p < (1 << 31) else object


def nonzero_terms(arr: np.ndarray) -> list[tuple[tuple[int, ...], int]]:
    if arr.ndim == 0:
        return [((), int(arr))] if arr else []
    idx = np.nonzero(arr)
    return [(tuple(int(i) for i in pos), int(arr[pos])) for pos in zip(*idx)]


def conv_schoolbook(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Multivariate linear convolution by shift-and-add over the sparser operand."""
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    shape = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    out = np.zeros(shape, dtype=np.result_type(a, b))
    for pos, val in nonzero_terms(a):
        sl = tuple(slice(i, i + n) for i, n in zip(pos, b.shape))
        out[sl] += val * b
    return out


def conv_kronecker(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Multivariate linear convolution by Kronecker substitution.

    Both operands are embedded in the result grid, flattened, packed into
    integers with fixed-width slots and multiplied once with GMP. Inputs must
    be reduced into [0, p).
    """
    shape = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    n = int(np.prod(shape))
    bound = (p - 1) ** 2 * max(1, min(np.count_nonzero(a), np.count_nonzero(b)))
    for width, dt in _WIDTHS:
        if bound < (1 << width):
            break
    else:
        return _conv_kronecker_wide(a, b, shape, bound)
    nbytes = width // 8

    def pack(x: np.ndarray) -> gmpy2.mpz:
        grid = np.zeros(shape, dtype=dt)
        grid[tuple(slice(0, k) for k in x.shape)] = x
        return gmpy2.mpz.from_bytes(grid.tobytes(), "little")

    prod = pack(a) * pack(b)
    raw = prod.to_bytes(n * nbytes, "little")
    out = np.frombuffer(raw, dtype=dt, count=n).astype(np.int64)
    return out.reshape(shape)


def _conv_kronecker_wide(a, b, shape, bound):
    # object-dtype fallback for very large characteristics
    width = bound.bit_length() + 1
    n = int(np.prod(shape))

    def pack(x):
        grid = np.zeros(shape, dtype=object)
        grid[tuple(slice(0, k) for k in x.shape)] = x
        acc = 0
        for v in reversed(grid.ravel().tolist()):
            acc = (acc << width) | int(v)
        return gmpy2.mpz(acc)

    prod = int(pack(a) * pack(b))
    mask = (1 << width) - 1
    vals = []
    for _ in range(n):
        vals.append(prod & mask)
        prod >>= width
    return np.array(vals, dtype=object).reshape(shape)


def conv(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        if a.size * b.size > KRONECKER_THRESHOLD ** 2 // 4:
            return conv_kronecker(a, b, p)
        return conv_schoolbook(a, b)
    small = min(np.count_nonzero(a), np.count_nonzero(b))
    if small <= 8 or max(a.size, b.size) <= KRONECKER_THRESHOLD:
        return conv_schoolbook(a, b)
    return conv_kronecker(a, b, p)


class LevelReducer:
    """Reduction data for one tower level.

    ``coeffs[i]`` is the level-below array of the monic modulus coefficient of
    x^i; ``terms[i]`` lists its nonzero entries for the shift-add path and
    ``reach`` is, per lower axis, the largest exponent occurring in any
    coefficient.
    """

    __slots__ = ("degree", "coeffs", "terms", "reach", "dense")

    def __init__(self, modulus: np.ndarray):
        self.degree = modulus.shape[0] - 1
        self.coeffs = [modulus[i] for i in range(self.degree)]
        self.terms = [nonzero_terms(c) for c in self.coeffs]
        lower = modulus.ndim - 1
        reach = [0] * lower
        for terms in self.terms:
            for pos, _ in terms:
                for ax, k in enumerate(pos):
                    reach[ax] = max(reach[ax], k)
        self.reach = tuple(reach)
        self.dense = [len(t) > 16 for t in self.terms]


def reduce_levels(arr: np.ndarray, reducers: list[LevelReducer], p: int, lead: int = 0) -> np.ndarray:
    """Reduce an unreduced product modulo the tower moduli.

    ``arr`` has ``lead`` leading axes that are left alone, then one axis per
    level from the top level (``reducers[-1]``) down to level 1. Axes may be
    longer than the level degree; the result has exactly the level degrees.
    """
    top = len(reducers)
    arr = np.asarray(arr)
    if top == 0:
        return arr % p
    for j in range(top, 0, -1):
        red = reducers[j - 1]
        ax = lead + top - j
        e = red.degree
        length = arr.shape[ax]
        if length < e:
            arr = _padded(arr, ax, e - length)
            continue
        if length == e:
            if p >= _INT64_SAFE_P:
                arr = arr % p
            continue
        steps = length - e
        # room for support growth on the lower axes
        shape = list(arr.shape)
        for k, r in enumerate(red.reach):
            shape[ax + 1 + k] += steps * r
        out = np.zeros(shape, dtype=arr.dtype)
        out[tuple(slice(0, n) for n in arr.shape)] = arr % p
        arr = out
        lower_shape = arr.shape[ax + 1:]
        for t in range(length - 1, e - 1, -1):
            src = np.take(arr, t, axis=ax)
            if not src.any():
                continue
            for i in range(e):
                tgt_index = [slice(None)] * arr.ndim
                tgt_index[ax] = t - e + i
                if red.dense[i]:
                    prod = _dense_lower_product(src, red.coeffs[i], lower_shape, p, lead + top - j)
                    tgt_index = tuple(tgt_index)
                    arr[tgt_index] -= prod
                    continue
                for pos, val in red.terms[i]:
                    idx = list(tgt_index)
                    src_sl = [slice(None)] * src.ndim
                    for k, off in enumerate(pos):
                        if off:
                            n = lower_shape[k]
                            idx[ax + 1 + k] = slice(off, n)
                            src_sl[lead + top - j + k] = slice(0, n - off)
                    arr[tuple(idx)] -= val * src[tuple(src_sl)]
            if p >= _INT64_SAFE_P:
                arr %= p
            else:
                # keep later shift-adds bounded
                sl = [slice(None)] * arr.ndim
                sl[ax] = slice(0, t)
                arr[tuple(sl)] %= p
        keep = [slice(None)] * arr.ndim
        keep[ax] = slice(0, e)
        arr = arr[tuple(keep)]
    arr = arr % p
    return arr


def _padded(arr, ax, extra):
    shape = list(arr.shape)
    shape[ax] += extra
    out = np.zeros(shape, dtype=arr.dtype)
    out[tuple(slice(0, n) for n in arr.shape)] = arr
    return out


def _dense_lower_product(src, coeff, lower_shape, p, n_outer):
    # src: outer axes (n_outer) then lower axes; coeff: lower axes only
    c = coeff.reshape((1,) * n_outer + coeff.shape)
    prod = conv(src % p, c, p)
    out = np.zeros(src.shape, dtype=prod.dtype)
    region = tuple(slice(0, min(a, b)) for a, b in zip(prod.shape, src.shape))
    out[region] = prod[region]
    return out


def batch_multiply(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Pointwise-in-batch multivariate convolution: axis 0 is a batch axis."""
    shape = (a.shape[0],) + tuple(x + y - 1 for x, y in zip(a.shape[1:], b.shape[1:]))
    out = np.zeros(shape, dtype=np.result_type(a, b))
    for pos in itertools.product(*(range(n) for n in a.shape[1:])):
        col = a[(slice(None),) + pos]
        if not col.any():
            continue
        sl = (slice(None),) + tuple(slice(i, i + n) for i, n in zip(pos, b.shape[1:]))
        out[sl] += col.reshape((-1,) + (1,) * (b.ndim - 1)) * b
    return out % p
