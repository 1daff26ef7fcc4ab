"""Iterate-stability certification through the root chain alpha_n.

With alpha_0 = 0 and f(alpha_n) = alpha_{n-1}, the iterate f^(n+1) is
irreducible over F_q exactly when f^(n) is and f_n = f - alpha_n is
irreducible over the field of alpha_n. Whenever f_n is irreducible it becomes
the next tower modulus, so alpha_{n+1} is simply the class of x and no root
search in a large field is needed.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from .errors import (
    ChainConstructionFailed,
    ChainTooShort,
    DegreeUnsupported,
    DepthBudgetExceeded,
    NoRootInRequiredExtension,
    SizeCapExceeded,
)
from .gftower import FieldDescriptor, FieldElement, first_irreducible
from .polyring import (
    DEFAULT_DEGREE_CAP,
    FrobeniusPowers,
    Poly,
    _canonical_key,
    distinct_degree,
    equal_degree_split,
    gcd,
    is_irreducible,
    iterate,
    squarefree_decomposition,
)

IRREDUCIBLE = "irreducible"
REDUCIBLE = "reducible"
UNTESTED = "untested"

# Deepest level certified without an explicit override, per degree. The
# theorem-driven path only does a handful of field operations per level, so it
# is allowed further than the generic Rabin test.
GENERIC_DEPTH_BUDGET = {2: 10, 3: 6, 4: 5}
THEOREM_DEPTH_BUDGET = {2: 12, 3: 8, 4: 6}
DEFAULT_SIZE_CAP = 1 << 64


def depth_budget(d: int, method: str = "generic") -> int:
    """Depth budget for degree d, overridable via STABLEPOLY_DEPTH_<d>."""
    env = os.environ.get(f"STABLEPOLY_DEPTH_{d}")
    if env:
        return int(env)
    table = THEOREM_DEPTH_BUDGET if method == "theorem" else GENERIC_DEPTH_BUDGET
    return table.get(d, 4)


def size_cap() -> int:
    env = os.environ.get("STABLEPOLY_SIZE_CAP")
    return int(env) if env else DEFAULT_SIZE_CAP


# ---------------------------------------------------------------------------
# shift-resistance


@dataclass(frozen=True)
class SRResult:
    holds: bool
    witness: tuple[int, FieldElement] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _extension_chain(desc: FieldDescriptor, degree: int) -> FieldDescriptor:
    """Extend by a single irreducible of the given degree (prime-power steps not needed)."""
    if degree == 1:
        return desc
    return desc.extend(first_irreducible(desc, degree), check=False)


def sr_check(f: Poly, d: int | None = None, r_max: int = 2, cap: int | None = None) -> SRResult:
    """Check that f - a has a root in F_{q^(d r)} for every a in F_{q^r}, r <= r_max.

    Returns the first failing ``(r, a)`` as witness, scanning r upward and a in
    canonical order.
    """
    d = f.degree if d is None else d
    if f.degree != d:
        raise DegreeUnsupported(f"polynomial has degree {f.degree}, expected {d}")
    q = f.desc.cardinality(f.level)
    cap = size_cap() if cap is None else cap
    if q ** (r_max * d) > cap:
        raise SizeCapExceeded(f"q^(r_max d) = {q}^{r_max * d} exceeds the size cap")
    base = f.desc.truncate(f.level)
    f = Poly(base, f.level, f.c)
    for r in range(1, r_max + 1):
        small = _extension_chain(base, r)
        big = _extension_chain(small, d)
        ls, lb = small.height, big.height
        fb = f.embed(lb, big)
        x = Poly.x(big, lb)
        for a in small.elements(ls):
            g = fb - a.embed(lb, big)
            h = gcd(FrobeniusPowers(g.monic())[1] - x, g)
            if h.degree < 1:
                return SRResult(False, (r, a))
    return SRResult(True)


# ---------------------------------------------------------------------------
# the chain


@dataclass(frozen=True)
class ChainTrace:
    """The root chain of f up to some frontier.

    ``alphas[n]`` lives at tower level ``levels[n]`` of ``desc``; when every
    f_n so far was irreducible, ``levels[n] = base_level + n``. ``moduli_used``
    lists the polynomial adjoined at each step and ``step_degrees`` its degree
    (1 when a root already existed in the current field).
    """

    f: Poly
    desc: FieldDescriptor
    base_level: int
    alphas: tuple[FieldElement, ...]
    levels: tuple[int, ...]
    moduli_used: tuple[Poly, ...] = ()
    step_degrees: tuple[int, ...] = ()
    verify: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.verify:
            for n in range(1, len(self.alphas)):
                prev = self.alphas[n - 1].embed(self.levels[n], self.desc)
                if self.f_at(self.levels[n])(self.alphas[n].with_descriptor(self.desc)) != prev:
                    raise ChainConstructionFailed(f"f(alpha_{n}) != alpha_{n - 1}")

    @classmethod
    def start(cls, f: Poly) -> "ChainTrace":
        desc = f.desc.truncate(f.level) if f.desc.height > f.level else f.desc
        f = Poly(desc, f.level, f.c)
        return cls(f, desc, f.level, (desc.zero(f.level),), (f.level,))

    @property
    def depth(self) -> int:
        """Index of the frontier element alpha_n."""
        return len(self.alphas) - 1

    def alpha(self, n: int) -> FieldElement:
        if n >= len(self.alphas):
            raise ChainTooShort(f"chain has alphas up to {self.depth}, asked for {n}")
        return self.alphas[n].with_descriptor(self.desc)

    def f_at(self, level: int) -> Poly:
        return self.f.embed(level, self.desc)

    def shifted(self, n: int) -> Poly:
        """f_n(x) = f(x) - alpha_n over the field of alpha_n."""
        a = self.alpha(n)
        return self.f_at(self.levels[n]) - a

    @property
    def shifted_all(self) -> list[Poly]:
        return [self.shifted(n) for n in range(len(self.alphas))]

    def check_iterate_identity(self, n: int, cap: int = DEFAULT_DEGREE_CAP) -> bool:
        """f^(n)(alpha_n) = 0, evaluated by materializing the iterate."""
        lvl = self.levels[n]
        return iterate(self.f_at(lvl), n, cap)(self.alpha(n)).is_zero()


def _pick_factor(g: Poly, policy: str) -> Poly:
    """Irreducible factor of least degree, first (or last) in canonical order."""
    sqf = [h for h, _ in squarefree_decomposition(g)]
    parts = [(part, k) for h in sqf for part, k in distinct_degree(h)]
    k = min(k for _, k in parts)
    cands = []
    for part, kk in parts:
        if kk == k:
            cands.extend(equal_degree_split(part, k))
    cands.sort(key=_canonical_key)
    return cands[0] if policy == "first" else cands[-1]


def extend_chain(trace: ChainTrace, irreducible: bool | None = None, policy: str = "first") -> ChainTrace:
    """Append alpha_{n+1}, a root of f_n, extending the tower if needed.

    ``irreducible`` lets a caller that has already certified f_n skip the
    test. If f_n is reducible, a root is taken from its lowest-degree
    irreducible factor (``policy`` picks the first or last such factor in
    canonical order) and the tower grows by that factor's degree only.
    """
    n = trace.depth
    fn = trace.shifted(n).monic()
    level = trace.levels[n]
    if level != trace.desc.height:
        raise ChainConstructionFailed("chain frontier is not the top of its tower")
    if irreducible is None:
        irreducible = is_irreducible(fn)
    if irreducible:
        factor = fn
    else:
        factor = _pick_factor(fn, policy)
    if factor.degree == 1:
        desc = trace.desc
        alpha = -factor.coeff(0)
        new_level = level
    else:
        if factor.degree > trace.f.degree:
            raise NoRootInRequiredExtension(f"smallest factor of f_{n} has degree {factor.degree}")
        desc = trace.desc.extend(factor, check=False)
        new_level = desc.height
        alpha = desc.gen(new_level)
    return ChainTrace(
        trace.f,
        desc,
        trace.base_level,
        trace.alphas + (alpha,),
        trace.levels + (new_level,),
        trace.moduli_used + (factor,),
        trace.step_degrees + (factor.degree,),
        verify=trace.verify,
    )


def build_chain(f: Poly, depth: int, policy: str = "first") -> ChainTrace:
    trace = ChainTrace.start(f)
    for _ in range(depth):
        trace = extend_chain(trace, policy=policy)
    return trace


def capelli_step(f: Poly, trace: ChainTrace, n: int) -> bool:
    """Irreducibility of f_n over the field of alpha_n."""
    if n > trace.depth:
        raise ChainTooShort(f"chain has alphas up to {trace.depth}, asked for {n}")
    if not np_equal(f, trace.f):
        raise ValueError("trace belongs to a different polynomial")
    return is_irreducible(trace.shifted(n))


def np_equal(f: Poly, g: Poly) -> bool:
    return f.level == g.level and f.c.shape == g.c.shape and (f.c == g.c).all()


# ---------------------------------------------------------------------------
# certification


@dataclass
class StabilityReport:
    poly: Poly
    degree: int
    depth: int
    method: str
    verdicts: list[str]
    methods: list[str]
    seconds: list[float]
    first_reducible: int | None
    certificate: str

    @property
    def stable_to_depth(self) -> bool:
        return self.first_reducible is None and all(v == IRREDUCIBLE for v in self.verdicts)

    def as_record(self, with_timing: bool = True) -> dict:
        rec = {
            "poly": self.poly.encode(),
            "q": self.poly.desc.cardinality(self.poly.level),
            "d": self.degree,
            "depth": self.depth,
            "method": self.method,
            "verdicts": list(self.verdicts),
            "methods": list(self.methods),
            "first_reducible": self.first_reducible,
            "stable_to_depth": self.stable_to_depth,
            "certificate": self.certificate,
        }
        if with_timing:
            rec["seconds"] = [round(s, 6) for s in self.seconds]
        return rec

    def line(self) -> str:
        marks = "".join({IRREDUCIBLE: "I", REDUCIBLE: "R", UNTESTED: "-"}[v] for v in self.verdicts)
        first = "-" if self.first_reducible is None else str(self.first_reducible)
        return f"{self.poly.encode()}\t{marks}\t{first}\t{self.certificate}"


class LevelCriterion:
    """Per-level irreducibility test for f_n; subclasses implement closed forms."""

    name = "generic"
    certificate = ""

    def verdict(self, trace: ChainTrace, n: int) -> tuple[bool, str]:
        return is_irreducible(trace.shifted(n)), "generic"

    def settles_all(self, verdict0: bool) -> bool:
        """True when the level-0 verdict already decides every level."""
        return False


def certify_stability(
    f: Poly,
    d: int | None = None,
    depth: int = 4,
    method: str = "generic",
    max_depth: int | None = None,
    time_budget: float | None = None,
    criterion: LevelCriterion | None = None,
) -> StabilityReport:
    """Per-depth irreducibility of f_n for n = 0..depth.

    ``method`` is ``"generic"`` (Rabin test on every f_n) or ``"theorem"``
    (closed-form criterion of the matching family, generic otherwise).
    Verdicts after the first reducible depth are ``untested``.
    """
    d = f.degree if d is None else d
    if f.degree != d:
        raise DegreeUnsupported(f"polynomial has degree {f.degree}, expected {d}")
    if d not in (2, 3, 4):
        raise DegreeUnsupported(f"degree {d} is outside {{2, 3, 4}}")
    if method not in ("generic", "theorem"):
        raise ValueError(f"unknown method {method!r}")
    budget = depth_budget(d, method) if max_depth is None else max_depth
    if depth > budget:
        raise DepthBudgetExceeded(f"depth {depth} exceeds the budget {budget} for degree {d}")
    if criterion is None:
        criterion = LevelCriterion()
        if method == "theorem":
            from .families import family_criterion

            criterion = family_criterion(f) or criterion
    trace = ChainTrace.start(f)
    verdicts = [UNTESTED] * (depth + 1)
    methods = [""] * (depth + 1)
    seconds = [0.0] * (depth + 1)
    first = None
    started = time.perf_counter()
    for n in range(depth + 1):
        t0 = time.perf_counter()
        if n:
            trace = extend_chain(trace, irreducible=True)
        ok, tag = criterion.verdict(trace, n)
        seconds[n] = time.perf_counter() - t0
        verdicts[n] = IRREDUCIBLE if ok else REDUCIBLE
        methods[n] = tag
        if not ok:
            first = n
            break
        if time_budget is not None and time.perf_counter() - started > time_budget and n < depth:
            raise DepthBudgetExceeded(f"wall-clock budget {time_budget}s exhausted after depth {n}")
    if first is not None:
        cert = f"reducible at depth {first}"
    elif criterion.certificate and criterion.settles_all(verdicts[0] == IRREDUCIBLE):
        cert = criterion.certificate
    else:
        cert = f"depth-limited evidence to depth {depth}"
    return StabilityReport(f, d, depth, method, verdicts, methods, seconds, first, cert)


def direct_iterate_oracle(f: Poly, n: int, cap: int = DEFAULT_DEGREE_CAP) -> bool:
    """Irreducibility of the materialized n-th iterate over F_q."""
    if n == 0:
        return True
    return is_irreducible(iterate(f, n, cap))


def oracle_verdicts(f: Poly, max_n: int, cap: int = DEFAULT_DEGREE_CAP) -> list[bool | None]:
    """direct_iterate_oracle for n = 1..max_n, None where the degree cap forbids it."""
    out: list[bool | None] = []
    for n in range(1, max_n + 1):
        if max(f.degree, 1) ** n > cap:
            out.append(None)
        else:
            out.append(direct_iterate_oracle(f, n, cap))
    return out
