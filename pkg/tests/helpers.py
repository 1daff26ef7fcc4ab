"""Shared oracles for the test suite: frozen sympy data and galois factorizations."""

from __future__ import annotations

import functools
import json
from pathlib import Path

import sympy as sp
from hypothesis import seed

from stablepoly import PROPERTY_SEED
from stablepoly.gftower import FieldDescriptor
from stablepoly.polyring import FactorPattern, Poly

ORACLES = json.loads((Path(__file__).parent / "data" / "oracles.json").read_text())

seeded = seed(PROPERTY_SEED)

_x = sp.symbols("x")


def sympy_pattern(coeffs: list[int], p: int) -> FactorPattern:
    """Factorization pattern over F_p computed by sympy."""
    f = sp.Poly(list(reversed(coeffs)), _x, modulus=p)
    _, facs = f.factor_list()
    return FactorPattern(tuple((g.degree(), m) for g, m in facs))


@functools.lru_cache(maxsize=None)
def _galois_field(p: int, modulus: tuple[int, ...]):
    import galois

    if not modulus:
        return galois.GF(p)
    return galois.GF(p ** (len(modulus) - 1), irreducible_poly=galois.Poly(list(reversed(modulus)), field=galois.GF(p)))


def galois_field(desc: FieldDescriptor):
    """The same field as a height-0 or height-1 descriptor, built in galois."""
    if desc.height > 1:
        raise ValueError("galois oracle only covers one extension level")
    modulus = tuple(int(v) for v in desc.moduli[0].ravel()) if desc.height else ()
    return _galois_field(desc.p, modulus)


def galois_pattern(f: Poly) -> FactorPattern:
    """Factorization pattern of f (level 0 or 1) computed by galois."""
    import galois

    GF = galois_field(f.desc)
    g = galois.Poly([c.index() for c in reversed(f.coeffs())], field=GF)
    facs, mults = g.factors()
    return FactorPattern(tuple((h.degree, int(m)) for h, m in zip(facs, mults)))
