"""Regenerate oracles.json with sympy alone (no stablepoly imports).

Iterates are composed over F_p with sympy and tested for irreducibility
directly, so these values are independent of the tower machinery.
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path

import sympy as sp

x = sp.symbols("x")


def gf_poly(coeffs, p):
    return sp.Poly(list(reversed(coeffs)), x, modulus=p)


def iterate_flags(coeffs, p, n_max):
    """[f^(1) irreducible, ..., f^(n_max) irreducible], stopping at the first failure."""
    f = gf_poly(coeffs, p)
    g = sp.Poly(x, x, modulus=p)
    out = []
    for _ in range(n_max):
        g = f.compose(g)
        ok = g.is_irreducible
        out.append(ok)
        if not ok:
            break
    return out


def ascending(poly):
    p = int(poly.get_modulus())
    return [int(c) % p for c in reversed(poly.all_coeffs())]


def main():
    data = {}
    f = gf_poly([1, 0, 1, 1], 2)
    data["iterate2_x3_x2_1_f2"] = ascending(f.compose(f))
    data["compose_x2p1_x2p1_f3"] = ascending(gf_poly([1, 0, 1], 3).compose(gf_poly([1, 0, 1], 3)))

    # all quadratics over F_p: deepest iterate index that stays irreducible (up to 5)
    for p in (3, 5, 7):
        rows = {}
        for c0, c1, c2 in itertools.product(range(p), range(p), range(1, p)):
            rows[f"{c0},{c1},{c2}"] = iterate_flags([c0, c1, c2], p, 5)
        data[f"quadratic_iterates_f{p}"] = rows

    # all cubics over F_2 and quartics x^4+... over F_3 with lead 1
    data["cubic_iterates_f2"] = {
        f"{c0},{c1},{c2},1": iterate_flags([c0, c1, c2, 1], 2, 5) for c0, c1, c2 in itertools.product(range(2), repeat=3)
    }
    data["quartic_iterates_f3"] = {
        f"{c0},{c1},{c2},{c3},1": iterate_flags([c0, c1, c2, c3, 1], 3, 3)
        for c0, c1, c2, c3 in itertools.product(range(3), repeat=4)
    }

    # quartic family b^3 (x+a)^4 - a over F_5
    fam = {}
    for a, b in itertools.product(range(1, 5), repeat=2):
        g = sp.Poly(b**3 * (x + a) ** 4 - a, x, modulus=5)
        fam[f"{a},{b}"] = {"poly": ascending(g), "iterates": iterate_flags(ascending(g), 5, 3)}
    data["quartic_family_f5"] = fam

    # char-3 quartic family b^3 (x+a)^4 + c (x+a) - a over F_3
    fam3 = {}
    for a, b, c in itertools.product(range(3), range(1, 3), range(1, 3)):
        g = sp.Poly(b**3 * (x + a) ** 4 + c * (x + a) - a, x, modulus=3)
        fam3[f"{a},{b},{c}"] = {"poly": ascending(g), "iterates": iterate_flags(ascending(g), 3, 3)}
    data["quartic3_family_f3"] = fam3

    out = Path(__file__).with_name("oracles.json")
    out.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
