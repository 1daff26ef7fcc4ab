from __future__ import annotations

import itertools

import pytest

from helpers import ORACLES
from stablepoly.errors import ChainTooShort, DegreeUnsupported, DepthBudgetExceeded, SizeCapExceeded
from stablepoly.families import quad_build
from stablepoly.gftower import field_of_order, prime_field
from stablepoly.polyring import Poly, is_irreducible
from stablepoly.stability import (
    IRREDUCIBLE,
    REDUCIBLE,
    UNTESTED,
    ChainTrace,
    build_chain,
    capelli_step,
    certify_stability,
    depth_budget,
    direct_iterate_oracle,
    extend_chain,
    oracle_verdicts,
    sr_check,
)


def P(p, coeffs):
    return Poly.from_ints(prime_field(p), coeffs)


CUBIC = [1, 0, 1, 1]  # x^3 + x^2 + 1


# -- shift resistance ---------------------------------------------------------


def test_every_quadratic_is_sr_over_f5():
    for c0, c1, c2 in itertools.product(range(5), range(5), range(1, 5)):
        assert sr_check(P(5, [c0, c1, c2]), 2, r_max=2)


def test_every_quartic_is_sr_over_f3():
    for coeffs in itertools.product(range(3), range(3), range(3), range(3), range(1, 3)):
        assert sr_check(P(3, list(coeffs)), 4, r_max=2)


def test_non_sr_witness():
    f = P(2, [1, 1, 1]) * P(2, [1, 1, 0, 1])
    res = sr_check(f, 5, r_max=1)
    assert not res.holds
    r, a = res.witness
    assert r == 1 and a.is_zero()


def test_sr_size_cap():
    with pytest.raises(SizeCapExceeded):
        sr_check(P(5, [1, 1, 1]), 2, r_max=3, cap=1000)


# -- the chain ------------------------------------------------------------------


def test_first_extension_is_generator():
    tr = build_chain(P(2, CUBIC), 1)
    assert tr.levels == (0, 1)
    assert tr.alpha(1) == tr.desc.gen(1)


def test_three_extensions_use_shifted_moduli():
    f = P(2, CUBIC)
    tr = build_chain(f, 3)
    assert tr.desc.degrees == (3, 3, 3)
    assert tr.desc.cardinality() == 2**27
    for n in range(3):
        assert tr.moduli_used[n] == tr.shifted(n).monic()
        assert is_irreducible(tr.shifted(n))


def test_chain_iterate_identity():
    tr = build_chain(P(2, CUBIC), 2)
    for n in range(3):
        assert tr.check_iterate_identity(n)


@pytest.mark.parametrize("policy", ["first", "last"])
def test_chain_extends_through_reducible_level(policy):
    # x^3 + x + 1 over F_2 has f_1 reducible over F_8
    f = P(2, [1, 1, 0, 1])
    tr = build_chain(f, 3, policy=policy)
    assert tr.step_degrees[0] == 3
    assert tr.step_degrees[1] < 3
    assert all(k <= 3 for k in tr.step_degrees)
    for n in range(4):
        assert tr.check_iterate_identity(n)


def test_chain_policies_can_differ_but_agree_on_verdicts():
    f = P(2, [1, 1, 0, 1])
    a = build_chain(f, 2, "first")
    b = build_chain(f, 2, "last")
    assert [is_irreducible(a.shifted(n)) for n in range(2)] == [is_irreducible(b.shifted(n)) for n in range(2)]


def test_chain_too_short():
    tr = ChainTrace.start(P(2, CUBIC))
    with pytest.raises(ChainTooShort):
        tr.alpha(1)


def test_capelli_step_examples():
    f = P(2, CUBIC)
    tr = build_chain(f, 1)
    assert capelli_step(f, tr, 0) == is_irreducible(f)
    assert capelli_step(f, tr, 1)
    g = quad_build(7, 1, 3).f
    assert not capelli_step(g, extend_chain(ChainTrace.start(g)), 1)


# -- certification ----------------------------------------------------------------


def test_cubic_theorem_and_generic_agree():
    f = P(2, CUBIC)
    thm = certify_stability(f, 3, 5, "theorem")
    gen = certify_stability(f, 3, 5, "generic")
    assert thm.verdicts == gen.verdicts == [IRREDUCIBLE] * 6
    assert thm.stable_to_depth and thm.certificate.startswith("cubic2-family")
    assert gen.certificate == "depth-limited evidence to depth 5"


def test_quadratic_family_member_depth_8():
    rep = certify_stability(P(5, [1, 1, 1]), 2, 8, "theorem")
    assert rep.verdicts == [IRREDUCIBLE] * 9


def test_family_quadratic_mod_3_fails_at_depth_1():
    rep = certify_stability(quad_build(7, 1, 3).f, 2, 2, "generic")
    assert rep.first_reducible == 1
    assert rep.verdicts == [IRREDUCIBLE, REDUCIBLE, UNTESTED]


def test_degree_and_budget_errors():
    with pytest.raises(DegreeUnsupported):
        certify_stability(P(2, [1, 1]))
    with pytest.raises(DegreeUnsupported):
        certify_stability(P(2, [1, 1, 0, 0, 0, 1]))
    with pytest.raises(DepthBudgetExceeded):
        certify_stability(P(2, CUBIC), 3, depth_budget(3, "generic") + 1, "generic")


def test_depth_budget_env_override(monkeypatch):
    monkeypatch.setenv("STABLEPOLY_DEPTH_3", "2")
    assert depth_budget(3) == 2
    with pytest.raises(DepthBudgetExceeded):
        certify_stability(P(2, CUBIC), 3, 3)


def test_report_record_without_timing_is_deterministic():
    a = certify_stability(P(5, [1, 1, 1]), 2, 3).as_record(with_timing=False)
    b = certify_stability(P(5, [1, 1, 1]), 2, 3).as_record(with_timing=False)
    assert a == b and "seconds" not in a


# -- oracle equivalence with frozen sympy data ----------------------------------


def _expected(flags, depth):
    """Capelli verdicts n = 0..depth from iterate flags f^(1), f^(2), ..."""
    out = []
    for n in range(depth + 1):
        if n < len(flags) and flags[n]:
            out.append(IRREDUCIBLE)
        else:
            out.append(REDUCIBLE)
            break
    return out + [UNTESTED] * (depth + 1 - len(out))


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("method", ["generic", "theorem"])
def test_all_quadratics_match_sympy_iterates(p, method):
    for key, flags in ORACLES[f"quadratic_iterates_f{p}"].items():
        f = P(p, [int(v) for v in key.split(",")])
        assert certify_stability(f, 2, 4, method).verdicts == _expected(flags, 4), key


def test_all_cubics_f2_match_sympy_iterates():
    for key, flags in ORACLES["cubic_iterates_f2"].items():
        f = P(2, [int(v) for v in key.split(",")])
        for method in ("generic", "theorem"):
            assert certify_stability(f, 3, 4, method).verdicts == _expected(flags, 4), key


def test_all_monic_quartics_f3_match_sympy_iterates():
    for key, flags in ORACLES["quartic_iterates_f3"].items():
        f = P(3, [int(v) for v in key.split(",")])
        for method in ("generic", "theorem"):
            assert certify_stability(f, 4, 2, method).verdicts == _expected(flags, 2), key


def test_direct_oracle_examples():
    f = P(2, CUBIC)
    assert direct_iterate_oracle(f, 3)
    assert not direct_iterate_oracle(P(5, [0, 0, 1]), 2)
    assert oracle_verdicts(f, 3, cap=10) == [True, True, None]


def test_oracle_over_extension_field():
    F = field_of_order(4)
    f = Poly.parse(F, "[0,1],1,1")
    rep = certify_stability(f, 2, 3, "generic")
    flags = [direct_iterate_oracle(f, n) for n in range(1, 5)]
    assert rep.verdicts == _expected(flags, 3)
