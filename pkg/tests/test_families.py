from __future__ import annotations

import itertools

import numpy as np
import pytest

from helpers import ORACLES, seeded
from hypothesis import given
from hypothesis import strategies as st
from stablepoly.errors import HypothesisViolated, WrongResidueClass, ZeroParameter
from stablepoly.families import (
    Cubic2Criterion,
    beta_recurrence_check_cubic,
    beta_recurrence_check_quartic,
    cubic2_build,
    cubic2_hypothesis,
    cubic2_is_stable,
    cubic2_match,
    delta_recurrence_check,
    family_criterion,
    quad_build,
    quad_count_lower_bound,
    quad_from_abc,
    quad_is_stable,
    quad_match,
    quartic3_build,
    quartic3_certify,
    quartic3_match,
    quartic_build,
    quartic_is_stable,
    quartic_match,
    trace_inverse_identity,
    trace_inverse_identity_exhaustive,
    x3_x2_1_stable_over,
)
from stablepoly.gftower import field_of_order, is_square
from stablepoly.polyring import Poly, discriminant, is_irreducible
from stablepoly.stability import IRREDUCIBLE, certify_stability


# -- quadratic family ---------------------------------------------------------


def test_quad_build_examples():
    inst = quad_build(5, 1, 2)
    assert inst.f == Poly.from_ints(field_of_order(5), [1, 1, 1])
    inst13 = quad_build(13, 1, 2)
    assert discriminant(inst13.f).index() == 2
    with pytest.raises(ZeroParameter):
        quad_build(5, 0, 2)


def test_quad_from_abc_agrees_with_delta_form():
    for a, b, c in itertools.product(range(5), range(1, 5), range(5)):
        if (4 * a * b + 2 * c) % 5 == 0:
            with pytest.raises(ZeroParameter):
                quad_from_abc(5, a, b, c)
            continue
        inst = quad_from_abc(5, a, b, c)
        assert quad_match(inst.f) is not None


def test_quad_is_stable_examples():
    assert quad_is_stable(quad_build(5, 1, 2))
    assert not quad_is_stable(quad_build(5, 1, 4))
    assert not quad_is_stable(quad_build(7, 1, 3))


def test_delta_recurrence_q5_and_q13():
    chk = delta_recurrence_check(quad_build(5, 1, 2), 4)
    assert chk.ok and all(chk.nonsquare)
    chk = delta_recurrence_check(quad_build(13, 1, 2), 4)
    assert chk.ok and all(chk.nonsquare)


def test_delta_one_is_square_for_q7():
    chk = delta_recurrence_check(quad_build(7, 1, 3), 1)
    assert chk.nonsquare == [True, False]


def test_quad_count_q5_and_q13():
    c5 = quad_count_lower_bound(5)
    assert c5.count == 8 and len({i.f for i in c5.instances}) == 8
    assert (c5.family_bound, c5.prior_bound) == (12, 4)
    for inst in c5.instances:
        assert certify_stability(inst.f, 2, 6, "theorem").stable_to_depth
    c13 = quad_count_lower_bound(13)
    assert c13.count == 72
    for inst in c13.instances[::12]:
        assert certify_stability(inst.f, 2, 4, "generic").stable_to_depth
    with pytest.raises(WrongResidueClass):
        quad_count_lower_bound(7)


def test_square_delta_fails_by_depth_1():
    F = field_of_order(5)
    for b in range(1, 5):
        for dl in (1, 4):
            rep = certify_stability(quad_build(F, b, dl).f, 2, 1, "generic")
            assert rep.first_reducible is not None and rep.first_reducible <= 1


# -- cubic family in characteristic 2 -------------------------------------------


def test_cubic2_m1():
    inst = cubic2_build(1, 1, 1)
    assert inst.f == Poly.from_ints(field_of_order(2), [1, 0, 1, 1])
    assert cubic2_is_stable(inst)


def test_cubic2_m2_verdict_is_irreducibility():
    F = field_of_order(4)
    inst = cubic2_build(2, 1, 1)
    x = Poly.x(F)
    assert inst.f == (x + F.one()) ** 3 + x
    assert cubic2_is_stable(inst) == is_irreducible(inst.f)


def test_cubic2_hypothesis_violation_found_in_f8():
    F = field_of_order(8)
    bad = [(a, b) for a, b in itertools.product(list(F.elements())[1:], repeat=2) if not cubic2_hypothesis(a, b)]
    assert bad
    a, b = bad[0]
    with pytest.raises(HypothesisViolated):
        cubic2_build(F, a, b)


def test_cubic2_match_round_trip():
    F = field_of_order(16)
    for a, b in itertools.product([1, 3, 7], [1, 2, 9]):
        inst = cubic2_build(F, a, b, check_hypothesis=False)
        got = cubic2_match(inst.f)
        assert got is not None and got.f == inst.f


def test_cubic2_chain_checks_m1():
    checks = beta_recurrence_check_cubic(cubic2_build(1, 1, 1), 4)
    assert all(all(c.values()) for c in checks)


def test_cubic2_criterion_records_checks():
    inst = cubic2_build(1, 1, 1)
    crit = Cubic2Criterion(inst)
    rep = certify_stability(inst.f, 3, 4, "theorem", criterion=crit)
    assert rep.stable_to_depth and len(crit.checks) == 5


def test_cubic2_induction_tag_above_threshold():
    inst = cubic2_build(1, 1, 1)
    crit = Cubic2Criterion(inst, explicit_bits=10)
    rep = certify_stability(inst.f, 3, 4, "theorem", criterion=crit)
    assert rep.methods[:3] == ["theorem:cubic-trinomial"] * 3
    assert rep.methods[3:] == ["theorem:cubic2-family(induction)"] * 2


def test_trace_inverse_identity_exhaustive_small():
    for m in range(1, 7):
        checked, failures = trace_inverse_identity_exhaustive(m)
        assert checked == 2**m - 2 and failures == 0


@seeded
@given(st.integers(7, 8), st.integers(0, 2**32 - 1))
def test_trace_inverse_identity_random_larger_fields(m, s):
    F = field_of_order(2**m)
    u = F.from_index(2 + s % (2**m - 2))
    assert trace_inverse_identity(u)


def test_cubic_closed_form_matches_engine():
    f_desc = {m: field_of_order(2**m) for m in (1, 2, 3, 4, 5)}
    for m, F in f_desc.items():
        f = Poly.from_ints(F, [1, 0, 1, 1])
        rep = certify_stability(f, 3, 4 if m < 5 else 3, "theorem")
        assert rep.stable_to_depth == x3_x2_1_stable_over(m)


def test_x3_x_1_over_f8_reducible_at_depth_0():
    f = Poly.from_ints(field_of_order(8), [1, 1, 0, 1])
    rep = certify_stability(f, 3, 2, "theorem")
    assert rep.first_reducible == 0


# -- quartic family, q = 1 mod 4 -------------------------------------------------


def test_quartic_build_example():
    inst = quartic_build(5, 1, 2)
    assert inst.f.c.tolist() == ORACLES["quartic_family_f5"]["1,2"]["poly"]
    assert quartic_is_stable(inst)
    assert not quartic_is_stable(quartic_build(5, 1, 4))
    assert not is_irreducible(quartic_build(5, 1, 4).f)


def test_quartic_family_matches_frozen_oracle():
    for key, rec in ORACLES["quartic_family_f5"].items():
        a, b = (int(v) for v in key.split(","))
        inst = quartic_build(5, a, b)
        assert inst.f.c.tolist() == rec["poly"]
        assert quartic_match(inst.f) is not None
        rep = certify_stability(inst.f, 4, 2, "theorem")
        stable = all(rec["iterates"]) and len(rec["iterates"]) == 3
        assert rep.stable_to_depth == stable == quartic_is_stable(inst), key


def test_quartic_f9_square_product():
    F = field_of_order(9)
    g = next(e for e in F.elements() if not e.is_zero() and not is_square(e) and e.desc.degree() == 2 and not e.in_level(0))
    inst = quartic_build(F, g, g)
    assert not quartic_is_stable(inst)
    assert certify_stability(inst.f, 4, 1, "theorem").first_reducible == 0


def test_quartic_recurrence_q5():
    recs = beta_recurrence_check_quartic(quartic_build(5, 1, 2), 4)
    assert all(r["nonsquare"] for r in recs)
    assert all(r["beta_recurrence"] for r in recs[1:])


def test_quartic_wrong_residue_class():
    with pytest.raises(WrongResidueClass):
        quartic_build(7, 1, 1)


# -- quartic family, q = 3^m -------------------------------------------------------


def test_quartic3_matches_frozen_oracle():
    for key, rec in ORACLES["quartic3_family_f3"].items():
        a, b, c = (int(v) for v in key.split(","))
        inst = quartic3_build(3, a, b, c)
        assert inst.f.c.tolist() == rec["poly"]
        assert quartic3_match(inst.f) is not None
        rep = quartic3_certify(inst, 2)
        expect = [IRREDUCIBLE] * min(len(rec["iterates"]), 3)
        if not all(rec["iterates"]):
            expect[-1] = "reducible"
        assert rep.verdicts[: len(expect)] == expect, key


def test_quartic3_level0_resolvent_example():
    # beta_0 = b a = 1 with c = 1: g_0 = y^4 + y + 2
    inst = quartic3_build(3, 1, 1, 1)
    rep = quartic3_certify(inst, 0)
    assert rep.verdicts == [IRREDUCIBLE] and is_irreducible(inst.f)


def test_quartic3_over_f9_agrees_with_generic():
    F = field_of_order(9)
    rng = np.random.default_rng(9)
    for _ in range(6):
        a, b, c = (int(v) for v in rng.integers(1, 9, 3))
        inst = quartic3_build(F, a, b, c)
        assert quartic3_certify(inst, 1).verdicts == certify_stability(inst.f, 4, 1, "generic").verdicts


def test_family_dispatch():
    assert family_criterion(Poly.from_ints(field_of_order(5), [1, 1, 1])).name == "quadratic-family"
    assert family_criterion(Poly.from_ints(field_of_order(2), [1, 0, 1, 1])).name == "cubic2-family"
    assert family_criterion(quartic_build(5, 1, 2).f).name == "quartic-family"
    assert family_criterion(quartic3_build(3, 1, 1, 1).f).name == "quartic3-resolvent"
    assert family_criterion(Poly.from_ints(field_of_order(3), [1, 1, 0, 1])) is None
