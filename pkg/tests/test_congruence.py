import pytest
from conftest import rng
from hypothesis import given, settings
from hypothesis import strategies as st

from sandwich.congruence import (FormIdeal, Ideal, RelFormParam, is_in_full_congruence,
                                 is_in_principal, is_in_unitary_full, is_in_unitary_principal,
                                 level_of, sct_desk_check, unitary_form_ideal)
from sandwich.errors import BudgetExceeded, NotMember
from sandwich.gln import GlContext
from sandwich.hyperbolic import FormRingContext
from sandwich.linalg import Mat
from sandwich.ring import make_ring
from sandwich.words import evaluate_elem, invert_word


def gl(m, n=3):
    return GlContext(make_ring(m=m), n)


def ideal_set(r, *vals):
    return frozenset(r(v) for v in vals)


def test_level_examples():
    ctx = gl(6)
    r = ctx.ring
    assert level_of(ctx, ctx.identity()).realized == ideal_set(r, 0)
    assert level_of(ctx, Mat.scalar(r, 3, 5)).realized == ideal_set(r, 0)
    assert level_of(ctx, ctx.t(1, 2, 3)).realized == ideal_set(r, 0, 3)
    with pytest.raises(NotMember):
        level_of(ctx, Mat.scalar(r, 3, 2))


def test_ideal_realization():
    r = make_ring(m=12)
    assert Ideal(r, (r(8), r(6))).realized == ideal_set(r, 0, 2, 4, 6, 8, 10)
    g = make_ring(m=5, f=(1, 0, 1), involution="neg")
    i = Ideal(g, (g([1, 2]),))
    # 1 + 2t has norm 0, so it generates one of the two factors of F5 x F5
    assert i.check_axioms() and len(i) == 5
    assert not i.is_involution_stable()


def test_congruence_membership_examples():
    ctx = gl(6)
    r = ctx.ring
    three = Ideal(r, (r(3),))
    e = ctx.identity()
    assert is_in_principal(ctx, e, three) and is_in_full_congruence(ctx, e, three)
    assert is_in_principal(ctx, ctx.t(1, 2, 3), three)
    assert not is_in_full_congruence(ctx, ctx.t(1, 2, 1), three)
    assert is_in_full_congruence(ctx, Mat.scalar(r, 3, 5), Ideal(r, ()))
    assert not is_in_principal(ctx, Mat.scalar(r, 3, 5), three)


def test_unitary_principal_examples():
    o = FormRingContext(make_ring(m=5), "min", 3)
    I = Ideal(o.ring, (o.ring(1),))
    zero = FormIdeal(I, RelFormParam(I, o.form.realized, "min"))
    assert is_in_unitary_principal(o, o.identity(), zero)
    assert is_in_unitary_principal(o, o.T(1, 2, 3), zero)

    z4 = FormRingContext(make_ring(m=4), "max", 3)
    r = z4.ring
    two = Ideal(r, (r(2),))
    small = FormIdeal(two, RelFormParam(two, z4.form.realized, "min"))
    big = FormIdeal(two, RelFormParam(two, z4.form.realized, "max"))
    assert small.gamma.realized == ideal_set(r, 0)
    assert not is_in_unitary_principal(z4, z4.T(1, -1, 2), small)
    assert is_in_unitary_principal(z4, z4.T(1, -1, 2), big)


def test_unitary_full_examples():
    ctx = FormRingContext(make_ring(m=4, lam=(3,)), "max", 3)
    r = ctx.ring
    zero_i = Ideal(r, ())
    zero = FormIdeal(zero_i, RelFormParam(zero_i, ctx.form.realized, "min"))
    assert is_in_unitary_full(ctx, ctx.identity(), zero)
    assert not is_in_unitary_full(ctx, ctx.T(1, 3, 1), zero)
    two = Ideal(r, (r(2),))
    fi = FormIdeal(two, RelFormParam(two, ctx.form.realized, "min"))
    assert is_in_unitary_full(ctx, Mat.scalar(r, 6, 3), fi)
    with pytest.raises(BudgetExceeded):
        is_in_unitary_full(ctx, ctx.identity(), zero, budget=10)


def test_relative_form_parameter_axioms():
    ctx = FormRingContext(make_ring(m=5, f=(1, 0, 1), involution="neg"), "max", 3)
    s, _ = ctx.random_member(14, rng(3), unit=True)
    fi = unitary_form_ideal(ctx, s)
    assert fi.ideal.is_involution_stable()
    assert fi.gamma.check_axioms()
    for j in ctx.labels:
        assert ctx.value(ctx.column(s, j)) in fi.gamma


def test_sct_examples():
    ctx = gl(4)
    rep = sct_desk_check(ctx, ctx.t(1, 2, 2))
    assert rep["ok"] and rep["upper_inclusion"]
    assert rep["level_size"] == 2 and rep["lower_inclusion_verified_elements"] == 2
    rep = sct_desk_check(ctx, ctx.identity())
    assert rep["ok"] and rep["level_size"] == 1 and rep["level_generators"] == []
    ctx6 = gl(6, 4)
    s, _ = ctx6.random_member(10, rng(8))
    rep = sct_desk_check(ctx6, s)
    assert rep["ok"], rep["failures"]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["gl4", "gl6", "o4", "o6"]), st.integers(0, 10**6))
def test_level_conjugation_invariance(kind, seed):
    m = int(kind[-1])
    ctx = gl(m) if kind.startswith("gl") else FormRingContext(make_ring(m=m), "min", 3)
    g = rng(seed)
    s, _ = ctx.random_member(6, g)
    eps = ctx.random_word(5, g)
    e, ei = evaluate_elem(ctx, eps), evaluate_elem(ctx, invert_word(eps))
    conj = e @ s @ ei
    assert level_of(ctx, conj).realized == level_of(ctx, s).realized
    assert is_in_full_congruence(ctx, s, level_of(ctx, s))
