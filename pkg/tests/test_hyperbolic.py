import itertools

import pytest
from conftest import UNITARY_CONFIGS, as_tuples, isotropic_vector, oracle_for, rng, unitary_ctx
from hypothesis import given, settings
from hypothesis import strategies as st

from sandwich.errors import BadVector, FormParamViolation, NotIsotropic, NotMember
from sandwich.hyperbolic import FormRingContext, check_unitary_relations
from sandwich.ring import make_ring
from sandwich.words import evaluate_elem

SMALL = [
    (dict(m=2), "min"), (dict(m=2), "max"),
    (dict(m=3), "min"), (dict(m=3, lam=(2,)), "max"),
    (dict(m=4), "min"), (dict(m=4), "max"), (dict(m=4, lam=(3,)), "min"), (dict(m=4, lam=(3,)), "max"),
    (dict(m=3, f=(1, 0, 1), involution="neg"), "min"), (dict(m=3, f=(1, 0, 1), involution="neg"), "max"),
]


@pytest.mark.parametrize("kw,form", SMALL)
def test_relations_exhaustive(kw, form):
    ctx = FormRingContext(make_ring(**kw), form, 3)
    rep = check_unitary_relations(ctx)
    assert rep["ok"], rep


def test_generators_match_definition():
    ctx = unitary_ctx("gaussian-Z5")
    o = oracle_for(ctx)
    x = ctx.ring([2, 3])
    for i, j in itertools.permutations(ctx.labels, 2):
        if j != -i:
            assert as_tuples(ctx.T(i, j, x).to_json()) == o.tv(i, j, tuple(x.c))
    for y in ctx.long_params(1):
        assert as_tuples(ctx.T(1, -1, y).to_json()) == o.tv(1, -1, tuple(y.c))


def test_long_root_parameter_validation():
    ctx = FormRingContext(make_ring(m=5), "min", 3)
    with pytest.raises(FormParamViolation):
        ctx.T(1, -1, 1)
    assert ctx.T(1, -1, 0).is_identity()


def test_membership():
    ctx = unitary_ctx("symplectic-Z4")
    s, si = ctx.random_member(10, rng(1))
    assert ctx.is_unitary_member(s)
    assert ctx.require_member(s) == si
    # -1 is unitary, 2 is not even invertible over Z/4
    assert ctx.is_unitary_member(ctx.T(1, 2, 1).scale(3))
    with pytest.raises(NotMember):
        ctx.require_member(ctx.T(1, 2, 1).scale(2))


def test_polarity_is_the_form():
    ctx = unitary_ctx("gaussian-Z5")
    g = rng(2)
    for _ in range(20):
        u = [ctx.ring.random(g) for _ in range(6)]
        v = [ctx.ring.random(g) for _ in range(6)]
        pu = ctx.polarity(u)
        assert sum((a * b for a, b in zip(pu, v)), ctx.ring.zero) == ctx.form_h(u, v)


def _members(name, count, seed):
    ctx = unitary_ctx(name)
    g = rng(seed)
    return ctx, g, [ctx.random_member(16, g, unit=True) for _ in range(count)]


@pytest.mark.parametrize("name", list(UNITARY_CONFIGS))
def test_polarity_intertwines(name):
    ctx, g, members = _members(name, 10, 3)
    for s, si in members:
        v = [ctx.ring.random(g) for _ in range(6)]
        assert ctx.polarity(ctx.matvec(s, v)) == ctx.vecmat(ctx.polarity(v), si)


@pytest.mark.parametrize("name", list(UNITARY_CONFIGS))
def test_column_values_reference(name):
    ctx, g, members = _members(name, 5, 4)
    o = oracle_for(ctx)
    for s, _ in members:
        S = o.from_json(s.to_json())
        for j in ctx.labels:
            assert ctx.value(ctx.column(s, j)).to_json() == list(o.column_value(S, j))
            assert ctx.value(ctx.column(s, j)) in ctx.form


def test_eichler_errors():
    ctx = unitary_ctx("symplectic-Z3")
    v = ctx.basis(-1)
    with pytest.raises(BadVector):
        ctx.eichler(v)
    w = ctx.basis(2)
    w[ctx.pos(-2)] = ctx.ring(1)
    with pytest.raises(NotIsotropic):
        ctx.eichler(w)
    mat, word = ctx.eichler(w, exact=False)
    assert len(word) == 5


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(UNITARY_CONFIGS)), st.integers(0, 10**6))
def test_eichler_conjugation(name, seed):
    ctx = unitary_ctx(name)
    g = rng(seed)
    s, si = ctx.random_member(16, g, unit=True)
    v = isotropic_vector(ctx, g)
    mat, word = ctx.eichler(v, sigma=s)
    assert evaluate_elem(ctx, word) == mat
    assert s @ mat @ si == ctx.eichler_conjugate(s, v)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(UNITARY_CONFIGS)), st.integers(0, 10**6))
def test_value_formula_and_duality(name, seed):
    ctx = unitary_ctx(name)
    g = rng(seed)
    s, si = ctx.random_member(16, g, unit=True)
    i = int(g.choice(ctx.labels))
    j = int(g.choice([h for h in ctx.labels if h not in (i, -i)]))
    hat = ctx.P(i, j) @ s @ ctx.P(j, i)
    assert ctx.hat_value_formula(s, i, j) == ctx.value(ctx.column(hat, i))
    # row-column duality on the hyperbolic unit diag(u, ..., conj(u)^-1)
    u = [x for x in ctx.ring.elements() if x.is_unit()][int(g.integers(2))]
    d = ctx.hyperbolic_unit(u)
    assert ctx.dual_row_column_check(d, 1, u)
    assert ctx.dual_row_column_check(s, 2, 1) or ctx.column(s, 2) != ctx.basis(2)
