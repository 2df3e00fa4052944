import numpy as np
import pytest
from conftest import as_tuples, oracle_for, rng
from hypothesis import given, settings
from hypothesis import strategies as st

from sandwich.errors import DimMismatch, NotInvertible
from sandwich.gln import GlContext
from sandwich.hyperbolic import FormRingContext
from sandwich.linalg import Mat, det, det_adjugate, inverse
from sandwich.ring import make_ring
from sandwich.words import ConjWord, evaluate_elem, invert_word, shuffle_lemma

RINGS = [dict(m=6), dict(m=5, f=(1, 0, 1), involution="neg"), dict(m=9)]


def random_mat(r, n, g):
    els = list(r.elements())
    return Mat.from_entries(r, [[els[int(g.integers(len(els)))] for _ in range(n)] for _ in range(n)])


@pytest.mark.parametrize("spec", RINGS)
def test_det_matches_leibniz(spec):
    r = make_ring(**spec)
    ctx = GlContext(r, 3)
    o = oracle_for(ctx)
    g = rng(3)
    for _ in range(10):
        a = random_mat(r, 3, g)
        assert det(a).to_json() == list(o.det(o.from_json(a.to_json())))


@pytest.mark.parametrize("spec", RINGS)
def test_adjugate_identity(spec):
    r = make_ring(**spec)
    g = rng(4)
    for _ in range(10):
        a = random_mat(r, 4, g)
        d, adj = det_adjugate(a)
        assert a @ adj == Mat.scalar(r, 4, d)
        assert adj @ a == Mat.scalar(r, 4, d)


def test_inverse_and_errors():
    r = make_ring(m=6)
    ctx = GlContext(r, 3)
    s, si = ctx.random_member(10, rng(1))
    assert inverse(s) == si
    with pytest.raises(NotInvertible):
        inverse(Mat.scalar(r, 3, 2))
    with pytest.raises(DimMismatch):
        Mat.identity(r, 2) @ Mat.identity(r, 3)


def test_json_roundtrip():
    r = make_ring(m=5, f=(1, 0, 1), involution="neg")
    a = random_mat(r, 3, rng(0))
    assert Mat.from_json(r, a.to_json()) == a


def _ctx_words():
    ctx = FormRingContext(make_ring(m=4, lam=(3,)), "max", 3)
    s, si = ctx.random_member(10, rng(5))
    return ctx, s, si


def test_conjword_operations_match_reference():
    ctx, s, si = _ctx_words()
    o = oracle_for(ctx)
    e = (ctx.tv(1, 2, 1), ctx.tv(-3, 1, 2))
    w = ConjWord.single(ctx, s, si, e, 1) + ConjWord.single(ctx, s, si, (), -1)
    for cand in (w, w.invert(), w.conj_by(e), w.commutator_with(e), w.commutator_right(e)):
        assert cand.evaluate() == cand.value
        assert as_tuples(cand.value.to_json()) == o.evaluate_trace(cand.to_json())
    assert w.commutator_with(e).count == 2 * w.count


def test_rebase_and_flip():
    ctx, s, si = _ctx_words()
    mu = ctx.P_word(1, 2)
    m, mi = evaluate_elem(ctx, mu), evaluate_elem(ctx, invert_word(mu))
    moved = m @ s @ mi
    w = ConjWord.single(ctx, moved, m @ si @ mi, (ctx.tv(2, 3, 1),), 1)
    assert w.rebase(mu, s, si).evaluate() == w.value
    flipped = ConjWord.single(ctx, si, s, (), 1).flip_base()
    assert flipped.sigma == s and flipped.evaluate() == si


def test_substitute_multiplies_counts():
    ctx, s, si = _ctx_words()
    zeta = ConjWord.single(ctx, s, si, (ctx.tv(1, 2, 1),), 1) + ConjWord.single(ctx, s, si, (), -1)
    outer = ConjWord.single(ctx, zeta.value, zeta.value_inv, (ctx.tv(3, 1, 1),), 1) + \
        ConjWord.single(ctx, zeta.value, zeta.value_inv, (), -1)
    sub = outer.substitute(zeta)
    assert sub.count == outer.count * zeta.count
    assert sub.evaluate() == outer.value


def test_prune_keeps_value():
    ctx, s, si = _ctx_words()
    w = ConjWord.single(ctx, s, si, (ctx.tv(1, 2, 0),), 1) + ConjWord.single(ctx, s, si, (), -1)
    p = w.prune()
    assert p.count == 0 and p.evaluate().is_identity()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_shuffle_identity(seed):
    ctx, s, si = _ctx_words()
    g = np.random.default_rng(seed)
    a = ctx.random_word(2, g)
    b = ctx.random_word(3, g)
    # any word serves as a word for b c, with c = b^-1 (b c)
    bc_word = ConjWord.single(ctx, s, si, ctx.random_word(2, g), 1)
    word, left, right = shuffle_lemma(a, b, bc_word)
    assert word.evaluate() == left @ right
    assert word.count == 2 * bc_word.count
