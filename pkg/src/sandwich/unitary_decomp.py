"""Entry and value decompositions for the hyperbolic unitary group U_2n(R, Lambda).

Every builder returns a :class:`ConjWord` over ``sigma`` whose propagated value
is claimed to be a specific elementary transvection; public entry points
finalize (and, under strict guards, flat-evaluate) the word.
"""
from __future__ import annotations

from . import guards
from .errors import BadIndex, ExpansionMismatch
from .hyperbolic import FormRingContext
from .linalg import Mat
from .ortho_decomp import _antidiag, _diag_diff, _opposite_diag, route
from .ring import Elem, epsilon, lam_pow, lambda_power
from .words import ConjWord, evaluate_elem, invert_word, shuffle_lemma

M = 160  # factors in one entry word


# shape matching ------------------------------------------------------------

def match_shape(ctx: FormRingContext, mat: Mat, roots) -> dict | None:
    """Witnesses ``x_r`` with ``mat = prod_r T_r(x_r)`` (in the given order), or ``None``.

    Each parameter is read off the remaining matrix at the root position
    before that factor is peeled from the left.
    """
    rest = mat
    out = {}
    for a, b in roots:
        x = ctx.entry(rest, a, b)
        out[(a, b)] = x
        rest = ctx._T_unchecked(a, b, -x) @ rest
    return out if rest.is_identity() else None


def _expect_shape(ctx, mat, roots, fixed: dict, what: str) -> dict:
    wit = match_shape(ctx, mat, roots)
    guards.check(wit is not None, f"{what}: matrix is not of the claimed product shape")
    for root, x in fixed.items():
        guards.check(wit[root] == x, f"{what}: parameter at {root} is {wit[root]}, expected {x}")
    for (a, b), y in wit.items():
        if b == -a:
            guards.check(ctx.long_ok(a, y), f"{what}: long root parameter outside the form parameter")
    return wit


def _col2_roots(ctx):
    return [(i, 2) for i in ctx.labels if i not in (2, -2)] + [(-2, 2)]


# steps 1-3 -----------------------------------------------------------------

def _bracket(ctx, sigma, sigma_inv, tau) -> ConjWord:
    return (ConjWord.single(ctx, sigma, sigma_inv, tau, 1)
            + ConjWord.single(ctx, sigma, sigma_inv, (), -1))


def _xi_guards(ctx, sigma, sigma_inv, tau):
    tau_inv = evaluate_elem(ctx, invert_word(tau))
    guards.check(ctx.row(sigma @ tau_inv, 2) == ctx.row(sigma, 2),
                 "second row of sigma tau^-1 differs from that of sigma")
    xi = sigma @ tau_inv @ sigma_inv
    e = ctx.identity()
    guards.check(ctx.row(xi, 2) == ctx.row(e, 2), "second row of xi is not trivial")
    guards.check(ctx.column(xi, -2) == ctx.column(e, -2), "second last column of xi is not trivial")


def _gens(ctx, sigma):
    s = lambda a, b: ctx.entry(sigma, a, b)
    s23b = s(2, 3).bar
    return s23b * s(2, -1), s23b * s(2, 1), s23b * s(2, 2)


def _step1_fixed(ctx, sigma, sigma_inv, x: Elem) -> ConjWord:
    r = ctx.ring
    s = lambda a, b: ctx.entry(sigma, a, b)
    s23, s22, s2m1 = s(2, 3), s(2, 2), s(2, -1)
    tau = (ctx.tv(2, 1, s23.bar * s23), ctx.tv(3, 1, -(s23.bar * s22)),
           ctx.tv(3, -2, s23.bar * s2m1),
           ctx.tv(3, -3, -(s22.bar * s2m1) + r.lam_bar * s2m1.bar * s22))
    zeta, left, right = shuffle_lemma((ctx.tv(-1, 2, 1),), tau, _bracket(ctx, sigma, sigma_inv, tau))
    if guards.strict():
        _xi_guards(ctx, sigma, sigma_inv, tau)
        _expect_shape(ctx, left, [(3, 1), (-1, 1)], {(3, 1): r.lam * s23.bar * s2m1},
                      "step 1 [tau^-1, T_-1,2(1)]")
        _expect_shape(ctx, right, _col2_roots(ctx), {}, "step 1 [T_-1,2(1), xi]")
    word = zeta.commutator_with((ctx.tv(1, 2, 1),))
    word = word.commutator_with((ctx.tv(-1, 3, -(x * r.lam_bar)),))
    return word.claim(ctx.T(-1, 2, x * _gens(ctx, sigma)[0]))


def _step2_fixed(ctx, sigma, sigma_inv, x: Elem) -> ConjWord:
    r = ctx.ring
    s = lambda a, b: ctx.entry(sigma, a, b)
    s23, s22, s21 = s(2, 3), s(2, 2), s(2, 1)
    tau = (ctx.tv(1, -2, s23.bar * s23), ctx.tv(3, -2, -(s23.bar * s21)),
           ctx.tv(3, -1, r.lam_bar * s23.bar * s22),
           ctx.tv(3, -3, s22.bar * s21 - r.lam_bar * s21.bar * s22))
    zeta, left, right = shuffle_lemma((ctx.tv(-2, -1, 1),), tau, _bracket(ctx, sigma, sigma_inv, tau))
    if guards.strict():
        _xi_guards(ctx, sigma, sigma_inv, tau)
        _expect_shape(ctx, left, [(3, -1), (1, -1)], {(3, -1): s23.bar * s21},
                      "step 2 [tau^-1, T_-2,-1(1)]")
        _expect_shape(ctx, right, _col2_roots(ctx), {}, "step 2 [T_-2,-1(1), xi]")
    word = zeta.commutator_with((ctx.tv(-2, 3, 1),))
    word = word.commutator_with((ctx.tv(-1, 3, -x),))
    return word.claim(ctx.T(-2, 3, x * _gens(ctx, sigma)[1]))


def _step3_fixed(ctx, sigma, sigma_inv, x: Elem) -> ConjWord:
    r = ctx.ring
    s = lambda a, b: ctx.entry(sigma, a, b)
    s23, s22, s2m1 = s(2, 3), s(2, 2), s(2, -1)
    tau = (ctx.tv(2, 1, -(s22.bar * s23)), ctx.tv(3, 1, s22.bar * s22),
           ctx.tv(2, -3, s22.bar * s2m1),
           ctx.tv(2, -2, -(s23.bar * s2m1) + r.lam_bar * s2m1.bar * s23))
    a = (ctx.tv(3, 2, 1),)
    zeta, psi, theta = shuffle_lemma(a, tau, _bracket(ctx, sigma, sigma_inv, tau))
    psi_word = invert_word(tau) + a + tau + invert_word(a)
    chi, left, right = shuffle_lemma((ctx.tv(1, 2, 1),), psi_word, zeta)
    if guards.strict():
        _xi_guards(ctx, sigma, sigma_inv, tau)
        _expect_shape(ctx, psi, [(3, 1), (3, -3), (3, -2)], {(3, 1): -(s22.bar * s23)},
                      "step 3 psi")
        _expect_shape(ctx, theta, _col2_roots(ctx), {}, "step 3 theta")
        _expect_shape(ctx, left, [(3, 2), (3, -3), (3, -1)], {(3, 2): s22.bar * s23},
                      "step 3 [psi^-1, T_12(1)]")
        _expect_shape(ctx, right, [(-2, 2)], {}, "step 3 [T_12(1), theta]")
    word = chi.commutator_with((ctx.tv(2, -1, 1),))
    word = word.commutator_with((ctx.tv(-2, 3, x.bar),))
    target = ctx.T(1, 2, x * _gens(ctx, sigma)[2])
    if guards.strict():
        guards.check(target == ctx.T(-2, -1, -(x.bar * s22.bar * s23)), "step 3 mirror identity")
    return word.claim(target)


_STEPS = {1: (_step1_fixed, (-1, 2)), 2: (_step2_fixed, (-2, 3)), 3: (_step3_fixed, (1, 2))}


def _step(ctx, sigma, sigma_inv, which: int, x, k: int, l: int) -> ConjWord:
    """``T_kl(x g)`` for the step's generator ``g``."""
    if k in (l, -l):
        raise BadIndex("need k != +-l")
    x = ctx.ring(x)
    build, src = _STEPS[which]
    if src == (k, l):
        return build(ctx, sigma, sigma_inv, x)
    nu, c = ctx.router.find((src, (k, l)), unit_coeff=False)
    word = build(ctx, sigma, sigma_inv, ctx.ring.invert(c) * x).conj_by(nu)
    return word.claim(ctx.T(k, l, x * _gens(ctx, sigma)[which - 1]))


def _step_conj(ctx, sigma, sigma_inv, which: int, x, k: int, l: int) -> ConjWord:
    """``T_kl(x conj(g))`` through the mirrored root ``(-l, -k)``."""
    x = ctx.ring(x)
    y = -(lambda_power(ctx.ring, k, l) * x.bar)
    word = _step(ctx, sigma, sigma_inv, which, y, -l, -k)
    return word.claim(ctx.T(k, l, x * _gens(ctx, sigma)[which - 1].bar))


def _prepare(ctx, sigma, sigma_inv):
    return sigma_inv if sigma_inv is not None else ctx.require_member(sigma)


def u_step1_word(ctx: FormRingContext, sigma: Mat, x, k: int, l: int,
                 sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(x conj(sigma_23) sigma_{2,-1})``, 16 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _step(ctx, sigma, sigma_inv, 1, x, k, l).finalize(op="u_step1_word", kl=[k, l])


def u_step2_word(ctx: FormRingContext, sigma: Mat, x, k: int, l: int,
                 sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(x conj(sigma_23) sigma_21)``, 16 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _step(ctx, sigma, sigma_inv, 2, x, k, l).finalize(op="u_step2_word", kl=[k, l])


def u_step3_word(ctx: FormRingContext, sigma: Mat, x, k: int, l: int,
                 sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(x conj(sigma_23) sigma_22)``, 32 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _step(ctx, sigma, sigma_inv, 3, x, k, l).finalize(op="u_step3_word", kl=[k, l])


# step 4 --------------------------------------------------------------------

def buckets(ctx: FormRingContext, sigma: Mat, sigma_inv: Mat) -> tuple[list, Elem, Elem]:
    """Coefficients expressing ``sigma_23 - conj(zeta_23) zeta_22`` in the step generators.

    Returns ``(buckets, zeta_22, zeta_23)`` where ``zeta_22, zeta_23`` are the
    closed-form values of ``tau_11, tau_12``.
    """
    r = ctx.ring
    s = lambda a, b: ctx.entry(sigma, a, b)
    sp11 = ctx.entry(sigma_inv, 1, 1)
    g1, g2, g3 = _gens(ctx, sigma)
    s23 = s(2, 3)
    alpha = -(sp11 * g2) + r.lam_bar * s(-1, 1) * g1.bar
    beta = -(sp11 * g3) + r.lam_bar * s(-1, 2) * g1.bar + s23.bar * alpha
    one_a = r.one + alpha
    out = [
        ("G2", sp11 * s23),
        ("G1conj", -(r.lam_bar * s(-1, 1) * s23)),
        ("G3conj", one_a * sp11.bar),
        ("G1", -(one_a * (r.lam * s(-1, 2).bar + r.lam * s23 * s(-1, 1).bar))),
        ("G2conj", one_a * s23 * sp11.bar),
    ]
    return out, one_a, s23.bar + beta


_BUCKET_STEP = {"G1": 1, "G2": 2, "G3": 3, "G1conj": 1, "G2conj": 2, "G3conj": 3}


def bucket_value(ctx, sigma, tag: str, coeff: Elem) -> Elem:
    g = _gens(ctx, sigma)[_BUCKET_STEP[tag] - 1]
    return coeff * (g.bar if tag.endswith("conj") else g)


def _entry_23(ctx, sigma, sigma_inv, x: Elem, k: int, l: int) -> ConjWord:
    """``T_kl(x sigma_23)``, 160 factors."""
    r = ctx.ring
    s23 = ctx.entry(sigma, 2, 3)
    t = (ctx.tv(1, 2, -s23.bar),)
    tau_word = (ConjWord.single(ctx, sigma, sigma_inv, (), -1)
                + ConjWord.single(ctx, sigma, sigma_inv, t, 1))
    mu = ctx.P_word(1, 3) + ctx.P_word(2, 1)
    zeta_word = tau_word.conj_by(mu)
    zeta, zeta_inv = zeta_word.value, zeta_word.value_inv
    bks, z22, z23 = buckets(ctx, sigma, sigma_inv)
    if guards.strict():
        guards.check(ctx.entry(zeta, 2, 2) == z22, "zeta_22 differs from tau_11", ExpansionMismatch)
        guards.check(ctx.entry(zeta, 2, 3) == z23, "zeta_23 differs from tau_12", ExpansionMismatch)
        total = sum((bucket_value(ctx, sigma, tag, c) for tag, c in bks), r.zero)
        guards.check(total == s23 - z23.bar * z22,
                     "bucket expansion does not reproduce sigma_23 - conj(zeta_23) zeta_22",
                     ExpansionMismatch)
    head = _step(ctx, zeta, zeta_inv, 3, x, k, l).substitute(zeta_word)
    word = head
    for tag, c in bks:
        step = _BUCKET_STEP[tag]
        if tag.endswith("conj"):
            word = word + _step_conj(ctx, sigma, sigma_inv, step, x * c, k, l)
        else:
            word = word + _step(ctx, sigma, sigma_inv, step, x * c, k, l)
    word.meta["buckets"] = [{"tag": tag, "coefficient": c.to_json()} for tag, c in bks]
    return word.claim(ctx.T(k, l, x * s23))


def _entry_x(ctx, sigma, sigma_inv, x, i, j, k, l) -> ConjWord:
    """``T_kl(x sigma_ij)``, 160 factors."""
    if i in (j, -j) or k in (l, -l):
        raise BadIndex("need i != +-j and k != +-l")
    x = ctx.ring(x)
    if (i, j) == (2, 3):
        return _entry_23(ctx, sigma, sigma_inv, x, k, l)
    mu, c = ctx.router.find(((i, j), (2, 3)), unit_coeff=False)
    mu_m, mu_m_inv = evaluate_elem(ctx, mu), evaluate_elem(ctx, invert_word(mu))
    moved, moved_inv = mu_m @ sigma @ mu_m_inv, mu_m @ sigma_inv @ mu_m_inv
    if guards.strict():
        guards.check(ctx.entry(moved, 2, 3) == c * ctx.entry(sigma, i, j), "monomial routing coefficient")
    word = _entry_23(ctx, moved, moved_inv, ctx.ring.invert(c) * x, k, l)
    word = word.rebase(mu, sigma, sigma_inv)
    return word.claim(ctx.T(k, l, x * ctx.entry(sigma, i, j)))


def _entry(ctx, sigma, sigma_inv, i, j, k, l) -> ConjWord:
    return _entry_x(ctx, sigma, sigma_inv, ctx.ring.one, i, j, k, l)


def _final(word: ConjWord, bound: int, **meta) -> ConjWord:
    word.meta.update(empirical_count=word.count, bound=bound)
    return word.finalize(**meta)


def u_entry_word_32(ctx: FormRingContext, sigma: Mat, sigma_inv: Mat | None = None) -> ConjWord:
    """``T_32(sigma_23)``, 160 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _final(_entry_23(ctx, sigma, sigma_inv, ctx.ring.one, 3, 2), M, op="u_entry_word_32")


def u_entry_word(ctx: FormRingContext, sigma: Mat, i: int, j: int, k: int, l: int,
                 sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(sigma_ij)``, 160 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _final(_entry(ctx, sigma, sigma_inv, i, j, k, l), M, op="u_entry_word", ijkl=[i, j, k, l])


def u_multiple_entry_word(ctx: FormRingContext, sigma: Mat, x, i: int, j: int, k: int, l: int,
                          sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(x sigma_ij)``, 160 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _final(_entry_x(ctx, sigma, sigma_inv, x, i, j, k, l), M,
                  op="u_multiple_entry_word", ijkl=[i, j, k, l])


def u_antidiag_word(ctx: FormRingContext, sigma: Mat, i: int, k: int, l: int,
                    sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(sigma_{i,-i})``, 320 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _final(_antidiag(ctx, sigma, sigma_inv, i, k, l, _entry), 2 * M,
                  op="u_antidiag_word", ikl=[i, k, l])


def u_diag_diff_word(ctx: FormRingContext, sigma: Mat, i: int, j: int, k: int, l: int,
                     sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(sigma_ii - sigma_jj)``, 480 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _final(_diag_diff(ctx, sigma, sigma_inv, i, j, k, l, _entry), 3 * M,
                  op="u_diag_diff_word", ijkl=[i, j, k, l])


def u_opposite_diag_word(ctx: FormRingContext, sigma: Mat, i: int, k: int, l: int,
                         sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(sigma_ii - sigma_{-i,-i})``, 960 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _final(_opposite_diag(ctx, sigma, sigma_inv, i, k, l, _entry), 6 * M,
                  op="u_opposite_diag_word", ikl=[i, k, l])


# linear building blocks with multipliers ------------------------------------

def _antidiag_x(ctx, sigma, sigma_inv, x, a, k, l) -> ConjWord:
    """``T_kl(x sigma_{a,-a})``, 2 * 160 factors."""
    j = next(h for h in range(1, ctx.n + 1) if h not in (a, -a))
    shift = (ctx.tv(j, a, 1),)
    t, t_inv = ctx.T(j, a, 1), ctx.T(j, a, -1)
    sh, sh_inv = t @ sigma @ t_inv, t @ sigma_inv @ t_inv
    first = _entry_x(ctx, sh, sh_inv, x, j, -a, k, l).rebase(shift, sigma, sigma_inv)
    second = _entry_x(ctx, sigma, sigma_inv, -x, j, -a, k, l)
    return (first + second).claim(ctx.T(k, l, x * ctx.entry(sigma, a, -a)))


def _diag_diff_x(ctx, sigma, sigma_inv, x, a, b, k, l) -> ConjWord:
    """``T_kl(x (sigma_aa - sigma_bb))``, 3 * 160 factors."""
    shift = (ctx.tv(b, a, 1),)
    t, t_inv = ctx.T(b, a, 1), ctx.T(b, a, -1)
    sh, sh_inv = t @ sigma @ t_inv, t @ sigma_inv @ t_inv
    first = _entry_x(ctx, sh, sh_inv, x, b, a, k, l).rebase(shift, sigma, sigma_inv)
    second = _entry_x(ctx, sigma, sigma_inv, x, a, b, k, l)
    third = _entry_x(ctx, sigma, sigma_inv, -x, b, a, k, l)
    s = lambda p, q: ctx.entry(sigma, p, q)
    return (first + second + third).claim(ctx.T(k, l, x * (s(a, a) - s(b, b))))


def gen_value(ctx, sigma, gen) -> Elem:
    """Value of a generator ``(kind, a, b, conj)``: an entry, an antidiagonal entry or a diagonal difference."""
    kind, a, b, conj = gen
    s = lambda p, q: ctx.entry(sigma, p, q)
    g = {"e": lambda: s(a, b), "ad": lambda: s(a, -a), "dd": lambda: s(a, a) - s(b, b)}[kind]()
    return g.bar if conj else g


def gen_cost(gen) -> int:
    return {"e": 1, "ad": 2, "dd": 3}[gen[0]] * M


def lin_word(ctx, sigma, sigma_inv, x, gen, k: int, l: int) -> ConjWord:
    """``T_kl(x g)`` for a generator ``g`` (see :func:`gen_value`)."""
    kind, a, b, conj = gen
    x = ctx.ring(x)
    if conj:
        y = -(lambda_power(ctx.ring, k, l) * x.bar)
        word = lin_word(ctx, sigma, sigma_inv, y, (kind, a, b, False), -l, -k)
        return word.claim(ctx.T(k, l, x * gen_value(ctx, sigma, gen)))
    if kind == "e":
        return _entry_x(ctx, sigma, sigma_inv, x, a, b, k, l)
    if kind == "ad":
        return _antidiag_x(ctx, sigma, sigma_inv, x, a, k, l)
    return _diag_diff_x(ctx, sigma, sigma_inv, x, a, b, k, l)


def _aux(ctx, *avoid) -> int:
    return next(h for h in range(1, ctx.n + 1) if h not in avoid and -h not in avoid)


def long_form_word(ctx, sigma, sigma_inv, terms, k: int) -> ConjWord:
    """``T_{k,-k}(lam^(-(eps(k)+1)/2) (w - lam conj(w)))`` with ``w = sum c g``.

    Each term ``(c, g)`` costs twice the generator's entry cost.
    """
    r = ctx.ring
    j = _aux(ctx, k)
    word = ConjWord.empty(ctx, sigma, sigma_inv)
    w = r.zero
    for c, gen in terms:
        c = r(c)
        w = w + c * gen_value(ctx, sigma, gen)
        if k > 0:  # T_{j,-k}(-conj(c g))
            inner = lin_word(ctx, sigma, sigma_inv, -c.bar, gen[:3] + (not gen[3],), j, -k)
        else:
            inner = lin_word(ctx, sigma, sigma_inv, c, gen, j, -k)
        word = word + inner.commutator_with((ctx.tv(k, j, 1),))
    tw = ctx.long_twist(k)
    return word.claim(ctx.T(k, -k, tw * (w - r.lam * w.bar)))


def move_long(ctx, word: ConjWord, i: int, k: int) -> ConjWord:
    """Carry a word for ``T_{i,-i}(y)`` to one for ``T_{k,-k}(lam^((eps(i)-eps(k))/2) y)``."""
    if i == k:
        return word
    if k == -i:
        mid = _aux(ctx, i)
        return move_long(ctx, move_long(ctx, word, i, mid), mid, k)
    return word.conj_by(ctx.P_word(-k, -i))


# part (v) ------------------------------------------------------------------

def _col_roots(ctx, col: int, skip) -> list:
    return [(p, col) for p in ctx.labels if p not in skip]


def _value_square(ctx, sigma, sigma_inv, x: Elem, k: int) -> ConjWord:
    """``T_{k,-k}(lam^(-(eps(k)+1)/2) conj(x sigma_11) |sigma_*1| sigma_11 x)``."""
    r = ctx.ring
    lam, lb = r.lam, r.lam_bar
    s = lambda a, b: ctx.entry(sigma, a, b)
    E = lambda a, b, conj=False: ("e", a, b, conj)
    lin = lambda c, gen, kk, ll: lin_word(ctx, sigma, sigma_inv, c, gen, kk, ll)
    s11 = s(1, 1)
    N = ctx.value(ctx.column(sigma, 1))

    vp = [r.zero] * ctx.dim
    vp[ctx.pos(-2)] = s11.bar
    vp[ctx.pos(-1)] = -s(2, 1).bar
    v = ctx.matvec(sigma_inv, vp)
    tv_mat, tv_word = ctx.eichler(v, exact=False)
    tau = lin(s(2, 1), E(-3, 1), -3, 1) + lin(-s11, E(-3, 1), -3, 2)
    inner = (ConjWord.single(ctx, sigma, sigma_inv, tv_word, 1)
             + ConjWord.single(ctx, sigma, sigma_inv, (), -1) + tau)
    a = (ctx.tv(2, -3, -x),)
    zeta, left, right = shuffle_lemma(a, tv_word, inner)

    vm2, vm3 = ctx.vget(v, -2), ctx.vget(v, -3)
    a1 = x.bar * vm2 * vm3.bar
    alpha = s(-2, 1) * s11 - lam * s11.bar * s(-2, 1).bar
    beta = s(-1, 1) * s11 + lam * s(2, 1).bar * s(-2, 1).bar
    corr = s11.bar * s(3, 1).bar * s(-3, 1) * s11
    gamma, delta = alpha + corr, beta - s(2, 1).bar * s(3, 1).bar * s(-3, 1) * s11
    if guards.strict():
        guards.check(ctx.vget(v, -1) == r.zero, "v_{-1} must vanish")
        xi = sigma @ ctx.inv(tv_mat) @ sigma_inv
        guards.check(xi == ctx.eichler_conjugate(sigma, [-c for c in v]), "xi differs from the Eichler conjugate")
        guards.check(ctx.entry(xi, -2, 2) == alpha and ctx.entry(xi, -1, 2) == beta,
                     "alpha/beta entries of xi")
        xt = xi @ tau.value
        guards.check(ctx.row(xt, -3) == ctx.basis(-3), "row -3 of xi tau is not trivial")
        guards.check(ctx.entry(xt, -2, 2) == gamma and ctx.entry(xt, -1, 2) == delta,
                     "gamma/delta entries of xi tau")
        _expect_shape(ctx, left, [(1, -1), (1, -2), (1, -3)],
                      {(1, -1): lb * (a1 - lam * a1.bar), (1, -2): lb * x.bar * vm3.bar,
                       (1, -3): -(x * vm2.bar)}, "value step [T(-v), T_2,-3(-x)]")
        fixed = {(p, -3): x * s(p, 1) * s11 for p in ctx.labels if p not in (3, -3, -2, -1)}
        fixed.update({(-2, -3): x * gamma, (-1, -3): x * delta})
        _expect_shape(ctx, right, _col_roots(ctx, -3, (3, -3, -2, -1)) + [(-2, -3), (-1, -3), (3, -3)],
                      fixed, "value step [T_2,-3(-x), xi tau]")

    # row 1: T_{1,-1} is absorbed by conjugating the T_{1,-2} and T_{1,-3} words
    u2, u3 = s11 * s11, vm3.bar
    row1 = (lin(-(lb * x.bar * s(1, 3)), E(2, 1), 1, -2).conj_by((ctx.tv(1, 2, u2),))
            + lin(lb * x.bar * s11, E(2, 3), 1, -2).conj_by((ctx.tv(1, 2, u2),))
            + lin(-(x * s11), ("dd", 2, 1, False), 1, -3).conj_by((ctx.tv(1, 3, u3),))
            + lin(x * s(1, 2), E(2, 1), 1, -3).conj_by((ctx.tv(1, 3, u3),)))
    peel = [row1]
    for p in ctx.labels:
        if p not in (1, 3, -3, -2, -1):
            peel.append(lin(x * s11, E(p, 1), p, -3))
    # the T_{3,-3} part of the (-2,-3) conjugation cancels a Lambda_min correction
    peel.append(lin(x * s11, E(-2, 1), -2, -3).conj_by((ctx.tv(3, -2, lb * x.bar),))
                + lin(-(x * lam * s11.bar), E(-2, 1, True), -2, -3)
                + lin(x * s11.bar * s(3, 1).bar * s11, E(-3, 1), -2, -3))
    peel.append(lin(x * s11, ("ad", -1, None, False), -1, -3)
                + lin(x * lam * s(2, 1).bar, E(-2, 1, True), -1, -3)
                + lin(-(x * s(2, 1).bar * s(3, 1).bar * s11), E(-3, 1), -1, -3))
    j = _aux(ctx, 3)
    dword = lin(s11, E(3, 1), j, -3).commutator_with((ctx.tv(3, j, x),))
    word = dword.invert()
    for w in reversed(peel):
        word = word + w.invert()
    word = word + zeta
    main = lb * x.bar * s11.bar * N * s11 * x
    word.claim(ctx.T(3, -3, main))
    word = move_long(ctx, word, 3, k)
    return word.claim(ctx.T(k, -k, ctx.long_twist(k) * x.bar * s11.bar * N * s11 * x))


def u_value_square_word(ctx: FormRingContext, sigma: Mat, x, k: int,
                        sigma_inv: Mat | None = None) -> ConjWord:
    """``T_{k,-k}(lam^(-(eps(k)+1)/2) conj(x) conj(sigma_11) |sigma_*1| sigma_11 x)``."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    ctx.pos(k)
    word = _value_square(ctx, sigma, sigma_inv, ctx.ring(x), k)
    return _final(word, (2 * ctx.n + 17) * M + 4, op="u_value_square_word", k=k)


def _value_col1(ctx, sigma, sigma_inv, k: int) -> ConjWord:
    """``T_{k,-k}(lam^(-(eps(k)+1)/2) |sigma_*1|)`` by splitting ``|sigma_*1| = conj(y) N y``, ``y = 1``."""
    r = ctx.ring
    s = lambda a, b: ctx.entry(sigma, a, b)
    si = lambda a, b: ctx.entry(sigma_inv, a, b)
    N = ctx.value(ctx.column(sigma, 1))
    tw = ctx.long_twist(k)
    gen = lambda q: ("ad", -1, None, False) if q == -1 else ("e", q, 1, False)

    word = _value_square(ctx, sigma, sigma_inv, si(1, 1), k)
    # diagonal terms q != 1 through a long-root commutator
    i, j = _aux(ctx, k), -k
    u = -(tw * lam_pow(r, (epsilon(-i) - epsilon(j)) // 2) * N)
    for q in ctx.labels:
        if q == 1:
            continue
        y = si(1, q)
        word = (word + lin_word(ctx, sigma, sigma_inv, u * y, gen(q), i, j).invert()
                + lin_word(ctx, sigma, sigma_inv, y, gen(q), -i, j).commutator_with((ctx.tv(i, -i, u),)))
    # cross terms: X - lam conj(X) with X = N K
    K = r.zero
    labels = ctx.labels
    for a, q in enumerate(labels):
        for rr in labels[a + 1:]:
            K = K + si(1, q).bar * s(q, 1).bar * s(rr, 1) * si(1, rr)
    terms = [(K * s(h, 1).bar, gen(-h)) for h in range(1, ctx.n + 1)]
    word = word + long_form_word(ctx, sigma, sigma_inv, terms, k)
    return word.claim(ctx.T(k, -k, tw * N))


def _value(ctx, sigma, sigma_inv, j: int, k: int) -> ConjWord:
    if j == 1:
        return _value_col1(ctx, sigma, sigma_inv, k)
    i = 1 if j > 0 or j != -1 else 2
    conj = ctx.P_word(i, j)
    p, p_inv = ctx.P(i, j), ctx.P(j, i)
    hat, hat_inv = p @ sigma @ p_inv, p @ sigma_inv @ p_inv
    word = _value(ctx, hat, hat_inv, i, k).rebase(conj, sigma, sigma_inv)
    if epsilon(i) != epsilon(j):
        s = lambda a, b: ctx.entry(sigma, a, b)
        terms = [(s(i, j).bar, ("e", -i, j, False)), (s(j, j), ("ad", -j, None, True))]
        word = word + long_form_word(ctx, sigma, sigma_inv, terms, k)
    tw = ctx.long_twist(k)
    return word.claim(ctx.T(k, -k, tw * ctx.value(ctx.column(sigma, j))))


def u_value_word(ctx: FormRingContext, sigma: Mat, j: int, k: int,
                 sigma_inv: Mat | None = None) -> ConjWord:
    """``T_{k,-k}(lam^(-(eps(k)+1)/2) |sigma_*j|)`` as a product of sigma-conjugates.

    At most ``(10n+19) * 160 + 4`` factors for ``j = 1`` and ``(10n+25) * 160 + 4`` otherwise.
    """
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    ctx.pos(j)
    ctx.pos(k)
    bound = (10 * ctx.n + (19 if j == 1 else 25)) * M + 4
    return _final(_value(ctx, sigma, sigma_inv, j, k), bound, op="u_value_word", j=j, k=k)
