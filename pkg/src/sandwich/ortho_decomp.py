"""Entry decompositions for the even-dimensional orthogonal group O_2n(R).

All constructions run over a :class:`FormRingContext` in its orthogonal
specialization (trivial involution, lambda = 1, Lambda = 0).
"""
from __future__ import annotations

from . import guards
from .errors import BadIndex, NotMember
from .hyperbolic import FormRingContext
from .linalg import Mat
from .words import ConjWord, evaluate_elem, invert_word, shuffle_lemma


def _require_orthogonal(ctx: FormRingContext) -> None:
    if not ctx.is_orthogonal:
        raise NotMember("context is not the orthogonal specialization")


def _prepare(ctx: FormRingContext, sigma: Mat, sigma_inv: Mat | None) -> Mat:
    _require_orthogonal(ctx)
    return sigma_inv if sigma_inv is not None else ctx.require_member(sigma)


def column_shape(ctx: FormRingContext, mat: Mat, col: int) -> bool:
    """``mat`` equals ``prod_{i != +-col} T_{i,col}(x_i)`` with ``x_i`` read off ``mat``."""
    expect = ctx.identity()
    for i in ctx.labels:
        if i not in (col, -col):
            expect = expect @ ctx._T_unchecked(i, col, ctx.entry(mat, i, col))
    return expect == mat


def _entry_23(ctx: FormRingContext, sigma: Mat, sigma_inv: Mat) -> ConjWord:
    s = lambda a, b: ctx.entry(sigma, a, b)
    s23 = s(2, 3)
    tau = (ctx.tv(2, 1, -s23), ctx.tv(3, 1, s(2, 2)), ctx.tv(2, -3, s(2, -1)))
    bracket = (ConjWord.single(ctx, sigma, sigma_inv, tau, 1)
               + ConjWord.single(ctx, sigma, sigma_inv, (), -1))
    zeta, left, right = shuffle_lemma((ctx.tv(3, 2, 1),), tau, bracket)
    if guards.strict():
        tau_inv = evaluate_elem(ctx, invert_word(tau))
        guards.check(ctx.row(sigma @ tau_inv, 2) == ctx.row(sigma, 2),
                     "second row of sigma tau^-1 differs from that of sigma")
        xi = sigma @ tau_inv @ sigma_inv
        e = ctx.identity()
        guards.check(ctx.row(xi, 2) == ctx.row(e, 2), "second row of xi is not trivial")
        guards.check(ctx.column(xi, -2) == ctx.column(e, -2), "second last column of xi is not trivial")
        guards.check(left == ctx.T(3, 1, -s23), "[tau^-1, T_32(1)] != T_31(-sigma_23)")
        guards.check(column_shape(ctx, right, 2), "[T_32(1), xi] is not a column-2 product")
    word = zeta.commutator_with((ctx.tv(1, 2, 1),))
    return word.claim(ctx.T(3, 2, s23))


def move(ctx, word: ConjWord, src, dst) -> ConjWord:
    """Conjugate a word for ``T_src(x)`` into one for ``T_dst(x)``."""
    if src == dst:
        return word
    nu, _ = ctx.router.find((src, dst), unit_coeff=True)
    return word.conj_by(nu)


def route(ctx, sigma: Mat, sigma_inv: Mat, src, dst):
    """Monomial ``mu`` with ``(mu sigma mu^-1)[dst] = sigma[src]``; returns ``(mu, moved, moved_inv)``."""
    if src == dst:
        return (), sigma, sigma_inv
    mu, _ = ctx.router.find((src, dst), unit_coeff=True)
    mu_m, mu_m_inv = evaluate_elem(ctx, mu), evaluate_elem(ctx, invert_word(mu))
    moved = mu_m @ sigma @ mu_m_inv
    if guards.strict():
        guards.check(ctx.entry(moved, *dst) == ctx.entry(sigma, *src), "monomial routing missed the entry")
    return mu, moved, mu_m @ sigma_inv @ mu_m_inv


def _check_pair(i, j, k, l):
    if i in (j, -j) or k in (l, -l):
        raise BadIndex("need i != +-j and k != +-l")


def _entry(ctx, sigma, sigma_inv, i, j, k, l) -> ConjWord:
    _check_pair(i, j, k, l)
    mu, moved, moved_inv = route(ctx, sigma, sigma_inv, (i, j), (2, 3))
    word = _entry_23(ctx, moved, moved_inv)
    if mu:
        word = word.rebase(mu, sigma, sigma_inv)
    word = move(ctx, word, (3, 2), (k, l))
    return word.claim(ctx.T(k, l, ctx.entry(sigma, i, j)))


def _shifted(ctx, sigma, sigma_inv, j, i):
    """``T_ji(1) sigma T_ji(-1)`` with its inverse and the conjugator word."""
    shift = (ctx.tv(j, i, 1),)
    a, b = ctx.T(j, i, 1), ctx.T(j, i, -1)
    return shift, a @ sigma @ b, a @ sigma_inv @ b


def aux_index(ctx, i: int, *avoid) -> int:
    """Smallest positive index distinct from ``+-i`` (and the ``avoid`` labels if possible)."""
    cands = [h for h in range(1, ctx.n + 1) if h not in (i, -i)]
    for h in cands:
        if h not in avoid and -h not in avoid:
            return h
    return cands[0]


def _antidiag(ctx, sigma, sigma_inv, i, k, l, entry=None) -> ConjWord:
    entry = entry or _entry
    _check_pair(1, 2, k, l)
    j = aux_index(ctx, i)
    shift, sh, sh_inv = _shifted(ctx, sigma, sigma_inv, j, i)
    if guards.strict():
        guards.check(ctx.entry(sh, j, -i) == ctx.entry(sigma, i, -i) + ctx.entry(sigma, j, -i),
                     "entry (j,-i) of the shifted matrix")
    first = entry(ctx, sh, sh_inv, j, -i, k, l).rebase(shift, sigma, sigma_inv)
    second = entry(ctx, sigma, sigma_inv, j, -i, k, l).invert()
    word = first + second
    word.meta["aux_index"] = j
    return word.claim(ctx.T(k, l, ctx.entry(sigma, i, -i)))


def _diag_diff(ctx, sigma, sigma_inv, i, j, k, l, entry=None) -> ConjWord:
    _check_pair(i, j, k, l)
    entry = entry or _entry
    shift, sh, sh_inv = _shifted(ctx, sigma, sigma_inv, j, i)
    s = lambda a, b: ctx.entry(sigma, a, b)
    if guards.strict():
        guards.check(ctx.entry(sh, j, i) == s(i, i) - s(j, j) + s(j, i) - s(i, j),
                     "entry (j,i) of the shifted matrix")
    first = entry(ctx, sh, sh_inv, j, i, k, l).rebase(shift, sigma, sigma_inv)
    second = entry(ctx, sigma, sigma_inv, i, j, k, l)
    third = entry(ctx, sigma, sigma_inv, j, i, k, l).invert()
    word = first + second + third
    return word.claim(ctx.T(k, l, s(i, i) - s(j, j)))


def _opposite_diag(ctx, sigma, sigma_inv, i, k, l, entry=None) -> ConjWord:
    j = aux_index(ctx, i)
    word = (_diag_diff(ctx, sigma, sigma_inv, i, j, k, l, entry)
            + _diag_diff(ctx, sigma, sigma_inv, j, -i, k, l, entry))
    word.meta["aux_index"] = j
    return word.claim(ctx.T(k, l, ctx.entry(sigma, i, i) - ctx.entry(sigma, -i, -i)))


def o_entry_word_23(ctx: FormRingContext, sigma: Mat, sigma_inv: Mat | None = None) -> ConjWord:
    """``T_32(sigma_23)`` as a product of 8 elementary orthogonal sigma-conjugates."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _entry_23(ctx, sigma, sigma_inv).finalize(op="o_entry_word_23")


def o_entry_word(ctx: FormRingContext, sigma: Mat, i: int, j: int, k: int, l: int,
                 sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(sigma_ij)``, 8 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _entry(ctx, sigma, sigma_inv, i, j, k, l).finalize(op="o_entry_word", ijkl=[i, j, k, l])


def o_antidiag_word(ctx: FormRingContext, sigma: Mat, i: int, k: int, l: int,
                    sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(sigma_{i,-i})``, 16 factors.

    The second half is the inverse of the word for ``T_kl(sigma_{j,-i})``.
    """
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    word = _antidiag(ctx, sigma, sigma_inv, i, k, l)
    return word.finalize(op="o_antidiag_word", ikl=[i, k, l], correction="T_kl(-sigma_{j,-i})")


def o_diag_diff_word(ctx: FormRingContext, sigma: Mat, i: int, j: int, k: int, l: int,
                     sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(sigma_ii - sigma_jj)``, 24 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _diag_diff(ctx, sigma, sigma_inv, i, j, k, l).finalize(op="o_diag_diff_word",
                                                                  ijkl=[i, j, k, l])


def o_opposite_diag_word(ctx: FormRingContext, sigma: Mat, i: int, k: int, l: int,
                         sigma_inv: Mat | None = None) -> ConjWord:
    """``T_kl(sigma_ii - sigma_{-i,-i})``, 48 factors."""
    sigma_inv = _prepare(ctx, sigma, sigma_inv)
    return _opposite_diag(ctx, sigma, sigma_inv, i, k, l).finalize(op="o_opposite_diag_word",
                                                                    ikl=[i, k, l])
