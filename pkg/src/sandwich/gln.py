"""GL_n over a finite commutative ring: generators, relations and the entry
decompositions into 8 and 24 elementary sigma-conjugates."""
from __future__ import annotations

import itertools

import numpy as np

from . import guards
from .errors import BadIndex, NotInvertible
from .linalg import Mat, commutator, det_adjugate
from .monomial import Router, monomial_action
from .ring import Ring
from .words import GL_SHORT, ConjWord, Transvection, evaluate_elem, invert_word, shuffle_lemma


class GlContext:
    def __init__(self, ring: Ring, n: int):
        if n < 3:
            raise BadIndex("n must be at least 3")
        self.ring = ring
        self.n = n
        self.dim = n
        self.labels = list(range(1, n + 1))
        self._gen_cache: dict = {}
        self._inv_cache: dict = {}
        self._router = None

    def pos(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise BadIndex(f"index {i} out of range 1..{self.n}")
        return i - 1

    # generators -------------------------------------------------------
    def tv(self, i: int, j: int, x) -> Transvection:
        if i == j:
            raise BadIndex("t_ij needs i != j")
        self.pos(i), self.pos(j)
        return Transvection(GL_SHORT, i, j, self.ring(x))

    def gen_array(self, tv: Transvection) -> np.ndarray:
        a = self._gen_cache.get(tv)
        if a is None:
            a = self.t(tv.i, tv.j, tv.x).a
            self._gen_cache[tv] = a
        return a

    def identity(self) -> Mat:
        return Mat.identity(self.ring, self.n)

    def t(self, i: int, j: int, x) -> Mat:
        if i == j:
            raise BadIndex("t_ij needs i != j")
        rows = [[self.ring.one if r == c else self.ring.zero for c in range(self.n)]
                for r in range(self.n)]
        rows[self.pos(i)][self.pos(j)] = self.ring(x)
        return Mat.from_entries(self.ring, rows)

    def p_word(self, i: int, j: int) -> tuple:
        return (self.tv(i, j, 1), self.tv(j, i, -1), self.tv(i, j, 1))

    def p(self, i: int, j: int) -> Mat:
        if i == j:
            raise BadIndex("p_ij needs i != j")
        one, zero = self.ring.one, self.ring.zero
        rows = [[one if r == c else zero for c in range(self.n)] for r in range(self.n)]
        a, b = self.pos(i), self.pos(j)
        rows[a][a] = zero
        rows[b][b] = zero
        rows[a][b] = one
        rows[b][a] = -one
        return Mat.from_entries(self.ring, rows)

    def entry(self, sigma: Mat, i: int, j: int):
        return sigma.entry(self.pos(i), self.pos(j))

    def inv(self, sigma: Mat) -> Mat:
        hit = self._inv_cache.get(sigma.key)
        if hit is None:
            d, adj = det_adjugate(sigma)
            if not d.is_unit():
                raise NotInvertible(f"determinant {d} is not a unit")
            hit = adj.scale(d.inverse())
            self._inv_cache[sigma.key] = hit
        return hit

    @property
    def router(self) -> Router:
        if self._router is None:
            gens = []
            for i, j in itertools.permutations(self.labels, 2):
                word = self.p_word(i, j)
                gens.append((word, monomial_action(evaluate_elem(self, word), self.labels)))
            self._router = Router(self.ring, self.labels, gens)
        return self._router

    def random_word(self, length: int, rng) -> tuple:
        out = []
        for _ in range(length):
            i, j = rng.choice(self.n, size=2, replace=False) + 1
            out.append(self.tv(int(i), int(j), self.ring.random(rng)))
        return tuple(out)

    def random_member(self, length: int, rng) -> tuple[Mat, Mat]:
        """Random element of E_n(R) and its inverse (by word reversal)."""
        word = self.random_word(length, rng)
        sigma = evaluate_elem(self, word)
        sigma_inv = evaluate_elem(self, invert_word(word))
        self._inv_cache[sigma.key] = sigma_inv
        return sigma, sigma_inv


def t(ctx: GlContext, i: int, j: int, x) -> Mat:
    return ctx.t(i, j, x)


def p(ctx: GlContext, i: int, j: int) -> Mat:
    return ctx.p(i, j)


def check_relations(ctx: GlContext, budget: int = 4096, rng=None) -> dict:
    """Exhaustively (or by sampling) check the Steinberg relations and the
    monomial conjugation identities.  Failures are counted, never raised."""
    ring, labels = ctx.ring, ctx.labels
    elems = list(ring.elements()) if ring.size <= 10**4 else None
    if elems is not None and len(elems) ** 2 <= budget:
        pairs = list(itertools.product(elems, repeat=2))
    else:
        rng = rng or np.random.default_rng(0)
        pairs = [(ring.random(rng), ring.random(rng)) for _ in range(min(budget, 64))]
    singles = sorted({x for x, _ in pairs}, key=lambda e: e.c)
    report = {name: {"checked": 0, "failed": 0, "skipped": 0}
              for name in ("R1", "R2", "R3", "p_inverse", "p_word", "conj_ki", "conj_kj")}

    def tally(name, ok):
        report[name]["checked"] += 1
        if not ok:
            report[name]["failed"] += 1

    e = ctx.identity()
    for i, j in itertools.permutations(labels, 2):
        for x, y in pairs:
            tally("R1", ctx.t(i, j, x) @ ctx.t(i, j, y) == ctx.t(i, j, x + y))
        tally("p_inverse", ctx.p(i, j) @ ctx.p(j, i) == e)
        tally("p_word", evaluate_elem(ctx, ctx.p_word(i, j)) == ctx.p(i, j))
    for i, j, h, k in itertools.product(labels, repeat=4):
        if i == j or h == k:
            continue
        if i == k or j == h:
            report["R2"]["skipped"] += 1
        else:
            for x, y in pairs:
                tally("R2", commutator(ctx.t(i, j, x), ctx.t(h, k, y),
                                       ctx.t(i, j, -x), ctx.t(h, k, -y)) == e)
    for i, j, k in itertools.permutations(labels, 3):
        for x, y in pairs:
            lhs = commutator(ctx.t(i, j, x), ctx.t(j, k, y), ctx.t(i, j, -x), ctx.t(j, k, -y))
            tally("R3", lhs == ctx.t(i, k, x * y))
        for x in singles:
            tx = ctx.t(i, j, x)
            tally("conj_ki", ctx.p(k, i) @ tx @ ctx.p(i, k) == ctx.t(k, j, x))
            tally("conj_kj", ctx.p(k, j) @ tx @ ctx.p(j, k) == ctx.t(i, k, x))
    report["ok"] = all(v["failed"] == 0 for k, v in report.items() if isinstance(v, dict))
    return report


# decompositions ----------------------------------------------------------

def _column_shape(ctx: GlContext, mat: Mat, col: int) -> bool:
    """``mat`` equals ``prod_{i != col} t_{i,col}(x_i)``."""
    c = ctx.pos(col)
    expect = ctx.identity()
    for i in ctx.labels:
        if i != col:
            expect = expect @ ctx.t(i, col, mat.entry(ctx.pos(i), c))
    return expect == mat


def _entry_23(ctx: GlContext, sigma: Mat, sigma_inv: Mat) -> ConjWord:
    ring = ctx.ring
    s22, s23 = ctx.entry(sigma, 2, 2), ctx.entry(sigma, 2, 3)
    tau = (ctx.tv(2, 1, -s23), ctx.tv(3, 1, s22))
    tau_inv = invert_word(tau)
    bracket = (ConjWord.single(ctx, sigma, sigma_inv, tau, 1)
               + ConjWord.single(ctx, sigma, sigma_inv, (), -1))
    a = (ctx.tv(3, 2, 1),)
    zeta, left, right = shuffle_lemma(a, tau, bracket)
    if guards.strict():
        tau_m_inv = evaluate_elem(ctx, tau_inv)
        guards.check((sigma @ tau_m_inv).row(1) == sigma.row(1),
                     "second row of sigma tau^-1 differs from that of sigma")
        xi = sigma @ tau_m_inv @ sigma_inv
        guards.check(xi.row(1) == ctx.identity().row(1), "second row of xi is not trivial")
        guards.check(left == ctx.t(3, 1, -s23), "[tau^-1, t_32(1)] != t_31(-sigma_23)")
        guards.check(_column_shape(ctx, right, 2), "[t_32(1), xi] is not a column-2 product")
    word = zeta.commutator_with((ctx.tv(1, 2, ring.one),))
    return word.claim(ctx.t(3, 2, s23))


def entry_word_23(ctx: GlContext, sigma: Mat, sigma_inv: Mat | None = None) -> ConjWord:
    """``t_32(sigma_23)`` as a product of 8 elementary sigma-conjugates."""
    sigma_inv = sigma_inv if sigma_inv is not None else ctx.inv(sigma)
    return _entry_23(ctx, sigma, sigma_inv).finalize(op="entry_word_23")


def _move(ctx, word: ConjWord, src, dst) -> ConjWord:
    if src == dst:
        return word
    nu, _ = ctx.router.find((src, dst), unit_coeff=True)
    return word.conj_by(nu)


def _entry(ctx: GlContext, sigma: Mat, sigma_inv: Mat, i, j, k, l) -> ConjWord:
    if i == j or k == l:
        raise BadIndex("need i != j and k != l")
    x = ctx.entry(sigma, i, j)
    if (i, j) == (2, 3):
        word = _entry_23(ctx, sigma, sigma_inv)
    else:
        mu, _ = ctx.router.find(((i, j), (2, 3)), unit_coeff=True)
        mu_inv = invert_word(mu)
        mu_m, mu_m_inv = evaluate_elem(ctx, mu), evaluate_elem(ctx, mu_inv)
        moved = mu_m @ sigma @ mu_m_inv
        if guards.strict():
            guards.check(ctx.entry(moved, 2, 3) == x, "monomial routing missed the entry")
        word = _entry_23(ctx, moved, mu_m @ sigma_inv @ mu_m_inv).rebase(mu, sigma, sigma_inv)
    word = _move(ctx, word, (3, 2), (k, l))
    return word.claim(ctx.t(k, l, x))


def entry_word(ctx: GlContext, sigma: Mat, i: int, j: int, k: int, l: int,
               sigma_inv: Mat | None = None) -> ConjWord:
    """``t_kl(sigma_ij)`` as a product of 8 elementary sigma-conjugates."""
    sigma_inv = sigma_inv if sigma_inv is not None else ctx.inv(sigma)
    return _entry(ctx, sigma, sigma_inv, i, j, k, l).finalize(op="entry_word", ijkl=[i, j, k, l])


def _diag_diff(ctx: GlContext, sigma: Mat, sigma_inv: Mat, i, j, k, l) -> ConjWord:
    if i == j:
        raise BadIndex("need i != j")
    shift = (ctx.tv(j, i, 1),)
    s_m, s_m_inv = ctx.t(j, i, 1), ctx.t(j, i, -1)
    shifted = s_m @ sigma @ s_m_inv
    if guards.strict():
        expect = (ctx.entry(sigma, i, i) - ctx.entry(sigma, j, j)
                  + ctx.entry(sigma, j, i) - ctx.entry(sigma, i, j))
        guards.check(ctx.entry(shifted, j, i) == expect, "entry of the shifted matrix")
    first = _entry(ctx, shifted, s_m @ sigma_inv @ s_m_inv, j, i, k, l).rebase(shift, sigma, sigma_inv)
    second = _entry(ctx, sigma, sigma_inv, i, j, k, l)
    third = _entry(ctx, sigma, sigma_inv, j, i, k, l).invert()
    word = first + second + third
    return word.claim(ctx.t(k, l, ctx.entry(sigma, i, i) - ctx.entry(sigma, j, j)))


def diag_diff_word(ctx: GlContext, sigma: Mat, i: int, j: int, k: int, l: int,
                   sigma_inv: Mat | None = None) -> ConjWord:
    """``t_kl(sigma_ii - sigma_jj)`` as a product of 24 elementary sigma-conjugates."""
    sigma_inv = sigma_inv if sigma_inv is not None else ctx.inv(sigma)
    return _diag_diff(ctx, sigma, sigma_inv, i, j, k, l).finalize(op="diag_diff_word",
                                                                  ijkl=[i, j, k, l])


def _free_index(ctx, *avoid) -> int:
    return next(h for h in ctx.labels if h not in avoid)


def multiple_entry_word(ctx: GlContext, sigma: Mat, x, i: int, j: int, k: int, l: int,
                        sigma_inv: Mat | None = None) -> ConjWord:
    """``t_kl(x sigma_ij) = [t_kh(x), t_hl(sigma_ij)]`` with at most 16 factors."""
    sigma_inv = sigma_inv if sigma_inv is not None else ctx.inv(sigma)
    x = ctx.ring(x)
    h = _free_index(ctx, k, l)
    inner = _entry(ctx, sigma, sigma_inv, i, j, h, l)
    word = inner.commutator_with((ctx.tv(k, h, x),))
    return word.finalize(ctx.t(k, l, x * ctx.entry(sigma, i, j)), op="multiple_entry_word")


def multiple_diag_diff_word(ctx: GlContext, sigma: Mat, x, i: int, j: int, k: int, l: int,
                            sigma_inv: Mat | None = None) -> ConjWord:
    """``t_kl(x (sigma_ii - sigma_jj))`` with at most 48 factors."""
    sigma_inv = sigma_inv if sigma_inv is not None else ctx.inv(sigma)
    x = ctx.ring(x)
    h = _free_index(ctx, k, l)
    inner = _diag_diff(ctx, sigma, sigma_inv, i, j, h, l)
    word = inner.commutator_with((ctx.tv(k, h, x),))
    target = ctx.t(k, l, x * (ctx.entry(sigma, i, i) - ctx.entry(sigma, j, j)))
    return word.finalize(target, op="multiple_diag_diff_word")
