"""Hyperbolic unitary groups U_2n(R, Lambda) and their orthogonal specialization.

Basis labels run ``1, ..., n, -n, ..., -1``; label ``i > 0`` sits at position
``i - 1`` and ``i < 0`` at position ``2n + i``.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import guards
from .errors import (
    BadIndex,
    BadVector,
    DimMismatch,
    FormParamViolation,
    NotInvertible,
    NotIsotropic,
    NotMember,
)
from .linalg import Mat, commutator, det_adjugate
from .monomial import Router, monomial_action
from .ring import Elem, FormParam, Ring, epsilon, lam_pow, lambda_power
from .words import U_LONG, U_SHORT, Transvection, evaluate_elem, invert_word


class FormRingContext:
    """A form ring ``(R, Lambda)`` together with the rank ``n``."""

    def __init__(self, ring: Ring, form: FormParam | str = "min", n: int = 3):
        if n < 3:
            raise BadIndex("n must be at least 3")
        if isinstance(form, str):
            form = FormParam(ring, form)
        self.ring = ring
        self.form = form
        self.n = n
        self.dim = 2 * n
        self.labels = list(range(1, n + 1)) + list(range(-n, 0))
        self._gen_cache: dict = {}
        self._inv_cache: dict = {}
        self._router = None

    @property
    def lam(self) -> Elem:
        return self.ring.lam

    @property
    def is_orthogonal(self) -> bool:
        r = self.ring
        return (r.spec.involution == "trivial" and r.lam == r.one
                and self.form.realized == frozenset({r.zero}))

    def pos(self, i: int) -> int:
        if i == 0 or abs(i) > self.n:
            raise BadIndex(f"index {i} not in Omega")
        return i - 1 if i > 0 else self.dim + i

    def entry(self, sigma: Mat, i: int, j: int) -> Elem:
        return sigma.entry(self.pos(i), self.pos(j))

    def identity(self) -> Mat:
        return Mat.identity(self.ring, self.dim)

    def _from_sparse(self, items) -> Mat:
        rows = [[self.ring.one if r == c else self.ring.zero for c in range(self.dim)]
                for r in range(self.dim)]
        for (i, j), x in items:
            rows[self.pos(i)][self.pos(j)] = rows[self.pos(i)][self.pos(j)] + x
        return Mat.from_entries(self.ring, rows)

    # long root parameters --------------------------------------------
    def long_twist(self, i: int) -> Elem:
        """``lam^(-(eps(i)+1)/2)``: long root parameters live in ``long_twist(i) * Lambda``."""
        return self.ring.lam_bar if i > 0 else self.ring.one

    def long_ok(self, i: int, y: Elem) -> bool:
        # y in lam^-1 Lambda  <=>  lam y in Lambda
        return (self.ring.lam * y if i > 0 else y) in self.form

    def long_params(self, i: int) -> list[Elem]:
        tw = self.long_twist(i)
        return sorted({tw * z for z in self.form.realized}, key=lambda e: e.c)

    # generators -------------------------------------------------------
    def tv(self, i: int, j: int, x) -> Transvection:
        x = self.ring(x)
        self.pos(i), self.pos(j)
        if i == j:
            raise BadIndex("T_ij needs i != j")
        if j == -i:
            if not self.long_ok(i, x):
                raise FormParamViolation(f"T_({i},{-i})({x}) needs a parameter in the twisted form parameter")
            return Transvection(U_LONG, i, j, x)
        return Transvection(U_SHORT, i, j, x)

    def T(self, i: int, j: int, x) -> Mat:
        tv = self.tv(i, j, x)
        return Mat(self.ring, self.dim, self.gen_array(tv))

    def _T_unchecked(self, i: int, j: int, x: Elem) -> Mat:
        if j == -i:
            return self._from_sparse([((i, j), x)])
        c = lambda_power(self.ring, i, j)
        return self._from_sparse([((i, j), x), ((-j, -i), -(c * x.bar))])

    def gen_array(self, tv: Transvection) -> np.ndarray:
        a = self._gen_cache.get(tv)
        if a is None:
            a = self._T_unchecked(tv.i, tv.j, tv.x).a
            self._gen_cache[tv] = a
        return a

    def P_word(self, i: int, j: int) -> tuple:
        if i == j or i == -j:
            raise BadIndex("P_ij needs i != +-j")
        return (self.tv(i, j, 1), self.tv(j, i, -1), self.tv(i, j, 1))

    def P(self, i: int, j: int) -> Mat:
        if i == j or i == -j:
            raise BadIndex("P_ij needs i != +-j")
        r = self.ring
        one = r.one
        items = [((i, j), one), ((j, i), -one),
                 ((-i, -j), lambda_power(r, j, i)), ((-j, -i), -lambda_power(r, i, j)),
                 ((i, i), -one), ((j, j), -one), ((-i, -i), -one), ((-j, -j), -one)]
        return self._from_sparse(items)

    @property
    def router(self) -> Router:
        if self._router is None:
            gens = []
            for i, j in itertools.permutations(self.labels, 2):
                if i != -j:
                    word = self.P_word(i, j)
                    gens.append((word, monomial_action(evaluate_elem(self, word), self.labels)))
            self._router = Router(self.ring, self.labels, gens)
        return self._router

    # forms ------------------------------------------------------------
    def _vec(self, v) -> list[Elem]:
        if len(v) != self.dim:
            raise DimMismatch(f"vector of length {len(v)}, expected {self.dim}")
        return [self.ring(x) for x in v]

    def basis(self, i: int, x=1) -> list[Elem]:
        v = [self.ring.zero] * self.dim
        v[self.pos(i)] = self.ring(x)
        return v

    def vget(self, v, i: int) -> Elem:
        return v[self.pos(i)]

    def form_f(self, v, w) -> Elem:
        v, w = self._vec(v), self._vec(w)
        acc = self.ring.zero
        for i in range(1, self.n + 1):
            acc = acc + self.vget(v, i).bar * self.vget(w, -i)
        return acc

    def form_h(self, v, w) -> Elem:
        v, w = self._vec(v), self._vec(w)
        acc = self.ring.zero
        for i in range(1, self.n + 1):
            acc = acc + self.vget(v, -i).bar * self.vget(w, i)
        return self.form_f(v, w) + self.lam * acc

    def value(self, v) -> Elem:
        return self.form_f(v, v)

    def q_equal(self, v, w) -> bool:
        """``q(v) == q(w)`` in ``R / Lambda``."""
        return (self.value(v) - self.value(w)) in self.form

    def polarity(self, v) -> list[Elem]:
        v = self._vec(v)
        out = [self.ring.zero] * self.dim
        for i in range(1, self.n + 1):
            out[self.pos(i)] = self.lam * self.vget(v, -i).bar
            out[self.pos(-i)] = self.vget(v, i).bar
        return out

    def column(self, sigma: Mat, j: int) -> list[Elem]:
        return sigma.col(self.pos(j))

    def row(self, sigma: Mat, i: int) -> list[Elem]:
        return sigma.row(self.pos(i))

    def matvec(self, sigma: Mat, v) -> list[Elem]:
        rows = sigma.entries()
        return [sum((a * b for a, b in zip(row, v)), self.ring.zero) for row in rows]

    def vecmat(self, v, sigma: Mat) -> list[Elem]:
        cols = list(zip(*sigma.entries()))
        return [sum((a * b for a, b in zip(v, col)), self.ring.zero) for col in cols]

    # membership -------------------------------------------------------
    def formula_inverse(self, sigma: Mat) -> Mat:
        """``sigma'_ij = lam^((eps(j)-eps(i))/2) conj(sigma_{-j,-i})``."""
        r = self.ring
        rows = [[lambda_power(r, i, j) * self.entry(sigma, -j, -i).bar for j in self.labels]
                for i in self.labels]
        return Mat.from_entries(r, rows)

    def inv(self, sigma: Mat) -> Mat:
        hit = self._inv_cache.get(sigma.key)
        if hit is None:
            cand = self.formula_inverse(sigma)
            if not (sigma @ cand).is_identity():
                raise NotMember("matrix is not in the unitary group")
            hit = cand
            self._inv_cache[sigma.key] = hit
        return hit

    def is_unitary_member(self, sigma: Mat) -> bool:
        d, adj = det_adjugate(sigma)
        if not d.is_unit():
            raise NotInvertible(f"determinant {d} is not a unit")
        sigma_inv = adj.scale(d.inverse())
        if sigma_inv != self.formula_inverse(sigma):
            return False
        return all(self.value(self.column(sigma, j)) in self.form for j in self.labels)

    def require_member(self, sigma: Mat) -> Mat:
        """Return ``sigma^-1`` or raise :class:`NotMember`."""
        sigma_inv = self.inv(sigma)
        if guards.strict() and not all(self.value(self.column(sigma, j)) in self.form
                                       for j in self.labels):
            raise NotMember("a column value is not in Lambda")
        return sigma_inv

    # random elements --------------------------------------------------
    def random_word(self, length: int, rng) -> tuple:
        out = []
        long_pools = {i: self.long_params(i) for i in self.labels}
        while len(out) < length:
            i, j = (int(v) for v in rng.choice(self.labels, size=2, replace=False))
            if j == -i:
                pool = long_pools[i]
                if len(pool) < 2:
                    continue
                out.append(self.tv(i, j, pool[int(rng.integers(len(pool)))]))
            else:
                out.append(self.tv(i, j, self.ring.random(rng)))
        return tuple(out)

    def hyperbolic_unit(self, u: Elem) -> Mat:
        """``diag(u, 1, ..., 1, conj(u)^-1)``."""
        r = self.ring
        rows = [[r.one if a == b else r.zero for b in range(self.dim)] for a in range(self.dim)]
        rows[self.pos(1)][self.pos(1)] = u
        rows[self.pos(-1)][self.pos(-1)] = u.bar.inverse()
        return Mat.from_entries(r, rows)

    def random_member(self, length: int, rng, unit: bool = False) -> tuple[Mat, Mat]:
        word = self.random_word(length, rng)
        sigma = evaluate_elem(self, word)
        sigma_inv = evaluate_elem(self, invert_word(word))
        if unit:
            units = [x for x in self.ring.elements() if x.is_unit()]
            u = units[int(rng.integers(len(units)))]
            d = self.hyperbolic_unit(u)
            d_inv = self.hyperbolic_unit(u.inverse())
            sigma, sigma_inv = sigma @ d, d_inv @ sigma_inv
        if guards.strict():
            guards.check((sigma @ sigma_inv).is_identity(), "random member inverse")
            guards.check(self.formula_inverse(sigma) == sigma_inv, "random member is not unitary")
        self._inv_cache[sigma.key] = sigma_inv
        return sigma, sigma_inv

    # Eichler-type transvection ------------------------------------------
    def eichler(self, v, sigma: Mat | None = None, exact: bool = True) -> tuple[Mat, tuple]:
        """``T_{*,-1}(v) = e + v e_{-1}^t - e_1 conj(lam) polarity(v)`` and its factorization.

        With ``exact`` the value of ``v`` must vanish; otherwise it only has to
        lie in Lambda.  If ``sigma`` is given the conjugation identity for
        ``sigma T_{*,-1}(v) sigma^-1`` is checked as well.
        """
        v = self._vec(v)
        r = self.ring
        if self.vget(v, -1):
            raise BadVector("v_{-1} must vanish")
        val = self.value(v)
        if (val if exact else val not in self.form):
            raise NotIsotropic(f"value {val} is not {'zero' if exact else 'in Lambda'}")
        mat = self._eichler_matrix(v)
        v1 = self.vget(v, 1)
        word = [self.tv(1, -1, r.lam_bar * val + v1 - r.lam_bar * v1.bar)]
        for i in self.labels:
            if i not in (1, -1):
                word.append(self.tv(i, -1, self.vget(v, i)))
        word = tuple(word)
        if guards.strict():
            guards.check(evaluate_elem(self, word) == mat, "Eichler matrix differs from its factorization")
            guards.check(evaluate_elem(self, invert_word(word)) == self._eichler_matrix([-x for x in v]),
                         "inverse of the Eichler matrix")
            if sigma is not None:
                lhs = sigma @ mat @ self.inv(sigma)
                guards.check(lhs == self.eichler_conjugate(sigma, v), "Eichler conjugation identity")
        return mat, word

    def _eichler_matrix(self, v) -> Mat:
        r = self.ring
        vt = self.polarity(v)
        rows = [[r.one if a == b else r.zero for b in range(self.dim)] for a in range(self.dim)]
        c_last, r_first = self.pos(-1), self.pos(1)
        for a in range(self.dim):
            rows[a][c_last] = rows[a][c_last] + v[a]
        for b in range(self.dim):
            rows[r_first][b] = rows[r_first][b] - r.lam_bar * vt[b]
        return Mat.from_entries(r, rows)

    def eichler_conjugate(self, sigma: Mat, v) -> Mat:
        """``e + sigma v polarity(sigma_{*1}) - sigma_{*1} conj(lam) polarity(sigma v)``."""
        r = self.ring
        sv = self.matvec(sigma, v)
        s1 = self.column(sigma, 1)
        pt1 = self.polarity(s1)
        ptv = self.polarity(sv)
        rows = [[(r.one if a == b else r.zero) + sv[a] * pt1[b] - s1[a] * r.lam_bar * ptv[b]
                 for b in range(self.dim)] for a in range(self.dim)]
        return Mat.from_entries(r, rows)

    # identity checks --------------------------------------------------
    def hat_value_formula(self, sigma: Mat, i: int, j: int) -> Elem:
        """Value of column ``i`` of ``P_ij sigma P_ij^-1`` by the case formula."""
        if i == j or i == -j:
            raise BadIndex("need i != +-j")
        r = self.ring
        s = lambda a, b: self.entry(sigma, a, b)
        base = self.value(self.column(sigma, j))
        if epsilon(i) == epsilon(j):
            out = base
        elif epsilon(i) == 1:
            a = s(i, j).bar * s(-i, j)
            b = s(-j, j).bar * s(j, j)
            out = base - a + r.lam * a.bar - b + r.lam * b.bar
        else:
            a = s(-i, j).bar * s(i, j)
            b = s(j, j).bar * s(-j, j)
            out = base - a + r.lam * a.bar - b + r.lam * b.bar
        if guards.strict():
            hat = self.P(i, j) @ sigma @ self.P(j, i)
            guards.check(self.value(self.column(hat, i)) == out, "column value formula")
        return out

    def dual_row_column_check(self, sigma: Mat, k: int, x) -> bool:
        r = self.ring
        x = r(x)
        xi = x.inverse()
        ok = True
        if self.column(sigma, k) == self.basis(k, x):
            ok &= self.row(sigma, -k) == self.basis(-k, xi.bar)
        if self.row(sigma, k) == self.basis(k, x):
            ok &= self.column(sigma, -k) == self.basis(-k, xi.bar)
        return ok


def check_unitary_relations(ctx: FormRingContext, budget: int = 4096, rng=None) -> dict:
    """Check the unitary Steinberg relations and monomial conjugation identities."""
    r, labels = ctx.ring, ctx.labels
    elems = list(r.elements())
    if len(elems) ** 2 <= budget:
        pairs = list(itertools.product(elems, repeat=2))
    else:
        rng = rng or np.random.default_rng(0)
        pairs = [(r.random(rng), r.random(rng)) for _ in range(min(budget, 64))]
    singles = sorted({x for x, _ in pairs}, key=lambda e: e.c)
    names = ("R1", "R2", "R3", "R4", "R5", "R6", "P_inverse", "P_word", "P_matrix",
             "conj_ki", "conj_kj", "conj_long", "member")
    report = {name: {"checked": 0, "failed": 0, "skipped": 0} for name in names}
    e = ctx.identity()
    T = ctx._T_unchecked

    def tally(name, ok):
        report[name]["checked"] += 1
        if not ok:
            report[name]["failed"] += 1

    def comm(a, b):
        return commutator(a, b, ctx.inv(a), ctx.inv(b))

    short = [(i, j) for i, j in itertools.permutations(labels, 2) if i != -j]
    longs = {i: ctx.long_params(i) for i in labels}
    for i, j in short:
        for x in singles:
            c = lambda_power(r, i, j)
            tally("R1", T(i, j, x) == T(-j, -i, -(c * x.bar)))
            tally("member", ctx.is_unitary_member(T(i, j, x)))
        for x, y in pairs:
            tally("R2", T(i, j, x) @ T(i, j, y) == T(i, j, x + y))
        tally("P_inverse", ctx.P(i, j) @ ctx.P(j, i) == e)
        tally("P_word", evaluate_elem(ctx, ctx.P_word(i, j)) == ctx.P(i, j))
        tally("P_matrix", ctx.is_unitary_member(ctx.P(i, j)))
    for i in labels:
        for x in longs[i]:
            tally("member", ctx.is_unitary_member(T(i, -i, x)))
            for y in longs[i]:
                tally("R2", T(i, -i, x) @ T(i, -i, y) == T(i, -i, x + y))
    for (i, j), (h, k) in itertools.product(short, repeat=2):
        if h in (j, -i) or k in (i, -j):
            report["R3"]["skipped"] += 1
            continue
        for x, y in pairs:
            tally("R3", comm(T(i, j, x), T(h, k, y)) == e)
    for i, j, k in itertools.permutations(labels, 3):
        if i in (j, -j) or k in (j, -j) or i in (k, -k):
            continue
        for x, y in pairs:
            tally("R4", comm(T(i, j, x), T(j, k, y)) == T(i, k, x * y))
    for i, j in short:
        for x, y in pairs:
            rhs = x * y - lam_pow(r, -epsilon(i)) * y.bar * x.bar
            tally("R5", comm(T(i, j, x), T(j, -i, y)) == T(i, -i, rhs))
        for x in longs[i]:
            for y in singles:
                c = lambda_power(r, -i, j)
                rhs = T(i, j, x * y) @ T(-j, j, -(c * y.bar * x * y))
                tally("R6", comm(T(i, -i, x), T(-i, j, y)) == rhs)
    for i, j, k in itertools.permutations(labels, 3):
        if i in (j, -j) or k in (i, -i, j, -j):
            continue
        Pki, Pik = ctx.P(k, i), ctx.P(i, k)
        Pkj, Pjk = ctx.P(k, j), ctx.P(j, k)
        for x in singles:
            tally("conj_ki", Pki @ T(i, j, x) @ Pik == T(k, j, x))
            tally("conj_kj", Pkj @ T(i, j, x) @ Pjk == T(i, k, x))
    for i, k in itertools.permutations(labels, 2):
        if k in (i, -i):
            continue
        P, Pinv = ctx.P(-k, -i), ctx.P(-i, -k)
        c = lam_pow(r, (epsilon(i) - epsilon(k)) // 2)
        for y in longs[i]:
            tally("conj_long", P @ T(i, -i, y) @ Pinv == T(k, -k, c * y))
    report["ok"] = all(v["failed"] == 0 for v in report.values() if isinstance(v, dict))
    return report
