"""Ideals and form ideals over finite rings, levels of matrices, congruence
subgroup membership and the constructive sandwich desk check."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import gln, guards, ortho_decomp, unitary_decomp
from .errors import BudgetExceeded, NotMember, SandwichError
from .gln import GlContext
from .hyperbolic import FormRingContext
from .linalg import Mat
from .ring import DEFAULT_BUDGET, Elem, Ring, additive_span, closure_under_conjugation
from .words import ConjWord


def _ring_basis(ring: Ring) -> list[Elem]:
    """``1, t, ..., t^(d-1)``: an additive basis of ``R`` over ``Z/m``."""
    out, x = [], ring.one
    for _ in range(ring.d):
        out.append(x)
        x = x * ring.t
    return out


@dataclass
class Ideal:
    """Ideal ``I(gens)`` of a finite ring with an explicit element set.

    Every element carries one expansion ``x = sum c_g g`` over the generators,
    which is what the constructive lower inclusion consumes.
    """

    ring: Ring
    gens: tuple = ()
    budget: int = DEFAULT_BUDGET
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.ring.require_budget(self.budget)
        self.gens = tuple(self.ring(g) for g in self.gens)

    @property
    def expansions(self) -> dict:
        if "exp" not in self._cache:
            self._cache["exp"] = self._realize()
        return self._cache["exp"]

    @property
    def realized(self) -> frozenset[Elem]:
        return frozenset(self.expansions)

    @property
    def additive_generators(self) -> list[tuple[int, Elem]]:
        """``(generator index, multiplier)`` pairs whose products span ``I`` additively."""
        self.expansions
        return list(self._cache.get("used", []))

    def _realize(self) -> dict:
        r = self.ring
        zero_rep = ()
        reps = {r.zero: zero_rep}
        for gi, g in enumerate(self.gens):
            for b in _ring_basis(r):
                h = b * g
                if h in reps:
                    continue
                self._cache.setdefault("used", []).append((gi, b))
                multiples, x, k = [], r.zero, 0
                while True:
                    x, k = x + h, k + 1
                    if x == r.zero:
                        break
                    multiples.append((x, k))
                new = dict(reps)
                for base, rep in reps.items():
                    for mult, k in multiples:
                        y = base + mult
                        if y not in new:
                            new[y] = rep + ((gi, b * k),)
                reps = new
        return {x: _merge(r, rep) for x, rep in reps.items()}

    def expansion(self, x: Elem) -> list[tuple[int, Elem]]:
        """``[(generator index, coefficient), ...]`` summing to ``x``."""
        return self.expansions[self.ring(x)]

    def __contains__(self, x) -> bool:
        return self.ring(x) in self.expansions

    def __len__(self) -> int:
        return len(self.expansions)

    def is_involution_stable(self) -> bool:
        return all(x.bar in self for x in self.realized)

    def check_axioms(self) -> bool:
        s = self.realized
        add = all(a + b in s for a in s for b in s)
        mul = all(a * b in s for a in s for b in _ring_basis(self.ring))
        return add and mul


def _merge(ring, rep) -> list[tuple[int, Elem]]:
    coef: dict[int, Elem] = {}
    for gi, c in rep:
        coef[gi] = coef.get(gi, ring.zero) + ring(c)
    return [(gi, c) for gi, c in coef.items() if c]


@dataclass
class RelFormParam:
    """Relative form parameter ``Gamma`` of level ``I``: ``Gamma_min`` together with
    ``gens``, closed under addition and ``y -> x y conj(x)``."""

    ideal: Ideal
    lam_set: frozenset
    kind: str = "span"
    gens: tuple = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def minimal_generators(self) -> list[Elem]:
        r = self.ideal.ring
        I = self.ideal.realized
        out = {x - r.lam * x.bar for x in I}
        out |= {x * y * x.bar for x in I for y in self.lam_set}
        return sorted(out, key=lambda e: e.to_json())

    @property
    def gamma_max(self) -> frozenset[Elem]:
        return self.ideal.realized & self.lam_set

    @property
    def realized(self) -> frozenset[Elem]:
        if "set" not in self._cache:
            r = self.ideal.ring
            if self.kind == "max":
                s = self.gamma_max
            else:
                start = self.minimal_generators() + ([r(g) for g in self.gens] if self.kind == "span" else [])
                s = frozenset(closure_under_conjugation(r, start))
            self._cache["set"] = s
        return self._cache["set"]

    def __contains__(self, x) -> bool:
        return self.ideal.ring(x) in self.realized

    def check_axioms(self) -> bool:
        r = self.ideal.ring
        s = self.realized
        lo = RelFormParam(self.ideal, self.lam_set, "min").realized
        closed = all(x * y * x.bar in s for x in r.elements() for y in s)
        return lo <= s <= self.gamma_max and closed


@dataclass
class FormIdeal:
    ideal: Ideal
    gamma: RelFormParam


# levels ----------------------------------------------------------------------

def _group_of(ctx) -> str:
    if isinstance(ctx, GlContext):
        return "GL"
    return "O" if ctx.is_orthogonal else "U"


def _require(ctx, sigma: Mat) -> Mat:
    """Inverse of ``sigma``; raises NotMember if ``sigma`` is not in the group."""
    if isinstance(ctx, GlContext):
        try:
            return ctx.inv(sigma)
        except SandwichError as exc:
            raise NotMember("matrix is not invertible") from exc
    return ctx.require_member(sigma)


def level_generators(ctx, sigma: Mat) -> list[tuple]:
    """Typed generators ``(kind, a, b, conj)`` of the level ideal of ``sigma``.

    Off-diagonal entries and diagonal differences; in the unitary case their
    conjugates too, so the ideal is involution stable.  Zero generators are dropped.
    """
    group = _group_of(ctx)
    labels = ctx.labels
    out = []
    for a, b in itertools.permutations(labels, 2):
        if group != "GL" and b == -a:
            out.append(("ad", a, None, False))
        else:
            out.append(("e", a, b, False))
    ref, alt = labels[0], labels[1]
    for a in labels[1:]:
        out.append(("dd", a, alt if a == -ref else ref, False))
    if group == "U" and ctx.ring.spec.involution != "trivial":
        out += [g[:3] + (True,) for g in out]
    vals = [gen_value(ctx, sigma, g) for g in out]
    return [g for g, v in zip(out, vals) if v]


def gen_value(ctx, sigma: Mat, gen) -> Elem:
    kind, a, b, conj = gen
    s = lambda p, q: ctx.entry(sigma, p, q)
    if kind == "e":
        g = s(a, b)
    elif kind == "ad":
        g = s(a, -a)
    else:
        g = s(a, a) - s(b, b)
    return g.bar if conj else g


def gen_to_json(gen) -> dict:
    kind, a, b, conj = gen
    return {"kind": {"e": "entry", "ad": "antidiag", "dd": "diag_diff"}[kind],
            "i": a, "j": -a if kind == "ad" else b, "conj": conj}


def level_of(ctx, sigma: Mat, budget: int = DEFAULT_BUDGET) -> Ideal:
    """Ideal generated by the off-diagonal entries and diagonal differences of ``sigma``."""
    _require(ctx, sigma)
    gens = level_generators(ctx, sigma)
    ideal = Ideal(ctx.ring, tuple(gen_value(ctx, sigma, g) for g in gens), budget)
    ideal._cache["typed"] = gens
    return ideal


def is_in_principal(ctx, sigma: Mat, ideal: Ideal) -> bool:
    """``sigma = e mod I`` entrywise."""
    _require(ctx, sigma)
    e = ctx.identity()
    return all(ctx.entry(sigma, a, b) - ctx.entry(e, a, b) in ideal
               for a in ctx.labels for b in ctx.labels)


def is_in_full_congruence(ctx, sigma: Mat, ideal: Ideal) -> bool:
    """Off-diagonal entries and all diagonal differences lie in ``I``."""
    _require(ctx, sigma)
    s = lambda a, b: ctx.entry(sigma, a, b)
    off = all(s(a, b) in ideal for a, b in itertools.permutations(ctx.labels, 2))
    diag = all(s(a, a) - s(b, b) in ideal for a, b in itertools.combinations(ctx.labels, 2))
    return off and diag


def is_in_unitary_principal(ctx: FormRingContext, sigma: Mat, fi: FormIdeal) -> bool:
    """``sigma = e mod I`` and every column value lies in ``Gamma``."""
    if not is_in_principal(ctx, sigma, fi.ideal):
        return False
    return all(ctx.value(ctx.column(sigma, j)) in fi.gamma for j in ctx.labels)


def elementary_generators(ctx: FormRingContext, budget: int = DEFAULT_BUDGET):
    """All short-root ``(i, j, x)`` and all valid long-root ``(i, -i, y)`` triples."""
    elems = list(ctx.ring.elements())
    short = len(ctx.labels) * (len(ctx.labels) - 2) * len(elems)
    if short + len(ctx.labels) * len(elems) > budget:
        raise BudgetExceeded("too many elementary generators to enumerate")
    for i, j in itertools.permutations(ctx.labels, 2):
        if j == -i:
            continue
        for x in elems:
            if x:
                yield i, j, x
    for i in ctx.labels:
        for y in elems:
            if y and ctx.long_ok(i, y):
                yield i, -i, y


def is_in_unitary_full(ctx: FormRingContext, sigma: Mat, fi: FormIdeal,
                       budget: int = DEFAULT_BUDGET) -> bool:
    """``[sigma, T]`` lies in the principal congruence subgroup for every elementary generator ``T``.

    Checking generators suffices because the principal congruence subgroup is
    normal in the whole unitary group.
    """
    sigma_inv = ctx.require_member(sigma)
    for i, j, x in elementary_generators(ctx, budget):
        t = ctx.T(i, j, x)
        comm = sigma @ t @ sigma_inv @ ctx.T(i, j, -x)
        if not is_in_unitary_principal(ctx, comm, fi):
            return False
    return True


def unitary_form_ideal(ctx: FormRingContext, sigma: Mat, budget: int = DEFAULT_BUDGET) -> FormIdeal:
    """Level form ideal: ``I`` from :func:`level_of`, ``Gamma`` spanned by ``Gamma_min`` and the column values."""
    ideal = level_of(ctx, sigma, budget)
    values = [ctx.value(ctx.column(sigma, j)) for j in ctx.labels]
    gamma = RelFormParam(ideal, ctx.form.realized, "span", tuple(values))
    return FormIdeal(ideal, gamma)


# constructive lower inclusion --------------------------------------------

def _o_lin(ctx, sigma, sigma_inv, c, gen, k, l) -> ConjWord:
    kind, a, b, _ = gen
    h = ortho_decomp.aux_index(ctx, k, l)
    if kind == "e":
        w = ortho_decomp._entry(ctx, sigma, sigma_inv, a, b, h, l)
    elif kind == "ad":
        w = ortho_decomp._antidiag(ctx, sigma, sigma_inv, a, h, l)
    else:
        w = ortho_decomp._diag_diff(ctx, sigma, sigma_inv, a, b, h, l)
    return w.commutator_with((ctx.tv(k, h, c),))


def _gl_lin(ctx, sigma, sigma_inv, c, gen, k, l) -> ConjWord:
    kind, a, b, _ = gen
    if kind == "e":
        return gln.multiple_entry_word(ctx, sigma, c, a, b, k, l, sigma_inv=sigma_inv)
    return gln.multiple_diag_diff_word(ctx, sigma, c, a, b, k, l, sigma_inv=sigma_inv)


def ideal_element_word(ctx, sigma: Mat, sigma_inv: Mat, ideal: Ideal, x) -> ConjWord:
    """Word for ``t_12(x)`` / ``T_12(x)``, ``x`` in the level ideal, over its generator expansion."""
    group = _group_of(ctx)
    typed = ideal._cache["typed"]
    lin = {"GL": _gl_lin, "O": _o_lin,
           "U": lambda *a: unitary_decomp.lin_word(*a)}[group]
    word = ConjWord.empty(ctx, sigma, sigma_inv)
    for gi, c in ideal.expansion(x):
        word = word + lin(ctx, sigma, sigma_inv, c, typed[gi], 1, 2)
    target = ctx.t(1, 2, x) if group == "GL" else ctx.T(1, 2, x)
    return word.claim(target)


def gamma_generator_words(ctx: FormRingContext, sigma: Mat, sigma_inv: Mat, fi: FormIdeal):
    """Words for ``T_{-1,1}(y)`` over generators ``y`` of ``Gamma``.

    Column values come from the value decomposition; ``w - lam conj(w)`` for ``w``
    in ``I`` from long-root commutators; ``w y conj(w)`` from the mixed
    commutator with a long root.
    """
    r = ctx.ring
    typed = fi.ideal._cache["typed"]
    out = []
    for j in ctx.labels:
        w = unitary_decomp._value(ctx, sigma, sigma_inv, j, -1)
        out.append(("value", j, w))
    pairs = fi.ideal.additive_generators
    for gi, b in pairs:
        w = unitary_decomp.long_form_word(ctx, sigma, sigma_inv, [(b, typed[gi])], -1)
        out.append(("min", gi, w))
    lam_basis: list = []
    for y in sorted(ctx.form.realized, key=lambda e: e.to_json()):
        if y not in additive_span(r, lam_basis):
            lam_basis.append(y)
    for gi, b in pairs:
        for y in lam_basis:
            out.append(("conj", gi, _long_sandwich(ctx, sigma, sigma_inv, b, typed[gi], y)))
    return out


def _long_sandwich(ctx, sigma, sigma_inv, c, gen, y) -> ConjWord:
    """``T_{-1,1}(w y conj(w))`` with ``w = c g``; ``y`` in ``Lambda``."""
    r = ctx.ring
    w = r(c) * unitary_decomp.gen_value(ctx, sigma, gen)
    i = 2
    # [T_{i,-i}(u), T_{-i,1}(v)] = T_{i1}(u v) T_{-1,1}(-lam conj(v) u v); v = conj(w), u = -conj(lam) y
    u = -(r.lam_bar * y)
    v_gen = gen[:3] + (not gen[3],)
    cb = r(c).bar
    inner = unitary_decomp.lin_word(ctx, sigma, sigma_inv, cb, v_gen, -i, 1)
    comm = inner.commutator_with((ctx.tv(i, -i, u),))
    cancel = unitary_decomp.lin_word(ctx, sigma, sigma_inv, u * cb, v_gen, i, 1).invert()
    return (cancel + comm).claim(ctx.T(-1, 1, w * y * w.bar))


def sct_desk_check(ctx, sigma: Mat, budget: int = DEFAULT_BUDGET) -> dict:
    """Upper and constructive lower inclusion for the level of ``sigma``.

    Report keys: ``level_generators``, ``upper_inclusion``,
    ``lower_inclusion_verified_elements``, ``failures``; unitary reports also
    carry ``gamma_size`` and ``gamma_words_verified``.
    """
    group = _group_of(ctx)
    sigma_inv = _require(ctx, sigma)
    failures: list[str] = []
    if group == "U":
        fi = unitary_form_ideal(ctx, sigma, budget)
        ideal = fi.ideal
        upper = is_in_unitary_full(ctx, sigma, fi, budget)
    else:
        ideal = level_of(ctx, sigma, budget)
        upper = is_in_full_congruence(ctx, sigma, ideal)
    if not upper:
        failures.append("upper inclusion")
    typed = ideal._cache["typed"]
    verified = 0
    for x in sorted(ideal.realized, key=lambda e: e.to_json()):
        try:
            word = ideal_element_word(ctx, sigma, sigma_inv, ideal, x)
            ok = word.evaluate() == word.claimed_target
        except SandwichError as exc:
            failures.append(f"lower inclusion at {x.to_json()}: {exc}")
            continue
        if ok:
            verified += 1
        else:
            failures.append(f"lower inclusion at {x.to_json()}")
    report = {
        "group": group,
        "level_generators": [gen_to_json(g) for g in typed],
        "level_size": len(ideal),
        "upper_inclusion": upper,
        "lower_inclusion_verified_elements": verified,
        "failures": failures,
    }
    if group == "U":
        done = 0
        for tag, j, w in gamma_generator_words(ctx, sigma, sigma_inv, fi):
            y = ctx.entry(w.claimed_target, -1, 1)
            if w.evaluate() != w.claimed_target:
                failures.append(f"gamma word {tag}:{j}")
            elif y not in fi.gamma:
                failures.append(f"gamma word {tag}:{j} outside Gamma")
            else:
                done += 1
        report["gamma_size"] = len(fi.gamma.realized)
        report["gamma_words_verified"] = done
    report["ok"] = upper and verified == len(ideal) and not failures
    return report
