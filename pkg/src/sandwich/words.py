"""Words in elementary transvections and products of elementary sigma-conjugates.

An elementary word is a tuple of :class:`Transvection`.  A :class:`ConjWord`
is a sequence of factors ``(eps, s)`` standing for ``eps sigma^s eps^-1``; it
carries a claimed target matrix and the value propagated by the operations
that built it, and is checked against a flat evaluation on :meth:`finalize`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import guards
from .linalg import Mat, commutator
from .ring import Elem

GL_SHORT = "GL_short"
U_SHORT = "U_short"
U_LONG = "U_long"


@dataclass(frozen=True, eq=False)
class Transvection:
    family: str
    i: int
    j: int
    x: Elem
    _key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # plain-tuple key: hashing and comparing words is hot during evaluation
        object.__setattr__(self, "_key", (self.family, self.i, self.j, self.x.c, id(self.x.ring)))

    def __eq__(self, other):
        if not isinstance(other, Transvection):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def inverse(self) -> "Transvection":
        return Transvection(self.family, self.i, self.j, -self.x)

    def to_json(self) -> dict:
        return {"family": self.family, "i": self.i, "j": self.j, "x": self.x.to_json()}

    def __repr__(self):
        name = "t" if self.family == GL_SHORT else "T"
        return f"{name}[{self.i},{self.j}]({self.x!r})"


Word = tuple  # tuple[Transvection, ...]


def invert_word(word: Word) -> Word:
    return tuple(tv.inverse() for tv in reversed(word))


def evaluate_elem(ctx, word: Word) -> Mat:
    """Product of the generator matrices of ``word`` in order."""
    a = np.eye(ctx.dim * ctx.ring.d, dtype=np.int64)
    m = ctx.ring.m
    for tv in word:
        a = (a @ ctx.gen_array(tv)) % m
    return Mat(ctx.ring, ctx.dim, a)


@dataclass
class ConjWord:
    ctx: object
    sigma: Mat
    sigma_inv: Mat
    factors: tuple = ()
    value: Mat | None = None
    value_inv: Mat | None = None
    claimed_target: Mat | None = None
    verified: bool = False
    meta: dict = field(default_factory=dict)

    # construction -----------------------------------------------------
    @classmethod
    def empty(cls, ctx, sigma: Mat, sigma_inv: Mat) -> "ConjWord":
        e = Mat.identity(ctx.ring, ctx.dim)
        return cls(ctx, sigma, sigma_inv, (), e, e)

    @classmethod
    def single(cls, ctx, sigma: Mat, sigma_inv: Mat, conj: Word = (), sign: int = 1) -> "ConjWord":
        e = evaluate_elem(ctx, conj)
        e_inv = evaluate_elem(ctx, invert_word(conj))
        value = e @ (sigma if sign == 1 else sigma_inv) @ e_inv
        value_inv = e @ (sigma_inv if sign == 1 else sigma) @ e_inv
        return cls(ctx, sigma, sigma_inv, ((tuple(conj), sign),), value, value_inv)

    def _like(self, factors, value, value_inv) -> "ConjWord":
        return ConjWord(self.ctx, self.sigma, self.sigma_inv, tuple(factors), value, value_inv)

    @property
    def count(self) -> int:
        return len(self.factors)

    def __len__(self):
        return len(self.factors)

    def __add__(self, other: "ConjWord") -> "ConjWord":
        if other.sigma != self.sigma:
            raise ValueError("cannot concatenate words over different bases")
        return self._like(self.factors + other.factors, self.value @ other.value,
                          other.value_inv @ self.value_inv)

    def invert(self) -> "ConjWord":
        factors = tuple((c, -s) for c, s in reversed(self.factors))
        return self._like(factors, self.value_inv, self.value)

    def conj_by(self, e: Word) -> "ConjWord":
        e = tuple(e)
        if not e:
            return self._like(self.factors, self.value, self.value_inv)
        factors = tuple((e + c, s) for c, s in self.factors)
        em = evaluate_elem(self.ctx, e)
        em_inv = evaluate_elem(self.ctx, invert_word(e))
        return self._like(factors, em @ self.value @ em_inv, em @ self.value_inv @ em_inv)

    def commutator_with(self, e: Word) -> "ConjWord":
        """Word for ``[e, w]`` with twice as many factors."""
        return self.conj_by(e) + self.invert()

    def commutator_right(self, e: Word) -> "ConjWord":
        """Word for ``[w, e] = w . (e w^-1 e^-1)``."""
        return self + self.invert().conj_by(e)

    def rebase(self, mu: Word, new_sigma: Mat, new_sigma_inv: Mat) -> "ConjWord":
        """Read a word over ``mu sigma mu^-1`` as a word over ``sigma``.

        ``eps (mu sigma mu^-1)^s eps^-1 = (eps mu) sigma^s (eps mu)^-1``.
        """
        mu = tuple(mu)
        factors = tuple((c + mu, s) for c, s in self.factors)
        return ConjWord(self.ctx, new_sigma, new_sigma_inv, factors, self.value, self.value_inv)

    def flip_base(self) -> "ConjWord":
        """Read a word over ``sigma^-1`` as a word over ``sigma``."""
        factors = tuple((c, -s) for c, s in self.factors)
        return ConjWord(self.ctx, self.sigma_inv, self.sigma, factors, self.value, self.value_inv)

    def substitute(self, zeta_word: "ConjWord") -> "ConjWord":
        """Replace each base element by a word for it.

        ``self`` is a word over ``zeta`` and ``zeta_word`` expresses ``zeta`` in
        ``sigma``-conjugates; the result is a word over ``sigma`` with
        ``count(self) * count(zeta_word)`` factors.
        """
        inv = zeta_word.invert()
        factors = []
        for conj, s in self.factors:
            src = zeta_word if s == 1 else inv
            factors.extend((conj + c, t) for c, t in src.factors)
        return ConjWord(self.ctx, zeta_word.sigma, zeta_word.sigma_inv, tuple(factors),
                        self.value, self.value_inv)

    # verification -----------------------------------------------------
    def evaluate(self) -> Mat:
        return evaluate_conj(self)

    def claim(self, target: Mat, **meta) -> "ConjWord":
        self.claimed_target = target
        self.meta.update(meta)
        return self

    def finalize(self, target: Mat | None = None, **meta) -> "ConjWord":
        """Evaluate the flat product and compare with the claimed target."""
        if target is not None:
            self.claimed_target = target
        self.meta.update(meta)
        if self.claimed_target is None:
            self.claimed_target = self.value
        if guards.strict():
            guards.check(self.value == self.claimed_target,
                         f"propagated value differs from claimed target ({self.meta})")
            guards.check(self.evaluate() == self.claimed_target,
                         f"word does not evaluate to its claimed target ({self.meta})")
            self.verified = True
        return self

    def prune(self) -> "ConjWord":
        """Drop zero transvections from conjugators and cancel adjacent inverse pairs."""
        stack: list = []
        for conj, s in self.factors:
            c = tuple(tv for tv in conj if tv.x)
            if stack and stack[-1][0] == c and stack[-1][1] == -s:
                stack.pop()
            else:
                stack.append((c, s))
        return self._like(tuple(stack), self.value, self.value_inv)

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma.to_json(),
            "factors": [
                {"conjugator": [tv.to_json() for tv in c], "sign": s} for c, s in self.factors
            ],
            "claimed_target": (self.claimed_target or self.value).to_json(),
            "count": self.count,
            "verified": self.verified,
        }


def evaluate_conj(w: ConjWord) -> Mat:
    """Flat product of all factors, grouping runs that share conjugator prefixes."""
    ctx = w.ctx
    m = ctx.ring.m
    size = ctx.dim * ctx.ring.d
    eye = np.eye(size, dtype=np.int64)
    base = {1: w.sigma.a, -1: w.sigma_inv.a}
    factors = w.factors
    arrays: dict = {}

    def pair(tv):
        a = arrays.get(tv)
        if a is None:
            a = arrays[tv] = (ctx.gen_array(tv), ctx.gen_array(tv.inverse()))
        return a

    def run(lo: int, hi: int, depth: int) -> np.ndarray:
        acc = None  # identity, without paying for a product with it
        k = lo
        while k < hi:
            conj, s = factors[k]
            if len(conj) == depth:
                acc = base[s] if acc is None else (acc @ base[s]) % m
                k += 1
                continue
            tv = conj[depth]
            j = k + 1
            while j < hi:
                c = factors[j][0]
                if len(c) <= depth or not (c[depth] is tv or c[depth] == tv):
                    break
                j += 1
            inner = run(k, j, depth + 1)
            g, g_inv = pair(tv)
            # entries stay below size^3 m^4 before the single reduction, far inside int64
            block = (g @ inner) @ g_inv
            acc = block % m if acc is None else (acc @ (block % m)) % m
            k = j
        return eye if acc is None else acc

    return Mat(ctx.ring, ctx.dim, run(0, len(factors), 0))


def conj_by(e: Word, w: ConjWord) -> ConjWord:
    return w.conj_by(e)


def commutator_with(e: Word, w: ConjWord) -> ConjWord:
    return w.commutator_with(e)


def shuffle_lemma(a: Word, b: Word, bc_word: ConjWord):
    """``b^-1 [a, b c] b = [b^-1, a] [a, c]`` for elementary ``a, b``.

    ``bc_word`` is a word for the product ``b c``.  Returns the word for the
    left-hand side together with the two matrices on the right-hand side;
    the identity itself is guard-checked.
    """
    ctx = bc_word.ctx
    word = bc_word.commutator_with(a).conj_by(invert_word(b))
    if not guards.strict():
        return word, None, None
    am = evaluate_elem(ctx, a)
    bm = evaluate_elem(ctx, b)
    am_inv = evaluate_elem(ctx, invert_word(a))
    bm_inv = evaluate_elem(ctx, invert_word(b))
    c = bm_inv @ bc_word.value
    c_inv = bc_word.value_inv @ bm
    left = commutator(bm_inv, am, bm, am_inv)
    right = commutator(am, c, am_inv, c_inv)
    guards.check(word.value == left @ right, "shuffle identity failed")
    return word, left, right
