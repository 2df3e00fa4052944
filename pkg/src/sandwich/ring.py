"""Finite commutative rings with involution.

A ring is ``(Z/m)[t]/(f)`` for a monic ``f`` (or plain ``Z/m``) together with
one of three involutions and a constant ``lam`` with ``lam * conj(lam) == 1``.
Elements are stored as reduced coefficient tuples, so equality is structural.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    BudgetExceeded,
    FormParamViolation,
    InvalidInvolution,
    InvalidLambda,
    InvalidRing,
)

DEFAULT_BUDGET = 2**16
INVOLUTIONS = ("trivial", "neg", "c_minus")


@dataclass(frozen=True)
class RingSpec:
    m: int
    f: tuple[int, ...] | None = None
    involution: str = "trivial"
    lam: tuple[int, ...] = (1,)
    c: int = 0

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "f": list(self.f) if self.f is not None else None,
            "involution": self.involution,
            "lambda": list(self.lam),
        }
        if self.involution == "c_minus":
            out["c"] = self.c
        return out

    @classmethod
    def from_json(cls, obj: dict | str) -> "RingSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        lam = obj.get("lambda", [1])
        if isinstance(lam, int):
            lam = [lam]
        f = obj.get("f")
        return cls(
            m=int(obj["m"]),
            f=tuple(int(v) for v in f) if f is not None else None,
            involution=obj.get("involution", "trivial"),
            lam=tuple(int(v) for v in lam),
            c=int(obj.get("c", 0)),
        )


class Elem:
    """Element of a :class:`Ring`; immutable."""

    __slots__ = ("ring", "c", "_hash")

    def __init__(self, ring: "Ring", coeffs: tuple[int, ...]):
        self.ring = ring
        self.c = coeffs
        self._hash = hash(coeffs)

    def _coerce(self, other) -> "Elem":
        if isinstance(other, Elem):
            if other.ring is not self.ring:
                raise InvalidRing("elements of different rings")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.ring.m
        return Elem(self.ring, tuple((a + b) % m for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        m = self.ring.m
        return Elem(self.ring, tuple((-a) % m for a in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.ring._mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, Elem):
            return NotImplemented
        return self.c == other.c and self.ring is other.ring

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return any(self.c)

    @property
    def bar(self) -> "Elem":
        return self.ring.conj(self)

    def conj(self) -> "Elem":
        return self.ring.conj(self)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self)

    def inverse(self) -> "Elem":
        return self.ring.invert(self)

    def __repr__(self):
        if self.ring.d == 1:
            return str(self.c[0])
        terms = [f"{a}" if k == 0 else f"{a}t" if k == 1 else f"{a}t^{k}"
                 for k, a in enumerate(self.c) if a]
        return "+".join(terms) or "0"

    def to_json(self) -> list[int]:
        return list(self.c)


class Ring:
    """Arithmetic handle for a validated :class:`RingSpec`."""

    def __init__(self, spec: RingSpec, check_budget: int = 10**4):
        if spec.m < 2:
            raise InvalidRing("modulus must be >= 2")
        if spec.involution not in INVOLUTIONS:
            raise InvalidInvolution(f"unknown involution {spec.involution!r}")
        self.spec = spec
        self.m = spec.m
        if spec.f is None:
            self.f = (0, 1)
        else:
            f = tuple(v % self.m for v in spec.f)
            while len(f) > 1 and f[-1] == 0:
                f = f[:-1]
            if len(f) < 2 or f[-1] != 1:
                raise InvalidRing("extension polynomial must be monic of degree >= 1")
            self.f = f
        self.d = len(self.f) - 1
        self.size = self.m**self.d
        self.zero = Elem(self, (0,) * self.d)
        self.one = self(1)
        self._inv_cache: dict[Elem, Elem | None] = {}
        # images of the basis monomials under the involution
        if spec.involution == "trivial":
            image_t = self.t
        elif spec.involution == "neg":
            image_t = -self.t
        else:
            image_t = self(spec.c) - self.t
        powers = [self.one]
        for _ in range(1, self.d):
            powers.append(powers[-1] * image_t)
        self._conj_basis = powers
        self._check_involution(check_budget)
        self.lam = self(list(spec.lam))
        self.lam_bar = self.conj(self.lam)
        if self.lam * self.lam_bar != self.one:
            raise InvalidLambda(f"lambda={self.lam} does not satisfy lambda*conj(lambda)=1")

    def __call__(self, value) -> Elem:
        if isinstance(value, Elem):
            if value.ring is not self:
                raise InvalidRing("element of another ring")
            return value
        if isinstance(value, int):
            return Elem(self, ((value % self.m),) + (0,) * (self.d - 1))
        coeffs = [int(v) % self.m for v in value]
        if len(coeffs) > self.d:
            return self._reduce(coeffs)
        return Elem(self, tuple(coeffs) + (0,) * (self.d - len(coeffs)))

    @cached_property
    def t(self) -> Elem:
        if self.d == 1:
            return self(-self.f[0])
        return self([0, 1])

    def _reduce(self, coeffs: list[int]) -> Elem:
        m, d, f = self.m, self.d, self.f
        coeffs = list(coeffs)
        for k in range(len(coeffs) - 1, d - 1, -1):
            a = coeffs[k] % m
            if a:
                for s in range(d):
                    coeffs[k - d + s] -= a * f[s]
            coeffs[k] = 0
        return Elem(self, tuple(v % m for v in coeffs[:d]))

    def _mul(self, x: Elem, y: Elem) -> Elem:
        if self.d == 1:
            return Elem(self, ((x.c[0] * y.c[0]) % self.m,))
        prod = [0] * (2 * self.d - 1)
        for i, a in enumerate(x.c):
            if a:
                for j, b in enumerate(y.c):
                    prod[i + j] += a * b
        return self._reduce(prod)

    def conj(self, x: Elem) -> Elem:
        if self.spec.involution == "trivial":
            return x
        acc = self.zero
        for a, img in zip(x.c, self._conj_basis):
            if a:
                acc = acc + img * a
        return acc

    def _check_involution(self, budget: int) -> None:
        basis = [self([0] * k + [1]) for k in range(self.d)]
        if self.conj(self.one) != self.one:
            raise InvalidInvolution("involution does not fix 1")
        for a, b in itertools.product(basis, repeat=2):
            if self.conj(a * b) != self.conj(a) * self.conj(b):
                raise InvalidInvolution("involution is not multiplicative")
        for a in basis:
            if self.conj(self.conj(a)) != a:
                raise InvalidInvolution("involution is not of order two")
        if self.size <= budget:
            for x in self.elements():
                if self.conj(self.conj(x)) != x:
                    raise InvalidInvolution("involution is not of order two")

    def elements(self):
        for coeffs in itertools.product(range(self.m), repeat=self.d):
            yield Elem(self, coeffs[::-1])

    def require_budget(self, budget: int = DEFAULT_BUDGET) -> None:
        if self.size > budget:
            raise BudgetExceeded(f"|R|={self.size} exceeds enumeration budget {budget}")

    def is_unit(self, x: Elem) -> bool:
        return self._find_inverse(x) is not None

    def invert(self, x: Elem) -> Elem:
        inv = self._find_inverse(x)
        if inv is None:
            raise ArithmeticError(f"{x} is not a unit")
        return inv

    def _find_inverse(self, x: Elem) -> Elem | None:
        if x in self._inv_cache:
            return self._inv_cache[x]
        if self.d == 1:
            import math
            a = x.c[0]
            inv = self(pow(a, -1, self.m)) if math.gcd(a, self.m) == 1 else None
        else:
            self.require_budget()
            inv = next((y for y in self.elements() if x * y == self.one), None)
        self._inv_cache[x] = inv
        return inv

    def mulmat(self, x: Elem) -> np.ndarray:
        """Matrix of multiplication by ``x`` on the coefficient basis."""
        cols = [x.c]
        tx = x
        for _ in range(1, self.d):
            tx = tx * self.t
            cols.append(tx.c)
        return np.array(cols, dtype=np.int64).T

    def random(self, rng) -> Elem:
        return Elem(self, tuple(int(v) for v in rng.integers(0, self.m, size=self.d)))

    def __repr__(self):
        if self.d == 1:
            return f"Ring(Z/{self.m}, {self.spec.involution}, lam={self.lam})"
        return f"Ring(Z/{self.m}[t]/{self.f}, {self.spec.involution}, lam={self.lam})"


def make_ring(spec: RingSpec | None = None, **kwargs) -> Ring:
    """Validate ``spec`` and return a ring handle.

    >>> make_ring(m=4, lam=(3,)).lam
    3
    """
    if spec is None:
        spec = RingSpec(**kwargs)
    return Ring(spec)


def epsilon(i: int) -> int:
    return 1 if i > 0 else -1


def lambda_power(ring: Ring, i: int, j: int) -> Elem:
    """``lam ** ((eps(j) - eps(i)) / 2)``, with the inverse taken as ``conj(lam)``."""
    e = (epsilon(j) - epsilon(i)) // 2
    if e == 0:
        return ring.one
    return ring.lam if e == 1 else ring.lam_bar


def lam_pow(ring: Ring, e: int) -> Elem:
    if e == 0:
        return ring.one
    base = ring.lam if e > 0 else ring.lam_bar
    out = ring.one
    for _ in range(abs(e)):
        out = out * base
    return out


def additive_span(ring: Ring, gens) -> frozenset[Elem]:
    span = {ring.zero}
    for g in gens:
        if g in span:
            continue
        multiples = []
        x = ring.zero
        while True:
            x = x + g
            multiples.append(x)
            if x == ring.zero:
                break
        span = {s + k for s in span for k in multiples}
    return frozenset(span)


def lambda_min(ring: Ring, budget: int = DEFAULT_BUDGET) -> frozenset[Elem]:
    ring.require_budget(budget)
    return frozenset(x - ring.lam * x.bar for x in ring.elements())


def lambda_max(ring: Ring, budget: int = DEFAULT_BUDGET) -> frozenset[Elem]:
    ring.require_budget(budget)
    return frozenset(x for x in ring.elements() if x == -(ring.lam * x.bar))


def closure_under_conjugation(ring: Ring, start, ambient: frozenset[Elem] | None = None):
    """Smallest additive subgroup containing ``start`` and stable under ``y -> x y conj(x)``."""
    current = additive_span(ring, start)
    while True:
        extra = {x * y * x.bar for x in ring.elements() for y in current} - current
        if not extra:
            return current
        current = additive_span(ring, list(current) + list(extra))
        if ambient is not None and not current <= ambient:
            return current


@dataclass(frozen=True)
class FormParam:
    """Form parameter of kind ``min``, ``max`` or ``span`` (with generators)."""

    ring: Ring
    kind: str = "min"
    gens: tuple[Elem, ...] = ()
    budget: int = DEFAULT_BUDGET
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def realized(self) -> frozenset[Elem]:
        if "set" not in self._cache:
            self._cache["set"] = self._realize()
        return self._cache["set"]

    def _realize(self) -> frozenset[Elem]:
        lo = lambda_min(self.ring, self.budget)
        if self.kind == "min":
            return lo
        hi = lambda_max(self.ring, self.budget)
        if self.kind == "max":
            return hi
        if self.kind != "span":
            raise ValueError(f"unknown form parameter kind {self.kind!r}")
        gens = [self.ring(g) for g in self.gens]
        out = closure_under_conjugation(self.ring, list(lo) + gens, hi)
        if not out <= hi:
            raise FormParamViolation("generators are not contained in Lambda_max")
        return out

    def __contains__(self, x: Elem) -> bool:
        return x in self.realized

    def check_axioms(self) -> bool:
        lo = lambda_min(self.ring, self.budget)
        hi = lambda_max(self.ring, self.budget)
        s = self.realized
        closed = all(x * y * x.bar in s for x in self.ring.elements() for y in s)
        return lo <= s <= hi and closed


def form_param_membership(fp: FormParam, x: Elem) -> bool:
    return x in fp
