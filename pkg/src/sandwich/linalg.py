"""Dense exact matrices over a finite commutative ring.

Matrices are stored in the regular representation: an ``n x n`` matrix over
``R = (Z/m)[t]/(f)`` of degree ``d`` becomes an ``nd x nd`` integer matrix mod
``m`` where each entry ``x`` is replaced by the ``d x d`` matrix of
multiplication by ``x``.  Products are then plain integer products mod ``m``.
"""
from __future__ import annotations

import numpy as np

from .errors import DimMismatch, NotInvertible
from .ring import Elem, Ring


class Mat:
    __slots__ = ("ring", "n", "a", "_key")

    def __init__(self, ring: Ring, n: int, a: np.ndarray):
        self.ring = ring
        self.n = n
        self.a = a
        self._key = None

    # construction -----------------------------------------------------
    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Mat":
        return cls(ring, n, np.eye(n * ring.d, dtype=np.int64))

    @classmethod
    def zeros(cls, ring: Ring, n: int) -> "Mat":
        return cls(ring, n, np.zeros((n * ring.d,) * 2, dtype=np.int64))

    @classmethod
    def from_entries(cls, ring: Ring, rows) -> "Mat":
        n = len(rows)
        d = ring.d
        a = np.zeros((n * d, n * d), dtype=np.int64)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DimMismatch("matrix must be square")
            for j, x in enumerate(row):
                x = ring(x)
                if x:
                    a[i * d:(i + 1) * d, j * d:(j + 1) * d] = ring.mulmat(x)
        return cls(ring, n, a)

    @classmethod
    def scalar(cls, ring: Ring, n: int, x) -> "Mat":
        return cls(ring, n, np.kron(np.eye(n, dtype=np.int64), ring.mulmat(ring(x))))

    # access -----------------------------------------------------------
    def entry(self, i: int, j: int) -> Elem:
        d = self.ring.d
        col = self.a[i * d:(i + 1) * d, j * d]
        return Elem(self.ring, tuple(int(v) for v in col))

    def __getitem__(self, ij) -> Elem:
        return self.entry(*ij)

    def entries(self) -> list[list[Elem]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def row(self, i: int) -> list[Elem]:
        return [self.entry(i, j) for j in range(self.n)]

    def col(self, j: int) -> list[Elem]:
        return [self.entry(i, j) for i in range(self.n)]

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.a.tobytes()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.n == other.n and self.ring is other.ring and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def is_identity(self) -> bool:
        return np.array_equal(self.a, np.eye(self.a.shape[0], dtype=np.int64))

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Mat") -> None:
        if self.n != other.n:
            raise DimMismatch(f"dimensions {self.n} and {other.n} differ")
        if self.ring is not other.ring:
            raise DimMismatch("matrices over different rings")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ring, self.n, (self.a @ other.a) % self.ring.m)

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ring, self.n, (self.a + other.a) % self.ring.m)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ring, self.n, (self.a - other.a) % self.ring.m)

    def __neg__(self) -> "Mat":
        return Mat(self.ring, self.n, (-self.a) % self.ring.m)

    def scale(self, x) -> "Mat":
        return self @ Mat.scalar(self.ring, self.n, x)

    def conj_entries(self) -> "Mat":
        return Mat.from_entries(self.ring, [[x.bar for x in row] for row in self.entries()])

    def transpose(self) -> "Mat":
        ents = self.entries()
        return Mat.from_entries(self.ring, [list(col) for col in zip(*ents)])

    def __repr__(self):
        return "Mat(" + repr([[repr(x) for x in row] for row in self.entries()]) + ")"

    def to_json(self) -> dict:
        return {"dim": self.n, "entries": [[x.to_json() for x in row] for row in self.entries()]}

    @classmethod
    def from_json(cls, ring: Ring, obj: dict) -> "Mat":
        return cls.from_entries(ring, [[ring(x) for x in row] for row in obj["entries"]])


def mul(a: Mat, b: Mat) -> Mat:
    return a @ b


def identity(ring: Ring, n: int) -> Mat:
    return Mat.identity(ring, n)


def charpoly(a: Mat) -> list[Elem]:
    """Coefficients ``[1, p1, ..., pN]`` of ``det(x e - a)`` (Berkowitz, division free)."""
    ring, n, d, m = a.ring, a.n, a.ring.d, a.ring.m
    A = a.a
    blk = lambda i, j: A[i * d:(i + 1) * d, j * d:(j + 1) * d]
    # polynomial coefficients kept as d x d multiplication blocks
    poly = [np.eye(d, dtype=np.int64)]
    for r in range(n):
        diag = blk(r, r)
        toeplitz_col = [np.eye(d, dtype=np.int64), (-diag) % m]
        if r > 0:
            R = A[r * d:(r + 1) * d, 0:r * d]
            C = A[0:r * d, r * d:(r + 1) * d]
            M = A[0:r * d, 0:r * d]
            w = C
            for _ in range(r):
                toeplitz_col.append((-(R @ w)) % m)
                w = (M @ w) % m
        new = []
        for k in range(r + 2):
            acc = np.zeros((d, d), dtype=np.int64)
            for s in range(min(k, r) + 1):
                if k - s < len(toeplitz_col):
                    acc = (acc + toeplitz_col[k - s] @ poly[s]) % m
            new.append(acc)
        poly = new
    return [Elem(ring, tuple(int(v) for v in p[:, 0])) for p in poly]


def det_adjugate(a: Mat) -> tuple[Elem, Mat]:
    """Determinant and adjugate via the characteristic polynomial."""
    n = a.n
    p = charpoly(a)
    ring = a.ring
    b = Mat.identity(ring, n)
    for k in range(1, n):
        b = a @ b + Mat.scalar(ring, n, p[k])
    sign = 1 if (n + 1) % 2 == 0 else -1
    adj = b if sign == 1 else -b
    det = p[n] if n % 2 == 0 else -p[n]
    return det, adj


def det(a: Mat) -> Elem:
    return det_adjugate(a)[0]


def inverse(a: Mat) -> Mat:
    dt, adj = det_adjugate(a)
    if not dt.is_unit():
        raise NotInvertible(f"determinant {dt} is not a unit")
    return adj.scale(dt.inverse())


def conj(g: Mat, h: Mat, h_inv: Mat | None = None) -> Mat:
    """``h g h^-1``."""
    if h_inv is None:
        h_inv = inverse(h)
    return h @ g @ h_inv


def commutator(g: Mat, h: Mat, g_inv: Mat | None = None, h_inv: Mat | None = None) -> Mat:
    """``g h g^-1 h^-1``."""
    if g_inv is None:
        g_inv = inverse(g)
    if h_inv is None:
        h_inv = inverse(h)
    return g @ h @ g_inv @ h_inv
