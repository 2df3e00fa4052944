import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracle import OGroup, ORing  # noqa: E402

from sandwich import guards  # noqa: E402
from sandwich.gln import GlContext  # noqa: E402
from sandwich.hyperbolic import FormRingContext  # noqa: E402
from sandwich.ring import make_ring  # noqa: E402

# the four unitary configurations of the acceptance campaign
UNITARY_CONFIGS = {
    "symplectic-Z3": (dict(m=3, lam=(2,)), "max"),
    "symplectic-Z4": (dict(m=4, lam=(3,)), "max"),
    "orthogonal-Z5": (dict(m=5), "min"),
    "gaussian-Z5": (dict(m=5, f=(1, 0, 1), involution="neg"), "max"),
}


@pytest.fixture(autouse=True)
def _strict():
    guards.set_strict(True)
    yield
    guards.set_strict(True)


def oracle_for(ctx) -> OGroup:
    s = ctx.ring.spec
    ring = ORing(s.m, s.f, s.involution, s.lam, s.c)
    return OGroup(ring, ctx.n, "gl" if isinstance(ctx, GlContext) else "u")


def as_tuples(mat_json) -> list:
    return [[tuple(x) for x in row] for row in mat_json["entries"]]


def unitary_ctx(name, n=3) -> FormRingContext:
    kw, form = UNITARY_CONFIGS[name]
    return FormRingContext(make_ring(**kw), form, n)


def rng(seed=0):
    return np.random.default_rng(seed)


def isotropic_vector(ctx, g) -> list:
    """Random ``v`` with ``v_{-1} = 0`` and vanishing value (``v_3`` a unit, ``v_{-3}`` solved for)."""
    r = ctx.ring
    units = [x for x in r.elements() if x.is_unit()]
    v = [r.random(g) for _ in range(ctx.dim)]
    v[ctx.pos(-1)] = r.zero
    v[ctx.pos(-3)] = r.zero
    v[ctx.pos(3)] = units[int(g.integers(len(units)))]
    rest = ctx.value(v)
    v[ctx.pos(-3)] = -(v[ctx.pos(3)].bar.inverse() * rest)
    assert not ctx.value(v)
    return v


def fixing_member(ctx, g, length: int, side: str):
    """``(sigma, u)`` with column 1 (``side="col"``) or row 1 (``side="row"``) of ``sigma`` equal to ``u e_1``."""
    from sandwich.words import evaluate_elem

    r = ctx.ring
    word = []
    while len(word) < length:
        i, j = (int(v) for v in g.choice(ctx.labels, size=2, replace=False))
        if j == -i:
            continue
        if (side == "col" and (j == 1 or i == -1)) or (side == "row" and (i == 1 or j == -1)):
            continue
        word.append(ctx.tv(i, j, r.random(g)))
    units = [x for x in r.elements() if x.is_unit()]
    u = units[int(g.integers(len(units)))]
    d, tau = ctx.hyperbolic_unit(u), evaluate_elem(ctx, tuple(word))
    return (d @ tau if side == "col" else tau @ d), u


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
