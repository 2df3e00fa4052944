"""Acceptance campaigns 1-7.  Each prints one ``CRITERION k: PASS|FAIL`` line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.  All comparisons are exact.
"""
import sys
import time

import numpy as np
import pytest
from conftest import (ACCEPTANCE, UNITARY_CONFIGS, fixing_member, isotropic_vector, unitary_ctx)

from sandwich import guards, ortho_decomp as od, unitary_decomp as ud
from sandwich.congruence import sct_desk_check
from sandwich.errors import SandwichError
from sandwich.gln import GlContext, check_relations, diag_diff_word, entry_word
from sandwich.hyperbolic import FormRingContext, check_unitary_relations
from sandwich.ring import make_ring
from sandwich.words import evaluate_elem

GUARD_EVENTS: dict = {}


def record(k: int, ok: bool, detail: str, seconds: float, limit: float, events: int) -> bool:
    within = seconds < limit
    passed = ok and within
    line = (f"CRITERION {k}: {'PASS' if passed else 'FAIL'} ({detail}; "
            f"{seconds:.1f}s of {limit:.0f}s allowed)")
    ACCEPTANCE[k] = line
    GUARD_EVENTS[k] = events
    print(line, flush=True)
    return passed


def campaign(k: int, limit: float, body) -> bool:
    """Run ``body()`` returning ``(failures, checks)``; exceptions count as failures."""
    guards.set_strict(True)
    before = guards.failures()
    start = time.perf_counter()
    try:
        failures, checks = body()
        detail = f"{checks} checks, {len(failures)} failures" + (f": {failures[:3]}" if failures else "")
    except SandwichError as exc:
        failures, detail = [exc], f"aborted: {type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    return record(k, not failures, detail, seconds, limit, guards.failures() - before)


def signed_pair(g, labels, signed=True):
    i = int(g.choice(labels))
    j = int(g.choice([h for h in labels if h != i and not (signed and h == -i)]))
    return i, j


# 1 ----------------------------------------------------------------------------

RELATION_RINGS = [dict(m=2), dict(m=3), dict(m=4), dict(m=3, f=(1, 0, 1), involution="neg")]


def relation_suite():
    failures, checks = [], 0
    for kw in RELATION_RINGS:
        variants = [("gl", None)]
        ring = make_ring(**kw)
        lams = [(1,)] + ([(ring.m - 1,)] if ring.m > 2 else [])
        for lam in lams:
            variants += [("u", (lam, "min")), ("u", (lam, "max"))]
        for kind, extra in variants:
            if kind == "gl":
                ctx = GlContext(ring, 3)
                rep = check_relations(ctx)
            else:
                lam, form = extra
                ctx = FormRingContext(make_ring(**dict(kw, lam=lam)), form, 3)
                rep = check_unitary_relations(ctx)
            checks += 1
            if not rep["ok"]:
                failures.append((kw, kind, extra))
    return failures, checks


# 2 ----------------------------------------------------------------------------

def gl_campaign(trials=200):
    failures, checks = [], 0
    for n, m in ((3, 4), (3, 5), (4, 6), (5, 9)):
        ctx = GlContext(make_ring(m=m), n)
        for t in range(trials):
            g = np.random.default_rng([2, n, m, t])
            s, si = ctx.random_member(12, g)
            e = lambda a, b: ctx.entry(s, a, b)
            (i, j), (k, l) = signed_pair(g, ctx.labels, False), signed_pair(g, ctx.labels, False)
            w = entry_word(ctx, s, i, j, k, l, sigma_inv=si)
            ok1 = w.count == 8 and w.evaluate() == ctx.t(k, l, e(i, j))
            w = diag_diff_word(ctx, s, i, j, k, l, sigma_inv=si)
            ok2 = w.count == 24 and w.evaluate() == ctx.t(k, l, e(i, i) - e(j, j))
            checks += 2
            if not (ok1 and ok2):
                failures.append((n, m, t))
    return failures, checks


# 3 ----------------------------------------------------------------------------

def ortho_campaign(trials=200):
    failures, checks = [], 0
    for n, m in ((3, 4), (3, 5), (4, 5)):
        ctx = FormRingContext(make_ring(m=m), "min", n)
        for t in range(trials):
            g = np.random.default_rng([3, n, m, t])
            s, si = ctx.random_member(14, g)
            e = lambda a, b: ctx.entry(s, a, b)
            (i, j), (k, l) = signed_pair(g, ctx.labels), signed_pair(g, ctx.labels)
            cases = [
                (od.o_entry_word(ctx, s, i, j, k, l, sigma_inv=si), 8, e(i, j)),
                (od.o_antidiag_word(ctx, s, i, k, l, sigma_inv=si), 16, e(i, -i)),
                (od.o_diag_diff_word(ctx, s, i, j, k, l, sigma_inv=si), 24, e(i, i) - e(j, j)),
                (od.o_opposite_diag_word(ctx, s, i, k, l, sigma_inv=si), 48, e(i, i) - e(-i, -i)),
            ]
            for w, count, x in cases:
                checks += 1
                if w.count != count or w.evaluate() != ctx.T(k, l, x):
                    failures.append((n, m, t, count))
    return failures, checks


# 4 ----------------------------------------------------------------------------

def unitary_campaign(trials=100):
    failures, checks = [], 0
    for name in UNITARY_CONFIGS:
        ctx = unitary_ctx(name)
        n = ctx.n
        for t in range(trials):
            g = np.random.default_rng([4, t, len(name)])
            s, si = ctx.random_member(20, g, unit=True)
            e = lambda a, b: ctx.entry(s, a, b)
            x = ctx.ring.random(g)
            (i, j), (k, l) = signed_pair(g, ctx.labels), signed_pair(g, ctx.labels)
            base = x * e(2, 3).bar
            cases = [
                (ud.u_step1_word(ctx, s, x, k, l, sigma_inv=si), 16, ctx.T(k, l, base * e(2, -1))),
                (ud.u_step2_word(ctx, s, x, k, l, sigma_inv=si), 16, ctx.T(k, l, base * e(2, 1))),
                (ud.u_step3_word(ctx, s, x, k, l, sigma_inv=si), 32, ctx.T(k, l, base * e(2, 2))),
                (ud.u_entry_word(ctx, s, i, j, k, l, sigma_inv=si), 160, ctx.T(k, l, e(i, j))),
                (ud.u_antidiag_word(ctx, s, i, k, l, sigma_inv=si), 320, ctx.T(k, l, e(i, -i))),
                (ud.u_diag_diff_word(ctx, s, i, j, k, l, sigma_inv=si), 480,
                 ctx.T(k, l, e(i, i) - e(j, j))),
                (ud.u_opposite_diag_word(ctx, s, i, k, l, sigma_inv=si), 960,
                 ctx.T(k, l, e(i, i) - e(-i, -i))),
            ]
            for w, count, target in cases:
                checks += 1
                if w.count != count or w.evaluate() != target:
                    failures.append((name, t, count))
            # part (v): every fourth trial takes column 1, which has the tighter bound
            col = 1 if t % 4 == 0 else int(g.choice(ctx.labels))
            kk = int(g.choice(ctx.labels))
            w = ud.u_value_word(ctx, s, col, kk, sigma_inv=si)
            bound = 1600 * n + (3044 if col == 1 else 4004)
            target = ctx.T(kk, -kk, ctx.long_twist(kk) * ctx.value(ctx.column(s, col)))
            checks += 1
            # finalize already evaluated the flat product under strict guards; reuse that
            if w.count > bound or not w.verified or w.claimed_target != target:
                failures.append((name, t, "value", col, kk))
    return failures, checks


# 5 ----------------------------------------------------------------------------

def identity_campaign(instances=100):
    failures, checks = [], 0
    names = list(UNITARY_CONFIGS)
    ctxs = {name: unitary_ctx(name) for name in names}
    for t in range(instances):
        ctx = ctxs[names[t % len(names)]]
        g = np.random.default_rng([5, t])
        s, si = ctx.random_member(16, g, unit=True)
        r = ctx.ring
        # Eichler conjugation
        v = isotropic_vector(ctx, g)
        mat, word = ctx.eichler(v, sigma=s)
        ok = evaluate_elem(ctx, word) == mat and s @ mat @ si == ctx.eichler_conjugate(s, v)
        # polarity: the form and the intertwining with sigma
        u = [r.random(g) for _ in range(ctx.dim)]
        pu = ctx.polarity(u)
        ok &= sum((a * b for a, b in zip(pu, v)), r.zero) == ctx.form_h(u, v)
        ok &= ctx.polarity(ctx.matvec(s, u)) == ctx.vecmat(pu, si)
        # row-column duality, on members whose column or row 1 is a unit multiple of e_1
        for side in ("col", "row"):
            f, unit = fixing_member(ctx, g, 12, side)
            ok &= ctx.dual_row_column_check(f, 1, unit)
            ok &= (ctx.row(f, -1) if side == "col" else ctx.column(f, -1)) == ctx.basis(-1, unit.bar.inverse())
        # value formula
        i, j = signed_pair(g, ctx.labels)
        hat = ctx.P(i, j) @ s @ ctx.P(j, i)
        ok &= ctx.hat_value_formula(s, i, j) == ctx.value(ctx.column(hat, i))
        checks += 4
        if not ok:
            failures.append(t)
    return failures, checks


# 6 ----------------------------------------------------------------------------

def sct_campaign(trials=50, unitary_trials=20):
    failures, checks = [], 0
    contexts = []
    for m in (4, 6):
        contexts.append((f"gl-Z{m}", GlContext(make_ring(m=m), 3), trials))
        contexts.append((f"o-Z{m}", FormRingContext(make_ring(m=m), "min", 3), trials))
    contexts.append(("u-symplectic-Z4", unitary_ctx("symplectic-Z4"), unitary_trials))
    for name, ctx, count in contexts:
        for t in range(count):
            g = np.random.default_rng([6, t, len(name)])
            s, _ = ctx.random_member(8, g)
            rep = sct_desk_check(ctx, s)
            checks += 1
            complete = rep["lower_inclusion_verified_elements"] == rep["level_size"]
            if not (rep["ok"] and rep["upper_inclusion"] and complete):
                failures.append((name, t, rep["failures"][:2]))
    return failures, checks


CAMPAIGNS = [
    (1, 60, relation_suite),
    (2, 120, gl_campaign),
    (3, 180, ortho_campaign),
    (4, 900, unitary_campaign),
    (5, 600, identity_campaign),
    (6, 600, sct_campaign),
]


@pytest.mark.parametrize("k,limit,body", CAMPAIGNS, ids=[f"criterion_{c[0]}" for c in CAMPAIGNS])
def test_criterion(k, limit, body):
    assert campaign(k, limit, body), ACCEPTANCE[k]


def test_criterion_7_guard_regime():
    missing = [k for k, *_ in CAMPAIGNS if k not in GUARD_EVENTS]
    events = sum(GUARD_EVENTS.values())
    ok = not missing and events == 0
    detail = f"{events} GuardFailed events" + (f", campaigns not run: {missing}" if missing else "")
    record(7, ok, detail, 0.0, 1.0, 0)
    assert ok, ACCEPTANCE[7]


if __name__ == "__main__":
    results = [campaign(k, limit, body) for k, limit, body in CAMPAIGNS]
    events = sum(GUARD_EVENTS.values())
    results.append(record(7, events == 0, f"{events} GuardFailed events", 0.0, 1.0, 0))
    sys.exit(0 if all(results) else 1)
