"""Command line front end: decomposition campaigns, relation suites, sandwich
desk checks and random member generation.  Output is newline-delimited JSON."""
from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import gln, guards, ortho_decomp as od, unitary_decomp as ud
from .congruence import sct_desk_check
from .errors import GuardFailed, InvalidRing, SandwichError
from .gln import GlContext
from .hyperbolic import FormRingContext, check_unitary_relations
from .linalg import Mat
from .ring import Elem, FormParam, RingSpec, make_ring

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

TARGETS = {
    "gl": ("entry", "diagdiff"),
    "o": ("entry", "antidiag", "diagdiff", "oppdiag"),
    "u": ("entry", "antidiag", "diagdiff", "oppdiag", "value", "step1", "step2", "step3"),
}


class ConfigError(click.ClickException):
    exit_code = EXIT_CONFIG


def _coeffs(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot parse coefficient list {text!r}") from exc


def _jsonable(obj):
    if isinstance(obj, (Elem, Mat)):
        return obj.to_json()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(out, record: dict) -> None:
    out.write(json.dumps(_jsonable(record), sort_keys=True, separators=(",", ":")) + "\n")


def build_context(group: str, m: int, f: str | None, involution: str, lam: str,
                  form: str, n: int, c: int = 0):
    """Context for the requested group; raises :class:`ConfigError` on bad settings."""
    try:
        spec = RingSpec(m=m, f=_coeffs(f) if f else None, involution=involution,
                        lam=_coeffs(lam), c=c)
        ring = make_ring(spec)
        if group == "gl":
            return GlContext(ring, n)
        if form.startswith("span:"):
            gens = tuple(_coeffs(g) for g in form[5:].split(";") if g)
            fp = FormParam(ring, "span", tuple(ring(g) for g in gens))
        elif form in ("min", "max"):
            fp = FormParam(ring, form)
        else:
            raise ConfigError(f"unknown form parameter {form!r}")
        fp.realized
        ctx = FormRingContext(ring, fp, n)
        if group == "o" and not ctx.is_orthogonal:
            raise ConfigError("orthogonal group needs trivial involution, lambda = 1 and form min")
        return ctx
    except (InvalidRing, SandwichError, ValueError) as exc:
        if isinstance(exc, click.ClickException):
            raise
        raise ConfigError(str(exc)) from exc


def _pick(rng, labels, avoid=()):
    pool = [h for h in labels if h not in avoid]
    return int(pool[int(rng.integers(len(pool)))])


def _pair(rng, labels, signed: bool):
    i = _pick(rng, labels)
    j = _pick(rng, labels, (i, -i) if signed else (i,))
    return i, j


def _run_target(ctx, group: str, target: str, sigma, sigma_inv, rng):
    """Run one decomposition; returns ``(indices, word, bound)``."""
    labels = ctx.labels
    signed = group != "gl"
    if group == "gl":
        (i, j), (k, l) = _pair(rng, labels, False), _pair(rng, labels, False)
        fn = gln.entry_word if target == "entry" else gln.diag_diff_word
        bound = 8 if target == "entry" else 24
        return {"i": i, "j": j, "k": k, "l": l}, fn(ctx, sigma, i, j, k, l, sigma_inv=sigma_inv), bound
    mod = od if group == "o" else ud
    pre = "o_" if group == "o" else "u_"
    unit = 8 if group == "o" else ud.M
    (i, j), (k, l) = _pair(rng, labels, signed), _pair(rng, labels, signed)
    if target == "entry":
        w = getattr(mod, pre + "entry_word")(ctx, sigma, i, j, k, l, sigma_inv=sigma_inv)
        return {"i": i, "j": j, "k": k, "l": l}, w, unit
    if target == "antidiag":
        w = getattr(mod, pre + "antidiag_word")(ctx, sigma, i, k, l, sigma_inv=sigma_inv)
        return {"i": i, "k": k, "l": l}, w, 2 * unit
    if target == "diagdiff":
        w = getattr(mod, pre + "diag_diff_word")(ctx, sigma, i, j, k, l, sigma_inv=sigma_inv)
        return {"i": i, "j": j, "k": k, "l": l}, w, 3 * unit
    if target == "oppdiag":
        w = getattr(mod, pre + "opposite_diag_word")(ctx, sigma, i, k, l, sigma_inv=sigma_inv)
        return {"i": i, "k": k, "l": l}, w, 6 * unit
    if target == "value":
        j, k = _pick(rng, labels), _pick(rng, labels)
        w = ud.u_value_word(ctx, sigma, j, k, sigma_inv=sigma_inv)
        return {"j": j, "k": k}, w, w.meta["bound"]
    step = int(target[-1])
    x = ctx.ring.random(rng)
    fn = {1: ud.u_step1_word, 2: ud.u_step2_word, 3: ud.u_step3_word}[step]
    w = fn(ctx, sigma, x, k, l, sigma_inv=sigma_inv)
    return {"x": x, "k": k, "l": l}, w, 32 if step == 3 else 16


def _random_member(ctx, group, length, rng):
    if group == "gl":
        return ctx.random_member(length, rng)
    return ctx.random_member(length, rng, unit=group == "u")


def common(fn):
    opts = [
        click.option("--group", type=click.Choice(["gl", "o", "u"]), required=True),
        click.option("--m", "m", type=int, required=True, help="modulus"),
        click.option("--f", "f", default=None, help="monic extension polynomial, coefficients low to high"),
        click.option("--involution", type=click.Choice(["trivial", "neg", "c_minus"]), default="trivial"),
        click.option("--c", "c", type=int, default=0, help="constant for the c_minus involution"),
        click.option("--lambda", "lam", default="1", help="lambda, coefficients low to high"),
        click.option("--form", default="min", help="min, max or span:g1;g2 (each a coefficient list)"),
        click.option("--n", "n", type=int, default=3),
        click.option("--seed", type=int, default=0),
        click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None),
        click.option("--strict-guards", type=click.Choice(["on", "off"]), default="on"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _open(out):
    return open(out, "w") if out else sys.stdout


def _config(kw):
    guards.set_strict(kw["strict_guards"] == "on")
    if kw["m"] < 2:
        raise ConfigError("modulus must be at least 2")
    ctx = build_context(kw["group"], kw["m"], kw["f"], kw["involution"], kw["lam"],
                        kw["form"], kw["n"], kw["c"])
    return ctx


def _ring_info(ctx, kw) -> dict:
    info = {"group": kw["group"], "n": kw["n"], "ring": ctx.ring.spec.to_json(), "seed": kw["seed"]}
    if kw["group"] != "gl":
        info["form"] = kw["form"]
    return info


@click.group()
def main():
    """Explicit sandwich decompositions over finite rings."""


@main.command()
@common
@click.option("--target", required=True)
@click.option("--trials", type=int, default=1)
@click.option("--len", "length", type=int, default=12, help="generator word length for random members")
@click.option("--words/--no-words", default=True, help="include the factor list in each trace")
def decompose(target, trials, length, words, **kw):
    """Decompose random members and write one verified trace per trial."""
    group = kw["group"]
    if "-" in target:
        pre, target = target.split("-", 1)
        if pre != group:
            raise ConfigError(f"target prefix {pre!r} does not match group {group!r}")
    if target not in TARGETS[group]:
        raise ConfigError(f"unknown target {target!r} for group {group}")
    if trials < 0:
        raise ConfigError("--trials must be non-negative")
    ctx = _config(kw)
    ok = True
    with _open(kw["out"]) as out:
        for trial in range(trials):
            rng = np.random.default_rng([kw["seed"], trial])
            rec = dict(_ring_info(ctx, kw), trial=trial, target=f"{group}-{target}")
            try:
                sigma, sigma_inv = _random_member(ctx, group, length, rng)
                idx, w, bound = _run_target(ctx, group, target, sigma, sigma_inv, rng)
                verified = w.evaluate() == w.claimed_target
                within = w.count <= bound
                rec.update(indices=idx, count=w.count, bound=bound, verified=verified,
                           within_bound=within, meta=w.meta)
                if words:
                    rec["trace"] = w.to_json()
                else:
                    rec["sigma"] = sigma.to_json()
                ok &= verified and within
            except GuardFailed as exc:
                rec.update(verified=False, error=f"GuardFailed: {exc}")
                ok = False
            _emit(out, rec)
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@main.command()
@common
@click.option("--budget", type=int, default=4096)
def relations(budget, **kw):
    """Run the relation suite for the chosen group."""
    ctx = _config(kw)
    rng = np.random.default_rng(kw["seed"])
    if kw["group"] == "gl":
        rep = gln.check_relations(ctx, budget=budget, rng=rng)
    else:
        rep = check_unitary_relations(ctx, budget=budget, rng=rng)
    with _open(kw["out"]) as out:
        _emit(out, dict(_ring_info(ctx, kw), report=rep))
    sys.exit(EXIT_OK if rep.get("ok") else EXIT_FAIL)


@main.command()
@common
@click.option("--trials", type=int, default=1)
@click.option("--len", "length", type=int, default=8)
def sct(trials, length, **kw):
    """Sandwich desk check for random members."""
    ctx = _config(kw)
    ok = True
    with _open(kw["out"]) as out:
        for trial in range(trials):
            rng = np.random.default_rng([kw["seed"], trial])
            sigma, _ = _random_member(ctx, kw["group"], length, rng)
            try:
                rep = sct_desk_check(ctx, sigma)
            except GuardFailed as exc:
                rep = {"ok": False, "failures": [f"GuardFailed: {exc}"]}
            ok &= bool(rep["ok"])
            _emit(out, dict(_ring_info(ctx, kw), trial=trial, sigma=sigma.to_json(), report=rep))
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@main.command()
@common
@click.option("--len", "length", type=int, default=12)
def gen(length, **kw):
    """Print one random member as JSON."""
    ctx = _config(kw)
    rng = np.random.default_rng(kw["seed"])
    sigma, _ = _random_member(ctx, kw["group"], length, rng)
    with _open(kw["out"]) as out:
        _emit(out, dict(_ring_info(ctx, kw), len=length, matrix=sigma.to_json()))
    sys.exit(EXIT_OK)


if __name__ == "__main__":  # pragma: no cover
    main()
