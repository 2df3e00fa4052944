"""Switch for the executable "one checks easily" assertions inside constructions."""
from __future__ import annotations

import contextlib
import logging

from .errors import GuardFailed

log = logging.getLogger(__name__)

_state = {"strict": True, "events": 0}


def strict() -> bool:
    return _state["strict"]


def set_strict(on: bool) -> None:
    _state["strict"] = bool(on)


@contextlib.contextmanager
def strict_guards(on: bool):
    old = _state["strict"]
    _state["strict"] = bool(on)
    try:
        yield
    finally:
        _state["strict"] = old


def failures() -> int:
    return _state["events"]


def check(ok: bool, message: str, exc: type[GuardFailed] = GuardFailed) -> None:
    """Raise ``exc`` when ``ok`` is false.  Skipped entirely in non-strict mode
    by callers that test :func:`strict` before computing expensive conditions."""
    if not ok:
        _state["events"] += 1
        log.error("guard failed: %s", message)
        raise exc(message)
