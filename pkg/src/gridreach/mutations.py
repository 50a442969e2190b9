"""Deliberate fault-injection switches used by the self-check suites.

Each flag, when enabled, re-introduces a specific bug class so that tests can
confirm the corresponding invariant check actually detects it.  All flags
default to off and must never be enabled in production paths.
"""

from __future__ import annotations

from contextlib import contextmanager

# Skip the monotone shift pass when computing fresh in/out levels during a
# hub step.  Breaks the ordering guarantee between in-levels and out-levels.
SKIP_LEVEL_SHIFT_PASS = False

# Ignore mandatory successor edges during token evaluation, i.e. treat every
# token slot as unconstrained.  Breaks equivalence with block reachability.
IGNORE_PATH_FUNCTION = False


@contextmanager
def enabled(name: str):
    """Temporarily enable one mutation flag by name."""
    globals_ = globals()
    if name not in globals_ or not isinstance(globals_[name], bool):
        raise KeyError(f"unknown mutation flag: {name}")
    old = globals_[name]
    globals_[name] = True
    try:
        yield
    finally:
        globals_[name] = old
