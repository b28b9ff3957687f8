"""One verdict per acceptance criterion; the lines are echoed in the terminal summary.

Run directly (``python tests/test_acceptance.py``) to print the same lines
without pytest.
"""
from __future__ import annotations

import time

import pytest

import suites
from suites import CRITERIA


def line(n: int, name: str, ok: bool, detail: str, seconds: float) -> str:
    return f"criterion {n} ({name}): {'PASS' if ok else 'FAIL'} [{seconds:.1f}s] {detail}"


def run(n: int):
    name, fn = CRITERIA[n]
    t0 = time.time()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, not a skipped one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    text = line(n, name, ok, detail, time.time() - t0)
    suites.ACCEPTANCE_LINES[n] = text
    print(text)
    return ok, text


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, text = run(n)
    assert ok, text


if __name__ == "__main__":
    results = [run(n)[0] for n in sorted(CRITERIA)]
    raise SystemExit(0 if all(results) else 1)
