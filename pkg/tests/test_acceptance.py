"""The eleven acceptance criteria, one test each.

Every test prints one line ``criterion N (...): PASS|FAIL - message``; run
with ``pytest -s`` to see them inline; they are also collected into the
terminal summary.
"""
import time

import pytest

from stated_skein.checks import SUITES

SEED = 42

CRITERIA = [
    (1, "phi respects the triangle relations", "phi-relations", 1.0),
    (2, "confluence of the rewrite system", "confluence", 60.0),
    (3, "word/diagram round trip", "roundtrip", None),
    (4, "leading term of parallel diagrams", "theta", None),
    (5, "cut-order independence", "cut-order", None),
    (6, "quantum trace is multiplicative", "homomorphism", 120.0),
    (7, "punctured-torus trace vs classical oracle", "torus-trace", None),
    (8, "leading terms of basis tangles", "leading", None),
    (9, "no zero divisors in samples", "domain", None),
    (10, "reflection anti-involution", "reflection", None),
    (11, "commutative at q = 1", "classical", None),
]


@pytest.mark.parametrize("number,title,suite,budget", CRITERIA, ids=[c[2] for c in CRITERIA])
def test_criterion(number, title, suite, budget, record_property):
    start = time.perf_counter()
    ok, msg = SUITES[suite](SEED)
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed > budget:
        ok = False
        msg += f" (took {elapsed:.1f}s, budget {budget:.0f}s)"
    line = f"criterion {number} ({title}): {'PASS' if ok else 'FAIL'} - {msg} [{elapsed:.2f}s]"
    print("\n" + line)
    record_property("criterion", (number, line))
    assert ok, msg
