import sys
from functools import lru_cache

import pytest

from pdslab.lift import build_d


@lru_cache(maxsize=None)
def cached_d(ell, j, k):
    return build_d(ell, j, k)


@pytest.fixture
def d():
    """``d(ell, j, k)`` -> cached candidate; tests must not mutate it."""
    return cached_d


ELL2_TRIPLES = [(2, j, k) for j in range(3) for k in range(j + 1)]
ELL3_RANGE = [(3, j, k) for j in range(1, 4) for k in range(1, j + 1)]


def symmetric_mutations(cand):
    """Three structurally valid (0-free, symmetric) corruptions of a candidate."""
    shape = cand.shape
    els = [int(x) for x in cand.elements]
    members = set(els)
    d0 = els[0]
    pair = {d0, int(shape.negate(d0))}
    x = next(g for g in range(1, shape.order) if g not in members)
    new_pair = {x, int(shape.negate(x))}
    return {
        "drop_pair": cand.replace_elements(sorted(members - pair)),
        "add_pair": cand.replace_elements(sorted(members | new_pair)),
        "swap_pair": cand.replace_elements(sorted((members - pair) | new_pair)),
    }


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
