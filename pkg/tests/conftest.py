import functools

import pytest

from modbrace.enumeration import EnumerationTask, enumerate_braces_backtracking
from modbrace.galois_ring import construct_galois_ring
from modbrace.module_core import ModuleShape
from modbrace.radical_ring import NilpotentRing, brace_from_radical_ring

ACCEPTANCE_LINES: dict[int, str] = {}

# (p, lambda, exponents, mode)
SMALL_SHAPES = [
    (2, 1, (2,), "Z"), (2, 1, (1, 1), "Z"), (2, 1, (3,), "Z"), (2, 1, (2, 1), "Z"),
    (2, 1, (1, 1, 1), "Z"), (3, 1, (2,), "Z"), (3, 1, (1, 1), "Z"),
]
CORPUS_SHAPES = SMALL_SHAPES + [
    (3, 1, (1, 1), "D"), (2, 1, (4,), "Z"), (3, 1, (3,), "Z"), (3, 1, (4,), "Z"),
    (3, 1, (2, 1), "Z"), (2, 1, (2, 2), "Z"), (3, 2, (2,), "D"), (2, 2, (1, 1), "D"),
    (5, 1, (2,), "Z"),
]


def shape_of(p, lam, exps):
    return ModuleShape.create(p, lam, exps)


@functools.lru_cache(maxsize=None)
def enumerated(p, lam, exps, mode):
    return enumerate_braces_backtracking(EnumerationTask(shape_of(p, lam, exps), mode))


@pytest.fixture(scope="session")
def corpus():
    """Every backtracking-enumerated brace on the corpus shapes, keyed by shape."""
    return {s: enumerated(*s).braces for s in CORPUS_SHAPES}


@pytest.fixture(scope="session")
def two_z8():
    return brace_from_radical_ring(NilpotentRing.multiples(8, 2))


@pytest.fixture(scope="session")
def galois_brace():
    return brace_from_radical_ring(NilpotentRing.from_galois_ideal(construct_galois_ring(3, 2, 3), 1))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
