import itertools

import numpy as np
import pytest

from permconc.arrays import make_uniform_random


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=[3, 4, 5])
def random3(request):
    return make_uniform_random(request.param, 100 + request.param, 3)


def naive_t1(values, sigma):
    n = values.shape[0]
    return sum(values[i, j, sigma[i]] for i in range(n) for j in range(n))


def naive_t2(values, sigma, pi):
    return sum(values[i, sigma[i], pi[i]] for i in range(values.shape[0]))


def naive_y(values, sigma, pi):
    n = values.shape[0]
    total = 0.0
    for i, j, k in itertools.product(range(n), repeat=3):
        if len({i, j, k}) == 2:
            total += values[i, sigma[j], pi[k]]
    return total


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, passed: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (passed, detail)
    print(f"{'PASS' if passed else 'FAIL'} {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0].rstrip("."))):
        passed, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
