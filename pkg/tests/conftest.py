import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from poisson_cauchy.harness.corpus import builtin_corpus, corpus_by_name
from poisson_cauchy.smoothness import TestFunction


def polynomial_function(coefs, order=8):
    """A polynomial test function (not in any L_p; only finite-interval checks use it)."""
    polys = [Polynomial(coefs)]
    for _ in range(order):
        polys.append(polys[-1].deriv())
    return TestFunction(
        name=f"poly{len(coefs) - 1}",
        order=order,
        deriv_fn=lambda k, x: polys[k](x) + np.zeros_like(x),
        lp_membership=(),
        decay_exponent=-math.inf,
        support_radius=lambda eps: math.inf,
        sup_abs=math.inf,
        polynomial_degree=len(coefs) - 1,
    )


@pytest.fixture
def gaussian():
    return corpus_by_name("gaussian").f


@pytest.fixture
def corpus():
    return builtin_corpus()


ACCEPTANCE_LINES = []


def record_acceptance(number, title, passed, detail):
    line = f"criterion {number:>2} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
