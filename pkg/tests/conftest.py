"""Named model configurations shared by the unit and acceptance suites."""
import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from pseudolom import (  # noqa: E402
    ExpComplement,
    ExpRatio,
    Exponential,
    GompertzLogistic,
    Identity,
    ParetoII,
    Power,
    PowerExpRatio,
    PseudoWeakDistribution,
    RecipExp,
    RngState,
    TanComplement,
    sample,
    undistort,
)

# Seeds are fixed before any run and never tuned to the outcome.
SEED = 20261014

CATALOG_GENERATORS = {
    "identity": Identity(),
    "power": Power(2.0),
    "exp_ratio": ExpRatio(0.5),
    "power_exp_ratio": PowerExpRatio(1.0, 2.0),
    "recip_exp": RecipExp(3.0),
    "tan_complement": TanComplement(-0.5, 0.5),
    "exp_complement": ExpComplement(-0.01, 0.5),
}

# (G1, G2, lambda) inside each family's rate window
CATALOG_MARGINALS = {
    "exponential": (Exponential(2.0), Exponential(3.0), 4.5),
    "pareto2": (ParetoII(2.0), ParetoII(3.0), 4.5),
    "gompertz": (GompertzLogistic(0.8, 1.0), GompertzLogistic(0.9, 1.5), 1.8),
}


def mo_classical():
    return PseudoWeakDistribution(Identity(), Exponential(2.0), Exponential(3.0), 4.5)


def fig1(theta):
    g = ExpRatio(theta)
    return PseudoWeakDistribution(
        g, undistort(g, Exponential(0.5)), undistort(g, Exponential(0.6)), 0.645
    )


def pareto_exp_complement(beta):
    G = ParetoII(3.0)
    return PseudoWeakDistribution(ExpComplement(-0.01, beta), G, G, 4.5)


def example31(distorted=True):
    G = ParetoII(2.0)
    g = PowerExpRatio(1.0, 2.0) if distorted else Identity()
    return PseudoWeakDistribution(g, G, G, 2.75)


MASS_CONFIGS = {
    f"{gname}-{mname}": PseudoWeakDistribution(g, *CATALOG_MARGINALS[mname])
    for gname, g in (("identity", Identity()), ("exp_ratio", ExpRatio(0.5)), ("recip_exp", RecipExp(3.0)))
    for mname in ("exponential", "pareto2")
}

ACCEPTANCE_CONFIGS = {
    "mo_classical": mo_classical,
    "fig1_theta0.01": lambda: fig1(0.01),
    "fig1_theta0.5": lambda: fig1(0.5),
    "fig1_theta0.99": lambda: fig1(0.99),
    "fig6_beta0.5": lambda: pareto_exp_complement(0.5),
    "fig7_beta0.75": lambda: pareto_exp_complement(0.75),
    "fig8_beta1": lambda: pareto_exp_complement(1.0),
    "example31": example31,
}


N_MC = 100_000
METHOD_SEEDS = {"structural": SEED, "conditional": SEED + 1}


@functools.lru_cache(maxsize=None)
def batch(name: str, method: str = "structural", n: int = N_MC):
    """Monte-Carlo draws for a named acceptance configuration, cached per session."""
    return sample(ACCEPTANCE_CONFIGS[name](), n, RngState(METHOD_SEEDS[method]), method)


@pytest.fixture
def mo():
    return mo_classical()


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
