import pytest

from pvsim import DEFAULT_CONTEXT, bundled_panel, estimate_parameters


@pytest.fixture(scope="session")
def bp():
    return bundled_panel("bp_sx_150")


@pytest.fixture(scope="session")
def bp_params(bp):
    return estimate_parameters(bp, DEFAULT_CONTEXT)
