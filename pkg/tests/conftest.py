import numpy as np
import pytest

from bathlink import ModelParams, build_liouvillian, discord


@pytest.fixture(scope="session")
def canonical_params():
    return ModelParams.from_rates(gamma1=1.01, gamma2=0.01, eta=1.0, omega=0.001)


@pytest.fixture(scope="session")
def canonical_liouvillian(canonical_params):
    return build_liouvillian(canonical_params)


@pytest.fixture(scope="session", autouse=True)
def warm_discord_kernel():
    # one throwaway call so JIT compilation does not land in timed tests
    discord(np.eye(4, dtype=complex) / 4.0, grid_size=4)
