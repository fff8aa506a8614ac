import os

os.environ.setdefault("DUALEP_SETTINGS_MODULE", "config.settings.test")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from dualep.conf import settings  # noqa: E402
from dualep.families.models import Ep2Derived  # noqa: E402
from dualep.families.models import Ep3Derived  # noqa: E402
from dualep.families.services import family_gate  # noqa: E402
from dualep.families.services import solve_family  # noqa: E402
from dualep.gates.services import SWAP  # noqa: E402
from dualep.tests.fixtures import reference_values as ref  # noqa: E402
from dualep.transfer.models import TransferMatrix  # noqa: E402
from dualep.transfer.services import transfer_plus  # noqa: E402

# Apply the logging config before pytest's capture handlers attach.
settings.LOG_LEVEL  # noqa: B018


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def swap() -> np.ndarray:
    return SWAP.copy()


@pytest.fixture(scope="session")
def ep2() -> Ep2Derived:
    return solve_family("ep2", ref.EP2_PHI_BIG)


@pytest.fixture(scope="session")
def ep3() -> Ep3Derived:
    return solve_family("ep3", ref.EP3_PHI_BIG)


@pytest.fixture(scope="session")
def ep2_gate(ep2) -> np.ndarray:
    return family_gate(ep2)


@pytest.fixture(scope="session")
def ep3_gate(ep3) -> np.ndarray:
    return family_gate(ep3)


@pytest.fixture(scope="session")
def ep2_transfer(ep2_gate) -> TransferMatrix:
    return transfer_plus(ep2_gate)


@pytest.fixture(scope="session")
def ep3_transfer(ep3_gate) -> TransferMatrix:
    return transfer_plus(ep3_gate)
