import os
import pathlib

import pytest

# Persistent repo-local cache so repeated test runs skip the heavy expansions.
os.environ.setdefault("SKC_CACHE", str(pathlib.Path(__file__).parent / ".skc_cache"))


@pytest.fixture(scope="session")
def f18_long():
    """Weight-18 newform with enough coefficients for 256-bit L-values.

    Session-scoped so the critical-value pipeline cache (keyed on object
    identity) is shared between the unit tests and the acceptance gate.
    """
    from skcongruence.qseries import newforms
    return newforms(18, 520)[0]
