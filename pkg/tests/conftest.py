import pytest

from setvalued import lp


@pytest.fixture(autouse=True, scope="session")
def _certify_every_lp():
    """Every LP solved during the test run is re-checked against its certificate."""
    old = lp.CHECK_CERTIFICATES
    lp.CHECK_CERTIFICATES = True
    yield
    lp.CHECK_CERTIFICATES = old
