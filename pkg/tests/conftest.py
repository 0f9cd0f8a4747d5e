import pytest

from steklab import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT compilation must not land inside timed test bodies.
    _kernels.warm_up()
