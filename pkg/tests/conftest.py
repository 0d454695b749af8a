import pytest

from hlito import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # trigger one-time JIT compilation so tests measure steady-state runtime
    _kernels.warmup()
