import numpy as np
import pytest

from robustreg._kernels import _fallback

try:
    from robustreg._kernels import _core
    _BACKENDS = [("python", _fallback), ("cython", _core)]
except ImportError:
    _BACKENDS = [("python", _fallback)]


@pytest.fixture(params=_BACKENDS, ids=[b[0] for b in _BACKENDS])
def kernel_impl(request):
    """Run kernel-level tests against every available backend."""
    return request.param[1]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
