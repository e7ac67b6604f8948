import numpy as np
import pytest

from shadowperc import _backend, alpha, clusters, reconstruct

BACKENDS = sorted(_backend.available())


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    k = _backend.available()[request.param]
    for mod in (alpha, clusters, reconstruct):
        monkeypatch.setattr(mod, "kernels", k)
    return k


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
