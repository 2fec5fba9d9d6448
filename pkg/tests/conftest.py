import pytest

from bcshubbard import _backend, free_energy, observables


@pytest.fixture(params=sorted(_backend.KERNELS))
def kernels(request, monkeypatch):
    """Run a test once per available kernel implementation."""
    k = _backend.KERNELS[request.param]
    monkeypatch.setattr(free_energy, "_k", k)
    monkeypatch.setattr(observables, "_k", k)
    return k
