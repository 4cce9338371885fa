import pytest

from crossint._kernels import HAVE_NUMBA, set_backend


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    """Keep tests independent of the caller's environment: private results
    cache, no backend override leaking in or out."""
    monkeypatch.setenv("CROSSINT_CACHE", str(tmp_path / "cache"))
    monkeypatch.delenv("CROSSINT_KERNELS", raising=False)
    yield
    set_backend(None)


def all_backends() -> tuple[str, ...]:
    return ("numba", "numpy", "python") if HAVE_NUMBA else ("numpy", "python")
