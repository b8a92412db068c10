import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria with runtime limits")


@pytest.fixture
def spec():
    from hlskit import IndexSpec

    def make(dims, p, q, lam=None):
        return IndexSpec.parse(dims, p, q, lam)
    return make
