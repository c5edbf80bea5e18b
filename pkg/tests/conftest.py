import pytest

from sqzlab import load_config


@pytest.fixture(scope="session")
def cfg():
    """Bundled default configuration (the reference instrument constants)."""
    return load_config()


@pytest.fixture(scope="session")
def loss(cfg):
    return cfg.opo.loss


@pytest.fixture(scope="session")
def enl_measured(cfg):
    return cfg.opo.enl
