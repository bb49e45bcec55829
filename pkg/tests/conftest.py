import numpy as np
import pytest

from dweit.model import SystemParams, validate_params


@pytest.fixture(scope="session")
def narrow_params():
    """Realistic-tunneling configuration: ultranarrow resonances at +/- 1e-4."""
    return validate_params(
        SystemParams(omega_ac=2.0, gamma_a=2.0, gamma_ab=1.0, g_b=2.0e-4, g_c=2.0e-4)
    )


@pytest.fixture(scope="session")
def broad_params():
    """Exaggerated tunneling (g = gamma_ab / 10) so every feature is wide."""
    return validate_params(
        SystemParams(omega_ac=2.0, gamma_a=2.0, gamma_ab=1.0, g_a=0.1, g_b=0.1, g_c=0.1)
    )


@pytest.fixture(scope="session")
def standard_params():
    """No tunneling at all: plain single-well EIT."""
    return validate_params(SystemParams(omega_ac=2.0, gamma_a=2.0, gamma_ab=1.0))


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)


def rel_diff(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale
