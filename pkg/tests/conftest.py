import numpy as np
import pytest

from mmauv.config import parse_config, packaged_config_text
from mmauv.mass import VehicleParams


@pytest.fixture(scope="session")
def remus():
    """Parsed packaged configuration (params, env, scenario, damping)."""
    return parse_config(packaged_config_text())


def make_params(rng, coupled=False, offset_cg=True):
    """Random valid vehicle parameters.

    Magnitudes stay in a small-vehicle range so conditioning does not
    swamp the tolerances under test. The moving-mass fraction stays
    below the heavy-mass warning threshold.
    """
    m_s = float(rng.uniform(5.0, 60.0))
    m_p = float(rng.uniform(0.05, 0.18)) * m_s
    r_s = rng.uniform(-0.2, 0.2, 3) if offset_cg else np.zeros(3)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    I_g = q @ np.diag(rng.uniform(0.1, 5.0, 3)) @ q.T
    I_g = 0.5 * (I_g + I_g.T)
    coupling = 0.5 * rng.normal(size=(3, 3)) if coupled \
        else np.zeros((3, 3))
    return VehicleParams(
        m_s=m_s,
        m_p=m_p,
        r_s=r_s,
        I_g=I_g,
        added_linear=rng.uniform(0.0, 40.0, 3),
        added_angular=rng.uniform(0.0, 5.0, 3),
        added_coupling=coupling,
        displaced_volume=(m_s + m_p) / 1026.0,
    )


def random_nu9(rng, scale=2.0):
    return rng.uniform(-scale, scale, 9)


def random_r_p(rng, scale=2.0):
    return rng.uniform(-scale, scale, 3)
