import numpy as np
import pytest

from prp3 import PlatformPose, PlatformState, default_geometry, solve_position, solve_velocity


@pytest.fixture(scope="session")
def geom():
    return default_geometry()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_pose(rng, box=0.1, phi_lo=-1.0, phi_hi=1.0, band=0.05):
    while True:
        phi = rng.uniform(phi_lo, phi_hi)
        if abs(np.sin(phi - np.pi / 3)) > np.sin(band):
            return PlatformPose(rng.uniform(-box, box), rng.uniform(-box, box), phi)


def random_state(rng, **kw):
    pose = random_pose(rng, **kw)
    vel = (rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(-0.5, 0.5))
    acc = (rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(-0.5, 0.5))
    return PlatformState(pose, vel, acc)


def shifted(state, h):
    """State ``h`` seconds along a path with the given velocity and acceleration."""
    p, v, a = state.pose.as_array(), np.array(state.vel), np.array(state.acc)
    return PlatformState.from_arrays(p + h * v + 0.5 * h * h * a, v + h * a, a)


def fd_position_rates(geom, state, h=1e-6):
    """Central differences of (lambda10, lambda32) along the state's path."""
    plus = solve_position(geom, shifted(state, h).pose)
    minus = solve_position(geom, shifted(state, -h).pose)
    return ((plus.lambda10 - minus.lambda10) / (2 * h),
            (plus.lambda32 - minus.lambda32) / (2 * h))


def fd_velocity_rates(geom, state, h=1e-6):
    """Central differences of (v10, v32) along the state's path."""
    out = []
    for s in (shifted(state, h), shifted(state, -h)):
        rates = solve_velocity(geom, s, solve_position(geom, s.pose))
        out.append((np.array([r.v10 for r in rates]), np.array([r.v32 for r in rates])))
    (p10, p32), (m10, m32) = out
    return (p10 - m10) / (2 * h), (p32 - m32) / (2 * h)


def rel_err(got, ref):
    return float(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))
