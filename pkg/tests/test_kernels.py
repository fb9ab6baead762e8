import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_state
from prp3 import _kernels
from prp3 import solve_acceleration, solve_position, solve_velocity
from prp3.geometry import LEGS, parse_geometry

BACKENDS = ["numpy"] + (["numba"] if _kernels.njit is not None else [])


def _arrays(states):
    return (np.array([s.pose.as_array() for s in states]),
            np.array([s.vel for s in states]), np.array([s.acc for s in states]))


def _scalar(geom, s):
    sol = solve_position(geom, s.pose)
    rates = solve_velocity(geom, s, sol)
    acc = solve_acceleration(geom, s, sol, rates)
    return np.array([[sol[k].lambda10, sol[k].lambda32, rates[k].v10, rates[k].v32,
                      acc[k].gamma10, acc[k].gamma32] for k in LEGS])


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("geometry", ["", "alpha_a = 1.2\nanchor_b = 0.3, 0.1\nplatform_anchor = 0, 0.1, -0.05"])
def test_batch_matches_scalar_route(rng, backend, geometry):
    geom = parse_geometry(geometry)
    states = [random_state(rng) for _ in range(100)]
    out, bad = _kernels.ik_batch(geom, *_arrays(states), 1e-9, backend=backend)
    assert bad == -1
    ref = np.stack([_scalar(geom, s) for s in states])
    assert np.max(np.abs(out - ref)) < 1e-13 * max(1.0, np.max(np.abs(ref)))


@pytest.mark.parametrize("backend", BACKENDS)
def test_batch_flags_singular_sample(geom, backend):
    poses = np.array([[0.0, 0.0, 0.1], [0.0, 0.0, 0.2], [0.0, 0.0, np.pi / 3], [0.0, 0.0, 0.3]])
    _, bad = _kernels.ik_batch(geom, poses, np.zeros_like(poses), np.zeros_like(poses), 1e-9,
                               backend=backend)
    assert bad == 2


@pytest.mark.skipif(_kernels.njit is None, reason="numba not available")
def test_backends_agree(geom, rng):
    states = [random_state(rng) for _ in range(500)]
    a, _ = _kernels.ik_batch(geom, *_arrays(states), 1e-9, backend="numba")
    b, _ = _kernels.ik_batch(geom, *_arrays(states), 1e-9, backend="numpy")
    assert np.max(np.abs(a - b)) < 1e-13


def test_env_flag_selects_numpy():
    code = "import prp3._kernels as k; print(k.BACKEND)"
    env = dict(os.environ, PRP3_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
