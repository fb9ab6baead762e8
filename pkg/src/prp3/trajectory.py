"""Cosine motion law, the demonstration scenarios and trajectory sampling."""
import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import OutOfRange, SingularPose
from .fk import forward_kinematics
from .geometry import LEGS, PlatformPose
from .ik import SINGULAR_TOL, LegAccels, LegRates, LegSolution, PlatformState


@dataclass(frozen=True)
class MotionSpec:
    x_star: float
    y_star: float
    phi_star: float
    duration: float
    samples: int = 301

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if self.samples < 2:
            raise ValueError("samples must be >= 2")


class Scenario(enum.Enum):
    ROTATION = "rotation"
    TRANSLATION_X = "trans-x"
    TRANSLATION_Y = "trans-y"
    COMBINED = "combined"

    def apply(self, spec):
        """Zero the amplitudes this scenario does not move."""
        if self is Scenario.ROTATION:
            return replace(spec, x_star=0.0, y_star=0.0)
        if self is Scenario.TRANSLATION_X:
            return replace(spec, y_star=0.0, phi_star=0.0)
        if self is Scenario.TRANSLATION_Y:
            return replace(spec, x_star=0.0, phi_star=0.0)
        return spec


def paper_spec(samples=301):
    """Amplitudes 0.025 m, 0.025 m, pi/12 over 3 s."""
    return MotionSpec(x_star=0.025, y_star=0.025, phi_star=np.pi / 12, duration=3.0,
                      samples=samples)


def _profile(spec, t):
    """``(1 - cos(k t), k sin(k t), k^2 cos(k t))`` with ``k = pi / duration``."""
    k = np.pi / spec.duration
    arg = np.pi * (np.asarray(t, dtype=float) / spec.duration)
    return 1.0 - np.cos(arg), k * np.sin(arg), k * k * np.cos(arg)


def _amplitudes(spec):
    return np.array([spec.x_star, spec.y_star, spec.phi_star])


def motion_law(spec, t):
    """Platform state at time ``t``; each coordinate is ``q* (1 - cos(pi t / T))``."""
    if not 0.0 <= t <= spec.duration:
        raise OutOfRange(f"t = {t} outside [0, {spec.duration}]")
    s, sd, sdd = _profile(spec, t)
    amp = _amplitudes(spec)
    return PlatformState.from_arrays(amp * s, amp * sd, amp * sdd)


def time_grid(spec):
    return np.linspace(0.0, spec.duration, spec.samples)


def motion_arrays(spec):
    """Time grid and ``(N, 3)`` pose, velocity and acceleration arrays."""
    t = time_grid(spec)
    s, sd, sdd = _profile(spec, t)
    amp = _amplitudes(spec)
    return t, s[:, None] * amp, sd[:, None] * amp, sdd[:, None] * amp


@dataclass(frozen=True)
class SimulationRecord:
    t: float
    state: PlatformState
    legs: tuple
    rates: tuple
    accels: tuple
    fk_error: float = None

    @property
    def lambda10(self):
        return np.array([s.lambda10 for s in self.legs])

    @property
    def v10(self):
        return np.array([r.v10 for r in self.rates])

    @property
    def gamma10(self):
        return np.array([a.gamma10 for a in self.accels])


@dataclass(frozen=True)
class SimulationTable:
    """Column arrays of a simulated trajectory; ``joints`` is ``(N, 3, 6)``
    with columns lambda10, lambda32, v10, v32, gamma10, gamma32."""
    t: np.ndarray
    pose: np.ndarray
    vel: np.ndarray
    acc: np.ndarray
    joints: np.ndarray

    def column(self, name, leg):
        idx = ("lambda10", "lambda32", "v10", "v32", "gamma10", "gamma32").index(name)
        return self.joints[:, leg, idx]


def simulate_table(geom, scenario, spec, tol=SINGULAR_TOL, backend=None):
    """Sample the scenario on an inclusive uniform grid with the batched kernel.

    Raises:
        SingularPose: with ``t`` set to the first offending sample time.
    """
    spec = Scenario(scenario).apply(spec)
    t, pose, vel, acc = motion_arrays(spec)
    from . import _kernels  # deferred: importing numba costs ~0.2 s
    joints, bad = _kernels.ik_batch(geom, pose, vel, acc, tol, backend=backend)
    if bad >= 0:
        raise SingularPose(f"singular pose at t = {t[bad]:.6g} s (phi = {pose[bad, 2]:.6g})",
                           phi=float(pose[bad, 2]), t=float(t[bad]))
    return SimulationTable(t, pose, vel, acc, joints)


def simulate(geom, scenario, spec, warm_start=False, tol=SINGULAR_TOL, backend=None):
    """Simulate and return one ``SimulationRecord`` per sample.

    With ``warm_start`` each sample's actuator displacements are also fed
    to the forward-kinematics oracle, seeded with the previous sample's
    pose; the recovered-pose error lands in ``fk_error``.
    """
    table = simulate_table(geom, scenario, spec, tol=tol, backend=backend)
    records = []
    guess = PlatformPose()
    for i, t in enumerate(table.t):
        state = PlatformState.from_arrays(table.pose[i], table.vel[i], table.acc[i])
        j = table.joints[i]
        fk_error = None
        if warm_start:
            res = forward_kinematics(geom, j[:, 0], guess)
            fk_error = float(np.max(np.abs(res.pose.as_array() - table.pose[i])))
            guess = res.pose
        records.append(SimulationRecord(
            float(t), state,
            tuple(LegSolution(float(j[k, 0]), float(j[k, 1])) for k in LEGS),
            tuple(LegRates(float(j[k, 2]), state.vel[2], float(j[k, 3])) for k in LEGS),
            tuple(LegAccels(float(j[k, 4]), state.acc[2], float(j[k, 5])) for k in LEGS),
            fk_error))
    return records
