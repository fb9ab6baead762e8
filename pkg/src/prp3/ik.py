"""Closed-form inverse kinematics of the 3-PRP platform.

Per leg, the loop closure reads

    (l0/sqrt3 + lambda10) * e_alpha + lambda32 * e_psi = G - A0 - d(phi)

with ``e_alpha = (cos a, sin a)`` the rail direction, ``psi = phi - pi/3 + a``
the direction of the passive slide on the platform and ``d(phi)`` the
platform offset from the leg joint to G (see ``geometry.platform_offset``).
Positions, rates and accelerations all solve the same 2x2 matrix
``[[cos a, cos psi], [sin a, sin psi]]``, whose determinant is
``sin(phi - pi/3)`` for every leg.
"""
from dataclasses import dataclass

import numpy as np

from . import mat3
from .errors import SingularPose, SingularSystem
from .geometry import LEGS, LegId, PlatformPose, platform_offset

SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class LegSolution:
    lambda10: float
    lambda32: float


@dataclass(frozen=True)
class IkSolution:
    legs: tuple
    phi21: float

    def __getitem__(self, leg):
        return self.legs[LegId(leg)]

    @property
    def lambda10(self):
        return np.array([s.lambda10 for s in self.legs])

    @property
    def lambda32(self):
        return np.array([s.lambda32 for s in self.legs])


@dataclass(frozen=True)
class PlatformState:
    pose: PlatformPose
    vel: tuple = (0.0, 0.0, 0.0)
    acc: tuple = (0.0, 0.0, 0.0)

    @classmethod
    def from_arrays(cls, pose, vel=(0.0, 0.0, 0.0), acc=(0.0, 0.0, 0.0)):
        return cls(PlatformPose(*map(float, pose)), tuple(map(float, vel)),
                   tuple(map(float, acc)))


@dataclass(frozen=True)
class LegRates:
    v10: float
    omega21: float
    v32: float


@dataclass(frozen=True)
class LegAccels:
    gamma10: float
    epsilon21: float
    gamma32: float


@dataclass(frozen=True)
class JacobianPair:
    j1: np.ndarray
    j2: np.ndarray


def check_pose(pose, tol=SINGULAR_TOL):
    s = np.sin(pose.phi - np.pi / 3)
    if not abs(s) > tol:
        raise SingularPose(
            f"type-1 singularity: |sin(phi - pi/3)| = {abs(s):.3e} at phi = {pose.phi!r}",
            phi=pose.phi)


def _leg_system(geom, leg, phi):
    a = geom.alpha[leg]
    psi = phi - np.pi / 3 + a
    return np.cos(a), np.sin(a), np.cos(psi), np.sin(psi)


def _solve(ca, sa, cp, sp, b1, b2, phi):
    try:
        x1, x2 = mat3.solve2(ca, cp, sa, sp, b1, b2, tol=0.0)
    except SingularSystem as exc:
        raise SingularPose(str(exc), phi=phi) from exc
    return float(x1), float(x2)


def solve_position(geom, pose, tol=SINGULAR_TOL):
    """Joint displacements ``(lambda10, lambda32)`` of every leg for ``pose``.

    Raises:
        SingularPose: when ``|sin(phi - pi/3)| <= tol``.
    """
    check_pose(pose, tol)
    legs = []
    for leg in LEGS:
        ca, sa, cp, sp = _leg_system(geom, leg, pose.phi)
        dx, dy = platform_offset(geom, leg, pose.phi)
        x00, y00 = geom.base_anchors[leg, :2]
        L, l32 = _solve(ca, sa, cp, sp, pose.x - x00 - dx, pose.y - y00 - dy, pose.phi)
        legs.append(LegSolution(L - geom.rail_offset, l32))
    return IkSolution(tuple(legs), float(pose.phi))


def position_residual(geom, pose, sol):
    """Six loop-closure residuals (x, y per leg), LHS minus RHS."""
    out = np.empty(6)
    for leg in LEGS:
        ca, sa, cp, sp = _leg_system(geom, leg, pose.phi)
        dx, dy = platform_offset(geom, leg, pose.phi)
        x00, y00 = geom.base_anchors[leg, :2]
        L = geom.rail_offset + sol[leg].lambda10
        l32 = sol[leg].lambda32
        out[2 * leg] = L * ca + l32 * cp - (pose.x - x00 - dx)
        out[2 * leg + 1] = L * sa + l32 * sp - (pose.y - y00 - dy)
    return out


def jacobians(geom, pose, sol):
    """Inverse (diagonal) and forward Jacobians with ``J1 dlam = J2 dX``."""
    delta = np.sin(pose.phi - np.pi / 3)
    j1 = np.diag([delta, delta, delta])
    j2 = np.empty((3, 3))
    for leg in LEGS:
        psi = pose.phi - np.pi / 3 + geom.alpha[leg]
        cp, sp = np.cos(psi), np.sin(psi)
        x00, y00 = geom.base_anchors[leg, :2]
        L = geom.rail_offset + sol[leg].lambda10
        j2[leg] = (sp, -cp,
                   (pose.x - x00) * cp + (pose.y - y00) * sp
                   - L * np.cos(pose.phi - np.pi / 3))
    return JacobianPair(j1, j2)


def solve_velocity(geom, state, sol, tol=SINGULAR_TOL):
    """Actuator and passive joint rates from the platform twist.

    Time derivative of the loop closure: the platform offset rotates with
    the platform (``d' = w x d``) and the slide direction turns at ``w``.
    """
    pose = state.pose
    check_pose(pose, tol)
    xd, yd, w = state.vel
    rates = []
    for leg in LEGS:
        ca, sa, cp, sp = _leg_system(geom, leg, pose.phi)
        dx, dy = platform_offset(geom, leg, pose.phi)
        l32 = sol[leg].lambda32
        b1 = xd + w * dy + w * l32 * sp
        b2 = yd - w * dx - w * l32 * cp
        v10, v32 = _solve(ca, sa, cp, sp, b1, b2, pose.phi)
        rates.append(LegRates(v10, w, v32))
    return tuple(rates)


def solve_acceleration(geom, state, sol, rates, tol=SINGULAR_TOL):
    """Actuator and passive joint accelerations.

    Second derivative of the loop closure: offset term
    ``eps x d - w^2 d``, slide terms ``2 w v32 e_psi_perp`` (Coriolis),
    ``lambda32 eps e_psi_perp`` and ``-lambda32 w^2 e_psi``.
    """
    pose = state.pose
    check_pose(pose, tol)
    _, _, w = state.vel
    xdd, ydd, e = state.acc
    accels = []
    for leg in LEGS:
        ca, sa, cp, sp = _leg_system(geom, leg, pose.phi)
        dx, dy = platform_offset(geom, leg, pose.phi)
        l32 = sol[leg].lambda32
        v32 = rates[leg].v32
        w2 = w * w
        b1 = xdd + e * dy + w2 * dx + (2.0 * w * v32 + e * l32) * sp + w2 * l32 * cp
        b2 = ydd - e * dx + w2 * dy - (2.0 * w * v32 + e * l32) * cp + w2 * l32 * sp
        g10, g32 = _solve(ca, sa, cp, sp, b1, b2, pose.phi)
        accels.append(LegAccels(g10, e, g32))
    return tuple(accels)


def singularity_metrics(geom, pose, sol):
    jac = jacobians(geom, pose, sol)
    return float(mat3.det3(jac.j1)), float(mat3.det3(jac.j2))


@dataclass(frozen=True)
class ScanResult:
    samples: list
    j1_roots: list
    j2_roots: list


def _det_j1(phi):
    return np.sin(phi - np.pi / 3) ** 3


def _det_j2(geom, x, y, phi):
    pose = PlatformPose(x, y, phi)
    try:
        sol = solve_position(geom, pose)
    except SingularPose:
        return float("nan")
    return mat3.det3(jacobians(geom, pose, sol).j2)


def _bisect(f, a, b, fa, xtol):
    while b - a > xtol:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m
        if np.isnan(fm):
            break
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _roots(f, phis, vals, xtol):
    roots = []
    for k in range(len(phis) - 1):
        fa, fb = vals[k], vals[k + 1]
        if np.isnan(fa) or np.isnan(fb):
            continue
        if fa == 0.0:
            if not roots or roots[-1] != phis[k]:
                roots.append(float(phis[k]))
        elif fb != 0.0 and np.sign(fa) != np.sign(fb):
            roots.append(float(_bisect(f, phis[k], phis[k + 1], fa, xtol)))
    if len(vals) and vals[-1] == 0.0:
        roots.append(float(phis[-1]))
    return roots


def singularity_scan(geom, x, y, phi_min, phi_max, steps, xtol=1e-12):
    """Tabulate ``det J1`` and ``det J2`` over a uniform phi grid at fixed
    ``(x, y)`` and refine every sign change by bisection.

    ``det J2`` is NaN at samples where the position solve is singular.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    phis = np.linspace(phi_min, phi_max, steps)
    d1 = np.array([_det_j1(p) for p in phis])
    d2 = np.array([_det_j2(geom, x, y, p) for p in phis])
    samples = [(float(p), float(a), float(b)) for p, a, b in zip(phis, d1, d2)]
    j1_roots = _roots(_det_j1, phis, d1, xtol)
    j2_roots = _roots(lambda p: _det_j2(geom, x, y, p), phis, d2, xtol)
    return ScanResult(samples, j1_roots, j2_roots)
