"""Recursive propagation of angular velocity, joint-point velocity, angular
acceleration and acceleration along one leg (bodies k = 1, 2, 3).

Every quantity is stored in its own body frame; ``a_k`` is the relative
transform from frame k-1 to frame k, and ``q_k0.T`` maps to the base.

The relative position ``r_{k,k-1}`` of joint k from joint k-1 is expressed
in frame k-1, so in ``v_k = a_k (v_{k-1} + w~_{k-1} r_{k,k-1}) + v_rel u3``
the angular-velocity product is taken before the frame change.  This is
the reading under which the platform-point checks below close to roundoff.
"""
from dataclasses import dataclass, replace

import numpy as np

from . import mat3
from .geometry import LEGS, leg_chain
from .ik import (PlatformState, solve_acceleration, solve_position,
                 solve_velocity)
from .mat3 import U3, skew

U3_SKEW = skew(U3)
_ZERO = np.zeros(3)
_ZERO.flags.writeable = False


@dataclass(frozen=True)
class BodyKinematics:
    omega: np.ndarray
    omega_skew: np.ndarray
    v: np.ndarray
    eps: np.ndarray = _ZERO
    gamma: np.ndarray = _ZERO
    ww_eps: np.ndarray = None  # w~ w~ + e~ from the matrix recursion


@dataclass(frozen=True)
class LegKinematicsChain:
    chain: object
    bodies: tuple

    def q(self, k):
        return (self.chain.q10, self.chain.q20, self.chain.q30)[k - 1]

    def base(self, k, attr):
        """Body-k quantity ``attr`` mapped to the base frame."""
        return self.q(k).T @ getattr(self.bodies[k - 1], attr)


def _relative(chain):
    return (chain.q10, chain.q21, chain.q32)


def joint_offsets(geom, chain):
    """``r_10`` (base frame), ``r_21`` (frame 1) and ``r_32`` (frame 2)."""
    r10 = geom.base_anchors[chain.leg] + (geom.rail_offset + chain.lambda10) * (chain.q10.T @ U3)
    r32 = chain.lambda32 * (chain.q32.T @ U3)
    return (r10, np.zeros(3), r32)


def propagate_velocities(geom, chain, rates):
    """Angular velocities (matrix and vector recursions) and joint velocities."""
    w_rel = (0.0, rates.omega21, 0.0)
    v_rel = (rates.v10, 0.0, rates.v32)
    r = joint_offsets(geom, chain)
    w, w_sk, v = np.zeros(3), np.zeros((3, 3)), np.zeros(3)
    bodies = []
    for a, wr, vr, rk in zip(_relative(chain), w_rel, v_rel, r):
        v = a @ v + a @ (w_sk @ rk) + vr * U3
        w_sk = a @ w_sk @ a.T + wr * U3_SKEW
        w = a @ w + wr * U3
        bodies.append(BodyKinematics(omega=w, omega_skew=w_sk, v=v))
    return LegKinematicsChain(chain, tuple(bodies))


def propagate_accelerations(geom, kin, rates, accels):
    """Fill angular accelerations and joint accelerations into ``kin``."""
    chain = kin.chain
    w_rel = (0.0, rates.omega21, 0.0)
    v_rel = (rates.v10, 0.0, rates.v32)
    e_rel = (0.0, accels.epsilon21, 0.0)
    g_rel = (accels.gamma10, 0.0, accels.gamma32)
    r = joint_offsets(geom, chain)
    w_sk, eps, gamma, ww = np.zeros((3, 3)), np.zeros(3), np.zeros(3), np.zeros((3, 3))
    bodies = []
    for a, body, wr, vr, er, gr, rk in zip(_relative(chain), kin.bodies, w_rel, v_rel,
                                           e_rel, g_rel, r):
        rot_w = a @ w_sk @ a.T
        gamma = a @ gamma + a @ (ww @ rk) + 2.0 * vr * (rot_w @ U3) + gr * U3
        eps = a @ eps + er * U3 + wr * (rot_w @ U3)
        ww = (a @ ww @ a.T + wr * wr * (U3_SKEW @ U3_SKEW) + er * U3_SKEW
              + 2.0 * wr * (rot_w @ U3_SKEW))
        w_sk = body.omega_skew
        bodies.append(replace(body, eps=eps, gamma=gamma, ww_eps=ww))
    return LegKinematicsChain(chain, tuple(bodies))


def platform_point(geom, chain, pose):
    """Leg's platform joint A3 relative to G, in the base frame."""
    return -(chain.q30.T @ geom.platform_anchor)


def rigid_velocity(state, rho):
    xd, yd, w = state.vel
    return np.array([xd, yd, 0.0]) + np.cross(w * U3, rho)


def rigid_acceleration(state, rho):
    _, _, w = state.vel
    xdd, ydd, e = state.acc
    wv = w * U3
    return np.array([xdd, ydd, 0.0]) + np.cross(e * U3, rho) + np.cross(wv, np.cross(wv, rho))


def connectivity_rates(geom, chain, state):
    """Relative rates ``(v10, omega21, v32)`` from the matrix connectivity
    conditions (base x and y rows of the differentiated loop closure).

    Independent of ``ik.solve_velocity``: it works on the transform
    matrices instead of the scalar trigonometric closure.
    """
    xd, yd, w = state.vel
    col10 = chain.q10.T @ U3
    col32 = chain.q30.T @ U3
    arm = chain.q20.T @ U3_SKEW @ (chain.lambda32 * (chain.q32.T @ U3) + chain.q32.T @ geom.platform_anchor)
    rhs = np.array([xd, yd, 0.0]) - w * arm
    v10, v32 = mat3.solve2(col10[0], col32[0], col10[1], col32[1], rhs[0], rhs[1])
    return v10, w, v32


def connectivity_accels(geom, chain, state, v32):
    """Second-order connectivity conditions: ``(gamma10, epsilon21, gamma32)``."""
    _, _, w = state.vel
    xdd, ydd, e = state.acc
    col10 = chain.q10.T @ U3
    col32 = chain.q30.T @ U3
    slide = chain.q32.T @ U3
    lever = chain.lambda32 * slide + chain.q32.T @ geom.platform_anchor
    q20t = chain.q20.T
    rhs = (np.array([xdd, ydd, 0.0])
           - w * w * (q20t @ U3_SKEW @ U3_SKEW @ lever)
           - e * (q20t @ U3_SKEW @ lever)
           - 2.0 * w * v32 * (q20t @ U3_SKEW @ slide))
    g10, g32 = mat3.solve2(col10[0], col32[0], col10[1], col32[1], rhs[0], rhs[1])
    return g10, e, g32


def leg_consistency_report(geom, state):
    """Max deviation per leg between chain-propagated platform-joint
    velocity/acceleration and the platform's rigid-body kinematics.

    Returns a list of ``(velocity_dev, acceleration_dev)`` for legs A, B, C.
    """
    sol = solve_position(geom, state.pose)
    rates = solve_velocity(geom, state, sol)
    accels = solve_acceleration(geom, state, sol, rates)
    report = []
    for leg in LEGS:
        chain = leg_chain(geom, leg, state.pose.phi, sol[leg].lambda10, sol[leg].lambda32)
        kin = propagate_velocities(geom, chain, rates[leg])
        kin = propagate_accelerations(geom, kin, rates[leg], accels[leg])
        rho = platform_point(geom, chain, state.pose)
        dv = np.max(np.abs(kin.base(3, "v") - rigid_velocity(state, rho)))
        da = np.max(np.abs(kin.base(3, "gamma") - rigid_acceleration(state, rho)))
        report.append((float(dv), float(da)))
    return report


__all__ = ["BodyKinematics", "LegKinematicsChain", "PlatformState",
           "propagate_velocities", "propagate_accelerations", "connectivity_rates",
           "connectivity_accels", "leg_consistency_report", "platform_point",
           "rigid_velocity", "rigid_acceleration"]
