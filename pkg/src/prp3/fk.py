"""Forward kinematics by damped Newton iteration on the loop closures.

Test oracle only: the actuator displacements are inverted back to a pose
and the passive slides. Which assembly mode is found depends on the
initial guess; warm-start from a nearby pose.

Eliminating (x, y) leaves a single equation in phi whose roots are the
true pose and phi = pi/3: at the type-1 singular orientation every rail is
parallel to its platform slide, so that pose closes the loops for *any*
actuator input. Plain Newton started near pi/3 converges to it. By default
the residual is deflated, ``F / |sin(phi - pi/3)| + F * shift``, which
keeps the roots of F off the singular surface and removes that spurious
root; tolerance is still tested on the undeflated residual.

The pole of the deflated residual also walls off a guess lying across the
singular orientation from the solution. When the first start fails, one
retry is made from the guess mirrored about phi = pi/3.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence, SingularJacobian
from .geometry import LEGS, PlatformPose

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FkOptions:
    tol: float = 1e-11
    max_iter: int = 50
    max_halvings: int = 20
    cond_limit: float = 1e12
    deflate: bool = True
    deflation_shift: float = 1.0
    singular_band: float = 1e-6


@dataclass(frozen=True)
class FkResult:
    pose: PlatformPose
    lambda32: tuple
    iterations: int
    final_residual: float
    history: tuple = field(default=(), repr=False)


def residual(geom, pose, lambda10, lambda32):
    """Six residuals (x then y for legs A, B, C), left side minus right side."""
    x, y, phi = pose.x, pose.y, pose.phi
    _, b, c = geom.platform_anchor
    out = np.empty(6)
    for leg in LEGS:
        a = geom.alpha[leg]
        psi = phi - np.pi / 3 + a
        cp, sp = np.cos(psi), np.sin(psi)
        L = geom.rail_offset + lambda10[leg]
        x00, y00 = geom.base_anchors[leg, :2]
        out[2 * leg] = L * np.cos(a) + lambda32[leg] * cp - (x - x00 - (c * cp - b * sp))
        out[2 * leg + 1] = L * np.sin(a) + lambda32[leg] * sp - (y - y00 - (c * sp + b * cp))
    return out


def residual_jacobian(geom, pose, lambda32):
    """Derivative of ``residual`` with respect to ``(x, y, phi, l32_A, l32_B, l32_C)``."""
    _, b, c = geom.platform_anchor
    jac = np.zeros((6, 6))
    for leg in LEGS:
        psi = pose.phi - np.pi / 3 + geom.alpha[leg]
        cp, sp = np.cos(psi), np.sin(psi)
        l32 = lambda32[leg]
        rx, ry = 2 * leg, 2 * leg + 1
        jac[rx, 0] = -1.0
        jac[ry, 1] = -1.0
        jac[rx, 2] = -l32 * sp - c * sp - b * cp
        jac[ry, 2] = l32 * cp + c * cp - b * sp
        jac[rx, 3 + leg] = cp
        jac[ry, 3 + leg] = sp
    return jac


def _unpack(z):
    return PlatformPose(float(z[0]), float(z[1]), float(z[2])), z[3:]


def _passive_guess(geom, pose, lambda10):
    """Least-squares slides for a fixed pose (each leg's pair is linear in l32)."""
    r = residual(geom, pose, lambda10, np.zeros(3))
    out = np.empty(3)
    for leg in LEGS:
        psi = pose.phi - np.pi / 3 + geom.alpha[leg]
        out[leg] = -(r[2 * leg] * np.cos(psi) + r[2 * leg + 1] * np.sin(psi))
    return out


def _deflation(phi, opts):
    """Deflation factor and its derivative with respect to phi."""
    if not opts.deflate:
        return 1.0, 0.0
    s = np.sin(phi - np.pi / 3)
    if s == 0.0:
        raise SingularJacobian("iterate landed on the singular orientation phi = pi/3")
    return 1.0 / abs(s) + opts.deflation_shift, -np.sign(s) * np.cos(phi - np.pi / 3) / (s * s)


def forward_kinematics(geom, lambda10, guess=None, opts=None):
    """Recover the platform pose from the three actuator displacements.

    Raises:
        NoConvergence: iteration budget exhausted or line search failed.
        SingularJacobian: Newton matrix condition number above
            ``opts.cond_limit``.
    """
    opts = opts or FkOptions()
    if opts.max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    lambda10 = np.asarray(lambda10, dtype=float)
    guess = guess or PlatformPose()
    try:
        return _newton(geom, lambda10, guess, opts)
    except (NoConvergence, SingularJacobian) as exc:
        if not opts.deflate:
            raise
        mirrored = PlatformPose(guess.x, guess.y, 2.0 * np.pi / 3 - guess.phi)
        log.debug("fk: %s; retrying from mirrored guess %s", exc, mirrored)
        try:
            return _newton(geom, lambda10, mirrored, opts)
        except (NoConvergence, SingularJacobian):
            raise exc from None


def _newton(geom, lambda10, guess, opts):
    z = np.concatenate([guess.as_array(), _passive_guess(geom, guess, lambda10)])
    pose, l32 = _unpack(z)
    r = residual(geom, pose, lambda10, l32)
    norm = np.max(np.abs(r))
    history = [norm]
    if norm <= opts.tol:
        return FkResult(pose, tuple(float(v) for v in l32), 0, float(norm), (float(norm),))
    for it in range(1, opts.max_iter + 1):
        m, dm = _deflation(pose.phi, opts)
        jac = m * residual_jacobian(geom, pose, l32)
        jac[:, 2] += dm * r
        cond = np.linalg.cond(jac)
        if not cond < opts.cond_limit:
            raise SingularJacobian(f"Newton matrix condition {cond:.3e} at iteration {it}")
        step = np.linalg.solve(jac, -m * r)
        merit = m * norm
        scale = 1.0
        for _ in range(opts.max_halvings + 1):
            z_new = z + scale * step
            pose_new, l32_new = _unpack(z_new)
            r_new = residual(geom, pose_new, lambda10, l32_new)
            norm_new = np.max(np.abs(r_new))
            if norm_new <= opts.tol:
                break
            if np.sin(pose_new.phi - np.pi / 3) != 0.0:
                if _deflation(pose_new.phi, opts)[0] * norm_new < merit:
                    break
            scale *= 0.5
        else:
            raise NoConvergence(f"line search failed at iteration {it} (residual {norm:.3e})")
        z, pose, l32, r, norm = z_new, pose_new, l32_new, r_new, norm_new
        history.append(norm)
        log.debug("fk iteration %d: residual %.3e (step scale %g)", it, norm, scale)
        if norm <= opts.tol:
            if opts.deflate and abs(np.sin(pose.phi - np.pi / 3)) < opts.singular_band:
                raise NoConvergence(f"converged onto the singular orientation phi = {pose.phi!r}")
            return FkResult(pose, tuple(float(v) for v in l32), it, float(norm),
                            tuple(float(h) for h in history))
    raise NoConvergence(f"no convergence in {opts.max_iter} iterations (residual {norm:.3e})")
