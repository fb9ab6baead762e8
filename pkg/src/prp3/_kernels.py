"""Batched inverse-kinematics kernels for trajectory evaluation.

Two interchangeable paths compute positions, rates and accelerations of
all legs for N platform states:

* ``ik_batch_loops`` - explicit scalar loops, compiled with ``numba.njit``
  when numba is importable;
* ``ik_batch_numpy`` - broadcast numpy expressions.

Set ``PRP3_DISABLE_NUMBA=1`` to force the numpy path. Both return an
``(N, 3, 6)`` array with columns ``lambda10, lambda32, v10, v32, gamma10,
gamma32`` and the index of the first singular sample (``-1`` if none).
"""
import os

import numpy as np

_DISABLE = os.environ.get("PRP3_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLE:
        raise ImportError("disabled by PRP3_DISABLE_NUMBA")
    from numba import njit
except ImportError:
    njit = None

PI_3 = np.pi / 3.0


def _ik_loops(rail_offset, alpha, anchors, pb, pc, poses, vels, accs, tol):
    n = poses.shape[0]
    out = np.empty((n, 3, 6))
    for i in range(n):
        x, y, phi = poses[i, 0], poses[i, 1], poses[i, 2]
        xd, yd, w = vels[i, 0], vels[i, 1], vels[i, 2]
        xdd, ydd, e = accs[i, 0], accs[i, 1], accs[i, 2]
        if not abs(np.sin(phi - PI_3)) > tol:
            return out, i
        w2 = w * w
        for leg in range(3):
            a = alpha[leg]
            ca, sa = np.cos(a), np.sin(a)
            psi = phi - PI_3 + a
            cp, sp = np.cos(psi), np.sin(psi)
            det = ca * sp - cp * sa
            dx = pc * cp - pb * sp
            dy = pc * sp + pb * cp
            b1 = x - anchors[leg, 0] - dx
            b2 = y - anchors[leg, 1] - dy
            L = (b1 * sp - cp * b2) / det
            l32 = (ca * b2 - b1 * sa) / det
            b1 = xd + w * dy + w * l32 * sp
            b2 = yd - w * dx - w * l32 * cp
            v10 = (b1 * sp - cp * b2) / det
            v32 = (ca * b2 - b1 * sa) / det
            k = 2.0 * w * v32 + e * l32
            b1 = xdd + e * dy + w2 * dx + k * sp + w2 * l32 * cp
            b2 = ydd - e * dx + w2 * dy - k * cp + w2 * l32 * sp
            out[i, leg, 0] = L - rail_offset
            out[i, leg, 1] = l32
            out[i, leg, 2] = v10
            out[i, leg, 3] = v32
            out[i, leg, 4] = (b1 * sp - cp * b2) / det
            out[i, leg, 5] = (ca * b2 - b1 * sa) / det
    return out, -1


ik_batch_loops = njit(cache=True)(_ik_loops) if njit is not None else _ik_loops
BACKEND = "numba" if njit is not None else "numpy"


def ik_batch_numpy(rail_offset, alpha, anchors, pb, pc, poses, vels, accs, tol):
    n = poses.shape[0]
    out = np.empty((n, 3, 6))
    phi = poses[:, 2]
    bad = np.flatnonzero(~(np.abs(np.sin(phi - PI_3)) > tol))
    if bad.size:
        return out, int(bad[0])
    col = lambda arr, j: arr[:, j, None]  # noqa: E731  (N, 1) for broadcasting over legs
    x, y, phi = col(poses, 0), col(poses, 1), col(poses, 2)
    xd, yd, w = col(vels, 0), col(vels, 1), col(vels, 2)
    xdd, ydd, e = col(accs, 0), col(accs, 1), col(accs, 2)
    a = np.asarray(alpha)[None, :]
    ca, sa = np.cos(a), np.sin(a)
    psi = phi - PI_3 + a
    cp, sp = np.cos(psi), np.sin(psi)
    det = ca * sp - cp * sa
    dx = pc * cp - pb * sp
    dy = pc * sp + pb * cp

    def solve(b1, b2):
        return (b1 * sp - cp * b2) / det, (ca * b2 - b1 * sa) / det

    L, l32 = solve(x - anchors[None, :, 0] - dx, y - anchors[None, :, 1] - dy)
    v10, v32 = solve(xd + w * dy + w * l32 * sp, yd - w * dx - w * l32 * cp)
    w2 = w * w
    k = 2.0 * w * v32 + e * l32
    g10, g32 = solve(xdd + e * dy + w2 * dx + k * sp + w2 * l32 * cp,
                     ydd - e * dx + w2 * dy - k * cp + w2 * l32 * sp)
    for j, arr in enumerate((L - rail_offset, l32, v10, v32, g10, g32)):
        out[:, :, j] = arr
    return out, -1


def ik_batch(geom, poses, vels, accs, tol, backend=None):
    """Evaluate the batched kernel on ``(N, 3)`` pose/velocity/acceleration arrays."""
    backend = backend or BACKEND
    fn = ik_batch_loops if backend == "numba" else ik_batch_numpy
    if backend == "numba" and njit is None:
        raise RuntimeError("numba backend unavailable")
    args = (float(geom.rail_offset), np.asarray(geom.alpha, dtype=float),
            np.ascontiguousarray(geom.base_anchors[:, :2]),
            float(geom.platform_anchor[1]), float(geom.platform_anchor[2]),
            np.ascontiguousarray(poses, dtype=float), np.ascontiguousarray(vels, dtype=float),
            np.ascontiguousarray(accs, dtype=float), float(tol))
    return fn(*args)
