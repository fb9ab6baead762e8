"""Small fixed-size 3D linear algebra on numpy arrays.

Vectors are ``(3,)`` float arrays, matrices ``(3, 3)``.

Rotation convention: ``rot_z(a)`` has rows ``[cos a, sin a, 0]`` and
``[-sin a, cos a, 0]``. It maps base-frame coordinates into the rotated
frame (a passive rotation), so it is the *transpose* of the usual active
rotation matrix. Every transformation ``q_k0`` in this package follows
that layout; ``q_k0.T`` maps body-frame coordinates back to the base.
"""
import numpy as np

from .errors import SingularSystem

SQRT3 = np.sqrt(3.0)

DET_TOL = 1e-12
ORTHO_TOL = 1e-12

U1 = np.array([1.0, 0.0, 0.0])
U2 = np.array([0.0, 1.0, 0.0])
U3 = np.array([0.0, 0.0, 1.0])
for _u in (U1, U2, U3):
    _u.flags.writeable = False


def vec3(x, y, z=0.0):
    return np.array([x, y, z], dtype=float)


def rot_z(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def theta1():
    """Constant frame swap bringing the z axis into the base plane."""
    return np.array([[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])


def theta2():
    """Constant platform-side offset, numerically ``rot_z(-pi/3)``."""
    return 0.5 * np.array([[1.0, -SQRT3, 0.0], [SQRT3, 1.0, 0.0], [0.0, 0.0, 2.0]])


def skew(v):
    """Matrix S with ``S @ w == cross(v, w)``."""
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def unskew(m):
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def det2(a11, a12, a21, a22):
    return a11 * a22 - a12 * a21


def det3(m):
    """Determinant by cofactor expansion along the first row."""
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def solve2(a11, a12, a21, a22, b1, b2, tol=DET_TOL):
    """Solve a 2x2 system by Cramer's rule.

    Raises:
        SingularSystem: if ``|det| <= tol``.
    """
    d = a11 * a22 - a12 * a21
    if not abs(d) > tol:
        raise SingularSystem(f"2x2 determinant {d:.3e} within tolerance {tol:.1e}")
    return (b1 * a22 - a12 * b2) / d, (a11 * b2 - b1 * a21) / d


def is_rotation(m, tol=ORTHO_TOL):
    return (np.max(np.abs(m.T @ m - np.eye(3))) <= tol
            and abs(det3(m) - 1.0) <= tol)
