"""Robot geometry, per-leg transformation chains and the orientation check."""
import configparser
import enum
from dataclasses import dataclass, field

import numpy as np

from .mat3 import SQRT3, U3, rot_z, theta1, theta2

TWO_PI_3 = 2.0 * np.pi / 3.0


class LegId(enum.IntEnum):
    A = 0
    B = 1
    C = 2


LEGS = (LegId.A, LegId.B, LegId.C)


@dataclass(frozen=True)
class PlatformPose:
    x: float = 0.0
    y: float = 0.0
    phi: float = 0.0

    def as_array(self):
        return np.array([self.x, self.y, self.phi])


@dataclass(frozen=True)
class RobotGeometry:
    """Planar 3-PRP geometry.

    Attributes:
        l0: base circumradius OA0 = OB0 = OC0 (m).
        alpha: rail angles of legs A, B, C (rad); rail direction in the
            base frame is ``(cos alpha, sin alpha, 0)``.
        base_anchors: (3, 3) array, base vertices A0, B0, C0 (m).
        platform_anchor: vector from the leg's platform joint to the
            platform centre G, in the leg-3 frame (m).
    """
    l0: float
    alpha: tuple
    base_anchors: np.ndarray = field(repr=False)
    platform_anchor: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.l0 > 0:
            raise ValueError(f"l0 must be positive, got {self.l0}")
        anchors = np.array(self.base_anchors, dtype=float).reshape(3, 3)
        panchor = np.array(self.platform_anchor, dtype=float).reshape(3)
        anchors.flags.writeable = False
        panchor.flags.writeable = False
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "base_anchors", anchors)
        object.__setattr__(self, "platform_anchor", panchor)
        if len(self.alpha) != 3:
            raise ValueError("alpha needs one angle per leg")
        if not (np.all(np.isfinite(anchors)) and np.all(np.isfinite(panchor))
                and np.all(np.isfinite(self.alpha))):
            raise ValueError("geometry entries must be finite")

    @property
    def rail_offset(self):
        """Distance from the base vertex to the rail origin (l0 / sqrt 3)."""
        return self.l0 / SQRT3

    @property
    def edge(self):
        return self.l0 * SQRT3


def symmetric_alpha(alpha_a):
    return (alpha_a, alpha_a + TWO_PI_3, alpha_a - TWO_PI_3)


def default_base_anchors(l0):
    return np.array([[0.0, -l0, 0.0],
                     [0.5 * l0 * SQRT3, 0.5 * l0, 0.0],
                     [-0.5 * l0 * SQRT3, 0.5 * l0, 0.0]])


def default_platform_anchor(l0):
    return 0.5 * l0 * np.array([0.0, 1.0, -SQRT3 / 3.0])


def default_geometry(l0=0.3, alpha_a=np.pi / 3):
    """Symmetric geometry; rails run along the base edges A0B0, B0C0, C0A0.

    With ``alpha_a = pi/3`` every joint variable is zero at the central
    configuration.
    """
    return RobotGeometry(l0=l0, alpha=symmetric_alpha(alpha_a),
                         base_anchors=default_base_anchors(l0),
                         platform_anchor=default_platform_anchor(l0))


def _floats(text, n):
    vals = [float(v) for v in text.replace(",", " ").split()]
    if len(vals) != n:
        raise ValueError(f"expected {n} numbers, got {text!r}")
    return vals


def parse_geometry(text):
    """Build a geometry from ``key = value`` text.

    Recognised keys (all optional): ``l0``, ``alpha_a``, ``alpha_b``,
    ``alpha_c``, ``anchor_a`` / ``anchor_b`` / ``anchor_c`` (``x, y``) and
    ``platform_anchor`` (three numbers). Missing angles follow the
    symmetric pattern from ``alpha_a``; missing anchors follow the default
    layout scaled by ``l0``. ``#`` and ``;`` start comments.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string("[geometry]\n" + text)
    sec = cp["geometry"]
    known = {"l0", "alpha_a", "alpha_b", "alpha_c", "anchor_a", "anchor_b",
             "anchor_c", "platform_anchor"}
    unknown = set(sec) - known
    if unknown:
        raise ValueError(f"unknown geometry keys: {sorted(unknown)}")
    l0 = float(sec.get("l0", 0.3))
    alpha = list(symmetric_alpha(float(sec.get("alpha_a", np.pi / 3))))
    for i, key in enumerate(("alpha_a", "alpha_b", "alpha_c")):
        if key in sec:
            alpha[i] = float(sec[key])
    anchors = default_base_anchors(l0)
    for i, key in enumerate(("anchor_a", "anchor_b", "anchor_c")):
        if key in sec:
            anchors[i, :2] = _floats(sec[key], 2)
    panchor = default_platform_anchor(l0)
    if "platform_anchor" in sec:
        panchor = np.array(_floats(sec["platform_anchor"], 3))
    return RobotGeometry(l0=l0, alpha=tuple(alpha), base_anchors=anchors,
                         platform_anchor=panchor)


def load_geometry(path):
    with open(path, encoding="utf-8") as fh:
        return parse_geometry(fh.read())


@dataclass(frozen=True)
class LegChain:
    """Transformation chain of one leg.

    ``q10``, ``q21``, ``q32`` are the relative transforms (frame k-1 to
    frame k); ``q20`` and ``q30`` the cumulative ones from the base.
    """
    leg: LegId
    q10: np.ndarray
    q21: np.ndarray
    q32: np.ndarray
    q20: np.ndarray
    q30: np.ndarray
    lambda10: float
    lambda32: float
    phi21: float


def theta_alpha(geom, leg):
    return rot_z(geom.alpha[leg])


def leg_chain(geom, leg, phi, lambda10=0.0, lambda32=0.0, phi21=None):
    """Assemble the transforms of one leg.

    ``phi21`` defaults to the platform angle; passing another value builds
    a deliberately inconsistent chain (used to exercise the orientation
    check).
    """
    leg = LegId(leg)
    if phi21 is None:
        phi21 = phi
    q10 = theta1() @ theta_alpha(geom, leg)
    q21 = rot_z(phi21) @ theta1().T
    q32 = theta1() @ theta2()
    q20 = q21 @ q10
    q30 = q32 @ q20
    return LegChain(leg, q10, q21, q32, q20, q30, float(lambda10), float(lambda32),
                    float(phi21))


def orientation_residual(chain, phi, geom=None):
    """Max-abs entry of ``q30(0).T @ q30 - R(phi)``.

    ``q30(0) = theta1 theta2 theta_alpha`` is the chain at rest; it only
    depends on the rail angle, which the chain itself encodes through
    ``q10``.
    """
    # theta1 @ theta_alpha == q10, so q30(0) == theta1 @ theta2 @ theta1.T @ q10
    q30_rest = theta1() @ theta2() @ theta1().T @ chain.q10
    return float(np.max(np.abs(q30_rest.T @ chain.q30 - rot_z(phi))))


def rail_direction(chain):
    return chain.q10.T @ U3


def platform_offset(geom, leg, phi):
    """``q30.T @ platform_anchor`` in closed form: base-frame vector from the
    leg's platform joint to G (z component dropped)."""
    _, b, c = geom.platform_anchor
    psi = phi - np.pi / 3 + geom.alpha[leg]
    cp, sp = np.cos(psi), np.sin(psi)
    return c * cp - b * sp, c * sp + b * cp
