"""Exception types raised by the kinematics routines."""


class KinematicsError(Exception):
    """Base class for numerical failures (CLI exit code 2)."""


class SingularSystem(KinematicsError):
    """A 2x2 linear system has a (near) zero determinant."""


class SingularPose(KinematicsError):
    """The platform pose makes the per-leg position solve degenerate.

    ``t`` carries the trajectory time when raised from a simulation.
    """

    def __init__(self, message, phi=None, t=None):
        super().__init__(message)
        self.phi = phi
        self.t = t


class NoConvergence(KinematicsError):
    """Newton iteration exhausted its budget without meeting tolerance."""


class SingularJacobian(KinematicsError):
    """Newton matrix is too ill-conditioned to take a step."""


class OutOfRange(ValueError):
    """Time argument outside the motion interval."""
