"""Inverse kinematics of the 3-PRP planar parallel robot."""
from .errors import (NoConvergence, OutOfRange, SingularJacobian, SingularPose,
                     SingularSystem)
from .fk import FkOptions, FkResult, forward_kinematics
from .geometry import (LEGS, LegChain, LegId, PlatformPose, RobotGeometry,
                       default_geometry, leg_chain, load_geometry,
                       orientation_residual, parse_geometry)
from .ik import (IkSolution, JacobianPair, LegAccels, LegRates, LegSolution,
                 PlatformState, jacobians, singularity_metrics, singularity_scan,
                 solve_acceleration, solve_position, solve_velocity)
from .trajectory import (MotionSpec, Scenario, SimulationRecord, motion_law,
                         paper_spec, simulate, simulate_table)

__version__ = "0.1.0"
