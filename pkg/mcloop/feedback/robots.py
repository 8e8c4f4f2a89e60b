from dataclasses import dataclass
from typing import Callable

import numpy as np

from mcloop.diffusion.channel import ComplexFreq
from mcloop.exceptions import InvalidParam

RobotDynamics = Callable[[ComplexFreq], complex]


def identity_robot(s: ComplexFreq):
    """F(s) = 1: the robot concentration follows its command exactly."""
    return np.ones_like(s.value, dtype=complex) if np.ndim(s.value) else 1.0 + 0j


@dataclass(frozen=True)
class FirstOrderRobot:
    """F(s) = gain / (1 + tau s): internal reactions act as a first-order lag."""
    gain: float = 1.0
    tau: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.gain):
            raise InvalidParam(f"Robot gain must be finite, got {self.gain}")
        if not (np.isfinite(self.tau) and self.tau >= 0):
            raise InvalidParam(f"Robot time constant must be nonnegative, got tau={self.tau}")

    def __call__(self, s: ComplexFreq):
        return self.gain / (1 + self.tau * s.value)
