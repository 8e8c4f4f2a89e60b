from dataclasses import dataclass

import numpy as np

from mcloop.diffusion.channel import BoundaryKind, ComplexFreq
from mcloop.exceptions import DimensionError, SingularResolvent

RESOLVENT_FLOOR = 1e-300
DEFAULT_LABELS = (("z", "c"), ("v", "y"))


def _as_matrix(value, shape: tuple, name: str) -> np.ndarray:
    # flat vectors of the right size are accepted, e.g. B = [b1, b2] for n = 1
    array = np.array(value, dtype=float)
    if array.shape != shape and array.size == shape[0] * shape[1]:
        array = array.reshape(shape)
    if array.shape != shape:
        raise DimensionError(f"{name} must be {shape[0]} x {shape[1]}, got shape {array.shape}")
    return array


@dataclass(frozen=True, eq=False)
class StateSpaceLTI:
    """
    Boundary system realization

        dx/dt = A x + B [z, c]^T
        [v, y]^T = C x + D [z, c]^T

    Inputs are the channel output z at the boundary and the robot concentration c;
    outputs are the boundary condition v fed back to the channel and the signal y
    handed to the robot.

    Args:
        A (array): n x n state matrix (1/s).
        B (array): n x 2 input matrix.
        C (array): 2 x n output matrix.
        D (array): 2 x 2 feedthrough.
        labels (tuple): Names of the (inputs, outputs).
        boundary (BoundaryKind, optional): Boundary kind the realization imposes on the channel.
    """
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    labels: tuple = DEFAULT_LABELS
    boundary: BoundaryKind | None = None

    def __post_init__(self):
        A = np.array(self.A, dtype=float, ndmin=2)
        n = A.shape[0]
        if A.ndim != 2 or A.shape[1] != n:
            raise DimensionError(f"State matrix A must be square, got shape {A.shape}")
        B = _as_matrix(self.B, (n, 2), "Input matrix B")
        C = _as_matrix(self.C, (2, n), "Output matrix C")
        D = _as_matrix(self.D, (2, 2), "Feedthrough D")

        for name, value in (("A", A), ("B", B), ("C", C), ("D", D)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        if self.boundary is not None:
            object.__setattr__(self, "boundary", BoundaryKind.parse(self.boundary))

    @classmethod
    def static(cls, D, boundary: BoundaryKind | None = None, labels: tuple = DEFAULT_LABELS) -> "StateSpaceLTI":
        """Memoryless system H(s) = D."""
        return cls(A=np.zeros((0, 0)), B=np.zeros((0, 2)), C=np.zeros((2, 0)), D=D,
                   labels=labels, boundary=boundary)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def poles(self) -> np.ndarray:
        return np.linalg.eigvals(self.A)

    def is_hurwitz(self) -> bool:
        return bool(np.all(self.poles().real < 0))


def eval_H(ss: StateSpaceLTI, s: ComplexFreq, floor: float = RESOLVENT_FLOOR) -> np.ndarray:
    """
    Evaluate H(s) = C (sI - A)^-1 B + D.

    The resolvent is applied through a linear solve. A vector of frequencies
    returns an array of shape (m, 2, 2).
    """
    value = np.asarray(s.value, dtype=complex)
    if ss.n == 0:
        return np.broadcast_to(ss.D.astype(complex), value.shape + (2, 2)).copy()

    resolvent = value[..., None, None] * np.eye(ss.n) - ss.A
    det = np.linalg.det(resolvent)
    singular = np.abs(det) < floor
    if np.any(singular):
        omega = np.asarray(s.omega)[singular].flat[0] if value.ndim else s.omega
        raise SingularResolvent("sI - A is singular at a boundary-system pole", omega=float(omega))

    B = np.broadcast_to(ss.B, value.shape + ss.B.shape)
    return ss.C @ np.linalg.solve(resolvent, B) + ss.D
