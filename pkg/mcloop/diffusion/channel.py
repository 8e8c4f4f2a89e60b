import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from mcloop.exceptions import InvalidParam


class BoundaryKind(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    @property
    def letter(self) -> str:
        return self.value[0]

    @classmethod
    def parse(cls, value) -> "BoundaryKind":
        """Accept an enum member, its value or its one-letter abbreviation (d/n)."""
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        for kind in cls:
            if text in (kind.value, kind.letter):
                return kind
        raise InvalidParam(f"Unknown boundary kind: {value!r}")


class Quantity(str, Enum):
    """Signal carried across a boundary: concentration c or gradient dc/dr."""
    CONCENTRATION = "concentration"
    GRADIENT = "gradient"


class ZMode(str, Enum):
    EVALUATE = "evaluate"
    SPATIAL_DERIVATIVE = "spatial_derivative"
    SPATIAL_INTEGRAL = "spatial_integral"


def input_quantity(kind: BoundaryKind) -> Quantity:
    """Quantity a boundary system imposes on the channel at a boundary of this kind."""
    if BoundaryKind.parse(kind) is BoundaryKind.DIRICHLET:
        return Quantity.CONCENTRATION
    return Quantity.GRADIENT


def output_quantity(kind: BoundaryKind) -> Quantity:
    """Quantity the channel hands back to the boundary system (the complement of the input)."""
    if BoundaryKind.parse(kind) is BoundaryKind.DIRICHLET:
        return Quantity.GRADIENT
    return Quantity.CONCENTRATION


def infer_zmode(source: Quantity, output: Quantity) -> ZMode:
    if source is output:
        return ZMode.EVALUATE
    if source is Quantity.CONCENTRATION:
        return ZMode.SPATIAL_DERIVATIVE
    return ZMode.SPATIAL_INTEGRAL


@dataclass(frozen=True)
class DiffusionChannel:
    """
    One-dimensional diffusion medium on [0, L].

    Args:
        mu (float): Diffusion coefficient (um^2/s).
        L (float): Communication distance (um).
        b0 (BoundaryKind): Boundary kind at r = 0.
        bL (BoundaryKind): Boundary kind at r = L.
    """
    mu: float
    L: float
    b0: BoundaryKind = BoundaryKind.DIRICHLET
    bL: BoundaryKind = BoundaryKind.NEUMANN

    def __post_init__(self):
        object.__setattr__(self, "b0", BoundaryKind.parse(self.b0))
        object.__setattr__(self, "bL", BoundaryKind.parse(self.bL))
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise InvalidParam(f"Diffusion coefficient must be positive and finite, got mu={self.mu}")
        if not (math.isfinite(self.L) and self.L > 0):
            raise InvalidParam(f"Distance must be positive and finite, got L={self.L}")

    @classmethod
    def from_kinds(cls, kinds: str, mu: float, L: float) -> "DiffusionChannel":
        """Build a channel from a two-letter boundary name such as "dn"."""
        if len(kinds) != 2:
            raise InvalidParam(f"Boundary kinds must be two letters (dd, dn, nd, nn), got {kinds!r}")
        return cls(mu=mu, L=L, b0=BoundaryKind.parse(kinds[0]), bL=BoundaryKind.parse(kinds[1]))

    @property
    def kinds(self) -> str:
        return self.b0.letter + self.bL.letter

    @property
    def rate(self) -> float:
        """Diffusive rate mu / L^2 (rad/s) that normalizes frequencies."""
        return self.mu / self.L ** 2

    def normalized(self, omega):
        return omega / self.rate

    def denormalized(self, omega_hat):
        return omega_hat * self.rate

    def boundary_at(self, position: float) -> BoundaryKind:
        if position == 0:
            return self.b0
        if position == self.L:
            return self.bL
        raise InvalidParam(f"Position {position} is not a channel boundary (0 or {self.L})")

    def with_distance(self, L: float) -> "DiffusionChannel":
        return DiffusionChannel(mu=self.mu, L=L, b0=self.b0, bL=self.bL)


@dataclass(frozen=True, eq=False)
class ComplexFreq:
    """
    Point s = j*omega on the imaginary axis.

    ``omega`` may be a float or a numpy array for vectorized evaluation. Negative
    values address the lower half of the axis (used for conjugate-symmetry checks).
    """
    omega: float | np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.omega)):
            raise InvalidParam(f"Frequency must be finite, got omega={self.omega}")

    @property
    def value(self):
        return 1j * np.asarray(self.omega, dtype=float) if np.ndim(self.omega) else 1j * float(self.omega)

    @property
    def sqrt(self):
        """Principal root, sqrt(j*omega) = sqrt(omega) * exp(j*pi/4) for omega >= 0."""
        return np.sqrt(self.value + 0j)

    def mirrored(self) -> "ComplexFreq":
        return ComplexFreq(-np.asarray(self.omega) if np.ndim(self.omega) else -float(self.omega))

    def is_zero(self) -> bool:
        return bool(np.any(np.asarray(self.omega) == 0))
