import math
from dataclasses import dataclass

from mcloop.boundary.statespace import StateSpaceLTI
from mcloop.diffusion.channel import BoundaryKind
from mcloop.exceptions import InvalidParam


@dataclass(frozen=True)
class TransmembraneParams:
    """
    Passive transport across the transmitter membrane at r = 0.

    Args:
        k (float): Membrane transport rate (1/s).
        mu (float): Diffusion coefficient (um^2/s).
        dr (float): Boundary-layer thickness (um); 1 um reproduces the textbook matrices.
    """
    k: float
    mu: float
    dr: float = 1.0

    def check(self, allow_zero: bool = False):
        _check_rates(self, ("k",), allow_zero)
        _check_rates(self, ("mu", "dr"), False)


@dataclass(frozen=True)
class LigandReceptorParams:
    """
    Ligand-receptor binding at the receiver surface r = L.

    Args:
        k_on (float): Adsorption rate (1/(uM s)).
        k_off (float): Desorption rate (1/s).
        k_re (float): Transduction rate (1/s).
        R (float): Receptor count.
        mu (float): Diffusion coefficient (um^2/s).
    """
    k_on: float
    k_off: float
    k_re: float
    R: float
    mu: float

    def check(self, allow_zero: bool = False):
        _check_rates(self, ("k_on", "k_off", "k_re", "R"), allow_zero)
        _check_rates(self, ("mu",), False)


def _check_rates(params, names, allow_zero):
    for name in names:
        value = getattr(params, name)
        valid = math.isfinite(value) and (value >= 0 if allow_zero else value > 0)
        if not valid:
            bound = "nonnegative" if allow_zero else "positive"
            raise InvalidParam(f"{type(params).__name__}.{name} must be {bound} and finite, got {value}")


def make_transmembrane(p: TransmembraneParams, side: str = "0") -> StateSpaceLTI:
    """
    State x = c_out, the concentration just outside the membrane. At r = 0:

        dc_out/dt = k (c0 - c_out) + (mu / dr) dc/dr(0)
        v0 = c_out,   y0 = k (c_out - c0)

    The channel sees a dynamic Dirichlet condition c(0) = v0. A transmembrane
    robot at r = L (``side="L"``) faces the outward normal +r, which flips the
    sign of the flux term.
    """
    p.check()
    if side not in ("0", "L"):
        raise InvalidParam(f"Side must be '0' or 'L', got {side!r}")
    flux = p.mu / p.dr if side == "0" else -p.mu / p.dr
    return StateSpaceLTI(
        A=[[-p.k]],
        B=[[flux, p.k]],
        C=[[1.0], [p.k]],
        D=[[0.0, 0.0], [0.0, -p.k]],
        labels=((f"z{side}", f"c{side}"), (f"v{side}", f"y{side}")),
        boundary=BoundaryKind.DIRICHLET,
    )


def make_ligand_receptor(p: LigandReceptorParams) -> StateSpaceLTI:
    """
    State xL = c_A / R, the complex count per receptor:

        dxL/dt = -k_off xL + k_on c(L)
        vL = (R k_on / mu) c(L) - (R k_off / mu) xL = (1 / mu) dc_A/dt
        yL = k_re xL

    so that HL_11 = (R k_on / mu) s / (s + k_off) and HL_21 = k_re k_on / (s + k_off).
    The channel sees a dynamic Neumann condition dc/dr(L) = vL. With R = 1 the
    matrices are the textbook ones.
    """
    p.check()
    return StateSpaceLTI(
        A=[[-p.k_off]],
        B=[[p.k_on, 0.0]],
        C=[[-p.R * p.k_off / p.mu], [p.k_re]],
        D=[[p.R * p.k_on / p.mu, 0.0], [0.0, 0.0]],
        labels=(("zL", "cL"), ("vL", "yL")),
        boundary=BoundaryKind.NEUMANN,
    )
