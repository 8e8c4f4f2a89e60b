import logging
from dataclasses import dataclass, field

import numpy as np

from mcloop.boundary.statespace import StateSpaceLTI, eval_H
from mcloop.diffusion.channel import ComplexFreq, DiffusionChannel
from mcloop.diffusion.transfer import eval_G_matrix
from mcloop.exceptions import FeedbackSingular, InterconnectionError, InvalidParam
from mcloop.feedback.robots import RobotDynamics, identity_robot

logger = logging.getLogger(__name__)

FEEDBACK_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Interconnection:
    """
    Feedback interconnection of the diffusion system with the two boundary systems.

    Args:
        channel (DiffusionChannel): Diffusion medium between the robots.
        h0 (StateSpaceLTI): Boundary system at r = 0 (transmitter side).
        hL (StateSpaceLTI): Boundary system at r = L (receiver side).
        f0 (callable): Robot dynamics at r = 0, c0 = f0(s) u0.
        fL (callable): Robot dynamics at r = L, cL = fL(s) uL.
    """
    channel: DiffusionChannel
    h0: StateSpaceLTI
    hL: StateSpaceLTI
    f0: RobotDynamics = field(default=identity_robot)
    fL: RobotDynamics = field(default=identity_robot)

    def __post_init__(self):
        for name, system, kind in (("h0", self.h0, self.channel.b0), ("hL", self.hL, self.channel.bL)):
            if system.boundary is not None and system.boundary is not kind:
                raise InterconnectionError(
                    f"{name} imposes a {system.boundary.value} condition but the channel boundary is {kind.value}"
                )

    def G(self, s: ComplexFreq) -> np.ndarray:
        return eval_G_matrix(self.channel, s)

    def H0(self, s: ComplexFreq) -> np.ndarray:
        return eval_H(self.h0, s)

    def HL(self, s: ComplexFreq) -> np.ndarray:
        return eval_H(self.hL, s)

    def with_channel(self, channel: DiffusionChannel) -> "Interconnection":
        return Interconnection(channel=channel, h0=self.h0, hL=self.hL, f0=self.f0, fL=self.fL)


@dataclass(frozen=True)
class ClosedLoopSolution:
    v0: complex
    vL: complex
    z0: complex
    zL: complex
    y0: complex
    yL: complex


@dataclass(frozen=True)
class ChannelResponse:
    omega: float
    S0: complex
    SL: complex
    Gamma0L: complex
    GammaL0: complex
    M0L_exact: complex
    MLL_exact: complex
    M0L_approx: complex
    L0: complex
    LL: complex

    def to_dict(self):
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


@dataclass(frozen=True)
class ApproximationError:
    omegas: np.ndarray
    relative: np.ndarray
    peak_normalized: float

    @property
    def max_relative(self) -> float:
        return float(np.max(self.relative))


def _side(ic: Interconnection, side) -> str:
    if side in (0, "0"):
        return "0"
    if side in ("L", "l") or side == ic.channel.L:
        return "L"
    raise InvalidParam(f"Side must be 0 or L, got {side!r}")


def _check_loop(den, s: ComplexFreq, what: str):
    singular = np.abs(den) < FEEDBACK_FLOOR
    if np.any(singular):
        omega = np.asarray(s.omega)[singular].flat[0] if np.ndim(s.omega) else s.omega
        raise FeedbackSingular(f"{what} is singular", omega=float(omega))


def self_interference(ic: Interconnection, s: ComplexFreq, side) -> complex:
    """S0 = 1 / (1 - H0_11 G_11) for side 0, SL = 1 / (1 - HL_11 G_22) for side L."""
    G = ic.G(s)
    if _side(ic, side) == "0":
        loop = ic.H0(s)[..., 0, 0] * G[..., 0, 0]
    else:
        loop = ic.HL(s)[..., 0, 0] * G[..., 1, 1]
    den = 1 - loop
    _check_loop(den, s, f"Self-interference loop at side {side}")
    return 1 / den


def channel_gamma(ic: Interconnection, s: ComplexFreq) -> tuple:
    """MC-channel transfer functions (Gamma0L, GammaL0) from c0 to zL and from cL to z0."""
    G = ic.G(s)
    H0 = ic.H0(s)
    HL = ic.HL(s)
    S0 = self_interference(ic, s, "0")
    SL = self_interference(ic, s, "L")
    return G[..., 1, 0] * S0 * H0[..., 0, 1], G[..., 0, 1] * SL * HL[..., 0, 1]


def closed_loop_solve(ic: Interconnection, s: ComplexFreq, inputs=(1.0, 0.0)) -> ClosedLoopSolution:
    """
    Solve the full interconnection exactly at s.

    The robot commands (u0, uL) become concentrations c* = F*(s) u*. The channel
    outputs solve z = G (diag(H0_11, HL_11) z + diag(H0_12, HL_12) c), after which
    v = H_11 z + H_12 c and y = H_21 z + H_22 c on each side.
    """
    G = ic.G(s)
    H0 = ic.H0(s)
    HL = ic.HL(s)
    c0 = ic.f0(s) * inputs[0]
    cL = ic.fL(s) * inputs[1]

    loop = np.zeros(G.shape, dtype=complex)
    loop[..., 0, 0] = H0[..., 0, 0]
    loop[..., 1, 1] = HL[..., 0, 0]
    system = np.eye(2) - G @ loop
    _check_loop(np.linalg.det(system), s, "Closed-loop system")

    drive = np.stack([H0[..., 0, 1] * c0, HL[..., 0, 1] * cL], axis=-1)
    rhs = (G @ drive[..., None])[..., 0]
    z = np.linalg.solve(system, rhs[..., None])[..., 0]
    z0, zL = z[..., 0], z[..., 1]

    return ClosedLoopSolution(
        v0=H0[..., 0, 0] * z0 + H0[..., 0, 1] * c0,
        vL=HL[..., 0, 0] * zL + HL[..., 0, 1] * cL,
        z0=z0,
        zL=zL,
        y0=H0[..., 1, 0] * z0 + H0[..., 1, 1] * c0,
        yL=HL[..., 1, 0] * zL + HL[..., 1, 1] * cL,
    )


def entire_channel_M0L_approx(ic: Interconnection, s: ComplexFreq) -> complex:
    """yL / c0 neglecting the receiver's feedback onto the channel: HL_21 Gamma0L."""
    gamma_0L, _ = channel_gamma(ic, s)
    return ic.HL(s)[..., 1, 0] * gamma_0L


def channel_response(ic: Interconnection, s: ComplexFreq) -> ChannelResponse:
    G = ic.G(s)
    H0 = ic.H0(s)
    HL = ic.HL(s)
    gamma_0L, gamma_L0 = channel_gamma(ic, s)
    forward = closed_loop_solve(ic, s, (1.0, 0.0))
    backward = closed_loop_solve(ic, s, (0.0, 1.0))
    return ChannelResponse(
        omega=s.omega,
        S0=self_interference(ic, s, "0"),
        SL=self_interference(ic, s, "L"),
        Gamma0L=gamma_0L,
        GammaL0=gamma_L0,
        M0L_exact=forward.yL,
        MLL_exact=backward.yL,
        M0L_approx=HL[..., 1, 0] * gamma_0L,
        L0=H0[..., 0, 0] * G[..., 0, 0],
        LL=HL[..., 0, 0] * G[..., 1, 1],
    )


def approximation_error(ic: Interconnection, omegas) -> ApproximationError:
    """
    Deviation of M0L_approx from M0L_exact over a frequency grid.

    ``relative`` is |exact - approx| / |exact| per frequency; ``peak_normalized``
    divides the largest absolute deviation by the peak of |exact|.
    """
    omegas = np.asarray(omegas, dtype=float)
    s = ComplexFreq(omegas)
    exact = closed_loop_solve(ic, s, (1.0, 0.0)).yL
    approx = entire_channel_M0L_approx(ic, s)
    deviation = np.abs(exact - approx)
    relative = deviation / np.abs(exact)
    peak = float(np.max(deviation) / np.max(np.abs(exact)))
    logger.debug(f"M0L approximation: max relative {np.max(relative):.3g}, peak normalized {peak:.3g}")
    return ApproximationError(omegas=omegas, relative=relative, peak_normalized=peak)
