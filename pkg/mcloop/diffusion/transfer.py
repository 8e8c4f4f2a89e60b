import logging
from typing import NamedTuple

import numpy as np

from mcloop.diffusion.channel import (
    BoundaryKind, ComplexFreq, DiffusionChannel, Quantity, ZMode,
    infer_zmode, input_quantity, output_quantity
)
from mcloop.exceptions import DenominatorUnderflow, InvalidParam

logger = logging.getLogger(__name__)

STEADY_OMEGA = 1e-12
DENOMINATOR_FLOOR = 1e-300


class Hyperbolics(NamedTuple):
    tanh: complex
    coth: complex
    sech: complex
    csch: complex


def hyperbolics(z) -> Hyperbolics:
    """
    tanh, coth, sech and csch of z with Re z >= 0, written in terms of exp(-z) and
    exp(-2z) so that nothing overflows for large |z|.
    """
    e1 = np.exp(-z)
    one_minus = -np.expm1(-2 * z)
    one_plus = 1 + e1 * e1
    return Hyperbolics(
        tanh=one_minus / one_plus,
        coth=one_plus / one_minus,
        sech=2 * e1 / one_plus,
        csch=2 * e1 / one_minus,
    )


def eval_g(channel: DiffusionChannel, s: ComplexFreq, r):
    """Elementary block g(s, r) = exp(-(r / sqrt(mu)) * sqrt(s))."""
    return np.exp(-(r / np.sqrt(channel.mu)) * s.sqrt)


def reflection_coefficient(b0: BoundaryKind, bL: BoundaryKind) -> int:
    """-1 when both ends have the same kind (fixed-end reflection), +1 otherwise."""
    return -1 if BoundaryKind.parse(b0) is BoundaryKind.parse(bL) else 1


def nonzero_frequency(s: ComplexFreq, steady_omega: float = STEADY_OMEGA) -> ComplexFreq:
    """Replace omega = 0 by ``steady_omega``; steady gains are reported as limits."""
    if not s.is_zero():
        return s
    logger.debug(f"Evaluating s = 0 at the steady frequency omega = {steady_omega:g} rad/s")
    if np.ndim(s.omega):
        return ComplexFreq(np.where(np.asarray(s.omega) == 0, steady_omega, s.omega))
    return ComplexFreq(steady_omega)


def _check_denominator(den, s: ComplexFreq):
    small = np.abs(den) < DENOMINATOR_FLOOR
    if np.any(small):
        omega = np.asarray(s.omega)[small].flat[0] if np.ndim(s.omega) else s.omega
        raise DenominatorUnderflow("Channel denominator 1 + K g(s, L)^2 underflowed", omega=float(omega))


def eval_G_general(channel: DiffusionChannel, s: ComplexFreq, source: float, ell: float,
                   mode: ZMode | None = None, output: Quantity | None = None,
                   steady_omega: float = STEADY_OMEGA):
    """
    Transfer function from the boundary input at ``source`` to the output at ``ell``.

    The output is Z(G_{r,*}) at r = ell where
    G_{r,*}(s) = (g(s, L-d) K g(s, L) + g(s, d)) / (1 + K g(s, L)^2), d = |r - *|,
    and Z evaluates, differentiates or integrates in r. Differentiation and
    integration act on the exponentials of the numerator in closed form; the
    integral is the antiderivative without an additive constant.

    Args:
        channel (DiffusionChannel): Channel geometry and boundary kinds.
        s (ComplexFreq): Evaluation frequency. omega = 0 is evaluated at ``steady_omega``.
        source (float): Input position, 0 or L.
        ell (float): Output position in [0, L].
        mode (ZMode, optional): Overrides the mode inferred from the boundary kinds.
        output (Quantity, optional): Output quantity at an interior ``ell``.

    Returns:
        complex: G evaluated at s (an array when ``s.omega`` is an array).
    """
    if source not in (0, channel.L):
        raise InvalidParam(f"Source must be a boundary position (0 or {channel.L}), got {source}")
    if not 0 <= ell <= channel.L:
        raise InvalidParam(f"Output position must lie in [0, {channel.L}], got {ell}")

    if mode is None:
        if output is None:
            output = output_quantity(channel.boundary_at(ell))
        mode = infer_zmode(input_quantity(channel.boundary_at(source)), output)

    s = nonzero_frequency(s, steady_omega)
    K = reflection_coefficient(channel.b0, channel.bL)
    a = s.sqrt / np.sqrt(channel.mu)
    g_L = eval_g(channel, s, channel.L)
    den = 1 + K * g_L ** 2
    _check_denominator(den, s)

    d = abs(ell - source)
    sigma = 1 if source == 0 else -1
    g_far = eval_g(channel, s, channel.L - d)
    g_near = eval_g(channel, s, d)

    if mode is ZMode.EVALUATE:
        num = K * g_far * g_L + g_near
    elif mode is ZMode.SPATIAL_DERIVATIVE:
        num = sigma * a * (K * g_far * g_L - g_near)
    else:
        num = (K * g_L * g_far - g_near) / (sigma * a)
    return num / den


def eval_G_matrix(channel: DiffusionChannel, s: ComplexFreq, steady_omega: float = STEADY_OMEGA) -> np.ndarray:
    """
    Closed-form 2x2 diffusion transfer matrix for the channel's boundary pair.

    Rows are the outputs (z_0, z_L) and columns the inputs (v_0, v_L). For a
    vector of frequencies the result has shape (n, 2, 2).
    """
    s = nonzero_frequency(s, steady_omega)
    root = s.sqrt
    a = root / np.sqrt(channel.mu)
    z = channel.L * a

    K = reflection_coefficient(channel.b0, channel.bL)
    e2 = np.exp(-2 * z)
    _check_denominator(-np.expm1(-2 * z) if K < 0 else 1 + e2, s)
    h = hyperbolics(z)

    kinds = channel.kinds
    if kinds == "dd":
        entries = [[-a * h.coth, a * h.csch], [-a * h.csch, a * h.coth]]
    elif kinds == "dn":
        entries = [[-a * h.tanh, h.sech], [h.sech, h.tanh / a]]
    elif kinds == "nd":
        # dn mirrored through r -> L - r, which negates every gradient
        entries = [[-h.tanh / a, h.sech], [h.sech, a * h.tanh]]
    else:
        entries = [[-h.coth / a, h.csch / a], [-h.csch / a, h.coth / a]]

    matrix = np.array(entries, dtype=complex)
    return np.moveaxis(matrix, (0, 1), (-2, -1))
