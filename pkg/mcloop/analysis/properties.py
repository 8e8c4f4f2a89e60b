import logging
from dataclasses import dataclass, field

import numpy as np

from mcloop.diffusion.channel import ComplexFreq, DiffusionChannel
from mcloop.diffusion.transfer import eval_G_matrix
from mcloop.exceptions import InvalidParam, PropertyViolation

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps
KINDS = ("dd", "dn", "nd", "nn")


def f_plus(w):
    return 2 * (np.sinh(w) + np.sin(w))


def f_minus(w):
    return 2 * (np.sinh(w) - np.sin(w))


def c_minus(w):
    """exp(w) + exp(-w) - 2 cos(w), via half-angle squares to keep accuracy near 0."""
    return 4 * (np.sinh(w / 2) ** 2 + np.sin(w / 2) ** 2)


def h(w):
    return 2 * c_minus(w) - w * f_plus(w)


@dataclass(frozen=True)
class PropertyReport:
    points: int
    min_f_plus: float
    min_f_minus: float
    min_c_minus: float
    max_h: float
    max_gain_ratio: dict = field(default_factory=dict)
    worst_margin: float = 0.0


def _first_violation(mask, grid):
    return float(grid[np.argmax(mask)])


def appendix_property_suite(grid) -> PropertyReport:
    """
    Numerically verify the inequalities behind the monotone channel gain.

    On ``grid`` (values of w = sqrt(2 L^2 omega / mu) >= 0): f+(w) >= 0,
    f-(w) >= 0, C-(w) >= 0 and h(w) <= 0; and for every boundary pair |G21| is
    strictly decreasing over the positive grid points.

    Raises:
        PropertyViolation: on the first grid value that breaks an inequality.
    """
    w = np.asarray(grid, dtype=float)
    if w.ndim != 1 or w.size == 0 or np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidParam("Property grid must be a non-empty 1-D array of finite values >= 0")
    w = np.sort(w)

    scale = np.exp(w) + 1
    tol = 64 * EPS * scale
    values = {"f+": f_plus(w), "f-": f_minus(w), "C-": c_minus(w)}
    for name, value in values.items():
        bad = value < -tol
        if np.any(bad):
            raise PropertyViolation(f"{name}(w) is negative", omega_tilde=_first_violation(bad, w))

    h_value = h(w)
    h_tol = 64 * EPS * (2 * values["C-"] + w * values["f+"] + 1)
    bad = h_value > h_tol
    if np.any(bad):
        raise PropertyViolation("h(w) is positive", omega_tilde=_first_violation(bad, w))

    positive = w[w > 0]
    omega_hat = positive ** 2 / 2
    gain_ratio = {}
    for kinds in KINDS:
        unit = DiffusionChannel.from_kinds(kinds, mu=1.0, L=1.0)
        gain = np.abs(eval_G_matrix(unit, ComplexFreq(omega_hat))[..., 1, 0])
        ratio = gain[1:] / gain[:-1]
        bad = ratio >= 1
        if np.any(bad):
            raise PropertyViolation(f"|G21| of the {kinds} channel does not decrease",
                                    omega_tilde=_first_violation(bad, positive[1:]))
        gain_ratio[kinds] = float(np.max(ratio)) if ratio.size else 0.0

    margins = [float(np.min(value / scale)) for value in values.values()]
    margins.append(float(np.min(-h_value / (2 * values["C-"] + w * values["f+"] + 1))))
    margins.extend(1 - ratio for ratio in gain_ratio.values())
    report = PropertyReport(
        points=int(w.size),
        min_f_plus=float(np.min(values["f+"])),
        min_f_minus=float(np.min(values["f-"])),
        min_c_minus=float(np.min(values["C-"])),
        max_h=float(np.max(h_value)),
        max_gain_ratio=gain_ratio,
        worst_margin=min(margins),
    )
    logger.info(f"Property suite passed on {report.points} points, worst margin {report.worst_margin:.3g}")
    return report
