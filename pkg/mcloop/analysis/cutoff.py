import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from mcloop.analysis.curves import FrequencyEvaluable
from mcloop.diffusion.channel import ComplexFreq, DiffusionChannel
from mcloop.diffusion.transfer import eval_G_matrix
from mcloop.exceptions import InvalidParam, NoCrossing

logger = logging.getLogger(__name__)

LEVEL_DB = -6.0
STEADY_OMEGA_HAT = 1e-12
DEFAULT_BRACKET = (1e-8, 1e4)
EXPANSION_FACTOR = 100.0


class CutoffTarget(str, Enum):
    ABSOLUTE = "absolute"
    FROM_STEADY = "from_steady"


@dataclass(frozen=True)
class CutoffResult:
    """
    Args:
        omega_c (float): Cut-off frequency (rad/s).
        omega_hat (float): Normalized cut-off, omega_c divided by the frequency scale (L^2 omega / mu for channels).
        reference (CutoffTarget): Absolute level or level relative to the steady gain.
        iterations (int): Bisection iterations.
        target_db (float): Gain level searched for.
        gain_db (float): Gain reached at omega_c.
        steady_db (float): Gain at the steady frequency, None where it is not finite.
    """
    omega_c: float
    omega_hat: float
    reference: CutoffTarget
    iterations: int
    target_db: float
    gain_db: float
    steady_db: float | None = None

    def to_dict(self):
        data = asdict(self)
        data["reference"] = self.reference.value
        return data


def gain_db(tf: FrequencyEvaluable, omega: float) -> float:
    with np.errstate(divide="ignore"):
        return float(20 * np.log10(np.abs(tf(ComplexFreq(float(omega))))))


def steady_gain(tf: FrequencyEvaluable, scale: float = 1.0, steady_omega_hat: float = STEADY_OMEGA_HAT) -> float:
    """
    Gain (dB) at omega = steady_omega_hat * scale, standing in for the limit s -> 0.

    Returns +inf or -inf when the gain still moves by more than 0.1 dB over the
    two decades below the steady frequency, i.e. the limit is not a finite gain.
    """
    omega = steady_omega_hat * scale
    steady = gain_db(tf, omega)
    drift = gain_db(tf, omega / 100) - steady
    if abs(drift) > 0.1:
        return math.copysign(math.inf, drift)
    return steady


def cutoff_frequency(tf: FrequencyEvaluable, target: CutoffTarget = CutoffTarget.ABSOLUTE,
                     bracket: tuple = DEFAULT_BRACKET, scale: float = 1.0, level_db: float = LEVEL_DB,
                     rtol: float = 1e-6, atol_db: float = 1e-4, max_expansions: int = 8,
                     max_iterations: int = 200) -> CutoffResult:
    """
    Smallest frequency at which the gain of ``tf`` falls to the target level.

    The gain must decrease monotonically. The bracket (in units of ``scale``)
    is widened geometrically until it straddles the target, then bisected in
    log-frequency until the relative width is below ``rtol`` and the gain is
    within ``atol_db`` of the target.

    Args:
        tf (callable): Frequency-evaluable transfer function.
        target (CutoffTarget): ABSOLUTE searches for ``level_db``; FROM_STEADY for steady gain + ``level_db``.
        bracket (tuple): Initial normalized search interval.
        scale (float): Frequency scale, e.g. mu / L^2 for a diffusion channel.

    Returns:
        CutoffResult: Cut-off frequency and search diagnostics.
    """
    target = CutoffTarget(target)
    lo, hi = (float(bracket[0]) * scale, float(bracket[1]) * scale)
    if not 0 < lo < hi:
        raise InvalidParam(f"Cut-off bracket must satisfy 0 < low < high, got [{lo}, {hi}]")

    steady_db = steady_gain(tf, scale)
    if target is CutoffTarget.FROM_STEADY:
        if not math.isfinite(steady_db):
            raise NoCrossing(f"Steady gain is not finite ({steady_db} dB); only absolute cut-offs exist")
        target_db = steady_db + level_db
    else:
        target_db = level_db

    def excess(omega):
        return gain_db(tf, omega) - target_db

    expansions = 0
    while excess(lo) < 0:
        if expansions >= max_expansions:
            raise NoCrossing(f"Gain is already below {target_db:.4g} dB at the low end of the bracket", omega=lo)
        lo /= EXPANSION_FACTOR
        expansions += 1
        logger.debug(f"Expanded cut-off bracket downward to {lo:g} rad/s")
    while excess(hi) > 0:
        if expansions >= max_expansions:
            raise NoCrossing(f"Gain never reaches {target_db:.4g} dB within the bracket", omega=hi)
        hi *= EXPANSION_FACTOR
        expansions += 1
        logger.debug(f"Expanded cut-off bracket upward to {hi:g} rad/s")

    iterations = 0
    while True:
        mid = math.sqrt(lo * hi)
        residual = excess(mid)
        iterations += 1
        if (hi / lo - 1 <= rtol and abs(residual) <= atol_db) or iterations >= max_iterations:
            break
        if residual > 0:
            lo = mid
        else:
            hi = mid

    if abs(residual) > atol_db:
        logger.warning(f"Cut-off search stopped {residual:.3g} dB from the target after {iterations} iterations")

    result = CutoffResult(
        omega_c=mid,
        omega_hat=mid / scale,
        reference=target,
        iterations=iterations,
        target_db=target_db,
        gain_db=target_db + residual,
        steady_db=steady_db if math.isfinite(steady_db) else None,
    )
    logger.info(f"Cut-off {result.omega_c:.6g} rad/s (normalized {result.omega_hat:.6g}) after {iterations} iterations")
    return result


@lru_cache(maxsize=None)
def normalized_cutoff(kinds: str, target: CutoffTarget = CutoffTarget.ABSOLUTE, row: int = 1, col: int = 0) -> float:
    """Normalized cut-off L^2 omega_c / mu of a diffusion-matrix entry, computed on a unit channel."""
    unit = DiffusionChannel.from_kinds(kinds, mu=1.0, L=1.0)
    result = cutoff_frequency(lambda s: eval_G_matrix(unit, s)[..., row, col], target=CutoffTarget(target))
    return result.omega_hat
