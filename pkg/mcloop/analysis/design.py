import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from mcloop.analysis.cutoff import CutoffTarget, normalized_cutoff
from mcloop.boundary.mechanisms import TransmembraneParams, make_transmembrane
from mcloop.boundary.statespace import eval_H
from mcloop.diffusion.channel import ComplexFreq, DiffusionChannel
from mcloop.diffusion.transfer import eval_G_matrix, hyperbolics
from mcloop.exceptions import InvalidParam

logger = logging.getLogger(__name__)

HALF_AMPLITUDE = 0.5
LOOP_GAIN_GRID = np.logspace(-6, 3, 1801)

# steady-gain reference of the G21 entry per boundary pair
DIFFUSION_CUTOFF_TARGET = {
    "dd": CutoffTarget.FROM_STEADY,
    "dn": CutoffTarget.ABSOLUTE,
    "nd": CutoffTarget.ABSOLUTE,
}


def _positive(**values):
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise InvalidParam(f"{name} must be positive and finite, got {value}")


def tanh_gain_approx(omega: float, L: float, mu: float) -> float:
    """
    Piecewise approximation of |tanh((L / sqrt(mu)) sqrt(j omega))|: rises at
    10 dB/dec up to the corner omega = mu / L^2, flat at 1 beyond it.
    """
    _positive(L=L, mu=mu)
    if not (math.isfinite(omega) and omega >= 0):
        raise InvalidParam(f"omega must be nonnegative and finite, got {omega}")
    corner = mu / L ** 2
    rising = L / math.sqrt(mu) * math.sqrt(omega)
    if omega < corner:
        return rising
    if omega > corner:
        return 1.0
    return max(rising, 1.0)


def tanh_gain_exact(omega: float, L: float, mu: float) -> float:
    z = L / math.sqrt(mu) * np.sqrt(1j * omega)
    return float(abs(hyperbolics(z).tanh))


def alpha_max_gain(k: float, mu: float, L: float, dr: float) -> float:
    """
    Approximate peak of |H0_11 G11| for a transmembrane transmitter on a dn channel:
    sqrt(mu) / (sqrt(k) dr) when k >= mu / L^2, otherwise L / dr.
    """
    _positive(k=k, mu=mu, L=L, dr=dr)
    corner = mu / L ** 2
    steep = math.sqrt(mu) / (math.sqrt(k) * dr)
    flat = L / dr
    if k > corner:
        return steep
    if k < corner:
        return flat
    return max(steep, flat)


def first_order_cutoff(k: float, level: float = HALF_AMPLITUDE) -> float:
    """Frequency where |k / (j omega + k)| drops to ``level``."""
    return k * math.sqrt(1 / level ** 2 - 1)


def diffusion_cutoff(mu: float, L: float, kinds: str = "dn") -> float:
    """omega_D = omega_hat_c mu / L^2 for the G21 entry of the given boundary pair."""
    if kinds not in DIFFUSION_CUTOFF_TARGET:
        raise InvalidParam(f"No normalized cut-off exists for boundary pair {kinds!r}")
    return normalized_cutoff(kinds, DIFFUSION_CUTOFF_TARGET[kinds]) * mu / L ** 2


def dominant_cutoff(mu: float, L: float, k: float, kinds: str = "dn") -> float:
    """omega_M = min(omega_D, omega_H0), the bandwidth-limiting cut-off of the channel."""
    return min(diffusion_cutoff(mu, L, kinds), first_order_cutoff(k))


def loop_gain_peak(channel: DiffusionChannel, transmembrane: TransmembraneParams, omegas=LOOP_GAIN_GRID) -> float:
    """Sampled maximum of |H0_11 G11| over ``omegas``."""
    s = ComplexFreq(np.asarray(omegas, dtype=float))
    loop = eval_H(make_transmembrane(transmembrane), s)[..., 0, 0] * eval_G_matrix(channel, s)[..., 0, 0]
    return float(np.max(np.abs(loop)))


@dataclass(frozen=True)
class DesignSpec:
    """
    Design targets and candidate parameters.

    Args:
        band_hi (float): Upper edge of the control bandwidth (rad/s).
        L_min, L_max (float): Communication distance range (um).
        dr (float): Boundary-layer thickness (um).
        mu, k, k_off, k_on, k_re, R: Candidate diffusion coefficient and boundary rates.
        koff_margin (float): Factor by which k_off must exceed sqrt(3) omega_M.
        kinds (str): Boundary pair of the channel.
    """
    band_hi: float = 1e-2
    L_min: float = 10.0
    L_max: float = 100.0
    dr: float = 1.0
    mu: float = 83.0
    k: float = 200.0
    k_off: float = 100.0
    k_on: float = 0.1
    k_re: float = 1.0
    R: float = 1000.0
    koff_margin: float = 10.0
    kinds: str = "dn"

    def __post_init__(self):
        _positive(band_hi=self.band_hi, L_min=self.L_min, L_max=self.L_max, dr=self.dr, mu=self.mu,
                  k=self.k, k_off=self.k_off, k_on=self.k_on, k_re=self.k_re, R=self.R,
                  koff_margin=self.koff_margin)
        if self.L_min > self.L_max:
            raise InvalidParam(f"L_min must not exceed L_max, got [{self.L_min}, {self.L_max}]")
        if self.kinds not in DIFFUSION_CUTOFF_TARGET:
            raise InvalidParam(f"Design checks need a boundary pair with a normalized cut-off, got {self.kinds!r}")


@dataclass(frozen=True)
class ConditionResult:
    name: str
    description: str
    passed: bool
    value: float
    threshold: float
    relation: str

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.name}: {self.description}: {self.value:.4g} {self.relation} {self.threshold:.4g}"


@dataclass(frozen=True)
class DesignReport:
    spec: DesignSpec
    conditions: list = field(default_factory=list)
    omega_D: float = math.nan
    omega_H0: float = math.nan
    omega_M: float = math.nan
    omega_D_short: float = math.nan  # cut-off at L_min, not used by any condition
    alpha: float = math.nan
    alpha_sampled: float = math.nan

    @property
    def passed(self) -> bool:
        return all(condition.passed for condition in self.conditions)

    def to_dict(self):
        data = asdict(self)
        data["passed"] = self.passed
        return data


def design_check(spec: DesignSpec) -> DesignReport:
    """
    Verify the bandwidth and self-interference design conditions for ``spec``.

    Every threshold is recomputed: the diffusion cut-off constant by bisection
    on a unit channel, the membrane cut-off from the half-amplitude level of a
    first-order lag.
    """
    omega_hat_c = normalized_cutoff(spec.kinds, DIFFUSION_CUTOFF_TARGET[spec.kinds])
    omega_D = omega_hat_c * spec.mu / spec.L_max ** 2
    omega_H0 = first_order_cutoff(spec.k)
    alpha = alpha_max_gain(spec.k, spec.mu, spec.L_max, spec.dr)

    omega_M = min(omega_D, omega_H0)
    omega_D_short = omega_hat_c * spec.mu / spec.L_min ** 2
    koff_min = spec.koff_margin * first_order_cutoff(omega_M)

    channel = DiffusionChannel.from_kinds(spec.kinds, mu=spec.mu, L=spec.L_max)
    alpha_sampled = loop_gain_peak(channel, TransmembraneParams(k=spec.k, mu=spec.mu, dr=spec.dr))

    conditions = [
        ConditionResult(
            name="(i)",
            description=f"diffusion coefficient for omega_D = {omega_hat_c:.4g} mu / L_max^2 >= band",
            passed=omega_D >= spec.band_hi,
            value=spec.mu,
            threshold=spec.band_hi * spec.L_max ** 2 / omega_hat_c,
            relation=">=",
        ),
        ConditionResult(
            name="(ii)",
            description="membrane rate for omega_H0 = sqrt(3) k >= band",
            passed=omega_H0 >= spec.band_hi,
            value=spec.k,
            threshold=spec.band_hi / first_order_cutoff(1.0),
            relation=">=",
        ),
        ConditionResult(
            name="(iii)",
            description=f"loop gain alpha <= 1 (k >= mu / dr^2 = {spec.mu / spec.dr ** 2:.4g})",
            passed=alpha <= 1,
            value=alpha,
            threshold=1.0,
            relation="<=",
        ),
        ConditionResult(
            name="(iv)",
            description=f"desorption rate k_off >= {spec.koff_margin:g} sqrt(3) omega_M",
            passed=spec.k_off >= koff_min,
            value=spec.k_off,
            threshold=koff_min,
            relation=">=",
        ),
    ]

    report = DesignReport(spec=spec, conditions=conditions, omega_D=omega_D, omega_H0=omega_H0,
                          omega_M=omega_M, omega_D_short=omega_D_short, alpha=alpha, alpha_sampled=alpha_sampled)
    for condition in conditions:
        logger.info(condition.summary())
    return report
