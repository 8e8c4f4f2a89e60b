import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from tqdm import tqdm

from mcloop.boundary.mechanisms import LigandReceptorParams, TransmembraneParams
from mcloop.diffusion.channel import DiffusionChannel
from mcloop.exceptions import ConfigError, InvalidParam, NotSettled, Unstable

logger = logging.getLogger(__name__)

MIN_CELLS = 51
MIN_PERIODS = 8
SETTLE_PERIODS = 3
SETTLE_DRIFT = 0.01
SAMPLES_PER_PERIOD = 200
MAX_STRIDE = 2000
BLOWUP_FACTOR = 1e6


@dataclass(frozen=True)
class Drive:
    """
    Robot-side concentration c0(t) = offset + amplitude cos(omega t) (uM).

    ``offset`` defaults to ``amplitude`` so the drive never goes negative.
    """
    amplitude: float = 1.0
    omega: float = 1e-2
    offset: float | None = None
    waveform: str = "cosine"

    @property
    def dc(self) -> float:
        return self.amplitude if self.offset is None else self.offset

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega

    def __call__(self, t):
        return self.dc + self.amplitude * np.cos(self.omega * np.asarray(t, dtype=float))


@dataclass(frozen=True, eq=False)
class SimConfig:
    """
    Finite-difference run of the diffusion channel with a transmembrane
    transmitter at r = 0 and a ligand-receptor receiver at r = L.

    Args:
        channel (DiffusionChannel): Medium; must be Dirichlet at 0 and Neumann at L.
        transmembrane (TransmembraneParams): Transmitter membrane, rates may be zero.
        receptor (LigandReceptorParams): Receiver surface, rates may be zero.
        drive (Drive): Sinusoidal robot concentration.
        n_cells (int): Number of grid intervals on [0, L].
        cfl (float): Safety factor on the explicit step, in (0, 0.5].
        duration (float, optional): Simulated time (s); default max(8 periods, 5 L^2 / mu).
        record_stride (int, optional): Steps between recorded snapshots.
        initial_profile (array, optional): Initial field on the n_cells + 1 nodes; zero by default.
    """
    channel: DiffusionChannel
    transmembrane: TransmembraneParams
    receptor: LigandReceptorParams
    drive: Drive = Drive()
    n_cells: int = 100
    cfl: float = 0.25
    duration: float | None = None
    record_stride: int | None = None
    initial_profile: np.ndarray | None = None

    @property
    def dx(self) -> float:
        return self.channel.L / self.n_cells

    def resolved_duration(self) -> float:
        if self.duration is not None:
            return float(self.duration)
        return max(MIN_PERIODS * self.drive.period, 5 * self.channel.L ** 2 / self.channel.mu)

    def validate(self):
        if self.channel.kinds != "dn":
            raise ConfigError(f"Simulation needs a Dirichlet/Neumann channel (dn), got {self.channel.kinds}")
        if not isinstance(self.n_cells, (int, np.integer)) or self.n_cells < MIN_CELLS:
            raise ConfigError(f"n_cells must be an integer >= {MIN_CELLS}, got {self.n_cells}")
        if not 0 < self.cfl <= 0.5:
            raise ConfigError(f"cfl must lie in (0, 0.5], got {self.cfl}")
        try:
            self.transmembrane.check(allow_zero=True)
            self.receptor.check(allow_zero=True)
        except InvalidParam as err:
            raise ConfigError(str(err)) from err
        for params in (self.transmembrane, self.receptor):
            if not math.isclose(params.mu, self.channel.mu):
                raise ConfigError(f"{type(params).__name__}.mu={params.mu} differs from channel mu={self.channel.mu}")
        if self.drive.waveform != "cosine":
            raise ConfigError(f"Unsupported drive waveform {self.drive.waveform!r}")
        if not (math.isfinite(self.drive.omega) and self.drive.omega > 0):
            raise ConfigError(f"Drive frequency must be positive, got {self.drive.omega}")
        if not (math.isfinite(self.drive.amplitude) and self.drive.amplitude >= 0):
            raise ConfigError(f"Drive amplitude must be nonnegative, got {self.drive.amplitude}")
        if not math.isfinite(self.drive.dc):
            raise ConfigError(f"Drive offset must be finite, got {self.drive.offset}")
        if self.duration is not None and not (math.isfinite(self.duration) and self.duration > 0):
            raise ConfigError(f"duration must be positive, got {self.duration}")
        if self.record_stride is not None and (not isinstance(self.record_stride, (int, np.integer)) or self.record_stride < 1):
            raise ConfigError(f"record_stride must be a positive integer, got {self.record_stride}")
        if self.initial_profile is not None and np.shape(self.initial_profile) != (self.n_cells + 1,):
            raise ConfigError(f"initial_profile must have {self.n_cells + 1} values, got shape {np.shape(self.initial_profile)}")

        if self.resolved_duration() < MIN_PERIODS * self.drive.period:
            logger.warning(f"Duration {self.resolved_duration():g} s is shorter than {MIN_PERIODS} drive periods; "
                           "the response may not settle")


@dataclass(frozen=True, eq=False)
class SimResult:
    config: SimConfig
    times: np.ndarray
    c_field: np.ndarray
    c_A: np.ndarray
    dt: float

    @property
    def r(self) -> np.ndarray:
        return np.linspace(0.0, self.config.channel.L, self.config.n_cells + 1)

    @property
    def c0(self) -> np.ndarray:
        return self.config.drive(self.times)

    @property
    def c_out(self) -> np.ndarray:
        return self.c_field[:, 0]

    @property
    def z_L(self) -> np.ndarray:
        return self.c_field[:, -1]

    @property
    def y_L(self) -> np.ndarray:
        # c_A counts complexes per unit area; the transduced signal is per receptor
        rc = self.config.receptor
        if rc.R == 0:
            return np.zeros_like(self.c_A)
        return rc.k_re * self.c_A / rc.R

    def total_mass(self) -> np.ndarray:
        """Amount of signal molecules in the compartment, the medium and the receptor complexes."""
        weights = mass_weights(self.config)
        return self.c_field @ weights[:-1] + weights[-1] * self.c_A

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t_s": self.times,
            "c0": self.c0,
            "c_out": self.c_out,
            "z_L": self.z_L,
            "c_A": self.c_A,
            "y_L": self.y_L,
        })


def mass_weights(cfg: SimConfig) -> np.ndarray:
    """Quadrature weights under which the sealed scheme conserves mass exactly."""
    n = cfg.n_cells
    weights = np.full(n + 2, cfg.dx)
    weights[0] = cfg.transmembrane.dr
    weights[n] = cfg.dx / 2
    weights[n + 1] = 1.0
    return weights


def time_step(cfg: SimConfig) -> float:
    """
    Explicit step: cfl dx^2 / mu, further limited so that every diagonal of the
    step matrix stays nonnegative at the two boundary nodes and the receptor state.
    """
    mu, dx = cfg.channel.mu, cfg.dx
    tm, rc = cfg.transmembrane, cfg.receptor
    rates = [
        tm.k + mu / (tm.dr * dx),
        2 * mu / dx ** 2 + 2 * rc.R * rc.k_on / dx,
        rc.k_off,
    ]
    dt = cfg.cfl * dx ** 2 / mu
    for rate in rates:
        if rate > 0:
            dt = min(dt, 2 * cfg.cfl / rate)
    return dt


def step_matrix(cfg: SimConfig, dt: float) -> tuple:
    """
    Forward-Euler map x_{n+1} = M x_n + b c0(t_n) on the state
    x = [c_out, c_1, ..., c_{N-1}, c_N, c_A].
    """
    n = cfg.n_cells
    mu, dx = cfg.channel.mu, cfg.dx
    tm, rc = cfg.transmembrane, cfg.receptor
    size = n + 2
    M = np.zeros((size, size))
    b = np.zeros(size)

    # transmembrane compartment: dc_out/dt = k (c0 - c_out) + (mu / dr) (c_1 - c_out) / dx
    flux = mu / (tm.dr * dx)
    M[0, 0] = 1 - dt * (tm.k + flux)
    M[0, 1] = dt * flux
    b[0] = dt * tm.k

    r = mu * dt / dx ** 2
    interior = np.arange(1, n)
    M[interior, interior - 1] = r
    M[interior, interior] = 1 - 2 * r
    M[interior, interior + 1] = r

    # ghost node: dc/dr(L) = -(1 / mu) dc_A/dt
    M[n, n - 1] = 2 * r
    M[n, n] = 1 - 2 * r - dt * 2 * rc.R * rc.k_on / dx
    M[n, n + 1] = dt * 2 * rc.k_off / dx

    # dc_A/dt = -k_off c_A + R k_on c_N
    M[n + 1, n] = dt * rc.R * rc.k_on
    M[n + 1, n + 1] = 1 - dt * rc.k_off
    return M, b


def _stride(cfg: SimConfig, dt: float) -> int:
    if cfg.record_stride is not None:
        return int(cfg.record_stride)
    return int(min(MAX_STRIDE, max(1, cfg.drive.period // (SAMPLES_PER_PERIOD * dt))))


def simulate(cfg: SimConfig, progress: bool = False) -> SimResult:
    """
    Integrate the channel with explicit forward Euler and record every
    ``record_stride`` steps.

    The recursion is advanced a stride at a time with the exact block
    propagator x <- M^m x + sum_j M^(m-1-j) b c0(t_j); the sinusoidal drive
    lets the input sum collapse onto three precomputed vectors.
    """
    cfg.validate()
    dt = time_step(cfg)
    M, b = step_matrix(cfg, dt)
    m = _stride(cfg, dt)
    steps = math.ceil(cfg.resolved_duration() / dt)
    blocks = max(1, math.ceil(steps / m))
    logger.info(f"Simulating {blocks * m} steps of {dt:.4g} s ({blocks * m * dt:.6g} s) with stride {m}")

    drive = cfg.drive
    phases = drive.omega * dt * np.arange(m)
    inputs = np.stack([np.cos(phases), np.sin(phases), np.ones(m)], axis=1)
    responses = np.zeros((M.shape[0], 3))
    for j in range(m):
        responses = M @ responses + np.outer(b, inputs[j])
    q_cos, q_sin, q_one = responses.T
    P = np.linalg.matrix_power(M, m)

    x = np.zeros(M.shape[0])
    if cfg.initial_profile is not None:
        x[:-1] = np.asarray(cfg.initial_profile, dtype=float)
    scale = max(drive.amplitude, abs(drive.dc), float(np.max(np.abs(x))))

    states = np.empty((blocks + 1, x.size))
    states[0] = x
    for block in tqdm(range(blocks), desc="fdm", unit="block", disable=not progress):
        theta = drive.omega * block * m * dt
        x = P @ x + drive.dc * q_one + drive.amplitude * (math.cos(theta) * q_cos - math.sin(theta) * q_sin)
        peak = np.max(np.abs(x))
        if not np.isfinite(peak) or (scale > 0 and peak > BLOWUP_FACTOR * scale):
            raise Unstable(f"Field blew up to {peak:.3g} at t = {(block + 1) * m * dt:.6g} s")
        states[block + 1] = x

    result = SimResult(
        config=cfg,
        times=np.arange(blocks + 1) * m * dt,
        c_field=states[:, :-1],
        c_A=states[:, -1],
        dt=dt,
    )
    floor = float(np.min(result.c_field))
    if drive.dc >= drive.amplitude and floor < -1e-9 * max(scale, 1e-300):
        logger.warning(f"Concentration undershoot {floor:.3g} below zero")
    return result


def _fit_amplitude(t, values, omega):
    design = np.column_stack([np.cos(omega * t), np.sin(omega * t), np.ones_like(t)])
    (a, b, _), *_ = np.linalg.lstsq(design, values, rcond=None)
    return math.hypot(a, b)


def empirical_gain(res: SimResult, drive_omega: float | None = None, signal: str = "z_L") -> float:
    """
    Steady-state gain (dB) from the drive amplitude to ``signal``.

    The output amplitude is the least-squares fit of a cos + b sin + c over the
    final three drive periods.

    Raises:
        NotSettled: fewer than three periods recorded, too few samples, or the
            per-period amplitude drifts by 1% or more.
    """
    omega = res.config.drive.omega if drive_omega is None else drive_omega
    amplitude_in = res.config.drive.amplitude
    if amplitude_in <= 0:
        raise InvalidParam("Gain is undefined for a zero drive amplitude")

    period = 2 * math.pi / omega
    t = res.times
    values = np.asarray(getattr(res, signal), dtype=float)
    start = t[-1] - SETTLE_PERIODS * period
    if start < 0:
        raise NotSettled(f"Run covers {t[-1] / period:.2f} periods; {SETTLE_PERIODS} are needed", omega=omega)

    amplitudes = []
    for p in range(SETTLE_PERIODS):
        mask = (t >= start + p * period) & (t <= start + (p + 1) * period)
        if np.count_nonzero(mask) < 8:
            raise NotSettled(f"Only {np.count_nonzero(mask)} samples per drive period; reduce record_stride", omega=omega)
        amplitudes.append(_fit_amplitude(t[mask], values[mask], omega))
    peak = max(amplitudes)
    drift = (peak - min(amplitudes)) / peak if peak > 0 else 0.0
    if drift >= SETTLE_DRIFT:
        raise NotSettled(f"Output amplitude drifts by {100 * drift:.2f}% over the last {SETTLE_PERIODS} periods", omega=omega)

    window = t >= start
    amplitude_out = _fit_amplitude(t[window], values[window], omega)
    with np.errstate(divide="ignore"):
        return float(20 * np.log10(amplitude_out / amplitude_in))
