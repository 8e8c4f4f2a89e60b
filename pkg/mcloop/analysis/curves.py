import logging
from dataclasses import dataclass
from typing import Protocol

import numpy as np
import pandas as pd

from mcloop.diffusion.channel import ComplexFreq
from mcloop.exceptions import EvaluationError, InvalidParam
from mcloop.feedback.interconnection import (
    Interconnection, channel_gamma, closed_loop_solve, entire_channel_M0L_approx, self_interference
)
from mcloop.utils.decorators import stamp_omega
from mcloop.utils.files import write_csv_atomic

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["omega_rad_s", "re", "im", "gain_db", "phase_rad"]


class FrequencyEvaluable(Protocol):
    def __call__(self, s: ComplexFreq) -> complex:
        ...


def log_grid(omega_min: float, omega_max: float, points: int) -> np.ndarray:
    if points < 1:
        raise InvalidParam(f"Frequency grid needs at least one point, got {points}")
    if not 0 < omega_min <= omega_max:
        raise InvalidParam(f"Frequency grid bounds must satisfy 0 < min <= max, got [{omega_min}, {omega_max}]")
    if points == 1:
        return np.array([float(omega_min)])
    return np.logspace(np.log10(omega_min), np.log10(omega_max), points)


@dataclass(frozen=True, eq=False)
class GainCurve:
    """
    Sampled frequency response.

    Args:
        omegas (array): Strictly ascending angular frequencies (rad/s).
        values (array): Complex response at each frequency.
        name (str): Label of the sampled transfer function.
    """
    omegas: np.ndarray
    values: np.ndarray
    name: str = ""

    def __post_init__(self):
        omegas = np.array(self.omegas, dtype=float)
        values = np.array(self.values, dtype=complex)
        if omegas.ndim != 1 or omegas.shape != values.shape:
            raise InvalidParam(f"Frequencies and values must be 1-D of equal length, got {omegas.shape} and {values.shape}")
        if omegas.size and np.any(np.diff(omegas) <= 0):
            raise InvalidParam("Frequencies must be strictly ascending")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.omegas.size

    @property
    def gain_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20 * np.log10(np.abs(self.values))

    @property
    def phase_rad(self) -> np.ndarray:
        return np.angle(self.values)

    def min_gain_db(self, omega_max: float | None = None) -> float:
        mask = np.ones(self.omegas.shape, dtype=bool) if omega_max is None else self.omegas <= omega_max
        return float(np.min(self.gain_db[mask]))

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            "omega_rad_s": self.omegas,
            "re": self.values.real,
            "im": self.values.imag,
            "gain_db": self.gain_db,
            "phase_rad": self.phase_rad,
        }, columns=CSV_COLUMNS)

    @classmethod
    def from_dataframe(cls, df: pd.DataFrame, name: str = "") -> "GainCurve":
        missing = set(CSV_COLUMNS[:3]) - set(df.columns)
        if missing:
            raise InvalidParam(f"Gain curve table lacks columns: {sorted(missing)}")
        values = df["re"].to_numpy(dtype=float) + 1j * df["im"].to_numpy(dtype=float)
        return cls(omegas=df["omega_rad_s"].to_numpy(dtype=float), values=values, name=name)

    def write_csv(self, path: str) -> str:
        return write_csv_atomic(self.to_dataframe(), path)

    @classmethod
    def read_csv(cls, path: str, name: str = "") -> "GainCurve":
        return cls.from_dataframe(pd.read_csv(path, float_precision="round_trip"), name=name)


def sweep(tf: FrequencyEvaluable, grid, name: str = "") -> GainCurve:
    """
    Evaluate ``tf`` at every frequency of ``grid``.

    Errors raised by the evaluation keep their type and carry the offending omega.
    """
    omegas = np.asarray(grid, dtype=float)
    if omegas.ndim != 1 or omegas.size == 0:
        raise InvalidParam("Sweep grid must be a non-empty 1-D sequence")
    if np.any(np.diff(omegas) <= 0):
        raise InvalidParam("Sweep grid must be strictly ascending")

    evaluate = stamp_omega(tf)
    values = np.empty(omegas.shape, dtype=complex)
    for i, omega in enumerate(omegas):
        value = complex(evaluate(ComplexFreq(float(omega))))
        if not np.isfinite(value):
            raise EvaluationError(f"Transfer function {name or tf!r} is not finite", omega=float(omega))
        values[i] = value

    logger.debug(f"Swept {name or 'transfer function'} over {omegas.size} points [{omegas[0]:g}, {omegas[-1]:g}] rad/s")
    return GainCurve(omegas=omegas, values=values, name=name)


def _entry(matrix_fn, row, col):
    return lambda s: matrix_fn(s)[..., row, col]


def transfer_function(ic: Interconnection, name: str) -> FrequencyEvaluable:
    """Look up a named frequency response of the interconnection."""
    registry = {
        "G11": _entry(ic.G, 0, 0),
        "G12": _entry(ic.G, 0, 1),
        "G21": _entry(ic.G, 1, 0),
        "G22": _entry(ic.G, 1, 1),
        "H0_11": _entry(ic.H0, 0, 0),
        "H0_12": _entry(ic.H0, 0, 1),
        "H0_21": _entry(ic.H0, 1, 0),
        "HL_11": _entry(ic.HL, 0, 0),
        "HL_21": _entry(ic.HL, 1, 0),
        "S0": lambda s: self_interference(ic, s, "0"),
        "SL": lambda s: self_interference(ic, s, "L"),
        "L0": lambda s: ic.H0(s)[..., 0, 0] * ic.G(s)[..., 0, 0],
        "Gamma0L": lambda s: channel_gamma(ic, s)[0],
        "GammaL0": lambda s: channel_gamma(ic, s)[1],
        "M0L_exact": lambda s: closed_loop_solve(ic, s, (1.0, 0.0)).yL,
        "M0L_approx": lambda s: entire_channel_M0L_approx(ic, s),
        "MLL_exact": lambda s: closed_loop_solve(ic, s, (0.0, 1.0)).yL,
    }
    if name not in registry:
        raise InvalidParam(f"Unknown transfer function {name!r}; choose from {', '.join(registry)}")
    return registry[name]


TRANSFER_NAMES = ("G11", "G12", "G21", "G22", "H0_11", "H0_12", "H0_21", "HL_11", "HL_21",
                  "S0", "SL", "L0", "Gamma0L", "GammaL0", "M0L_exact", "M0L_approx", "MLL_exact")
