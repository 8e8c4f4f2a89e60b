import logging
import math
from typing import Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from mcloop.analysis.curves import TRANSFER_NAMES, log_grid
from mcloop.analysis.design import DesignSpec
from mcloop.boundary.mechanisms import (
    LigandReceptorParams, TransmembraneParams, make_ligand_receptor, make_transmembrane
)
from mcloop.diffusion.channel import BoundaryKind, DiffusionChannel
from mcloop.exceptions import ConfigError, InvalidParam
from mcloop.feedback.interconnection import Interconnection
from mcloop.feedback.robots import FirstOrderRobot, identity_robot
from mcloop.simulation.fdm import Drive, SimConfig

logger = logging.getLogger(__name__)

DEFAULT_TRANSFERS = ["Gamma0L", "S0", "H0_12", "G21", "HL_11", "M0L_exact", "M0L_approx"]


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ChannelSection(Section):
    mu: float = Field(gt=0, allow_inf_nan=False)
    L: float = Field(gt=0, allow_inf_nan=False)
    b0: Literal["D", "N", "dirichlet", "neumann"] = "D"
    bL: Literal["D", "N", "dirichlet", "neumann"] = "N"

    @property
    def kinds(self) -> str:
        return BoundaryKind.parse(self.b0).letter + BoundaryKind.parse(self.bL).letter


class TransmembraneSection(Section):
    k: float = Field(default=200.0, gt=0, allow_inf_nan=False)
    dr: float = Field(default=1.0, gt=0, allow_inf_nan=False)


class ReceptorSection(Section):
    k_on: float = Field(default=0.1, gt=0, allow_inf_nan=False)
    k_off: float = Field(default=100.0, gt=0, allow_inf_nan=False)
    k_re: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    R: float = Field(default=1000.0, gt=0, allow_inf_nan=False)


class RobotSection(Section):
    kind: Literal["identity", "first_order"] = "identity"
    gain: float = Field(default=1.0, allow_inf_nan=False)
    tau: float = Field(default=0.0, ge=0, allow_inf_nan=False)


class DesignSection(Section):
    band_hi: float = Field(default=1e-2, gt=0, allow_inf_nan=False)
    L_min: float = Field(default=10.0, gt=0, allow_inf_nan=False)
    L_max: float | None = Field(default=None, gt=0, allow_inf_nan=False)
    dr: float | None = Field(default=None, gt=0, allow_inf_nan=False)
    koff_margin: float = Field(default=10.0, gt=0, allow_inf_nan=False)


class SweepSection(Section):
    omega_min: float = Field(default=1e-4, gt=0, allow_inf_nan=False)
    omega_max: float = Field(default=1e2, gt=0, allow_inf_nan=False)
    points: int = Field(default=601, ge=1)
    omegas: list[float] | None = None
    distances: list[float] | None = None
    transfers: list[str] = Field(default_factory=lambda: list(DEFAULT_TRANSFERS), min_length=1)

    @field_validator("omegas")
    @classmethod
    def _grid_not_empty(cls, value):
        if value is not None:
            if len(value) == 0:
                raise ValueError("explicit frequency grid is empty")
            if any(not (math.isfinite(w) and w > 0) for w in value):
                raise ValueError("frequencies must be positive and finite")
            if any(b <= a for a, b in zip(value, value[1:])):
                raise ValueError("frequencies must be strictly ascending")
        return value

    @field_validator("distances")
    @classmethod
    def _distances_positive(cls, value):
        if value is not None and (len(value) == 0 or any(not (math.isfinite(d) and d > 0) for d in value)):
            raise ValueError("distances must be a non-empty list of positive values")
        return value

    @field_validator("transfers")
    @classmethod
    def _known_transfers(cls, value):
        unknown = [name for name in value if name not in TRANSFER_NAMES]
        if unknown:
            raise ValueError(f"unknown transfer functions {unknown}; choose from {list(TRANSFER_NAMES)}")
        return value

    @model_validator(mode="after")
    def _ordered_bounds(self):
        if self.omegas is None and self.omega_min > self.omega_max:
            raise ValueError(f"omega_min={self.omega_min} exceeds omega_max={self.omega_max}")
        return self

    def grid(self):
        if self.omegas is not None:
            return [float(w) for w in self.omegas]
        return log_grid(self.omega_min, self.omega_max, self.points)


class CutoffSection(Section):
    entries: list[Literal["G11", "G12", "G21", "G22"]] = Field(default_factory=lambda: ["G21"], min_length=1)
    kinds: list[Literal["dd", "dn", "nd", "nn"]] | None = None
    mode: Literal["auto", "absolute", "from_steady"] = "auto"
    level_db: float = Field(default=-6.0, lt=0, allow_inf_nan=False)
    bracket: tuple[float, float] = (1e-8, 1e4)
    max_expansions: int = Field(default=8, ge=0)

    @field_validator("bracket")
    @classmethod
    def _bracket_ordered(cls, value):
        if not 0 < value[0] < value[1]:
            raise ValueError(f"bracket must satisfy 0 < low < high, got {list(value)}")
        return value


class SimulationSection(Section):
    n_cells: int = Field(default=100, ge=51)
    cfl: float = Field(default=0.25, gt=0, le=0.5)
    amplitude: float = Field(default=1.0, ge=0, allow_inf_nan=False)
    offset: float | None = Field(default=None, ge=0, allow_inf_nan=False)
    omega: float = Field(default=1e-2, gt=0, allow_inf_nan=False)
    duration: float | None = Field(default=None, gt=0, allow_inf_nan=False)
    duration_periods: float | None = Field(default=None, gt=0, allow_inf_nan=False)
    record_stride: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _one_duration(self):
        if self.duration is not None and self.duration_periods is not None:
            raise ValueError("set either duration or duration_periods, not both")
        return self

    def resolved_duration(self, omega: float) -> float | None:
        if self.duration_periods is not None:
            return self.duration_periods * 2 * math.pi / omega
        return self.duration


class CompareSection(Section):
    omegas: list[float] = Field(default_factory=lambda: [1e-3, 1e-2, 1e-1], min_length=1)
    distances: list[float] = Field(default_factory=lambda: [50.0, 100.0], min_length=1)
    tolerance_db: float = Field(default=0.5, gt=0, allow_inf_nan=False)

    @field_validator("omegas", "distances")
    @classmethod
    def _positive(cls, value):
        if any(not (math.isfinite(v) and v > 0) for v in value):
            raise ValueError("values must be positive and finite")
        return value


class OutputSection(Section):
    dir: str = "mcloop_out"
    crate: bool = False


class RunConfig(Section):
    """
    Complete run configuration. Units: um, s, uM.

    Every section except ``channel`` defaults to the reference design:
    mu = 83, k = 200, dr = 1, k_on = 0.1, k_off = 100, k_re = 1, R = 1000,
    band 1e-2 rad/s, L in [10, 100].
    """
    channel: ChannelSection
    transmembrane: TransmembraneSection = TransmembraneSection()
    receptor: ReceptorSection = ReceptorSection()
    robot: RobotSection = RobotSection()
    design: DesignSection = DesignSection()
    sweep: SweepSection = SweepSection()
    cutoff: CutoffSection = CutoffSection()
    simulation: SimulationSection = SimulationSection()
    compare: CompareSection = CompareSection()
    output: OutputSection = OutputSection()

    @classmethod
    def from_dict(cls, data) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"Configuration must be a mapping, got {type(data).__name__}")
        try:
            return cls.model_validate(data)
        except ValidationError as err:
            raise ConfigError(f"Invalid configuration: {err}") from err

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        """Read a YAML (or JSON) document and validate it."""
        try:
            with open(path) as handle:
                data = yaml.safe_load(handle)
        except OSError as err:
            raise ConfigError(f"Cannot read configuration {path}: {err}") from err
        except yaml.YAMLError as err:
            raise ConfigError(f"Configuration {path} is not valid YAML: {err}") from err
        config = cls.from_dict(data if data is not None else {})
        logger.info(f"Loaded configuration from {path}")
        return config

    def build_channel(self, L: float | None = None) -> DiffusionChannel:
        return DiffusionChannel(mu=self.channel.mu, L=self.channel.L if L is None else L,
                                b0=self.channel.b0, bL=self.channel.bL)

    def build_transmembrane(self) -> TransmembraneParams:
        return TransmembraneParams(k=self.transmembrane.k, mu=self.channel.mu, dr=self.transmembrane.dr)

    def build_receptor(self) -> LigandReceptorParams:
        r = self.receptor
        return LigandReceptorParams(k_on=r.k_on, k_off=r.k_off, k_re=r.k_re, R=r.R, mu=self.channel.mu)

    def build_robot(self):
        if self.robot.kind == "identity":
            return identity_robot
        return FirstOrderRobot(gain=self.robot.gain, tau=self.robot.tau)

    def build_interconnection(self, L: float | None = None) -> Interconnection:
        """Transmembrane transmitter at r = 0, ligand-receptor receiver at r = L."""
        robot = self.build_robot()
        return Interconnection(
            channel=self.build_channel(L),
            h0=make_transmembrane(self.build_transmembrane()),
            hL=make_ligand_receptor(self.build_receptor()),
            f0=robot,
            fL=robot,
        )

    def build_design_spec(self) -> DesignSpec:
        d = self.design
        try:
            return DesignSpec(
                band_hi=d.band_hi,
                L_min=d.L_min,
                L_max=self.channel.L if d.L_max is None else d.L_max,
                dr=self.transmembrane.dr if d.dr is None else d.dr,
                mu=self.channel.mu,
                k=self.transmembrane.k,
                k_off=self.receptor.k_off,
                k_on=self.receptor.k_on,
                k_re=self.receptor.k_re,
                R=self.receptor.R,
                koff_margin=d.koff_margin,
                kinds=self.channel.kinds,
            )
        except InvalidParam as err:
            raise ConfigError(str(err)) from err

    def build_sim_config(self, L: float | None = None, omega: float | None = None) -> SimConfig:
        sim = self.simulation
        omega = sim.omega if omega is None else omega
        return SimConfig(
            channel=self.build_channel(L),
            transmembrane=self.build_transmembrane(),
            receptor=self.build_receptor(),
            drive=Drive(amplitude=sim.amplitude, omega=omega, offset=sim.offset),
            n_cells=sim.n_cells,
            cfl=sim.cfl,
            duration=sim.resolved_duration(omega),
            record_stride=sim.record_stride,
        )
