import logging
import math
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np
import pandas as pd
from tqdm import tqdm

from mcloop.analysis.curves import transfer_function
from mcloop.diffusion.channel import ComplexFreq
from mcloop.simulation.fdm import empirical_gain, simulate
from mcloop.utils.decorators import private
from .helpers import (
    EXIT_VERDICT, OutputSet, common_options, distance_tag, finish, handle_errors, load_run_config
)

logger = logging.getLogger(__name__)


def _progress_enabled() -> bool:
    return logging.getLogger("mcloop").getEffectiveLevel() <= logging.INFO


@click.command("simulate")
@common_options
@handle_errors
def simulate_command(config_path, out_dir, crate):
    """Run the finite-difference channel and write its time series"""
    cfg, out_dir, crate = load_run_config(config_path, out_dir, crate)
    sim = cfg.build_sim_config()
    result = simulate(sim, progress=_progress_enabled())

    summary = {
        "L_um": sim.channel.L,
        "omega_rad_s": sim.drive.omega,
        "amplitude": sim.drive.amplitude,
        "n_cells": sim.n_cells,
        "dt_s": result.dt,
        "duration_s": float(result.times[-1]),
        "samples": int(result.times.size),
    }
    if sim.drive.amplitude > 0:
        gain = empirical_gain(result)
        summary["empirical_gain_db"] = gain
        click.echo(f"Empirical gain c0 -> z_L at omega = {sim.drive.omega:g} rad/s: {gain:.4f} dB")

    tag = distance_tag(sim.channel.L)
    outputs = OutputSet(out_dir, "simulate")
    outputs.csv(result.to_dataframe(), f"simulate_{tag}.csv",
                "Finite-difference time series (t_s, c0, c_out, z_L, c_A, y_L)")
    outputs.json(summary, f"simulate_{tag}.json", "Simulation settings and steady-state gain")
    finish(outputs, crate)


@private
def compare_point(job: tuple) -> dict:
    """Simulate one (distance, frequency) pair and pair its gain with |Gamma0L|."""
    cfg, L, omega = job
    sim = cfg.build_sim_config(L=L, omega=omega)
    result = simulate(sim)
    simulated_db = empirical_gain(result)
    gamma = complex(transfer_function(cfg.build_interconnection(L), "Gamma0L")(ComplexFreq(omega)))
    analytic_db = 20 * math.log10(abs(gamma))
    logger.info(f"L = {L:g} um, omega = {omega:g} rad/s: simulated {simulated_db:.4f} dB, analytic {analytic_db:.4f} dB")
    return {
        "L_um": L,
        "omega_rad_s": omega,
        "simulated_db": simulated_db,
        "analytic_db": analytic_db,
        "deviation_db": simulated_db - analytic_db,
        "amplitude_ratio": 10 ** (simulated_db / 20),
        "n_cells": sim.n_cells,
        "dt_s": result.dt,
    }


def run_comparison(cfg, jobs: int = 1, progress: bool = False) -> pd.DataFrame:
    points = [(cfg, float(L), float(omega)) for L in cfg.compare.distances for omega in cfg.compare.omegas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(tqdm(pool.map(compare_point, points), total=len(points), desc="compare", disable=not progress))
    else:
        rows = [compare_point(point) for point in tqdm(points, desc="compare", disable=not progress)]
    return pd.DataFrame(rows)


@click.command("compare")
@common_options
@click.option("--tolerance-db", type=float, default=None, help="Allowed |simulated - analytic| gain (dB)")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Parallel simulations")
@handle_errors
def compare(config_path, out_dir, crate, tolerance_db, jobs):
    """Compare simulated gains with the analytic MC-channel gain"""
    cfg, out_dir, crate = load_run_config(config_path, out_dir, crate)
    tolerance = cfg.compare.tolerance_db if tolerance_db is None else tolerance_db

    table = run_comparison(cfg, jobs=jobs, progress=_progress_enabled())
    max_deviation = float(np.max(np.abs(table["deviation_db"])))
    passed = max_deviation <= tolerance

    for row in table.itertuples():
        click.echo(f"L = {row.L_um:g} um, omega = {row.omega_rad_s:g} rad/s: simulated {row.simulated_db:.4f} dB, "
                   f"analytic {row.analytic_db:.4f} dB, deviation {row.deviation_db:+.4f} dB")
    click.echo(f"[{'PASS' if passed else 'FAIL'}] max |deviation| = {max_deviation:.4f} dB (tolerance {tolerance:g} dB)")

    outputs = OutputSet(out_dir, "compare")
    outputs.csv(table, "compare.csv", "Simulated versus analytic gain per distance and frequency")
    outputs.json({"tolerance_db": tolerance, "max_deviation_db": max_deviation, "passed": passed,
                  "points": table.to_dict(orient="records")},
                 "compare.json", "Comparison verdict")
    finish(outputs, crate)

    if not passed:
        raise SystemExit(EXIT_VERDICT)
