import logging

import click

from mcloop.analysis.curves import sweep, transfer_function
from mcloop.diffusion.transfer import eval_G_matrix
from mcloop.utils.decorators import private
from .helpers import OutputSet, common_options, distance_tag, finish, handle_errors, load_run_config

logger = logging.getLogger(__name__)

DIFFUSION_ENTRIES = {"G11": (0, 0), "G12": (0, 1), "G21": (1, 0), "G22": (1, 1)}


@private
def resolve_transfer(cfg, name: str, L: float):
    """Diffusion entries work for any boundary pair; the rest need the full interconnection."""
    if name in DIFFUSION_ENTRIES:
        row, col = DIFFUSION_ENTRIES[name]
        channel = cfg.build_channel(L)
        return lambda s: eval_G_matrix(channel, s)[..., row, col]
    return transfer_function(cfg.build_interconnection(L), name)


@click.command("bode")
@common_options
@handle_errors
def bode(config_path, out_dir, crate):
    """Write frequency-response CSVs for the configured transfer functions"""
    cfg, out_dir, crate = load_run_config(config_path, out_dir, crate)
    grid = cfg.sweep.grid()
    distances = cfg.sweep.distances or [cfg.channel.L]
    band_hi = cfg.design.band_hi

    outputs = OutputSet(out_dir, "bode")
    summary = {"band_hi_rad_s": band_hi, "curves": []}
    for L in distances:
        for name in cfg.sweep.transfers:
            curve = sweep(resolve_transfer(cfg, name, L), grid, name=name)
            filename = f"bode_{name}_{distance_tag(L)}.csv"
            outputs.csv(curve.to_dataframe(), filename,
                        f"Frequency response of {name} at L = {L:g} um (omega_rad_s, re, im, gain_db, phase_rad)")
            in_band = curve.omegas <= band_hi
            summary["curves"].append({
                "name": name,
                "L_um": L,
                "file": filename,
                "min_gain_db": curve.min_gain_db(),
                "min_gain_db_in_band": curve.min_gain_db(band_hi) if in_band.any() else None,
            })

    outputs.json(summary, "bode_summary.json", "Minimum gains per curve, overall and over the control band")
    finish(outputs, crate)
