import logging

import click
import pandas as pd

from mcloop.analysis.cutoff import CutoffTarget, cutoff_frequency
from mcloop.diffusion.channel import DiffusionChannel
from mcloop.diffusion.transfer import eval_G_matrix
from mcloop.exceptions import NoCrossing
from .bode_cli import DIFFUSION_ENTRIES
from .helpers import EXIT_NO_CROSSING, OutputSet, common_options, finish, handle_errors, load_run_config

logger = logging.getLogger(__name__)

# boundary pairs whose steady gain depends on L and mu are measured from the steady gain
AUTO_TARGET = {
    "dd": CutoffTarget.FROM_STEADY,
    "dn": CutoffTarget.ABSOLUTE,
    "nd": CutoffTarget.ABSOLUTE,
    "nn": CutoffTarget.FROM_STEADY,
}


def cutoff_rows(cfg) -> list:
    section = cfg.cutoff
    rows = []
    for kinds in section.kinds or [cfg.channel.kinds]:
        channel = DiffusionChannel.from_kinds(kinds, mu=cfg.channel.mu, L=cfg.channel.L)
        target = AUTO_TARGET[kinds] if section.mode == "auto" else CutoffTarget(section.mode)
        for entry in section.entries:
            row_index, col_index = DIFFUSION_ENTRIES[entry]
            row = {"kinds": kinds, "entry": entry, "reference": target.value}
            try:
                result = cutoff_frequency(
                    lambda s: eval_G_matrix(channel, s)[..., row_index, col_index],
                    target=target,
                    bracket=section.bracket,
                    scale=channel.rate,
                    level_db=section.level_db,
                    max_expansions=section.max_expansions,
                )
            except NoCrossing as err:
                logger.info(f"No cut-off for {entry} of {kinds}: {err}")
                row.update({"omega_c": None, "omega_hat": None, "steady_db": None, "no_crossing": str(err)})
            else:
                row.update({
                    "omega_c": result.omega_c,
                    "omega_hat": result.omega_hat,
                    "steady_db": result.steady_db,
                    "target_db": result.target_db,
                    "iterations": result.iterations,
                    "no_crossing": None,
                })
            rows.append(row)
    return rows


@click.command("cutoff")
@common_options
@handle_errors
def cutoff(config_path, out_dir, crate):
    """Compute cut-off frequencies of the diffusion-system entries"""
    cfg, out_dir, crate = load_run_config(config_path, out_dir, crate)
    rows = cutoff_rows(cfg)

    for row in rows:
        if row["no_crossing"] is None:
            steady = "inf" if row["steady_db"] is None else f"{row['steady_db']:.4g} dB"
            click.echo(f"{row['entry']}^{row['kinds']} ({row['reference']}): omega_c = {row['omega_c']:.6g} rad/s, "
                       f"omega_hat = {row['omega_hat']:.6g}, steady gain {steady}")
        else:
            click.echo(f"{row['entry']}^{row['kinds']} ({row['reference']}): no crossing: {row['no_crossing']}")

    outputs = OutputSet(out_dir, "cutoff")
    outputs.json({"mu": cfg.channel.mu, "L": cfg.channel.L, "level_db": cfg.cutoff.level_db, "cutoffs": rows},
                 "cutoff.json", "Cut-off frequencies and normalized cut-offs per boundary pair and entry")
    outputs.csv(pd.DataFrame(rows), "cutoff.csv", "Cut-off table")
    finish(outputs, crate)

    if any(row["no_crossing"] is not None for row in rows):
        click.echo("Error: at least one cut-off target was not reached", err=True)
        raise SystemExit(EXIT_NO_CROSSING)
