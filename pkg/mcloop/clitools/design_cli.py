import click

from mcloop.analysis.design import design_check
from .helpers import EXIT_VERDICT, OutputSet, common_options, finish, handle_errors, load_run_config


@click.command("design-check")
@common_options
@handle_errors
def design_check_command(config_path, out_dir, crate):
    """Check the bandwidth and self-interference design conditions"""
    cfg, out_dir, crate = load_run_config(config_path, out_dir, crate)
    report = design_check(cfg.build_design_spec())

    click.echo(f"omega_D = {report.omega_D:.4g} rad/s, omega_H0 = {report.omega_H0:.4g} rad/s, "
               f"omega_M = {report.omega_M:.4g} rad/s")
    click.echo(f"alpha = {report.alpha:.4g} (sampled peak {report.alpha_sampled:.4g})")
    for condition in report.conditions:
        click.echo(condition.summary())

    outputs = OutputSet(out_dir, "design-check")
    outputs.json(report.to_dict(), "design_check.json", "Design conditions with computed thresholds")
    finish(outputs, crate)

    if not report.passed:
        raise SystemExit(EXIT_VERDICT)
