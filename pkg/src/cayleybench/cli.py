"""Command-line interface: one subcommand per experiment kind.

Every subcommand reads a JSON config (--config), runs the experiment, writes
the report (--out, JSON or CSV by extension), and for report kinds with a
figure renders companion PNG files next to the output.  Exit codes: 0 pass,
1 invalid config, 2 property failure (counterexample found), 3 resource
error.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

import click

from .config import KINDS, load_config
from .errors import ConfigError, ResourceBudgetError
from .plots import render_figures
from .reports import emit_report, report_json_bytes
from .runner import run_experiment

EXIT_PASS = 0
EXIT_CONFIG = 1
EXIT_FAIL = 2
EXIT_RESOURCE = 3


@click.group()
def main():
    """Finite-scale Cayley-ball workbench."""


def _execute(kind: str, config_path, out, workers, cache_dir, seed, figures):
    try:
        cfg = load_config(config_path)
        if cfg.kind != kind:
            raise ConfigError("kind", f"config is for {cfg.kind!r}, command is {kind!r}")
        if seed is not None:
            cfg.seed = seed
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    started = time.monotonic()
    try:
        report = run_experiment(cfg, cache_dir=cache_dir, workers=workers)
    except ResourceBudgetError as exc:
        click.echo(f"resource error: {exc}", err=True)
        sys.exit(EXIT_RESOURCE)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    elapsed = time.monotonic() - started
    if out is not None:
        emit_report(report, out)
        if figures:
            stem = Path(out).stem
            for path in render_figures(report, Path(out).parent, stem):
                click.echo(f"figure: {path}", err=True)
        click.echo(f"report: {out}", err=True)
    else:
        sys.stdout.buffer.write(report_json_bytes(report))
    click.echo(f"elapsed: {elapsed:.2f}s", err=True)
    sys.exit(EXIT_PASS if report["status"] == "pass" else EXIT_FAIL)


def _register(kind: str):
    @main.command(name=kind, help=f"Run a {kind} experiment.")
    @click.option("--config", "config_path", required=True,
                  type=click.Path(exists=True, dir_okay=False),
                  help="JSON experiment config.")
    @click.option("--out", type=click.Path(dir_okay=False), default=None,
                  help="Report path (.json or .csv); stdout JSON if omitted.")
    @click.option("--workers", type=int, default=1, show_default=True,
                  help="Cap on internal parallelism.")
    @click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
                  help=f"Ball cache directory (or ${'{'}CAYLEYBENCH_CACHE_DIR{'}'}).")
    @click.option("--seed", type=int, default=None, help="Override the config seed.")
    @click.option("--figures/--no-figures", default=True, show_default=True,
                  help="Render companion PNG figures next to --out.")
    def _cmd(config_path, out, workers, cache_dir, seed, figures, _kind=kind):
        _execute(_kind, config_path, out, workers, cache_dir, seed, figures)

    return _cmd


for _kind in KINDS:
    _register(_kind)


if __name__ == "__main__":
    main()
