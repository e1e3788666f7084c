"""Figure rendering for experiment reports.

Reports stay plot-ready CSV/JSON; these figures are companion artifacts the
CLI writes next to the report file.  Rendering is deterministic given a
report, but image bytes are not covered by the byte-identical guarantee.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, outdir: Path, stem: str, name: str) -> str:
    path = outdir / f"{stem}_{name}.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def _rd_profile_figures(payload: dict, outdir: Path, stem: str) -> list[str]:
    rows = payload["rows"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    xs = range(len(rows))
    ax1.plot(xs, [r["lower"] for r in rows], "o", ms=3, label="lower")
    ax1.plot(xs, [r["upper"] for r in rows], "_", ms=6, label="certified upper")
    ax1.set_xlabel("cell (r1, r2, p) ordinal")
    ax1.set_ylabel("constant")
    ax1.legend(fontsize=8)
    prof = payload["profile"]
    ax2.step([p["r"] for p in prof], [p["c"] for p in prof], where="post")
    ax2.set_xlabel("r")
    ax2.set_ylabel("C(r)")
    fig.tight_layout()
    return [_save(fig, outdir, stem, "profile")]


def _decomp_count_figures(payload: dict, outdir: Path, stem: str) -> list[str]:
    rows = payload["max_table"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = [r["r1"] for r in rows]
    ax.plot(xs, [r["max_count"] for r in rows], "o-", label="max observed")
    c1, c2 = payload["c1"], payload["c2"]
    ax.plot(xs, [c1 * x + c2 for x in xs], "--", label=f"envelope {c1:.3g}*r1+{c2:.3g}")
    ax.set_xlabel("r1")
    ax.set_ylabel("decomposition count")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return [_save(fig, outdir, stem, "counts")]


def _opnorm_figures(payload: dict, outdir: Path, stem: str) -> list[str]:
    rows = payload["rows"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot([r["R"] for r in rows], [r["value"] for r in rows], "o-")
    ax.set_xlabel("R")
    ax.set_ylabel("operator-norm lower bound")
    fig.tight_layout()
    return [_save(fig, outdir, stem, "convergence")]


def _tmap_figures(payload: dict, outdir: Path, stem: str) -> list[str]:
    rows = payload["condition_iii"]["max_by_r"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = [r["r"] for r in rows]
    ax.plot(xs, [r["max_count"] for r in rows], "o-", label="max count")
    if any(r.get("claim") is not None for r in rows):
        ax.plot(xs, [r["claim"] for r in rows], "--", label="claimed bound")
    c1, c2 = payload["condition_iii"]["envelope"]
    ax.plot(xs, [c1 * x + c2 for x in xs], ":", label="fitted envelope")
    ax.set_xlabel("r = L(h)")
    ax.set_ylabel("distinct (a, g') pairs")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return [_save(fig, outdir, stem, "counts")]


def _trace_figures(payload: dict, outdir: Path, stem: str) -> list[str]:
    samples = payload["samples"]
    if not samples:
        return []
    steps = samples[0]["steps"]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    names = [s["name"] for s in steps]
    for sample in samples[: min(8, len(samples))]:
        ax.plot(range(len(sample["steps"])),
                [max(s["rhs"], 1e-30) for s in sample["steps"]], "o-", alpha=0.6)
    ax.set_yscale("log")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("step majorant")
    fig.tight_layout()
    return [_save(fig, outdir, stem, "chain")]


_RENDERERS = {
    "rd-profile": _rd_profile_figures,
    "decomp-count": _decomp_count_figures,
    "opnorm": _opnorm_figures,
    "tmap-verify": _tmap_figures,
    "trace": _trace_figures,
}


def render_figures(report: dict, outdir, stem: str) -> list[str]:
    """Render the figures for a report, returning the written paths."""
    renderer = _RENDERERS.get(report.get("kind"))
    if renderer is None:
        return []
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return renderer(report["payload"], outdir, stem)
