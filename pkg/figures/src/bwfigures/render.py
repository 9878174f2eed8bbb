"""Deterministic matplotlib renderers for the four figure kinds."""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .csvio import CsvTable, FigureInputError, read_table, require_columns

KINDS = ("spectrum", "ratio", "ratio-pair", "model-overlay")

# fixed style tables so re-renders are pixel-identical
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")
_STYLES = ("-", "--", ":", "-.")


@dataclass(frozen=True)
class FigureJob:
    """One rendering task: input CSVs, figure kind, output image, ranges."""

    kind: str
    inputs: tuple[str, ...]
    out: str
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None


def _spectrum_label(name: str) -> str:
    if name == "dP_dp_single":
        return "single pulse"
    if name == "dP_dp_first_single":
        return "first pulse alone"
    if name == "dP_dp_second_single":
        return "second pulse alone"
    if name.startswith("dP_dp_double_D"):
        return f"two pulses, D = {name[len('dP_dp_double_D'):]}"
    return name


def _curve_label(table: CsvTable) -> str:
    pulse = table.meta.get("pulse1", "")
    xi = pulse.split(",")[0].replace("xi ", "xi = ") if pulse else table.path
    return f"{xi} (model)" if table.kind == "model" else xi


def _start(job: FigureJob):
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=144)
    ax.grid(True, alpha=0.25, linewidth=0.5)
    return fig, ax


def _finish(fig, ax, job: FigureJob, tables: list[CsvTable]) -> None:
    if job.xlim is not None:
        ax.set_xlim(*job.xlim)
    if job.ylim is not None:
        ax.set_ylim(*job.ylim)
    ax.legend(fontsize=8, framealpha=1.0)
    notes = []
    for t in tables:
        tag = t.fingerprint or "no-fingerprint"
        if tag not in notes:
            notes.append(tag)
    pulses = tables[0].pulse_lines()
    fig.text(
        0.01, 0.01,
        "  |  ".join(pulses + [f"config {' '.join(notes)}"]),
        fontsize=6, color="0.45",
    )
    fig.tight_layout(rect=(0.0, 0.03, 1.0, 1.0))
    fig.savefig(job.out, metadata={"Software": "bwfigures"})
    plt.close(fig)


def _render_spectrum(job: FigureJob) -> None:
    (table,) = _read_all(job, exactly=1)
    (p,) = require_columns(table, ["p_over_m"])
    names = [n for n in table.columns if n.startswith("dP_dp")]
    if not names:
        raise FigureInputError(
            f"{table.path}: missing column 'dP_dp_*' (spectrum schema)"
        )
    fig, ax = _start(job)
    for i, name in enumerate(names):
        ax.plot(p, table.columns[name], _STYLES[i % len(_STYLES)],
                color=_COLORS[i % len(_COLORS)], linewidth=1.4,
                label=_spectrum_label(name))
    ax.set_xlabel(r"$p_+/m$")
    ax.set_ylabel(r"$dP/dp_+ \cdot m$")
    _finish(fig, ax, job, [table])


def _render_ratio(job: FigureJob) -> None:
    tables = _read_all(job)
    fig, ax = _start(job)
    ax.axhline(1.0, color="0.6", linewidth=0.8, linestyle=":")
    for i, table in enumerate(tables):
        D, R = require_columns(table, ["D_lambda_e", "ratio"])
        ax.plot(D, R, _STYLES[i % len(_STYLES)],
                color=_COLORS[i % len(_COLORS)], linewidth=1.4,
                label=_curve_label(table))
    ax.set_xlabel(r"$D/\lambda_e$")
    ax.set_ylabel(r"$R$")
    _finish(fig, ax, job, tables)


def _render_ratio_pair(job: FigureJob) -> None:
    (table,) = _read_all(job, exactly=1)
    D, r_ab, r_ba = require_columns(
        table, ["D_lambda_e", "ratio_ab", "ratio_ba"]
    )
    fig, ax = _start(job)
    ax.axhline(1.0, color="0.6", linewidth=0.8, linestyle=":")
    ax.plot(D, r_ab, "-", color=_COLORS[0], linewidth=1.4,
            label="original order")
    ax.plot(D, r_ba, "--", color=_COLORS[1], linewidth=1.4,
            label="inverted order")
    ax.set_xlabel(r"$D/\lambda_e$")
    ax.set_ylabel(r"$R$")
    _finish(fig, ax, job, [table])


def _render_model_overlay(job: FigureJob) -> None:
    tables = _read_all(job, exactly=2)
    kinds = {t.kind for t in tables}
    if kinds != {"sweep", "model"}:
        raise FigureInputError(
            f"overlay needs one sweep CSV and one model CSV, got "
            f"{sorted(kinds)}"
        )
    sim = next(t for t in tables if t.kind == "sweep")
    mod = next(t for t in tables if t.kind == "model")
    if sim.fingerprint != mod.fingerprint:
        raise FigureInputError(
            f"fingerprint mismatch: {sim.path} has {sim.fingerprint or '?'}, "
            f"{mod.path} has {mod.fingerprint or '?'}"
        )
    fig, ax = _start(job)
    ax.axhline(1.0, color="0.6", linewidth=0.8, linestyle=":")
    D, R = require_columns(sim, ["D_lambda_e", "ratio"])
    ax.plot(D, R, "-", color=_COLORS[0], linewidth=1.4, label="simulation")
    D_m, R_m = require_columns(mod, ["D_lambda_e", "ratio"])
    ax.plot(D_m, R_m, "--", color=_COLORS[1], linewidth=1.4,
            label="Gaussian model")
    ax.set_xlabel(r"$D/\lambda_e$")
    ax.set_ylabel(r"$R$")
    _finish(fig, ax, job, [sim, mod])


def _read_all(job: FigureJob, exactly: int | None = None) -> list[CsvTable]:
    if exactly is not None and len(job.inputs) != exactly:
        raise FigureInputError(
            f"{job.kind} takes exactly {exactly} CSV input(s), "
            f"got {len(job.inputs)}"
        )
    if not job.inputs:
        raise FigureInputError(f"{job.kind}: no CSV inputs given")
    return [read_table(p) for p in job.inputs]


_RENDERERS = {
    "spectrum": _render_spectrum,
    "ratio": _render_ratio,
    "ratio-pair": _render_ratio_pair,
    "model-overlay": _render_model_overlay,
}


def render(job: FigureJob) -> None:
    """Render one job to its output path; raises before writing on bad input."""
    if job.kind not in _RENDERERS:
        raise FigureInputError(
            f"unknown figure kind '{job.kind}' (one of: {', '.join(KINDS)})"
        )
    _RENDERERS[job.kind](job)
