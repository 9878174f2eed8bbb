"""Command-line driver: spectrum / total / sweep / exchange / model to CSV.

Every output embeds the config fingerprint and enough metadata to reproduce
the run; content is deterministic for a fixed config, so reruns are
byte-identical and downstream plots can detect mismatched inputs.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import (
    GridSpec,
    PRESETS,
    RunConfig,
    VERSION,
    fingerprint,
    load_config,
    validate,
)
from .engine import set_thread_count
from .errors import BwDelayError, ParseError, ValidationError
from .kinematics import GammaProbe
from .model import dressed_energy_stats, gaussian_ratio_model
from .probability import GridEvaluation, build_grid
from .pulse import pulse_length
from .sweep import DoublePulseConfig, RatioCurve, order_sum_check, sweep_delay


def _num(x: float) -> str:
    return f"{x:.9g}"


def _scaled_grid(config: RunConfig, scale: float):
    g = config.grid
    scaled = RunConfig(
        omega_gamma=config.omega_gamma,
        pulses=config.pulses,
        delay=config.delay,
        grid=GridSpec(
            radial=int(round(g.radial * scale)),
            polar=int(round(g.polar * scale)),
            azimuthal=int(round(g.azimuthal * scale)),
            p_max=g.p_max,
        ),
    )
    validate(scaled)
    sg = scaled.grid
    return scaled, build_grid(
        radial=sg.radial,
        polar=sg.polar,
        azimuthal=sg.azimuthal,
        p_max=sg.resolve_p_max(scaled.pulses),
    )


def _double_config(config: RunConfig, gap: float = 0.0) -> DoublePulseConfig:
    specs = config.pulse_specs()
    return DoublePulseConfig(
        pulse_first=specs[0],
        pulse_second=specs[1] if len(specs) > 1 else None,
        gamma=GammaProbe(omega_gamma=config.omega_gamma),
        gap_D=gap,
    )


def _metadata(kind: str, config: RunConfig, grid) -> list[str]:
    lines = [
        f"# kind = {kind}",
        f"# version = {VERSION}",
        f"# fingerprint = {fingerprint(config)}",
        f"# gamma.omega = {_num(config.omega_gamma)}",
    ]
    for i, p in enumerate(config.pulses, start=1):
        lines.append(
            f"# pulse{i} = xi {_num(p.xi)}, omega {_num(p.omega)}, "
            f"cycles {p.cycles}, cep_pi {_num(p.cep_pi)}"
        )
    lines.append(
        f"# grid = radial {grid.p_nodes.size}, polar {grid.theta_nodes.size}, "
        f"azimuthal {grid.phi_nodes.size}, pmax {_num(grid.p_max)}"
    )
    return lines


def _write_csv(path: str, meta: list[str], header: list[str], rows) -> None:
    out = "\n".join(meta) + "\n" + ",".join(header) + "\n"
    out += "\n".join(",".join(_num(v) for v in row) for row in rows)
    out += "\n"
    if path == "-":
        sys.stdout.write(out)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)


def _cmd_spectrum(config: RunConfig, grid, out: str) -> None:
    dcfg = _double_config(config)
    ev = GridEvaluation(dcfg, grid)
    delays = config.delay.expand()
    header = ["p_over_m"]
    cols = []
    if dcfg.pulse_second is None:
        header.append("dP_dp_single")
        cols.append(ev.spectrum_of(ev.density_single(0)))
    elif dcfg.identical:
        header.append("dP_dp_single")
        cols.append(ev.spectrum_of(ev.density_single(0)))
        for D in delays:
            header.append(f"dP_dp_double_D{_num(D)}")
            cols.append(ev.spectrum_of(ev.density_double(D)))
    else:
        header += ["dP_dp_first_single", "dP_dp_second_single"]
        cols.append(ev.spectrum_of(ev.density_single(0)))
        cols.append(ev.spectrum_of(ev.density_single(1)))
        for D in delays:
            header.append(f"dP_dp_double_D{_num(D)}")
            cols.append(ev.spectrum_of(ev.density_double(D)))
    rows = zip(grid.p_nodes, *cols)
    _write_csv(out, _metadata("spectrum", config, grid), header, rows)


def _cmd_total(config: RunConfig, grid, out: str) -> None:
    dcfg = _double_config(config)
    ev = GridEvaluation(dcfg, grid)
    meta = _metadata("total", config, grid)
    if dcfg.pulse_second is None:
        _write_csv(out, meta, ["P_single"],
                   [(ev.total_of(ev.density_single(0)),)])
        return
    p1 = ev.total_of(ev.density_single(0))
    p2 = ev.total_of(ev.density_single(1))
    rows = []
    for D in config.delay.expand():
        pd = ev.total_of(ev.density_double(D))
        rows.append((D, pd, p1, p2, pd / (p1 + p2)))
    _write_csv(out, meta,
               ["D_lambda_e", "P_double", "P_first_single",
                "P_second_single", "ratio"], rows)


def _curve_rows(curve: RatioCurve):
    for i, D in enumerate(curve.D_values):
        yield (
            D,
            curve.ratio_values[i],
            curve.P_double[i],
            curve.P_first_single,
            curve.P_second_single,
        )


def _cmd_sweep(config: RunConfig, grid, out: str) -> None:
    dcfg = _double_config(config)
    if dcfg.pulse_second is None:
        raise ValidationError("sweep requires two pulses in the config")
    ev = GridEvaluation(dcfg, grid)
    curve = sweep_delay(dcfg, config.delay.expand(), cache=ev)
    meta = _metadata("sweep", config, grid) + [f"# mode = {curve.mode}"]
    _write_csv(out, meta,
               ["D_lambda_e", "ratio", "P_double", "P_first_single",
                "P_second_single"], _curve_rows(curve))


def _cmd_exchange(config: RunConfig, grid, out: str) -> None:
    dcfg = _double_config(config)
    if dcfg.pulse_second is None:
        raise ValidationError("exchange requires two pulses in the config")
    ev = GridEvaluation(dcfg, grid)
    denom = ev.total_of(ev.density_single(0)) + ev.total_of(ev.density_single(1))
    rows = []
    for D in config.delay.expand():
        p_ab, p_ba, residual = order_sum_check(dcfg, D, cache=ev)
        rows.append((D, p_ab / denom, p_ba / denom, residual, p_ab, p_ba))
    meta = _metadata("exchange", config, grid)
    _write_csv(out, meta,
               ["D_lambda_e", "ratio_ab", "ratio_ba", "residual",
                "P_ab", "P_ba"], rows)


def _cmd_model(config: RunConfig, grid, out: str) -> None:
    dcfg = _double_config(config)
    ev = GridEvaluation(dcfg, grid)
    stats = dressed_energy_stats(dcfg, cache=ev)
    L = pulse_length(dcfg.pulse_first)
    curve = gaussian_ratio_model(stats, L, config.delay.expand())
    meta = _metadata("model", config, grid) + [
        f"# mean_EL = {_num(stats.mean_EL)}",
        f"# width_EL = {_num(stats.width_EL)}",
        f"# mode_EL = {_num(stats.mode_EL)}",
        f"# pulse_length_L = {_num(L)}",
    ]
    _write_csv(out, meta,
               ["D_lambda_e", "ratio", "P_double", "P_first_single",
                "P_second_single"], _curve_rows(curve))


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "total": _cmd_total,
    "sweep": _cmd_sweep,
    "exchange": _cmd_exchange,
    "model": _cmd_model,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bwdelay",
        description="Pair creation by a gamma quantum in two sequential "
                    "laser pulses: spectra, totals, delay sweeps, order "
                    "exchange, and the Gaussian interference model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--preset", choices=sorted(PRESETS),
                         help="named parameter set")
        src.add_argument("--config", help="path to a key-value config file")
        p.add_argument("--out", default="-",
                       help="output CSV path ('-' for stdout)")
        p.add_argument("--grid-scale", type=float, default=1.0,
                       help="multiplier on the default grid node counts")
        p.add_argument("--threads", type=int, default=None,
                       help="compute threads (default: BWDELAY_THREADS or all)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        threads = args.threads
        if threads is None:
            env = os.environ.get("BWDELAY_THREADS")
            threads = int(env) if env else None
        if threads is not None:
            set_thread_count(threads)
        config = load_config(args.preset if args.preset else args.config)
        scaled, grid = _scaled_grid(config, args.grid_scale)
        _COMMANDS[args.command](scaled, grid, args.out)
    except (ParseError, ValidationError) as exc:
        print(f"BWDELAY_ERROR category={type(exc).__name__} {exc}",
              file=sys.stderr)
        return 2
    except BwDelayError as exc:
        print(f"BWDELAY_ERROR category={type(exc).__name__} {exc}",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
