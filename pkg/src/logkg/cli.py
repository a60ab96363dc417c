"""Command-line front end.

Subcommands: table, wave, spectrum, stability, simulate, sweep.  Time series
and tables go to CSV, structured reports to JSON; both are deterministic
byte-for-byte for identical configurations (run metadata sits in '#' header
lines, never timestamps).  With --plot and --out, a PNG rendering of the
report is written next to the data file.

Config files are flat key=value lines (keys named like the long flags,
'#' starts a comment); explicit flags override file values.

Exit codes: 0 ok, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import evolution, plotting, spectral, stability
from .errors import LogKGError, NumericalError, ValidationError
from .model import WaveParams
from .standing_waves import amplitude_for_period, shoot_wave

__all__ = ["main", "run", "default_table_rows"]

DEFAULT_GRID = 256
DEFAULT_DT = 5e-4

# reference parameter set of the Floquet table: c0 = 0.5, amplitude 2.5 for
# p = 1 and 1.5 for the higher powers
DEFAULT_TABLE_C0 = 0.5
DEFAULT_TABLE_ROWS = [(1, 2.5)] + [(p, 1.5) for p in (2, 3, 4, 5, 6, 8, 10, 20)]

TABLE_COLUMNS = ["p", "phi0", "dphi0", "ddphi0", "ybar0", "L0", "ybarL", "dybarL", "theta"]
SIMULATE_COLUMNS = ["t", "energy", "momentum", "lyapunov_gap", "rho", "y", "theta"]


def default_table_rows() -> list[tuple[int, float]]:
    return list(DEFAULT_TABLE_ROWS)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _csv_lines(header_meta: list[str], columns: list[str], rows: list[list]) -> str:
    lines = [f"# {m}" for m in header_meta]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, stability.Verdict):
        return obj.value
    return obj


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _plot_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------

def _load_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    cfg: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg


def _merge(args: argparse.Namespace, config: dict[str, str], spec: dict[str, tuple]):
    """Resolve each option as flag > config > default.  spec maps config key
    to (namespace attribute, converter, default)."""
    resolved = {}
    for key, (attr, conv, default) in spec.items():
        value = getattr(args, attr, None)
        if value is None and key in config:
            try:
                value = conv(config[key])
            except ValueError as exc:
                raise ValidationError(f"config key {key}: {exc}") from exc
        if value is None:
            value = default
        resolved[attr] = value
    return argparse.Namespace(**resolved)


def _wave_profile(p: int, c: float, amplitude: float | None, period: float | None, n: int):
    if (amplitude is None) == (period is None):
        raise ValidationError("exactly one of amplitude or period is required")
    params = WaveParams(p, c)
    if amplitude is None:
        amplitude = amplitude_for_period(params, period)
    return shoot_wave(params, amplitude, n)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _parse_rows(text: str) -> list[tuple[int, float]]:
    rows = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            p_str, a_str = part.split(":")
            rows.append((int(p_str), float(a_str)))
        except ValueError as exc:
            raise ValidationError(f"bad row spec {part!r}, expected p:amplitude") from exc
    if not rows:
        raise ValidationError("empty row list")
    return rows


def cmd_table(ns) -> int:
    rows_spec = _parse_rows(ns.rows) if ns.rows else default_table_rows()
    meta = [f"logkg table c0={_fmt(ns.c0)}"]
    records: list[dict] = []
    out_rows: list[list] = []
    for p, amplitude in rows_spec:
        try:
            shot = shoot_wave(WaveParams(p, ns.c0), amplitude, ns.grid)
            report = spectral.floquet_theta(shot.profile)
            row = report.theta_table_row
            rec = {
                "p": p, "phi0": row.phi0, "dphi0": 0.0, "ddphi0": row.ddphi0,
                "ybar0": row.ybar0, "L0": row.period, "ybarL": row.ybarL,
                "dybarL": row.dybarL, "theta": report.theta,
            }
            records.append(rec)
            out_rows.append([rec[c] for c in TABLE_COLUMNS])
        except LogKGError as exc:
            meta.append(f"row p={p} amplitude={_fmt(amplitude)} failed: {exc}")
            records.append({"p": p, "error": str(exc)})
    _emit(_csv_lines(meta, TABLE_COLUMNS, out_rows), ns.out)
    if ns.plot:
        plotting.render_table(records, _plot_path(ns.out))
    return 0


def cmd_wave(ns) -> int:
    shot = _wave_profile(ns.p, ns.c, ns.amplitude, ns.period, ns.grid)
    prof = shot.profile
    meta = [
        f"logkg wave p={prof.p} c={_fmt(prof.c)} amplitude={_fmt(prof.amplitude)}"
        f" period={_fmt(prof.period)}",
    ]
    if ns.format == "json":
        record = {
            "p": prof.p, "c": prof.c, "amplitude": prof.amplitude,
            "period": prof.period, "turning_min": shot.turning_min,
            "hamiltonian_level": shot.hamiltonian_level,
            "x": prof.grid.nodes, "phi": prof.phi, "dphi": prof.dphi,
        }
        _emit(json.dumps(_jsonable(record), indent=2) + "\n", ns.out)
    else:
        rows = [[x, ph, dph] for x, ph, dph in zip(prof.grid.nodes, prof.phi, prof.dphi)]
        _emit(_csv_lines(meta, ["x", "phi", "dphi"], rows), ns.out)
    if ns.plot:
        plotting.render_wave(
            prof.grid.nodes, prof.phi, prof.dphi,
            f"p={prof.p}, c={prof.c}, L={prof.period:.4f}", _plot_path(ns.out),
        )
    return 0


def _spectrum_record(ns) -> dict:
    shot = _wave_profile(ns.p, ns.c, ns.amplitude, ns.period, ns.grid)
    prof = shot.profile
    re_report = spectral.hill_report(spectral.hill_re(prof), m=ns.eigs, modes=ns.modes)
    im_report = spectral.hill_report(spectral.hill_im(prof), m=ns.eigs, modes=ns.modes)
    block_re = spectral.matrix_operator_eigenvalues(
        spectral.MatrixOperator(spectral.MatrixKind.RE, prof), ns.eigs, ns.modes
    )
    block_im = spectral.matrix_operator_eigenvalues(
        spectral.MatrixOperator(spectral.MatrixKind.IM, prof), ns.eigs, ns.modes
    )
    lam0, companion = spectral.lambda0_closed_form(prof.p, prof.c)

    def hill_dict(rep):
        d = {
            "eigenvalues": rep.eigenvalues,
            "n_negative": rep.n_negative,
            "n_zero": rep.n_zero,
            "zero_tolerance": rep.zero_tolerance,
        }
        if rep.theta_table_row is not None:
            d["theta"] = rep.theta
            d["theta_from_value"] = rep.theta_from_value
            d["theta_table_row"] = asdict(rep.theta_table_row)
        return d

    return _jsonable({
        "p": prof.p, "c": prof.c, "amplitude": prof.amplitude, "period": prof.period,
        "hill_re": hill_dict(re_report),
        "hill_im": hill_dict(im_report),
        "block_re_eigenvalues": block_re,
        "block_im_eigenvalues": block_im,
        "lambda0_closed_form": lam0,
        "lambda0_companion": companion,
    })


def cmd_spectrum(ns) -> int:
    record = _spectrum_record(ns)
    _emit(json.dumps(record, indent=2) + "\n", ns.out)
    if ns.plot:
        plotting.render_spectrum(record, _plot_path(ns.out))
    return 0


def _stability_record(p: int, c: float, period: float | None, amplitude: float | None,
                      n: int, modes: int | None) -> dict:
    params = WaveParams(p, c)
    if period is None:
        if amplitude is None:
            raise ValidationError("exactly one of amplitude or period is required")
        period = shoot_wave(params, amplitude, n).profile.period
    report = stability.stability_report(params, period, n, modes)
    return _jsonable({
        "p": p, "c": c, "period": report.period,
        "l2_norm_sq": report.l2_norm_sq,
        "d2": report.d2, "d2_fd": report.d2_fd,
        "lambda0": report.lambda0, "beta": report.beta,
        "gamma_min": report.gamma_min, "kappa": report.kappa,
        "verdict": report.verdict,
    })


def cmd_stability(ns) -> int:
    record = _stability_record(ns.p, ns.c, ns.period, ns.amplitude, ns.grid, ns.modes)
    _emit(json.dumps(record, indent=2) + "\n", ns.out)
    return 0


def cmd_simulate(ns) -> int:
    shot = _wave_profile(ns.p, ns.c, ns.amplitude, ns.period, ns.grid)
    prof = shot.profile
    series, ratio = evolution.perturbation_experiment(
        prof, ns.epsilon, dt=ns.dt, t_end=ns.t_end, observe_every=ns.observe_every,
    )
    meta = [
        f"logkg simulate p={prof.p} c={_fmt(prof.c)} period={_fmt(prof.period)}"
        f" dt={_fmt(ns.dt)} t_end={_fmt(ns.t_end)} epsilon={_fmt(ns.epsilon)}",
        f"max_rho_over_epsilon={_fmt(ratio)}" if ns.epsilon > 0 else f"max_rho={_fmt(ratio)}",
    ]
    rows = [
        [d.time, d.energy, d.momentum, d.lyapunov_gap, d.orbital_distance, d.shift, d.phase]
        for d in series
    ]
    _emit(_csv_lines(meta, SIMULATE_COLUMNS, rows), ns.out)
    if ns.plot:
        dicts = [
            {"t": d.time, "energy": d.energy, "momentum": d.momentum, "rho": d.orbital_distance}
            for d in series
        ]
        plotting.render_diagnostics(dicts, _plot_path(ns.out))
    return 0


def cmd_sweep(ns) -> int:
    if ns.steps < 1:
        raise ValidationError("steps must be >= 1")
    cs = [ns.c_min] if ns.steps == 1 else list(np.linspace(ns.c_min, ns.c_max, ns.steps))

    def one(c: float) -> dict:
        try:
            return _stability_record(ns.p, float(c), ns.period, None, ns.grid, ns.modes)
        except LogKGError as exc:
            return {"p": ns.p, "c": float(c), "error": str(exc)}

    with ThreadPoolExecutor(max_workers=ns.workers) as pool:
        records = list(pool.map(one, cs))
    text = "".join(json.dumps(r) + "\n" for r in records)
    _emit(text, ns.out)
    if ns.plot:
        ok = [r for r in records if "error" not in r]
        plotting.render_sweep(ok, _plot_path(ns.out))
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser, wave_args: bool = True) -> None:
    sub.add_argument("--config", help="key=value config file; flags override")
    sub.add_argument("--out", help="output file (default: stdout)")
    sub.add_argument("--plot", action="store_const", const=True, default=None,
                     help="also render a PNG next to --out")
    if wave_args:
        sub.add_argument("--p", type=int, help="nonlinearity power")
        sub.add_argument("--c", type=float, help="wave frequency")
        sub.add_argument("--amplitude", type=float, help="wave amplitude phi(0)")
        sub.add_argument("--period", type=float, help="wave period")
        sub.add_argument("--grid", type=int, help="grid points (default 256)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logkg",
        description="Periodic standing waves of the logarithmic Klein-Gordon "
                    "equation: profiles, spectra, stability verdicts, evolution.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    t = subs.add_parser("table", help="reproduce the Floquet-constant table")
    _add_common(t, wave_args=False)
    t.add_argument("--c0", type=float, help="shared frequency (default 0.5)")
    t.add_argument("--rows", help="rows as 'p:amplitude,p:amplitude,...'")
    t.add_argument("--grid", type=int, help="grid points (default 256)")

    w = subs.add_parser("wave", help="compute one profile")
    _add_common(w)
    w.add_argument("--format", choices=("csv", "json"), help="output format")

    s = subs.add_parser("spectrum", help="Hill and block spectra (JSON)")
    _add_common(s)
    s.add_argument("--modes", type=int, help="eigensolver modes (default grid)")
    s.add_argument("--eigs", type=int, help="eigenvalues to report (default 8)")

    st = subs.add_parser("stability", help="stability report (JSON)")
    _add_common(st)
    st.add_argument("--modes", type=int, help="eigensolver modes (default grid)")

    si = subs.add_parser("simulate", help="evolve perturbed standing-wave data (CSV)")
    _add_common(si)
    si.add_argument("--dt", type=float, help="time step (default 5e-4)")
    si.add_argument("--t-end", dest="t_end", type=float, help="final time (default 10)")
    si.add_argument("--epsilon", type=float, help="perturbation size (default 0)")
    si.add_argument("--observe-every", dest="observe_every", type=int,
                    help="steps between diagnostic samples (default 200)")

    sw = subs.add_parser("sweep", help="stability reports over a c-grid (JSON lines)")
    _add_common(sw, wave_args=False)
    sw.add_argument("--p", type=int, help="nonlinearity power")
    sw.add_argument("--c-min", dest="c_min", type=float, help="sweep start")
    sw.add_argument("--c-max", dest="c_max", type=float, help="sweep end")
    sw.add_argument("--steps", type=int, help="number of sweep points")
    sw.add_argument("--period", type=float, help="fixed period of the family")
    sw.add_argument("--grid", type=int, help="grid points (default 256)")
    sw.add_argument("--modes", type=int, help="eigensolver modes (default grid)")
    sw.add_argument("--workers", type=int, help="worker threads (default 4)")

    return parser


_FLOAT = float
_INT = int


def _resolve(ns: argparse.Namespace) -> argparse.Namespace:
    config = _load_config(ns.config)
    common = {
        "out": ("out", str, None),
        "plot": ("plot", lambda s: s.lower() in ("1", "true", "yes"), False),
    }
    spec: dict[str, tuple]
    if ns.command == "table":
        spec = {
            **common,
            "c0": ("c0", _FLOAT, DEFAULT_TABLE_C0),
            "rows": ("rows", str, None),
            "grid": ("grid", _INT, DEFAULT_GRID),
        }
    elif ns.command == "wave":
        spec = {
            **common,
            "p": ("p", _INT, None), "c": ("c", _FLOAT, None),
            "amplitude": ("amplitude", _FLOAT, None), "period": ("period", _FLOAT, None),
            "grid": ("grid", _INT, DEFAULT_GRID),
            "format": ("format", str, "csv"),
        }
    elif ns.command == "spectrum":
        spec = {
            **common,
            "p": ("p", _INT, None), "c": ("c", _FLOAT, None),
            "amplitude": ("amplitude", _FLOAT, None), "period": ("period", _FLOAT, None),
            "grid": ("grid", _INT, DEFAULT_GRID),
            "modes": ("modes", _INT, None), "eigs": ("eigs", _INT, 8),
        }
    elif ns.command == "stability":
        spec = {
            **common,
            "p": ("p", _INT, None), "c": ("c", _FLOAT, None),
            "amplitude": ("amplitude", _FLOAT, None), "period": ("period", _FLOAT, None),
            "grid": ("grid", _INT, DEFAULT_GRID), "modes": ("modes", _INT, None),
        }
    elif ns.command == "simulate":
        spec = {
            **common,
            "p": ("p", _INT, None), "c": ("c", _FLOAT, None),
            "amplitude": ("amplitude", _FLOAT, None), "period": ("period", _FLOAT, None),
            "grid": ("grid", _INT, DEFAULT_GRID),
            "dt": ("dt", _FLOAT, DEFAULT_DT),
            "t-end": ("t_end", _FLOAT, 10.0),
            "epsilon": ("epsilon", _FLOAT, 0.0),
            "observe-every": ("observe_every", _INT, 200),
        }
    elif ns.command == "sweep":
        spec = {
            **common,
            "p": ("p", _INT, None),
            "c-min": ("c_min", _FLOAT, None), "c-max": ("c_max", _FLOAT, None),
            "steps": ("steps", _INT, None), "period": ("period", _FLOAT, None),
            "grid": ("grid", _INT, DEFAULT_GRID), "modes": ("modes", _INT, None),
            "workers": ("workers", _INT, 4),
        }
    else:  # pragma: no cover
        raise ValidationError(f"unknown command {ns.command}")
    resolved = _merge(ns, config, spec)
    resolved.command = ns.command
    return resolved


def _validate(ns: argparse.Namespace) -> None:
    if ns.plot and ns.out is None:
        raise ValidationError("--plot requires --out")
    required = {
        "wave": ("p", "c"), "spectrum": ("p", "c"), "stability": ("p", "c"),
        "simulate": ("p", "c"), "sweep": ("p", "c_min", "c_max", "steps", "period"),
        "table": (),
    }[ns.command]
    missing = [r for r in required if getattr(ns, r) is None]
    if missing:
        raise ValidationError(f"missing required option(s): {', '.join(missing)}")
    for attr, low in (("grid", 2), ("modes", 2), ("steps", 1), ("workers", 1),
                      ("observe_every", 1), ("eigs", 1)):
        val = getattr(ns, attr, None)
        if val is not None and val < low:
            raise ValidationError(f"{attr} must be >= {low}")
    if getattr(ns, "dt", None) is not None and ns.dt <= 0:
        raise ValidationError("dt must be positive")
    if getattr(ns, "epsilon", None) is not None and ns.epsilon < 0:
        raise ValidationError("epsilon must be >= 0")


_DISPATCH = {
    "table": cmd_table,
    "wave": cmd_wave,
    "spectrum": cmd_spectrum,
    "stability": cmd_stability,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    ns = _resolve(ns)
    _validate(ns)
    return _DISPATCH[ns.command](ns)


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except ValidationError as exc:
        print(f"logkg: validation: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"logkg: numerical: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
