"""Command-line front end.

    driven-jcm inversion --state even --alpha 1 --beta 2 --eps-a 0.9487 --eps-b 0.3162 \\
        --t-grid 0:200:2001 --out out/inv
    driven-jcm wigner --state odd --alpha 1 --beta 2 --t 100 --ell 50 --out out/w
    driven-jcm preset fig6a --out out/
    driven-jcm verify

Times are in units of 1/kappa_eff.  A YAML file given with ``--config``
supplies defaults using the flag names (dashes or underscores); flags given on
the command line win.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import export
from .inversion import inversion_series
from .marginals import SQRT_2PI, marginal_coherent, marginal_from_surface
from .model import DEFAULT_N_CAP, ModelParams
from .presets import PRESETS, Preset, get_preset
from .states import Coherent, DriveState, cavity_state
from .wigner import PhaseGrid, characteristic, wigner_surface

DEFAULTS = {
    "state": "coherent", "alpha": "1", "beta": "2", "eps_a": None, "eps_b": None,
    "kappa_a": None, "kappa_b": None, "delta_over_keff": None, "delta": None, "nbar": 0.0,
    "t": None, "t_grid": None, "grid": "-10:4:141,-7:7:141", "ell": None, "method": "general",
    "out": None, "format": "csv", "normalized_marginals": False, "axis": "q",
    "points": "-6:6:241", "n_cap": DEFAULT_N_CAP, "plot": True,
}


class ConfigError(ValueError):
    pass


def parse_complex(text) -> complex:
    """Parse ``"re+imi"`` style numbers (``"1"``, ``"-0.5i"``, ``"1-2i"``)."""
    if isinstance(text, (int, float, complex)):
        z = complex(text)
    else:
        s = str(text).strip().replace(" ", "")
        if s.endswith("i"):
            s = s[:-1] + "j"
            if s in ("j", "+j", "-j"):
                s = s.replace("j", "1j")
        try:
            z = complex(s)
        except ValueError:
            raise ConfigError(f"cannot parse complex number {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigError(f"complex number must be finite, got {text!r}")
    return z


def parse_range(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = str(text).split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise ConfigError(f"expected start:stop:n, got {text!r}") from None


def parse_grid(text: str) -> PhaseGrid:
    try:
        qpart, ppart = str(text).split(",")
    except ValueError:
        raise ConfigError(f"expected qmin:qmax:nq,pmin:pmax:np, got {text!r}") from None
    q0, q1, nq = parse_range(qpart)
    p0, p1, npts = parse_range(ppart)
    try:
        return PhaseGrid(q0, q1, p0, p1, nq, npts)
    except ValueError as e:
        raise ConfigError(str(e)) from None


@dataclass
class RunConfig:
    command: str
    cavity: object
    drive: DriveState
    params: ModelParams
    times: np.ndarray | None  # in units of 1/kappa_eff
    grid: PhaseGrid
    ell: int | None
    method: str
    out: str | None
    fmt: str
    normalized_marginals: bool
    axis: str
    points: np.ndarray
    plot: bool = True
    record: dict = field(default_factory=dict)

    def physical_times(self) -> np.ndarray:
        return self.times / self.params.kappa_eff


def _params(o: dict) -> ModelParams:
    eps = o["eps_a"] is not None or o["eps_b"] is not None
    kap = o["kappa_a"] is not None or o["kappa_b"] is not None
    if eps and kap:
        raise ConfigError("give either --eps-a/--eps-b or --kappa-a/--kappa-b, not both")
    if o["delta"] is not None and o["delta_over_keff"] is not None:
        raise ConfigError("give either --delta or --delta-over-keff, not both")
    n_cap = int(o["n_cap"])
    try:
        if kap:
            ka = float(o["kappa_a"] or 0.0)
            kb = float(o["kappa_b"] or 0.0)
            keff = math.hypot(ka, kb)
            delta = float(o["delta"]) if o["delta"] is not None else float(o["delta_over_keff"] or 0.0) * keff
            return ModelParams(ka, kb, delta, n_cap=n_cap)
        ea = float(o["eps_a"]) if o["eps_a"] is not None else None
        eb = float(o["eps_b"]) if o["eps_b"] is not None else None
        if ea is None and eb is None:
            ea = eb = 1.0
        elif ea is None:
            ea = math.sqrt(max(0.0, 1.0 - eb * eb))
        elif eb is None:
            eb = math.sqrt(max(0.0, 1.0 - ea * ea))
        p = ModelParams.from_eps(ea, eb, 0.0, n_cap=n_cap)
        delta = float(o["delta"]) if o["delta"] is not None else float(o["delta_over_keff"] or 0.0)
        return ModelParams(p.kappa_a, p.kappa_b, delta, n_cap=n_cap)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _load_yaml(path: str) -> dict:
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a mapping")
    flat = {}
    for k, v in data.items():
        if isinstance(v, dict):  # sections such as params:, state:, output:
            for k2, v2 in v.items():
                flat[k2.replace("-", "_")] = v2
        else:
            flat[k.replace("-", "_")] = v
    unknown = set(flat) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return flat


def build_config(ns: argparse.Namespace) -> RunConfig:
    o = dict(DEFAULTS)
    if getattr(ns, "config", None):
        o.update(_load_yaml(ns.config))
    for k in DEFAULTS:
        v = getattr(ns, k, None)
        if v is not None:
            o[k] = v
    params = _params(o)
    alpha = parse_complex(o["alpha"])
    try:
        cavity = cavity_state(str(o["state"]), alpha, float(o["nbar"]))
        drive = DriveState(parse_complex(o["beta"]))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if o["t_grid"] is not None:
        t0, t1, n = parse_range(o["t_grid"])
        if n < 1 or t0 < 0 or t1 < t0:
            raise ConfigError("t-grid needs 0 <= start <= stop and n >= 1")
        times = np.linspace(t0, t1, n)
    elif o["t"] is not None:
        if float(o["t"]) < 0:
            raise ConfigError("t must be >= 0")
        times = np.array([float(o["t"])])
    else:
        times = None
    p0, p1, npts = parse_range(o["points"])
    if o["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    return RunConfig(
        command=ns.command, cavity=cavity, drive=drive, params=params, times=times,
        grid=parse_grid(o["grid"]), ell=None if o["ell"] is None else int(o["ell"]),
        method=str(o["method"]), out=None if o["out"] is None else str(o["out"]),
        fmt=o["format"], normalized_marginals=bool(o["normalized_marginals"]),
        axis=str(o["axis"]), points=np.linspace(p0, p1, npts), plot=bool(o["plot"]),
        record={k: o[k] for k in sorted(o)},
    )


def _need_single_time(cfg: RunConfig) -> float:
    if cfg.times is None or len(cfg.times) != 1:
        raise ConfigError(f"{cfg.command} needs a single --t")
    return float(cfg.physical_times()[0])


def _emit(cfg: RunConfig, stem: str, header, columns, meta, plot=None) -> list[Path]:
    if cfg.out is None:
        sys.stdout.write(export.csv_text(header, columns))
        return []
    # a directory (existing, or spelled with a trailing slash) gets a default file stem
    is_dir = cfg.out.endswith(("/", os.sep)) or Path(cfg.out).is_dir()
    base = Path(cfg.out) / stem if is_dir else Path(cfg.out)
    files = export.write_table(base, header, columns, meta, cfg.fmt)
    if plot and cfg.plot and cfg.fmt == "csv":
        files.append(export.write_plot_script(base, **plot))
    return files


def cmd_inversion(cfg: RunConfig) -> list[Path]:
    if cfg.times is None:
        raise ConfigError("inversion needs --t or --t-grid")
    ts = inversion_series(cfg.cavity, cfg.drive, cfg.params, cfg.physical_times())
    meta = {**ts.meta, "command": "inversion", "run": cfg.record}
    return _emit(cfg, "inversion", ["kappa_eff_t", "inversion"], [cfg.times, ts.values], meta,
                 {"kind": "series", "title": "atomic inversion", "xlabel": "kappa_eff t", "ylabel": "I(t)"})


def cmd_wigner(cfg: RunConfig) -> list[Path]:
    t = _need_single_time(cfg)
    surf = wigner_surface(cfg.cavity, cfg.drive, cfg.params, t, cfg.grid, cfg.ell, cfg.method)
    Q, P = np.meshgrid(cfg.grid.q, cfg.grid.p, indexing="ij")
    meta = {**surf.meta, "grid": cfg.grid.as_dict(), "max_imag_residue": surf.max_imag_residue,
            "command": "wigner", "run": cfg.record}
    return _emit(cfg, "wigner", ["q", "p", "W"], [Q.ravel(), P.ravel(), surf.values.ravel()], meta,
                 {"kind": "surface", "title": "Wigner function", "n_q": cfg.grid.n_q, "n_p": cfg.grid.n_p})


def cmd_marginal(cfg: RunConfig) -> list[Path]:
    t = _need_single_time(cfg)
    if isinstance(cfg.cavity, Coherent):
        curve = marginal_coherent(cfg.cavity.alpha, cfg.drive.beta, cfg.params, cfg.axis,
                                  cfg.points, t, cfg.ell)
    else:
        surf = wigner_surface(cfg.cavity, cfg.drive, cfg.params, t, cfg.grid, cfg.ell, cfg.method)
        curve = marginal_from_surface(surf, cfg.axis)
    if cfg.normalized_marginals:
        curve = curve.normalized()
    meta = {**curve.meta, "axis": cfg.axis, "command": "marginal", "run": cfg.record,
            "integral": curve.integral, "sqrt_2pi": SQRT_2PI}
    return _emit(cfg, "marginal", ["axis_value", "density"], [curve.points, curve.values], meta,
                 {"kind": "series", "title": f"{cfg.axis}-marginal", "xlabel": cfg.axis, "ylabel": "density"})


def cmd_chi(cfg: RunConfig) -> list[Path]:
    """Characteristic function on a grid of xi; the --grid axes are Re xi and Im xi."""
    t = _need_single_time(cfg)
    g = cfg.grid
    X, Y = np.meshgrid(g.q, g.p, indexing="ij")
    xi = (X + 1j * Y).ravel()
    chi = np.asarray(characteristic(cfg.cavity, cfg.drive, cfg.params, xi, t))
    meta = {**cfg.record, "command": "chi", "params": cfg.params.as_dict(), "t": t}
    return _emit(cfg, "chi", ["xi_re", "xi_im", "chi_re", "chi_im"],
                 [xi.real, xi.imag, chi.real, chi.imag], meta)


def run_preset(preset: Preset, out: Path | None, fmt: str = "csv", plot: bool = True) -> list[Path]:
    params = preset.params()
    record = preset.record()
    if preset.command == "inversion":
        t0, t1, n = preset.t_grid
        kt = np.linspace(t0, t1, n)
        ts = inversion_series(preset.cavity(), preset.drive(), params, kt / params.kappa_eff)
        header, cols = ["kappa_eff_t", "inversion"], [kt, ts.values]
        meta = {**ts.meta, **record}
        plot_kw = {"kind": "series", "title": preset.name, "xlabel": "kappa_eff t", "ylabel": "I(t)"}
    else:
        surf = wigner_surface(preset.cavity(), preset.drive(), params, preset.t / params.kappa_eff,
                              preset.grid, preset.ell, method="equal")
        Q, P = np.meshgrid(preset.grid.q, preset.grid.p, indexing="ij")
        header, cols = ["q", "p", "W"], [Q.ravel(), P.ravel(), surf.values.ravel()]
        meta = {**surf.meta, **record, "max_imag_residue": surf.max_imag_residue}
        plot_kw = {"kind": "surface", "title": preset.name, "n_q": preset.grid.n_q, "n_p": preset.grid.n_p}
    if out is None:
        sys.stdout.write(export.csv_text(header, cols))
        return []
    base = Path(out) / preset.name
    files = export.write_table(base, header, cols, meta, fmt)
    if plot and fmt == "csv":
        files.append(export.write_plot_script(base, **plot_kw))
    return files


def cmd_verify(ns: argparse.Namespace) -> int:
    from .verify import run_checks

    report = run_checks(quick=not ns.full)
    text = export.json_text(report)
    if ns.out:
        Path(ns.out).parent.mkdir(parents=True, exist_ok=True)
        Path(ns.out).write_text(text)
    sys.stdout.write(text)
    return 0 if report["passed"] else 1


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML file with defaults for any flag")
    p.add_argument("--state", choices=["coherent", "even", "odd", "thermal"])
    p.add_argument("--alpha", help='cavity amplitude, e.g. "1" or "0.5+0.5i"')
    p.add_argument("--nbar", type=float, help="thermal mean photon number")
    p.add_argument("--beta", help='drive amplitude, e.g. "2" or "2-1i"')
    p.add_argument("--delta-over-keff", type=float, dest="delta_over_keff")
    p.add_argument("--delta", type=float, help="absolute detuning")
    p.add_argument("--eps-a", type=float, dest="eps_a")
    p.add_argument("--eps-b", type=float, dest="eps_b")
    p.add_argument("--kappa-a", type=float, dest="kappa_a")
    p.add_argument("--kappa-b", type=float, dest="kappa_b")
    p.add_argument("--t", type=float, help="time in units of 1/kappa_eff")
    p.add_argument("--t-grid", dest="t_grid", help="start:stop:n in units of 1/kappa_eff")
    p.add_argument("--grid", help="qmin:qmax:nq,pmin:pmax:np")
    p.add_argument("--ell", type=int, help="fixed Rabi truncation (default: adaptive)")
    p.add_argument("--method", choices=["general", "equal"])
    p.add_argument("--n-cap", type=int, dest="n_cap")
    p.add_argument("--out", help="output path stem or directory")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--normalized-marginals", action="store_const", const=True,
                   dest="normalized_marginals")
    p.add_argument("--axis", choices=["q", "p"])
    p.add_argument("--points", help="start:stop:n for coherent marginals")
    p.add_argument("--no-plot", action="store_const", const=False, dest="plot")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="driven-jcm", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("inversion", "atomic inversion time series"),
                        ("wigner", "Wigner function on a phase-space grid"),
                        ("marginal", "quadrature marginal"),
                        ("chi", "characteristic function on a grid of xi")):
        _add_common(sub.add_parser(name, help=help_))
    v = sub.add_parser("verify", help="series-vs-oracle checks; nonzero exit on failure")
    v.add_argument("--full", action="store_true", help="run the longer checks too")
    v.add_argument("--out", help="write the JSON report here as well")
    pr = sub.add_parser("preset", help="regenerate one named reference plot's data")
    pr.add_argument("name", choices=sorted(PRESETS) + ["all"])
    pr.add_argument("--out", default=".", help="output directory")
    pr.add_argument("--format", choices=["csv", "json"], default="csv")
    pr.add_argument("--no-plot", action="store_true")
    return parser


COMMANDS = {"inversion": cmd_inversion, "wigner": cmd_wigner, "marginal": cmd_marginal, "chi": cmd_chi}


# values of these flags routinely start with "-" (e.g. "--grid -10:4:141,-7:7:141"),
# which argparse would otherwise read as an option
_DASH_VALUE_FLAGS = {"--grid", "--t-grid", "--points", "--alpha", "--beta"}


def _attach_values(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _DASH_VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    ns = parser.parse_args(_attach_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        if ns.command == "verify":
            return cmd_verify(ns)
        if ns.command == "preset":
            names = sorted(PRESETS) if ns.name == "all" else [ns.name]
            for name in names:
                for f in run_preset(get_preset(name), Path(ns.out), ns.format, not ns.no_plot):
                    print(f)
            return 0
        cfg = build_config(ns)
        for f in COMMANDS[ns.command](cfg):
            print(f)
        return 0
    except (ValueError, ArithmeticError, RuntimeError, OSError, yaml.YAMLError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
