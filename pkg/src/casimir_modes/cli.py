"""Command-line front end: ``casimir-modes <command> [options]``.

Every command reads a run configuration (a preset, a config file and
command-line overrides, in that order), validates it and then computes.
Exit codes: 0 success, 2 configuration error, 3 quadrature failure,
4 singular evaluation, 5 ill-conditioned contour.
"""
from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .cavity import CavityConfig
from .errors import CasimirError, InvalidConfigurationError
from .io import write_csv
from .materials import DielectricModel, Kind, Polarization
from .quantities import NM, angular_to_ev, ev_to_angular

PRESETS = ("gold-drude", "gold-plasma", "ideal-limit")
SECTIONS = ("material", "geometry", "thermal", "numerics", "output")


@dataclass
class RunConfig:
    kind: Kind = Kind.DRUDE
    omega_p_ev: float = 9.0
    gamma_ev: float = 0.035
    L_nm: float = 250.0
    d_nm: float = math.inf
    T_K: float = 300.0
    tol: float = 1e-9
    max_terms: int = 0
    format: str = "json"
    path: str = "-"
    sources: list = field(default_factory=list)

    def validate(self):
        if self.kind is Kind.PLASMA:
            self.gamma_ev = 0.0
        for name in ("omega_p_ev", "L_nm", "T_K", "tol"):
            v = getattr(self, name)
            if not (isinstance(v, float) and math.isfinite(v) and v > 0):
                raise InvalidConfigurationError(f"{name} must be a positive number, got {v!r}")
        if self.kind is Kind.DRUDE and not (math.isfinite(self.gamma_ev) and self.gamma_ev > 0):
            raise InvalidConfigurationError("a Drude material needs gamma_ev > 0 (use kind = plasma for 0)")
        if not self.d_nm > 0:
            raise InvalidConfigurationError("d_nm must be positive or inf")
        if self.max_terms < 0:
            raise InvalidConfigurationError("max_terms must be >= 0 (0 means automatic)")
        if self.format not in ("json", "csv"):
            raise InvalidConfigurationError(f"output format must be json or csv, got {self.format!r}")
        return self

    def model(self) -> DielectricModel:
        wp = ev_to_angular(self.omega_p_ev)
        if self.kind is Kind.PLASMA:
            return DielectricModel.plasma(wp)
        return DielectricModel.drude(wp, ev_to_angular(self.gamma_ev))

    def cavity(self) -> CavityConfig:
        d = math.inf if math.isinf(self.d_nm) else self.d_nm * NM
        return CavityConfig(self.L_nm * NM, self.T_K, self.model(), d)


_CASTS = {
    "kind": lambda s: Kind(s.strip().lower()),
    "omega_p_ev": float, "gamma_ev": float, "L_nm": float, "d_nm": float, "T_K": float,
    "tol": float, "max_terms": int, "format": lambda s: s.strip().lower(), "path": str.strip,
}
_KEYS = {
    "material": ("kind", "omega_p_ev", "gamma_ev"),
    "geometry": ("L_nm", "d_nm"),
    "thermal": ("T_K",),
    "numerics": ("tol", "max_terms"),
    "output": ("format", "path"),
}


def _apply_ini(cfg: RunConfig, text: str, source: str):
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise InvalidConfigurationError(f"{source}: {exc}") from exc
    for section in parser.sections():
        if section not in _KEYS:
            raise InvalidConfigurationError(f"{source}: unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in _KEYS[section]:
                raise InvalidConfigurationError(f"{source}: unknown key {key!r} in [{section}]")
            try:
                setattr(cfg, key, _CASTS[key](raw))
            except ValueError as exc:
                raise InvalidConfigurationError(f"{source}: bad value for {key}: {raw!r}") from exc
    cfg.sources.append(source)


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise InvalidConfigurationError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files(__package__).joinpath("presets", f"{name}.ini").read_text(encoding="utf-8")


def load_config(preset=None, path=None, overrides=None) -> RunConfig:
    cfg = RunConfig()
    if preset:
        _apply_ini(cfg, preset_text(preset), f"preset:{preset}")
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidConfigurationError(f"cannot read config file: {exc}") from exc
        _apply_ini(cfg, text, path)
    for key, val in (overrides or {}).items():
        if val is not None:
            setattr(cfg, key, _CASTS[key](val) if isinstance(val, str) else val)
    return cfg.validate()


# --- output ------------------------------------------------------------------

def _emit(cfg: RunConfig, text: str):
    if cfg.path in ("-", ""):
        sys.stdout.write(text)
    else:
        with open(cfg.path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit_table(cfg, columns, rows, json_key="rows"):
    import io

    rows = list(rows)
    if cfg.format == "csv":
        buf = io.StringIO()
        write_csv(buf, columns, rows)
        _emit(cfg, buf.getvalue())
    else:
        records = [dict(zip(columns, r)) for r in rows]
        _emit(cfg, json.dumps({json_key: records}, indent=2, allow_nan=True) + "\n")


def _default_k(cavity: CavityConfig, k):
    return 1.0 / (2.0 * cavity.L) if k is None else float(k)


# --- commands ------------------------------------------------------------------

PRESSURE_COLUMNS = ("value_pa", "formula", "model", "L_nm", "T_K", "omega_p_ev", "gamma_ev", "n_terms", "error_estimate")


def cmd_pressure(cfg: RunConfig, args) -> int:
    from .pressure import Formula, pressure_total

    formula = {"primed": Formula.PRIMED, "corrected": Formula.DOUBLE_PRIMED,
               "real-axis": Formula.REAL_AXIS, "ideal": Formula.IDEAL}[args.formula]
    result = pressure_total(cfg.cavity(), formula, rtol=cfg.tol, max_terms=cfg.max_terms or None)
    rec = result.to_dict()
    if cfg.format == "csv":
        _emit_table(cfg, PRESSURE_COLUMNS, [tuple(rec[c] for c in PRESSURE_COLUMNS)])
    else:
        _emit(cfg, json.dumps(rec, indent=2) + "\n")
    return 0


COUNT_COLUMNS = ("contour", "pol", "k_rad_per_m", "N", "raw_re", "raw_im")


def cmd_count(cfg: RunConfig, args) -> int:
    from .complexplane.foucault import count

    cavity = cfg.cavity()
    if cavity.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("contour counts are defined for the Drude model (gamma > 0)")
    k = _default_k(cavity, args.k)
    w = count(cavity, k, Polarization.parse(args.pol), args.contour, full_output=True)
    row = (args.contour, args.pol, k, w.count, float(w.raw.real), float(w.raw.imag))
    if cfg.format == "csv":
        _emit_table(cfg, COUNT_COLUMNS, [row])
    else:
        _emit(cfg, json.dumps(dict(zip(COUNT_COLUMNS, row)), indent=2) + "\n")
    return 0


def cmd_spectrum(cfg: RunConfig, args) -> int:
    from .spectral import PROFILE_COLUMNS, profile_rows, spectral_density_profile

    cavity = cfg.cavity()
    if cavity.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("spectral profiles need gamma > 0")
    k = _default_k(cavity, args.k)
    if k == 0:
        raise InvalidConfigurationError("k = 0 carries no weight in the transverse integral; choose k > 0")
    if not args.omega_max_over_gamma > 0 or args.points < 2:
        raise InvalidConfigurationError("need omega_max_over_gamma > 0 and at least 2 points")
    pol = Polarization.parse(args.pol)
    x = np.linspace(args.omega_max_over_gamma / args.points, args.omega_max_over_gamma, args.points)
    rows = []
    for j in range(3):
        c = cavity.with_gamma(cavity.model.gamma / 2**j)
        prof = spectral_density_profile(c, k, pol, x * c.model.gamma)
        rows.extend(profile_rows(c, k, pol, prof))
    _emit_table(cfg, PROFILE_COLUMNS, rows, "profile")
    return 0


def _d_grid(args):
    if args.d_grid:
        return [float(v) * NM for v in args.d_grid.split(",")]
    return list(np.geomspace(args.d_min_nm, args.d_max_nm, args.d_points) * NM)


def cmd_trajectory(cfg: RunConfig, args) -> int:
    from .complexplane.foucault import TRAJECTORY_COLUMNS, trajectory_rows, trajectory_vs_width

    cavity = cfg.cavity()
    if cavity.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("eddy-current trajectories need gamma > 0")
    k = _default_k(cavity, args.k)
    censuses = trajectory_vs_width(cavity, k, _d_grid(args), Polarization.parse(args.pol),
                                   with_winding=not args.no_winding)
    _emit_table(cfg, TRAJECTORY_COLUMNS, trajectory_rows(censuses), "trajectory")
    return 0


LIMIT_COLUMNS = ("j", "gamma_ev", "p_drude_pa", "p_plasma_corrected_pa", "p_plasma_primed_pa",
                 "gap_corrected_pa", "gap_primed_pa")


def cmd_limit_study(cfg: RunConfig, args) -> int:
    from .pressure import gamma_limit_study

    cavity = cfg.cavity()
    if cavity.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("the limit study starts from a lossy (Drude) configuration")
    if args.gamma_halvings < 0:
        raise InvalidConfigurationError("--gamma-halvings must be >= 0")
    g0 = cavity.model.gamma
    gammas = [g0 / 2**j for j in range(args.gamma_halvings + 1)]
    table = gamma_limit_study(cavity.with_gamma(0.0), gammas, rtol=cfg.tol)
    rows = [(j, float(angular_to_ev(r.gamma)), r.p_drude, r.p_plasma_corrected, r.p_plasma_primed,
             r.gap_corrected, r.gap_primed) for j, r in enumerate(table)]
    _emit_table(cfg, LIMIT_COLUMNS, rows, "limit_study")
    return 0


COMMANDS = {
    "pressure": cmd_pressure,
    "count": cmd_count,
    "spectrum": cmd_spectrum,
    "trajectory": cmd_trajectory,
    "limit-study": cmd_limit_study,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--preset", choices=PRESETS, help="built-in configuration to start from")
    g.add_argument("--config", metavar="FILE", help="INI file with material/geometry/thermal/numerics/output sections")
    g.add_argument("--model", dest="kind", choices=[k.value for k in Kind])
    g.add_argument("--omega-p-ev", type=float)
    g.add_argument("--gamma-ev", type=float)
    g.add_argument("--L-nm", dest="L_nm", type=float)
    g.add_argument("--d-nm", dest="d_nm", type=float, help="slab width; inf for bulk")
    g.add_argument("--T-K", dest="T_K", type=float)
    g.add_argument("--tol", type=float)
    g.add_argument("--max-terms", type=int)
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--output", dest="path", metavar="PATH", help="output file, - for stdout")

    parser = argparse.ArgumentParser(prog="casimir-modes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pressure", parents=[common], help="Casimir pressure between the mirrors")
    p.add_argument("--formula", choices=("primed", "corrected", "real-axis", "ideal"), default="primed")

    p = sub.add_parser("count", parents=[common], help="zeros minus poles inside a contour")
    p.add_argument("--contour", choices=("c1", "c2", "c3"), required=True)
    p.add_argument("--pol", choices=("te", "tm"), default="te")
    p.add_argument("--k", type=float, help="transverse wavenumber in rad/m (default 1/(2L))")

    p = sub.add_parser("spectrum", parents=[common], help="dimensionless spectral density for gamma, gamma/2, gamma/4")
    p.add_argument("--pol", choices=("te", "tm"), default="te")
    p.add_argument("--k", type=float)
    p.add_argument("--omega-max-over-gamma", type=float, default=10.0)
    p.add_argument("--points", type=int, default=400)

    p = sub.add_parser("trajectory", parents=[common], help="eddy-current poles and zeros against slab width")
    p.add_argument("--pol", choices=("te", "tm"), default="te")
    p.add_argument("--k", type=float)
    p.add_argument("--d-grid", help="comma-separated slab widths in nm (overrides the log grid)")
    p.add_argument("--d-min-nm", type=float, default=1.0)
    p.add_argument("--d-max-nm", type=float, default=1e4)
    p.add_argument("--d-points", type=int, default=13)
    p.add_argument("--no-winding", action="store_true", help="skip the per-width contour check")

    p = sub.add_parser("limit-study", parents=[common], help="Drude pressure as gamma is halved repeatedly")
    p.add_argument("--gamma-halvings", type=int, default=8)
    return parser


_OVERRIDES = ("kind", "omega_p_ev", "gamma_ev", "L_nm", "d_nm", "T_K", "tol", "max_terms", "format", "path")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        preset = args.preset
        if preset is None and args.config is None:
            preset = "gold-drude"
        overrides = {k: getattr(args, k) for k in _OVERRIDES}
        # tables default to CSV, single results to the configured format
        if args.command not in ("pressure", "count") and args.format is None:
            overrides["format"] = "csv"
        cfg = load_config(preset, args.config, overrides)
        return COMMANDS[args.command](cfg, args)
    except CasimirError as exc:
        print(f"casimir-modes: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
