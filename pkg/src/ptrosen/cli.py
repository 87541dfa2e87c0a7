"""Command-line entry point: ``ptrosen <subcommand> [flags]``.

Every subcommand writes plot-ready CSV plus a JSON metadata file into the
output directory (``--out``, else ``$PTROSEN_OUTPUT_DIR``, else ``.``) and
echoes the metadata on stdout.  Exit codes: 0 success, 1 invalid input,
2 numerical failure (partial output is still written where it exists).

``--config FILE`` reads flat ``key = value`` TOML whose keys are the flag
names (dashes or underscores); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._io import fmt, write_csv, write_json
from .errors import GrowthWindowError, NumericalError, PtRosenError, ValidationError
from .grid import make_grid, make_grid_2d
from .linstab import analyze_mode, default_tolerance
from .modes import (
    defocusing_mode_1d,
    focusing_mode_1d,
    linear_spectrum,
    mode_2d,
    mode_residual,
)
from .observables import (
    flow_discrepancy_2d,
    power,
    poynting_1d,
    poynting_1d_closed_form,
    poynting_2d,
)
from .potential import PotentialParams, check_pt_symmetry, rosen_morse_1d, rosen_morse_2d
from .propagate import (
    PropagationConfig,
    growth_rate_fit,
    phase_rotation_check,
    shape_loss_classification,
    split_step,
)
from .sweep import SweepSpec, run_sweep

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

OUTPUT_ENV = "PTROSEN_OUTPUT_DIR"
DEFAULTS = {"L": 20.0, "n": 512, "dz": 1e-3, "tol": "1e-6*(1+|lambda|)"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class _Failure(Exception):
    """Numerical failure after outputs were written; carries the exit code."""


# ----------------------------------------------------------------------------
# argument parsing

def _float_list(text: str) -> list[float]:
    """``"0.1,0.75,1"`` or ``"start:stop:num"`` (inclusive linspace)."""
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return [float(v) for v in np.linspace(float(start), float(stop), int(num))]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse value list {text!r}") from None


def _add_params(p, sigma=True, dim=True):
    p.add_argument("--a", type=float, default=0.75, help="real-part strength (default 0.75)")
    p.add_argument("--b", type=float, default=0.8, help="gain/loss strength (default 0.8)")
    if sigma:
        p.add_argument("--sigma", type=int, choices=(1, -1), default=1, help="nonlinearity sign")
    if dim:
        p.add_argument("--dim", type=int, choices=(1, 2), default=1)
        p.add_argument("--variant", choices=("paper", "derived"), default="paper",
                       help="2D mode triple (default paper)")


def _add_grid(p, L=DEFAULTS["L"], n=DEFAULTS["n"]):
    p.add_argument("--L", type=float, default=L, help=f"half width of the domain (default {L:g})")
    p.add_argument("--n", type=int, default=n, help=f"points per axis (default {n})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptrosen",
                     description="Localized modes in a PT-symmetric Rosen-Morse well: "
                                 "construction, checks, stability and propagation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help=f"output directory (default ${OUTPUT_ENV} or .)")
    common.add_argument("--config", default=None, help="flat TOML file of flag defaults")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    parser.set_defaults(_subparsers=sub.choices)

    p = sub.add_parser("potential", parents=[common], help="sample V and W on a grid")
    _add_params(p, sigma=False, dim=False)
    p.add_argument("--dim", type=int, choices=(1, 2), default=1)
    p.add_argument("--w-scale", type=float, default=4.0, help="2D gain/loss prefactor, 2 or 4")
    _add_grid(p)

    p = sub.add_parser("mode", parents=[common], help="construct a mode, sample it and check its residual")
    _add_params(p)
    _add_grid(p)

    p = sub.add_parser("spectrum-linear", parents=[common], help="bound-state levels of the linear well")
    _add_params(p, sigma=False, dim=False)

    p = sub.add_parser("observables", parents=[common], help="power and transverse power flow of a mode")
    _add_params(p)
    _add_grid(p)

    p = sub.add_parser("stability", parents=[common], help="linear-stability spectrum of a 1D mode")
    _add_params(p, dim=False)
    _add_grid(p)
    p.add_argument("--disc", choices=("fourier", "fd"), default="fourier")
    p.add_argument("--tol", type=float, default=None, help="instability threshold (default 1e-6*(1+|lambda|))")

    p = sub.add_parser("propagate", parents=[common], help="split-step evolution from a mode")
    _add_params(p)
    _add_grid(p)
    p.add_argument("--dz", type=float, default=DEFAULTS["dz"])
    p.add_argument("--z-end", type=float, default=1.0)
    p.add_argument("--stride", type=int, default=10, help="record every N steps")
    p.add_argument("--absorber-width", type=float, default=0.1)
    p.add_argument("--absorber-strength", type=float, default=10.0)
    p.add_argument("--noise", type=float, default=0.0, help="seed noise relative to max|phi|")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-snapshots", action="store_true", help="skip per-record field files")

    p = sub.add_parser("sweep", parents=[common], help="instability map over (a, b)")
    p.add_argument("--a-values", type=_float_list, default=[0.1, 0.75, 1.0],
                   help="comma list or start:stop:num")
    p.add_argument("--b-values", type=_float_list, default=[0.03, 0.4, 0.8])
    p.add_argument("--sigma", type=int, choices=(1, -1), default=1)
    _add_grid(p)
    p.add_argument("--disc", choices=("fourier", "fd"), default="fourier")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    return parser


def _load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    flat = {}
    for key, value in data.items():
        if isinstance(value, dict):
            raise ValidationError(f"config must be flat key = value, got table [{key}]")
        flat[key.replace("-", "_")] = value
    return flat


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        parser.exit(1, "ptrosen: error: a subcommand is required\n")
    if args.config:
        config = _load_config(args.config)
        # Re-parse with config values as defaults so explicit flags still win.
        subparser = args._subparsers[args.command]
        known = {a.dest for a in subparser._actions} - {"help", "config"}
        unknown = sorted(set(config) - known)
        if unknown:
            raise ValidationError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
        for key in ("a_values", "b_values"):
            if key in config and not isinstance(config[key], list):
                try:
                    config[key] = _float_list(config[key])
                except argparse.ArgumentTypeError as exc:
                    raise ValidationError(str(exc)) from None
        subparser.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


# ----------------------------------------------------------------------------
# subcommands

def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUTPUT_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _grid(args):
    return make_grid(args.L, args.n) if getattr(args, "dim", 1) == 1 else make_grid_2d(args.L, args.n)


def _mode(args):
    p = PotentialParams(args.a, args.b)
    if args.dim == 2:
        if args.sigma != 1:
            raise ValidationError("2D modes exist for sigma = +1 only")
        return mode_2d(p, args.variant)
    return focusing_mode_1d(p) if args.sigma == 1 else defocusing_mode_1d(p)


def _coords_rows(g, *columns):
    if g.ndim == 1:
        return [[x, *vals] for x, *vals in zip(g.points, *columns)]
    X, Y = g.mesh()
    flat = [np.ravel(c) for c in columns]
    return [[x, y, *vals] for x, y, *vals in zip(X.ravel(), Y.ravel(), *flat)]


def _coord_header(g):
    return ["x"] if g.ndim == 1 else ["x", "y"]


def _emit(out: Path, name: str, meta: dict) -> dict:
    write_json(out / name, meta)
    print(json.dumps(json.loads((out / name).read_text()), indent=2, sort_keys=True))
    return meta


def cmd_potential(args):
    out = _out_dir(args)
    p = PotentialParams(args.a, args.b)
    if args.dim == 1:
        g = make_grid(args.L, args.n)
        V, W = rosen_morse_1d(p, g.points)
        violation = check_pt_symmetry(lambda x: rosen_morse_1d(p, x), g)
    else:
        g = make_grid_2d(args.L, args.n)
        V, W = rosen_morse_2d(p, *g.mesh(), args.w_scale)
        violation = check_pt_symmetry(lambda x, y: rosen_morse_2d(p, x, y, args.w_scale), g)
    write_csv(out / "potential.csv", _coord_header(g) + ["V", "W"], _coords_rows(g, V, W))
    meta = {"command": "potential", "a": p.a, "b": p.b, "dim": args.dim, "L": args.L, "n": args.n,
            "w_scale": args.w_scale if args.dim == 2 else None, "pt_violation": violation,
            "defaults": DEFAULTS, "files": ["potential.csv"]}
    _emit(out, "potential.json", meta)


def cmd_mode(args):
    out = _out_dir(args)
    m = _mode(args)
    g = _grid(args)
    field = m.evaluate(g)
    residual = mode_residual(m, g)
    write_csv(out / "mode.csv", _coord_header(g) + ["re", "im", "abs2"],
              _coords_rows(g, field.real, field.imag, np.abs(field) ** 2))
    meta = {"command": "mode", **m.to_dict(), "L": args.L, "n": args.n, "residual": residual,
            "power": power(field, g), "defaults": DEFAULTS, "files": ["mode.csv"]}
    _emit(out, "mode.json", meta)


def cmd_spectrum_linear(args):
    out = _out_dir(args)
    spec = linear_spectrum(PotentialParams(args.a, args.b))
    write_csv(out / "linear_spectrum.csv", ["n", "lambda"], spec.to_rows())
    meta = {"command": "spectrum-linear", "a": args.a, "b": args.b, "levels": list(spec.levels),
            "all_positive": spec.all_positive(), "files": ["linear_spectrum.csv"]}
    _emit(out, "linear_spectrum.json", meta)


def cmd_observables(args):
    out = _out_dir(args)
    m = _mode(args)
    g = _grid(args)
    field = m.evaluate(g)
    dens = np.abs(field) ** 2
    meta = {"command": "observables", **m.to_dict(), "L": args.L, "n": args.n,
            "power": power(field, g), "power_closed_form": 2.0 * m.params.amplitude_squared
            if m.dimension == 1 else None, "defaults": DEFAULTS, "files": ["observables.csv"]}
    if g.ndim == 1:
        S = poynting_1d(field, g)
        write_csv(out / "observables.csv", ["x", "S", "|phi|^2"], _coords_rows(g, S, dens))
        c = g.center_index
        meta["S_origin"] = float(S[c])
        meta["S_max_dev_closed_form"] = float(np.abs(S - poynting_1d_closed_form(m, g)).max())
    else:
        S = poynting_2d(field, g)
        write_csv(out / "observables.csv", ["x", "y", "S_x", "S_y", "|phi|^2"],
                  _coords_rows(g, S[..., 0], S[..., 1], dens))
        meta["S_origin"] = [float(v) for v in S[g.center_index]]
        meta["flow_discrepancy"] = flow_discrepancy_2d(field, m, g)
    _emit(out, "observables.json", meta)


def cmd_stability(args):
    out = _out_dir(args)
    args.dim = 1
    m = _mode(args)
    g = make_grid(args.L, args.n)
    spec = analyze_mode(m, g, args.disc, args.tol)
    write_csv(out / "spectrum.csv", ["re_eta", "im_eta"], [[e.real, e.imag] for e in spec.etas])
    meta = {"command": "stability", **spec.to_metadata(), "literal": m.literal,
            "negation_defect": spec.negation_defect(), "conjugation_defect": spec.conjugation_defect(),
            "default_tol": default_tolerance(m.lam), "defaults": DEFAULTS, "files": ["spectrum.csv"]}
    _emit(out, "stability.json", meta)


def cmd_propagate(args):
    out = _out_dir(args)
    m = _mode(args)
    g = _grid(args)
    cfg = PropagationConfig(dz=args.dz, z_end=args.z_end, record_stride=args.stride,
                            absorber_width=args.absorber_width,
                            absorber_strength=args.absorber_strength,
                            noise_amplitude=args.noise, seed=args.seed,
                            keep_snapshots=True)
    phi = m.evaluate(g)
    traj = split_step(phi, m.params, m.sigma, g, cfg, m.w_scale)
    write_csv(out / "trajectory.csv", ["z", "power", "peak_intensity", "boundary_mass"],
              zip(traj.z, traj.power, traj.peak_intensity, traj.boundary_mass))
    files = ["trajectory.csv"]
    if not args.no_snapshots:
        snap_dir = out / "snapshots"
        for i, (z, psi) in enumerate(zip(traj.z, traj.snapshots)):
            name = f"snapshots/snap_{i:05d}.csv"
            write_csv(out / name, _coord_header(g) + ["re", "im"], _coords_rows(g, psi.real, psi.imag))
            files.append(name)
        write_csv(snap_dir / "index.csv", ["index", "z", "file"],
                  [[i, z, f"snap_{i:05d}.csv"] for i, z in enumerate(traj.z)])
        files.append("snapshots/index.csv")

    diag = {"classification": shape_loss_classification(traj, phi, m.lam)}
    try:
        diag["growth_rate"] = growth_rate_fit(traj, phi, m.lam)
    except (GrowthWindowError, ValidationError) as exc:
        diag["growth_rate"] = None
        diag["growth_rate_note"] = str(exc)
    try:
        diag["phase_rotation_defect"] = phase_rotation_check(traj, m.lam)
    except ValidationError as exc:
        diag["phase_rotation_defect"] = None
        diag["phase_rotation_note"] = str(exc)
    meta = {"command": "propagate", **m.to_dict(), "L": args.L, "n": args.n, **traj.metadata(),
            "noise_seed": cfg.seed, **diag, "defaults": DEFAULTS, "files": files}
    _emit(out, "propagate.json", meta)
    if traj.blew_up:
        raise _Failure(f"blow-up detected at z = {fmt(traj.blowup_z)}")


def cmd_sweep(args):
    out = _out_dir(args)
    spec = SweepSpec(args.a_values, args.b_values, args.sigma, args.L, args.n, args.disc,
                     args.tol, str(out), args.workers)
    manifest = run_sweep(spec)
    summary = {"command": "sweep", "points": len(manifest.records), "errors": manifest.n_errors,
               "unstable": sum(r["classification"] == "unstable" for r in manifest.records),
               "defaults": DEFAULTS, "files": ["results.csv", "manifest.json"]}
    print(json.dumps(summary, indent=2, sort_keys=True))
    if manifest.n_errors:
        raise _Failure(f"{manifest.n_errors} sweep point(s) failed; see manifest.json")


COMMANDS = {
    "potential": cmd_potential,
    "mode": cmd_mode,
    "spectrum-linear": cmd_spectrum_linear,
    "observables": cmd_observables,
    "stability": cmd_stability,
    "propagate": cmd_propagate,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ValidationError as exc:
        print(f"ptrosen: invalid input: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, _Failure) as exc:
        print(f"ptrosen: numerical failure: {exc}", file=sys.stderr)
        return 2
    except PtRosenError as exc:
        print(f"ptrosen: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
