"""Command-line entry point.

    platelab [--dim D] [--grid N] [--length L] [--config FILE] [--out DIR] [--seed S]
             {propagate,solve,norm,stft,experiment} ...

Configuration files hold flat ``key = value`` lines with ``#`` comments;
keys are option names (dashes or underscores).  Flags given on the command
line override file values.  Exit codes: 0 success, 2 inconsistent experiment
verdict, 1 any error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from ._parallel import thread_count
from .experiments import (ExperimentReport, TestFamily, Verdict, format_value, run_chirp_unboundedness,
                          run_dilation_scaling, run_growth_study, run_multiplier_bound,
                          run_product_inequality)
from .gabor import Window, stft, write_abs_csv
from .lattice import Field, Lattice, read_field
from .mixed_norms import MixedNormSpec, Order, mixed_norm, parse_exponent
from .multipliers import Symbol
from .plate_solver import (BlowUpError, Metric, Nonlinearity, SolverConfig, export_trajectory,
                           picard_solve)

log = logging.getLogger("platelab")

EXIT_OK, EXIT_ERROR, EXIT_INCONSISTENT = 0, 1, 2


class UsageError(Exception):
    pass


def _exponent(text) -> float:
    return parse_exponent(text)


def _positive(text) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise ValueError(f"expected a positive number, got {text!r}")
    return v


def _count(text) -> int:
    v = int(text)
    if v < 1:
        raise ValueError(f"expected a positive integer, got {text!r}")
    return v


def _nonneg_int(text) -> int:
    v = int(text)
    if v < 0:
        raise ValueError(f"expected a non-negative integer, got {text!r}")
    return v


def _float_list(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    items = [v for v in str(text).replace(" ", "").split(",") if v]
    if not items:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(float(v) for v in items)


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text
    return parse


# (name, parser, default, help); a default of None means "not set"
GLOBAL_OPTIONS = [
    ("dim", int, None, "spatial dimension d"),
    ("grid", int, None, "points per axis N (power of two)"),
    ("length", _positive, None, "torus side length L"),
    ("out", str, "platelab-out", "output directory"),
    ("seed", _nonneg_int, 0, "random seed for test families"),
]

_DATA = [
    ("u0", str, None, "VPFIELD file with the initial position (default: Gaussian)"),
    ("u1", str, None, "VPFIELD file with the initial velocity (default: zero)"),
    ("amplitude", float, 1.0, "amplitude of the default Gaussian initial position"),
    ("width", _positive, 1.0, "width of the default Gaussian initial position"),
    ("time", _positive, 1.0, "final time T"),
    ("nodes", lambda v: _at_least(v, 2), 2, "number of uniform time nodes M"),
]


def _raise(msg):
    raise ValueError(msg)


def _at_least(text, low: int) -> int:
    v = int(text)
    if v < low:
        raise ValueError(f"expected an integer >= {low}, got {text!r}")
    return v


COMMAND_OPTIONS = {
    "propagate": _DATA,
    "solve": _DATA + [
        ("nonlinearity", _choice("zero", "power", "series"), "zero", "nonlinearity kind"),
        ("lam", complex, 0j, "power-law coefficient lambda (complex allowed, e.g. 1e-3+0j)"),
        ("k", _nonneg_int, 1, "power-law exponent k in lambda |u|^{2k} u"),
        ("coefficients", str, "", "series terms 'j:k:re:im' separated by commas"),
        ("degree", _count, 8, "series truncation degree"),
        ("picard_tol", _positive, 1e-10, "Picard increment tolerance"),
        ("picard_max_iter", _nonneg_int, 50, "Picard iteration cap"),
        ("metric", _choice("sup", "modulation"), "sup", "increment metric"),
        ("metric_p", _exponent, 2.0, "p of the modulation metric"),
        ("metric_s", float, 0.0, "s of the modulation metric"),
    ],
    "norm": [
        ("input", str, None, "VPFIELD file"),
        ("p", _exponent, 2.0, "inner exponent"),
        ("q", _exponent, 2.0, "outer exponent"),
        ("s", float, 0.0, "frequency weight exponent"),
        ("gamma", float, 0.0, "position weight exponent (Wiener amalgam only)"),
        ("order", _choice("modulation", "wiener"), "modulation", "integration order"),
        ("window_width", _positive, 1.0, "Gaussian window width"),
    ],
    "stft": [
        ("input", str, None, "VPFIELD file"),
        ("window_width", _positive, 1.0, "Gaussian window width"),
    ],
}

EXPERIMENT_OPTIONS = {
    "multiplier": [
        ("p", _exponent, 2.0, ""), ("q", _exponent, 2.0, ""), ("s", float, 0.0, ""),
        ("j", lambda v: int(v) if int(v) in (0, 1) else _raise(f"j must be 0 or 1, got {v!r}"), 0,
         "0 for cos|xi|^2, 1 for sin|xi|^2/|xi|^2"),
        ("members", _count, 10, "family size"),
        ("threshold", _positive, 0.10, "allowed relative change under refinement"),
    ],
    "dilation": [
        ("symbol", _choice("tilde_sigma0", "tilde_sigma1", "chirp", "constant", "gaussian"),
         "tilde_sigma0", "subject of the dilation"),
        ("symbol_t", float, 1.0, "time parameter of the chirp symbol"),
        ("p", _exponent, 1.0, ""), ("q", _exponent, math.inf, ""),
        ("s", float, 0.0, ""), ("gamma", float, 0.0, ""),
        ("lambdas", _float_list, tuple(8 * 2 ** (i / 2) for i in range(7)), "dilation factors"),
        ("tolerance", _positive, 0.15, "slope tolerance around the bracket"),
        ("margin", _positive, 4.0, "distance kept from the torus seam"),
    ],
    "growth": [
        ("p", _exponent, 1.0, ""), ("s", float, 0.0, ""),
        ("members", _count, 10, "family size"),
        ("times", _float_list, (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0), "times in (0, 10]"),
        ("threshold", _positive, 50.0, "allowed max/min of the normalized curves"),
    ],
    "product": [
        ("n_factors", _count, 3, ""), ("p", _exponent, 2.0, ""), ("q", _exponent, 1.0, ""),
        ("s", float, 0.0, ""), ("members", _count, 10, "family size"),
        ("tuples", _count, 10, "random factor tuples"),
        ("threshold", _positive, 0.10, "allowed relative change under refinement"),
    ],
    "chirp": [
        ("p", _exponent, math.inf, ""), ("q", _exponent, 1.0, ""),
        ("t_values", _float_list, (0.0, 1.0, 4.0, 16.0, 64.0), "increasing chirp times"),
        ("members", _count, 20, "family size"),
        ("control_p", _exponent, 2.0, ""), ("control_q", _exponent, 2.0, ""),
        ("growth_factor", _positive, 10.0, "required R(t_max)/R(1)"),
        ("control_factor", _positive, 2.0, "allowed max/min of the control arm"),
    ],
}

# lattice used when neither the flags nor an input file fix one
DEFAULT_LATTICE = {
    "propagate": (1, 256, 16.0), "solve": (1, 256, 16.0),
    "multiplier": (1, 256, 16.0), "product": (1, 128, 16.0),
    "growth": (1, 1024, 128.0), "chirp": (1, 512, 128.0),
    "dilation": (1, 2048, 8.0),
}


@dataclass
class RunConfig:
    command: str
    experiment: str | None
    values: dict
    config_file: str | None = None

    @property
    def name(self) -> str:
        return self.experiment or self.command

    def manifest_text(self) -> str:
        lines = [f"platelab {__version__}", f"command = {self.command}"]
        if self.experiment:
            lines.append(f"experiment = {self.experiment}")
        if self.config_file:
            lines.append(f"config = {self.config_file}")
        for key in sorted(self.values):
            v = self.values[key]
            if isinstance(v, tuple):
                v = ",".join(format_value(x) for x in v)
            elif isinstance(v, complex):
                v = f"{format_value(v.real)}{'+' if v.imag >= 0 else '-'}{format_value(abs(v.imag))}j"
            elif v is None:
                v = "none"
            else:
                v = format_value(v)
            lines.append(f"{key} = {v}")
        return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_options(parser, table):
    for name, _, _, help_text in table:
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, default=None,
                            metavar=name.upper(), help=help_text or None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="platelab", description="Time-frequency diagnostics for the vibrating plate equation")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", default=None, help="flat key = value configuration file")
    parser.add_argument("-v", "--verbose", action="store_true")
    _add_options(parser, GLOBAL_OPTIONS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for cmd, table in COMMAND_OPTIONS.items():
        _add_options(sub.add_parser(cmd), table)
    exp = sub.add_parser("experiment")
    exp_sub = exp.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    for name, table in EXPERIMENT_OPTIONS.items():
        _add_options(exp_sub.add_parser(name), table)
    return parser


def read_config_file(path) -> dict[str, tuple[str, int]]:
    """``key -> (raw value, line number)`` from a flat ``key = value`` file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        out[key.replace("-", "_")] = (value, lineno)
    return out


def parse_config(argv=None) -> RunConfig:
    """Parse flags and an optional config file into a validated RunConfig."""
    args = build_parser().parse_args(argv)
    if not hasattr(args, "experiment"):
        args.experiment = None
    table = GLOBAL_OPTIONS + (EXPERIMENT_OPTIONS[args.experiment] if args.command == "experiment"
                              else COMMAND_OPTIONS[args.command])
    specs = {name: (conv, default) for name, conv, default, _ in table}
    file_values = read_config_file(args.config) if args.config else {}
    values = {}
    for key, (raw, lineno) in file_values.items():
        if key not in specs:
            raise UsageError(f"{args.config}:{lineno}: unknown key {key!r} for "
                             f"'{args.experiment or args.command}'")
        try:
            values[key] = specs[key][0](raw)
        except ValueError as exc:
            raise UsageError(f"{args.config}:{lineno}: bad value for {key}: {exc}") from None
    for name, (conv, default) in specs.items():
        raw = getattr(args, name, None)
        if raw is not None:
            try:
                values[name] = conv(raw)
            except ValueError as exc:
                raise UsageError(f"--{name.replace('_', '-')}: {exc}") from None
        elif name not in values:
            values[name] = default
    cfg = RunConfig(args.command, args.experiment, values, args.config)
    _validate(cfg)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return cfg


def _lattice_flags(cfg: RunConfig):
    v = cfg.values
    return v["dim"], v["grid"], v["length"]


def resolve_lattice(cfg: RunConfig, reference: Lattice | None = None) -> Lattice:
    """Lattice from the global flags, falling back on ``reference`` (an input
    file) or the per-command default; flags that contradict an input file
    are rejected."""
    d, n, L = _lattice_flags(cfg)
    if reference is not None:
        for flag, given, actual in (("--dim", d, reference.dim), ("--grid", n, reference.N),
                                    ("--length", L, reference.L)):
            if given is not None and given != actual:
                raise UsageError(f"{flag} {given} contradicts the input file lattice "
                                 f"{reference.describe()}")
        return reference
    dd, dn, dL = DEFAULT_LATTICE.get(cfg.name, (1, 256, 16.0))
    return Lattice(d if d is not None else dd, n if n is not None else dn,
                   L if L is not None else dL)


def _validate(cfg: RunConfig):
    """Check module preconditions before any computation starts."""
    v = cfg.values
    try:
        thread_count()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d, n, L = _lattice_flags(cfg)
    if d is not None or n is not None or L is not None:
        try:
            Lattice(d or 1, n or 2, L or 1.0)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if cfg.command in ("norm", "stft") and not v.get("input"):
        raise UsageError(f"'{cfg.command}' needs --input")
    if cfg.command == "norm" and v["order"] == "modulation" and v["gamma"] != 0:
        raise UsageError("--gamma applies to Wiener amalgam norms only (use --order wiener)")
    if cfg.command == "solve":
        if v["nonlinearity"] == "series" and not v["coefficients"]:
            raise UsageError("series nonlinearity needs --coefficients")
        if v["nonlinearity"] == "series":
            _series(v)
    if cfg.experiment == "growth" and any(not 0 < t <= 10 for t in v["times"]):
        raise UsageError("--times must lie in (0, 10]")
    if cfg.experiment == "chirp":
        t = v["t_values"]
        if len(t) < 2 or any(b <= a for a, b in zip(t, t[1:])) or t[0] < 0:
            raise UsageError("--t-values must be increasing and non-negative")
        if v["control_p"] != v["control_q"]:
            raise UsageError("the chirp control arm needs --control-p = --control-q")
    if cfg.experiment == "dilation":
        lam = v["lambdas"]
        if len(lam) < 2 or any(b <= a for a, b in zip(lam, lam[1:])) or lam[0] < 1:
            raise UsageError("--lambdas must be increasing and >= 1")
    if cfg.experiment == "product":
        from .experiments import product_exponent
        try:
            product_exponent(v["n_factors"], v["q"])
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def _series(v) -> Nonlinearity:
    coeffs = {}
    for item in v["coefficients"].split(","):
        parts = item.strip().split(":")
        if len(parts) != 4:
            raise UsageError(f"--coefficients: expected 'j:k:re:im', got {item!r}")
        j, k, re, im = parts
        coeffs[(int(j), int(k))] = complex(float(re), float(im))
    try:
        return Nonlinearity.entire_series(coeffs, degree=v["degree"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --- dispatch ---------------------------------------------------------------------

def _initial_data(cfg: RunConfig):
    v = cfg.values
    u0 = read_field(v["u0"]) if v["u0"] else None
    u1 = read_field(v["u1"]) if v["u1"] else None
    ref = u0.lattice if u0 is not None else (u1.lattice if u1 is not None else None)
    lat = resolve_lattice(cfg, ref)
    if u0 is None:
        u0 = Field.gaussian(lat, v["width"], amplitude=v["amplitude"])
    if u1 is None:
        u1 = Field.zeros(lat)
    if u0.lattice != u1.lattice:
        raise UsageError(f"u0 lives on {u0.lattice.describe()} but u1 on {u1.lattice.describe()}")
    return u0, u1


def _run_trajectory(cfg: RunConfig, out: Path) -> int:
    v = cfg.values
    u0, u1 = _initial_data(cfg)
    if cfg.command == "propagate":
        F = Nonlinearity.zero()
        solver = SolverConfig(v["time"], v["nodes"])
    else:
        if v["nonlinearity"] == "power":
            F = Nonlinearity.power_law(v["lam"], v["k"])
        elif v["nonlinearity"] == "series":
            F = _series(v)
        else:
            F = Nonlinearity.zero()
        metric = Metric.GRID_SUP if v["metric"] == "sup" else Metric.MODULATION_P1
        solver = SolverConfig(v["time"], v["nodes"], v["picard_tol"], v["picard_max_iter"],
                              metric, v["metric_p"], v["metric_s"])
    traj = picard_solve(u0, u1, F, solver)
    export_trajectory(traj, out)
    print(f"nodes = {solver.time_nodes}")
    print(f"iterations = {traj.iterations_used}")
    print(f"converged = {str(traj.converged).lower()}")
    print(f"final_increment = {traj.final_increment:.17g}")
    if not traj.converged:
        log.warning("Picard iteration did not converge within %d iterations", solver.picard_max_iter)
    return EXIT_OK


def _run_norm(cfg: RunConfig, out: Path) -> int:
    v = cfg.values
    f = read_field(v["input"])
    resolve_lattice(cfg, f.lattice)
    order = Order.POSITION_FIRST if v["order"] == "modulation" else Order.FREQUENCY_FIRST
    spec = MixedNormSpec(v["p"], v["q"], v["s"], v["gamma"], order)
    value = mixed_norm(stft(f, Window.gaussian(f.lattice, v["window_width"])), spec)
    text = f"{spec.label()} = {value:.17g}"
    (out / "norm.txt").write_text(text + "\n")
    print(text)
    return EXIT_OK


def _run_stft(cfg: RunConfig, out: Path) -> int:
    v = cfg.values
    f = read_field(v["input"])
    resolve_lattice(cfg, f.lattice)
    write_abs_csv(stft(f, Window.gaussian(f.lattice, v["window_width"])), out / "stft.csv")
    print(f"wrote {out / 'stft.csv'}")
    return EXIT_OK


def run_experiment(cfg: RunConfig) -> ExperimentReport:
    v = cfg.values
    name = cfg.experiment
    seed = v["seed"]
    if name == "dilation":
        spec = MixedNormSpec.wiener(v["p"], v["q"], v["s"], v["gamma"])
        if v["symbol"] == "gaussian":
            lat = resolve_lattice(cfg)
            return run_dilation_scaling(Field.gaussian(lat), spec, v["lambdas"], v["tolerance"])
        subject = {"tilde_sigma0": Symbol.tilde_sigma0, "tilde_sigma1": Symbol.tilde_sigma1,
                   "constant": Symbol.constant,
                   "chirp": lambda: Symbol.chirp(v["symbol_t"])}[v["symbol"]]()
        d = v["dim"] or 1
        side = v["length"] or 16.0
        return run_dilation_scaling(subject, spec, v["lambdas"], v["tolerance"], dim=d,
                                    side_length=side, margin=v["margin"])
    lat = resolve_lattice(cfg)
    family = TestFamily.random(lat, v["members"] if "members" in v else 10, seed=seed)
    if name == "multiplier":
        return run_multiplier_bound(v["p"], v["q"], v["s"], v["j"], family, v["threshold"])
    if name == "growth":
        return run_growth_study(v["p"], v["s"], family, v["times"], v["threshold"])
    if name == "product":
        return run_product_inequality(v["n_factors"], v["p"], v["q"], v["s"], family,
                                      v["tuples"], v["threshold"])
    if name == "chirp":
        return run_chirp_unboundedness(v["p"], v["q"], v["t_values"], family,
                                       (v["control_p"], v["control_q"]),
                                       v["growth_factor"], v["control_factor"])
    raise UsageError(f"unknown experiment {name!r}")


def main_dispatch(cfg: RunConfig) -> int:
    out = Path(cfg.values["out"])
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.txt").write_text(cfg.manifest_text())
    if cfg.command in ("propagate", "solve"):
        return _run_trajectory(cfg, out)
    if cfg.command == "norm":
        return _run_norm(cfg, out)
    if cfg.command == "stft":
        return _run_stft(cfg, out)
    report = run_experiment(cfg)
    csv_path, verdict_path = report.write(out)
    print(f"{report.name}: {report.verdict.value}: {report.justification}")
    print(f"wrote {csv_path} and {verdict_path}")
    return EXIT_INCONSISTENT if report.verdict is Verdict.INCONSISTENT else EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return main_dispatch(cfg)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, ValueError, FileNotFoundError, MemoryError, BlowUpError, OSError) as exc:
        print(f"platelab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
