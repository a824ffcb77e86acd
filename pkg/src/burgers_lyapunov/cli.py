"""Command-line front end.

Every subcommand takes the problem as ``--nu --l --A --B`` (or from a JSON
file given with ``--config``).  ``classify`` prints one JSON object; the
other commands write CSV, to ``--output`` if given, else to
``$BURGERS_LYAPUNOV_OUTDIR/<command>.csv`` if that variable is set, else to
standard output.  ``evolve`` additionally prints its fit report as JSON.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .exceptions import NumericalError
from .lyapunov import lyapunov_exponents, modal_decay_curve, modal_solution
from .model import ProblemSpec, classify, compute_h
from .simulate import decay_experiment
from .spectrum import min_abs_on_interval, spectrum
from .stationary import eval_stationary, solve_stationary

OUTDIR_ENV = "BURGERS_LYAPUNOV_OUTDIR"

EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

logger = logging.getLogger("burgers_lyapunov")


def fmt(value: Any) -> str:
    """Locale-free number formatting with 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return "null"
    return format(value, ".17g")


def to_json(obj: dict[str, Any]) -> str:
    parts = []
    for key, value in obj.items():
        if value is None:
            text = "null"
        elif isinstance(value, str):
            text = json.dumps(value)
        elif isinstance(value, (list, tuple)):
            text = "[" + ", ".join(fmt(v) for v in value) + "]"
        else:
            text = fmt(value)
        parts.append(f"{json.dumps(key)}: {text}")
    return "{" + ", ".join(parts) + "}\n"


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    return buf.getvalue()


@dataclass
class RunConfig:
    nu: float
    l: float
    A: float
    B: float
    options: dict[str, Any] = field(default_factory=dict)

    @property
    def spec(self) -> ProblemSpec:
        return ProblemSpec(self.nu, self.l, self.A, self.B)


_POSITIVE_INT = ("count", "points", "samples", "cells", "mode")
_POSITIVE_FLOAT = ("t_end", "amplitude")


def load_config(path: str) -> dict[str, Any]:
    """Read a flat JSON object of option values; unknown keys are rejected."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    allowed = {"nu", "l", "A", "B", "output", "perturb", *_POSITIVE_INT, *_POSITIVE_FLOAT}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValueError(f"{path}: unknown config keys {unknown}")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k not in ("command", "config", "func", "verbose")}
    if args.config:
        for key, value in load_config(args.config).items():
            if values.get(key) is None:
                values[key] = value
    missing = [k for k in ("nu", "l", "A", "B") if values.get(k) is None]
    if missing:
        raise ValueError(f"missing problem parameters: {', '.join('--' + m for m in missing)}")
    for key in _POSITIVE_INT:
        v = values.get(key)
        if v is None:
            continue
        if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v or v < 1:
            raise ValueError(f"--{key.replace('_', '-')} must be a positive integer, got {v!r}")
        values[key] = int(v)
    for key in _POSITIVE_FLOAT:
        v = values.get(key)
        if v is not None and not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise ValueError(f"--{key.replace('_', '-')} must be positive, got {v!r}")
    core = {k: float(values.pop(k)) for k in ("nu", "l", "A", "B")}
    return RunConfig(**core, options=values)


def emit(text: str, command: str, output: Optional[str]) -> None:
    if output is None and os.environ.get(OUTDIR_ENV):
        output = os.path.join(os.environ[OUTDIR_ENV], f"{command}.csv")
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_classify(cfg: RunConfig) -> None:
    spec = cfg.spec
    profile = solve_stationary(spec)
    report = {
        "case": classify(spec).value,
        "H": compute_h(spec).value,
        "C0": profile.c0,
        "k0": profile.k0,
        "x0": profile.x0,
        "lambda0": spectrum(spec, 2)[0].eigenvalue,
    }
    sys.stdout.write(to_json(report))


def cmd_stationary(cfg: RunConfig) -> None:
    spec = cfg.spec
    profile = solve_stationary(spec)
    x = np.linspace(0.0, spec.l, cfg.options.get("points") or 101)
    u = eval_stationary(profile, spec, x)
    emit(to_csv(("x", "u"), zip(x, u)), "stationary", cfg.options.get("output"))


def cmd_spectrum(cfg: RunConfig) -> None:
    count = cfg.options.get("count") or 5
    entries = spectrum(cfg.spec, max(count, 2))
    rows = [(e.index, e.branch.value, e.xi, e.eigenvalue, e.zero_count) for e in entries[:count]]
    emit(to_csv(("i", "branch", "xi", "lambda", "zero_count"), rows), "spectrum", cfg.options.get("output"))


def cmd_lyapunov(cfg: RunConfig) -> None:
    ly = lyapunov_exponents(cfg.spec, cfg.options.get("count") or 5)
    rows = [(i, mu) for i, mu in enumerate(ly.mu, start=1)]
    emit(to_csv(("i", "mu"), rows), "lyapunov", cfg.options.get("output"))


def cmd_modal(cfg: RunConfig) -> None:
    spec = cfg.spec
    m = modal_solution(spec, cfg.options.get("mode") or 1)
    amplitude = cfg.options.get("amplitude")
    if amplitude is not None:
        m = replace(m, alpha=amplitude * min_abs_on_interval(m.ground, spec) * m.c_ground)
    t_end = cfg.options.get("t_end") or math.log(1e8) / abs(m.mu)
    times = np.linspace(0.0, t_end, cfg.options.get("samples") or 201)
    emit(to_csv(("t", "D"), modal_decay_curve(m, times)), "modal", cfg.options.get("output"))


def _parse_perturb(text: str):
    if text == "default":
        return "default"
    if text.startswith("mode:"):
        try:
            n = int(text[5:])
        except ValueError:
            n = 0
        if n >= 1:
            return n
    raise ValueError(f"--perturb must be 'default' or 'mode:N' with N >= 1, got {text!r}")


def cmd_evolve(cfg: RunConfig) -> None:
    spec = cfg.spec
    report = decay_experiment(
        spec,
        cfg.options.get("cells") or 800,
        initial=_parse_perturb(cfg.options.get("perturb") or "default"),
        amplitude=cfg.options.get("amplitude"),
        t_end=cfg.options.get("t_end"),
    )
    rows = [(t, d, de) for (t, d), (_, de) in zip(report.samples, report.exact_samples)]
    output = cfg.options.get("output")
    if output is not None or os.environ.get(OUTDIR_ENV):
        emit(to_csv(("t", "D", "D_exact"), rows), "evolve", output)
    summary = {
        "n_cells": report.n_cells,
        "mode": report.mode,
        "fitted_rate": report.fitted_rate,
        "predicted_mu": report.predicted_mu,
        "relative_error": report.relative_error,
        "fit_window": list(report.fit_window),
        "n_fit_samples": report.n_fit_samples,
        "reliable": report.reliable,
        "stationary_gap": report.stationary_gap,
        "peak_abs": report.peak_abs,
        "max_principle_ok": report.max_principle_ok,
    }
    sys.stdout.write(to_json(summary))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burgers-lyapunov",
        description="Stationary solutions, Robin spectra and Lyapunov exponents for "
        "viscous Burgers with Dirichlet data.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--config", help="JSON file with option values (flags override)")
        p.add_argument("--nu", type=float, help="viscosity (> 0)")
        p.add_argument("--l", type=float, help="interval length (> 0)")
        p.add_argument("--A", type=float, help="u(0)")
        p.add_argument("--B", type=float, help="u(l)")
        if name != "classify":
            p.add_argument("--output", help="CSV output path")
        return p

    command("classify", cmd_classify, "print the stationary case and its constants as JSON")
    command("stationary", cmd_stationary, "sample the stationary profile").add_argument(
        "--points", type=int, help="number of sample points (default 101)"
    )
    command("spectrum", cmd_spectrum, "lowest eigenvalues of the Robin problem").add_argument(
        "--count", type=int, help="number of eigenvalues (default 5)"
    )
    command("lyapunov", cmd_lyapunov, "Lyapunov exponents mu_1..mu_count").add_argument(
        "--count", type=int, help="number of exponents (default 5)"
    )
    p = command("modal", cmd_modal, "max-norm decay curve of a two-term solution")
    p.add_argument("--mode", type=int, help="mode index i >= 1 (default 1)")
    p.add_argument("--t-end", dest="t_end", type=float, help="final time")
    p.add_argument("--samples", type=int, help="number of time samples (default 201)")
    p.add_argument("--amplitude", type=float, help="alpha / C relative to min|X_0| (default 1e-3)")
    p = command("evolve", cmd_evolve, "finite-difference run and fitted decay rate")
    p.add_argument("--cells", type=int, help="number of grid cells (default 800)")
    p.add_argument("--perturb", help="'default' or 'mode:N'")
    p.add_argument("--amplitude", type=float, help="perturbation amplitude")
    p.add_argument("--t-end", dest="t_end", type=float, help="final time")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = build_config(args)
        args.func(cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
