"""Command-line front end.

Subcommands::

    wignerloss report      --state cat --alpha 3.6
    wignerloss optimize    --state cat --alpha 2 --eta 0.98
    wignerloss field-dump  --state fock --n 1 --eta 0.5 --out fock1.csv
    wignerloss sweep       --config scripts/recipes/loss_curves.ini --out results/loss_curves

Exit codes: 0 success, 2 usage/config error, 3 numerical failure (the
exception class name is printed on stderr).  ``WIGNERLOSS_WORKERS`` sets
the worker count used by ``sweep``.

Sweep recipes are INI files.  ``[run]`` holds ``out``, ``grid_n``,
``grid_extent`` and ``seed``; ``[optimize]`` the optimizer settings;
every ``[curve:NAME]`` section produces ``NAME.csv`` with ``eta,v_neg``
and every ``[family:NAME]`` section a parameter sweep (``vary``,
``values``, ``quantity`` in ``v_neg | r_opt | vulnerability``).  Values
accept ``start:stop:step`` (inclusive) or comma lists.  Command-line
flags override ``[run]`` keys and, for ``--eta``/``--policy``, every
section's own value.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import DegenerateFlat, NumericalError
from .loss import apply_loss, check_eta, lossy_grid
from .negativity import analytic_presqueeze, negativity_curve, negativity_volume
from .optimize import OptimizeConfig, optimize_squeeze_at_loss
from .phase_space import DEFAULT_N, PhaseGrid
from .squeeze import (
    SqueezedState,
    SqueezeParams,
    d_coefficients,
    squeezed_vulnerability,
    vulnerability_report,
)
from .states import Banana, Cat, Coherent, Fock, FockSuperposition, Vacuum, build_field

POLICY_NAMES = {"none": "none", "analytic": "analytic_once", "numeric": "per_eta_optimized"}
QUANTITIES = ("v_neg", "r_opt", "vulnerability")
STATE_KEYS = ("n", "alpha", "R", "gamma", "amplitudes")
WORKERS_ENV = "WIGNERLOSS_WORKERS"


class UsageError(ValueError):
    pass


def make_state(family: str, params: dict):
    """Build a state from a family name and string/number parameters."""
    def need(key, cast=float):
        if params.get(key) in (None, ""):
            raise UsageError(f"state {family!r} needs --{key}")
        return cast(params[key])

    if family == "vacuum":
        return Vacuum()
    if family == "coherent":
        return Coherent(need("alpha"))
    if family == "fock":
        return Fock(need("n", lambda v: int(float(v))))
    if family == "cat":
        return Cat(need("alpha"))
    if family == "banana":
        alpha = need("alpha")
        if params.get("gamma") not in (None, ""):
            return Banana(alpha, float(params["gamma"]))
        return Banana.from_R(alpha, need("R"))
    if family == "superposition":
        raw = params.get("amplitudes")
        if not raw:
            raise UsageError("state 'superposition' needs --amplitudes")
        return FockSuperposition(tuple(complex(a.strip().replace(" ", "")) for a in str(raw).split(",")))
    raise UsageError(f"unknown state family {family!r}")


def parse_values(text: str) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma separated list."""
    text = str(text).strip()
    if ":" in text:
        start, stop, step = (float(p) for p in text.split(":"))
        if step <= 0 or stop < start:
            raise UsageError(f"bad range {text!r}")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise UsageError("empty value list")
    return values


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    return f"{float(value):.9g}"


def explicit_grid(grid_n, grid_extent):
    if grid_extent is None:
        return None
    return PhaseGrid.square(float(grid_extent), int(grid_n or DEFAULT_N))


# ---------------------------------------------------------------- report


def flat_state(state) -> dict:
    info = state.describe()
    return {"state": info.pop("family"), **{f"state_{k}": v for k, v in info.items()}}


def run_report(state, eta: float, grid_n: int, grid_extent) -> dict:
    eta = check_eta(eta)
    grid = explicit_grid(grid_n, grid_extent) or lossy_grid(state, eta, grid_n)
    field = apply_loss(state, grid, eta)
    neg = negativity_volume(field)
    try:
        squeeze = vulnerability_report(field).as_dict()
    except DegenerateFlat:
        # no negative region: nothing to protect, report the bare coefficients
        d = d_coefficients(field)
        squeeze = {"d0": d.d0, "d1": d.d1, "d3": d.d3, "v_org": d.d0 / 4.0, "v_sqz": None,
                   "r_opt": None, "phi_opt": None, "degenerate": True}
    return {
        **flat_state(state),
        "eta": eta,
        "v_neg": neg.v_neg,
        "negative_cells": neg.negative_cell_count,
        "min_value": neg.min_value,
        **squeeze,
        **{f"grid_{k}": v for k, v in grid.metadata().items()},
        "version": __version__,
    }


def run_optimize(state, eta: float, config: OptimizeConfig, grid_n: int) -> dict:
    record = optimize_squeeze_at_loss(state, eta, config)
    out = {
        **flat_state(state),
        "eta": eta,
        "r": record.params.r,
        "phi": record.params.phi,
        "v_neg": record.v_neg,
        "evals": record.evals,
        "converged": record.converged,
        "v_neg_unsqueezed": negativity_curve(state, [eta], "none", grid_n)[0][1],
        "config": config.as_dict(),
        "version": __version__,
    }
    try:
        analytic = analytic_presqueeze(state, grid_n)
        out["r_analytic"], out["phi_analytic"] = analytic.r, analytic.phi
        out["v_neg_analytic"] = negativity_curve(state, [eta], "analytic_once", grid_n)[0][1]
    except NumericalError as exc:
        out["analytic_error"] = type(exc).__name__
    return out


# ---------------------------------------------------------------- field dump


def squeeze_for(state, policy: str, r, phi, eta: float, grid_n: int, config: OptimizeConfig):
    if r is not None:
        return SqueezeParams(float(r), float(phi or 0.0))
    if policy == "analytic":
        return analytic_presqueeze(state, grid_n)
    if policy == "numeric":
        return optimize_squeeze_at_loss(state, eta, config).params
    return None


def write_field(path: Path, field) -> None:
    g = field.grid
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("y\\x," + ",".join(fmt(x) for x in g.x) + "\n")
        for y, row in zip(g.y, field.values):
            fh.write(fmt(y) + "," + ",".join(fmt(v) for v in row) + "\n")


# ---------------------------------------------------------------- sweep


def load_sweep_config(path: str | None, overrides: dict) -> dict:
    """Resolve a recipe into plain dicts with every default made explicit."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    if path is not None:
        if not Path(path).is_file():
            raise UsageError(f"config file {path!r} not found")
        parser.read(path, encoding="utf-8")
    run = dict(parser["run"]) if parser.has_section("run") else {}
    for key in ("out", "grid_n", "grid_extent", "seed"):
        if overrides.get(key) is not None:
            run[key] = overrides[key]
    resolved_run = {
        "out": run.get("out", "sweep_out"),
        "grid_n": int(run.get("grid_n", DEFAULT_N)),
        "grid_extent": float(run["grid_extent"]) if run.get("grid_extent") not in (None, "") else None,
        "seed": int(run.get("seed", 0)),
    }
    opt = dict(parser["optimize"]) if parser.has_section("optimize") else {}
    defaults = OptimizeConfig()
    optimize = {
        "r_max": float(opt.get("r_max", defaults.r_max)),
        "restarts": int(opt.get("restarts", defaults.restarts)),
        "tol": float(opt.get("tol", defaults.tol)),
        "max_evals": int(opt.get("max_evals", defaults.max_evals)),
        "n_max": int(opt.get("n_max", defaults.n_max)),
    }
    sections = []
    for name in parser.sections():
        if name in ("run", "optimize"):
            continue
        kind, _, label = name.partition(":")
        if kind not in ("curve", "family") or not label:
            raise UsageError(f"unknown section [{name}]")
        raw = dict(parser[name])
        if overrides.get("eta") is not None:
            raw["eta"] = raw["etas"] = str(overrides["eta"])
        if overrides.get("policy") is not None:
            raw["policy"] = overrides["policy"]
        policy = raw.get("policy", "none")
        if policy not in POLICY_NAMES:
            raise UsageError(f"[{name}] policy must be one of {sorted(POLICY_NAMES)}")
        state = {k: raw[k] for k in STATE_KEYS if k in raw}
        section = {"name": label, "kind": kind, "state": raw.get("state"), "params": state, "policy": policy}
        if section["state"] is None:
            raise UsageError(f"[{name}] needs a state")
        if kind == "curve":
            etas = sorted(parse_values(raw.get("etas", "1.0")))
            for e in etas:
                check_eta(e)
            section["etas"] = etas
        else:
            if "vary" not in raw or "values" not in raw:
                raise UsageError(f"[{name}] needs 'vary' and 'values'")
            quantity = raw.get("quantity", "v_neg")
            if quantity not in QUANTITIES:
                raise UsageError(f"[{name}] quantity must be one of {QUANTITIES}")
            if quantity == "r_opt" and policy == "none":
                raise UsageError(f"[{name}] r_opt needs policy analytic or numeric")
            section.update(vary=raw["vary"], values=parse_values(raw["values"]), quantity=quantity,
                           eta=check_eta(float(raw.get("eta", 1.0))))
        make_state(section["state"], {**state, **({section["vary"]: section["values"][0]} if kind == "family" else {})})
        sections.append(section)
    if not sections:
        raise UsageError("the sweep defines no [curve:*] or [family:*] sections")
    return {"run": resolved_run, "optimize": optimize, "sections": sections}


def _opt_config(resolved: dict) -> OptimizeConfig:
    return OptimizeConfig(seed=resolved["run"]["seed"], n=resolved["run"]["grid_n"], **resolved["optimize"])


def compute_section(section: dict, resolved: dict) -> tuple[list[str], list[tuple]]:
    run = resolved["run"]
    n = run["grid_n"]
    grid = explicit_grid(n, run["grid_extent"])
    config = _opt_config(resolved)
    policy = POLICY_NAMES[section["policy"]]
    if section["kind"] == "curve":
        state = make_state(section["state"], section["params"])
        rows = negativity_curve(state, section["etas"], policy, n, config, grid)
        return ["eta", "v_neg"], rows

    rows = []
    quantity, eta = section["quantity"], section["eta"]
    for value in section["values"]:
        state = make_state(section["state"], {**section["params"], section["vary"]: value})
        if quantity == "v_neg":
            rows.append((value, negativity_curve(state, [eta], policy, n, config, grid)[0][1]))
        elif quantity == "r_opt":
            if policy == "analytic_once":
                p = analytic_presqueeze(state, n, grid)
            else:
                p = optimize_squeeze_at_loss(state, eta, config).params
            rows.append((value, p.r, p.phi))
        else:
            d = d_coefficients(build_field(state, grid or state.default_grid(n)))
            if policy == "none":
                params = SqueezeParams()
            elif policy == "analytic_once":
                params = analytic_presqueeze(state, n, grid)
            else:
                params = optimize_squeeze_at_loss(state, eta, config).params
            rows.append((value, squeezed_vulnerability(d, params)))
    header = {"v_neg": ["param", "v_neg"], "r_opt": ["param", "r_opt", "phi_opt"],
              "vulnerability": ["param", "vulnerability"]}[quantity]
    return header, rows


def _compute(args):
    return compute_section(*args)


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def run_sweep(resolved: dict) -> list[Path]:
    out = Path(resolved["run"]["out"])
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(section, resolved) for section in resolved["sections"]]
    workers = worker_count()
    written: list[Path] = []
    try:
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_compute, jobs))
        else:
            results = [_compute(job) for job in jobs]
        for section, (header, rows) in zip(resolved["sections"], results):
            path = out / f"{section['name']}.csv"
            written.append(path)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(",".join(header) + "\n")
                for row in rows:
                    fh.write(",".join(fmt(v) for v in row) + "\n")
        manifest = out / "manifest.json"
        written.append(manifest)
        manifest.write_text(json.dumps(build_manifest(resolved, written[:-1]), indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def build_manifest(resolved: dict, outputs: list[Path]) -> dict:
    return {
        "tool": "wignerloss",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "config": resolved,
        "grid_policy": "auto-sized per state; grid_n is the base resolution, raised for fine fringes and "
                       "loss blur; grid_extent forces a fixed square grid except inside numeric optimization",
        "outputs": [p.name for p in outputs],
    }


# ---------------------------------------------------------------- argparse


def _add_state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", required=True, choices=["vacuum", "coherent", "fock", "cat", "banana", "superposition"])
    p.add_argument("--n", type=int, help="Fock number")
    p.add_argument("--alpha", type=float, help="coherent / cat / banana amplitude")
    p.add_argument("--R", type=float, help="banana nonlinearity R = alpha^2 * gamma")
    p.add_argument("--gamma", type=float, help="banana Kerr factor (overrides --R)")
    p.add_argument("--amplitudes", help="comma separated Fock amplitudes, e.g. '0.6,0.8j'")


def _add_common(p: argparse.ArgumentParser, eta_default=1.0) -> None:
    p.add_argument("--grid-n", type=int, default=None, help=f"base grid resolution (default {DEFAULT_N})")
    p.add_argument("--grid-extent", type=float, default=None, help="fixed square grid half-width")
    p.add_argument("--eta", type=float, default=eta_default, help="quantum efficiency")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)


def _add_optimizer(p: argparse.ArgumentParser) -> None:
    d = OptimizeConfig()
    p.add_argument("--restarts", type=int, default=d.restarts)
    p.add_argument("--max-evals", type=int, default=d.max_evals)
    p.add_argument("--r-max", type=float, default=d.r_max)
    p.add_argument("--tol", type=float, default=d.tol)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wignerloss", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="negativity, d-coefficients and optimal squeeze of one state")
    _add_state_args(p)
    _add_common(p)

    p = sub.add_parser("optimize", help="numerically optimal pre-squeeze at finite loss")
    _add_state_args(p)
    _add_common(p, eta_default=0.98)
    _add_optimizer(p)

    p = sub.add_parser("field-dump", help="write a Wigner field as a dense CSV matrix")
    _add_state_args(p)
    _add_common(p)
    _add_optimizer(p)
    p.add_argument("--policy", choices=sorted(POLICY_NAMES), default="none")
    p.add_argument("--squeeze-r", type=float, default=None)
    p.add_argument("--squeeze-phi", type=float, default=None)

    p = sub.add_parser("sweep", help="run a figure recipe and write CSV tables plus a manifest")
    p.add_argument("--config", default=None, help="INI recipe")
    p.add_argument("--grid-n", type=int, default=None)
    p.add_argument("--grid-extent", type=float, default=None)
    p.add_argument("--eta", type=float, default=None, help="override every section's eta(s)")
    p.add_argument("--policy", choices=sorted(POLICY_NAMES), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    return parser


def _state_from_args(args):
    return make_state(args.state, {k: getattr(args, k) for k in STATE_KEYS})


def _optimize_config(args) -> OptimizeConfig:
    return OptimizeConfig(r_max=args.r_max, restarts=args.restarts, tol=args.tol, max_evals=args.max_evals,
                          seed=args.seed or 0, n=args.grid_n or DEFAULT_N)


def dispatch(args) -> int:
    grid_n = args.grid_n or DEFAULT_N
    if args.command == "sweep":
        overrides = {"out": args.out, "grid_n": args.grid_n, "grid_extent": args.grid_extent,
                     "seed": args.seed, "eta": args.eta, "policy": args.policy}
        written = run_sweep(load_sweep_config(args.config, overrides))
        for path in written:
            print(path)
        return 0

    state = _state_from_args(args)
    eta = check_eta(args.eta)
    if args.command == "report":
        doc = run_report(state, eta, grid_n, args.grid_extent)
    elif args.command == "optimize":
        doc = run_optimize(state, eta, _optimize_config(args), grid_n)
    else:
        params = squeeze_for(state, args.policy, args.squeeze_r, args.squeeze_phi, eta, grid_n,
                             _optimize_config(args))
        if params is not None and params.r > 0:
            state = SqueezedState(state, params)
        grid = explicit_grid(grid_n, args.grid_extent) or lossy_grid(state, eta, grid_n)
        field = apply_loss(state, grid, eta)
        out = Path(args.out or "field.csv")
        try:
            write_field(out, field)
        except BaseException:
            out.unlink(missing_ok=True)
            raise
        print(out)
        return 0
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args)
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError, configparser.Error) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
