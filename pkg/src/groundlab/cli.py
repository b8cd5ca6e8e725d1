"""Config-driven command line interface.

Four subcommands, each reading one JSON config file and writing
deterministic CSV/JSON reports into an output directory:

* ``analyze``   -- structural probes of a potential (integrability, tail,
  infimum).
* ``stability`` -- run every applicable stability criterion, write the
  verdict list plus any certificate measures.
* ``minimize``  -- multi-start particle descent with trace and
  classification files.
* ``scan``      -- phase table over a parameter grid.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 internal
invariant violation.  Outputs are byte-identical across reruns of the same
config except for the timestamp inside each JSON metadata block.

Config keys and defaults (unknown keys are rejected):

    command       one of analyze | stability | minimize | scan (required)
    potential     family block (required); families:
                    {"family": "powerlaw", "a": ..., "r": ..., "dimension": N}
                    {"family": "morse", "G": ..., "L": ..., "dimension": N}
                    {"family": "gaussmix", "terms": [[amp, width], ...],
                     "dimension": N}
                    {"family": "tabulated", "radii": [...], "values": [...],
                     "dimension": N}
    output_dir    str, default "out" (the --out flag overrides)
    seeds         nonempty int list, default [0]
    quad_tol      float, default 1e-8
    decision_tol  float, default 1e-6
    stability:    criteria (subset of ["integral", "gaussian_weighted",
                  "fourier", "ruc_search"], default all), p_grid, xi_grid,
                  build_witness (default true), n_list (default
                  [8, 16, 32, 64]), optimizer_budget (default 400)
    minimize:     n (default 16, must be >= 2), init (default
                  "random_ball"), max_iter (default 500), grad_tol
                  (default 1e-8)
    scan:         grid (required: {param: [values, ...]}), n (default 16),
                  max_iter (default 400), grad_tol (default 1e-8),
                  with_stability (default true)
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from .errors import (ConfigError, GroundlabError, InvariantViolation,
                     NonDifferentiable, NotAbsolutelyIntegrable,
                     NotSquareIntegrable, OptimizerStalled,
                     OscillatoryQuadratureFailure, ParticleCollision,
                     QuadratureFailure, WitnessFailed)
from .groundstate import classify_trace, ground_state_scan, minimize_particles
from .measures import GridDensity, PointCloudMeasure
from .potentials import (GaussianMix, Morse, PowerLaw, RadialPotential,
                         Tabulated, probe_hypotheses)
from .stability import (fourier_criterion, gaussian_criterion,
                        integral_criterion, ruc_search)

__all__ = ["main", "build_potential", "load_config"]

_NUMERICAL_ERRORS = (QuadratureFailure, NotAbsolutelyIntegrable,
                     NotSquareIntegrable, OscillatoryQuadratureFailure,
                     WitnessFailed, OptimizerStalled, ParticleCollision,
                     NonDifferentiable)

_COMMON_KEYS = {"command", "potential", "output_dir", "seeds", "quad_tol",
                "decision_tol"}
_COMMAND_KEYS = {
    "analyze": set(),
    "stability": {"criteria", "p_grid", "xi_grid", "build_witness",
                  "n_list", "optimizer_budget"},
    "minimize": {"n", "init", "max_iter", "grad_tol"},
    "scan": {"grid", "n", "max_iter", "grad_tol", "with_stability"},
}
_FAMILY_KEYS = {
    "powerlaw": {"family", "a", "r", "dimension"},
    "morse": {"family", "G", "L", "dimension"},
    "gaussmix": {"family", "terms", "dimension"},
    "tabulated": {"family", "radii", "values", "dimension"},
}
_ALL_CRITERIA = ("integral", "gaussian_weighted", "fourier", "ruc_search")


def _reject_unknown(block: dict, allowed: set, where: str):
    unknown = sorted(set(block) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")


def build_potential(block) -> RadialPotential:
    """Construct a potential from its config block, strictly validated."""
    if not isinstance(block, dict):
        raise ConfigError("'potential' must be an object")
    family = block.get("family")
    if family not in _FAMILY_KEYS:
        raise ConfigError(
            f"'potential.family' must be one of {sorted(_FAMILY_KEYS)}, "
            f"got {family!r}")
    _reject_unknown(block, _FAMILY_KEYS[family], f"potential ({family})")
    missing = sorted(_FAMILY_KEYS[family] - set(block))
    if missing:
        raise ConfigError(f"missing key(s) {missing} in potential block")
    dimension = block["dimension"]
    try:
        if family == "powerlaw":
            return PowerLaw(block["a"], block["r"], dimension)
        if family == "morse":
            return Morse(block["G"], block["L"], dimension)
        if family == "gaussmix":
            return GaussianMix([tuple(t) for t in block["terms"]], dimension)
        return Tabulated(block["radii"], block["values"], dimension)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid potential block: {exc}") from exc


def load_config(path) -> dict:
    """Read and validate a run config, filling documented defaults."""
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")

    command = raw.get("command")
    if command not in _COMMAND_KEYS:
        raise ConfigError(
            f"'command' must be one of {sorted(_COMMAND_KEYS)}, "
            f"got {command!r}")
    _reject_unknown(raw, _COMMON_KEYS | _COMMAND_KEYS[command],
                    f"config (command {command})")
    if "potential" not in raw:
        raise ConfigError("missing key 'potential'")

    config = {
        "command": command,
        "potential": raw["potential"],
        "output_dir": raw.get("output_dir", "out"),
        "seeds": raw.get("seeds", [0]),
        "quad_tol": float(raw.get("quad_tol", 1e-8)),
        "decision_tol": float(raw.get("decision_tol", 1e-6)),
    }
    seeds = config["seeds"]
    if (not isinstance(seeds, list) or not seeds
            or not all(isinstance(s, int) for s in seeds)):
        raise ConfigError("'seeds' must be a nonempty list of integers")

    if command == "stability":
        criteria = raw.get("criteria", list(_ALL_CRITERIA))
        bad = sorted(set(criteria) - set(_ALL_CRITERIA))
        if bad:
            raise ConfigError(f"unknown criteria {bad}; choose from "
                              f"{list(_ALL_CRITERIA)}")
        config.update({
            "criteria": list(criteria),
            "p_grid": raw.get("p_grid"),
            "xi_grid": raw.get("xi_grid"),
            "build_witness": bool(raw.get("build_witness", True)),
            "n_list": raw.get("n_list", [8, 16, 32, 64]),
            "optimizer_budget": int(raw.get("optimizer_budget", 400)),
        })
    elif command == "minimize":
        n = int(raw.get("n", 16))
        if n < 2:
            raise ConfigError(f"'n' must be >= 2, got {n}")
        config.update({
            "n": n,
            "init": raw.get("init", "random_ball"),
            "max_iter": int(raw.get("max_iter", 500)),
            "grad_tol": float(raw.get("grad_tol", 1e-8)),
        })
        if config["init"] not in ("lattice", "random_ball", "two_cluster"):
            raise ConfigError(
                f"'init' must be lattice, random_ball or two_cluster, "
                f"got {config['init']!r}")
    elif command == "scan":
        grid = raw.get("grid")
        if (not isinstance(grid, dict) or not grid
                or not all(isinstance(v, list) and v for v in grid.values())):
            raise ConfigError("'grid' must map parameter names to nonempty "
                              "value lists")
        n = int(raw.get("n", 16))
        if n < 2:
            raise ConfigError(f"'n' must be >= 2, got {n}")
        config.update({
            "grid": grid,
            "n": n,
            "max_iter": int(raw.get("max_iter", 400)),
            "grad_tol": float(raw.get("grad_tol", 1e-8)),
            "with_stability": bool(raw.get("with_stability", True)),
        })
    return config


def _metadata(config, args) -> dict:
    return {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "command": config["command"],
        "seeds": config["seeds"],
        "seed_override": args.seed_override,
        "threads": args.threads,
    }


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(config, out_dir: Path, args) -> int:
    potential = build_potential(config["potential"])
    report = probe_hypotheses(potential, config["quad_tol"])
    payload = {
        "metadata": _metadata(config, args),
        "potential": potential.label,
        "report": report.to_dict(),
    }
    _write_json(out_dir / "analysis.json", payload)
    print(f"potential          {potential.label}")
    print(f"local integrability {report.local_integrability} "
          f"(integral {report.local_integral:.6g})")
    print(f"tail class         {report.tail_class}")
    print(f"profile infimum    {report.profile_infimum:.6g} "
          f"at r = {report.infimum_radius:.6g}")
    print(f"report written to  {out_dir / 'analysis.json'}")
    return 0


def _write_certificate(certificate, out_dir: Path, criterion: str):
    if certificate is None or certificate.measure is None:
        return None
    measure = certificate.measure
    if isinstance(measure, PointCloudMeasure):
        path = out_dir / f"certificate_{criterion}.csv"
        measure.to_csv(path)
        return str(path)
    if isinstance(measure, GridDensity):
        return str(measure.save(out_dir / f"certificate_{criterion}"))
    return None


def cmd_stability(config, out_dir: Path, args) -> int:
    potential = build_potential(config["potential"])
    probe = probe_hypotheses(potential, config["quad_tol"])
    grows = probe.tail_class == "H3a"

    precondition_misses = (NotAbsolutelyIntegrable, NotSquareIntegrable,
                          NonDifferentiable)
    entries = []
    failures = 0
    for criterion in config["criteria"]:
        skip_reason = None
        verdict = None
        try:
            if criterion == "integral":
                if grows:
                    skip_reason = ("profile grows at infinity; criterion "
                                   "requires a tail decaying to zero")
                else:
                    verdict = integral_criterion(
                        potential, config["quad_tol"],
                        config["decision_tol"],
                        build_witness=config["build_witness"])
            elif criterion == "gaussian_weighted":
                if grows:
                    skip_reason = ("profile grows at infinity; criterion "
                                   "requires a tail decaying to zero")
                else:
                    verdict = gaussian_criterion(
                        potential, config["p_grid"], config["quad_tol"],
                        config["decision_tol"],
                        build_witness=config["build_witness"])
            elif criterion == "fourier":
                verdict = fourier_criterion(
                    potential, config["xi_grid"], config["quad_tol"],
                    config["decision_tol"])
            else:
                if not potential.differentiable:
                    skip_reason = ("configuration search needs a "
                                   "differentiable profile")
                else:
                    verdict = ruc_search(
                        potential, config["n_list"], config["seeds"],
                        config["optimizer_budget"],
                        config["decision_tol"])
        except _NUMERICAL_ERRORS as exc:
            skip_reason = f"{type(exc).__name__}: {exc}"
            if not isinstance(exc, precondition_misses):
                failures += 1

        if verdict is None:
            entries.append({"criterion": criterion, "skipped": skip_reason})
            print(f"{criterion:<18} skipped: {skip_reason}")
        else:
            cert_path = _write_certificate(verdict.certificate, out_dir,
                                           criterion)
            entries.append(verdict.to_dict(certificate_path=cert_path))
            print(f"{criterion:<18} {verdict.outcome:<18} "
                  f"value {verdict.numeric_value:.6g}")

    payload = {"metadata": _metadata(config, args),
               "potential": potential.label,
               "verdicts": entries}
    _write_json(out_dir / "verdicts.json", payload)
    if failures and failures == len(config["criteria"]):
        return 3
    return 0


def cmd_minimize(config, out_dir: Path, args) -> int:
    potential = build_potential(config["potential"])
    results = []
    for seed in config["seeds"]:
        trace = minimize_particles(
            potential, config["n"], init=config["init"], seed=seed,
            max_iter=config["max_iter"], grad_tol=config["grad_tol"])
        label, label_info = classify_trace(trace, return_details=True)
        trace.to_csv(out_dir / f"trace_seed{seed}.csv")
        results.append((trace.final_energy, seed, trace, label, label_info))
    results.sort(key=lambda item: (item[0], item[1]))
    best_energy, best_seed, best_trace, best_label, _ = results[0]

    cloud = PointCloudMeasure.empirical(best_trace.final_config)
    cloud.to_csv(out_dir / "final_config.csv")
    payload = {
        "metadata": _metadata(config, args),
        "potential": potential.label,
        "classification": best_label,
        "final_energy": best_energy,
        "best_seed": best_seed,
        "per_seed": [{"seed": seed, "classification": label,
                      "final_energy": energy,
                      "iterations": trace.iterations,
                      "converged": trace.converged,
                      "diagnostics": info}
                     for energy, seed, trace, label, info in sorted(
                         results, key=lambda item: item[1])],
    }
    _write_json(out_dir / "classification.json", payload)
    print(f"classification {best_label} (seed {best_seed}, "
          f"energy {best_energy:.6g})")
    return 0


def _param_product(grid: dict) -> list:
    names = sorted(grid)
    combos = [{}]
    for name in names:
        combos = [dict(c, **{name: v}) for c in combos for v in grid[name]]
    return combos


def cmd_scan(config, out_dir: Path, args) -> int:
    base = dict(config["potential"])
    for name in config["grid"]:
        base.pop(name, None)

    def factory(**params):
        return build_potential({**base, **params})

    param_list = _param_product(config["grid"])
    rows = ground_state_scan(
        factory, param_list, config["n"], config["seeds"],
        max_iter=config["max_iter"], grad_tol=config["grad_tol"],
        with_stability=config["with_stability"])

    names = sorted(config["grid"])
    header = names + ["seed", "classification", "best_energy",
                      "stability_outcome", "stability_value", "error"]
    lines = [",".join(header)]
    for row in rows:
        cells = [_fmt(row.params.get(name, "")) for name in names]
        cells.append("" if row.seed is None else str(row.seed))
        cells.append(row.classification)
        cells.append("" if math.isnan(row.best_energy)
                     else _fmt(row.best_energy))
        cells.append(row.stability_outcome)
        cells.append("" if math.isnan(row.stability_value)
                     else _fmt(row.stability_value))
        cells.append(row.error.replace(",", ";"))
        lines.append(",".join(cells))
    (out_dir / "phase_table.csv").write_text("\n".join(lines) + "\n")

    aggregates = [
        {"params": row.params, "classification": row.classification,
         "best_energy": (None if math.isnan(row.best_energy)
                         else row.best_energy),
         "stability_outcome": row.stability_outcome}
        for row in rows if row.seed is None]
    payload = {"metadata": _metadata(config, args),
               "aggregates": aggregates}
    _write_json(out_dir / "scan_summary.json", payload)
    print(f"{len(param_list)} grid cells scanned; table in "
          f"{out_dir / 'phase_table.csv'}")
    return 0


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groundlab",
        description="Ground-state and stability experiments for radial "
                    "pair potentials.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("analyze", "stability", "minimize", "scan"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True,
                         help="path to the JSON run config")
        cmd.add_argument("--out", default=None,
                         help="output directory (overrides config)")
        cmd.add_argument("--seed-override", type=int, default=None,
                         help="replace the config's seed list")
        cmd.add_argument("--threads", type=int, default=1,
                         help="recorded in metadata; computations run "
                              "sequentially")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if config["command"] != args.subcommand:
            raise ConfigError(
                f"config 'command' is {config['command']!r} but the "
                f"subcommand given is {args.subcommand!r}")
        if args.seed_override is not None:
            config["seeds"] = [args.seed_override]
        out_dir = Path(args.out if args.out is not None
                       else config["output_dir"])
        out_dir.mkdir(parents=True, exist_ok=True)

        handler = {"analyze": cmd_analyze, "stability": cmd_stability,
                   "minimize": cmd_minimize, "scan": cmd_scan}[
                       config["command"]]
        return handler(config, out_dir, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 4
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3
    except GroundlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
