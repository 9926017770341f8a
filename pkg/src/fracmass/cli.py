"""Command line driver: declarative experiment configs in, reports out.

One invocation runs one experiment.  Inputs come from a YAML config file,
from override flags, or both, with flags winning; the merged document is
validated before any computation starts, and a bad input names the
offending path.  Results go to a JSON report that echoes the inputs and
attaches an error bar and provenance tag to every estimate, plus a CSV of
sweep rows (columns s,value,error,error_kind) when the run sweeps s.  The
same config and seed produce byte-identical output files.  The env var
FRACMASS_THREADS picks the worker count; it never changes any value.

Exit codes: 0 success, 1 invalid input or infeasible computation,
2 verify found a failing criterion.
"""

from __future__ import annotations

import json
import sys
from typing import Optional, Sequence

import click
import numpy as np
import yaml

from .acceptance import format_outcome, manifest_dict, outcome_dict, run_all
from .asymptotics import (SSweepResult, SweepError, check_grid,
                          default_s_grid, fit_points)
from .configio import (ConfigError, ExperimentConfig, field_to_config,
                       parse_config, region_to_config)
from .fields import FieldError
from .gausskernel import closed_form_limit, gauss_sweep, pair_mass_limit
from .limits import F0_even_p, F0_main, limit_report, perimeter_limit
from .mass import MassError, alpha_analytic, alpha_numeric, tail_integral
from .quad import EstimateWithError, QuadratureError, combine
from .seminorm import fractional_perimeter, gagliardo_qomega, hardy_pair

Rows = list[tuple[float, EstimateWithError]]


# ---------------------------------------------------------------------------
# report assembly


def _est(e: EstimateWithError) -> dict:
    return {"value": float(e.value), "error": float(e.error),
            "error_kind": e.error_kind}


def _diff(a: EstimateWithError, b: EstimateWithError) -> dict:
    d = combine([a, b], [1.0, -1.0])
    return {"value": float(abs(d.value)), "error": float(d.error),
            "error_kind": d.error_kind}


def _fit_dict(res: SSweepResult) -> dict:
    return {"limit": float(res.limit), "limit_error": float(res.limit_error),
            "error_kind": "statistical", "fit_model": res.fit_model,
            "residual": float(res.residual), "flagged": bool(res.flagged)}


def _inputs_dict(cfg: ExperimentConfig) -> dict:
    q = cfg.quad
    return {
        "command": cfg.command,
        "d": cfg.d,
        "p": cfg.p,
        "s": cfg.s,
        "s_grid": list(cfg.s_grid) if cfg.s_grid is not None else None,
        "R": cfg.big_r,
        "delta": cfg.delta,
        "field": field_to_config(cfg.field) if cfg.field is not None else None,
        "omega": region_to_config(cfg.omega) if cfg.omega is not None else None,
        "e": region_to_config(cfg.set_e) if cfg.set_e is not None else None,
        "quadrature": {"sample_budget": q.sample_budget,
                       "rng_seed": q.rng_seed,
                       "target_rel_error": q.target_rel_error,
                       "batch_count": q.batch_count},
    }


def _csv_text(command: str, rows: Rows, fit: Optional[SSweepResult]) -> str:
    # repr gives the shortest round-trip float, so reruns are byte-identical
    lines = [f"# fracmass {command} rows"]
    if fit is not None:
        lines.append(
            "# extrapolated_limit={!r} extrapolated_error={!r}"
            " fit_model={} residual={!r} flagged={}".format(
                float(fit.limit), float(fit.limit_error), fit.fit_model,
                float(fit.residual), str(bool(fit.flagged)).lower()))
    lines.append("s,value,error,error_kind")
    for s, e in rows:
        lines.append(f"{float(s)!r},{float(e.value)!r},"
                     f"{float(e.error)!r},{e.error_kind}")
    return "\n".join(lines) + "\n"


def _jsonable(o):
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError("output", f"cannot write {path}: {exc}") from exc


def _need(value, path: str, command: str):
    if value is None:
        raise ConfigError(path, f"required for {command}")
    return value


def _grid_for_fit(cfg: ExperimentConfig) -> tuple[float, ...]:
    """The sweep grid, validated early so a bad one fails before any work."""
    grid = cfg.s_grid if cfg.s_grid is not None else default_s_grid()
    try:
        check_grid(grid)
    except SweepError as exc:
        raise ConfigError("config.s_grid", str(exc)) from exc
    return tuple(float(s) for s in grid)


# ---------------------------------------------------------------------------
# command runners: each returns (results dict, sweep rows or None, fit or None)


def _run_alpha(cfg: ExperimentConfig):
    f = _need(cfg.field, "config.field", "alpha")
    results: dict = {}
    analytic = None
    try:
        ma = alpha_analytic(f, cfg.p, cfg.d)
        analytic = EstimateWithError(ma.value, ma.error, "analytic")
        results["alpha_analytic"] = {**_est(analytic), "route": ma.route}
    except MassError as exc:
        results["alpha_analytic_unavailable"] = str(exc)
    rows: Optional[Rows] = None
    if cfg.s is not None:
        est = tail_integral(f, cfg.p, cfg.d, cfg.s, cfg.big_r or 1.0, cfg.quad)
        results["tail_at_s"] = {"s": cfg.s, **_est(est)}
        rows = [(cfg.s, est)]
        if analytic is not None:
            results["difference_vs_analytic"] = _diff(est, analytic)
    return results, rows, None


def _run_sweep(cfg: ExperimentConfig):
    f = _need(cfg.field, "config.field", "sweep")
    grid = _grid_for_fit(cfg)
    res = alpha_numeric(f, cfg.p, cfg.d, grid, R=cfg.big_r or 1.0,
                        spec=cfg.quad)
    results = {"extrapolated": _fit_dict(res)}
    try:
        ma = alpha_analytic(f, cfg.p, cfg.d)
        oracle = EstimateWithError(ma.value, ma.error, "analytic")
        results["alpha_analytic"] = {**_est(oracle), "route": ma.route}
        results["difference_vs_analytic"] = _diff(
            EstimateWithError(res.limit, res.limit_error), oracle)
    except MassError as exc:
        results["alpha_analytic_unavailable"] = str(exc)
    return results, list(res.points), res


def _run_seminorm(cfg: ExperimentConfig):
    f = _need(cfg.field, "config.field", "seminorm")
    omega = _need(cfg.omega, "config.omega", "seminorm")
    if cfg.s is not None and cfg.s_grid is None:
        br = gagliardo_qomega(f, omega, cfg.s, cfg.p, R=cfg.big_r,
                              spec=cfg.quad)
        scaled = br.total * (cfg.s / 2.0)
        results = {
            "interior_interior": _est(br.interior_interior),
            "interior_exterior_near": _est(br.interior_exterior_near),
            "interior_exterior_tail": _est(br.interior_exterior_tail),
            "seminorm_p_power": _est(br.total),
            "scaled_half_s": {"s": cfg.s, **_est(scaled)},
            "split_radius": br.R,
        }
        return results, [(cfg.s, scaled)], None
    grid = _grid_for_fit(cfg)
    points: Rows = []
    for s in grid:
        br = gagliardo_qomega(f, omega, float(s), cfg.p, R=cfg.big_r,
                              spec=cfg.quad)
        points.append((float(s), br.total * (float(s) / 2.0)))
    res = fit_points(points)
    results = {"extrapolated": _fit_dict(res)}
    oracle = None
    try:
        if cfg.p == 2.0:
            oracle = F0_main(f, omega, cfg.d, cfg.quad)
        elif cfg.p == int(cfg.p) and int(cfg.p) % 2 == 0:
            oracle = F0_even_p(f, omega, int(cfg.p), cfg.d, cfg.quad)
    except (ValueError, FieldError):
        oracle = None
    if oracle is not None:
        results["limit_functional"] = _est(oracle)
        results["difference_vs_limit_functional"] = _diff(
            EstimateWithError(res.limit, res.limit_error), oracle)
    return results, points, res


def _run_perimeter(cfg: ExperimentConfig):
    e = _need(cfg.set_e, "config.e", "perimeter")
    omega = _need(cfg.omega, "config.omega", "perimeter")
    if cfg.s is not None and cfg.s_grid is None:
        per = fractional_perimeter(e, omega, cfg.s, R=cfg.big_r,
                                   spec=cfg.quad)
        scaled = per * (cfg.s / 2.0)
        results = {"fractional_perimeter": _est(per),
                   "scaled_half_s": {"s": cfg.s, **_est(scaled)}}
        return results, [(cfg.s, scaled)], None
    grid = _grid_for_fit(cfg)
    points: Rows = [(float(s), fractional_perimeter(e, omega, float(s),
                                                    R=cfg.big_r,
                                                    spec=cfg.quad)
                     * (float(s) / 2.0)) for s in grid]
    res = fit_points(points)
    results = {"extrapolated": _fit_dict(res)}
    try:
        oracle = perimeter_limit(e, omega, cfg.d, cfg.quad)
        results["perimeter_limit"] = _est(oracle)
        results["difference_vs_perimeter_limit"] = _diff(
            EstimateWithError(res.limit, res.limit_error), oracle)
    except (ValueError, FieldError):
        pass
    return results, points, res


def _run_limit(cfg: ExperimentConfig):
    f = _need(cfg.field, "config.field", "limit")
    omega = _need(cfg.omega, "config.omega", "limit")
    rep = limit_report(f, omega, cfg.d, cfg.quad)
    functionals = {
        "F0_binomial": rep.F0_binomial,
        "interaction_energy": rep.interaction_energy,
        "perimeter_limit": rep.perimeter_limit,
        "critical_alpha": rep.critical_alpha,
    }
    results: dict = {name: (_est(e) if e is not None else None)
                     for name, e in functionals.items()}
    deltas = {}
    for key in rep.consistency_deltas:
        a, b = key.split("_vs_")
        deltas[key] = _diff(functionals[a], functionals[b])
    results["consistency_deltas"] = deltas
    return results, None, None


def _run_hardy(cfg: ExperimentConfig):
    f = _need(cfg.field, "config.field", "hardy")
    omega = _need(cfg.omega, "config.omega", "hardy")
    s_list = ((cfg.s,) if cfg.s is not None
              else (cfg.s_grid if cfg.s_grid is not None
                    else (0.003, 0.01, 0.03)))
    entries = []
    rows: Rows = []
    for s in s_list:
        lhs, rhs = hardy_pair(f, omega, float(s), cfg.delta, cfg.d, cfg.quad)
        margin = combine([rhs, lhs], [1.0, -1.0])
        rows.append((float(s), margin))
        entries.append({"s": float(s), "weighted_l2": _est(lhs),
                        "scaled_seminorm": _est(rhs),
                        "margin": _est(margin),
                        "holds": bool(margin.value > 0.0)})
    results = {"delta": cfg.delta, "per_s": entries,
               "all_hold": all(e["holds"] for e in entries)}
    return results, rows, None


def _run_gauss(cfg: ExperimentConfig):
    e = _need(cfg.set_e, "config.e", "gauss")
    omega = _need(cfg.omega, "config.omega", "gauss")
    grid = _grid_for_fit(cfg) if cfg.s_grid is not None else None
    res = gauss_sweep(e, omega, cfg.d, s_grid=grid, spec=cfg.quad)
    results = {"extrapolated": _fit_dict(res)}
    fit_est = EstimateWithError(res.limit, res.limit_error)
    try:
        cf = closed_form_limit(e, omega, cfg.d)
        oracle = EstimateWithError(float(cf), 0.0, "exact")
        results["closed_form_limit"] = _est(oracle)
        results["difference_vs_closed_form"] = _diff(fit_est, oracle)
    except (ValueError, FieldError):
        pass
    try:
        pm = pair_mass_limit(e, omega, cfg.d)
        oracle = EstimateWithError(float(pm), 0.0, "exact")
        results["pair_mass_limit"] = _est(oracle)
        results["difference_vs_pair_mass"] = _diff(fit_est, oracle)
    except (ValueError, FieldError):
        pass
    return results, list(res.points), res


_RUNNERS = {
    "alpha": _run_alpha,
    "sweep": _run_sweep,
    "seminorm": _run_seminorm,
    "perimeter": _run_perimeter,
    "limit": _run_limit,
    "hardy": _run_hardy,
    "gauss": _run_gauss,
}


def run(cfg: ExperimentConfig, only: Optional[Sequence[int]] = None,
        scale: float = 1.0, echo=click.echo) -> int:
    """Execute one validated experiment; returns the process exit code."""
    if cfg.out_csv is not None and cfg.command in ("limit", "verify"):
        raise ConfigError("config.output.csv",
                          f"{cfg.command} produces no sweep rows")

    if cfg.command == "verify":
        outcomes = run_all(only=only, seed=cfg.quad.rng_seed, scale=scale)
        for o in outcomes:
            echo(format_outcome(o))
        npass = sum(1 for o in outcomes if o.passed)
        total_s = sum(o.seconds for o in outcomes)
        echo(f"{npass}/{len(outcomes)} criteria passed [{total_s:.1f}s]")
        report = {"command": "verify", "manifest": manifest_dict(),
                  "outcomes": [outcome_dict(o) for o in outcomes],
                  "criteria_passed": npass,
                  "criteria_total": len(outcomes),
                  "all_passed": npass == len(outcomes)}
        if cfg.out_json is not None:
            _write_text(cfg.out_json,
                        json.dumps(report, indent=2, default=_jsonable) + "\n")
            echo(f"wrote {cfg.out_json}")
        return 0 if npass == len(outcomes) else 2

    results, rows, fit = _RUNNERS[cfg.command](cfg)
    report = {"command": cfg.command, "inputs": _inputs_dict(cfg),
              "results": results}
    if rows is not None:
        report["rows"] = [{"s": float(s), **_est(e)} for s, e in rows]
        if cfg.out_csv is not None:
            _write_text(cfg.out_csv, _csv_text(cfg.command, rows, fit))
    text = json.dumps(report, indent=2, default=_jsonable) + "\n"
    if cfg.out_json is not None:
        _write_text(cfg.out_json, text)
        echo(f"wrote {cfg.out_json}")
        if cfg.out_csv is not None and rows is not None:
            echo(f"wrote {cfg.out_csv}")
    else:
        echo(text, nl=False)
    return 0


# ---------------------------------------------------------------------------
# flag handling


def _read_doc(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"invalid YAML: {exc}") from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError("config", "expected a mapping at top level")
    return doc


def _yaml_flag(text: str, flag: str):
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(flag, f"invalid YAML: {exc}") from exc


def _merge(command: Optional[str], kw: dict) -> ExperimentConfig:
    """Overlay flag values on the config document, flags winning."""
    doc = _read_doc(kw["config_path"]) if kw.get("config_path") else {}
    if command is not None:
        doc["command"] = command
    for flag, key in (("d", "d"), ("p", "p"), ("s", "s"), ("delta", "delta"),
                      ("big_r", "R")):
        if kw.get(flag) is not None:
            doc[key] = kw[flag]
    if kw.get("s_grid_text") is not None:
        try:
            doc["s_grid"] = [float(t) for t in
                             kw["s_grid_text"].split(",") if t.strip()]
        except ValueError:
            raise ConfigError("flag --s-grid",
                              "expected comma separated numbers") from None
    for flag, key in (("field_yaml", "field"), ("omega_yaml", "omega"),
                      ("e_yaml", "e")):
        if kw.get(flag) is not None:
            doc[key] = _yaml_flag(kw[flag], "flag --" + key)
    if kw.get("seed") is not None or kw.get("budget") is not None:
        q = dict(doc.get("quadrature") or {})
        if kw.get("seed") is not None:
            q["rng_seed"] = kw["seed"]
        if kw.get("budget") is not None:
            q["sample_budget"] = kw["budget"]
        doc["quadrature"] = q
    if kw.get("json_path") is not None or kw.get("csv_path") is not None:
        out = dict(doc.get("output") or {})
        if kw.get("json_path") is not None:
            out["json"] = kw["json_path"]
        if kw.get("csv_path") is not None:
            out["csv"] = kw["csv_path"]
        doc["output"] = out
    if doc.get("command") == "verify":
        doc.setdefault("d", 1)  # verify has no ambient dimension of its own
    return parse_config(doc)


def _cli_run(command: Optional[str], kw: dict,
             only: Optional[Sequence[int]] = None, scale: float = 1.0) -> None:
    try:
        cfg = _merge(command, kw)
        code = run(cfg, only=only, scale=scale)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except (ValueError, QuadratureError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    sys.exit(code)


def _shared(fn):
    opts = [
        click.option("--config", "config_path", default=None,
                     help="YAML experiment config; flags override its keys."),
        click.option("--field", "field_yaml", default=None,
                     help="field spec, inline YAML"),
        click.option("--omega", "omega_yaml", default=None,
                     help="domain region, inline YAML"),
        click.option("--e", "e_yaml", default=None,
                     help="measured set, inline YAML"),
        click.option("--d", type=int, default=None,
                     help="ambient dimension (1, 2 or 3)"),
        click.option("--p", type=float, default=None,
                     help="integrability exponent"),
        click.option("--s", type=float, default=None,
                     help="single fractional order in (0,1)"),
        click.option("--s-grid", "s_grid_text", default=None,
                     help="comma separated s values to sweep"),
        click.option("--R", "big_r", type=float, default=None,
                     help="tail truncation / near-far split radius"),
        click.option("--delta", type=float, default=None,
                     help="boundary margin for the weighted-norm bound"),
        click.option("--seed", type=int, default=None,
                     help="Monte Carlo seed"),
        click.option("--budget", type=int, default=None,
                     help="Monte Carlo sample budget"),
        click.option("--json", "json_path", default=None,
                     help="write the JSON report to this path"),
        click.option("--csv", "csv_path", default=None,
                     help="write sweep rows to this path"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


@click.group(invoke_without_command=True)
@click.option("--config", "config_path", default=None,
              help="run the command named inside this YAML config")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str]) -> None:
    """Localized fractional seminorms, masses at infinity and their s -> 0
    limits."""
    if ctx.invoked_subcommand is not None:
        return
    if config_path is None:
        click.echo(ctx.get_help())
        ctx.exit(0)
    _cli_run(None, {"config_path": config_path})


@main.command()
@_shared
def alpha(**kw):
    """Mass at infinity of a field, analytic route plus optional fixed-s
    tail integral."""
    _cli_run("alpha", kw)


@main.command()
@_shared
def sweep(**kw):
    """Sweep the truncated tail integral over an s grid and extrapolate
    the mass at infinity."""
    _cli_run("sweep", kw)


@main.command()
@_shared
def seminorm(**kw):
    """Localized Gagliardo seminorm: breakdown at fixed s, or an s sweep
    with extrapolation."""
    _cli_run("seminorm", kw)


@main.command()
@_shared
def perimeter(**kw):
    """Localized fractional perimeter of a set at fixed s or along an
    s sweep."""
    _cli_run("perimeter", kw)


@main.command()
@_shared
def limit(**kw):
    """Evaluate every applicable s -> 0 limit functional and cross-check
    them against each other."""
    _cli_run("limit", kw)


@main.command()
@_shared
def hardy(**kw):
    """Weighted-norm lower bound versus the scaled seminorm at small s."""
    _cli_run("hardy", kw)


@main.command()
@_shared
def gauss(**kw):
    """Gaussian-weighted fractional perimeter sweep with its closed-form
    limit."""
    _cli_run("gauss", kw)


@main.command()
@_shared
@click.option("--only", "only_text", default=None,
              help="comma separated criterion ids to run")
@click.option("--scale", type=float, default=1.0,
              help="multiply every Monte Carlo budget")
def verify(only_text, scale, **kw):
    """Run the built-in acceptance checks and report one verdict per
    criterion (exit 2 on any failure)."""
    only = None
    if only_text is not None:
        try:
            only = [int(t) for t in only_text.split(",") if t.strip()]
        except ValueError:
            click.echo("error: flag --only: expected comma separated integers",
                       err=True)
            sys.exit(1)
    _cli_run("verify", kw, only=only, scale=scale)


if __name__ == "__main__":
    main()
