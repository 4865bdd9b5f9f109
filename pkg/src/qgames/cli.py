"""Run scenario files and write reproducible JSON or CSV reports.

    qgames run scenarios/ewl_pd_quantum.yaml
    qgames sweep scenarios/pd3_gamma_sweep.yaml --format csv --out pd3.csv

Exit codes: 0 success, 2 configuration error, 3 numeric precondition failure.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
import time
from pathlib import Path
from typing import Any, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from . import __version__
from .channels import su2_angles
from .errors import PreconditionError
from .games import Mixture, Params, evaluate, nash_search, outcome_probabilities, verify_epsilon_nash
from .measurement import OutcomeDistribution, sample
from .protocols import bv, cournot, ewl, meyer, mw

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

Protocol = Literal["meyer", "ewl", "mw", "minority", "cournot", "stackelberg", "bv"]
Analysis = Literal["evaluate", "nash-verify", "nash-search", "sweep"]


class ConfigError(Exception):
    pass


# numeric expressions such as "pi/2" or "3*pi/4"

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos}


def parse_number(text: str) -> Union[float, complex]:
    """Evaluate a small arithmetic expression; raise ``ValueError`` otherwise."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return node.value
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS
                and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression {text!r}")
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"unsupported expression {text!r}") from exc
    return ev(tree)


def resolve_numbers(obj):
    """Replace numeric-expression strings anywhere in a parsed config by their values."""
    if isinstance(obj, dict):
        return {k: resolve_numbers(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [resolve_numbers(v) for v in obj]
    if isinstance(obj, str):
        try:
            return parse_number(obj)
        except (ValueError, ZeroDivisionError, OverflowError):
            return obj
    return obj


# scenario schema


class SweepSpec(BaseModel):
    parameter: str
    values: Optional[list[float]] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    num: Optional[int] = Field(None, ge=0)

    @field_validator("parameter", mode="before")
    @classmethod
    def _single(cls, v):
        if not isinstance(v, str):
            raise ValueError("exactly one swept parameter is supported")
        return v

    def grid(self) -> list[float]:
        if self.values is not None:
            return [float(v) for v in self.values]
        if None in (self.start, self.stop, self.num):
            raise ValueError("sweep needs either values or start, stop and num")
        return [float(v) for v in np.linspace(self.start, self.stop, self.num)]


class OutputSpec(BaseModel):
    path: Optional[str] = None
    format: Literal["json", "csv"] = "json"


class ScenarioConfig(BaseModel):
    protocol: Protocol
    analysis: Analysis = "evaluate"
    parameters: dict[str, Any] = Field(default_factory=dict)
    profile: Optional[Any] = None
    grid: Optional[Union[int, list[int]]] = None
    refine_passes: int = Field(1, ge=0)
    seed: int = 0
    tolerance: float = Field(1e-3, gt=0)
    sweep: Optional[SweepSpec] = None
    output: OutputSpec = Field(default_factory=OutputSpec)


def _format_validation(exc: ValidationError, prefix: str = "") -> str:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"])
        lines.append(f"{prefix}{loc}: {err['msg']}")
    return "\n".join(lines)


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("scenario file must hold a mapping")
    try:
        return ScenarioConfig.model_validate(resolve_numbers(raw))
    except ValidationError as exc:
        raise ConfigError(_format_validation(exc)) from exc


# serialization


def _round(x: float) -> float:
    return float(f"{x:.12g}")


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj)) + 0.0
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        if abs(z.imag) < 1e-15:
            return _round(z.real) + 0.0
        return {"re": _round(z.real) + 0.0, "im": _round(z.imag) + 0.0}
    if isinstance(obj, BaseModel):
        return to_jsonable(obj.model_dump())
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


def flatten(obj, prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            out.update(flatten(v, f"{prefix}{i}."))
    else:
        out[prefix[:-1]] = obj
    return out


# protocol handlers


def _validated(model, params: dict, label: str = "parameters"):
    try:
        return model.model_validate(params)
    except ValidationError as exc:
        raise ConfigError(_format_validation(exc, f"{label}.")) from exc


def _distribution(labels, probs) -> dict[str, float]:
    # round-off can leave tiny negative probabilities
    return {k: (float(p) if abs(p) > 1e-15 else 0.0) for k, p in zip(labels, probs)}


def _sampled(labels, probs, seed: int) -> str:
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    return sample(OutcomeDistribution(tuple(labels), p / p.sum()), seed)


def _handle_meyer(sc: ScenarioConfig, params: dict, grid) -> dict:
    def move(key):
        if key not in params:
            return meyer.hadamard_move()
        u, v = params[key]
        return meyer.meyer_unitary(complex(u), complex(v))
    a, b = move("q_first"), move("q_second")
    ps = params.get("p", [0.0, 0.25, 0.5, 0.75, 1.0])
    ps = ps if isinstance(ps, list) else [ps]
    rows = []
    for p in ps:
        out = meyer.meyer_play(a, float(p), b)
        rows.append({"p": float(p), "payoff_p": out.payoff_p, "payoff_q": out.payoff_q,
                     "prob_heads": float(np.real(out.final_state[0, 0]))})
    res: dict[str, Any] = {"plays": rows}
    if sc.analysis in ("nash-verify", "nash-search"):
        cert = meyer.midgame_saddle_certificate(points=int(grid or 200))
        res["midgame_saddle"] = {"p": cert.p, "u": cert.u, "v": cert.v, "value": cert.value,
                                 "p_gain": cert.p_gain, "q_gain": cert.q_gain,
                                 "certified": max(cert.p_gain, cert.q_gain) <= sc.tolerance}
    return res


_NAMED_EWL = {
    "ewl": {"C": (0.0, 0.0), "D": (math.pi, 0.0), "Q": (0.0, math.pi / 2)},
    "pd3": {"C": (0.0, 0.0), "D": (math.pi / 2, math.pi / 2), "iY": (math.pi / 2, 0.0)},
    "full": {"C": (0.0, 0.0, 0.0)},
}


def _ewl_tables(params: dict) -> dict:
    p = dict(params)
    table = p.get("payoffs", "pd")
    if table == "pd":
        p["payoffs"] = ewl.pd_table()
    elif table == "pd3":
        p["payoffs"] = ewl.pd3_table()
    elif table == "minority":
        p["payoffs"] = ewl.minority_table(int(p.get("players", 3)))
    return p


def _ewl_profile(sc: ScenarioConfig, box: str, n: int):
    prof = sc.profile
    if prof is None:
        raise ConfigError("profile: required for this analysis")
    if isinstance(prof, (str, list)) and not isinstance(prof, list):
        prof = [prof] * n
    if len(prof) != n:
        raise ConfigError(f"profile: need {n} strategies, got {len(prof)}")
    out = []
    for s in prof:
        if isinstance(s, str):
            if s not in _NAMED_EWL[box]:
                raise ConfigError(f"profile: unknown strategy {s!r} for box {box}")
            out.append(Params(_NAMED_EWL[box][s]))
        else:
            out.append(Params([float(x) for x in s]))
    return out


def _report_equilibrium(rep, tol: float) -> dict:
    return {"epsilon": rep.epsilon, "gains": rep.gains, "payoffs": rep.payoffs,
            "is_epsilon_nash": rep.is_epsilon_nash(tol), "threshold": tol, "method": rep.method,
            "grid": list(rep.grid),
            "profile": [list(s.values) if isinstance(s, Params) else None for s in rep.profile],
            "deviations": [list(s.values) if isinstance(s, Params) else None for s in rep.deviations]}


def _game_analysis(sc: ScenarioConfig, spec, profile, grid) -> dict:
    probs = outcome_probabilities(spec, profile)
    res: dict[str, Any] = {
        "payoffs": evaluate(spec, profile),
        "probabilities": _distribution(spec.povm.labels, probs),
        "sampled_outcome": _sampled(spec.povm.labels, probs, sc.seed),
    }
    if sc.analysis == "nash-verify":
        res["equilibrium"] = _report_equilibrium(verify_epsilon_nash(spec, profile, grid, sc.refine_passes), sc.tolerance)
    elif sc.analysis == "nash-search":
        res["equilibrium"] = _report_equilibrium(nash_search(spec, profile, grid), sc.tolerance)
    return res


def _handle_ewl(sc: ScenarioConfig, params: dict, grid) -> dict:
    cfg = _validated(ewl.EWLConfig, _ewl_tables(params))
    spec = ewl.ewl_spec(cfg)
    return _game_analysis(sc, spec, _ewl_profile(sc, cfg.strategy_box, cfg.players), grid)


def _handle_minority(sc: ScenarioConfig, params: dict, grid) -> dict:
    p = {"players": 4, "gamma": math.pi / 2, "flip": "sigmaX", "strategy_box": "full", "payoffs": "minority"}
    p.update(params)
    cfg = _validated(ewl.EWLConfig, _ewl_tables(p))
    spec = ewl.ewl_spec(cfg)
    prof = sc.profile
    if prof in ("quoted", "transposed"):
        u = ewl.minority4_quoted_profile() if prof == "quoted" else ewl.minority4_transposed_profile()
        profile = [Params(su2_angles(u))] * cfg.players
    else:
        profile = _ewl_profile(sc, cfg.strategy_box, cfg.players)
    return _game_analysis(sc, spec, profile, grid)


def _handle_mw(sc: ScenarioConfig, params: dict, grid) -> dict:
    p = dict(params)
    table = p.pop("table", "bos")
    if "amplitudes" not in p:
        p["amplitudes"] = mw.entangled_amplitudes(p.pop("a", 1.0), p.pop("b", 0.0))
    if table == "bos":
        ta, tb = mw.bos_tables(float(p.pop("alpha_value", 3.0)), float(p.pop("beta_value", 2.0)),
                               float(p.pop("gamma_value", 1.0)))
        p.setdefault("alpha", ta.tolist())
        p.setdefault("beta", tb.tolist())
    elif table == "ultimatum":
        ta, tb = mw.ultimatum_tables()
        p.setdefault("alpha", ta.tolist())
        p.setdefault("beta", tb.tolist())
    cfg = _validated(mw.MWConfig, p)
    pq = sc.profile if sc.profile is not None else [1.0, 1.0]
    if not isinstance(pq, list) or len(pq) != 2:
        raise ConfigError("profile: MW profiles are [p, q]")
    pp, qq = float(pq[0]), float(pq[1])
    closed = mw.mw_final_probabilities(cfg, pp, qq)
    pipe = mw.mw_pipeline_probabilities(cfg, pp, qq)
    spec = mw.mw_spec(cfg)
    at, bt = mw.mw_transformed_tables(cfg)
    res: dict[str, Any] = {
        "probabilities": closed.as_dict(),
        "pipeline_max_deviation": float(np.abs(closed.probabilities - pipe.probabilities).max()),
        "payoffs": evaluate(spec, [Mixture((pp, 1 - pp)), Mixture((qq, 1 - qq))]),
        "sampled_outcome": sample(closed, sc.seed),
        "transformed_alpha": at, "transformed_beta": bt,
    }
    if sc.analysis in ("nash-verify", "nash-search"):
        from .errors import NoInteriorEquilibriumError
        from .games import mixed_equilibrium_2x2
        res["pure_equilibria"] = [
            {"actions": [i, j], "payoffs": [at[i, j], bt[i, j]]} for i, j in mw.pure_equilibria_2x2(at, bt)]
        try:
            m = mixed_equilibrium_2x2(at, bt)
            res["mixed_equilibrium"] = {"p": m.p, "q": m.q, "payoffs": list(m.payoffs)}
        except NoInteriorEquilibriumError as exc:
            res["mixed_equilibrium"] = {"none": str(exc)}
    return res


def _handle_cournot(sc: ScenarioConfig, params: dict, grid) -> dict:
    cfg = _validated(cournot.CournotConfig, params)
    eq = cournot.cournot_closed_form(cfg)
    res: dict[str, Any] = {"y": list(eq.y), "profit": list(eq.profit), "q": list(eq.q),
                           "first_order": list(cournot.first_order_conditions(cfg, *eq.y)),
                           "gaussian_profit": list(cournot.gaussian_payoffs(cfg, *eq.y))}
    if sc.analysis in ("nash-verify", "nash-search"):
        eps = cournot.certify_cournot(cfg, int(grid or 2000))
        res["equilibrium"] = {"epsilon": eps, "threshold": sc.tolerance, "is_epsilon_nash": eps <= sc.tolerance,
                              "grid": int(grid or 2000)}
    return res


def _handle_stackelberg(sc: ScenarioConfig, params: dict, grid) -> dict:
    cfg = _validated(cournot.CournotConfig, params)
    r = cournot.stackelberg_solve(cfg)
    return {"y1": r.y1, "y2": r.y2, "profits": list(r.profits), "gap": r.gap,
            "y1_closed_form": r.y1_closed_form}


def _handle_bv(sc: ScenarioConfig, params: dict, grid) -> dict:
    inst = _validated(bv.BVInstance, params)
    run = bv.bv_protocol(inst)
    return {"guessed": run.guessed, "oracle_calls": run.oracle_calls, "amplitude": abs(run.amplitude),
            "correct": run.guessed == inst.a}


HANDLERS = {
    "meyer": _handle_meyer, "ewl": _handle_ewl, "minority": _handle_minority, "mw": _handle_mw,
    "cournot": _handle_cournot, "stackelberg": _handle_stackelberg, "bv": _handle_bv,
}


def run_scenario(sc: ScenarioConfig, grid=None) -> dict:
    """Results section for one scenario (no timing, so it is reproducible)."""
    g = grid if grid is not None else sc.grid
    return HANDLERS[sc.protocol](sc, sc.parameters, g)


def sweep_scenario(sc: ScenarioConfig, grid=None) -> list[dict]:
    if sc.sweep is None:
        raise ConfigError("sweep: a sweep section is required")
    try:
        values = sc.sweep.grid()
    except ValueError as exc:
        raise ConfigError(f"sweep: {exc}") from exc
    rows = []
    for v in values:
        params = dict(sc.parameters)
        params[sc.sweep.parameter] = v
        local = sc.model_copy(update={"parameters": params})
        row = {sc.sweep.parameter: v}
        row.update(flatten(to_jsonable(run_scenario(local, grid))))
        rows.append(row)
    return rows


def build_report(sc: ScenarioConfig, results, elapsed: float) -> dict:
    return {"scenario": sc.model_dump(mode="json"), "results": results, "seed": sc.seed,
            "version": __version__, "timing": {"seconds": elapsed}}


def rows_to_csv(rows: list[dict], leading: tuple[str, ...] = ()) -> str:
    cols: list[str] = list(leading)
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: to_jsonable(v) for k, v in r.items()})
    return buf.getvalue()


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgames", description="Quantum game scenarios and reproduction reports.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "run one scenario"), ("sweep", "sweep one parameter of a scenario")):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("config", help="scenario YAML file")
        s.add_argument("--seed", type=int, help="override the scenario seed")
        s.add_argument("--grid", type=int, help="grid points per parameter axis")
        s.add_argument("--out", help="write the report here instead of stdout")
        s.add_argument("--format", choices=["json", "csv"], help="report format (csv only for sweeps)")
        s.add_argument("--tolerance", type=float, help="epsilon threshold for equilibrium certificates")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        sc = load_scenario(args.config)
        updates = {}
        if args.seed is not None:
            updates["seed"] = args.seed
        if args.tolerance is not None:
            if args.tolerance <= 0:
                raise ConfigError("--tolerance must be positive")
            updates["tolerance"] = args.tolerance
        if updates:
            sc = sc.model_copy(update=updates)
        fmt = args.format or sc.output.format
        out_path = args.out or sc.output.path
        t0 = time.perf_counter()
        if args.command == "run":
            if fmt == "csv":
                raise ConfigError("--format csv is only available for sweeps")
            text = dumps(build_report(sc, run_scenario(sc, args.grid), time.perf_counter() - t0))
        else:
            rows = sweep_scenario(sc, args.grid)
            if fmt == "csv":
                text = rows_to_csv(rows, (sc.sweep.parameter,))
            else:
                text = dumps(build_report(sc, rows, time.perf_counter() - t0))
    except ConfigError as exc:
        print(f"config error:\n{exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PreconditionError as exc:
        print(f"numeric precondition failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if out_path:
        Path(out_path).write_text(text + ("" if text.endswith("\n") else "\n"))
    else:
        sys.stdout.write(text + ("" if text.endswith("\n") else "\n"))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
