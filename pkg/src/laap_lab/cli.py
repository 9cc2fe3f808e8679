"""Command-line front end: ``laap-lab <subcommand> [flags]``.

Every subcommand produces a list of records (ordered key/value maps) that
are written as a ``key = value`` table, CSV or JSON.  Floats are always
printed with ``%.9g`` so identical invocations give identical bytes.

Exit codes: 0 success, 2 invalid input, 3 infeasible problem (no two-shock
solution, infeasible closure), 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence

from laap_lab import action_criteria as ac
from laap_lab import aw_profiles as aw
from laap_lab import oscillator as osc
from laap_lab.eos import PressureLaw
from laap_lab.errors import (
    InfeasibleClosureError,
    IntegrationDomainError,
    InternalConsistencyError,
    LaapLabError,
    NoTwoShockError,
)
from laap_lab.riemann import (
    RiemannData,
    check_two_shock_conditions,
    shock_energy_production,
    solve_middle_state,
)
from laap_lab.subsolution import FixedC, MinC, solve_fan

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4

THREADS_ENV = "LAAP_LAB_THREADS"

Record = dict[str, Any]


class UsageError(Exception):
    """Bad flags or scenario content; maps to exit code 2."""


# ---------------------------------------------------------------------------
# formatting


def fmt_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.9g" % (v + 0.0)  # + 0.0 folds -0.0 into 0.0
    return str(v)


def _json_value(v: Any) -> str:
    if isinstance(v, float):
        return "%.9g" % (v + 0.0) if math.isfinite(v) else "null"
    if isinstance(v, (bool, int, str)) or v is None:
        return json.dumps(v)
    return json.dumps(str(v))


def _json_record(r: Record, indent: str) -> str:
    items = [f'{indent}  {json.dumps(k)}: {_json_value(v)}' for k, v in r.items()]
    return indent + "{\n" + ",\n".join(items) + "\n" + indent + "}"


def render(records: list[Record], fmt: str, many: bool = False) -> str:
    if fmt == "json":
        if many:
            body = ",\n".join(_json_record(r, "  ") for r in records)
            return "[\n" + body + "\n]\n" if records else "[]\n"
        return _json_record(records[0], "") + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = list(records[0].keys()) if records else []
        w.writerow(keys)
        for r in records:
            w.writerow([fmt_value(r[k]) for k in keys])
        return buf.getvalue()
    if many:
        keys = list(records[0].keys()) if records else []
        rows = [keys] + [[fmt_value(r[k]) for k in keys] for r in records]
        widths = [max(len(row[i]) for row in rows) for i in range(len(keys))]
        return "".join("  ".join(c.rjust(wd) for c, wd in zip(row, widths)).rstrip() + "\n" for row in rows)
    return "".join(f"{k} = {fmt_value(v)}\n" for k, v in records[0].items())


# ---------------------------------------------------------------------------
# argument helpers


def _float(s: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal number: {s!r}") from None


def _closure(s: str):
    if s == "min-c":
        return MinC()
    if s.startswith("fixed:"):
        return FixedC(_float(s[len("fixed:"):]))
    raise argparse.ArgumentTypeError(f"closure must be 'min-c' or 'fixed:<C>', got {s!r}")


def _float_list(s: str) -> list[float]:
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {s!r}") from None


def _data(a: argparse.Namespace) -> RiemannData:
    return RiemannData(a.rho_minus, a.v_minus, a.rho_plus, a.v_plus, PressureLaw(a.kappa, a.gamma))


def _middle(data: RiemannData):
    # data without a two-shock solution are "infeasible" (exit 3) here,
    # not a malformed request
    if not check_two_shock_conditions(data):
        raise NoTwoShockError("Riemann data do not satisfy the two-shock condition")
    return solve_middle_state(data)


def _threads() -> int | None:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


# ---------------------------------------------------------------------------
# subcommands


def cmd_riemann(a) -> list[Record]:
    data = _data(a)
    cond = check_two_shock_conditions(data)
    ts = _middle(data)
    law = data.law
    return [{
        "rho_m": ts.rho_m,
        "v_m": ts.v_m,
        "nu_minus": ts.nu_minus,
        "nu_plus": ts.nu_plus,
        "two_shock_radicand": cond.radicand,
        "velocity_jump": cond.jump,
        "jump_below_bound": cond.jump < cond.bound,
        "jump_squared_above_radicand": cond.jump_squared > cond.radicand,
        "two_shock_conditions": cond.satisfied,
        "energy_production_minus": shock_energy_production(data.left, ts.middle, ts.nu_minus, law),
        "energy_production_plus": shock_energy_production(ts.middle, data.right, ts.nu_plus, law),
    }]


def cmd_laap(a) -> list[Record]:
    data = _data(a)
    ts = _middle(data)
    bound = ac.l_diff_derivative_bound(ts, data)
    theorem = ac.laap_theorem_check(ts, data)
    cor = ac.laap_corollary_check(data)
    if theorem:
        text = "LAAP prefers the two-shock solution near rho_m"
    else:
        text = "inconclusive: derivative bound is not positive"
    return [{
        "rho_m": ts.rho_m,
        "v_m": ts.v_m,
        "l_diff_derivative_bound": bound,
        "theorem": theorem,
        "corollary": cor.holds,
        "corollary_value": cor.value,
        "verdict": text,
    }]


def cmd_subsolution(a) -> list[Record]:
    data = _data(a)
    s = solve_fan(data, a.rho1, a.closure, _middle(data))
    return [{
        "rho1": s.rho1,
        "v1_a": s.v1_a,
        "v1_b": s.v1_b,
        "u1_g11": s.u1.g11,
        "u1_g12": s.u1.g12,
        "C": s.C,
        "nu_minus": s.nu_minus,
        "nu_plus": s.nu_plus,
        "gap": s.gap,
        "strict": s.is_strict,
        "closure": s.closure_label,
    }]


def cmd_compare(a) -> list[Record]:
    data = _data(a)
    dom = ac.FanDomain(a.L3, a.T)
    ts = _middle(data)
    s = solve_fan(data, a.rho1, a.closure, ts)
    lv = ac.laap_verdict(ts, s, data, dom)
    ev = ac.dissipation_difference(ts, s, data, dom)
    return [{
        "rho1": s.rho1,
        "C": s.C,
        "closure": s.closure_label,
        "action_two_shock": ac.action_two_shock(ts, data, dom),
        "action_convex_integration": ac.action_convex_integration(s, dom, wedge=(ts.nu_minus, ts.nu_plus)),
        "action_margin": lv.margin,
        "laap_verdict": lv.preferred.value,
        "dissipation_difference": ev.margin,
        "entropy_rate_verdict": ev.preferred.value,
    }]


def _sweep_point(data, ts, dom, closure, rho1) -> Record:
    try:
        s = solve_fan(data, rho1, closure, ts)
    except InfeasibleClosureError:
        nan = float("nan")
        return {"rho1": rho1, "C": nan, "l_diff": nan, "action_margin": nan, "dissipation_difference": nan}
    return {
        "rho1": rho1,
        "C": s.C,
        "l_diff": ac.l_diff(ts, rho1, s.C, data.law),
        "action_margin": ac.laap_verdict(ts, s, data, dom).margin,
        "dissipation_difference": ac.dissipation_difference(ts, s, data, dom).margin,
    }


def cmd_sweep(a) -> list[Record]:
    if a.steps < 1:
        raise UsageError("--steps must be >= 1")
    data = _data(a)
    dom = ac.FanDomain(a.L3, a.T)
    ts = _middle(data)
    lo = a.rho1_from
    hi = ts.rho_m if a.rho1_to is None else a.rho1_to
    if a.steps == 1:
        grid = [lo]
    else:
        grid = [lo + (hi - lo) * i / (a.steps - 1) for i in range(a.steps - 1)] + [hi]
    workers = _threads() or min(32, os.cpu_count() or 1)
    if workers == 1 or len(grid) == 1:
        return [_sweep_point(data, ts, dom, a.closure, r) for r in grid]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        # map preserves input order
        return list(ex.map(lambda r: _sweep_point(data, ts, dom, a.closure, r), grid))


def _numeric_exit_action(c: float, t1: float, dt: float) -> float:
    # approach the origin on the circle c + 1, reaching it at t = 1, then switch to c
    approach = c + 1.0
    start = osc.exact_trajectory(approach, 1.0 - math.pi, 0.0)
    traj = osc.integrate_with_switching(start, dt, 1.0 + t1 + 0.5 * (math.pi - t1), c)
    if traj.switch_times.size == 0:
        raise InternalConsistencyError("numeric trajectory never reached the origin")
    ts = float(traj.switch_times[0])
    return osc.trajectory_action(traj, ts, ts + t1, c)


def cmd_oscillator(a) -> list[Record]:
    closed = osc.action_exit_circle(a.c, a.t1)
    rec: Record = {"c": a.c, "t1": a.t1, "action": closed}
    if a.numeric:
        num = _numeric_exit_action(a.c, a.t1, a.dt)
        rec["action_numeric"] = num
        rec["action_numeric_error"] = abs(num - closed)
    rec["candidates"] = ",".join(fmt_value(float(c)) for c in a.candidates)
    rec["selected_c"] = osc.select_exit_circle(a.t1, a.candidates)
    return [rec]


def cmd_aw(a) -> list[Record]:
    chi0, c1, c2 = a.chi0, a.c1, a.c2
    t_star = aw.vanishing_time(chi0, c1)
    horizon = max(t_star, a.t_bar)
    if horizon <= 0.0:
        raise UsageError("need chi0 > 0 or t_bar > 0")
    spacing = aw.GRID_FRACTION * (t_star if t_star > 0.0 else horizon)
    n_int = min(int(math.ceil(horizon / spacing - 1e-9)), 10_000_000)
    grid = [horizon * i / n_int for i in range(n_int + 1)]
    common = dict(meas_omega_prime=a.meas, background_internal=a.background, n=a.n)
    dom_p = aw.dominating_profile(chi0, c1, grid, c2=c2, **common)
    rec: Record = {
        "t_star": t_star,
        "dominating_energy_0": aw.total_energy(dom_p, 0.0),
        "dominating_energy_t_bar": aw.total_energy(dom_p, a.t_bar),
        "dominating_rate_0": aw.dissipation_rate(dom_p, 0.0),
        "dominating_action": aw.aw_action(dom_p, a.t_bar),
    }
    if chi0 > 0.0:
        adm = aw.stepped_profile(chi0, c1, c2, dt=spacing, **common)
        t_adm = min(a.t_bar, adm.t_end)
        ref = aw.entropy_rate_dominate(adm, a.delta)
        t_ref = min(a.t_bar, ref.t_end)
        rec.update({
            "admissible_t_end": adm.t_end,
            "admissible": bool(aw.check_admissible(adm)),
            "admissible_energy_0": aw.total_energy(adm, 0.0),
            "admissible_rate_0": aw.dissipation_rate(adm, 0.0),
            "admissible_action": aw.aw_action(adm, t_adm),
            "delta": a.delta,
            "refined_t_end": ref.t_end,
            "refined_admissible": bool(aw.check_admissible(ref)),
            "refined_rate_0": aw.dissipation_rate(ref, 0.0),
            "rate_change": aw.dissipation_rate(ref, 0.0) - aw.dissipation_rate(adm, 0.0),
            "action_common_t": t_ref,
            "action_change": aw.aw_action(ref, t_ref) - aw.aw_action(adm, t_ref),
        })
    verdict = aw.laap_verdict_aw([dom_p], a.t_bar, a.delta)
    rec["zero_action"] = -a.t_bar * a.background
    rec["infimum_is_zero_profile"] = verdict.infimum_is_zero_profile
    rec["minimizer_exists"] = verdict.minimizer_exists
    rec["note"] = verdict.note
    return [rec]


# ---------------------------------------------------------------------------
# parser


def _add_riemann_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rho-minus", type=_float, required=True)
    p.add_argument("--v-minus", type=_float, required=True)
    p.add_argument("--rho-plus", type=_float, required=True)
    p.add_argument("--v-plus", type=_float, required=True)
    p.add_argument("--kappa", type=_float, default=1.0)
    p.add_argument("--gamma", type=_float, default=2.0)


def _add_output_flags(p: argparse.ArgumentParser, default: str = "table") -> None:
    p.add_argument("--format", choices=("table", "csv", "json"), default=default)
    p.add_argument("--output", default=None, help="write to this file instead of stdout")


_COMMANDS: dict[str, tuple[Callable[[argparse.Namespace], list[Record]], bool]] = {
    "riemann": (cmd_riemann, False),
    "laap": (cmd_laap, False),
    "subsolution": (cmd_subsolution, False),
    "compare": (cmd_compare, False),
    "sweep": (cmd_sweep, True),
    "oscillator": (cmd_oscillator, False),
    "aw": (cmd_aw, False),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laap-lab", description="Least-action and entropy-rate admissibility lab.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("riemann", help="two-shock middle state and shock energy production")
    _add_riemann_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("laap", help="least-action derivative bound, theorem and corollary checks")
    _add_riemann_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("subsolution", help="fan sub-solution at a given middle density")
    _add_riemann_flags(p)
    p.add_argument("--rho1", type=_float, required=True)
    p.add_argument("--closure", type=_closure, default=MinC(), help="min-c or fixed:<C>")
    _add_output_flags(p)

    p = sub.add_parser("compare", help="actions and dissipation of two-shock vs fan solutions")
    _add_riemann_flags(p)
    p.add_argument("--rho1", type=_float, required=True)
    p.add_argument("--closure", type=_closure, default=MinC())
    p.add_argument("--T", type=_float, default=1.0)
    p.add_argument("--L3", type=_float, default=1.0)
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="compare over a grid of middle densities")
    _add_riemann_flags(p)
    p.add_argument("--rho1-from", type=_float, required=True)
    p.add_argument("--rho1-to", type=_float, default=None, help="defaults to rho_m")
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--closure", type=_closure, default=MinC())
    p.add_argument("--T", type=_float, default=1.0)
    p.add_argument("--L3", type=_float, default=1.0)
    _add_output_flags(p, default="csv")

    p = sub.add_parser("oscillator", help="exit-circle action and least-action selection")
    p.add_argument("--c", type=_float, default=1.0)
    p.add_argument("--t1", type=_float, required=True)
    p.add_argument("--numeric", action="store_true", help="also integrate the switching ODE")
    p.add_argument("--dt", type=_float, default=1e-3)
    p.add_argument("--candidates", type=_float_list, default=[1.0, 1.5, 2.0, 5.0])
    _add_output_flags(p)

    p = sub.add_parser("aw", help="kinetic-energy profile energy, rate, action and dominance")
    p.add_argument("--chi0", type=_float, required=True)
    p.add_argument("--c1", type=_float, required=True)
    p.add_argument("--c2", type=_float, default=0.0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--meas", type=_float, default=1.0)
    p.add_argument("--background", type=_float, default=0.0)
    p.add_argument("--t-bar", type=_float, required=True)
    p.add_argument("--delta", type=_float, default=0.1)
    _add_output_flags(p)

    p = sub.add_parser("scenario", help="run a JSON scenario file")
    p.add_argument("--file", required=True)
    return parser


# ---------------------------------------------------------------------------
# scenarios

_KIND_ANALYSES = {
    "riemann": ("riemann", "laap", "subsolution", "compare", "sweep"),
    "oscillator": ("oscillator",),
    "aw": ("aw",),
}
_OUTPUT_KEYS = {"format", "path"}


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for act in parser._subparsers._group_actions:  # type: ignore[union-attr]
        if isinstance(act, argparse._SubParsersAction):
            return act.choices[name]
    raise KeyError(name)


def scenario_argv(spec: Any, parser: argparse.ArgumentParser) -> list[str]:
    """Translate a scenario object into the argv of the matching subcommand."""
    if not isinstance(spec, dict):
        raise UsageError("scenario must be a JSON object")
    unknown = set(spec) - {"kind", "parameters", "output"}
    if unknown:
        raise UsageError(f"unknown scenario keys: {sorted(unknown)}")
    kind = spec.get("kind")
    if kind not in _KIND_ANALYSES:
        raise UsageError(f"scenario kind must be one of {sorted(_KIND_ANALYSES)}, got {kind!r}")
    params = dict(spec.get("parameters", {}))
    if not isinstance(spec.get("parameters", {}), dict):
        raise UsageError("parameters must be an object")
    analysis = params.pop("analysis", _KIND_ANALYSES[kind][0])
    if analysis not in _KIND_ANALYSES[kind]:
        raise UsageError(f"analysis {analysis!r} not available for kind {kind!r}")
    sp = _subparser(parser, analysis)
    flags = {}
    for act in sp._actions:
        if act.option_strings and act.dest not in ("help", "format", "output"):
            flags[act.dest] = act
    unknown = set(params) - set(flags)
    if unknown:
        raise UsageError(f"unknown parameters for {analysis}: {sorted(unknown)}")
    missing = [d for d, act in flags.items() if act.required and d not in params]
    if missing:
        raise UsageError(f"missing parameters for {analysis}: {sorted(missing)}")
    argv = [analysis]
    for dest, value in params.items():
        act = flags[dest]
        opt = act.option_strings[0]
        if isinstance(act, argparse._StoreTrueAction):
            if not isinstance(value, bool):
                raise UsageError(f"parameter {dest!r} must be true or false")
            if value:
                argv.append(opt)
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float, str, list)):
            raise UsageError(f"parameter {dest!r} has an unsupported value {value!r}")
        if isinstance(value, list):
            value = ",".join(repr(float(v)) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        argv += [opt, str(value)]
    out = spec.get("output", {})
    if not isinstance(out, dict):
        raise UsageError("output must be an object")
    bad = set(out) - _OUTPUT_KEYS
    if bad:
        raise UsageError(f"unknown output keys: {sorted(bad)}")
    if "format" in out:
        argv += ["--format", str(out["format"])]
    if "path" in out:
        argv += ["--output", str(out["path"])]
    return argv


# ---------------------------------------------------------------------------
# entry points


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace | int:
    try:
        return parser.parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    ns = _parse(parser, argv)
    if isinstance(ns, int):
        return ns
    try:
        if ns.command == "scenario":
            try:
                with open(ns.file, encoding="utf-8") as fh:
                    spec = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read scenario {ns.file!r}: {exc}") from None
            ns = _parse(parser, scenario_argv(spec, parser))
            if isinstance(ns, int):
                return ns
        func, many = _COMMANDS[ns.command]
        records = func(ns)
        _emit(render(records, ns.format, many), ns.output)
    except (NoTwoShockError, InfeasibleClosureError) as exc:
        print(f"laap-lab: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InternalConsistencyError, IntegrationDomainError) as exc:
        print(f"laap-lab: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, LaapLabError, ValueError, OSError) as exc:
        print(f"laap-lab: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
