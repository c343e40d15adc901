"""Command-line interface.

Subcommands: dist, exact, simulate, grid, critical, capital, session-replay,
serve.  Sweep flags accept ``start:stop:step`` ranges (inclusive of stop) or
comma lists.  File-producing commands write a ``<output>.manifest.json``
sidecar and, with ``--plot``, PNG figures alongside the delimited output.

Exit codes: 0 success, 1 domain error (single JSON error line on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from .analytics import (
    EstimatorError,
    critical_spread,
    exact_omega,
    mc_omega,
    mc_omega_session,
    omega_grid,
)
from .capital import CapitalError, capital_grid, solve_capital
from .errors import error_code
from .session import SessionError, replay
from .store import StoreError, read_log
from .wheel import AMERICAN, EUROPEAN, WheelError, WheelSpec, make_model

WHEELS = {"european": EUROPEAN, "american": AMERICAN}


def _parse_floats(text: str) -> list[float]:
    """``start:stop:step`` range (stop inclusive) or comma list or scalar."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"range {text!r} must have step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    try:
        return [float(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None


def _parse_ints(text: str) -> list[int]:
    values = _parse_floats(text)
    out = []
    for v in values:
        if v != int(v):
            raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
        out.append(int(v))
    return out


def _scalar(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _family_and_params(parser: argparse.ArgumentParser, args) -> tuple[str, list[float]]:
    """Resolve the model family and its parameter values from the flags."""
    delta = getattr(args, "delta", None)
    beta = getattr(args, "beta", None)
    family = getattr(args, "family", None)
    if delta is not None and beta is not None:
        parser.error("--delta and --beta are mutually exclusive")
    if delta is not None:
        if family not in (None, "gaussian"):
            parser.error(f"--delta implies --family gaussian, not {family}")
        return "gaussian", delta if isinstance(delta, list) else [delta]
    if beta is not None:
        if family not in (None, "linear"):
            parser.error(f"--beta implies --family linear, not {family}")
        return "linear", beta if isinstance(beta, list) else [beta]
    if family in (None, "uniform"):
        return "uniform", [0.0]
    parser.error(f"--family {family} needs --delta or --beta values")
    raise AssertionError("unreachable")


def _print_estimate(est, extra: dict | None = None) -> None:
    fields = {
        "omega": est.omega,
        "std_error": est.std_error,
        "trials": est.trials,
        "estimator": est.estimator,
    }
    if est.bunching is not None:
        fields["bunching"] = est.bunching
    fields.update(extra or {})
    for key, value in fields.items():
        print(f"{key} = {value}")


def _estimate_payload(est, **extra) -> dict:
    payload = {
        "omega": est.omega,
        "std_error": est.std_error,
        "trials": est.trials,
        "estimator": est.estimator,
        "bunching": est.bunching,
    }
    payload.update(extra)
    return payload


def _write_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _manifest_params(args, skip=("func", "out", "plot")) -> dict:
    params = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or callable(value):
            continue
        params[key] = value
    return params


def _finish_manifest(command: str, args, outputs: list[Path], started: float) -> None:
    from .artifacts import write_manifest

    write_manifest(
        command,
        _manifest_params(args),
        getattr(args, "seed", None),
        outputs,
        time.perf_counter() - started,
    )


# -- subcommand handlers ----------------------------------------------------


def _cmd_dist(parser, args) -> int:
    started = time.perf_counter()
    family, params = _family_and_params(parser, args)
    model = make_model(family, params[0], WHEELS[args.wheel])
    if args.out is None:
        if args.plot:
            parser.error("--plot needs --out to name the figure")
        print(",".join(["k", "probability"]))
        for k, p in enumerate(model.probabilities):
            print(f"{k},{float(p)!r}")
        return 0
    from .artifacts import distribution_csv

    outputs = [distribution_csv(model, args.out)]
    if args.plot:
        from .plots import plot_distribution

        outputs.append(plot_distribution(model, Path(args.out).with_suffix(".png")))
    _finish_manifest("dist", args, outputs, started)
    return 0


def _cmd_exact(parser, args) -> int:
    started = time.perf_counter()
    family, params = _family_and_params(parser, args)
    model = make_model(family, params[0], WHEELS[args.wheel])
    est = exact_omega(model, args.n, budget=args.budget)
    _print_estimate(est, {"family": family, "param": params[0], "n": args.n})
    if args.out:
        payload = _estimate_payload(est, family=family, param=params[0], n=args.n)
        outputs = [_write_json(args.out, payload)]
        _finish_manifest("exact", args, outputs, started)
    return 0


def _cmd_simulate(parser, args) -> int:
    started = time.perf_counter()
    family, params = _family_and_params(parser, args)
    model = make_model(family, params[0], WHEELS[args.wheel])
    if args.estimator == "independent":
        est = mc_omega(model, args.n, args.trials, args.seed, workers=args.workers)
    else:
        est = mc_omega_session(model, args.n, args.spins, args.seed)
    _print_estimate(est, {"family": family, "param": params[0], "n": args.n, "seed": args.seed})
    if args.out:
        payload = _estimate_payload(est, family=family, param=params[0], n=args.n, seed=args.seed)
        outputs = [_write_json(args.out, payload)]
        _finish_manifest("simulate", args, outputs, started)
    return 0


def _cmd_grid(parser, args) -> int:
    started = time.perf_counter()
    family, params = _family_and_params(parser, args)
    cells = omega_grid(
        family, params, args.n, args.trials, args.seed,
        wheel=WHEELS[args.wheel], workers=args.workers,
    )
    from .artifacts import grid_csv

    outputs = [grid_csv(cells, args.out)]
    if args.plot:
        from .plots import plot_omega_vs_param, plot_omega_vs_window

        stem = Path(args.out)
        outputs.append(plot_omega_vs_param(cells, stem.with_suffix(".vs_param.png")))
        outputs.append(plot_omega_vs_window(cells, stem.with_suffix(".vs_window.png")))
    _finish_manifest("grid", args, outputs, started)
    print(f"wrote {outputs[0]} ({len(cells)} cells)")
    return 0


def _cmd_critical(parser, args) -> int:
    started = time.perf_counter()
    point = critical_spread(
        args.family,
        args.n,
        trials_per_eval=args.trials_per_eval,
        seed=args.seed,
        wheel=WHEELS[args.wheel],
        param_max=args.param_max,
    )
    for key in ("family", "window", "param_critical", "xi_critical",
                "bracket_low", "bracket_high", "evaluator"):
        print(f"{key} = {getattr(point, key)}")
    print(f"bracket_width = {point.bracket_width}")
    if args.out:
        payload = {k: getattr(point, k) for k in (
            "family", "window", "param_critical", "xi_critical",
            "bracket_low", "bracket_high", "trials_per_eval", "evaluator",
        )}
        payload["bracket_width"] = point.bracket_width
        outputs = [_write_json(args.out, payload)]
        _finish_manifest("critical", args, outputs, started)
    return 0


def _cmd_capital(parser, args) -> int:
    started = time.perf_counter()
    wheel = WHEELS[args.wheel]
    grid_mode = len(args.omega) > 1 or len(args.j_avg) > 1
    if grid_mode:
        if args.out is None:
            parser.error("capital sweeps need --out for the table")
        cells = capital_grid(args.omega, args.j_avg, wheel, c_max=args.c_max)
        from .artifacts import capital_csv

        outputs = [capital_csv(cells, args.out)]
        if args.plot:
            from .plots import plot_capital_grid

            outputs.append(plot_capital_grid(cells, Path(args.out).with_suffix(".png")))
        _finish_manifest("capital", args, outputs, started)
        solved = sum(1 for c in cells if c.solution is not None)
        print(f"wrote {outputs[0]} ({solved}/{len(cells)} cells solved)")
        return 0
    sol = solve_capital(args.j_avg[0], args.omega[0], wheel, c_max=args.c_max)
    for key in ("capital", "mean_spins", "losing_streak", "frequency",
                "j_avg", "omega", "residual", "roots_found"):
        print(f"{key} = {getattr(sol, key)}")
    if args.out:
        payload = {k: getattr(sol, k) for k in (
            "capital", "mean_spins", "losing_streak", "frequency",
            "j_avg", "omega", "residual", "roots_found",
        )}
        outputs = [_write_json(args.out, payload)]
        _finish_manifest("capital", args, outputs, started)
    return 0


def _cmd_session_replay(parser, args) -> int:
    started = time.perf_counter()
    from .analytics import StrategyConfig

    log_path = Path(args.log)
    window, bet_unit, bankroll, wheel = args.window, args.bet_unit, args.bankroll, None
    snapshot = log_path.with_suffix(".json")
    if snapshot.is_file():
        snap = json.loads(snapshot.read_text())
        cfg = snap.get("config", {})
        window = window or cfg.get("window")
        bet_unit = bet_unit or cfg.get("bet_unit")
        bankroll = bankroll if bankroll is not None else snap.get("initial_bankroll")
        if "pockets" in cfg:
            wheel = WheelSpec(pockets=cfg["pockets"], payout=cfg["payout"])
    if window is None or bankroll is None:
        parser.error("session-replay needs --window and --bankroll (or a snapshot next to the log)")
    wheel = wheel or WHEELS[args.wheel]
    config = StrategyConfig(window=int(window), wheel=wheel, bet_unit=int(bet_unit or 1))
    outcomes = read_log(log_path)
    session = replay(outcomes, config, int(bankroll))
    report = session.decision_status()
    print(f"spins = {len(session.spins)}")
    print(f"settled_spins = {report.settled_spins}")
    print(f"bankroll = {session.bankroll}")
    print(f"net = {session.bankroll - session.initial_bankroll}")
    print(f"phase = {session.phase}")
    print(f"omega = {report.omega}")
    print(f"std_error = {report.std_error}")
    print(f"verdict = {report.verdict}")
    if args.out:
        payload = {
            "spins": len(session.spins),
            "settled_spins": report.settled_spins,
            "initial_bankroll": session.initial_bankroll,
            "bankroll": session.bankroll,
            "phase": session.phase,
            "omega": report.omega,
            "std_error": report.std_error,
            "verdict": report.verdict,
            "recommendation": {
                "bets": list(session.recommendation.bets),
                "stake_per_bet": session.recommendation.stake_per_bet,
                "rationale": session.recommendation.rationale,
            },
        }
        outputs = [_write_json(args.out, payload)]
        if args.plot:
            from .plots import plot_bankroll

            outputs.append(plot_bankroll(session, Path(args.out).with_suffix(".png")))
        _finish_manifest("session-replay", args, outputs, started)
    elif args.plot:
        parser.error("--plot needs --out to name the figure")
    return 0


def _cmd_serve(parser, args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lastn",
        description="Biased-wheel analysis and live advice for the last-N equal-stakes strategy.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p, scalar: bool):
        kind = _scalar if scalar else _parse_floats
        p.add_argument("--family", choices=("uniform", "gaussian", "linear"))
        p.add_argument("--delta", type=kind, help="Gaussian-tail spread (implies --family gaussian)")
        p.add_argument("--beta", type=kind, help="linear-ramp slope (implies --family linear)")
        p.add_argument("--wheel", choices=tuple(WHEELS), default="european")

    p = sub.add_parser("dist", help="pocket probability table")
    add_model_flags(p, scalar=True)
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("exact", help="exact expected return by full enumeration")
    add_model_flags(p, scalar=True)
    p.add_argument("--n", type=int, required=True, help="window length")
    p.add_argument("--budget", type=int, default=10**8, help="max enumerated sequences")
    p.add_argument("--out", help="JSON result path")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("simulate", help="Monte-Carlo expected return")
    add_model_flags(p, scalar=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--spins", type=int, default=1_000_000, help="spin count for --estimator sliding")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--estimator", choices=("independent", "sliding"), default="independent")
    p.add_argument("--out", help="JSON result path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("grid", help="sweep expected return over parameters and windows")
    add_model_flags(p, scalar=False)
    p.add_argument("--n", type=_parse_ints, required=True, help="window list, e.g. 2,5,10")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("critical", help="bias level where the return crosses zero")
    p.add_argument("--family", choices=("gaussian", "linear"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials-per-eval", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param-max", type=float, default=None)
    p.add_argument("--wheel", choices=tuple(WHEELS), default="european")
    p.add_argument("--out", help="JSON result path")
    p.set_defaults(func=_cmd_critical)

    p = sub.add_parser("capital", help="critical starting capital")
    p.add_argument("--omega", type=_parse_floats, required=True, help="expected return (scalar or sweep)")
    p.add_argument("--j-avg", type=_parse_floats, required=True, help="average bets per spin (scalar or sweep)")
    p.add_argument("--wheel", choices=tuple(WHEELS), default="european")
    p.add_argument("--c-max", type=float, default=1e6)
    p.add_argument("--out", help="CSV (sweep) or JSON (point) path")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=_cmd_capital)

    p = sub.add_parser("session-replay", help="replay a recorded spin log")
    p.add_argument("--log", required=True, help="spin log path")
    p.add_argument("--window", type=int, help="window length (read from snapshot when omitted)")
    p.add_argument("--bet-unit", type=int, help="stake per number in minor units")
    p.add_argument("--bankroll", type=int, help="starting bankroll in minor units")
    p.add_argument("--wheel", choices=tuple(WHEELS), default="european")
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--plot", action="store_true", help="render the bankroll trajectory")
    p.set_defaults(func=_cmd_session_replay)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--store", default=None, help="session store directory (env LASTN_STORE)")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except (WheelError, EstimatorError, CapitalError, SessionError, StoreError) as exc:
        print(
            json.dumps({"error": {"code": error_code(exc), "message": str(exc)}}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
