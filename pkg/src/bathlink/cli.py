"""Command-line front end emitting CSV/JSON data files.

Subcommands: ``simulate``, ``heatmap``, ``region``, ``steady-state``,
``witness``.  All times are dimensionless (zeta * t); rates are per unit of
that time.  Exit codes: 0 success, 2 configuration error, 3 numerical
invariant failure.  Output files are written atomically (temp file +
rename) and with fixed 12-significant-digit formatting, so identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ._format import atomic_write, fmt
from .correlations import discord, mutual_information, negativity
from .dynamics import evolve_exact, evolve_rk, product_state, trajectory_to_csv
from .errors import ConfigError, NumericalInvariantError
from .matops import matrix_to_dict, trace_norm
from .model import (
    ModelParams,
    build_liouvillian,
    steady_state_analytic,
    steady_state_numeric,
)
from .witness import (
    is_entangling,
    quadratic_roots,
    region_scan,
    report_for_kappas,
    report_for_product_state,
)

_TIME_HELP = "dimensionless time zeta*t"


def _add_param_flags(parser: argparse.ArgumentParser, with_eta: bool = True) -> None:
    g = parser.add_argument_group("model parameters")
    g.add_argument("--gamma1", type=float, default=None,
                   help="emission rate (per unit zeta*t); pair with --gamma2")
    g.add_argument("--gamma2", type=float, default=None,
                   help="absorption rate (per unit zeta*t); pair with --gamma1")
    g.add_argument("--temperature", type=float, default=None,
                   help="bath temperature in units of the system frequency; "
                        "alternative to explicit rates")
    g.add_argument("--zeta", type=float, default=None,
                   help="spontaneous emission constant setting the time unit (default 1)")
    if with_eta:
        g.add_argument("--eta", type=float, default=None,
                       help="oscillator/qubit bath-coupling ratio (dimensionless)")
    g.add_argument("--omega", type=float, default=None,
                   help="system frequency (dimensionless units)")


def _add_output_flags(parser: argparse.ArgumentParser, formats=("csv", "json")) -> None:
    parser.add_argument("--out", required=True, help="output file path")
    parser.add_argument("--format", choices=list(formats), default=None,
                        help=f"output format (default {formats[0]})")
    parser.add_argument("--config", default=None,
                        help="JSON file of flag values; a key also given on the "
                             "command line is an error")


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset flags from --config; the same key in both is an error."""
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config) as f:
            cfg = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read --config {args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("--config must contain a JSON object")
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr) or attr in ("config", "out"):
            raise ConfigError(f"config error: unknown config key {key!r}")
        current = getattr(args, attr)
        if current is not None and current is not False:
            raise ConfigError(
                f"config error: {key!r} given both on the command line and in --config"
            )
        setattr(args, attr, value)


def _resolve_params(args: argparse.Namespace, eta: float | None = None) -> ModelParams:
    """Build ModelParams from flags; rates come from one source only."""
    have_rates = args.gamma1 is not None or args.gamma2 is not None
    have_temp = args.temperature is not None
    if have_rates and have_temp:
        raise ConfigError(
            "config error: give either --gamma1/--gamma2 or --temperature, not both"
        )
    if eta is None:
        eta = getattr(args, "eta", None)
    if eta is None:
        raise ConfigError("config error: --eta is required")
    if args.omega is None:
        raise ConfigError("config error: --omega is required")
    zeta = 1.0 if args.zeta is None else args.zeta
    if have_temp:
        return ModelParams.from_temperature(
            zeta=zeta, temperature=args.temperature, eta=eta, omega=args.omega
        )
    if args.gamma1 is None or args.gamma2 is None:
        raise ConfigError("config error: --gamma1 and --gamma2 must be given together")
    return ModelParams.from_rates(
        gamma1=args.gamma1, gamma2=args.gamma2, eta=eta, omega=args.omega, zeta=zeta
    )


def _require(args: argparse.Namespace, names: list[str]) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ConfigError(f"config error: --{name.replace('_', '-')} is required")


def _write_table(path: str, fmt_kind: str, columns: list[str], rows: list[list[float]]) -> None:
    if fmt_kind == "json":
        payload = {"columns": columns, "rows": [[float(fmt(x)) for x in row] for row in rows]}
        with atomic_write(path) as f:
            json.dump(payload, f, sort_keys=True, indent=2)
            f.write("\n")
    else:
        with atomic_write(path) as f:
            f.write(",".join(columns) + "\n")
            for row in rows:
                f.write(",".join(fmt(x) for x in row) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with atomic_write(path) as f:
        json.dump(payload, f, sort_keys=True, indent=2)
        f.write("\n")


def _json_only_format(args: argparse.Namespace, command: str) -> None:
    if args.format not in (None, "json"):
        raise ConfigError(f"config error: {command} emits JSON only; drop --format {args.format}")


# ---------------------------------------------------------------- simulate

def _cmd_simulate(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    _require(args, ["p", "q", "t_max"])
    samples = 400 if args.samples is None else args.samples
    if samples < 1:
        raise ConfigError(f"config error: --samples must be >= 1, got {samples}")
    if args.t_max < 0:
        raise ConfigError(f"config error: --t-max must be >= 0, got {args.t_max}")
    rho0 = product_state(args.p, args.q)
    liou = build_liouvillian(params)
    method = args.method or "exact"
    if method == "rk4":
        steps = args.steps if args.steps is not None else max(1000, int(1000 * args.t_max))
        traj = evolve_rk(liou, rho0, args.t_max, steps=steps, samples=samples)
    else:
        if args.steps is not None:
            raise ConfigError("config error: --steps applies only to --method rk4")
        times = np.linspace(0.0, args.t_max, samples + 1) if args.t_max > 0 else np.zeros(1)
        traj = evolve_exact(liou, rho0, times)
    rows = []
    for t, rho in zip(traj.times, traj.states):
        sample = discord(rho)
        rows.append([
            t,
            sample.negativity,
            sample.mutual_info,
            sample.discord,
            sample.classical_corr,
            float(np.trace(rho).real),
            float(np.linalg.eigvalsh(rho).min()),
        ])
    columns = ["t", "negativity", "mutual_info", "discord", "classical_corr", "trace", "min_eig"]
    _write_table(args.out, args.format or "csv", columns, rows)
    if args.states_out:
        trajectory_to_csv(traj, args.states_out)
    return 0


# ----------------------------------------------------------------- heatmap

def _axis_values(args: argparse.Namespace) -> list[float]:
    if args.axis_values is not None:
        if args.axis_min is not None or args.axis_max is not None or args.axis_steps is not None:
            raise ConfigError("config error: --axis-values excludes --axis-min/max/steps")
        try:
            values = [float(x) for x in str(args.axis_values).split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigError(f"config error: bad --axis-values: {exc}") from exc
        if not values:
            raise ConfigError("config error: --axis-values is empty")
        return values
    _require(args, ["axis_min", "axis_max", "axis_steps"])
    if args.axis_steps < 1 or args.axis_max < args.axis_min:
        raise ConfigError("config error: need --axis-steps >= 1 and --axis-max >= --axis-min")
    return list(np.linspace(args.axis_min, args.axis_max, args.axis_steps))


def _cmd_heatmap(args: argparse.Namespace) -> int:
    _require(args, ["p", "q", "t_max", "observable", "axis"])
    samples = 400 if args.samples is None else args.samples
    values = _axis_values(args)
    measures = {
        "negativity": negativity,
        "mutual_info": mutual_information,
        "discord": lambda rho: discord(rho).discord,
    }
    if args.observable not in measures:
        raise ConfigError(f"config error: unknown observable {args.observable!r}")
    measure = measures[args.observable]
    rho0 = product_state(args.p, args.q)
    times = np.linspace(0.0, args.t_max, samples + 1) if args.t_max > 0 else np.zeros(1)

    rows = []
    for value in values:
        if args.axis == "eta":
            if getattr(args, "eta", None) is not None:
                raise ConfigError("config error: --axis eta sweeps eta; drop --eta")
            if value < 0:
                raise ConfigError(f"config error: eta axis value {value} is negative")
            params = _resolve_params(args, eta=value)
        else:
            if args.temperature is not None or args.gamma1 is not None or args.gamma2 is not None:
                raise ConfigError(
                    "config error: --axis temperature derives the rates; drop "
                    "--temperature/--gamma1/--gamma2"
                )
            if value <= 0:
                raise ConfigError(f"config error: temperature axis value {value} must be > 0")
            _require(args, ["eta", "omega"])
            params = ModelParams.from_temperature(
                zeta=1.0 if args.zeta is None else args.zeta,
                temperature=value,
                eta=args.eta,
                omega=args.omega,
            )
        liou = build_liouvillian(params)
        traj = evolve_exact(liou, rho0, times)
        for t, rho in zip(traj.times, traj.states):
            rows.append([t, value, measure(rho)])
    _write_table(args.out, args.format or "csv", ["t", "axis_value", "observable"], rows)
    return 0


# ------------------------------------------------------------------ region

def _cmd_region(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    _require(args, ["n"])
    scan = region_scan(
        params,
        n=args.n,
        spot_checks=10 if args.spot_checks is None else args.spot_checks,
        seed=0 if args.seed is None else args.seed,
        confirm_dynamics=bool(args.confirm_dynamics),
        confirm_tau=1e-4 if args.tau is None else args.tau,
    )
    if (args.format or "csv") == "json":
        with atomic_write(args.out) as f:
            f.write(scan.to_json())
            f.write("\n")
    else:
        scan.to_csv(args.out)
    return 0


# ------------------------------------------------------------ steady-state

def _cmd_steady_state(args: argparse.Namespace) -> int:
    _json_only_format(args, "steady-state")
    params = _resolve_params(args)
    mode = args.mode or "both"
    payload: dict = {"params": params.to_dict(), "mode": mode}
    liou = build_liouvillian(params)
    if mode in ("both", "analytic") and params.gamma2 <= 0:
        raise ConfigError(
            "config error: gamma2 = 0 has no thermal-ratio steady state "
            "(gamma1/gamma2 diverges); use --mode numeric to inspect the "
            "degenerate kernel"
        )
    analytic = steady_state_analytic(params) if mode in ("both", "analytic") else None
    numeric = (
        steady_state_numeric(liou, require_unique=False)
        if mode in ("both", "numeric")
        else None
    )
    if analytic is not None:
        payload["analytic"] = matrix_to_dict(analytic)
        rhs = liou.apply(analytic)
        payload["analytic_residual_max"] = float(np.abs(rhs).max())
    if numeric is not None:
        payload["numeric"] = matrix_to_dict(numeric.state)
        payload["numeric_residual_max"] = numeric.residual_max
        payload["null_space_dim"] = numeric.null_space_dim
    if analytic is not None and numeric is not None:
        payload["trace_norm_difference"] = trace_norm(analytic - numeric.state)
    _write_json(args.out, payload)
    return 0


# ----------------------------------------------------------------- witness

def _cmd_witness(args: argparse.Namespace) -> int:
    _json_only_format(args, "witness")
    params = _resolve_params(args)
    kappa_mode = args.kappa1 is not None or args.kappa3 is not None
    pq_mode = args.p is not None or args.q is not None
    if kappa_mode and pq_mode:
        raise ConfigError("config error: give either --kappa1/--kappa3 or --p/--q, not both")
    if not kappa_mode and not pq_mode:
        raise ConfigError("config error: give --kappa1/--kappa3 or --p/--q")
    payload: dict = {"params": params.to_dict()}
    if kappa_mode:
        _require(args, ["kappa1", "kappa3"])
        kappa2 = 0.0 if args.kappa2 is None else args.kappa2
        report = report_for_kappas(args.kappa1, args.kappa3, params, kappa2=kappa2)
        payload.update(report.to_dict())
        if args.kappa1 * args.kappa3 < 0:
            note = (
                "opposite-sign kappa1 and kappa3 cannot give a negative rate: "
                "both roots of the rate quadratic share the sign of kappa3/eta"
            )
            payload["note"] = note
            print(f"note: {note}")
        if args.roots:
            lo, hi = quadratic_roots(args.kappa3, params)
            payload["kappa1_root_interval"] = [lo, hi]
    else:
        _require(args, ["p", "q"])
        report = report_for_product_state(
            args.p, args.q, params, alpha=args.alpha, beta=args.beta
        )
        payload.update(report.to_dict())
        _, excess = is_entangling(args.p, args.q, params)
        payload["excess"] = excess
        if args.roots:
            raise ConfigError("config error: --roots applies to the kappa form only")
    _write_json(args.out, payload)
    return 0


# ------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bathlink",
        description="Qubit-oscillator pair in a common thermal bath: dynamics, "
                    "entanglement, and correlation measures. All times are "
                    "dimensionless zeta*t.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="evolve one initial product state and "
                                            "emit per-sample correlation measures")
    _add_param_flags(p_sim)
    p_sim.add_argument("--p", type=float, default=None,
                       help="qubit amplitude of |0> in [-1, 1]")
    p_sim.add_argument("--q", type=float, default=None,
                       help="oscillator amplitude of |0> in [-1, 1]")
    p_sim.add_argument("--t-max", type=float, default=None, help=f"end time ({_TIME_HELP})")
    p_sim.add_argument("--samples", type=int, default=None,
                       help="uniform sampling intervals (default 400; emits samples+1 rows)")
    p_sim.add_argument("--method", choices=["exact", "rk4"], default=None,
                       help="propagator: exact exponential (default) or fixed-step RK4")
    p_sim.add_argument("--steps", type=int, default=None,
                       help="RK4 step count (rk4 only; default 1000 per unit time)")
    p_sim.add_argument("--states-out", default=None,
                       help="also write the raw state trajectory CSV here")
    _add_output_flags(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_heat = sub.add_parser("heatmap", help="observable on a (time x eta) or "
                                            "(time x temperature) grid")
    _add_param_flags(p_heat)
    p_heat.add_argument("--observable", choices=["negativity", "mutual_info", "discord"],
                        default=None, help="observable to tabulate")
    p_heat.add_argument("--axis", choices=["eta", "temperature"], default=None,
                        help="swept parameter")
    p_heat.add_argument("--axis-min", type=float, default=None, help="sweep start")
    p_heat.add_argument("--axis-max", type=float, default=None, help="sweep end")
    p_heat.add_argument("--axis-steps", type=int, default=None, help="sweep point count")
    p_heat.add_argument("--axis-values", default=None,
                        help="explicit comma-separated sweep values (excludes min/max/steps)")
    p_heat.add_argument("--p", type=float, default=None, help="qubit amplitude of |0>")
    p_heat.add_argument("--q", type=float, default=None, help="oscillator amplitude of |0>")
    p_heat.add_argument("--t-max", type=float, default=None, help=f"end time ({_TIME_HELP})")
    p_heat.add_argument("--samples", type=int, default=None,
                        help="uniform sampling intervals per sweep value (default 400)")
    _add_output_flags(p_heat)
    p_heat.set_defaults(func=_cmd_heatmap)

    p_reg = sub.add_parser("region", help="entangling verdict over a (p, q) grid")
    _add_param_flags(p_reg)
    p_reg.add_argument("--n", type=int, default=None, help="grid resolution per axis (>= 2)")
    p_reg.add_argument("--confirm-dynamics", action="store_true", default=False,
                       help="add a short-time negativity column for every point")
    p_reg.add_argument("--tau", type=float, default=None,
                       help=f"confirmation time (default 1e-4, {_TIME_HELP})")
    p_reg.add_argument("--spot-checks", type=int, default=None,
                       help="random entangling points verified dynamically (default 10)")
    p_reg.add_argument("--seed", type=int, default=None,
                       help="RNG seed for the spot checks (default 0)")
    _add_output_flags(p_reg)
    p_reg.set_defaults(func=_cmd_region)

    p_ss = sub.add_parser("steady-state", help="analytic and numeric steady states "
                                               "with residuals (JSON)")
    _add_param_flags(p_ss)
    p_ss.add_argument("--mode", choices=["both", "analytic", "numeric"], default=None,
                      help="which steady states to compute (default both)")
    _add_output_flags(p_ss, formats=("json",))
    p_ss.set_defaults(func=_cmd_steady_state)

    p_wit = sub.add_parser("witness", help="short-time entanglement witness report (JSON)")
    _add_param_flags(p_wit)
    p_wit.add_argument("--kappa1", type=float, default=None,
                       help="|00> coefficient of the witness direction")
    p_wit.add_argument("--kappa2", type=float, default=None,
                       help="|10> coefficient (does not affect the rate; default 0)")
    p_wit.add_argument("--kappa3", type=float, default=None,
                       help="|11> coefficient of the witness direction")
    p_wit.add_argument("--p", type=float, default=None, help="qubit amplitude of |0>")
    p_wit.add_argument("--q", type=float, default=None, help="oscillator amplitude of |0>")
    p_wit.add_argument("--alpha", type=float, default=None,
                       help="first direction coefficient for the (p, q) form")
    p_wit.add_argument("--beta", type=float, default=None,
                       help="second direction coefficient for the (p, q) form")
    p_wit.add_argument("--roots", action="store_true", default=False,
                       help="include the kappa1 root interval of the rate quadratic")
    _add_output_flags(p_wit, formats=("json",))
    p_wit.set_defaults(func=_cmd_witness)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except NumericalInvariantError as exc:
        print(f"numerical invariant failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
