"""Command-line harness: sweeps, solver runs, and Monte Carlo validation.

Scenario files are JSON with the sections shown in ``DEFAULT_SCENARIO``;
every field is optional and unknown keys are rejected before any computation
runs. Geometry is in meters, powers in watts, the carrier in MHz, and losses
in dB; conversions to internal units happen at load time. All outputs are
deterministic for a fixed scenario and seed.

Exit codes: 0 success, 2 scenario or argument error, 3 solver failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
from dataclasses import dataclass

from . import __version__
from .channel import (
    EXCESS_LOSS_CONVENTIONS,
    HopEnvironment,
    LinkBudget,
    LinkGeometry,
    RadioConfig,
    RicianEndpoints,
    link_budget,
)
from .mcsim import SimSpec, estimate_outage
from .optimizer import (
    BracketError,
    SolverConfig,
    equal_power,
    minimize_outage_exact,
    solve_theorem1,
    theorem1_residual,
    theorem1_constants,
)
from .outage import PowerSplit, end_to_end_outage

__all__ = [
    "Scenario",
    "ScenarioError",
    "DEFAULT_SCENARIO",
    "load_scenario",
    "cmd_sweep_alpha",
    "cmd_sweep_power",
    "cmd_solve",
    "cmd_validate",
    "main",
    "console_main",
]

EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_SOLVER = 3
EXIT_VALIDATION = 4

SWEEP_HEADER = "override_name,override_value,alpha,p_s_w,p_u_w,outage_closed_form,method"
VALIDATE_HEADER = "alpha,outage_closed_form,outage_mc,std_err,z_score"
SOLVE_HEADER = "method,alpha,p_s_w,p_u_w,outage,iterations,residual"

#: Default scenario; values follow the reference system parameter table.
DEFAULT_SCENARIO = {
    "geometry": {"h_u": 1000.0, "L": 2000.0, "r_s": None},
    "env_su": {"a": 0.28, "b": 9.6, "eta_los_db": 1.0, "eta_nlos_db": 20.0},
    "env_ud": {"a": 0.136, "b": 11.95, "eta_los_db": 1.6, "eta_nlos_db": 23.0},
    "rician_su": {"k0_db": 5.0, "kpi2_db": 15.0},
    "rician_ud": {"k0_db": 5.0, "kpi2_db": 15.0},
    "radio": {
        "f_c_mhz": 2000.0,
        "path_loss_exponent": 3.0,
        "noise_power_dbm": -110.0,
        "rate": 1.0,
        "total_power_w": 0.25,
    },
    "solver": {
        "alpha_tol": 1e-8,
        "max_iter": 200,
        "bracket_epsilon": 1e-6,
        "grid_points": 201,
    },
    "sim": {"trials": 1_000_000, "seed": 12345, "chunk_size": 100_000},
    "excess_loss_convention": "standard",
}

_INT_FIELDS = {
    ("solver", "max_iter"),
    ("solver", "grid_points"),
    ("sim", "trials"),
    ("sim", "seed"),
    ("sim", "chunk_size"),
}


class ScenarioError(ValueError):
    """Raised for malformed scenario files or command arguments."""


def _merge_scenario(data: dict) -> dict:
    """Overlay a scenario dict on the defaults, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario root must be a JSON object")
    merged = {key: dict(val) if isinstance(val, dict) else val for key, val in DEFAULT_SCENARIO.items()}
    for section, content in data.items():
        if section not in DEFAULT_SCENARIO:
            raise ScenarioError(f"unknown scenario key {section!r}")
        if isinstance(DEFAULT_SCENARIO[section], dict):
            if not isinstance(content, dict):
                raise ScenarioError(f"scenario section {section!r} must be an object")
            for key, value in content.items():
                if key not in DEFAULT_SCENARIO[section]:
                    raise ScenarioError(f"unknown scenario key {section!r}.{key!r}")
                merged[section][key] = value
        else:
            merged[section] = content
    return merged


def _number(merged: dict, section: str, key: str) -> float:
    value = merged[section][key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"scenario field {section!r}.{key!r} must be a number")
    if (section, key) in _INT_FIELDS:
        if value != int(value):
            raise ScenarioError(f"scenario field {section!r}.{key!r} must be an integer")
        return int(value)
    return float(value)


@dataclass(frozen=True)
class Scenario:
    """A fully validated scenario with internal units."""

    geometry: LinkGeometry
    env_su: HopEnvironment
    env_ud: HopEnvironment
    rician_su: RicianEndpoints
    rician_ud: RicianEndpoints
    radio: RadioConfig
    solver: SolverConfig
    sim: SimSpec
    excess_loss_convention: str
    sha256: str

    def budget(self) -> LinkBudget:
        return link_budget(
            self.geometry,
            self.env_su,
            self.env_ud,
            self.rician_su,
            self.rician_ud,
            self.radio,
            self.excess_loss_convention,
        )


def load_scenario(
    path: str | None,
    *,
    seed: int | None = None,
    trials: int | None = None,
    convention: str | None = None,
) -> Scenario:
    """Load and validate a scenario file, applying command-line overrides."""
    if path is None:
        data = {}
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario file is not valid JSON: {exc}") from exc

    merged = _merge_scenario(data)
    if seed is not None:
        merged["sim"]["seed"] = seed
    if trials is not None:
        merged["sim"]["trials"] = trials
    if convention is not None:
        merged["excess_loss_convention"] = convention

    convention_value = merged["excess_loss_convention"]
    if convention_value not in EXCESS_LOSS_CONVENTIONS:
        raise ScenarioError(
            f"excess_loss_convention must be one of {EXCESS_LOSS_CONVENTIONS}"
        )

    try:
        h_u = _number(merged, "geometry", "h_u")
        length = _number(merged, "geometry", "L")
        if merged["geometry"]["r_s"] is None:
            geometry = LinkGeometry.midpoint(h_u, length)
        else:
            geometry = LinkGeometry.from_split(h_u, length, _number(merged, "geometry", "r_s"))
        env_su = HopEnvironment(
            a=_number(merged, "env_su", "a"),
            b=_number(merged, "env_su", "b"),
            eta_los_db=_number(merged, "env_su", "eta_los_db"),
            eta_nlos_db=_number(merged, "env_su", "eta_nlos_db"),
        )
        env_ud = HopEnvironment(
            a=_number(merged, "env_ud", "a"),
            b=_number(merged, "env_ud", "b"),
            eta_los_db=_number(merged, "env_ud", "eta_los_db"),
            eta_nlos_db=_number(merged, "env_ud", "eta_nlos_db"),
        )
        rician_su = RicianEndpoints(
            k0_db=_number(merged, "rician_su", "k0_db"),
            kpi2_db=_number(merged, "rician_su", "kpi2_db"),
        )
        rician_ud = RicianEndpoints(
            k0_db=_number(merged, "rician_ud", "k0_db"),
            kpi2_db=_number(merged, "rician_ud", "kpi2_db"),
        )
        rate = _number(merged, "radio", "rate")
        if rate <= 0.0:
            raise ValueError("rate must be positive")
        radio = RadioConfig(
            f_c=_number(merged, "radio", "f_c_mhz") * 1e6,
            n=_number(merged, "radio", "path_loss_exponent"),
            noise_power_dbm=_number(merged, "radio", "noise_power_dbm"),
            rate=rate,
            total_power_w=_number(merged, "radio", "total_power_w"),
        )
        solver = SolverConfig(
            alpha_tol=_number(merged, "solver", "alpha_tol"),
            max_iter=_number(merged, "solver", "max_iter"),
            bracket_epsilon=_number(merged, "solver", "bracket_epsilon"),
            grid_points=_number(merged, "solver", "grid_points"),
        )
        sim = SimSpec(
            trials=_number(merged, "sim", "trials"),
            seed=_number(merged, "sim", "seed"),
            chunk_size=_number(merged, "sim", "chunk_size"),
        )
    except ValueError as exc:
        raise ScenarioError(f"invalid scenario value: {exc}") from exc

    digest = hashlib.sha256(
        json.dumps(merged, sort_keys=True, separators=(",", ":")).encode("utf-8")
    ).hexdigest()
    return Scenario(
        geometry=geometry,
        env_su=env_su,
        env_ud=env_ud,
        rician_su=rician_su,
        rician_ud=rician_ud,
        radio=radio,
        solver=solver,
        sim=sim,
        excess_loss_convention=convention_value,
        sha256=digest,
    )


def _with_override(scenario: Scenario, name: str, value: float) -> Scenario:
    """A copy of the scenario with one swept parameter replaced.

    Distance overrides redeploy the relay at the midpoint, matching the sweep
    convention of the reference experiments.
    """
    if name == "pt":
        radio = dataclasses.replace(scenario.radio, total_power_w=value)
        return dataclasses.replace(scenario, radio=radio)
    if name == "L":
        geometry = LinkGeometry.midpoint(scenario.geometry.h_u, value)
        return dataclasses.replace(scenario, geometry=geometry)
    if name == "R":
        radio = dataclasses.replace(scenario.radio, rate=value)
        return dataclasses.replace(scenario, radio=radio)
    raise ScenarioError(f"unknown override {name!r}")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if not math.isfinite(value):
        raise RuntimeError("refusing to emit a non-finite value")
    return f"{value:.12e}"


def _render(scenario: Scenario, header: str, rows: list[tuple]) -> str:
    lines = [
        f"# uavrelay {__version__}",
        f"# scenario_sha256: {scenario.sha256}",
        f"# seed: {scenario.sim.seed}",
        header,
    ]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def cmd_sweep_alpha(
    scenario: Scenario,
    alpha_grid: list[float],
    override_name: str,
    override_values: list[float],
) -> str:
    """Closed-form outage over an alpha grid, plus both solver allocations."""
    for alpha in alpha_grid:
        if not 0.0 < alpha < 1.0:
            raise ScenarioError("alpha grid values must lie strictly inside (0, 1)")
    rows = []
    for value in override_values:
        swept = _with_override(scenario, override_name, value)
        budget = swept.budget()
        total = swept.radio.total_power_w
        for alpha in alpha_grid:
            split = PowerSplit.from_alpha(alpha, total)
            rows.append(
                (
                    override_name,
                    value,
                    alpha,
                    split.p_s,
                    split.p_u,
                    end_to_end_outage(budget, split, swept.radio),
                    "grid",
                )
            )
        for result in (
            minimize_outage_exact(budget, swept.radio, swept.solver),
            solve_theorem1(budget, swept.radio, swept.solver),
        ):
            rows.append(
                (
                    override_name,
                    value,
                    result.alpha_star,
                    result.p_s,
                    result.p_u,
                    result.outage,
                    result.method,
                )
            )
    return _render(scenario, SWEEP_HEADER, rows)


def cmd_sweep_power(
    scenario: Scenario,
    pt_grid: list[float],
    override_name: str,
    override_values: list[float],
) -> str:
    """Outage of the exact, approximate, and equal allocations over a power grid."""
    for total in pt_grid:
        if total <= 0.0:
            raise ScenarioError("total power grid values must be positive")
    rows = []
    for value in override_values:
        swept = _with_override(scenario, override_name, value)
        budget = swept.budget()
        for total in pt_grid:
            at_power = _with_override(swept, "pt", total)
            results = (
                minimize_outage_exact(budget, at_power.radio, at_power.solver),
                solve_theorem1(budget, at_power.radio, at_power.solver),
                equal_power(at_power.radio, budget),
            )
            for result in results:
                rows.append(
                    (
                        override_name,
                        value,
                        result.alpha_star,
                        result.p_s,
                        result.p_u,
                        result.outage,
                        result.method,
                    )
                )
    return _render(scenario, SWEEP_HEADER, rows)


def cmd_solve(scenario: Scenario) -> str:
    """All three allocations plus the root-equation residual at the exact one."""
    budget = scenario.budget()
    exact = minimize_outage_exact(budget, scenario.radio, scenario.solver)
    approx = solve_theorem1(budget, scenario.radio, scenario.solver)
    equal = equal_power(scenario.radio, budget)
    rows = [
        (res.method, res.alpha_star, res.p_s, res.p_u, res.outage, res.iterations, res.residual)
        for res in (exact, approx, equal)
    ]
    consts = theorem1_constants(budget, scenario.radio)
    residual_at_exact = theorem1_residual(
        PowerSplit(exact.p_s, exact.p_u), consts, budget.k_su, budget.k_ud
    )
    text = _render(scenario, SOLVE_HEADER, rows)
    text += f"# theorem1_residual_at_exact: {_fmt(residual_at_exact)}\n"
    text += f"# theorem1_vs_exact_alpha_gap: {_fmt(abs(approx.alpha_star - exact.alpha_star))}\n"
    if exact.outage > 0.0:
        text += f"# theorem1_vs_exact_outage_ratio: {_fmt(approx.outage / exact.outage)}\n"
    return text


def cmd_validate(scenario: Scenario, alphas: list[float]) -> tuple[str, bool]:
    """Closed form against the Monte Carlo estimate, row per alpha.

    Each row gets an independent stream (base seed advanced by the row
    index). Returns the report and whether every |z| stayed within 3.
    """
    for alpha in alphas:
        if not 0.0 <= alpha <= 1.0:
            raise ScenarioError("alpha values must lie in [0, 1]")
    budget = scenario.budget()
    total = scenario.radio.total_power_w
    rows = []
    passed = True
    for index, alpha in enumerate(alphas):
        split = PowerSplit.from_alpha(alpha, total)
        closed = end_to_end_outage(budget, split, scenario.radio)
        spec = dataclasses.replace(scenario.sim, seed=(scenario.sim.seed + index) % 2**64)
        estimate = estimate_outage(budget, split, scenario.radio, spec)
        if estimate.std_err > 0.0:
            z_score = (estimate.p_hat - closed) / estimate.std_err
        else:
            # Degenerate estimate (0 or 1 exactly): score the raw gap per trial.
            z_score = (estimate.p_hat - closed) * estimate.trials
        passed = passed and abs(z_score) <= 3.0
        rows.append((alpha, closed, estimate.p_hat, estimate.std_err, z_score))
    return _render(scenario, VALIDATE_HEADER, rows), passed


def _parse_alpha_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ScenarioError("--alpha-grid expects START:STOP:COUNT")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ScenarioError(f"bad --alpha-grid: {exc}") from exc
    if count < 1:
        raise ScenarioError("--alpha-grid count must be at least 1")
    if stop < start:
        raise ScenarioError("--alpha-grid stop must not precede start")
    if count == 1:
        return [start]
    step = (stop - start) / (count - 1)
    return [start + i * step for i in range(count)]


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ScenarioError(f"bad {flag}: {exc}") from exc
    if not values:
        raise ScenarioError(f"{flag} needs at least one value")
    if any(v <= 0.0 for v in values):
        raise ScenarioError(f"{flag} values must be positive")
    return values


_DEFAULT_ALPHA_GRID = "0.01:0.99:99"
_DEFAULT_VALIDATE_GRID = "0.1:0.9:5"
_DEFAULT_PT_GRID = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95,1.0"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavrelay",
        description="Outage and power allocation for a dual-hop UAV relay link.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(cmd):
        cmd.add_argument("--scenario", metavar="PATH", help="scenario JSON file")
        cmd.add_argument("--out", metavar="PATH", help="write output to a file instead of stdout")
        cmd.add_argument("--seed", type=int, help="override the simulation seed")
        cmd.add_argument("--trials", type=int, help="override the Monte Carlo trial count")
        cmd.add_argument(
            "--excess-loss-convention",
            choices=EXCESS_LOSS_CONVENTIONS,
            help="excess path-loss convention override",
        )

    sweep_alpha = sub.add_parser("sweep-alpha", help="outage versus allocation factor")
    add_shared(sweep_alpha)
    sweep_alpha.add_argument("--alpha-grid", default=_DEFAULT_ALPHA_GRID, metavar="START:STOP:COUNT")
    sweep_alpha.add_argument("--pt", metavar="LIST", help="comma list of total powers to sweep, W")
    sweep_alpha.add_argument("--L", metavar="LIST", help="comma list of end-to-end distances, m")

    sweep_power = sub.add_parser("sweep-power", help="outage versus total power per scheme")
    add_shared(sweep_power)
    sweep_power.add_argument("--pt", default=_DEFAULT_PT_GRID, metavar="LIST", help="total power grid, W")
    sweep_power.add_argument("--L", metavar="LIST", help="comma list of distances to overlay, m")
    sweep_power.add_argument("--R", metavar="LIST", help="comma list of rates to overlay, bits/s/Hz")

    solve = sub.add_parser("solve", help="solve the allocation for one scenario")
    add_shared(solve)

    validate = sub.add_parser("validate", help="check the closed form against Monte Carlo")
    add_shared(validate)
    validate.add_argument("--alpha-grid", default=_DEFAULT_VALIDATE_GRID, metavar="START:STOP:COUNT")

    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK

    try:
        scenario = load_scenario(
            args.scenario,
            seed=args.seed,
            trials=args.trials,
            convention=args.excess_loss_convention,
        )
        if args.command == "sweep-alpha":
            if args.pt is not None and args.L is not None:
                raise ScenarioError("choose one of --pt or --L for a sweep")
            alpha_grid = _parse_alpha_grid(args.alpha_grid)
            if args.pt is not None:
                name, values = "pt", _parse_float_list(args.pt, "--pt")
            elif args.L is not None:
                name, values = "L", _parse_float_list(args.L, "--L")
            else:
                name, values = "pt", [scenario.radio.total_power_w]
            text = cmd_sweep_alpha(scenario, alpha_grid, name, values)
            code = EXIT_OK
        elif args.command == "sweep-power":
            if args.L is not None and args.R is not None:
                raise ScenarioError("choose one of --L or --R for a sweep")
            pt_grid = _parse_float_list(args.pt, "--pt")
            if args.L is not None:
                name, values = "L", _parse_float_list(args.L, "--L")
            elif args.R is not None:
                name, values = "R", _parse_float_list(args.R, "--R")
            else:
                name, values = "L", [scenario.geometry.L]
            text = cmd_sweep_power(scenario, pt_grid, name, values)
            code = EXIT_OK
        elif args.command == "solve":
            text = cmd_solve(scenario)
            code = EXIT_OK
        else:
            alphas = _parse_alpha_grid(args.alpha_grid)
            text, passed = cmd_validate(scenario, alphas)
            code = EXIT_OK if passed else EXIT_VALIDATION
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except BracketError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    _emit(text, args.out)
    return code


def console_main() -> None:
    sys.exit(main())
