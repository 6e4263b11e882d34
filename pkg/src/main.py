#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Command line for the closed-form states of V(r) = a r^2 + b r^-4 + c r^-6.

Commands:
    solve     Solve the constraints for (b, c) and print both states as JSON.
    check     Evaluate the constraint residuals of user-supplied (a, b, c).
    verify    Check the states against the numerical oracle. Runs the states concurrently.
    radial    Sample R(r) of one state into a CSV table.
    critique  Show why the earlier published first excited state is not a solution.

Example:
    qes-radial solve --dim 3 --a 1 --ell 0
    {
      "a": 1.0,
      "b": -11.25,
      "c": 3.515625,
      ...
    }

Exit codes: 0 success, 1 a constraint or verification failed, 2 invalid input or no solution.
"""
from __future__ import annotations

import argparse
import asyncio
import enum
import logging
import os
import sys
import tomllib
from dataclasses import dataclass
from logging.handlers import TimedRotatingFileHandler
from typing import Any

import numpy as np

import output_utils
from analytic_core import (AnsatzSolution, Dimension, ROUNDED_TOLERANCE, PotentialParams,
                           ProblemSpec, State)
from analytic_core import constraints, legacy, solutions
from analytic_core.ansatz import coefficient_match_residuals, radial_eval
from analytic_core.cross_qn import solve_cross_l
from numeric_oracle import RadialGrid, Tier, VerificationReport
from numeric_oracle.quadrature import integration_window, normalized
from numeric_oracle.residual import ode_residual
from numeric_oracle.verification import verify_all
from output_utils import (EXIT_FAILED, EXIT_INVALID, EXIT_OK, INVALID_INPUT_ERRORS, RadialTable,
                          error_record)

DEFAULT_CONFIG = "config.toml"

# Logger will be initialized in main()
log = logging.getLogger("qes-radial")


class Command(enum.Enum):
    SOLVE = "solve"
    CHECK = "check"
    VERIFY = "verify"
    RADIAL = "radial"
    CRITIQUE = "critique"


class OutputFormat(enum.Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


@dataclass(frozen=True)
class RunConfig:
    """One invocation: the command, the problem, and the options that apply to it."""
    command: Command
    dimension: Dimension = Dimension.THREE_D
    a: float = 1.0
    ell: int = 0
    ell_prime: int | None = None
    b: float | None = None
    c: float | None = None
    state: State | None = None
    normalized: bool = False
    samples: int = 512
    grid_n: int = 4000
    r_min: float | None = None
    r_max: float | None = None
    refine: bool = True
    tier: Tier | None = None
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    output_format: OutputFormat = OutputFormat.JSON
    output_path: str | None = None
    significant_digits: int = output_utils.SIGNIFICANT_DIGITS
    window_depth: float = 40.0
    max_iterations: int = 200
    max_halvings: int = 20

    def __post_init__(self):
        if (self.b is None) != (self.c is None):
            raise ValueError("Options '--b' and '--c' must be given together")
        if self.command is Command.CHECK and self.b is None:
            raise ValueError("Command 'check' needs '--b' and '--c'")
        coefficients = (self.alpha, self.beta, self.gamma)
        if any(x is not None for x in coefficients):
            if self.command is not Command.VERIFY:
                raise ValueError("Options '--alpha', '--beta', '--gamma' apply to 'verify' only")
            if any(x is None for x in coefficients):
                raise ValueError("Options '--alpha', '--beta', '--gamma' must be given together")
            if self.b is None:
                raise ValueError("Explicit coefficients need '--b' and '--c'")
        if self.samples < 2:
            raise ValueError(f"Option '--samples' must be at least 2, got {self.samples}")

    @property
    def spec(self) -> ProblemSpec:
        return ProblemSpec(self.dimension, self.ell, self.ell_prime)

    @property
    def has_params(self) -> bool:
        return self.b is not None

    @property
    def has_coefficients(self) -> bool:
        return self.alpha is not None

    @property
    def effective_tier(self) -> Tier:
        """Rounded tier for user-supplied couplings, exact for solved families, unless set."""
        if self.tier is not None:
            return self.tier
        return Tier.ROUNDED if self.has_params else Tier.EXACT

    @classmethod
    def from_args(cls, args: argparse.Namespace, config: dict) -> RunConfig:
        """Combine the parsed flags with the configuration file. Flags win."""
        grid = config.get("GRID", {})
        output = config.get("OUTPUT", {})
        solver = config.get("SOLVER", {})
        command = Command(args.command)
        if args.json:
            output_format = OutputFormat.JSON
        elif command is Command.RADIAL:
            output_format = OutputFormat.CSV
        elif command in (Command.CHECK, Command.CRITIQUE):
            output_format = OutputFormat.TEXT
        else:
            output_format = OutputFormat.JSON
        dimension = Dimension.from_int(args.dim)
        ell = args.m if args.m is not None else (args.ell or 0)
        return cls(
            command=command,
            dimension=dimension,
            a=args.a,
            ell=ell,
            ell_prime=args.ell_prime,
            b=args.b,
            c=args.c,
            state=State(args.state) if args.state else None,
            normalized=args.normalized,
            samples=args.samples if args.samples is not None else output.get("SAMPLES", 512),
            grid_n=args.grid_n if args.grid_n is not None else grid.get("N", 4000),
            r_min=args.r_min,
            r_max=args.r_max,
            refine=grid.get("REFINE", True),
            tier=Tier(args.tier) if args.tier else None,
            alpha=args.alpha,
            beta=args.beta,
            gamma=args.gamma,
            output_format=output_format,
            output_path=args.output,
            significant_digits=output.get("SIGNIFICANT_DIGITS", output_utils.SIGNIFICANT_DIGITS),
            window_depth=output.get("WINDOW_DEPTH", 40.0),
            max_iterations=solver.get("MAX_ITERATIONS", 200),
            max_halvings=solver.get("MAX_HALVINGS", 20),
        )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None,
                        help=f"Path to the TOML configuration file (default: {DEFAULT_CONFIG})")
    common.add_argument("--dim", type=int, choices=(2, 3), default=3, help="Dimension (default: 3)")
    common.add_argument("--a", type=float, default=1.0, help="Coupling of r^2 (default: 1)")
    common.add_argument("--ell", type=int, default=None, help="Angular momentum l of the ground state")
    common.add_argument("--m", type=int, default=None, help="Magnetic quantum number (2-D only)")
    common.add_argument("--ell-prime", type=int, default=None,
                        help="Angular momentum l' of the first excited state, when it differs from l")
    common.add_argument("--b", type=float, default=None, help="Coupling of r^-4")
    common.add_argument("--c", type=float, default=None, help="Coupling of r^-6")
    common.add_argument("--state", choices=[s.value for s in State], default=None,
                        help="State to use (default: ground for 'radial', both for 'verify')")
    common.add_argument("--normalized", action="store_true", help="Apply the normalization factor")
    common.add_argument("--samples", type=int, default=None, help="Rows of a radial table (default: 512)")
    common.add_argument("--grid-n", type=int, default=None,
                        help="Interior points of the eigensolver grid (default: 4000)")
    common.add_argument("--r-min", type=float, default=None, help="Inner wall of the eigensolver grid")
    common.add_argument("--r-max", type=float, default=None, help="Outer wall of the eigensolver grid")
    common.add_argument("--tier", choices=[t.value for t in Tier], default=None,
                        help="Tolerance tier (default: exact for solved families, rounded otherwise)")
    common.add_argument("--alpha", type=float, default=None, help="Explicit coefficient alpha")
    common.add_argument("--beta", type=float, default=None, help="Explicit coefficient beta")
    common.add_argument("--gamma", type=float, default=None, help="Explicit coefficient gamma")
    common.add_argument("--output", default=None, help="Write the result here instead of standard output")
    common.add_argument("--json", action="store_true", help="Emit JSON whatever the command")

    parser = argparse.ArgumentParser(
        prog="qes-radial",
        description="Closed-form ground and first excited states of V(r) = a r^2 + b r^-4 + c r^-6.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, text in ((Command.SOLVE, "Solve the constraints and print both states"),
                          (Command.CHECK, "Evaluate the constraint residuals of given couplings"),
                          (Command.VERIFY, "Verify states against the numerical oracle"),
                          (Command.RADIAL, "Sample R(r) into a CSV table"),
                          (Command.CRITIQUE, "Re-examine the earlier published parameter set")):
        subparsers.add_parser(command.value, parents=[common], help=text, description=text)
    return parser


def load_config(path: str | None) -> dict:
    """Read the TOML configuration. A missing default file means an empty configuration."""
    try:
        with open(path or DEFAULT_CONFIG, "rb") as f:
            return tomllib.load(f)
    except FileNotFoundError:
        if path is None:
            return {}
        print(f"Configuration file {path} not found.", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    except tomllib.TOMLDecodeError as e:
        print(f"Error parsing configuration file {path or DEFAULT_CONFIG}: {e}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def setup_logging(config: dict):
    """Log to standard error, and to a rotating file if LOG_FILE is set. Standard output is
    reserved for results."""
    for handler in list(log.handlers):
        log.removeHandler(handler)
    debug = int(config.get("DEBUG", 0))
    log.setLevel(logging.DEBUG if debug >= 2 else logging.INFO if debug == 1 else logging.WARNING)
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.get("LOG_FILE"):
        handlers.append(TimedRotatingFileHandler(config["LOG_FILE"], when='midnight', backupCount=7))
    formatter = logging.Formatter('%(name)s: %(levelname)s %(message)s')
    for handler in handlers:
        handler.setFormatter(formatter)
        log.addHandler(handler)


def solve_family(cfg: RunConfig) -> PotentialParams:
    if cfg.spec.is_cross:
        return solve_cross_l(cfg.a, cfg.ell, cfg.ell_prime, cfg.max_iterations, cfg.max_halvings)
    return solutions.solve_same_qn(cfg.a, cfg.spec)


def given_or_solved(cfg: RunConfig) -> PotentialParams:
    if cfg.has_params:
        return PotentialParams(cfg.a, cfg.b, cfg.c)
    return solve_family(cfg)


def problem_record(params: PotentialParams, spec: ProblemSpec) -> dict[str, Any]:
    return {"a": params.a, "b": params.b, "c": params.c, "dimension": int(spec.dimension),
            "ell": spec.ell, "ell_prime": spec.ell_prime}


def solution_record(params: PotentialParams, spec: ProblemSpec, ground: AnsatzSolution,
                    excited: AnsatzSolution) -> dict[str, Any]:
    report = constraints.constraint_report(params, spec)
    return problem_record(params, spec) | {
        "kappa0": ground.kappa,
        "kappa1": excited.kappa,
        "E0": ground.energy,
        "E1": excited.energy,
        "alpha": excited.alpha,
        "beta": excited.beta,
        "gamma": excited.gamma,
        "residuals": {"ground": report.ground_residual,
                      "excited": report.excited_residual,
                      "constraint9": report.constraint9_residual},
    }


def report_record(report: VerificationReport) -> dict[str, Any]:
    norm = report.normalization
    return {
        "state": report.state.value,
        "verdict": report.verdict,
        "checks": report.checks,
        "residual_max": report.residual_max,
        "residual_tolerance": report.residual_tolerance,
        "energy_analytic": report.energy_analytic,
        "energy_numeric": report.energy_numeric,
        "energy_delta": report.energy_delta,
        "energy_tolerance": report.energy_tolerance,
        "analytic_nodes": report.analytic_nodes,
        "numeric_nodes": report.numeric_nodes,
        "node_check": report.node_check,
        "normalization": None if norm is None else {
            "norm": norm.norm, "integral": norm.integral,
            "error_estimate": norm.error_estimate, "window": norm.window},
        "normalization_agreement": report.normalization_agreement,
        "errors": report.errors,
    }


def cmd_solve(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    """Solve the constraints, build both states and return the solution record."""
    params = solve_family(cfg)
    ground, excited = solutions.build_solutions(params, cfg.spec)
    return EXIT_OK, solution_record(params, cfg.spec, ground, excited)


def cmd_check(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    """Every applicable constraint residual of the given couplings. Exit 1 if any fails."""
    params = PotentialParams(cfg.a, cfg.b, cfg.c)
    tolerance = cfg.effective_tier.constraint_tolerance
    report = constraints.constraint_report(params, cfg.spec, tolerance)
    record = problem_record(params, cfg.spec) | {
        "tolerance": tolerance,
        "residuals": {"ground": report.ground_residual,
                      "excited": report.excited_residual,
                      "constraint9": report.constraint9_residual},
        "satisfied": {"ground": report.ground_satisfied,
                      "excited": report.excited_satisfied,
                      "constraint9": report.constraint9_satisfied},
        "all_satisfied": report.all_satisfied,
    }
    return (EXIT_OK if report.all_satisfied else EXIT_FAILED), record


def _states(cfg: RunConfig, params: PotentialParams, tolerance: float) -> list[AnsatzSolution]:
    if cfg.has_coefficients:
        state = cfg.state or State.GROUND
        return [solutions.candidate(params, cfg.spec, state, cfg.alpha, cfg.beta, cfg.gamma)]
    builders = {State.GROUND: solutions.ground_state, State.FIRST_EXCITED: solutions.excited_state}
    states = [cfg.state] if cfg.state else list(builders)
    return [builders[state](params, cfg.spec, tolerance) for state in states]


async def cmd_verify(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    """Verify the selected states concurrently. Exit 1 unless every check of every state passes."""
    params = given_or_solved(cfg)
    tier = cfg.effective_tier
    sols = _states(cfg, params, tier.constraint_tolerance)
    grid = RadialGrid.default_for(params, cfg.grid_n, cfg.r_min, cfg.r_max)
    reports = await verify_all(sols, grid, tier, refine=cfg.refine)
    passed = all(report.passed for report in reports)
    record = problem_record(params, cfg.spec) | {
        "tier": tier.value,
        "grid": {"r_min": grid.r_min, "r_max": grid.r_max, "n": grid.n},
        "reports": [report_record(report) for report in reports],
        "verdict": "pass" if passed else "fail",
    }
    return (EXIT_OK if passed else EXIT_FAILED), record


def cmd_radial(cfg: RunConfig) -> tuple[int, RadialTable]:
    """Sample one state on log-spaced radii over the window used for normalization."""
    params = given_or_solved(cfg)
    tolerance = cfg.effective_tier.constraint_tolerance
    state = cfg.state or State.GROUND
    if state is State.GROUND:
        sol = solutions.ground_state(params, cfg.spec, tolerance)
    else:
        sol = solutions.excited_state(params, cfg.spec, tolerance)
    if cfg.normalized:
        sol = normalized(sol)
    lo, hi = integration_window(sol, cfg.window_depth)
    r = np.geomspace(lo, hi, cfg.samples)
    report = constraints.constraint_report(params, cfg.spec, tolerance)
    header = problem_record(params, cfg.spec) | {
        "state": state.value,
        "kappa": sol.kappa,
        "E": sol.energy,
        "normalized": cfg.normalized,
        "norm": sol.norm,
        "tolerance": tolerance,
        "ground_satisfied": report.ground_satisfied,
        "excited_satisfied": report.excited_satisfied,
        "constraint9_satisfied": report.constraint9_satisfied,
    }
    return EXIT_OK, RadialTable(header=header, r=r, values=radial_eval(sol, r))


def cmd_critique(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    """The earlier parameter set: valid ground state, no consistent first excited state. The
    corrected l = 0 family is reported alongside."""
    params, spec = legacy.LEGACY_PARAMS, legacy.LEGACY_SPEC
    ground = legacy.legacy_ground_state()
    report = constraints.constraint_report(params, spec, ROUNDED_TOLERANCE)
    candidate = legacy.legacy_excited_candidate()
    matching = coefficient_match_residuals(candidate, params, spec)
    _, ode_at_1 = ode_residual(candidate, 1.0)

    corrected = solutions.solve_same_qn(params.a, spec)
    corrected_ground, corrected_excited = solutions.build_solutions(corrected, spec)
    record = {
        "tolerance": ROUNDED_TOLERANCE,
        "legacy": problem_record(params, spec) | {
            "kappa0": ground.kappa,
            "E0": ground.energy,
            "ground_residual": report.ground_residual,
            "ground_satisfied": report.ground_satisfied,
            "excited_residual": report.excited_residual,
            "excited_satisfied": report.excited_satisfied,
            "constraint9_residual": report.constraint9_residual,
            "constraint9_satisfied": report.constraint9_satisfied,
            "candidate": {
                "alpha": candidate.alpha,
                "beta": candidate.beta,
                "gamma": candidate.gamma,
                "kappa1": candidate.kappa,
                "E1": candidate.energy,
                "coefficient_residuals": list(matching),
                "max_coefficient_residual": max(abs(x) for x in matching),
                "ode_relative_residual_at_1": ode_at_1,
            },
        },
        "corrected": solution_record(corrected, spec, corrected_ground, corrected_excited),
    }
    return EXIT_OK, record


async def execute(cfg: RunConfig) -> tuple[int, Any]:
    """Run the command of `cfg`. Invalid input and unsolvable problems become an error record."""
    try:
        match cfg.command:
            case Command.SOLVE:
                return cmd_solve(cfg)
            case Command.CHECK:
                return cmd_check(cfg)
            case Command.VERIFY:
                return await cmd_verify(cfg)
            case Command.RADIAL:
                return cmd_radial(cfg)
            case Command.CRITIQUE:
                return cmd_critique(cfg)
    except INVALID_INPUT_ERRORS as e:
        log.error("%s: %s", type(e).__name__, e)
        return EXIT_INVALID, error_record(e)


def emit(cfg: RunConfig, payload: Any):
    digits = cfg.significant_digits
    with output_utils.open_output(cfg.output_path) as stream:
        if isinstance(payload, RadialTable):
            if cfg.output_format is OutputFormat.CSV:
                output_utils.write_csv(payload, stream, digits)
            else:
                output_utils.write_json(payload.as_record(), stream, digits)
        elif cfg.output_format is OutputFormat.TEXT:
            output_utils.write_text(payload, stream, digits)
        else:
            output_utils.write_json(payload, stream, digits)


async def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.m is not None and args.dim != 2:
        parser.error("--m applies to two dimensions only; use --ell")

    config = load_config(args.config)
    if os.getenv("QES_RADIAL_DEBUG") is not None:
        config["DEBUG"] = int(os.getenv("QES_RADIAL_DEBUG", 0))
    setup_logging(config)
    log.info("Debug level: %s", config.get("DEBUG"))

    try:
        cfg = RunConfig.from_args(args, config)
    except ValueError as e:
        log.error("Invalid options: %s", e)
        output_utils.write_json(error_record(e), sys.stdout)
        return EXIT_INVALID

    code, payload = await execute(cfg)
    if code == EXIT_INVALID:
        output_utils.write_json(payload, sys.stdout)
    else:
        try:
            emit(cfg, payload)
        except OSError as e:
            log.error("Could not write output: %s", e)
            # stdout may be the target that failed
            output_utils.write_json(error_record(e), sys.stderr)
            return EXIT_INVALID
    return code


def run():
    sys.exit(asyncio.run(main()))


if __name__ == "__main__":
    run()
