"""Command-line interface.

Subcommands: eval, optimize, scan, teleport, report.  All angles are in
radians and floats are printed with 12 significant digits.  Every command is
deterministic for a fixed --seed; the one timing field (elapsed_ms) goes to
stderr so stdout is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import inequalities, report, states, teleport
from .optimize import OptimizationConfig, max_violation, scan_upsilon, write_scan_csv
from .qstate import ConsistencyError, ValidationError, negativity


@dataclass(frozen=True)
class CommandResult:
    command: str
    inputs: dict
    outputs: dict
    elapsed_ms: float

    def to_json(self) -> str:
        doc = {"command": self.command, "inputs": self.inputs, "outputs": _sig12(self.outputs)}
        return json.dumps(doc, indent=2, sort_keys=True)


def _sig12(value):
    """Round floats to 12 significant digits, recursively."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _sig12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sig12(v) for v in value]
    return value


def _resolve_settings(spec: str) -> inequalities.SettingsAssignment:
    """A path to a JSON settings file shadows a built-in key of the same name."""
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            return inequalities.settings_from_document(json.load(fh))
    return inequalities.builtin_settings(spec)


def _config_from_args(args) -> OptimizationConfig:
    return OptimizationConfig(
        restarts=args.restarts,
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        rng_seed=args.seed,
    )


def _add_optimizer_flags(parser, restarts: int):
    parser.add_argument("--restarts", type=int, default=restarts,
                        help=f"random restarts (default {restarts})")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--tolerance", type=float, default=1e-9,
                        help="convergence tolerance (default 1e-9)")
    parser.add_argument("--max-iterations", type=int, default=3000,
                        help="simplex iteration cap per restart (default 3000)")


def cmd_eval(args) -> tuple[dict, dict, int]:
    expr = inequalities.builtin(args.expr)
    state = states.state_from_id(args.state)
    settings = _resolve_settings(args.settings)
    value = inequalities.evaluate(expr, state, settings)
    bound = inequalities.classical_bound(expr)
    inputs = {"expr": args.expr, "state": args.state, "settings": args.settings}
    outputs = {
        "value": value,
        "classical_bound": bound,
        "algebraic_max": inequalities.algebraic_max(expr),
        "violated": bool(value > bound),
    }
    return inputs, outputs, 0


def cmd_optimize(args) -> tuple[dict, dict, int]:
    expr = inequalities.builtin(args.expr)
    state = states.state_from_id(args.state)
    optimum = max_violation(expr, state, _config_from_args(args))
    bound = inequalities.classical_bound(expr)
    inputs = {"expr": args.expr, "state": args.state, "restarts": args.restarts,
              "seed": args.seed}
    outputs = {
        "value": optimum.value,
        "converged": optimum.converged,
        "restarts_used": optimum.restarts_used,
        "classical_bound": bound,
        "violated": bool(optimum.value > bound),
        "settings": inequalities.settings_to_document(optimum.settings),
    }
    return inputs, outputs, 0


def cmd_scan(args) -> tuple[dict, dict, int]:
    if args.grid < 2:
        raise ValidationError("--grid must be at least 2")
    expr = inequalities.builtin(args.expr)
    fixed = _resolve_settings(args.fixed_settings) if args.fixed_settings else None
    grid = np.linspace(-np.pi / 2, np.pi / 2, args.grid)
    rows = scan_upsilon(expr, grid, grid, _config_from_args(args), fixed_settings=fixed)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_scan_csv(rows, fh)
    inputs = {"expr": args.expr, "grid": args.grid, "seed": args.seed,
              "fixed_settings": args.fixed_settings}
    outputs = {
        "out": args.out,
        "rows": len(rows),
        "expression": inequalities.expression_to_document(expr, fixed),
        "max_value": max(r.value for r in rows),
        "all_converged": all(r.converged for r in rows),
    }
    return inputs, outputs, 0


def _teleport_point(q: float, epsilon: float) -> dict:
    crit = teleport.critical_visibilities(epsilon)
    rho_out = teleport.output_state(q, teleport.input_state(epsilon))
    fraction = teleport.singlet_fraction_closed(q)
    neg = negativity(rho_out, {1})
    chsh = teleport.chsh_max_two_qubit(rho_out)
    return {
        "singlet_fraction": fraction,
        "negativity": neg,
        "chsh_max": chsh,
        "q_channel": crit.q_channel,
        "q_bell": crit.q_bell,
        "q1": crit.q1,
        "q2": crit.q2,
        "useful": bool(fraction > 0.5),
        "bell_local": bool(q < crit.q_bell),
        "entangled": bool(neg > 0.0),
        "violates_chsh": bool(chsh > 2.0),
    }


def cmd_teleport(args) -> tuple[dict, dict, int]:
    if args.sweep:
        if not args.out:
            raise ValidationError("--sweep requires --out FILE.csv")
        qs = np.linspace(args.q_min, args.q_max, args.q_steps)
        epsilons = np.linspace(args.epsilon_min, args.epsilon_max, args.epsilon_steps)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write("q,epsilon,fidelity_proxy,negativity,chsh_max,violates_chsh\n")
            for q in qs:
                for eps in epsilons:
                    point = _teleport_point(float(q), float(eps))
                    fh.write(
                        f"{q:.12g},{eps:.12g},{point['singlet_fraction']:.12g},"
                        f"{point['negativity']:.12g},{point['chsh_max']:.12g},"
                        f"{'true' if point['violates_chsh'] else 'false'}\n"
                    )
        inputs = {"sweep": True, "q_steps": args.q_steps, "epsilon_steps": args.epsilon_steps}
        outputs = {"out": args.out, "rows": int(len(qs) * len(epsilons))}
        return inputs, outputs, 0
    if args.q is None or args.epsilon is None:
        raise ValidationError("provide --q and --epsilon, or --sweep")
    inputs = {"q": args.q, "epsilon": args.epsilon}
    return inputs, _teleport_point(args.q, args.epsilon), 0


def cmd_report(args) -> tuple[dict, dict, int]:
    rows = report.build_report()
    for line in report.format_rows(rows):
        print(line)
    n_fail = sum(1 for r in rows if not r.ok)
    print(f"report: {len(rows)} rows, {n_fail} failures")
    return {}, {"rows": len(rows), "failures": n_fail}, 0 if n_fail == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bell4q",
        description="Four-qubit Bell inequality violations and teleportation-resource analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate an expression at fixed settings")
    p_eval.add_argument("--expr", required=True, help="expression name (e.g. bi1, mabk4)")
    p_eval.add_argument("--state", required=True, help="state id (e.g. chi, upsilon:0.5:0.5)")
    p_eval.add_argument("--settings", required=True, help="settings key or JSON file")
    p_eval.set_defaults(func=cmd_eval)

    p_opt = sub.add_parser("optimize", help="maximize an expression over settings")
    p_opt.add_argument("--expr", required=True)
    p_opt.add_argument("--state", required=True)
    _add_optimizer_flags(p_opt, restarts=32)
    p_opt.set_defaults(func=cmd_optimize)

    p_scan = sub.add_parser("scan", help="violation landscape over the two-angle family")
    p_scan.add_argument("--expr", default="bi1")
    p_scan.add_argument("--grid", type=int, required=True, help="N for an NxN grid")
    p_scan.add_argument("--out", required=True, help="output CSV path")
    p_scan.add_argument("--fixed-settings", default=None,
                        help="evaluate at these settings instead of optimizing")
    _add_optimizer_flags(p_scan, restarts=6)
    p_scan.set_defaults(func=cmd_scan)

    p_tp = sub.add_parser("teleport", help="channel-state teleportation analysis")
    p_tp.add_argument("--q", type=float, default=None, help="visibility in [0, 1]")
    p_tp.add_argument("--epsilon", type=float, default=None,
                      help="input entanglement angle in [0, pi/2]")
    p_tp.add_argument("--sweep", action="store_true", help="write a (q, epsilon) CSV sweep")
    p_tp.add_argument("--q-min", type=float, default=0.0)
    p_tp.add_argument("--q-max", type=float, default=1.0)
    p_tp.add_argument("--q-steps", type=int, default=11)
    p_tp.add_argument("--epsilon-min", type=float, default=0.0)
    p_tp.add_argument("--epsilon-max", type=float, default=float(np.pi / 2))
    p_tp.add_argument("--epsilon-steps", type=int, default=7)
    p_tp.add_argument("--out", default=None, help="output CSV path for --sweep")
    p_tp.set_defaults(func=cmd_teleport)

    p_rep = sub.add_parser("report", help="recompute and check every headline number")
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        inputs, outputs, code = args.func(args)
    except (ValidationError, ConsistencyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    result = CommandResult(args.command, inputs, outputs, elapsed_ms)
    if args.command != "report":
        print(result.to_json())
    print(f"elapsed_ms={elapsed_ms:.1f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
