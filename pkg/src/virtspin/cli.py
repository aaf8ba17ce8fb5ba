"""``pulsecli`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import catalog, compiler, density, dj
from .catalog import BoolFn2, UnknownGateError, UnsupportedError, gate_id
from .program import ParseError, parse, serialize
from .pulses import PulseSpec, sequence_operator
from .su4 import PreconditionError
from .system import DEFAULT_BETA, SystemSpec, read_config, system_from_config

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def matrix_json(a) -> list:
    """Row-major nested list of ``[re, im]`` pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a, dtype=complex)]


def complex_json(z) -> list | None:
    return None if z is None else [float(z.real), float(z.imag)]


def event_json(ev) -> dict:
    if isinstance(ev, PulseSpec):
        return {
            "type": "pulse",
            "axis": ev.axis,
            "transition": [ev.m, ev.n],
            "angle": ev.angle.radians,
            "phase": ev.phase.radians,
            "text": str(ev),
        }
    if isinstance(ev, density.Delay):
        return {"type": "delay", "duration": ev.duration}
    return {"type": "gradient"}


def _fmt_c(z) -> str:
    if z is None:
        return "n/a"
    ang = np.angle(z) / np.pi
    return f"{z.real:+.6f}{z.imag:+.6f}j (exp(i*{ang:+.4f}*pi))"


def _fmt_matrix(a) -> str:
    rows = []
    for row in np.asarray(a):
        rows.append("  " + "  ".join(f"{z.real:+.4f}{z.imag:+.4f}j" for z in row))
    return "\n".join(rows)


def _load_program(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _system(args) -> tuple[SystemSpec, float]:
    try:
        cfg = read_config(args.system) if args.system else {}
        sys_, beta = system_from_config(cfg)
    except (OSError, ValueError) as exc:
        raise UsageError(f"bad system configuration: {exc}") from None
    if args.beta is not None:
        beta = args.beta
    return sys_, beta


def _gate(name: str):
    try:
        return gate_id(name)
    except UnknownGateError as exc:
        raise UsageError(str(exc.args[0])) from None


def cmd_catalog(args) -> tuple[dict, str, int]:
    rows, lines = [], []
    for g in catalog.GateId:
        try:
            fact = catalog.format_factorization(catalog.virtual_factorization(g))
        except UnsupportedError:
            fact = None
        compilable = g in compiler.REALIZATIONS
        rows.append({
            "id": g.value,
            "description": catalog.DESCRIPTIONS[g],
            "matrix": matrix_json(catalog.gate(g)),
            "compilable": compilable,
            "printed_prefactor": complex_json(compiler.printed_prefactor(g)) if compilable else None,
            "factorization": fact,
        })
        lines.append(f"{g.value:8s} {'pulses' if compilable else '------':6s}  {catalog.DESCRIPTIONS[g]}")
    return {"command": "catalog", "gates": rows}, "\n".join(lines), EXIT_OK


def cmd_compile(args) -> tuple[dict, str, int]:
    gid = _gate(args.gate)
    try:
        res = compiler.compile_gate(gid, args.max_dm, args.strategy)
    except UnsupportedError as exc:
        raise UsageError(str(exc)) from None
    text = serialize(res.sequence)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    doc = {
        "command": "compile",
        "gate": gid.value,
        "max_delta_m": args.max_dm,
        "strategy": args.strategy,
        "program": text,
        "events": [event_json(e) for e in res.sequence],
        "n_pulses": len(res.sequence.pulses),
        "operator": matrix_json(sequence_operator(res.sequence)),
        "target": matrix_json(compiler.compilation_target(gid)),
        "distance": float(res.measured_distance),
        "phase": complex_json(res.measured_phase),
        "printed_prefactor": complex_json(compiler.printed_prefactor(gid)),
        "success": bool(res.success),
    }
    human = (
        f"# {gid.value}: {len(res.sequence.pulses)} pulses, distance {res.measured_distance:.3e}, "
        f"phase {_fmt_c(res.measured_phase)}\n" + text.rstrip("\n")
    )
    return doc, human, EXIT_OK


def cmd_verify(args) -> tuple[dict, str, int]:
    gid = _gate(args.target)
    seq = _load_program(args.file)
    if seq.has_gradient:
        raise UsageError("program contains gradient events; use 'simulate' for non-unitary programs")
    sys_, _ = _system(args)
    if args.ideal:
        target = catalog.gate(gid)
    else:
        try:
            target = compiler.compilation_target(gid)
        except UnsupportedError:
            target = catalog.gate(gid)
    res = compiler.verify(seq, target, args.tol, sys_, gid)
    u = sequence_operator(seq, sys_)
    doc = {
        "command": "verify",
        "file": str(args.file),
        "target": gid.value,
        "distance": float(res.measured_distance),
        "phase": complex_json(res.measured_phase),
        "tol": args.tol,
        "success": bool(res.success),
        "operator": matrix_json(u),
        "target_matrix": matrix_json(target),
    }
    status = "OK" if res.success else "FAILED"
    human = f"{status}: {gid.value} distance {res.measured_distance:.3e}, phase {_fmt_c(res.measured_phase)}"
    if not res.success:
        aligned = u * (res.measured_phase or 1)
        print(f"verification failed: distance {res.measured_distance:.6e} > {args.tol:g}", file=sys.stderr)
        print("operator difference (phase-aligned program - target):", file=sys.stderr)
        print(_fmt_matrix(aligned - target), file=sys.stderr)
    return doc, human, EXIT_OK if res.success else EXIT_FAIL


def _initial_state(state: str, sys_: SystemSpec, beta: float) -> density.DensityMatrix:
    state = state.lower()
    if state.startswith("basis:"):
        try:
            k = int(state.split(":", 1)[1])
            return density.DensityMatrix.basis(k)
        except (ValueError, IndexError):
            raise UsageError(f"bad basis state {state!r}; expected basis:0..3") from None
    if state == "pseudo-pure":
        return density.prepare_pseudo_pure(sys_, beta).state
    if state == "thermal":
        return density.thermal_state(sys_, beta, linearize=True)
    raise UsageError(f"unknown initial state {state!r}")


def cmd_simulate(args) -> tuple[dict, str, int]:
    seq = _load_program(args.file)
    sys_, beta = _system(args)
    try:
        rho0 = _initial_state(args.state, sys_, beta)
    except density.PreparationError as exc:
        raise UsageError(str(exc)) from None
    rho = density.evolve(rho0, seq, sys_)
    pops = rho.populations
    doc = {
        "command": "simulate",
        "file": str(args.file),
        "initial_state": args.state,
        "n_events": len(seq),
        "rho": matrix_json(rho.rho),
        "populations": [float(p) for p in pops],
        "max_coherence": rho.max_coherence(),
        "fid_12": density.fid_amplitude(rho, (1, 2)),
    }
    human = (
        f"populations: {np.array2string(pops, precision=10)}\n"
        f"max coherence: {doc['max_coherence']:.3e}\n"
        f"FID amplitude (1,2): {doc['fid_12']:.6e}"
    )
    return doc, human, EXIT_OK


def cmd_run_dj(args) -> tuple[dict, str, int]:
    try:
        f = BoolFn2.parse(args.oracle)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys_, beta = _system(args)
    res = dj.run_dj(f, args.mode, args.state_model, sys_, beta)
    doc = {
        "command": "run-dj",
        "oracle": "f" + f.tag,
        "mode": res.mode.value,
        "state_model": res.state_model.value,
        "classification": res.classification,
        "output_phase": complex_json(res.output_phase),
        "fid": res.fid,
        "weights": [float(w) for w in res.weights],
        "steps": list(res.steps),
        "oracle_calls": res.oracle_calls,
        "alpha": res.alpha,
        "prepared_level": res.prepared_level,
    }
    return doc, res.classification, EXIT_OK


def cmd_cost(args) -> tuple[dict, str, int]:
    seq = _load_program(args.file)
    use_eta = args.eta is not None
    try:
        sys_ = SystemSpec(omega0=args.omega0, omega_q=args.omegaq, eta=args.eta if use_eta else 0.0)
        total = compiler.cost(seq, sys_, use_eta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    items = [
        {
            "pulse": str(p),
            "delta_m": p.delta_m,
            "weight": compiler.transition_weight(p.delta_m, sys_, use_eta),
            "cost": abs(p.angle.radians) * compiler.transition_weight(p.delta_m, sys_, use_eta),
        }
        for p in seq.pulses
    ]
    doc = {
        "command": "cost",
        "file": str(args.file),
        "omega0": args.omega0,
        "omegaq": args.omegaq,
        "eta": args.eta,
        "use_eta": use_eta,
        "cost": total,
        "pulses": items,
    }
    return doc, f"cost {total:.6g}", EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document on stdout")
    common.add_argument("--system", metavar="FILE", help="key=value system configuration file")
    common.add_argument("--beta", type=float, default=None, help=f"inverse temperature (default {DEFAULT_BETA:g})")

    p = _Parser(prog="pulsecli", description="Virtual-spin gate compiler and simulator for a spin-3/2.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("catalog", parents=[common], help="list catalog gates")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("compile", parents=[common], help="compile a gate to a pulse program")
    s.add_argument("gate")
    s.add_argument("--max-dm", type=int, choices=(1, 2), default=None)
    s.add_argument("--strategy", choices=compiler.STRATEGIES, default="x")
    s.add_argument("-o", "--output", metavar="FILE", help="also write the program to FILE")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("verify", parents=[common], help="verify a program against a gate")
    s.add_argument("file")
    s.add_argument("--target", required=True)
    s.add_argument("--tol", type=float, default=compiler.VERIFY_TOL)
    s.add_argument("--ideal", action="store_true", help="compare with the ideal catalog matrix")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", parents=[common], help="evolve a density matrix through a program")
    s.add_argument("file")
    s.add_argument("--state", default="pseudo-pure", help="basis:<k>, pseudo-pure or thermal")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("run-dj", parents=[common], help="run Deutsch-Jozsa for one oracle")
    s.add_argument("--oracle", required=True, choices=("f00", "f01", "f10", "f11"))
    s.add_argument("--mode", required=True, choices=[m.value for m in dj.DjMode])
    s.add_argument("--state-model", default="pure", choices=[m.value for m in dj.StateModel])
    s.set_defaults(func=cmd_run_dj)

    s = sub.add_parser("cost", parents=[common], help="price a program with the transition cost model")
    s.add_argument("file")
    s.add_argument("--omega0", type=float, required=True)
    s.add_argument("--omegaq", type=float, required=True)
    s.add_argument("--eta", type=float, default=None)
    s.set_defaults(func=cmd_cost)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc, human, code = args.func(args)
    except (UsageError, PreconditionError) as exc:
        print(f"pulsecli: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(human)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
