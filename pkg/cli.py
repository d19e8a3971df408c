# -*- coding: utf-8 -*-
"""
Command-line front end.

    python cli.py mpoly F3.json
    python cli.py build --dft 3 --frft 0.4 --out build/ --pdf build/report.pdf
    python cli.py simulate --circuit build/circuit.json --state in.json --out out.json
    python cli.py frft --n 3 --x 0.7853981633974483 --state in.json --out out.json
    python cli.py limitation diag.json
    python cli.py cost --K 10 --m 4
    python cli.py cost --K 10 --sweep --out cost.csv

Exit codes: 0 pass, 1 verification failed, 2 usage / parse / resource error,
3 precondition (math) error, 4 mpoly found no m <= max_m with U^m scalar.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from agents.verification_agent import JobConfig, VerificationAgent
from synth.circuit import circuit_to_matrix, cost_estimate, cost_sweep, simulate
from synth.errors import (
    EXIT_NOT_FOUND,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    SynthesisError,
)
from synth.frft import FrftParams, frft_angle, frft_apply
from synth.funcsynth import FunctionSpec, limitation_demo
from synth.matcore import dft_matrix, find_scalar_power, minimal_polynomial
from utils import file_formats
from utils.pdf_exports import build_verification_pdf
from utils.settings import load_settings

logger = logging.getLogger("cli")


# ----------------------------
# Formatting helpers
# ----------------------------
def _complex_text(z: complex, digits: int = 12) -> str:
    z = complex(z)
    re_part = 0.0 if abs(z.real) < 1e-12 else round(z.real, digits)
    im_part = 0.0 if abs(z.imag) < 1e-12 else round(z.imag, digits)
    if im_part == 0.0:
        return f"{re_part:g}"
    if re_part == 0.0:
        return "i" if im_part == 1 else "-i" if im_part == -1 else f"{im_part:g}i"
    return f"{re_part:g}{im_part:+g}i"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ----------------------------
# Commands
# ----------------------------
def cmd_mpoly(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    tol = settings["tolerances"]["default"]
    U = file_formats.read_matrix(args.matrix)
    mpoly = minimal_polynomial(U, tol)
    found = find_scalar_power(U, settings["search"]["max_m"], tol)

    if found is None:
        line = f"{mpoly.format()}; no m <= {settings['search']['max_m']} found"
    else:
        line = f"{mpoly.format()}; m={found[0]}, tau={_complex_text(found[1])}"
    print(line)

    if args.out:
        file_formats.write_json(
            args.out,
            {
                "minimal_polynomial": [[c.real, c.imag] for c in mpoly.coeffs],
                "text": mpoly.format(),
                "m": None if found is None else found[0],
                "tau": None if found is None else [found[1].real, found[1].imag],
            },
        )
    return EXIT_NOT_FOUND if found is None else EXIT_OK


def _function_spec(args: argparse.Namespace) -> FunctionSpec:
    if args.spec:
        return file_formats.read_spec(args.spec)
    if args.frft is not None:
        return FunctionSpec.frft(args.frft)
    if args.order is not None:
        return FunctionSpec.frft(frft_angle(args.order))
    if args.power is not None:
        return FunctionSpec.power(args.power)
    if args.conjugate:
        return FunctionSpec.conjugate()
    return FunctionSpec.identity()


def cmd_build(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    K = args.K
    if args.matrix:
        U, source = file_formats.read_matrix(args.matrix), args.matrix
    elif args.circuit:
        circuit_in = file_formats.read_circuit(args.circuit)
        U, source = circuit_to_matrix(circuit_in, settings["simulation"]["max_width"]), args.circuit
        K = K if K is not None else max(1, len(circuit_in))
    else:
        U, source = dft_matrix(args.dft), f"dft(n={args.dft})"

    job = JobConfig.from_settings(U, _function_spec(args), settings, m=args.m, K=K, source=source)
    bundle, circuit, report = VerificationAgent(settings).run(job)

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, mat in (("B", bundle.B), ("C", bundle.C), ("M", bundle.M)):
            file_formats.write_matrix(out_dir / f"{name}.json", mat)
        file_formats.write_circuit(out_dir / "circuit.json", circuit)
        (out_dir / "report.json").write_text(report.to_json(), encoding="utf-8")
    else:
        sys.stdout.write(report.to_json())

    if args.pdf:
        Path(args.pdf).write_bytes(build_verification_pdf(report=report.to_dict()))

    failed = report.failed_checks()
    summary = f"verdict: {report.verdict} ({len(report.checks) - len(failed)}/{len(report.checks)} checks)"
    print(summary, file=sys.stderr)
    for check in failed:
        print(f"  {check.name}: {check.residual:.3e} > {check.tolerance:g}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_simulate(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    circuit = file_formats.read_circuit(args.circuit)
    psi = file_formats.read_state(args.state)
    out = simulate(circuit, psi, settings["tolerances"]["default"])
    _emit(file_formats.dumps_canonical(file_formats.state_to_dict(out)), args.out)
    return EXIT_OK


def cmd_frft(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    params = FrftParams.from_order(args.n, args.order) if args.order is not None else FrftParams(args.n, args.x)
    if args.state:
        psi = file_formats.read_state(args.state)
    else:
        psi = np.zeros(params.dim, dtype=complex)
        psi[0] = 1.0
    out = frft_apply(params, psi, settings["tolerances"]["default"])
    _emit(file_formats.dumps_canonical(file_formats.state_to_dict(out)), args.out)
    return EXIT_OK


def cmd_limitation(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    U = file_formats.read_matrix(args.matrix)
    demo = limitation_demo(U, settings["tolerances"]["default"])
    print(f"m(x) = {demo.mpoly.format()}")
    print(f"g(x) = {demo.g.format()}")
    print(f"first row norm^2 = {demo.first_row_norm_sq:.12g}")

    if args.out:
        file_formats.write_json(
            args.out,
            {
                "mpoly": demo.mpoly.format(),
                "g": [[c.real, c.imag] for c in demo.g.coeffs],
                "first_row_norm_sq": demo.first_row_norm_sq,
            },
        )
    return EXIT_OK


def cmd_cost(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    c_syn = settings["cost"]["c_syn"]
    if args.sweep:
        table = cost_sweep(args.K, range(2, args.m_max + 1), c_syn)
    else:
        table = pd.DataFrame([cost_estimate(args.K, args.m, c_syn).as_row()])
    _emit(table.to_csv(index=False), args.out)
    return EXIT_OK


# ----------------------------
# Parser
# ----------------------------
def _common_flags(defaults: bool) -> argparse.ArgumentParser:
    """Global flags, accepted before or after the command name."""
    default = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=default(None), help="numerical tolerance (default 1e-10)")
    p.add_argument("--seed", type=int, default=default(None), help="seed for sampled states")
    p.add_argument("--out", default=default(None), help="output file (build: output directory)")
    p.add_argument("--config", default=default(None), help="settings JSON (default config/defaults.json)")
    p.add_argument("--verbose", "-v", action="store_true", default=default(False), help="debug logging")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cli.py",
        description="Synthesize and verify generic circuits for f(U) with U^m scalar.",
        parents=[_common_flags(defaults=True)],
    )
    common = _common_flags(defaults=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mpoly", parents=[common], help="minimal polynomial and smallest scalar power")
    p.add_argument("matrix", help="matrix JSON file")
    p.set_defaults(func=cmd_mpoly)

    p = sub.add_parser("build", parents=[common], help="build the generic circuit and verify it")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="U as a matrix JSON file")
    src.add_argument("--circuit", help="U as a circuit JSON file (K = its gate count)")
    src.add_argument("--dft", type=int, help="U = F_n on n qubits")
    fn = p.add_mutually_exclusive_group()
    fn.add_argument("--spec", help="function spec JSON file")
    fn.add_argument("--frft", type=float, metavar="X", help="fractional DFT power, angle x in radians")
    fn.add_argument("--order", type=float, metavar="A", help="fractional DFT power by order a = 2x/pi")
    fn.add_argument("--power", type=float, metavar="S", help="principal power lambda^s")
    fn.add_argument("--identity", action="store_true", help="f(lambda) = lambda (default)")
    fn.add_argument("--conjugate", action="store_true", help="f(lambda) = conj(lambda)")
    p.add_argument("--m", type=int, help="use U^m = tau I for this m (default: smallest)")
    p.add_argument("--K", type=int, help="gate count of U for the cost bounds")
    p.add_argument("--pdf", help="also write the report as PDF")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("simulate", parents=[common], help="run a circuit file on a state file")
    p.add_argument("--circuit", required=True)
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "frft",
        parents=[common],
        help="apply F_n^x through the generic circuit",
        description="x = pi/2 gives F_n; the usual fractional order is a = 2x/pi (use --order).",
    )
    p.add_argument("--n", type=int, required=True, help="system qubits")
    angle = p.add_mutually_exclusive_group(required=True)
    angle.add_argument("--x", type=float, help="angle in radians")
    angle.add_argument("--order", type=float, help="fractional order a = 2x/pi")
    p.add_argument("--state", help="state JSON (default |0>)")
    p.set_defaults(func=cmd_frft)

    p = sub.add_parser("limitation", parents=[common], help="non-binomial counterexample: first row norm^2 of C")
    p.add_argument("matrix", help="matrix JSON file")
    p.set_defaults(func=cmd_limitation)

    p = sub.add_parser("cost", parents=[common], help="gate-count bounds as CSV")
    p.add_argument("--K", type=int, required=True, help="gate count of U")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--sweep", action="store_true", help="one row per m in 2..m-max")
    p.add_argument("--m-max", type=int, default=64)
    p.set_defaults(func=cmd_cost)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    overrides: Dict[str, Any] = {
        "tolerances": {"default": args.tol},
        "verification": {"seed": args.seed},
    }
    settings = load_settings(args.config, overrides)

    try:
        return args.func(args, settings)
    except SynthesisError as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
