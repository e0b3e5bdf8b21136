"""Command-line front end.

Exit status: 0 when every check passes, 1 when a verification finds a
counterexample, 2 on usage, capacity or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import gates
from .circuit import format_phase, parse_circuit, parse_phase, run_quantum, serialize_circuit
from .codes import CodeSpec, multi_block_encode
from .errors import CapacityError, InvalidArgumentError
from .experiments import (
    GENERIC_INPUT,
    IDENTITY_TOL,
    identity_check,
    records_to_csv,
    run_sweep,
    verify_code,
)
from .noise import parse_model
from .statevector import DEFAULT_QUBIT_CAP, as_qubit_vector, fidelity_with, init_state, set_qubit_cap

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_complex(text: str) -> complex:
    """``re,im`` or a bare real part."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _phase_arg(text: str) -> float:
    try:
        return parse_phase(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad phase {text!r}") from None


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # shared by the top-level parser and every subcommand so flags work on either side
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=d(0), help="u64 RNG seed")
    p.add_argument("--threads", type=int, default=d(1))
    p.add_argument("--qubit-cap", type=int, default=d(None))
    p.add_argument("--out", type=Path, default=d(None))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dephasecode", parents=[_global_flags(False)],
                                     description="Dephasing-correction codes on a state-vector simulator.")
    sub = parser.add_subparsers(dest="command", required=True)
    flags = _global_flags(True)

    p = sub.add_parser("verify", parents=[flags], help="exhaustive correction check")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--weight", type=int, default=None, help="max error weight (default t)")
    p.add_argument("--inputs", type=int, default=100)
    p.add_argument("--grid", type=int, default=20)

    p = sub.add_parser("sweep", parents=[flags], help="Monte-Carlo fidelity sweep to CSV")
    p.add_argument("--t", type=int, action="append", help="repeatable; default 1")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--model", default="iid:gauss,sigma=0.1")
    p.add_argument("--sigmas", type=parse_float_list, default=[0.05, 0.1, 0.2, 0.4])
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--alpha", type=parse_complex, default=GENERIC_INPUT[0])
    p.add_argument("--beta", type=parse_complex, default=GENERIC_INPUT[1])

    p = sub.add_parser("emit", parents=[flags], help="write encode/decode circuit files")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("identity-check", parents=[flags], help="check U^dag D U against its closed form")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--phi0", type=_phase_arg, default=None)
    p.add_argument("--phi1", type=_phase_arg, default=None)

    p = sub.add_parser("run", parents=[flags], help="apply a circuit file to alpha|0>+beta|1> (x) |0..0>")
    p.add_argument("circuit", type=Path)
    p.add_argument("--alpha", type=parse_complex, default=1.0)
    p.add_argument("--beta", type=parse_complex, default=0.0)
    return parser


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_verify(args) -> int:
    report = verify_code(args.t, args.weight, n_inputs=args.inputs, n_grid=args.grid, seed=args.seed)
    _write(report.format() + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    if args.trials < 1:
        raise InvalidArgumentError("--trials must be >= 1")
    specs = [CodeSpec(t, args.k) for t in (args.t or [1])]
    model = parse_model(args.model)
    records = run_sweep(specs, model, args.sigmas, args.trials, seed=args.seed,
                        data=(args.alpha, args.beta), threads=args.threads)
    _write(records_to_csv(records), args.out)
    return EXIT_OK


def cmd_emit(args) -> int:
    spec = CodeSpec(args.t, args.k)
    encode, decode = multi_block_encode(spec)
    out_dir = args.out or Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, circ in (("encode", encode), ("decode", decode)):
        path = out_dir / f"{spec.label}_{name}.circ"
        text = serialize_circuit(circ)
        path.write_text(text, encoding="utf-8")
        if parse_circuit(path.read_text(encoding="utf-8")) != circ:
            raise OSError(f"{path}: re-parse does not reproduce the circuit")
        print(path)
    return EXIT_OK


def cmd_identity_check(args) -> int:
    phases = None
    if args.phi0 is not None or args.phi1 is not None:
        phases = (args.phi0 or 0.0, args.phi1 or 0.0)
    dev = identity_check(args.samples, seed=args.seed, phases=phases)
    lines = [f"identity-check samples={args.samples} max deviation {dev:.3e}"]
    if phases is not None:
        m = gates.conjugate_dephase_identity(*phases)
        lines.append(f"phases ({format_phase(phases[0])}, {format_phase(phases[1])}) -> U^dag D U =")
        lines += [f"  [{m[0, 0]:.15g}, {m[0, 1]:.15g}]", f"  [{m[1, 0]:.15g}, {m[1, 1]:.15g}]"]
    ok = dev < IDENTITY_TOL
    lines.append("PASS" if ok else "FAIL")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_run(args) -> int:
    circuit = parse_circuit(args.circuit.read_text(encoding="utf-8"))
    data = as_qubit_vector((args.alpha, args.beta))
    state = run_quantum(circuit, init_state(circuit.n_qubits, data))
    n = circuit.n_qubits
    lines = [f"# {n} qubits; index bits(q{n - 1}..q0) re im"]
    for i, a in enumerate(state.amplitudes):
        lines.append(f"{i} {i:0{n}b} {float(a.real)!r} {float(a.imag)!r}")
    lines.append(f"data-qubit fidelity {float(fidelity_with(state, data))!r}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "emit": cmd_emit,
    "identity-check": cmd_identity_check,
    "run": cmd_run,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        set_qubit_cap(DEFAULT_QUBIT_CAP if args.qubit_cap is None else args.qubit_cap)
        return COMMANDS[args.command](args)
    except (CapacityError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
