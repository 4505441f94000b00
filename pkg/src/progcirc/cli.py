"""Command-line front end: ``progcirc {gen,synth,decompose,verify,count,h2demo}``.

Exit status is 0 on success, 1 when a verification check fails and 2 for
unreadable, malformed or incompatible inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .banded import h2_banded, load_h2, reconstruct_h2, synth_banded
from .circuit import Circuit, count_gates, deserialize, predicted_counts, serialize, to_qasm
from .linalg import (
    TABLE_TOL,
    load_matrix,
    normalize,
    save_matrix,
    unitarity_error,
    vector_from_json,
)
from .scheme1 import synth_scheme1
from .scheme2 import synth_scheme2
from .simulator import verify
from .ucr import decompose_circuit

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

VERIFY_TOL = 1e-8
H2_FIDELITY_TOL = 1e-6
H2_INPUTS = 20


class InputError(Exception):
    """Raised for anything that maps to exit status 2."""


def _read_circuit(path) -> Circuit:
    try:
        return deserialize(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_matrix(path) -> np.ndarray:
    try:
        return load_matrix(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except (ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_state(path) -> np.ndarray:
    try:
        return vector_from_json(json.loads(Path(path).read_text()))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def _summary(c: Circuit) -> str:
    return (
        f"{c.num_qubits} qubits, {len(c.gates)} gates, "
        f"{len(c.chosen_states)} chosen states, scale {c.scale_factor:.6g}"
    )


def _count_lines(c: Circuit) -> list[str]:
    actual = count_gates(c).as_dict()
    predicted = predicted_counts(c.meta)
    expected = predicted.as_dict() if predicted is not None else {}
    lines = []
    for name, value in actual.items():
        if name in expected and (value or expected[name]):
            lines.append(f"{name} {value}/{expected[name]} predicted")
        elif value:
            lines.append(f"{name} {value}")
    if actual["uniform_rotation"]:
        lines.append("note: predictions assume multiplexed rotations are decomposed")
    return lines


# -- commands -----------------------------------------------------------------


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    dim = 1 << args.n
    if args.kind == "orthogonal":
        q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
        u = q * np.sign(np.diag(r))
    elif args.kind == "nonunitary":
        u = rng.uniform(-1.0, 1.0, size=(dim, dim))
    else:
        # 2 x 2 rotation blocks on the diagonal: every row spans two adjacent columns
        u = np.zeros((dim, dim))
        for k in range(0, dim, 2):
            t = rng.uniform(0, 2 * np.pi)
            u[k : k + 2, k : k + 2] = [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]]
        if dim == 1:
            u = np.ones((1, 1))
    try:
        save_matrix(args.out, u)
    except OSError as exc:
        raise InputError(f"{args.out}: {exc.strerror or exc}") from exc
    print(f"wrote {dim}x{dim} {args.kind} matrix (seed {args.seed}) to {args.out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    u = _read_matrix(args.matrix)
    try:
        if args.scheme == 1:
            c = synth_scheme1(u)
        else:
            c = synth_scheme2(u, args.block)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _write(args.out, serialize(c) + "\n")
    print(_summary(c))
    return EXIT_OK


def cmd_decompose(args) -> int:
    c = decompose_circuit(_read_circuit(args.circuit))
    if args.qasm:
        _write(args.out, to_qasm(c))
    else:
        _write(args.out, serialize(c) + "\n")
    print(_summary(c))
    return EXIT_OK


def cmd_count(args) -> int:
    c = _read_circuit(args.circuit)
    lines = _count_lines(c)
    if args.json:
        predicted = predicted_counts(c.meta)
        print(json.dumps({
            "counts": count_gates(c).as_dict(),
            "predicted": None if predicted is None else predicted.as_dict(),
        }))
    else:
        print("\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    u = _read_matrix(args.matrix)
    c = _read_circuit(args.circuit)
    dim = u.shape[0]
    if args.psi:
        psi = _read_state(args.psi)
        if psi.size != dim:
            raise InputError(f"{args.psi}: state has {psi.size} amplitudes, matrix is {dim}x{dim}")
        psi = normalize(psi)
    else:
        psi = np.full(dim, dim**-0.5, dtype=complex)
    try:
        report = verify(u, c, psi)
    except ValueError as exc:
        raise InputError(f"incompatible matrix and circuit: {exc}") from exc
    passed = report.fidelity >= 1 - args.tol
    decomposed = count_gates(decompose_circuit(c))
    if args.json:
        doc = report.as_dict()
        doc["decomposed_counts"] = decomposed.as_dict()
        doc["passed"] = passed
        print(json.dumps(doc))
    else:
        print(f"fidelity {report.fidelity:.15f}")
        print(f"success probability {report.success_probability:.6e}")
        print(f"amplitude error {report.amplitude_error:.3e}")
        predicted = report.predicted.as_dict() if report.predicted is not None else {}
        for name, value in decomposed.as_dict().items():
            if name in predicted and (value or predicted[name]):
                print(f"{name} {value}/{predicted[name]} predicted")
        print("PASS" if passed else f"FAIL: fidelity below 1 - {args.tol:g}")
    return EXIT_OK if passed else EXIT_FAILED


def cmd_h2demo(args) -> int:
    start = time.perf_counter()
    table = load_h2()
    u = reconstruct_h2(table)
    bm = h2_banded(table)
    c = synth_banded(bm)
    rng = np.random.default_rng(args.seed)
    worst = 1.0
    for _ in range(H2_INPUTS):
        psi = normalize(rng.normal(size=16) + 1j * rng.normal(size=16))
        worst = min(worst, verify(bm.permuted, c, bm.permute_input(psi)).fidelity)
    nonzero = int(np.count_nonzero(u))
    diagonal = int(np.count_nonzero(np.diag(u)))
    err = unitarity_error(u)
    passed = worst >= 1 - H2_FIDELITY_TOL
    doc = {
        "qubits": c.num_qubits,
        "rotation_bearing_controls": table.rotation_bearing(),
        "nonzeros": nonzero,
        "diagonal_nonzeros": diagonal,
        "unitarity_error": err,
        "unitary_within_table_tol": err <= TABLE_TOL,
        "worst_fidelity": worst,
        "elapsed_s": time.perf_counter() - start,
    }
    if args.json:
        print(json.dumps(doc))
    else:
        within = "within" if err <= TABLE_TOL else "NOT within"
        print(
            f"{c.num_qubits} qubits, {table.rotation_bearing()} rotation-bearing controls, "
            f"{nonzero} nonzeros ({diagonal} diagonal)"
        )
        print(f"unitarity error {err:.4g} ({within} {TABLE_TOL:g})")
        print(f"worst fidelity over {H2_INPUTS} inputs {worst:.12f}")
        print("PASS" if passed else f"FAIL: fidelity below 1 - {H2_FIDELITY_TOL:g}")
    return EXIT_OK if passed else EXIT_FAILED


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="progcirc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a seeded random test matrix")
    g.add_argument("n", type=int, help="number of qubits (matrix is 2**n square)")
    g.add_argument("kind", choices=("orthogonal", "nonunitary", "banded"))
    g.add_argument("out")
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("synth", help="synthesize a circuit from a matrix file")
    s.add_argument("matrix")
    s.add_argument("out")
    s.add_argument("--scheme", type=int, choices=(1, 2), default=1)
    s.add_argument("--block", type=int, choices=(1, 2), default=1, help="initial block size for scheme 2")
    s.set_defaults(func=cmd_synth)

    d = sub.add_parser("decompose", help="replace multiplexed rotations by CNOTs and rotations")
    d.add_argument("circuit")
    d.add_argument("out")
    d.add_argument("--qasm", action="store_true", help="write OpenQASM text instead of JSON")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="simulate a circuit and compare with the matrix")
    v.add_argument("matrix")
    v.add_argument("circuit")
    v.add_argument("--psi", help="input state file (default: uniform superposition)")
    v.add_argument("--tol", type=float, default=VERIFY_TOL)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("count", help="gate counts against the closed-form predictions")
    c.add_argument("circuit")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_count)

    h = sub.add_parser("h2demo", help="hydrogen propagator on the 6-qubit banded circuit")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_h2demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
