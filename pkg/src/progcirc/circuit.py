"""Gate-level circuit representation, dense realization, counting and serialization.

Conventions:

* Qubit 0 is the top wire and the most significant bit of a basis index.
* Rotations use the full-angle form. ``Y``: ``[[cos t, sin t], [-sin t, cos t]]``;
  ``Z``: ``diag(exp(i t), exp(-i t))``. A standard half-angle ``ry``/``rz``
  gate with parameter ``-2 t`` realizes the same matrix.
* ``UniformRotation.angles[v]`` is applied when the controls, read as a binary
  number with ``controls[0]`` most significant, equal ``v``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from typing import Union

import numpy as np

from .linalg import num_qubits_for

DENSE_QUBIT_LIMIT = 12
AXES = ("Y", "Z")


class CircuitFormatError(ValueError):
    """Raised for malformed circuit documents; the message names the offending location."""


def rotation_matrix(axis: str, angle: float) -> np.ndarray:
    if axis == "Y":
        c, s = np.cos(angle), np.sin(angle)
        return np.array([[c, s], [-s, c]], dtype=complex)
    if axis == "Z":
        return np.diag([np.exp(1j * angle), np.exp(-1j * angle)])
    raise ValueError(f"unknown rotation axis {axis!r}")


H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def _check_distinct(qubits, what):
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"{what}: qubit indices must be distinct, got {tuple(qubits)}")
    if any(q < 0 for q in qubits):
        raise ValueError(f"{what}: negative qubit index in {tuple(qubits)}")


def _check_polarity(controls, polarity, what):
    if len(polarity) != len(controls):
        raise ValueError(f"{what}: polarity length {len(polarity)} != {len(controls)} controls")
    if any(p not in (0, 1) for p in polarity):
        raise ValueError(f"{what}: polarity entries must be 0 or 1")


@dataclass(frozen=True)
class Hadamard:
    target: int

    def __post_init__(self):
        _check_distinct((self.target,), "Hadamard")

    @property
    def qubits(self):
        return (self.target,)


@dataclass(frozen=True)
class PauliX:
    """X on ``target``, optionally conditioned on ``controls`` matching ``polarity``."""

    target: int
    controls: tuple[int, ...] = ()
    polarity: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if not self.polarity and self.controls:
            object.__setattr__(self, "polarity", (1,) * len(self.controls))
        object.__setattr__(self, "polarity", tuple(int(p) for p in self.polarity))
        _check_distinct(self.qubits, "PauliX")
        _check_polarity(self.controls, self.polarity, "PauliX")

    @property
    def qubits(self):
        return (*self.controls, self.target)


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        _check_distinct(self.qubits, "CNOT")

    @property
    def qubits(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class Swap:
    q1: int
    q2: int

    def __post_init__(self):
        _check_distinct(self.qubits, "Swap")

    @property
    def qubits(self):
        return (self.q1, self.q2)


@dataclass(frozen=True)
class Rotation:
    axis: str
    target: int
    angle: float
    controls: tuple[int, ...] = ()
    polarity: tuple[int, ...] = ()

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"Rotation: axis must be one of {AXES}, got {self.axis!r}")
        object.__setattr__(self, "angle", float(self.angle))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if not self.polarity and self.controls:
            object.__setattr__(self, "polarity", (1,) * len(self.controls))
        object.__setattr__(self, "polarity", tuple(int(p) for p in self.polarity))
        _check_distinct(self.qubits, "Rotation")
        _check_polarity(self.controls, self.polarity, "Rotation")

    @property
    def qubits(self):
        return (*self.controls, self.target)


@dataclass(frozen=True)
class UniformRotation:
    """Multiplexed rotation: one angle per binary value of the control register."""

    axis: str
    target: int
    controls: tuple[int, ...]
    angles: tuple[float, ...]

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"UniformRotation: axis must be one of {AXES}, got {self.axis!r}")
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        _check_distinct(self.qubits, "UniformRotation")
        if len(self.angles) != 1 << len(self.controls):
            raise ValueError(
                f"UniformRotation: {len(self.controls)} controls need "
                f"{1 << len(self.controls)} angles, got {len(self.angles)}"
            )

    @property
    def qubits(self):
        return (*self.controls, self.target)


Gate = Union[Hadamard, PauliX, CNOT, Swap, Rotation, UniformRotation]


def _check_range(rng, what) -> tuple[int, int]:
    lo, hi = (int(x) for x in rng)
    if lo > hi:
        raise ValueError(f"{what}: range [{lo}, {hi}) is reversed")
    return lo, hi


@dataclass(frozen=True)
class Circuit:
    """Gate sequence over a main/ancilla split, plus post-selection bookkeeping.

    ``main`` and ``ancilla`` are half-open ``[lo, hi)`` qubit ranges that
    together partition ``range(num_qubits)``. ``chosen_states`` are the basis
    indices whose amplitudes carry ``scale_factor * (U psi)``; when
    ``row_norms`` is set, amplitude ``i`` carries ``(U psi)_i / row_norms[i]``
    instead (rows were normalized during synthesis).
    """

    num_qubits: int
    main: tuple[int, int]
    ancilla: tuple[int, int]
    gates: tuple[Gate, ...] = ()
    chosen_states: tuple[int, ...] = ()
    scale_factor: float = 1.0
    row_norms: tuple[float, ...] | None = None
    meta: dict = field(default_factory=dict, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "main", _check_range(self.main, "main"))
        object.__setattr__(self, "ancilla", _check_range(self.ancilla, "ancilla"))
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "chosen_states", tuple(int(s) for s in self.chosen_states))
        object.__setattr__(self, "scale_factor", float(self.scale_factor))
        if self.row_norms is not None:
            object.__setattr__(self, "row_norms", tuple(float(r) for r in self.row_norms))
        ranges = sorted([self.main, self.ancilla])
        if ranges[0][0] != 0 or ranges[0][1] != ranges[1][0] or ranges[1][1] != self.num_qubits:
            raise ValueError(
                f"main {self.main} and ancilla {self.ancilla} must partition "
                f"[0, {self.num_qubits})"
            )
        cs = self.chosen_states
        if any(b <= a for a, b in zip(cs, cs[1:])):
            raise ValueError("chosen_states must be strictly increasing")
        if cs and (cs[0] < 0 or cs[-1] >= 1 << self.num_qubits):
            raise ValueError("chosen_states out of range")
        if self.row_norms is not None and len(self.row_norms) != len(cs):
            raise ValueError("row_norms must have one entry per chosen state")
        for pos, g in enumerate(self.gates):
            if max(g.qubits) >= self.num_qubits:
                raise ValueError(f"gates[{pos}]: qubit index out of range for width {self.num_qubits}")

    @property
    def main_qubits(self) -> range:
        return range(*self.main)

    @property
    def ancilla_qubits(self) -> range:
        return range(*self.ancilla)

    def with_gates(self, gates) -> Circuit:
        return replace(self, gates=tuple(gates))

    def __add__(self, other: Circuit) -> Circuit:
        if (self.num_qubits, self.main, self.ancilla) != (other.num_qubits, other.main, other.ancilla):
            raise ValueError("can only concatenate circuits with the same qubit layout")
        return self.with_gates(self.gates + other.gates)


# -- dense realization --------------------------------------------------------


def _kron_chain(ops: dict[int, np.ndarray], width: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for q in range(width):
        out = np.kron(out, ops.get(q, I2))
    return out


def _projector(bit: int) -> np.ndarray:
    p = np.zeros((2, 2), dtype=complex)
    p[bit, bit] = 1
    return p


def _controlled(u: np.ndarray, target: int, controls, polarity, width: int) -> np.ndarray:
    if not controls:
        return _kron_chain({target: u}, width)
    active = {c: _projector(p) for c, p in zip(controls, polarity)}
    active[target] = u - I2
    return np.eye(1 << width, dtype=complex) + _kron_chain(active, width)


def _swap_matrix(a: int, b: int, width: int) -> np.ndarray:
    dim = 1 << width
    sa, sb = width - 1 - a, width - 1 - b
    idx = np.arange(dim)
    bit_a = (idx >> sa) & 1
    bit_b = (idx >> sb) & 1
    swapped = idx ^ ((bit_a ^ bit_b) << sa) ^ ((bit_a ^ bit_b) << sb)
    out = np.zeros((dim, dim), dtype=complex)
    out[swapped, idx] = 1
    return out


def gate_matrix(g: Gate, width: int) -> np.ndarray:
    """Dense ``2**width`` operator of a single gate, built from Kronecker products."""
    if max(g.qubits) >= width:
        raise ValueError(f"gate {g} does not fit in {width} qubits")
    if isinstance(g, Hadamard):
        return _kron_chain({g.target: H_MATRIX}, width)
    if isinstance(g, PauliX):
        return _controlled(X_MATRIX, g.target, g.controls, g.polarity, width)
    if isinstance(g, CNOT):
        return _controlled(X_MATRIX, g.target, (g.control,), (1,), width)
    if isinstance(g, Swap):
        return _swap_matrix(g.q1, g.q2, width)
    if isinstance(g, Rotation):
        return _controlled(rotation_matrix(g.axis, g.angle), g.target, g.controls, g.polarity, width)
    if isinstance(g, UniformRotation):
        k = len(g.controls)
        out = np.zeros((1 << width, 1 << width), dtype=complex)
        for v, angle in enumerate(g.angles):
            ops = {c: _projector((v >> (k - 1 - pos)) & 1) for pos, c in enumerate(g.controls)}
            ops[g.target] = rotation_matrix(g.axis, angle)
            out += _kron_chain(ops, width)
        return out
    raise TypeError(f"unknown gate type {type(g).__name__}")


def circuit_matrix(c: Circuit) -> np.ndarray:
    """Ordered product of gate matrices; the first gate is applied first."""
    if c.num_qubits > DENSE_QUBIT_LIMIT:
        raise ValueError(
            f"dense realization limited to {DENSE_QUBIT_LIMIT} qubits, circuit has {c.num_qubits}"
        )
    out = np.eye(1 << c.num_qubits, dtype=complex)
    for g in c.gates:
        out = gate_matrix(g, c.num_qubits) @ out
    return out


# -- counting -----------------------------------------------------------------


@dataclass(frozen=True)
class GateCounts:
    cnot: int = 0
    single_rotation: int = 0
    hadamard: int = 0
    swap: int = 0
    pauli_x: int = 0
    uniform_rotation: int = 0

    def __add__(self, other: GateCounts) -> GateCounts:
        return GateCounts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def count_gates(c: Circuit) -> GateCounts:
    """Per-variant tallies.

    Controlled and multi-controlled X gates count as ``pauli_x``; undecomposed
    uniform rotations are tallied separately and contribute no CNOTs.
    """
    tally = dict.fromkeys((f.name for f in fields(GateCounts)), 0)
    for g in c.gates:
        if isinstance(g, CNOT):
            tally["cnot"] += 1
        elif isinstance(g, Rotation):
            tally["single_rotation"] += 1
        elif isinstance(g, Hadamard):
            tally["hadamard"] += 1
        elif isinstance(g, Swap):
            tally["swap"] += 1
        elif isinstance(g, PauliX):
            tally["pauli_x"] += 1
        elif isinstance(g, UniformRotation):
            tally["uniform_rotation"] += 1
    return GateCounts(**tally)


def predicted_network_cnots(n: int, c: int, m: int, common: int) -> int:
    """CNOTs of the ratio-preserving design: ``(m + 1) 2^(2n-c) - 2^n + common``.

    ``m`` multiplexed formation roles over ``2n - c`` controls, ``n - c``
    combination networks, and ``common`` gates shared by every block.
    """
    return (m + 1) * (1 << (2 * n - c)) - (1 << n) + common


def predicted_counts(meta: dict) -> GateCounts | None:
    """Closed-form counts of the fully decomposed circuit described by ``meta``."""
    scheme = meta.get("scheme")
    n = meta.get("n")
    if scheme == 1:
        networks = 2 if meta.get("complex") else 1
        size = networks * (1 << (2 * n))
        return GateCounts(cnot=size, single_rotation=size, hadamard=2 * n, swap=n)
    if scheme == 2:
        c = meta["block"]
        m, common = {1: (1, 0), 2: (3, 2)}[c]
        formation = m * (1 << (2 * n - c))
        combination = (1 << (2 * n - c)) - (1 << n)
        return GateCounts(
            cnot=predicted_network_cnots(n, c, m, common),
            single_rotation=formation + combination,
            hadamard=n,
        )
    return None


# -- serialization ------------------------------------------------------------

_OPS = ("h", "x", "cnot", "swap", "ry", "rz", "ucry", "ucrz")


def _gate_to_json(g: Gate) -> dict:
    doc = {"op": None, "targets": [], "controls": [], "polarity": [], "angles": []}
    if isinstance(g, Hadamard):
        doc.update(op="h", targets=[g.target])
    elif isinstance(g, PauliX):
        doc.update(op="x", targets=[g.target], controls=list(g.controls), polarity=list(g.polarity))
    elif isinstance(g, CNOT):
        doc.update(op="cnot", targets=[g.target], controls=[g.control], polarity=[1])
    elif isinstance(g, Swap):
        doc.update(op="swap", targets=[g.q1, g.q2])
    elif isinstance(g, Rotation):
        doc.update(
            op="r" + g.axis.lower(),
            targets=[g.target],
            controls=list(g.controls),
            polarity=list(g.polarity),
            angles=[g.angle],
        )
    elif isinstance(g, UniformRotation):
        doc.update(
            op="ucr" + g.axis.lower(), targets=[g.target], controls=list(g.controls), angles=list(g.angles)
        )
    else:
        raise TypeError(f"unknown gate type {type(g).__name__}")
    return doc


def to_json(c: Circuit) -> dict:
    doc = {
        "qubits": c.num_qubits,
        "main": list(c.main),
        "ancilla": list(c.ancilla),
        "chosen": list(c.chosen_states),
        "scale": c.scale_factor,
        "gates": [_gate_to_json(g) for g in c.gates],
    }
    if c.row_norms is not None:
        doc["row_norms"] = list(c.row_norms)
    if c.meta:
        doc["meta"] = dict(c.meta)
    return doc


def serialize(c: Circuit) -> str:
    return json.dumps(to_json(c), indent=None, separators=(",", ":"))


def _int_list(doc, key, where, length=None) -> list[int]:
    value = doc.get(key, [])
    if not isinstance(value, list) or any(not isinstance(v, int) or isinstance(v, bool) for v in value):
        raise CircuitFormatError(f"{where}.{key}: expected a list of integers")
    if length is not None and len(value) != length:
        raise CircuitFormatError(f"{where}.{key}: expected {length} entries, got {len(value)}")
    return value


def _real_list(doc, key, where) -> list[float]:
    value = doc.get(key, [])
    if not isinstance(value, list) or any(
        not isinstance(v, (int, float)) or isinstance(v, bool) for v in value
    ):
        raise CircuitFormatError(f"{where}.{key}: expected a list of numbers")
    return [float(v) for v in value]


def _gate_from_json(doc, where) -> Gate:
    if not isinstance(doc, dict):
        raise CircuitFormatError(f"{where}: expected an object")
    op = doc.get("op")
    if op not in _OPS:
        raise CircuitFormatError(f"{where}.op: unknown operation {op!r}")
    ntargets = 2 if op == "swap" else 1
    targets = _int_list(doc, "targets", where, ntargets)
    controls = _int_list(doc, "controls", where)
    polarity = _int_list(doc, "polarity", where)
    angles = _real_list(doc, "angles", where)
    try:
        if op == "h":
            return Hadamard(targets[0])
        if op == "x":
            return PauliX(targets[0], tuple(controls), tuple(polarity))
        if op == "cnot":
            if len(controls) != 1:
                raise CircuitFormatError(f"{where}.controls: cnot needs exactly one control")
            return CNOT(controls[0], targets[0])
        if op == "swap":
            return Swap(targets[0], targets[1])
        if op in ("ry", "rz"):
            if len(angles) != 1:
                raise CircuitFormatError(f"{where}.angles: {op} needs exactly one angle")
            return Rotation(op[1].upper(), targets[0], angles[0], tuple(controls), tuple(polarity))
        return UniformRotation(op[3].upper(), targets[0], tuple(controls), tuple(angles))
    except CircuitFormatError:
        raise
    except ValueError as exc:
        raise CircuitFormatError(f"{where}: {exc}") from exc


def from_json(doc) -> Circuit:
    if not isinstance(doc, dict):
        raise CircuitFormatError("document: expected an object")
    for key in ("qubits", "main", "ancilla", "chosen", "scale", "gates"):
        if key not in doc:
            raise CircuitFormatError(f"document: missing key {key!r}")
    if not isinstance(doc["qubits"], int) or doc["qubits"] < 0:
        raise CircuitFormatError("qubits: expected a non-negative integer")
    main = _int_list(doc, "main", "document", 2)
    ancilla = _int_list(doc, "ancilla", "document", 2)
    chosen = _int_list(doc, "chosen", "document")
    if not isinstance(doc["scale"], (int, float)) or isinstance(doc["scale"], bool):
        raise CircuitFormatError("scale: expected a number")
    if not isinstance(doc["gates"], list):
        raise CircuitFormatError("gates: expected a list")
    gates = [_gate_from_json(g, f"gates[{pos}]") for pos, g in enumerate(doc["gates"])]
    row_norms = _real_list(doc, "row_norms", "document") if "row_norms" in doc else None
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise CircuitFormatError("meta: expected an object")
    try:
        return Circuit(
            num_qubits=doc["qubits"],
            main=tuple(main),
            ancilla=tuple(ancilla),
            gates=tuple(gates),
            chosen_states=tuple(chosen),
            scale_factor=float(doc["scale"]),
            row_norms=None if row_norms is None else tuple(row_norms),
            meta=meta,
        )
    except ValueError as exc:
        raise CircuitFormatError(f"document: {exc}") from exc


def deserialize(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return from_json(doc)


def to_qasm(c: Circuit) -> str:
    """Human-readable listing, one gate per line, in standard half-angle parameters."""
    lines = [f"// main q[{c.main[0]}:{c.main[1]}] ancilla q[{c.ancilla[0]}:{c.ancilla[1]}]",
             f"qubit[{c.num_qubits}] q;"]

    def ctrl(controls, polarity):
        return "".join("c" if p else "n" for p in polarity), [f"q[{q}]" for q in controls]

    for g in c.gates:
        if isinstance(g, Hadamard):
            lines.append(f"h q[{g.target}];")
        elif isinstance(g, CNOT):
            lines.append(f"cx q[{g.control}], q[{g.target}];")
        elif isinstance(g, Swap):
            lines.append(f"swap q[{g.q1}], q[{g.q2}];")
        elif isinstance(g, PauliX):
            prefix, qs = ctrl(g.controls, g.polarity)
            lines.append(f"{prefix}x {', '.join(qs + [f'q[{g.target}]'])};")
        elif isinstance(g, Rotation):
            prefix, qs = ctrl(g.controls, g.polarity)
            lines.append(
                f"{prefix}r{g.axis.lower()}({-2 * g.angle:.12g}) {', '.join(qs + [f'q[{g.target}]'])};"
            )
        elif isinstance(g, UniformRotation):
            params = ", ".join(f"{-2 * a:.12g}" for a in g.angles)
            qs = ", ".join(f"q[{q}]" for q in (*g.controls, g.target))
            lines.append(f"ucr{g.axis.lower()}({params}) {qs};")
    return "\n".join(lines) + "\n"


def check_dim(c: Circuit, dim: int) -> None:
    """Raise if ``c`` cannot emulate a ``dim x dim`` operator."""
    n = num_qubits_for(dim)
    if c.main[1] - c.main[0] != n:
        raise ValueError(f"circuit main register has {c.main[1] - c.main[0]} qubits, matrix needs {n}")
    if len(c.chosen_states) != dim:
        raise ValueError(f"circuit has {len(c.chosen_states)} chosen states, matrix needs {dim}")
