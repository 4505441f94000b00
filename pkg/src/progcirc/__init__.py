"""Programmable quantum circuit schemes that emulate an arbitrary ``2**n`` matrix.

Two ancilla-based designs are provided: one rotation per matrix element
(:func:`synth_scheme1`) and ratio-preserving blocks merged recursively
(:func:`synth_scheme2`), plus a bandwidth-reduced variant for sparse
matrices (:mod:`progcirc.banded`). Circuits are verified by dense statevector
simulation with post-selection on the chosen basis states.
"""

from .banded import BandedMatrix, detect_band, load_h2, reconstruct_h2, synth_banded
from .circuit import (
    CNOT,
    Circuit,
    GateCounts,
    Hadamard,
    PauliX,
    Rotation,
    Swap,
    UniformRotation,
    circuit_matrix,
    count_gates,
    deserialize,
    gate_matrix,
    serialize,
)
from .linalg import fwht, gray_code, is_unitary
from .scheme1 import synth_scheme1
from .scheme2 import synth_scheme2
from .simulator import apply, extract, verify
from .ucr import decompose_circuit, decompose_ucr, solve_angles

__version__ = "0.1.0"

__all__ = [
    "BandedMatrix",
    "CNOT",
    "Circuit",
    "GateCounts",
    "Hadamard",
    "PauliX",
    "Rotation",
    "Swap",
    "UniformRotation",
    "apply",
    "circuit_matrix",
    "count_gates",
    "decompose_circuit",
    "decompose_ucr",
    "deserialize",
    "detect_band",
    "extract",
    "fwht",
    "gate_matrix",
    "gray_code",
    "is_unitary",
    "load_h2",
    "reconstruct_h2",
    "serialize",
    "solve_angles",
    "synth_banded",
    "synth_scheme1",
    "synth_scheme2",
    "verify",
]
