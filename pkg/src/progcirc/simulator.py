"""Dense statevector execution, post-selected extraction and verification reports.

Gates act on the state viewed as a rank-``m`` tensor of shape ``(2,) * m``
(axis ``q`` is qubit ``q``), so no ``2**m`` operator is ever formed. The dense
route in :func:`progcirc.circuit.circuit_matrix` stays available as an
independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import (
    CNOT,
    H_MATRIX,
    X_MATRIX,
    Circuit,
    Gate,
    GateCounts,
    Hadamard,
    PauliX,
    Rotation,
    Swap,
    UniformRotation,
    check_dim,
    count_gates,
    predicted_counts,
    rotation_matrix,
)
from .linalg import fidelity

NORM_TOL = 1e-8


def _apply_single(psi: np.ndarray, u: np.ndarray, target: int, controls=(), polarity=()) -> np.ndarray:
    idx = [slice(None)] * psi.ndim
    for c, p in zip(controls, polarity):
        idx[c] = p
    idx = tuple(idx)
    sub = psi[idx]
    # axes removed by integer indexing shift the target axis left
    axis = target - sum(1 for c in controls if c < target)
    sub = np.moveaxis(np.tensordot(u, sub, axes=([1], [axis])), 0, axis)
    out = psi.copy()
    out[idx] = sub
    return out


def _apply_uniform(psi: np.ndarray, g: UniformRotation) -> np.ndarray:
    m = psi.ndim
    k = len(g.controls)
    rest = [q for q in range(m) if q not in g.controls and q != g.target]
    order = [*g.controls, *rest, g.target]
    t = np.transpose(psi, order).reshape(1 << k, -1, 2)
    angles = np.asarray(g.angles)
    if g.axis == "Y":
        c, s = np.cos(angles), np.sin(angles)
        mats = np.stack([np.stack([c, s], -1), np.stack([-s, c], -1)], -2)
    else:
        ph = np.exp(1j * angles)
        mats = np.zeros((1 << k, 2, 2), dtype=complex)
        mats[:, 0, 0] = ph
        mats[:, 1, 1] = ph.conj()
    t = np.einsum("vab,vrb->vra", mats, t)
    t = t.reshape([2] * m)
    return np.transpose(t, np.argsort(order))


def apply_gate(psi: np.ndarray, g: Gate) -> np.ndarray:
    """Apply one gate to a ``(2,) * m`` state tensor."""
    if isinstance(g, Hadamard):
        return _apply_single(psi, H_MATRIX, g.target)
    if isinstance(g, PauliX):
        return _apply_single(psi, X_MATRIX, g.target, g.controls, g.polarity)
    if isinstance(g, CNOT):
        return _apply_single(psi, X_MATRIX, g.target, (g.control,), (1,))
    if isinstance(g, Swap):
        return np.swapaxes(psi, g.q1, g.q2).copy()
    if isinstance(g, Rotation):
        return _apply_single(psi, rotation_matrix(g.axis, g.angle), g.target, g.controls, g.polarity)
    if isinstance(g, UniformRotation):
        return _apply_uniform(psi, g)
    raise TypeError(f"unknown gate type {type(g).__name__}")


def run(c: Circuit, state) -> np.ndarray:
    """Apply every gate of ``c`` to a full-width statevector."""
    state = np.asarray(state, dtype=complex)
    if state.size != 1 << c.num_qubits:
        raise ValueError(f"state has {state.size} amplitudes, circuit needs {1 << c.num_qubits}")
    psi = state.reshape([2] * c.num_qubits) if c.num_qubits else state.reshape(())
    for g in c.gates:
        psi = apply_gate(psi, g)
    return psi.reshape(-1)


def embed(c: Circuit, psi_main) -> np.ndarray:
    """``|0...0>_ancilla (x) psi`` laid out on the circuit's qubit ranges."""
    psi_main = np.asarray(psi_main, dtype=complex).ravel()
    n_main = c.main[1] - c.main[0]
    if psi_main.size != 1 << n_main:
        raise ValueError(f"input has {psi_main.size} amplitudes, main register needs {1 << n_main}")
    full = np.zeros([2] * c.num_qubits, dtype=complex)
    idx = tuple(slice(None) if q in c.main_qubits else 0 for q in range(c.num_qubits))
    full[idx] = psi_main.reshape([2] * n_main)
    return full.reshape(-1)


def apply(c: Circuit, psi_main) -> np.ndarray:
    """Final full-width state from ancilla ``|0...0>`` and main-register input ``psi_main``.

    Raises:
        ValueError: on a width mismatch or a non-normalized input.
    """
    psi_main = np.asarray(psi_main, dtype=complex).ravel()
    norm = np.linalg.norm(psi_main)
    if abs(norm - 1) > NORM_TOL:
        raise ValueError(f"input state must be normalized, norm is {norm:.12g}")
    return run(c, embed(c, psi_main))


@dataclass(frozen=True)
class Extraction:
    raw: np.ndarray
    normalized: np.ndarray
    success_probability: float


def extract(c: Circuit, final) -> Extraction:
    """Post-select the chosen states. An all-zero selection reports zero success."""
    final = np.asarray(final, dtype=complex).ravel()
    raw = final[list(c.chosen_states)]
    norm = float(np.linalg.norm(raw))
    normalized = raw / norm if norm > 0 else np.zeros_like(raw)
    return Extraction(raw=raw, normalized=normalized, success_probability=norm**2)


def unscaled_output(c: Circuit, raw) -> np.ndarray:
    """Undo the recorded per-row normalization; the result is ``scale_factor * U psi``."""
    raw = np.asarray(raw, dtype=complex)
    if c.row_norms is None:
        return raw
    return raw * np.asarray(c.row_norms)


@dataclass(frozen=True)
class SynthesisReport:
    fidelity: float
    success_probability: float
    amplitude_error: float
    counts: GateCounts
    predicted: GateCounts | None
    raw: np.ndarray
    normalized: np.ndarray

    def as_dict(self) -> dict:
        return {
            "fidelity": self.fidelity,
            "success_probability": self.success_probability,
            "amplitude_error": self.amplitude_error,
            "counts": self.counts.as_dict(),
            "predicted": None if self.predicted is None else self.predicted.as_dict(),
        }


def verify(u, c: Circuit, psi) -> SynthesisReport:
    """Simulate ``c`` on ``psi`` and compare the post-selected output with ``u @ psi``.

    ``amplitude_error`` is ``max |unscaled - scale_factor * u psi|``, i.e. the
    check that the embedding is exact rather than merely proportional.
    """
    u = np.asarray(u, dtype=complex)
    psi = np.asarray(psi, dtype=complex).ravel()
    check_dim(c, u.shape[0])
    ext = extract(c, apply(c, psi))
    target = u @ psi
    out = unscaled_output(c, ext.raw)
    return SynthesisReport(
        fidelity=fidelity(out, target),
        success_probability=ext.success_probability,
        amplitude_error=float(np.max(np.abs(out - c.scale_factor * target))),
        counts=count_gates(c),
        predicted=predicted_counts(c.meta),
        raw=ext.raw,
        normalized=ext.normalized,
    )
