"""Dense linear algebra helpers, binary/gray codes and the fast Walsh-Hadamard transform.

Matrices are plain ``numpy`` arrays (``complex128`` unless stated otherwise),
indexed row-major with entry ``(i, j)`` at ``i * dim + j``. Statevectors use
qubit 0 as the most significant bit of the basis index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

STRUCTURAL_TOL = 1e-10
TABLE_TOL = 5e-3
MODULUS_TOL = 1e-12


@dataclass
class OpCounter:
    """Tally of floating point additions/multiplications done by a kernel."""

    ops: int = 0

    def add(self, count: int) -> None:
        self.ops += int(count)


def num_qubits_for(dim: int) -> int:
    """Return ``log2(dim)`` or raise if ``dim`` is not a positive power of two."""
    if dim < 1 or dim & (dim - 1):
        raise ValueError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def as_operator(a, *, require_power_of_two: bool = True) -> np.ndarray:
    """Coerce ``a`` to a finite square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf")
    if require_power_of_two:
        num_qubits_for(m.shape[0])
    return m


def is_real(a: np.ndarray) -> bool:
    return not np.iscomplexobj(a) or not np.any(np.imag(a))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def is_unitary(a: np.ndarray, tol: float = STRUCTURAL_TOL) -> bool:
    """True iff ``max |A A^dagger - I| <= tol``."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dev = a @ a.conj().T - np.eye(a.shape[0])
    return bool(np.max(np.abs(dev), initial=0.0) <= tol)


def unitarity_error(a: np.ndarray) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a @ a.conj().T - np.eye(a.shape[0])), initial=0.0))


def fwht(v, counter: OpCounter | None = None) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform in natural (Hadamard) order.

    ``fwht(fwht(v)) == len(v) * v``. Runs ``log2(len(v))`` butterfly stages,
    each doing ``len(v)`` additions/subtractions.

    Raises:
        ValueError: if ``len(v)`` is not a power of two.
    """
    x = np.array(v, dtype=float).ravel()
    size = x.size
    num_qubits_for(size)
    h = 1
    while h < size:
        blocks = x.reshape(-1, 2, h)
        lo, hi = blocks[:, 0, :], blocks[:, 1, :]
        x = np.stack((lo + hi, lo - hi), axis=1).reshape(size)
        if counter is not None:
            counter.add(size)
        h *= 2
    return x


def gray_code(i: int) -> int:
    if i < 0:
        raise ValueError("gray_code is defined for non-negative integers")
    return i ^ (i >> 1)


def gray_codes(k: int) -> np.ndarray:
    """Reflected binary gray sequence of length ``2**k``."""
    idx = np.arange(1 << k, dtype=np.int64)
    return idx ^ (idx >> 1)


def binary_dot(x: int, y: int) -> int:
    """Parity of the bitwise AND, i.e. the GF(2) dot product of two bit strings."""
    return bin(x & y).count("1") & 1


def popcount(x: int) -> int:
    return bin(x).count("1")


def hadamard_matrix(k: int) -> np.ndarray:
    """Natural-order ``2**k`` Sylvester Hadamard matrix (integer entries)."""
    h = np.array([[1]], dtype=np.int64)
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return h


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def fidelity(a, b) -> float:
    """``|<a|b>|^2`` for the normalized directions of ``a`` and ``b`` (0 if either is zero)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(abs(np.vdot(a / na, b / nb)) ** 2)


# -- matrix file format -------------------------------------------------------


def _decode_scalar(value, where: str) -> complex:
    if isinstance(value, bool):
        raise ValueError(f"{where}: expected a number or [re, im] pair")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in value
    ):
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _encode_scalar(z: complex, real: bool):
    return float(z.real) if real else [float(z.real), float(z.imag)]


def matrix_from_json(doc: dict) -> np.ndarray:
    """Decode ``{"dim": d, "entries": [...]}`` (row-major) into a ``d x d`` matrix."""
    if not isinstance(doc, dict) or "dim" not in doc or "entries" not in doc:
        raise ValueError('matrix document must be an object with "dim" and "entries"')
    dim = doc["dim"]
    entries = doc["entries"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValueError(f"dim: expected a positive integer, got {dim!r}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise ValueError(f"entries: expected {dim * dim} values, got {got}")
    flat = [_decode_scalar(v, f"entries[{k}]") for k, v in enumerate(entries)]
    return as_operator(np.array(flat, dtype=complex).reshape(dim, dim), require_power_of_two=False)


def matrix_to_json(a: np.ndarray) -> dict:
    a = np.asarray(a)
    real = is_real(a)
    flat = np.asarray(a, dtype=complex).ravel()
    return {"dim": int(a.shape[0]), "entries": [_encode_scalar(z, real) for z in flat]}


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(json.loads(Path(path).read_text()))


def save_matrix(path, a: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a)) + "\n")


def vector_from_json(doc) -> np.ndarray:
    """Decode a statevector: a bare list or ``{"amplitudes": [...]}``."""
    if isinstance(doc, dict):
        if "amplitudes" not in doc:
            raise ValueError('state document must contain "amplitudes"')
        doc = doc["amplitudes"]
    if not isinstance(doc, list) or not doc:
        raise ValueError("amplitudes: expected a non-empty list")
    return np.array([_decode_scalar(v, f"amplitudes[{k}]") for k, v in enumerate(doc)])


def vector_to_json(v) -> dict:
    v = np.asarray(v, dtype=complex)
    real = is_real(v)
    return {
        "num_qubits": num_qubits_for(v.size),
        "amplitudes": [_encode_scalar(z, real) for z in v],
    }
