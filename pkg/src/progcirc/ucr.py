"""Gray-code decomposition of uniformly controlled rotations into CNOTs and rotations.

A rotation multiplexed over ``k`` controls becomes ``2**k`` plain rotations on
the target interleaved with ``2**k`` CNOTs. Step ``j`` of the ladder sees the
target flipped by the parity ``b . g_j`` of the control value ``b`` with the
``j``-th gray code, so the decomposed angles ``theta`` must solve
``M theta = phi`` with ``M[b, j] = (-1)**(b . g_j)``. ``M`` is a column-permuted
Sylvester Hadamard matrix, hence ``theta = 2**-k M^T phi``, evaluated with one
fast Walsh-Hadamard transform followed by a gray-order gather.
"""

from __future__ import annotations

import numpy as np

from .circuit import CNOT, Circuit, Gate, Rotation, UniformRotation
from .linalg import OpCounter, binary_dot, fwht, gray_code, gray_codes, num_qubits_for

MATERIALIZE_LIMIT = 12


def m_matrix(k: int) -> np.ndarray:
    """Integer matrix ``M[i, j] = (-1)**(b_i . g_j)`` (only for small ``k``)."""
    if k > MATERIALIZE_LIMIT:
        raise ValueError(f"refusing to materialize M for k={k} > {MATERIALIZE_LIMIT}")
    size = 1 << k
    out = np.empty((size, size), dtype=np.int64)
    for i in range(size):
        for j in range(size):
            out[i, j] = -1 if binary_dot(i, gray_code(j)) else 1
    return out


def solve_angles(phi, counter: OpCounter | None = None) -> np.ndarray:
    """Decomposed ladder angles for the multiplexed angle table ``phi``.

    ``phi`` is indexed by the binary control value. The result satisfies
    ``m_matrix(k) @ theta == phi`` in O(k 2**k) operations.

    Raises:
        ValueError: if ``len(phi)`` is not a power of two.
    """
    phi = np.asarray(phi, dtype=float).ravel()
    k = num_qubits_for(phi.size)
    transformed = fwht(phi, counter)
    theta = transformed[gray_codes(k)] / phi.size
    if counter is not None:
        counter.add(phi.size)
    return theta


def decompose_ucr(g: UniformRotation) -> list[Gate]:
    """Expand a uniform rotation into an alternating rotation/CNOT ladder.

    The CNOT after rotation ``j`` is controlled by the qubit whose bit flips
    between gray codes ``j`` and ``j + 1`` (cyclically), so the final CNOT sits
    on ``controls[0]`` and returns the target to its unflipped frame.
    """
    if not isinstance(g, UniformRotation):
        raise TypeError(f"expected a UniformRotation, got {type(g).__name__}")
    k = len(g.controls)
    if k == 0:
        return [Rotation(g.axis, g.target, g.angles[0])]
    theta = solve_angles(g.angles)
    codes = gray_codes(k)
    size = 1 << k
    out: list[Gate] = []
    for j in range(size):
        out.append(Rotation(g.axis, g.target, float(theta[j])))
        flipped = int(codes[j] ^ codes[(j + 1) % size])
        bit = flipped.bit_length() - 1
        out.append(CNOT(g.controls[k - 1 - bit], g.target))
    return out


def decompose_circuit(c: Circuit) -> Circuit:
    """Replace every uniform rotation by its ladder, keeping all other gates in place."""
    gates: list[Gate] = []
    for g in c.gates:
        if isinstance(g, UniformRotation):
            gates.extend(decompose_ucr(g))
        else:
            gates.append(g)
    return c.with_gates(gates)
