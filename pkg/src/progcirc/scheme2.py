"""Second design: ratio-preserving blocks merged by multiplexed rotations on ``2n`` qubits.

Qubits ``0..n-1`` are ancilla (the row register after post-selection) and
``n..2n-1`` hold the input; the initial blocks act on the last ``c`` qubits.

* Formation plants every group of ``2**c`` consecutive row entries, scaled
  to unit norm, as the leading row of a small block. ``c = 1`` uses one
  rotation per pair. ``c = 2`` uses a Schmidt block: two local rotations,
  a CNOT, a rotation fixing the Schmidt coefficients and a closing CNOT.
* Combination, for target qubit ``l = 2n-1-c`` down to ``n``, applies a
  rotation multiplexed over qubits ``0..l-1`` whose angle ``atan2(R, L)`` merges
  two sibling groups with norms ``L`` and ``R`` while keeping their ratio.

After the last merge block ``i`` has leading row ``U_i / |U_i|``, and with
Hadamards on the ancilla state ``i 2**n`` holds ``N**-1/2 (U psi)_i / |U_i|``.
"""

from __future__ import annotations

import math

import numpy as np

from .circuit import CNOT, Circuit, Gate, Hadamard, UniformRotation
from .linalg import as_operator, is_real, num_qubits_for

BLOCK_ROLES = {1: 1, 2: 3}
COMMON_GATES = {1: 0, 2: 2}
UNIT_TOL = 1e-10


def pair_angle(u_left: float, u_right: float) -> float:
    """Angle whose rotation has leading row proportional to ``(u_left, u_right)``."""
    if u_left == 0 and u_right == 0:
        return 0.0
    return math.atan2(u_right, u_left)


def combine_angle(norm_left: float, norm_right: float) -> float:
    """Merge angle: ``cos(t) / norm_left == sin(t) / norm_right``."""
    if norm_left < 0 or norm_right < 0:
        raise ValueError("norms must be non-negative")
    if norm_left == 0 and norm_right == 0:
        return 0.0
    return math.atan2(norm_right, norm_left)


def schmidt_row(theta_a: float, theta_1: float, theta_2: float) -> np.ndarray:
    """Leading row realized by the Schmidt block for the given angles."""
    a1, a2 = math.cos(theta_a), math.sin(theta_a)
    c1, s1 = math.cos(theta_1), math.sin(theta_1)
    c2, s2 = math.cos(theta_2), math.sin(theta_2)
    return a1 * np.kron([c1, -s1], [c2, -s2]) + a2 * np.kron([s1, c1], [s2, c2])


def schmidt_angles(v) -> tuple[float, float, float]:
    """Angles ``(theta_a, theta_1, theta_2)`` with ``schmidt_row(...) == v``.

    ``v`` is reshaped to ``2 x 2`` and split by SVD into
    ``a1 x y^T + a2 x' y'^T``. The first left singular vector is flipped
    (with its partner) to a non-negative leading entry, then both bases are
    made proper rotations, each reflection absorbed into the sign of ``a2``.

    Raises:
        ValueError: if ``v`` is not a real unit 4-vector.
    """
    v = np.asarray(v, dtype=float).ravel()
    if v.size != 4 or abs(np.linalg.norm(v) - 1) > UNIT_TOL:
        raise ValueError("schmidt_angles needs a real unit 4-vector")
    p, sigma, qt = np.linalg.svd(v.reshape(2, 2))
    q = qt.T
    sigma = sigma.astype(float).copy()
    if p[0, 0] < 0 or (p[0, 0] == 0 and p[1, 0] < 0):
        p[:, 0] *= -1
        q[:, 0] *= -1
    if np.linalg.det(p) < 0:
        p[:, 1] *= -1
        sigma[1] = -sigma[1]
    if np.linalg.det(q) < 0:
        q[:, 1] *= -1
        sigma[1] = -sigma[1]
    # columns are (cos t, -sin t) and (sin t, cos t)
    theta_1 = math.atan2(-p[1, 0], p[0, 0])
    theta_2 = math.atan2(-q[1, 0], q[0, 0])
    theta_a = math.atan2(sigma[1], sigma[0])
    return theta_a, theta_1, theta_2


def row_normalized(u) -> tuple[np.ndarray, np.ndarray]:
    """Scale each row to unit norm; return the scaled matrix and the original norms.

    Raises:
        ValueError: if some row is entirely zero.
    """
    u = np.asarray(u)
    norms = np.linalg.norm(u, axis=1)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise ValueError(f"row {int(zero[0])} is zero; the second design needs nonzero rows")
    return u / norms[:, None], norms


def _group_norms(u: np.ndarray, size: int) -> np.ndarray:
    """Norms of consecutive column groups of ``size``: shape ``(N, N // size)``."""
    dim = u.shape[0]
    return np.sqrt(np.sum(u.reshape(dim, dim // size, size) ** 2, axis=-1))


def formation(u: np.ndarray, c: int) -> list[Gate]:
    """Formation gates for a row-normalized real ``u``."""
    dim = u.shape[0]
    n = num_qubits_for(dim)
    controls = tuple(range(2 * n - c))
    if c == 1:
        pairs = u.reshape(dim, dim // 2, 2)
        angles = [pair_angle(a, b) for a, b in pairs.reshape(-1, 2)]
        return [UniformRotation("Y", 2 * n - 1, controls, angles)]

    top, bottom = 2 * n - 2, 2 * n - 1
    groups = u.reshape(dim * dim // 4, 4)
    norms = np.linalg.norm(groups, axis=1)
    table = np.zeros((groups.shape[0], 3))
    for idx, (vec, norm) in enumerate(zip(groups, norms)):
        if norm > 0:
            table[idx] = schmidt_angles(vec / norm)
    # the block applies R(-theta_1), R(-theta_2) first, then CNOT, R(theta_a), CNOT
    return [
        UniformRotation("Y", top, controls, -table[:, 1]),
        UniformRotation("Y", bottom, controls, -table[:, 2]),
        CNOT(top, bottom),
        UniformRotation("Y", top, controls, table[:, 0]),
        CNOT(top, bottom),
    ]


def combination(u: np.ndarray, c: int) -> list[Gate]:
    """Merge networks for targets ``2n-1-c`` down to ``n``."""
    dim = u.shape[0]
    n = num_qubits_for(dim)
    gates: list[Gate] = []
    for level in range(2 * n - 1 - c, n - 1, -1):
        half = 1 << (2 * n - 1 - level)
        norms = _group_norms(u, half).reshape(-1, 2)
        angles = [combine_angle(left, right) for left, right in norms]
        gates.append(UniformRotation("Y", level, tuple(range(level)), angles))
    return gates


def synth_scheme2(u, c: int = 1) -> Circuit:
    """Build the second-design circuit for a real ``2**n`` square matrix.

    Rows are normalized first; the original norms are stored on the circuit
    so outputs can be unscaled. For unitary input they are all 1.

    Raises:
        ValueError: for complex input, ``c`` not in {1, 2}, ``n < c``, or a zero row.
    """
    if c not in BLOCK_ROLES:
        raise ValueError(f"block size c must be 1 or 2, got {c}")
    u = as_operator(u)
    if not is_real(u):
        raise ValueError("the second design supports real matrices only")
    n = num_qubits_for(u.shape[0])
    if n < c:
        raise ValueError(f"block size c={c} needs at least {c} qubits, matrix has n={n}")
    unit, norms = row_normalized(u.real)
    gates: list[Gate] = [Hadamard(q) for q in range(n)]
    gates += formation(unit, c)
    gates += combination(unit, c)
    return Circuit(
        num_qubits=2 * n,
        main=(n, 2 * n),
        ancilla=(0, n),
        gates=tuple(gates),
        chosen_states=tuple(i << n for i in range(1 << n)),
        scale_factor=2.0 ** (-n / 2),
        row_norms=tuple(norms),
        meta={"scheme": 2, "n": n, "block": c},
    )
