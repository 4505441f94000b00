"""First design: one multiplexed rotation per matrix element on ``2n + 1`` qubits.

Layout for ``N = 2**n``: qubits ``0..n`` are ancilla, ``n+1..2n`` hold the
input. The three stages are

1. input modification: Hadamards on qubits ``0..n-1`` and a swap chain that
   shifts the input up one wire, leaving qubit ``2n`` in ``|0>``;
2. formation: a rotation on qubit ``2n`` multiplexed over qubits ``0..2n-1``
   whose control value ``i N + j`` plants ``u_ij`` as a cosine;
3. combination: Hadamards on qubits ``n..2n-1`` summing each row.

Basis state ``i 2**(n+1)`` then holds ``2**-n (U psi)_i`` exactly.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .circuit import Circuit, Gate, Hadamard, Swap, UniformRotation, rotation_matrix
from .linalg import MODULUS_TOL, as_operator, is_real, num_qubits_for


def element_angles(u: complex, tol: float = MODULUS_TOL) -> tuple[float, float]:
    """Full-angle ``(theta_y, phi_z)`` with ``exp(i phi_z) cos(theta_y) == u``.

    Magnitudes in ``(1, 1 + tol]`` are treated as 1.

    Raises:
        ValueError: if ``|u| > 1 + tol``.
    """
    mag = abs(u)
    if not math.isfinite(mag) or mag > 1 + tol:
        raise ValueError(f"element {u} has modulus {mag:.15g} > 1")
    mag = min(mag, 1.0)
    phase = cmath.phase(u) if mag > 0 else 0.0
    return math.acos(mag), phase


def _formation_tables(u: np.ndarray, tol: float) -> tuple[list[float], list[float] | None]:
    flat = u.ravel()
    if is_real(u):
        re = flat.real
        if np.any(np.abs(re) > 1 + tol):
            j = int(np.argmax(np.abs(re)))
            raise ValueError(f"element {j} (row {j // u.shape[0]}) has modulus {abs(re[j]):.15g} > 1")
        return [math.acos(x) for x in np.clip(re, -1.0, 1.0)], None
    pairs = [element_angles(complex(z), tol) for z in flat]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def input_modification(n: int) -> list[Gate]:
    gates: list[Gate] = [Hadamard(q) for q in range(n)]
    gates += [Swap(q, q + 1) for q in range(n, 2 * n)]
    return gates


def formation(u, tol: float = MODULUS_TOL) -> list[Gate]:
    """Multiplexed Y (and, for complex input, Z) rotations planting every element."""
    u = as_operator(u)
    n = num_qubits_for(u.shape[0])
    controls = tuple(range(2 * n))
    thetas, phases = _formation_tables(u, tol)
    gates: list[Gate] = [UniformRotation("Y", 2 * n, controls, thetas)]
    if phases is not None:
        gates.append(UniformRotation("Z", 2 * n, controls, phases))
    return gates


def combination(n: int) -> list[Gate]:
    return [Hadamard(q) for q in range(n, 2 * n)]


def synth_scheme1(u, tol: float = MODULUS_TOL) -> Circuit:
    """Build the first-design circuit for a ``2**n`` square matrix with ``|u_ij| <= 1``.

    Real matrices use signed ``arccos(u_ij)`` in a single Y network; complex
    ones use ``arccos|u_ij|`` followed by a Z network carrying ``arg u_ij``.

    Raises:
        ValueError: for a non-power-of-two dimension or an element with modulus above 1.
    """
    u = as_operator(u)
    n = num_qubits_for(u.shape[0])
    gates = input_modification(n) + formation(u, tol) + combination(n)
    return Circuit(
        num_qubits=2 * n + 1,
        main=(n + 1, 2 * n + 1),
        ancilla=(0, n + 1),
        gates=tuple(gates),
        chosen_states=tuple(i << (n + 1) for i in range(1 << n)),
        scale_factor=2.0**-n,
        meta={"scheme": 1, "n": n, "complex": not is_real(u)},
    )


def reference_operators(u, tol: float = MODULUS_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Explicit ``(V_f, V_c, V_m)`` built without the gate machinery.

    ``V_f`` is block-diagonal in the element rotations, ``V_c`` is
    ``I (x) H^(x)n (x) I_2`` and ``V_m`` is the low-register cyclic shift applied
    after ``H^(x)n (x) I``.
    """
    u = as_operator(u)
    n = num_qubits_for(u.shape[0])
    if 2 * n + 1 > 12:
        raise ValueError("reference operators are limited to 12 qubits")
    dim = 1 << (2 * n + 1)
    thetas, phases = _formation_tables(u, tol)
    v_f = np.zeros((dim, dim), dtype=complex)
    for j, theta in enumerate(thetas):
        block = rotation_matrix("Y", theta)
        if phases is not None:
            block = rotation_matrix("Z", phases[j]) @ block
        v_f[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = block

    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    hn = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        hn = np.kron(hn, h)
    v_c = np.kron(np.kron(np.eye(1 << n), hn), np.eye(2))

    low_mask = (1 << (n + 1)) - 1
    shift = np.zeros((dim, dim), dtype=complex)
    for x in range(dim):
        low = x & low_mask
        moved = ((low & ((1 << n) - 1)) << 1) | (low >> n)
        shift[(x & ~low_mask) | moved, x] = 1
    v_m = shift @ np.kron(hn, np.eye(1 << (n + 1)))
    return v_f, v_c, v_m
