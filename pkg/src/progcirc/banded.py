"""Ancilla-saving variant of the first design for matrices with width-2 rows.

When, after a two-sided permutation, every row ``i`` of a ``2**n`` matrix has
its nonzeros inside columns ``{s_i, s_i + 1}``, a 4x4 block per row suffices:

* qubits ``0..n-1`` hold the input (and later the row index), qubit ``n`` is a
  slot bit and qubit ``n+1`` the rotation target;
* a Hadamard on the slot bit makes two copies of every input amplitude, and a
  basis permutation of qubits ``0..n`` (multi-controlled X gates) routes
  a copy of ``psi_j`` to slot ``j - s_i`` of every row ``i`` that uses column ``j``;
* Y then Z rotations on the target, multiplexed over qubits ``0..n``, plant
  element ``(i, s_i + a)`` in slot ``a``;
* a Hadamard on the slot bit sums the two slots, so state ``4 i`` holds
  ``(U psi)_i / 2``.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .circuit import Circuit, Gate, Hadamard, PauliX, UniformRotation
from .linalg import MODULUS_TOL, as_operator, is_real, num_qubits_for
from .scheme1 import element_angles

H2_DATA = "h2_table.json"
H2_SHA256 = "0ac06979fef60a7b5edb46d31d1322278aceac4a5d60e5b3768b15aa5509bad1"
H2_ROWS = 20


class BandStructureError(ValueError):
    """The permuted matrix does not have the width-2 adjacent-column structure."""


def _check_perm(perm, dim: int, what: str) -> tuple[int, ...]:
    if perm is None:
        return tuple(range(dim))
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(dim)):
        raise ValueError(f"{what} is not a permutation of range({dim})")
    return perm


@dataclass(frozen=True)
class BandedMatrix:
    """``permuted[i, j] == base[row_perm[i], col_perm[j]]`` with row ``i`` inside ``windows[i], +1``."""

    base: np.ndarray
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    windows: tuple[int, ...]

    @property
    def permuted(self) -> np.ndarray:
        return self.base[np.ix_(self.row_perm, self.col_perm)]

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    def permute_input(self, psi) -> np.ndarray:
        return np.asarray(psi)[list(self.col_perm)]

    def unpermute_output(self, out) -> np.ndarray:
        out = np.asarray(out)
        res = np.empty_like(out)
        res[list(self.row_perm)] = out
        return res


def detect_band(u, row_perm=None, col_perm=None, windows=None) -> BandedMatrix:
    """Validate the width-2 structure of ``u`` under the given permutations.

    Without explicit ``windows`` a row starts at its first nonzero column
    (clamped to ``N - 2``); empty rows start on the diagonal.

    Raises:
        ValueError: if a permutation is not a bijection.
        BandStructureError: naming the first row (or column) that violates the structure.
    """
    u = as_operator(u)
    dim = u.shape[0]
    if dim < 2:
        raise BandStructureError("banded reduction needs at least a 2 x 2 matrix")
    row_perm = _check_perm(row_perm, dim, "row_perm")
    col_perm = _check_perm(col_perm, dim, "col_perm")
    b = u[np.ix_(row_perm, col_perm)]
    nonzero = b != 0
    starts = []
    for i in range(dim):
        cols = np.flatnonzero(nonzero[i])
        if cols.size > 2 or (cols.size == 2 and cols[1] != cols[0] + 1):
            raise BandStructureError(
                f"row {i}: nonzeros at columns {cols.tolist()} are not within two adjacent columns"
            )
        if windows is not None:
            s = int(windows[i])
            if not 0 <= s <= dim - 2 or any(c not in (s, s + 1) for c in cols):
                raise BandStructureError(f"row {i}: nonzeros {cols.tolist()} fall outside window {s}")
        else:
            s = min(int(cols[0]) if cols.size else i, dim - 2)
        starts.append(s)
    uses = nonzero.sum(axis=0)
    if np.any(uses > 2):
        j = int(np.argmax(uses > 2))
        raise BandStructureError(f"column {j}: {int(uses[j])} nonzeros, at most 2 can be routed")
    return BandedMatrix(base=u, row_perm=row_perm, col_perm=col_perm, windows=tuple(starts))


def _routing(bm: BandedMatrix) -> list[int]:
    """Basis permutation of (column, copy) -> (row, slot), indices ``2 * register + bit``."""
    b = bm.permuted
    dim = bm.dim
    sigma: dict[int, int] = {}
    for j in range(dim):
        rows = np.flatnonzero(b[:, j] != 0)
        for copy, i in enumerate(rows):
            sigma[(j << 1) | copy] = (int(i) << 1) | (j - bm.windows[i])
    free_src = [x for x in range(2 * dim) if x not in sigma]
    free_dst = sorted(set(range(2 * dim)) - set(sigma.values()))
    sigma.update(zip(free_src, free_dst))
    return [sigma[x] for x in range(2 * dim)]


def _adjacent_swap(w: int, bit: int, width: int) -> PauliX:
    """Multi-controlled X exchanging basis states ``w`` and ``w ^ (1 << bit)``."""
    target = width - 1 - bit
    controls = tuple(q for q in range(width) if q != target)
    polarity = tuple((w >> (width - 1 - q)) & 1 for q in controls)
    return PauliX(target, controls, polarity)


def _transposition(x: int, y: int, width: int) -> list[Gate]:
    bits = [b for b in range(width) if ((x ^ y) >> b) & 1]
    path = [x]
    for b in bits:
        path.append(path[-1] ^ (1 << b))
    forward = [_adjacent_swap(path[r], bits[r], width) for r in range(len(bits))]
    return forward + forward[-2::-1]


def permutation_gates(perm, width: int) -> list[Gate]:
    """Gates sending basis state ``x`` of qubits ``0..width-1`` to ``perm[x]``."""
    perm = list(perm)
    if sorted(perm) != list(range(1 << width)):
        raise ValueError(f"not a permutation of {1 << width} basis states")
    position = list(range(len(perm)))  # position[x]: where state x currently sits
    occupant = list(range(len(perm)))
    gates: list[Gate] = []
    for x, dest in enumerate(perm):
        here = position[x]
        if here == dest:
            continue
        other = occupant[dest]
        gates += _transposition(here, dest, width)
        position[x], position[other] = dest, here
        occupant[dest], occupant[here] = x, other
    return gates


def slot_elements(bm: BandedMatrix) -> np.ndarray:
    """Element planted at control value ``2 i + a``: ``permuted[i, windows[i] + a]``."""
    b = bm.permuted
    return np.array([b[i, bm.windows[i] + a] for i in range(bm.dim) for a in (0, 1)])


def synth_banded(bm: BandedMatrix, tol: float = MODULUS_TOL) -> Circuit:
    """Build the ``n + 2`` qubit circuit for the permuted matrix of ``bm``.

    Callers feed ``bm.permute_input(psi)`` and read outputs through
    ``bm.unpermute_output``.
    """
    n = num_qubits_for(bm.dim)
    slot, target = n, n + 1
    elements = slot_elements(bm)
    complex_input = not is_real(elements)
    if complex_input:
        pairs = [element_angles(complex(e), tol) for e in elements]
        thetas = [p[0] for p in pairs]
    else:
        re = elements.real
        if np.any(np.abs(re) > 1 + tol):
            raise ValueError("banded matrix has an element with modulus above 1")
        thetas = [math.acos(x) for x in np.clip(re, -1.0, 1.0)]
    controls = tuple(range(n + 1))
    gates: list[Gate] = [Hadamard(slot)]
    gates += permutation_gates(_routing(bm), n + 1)
    gates.append(UniformRotation("Y", target, controls, thetas))
    if complex_input:
        gates.append(UniformRotation("Z", target, controls, [p[1] for p in pairs]))
    gates.append(Hadamard(slot))
    return Circuit(
        num_qubits=n + 2,
        main=(0, n),
        ancilla=(n, n + 2),
        gates=tuple(gates),
        chosen_states=tuple(4 * i for i in range(bm.dim)),
        scale_factor=0.5,
        meta={"scheme": "banded", "n": n, "complex": complex_input},
    )


# -- hydrogen molecule --------------------------------------------------------


@dataclass(frozen=True)
class H2Record:
    control: str
    element: complex
    rz_half_angle: float
    ry_half_angle: float
    position: tuple[int, int]

    @property
    def angle_element(self) -> complex:
        """Element rebuilt from the rounded angles: ``exp(i rz/2) cos(ry/2)``."""
        return complex(np.exp(0.5j * self.rz_half_angle) * math.cos(0.5 * self.ry_half_angle))


@dataclass(frozen=True)
class H2Table:
    records: tuple[H2Record, ...]

    @property
    def dim(self) -> int:
        return 16

    def windows(self) -> tuple[int, ...]:
        """Per-row window start implied by the control bits (last bit = slot)."""
        starts = list(range(self.dim))
        for r in self.records:
            row, col = r.position
            starts[row] = col - int(r.control[-1])
        return tuple(starts)

    def consistency_errors(self) -> np.ndarray:
        """``|listed element - angle element|`` per record."""
        return np.array([abs(r.element - r.angle_element) for r in self.records])

    def rotation_bearing(self) -> int:
        """Records whose gates are not the identity."""
        return sum(1 for r in self.records if r.rz_half_angle != 0 or r.ry_half_angle != 0)


def load_h2() -> H2Table:
    """Read the bundled table.

    Raises:
        ValueError: on checksum, row-count or position mismatch.
    """
    raw = resources.files("progcirc").joinpath("data").joinpath(H2_DATA).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != H2_SHA256:
        raise ValueError(f"{H2_DATA}: checksum mismatch ({digest})")
    doc = json.loads(raw)
    rows = doc["rows"]
    if len(rows) != H2_ROWS:
        raise ValueError(f"{H2_DATA}: expected {H2_ROWS} rows, found {len(rows)}")
    records = []
    for k, r in enumerate(rows):
        row, col = r["position"]
        if int(r["control"][:4], 2) != row or len(r["control"]) != 5:
            raise ValueError(f"{H2_DATA}: rows[{k}] control bits disagree with position")
        records.append(
            H2Record(
                control=r["control"],
                element=complex(*r["element"]),
                rz_half_angle=float(r["rz"]),
                ry_half_angle=float(r["ry"]),
                position=(int(row), int(col)),
            )
        )
    return H2Table(tuple(records))


def reconstruct_h2(table: H2Table) -> np.ndarray:
    """The 16 x 16 bandwidth-reduced propagator, elements rebuilt from the angles."""
    u = np.zeros((table.dim, table.dim), dtype=complex)
    for r in table.records:
        u[r.position] = r.angle_element
    return u


def h2_banded(table: H2Table | None = None) -> BandedMatrix:
    table = load_h2() if table is None else table
    return detect_band(reconstruct_h2(table), windows=table.windows())
