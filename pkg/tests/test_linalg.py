import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from golden import ONE_QUBIT_COMBINATION, one_qubit_formation, random_orthogonal
from progcirc.linalg import (
    OpCounter,
    as_operator,
    binary_dot,
    fidelity,
    fwht,
    gray_code,
    gray_codes,
    hadamard_matrix,
    is_unitary,
    load_matrix,
    matmul,
    matrix_from_json,
    matrix_to_json,
    normalize,
    num_qubits_for,
    popcount,
    save_matrix,
    unitarity_error,
    vector_from_json,
    vector_to_json,
)


def rotation(t):
    return np.array([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]])


class TestMatmul:
    def test_identity(self):
        a = np.arange(16.0).reshape(4, 4)
        np.testing.assert_array_equal(matmul(np.eye(4), a), a)

    def test_rotation_inverse(self):
        r = rotation(0.3)
        np.testing.assert_allclose(matmul(r, r.T), np.eye(2), atol=1e-14)

    def test_combination_after_formation_pattern(self):
        u = rotation(0.7)
        v = matmul(ONE_QUBIT_COMBINATION, one_qubit_formation(u))
        assert v[0, 0] == pytest.approx(u[0, 0] / np.sqrt(2), abs=1e-12)
        assert v[0, 2] == pytest.approx(u[0, 1] / np.sqrt(2), abs=1e-12)
        assert v[4, 4] == pytest.approx(u[1, 0] / np.sqrt(2), abs=1e-12)
        assert v[4, 6] == pytest.approx(u[1, 1] / np.sqrt(2), abs=1e-12)
        # the two row blocks never mix
        np.testing.assert_array_equal(v[:4, 4:], 0)
        np.testing.assert_array_equal(v[4:, :4], 0)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="cannot multiply"):
            matmul(np.eye(2), np.eye(3))


class TestUnitarity:
    def test_identity(self):
        assert is_unitary(np.eye(4), 1e-12)

    def test_scaled_row(self):
        a = np.eye(4)
        a[2] *= 0.5
        assert not is_unitary(a, 1e-12)
        assert unitarity_error(a) == pytest.approx(0.75)

    def test_random_orthogonal(self):
        assert is_unitary(random_orthogonal(8, np.random.default_rng(1)))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            is_unitary(np.ones((2, 3)))


class TestFwht:
    def test_delta(self):
        np.testing.assert_array_equal(fwht([1, 0, 0, 0]), [1, 1, 1, 1])

    def test_butterfly(self):
        np.testing.assert_array_equal(fwht([3.0, 5.0]), [8.0, -2.0])

    def test_matches_dense_hadamard(self):
        v = np.random.default_rng(2).normal(size=16)
        np.testing.assert_allclose(fwht(v), hadamard_matrix(4) @ v, atol=1e-12)

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError, match="power of two"):
            fwht([1, 2, 3])

    def test_counter_counts_stages(self):
        counter = OpCounter()
        fwht(np.ones(32), counter)
        assert counter.ops == 5 * 32

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 8), st.integers(0, 2**32 - 1))
    def test_involution(self, k, seed):
        v = np.random.default_rng(seed).normal(size=1 << k)
        np.testing.assert_allclose(fwht(fwht(v)), (1 << k) * v, atol=1e-9)


class TestBits:
    def test_gray_zero(self):
        assert gray_code(0) == 0

    def test_gray_k2(self):
        assert list(gray_codes(2)) == [0b00, 0b01, 0b11, 0b10]

    @pytest.mark.parametrize("k", range(1, 9))
    def test_gray_single_bit_steps(self, k):
        codes = gray_codes(k)
        assert sorted(codes) == list(range(1 << k))
        for a, b in zip(codes, np.roll(codes, -1)):
            assert popcount(int(a ^ b)) == 1

    def test_gray_negative(self):
        with pytest.raises(ValueError):
            gray_code(-1)

    def test_binary_dot(self):
        assert binary_dot(0b01, 0b11) == 1
        assert binary_dot(0b11, 0b11) == 0
        assert binary_dot(0, 0b111) == 0

    def test_hadamard_entries_are_parities(self):
        h = hadamard_matrix(3)
        for i in range(8):
            for j in range(8):
                assert h[i, j] == (-1) ** binary_dot(i, j)


class TestHelpers:
    @pytest.mark.parametrize("dim,n", [(1, 0), (2, 1), (1024, 10)])
    def test_num_qubits(self, dim, n):
        assert num_qubits_for(dim) == n

    @pytest.mark.parametrize("dim", [0, 3, 6, 12])
    def test_num_qubits_rejects(self, dim):
        with pytest.raises(ValueError):
            num_qubits_for(dim)

    def test_as_operator_rejects(self):
        with pytest.raises(ValueError, match="square"):
            as_operator(np.ones((2, 4)))
        with pytest.raises(ValueError, match="NaN"):
            as_operator([[np.nan, 0], [0, 1]])
        with pytest.raises(ValueError, match="power of two"):
            as_operator(np.eye(3))
        assert as_operator(np.eye(3), require_power_of_two=False).shape == (3, 3)

    def test_fidelity_phase_invariant(self):
        v = normalize([1, 2j, 3])
        assert fidelity(v, np.exp(0.4j) * v) == pytest.approx(1.0)
        assert fidelity(v, np.zeros(3)) == 0.0

    def test_normalize_zero(self):
        with pytest.raises(ValueError):
            normalize([0, 0])


class TestMatrixFiles:
    def test_real_round_trip(self, tmp_path):
        a = random_orthogonal(4, np.random.default_rng(3))
        save_matrix(tmp_path / "m.json", a)
        doc = json.loads((tmp_path / "m.json").read_text())
        assert all(isinstance(x, float) for x in doc["entries"])
        np.testing.assert_array_equal(load_matrix(tmp_path / "m.json"), a)

    def test_complex_round_trip(self):
        a = np.array([[1, 1j], [0.5 - 0.25j, 0]])
        back = matrix_from_json(json.loads(json.dumps(matrix_to_json(a))))
        np.testing.assert_array_equal(back, a)

    def test_mixed_scalars(self):
        a = matrix_from_json({"dim": 2, "entries": [1, [0, 1], 0, [2.5, -1]]})
        np.testing.assert_array_equal(a, [[1, 1j], [0, 2.5 - 1j]])

    @pytest.mark.parametrize(
        "doc,msg",
        [
            ({"entries": []}, "dim"),
            ({"dim": 2, "entries": [1, 2, 3]}, "expected 4"),
            ({"dim": 2, "entries": [1, 0, 0, "x"]}, r"entries\[3\]"),
            ({"dim": 2, "entries": [1, 0, 0, [1, 2, 3]]}, r"entries\[3\]"),
            ({"dim": True, "entries": [1]}, "dim"),
            ([1, 2], "object"),
        ],
    )
    def test_schema_errors(self, doc, msg):
        with pytest.raises(ValueError, match=msg):
            matrix_from_json(doc)

    def test_state_formats(self):
        np.testing.assert_array_equal(vector_from_json([1, [0, 1]]), [1, 1j])
        doc = vector_to_json(np.array([0.6, 0.8]))
        assert doc == {"num_qubits": 1, "amplitudes": [0.6, 0.8]}
        np.testing.assert_array_equal(vector_from_json(doc), [0.6, 0.8])
        with pytest.raises(ValueError):
            vector_from_json({"amps": [1]})
