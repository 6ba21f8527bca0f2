import numpy as np
import pytest
from hypothesis import given, strategies as st

from scramlab.paulis import PauliString, product_phase_exponent, symplectic_parity


def test_label_roundtrip():
    p = PauliString.from_label("XZYI", sign=-1)
    assert p.to_label() == "-XZYI"
    assert p.x_mask == 0b0101
    assert p.z_mask == 0b0110


def test_commutation():
    x = PauliString.from_label("XI")
    z = PauliString.from_label("ZI")
    zz = PauliString.from_label("ZZ")
    xx = PauliString.from_label("XX")
    assert not x.commutes_with(z)
    assert xx.commutes_with(zz)
    assert symplectic_parity(x.x_mask, x.z_mask, z.x_mask, z.z_mask) == 1


def test_single_qubit_products_against_matrices():
    labels = ["I", "X", "Z", "Y"]
    for a in labels:
        for b in labels:
            pa = PauliString.from_label(a)
            pb = PauliString.from_label(b)
            prod, k = pa.mul_with_phase(pb)
            lhs = pa.matrix() @ pb.matrix()
            rhs = (1j**k) * prod.matrix()
            assert np.allclose(lhs, rhs), (a, b)


def test_mul_requires_hermitian_result():
    x = PauliString.from_label("X")
    z = PauliString.from_label("Z")
    with pytest.raises(ValueError):
        _ = x * z  # X*Z = -iY is not a signed Pauli
    y = PauliString.from_label("Y")
    assert (x * x).to_label() == "+I"
    assert (y * y).to_label() == "+I"


def test_sign_propagates_through_products():
    minus_x = PauliString.from_label("X", sign=-1)
    x = PauliString.from_label("X")
    assert (minus_x * x).sign == -1 * 1 * 1 or (minus_x * x).to_label() == "-I"


def test_matrix_conventions():
    y = PauliString.from_label("Y")
    assert np.allclose(y.matrix(), np.array([[0, -1j], [1j, 0]]))
    zi = PauliString.from_label("ZI")
    assert np.allclose(zi.matrix(), np.kron(np.diag([1, -1]), np.eye(2)))


def test_mask_range_validation():
    with pytest.raises(ValueError):
        PauliString(1, 0b10, 0, 1)
    with pytest.raises(ValueError):
        PauliString(1, 0, 0, 2)


@given(
    st.integers(min_value=1, max_value=6),
    st.data(),
)
def test_product_phase_matches_matrices(n, data):
    bits = st.integers(min_value=0, max_value=(1 << n) - 1)
    x1, z1, x2, z2 = (data.draw(bits) for _ in range(4))
    k = product_phase_exponent(x1, z1, x2, z2)
    p1 = PauliString(n, x1, z1)
    p2 = PauliString(n, x2, z2)
    p12 = PauliString(n, x1 ^ x2, z1 ^ z2)
    assert np.allclose(p1.matrix() @ p2.matrix(), (1j**k) * p12.matrix())
