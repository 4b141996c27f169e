import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zenokit import (
    EvolutionConfig,
    ValidationError,
    make_general_unitary,
    make_rabi_unitary,
)


def test_rabi_zero_time_is_identity():
    u = make_rabi_unitary(1.0, 0.0)
    assert np.allclose(u.matrix(), np.eye(2), atol=1e-15)


def test_rabi_amplitudes_at_small_angle():
    u = make_rabi_unitary(1.0, 0.1)
    assert abs(u.a) ** 2 == pytest.approx(math.cos(0.1) ** 2, abs=1e-12)
    assert abs(u.b) ** 2 == pytest.approx(math.sin(0.1) ** 2, abs=1e-12)
    assert abs(u.a) ** 2 == pytest.approx(0.990033, abs=1e-6)


def test_rabi_off_diagonal_matches_variance_to_fourth_order():
    # |b|^2 = sin^2(0.1) vs V*delta^2 = 4 * 0.0025 = 0.01
    u = make_rabi_unitary(2.0, 0.05)
    assert abs(u.b) ** 2 == pytest.approx(math.sin(0.1) ** 2, abs=1e-15)
    assert abs(abs(u.b) ** 2 - 0.01) < 0.1**4


@pytest.mark.parametrize("delta", [1e-2, 1e-3, 1e-4])
def test_off_diagonal_weight_converges_to_variance(delta):
    omega = 1.7
    u = make_rabi_unitary(omega, delta)
    ratio = abs(u.b) ** 2 / delta**2
    assert abs(ratio - omega**2) < 2 * omega**4 * delta**2


def test_general_unitary_identity():
    u = make_general_unitary(1.0, 0.0, 0.0)
    assert np.allclose(u.matrix(), np.eye(2), atol=1e-15)


def test_general_unitary_matches_rabi():
    theta = 0.37
    u1 = make_general_unitary(math.cos(theta), -1j * math.sin(theta), 0.0)
    u2 = make_rabi_unitary(1.0, theta)
    assert np.allclose(u1.matrix(), u2.matrix(), atol=1e-15)


def test_general_unitary_is_unitary():
    u = make_general_unitary(0.6, 0.8j, math.pi / 3)
    m = u.matrix()
    assert np.allclose(m.conj().T @ m, np.eye(2), atol=1e-12)


def test_general_unitary_rejects_bad_norm():
    with pytest.raises(ValidationError, match="deviates"):
        make_general_unitary(0.9, 0.9, 0.0)


def test_rabi_cross_term_is_real_nonpositive():
    # conj(a)^2 * b * c_neq_1 = -cos^2 * sin^2 exactly for this realization
    for theta in (0.0, 0.1, 0.5, 1.3):
        u = make_rabi_unitary(1.0, theta)
        cross = u.a.conjugate() ** 2 * u.b * u.c_neq_1
        assert cross.imag == 0.0
        assert cross.real <= 0.0
        assert cross.real == pytest.approx(
            -(math.cos(theta) ** 2) * math.sin(theta) ** 2, abs=1e-15
        )


@given(
    x=st.tuples(*[st.floats(-1, 1) for _ in range(4)]).filter(
        lambda t: 1e-3 < math.hypot(*t)
    ),
    phi=st.floats(0, 2 * math.pi),
)
def test_random_general_unitaries_are_unitary(x, phi):
    norm = math.sqrt(sum(v * v for v in x))
    a = complex(x[0], x[1]) / norm
    b = complex(x[2], x[3]) / norm
    m = make_general_unitary(a, b, phi).matrix()
    assert np.abs(m.conj().T @ m - np.eye(2)).max() < 1e-12


class TestEvolutionConfig:
    def test_derived_quantities(self):
        cfg = EvolutionConfig(omega=2.0, T=1.0, n=10)
        assert cfg.V == 4.0
        assert cfg.delta == 0.1

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(omega=1.0, T=1.0, n=0),
            dict(omega=1.0, T=0.0, n=5),
            dict(omega=-1.0, T=1.0, n=5),
            dict(omega=1.0, T=1.0, n=5, c_ratio=0.0),
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            EvolutionConfig(**kwargs)

    def test_warns_on_coarse_steps(self):
        with pytest.warns(UserWarning, match="V\\*delta\\^2"):
            EvolutionConfig(omega=10.0, T=1.0, n=2)
