import math

import numpy as np
import pytest

from asymproc import qubit_fixtures as qf
from asymproc.states import (
    Completion,
    ProtocolConfig,
    Scheme,
    make_data_state,
    make_eta,
    make_phi_j,
    make_program_state,
    make_target,
    make_u_mn,
    make_u_theta,
    make_xi,
    phi_gram,
)
from asymproc.tensor import inner_product, partial_trace


def test_config_validation():
    with pytest.raises(ValueError, match="even"):
        ProtocolConfig(3, 0.5)
    with pytest.raises(ValueError):
        ProtocolConfig(2, 1.2)
    cfg = ProtocolConfig(2, 0.0, theta=-0.5, scheme="local-gate", completion="nonlocal")
    assert cfg.theta == pytest.approx(2 * math.pi - 0.5)
    assert cfg.scheme is Scheme.LOCAL_GATE and cfg.completion is Completion.NONLOCAL


def test_data_state():
    np.testing.assert_array_equal(make_data_state(2, [1, 0]).amplitudes, [1, 0])
    plus = make_data_state(2, np.array([1, 1]) / math.sqrt(2))
    np.testing.assert_allclose(plus.amplitudes, [2 ** -0.5] * 2)
    rng = np.random.default_rng(2)
    s = make_data_state(4, rng.standard_normal(4) + 1j * rng.standard_normal(4), normalize=True)
    assert abs(np.linalg.norm(s.amplitudes) - 1) <= 1e-12
    assert s.labels == ("d",)
    with pytest.raises(ValueError):
        make_data_state(2, [1, 0, 0])
    with pytest.raises(ValueError):
        make_data_state(2, [0, 0], normalize=True)


def test_u_theta():
    np.testing.assert_array_equal(make_u_theta(2, 0).matrix, np.eye(2))
    for theta in (0.3, 2.0, 5.5):
        assert np.abs(make_u_theta(2, theta).matrix - qf.u_theta(theta)).max() <= 1e-15
    e = np.exp(1j * math.pi / 3)
    np.testing.assert_allclose(np.diag(make_u_theta(4, math.pi / 3).matrix), [e, e.conjugate()] * 2, atol=1e-15)
    with pytest.raises(ValueError):
        make_u_theta(3, 0.1)


def test_u_mn():
    np.testing.assert_array_equal(make_u_mn(3, 0, 0).matrix, np.eye(3))
    np.testing.assert_allclose(make_u_mn(2, 1, 0).matrix, np.diag([1, -1]), atol=1e-15)
    # U^(01) shifts |s> -> |s-1>
    np.testing.assert_allclose(make_u_mn(3, 0, 1).matrix @ np.eye(3)[1], np.eye(3)[0])
    with pytest.raises(ValueError):
        make_u_mn(2, 2, 0)


@pytest.mark.parametrize("D", [2, 4, 6])
@pytest.mark.parametrize("theta", [0.0, 0.9, math.pi, 5.5])
def test_u_theta_weyl_decomposition(D, theta):
    lhs = math.cos(theta) * np.eye(D) + 1j * math.sin(theta) * make_u_mn(D, D // 2, 0).matrix
    assert np.abs(lhs - make_u_theta(D, theta).matrix).max() <= 1e-12


@pytest.mark.parametrize("D", [2, 3, 4])
def test_u_mn_hilbert_schmidt_orthogonal(D):
    ops = [make_u_mn(D, m, n).matrix for m in range(D) for n in range(D)]
    gram = np.array([[np.trace(a.conj().T @ b) for b in ops] for a in ops])
    assert np.abs(gram - D * np.eye(D * D)).max() <= 1e-10


def test_phi_qubit_examples():
    f = make_phi_j(2, 0.5, 0).amplitudes
    expect = np.zeros(8, complex)
    expect[0b000], expect[0b011], expect[0b101] = 1, 0.5, 0.5
    np.testing.assert_allclose(f, expect / math.sqrt(1.5), atol=1e-15)
    f = make_phi_j(2, 1.0, 0).amplitudes
    expect = np.zeros(8, complex)
    expect[0b000], expect[0b011] = 1, 1
    np.testing.assert_allclose(f, expect / math.sqrt(2), atol=1e-15)
    assert inner_product(make_phi_j(2, 0.37, 0), make_phi_j(2, 0.37, 1)) == 0


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_phi_matches_qubit_kets(p):
    assert np.abs(make_phi_j(2, p, 0).amplitudes - qf.phi0(p)).max() <= 1e-12
    assert np.abs(make_phi_j(2, p, 1).amplitudes - qf.phi1(p)).max() <= 1e-12


@pytest.mark.parametrize("D", [2, 4, 6])
@pytest.mark.parametrize("p", [0, 0.25, 0.5, 0.75, 1])
def test_phi_family_orthonormal(D, p):
    assert np.abs(phi_gram(D, p) - np.eye(D)).max() <= 1e-12


def test_phi_range_checks():
    with pytest.raises(ValueError):
        make_phi_j(2, 0.5, 2)
    with pytest.raises(ValueError):
        make_phi_j(2, -0.1, 0)


def test_xi_qubit_matches_hand_coded():
    for p in (0.1, 0.5, 0.9):
        assert np.abs(make_xi(2, p).amplitudes - qf.xi(p)).max() <= 1e-12


@pytest.mark.parametrize("D", [2, 4, 6])
@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
def test_xi_normalized_and_maximally_entangled_with_P(D, p):
    xi = make_xi(D, p)
    assert abs(np.linalg.norm(xi.amplitudes) - 1) <= 1e-12
    assert np.abs(partial_trace(xi, ["P"]).matrix - np.eye(D) / D).max() <= 1e-10


def test_program_state():
    cfg = ProtocolConfig(4, 0.3, 0.0)
    np.testing.assert_array_equal(make_program_state(cfg).amplitudes, make_xi(4, 0.3).amplitudes)
    cfg = ProtocolConfig(2, 0.4, math.pi / 2)
    expect = (1j * np.kron([1, 0], qf.phi0(0.4)) - 1j * np.kron([0, 1], qf.phi1(0.4))) / math.sqrt(2)
    assert np.abs(make_program_state(cfg).amplitudes - expect).max() <= 1e-12
    for th in (0.2, 4.0):
        assert np.abs(make_program_state(ProtocolConfig(2, 0.4, th)).amplitudes - qf.program(0.4, th)).max() <= 1e-12


def test_target():
    data = make_data_state(2, [0.6, 0.8j])
    np.testing.assert_array_equal(make_target(ProtocolConfig(2, 0.5, 0.0), data).amplitudes, data.amplitudes)
    t = make_target(ProtocolConfig(2, 0.5, 1.3), make_data_state(2, [1, 0]))
    np.testing.assert_allclose(t.amplitudes, [np.exp(1.3j), 0], atol=1e-15)
    with pytest.raises(ValueError):
        make_target(ProtocolConfig(4, 0.5), data)


def test_eta_matches_qubit_formula():
    a = np.array([0.6, 0.8j])
    cfg = ProtocolConfig(2, 0.3, 0.9)
    assert np.abs(make_eta(cfg, make_data_state(2, a)).amplitudes - qf.eta(a, 0.3, 0.9)).max() <= 1e-12
