"""Named states and operators of the two-output processor: data, U_theta, U^(mn),
the cloning family phi_j, the channel xi, the program register and the target."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .tensor import ATOL, Operator, PureState, apply_to_subsystems

TWO_PI = 2.0 * math.pi
ABC = ("A", "B", "C")


class Scheme(str, enum.Enum):
    PROCESSOR = "processor"
    LOCAL_GATE = "local-gate"


class Completion(str, enum.Enum):
    LOCC_ONLY = "locc"
    NONLOCAL = "nonlocal"


def check_dimension(D: int) -> int:
    if int(D) != D or D < 2:
        raise ValueError(f"D must be an integer >= 2, got {D!r}")
    if D % 2:
        raise ValueError(f"D must be even, got {D}")
    return int(D)


def check_p(p: float) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    return p


@dataclass(frozen=True)
class ProtocolConfig:
    D: int
    p: float
    theta: float = 0.0
    scheme: Scheme = Scheme.PROCESSOR
    completion: Completion = Completion.LOCC_ONLY

    def __post_init__(self) -> None:
        object.__setattr__(self, "D", check_dimension(self.D))
        object.__setattr__(self, "p", check_p(self.p))
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "completion", Completion(self.completion))


def alternating_phases(D: int, theta: float) -> np.ndarray:
    """``exp[(-1)^s i theta]`` for s = 0..D-1."""
    signs = np.where(np.arange(D) % 2 == 0, 1.0, -1.0)
    return np.exp(1j * signs * theta)


def make_data_state(D: int, alphas, normalize: bool = False) -> PureState:
    a = np.asarray(alphas, dtype=complex).ravel()
    if a.size != D:
        raise ValueError(f"expected {D} amplitudes, got {a.size}")
    if not np.any(a):
        raise ValueError("data state amplitudes are all zero")
    return PureState.from_amplitudes(a, (D,), ("d",), normalize=normalize)


def random_data_state(D: int, rng: np.random.Generator) -> PureState:
    """Haar-random data state (normalized complex Gaussian vector)."""
    a = rng.standard_normal(D) + 1j * rng.standard_normal(D)
    return make_data_state(D, a, normalize=True)


def make_u_theta(D: int, theta: float) -> Operator:
    check_dimension(D)
    return Operator(np.diag(alternating_phases(D, theta)), (D,))


def make_u_mn(D: int, m: int, n: int) -> Operator:
    """Weyl operator ``sum_s exp(-2 pi i s m / D) |s-n><s|``."""
    if not (0 <= m < D and 0 <= n < D):
        raise ValueError(f"indices (m, n) = ({m}, {n}) out of range for D={D}")
    s = np.arange(D)
    mat = np.zeros((D, D), dtype=complex)
    mat[(s - n) % D, s] = np.exp(-1j * TWO_PI * s * m / D)
    return Operator(mat, (D,))


def phi_norm(D: int, p: float) -> float:
    return math.sqrt(1.0 + (D - 1) * (2 * p * p - 2 * p + 1))


def make_phi_j(D: int, p: float, j: int) -> PureState:
    """Output of the asymmetric Heisenberg cloner on ``|j>|00>``, labels (A, B, C).

    Weight 1 on ``|jjj>``, ``p`` on ``|j, j+r, j+r>`` and ``1-p`` on ``|j+r, j, j+r>``
    for r = 1..D-1 (indices mod D).
    """
    p = check_p(p)
    if not 0 <= j < D:
        raise ValueError(f"j={j} out of range for D={D}")
    t = np.zeros((D, D, D), dtype=complex)
    t[j, j, j] = 1.0
    for r in range(1, D):
        q = (j + r) % D
        t[j, q, q] += p
        t[q, j, q] += 1.0 - p
    return PureState(t.ravel() / phi_norm(D, p), (D, D, D), ABC)


@lru_cache(maxsize=256)
def phi_family(D: int, p: float) -> tuple[PureState, ...]:
    return tuple(make_phi_j(D, p, j) for j in range(D))


def superpose_phi(D: int, p: float, coeffs) -> PureState:
    """``sum_j coeffs[j] |phi_j>`` as an (A, B, C) state; coeffs must have unit norm."""
    basis = np.stack([f.amplitudes for f in phi_family(D, p)])
    return PureState(np.asarray(coeffs, dtype=complex) @ basis, (D, D, D), ABC)


@lru_cache(maxsize=256)
def make_xi(D: int, p: float) -> PureState:
    """Channel ``(1/sqrt D) sum_j |j>_P |phi_j>_ABC``, labels (P, A, B, C)."""
    D = check_dimension(D)
    amps = np.zeros((D, D ** 3), dtype=complex)
    for j, phi in enumerate(phi_family(D, p)):
        amps[j] = phi.amplitudes
    return PureState(amps.ravel() / math.sqrt(D), (D, D, D, D), ("P",) + ABC)


def make_program_state(cfg: ProtocolConfig) -> PureState:
    """Program register ``(U_theta x I_ABC)|xi>``."""
    return apply_to_subsystems(make_xi(cfg.D, cfg.p), make_u_theta(cfg.D, cfg.theta), ["P"])


def make_target(cfg: ProtocolConfig, data: PureState) -> PureState:
    """Ideal output ``U_theta|psi>``."""
    if data.dims != (cfg.D,):
        raise ValueError(f"data dims {data.dims} do not match D={cfg.D}")
    return apply_to_subsystems(data, make_u_theta(cfg.D, cfg.theta), [data.labels[0]])


def make_eta(cfg: ProtocolConfig, data: PureState) -> PureState:
    """Successful-branch output ``sum_k alpha_k exp[(-1)^k i theta] |phi_k>``."""
    if data.dims != (cfg.D,):
        raise ValueError(f"data dims {data.dims} do not match D={cfg.D}")
    coeffs = data.amplitudes * alternating_phases(cfg.D, cfg.theta)
    return superpose_phi(cfg.D, cfg.p, coeffs)


def phi_gram(D: int, p: float) -> np.ndarray:
    basis = np.stack([f.amplitudes for f in phi_family(D, p)])
    return basis.conj() @ basis.T


def phi_is_orthonormal(D: int, p: float, atol: float = ATOL) -> bool:
    return bool(np.allclose(phi_gram(D, p), np.eye(D), rtol=0, atol=atol))
