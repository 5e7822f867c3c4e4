"""Hand-written qubit (D=2) states and formulas, ket by ket.

These do not go through the quDit constructors and serve as an independent
reference for the D=2 instance of the general code path.
"""
from __future__ import annotations

import numpy as np

ket = {s: np.eye(2)[int(s)] for s in "01"}


def kets(*labels: str) -> np.ndarray:
    """``|abc...>`` from a bit string, e.g. ``kets('011')``."""
    (bits,) = labels
    out = np.ones(1)
    for b in bits:
        out = np.kron(out, ket[b])
    return out.astype(complex)


def phi0(p: float) -> np.ndarray:
    return (kets("000") + p * kets("011") + (1 - p) * kets("101")) / np.sqrt(2 * (1 - p + p * p))


def phi1(p: float) -> np.ndarray:
    return (kets("111") + p * kets("100") + (1 - p) * kets("010")) / np.sqrt(2 * (1 - p + p * p))


def u_theta(theta: float) -> np.ndarray:
    return np.array([[np.exp(1j * theta), 0], [0, np.exp(-1j * theta)]])


def xi(p: float) -> np.ndarray:
    """Over (P, A, B, C)."""
    return (np.kron(ket["0"], phi0(p)) + np.kron(ket["1"], phi1(p))) / np.sqrt(2)


def program(p: float, theta: float) -> np.ndarray:
    return (np.exp(1j * theta) * np.kron(ket["0"], phi0(p))
            + np.exp(-1j * theta) * np.kron(ket["1"], phi1(p))) / np.sqrt(2)


BELL = {
    "Phi+": (kets("00") + kets("11")) / np.sqrt(2),
    "Phi-": (kets("00") - kets("11")) / np.sqrt(2),
    "Psi+": (kets("01") + kets("10")) / np.sqrt(2),
    "Psi-": (kets("01") - kets("10")) / np.sqrt(2),
}

# (m, n) index of each named Bell state in the quDit labelling
BELL_INDEX = {"Phi+": (0, 0), "Phi-": (0, 1), "Psi+": (1, 0), "Psi-": (1, 1)}


def tilted_bell(theta: float) -> dict[str, np.ndarray]:
    em, ep = np.exp(-1j * theta), np.exp(1j * theta)
    return {
        "Phi+": (em * kets("00") + ep * kets("11")) / np.sqrt(2),
        "Phi-": (em * kets("00") - ep * kets("11")) / np.sqrt(2),
        "Psi+": (em * kets("01") + ep * kets("10")) / np.sqrt(2),
        "Psi-": (em * kets("01") - ep * kets("10")) / np.sqrt(2),
    }


def branches(alpha, p: float, theta: float) -> dict[str, np.ndarray]:
    """The four (A, B, C) branches of ``|psi>|P_U>`` in the standard Bell basis, weight 1/2 included."""
    a0, a1 = alpha
    e, ec = np.exp(1j * theta), np.exp(-1j * theta)
    f0, f1 = phi0(p), phi1(p)
    return {
        "Phi+": 0.5 * (a0 * e * f0 + a1 * ec * f1),
        "Phi-": 0.5 * (a0 * e * f0 - a1 * ec * f1),
        "Psi+": 0.5 * (a1 * e * f0 + a0 * ec * f1),
        # overall sign fixed by Psi- = (|01> - |10>)/sqrt2
        "Psi-": 0.5 * (a0 * ec * f1 - a1 * e * f0),
    }


def branches_local_gate(alpha, p: float, theta: float) -> dict[str, np.ndarray]:
    """Branches of ``|psi>|xi>`` in the theta-tilted basis.

    The Phi rows coincide with the processor's. In the Psi rows the theta phase
    follows the data index, so they are the processor's rows with ``theta -> -theta``.
    """
    a0, a1 = alpha
    e, ec = np.exp(1j * theta), np.exp(-1j * theta)
    f0, f1 = phi0(p), phi1(p)
    out = branches(alpha, p, theta)
    out["Psi+"] = 0.5 * (a1 * ec * f0 + a0 * e * f1)
    out["Psi-"] = 0.5 * (a0 * e * f1 - a1 * ec * f0)
    return out


def eta(alpha, p: float, theta: float) -> np.ndarray:
    a0, a1 = alpha
    return a0 * np.exp(1j * theta) * phi0(p) + a1 * np.exp(-1j * theta) * phi1(p)


SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
V = np.kron(np.kron(SIGMA_Z, SIGMA_Z), SIGMA_Z)


def rho(alpha, p: float, theta: float, which: str) -> np.ndarray:
    a0, a1 = alpha
    q = 2 * p if which == "A" else 2 * (1 - p)
    b = (1 - p) ** 2 if which == "A" else p * p
    out = np.array([
        [q * abs(a0) ** 2 + b, q * a0 * np.conj(a1) * np.exp(2j * theta)],
        [q * np.conj(a0) * a1 * np.exp(-2j * theta), q * abs(a1) ** 2 + b],
    ])
    return out / (2 * (1 - p + p * p))


def fidelities(p: float) -> tuple[float, float]:
    den = 2 * (1 - p + p * p)
    return (1 + p * p) / den, (2 - 2 * p + p * p) / den
