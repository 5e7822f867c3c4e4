"""Generalized Bell bases on two quDits and projective measurement of a labelled pair."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .states import TWO_PI, alternating_phases
from .tensor import PureState

ZERO_PROB = 1e-14


@dataclass(frozen=True)
class BellBasis:
    """``Phi_{m,n} = D^-1/2 sum_k c_k exp(2 pi i k n / D) |k>|k+m>``.

    ``c_k = 1`` for the standard basis and ``exp[(-1)^(k+1) i theta]`` for the
    theta-tilted one. ``theta is None`` means standard.
    """

    D: int
    theta: float | None = None

    @property
    def tilted(self) -> bool:
        return self.theta is not None

    @cached_property
    def matrix(self) -> np.ndarray:
        """Rows are basis vectors, row index ``m * D + n``."""
        D = self.D
        k = np.arange(D)
        c = np.ones(D, dtype=complex) if self.theta is None else alternating_phases(D, -self.theta)
        rows = np.zeros((D * D, D * D), dtype=complex)
        for m in range(D):
            for n in range(D):
                rows[m * D + n, k * D + (k + m) % D] = c * np.exp(1j * TWO_PI * k * n / D)
        return rows / math.sqrt(D)

    def state(self, m: int, n: int, labels: Sequence[str] = ("d", "P")) -> PureState:
        return PureState(self.matrix[m * self.D + n], (self.D, self.D), tuple(labels))

    @property
    def states(self) -> dict[tuple[int, int], PureState]:
        return {(m, n): self.state(m, n) for m in range(self.D) for n in range(self.D)}


def build_bell_basis(D: int, theta: float | None = None) -> BellBasis:
    if int(D) != D or D < 2:
        raise ValueError(f"D must be an integer >= 2, got {D!r}")
    return BellBasis(int(D), None if theta is None else float(theta))


@dataclass(frozen=True)
class MeasurementOutcome:
    m: int
    n: int
    probability: float
    post_state: PureState


@dataclass(frozen=True)
class Sample:
    """Sampling mode: draw one outcome with ``rng`` or a fresh generator from ``seed``."""

    seed: int | None = None
    rng: np.random.Generator | None = None

    def generator(self) -> np.random.Generator:
        return self.rng if self.rng is not None else np.random.default_rng(self.seed)


EXHAUSTIVE = "exhaustive"


def sample_index(probs: np.ndarray, rng: np.random.Generator, size: int | None = None):
    """Inverse-CDF draw(s) from a discrete distribution."""
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    u = rng.random(size)
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(probs) - 1)


def project_pair(joint: PureState, pair: Sequence[str], basis: BellBasis):
    """Unnormalized branches ``(<Phi_{m,n}| x I)|joint>`` as rows, plus the remaining layout."""
    axes = [joint.axis(lab) for lab in pair]
    if len(axes) != 2 or axes[0] == axes[1]:
        raise ValueError(f"need two distinct labels, got {list(pair)}")
    if joint.dims[axes[0]] != basis.D or joint.dims[axes[1]] != basis.D:
        raise ValueError(f"pair dims {[joint.dims[a] for a in axes]} do not match basis D={basis.D}")
    rest = [i for i in range(len(joint.dims)) if i not in axes]
    m = np.transpose(joint.tensor, axes + rest).reshape(basis.D ** 2, -1)
    branches = basis.matrix.conj() @ m
    return branches, tuple(joint.dims[i] for i in rest), tuple(joint.labels[i] for i in rest)


def _outcome(idx: int, branch: np.ndarray, D: int, dims, labels) -> MeasurementOutcome:
    prob = float(np.vdot(branch, branch).real)
    if prob > ZERO_PROB:
        post = PureState(branch / math.sqrt(prob), dims, labels)
    else:
        post = PureState(np.zeros_like(branch), dims, labels, valid=False)
    return MeasurementOutcome(idx // D, idx % D, prob, post)


def measure_pair(joint: PureState, pair: Sequence[str], basis: BellBasis, mode=EXHAUSTIVE):
    """Bell measurement on ``pair``.

    ``mode=EXHAUSTIVE`` returns all D^2 outcomes ordered by (m, n); a ``Sample``
    returns the single drawn outcome.
    """
    branches, dims, labels = project_pair(joint, pair, basis)
    D = basis.D
    if mode == EXHAUSTIVE:
        return [_outcome(i, b, D, dims, labels) for i, b in enumerate(branches)]
    if not isinstance(mode, Sample):
        raise TypeError(f"unknown measurement mode {mode!r}")
    probs = np.einsum("ij,ij->i", branches.conj(), branches).real
    idx = int(sample_index(probs, mode.generator()))
    return _outcome(idx, branches[idx], D, dims, labels)
