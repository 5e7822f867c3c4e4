"""Closed-form clone fidelities and output states, simulation-vs-formula comparison,
parameter sweeps and Monte Carlo success estimates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bell import project_pair, sample_index
from .protocol import ProtocolRun, joint_input, run_protocol, summarize_success
from .states import Completion, ProtocolConfig, Scheme, check_dimension, check_p, random_data_state
from .tensor import DensityMatrix, PureState


@dataclass(frozen=True)
class CloningFidelities:
    F_A: float
    F_B: float


def closed_form_fidelities(D: int, p: float) -> CloningFidelities:
    """Fidelities of the asymmetric Heisenberg cloner; Alice's clone weights ``p``."""
    if D < 2:
        raise ValueError(f"D must be >= 2, got {D}")
    p = check_p(p)
    norm = 1 + (D - 1) * (2 * p * p - 2 * p + 1)
    return CloningFidelities((1 + (D - 1) * p * p) / norm, (1 + (D - 1) * (1 - p) ** 2) / norm)


def reference_rho(D: int, p: float, theta: float, alphas, which: str) -> DensityMatrix:
    """Alice's (``which='A'``) or Bob's (``'B'``) output written out element by element.

    Diagonal: ``(w |alpha_j|^2 + b) / N``; off-diagonal:
    ``w alpha_j alpha_k^* exp{[(-1)^j + (-1)^(k+1)] i theta} / N`` with
    ``w = 2p + (D-2)p^2, b = (1-p)^2`` for A and
    ``w = D - 2(D-1)p + (D-2)p^2, b = p^2`` for B.
    """
    a = np.asarray(alphas, dtype=complex).ravel()
    if a.size != D:
        raise ValueError(f"expected {D} amplitudes, got {a.size}")
    norm = 1 + (D - 1) * (2 * p * p - 2 * p + 1)
    if which == "A":
        w, b = 2 * p + (D - 2) * p * p, (1 - p) ** 2
    elif which == "B":
        w, b = D - 2 * (D - 1) * p + (D - 2) * p * p, p * p
    else:
        raise ValueError(f"which must be 'A' or 'B', got {which!r}")
    rho = np.zeros((D, D), dtype=complex)
    for j in range(D):
        for k in range(D):
            if j == k:
                rho[j, j] = w * abs(a[j]) ** 2 + b
            else:
                phase = ((-1) ** j + (-1) ** (k + 1)) * theta
                rho[j, k] = w * a[j] * np.conj(a[k]) * np.exp(1j * phase)
    return DensityMatrix(rho / norm, (D,), (which,))


@dataclass(frozen=True)
class SweepRow:
    D: int
    p: float
    theta: float
    scheme: str
    F_A_sim: float
    F_B_sim: float
    F_A_closed: float
    F_B_closed: float
    success_prob: float
    max_abs_err: float


def compare_run(run: ProtocolRun) -> SweepRow:
    if not run.success:
        raise ValueError(f"outcome {run.outcome} failed; there is nothing to compare")
    cfg = run.config
    cf = closed_form_fidelities(cfg.D, cfg.p)
    err = max(abs(run.F_A - cf.F_A), abs(run.F_B - cf.F_B))
    return SweepRow(cfg.D, cfg.p, cfg.theta, cfg.scheme.value, run.F_A, run.F_B, cf.F_A, cf.F_B,
                    run.raw_probability, err)


def sweep_cell(cfg: ProtocolConfig, data_states: Sequence[PureState]) -> SweepRow:
    """One row summarising every successful branch over several data states.

    Simulated fidelities are averaged over branches; ``max_abs_err`` is the worst
    single-branch deviation from the closed forms. ``success_prob`` is the mean
    total success probability per data state.
    """
    rows, totals = [], []
    for data in data_states:
        runs = run_protocol(cfg, data)
        totals.append(summarize_success(runs).total_probability)
        rows.extend(compare_run(r) for r in runs if r.success)
    cf = closed_form_fidelities(cfg.D, cfg.p)
    return SweepRow(
        D=cfg.D,
        p=cfg.p,
        theta=cfg.theta,
        scheme=cfg.scheme.value,
        F_A_sim=float(np.mean([r.F_A_sim for r in rows])),
        F_B_sim=float(np.mean([r.F_B_sim for r in rows])),
        F_A_closed=cf.F_A,
        F_B_closed=cf.F_B,
        success_prob=float(np.mean(totals)),
        max_abs_err=max(r.max_abs_err for r in rows),
    )


def sweep(D_list: Iterable[int], p_grid: Iterable[float], theta_grid: Iterable[float],
          schemes: Iterable[Scheme] = tuple(Scheme), completion: Completion = Completion.LOCC_ONLY,
          trials: int = 1, seed: int = 0) -> list[SweepRow]:
    """Rows sorted by (D, p, theta, scheme); data states are drawn once per D from ``seed``."""
    rows = []
    rng = np.random.default_rng(seed)
    for D in sorted(set(D_list)):
        check_dimension(D)
        data_states = [random_data_state(D, rng) for _ in range(trials)]
        for p in p_grid:
            for theta in theta_grid:
                for scheme in schemes:
                    cfg = ProtocolConfig(D, p, theta, scheme, completion)
                    rows.append(sweep_cell(cfg, data_states))
    rows.sort(key=lambda r: (r.D, r.p, r.theta, r.scheme))
    return rows


def monte_carlo_success(cfg: ProtocolConfig, data: PureState, trials: int, seed: int) -> tuple[float, float]:
    """Success frequency over ``trials`` seeded Bell-measurement draws, with its standard error.

    The joint input is the same for every trial, so the Born distribution is
    computed once and the outcomes are drawn from it in bulk.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    joint, basis = joint_input(cfg, data)
    branches, _, _ = project_pair(joint, ("d", "P"), basis)
    probs = np.einsum("ij,ij->i", branches.conj(), branches).real
    idx = sample_index(probs, np.random.default_rng(seed), size=trials)
    if cfg.completion is Completion.NONLOCAL:
        ok = probs[idx] > 0
    else:
        ok = idx // cfg.D == 0
    f = float(np.mean(ok))
    return f, math.sqrt(f * (1 - f) / trials)
