"""Run the processor and local-gate schemes end to end.

Party layout is fixed as (d, P, A, B, C): Peter holds d and P, Alice A, Bob B,
Charlie C. The Bell measurement acts on (d, P); classical communication is the
outcome (m, n) handed to the correction stage.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bell import EXHAUSTIVE, BellBasis, MeasurementOutcome, Sample, build_bell_basis, measure_pair
from .states import (
    ABC,
    TWO_PI,
    Completion,
    ProtocolConfig,
    Scheme,
    make_eta,
    make_program_state,
    make_target,
    make_xi,
    phi_family,
    phi_is_orthonormal,
)
from .tensor import (
    DensityMatrix,
    Operator,
    PureState,
    apply_to_subsystems,
    fidelity_pure,
    inner_product,
    partial_trace,
    tensor_product,
)


@lru_cache(maxsize=256)
def make_correction_vn(D: int, n: int) -> Operator:
    """Local phase correction ``V_n^A x V_n^B x V_n^C``, stored as its three factors."""
    if not 0 <= n < D:
        raise ValueError(f"n={n} out of range for D={D}")
    j = np.arange(D)
    ab = np.diag(np.exp(1j * TWO_PI * j * n / D))
    c = np.diag(np.exp(-1j * TWO_PI * j * n / D))
    return Operator.product([ab, ab, c])


def completion_phases(cfg: ProtocolConfig, m: int, n: int) -> np.ndarray:
    """Phase picked up by ``|phi_j>`` under ``W_{m,n}`` as it is sent to ``|phi_{j-m}>``.

    The branch left by outcome (m, n) carries ``exp(-2 pi i (j-m) n / D)`` on
    ``|phi_j>`` in both schemes. The processor branch additionally carries
    ``exp[(-1)^j i theta]`` where the target needs ``exp[(-1)^(j-m) i theta]``; the
    local-gate branch already has the target's theta phase.
    """
    D = cfg.D
    j = np.arange(D)
    ph = np.exp(1j * TWO_PI * (j - m) * n / D)
    if cfg.scheme is Scheme.PROCESSOR:
        par = lambda x: np.where(x % 2 == 0, 1.0, -1.0)  # noqa: E731
        ph = ph * np.exp(1j * (par(j - m) - par(j)) * cfg.theta)
    return ph


@lru_cache(maxsize=1024)
def make_completion_w(cfg: ProtocolConfig, m: int, n: int) -> Operator:
    """Nonlocal unitary on (A, B, C) rescuing outcome (m, n) with m != 0.

    Acts as ``|phi_j> -> c_j |phi_{j-m mod D}>`` on span{phi_j} and as the identity
    on its orthogonal complement.
    """
    D = cfg.D
    if not 0 <= n < D or not 0 <= m < D:
        raise ValueError(f"(m, n) = ({m}, {n}) out of range for D={D}")
    if m == 0:
        raise ValueError("m = 0 outcomes are corrected locally; use make_correction_vn")
    if not phi_is_orthonormal(D, cfg.p):
        raise ArithmeticError("phi family is not orthonormal; completion is undefined")
    basis = np.stack([f.amplitudes for f in phi_family(D, cfg.p)])
    c = completion_phases(cfg, m, n)
    src = np.arange(D)
    dst = (src - m) % D
    # sum_j c_j |phi_{j-m}><phi_j|  +  projector onto the complement
    w = (basis[dst].T * c) @ basis.conj() + np.eye(D ** 3) - basis.T @ basis.conj()
    op = Operator(w, (D, D, D))
    if not op.is_unitary:
        raise ArithmeticError(f"completion W_({m},{n}) is not unitary")
    return op


@dataclass(frozen=True)
class ProtocolRun:
    config: ProtocolConfig
    seed: int | None
    outcome: tuple[int, int]
    raw_probability: float
    success: bool
    correction: str
    post_state: PureState
    final_state: PureState | None = None
    rho_A: DensityMatrix | None = None
    rho_B: DensityMatrix | None = None
    F_A: float | None = None
    F_B: float | None = None
    eta_overlap: float | None = None


def joint_input(cfg: ProtocolConfig, data: PureState) -> tuple[PureState, BellBasis]:
    """Input state over (d, P, A, B, C) and the measurement basis for the scheme."""
    if data.dims != (cfg.D,):
        raise ValueError(f"data dims {data.dims} do not match D={cfg.D}")
    data = data.relabel(("d",))
    if cfg.scheme is Scheme.PROCESSOR:
        return tensor_product(data, make_program_state(cfg)), build_bell_basis(cfg.D)
    return tensor_product(data, make_xi(cfg.D, cfg.p)), build_bell_basis(cfg.D, cfg.theta)


def _finish(cfg: ProtocolConfig, data: PureState, out: MeasurementOutcome, seed: int | None,
            eta: PureState, target: PureState) -> ProtocolRun:
    m, n = out.m, out.n
    common = dict(config=cfg, seed=seed, outcome=(m, n), raw_probability=out.probability,
                  post_state=out.post_state)
    if not out.post_state.valid:
        return ProtocolRun(success=False, correction="none", **common)
    if m == 0:
        op, label = make_correction_vn(cfg.D, n), f"V_{n}"
    elif cfg.completion is Completion.NONLOCAL:
        op, label = make_completion_w(cfg, m, n), f"W_{m},{n}"
    else:
        return ProtocolRun(success=False, correction="none", **common)
    final = apply_to_subsystems(out.post_state, op, list(ABC))
    rho_a = partial_trace(final, ["A"])
    rho_b = partial_trace(final, ["B"])
    target = target.relabel(("A",))
    return ProtocolRun(
        success=True,
        correction=label,
        final_state=final,
        rho_A=rho_a,
        rho_B=rho_b,
        F_A=fidelity_pure(rho_a, target),
        F_B=fidelity_pure(rho_b, target.relabel(("B",))),
        eta_overlap=abs(inner_product(final, eta)),
        **common,
    )


def run_protocol(cfg: ProtocolConfig, data: PureState, mode=EXHAUSTIVE):
    """Execute one scheme.

    Exhaustive mode returns one ProtocolRun per outcome, ordered by (m, n). A
    ``Sample`` mode returns the single sampled run, recording ``mode.seed``.
    """
    joint, basis = joint_input(cfg, data)
    eta = make_eta(cfg, data)
    target = make_target(cfg, data)
    if mode == EXHAUSTIVE:
        outs = measure_pair(joint, ("d", "P"), basis, EXHAUSTIVE)
        return [_finish(cfg, data, o, None, eta, target) for o in outs]
    if isinstance(mode, int) and not isinstance(mode, bool):
        mode = Sample(seed=mode)
    out = measure_pair(joint, ("d", "P"), basis, mode)
    return _finish(cfg, data, out, mode.seed, eta, target)


@dataclass(frozen=True)
class SuccessSummary:
    total_probability: float
    per_outcome: dict[tuple[int, int], tuple[float, bool]] = field(default_factory=dict)


def summarize_success(runs: list[ProtocolRun]) -> SuccessSummary:
    table = {r.outcome: (r.raw_probability, r.success) for r in runs}
    total = float(sum(r.raw_probability for r in runs if r.success))
    return SuccessSummary(total, table)


def best_local_phase_overlap(run: ProtocolRun, data: PureState) -> float:
    """Largest ``|<eta|V_k|post>|`` over the local phase corrections V_0..V_{D-1}."""
    eta = make_eta(run.config, data)
    return max(
        abs(inner_product(eta, apply_to_subsystems(run.post_state, make_correction_vn(run.config.D, k), list(ABC))))
        for k in range(run.config.D)
    )
