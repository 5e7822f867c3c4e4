"""Acceptance criteria. Each test prints a single PASS/FAIL line; run with ``-s`` to see them."""
import math
import time
from functools import lru_cache

import numpy as np
import pytest

from asymproc import qubit_fixtures as qf
from asymproc.analysis import closed_form_fidelities, monte_carlo_success, reference_rho
from asymproc.bell import build_bell_basis, measure_pair
from asymproc.protocol import joint_input, make_completion_w, make_correction_vn, run_protocol, summarize_success
from asymproc.states import (
    Completion,
    ProtocolConfig,
    Scheme,
    make_data_state,
    make_eta,
    make_phi_j,
    make_program_state,
    make_xi,
    phi_gram,
    random_data_state,
)
from asymproc.tensor import inner_product

P_GRID = tuple(np.round(np.linspace(0.0, 1.0, 11), 12))
THETA_GRID = (0.0, 0.7, math.pi, 5.5)
N_DATA = 20


def report(number: int, label: str, error: float, tol: float, extra: str = "") -> bool:
    ok = bool(error <= tol)
    tail = f"  {extra}" if extra else ""
    print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number:>2}  {label}  err={error:.3e}  tol={tol:.0e}{tail}")
    return ok


def qubit_literal_fidelities(p: float) -> tuple[float, float]:
    den = 2 * (1 - p + p * p)
    return (1 + p * p) / den, (2 - 2 * p + p * p) / den


@lru_cache(maxsize=None)
def grid(D: int) -> dict:
    """Run the exhaustive grid once per D and collect every error the criteria need."""
    rng = np.random.default_rng(1000 + D)
    data_states = [random_data_state(D, rng) for _ in range(N_DATA)]
    err = dict(fidelity=0.0, partner=0.0, scheme=0.0, oracle=0.0, runs=0)
    start = time.perf_counter()
    for p in P_GRID:
        if D == 2:
            fa, fb = qubit_literal_fidelities(p)
        else:
            cf = closed_form_fidelities(D, p)
            fa, fb = cf.F_A, cf.F_B
        for theta in THETA_GRID:
            for data in data_states:
                pr = run_protocol(ProtocolConfig(D, p, theta, Scheme.PROCESSOR), data)
                lg = run_protocol(ProtocolConfig(D, p, theta, Scheme.LOCAL_GATE), data)
                ref_a = reference_rho(D, p, theta, data.amplitudes, "A").matrix
                ref_b = reference_rho(D, p, theta, data.amplitudes, "B").matrix
                for a, b in zip(pr, lg):
                    if not a.success:
                        continue
                    err["runs"] += 2
                    for r in (a, b):
                        err["fidelity"] = max(err["fidelity"], abs(r.F_A - fa), abs(r.F_B - fb))
                        err["oracle"] = max(err["oracle"], np.abs(r.rho_A.matrix - ref_a).max(),
                                            np.abs(r.rho_B.matrix - ref_b).max())
                    err["scheme"] = max(err["scheme"], np.abs(a.rho_A.matrix - b.rho_A.matrix).max(),
                                        np.abs(a.rho_B.matrix - b.rho_B.matrix).max())
        # the p <-> 1-p partner: Bob's closed form at p is Alice's at 1-p
        swapped = closed_form_fidelities(D, 1 - p)
        err["partner"] = max(err["partner"], abs(fb - swapped.F_A), abs(fa - swapped.F_B))
    err["seconds"] = time.perf_counter() - start
    return err


def test_criterion_01_qubit_fidelities():
    g = grid(2)
    err = max(g["fidelity"], g["partner"])
    ok = report(1, "qubit fidelities over p, theta, 20 states, both schemes", err, 1e-10,
                f"runs={g['runs']}  time={g['seconds']:.2f}s (budget 5s)")
    assert ok and g["seconds"] < 5


def test_criterion_02_symmetric_point():
    data = random_data_state(2, np.random.default_rng(5))
    errs = []
    for scheme in Scheme:
        for r in run_protocol(ProtocolConfig(2, 0.5, 0.7, scheme), data):
            if r.success:
                errs += [abs(r.F_A - 5 / 6), abs(r.F_B - 5 / 6)]
    assert report(2, "D=2 p=1/2 gives F_A = F_B = 5/6", max(errs), 1e-10)


@pytest.mark.slow
@pytest.mark.parametrize("D", [4, 6])
def test_criterion_03_qudit_fidelities(D):
    g = grid(D)
    err = max(g["fidelity"], g["partner"])
    ok = report(3, f"D={D} fidelities and p<->1-p partner", err, 1e-10,
                f"runs={g['runs']}  time={g['seconds']:.2f}s (budget 60s)")
    assert ok and g["seconds"] < 60


def test_criterion_04_success_probability():
    errs = []
    for D in (2, 4, 6):
        data = random_data_state(D, np.random.default_rng(D))
        for scheme in Scheme:
            cfg = ProtocolConfig(D, 0.3, 0.7, scheme)
            errs.append(abs(summarize_success(run_protocol(cfg, data)).total_probability - 1 / D))
            cfg = ProtocolConfig(D, 0.3, 0.7, scheme, Completion.NONLOCAL)
            errs.append(abs(summarize_success(run_protocol(cfg, data)).total_probability - 1))
    assert report(4, "success probability 1/D (LOCC) and 1 (nonlocal), D in {2,4,6}", max(errs), 1e-12)


def test_criterion_05_monte_carlo():
    start = time.perf_counter()
    lines = []
    z = 0.0
    for D, target in ((2, 0.5), (4, 0.25)):
        data = random_data_state(D, np.random.default_rng(50 + D))
        f, se = monte_carlo_success(ProtocolConfig(D, 0.4, 0.7), data, 100_000, seed=20240 + D)
        z = max(z, abs(f - target) / se)
        lines.append(f"D={D} freq={f:.5f}")
    elapsed = time.perf_counter() - start
    ok = report(5, "Monte Carlo success frequency within 4 standard errors", z, 4,
                f"{' '.join(lines)}  time={elapsed:.2f}s (budget 30s)")
    assert ok and elapsed < 30


def test_criterion_06_scheme_equivalence():
    assert report(6, "processor and local-gate rho_A, rho_B agree on the qubit grid", grid(2)["scheme"], 1e-10)


def test_criterion_07_oracle_equivalence():
    assert report(7, "simulated rho_A, rho_B equal the closed-form matrices", grid(2)["oracle"], 1e-10)


def test_criterion_08_qubit_fixtures():
    errs = []
    a = np.array([0.6, 0.8j])
    data = make_data_state(2, a)
    for p in (0.0, 0.3, 0.5, 1.0):
        errs += [np.abs(make_phi_j(2, p, 0).amplitudes - qf.phi0(p)).max(),
                 np.abs(make_phi_j(2, p, 1).amplitudes - qf.phi1(p)).max(),
                 np.abs(make_xi(2, p).amplitudes - qf.xi(p)).max()]
        for theta in (0.0, 0.9, 5.5):
            cfg = ProtocolConfig(2, p, theta)
            errs.append(np.abs(make_program_state(cfg).amplitudes - qf.program(p, theta)).max())
            errs.append(np.abs(make_eta(cfg, data).amplitudes - qf.eta(a, p, theta)).max())
            tb = qf.tilted_bell(theta)
            basis = build_bell_basis(2, theta)
            for name, (m, n) in qf.BELL_INDEX.items():
                errs.append(np.abs(basis.state(m, n).amplitudes - tb[name]).max())
            for scheme, expected in ((Scheme.PROCESSOR, qf.branches(a, p, theta)),
                                     (Scheme.LOCAL_GATE, qf.branches_local_gate(a, p, theta))):
                joint, basis = joint_input(ProtocolConfig(2, p, theta, scheme), data)
                outs = {(o.m, o.n): o for o in measure_pair(joint, ("d", "P"), basis)}
                for name, branch in expected.items():
                    o = outs[qf.BELL_INDEX[name]]
                    errs.append(np.abs(math.sqrt(o.probability) * o.post_state.amplitudes - branch).max())
                for r in run_protocol(ProtocolConfig(2, p, theta, scheme), data):
                    if r.success:
                        errs.append(np.abs(r.rho_A.matrix - qf.rho(a, p, theta, "A")).max())
                        errs.append(np.abs(r.rho_B.matrix - qf.rho(a, p, theta, "B")).max())
    std = build_bell_basis(2)
    for name, (m, n) in qf.BELL_INDEX.items():
        errs.append(np.abs(std.state(m, n).amplitudes - qf.BELL[name]).max())
    errs.append(np.abs(make_correction_vn(2, 1).matrix - qf.V).max())
    assert report(8, "D=2 generalized path equals hand-coded qubit fixtures", max(errs), 1e-12,
                  f"comparisons={len(errs)}")


def test_criterion_09_completion():
    overlap, unitarity = 0.0, 0.0
    for D in (2, 4, 6):
        data = random_data_state(D, np.random.default_rng(90 + D))
        for scheme in Scheme:
            for p, theta in ((0.3, 0.7), (0.8, 5.5)):
                cfg = ProtocolConfig(D, p, theta, scheme, Completion.NONLOCAL)
                eta = make_eta(cfg, data)
                for r in run_protocol(cfg, data):
                    m, n = r.outcome
                    if m == 0:
                        continue
                    w = make_completion_w(cfg, m, n).matrix
                    unitarity = max(unitarity, np.abs(w.conj().T @ w - np.eye(D ** 3)).max())
                    overlap = max(overlap, abs(abs(inner_product(r.final_state, eta)) - 1))
    assert report(9, "W recovers eta for every m != 0 and is unitary", max(overlap, unitarity), 1e-10,
                  f"overlap_err={overlap:.1e} unitarity_err={unitarity:.1e}")


def test_criterion_10_structure():
    bell_err, gram_err = 0.0, 0.0
    for D in (2, 4, 6):
        for theta in (None, 0.7, math.pi, 5.5):
            rows = build_bell_basis(D, theta).matrix
            bell_err = max(bell_err, np.abs(rows.conj() @ rows.T - np.eye(D * D)).max(),
                           np.abs(rows.T @ rows.conj() - np.eye(D * D)).max())
        for p in P_GRID:
            gram_err = max(gram_err, np.abs(phi_gram(D, p) - np.eye(D)).max())
    # the two parts carry different tolerances, so the line reports the Gram error scaled to 1e-12
    worst = max(bell_err * 1e-2, gram_err)
    assert report(10, "Bell bases orthonormal and complete, phi Gram = I, D in {2,4,6}", worst, 1e-12,
                  f"bell_err={bell_err:.1e} (tol 1e-10) gram_err={gram_err:.1e} (tol 1e-12)")
