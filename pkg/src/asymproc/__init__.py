"""Simulator for asymmetric two-output probabilistic quantum processors on qubits and quDits."""
from .analysis import CloningFidelities, SweepRow, closed_form_fidelities, compare_run, monte_carlo_success, reference_rho, sweep
from .bell import EXHAUSTIVE, BellBasis, MeasurementOutcome, Sample, build_bell_basis, measure_pair
from .protocol import ProtocolRun, SuccessSummary, make_completion_w, make_correction_vn, run_protocol, summarize_success
from .states import (
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
    random_data_state,
)
from .tensor import DensityMatrix, Operator, PureState, apply_to_subsystems, fidelity_pure, inner_product, partial_trace, tensor_product

__version__ = "0.1.0"
