"""Command-line front end: ``run``, ``enumerate``, ``sweep`` and ``verify``.

stdout carries data (JSON or CSV), stderr carries diagnostics. Exit codes: 0 ok,
1 usage or input error, 2 a sampled run landed on a failure branch.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np

from .analysis import sweep
from .bell import Sample, measure_pair
from .protocol import ProtocolRun, joint_input, run_protocol
from .states import Completion, ProtocolConfig, Scheme, make_data_state, random_data_state
from .tensor import PureState
from .verify import run_suite

EXIT_OK, EXIT_USAGE, EXIT_FAILED_BRANCH = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def encode_complex(z: complex) -> dict[str, float]:
    return {"re": float(z.real), "im": float(z.imag)}


def decode_complex(d: dict[str, float]) -> complex:
    return complex(d["re"], d["im"])


def _encode_matrix(m: np.ndarray | None):
    return None if m is None else [[encode_complex(z) for z in row] for row in m]


def _decode_matrix(rows):
    return None if rows is None else np.array([[decode_complex(z) for z in row] for row in rows])


@dataclass
class RunRecord:
    """JSON document describing one sampled execution."""

    config: dict[str, Any]
    seed: int
    data: list[complex]
    outcome: dict[str, int]
    success: bool
    correction: str
    F_A: float | None
    F_B: float | None
    probabilities: list[dict[str, Any]]
    rho_A: np.ndarray | None = None
    rho_B: np.ndarray | None = None

    @classmethod
    def from_run(cls, run: ProtocolRun, data: PureState, probabilities: list[dict[str, Any]]) -> "RunRecord":
        cfg = run.config
        return cls(
            config={"D": cfg.D, "p": cfg.p, "theta": cfg.theta, "scheme": cfg.scheme.value,
                    "completion": cfg.completion.value},
            seed=run.seed,
            data=[complex(z) for z in data.amplitudes],
            outcome={"m": run.outcome[0], "n": run.outcome[1]},
            success=run.success,
            correction=run.correction,
            F_A=run.F_A,
            F_B=run.F_B,
            probabilities=probabilities,
            rho_A=None if run.rho_A is None else np.array(run.rho_A.matrix),
            rho_B=None if run.rho_B is None else np.array(run.rho_B.matrix),
        )

    def to_json(self) -> str:
        doc = asdict(self)
        doc["data"] = [encode_complex(z) for z in self.data]
        doc["rho_A"] = _encode_matrix(self.rho_A)
        doc["rho_B"] = _encode_matrix(self.rho_B)
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        doc = json.loads(text)
        doc["data"] = [decode_complex(z) for z in doc["data"]]
        doc["rho_A"] = _decode_matrix(doc["rho_A"])
        doc["rho_B"] = _decode_matrix(doc["rho_B"])
        return cls(**doc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunRecord):
            return NotImplemented
        a, b = asdict(self), asdict(other)
        for key in ("rho_A", "rho_B"):
            x, y = a.pop(key), b.pop(key)
            if (x is None) != (y is None) or (x is not None and not np.array_equal(x, y)):
                return False
        return a == b


def parse_amplitudes(text: str) -> list[complex]:
    try:
        return [complex(tok.strip().replace("i", "j")) for tok in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed amplitudes {text!r}; expected e.g. 1,0 or 0.6,0.8j") from None


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                return []
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"malformed grid {text!r}") from None


def _config(args: argparse.Namespace) -> ProtocolConfig:
    try:
        return ProtocolConfig(args.d, args.p, args.theta, Scheme(args.scheme),
                              Completion(args.completion))
    except ValueError as e:
        raise UsageError(str(e)) from None


def _data(args: argparse.Namespace, D: int, rng: np.random.Generator) -> PureState:
    if args.data == "random":
        return random_data_state(D, rng)
    try:
        return make_data_state(D, parse_amplitudes(args.data), normalize=True)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    data_ss, meas_ss = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(data_ss), np.random.default_rng(meas_ss)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _config(args)
    data_rng, meas_rng = _streams(args.seed)
    data = _data(args, cfg.D, data_rng)
    joint, basis = joint_input(cfg, data)
    table = [{"m": o.m, "n": o.n, "probability": o.probability}
             for o in measure_pair(joint, ("d", "P"), basis)]
    run = run_protocol(cfg, data, Sample(seed=args.seed, rng=meas_rng))
    sys.stdout.write(RunRecord.from_run(run, data, table).to_json() + "\n")
    return EXIT_OK if run.success else EXIT_FAILED_BRANCH


def _blank(x: float | None) -> str:
    return "" if x is None else fmt(x)


def cmd_enumerate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    data = _data(args, cfg.D, _streams(args.seed)[0])
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["m", "n", "probability", "success", "F_A", "F_B"])
    for r in run_protocol(cfg, data):
        w.writerow([r.outcome[0], r.outcome[1], fmt(r.raw_probability), str(r.success).lower(),
                    _blank(r.F_A), _blank(r.F_B)])
    return EXIT_OK


SWEEP_COLUMNS = ["D", "p", "theta", "scheme", "F_A_sim", "F_B_sim", "F_A_closed", "F_B_closed",
                 "success_prob", "max_abs_err"]


def cmd_sweep(args: argparse.Namespace) -> int:
    p_grid = parse_grid(args.p_grid)
    theta_grid = parse_grid(args.theta_grid)
    if not p_grid or not theta_grid:
        raise UsageError("empty parameter grid")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    schemes = list(Scheme) if args.scheme == "all" else [Scheme(args.scheme)]
    try:
        d_list = [int(x) for x in args.d.split(",")]
        rows = sweep(d_list, p_grid, theta_grid, schemes, Completion(args.completion), args.trials, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in (getattr(row, c) for c in SWEEP_COLUMNS)])
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        d_list = [int(x) for x in args.d_list.split(",")]
        results = run_suite(d_list, args.tolerance, args.seed, args.data_states)
    except ValueError as e:
        raise UsageError(str(e)) from None
    width = max(len(r.name) for r in results)
    for r in results:
        op = "<" if r.strict else "<="
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  err={r.error:.3e}  required {op} {r.tolerance:.6g}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_USAGE


def _protocol_flags(p: argparse.ArgumentParser, scheme_choices: Sequence[str]) -> None:
    p.add_argument("--scheme", choices=scheme_choices, default="processor")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--completion", choices=[c.value for c in Completion], default="locc")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asymproc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    schemes = [s.value for s in Scheme]

    p = sub.add_parser("run", help="one sampled execution, printed as JSON")
    _protocol_flags(p, schemes)
    p.add_argument("--data", default="random", help="'random' or comma-separated complex amplitudes")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("enumerate", help="all D^2 measurement outcomes as CSV")
    _protocol_flags(p, schemes)
    p.add_argument("--data", default="random")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sweep", help="fidelity sweep over p (and theta) as CSV")
    p.add_argument("--scheme", choices=schemes + ["all"], default="processor")
    p.add_argument("--d", default="2", help="even dimension or comma-separated list")
    p.add_argument("--completion", choices=[c.value for c in Completion], default="locc")
    p.add_argument("--p-grid", default="0:1:0.1")
    p.add_argument("--theta-grid", default="0")
    p.add_argument("--trials", type=int, default=1, help="random data states per cell")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--d-list", default="2,4,6")
    p.add_argument("--tolerance", type=float, default=None, help="override every numeric bound")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--data-states", type=int, default=20)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
