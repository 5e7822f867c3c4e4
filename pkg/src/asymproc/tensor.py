"""Dense state vectors, operators and density matrices on labelled tensor products.

Basis ordering is most-significant-first: the amplitude of ``|k_0 k_1 ... k_{s-1}>``
lives at flat index ``sum_j k_j * prod_{l>j} dims[l]``, which is exactly numpy's
C-order ``reshape(dims)``. Every module in the package relies on this.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ATOL = 1e-10
ORACLE_ATOL = 1e-12
PSD_FLOOR = -1e-10


def _close(a: np.ndarray, b, atol: float = ATOL) -> bool:
    return bool(np.max(np.abs(a - b)) <= atol)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _check_layout(size: int, dims: tuple[int, ...], labels: tuple[str, ...]) -> None:
    if len(labels) != len(dims):
        raise ValueError(f"{len(labels)} labels for {len(dims)} subsystems")
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate subsystem labels: {labels}")
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    if size != math.prod(dims):
        raise ValueError(f"size {size} does not match dims {dims}")


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over labelled subsystems.

    ``valid=False`` marks the zero vector returned for measurement outcomes that
    cannot occur; the norm check is skipped only in that case.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...]
    valid: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", _frozen(np.ravel(self.amplitudes)))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "labels", tuple(self.labels))
        _check_layout(self.amplitudes.size, self.dims, self.labels)
        if self.valid:
            norm = np.linalg.norm(self.amplitudes)
            if abs(norm - 1.0) > ATOL:
                raise ValueError(f"state is not normalized (norm={norm!r})")

    @classmethod
    def from_amplitudes(cls, amplitudes, dims: Sequence[int], labels: Sequence[str],
                        normalize: bool = False) -> "PureState":
        a = np.asarray(amplitudes, dtype=complex).ravel()
        if normalize:
            norm = np.linalg.norm(a)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            a = a / norm
        return cls(a, tuple(dims), tuple(labels))

    @classmethod
    def basis(cls, index: Sequence[int], dims: Sequence[int], labels: Sequence[str]) -> "PureState":
        a = np.zeros(int(np.prod(dims)), dtype=complex)
        a[np.ravel_multi_index(tuple(index), tuple(dims))] = 1.0
        return cls(a, tuple(dims), tuple(labels))

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown subsystem label {label!r}; have {self.labels}") from None

    def relabel(self, labels: Sequence[str]) -> "PureState":
        return PureState(self.amplitudes, self.dims, tuple(labels), self.valid)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims, self.labels)


@dataclass(frozen=True)
class Operator:
    """Square matrix acting on an ordered list of subsystem dimensions.

    When built from ``factors`` the operator is a tensor product of
    single-subsystem matrices, one per entry of ``dims``; ``is_local`` then
    records that structure rather than inferring it from the matrix.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    factors: tuple[np.ndarray, ...] | None = None
    is_unitary: bool = field(init=False)

    def __post_init__(self) -> None:
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        side = math.prod(self.dims)
        if m.ndim != 2 or m.shape != (side, side):
            raise ValueError(f"matrix shape {m.shape} does not match dims {self.dims}")
        if self.factors is not None:
            fs = tuple(_frozen(f) for f in self.factors)
            if tuple(f.shape[0] for f in fs) != self.dims:
                raise ValueError("factor dimensions do not match dims")
            object.__setattr__(self, "factors", fs)
        gram = m.conj().T @ m
        object.__setattr__(self, "is_unitary", _close(gram, np.eye(side)))

    @classmethod
    def product(cls, factors: Sequence[np.ndarray]) -> "Operator":
        mat = np.ones((1, 1), dtype=complex)
        for f in factors:
            mat = np.kron(mat, f)
        return cls(mat, tuple(np.shape(f)[0] for f in factors), tuple(factors))

    @property
    def is_local(self) -> bool:
        return self.factors is not None

    def dagger(self) -> "Operator":
        fs = None if self.factors is None else tuple(f.conj().T for f in self.factors)
        return Operator(self.matrix.conj().T, self.dims, fs)

    def __matmul__(self, other: "Operator") -> "Operator":
        if self.dims != other.dims:
            raise ValueError("operator dimension mismatch")
        fs = None
        if self.factors is not None and other.factors is not None:
            fs = tuple(a @ b for a, b in zip(self.factors, other.factors))
        return Operator(self.matrix @ other.matrix, self.dims, fs)


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "labels", tuple(self.labels))
        _check_layout(m.shape[0], self.dims, self.labels)
        if m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if not _close(m, m.conj().T):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m).min()
        if lo < PSD_FLOOR:
            raise ValueError(f"density matrix has eigenvalue {lo!r} below {PSD_FLOOR}")

    @property
    def tensor(self) -> np.ndarray:
        return self.matrix.reshape(self.dims + self.dims)


def tensor_product(a: PureState, b: PureState) -> PureState:
    return PureState(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims, a.labels + b.labels)


def _axes(state: PureState | DensityMatrix, labels: Sequence[str]) -> list[int]:
    out = []
    for lab in labels:
        try:
            out.append(state.labels.index(lab))
        except ValueError:
            raise KeyError(f"unknown subsystem label {lab!r}; have {state.labels}") from None
    if len(set(out)) != len(out):
        raise ValueError(f"repeated target labels: {list(labels)}")
    return out


def apply_to_subsystems(state: PureState, op: Operator, targets: Sequence[str]) -> PureState:
    """Return ``(I x ... x op x ... x I)|state>`` with ``op`` on ``targets`` in the given order."""
    axes = _axes(state, targets)
    tdims = tuple(state.dims[a] for a in axes)
    if tdims != op.dims:
        raise ValueError(f"operator dims {op.dims} do not match target dims {tdims}")
    k = len(axes)
    op_t = op.matrix.reshape(op.dims + op.dims)
    out = np.tensordot(op_t, state.tensor, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the operator's output legs first
    out = np.moveaxis(out, list(range(k)), axes)
    return PureState(out.ravel(), state.dims, state.labels, state.valid)


def partial_trace(state: PureState | DensityMatrix, keep: Sequence[str]) -> DensityMatrix:
    """Reduced density matrix on ``keep``, ordered as given."""
    keep = list(keep)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    kept = _axes(state, keep)
    rest = [i for i in range(len(state.dims)) if i not in kept]
    dk = int(np.prod([state.dims[i] for i in kept]))
    dr = int(np.prod([state.dims[i] for i in rest]))
    kdims = tuple(state.dims[i] for i in kept)
    if isinstance(state, PureState):
        m = np.transpose(state.tensor, kept + rest).reshape(dk, dr)
        rho = m @ m.conj().T
    else:
        n = len(state.dims)
        perm = kept + rest + [n + i for i in kept] + [n + i for i in rest]
        t = np.transpose(state.tensor, perm).reshape(dk, dr, dk, dr)
        rho = np.trace(t, axis1=1, axis2=3)
    return DensityMatrix(rho, kdims, tuple(keep))


def inner_product(a: PureState, b: PureState) -> complex:
    if a.dims != b.dims:
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity_pure(rho: DensityMatrix, target: PureState) -> float:
    """``<target|rho|target>``, clamped to [0, 1] after a range check."""
    if rho.dims != target.dims:
        raise ValueError(f"dimension mismatch: {rho.dims} vs {target.dims}")
    v = target.amplitudes
    f = complex(np.vdot(v, rho.matrix @ v))
    if abs(f.imag) > ATOL or not (-ATOL <= f.real <= 1 + ATOL):
        raise ArithmeticError(f"fidelity {f!r} outside [0, 1]")
    return min(max(f.real, 0.0), 1.0)
