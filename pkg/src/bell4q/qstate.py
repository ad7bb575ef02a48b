"""Dense complex linear algebra for systems of up to four qubits.

States and operators are stored as plain numpy arrays over the computational
basis, ordered lexicographically |00...0> ... |11...1> with party A as the
most significant bit.  Everything here is immutable after construction and
every operation is pure, so the module is safe to use from many threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

MAX_QUBITS = 4

NORM_ATOL = 1e-12
HERMITIAN_ATOL = 1e-12
PSD_ATOL = 1e-10
IMAG_ATOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


class ConsistencyError(ArithmeticError):
    """Raised when an internal sanity check fails (e.g. complex expectation)."""


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MeasurementDirection:
    """Unit 3-vector defining a spin observable n . sigma."""

    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        n2 = self.nx**2 + self.ny**2 + self.nz**2
        if not np.isfinite(n2) or abs(n2 - 1.0) > NORM_ATOL:
            raise ValidationError(f"direction must be unit length, |n|^2 = {n2!r}")

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "MeasurementDirection":
        x, y, z = (float(c) for c in v)
        return cls(x, y, z)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasurementDirection):
            return NotImplemented
        return (self.nx, self.ny, self.nz) == (other.nx, other.ny, other.nz)

    def __hash__(self):
        return hash((self.nx, self.ny, self.nz))


XHAT = MeasurementDirection(1.0, 0.0, 0.0)
YHAT = MeasurementDirection(0.0, 1.0, 0.0)
ZHAT = MeasurementDirection(0.0, 0.0, 1.0)

#: Slot marker for a party that performs no measurement (identity operator).
PartySetting = Union[MeasurementDirection, None]


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector of 1..4 qubits."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValidationError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        amps = _as_readonly(np.asarray(self.amplitudes).reshape(-1))
        if amps.size != 2**self.n_qubits:
            raise ValidationError(
                f"amplitude vector has length {amps.size}, expected {2**self.n_qubits}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValidationError(f"state not normalized: <psi|psi> = {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Iterable[complex]) -> "PureState":
        amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes)
        n = int(round(np.log2(amps.size)))
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def density(self) -> "DensityOperator":
        """Projector |psi><psi| as a DensityOperator."""
        return DensityOperator(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace operator on 1..4 qubits."""

    n_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValidationError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        mat = _as_readonly(np.asarray(self.matrix))
        d = 2**self.n_qubits
        if mat.shape != (d, d):
            raise ValidationError(f"matrix has shape {mat.shape}, expected {(d, d)}")
        if not np.all(np.isfinite(mat)):
            raise ValidationError("matrix entries must be finite")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_ATOL:
            raise ValidationError("matrix is not Hermitian")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > NORM_ATOL:
            raise ValidationError(f"trace must be 1, got {tr!r}")
        if float(np.linalg.eigvalsh(mat)[0]) < -PSD_ATOL:
            raise ValidationError("matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "DensityOperator":
        matrix = np.asarray(matrix)
        n = int(round(np.log2(matrix.shape[0])))
        return cls(n, matrix)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


State = Union[PureState, DensityOperator]


def pauli_observable(direction: MeasurementDirection | Sequence[float]) -> np.ndarray:
    """2x2 observable n . sigma for a unit direction n.

    Eigenvalues are exactly {+1, -1}; the operator is traceless and squares
    to the identity.
    """
    if not isinstance(direction, MeasurementDirection):
        direction = MeasurementDirection.from_vector(direction)
    return direction.nx * PAULI_X + direction.ny * PAULI_Y + direction.nz * PAULI_Z


def tensor_observable(slots: Sequence[PartySetting]) -> np.ndarray:
    """Kronecker product of per-party spin observables, in party order.

    Each slot is a MeasurementDirection or None; None inserts the 2x2
    identity for a party that does not measure.
    """
    if not 1 <= len(slots) <= MAX_QUBITS:
        raise ValidationError(f"expected 1..{MAX_QUBITS} party slots, got {len(slots)}")
    out = np.array([[1.0 + 0j]])
    for slot in slots:
        op = IDENTITY_2 if slot is None else pauli_observable(slot)
        out = np.kron(out, op)
    return out


def expectation(state: State, observable: np.ndarray) -> float:
    """<obs> on a pure state or density operator.

    The imaginary residue is checked against IMAG_ATOL rather than silently
    dropped, to catch non-Hermitian observables built by mistake.
    """
    observable = np.asarray(observable)
    if isinstance(state, PureState):
        if observable.shape != (state.dim, state.dim):
            raise ValidationError(
                f"observable shape {observable.shape} does not match state dimension {state.dim}"
            )
        value = complex(np.vdot(state.amplitudes, observable @ state.amplitudes))
    elif isinstance(state, DensityOperator):
        if observable.shape != (state.dim, state.dim):
            raise ValidationError(
                f"observable shape {observable.shape} does not match state dimension {state.dim}"
            )
        value = complex(np.trace(state.matrix @ observable))
    else:
        raise ValidationError(f"state must be PureState or DensityOperator, got {type(state)!r}")
    if abs(value.imag) >= IMAG_ATOL:
        raise ConsistencyError(f"expectation has imaginary residue {value.imag!r}")
    return value.real


def _validated_mask(mask: Iterable[int], n_qubits: int) -> tuple[int, ...]:
    mask = tuple(sorted(set(int(q) for q in mask)))
    if any(q < 0 or q >= n_qubits for q in mask):
        raise ValidationError(f"mask {mask} out of range for {n_qubits} qubits")
    if len(mask) == 0 or len(mask) == n_qubits:
        raise ValidationError("mask must be a non-empty proper subset of the qubits")
    return mask


def partial_transpose(rho: DensityOperator, mask: Iterable[int]) -> np.ndarray:
    """Transpose the indices of the masked qubits only.

    Returns a plain Hermitian matrix (generally not positive).  Applying the
    same mask twice gives back the original matrix.
    """
    qubits = _validated_mask(mask, rho.n_qubits)
    n = rho.n_qubits
    t = rho.matrix.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for q in qubits:
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return t.transpose(axes).reshape(rho.dim, rho.dim)


def negativity(rho: DensityOperator, mask: Iterable[int]) -> float:
    """Sum of |negative eigenvalues| of the partial transpose (0 for PPT states)."""
    eigs = np.linalg.eigvalsh(partial_transpose(rho, mask))
    return float(-eigs[eigs < 0].sum())


def permute_qubits(state: PureState, source: Sequence[int]) -> PureState:
    """Reorder qubits: position i of the new state holds old qubit source[i]."""
    src = tuple(int(s) for s in source)
    if sorted(src) != list(range(state.n_qubits)):
        raise ValidationError(f"source {src} is not a permutation of 0..{state.n_qubits - 1}")
    amps = state.amplitudes.reshape((2,) * state.n_qubits).transpose(src).reshape(-1)
    return PureState(state.n_qubits, amps)
