"""Teleportation-resource analysis of the noisy four-qubit channel state.

Covers the generalized singlet fraction of the channel state (closed form
and numeric maximization), the induced two-qubit depolarizing channel and
its output entanglement/nonlocality, the four critical visibilities, and
the two-qubit Werner baseline.

The channel model: teleporting through the channel state at visibility q
(with resource angles pi/4, pi/4) acts on a two-qubit input as the
depolarizing map rho -> q |psi><psi| + (1-q)/4 I.  This is the unique
channel consistent with linearity, since the pure resource teleports
faithfully and the white-noise fraction outputs the maximally mixed state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .inequalities import builtin
from .optimize import OptimizationConfig, max_violation, nelder_mead
from .qstate import (
    DensityOperator,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PureState,
    ValidationError,
    expectation,
)
from .states import ChannelStateParams, bell_pair, upsilon, werner, xi_channel

CLASSICAL_FRACTION = 0.5  # two-qubit teleportation is classical at or below this overlap
Q_CRIT_CHANNEL = 7.0 / 15.0
Q_CRIT_BELL = 0.5


@dataclass(frozen=True)
class CriticalVisibilities:
    """The four visibility thresholds of the channel-state analysis.

    q_channel: above this the channel state beats classical two-qubit teleportation
    q_bell:    above this the channel state violates the four-qubit inequality
    q1:        above this the teleported output is entangled (epsilon-dependent)
    q2:        above this the teleported output violates CHSH (epsilon-dependent)
    """

    q_channel: float
    q_bell: float
    q1: float
    q2: float


class SingletFraction(NamedTuple):
    value: float
    theta12: float
    phi12: float


class WernerBaseline(NamedTuple):
    fidelity: float
    chsh_max: float


class BellVisibility(NamedTuple):
    value: float
    violation_possible: bool


def input_state(epsilon: float) -> PureState:
    """Two-qubit Schmidt-form input cos(eps)|00> + sin(eps)|11>, eps in [0, pi/2]."""
    if not 0.0 <= epsilon <= np.pi / 2:
        raise ValidationError(f"epsilon must lie in [0, pi/2], got {epsilon!r}")
    amps = np.zeros(4, dtype=complex)
    amps[0] = np.cos(epsilon)
    amps[3] = np.sin(epsilon)
    return PureState(2, amps)


def singlet_fraction_closed(q: float) -> float:
    """Maximal overlap of the channel state with the resource family: (1 + 15q)/16."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"visibility q must lie in [0, 1], got {q!r}")
    return (1.0 + 15.0 * q) / 16.0


def singlet_fraction_numeric(
    params: ChannelStateParams, config: OptimizationConfig | None = None
) -> SingletFraction:
    """Maximize the resource-family overlap of the channel state numerically.

    Returns the maximal overlap and the angles attaining it; the angles agree
    with (alpha, beta) up to the family's (pi, pi) sign periodicity.
    """
    config = config or OptimizationConfig(restarts=8)
    rho = xi_channel(params).matrix

    def objective(x: np.ndarray) -> float:
        amps = upsilon(x[0], x[1]).amplitudes
        return -float(np.vdot(amps, rho @ amps).real)

    rng = np.random.default_rng(config.rng_seed)
    best_x, best_f = None, np.inf
    seeds = [np.array([params.alpha, params.beta])]
    seeds += [rng.uniform(-np.pi, np.pi, 2) for _ in range(config.restarts)]
    for x0 in seeds:
        x, fv, _ = nelder_mead(
            f=objective, x0=x0, step=0.4,
            fatol=max(config.tolerance * 1e-3, 1e-14), xatol=1e-10,
            max_iter=config.max_iterations,
        )
        if fv < best_f:
            best_x, best_f = x, fv
    return SingletFraction(-best_f, float(best_x[0]), float(best_x[1]))


def output_state(q: float, psi_in: PureState) -> DensityOperator:
    """Teleported output: q |psi_in><psi_in| + (1-q)/4 I on two qubits."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"visibility q must lie in [0, 1], got {q!r}")
    if psi_in.n_qubits != 2:
        raise ValidationError("input must be a two-qubit pure state")
    amps = psi_in.amplitudes
    mat = q * np.outer(amps, amps.conj()) + (1.0 - q) / 4.0 * np.eye(4)
    return DensityOperator(2, mat)


def output_negativity_closed(q: float, epsilon: float) -> float:
    """Closed form for the output entanglement: max{0, q sin(2 eps) - (1-q)/2}.

    Normalized as trace norm minus one of the partial transpose, which is
    twice the negative-eigenvalue sum returned by ``qstate.negativity``.
    Zero exactly when q <= 1/(1 + 2 sin(2 eps)).
    """
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"visibility q must lie in [0, 1], got {q!r}")
    if not 0.0 <= epsilon <= np.pi / 2:
        raise ValidationError(f"epsilon must lie in [0, pi/2], got {epsilon!r}")
    return max(0.0, float(q * np.sin(2.0 * epsilon)) - 0.5 * (1.0 - q))


def correlation_matrix(rho: DensityOperator) -> np.ndarray:
    """3x3 matrix T_ij = <sigma_i x sigma_j> of a two-qubit state."""
    if rho.n_qubits != 2:
        raise ValidationError("correlation matrix is defined for two-qubit states")
    paulis = (PAULI_X, PAULI_Y, PAULI_Z)
    T = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            T[i, j] = expectation(rho, np.kron(paulis[i], paulis[j]))
    return T


def chsh_max_two_qubit(rho: DensityOperator) -> float:
    """Maximal CHSH value of a two-qubit state over all measurement settings.

    Equals 2 sqrt(u1 + u2) with u1 >= u2 the two largest eigenvalues of
    T^T T, T the Pauli correlation matrix.
    """
    T = correlation_matrix(rho)
    u = np.sort(np.linalg.eigvalsh(T.T @ T))
    return float(2.0 * np.sqrt(max(u[-1], 0.0) + max(u[-2], 0.0)))


def critical_visibilities(epsilon: float) -> CriticalVisibilities:
    """All four visibility thresholds at a given input-entanglement angle."""
    if not 0.0 <= epsilon <= np.pi / 2:
        raise ValidationError(f"epsilon must lie in [0, pi/2], got {epsilon!r}")
    s = float(np.sin(2.0 * epsilon))
    return CriticalVisibilities(
        q_channel=Q_CRIT_CHANNEL,
        q_bell=Q_CRIT_BELL,
        q1=1.0 / (1.0 + 2.0 * s),
        q2=float(1.0 / np.sqrt(1.0 + s * s)),
    )


def werner_baseline(q: float) -> WernerBaseline:
    """Single-qubit teleportation fidelity and CHSH maximum of the Werner state.

    The average fidelity follows from the singlet fraction f through the
    standard qubit relation F = (2f + 1)/3, which crosses the classical 2/3
    exactly at q = 1/3; the CHSH maximum is 2 sqrt(2) q, crossing 2 at
    q = 1/sqrt(2).
    """
    rho = werner(q)
    psi = bell_pair().amplitudes
    fraction = expectation(rho, np.outer(psi, psi.conj()))
    return WernerBaseline(
        fidelity=(2.0 * fraction + 1.0) / 3.0,
        chsh_max=chsh_max_two_qubit(rho),
    )


def bi1_critical_visibility(
    state: PureState, config: OptimizationConfig | None = None
) -> BellVisibility:
    """Visibility above which mixing the state with white noise violates bi1.

    Every bi1 correlation term is a traceless Pauli tensor, so white noise
    contributes nothing and the threshold is bound/max_violation = 2/max.
    A value above 1 means no visibility yields a violation; the flag makes
    that explicit.
    """
    if state.n_qubits != 4:
        raise ValidationError("critical visibility is defined for four-qubit states")
    best = max_violation(builtin("bi1"), state, config)
    violation_possible = best.value > 2.0 + 1e-9
    visibility = 2.0 / best.value
    if not violation_possible:
        # max violation at or below the bound: no visibility q <= 1 can violate
        visibility = max(visibility, 1.0)
    return BellVisibility(value=visibility, violation_possible=violation_possible)
