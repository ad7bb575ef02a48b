"""Constructors for the named pure and mixed states used throughout.

Every state can also be obtained from a string identifier via
:func:`state_from_id`; the recognized forms are

    chi | ghz4 | w4 | cluster4 | bell_pair
    upsilon:<theta12>:<phi12>
    xi:<alpha>:<beta>:<q>
    werner:<q>

with angles in radians.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import DensityOperator, PureState, ValidationError


@dataclass(frozen=True)
class ChannelStateParams:
    """Parameters of the noisy four-qubit channel state: resource angles and visibility."""

    alpha: float
    beta: float
    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ValidationError(f"visibility q must lie in [0, 1], got {self.q!r}")


def chi() -> PureState:
    """The genuine four-qubit entangled resource state for two-qubit teleportation.

    Equals upsilon(pi/4, pi/4) up to floating-point rounding.
    """
    s = 1.0 / (2.0 * np.sqrt(2.0))
    amps = np.zeros(16, dtype=complex)
    for idx, sign in [(0, 1), (3, -1), (5, -1), (6, 1), (9, 1), (10, 1), (12, 1), (15, 1)]:
        amps[idx] = sign * s
    return PureState(4, amps)


def upsilon(theta12: float, phi12: float) -> PureState:
    """Two-parameter four-qubit family containing chi at theta12 = phi12 = pi/4.

    Normalized for all real angles; the family is periodic under
    (theta12, phi12) -> (theta12 + pi, phi12 + pi) up to global phase.
    """
    ct, st = np.cos(theta12), np.sin(theta12)
    cp, sp = np.cos(phi12), np.sin(phi12)
    amps = np.zeros(16, dtype=complex)
    amps[0] = ct
    amps[3] = -st
    amps[5] = -sp
    amps[6] = cp
    amps[9] = cp
    amps[10] = sp
    amps[12] = st
    amps[15] = ct
    return PureState(4, amps / 2.0)


def ghz4() -> PureState:
    """(|0000> + |1111>)/sqrt(2)."""
    amps = np.zeros(16, dtype=complex)
    amps[0] = amps[15] = 1.0 / np.sqrt(2.0)
    return PureState(4, amps)


def w4() -> PureState:
    """(|1000> + |0100> + |0010> + |0001>)/2."""
    amps = np.zeros(16, dtype=complex)
    for idx in (8, 4, 2, 1):
        amps[idx] = 0.5
    return PureState(4, amps)


# Computational-basis expansion of the four-qubit linear cluster state
# (1/2)(|+0+0> + |+0-1> + |-1-0> + |-1+1>), |+-> = (|0> +- |1>)/sqrt(2).
_CLUSTER_SIGNS = (1, 1, 1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1, -1, 1, -1)


def cluster4() -> PureState:
    """Four-qubit linear cluster state, pre-expanded to the computational basis."""
    return PureState(4, np.array(_CLUSTER_SIGNS, dtype=complex) / 4.0)


def bell_pair() -> PureState:
    """(|00> + |11>)/sqrt(2)."""
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1.0 / np.sqrt(2.0)
    return PureState(2, amps)


def werner(q: float) -> DensityOperator:
    """Two-qubit Werner state: q |Bell><Bell| + (1-q)/4 I."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"visibility q must lie in [0, 1], got {q!r}")
    psi = bell_pair().amplitudes
    mat = q * np.outer(psi, psi.conj()) + (1.0 - q) / 4.0 * np.eye(4)
    return DensityOperator(2, mat)


def xi_channel(params: ChannelStateParams) -> DensityOperator:
    """Four-qubit channel state: q |upsilon(alpha, beta)><...| + (1-q)/16 I."""
    psi = upsilon(params.alpha, params.beta).amplitudes
    mat = params.q * np.outer(psi, psi.conj()) + (1.0 - params.q) / 16.0 * np.eye(16)
    return DensityOperator(4, mat)


_SIMPLE_STATES = {
    "chi": chi,
    "ghz4": ghz4,
    "w4": w4,
    "cluster4": cluster4,
    "bell_pair": bell_pair,
}


def state_from_id(state_id: str):
    """Resolve a catalog identifier to a PureState or DensityOperator."""
    name, _, rest = state_id.partition(":")
    if name in _SIMPLE_STATES:
        if rest:
            raise ValidationError(f"state {name!r} takes no parameters")
        return _SIMPLE_STATES[name]()
    try:
        args = [float(x) for x in rest.split(":")] if rest else []
    except ValueError as exc:
        raise ValidationError(f"bad numeric parameter in state id {state_id!r}") from exc
    if name == "upsilon":
        if len(args) != 2:
            raise ValidationError("upsilon takes exactly two angles: upsilon:<theta12>:<phi12>")
        return upsilon(*args)
    if name == "xi":
        if len(args) != 3:
            raise ValidationError("xi takes three parameters: xi:<alpha>:<beta>:<q>")
        return xi_channel(ChannelStateParams(*args))
    if name == "werner":
        if len(args) != 1:
            raise ValidationError("werner takes one parameter: werner:<q>")
        return werner(args[0])
    raise ValidationError(f"unknown state id {state_id!r}")
