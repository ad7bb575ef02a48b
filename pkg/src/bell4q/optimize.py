"""Maximization of Bell expressions over measurement directions.

Each bound observable is parametrized by polar/azimuthal angles (theta, phi)
on the unit sphere, giving an unconstrained periodic search space of up to
16 dimensions.  The search is a multi-start adaptive Nelder-Mead downhill
simplex: reference settings (when available for the expression) are always
converged deeply, uniformly random angle seeds are triaged with a short
simplex run, and the surviving candidates are deepened and polished.

For speed the objective is evaluated through the state's Pauli correlation
tensor, contracted with the direction vectors term by term.  This equals
``inequalities.evaluate`` exactly (up to float rounding) and is verified
against it in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence, TextIO

import numpy as np

from . import states
from .inequalities import (
    BellExpression,
    SettingsAssignment,
    algebraic_max,
    builtin_settings,
    builtin_settings_keys,
    evaluate,
)
from .qstate import (
    ConsistencyError,
    DensityOperator,
    IDENTITY_2,
    MeasurementDirection,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PureState,
    State,
    ValidationError,
)

_PAULIS = (IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class OptimizationConfig:
    """Multi-start search parameters.

    restarts:       number of uniformly random angle seeds (>= 1)
    tolerance:      objective-improvement tolerance for convergence
    max_iterations: simplex iteration cap per restart
    rng_seed:       seed for the restart generator (non-negative)
    """

    restarts: int = 32
    tolerance: float = 1e-9
    max_iterations: int = 3000
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValidationError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.rng_seed < 0:
            raise ValidationError(f"rng_seed must be non-negative, got {self.rng_seed}")


@dataclass(frozen=True)
class Optimum:
    """Best value found, the settings achieving it, and convergence metadata."""

    value: float
    settings: SettingsAssignment
    converged: bool
    restarts_used: int


class ScanPoint(NamedTuple):
    theta12: float
    phi12: float
    value: float
    converged: bool


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    step: float = 0.5,
    fatol: float = 1e-12,
    xatol: float = 1e-10,
    max_iter: int = 3000,
) -> tuple[np.ndarray, float, bool]:
    """Minimize f with the adaptive Nelder-Mead downhill simplex.

    Uses the dimension-adaptive expansion/contraction/shrink coefficients of
    Gao and Han, which behave much better than the classic constants in the
    10+ dimensional searches used here.  Returns (x_best, f_best, converged)
    where converged means the simplex met both fatol and xatol before the
    iteration cap.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    alpha = 1.0
    gamma = 1.0 + 2.0 / n
    rho = 0.75 - 1.0 / (2.0 * n)
    sigma = 1.0 - 1.0 / n

    sim = np.empty((n + 1, n))
    sim[0] = x0
    for i in range(n):
        sim[i + 1] = x0
        sim[i + 1, i] += step
    fs = np.array([f(s) for s in sim])

    for _ in range(max_iter):
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        if fs[-1] - fs[0] <= fatol and np.max(np.abs(sim[1:] - sim[0])) <= xatol:
            return sim[0], fs[0], True
        centroid = sim[:-1].mean(axis=0)
        xr = centroid + alpha * (centroid - sim[-1])
        fr = f(xr)
        if fr < fs[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                sim[-1], fs[-1] = xe, fe
            else:
                sim[-1], fs[-1] = xr, fr
        elif fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
        else:
            if fr < fs[-1]:
                xc = centroid + rho * (xr - centroid)
            else:
                xc = centroid - rho * (centroid - sim[-1])
            fc = f(xc)
            if fc < min(fr, fs[-1]):
                sim[-1], fs[-1] = xc, fc
            else:
                sim[1:] = sim[0] + sigma * (sim[1:] - sim[0])
                fs[1:] = [f(s) for s in sim[1:]]
    best = int(np.argmin(fs))
    return sim[best], fs[best], False


def correlation_tensor(state: State) -> np.ndarray:
    """T[i..] = <P_i x ...> over the Pauli basis (P_0 = I), shape (4,)*n_qubits."""
    n = state.n_qubits
    tensor = np.zeros((4,) * n)
    for idx in itertools.product(range(4), repeat=n):
        op = _PAULIS[idx[0]]
        for i in idx[1:]:
            op = np.kron(op, _PAULIS[i])
        if isinstance(state, PureState):
            val = complex(np.vdot(state.amplitudes, op @ state.amplitudes))
        else:
            val = complex(np.trace(state.matrix @ op))
        tensor[idx] = val.real
    return tensor


def _monomial_objective(expr: BellExpression, tensor: np.ndarray):
    """Build f(angles) -> -value as a flat weighted monomial table.

    The expression value is multilinear in the direction vectors, so it is a
    polynomial with one monomial per nonzero correlation-tensor entry per
    term.  comp holds [1.0, n1x, n1y, n1z, n2x, ...] for the distinct
    observables in expr.observables() order; absent factors index the
    constant slot 0.
    """
    obs = expr.observables()
    obs_index = {o: i for i, o in enumerate(obs)}
    n_par = expr.n_parties
    columns = [[] for _ in range(n_par)]
    weights = []
    for term in expr.terms:
        present = [p for p in expr.parties if p in term.labels]
        slicer = tuple(slice(1, 4) if p in term.labels else 0 for p in expr.parties)
        sub = tensor[slicer]
        for comp_idx in itertools.product(range(3), repeat=len(present)):
            w = term.coefficient * sub[comp_idx]
            if w == 0.0:
                continue
            weights.append(w)
            for d in range(n_par):
                if d < len(present):
                    o = obs_index[(present[d], term.labels[present[d]])]
                    columns[d].append(1 + 3 * o + comp_idx[d])
                else:
                    columns[d].append(0)
    weight_arr = np.array(weights)
    index_arrs = [np.array(c, dtype=np.intp) for c in columns]
    comp = np.empty(1 + 3 * len(obs))
    comp[0] = 1.0

    def objective(x: np.ndarray) -> float:
        th = x[0::2]
        ph = x[1::2]
        st = np.sin(th)
        comp[1::3] = st * np.cos(ph)
        comp[2::3] = st * np.sin(ph)
        comp[3::3] = np.cos(th)
        prod = comp[index_arrs[0]]
        for idx in index_arrs[1:]:
            prod = prod * comp[idx]
        return -float(weight_arr @ prod)

    return objective, obs


def _objective_from_state(expr: BellExpression, state: State):
    return _monomial_objective(expr, correlation_tensor(state))


def settings_to_angles(settings: SettingsAssignment, observables: Sequence[tuple[str, int]]) -> np.ndarray:
    """Flatten bound directions into the optimizer's (theta, phi) vector."""
    x = np.empty(2 * len(observables))
    for i, (party, label) in enumerate(observables):
        d = settings.direction(party, label)
        x[2 * i] = np.arccos(np.clip(d.nz, -1.0, 1.0))
        x[2 * i + 1] = np.arctan2(d.ny, d.nx) % (2.0 * np.pi)
    return x


def angles_to_settings(x: np.ndarray, observables: Sequence[tuple[str, int]]) -> SettingsAssignment:
    directions: dict = {}
    for i, (party, label) in enumerate(observables):
        th, ph = x[2 * i], x[2 * i + 1]
        st = np.sin(th)
        vec = np.array([st * np.cos(ph), st * np.sin(ph), np.cos(th)])
        vec /= np.linalg.norm(vec)
        directions.setdefault(party, {})[label] = MeasurementDirection.from_vector(vec)
    return SettingsAssignment(directions)


def _default_warm_starts(expr: BellExpression) -> list[SettingsAssignment]:
    return [
        s for s in (builtin_settings(k) for k in builtin_settings_keys()) if s.binds(expr)
    ]


def max_violation(
    expr: BellExpression,
    state: State,
    config: OptimizationConfig | None = None,
    warm_starts: Iterable[SettingsAssignment] | None = None,
) -> Optimum:
    """Maximize the expression's quantum value over all measurement directions.

    warm_starts defaults to every built-in settings assignment that binds the
    expression's observables; these are always converged deeply, on top of
    the configured number of random restarts.
    """
    if state.n_qubits != expr.n_parties:
        raise ValidationError(
            f"state has {state.n_qubits} qubits but expression has {expr.n_parties} parties"
        )
    config = config or OptimizationConfig()
    if warm_starts is None:
        warm_starts = _default_warm_starts(expr)

    f, obs = _objective_from_state(expr, state)
    n = 2 * len(obs)
    fatol_triage = max(config.tolerance * 1e2, 1e-7)
    fatol_deep = max(config.tolerance * 1e-3, 1e-13)
    fatol_polish = max(config.tolerance * 1e-4, 1e-14)

    best_x: np.ndarray | None = None
    best_f = np.inf
    converged = False

    def consider(x, fv, conv):
        nonlocal best_x, best_f, converged
        if fv < best_f:
            best_x, best_f, converged = x, fv, conv

    for warm in warm_starts:
        x, fv, conv = nelder_mead(
            f, settings_to_angles(warm, obs), step=0.5,
            fatol=fatol_deep, xatol=1e-9, max_iter=config.max_iterations,
        )
        consider(x, fv, conv)

    rng = np.random.default_rng(config.rng_seed)
    triaged = []
    for _ in range(config.restarts):
        x0 = np.empty(n)
        x0[0::2] = rng.uniform(0.0, np.pi, len(obs))
        x0[1::2] = rng.uniform(0.0, 2.0 * np.pi, len(obs))
        x, fv, _ = nelder_mead(
            f, x0, step=0.5, fatol=fatol_triage, xatol=1e-5,
            max_iter=min(500, config.max_iterations),
        )
        triaged.append((fv, x))
    triaged.sort(key=lambda t: t[0])
    survivors = [x for fv, x in triaged if fv <= triaged[0][0] + 0.05][:3]
    for x0 in survivors:
        x, fv, conv = nelder_mead(
            f, x0, step=0.3, fatol=fatol_deep, xatol=1e-9, max_iter=config.max_iterations,
        )
        consider(x, fv, conv)

    for step in (0.1, 0.02):
        x, fv, conv = nelder_mead(
            f, best_x, step=step, fatol=fatol_polish, xatol=1e-10,
            max_iter=config.max_iterations,
        )
        consider(x, fv, conv or converged)

    value = float(-best_f)
    ceiling = algebraic_max(expr)
    if value > ceiling + 1e-6:
        raise ConsistencyError(f"optimum {value} exceeds algebraic maximum {ceiling}")
    return Optimum(
        value=value,
        settings=angles_to_settings(best_x, obs),
        converged=converged,
        restarts_used=config.restarts,
    )


def scan_upsilon(
    expr: BellExpression,
    theta_grid: Sequence[float],
    phi_grid: Sequence[float],
    config: OptimizationConfig | None = None,
    fixed_settings: SettingsAssignment | None = None,
) -> list[ScanPoint]:
    """Violation landscape over the two-angle state family, row-major.

    With fixed_settings the expression is simply evaluated at each grid
    point; otherwise each point is maximized over settings with a restart
    generator seeded deterministically from (rng_seed, row, column), so
    points may be computed in any order or in parallel with identical
    results.
    """
    theta_grid = [float(t) for t in theta_grid]
    phi_grid = [float(p) for p in phi_grid]
    if not theta_grid or not phi_grid:
        raise ValidationError("scan grids must be non-empty")
    if not all(np.isfinite(theta_grid)) or not all(np.isfinite(phi_grid)):
        raise ValidationError("scan grids must be finite")
    config = config or OptimizationConfig()

    rows = []
    for i, theta in enumerate(theta_grid):
        for j, phi in enumerate(phi_grid):
            state = states.upsilon(theta, phi)
            try:
                if fixed_settings is not None:
                    rows.append(ScanPoint(theta, phi, evaluate(expr, state, fixed_settings), True))
                else:
                    point_seed = np.random.SeedSequence([config.rng_seed, i, j]).generate_state(1)[0]
                    point_config = OptimizationConfig(
                        restarts=config.restarts,
                        tolerance=config.tolerance,
                        max_iterations=config.max_iterations,
                        rng_seed=int(point_seed),
                    )
                    opt = max_violation(expr, state, point_config)
                    rows.append(ScanPoint(theta, phi, opt.value, opt.converged))
            except (ValidationError, ConsistencyError):
                rows.append(ScanPoint(theta, phi, float("nan"), False))
    return rows


def write_scan_csv(rows: Iterable[ScanPoint], stream: TextIO) -> None:
    """Emit scan rows as CSV with 12 significant digits, header included."""
    stream.write("theta12,phi12,value,converged\n")
    for row in rows:
        stream.write(
            f"{row.theta12:.12g},{row.phi12:.12g},{row.value:.12g},"
            f"{'true' if row.converged else 'false'}\n"
        )
