"""Bell expressions: representation, quantum evaluation, and classical bounds.

An expression is a signed sum of correlation terms.  Each term assigns a
setting label (1 or 2) to some of the parties A..D; parties without a label
do not measure in that term and contribute an identity factor.

The classical bound is computed by enumerating deterministic local
strategies, i.e. all +-1 assignments to the distinct (party, label)
observables.  Extremal local-hidden-variable strategies are deterministic
for linear correlation polynomials, so this enumeration is exact.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .qstate import (
    MeasurementDirection,
    State,
    ValidationError,
    XHAT,
    YHAT,
    ZHAT,
    expectation,
    tensor_observable,
)

PARTIES = "ABCD"
MAX_OBSERVABLES = 16


@dataclass(frozen=True, eq=True)
class BellTerm:
    """One signed correlation term: coefficient times a product of observables."""

    coefficient: float
    labels: Mapping[str, int]

    def __post_init__(self):
        labels = dict(self.labels)
        if not labels:
            raise ValidationError("a term must involve at least one party")
        for party, label in labels.items():
            if party not in PARTIES:
                raise ValidationError(f"unknown party {party!r}")
            if label not in (1, 2):
                raise ValidationError(f"setting label must be 1 or 2, got {label!r}")
        object.__setattr__(self, "labels", labels)

    def __hash__(self):
        return hash((self.coefficient, tuple(sorted(self.labels.items()))))


@dataclass(frozen=True, eq=True)
class BellExpression:
    """Named signed sum of correlation terms over 2 or 4 parties."""

    name: str
    n_parties: int
    terms: tuple[BellTerm, ...]

    def __post_init__(self):
        if self.n_parties not in (2, 4):
            raise ValidationError(f"n_parties must be 2 or 4, got {self.n_parties}")
        terms = tuple(self.terms)
        for term in terms:
            for party in term.labels:
                if party not in self.parties:
                    raise ValidationError(
                        f"term uses party {party!r} outside the {self.n_parties}-party set"
                    )
        object.__setattr__(self, "terms", terms)

    @property
    def parties(self) -> str:
        return PARTIES[: self.n_parties]

    def observables(self) -> list[tuple[str, int]]:
        """Sorted distinct (party, label) observables referenced by the terms."""
        return sorted({(p, l) for term in self.terms for p, l in term.labels.items()})


@dataclass(frozen=True, eq=True)
class SettingsAssignment:
    """Measurement directions bound to each party's setting labels."""

    directions: Mapping[str, Mapping[int, MeasurementDirection]]

    def __post_init__(self):
        frozen = {}
        for party, by_label in dict(self.directions).items():
            if party not in PARTIES:
                raise ValidationError(f"unknown party {party!r}")
            entry = {}
            for label, direction in dict(by_label).items():
                label = int(label)
                if label not in (1, 2):
                    raise ValidationError(f"setting label must be 1 or 2, got {label!r}")
                if not isinstance(direction, MeasurementDirection):
                    direction = MeasurementDirection.from_vector(direction)
                entry[label] = direction
            frozen[party] = entry
        object.__setattr__(self, "directions", frozen)

    def direction(self, party: str, label: int) -> MeasurementDirection:
        try:
            return self.directions[party][label]
        except KeyError:
            raise ValidationError(f"no direction bound for {party}{label}") from None

    def binds(self, expr: BellExpression) -> bool:
        return all(l in self.directions.get(p, {}) for p, l in expr.observables())

    def __hash__(self):
        items = tuple(
            (p, tuple(sorted(by_label.items(), key=lambda kv: kv[0])))
            for p, by_label in sorted(self.directions.items())
        )
        return hash(items)


def _expr(name: str, n_parties: int, terms: Sequence[tuple[float, dict]]) -> BellExpression:
    return BellExpression(name, n_parties, tuple(BellTerm(c, lab) for c, lab in terms))


def _mabk4_terms() -> list[tuple[float, dict]]:
    # +1 for zero or >= three "2" labels, -1 for one or two; 16 terms total.
    terms = []
    for labels in itertools.product((1, 2), repeat=4):
        n2 = sum(1 for l in labels if l == 2)
        sign = 1.0 if n2 in (0, 3, 4) else -1.0
        terms.append((sign, dict(zip(PARTIES, labels))))
    return terms


_BUILTIN_EXPRESSIONS = {
    "chsh": _expr("chsh", 2, [
        (1.0, {"A": 1, "B": 1}),
        (1.0, {"A": 1, "B": 2}),
        (1.0, {"A": 2, "B": 1}),
        (-1.0, {"A": 2, "B": 2}),
    ]),
    "mabk4": _expr("mabk4", 4, _mabk4_terms()),
    "sasa": _expr("sasa", 4, [
        (1.0, {"A": 2, "B": 1, "C": 1, "D": 1}),
        (1.0, {"A": 1, "C": 1, "D": 2}),
        (1.0, {"A": 1, "C": 2, "D": 1}),
        (-1.0, {"A": 2, "B": 1, "C": 2, "D": 2}),
    ]),
    # single-setting party A; optimally violated by chi
    "bi1": _expr("bi1", 4, [
        (1.0, {"A": 1, "B": 1, "C": 1, "D": 1}),
        (1.0, {"B": 1, "C": 2, "D": 2}),
        (1.0, {"B": 2, "C": 1, "D": 2}),
        (-1.0, {"A": 1, "B": 2, "C": 2, "D": 1}),
    ]),
    # cyclic relabelings A->B->C->D->A of bi1
    "bi2": _expr("bi2", 4, [
        (1.0, {"A": 1, "B": 1, "C": 1, "D": 1}),
        (1.0, {"A": 2, "C": 1, "D": 2}),
        (1.0, {"A": 2, "C": 2, "D": 1}),
        (-1.0, {"A": 1, "B": 1, "C": 2, "D": 2}),
    ]),
    "bi3": _expr("bi3", 4, [
        (1.0, {"A": 1, "B": 1, "C": 1, "D": 1}),
        (1.0, {"A": 2, "B": 2, "D": 1}),
        (1.0, {"A": 1, "B": 2, "D": 2}),
        (-1.0, {"A": 2, "B": 1, "C": 1, "D": 2}),
    ]),
    "bi4": _expr("bi4", 4, [
        (1.0, {"A": 1, "B": 1, "C": 1, "D": 1}),
        (1.0, {"A": 1, "B": 2, "C": 2}),
        (1.0, {"A": 2, "B": 1, "C": 2}),
        (-1.0, {"A": 2, "B": 2, "C": 1, "D": 1}),
    ]),
}

_SQ2 = 1.0 / np.sqrt(2.0)
_XPZ = MeasurementDirection(_SQ2, 0.0, _SQ2)    # (x + z)/sqrt(2)
_XMZ = MeasurementDirection(_SQ2, 0.0, -_SQ2)   # (x - z)/sqrt(2)
_ZMX = MeasurementDirection(-_SQ2, 0.0, _SQ2)   # (z - x)/sqrt(2)

_BUILTIN_SETTINGS = {
    # settings achieving the optimal violation 4 of bi1 on chi
    "bi1_chi": SettingsAssignment({
        "A": {1: XHAT},
        "B": {1: ZHAT, 2: YHAT},
        "C": {1: ZHAT, 2: YHAT},
        "D": {1: XHAT, 2: YHAT},
    }),
    # settings achieving 4*sqrt(2) for mabk4 on chi
    "mabk_chi": SettingsAssignment({
        "A": {1: XHAT, 2: ZHAT},
        "B": {1: YHAT, 2: ZHAT},
        "C": {1: YHAT, 2: ZHAT},
        "D": {1: _ZMX, 2: _XPZ},
    }),
    # settings achieving 2*sqrt(2) for sasa on chi; both D labels bind z
    "sasa_chi": SettingsAssignment({
        "A": {1: XHAT, 2: ZHAT},
        "B": {1: ZHAT},
        "C": {1: _XPZ, 2: _XMZ},
        "D": {1: ZHAT, 2: ZHAT},
    }),
    # settings achieving the cluster state's maximum 2*sqrt(2) of bi1
    "bi1_cluster": SettingsAssignment({
        "A": {1: XHAT},
        "B": {1: ZHAT, 2: ZHAT},
        "C": {1: _XPZ, 2: _XMZ},
        "D": {1: XHAT, 2: ZHAT},
    }),
}


def builtin(name: str) -> BellExpression:
    """Look up a built-in expression: chsh, mabk4, sasa, bi1, bi2, bi3, bi4."""
    try:
        return _BUILTIN_EXPRESSIONS[name]
    except KeyError:
        raise ValidationError(
            f"unknown expression {name!r}; known: {', '.join(sorted(_BUILTIN_EXPRESSIONS))}"
        ) from None


def builtin_names() -> list[str]:
    return sorted(_BUILTIN_EXPRESSIONS)


def builtin_settings(key: str) -> SettingsAssignment:
    """Look up reference settings: bi1_chi, mabk_chi, sasa_chi, bi1_cluster."""
    try:
        return _BUILTIN_SETTINGS[key]
    except KeyError:
        raise ValidationError(
            f"unknown settings key {key!r}; known: {', '.join(sorted(_BUILTIN_SETTINGS))}"
        ) from None


def builtin_settings_keys() -> list[str]:
    return sorted(_BUILTIN_SETTINGS)


def evaluate(expr: BellExpression, state: State, settings: SettingsAssignment) -> float:
    """Quantum value of the expression on a state under bound settings."""
    if state.n_qubits != expr.n_parties:
        raise ValidationError(
            f"state has {state.n_qubits} qubits but expression has {expr.n_parties} parties"
        )
    total = 0.0
    for term in expr.terms:
        slots = [
            settings.direction(p, term.labels[p]) if p in term.labels else None
            for p in expr.parties
        ]
        total += term.coefficient * expectation(state, tensor_observable(slots))
    return total


def _strategy_values(expr: BellExpression):
    obs = expr.observables()
    if len(obs) > MAX_OBSERVABLES:
        raise ValidationError(f"too many distinct observables ({len(obs)}) to enumerate")
    index = {o: i for i, o in enumerate(obs)}
    for signs in itertools.product((-1.0, 1.0), repeat=len(obs)):
        value = 0.0
        for term in expr.terms:
            prod = term.coefficient
            for p, l in term.labels.items():
                prod *= signs[index[(p, l)]]
            value += prod
        yield value


def classical_bound(expr: BellExpression) -> float:
    """Maximum of the expression over deterministic local strategies."""
    return max(_strategy_values(expr))


def attained_values(expr: BellExpression, decimals: int = 9) -> set[float]:
    """Exact set of values the polynomial attains over all deterministic strategies."""
    return {round(v, decimals) for v in _strategy_values(expr)}


def algebraic_max(expr: BellExpression) -> float:
    """Sum of |coefficients|: the ceiling for any theory with +-1 outcomes."""
    return sum(abs(t.coefficient) for t in expr.terms)


# --- JSON document schema -------------------------------------------------
#
# {"name": ..., "parties": "AB[CD]",
#  "terms": [{"coef": c, "labels": {"A": 1, ...}}, ...],
#  "settings": {"A": {"1": [nx, ny, nz]}, ...}}


def expression_to_document(expr: BellExpression, settings: SettingsAssignment | None = None) -> dict:
    doc = {
        "name": expr.name,
        "parties": expr.parties,
        "terms": [
            {"coef": t.coefficient, "labels": {p: l for p, l in sorted(t.labels.items())}}
            for t in expr.terms
        ],
    }
    if settings is not None:
        doc["settings"] = settings_to_document(settings)
    return doc


def expression_from_document(doc: Mapping) -> BellExpression:
    terms = tuple(
        BellTerm(float(t["coef"]), {p: int(l) for p, l in t["labels"].items()})
        for t in doc["terms"]
    )
    return BellExpression(str(doc["name"]), len(doc["parties"]), terms)


def settings_to_document(settings: SettingsAssignment) -> dict:
    return {
        party: {
            str(label): [d.nx, d.ny, d.nz]
            for label, d in sorted(by_label.items(), key=lambda kv: kv[0])
        }
        for party, by_label in sorted(settings.directions.items())
    }


def settings_from_document(doc: Mapping) -> SettingsAssignment:
    if "settings" in doc:
        doc = doc["settings"]
    return SettingsAssignment(
        {
            party: {int(label): MeasurementDirection.from_vector(v) for label, v in by_label.items()}
            for party, by_label in doc.items()
        }
    )


def settings_to_json(settings: SettingsAssignment) -> str:
    return json.dumps(settings_to_document(settings), sort_keys=True)


def settings_from_json(text: str) -> SettingsAssignment:
    return settings_from_document(json.loads(text))
