"""Deutsch-Jozsa on the two virtual qubits.

The register starts in ``|0,1>`` (level 1).  After the algorithm the answer
sits on the first virtual qubit: weight on level 1 means a constant function,
weight on level 3 a balanced one.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import catalog
from .catalog import BoolFn2, GateId
from .compiler import compile as compile_gate_sequence
from .density import (
    DensityMatrix,
    PseudoPureState,
    distinguished_level,
    evolve,
    fid_amplitude,
    prepare_pseudo_pure,
)
from .pulses import PulseSequence, PulseSpec, X, sequence_operator
from .su4 import basis_ket
from .system import DEFAULT_BETA, SystemSpec

START_LEVEL = 1
CONSTANT_LEVEL = 1
BALANCED_LEVEL = 3
THRESHOLD = 0.99


class DjMode(str, enum.Enum):
    GATE_CIRCUIT = "gate"
    SINGLE_OPERATOR = "single"
    COMPILED_PULSES = "pulses"


class StateModel(str, enum.Enum):
    PURE = "pure"
    PSEUDO_PURE = "pseudo-pure"


class ClassificationError(RuntimeError):
    def __init__(self, weights):
        self.weights = np.asarray(weights)
        super().__init__(f"no level holds {THRESHOLD} of the weight: {np.round(self.weights, 6)}")


@dataclass(frozen=True)
class Step:
    label: str
    unitary: np.ndarray = field(repr=False)
    sequence: PulseSequence | None = None
    is_oracle: bool = False


@dataclass(frozen=True, eq=False)
class DjResult:
    function: BoolFn2
    mode: DjMode
    state_model: StateModel
    classification: str
    final_state: object
    output_phase: complex
    fid: float
    weights: np.ndarray
    steps: tuple[str, ...]
    oracle_calls: int
    alpha: float | None = None
    prepared_level: int | None = None


def algorithm_steps(f: BoolFn2, mode: DjMode) -> list[Step]:
    f = BoolFn2(*f)
    mode = DjMode(mode)
    if mode is DjMode.GATE_CIRCUIT:
        did, d = catalog.oracle(f)
        return [
            Step("h1R", catalog.gate(GateId.h1R)),
            Step("h1S", catalog.gate(GateId.h1S)),
            Step(did.value, d, is_oracle=True),
            Step("H2", catalog.gate(GateId.H2)),
        ]
    bid = catalog.b_id(f)
    if mode is DjMode.SINGLE_OPERATOR:
        return [Step(bid.value, catalog.b_operator(f), is_oracle=True)]
    seq = compile_gate_sequence(bid)
    return [Step(bid.value, sequence_operator(seq), seq, is_oracle=True)]


def intermediate_state(f: BoolFn2) -> np.ndarray:
    """State after h1R, h1S and the oracle, before the closing Hadamard."""
    psi = basis_ket(START_LEVEL)
    for step in algorithm_steps(f, DjMode.GATE_CIRCUIT)[:3]:
        psi = step.unitary @ psi
    return psi


def _event_label(ev) -> str:
    return str(ev) if isinstance(ev, PulseSpec) else "G"


def classify(weights) -> str:
    w = np.asarray(weights, dtype=float)
    k = int(np.argmax(w))
    if w[k] < THRESHOLD or k not in (CONSTANT_LEVEL, BALANCED_LEVEL):
        raise ClassificationError(w)
    return "constant" if k == CONSTANT_LEVEL else "balanced"


def _relabel_sequence(level: int) -> PulseSequence:
    # A pi pulse swaps the populations of the prepared level and level 1.
    if level == START_LEVEL:
        return PulseSequence()
    a, b = sorted((level, START_LEVEL))
    return PulseSequence((X(a, b, 1),))


def prepare_start(sys: SystemSpec, beta: float) -> tuple[DensityMatrix, PseudoPureState, PulseSequence]:
    """Pseudo-pure state with its distinguished population moved to level 1."""
    prep = prepare_pseudo_pure(sys, beta)
    relabel = _relabel_sequence(prep.level)
    rho = evolve(prep.state, relabel)
    level, _, _ = distinguished_level(rho)
    assert level == START_LEVEL
    return rho, prep, relabel


def run_dj(f: BoolFn2, mode: DjMode = DjMode.COMPILED_PULSES, state_model: StateModel = StateModel.PURE,
           sys: SystemSpec | None = None, beta: float = DEFAULT_BETA,
           initial: DensityMatrix | None = None) -> DjResult:
    """Run the algorithm for oracle ``f`` and classify it.

    ``initial`` overrides the pseudo-pure preparation with a ready-made state
    whose deviation is concentrated on level 1.
    """
    f = BoolFn2(*f)
    mode = DjMode(mode)
    state_model = StateModel(state_model)
    sys = sys or SystemSpec()
    steps = algorithm_steps(f, mode)
    u = np.eye(4, dtype=complex)
    for s in steps:
        u = s.unitary @ u
    labels = [s.label for s in steps]

    alpha = prepared_level = None
    if state_model is StateModel.PURE:
        psi = u @ basis_ket(START_LEVEL)
        weights = np.abs(psi) ** 2
        final = psi
        rho_final = DensityMatrix.from_ket(psi)
    else:
        if initial is None:
            rho, prep, relabel = prepare_start(sys, beta)
            prepared_level = prep.level
            labels = [_event_label(e) for e in prep.sequence + relabel] + labels
        else:
            rho = initial
        _, alpha, common = distinguished_level(rho)
        for s in steps:
            rho = evolve(rho, s.sequence) if s.sequence is not None else rho.conjugate_by(s.unitary)
        weights = (rho.populations - common) / alpha
        final = rho_final = rho

    classification = classify(weights)
    winner = CONSTANT_LEVEL if classification == "constant" else BALANCED_LEVEL
    amp = u[winner, START_LEVEL]
    return DjResult(
        function=f,
        mode=mode,
        state_model=state_model,
        classification=classification,
        final_state=final,
        output_phase=complex(amp / abs(amp)),
        fid=fid_amplitude(rho_final, (1, 2)),
        weights=weights,
        steps=tuple(labels),
        oracle_calls=sum(s.is_oracle for s in steps),
        alpha=alpha,
        prepared_level=prepared_level,
    )


def run_all(state_models=(StateModel.PURE, StateModel.PSEUDO_PURE), sys: SystemSpec | None = None,
            beta: float = DEFAULT_BETA) -> list[DjResult]:
    return [
        run_dj(f, mode, sm, sys, beta)
        for f in catalog.ALL_FUNCTIONS
        for mode in DjMode
        for sm in state_models
    ]

