"""Measurements and quantum state selection.

Every sampling function takes an explicit random source: a
:class:`numpy.random.Generator` or an integer seed.  Nothing here touches
global random state, so results are reproducible given ``(state, seed)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, PovmValidationError, SelectionImpossibleError
from .gates import cnot, hadamard, not_, phase, apply_circuit
from .statevector import RegisterLayout, StateVector, distribution

__all__ = [
    "BELL_LABELS", "SELECTION_WEIGHT_TOL", "DEFAULT_RETRY_BUDGET", "MeasurementRecord",
    "Povm", "SelectionRecord", "SelectionProtocolTrace", "SelectionResult", "as_rng",
    "measure_register", "bell_measure", "povm_measure", "select_state", "telepovm_select",
]

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")
SELECTION_WEIGHT_TOL = 1e-12
DEFAULT_RETRY_BUDGET = 10**6
_POVM_SUM_TOL = 1e-8
_POVM_EIG_TOL = 1e-12


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: int
    probability: float
    post_state: StateVector


def _sample(probs: np.ndarray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(probs)
    u = rng.random() * cdf[-1]
    k = int(np.searchsorted(cdf, u, side="right"))
    k = min(k, len(probs) - 1)
    while probs[k] <= 0.0:  # rounding landed on an empty bin
        k -= 1
    return k


def _project(state: StateVector, register: str, value: int) -> tuple[StateVector, float]:
    view = state.register_view(register)
    kept = np.zeros_like(view)
    kept[:, value, :] = view[:, value, :]
    weight = float(np.vdot(kept, kept).real)
    if weight <= 0.0:
        raise SelectionImpossibleError(f"register {register!r} has no amplitude on value {value}")
    return StateVector(state.layout, kept.ravel() / math.sqrt(weight), check=False), weight


def measure_register(state: StateVector, register: str, rng) -> MeasurementRecord:
    """Computational-basis measurement of one register (Born rule)."""
    probs = distribution(state, register)
    outcome = _sample(probs, as_rng(rng))
    post, weight = _project(state, register, outcome)
    return MeasurementRecord(outcome, weight, post)


def bell_measure(state: StateVector, qubit_a: int, qubit_b: int, rng) -> MeasurementRecord:
    """Project two qubits onto the Bell basis.

    Outcome labels: 0 = phi+, 1 = phi-, 2 = psi+, 3 = psi-, so bit 0 of the
    label is the relative-phase bit and bit 1 the parity bit.
    """
    total = state.layout.total_qubits
    if qubit_a == qubit_b:
        raise DomainError("Bell measurement needs two distinct qubits")
    for q in (qubit_a, qubit_b):
        if not 0 <= q < total:
            raise DomainError(f"qubit index {q} out of range for {total} qubits")
    # CNOT(a->b) then H(a) maps phi+, phi-, psi+, psi- to |00>, |10>, |01>, |11> on (a, b).
    rotated = apply_circuit(state, [cnot(qubit_a, qubit_b), hadamard(qubit_a)])
    amps = rotated.amplitudes
    idx = np.arange(amps.size)
    bit_a = (idx >> qubit_a) & 1
    bit_b = (idx >> qubit_b) & 1
    label_of = bit_a + 2 * bit_b
    p = np.abs(amps) ** 2
    probs = np.array([p[label_of == k].sum() for k in range(4)])
    outcome = _sample(probs, as_rng(rng))
    kept = np.where(label_of == outcome, amps, 0.0)
    weight = float(np.vdot(kept, kept).real)
    projected = StateVector(state.layout, kept / math.sqrt(weight), check=False)
    post = apply_circuit(projected, [hadamard(qubit_a), cnot(qubit_a, qubit_b)])
    return MeasurementRecord(outcome, weight, post)


class Povm:
    """Positive operator-valued measure on a ``d``-dimensional register.

    Validated on construction: every effect Hermitian and positive
    semidefinite, and the effects summing to the identity within ``1e-8``
    in max-norm.  More effects than ``d`` is allowed.
    """

    def __init__(self, effects: Sequence[np.ndarray]):
        mats = [np.array(e, dtype=np.complex128) for e in effects]
        if not mats:
            raise PovmValidationError("a POVM needs at least one effect")
        d = mats[0].shape[0]
        for k, e in enumerate(mats):
            if e.shape != (d, d):
                raise PovmValidationError(f"effect {k} has shape {e.shape}, expected {(d, d)}")
            if np.max(np.abs(e - e.conj().T)) > _POVM_SUM_TOL:
                raise PovmValidationError(f"effect {k} is not Hermitian")
            if np.linalg.eigvalsh(e).min() < -_POVM_EIG_TOL:
                raise PovmValidationError(f"effect {k} is not positive semidefinite")
        deviation = np.max(np.abs(sum(mats) - np.eye(d)))
        if deviation > _POVM_SUM_TOL:
            raise PovmValidationError(f"effects sum to identity only within {deviation:.3g}")
        self.effects = tuple(mats)
        self.dim = d
        self._kraus = None

    def __len__(self):
        return len(self.effects)

    @property
    def kraus(self) -> tuple[np.ndarray, ...]:
        """Square roots of the effects, the Kraus operators used for post-states."""
        if self._kraus is None:
            ops = []
            for e in self.effects:
                w, v = np.linalg.eigh(e)
                ops.append((v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T)
            self._kraus = tuple(ops)
        return self._kraus

    @classmethod
    def computational(cls, width: int) -> "Povm":
        d = 1 << width
        return cls([np.diag(np.eye(d)[k]) for k in range(d)])

    @classmethod
    def trine(cls) -> "Povm":
        """Three effects ``2/3 |phi_k><phi_k|`` at 120 degrees on the Bloch sphere."""
        effects = []
        for k in range(3):
            half = math.pi * k / 3
            v = np.array([math.cos(half), math.sin(half)])
            effects.append(2.0 / 3.0 * np.outer(v, v))
        return cls(effects)


def povm_measure(state: StateVector, register: str, povm: Povm, rng) -> MeasurementRecord:
    """Sample a POVM outcome on ``register``; the post-state uses ``sqrt(E_i)``."""
    d = 1 << state.layout.width(register)
    if povm.dim != d:
        raise DomainError(f"POVM acts on dimension {povm.dim}, register {register!r} has {d}")
    psi = state.register_view(register)
    probs = np.array([np.einsum("hdl,de,hel->", psi.conj(), e, psi).real for e in povm.effects])
    probs = np.clip(probs, 0.0, None)
    outcome = _sample(probs, as_rng(rng))
    post = np.einsum("de,hel->hdl", povm.kraus[outcome], psi)
    weight = float(np.vdot(post, post).real)
    return MeasurementRecord(outcome, weight, StateVector(state.layout, post.ravel() / math.sqrt(weight), check=False))


def select_state(state: StateVector, register: str, r0: int) -> tuple[StateVector, float]:
    """Idealised selection: project ``register`` onto ``r0`` and renormalise.

    Returns the post-selection state and its prior probability (the weight).
    """
    width = state.layout.width(register)
    if not 0 <= r0 < (1 << width):
        raise DomainError(f"r0={r0} does not fit register {register!r} of width {width}")
    weight = float(distribution(state, register)[r0])
    if weight < SELECTION_WEIGHT_TOL:
        raise SelectionImpossibleError(f"r0={r0} is absent from register {register!r} (weight {weight:.3g})")
    return _project(state, register, r0)[0], weight


class SelectionRecord(NamedTuple):
    qubit: int
    bell: int
    pvm: int
    accepted: bool


@dataclass(frozen=True)
class SelectionProtocolTrace:
    records: tuple[SelectionRecord, ...]

    @property
    def accepted(self) -> bool:
        return bool(self.records) and all(r.accepted for r in self.records)

    def to_json(self) -> list[dict]:
        return [{"qubit": r.qubit, "bell": r.bell, "pvm": r.pvm, "accepted": r.accepted} for r in self.records]

    @classmethod
    def from_json(cls, data: list[dict]) -> "SelectionProtocolTrace":
        return cls(tuple(SelectionRecord(int(d["qubit"]), int(d["bell"]), int(d["pvm"]), bool(d["accepted"]))
                         for d in data))


class SelectionResult(NamedTuple):
    post: StateVector
    trace: SelectionProtocolTrace
    attempts: int


def _compress(state: StateVector, register: str):
    """Split ``state`` into the register and an isometrically compressed environment.

    Returns ``(core, env_basis)`` with ``core`` of shape ``(d, k)``, ``k <= d``,
    such that the register-by-environment amplitude matrix equals
    ``core @ env_basis``.  The protocol only touches the register, so it can
    run on ``core`` and be mapped back exactly.
    """
    view = state.register_view(register)
    high, d, low = view.shape
    m = view.transpose(1, 0, 2).reshape(d, high * low)
    if high * low <= d:
        return m, None
    q, r = np.linalg.qr(m.T)
    return r.T, q.T


def _expand(core: np.ndarray, env_basis, like: StateVector, register: str) -> StateVector:
    view_shape = like.register_view(register).shape
    high, d, low = view_shape
    m = core if env_basis is None else core @ env_basis
    amps = m.reshape(d, high, low).transpose(1, 0, 2).ravel()
    amps = amps / np.linalg.norm(amps)
    return StateVector(like.layout, amps, check=False)


def _select_qubit(work: np.ndarray, reg_bit: int, s: int, qubit: int, rng):
    """One round of the tetrapartite protocol on register qubit ``reg_bit``.

    ``work`` is the (environment, register) vector.  Three qubits are
    appended below it: selector S = |s>, and an EPR pair (A, B) in phi+.
    A is Bell-measured together with the register qubit, which teleports
    that qubit onto B; B gets the Pauli correction, then the selector is
    XORed into B by a CNOT and B is measured in the computational basis.
    B reading 0 means the register qubit held ``s``.
    """
    n_work = int(work.size).bit_length() - 1
    layout = RegisterLayout([("work", n_work), ("sel", 1), ("epr_a", 1), ("epr_b", 1)], max_qubits=n_work + 3)
    ancilla = np.zeros(8, dtype=np.complex128)
    ancilla[(s << 2) | 0b00] = ancilla[(s << 2) | 0b11] = 1.0 / math.sqrt(2.0)
    ext = StateVector(layout, np.kron(work, ancilla), check=False)
    r_bit, sel_bit, a_bit, b_bit = reg_bit + 3, 2, 1, 0

    bell = bell_measure(ext, r_bit, a_bit, rng)
    z, x = bell.outcome & 1, bell.outcome >> 1
    fixes = ([not_(b_bit)] if x else []) + ([phase(b_bit, math.pi)] if z else [])
    ext = apply_circuit(bell.post_state, fixes + [cnot(sel_bit, b_bit)])
    pvm = measure_register(ext, "epr_b", rng)
    accepted = pvm.outcome == 0
    record = SelectionRecord(qubit, bell.outcome, pvm.outcome, accepted)
    if not accepted:
        return None, record
    # (register qubit, A) now sit in a known Bell state; keep its R=0, A=x slice
    # and put the register qubit back as |s>.
    col = pvm.post_state.amplitudes.reshape(-1, 8)[:, (s << 2) | (x << 1)]
    idx = np.arange(col.size)
    low = idx[((idx >> reg_bit) & 1) == 0]
    out = np.zeros_like(col)
    out[low | (s << reg_bit)] = col[low]
    return out / np.linalg.norm(out), record


def telepovm_select(state: StateVector, register: str, r0: int, rng,
                    max_attempts: int = DEFAULT_RETRY_BUDGET) -> SelectionResult:
    """Drive ``register`` to ``r0`` with the EPR / Bell / PVM selection protocol.

    Each register qubit is selected in turn by :func:`_select_qubit`.  A
    rejected round discards the run, and the whole selection restarts from a
    fresh copy of the input.  The returned trace holds the accepted run's
    per-qubit records.  ``attempts`` counts runs including the accepted one.
    On success the result equals :func:`select_state` (up to global phase).
    """
    select_state(state, register, r0)  # fail fast on absent r0
    rng = as_rng(rng)
    width = state.layout.width(register)
    core, env_basis = _compress(state, register)
    d, k = core.shape
    start = core.T.ravel()  # environment-major: work index = e * d + register value
    for attempt in range(1, max_attempts + 1):
        work = start
        records = []
        for i in range(width):
            work, record = _select_qubit(work, i, (r0 >> i) & 1, i, rng)
            records.append(record)
            if work is None:
                break
        else:
            post = _expand(work.reshape(k, d).T, env_basis, state, register)
            return SelectionResult(post, SelectionProtocolTrace(tuple(records)), attempt)
    raise SelectionImpossibleError(f"selection of r0={r0} not accepted within {max_attempts} attempts")
