"""Register layouts and immutable statevectors.

Bit convention
--------------
Registers are declared most-significant first.  For a layout
``[("first", 3), ("second", 4)]`` the basis index is
``first << 4 | second``.  Inside a register, local qubit ``j`` is bit ``j``
of the register value, and the *global* qubit index used by gates is the
bit position in the full basis index: ``offset(register) + j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import CapacityError, DomainError

__all__ = ["DEFAULT_MAX_QUBITS", "NORM_TOL", "RegisterLayout", "StateVector", "zero_state",
           "basis_state", "from_amplitudes", "probability_of", "distribution", "fidelity"]

DEFAULT_MAX_QUBITS = 24
NORM_TOL = 1e-10


@dataclass(frozen=True)
class RegisterLayout:
    """Named, contiguous qubit spans."""

    spans: tuple[tuple[str, int], ...]
    max_qubits: int = DEFAULT_MAX_QUBITS

    def __init__(self, spans: Iterable[tuple[str, int]], max_qubits: int = DEFAULT_MAX_QUBITS):
        spans = tuple((str(name), int(width)) for name, width in spans)
        names = [name for name, _ in spans]
        if not spans:
            raise DomainError("layout needs at least one register")
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate register names in {names}")
        if any(width < 1 for _, width in spans):
            raise DomainError("register widths must be >= 1")
        total = sum(width for _, width in spans)
        if total > max_qubits:
            raise CapacityError(f"layout needs {total} qubits, budget is {max_qubits}")
        object.__setattr__(self, "spans", spans)
        object.__setattr__(self, "max_qubits", int(max_qubits))

    @property
    def total_qubits(self) -> int:
        return sum(width for _, width in self.spans)

    @property
    def dim(self) -> int:
        return 1 << self.total_qubits

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.spans)

    def width(self, name: str) -> int:
        for reg, width in self.spans:
            if reg == name:
                return width
        raise DomainError(f"unknown register {name!r}; layout has {self.names}")

    def offset(self, name: str) -> int:
        below = 0
        for reg, width in reversed(self.spans):
            if reg == name:
                return below
            below += width
        raise DomainError(f"unknown register {name!r}; layout has {self.names}")

    def qubit(self, name: str, j: int) -> int:
        """Global qubit index of local qubit ``j`` of register ``name``."""
        width = self.width(name)
        if not 0 <= j < width:
            raise DomainError(f"qubit {j} out of range for register {name!r} of width {width}")
        return self.offset(name) + j

    def index(self, values: Mapping[str, int]) -> int:
        """Basis index for the given per-register values (missing ones are 0)."""
        unknown = set(values) - set(self.names)
        if unknown:
            raise DomainError(f"unknown registers {sorted(unknown)}")
        idx = 0
        for name, width in self.spans:
            v = int(values.get(name, 0))
            if not 0 <= v < (1 << width):
                raise DomainError(f"value {v} does not fit register {name!r} of width {width}")
            idx = (idx << width) | v
        return idx

    def decode(self, index: int) -> dict[str, int]:
        out = {}
        for name, width in reversed(self.spans):
            out[name] = index & ((1 << width) - 1)
            index >>= width
        return dict(reversed(list(out.items())))


class StateVector:
    """Unit-norm amplitudes over a :class:`RegisterLayout`.

    The amplitude array is read-only; operations build new states.
    """

    __slots__ = ("layout", "amplitudes")

    def __init__(self, layout: RegisterLayout, amplitudes: np.ndarray, *, check: bool = True):
        amps = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if amps.shape != (layout.dim,):
            raise DomainError(f"expected {layout.dim} amplitudes, got shape {amps.shape}")
        if check:
            norm = float(np.vdot(amps, amps).real)
            if abs(norm - 1.0) > NORM_TOL:
                raise DomainError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        self.layout = layout
        self.amplitudes = amps

    def __repr__(self):
        return f"StateVector({self.layout.spans}, {self.layout.total_qubits} qubits)"

    def copy_amplitudes(self) -> np.ndarray:
        """Writable copy of the amplitudes, for building a new state."""
        return self.amplitudes.copy()

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def register_view(self, name: str) -> np.ndarray:
        """Amplitudes as a ``(high, 2**width, low)`` array around register ``name``."""
        off, width = self.layout.offset(name), self.layout.width(name)
        return self.amplitudes.reshape(-1, 1 << width, 1 << off)

    def dump(self, nonzero_only: bool = False, tol: float = 0.0) -> str:
        """Text dump, one ``index re im`` line per amplitude, 12 significant digits."""
        lines = []
        for i, z in enumerate(self.amplitudes):
            if nonzero_only and abs(z) <= tol:
                continue
            lines.append(f"{i} {z.real + 0.0:.12g} {z.imag + 0.0:.12g}")  # +0.0 folds -0
        return "\n".join(lines)


def _check_layout(layout: RegisterLayout) -> None:
    if layout.total_qubits > layout.max_qubits:
        raise CapacityError(f"layout needs {layout.total_qubits} qubits, budget is {layout.max_qubits}")


def zero_state(layout: RegisterLayout) -> StateVector:
    _check_layout(layout)
    amps = np.zeros(layout.dim, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(layout, amps, check=False)


def basis_state(layout: RegisterLayout, values: Mapping[str, int]) -> StateVector:
    _check_layout(layout)
    amps = np.zeros(layout.dim, dtype=np.complex128)
    amps[layout.index(values)] = 1.0
    return StateVector(layout, amps, check=False)


def from_amplitudes(layout: RegisterLayout, amplitudes, normalize: bool = False) -> StateVector:
    amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
    if normalize:
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise DomainError("cannot normalize the zero vector")
        amps = amps / norm
    return StateVector(layout, amps)


def distribution(state: StateVector, register: str) -> np.ndarray:
    """Marginal Born probabilities of every value of ``register``."""
    layout = state.layout
    return kernels.register_probabilities(state.amplitudes, layout.offset(register), layout.width(register))


def probability_of(state: StateVector, register: str, value: int) -> float:
    width = state.layout.width(register)
    if not 0 <= value < (1 << width):
        raise DomainError(f"value {value} does not fit register {register!r} of width {width}")
    p = distribution(state, register)[value]
    return float(min(max(p, 0.0), 1.0))


def fidelity(s1: StateVector, s2: StateVector) -> float:
    """``|<s1|s2>|**2``; the layouts must match."""
    if s1.layout.spans != s2.layout.spans:
        raise DomainError(f"layout mismatch: {s1.layout.spans} vs {s2.layout.spans}")
    f = abs(np.vdot(s1.amplitudes, s2.amplitudes)) ** 2
    return float(min(f, 1.0))
