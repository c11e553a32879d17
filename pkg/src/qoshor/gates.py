"""Unitary operations on :class:`~qoshor.statevector.StateVector`.

Gate qubit indices are global bit positions (see :mod:`qoshor.statevector`).

``A_q`` is applied exactly as the Hadamard / controlled-phase product
``H_{l-1} U_{l-2,l-1} H_{l-2} U_{l-3,l-1} U_{l-3,l-2} H_{l-3} ... H_1
U_{0,l-1} ... U_{0,1} H_0``, leftmost gate first, with
``U_{jk} = diag(1, 1, 1, exp(i*pi/2**(k-j)))`` on qubits ``j, k``.
No swap network follows, so the Fourier index comes out bit-reversed::

    A_q |x>  =  q**-0.5 * sum_t exp(2j*pi*t*x/q) |bit_reverse(t, l)>

Use :func:`fourier_value` to translate a measured register value into ``t``,
or :func:`reverse_register` to relabel the whole register.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DomainError
from .statevector import StateVector

__all__ = [
    "GateOp", "hadamard", "controlled_phase", "not_", "cnot", "phase",
    "apply_gate", "apply_circuit", "aq_gates", "apply_Aq", "bit_reverse", "fourier_value",
    "reverse_register", "apply_Uf", "apply_Uf_multi", "apply_phase_ramp",
    "ReadoutGate", "readout_circuit", "evaluate_readout", "readout_is_one", "format_readout",
]

_SQRT1_2 = 1.0 / math.sqrt(2.0)
_KINDS = ("hadamard", "controlled_phase", "not", "cnot", "phase")


@dataclass(frozen=True)
class GateOp:
    kind: str
    target: int
    control: int | None = None
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown gate kind {self.kind!r}")
        if self.kind in ("controlled_phase", "cnot"):
            if self.control is None:
                raise DomainError(f"{self.kind} needs a control qubit")
            if self.control == self.target:
                raise DomainError("control and target must differ")
        if not math.isfinite(self.theta):
            raise DomainError("phase angle must be finite")

    def qubits(self) -> tuple[int, ...]:
        return (self.target,) if self.control is None else (self.control, self.target)


def hadamard(target: int) -> GateOp:
    return GateOp("hadamard", target)


def controlled_phase(control: int, target: int, theta: float) -> GateOp:
    return GateOp("controlled_phase", target, control, float(theta))


def not_(target: int) -> GateOp:
    return GateOp("not", target)


def cnot(control: int, target: int) -> GateOp:
    return GateOp("cnot", target, control)


def phase(target: int, theta: float) -> GateOp:
    """``diag(1, exp(i*theta))`` on one qubit; ``theta = pi`` is Pauli Z."""
    return GateOp("phase", target, None, float(theta))


def _apply_inplace(amps: np.ndarray, gate: GateOp, total: int) -> None:
    for q in gate.qubits():
        if not 0 <= q < total:
            raise DomainError(f"qubit index {q} out of range for {total} qubits")
    kind = gate.kind
    if kind == "hadamard":
        kernels.apply_1q(amps, gate.target, _SQRT1_2, _SQRT1_2, _SQRT1_2, -_SQRT1_2)
    elif kind == "controlled_phase":
        kernels.apply_cphase(amps, gate.control, gate.target, complex(np.exp(1j * gate.theta)))
    elif kind == "not":
        kernels.apply_1q(amps, gate.target, 0.0, 1.0, 1.0, 0.0)
    elif kind == "cnot":
        kernels.apply_cnot(amps, gate.control, gate.target)
    else:
        kernels.apply_1q(amps, gate.target, 1.0, 0.0, 0.0, complex(np.exp(1j * gate.theta)))


def apply_circuit(state: StateVector, gates: Iterable[GateOp]) -> StateVector:
    """Apply ``gates`` in order, returning a new state."""
    amps = state.copy_amplitudes()
    total = state.layout.total_qubits
    for gate in gates:
        _apply_inplace(amps, gate, total)
    return StateVector(state.layout, amps, check=False)


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    return apply_circuit(state, (gate,))


def aq_gates(state_or_layout, register: str, inverse: bool = False) -> list[GateOp]:
    """Gate list of ``A_q`` (or its inverse) on ``register``."""
    layout = getattr(state_or_layout, "layout", state_or_layout)
    width = layout.width(register)
    q = [layout.qubit(register, j) for j in range(width)]
    gates = []
    for j in range(width - 1, -1, -1):
        for k in range(width - 1, j, -1):
            gates.append(controlled_phase(q[j], q[k], math.pi / 2 ** (k - j)))
        gates.append(hadamard(q[j]))
    if inverse:
        gates = [GateOp(g.kind, g.target, g.control, -g.theta) for g in reversed(gates)]
    return gates


def apply_Aq(state: StateVector, register: str, inverse: bool = False) -> StateVector:
    """Apply the Hadamard/controlled-phase product ``A_q`` to ``register``."""
    return apply_circuit(state, aq_gates(state.layout, register, inverse))


def bit_reverse(value: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def fourier_value(register_value: int, width: int) -> int:
    """Fourier index ``t`` carried by a register value after :func:`apply_Aq`."""
    return bit_reverse(register_value, width)


def _index_map(state: StateVector) -> np.ndarray:
    return np.arange(state.layout.dim, dtype=np.int64)


def _permuted(state: StateVector, source_index: np.ndarray) -> StateVector:
    # new[i] = old[source_index[i]]
    return StateVector(state.layout, state.amplitudes[source_index], check=False)


def reverse_register(state: StateVector, register: str) -> StateVector:
    """Relabel ``register`` values by bit reversal (a classical swap network)."""
    layout = state.layout
    off, width = layout.offset(register), layout.width(register)
    idx = _index_map(state)
    mask = (1 << width) - 1
    table = np.array([bit_reverse(v, width) for v in range(1 << width)], dtype=np.int64)
    values = (idx >> off) & mask
    return _permuted(state, (idx & ~(mask << off)) | (table[values] << off))


def _modexp_table(a: int, n: int, width: int) -> np.ndarray:
    if math.gcd(a, n) != 1:
        raise DomainError(f"base {a} is not coprime to {n}")
    table = np.empty(1 << width, dtype=np.int64)
    y = 1 % n
    for x in range(1 << width):
        table[x] = y
        y = (y * a) % n
    return table


def apply_Uf_multi(state: StateVector, source: str, targets: Sequence[str], bases: Sequence[int],
                   n: int) -> StateVector:
    """XOR ``bases[j]**x mod n`` into ``targets[j]`` for every source value ``x``.

    The map ``|x>|y_j> -> |x>|y_j ^ f_j(x)>`` is a self-inverse basis
    permutation, so it is unitary for any contents of the targets.
    """
    if n < 2:
        raise DomainError(f"modulus must be >= 2, got {n}")
    if len(targets) != len(bases) or not targets:
        raise DomainError("need the same, nonzero number of targets and bases")
    if len(set(targets)) != len(targets) or source in targets:
        raise DomainError("source and targets must be distinct registers")
    layout = state.layout
    s_off, s_width = layout.offset(source), layout.width(source)
    need = (n - 1).bit_length()
    idx = _index_map(state)
    x = (idx >> s_off) & ((1 << s_width) - 1)
    flip = np.zeros_like(idx)
    for target, a in zip(targets, bases):
        if layout.width(target) < need:
            raise DomainError(f"register {target!r} is narrower than the {need} bits needed for n={n}")
        flip |= _modexp_table(a, n, s_width)[x] << layout.offset(target)
    return _permuted(state, idx ^ flip)


def apply_Uf(state: StateVector, source: str, target: str, a: int, n: int) -> StateVector:
    """Modular exponentiation ``|x>|y> -> |x>|y ^ (a**x mod n)>``."""
    return apply_Uf_multi(state, source, [target], [a], n)


def apply_phase_ramp(state: StateVector, register: str, omega: float) -> StateVector:
    """Multiply every amplitude by ``exp(-i*omega*r)``, ``r`` the register value."""
    layout = state.layout
    off, width = layout.offset(register), layout.width(register)
    if omega == 0:
        return state
    r = np.arange(1 << width)
    ramp = np.exp(-1j * omega * r)
    amps = state.register_view(register) * ramp[None, :, None]
    return StateVector(layout, amps.ravel(), check=False)


class ReadoutGate(NamedTuple):
    kind: str  # "NOT" or "XOR"
    bits: tuple[int, ...]

    def __str__(self):
        return f"{self.kind} " + " ".join(f"b{b}" for b in self.bits)


def readout_circuit(width: int) -> list[ReadoutGate]:
    """NOT/XOR comparator against the constant 1.

    Bits ``b0..b{w-1}`` hold the register value; ``b{w}..b{2w-1}`` are a
    reference word, zero on entry.  ``NOT b{w}`` loads the constant 1 into
    the reference, then ``XOR bi b{w+i}`` leaves ``value ^ 1`` in the value
    bits.  That output word is all zeros exactly when the value is 1.
    """
    if width < 1:
        raise DomainError("readout width must be positive")
    gates = [ReadoutGate("NOT", (width,))]
    gates += [ReadoutGate("XOR", (i, width + i)) for i in range(width)]
    return gates


def evaluate_readout(gates: Sequence[ReadoutGate], bits: list[int]) -> list[int]:
    bits = list(bits)
    for gate in gates:
        if gate.kind == "NOT":
            (b,) = gate.bits
            bits[b] ^= 1
        elif gate.kind == "XOR":
            dst, src = gate.bits
            bits[dst] ^= bits[src]
        else:
            raise DomainError(f"unknown readout gate {gate.kind!r}")
    return bits


def readout_is_one(register_value: int, width: int) -> int:
    """Answer bit of the readout: 0 (affirmative) iff the register holds 1."""
    if not 0 <= register_value < (1 << width):
        raise DomainError(f"value {register_value} does not fit {width} bits")
    bits = [(register_value >> i) & 1 for i in range(width)] + [0] * width
    out = evaluate_readout(readout_circuit(width), bits)[:width]
    return int(any(out))


def format_readout(width: int) -> str:
    return "\n".join(str(g) for g in readout_circuit(width))
