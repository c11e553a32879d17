"""End-to-end factoring drivers.

Three routes share one result type: the textbook Shor flow with a
simulated period-finding circuit, the quantum-oracle (QO) flow that asks
"does ``a_j**r0 = 1 (mod n)``?" after selecting ``r0`` in a superposed
period register, and plain trial division.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gates, measurement, numtheory
from .errors import ClassificationError, DomainError
from .statevector import DEFAULT_MAX_QUBITS, RegisterLayout, StateVector, distribution, zero_state

__all__ = [
    "Method", "Outcome", "AttemptTrace", "FactoringResult", "ShorConfig", "QoConfig",
    "classify", "shor_register_bits", "period_finding_state", "first_register_distribution",
    "build_qo_state", "shor_factor", "qo_factor", "classical_factor",
]


class Method(str, enum.Enum):
    SHOR = "shor"
    QO = "qo"
    CLASSICAL = "classical"


class Outcome(str, enum.Enum):
    SUCCESS = "success"
    ODD_PERIOD = "odd_period"
    TRIVIAL_GCDS = "trivial_gcds"
    NO_INFORMATION = "no_information"


@dataclass(frozen=True)
class AttemptTrace:
    a: int
    outcome: Outcome
    gcd_shortcut: int | None = None
    measured_t: int | None = None
    candidate_r: int | None = None

    @property
    def r_even(self) -> bool:
        return self.candidate_r is not None and self.candidate_r % 2 == 0

    def to_json(self) -> dict:
        return {"a": self.a, "gcd_shortcut": self.gcd_shortcut, "t": self.measured_t,
                "r": self.candidate_r, "outcome": self.outcome.value}

    @classmethod
    def from_json(cls, d: dict) -> "AttemptTrace":
        return cls(a=d["a"], outcome=Outcome(d["outcome"]), gcd_shortcut=d["gcd_shortcut"],
                   measured_t=d["t"], candidate_r=d["r"])


@dataclass
class FactoringResult:
    n: int
    method: Method
    factors: tuple[int, int] | None
    seed: int | None
    attempts: list[AttemptTrace] = field(default_factory=list)
    # diagnostics, not part of the serialised schema
    note: str | None = field(default=None, compare=False)
    selections: list[dict] = field(default_factory=list, compare=False, repr=False)

    @property
    def success(self) -> bool:
        return self.factors is not None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "method": self.method.value,
            "factors": list(self.factors) if self.factors else None,
            "seed": self.seed,
            "attempts": [a.to_json() for a in self.attempts],
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, d: dict) -> "FactoringResult":
        return cls(n=d["n"], method=Method(d["method"]),
                   factors=tuple(d["factors"]) if d["factors"] else None,
                   seed=d["seed"], attempts=[AttemptTrace.from_json(a) for a in d["attempts"]])

    @classmethod
    def loads(cls, text: str) -> "FactoringResult":
        return cls.from_json(json.loads(text))

    def format_table(self) -> str:
        rows = [("#", "a", "t", "r", "outcome")]
        for i, at in enumerate(self.attempts, 1):
            t = "-" if at.measured_t is None else str(at.measured_t)
            r = "-" if at.candidate_r is None else str(at.candidate_r)
            outcome = at.outcome.value
            if at.gcd_shortcut is not None:
                outcome += f" (gcd {at.gcd_shortcut})"
            rows.append((str(i), str(at.a), t, r, outcome))
        widths = [max(len(row[c]) for row in rows) for c in range(4)]
        lines = ["  ".join(row[c].rjust(widths[c]) for c in range(4)) + "  " + row[4] for row in rows]
        return "\n".join(lines)


@dataclass(frozen=True)
class ShorConfig:
    """Knobs for :func:`shor_factor`.

    ``first_register_bits`` defaults to ``ceil(log2(n**2))`` so ``q >= n**2``.
    Smaller overrides are accepted; the 3-bit ``n = 15`` layout still works
    because the periods there divide ``q``.
    ``base`` pins ``a`` instead of drawing it at random.
    """

    first_register_bits: int | None = None
    measure_second_first: bool = True
    max_attempts: int = 64
    rng_seed: int = 0
    base: int | None = None
    max_qubits: int = DEFAULT_MAX_QUBITS


@dataclass(frozen=True)
class QoConfig:
    """Knobs for :func:`qo_factor`.

    ``h_cap`` second registers are simulated at once; the coprime bases are
    processed in batches of that size.  ``idealized`` swaps the explicit
    selection protocol for the single-shot projection.
    """

    h_cap: int = 2
    omega: float = 0.0
    r0_strategy: str = "ascending"
    max_questions: int = 1024
    rng_seed: int = 0
    bases: tuple[int, ...] | None = None
    idealized: bool = False
    retry_budget: int = measurement.DEFAULT_RETRY_BUDGET
    max_qubits: int = DEFAULT_MAX_QUBITS

    def __post_init__(self):
        if self.h_cap < 1:
            raise DomainError("h_cap must be >= 1")
        if self.r0_strategy not in ("ascending", "random"):
            raise DomainError(f"unknown r0 strategy {self.r0_strategy!r}")


def classify(n: int) -> None:
    """Reject inputs the quantum pipelines cannot factor."""
    if n < 3:
        raise ClassificationError(f"{n} is too small to factor")
    if n >= numtheory.MAX_MODULUS:
        raise ClassificationError(f"{n} exceeds the supported width (< 2**31)")
    if n % 2 == 0:
        raise ClassificationError(f"{n} is even; 2 is a factor")
    if numtheory.is_prime(n):
        raise ClassificationError(f"{n} is prime")
    p = numtheory.prime_power_base(n)
    if p is not None:
        raise ClassificationError(f"{n} is a power of the prime {p}")


def _sorted_pair(g: int, n: int) -> tuple[int, int]:
    return tuple(sorted((g, n // g)))


def shor_register_bits(n: int, override: int | None = None) -> int:
    if override is None:
        return (n * n - 1).bit_length()
    if override < 1:
        raise DomainError(f"first register needs at least 1 bit, got {override}")
    return override


def period_finding_state(n: int, a: int, first_bits: int, rng=None, measure_second: bool = False,
                         max_qubits: int = DEFAULT_MAX_QUBITS) -> StateVector:
    """State of the two registers just before the first register is read.

    ``A_q`` on ``first``, ``U_f`` into ``second``, optionally a measurement of
    ``second`` (needs ``rng``), ``A_q`` on ``first`` again.  The first
    register is finally relabelled by bit reversal so that it holds the
    Fourier index ``t`` directly.
    """
    layout = RegisterLayout([("first", first_bits), ("second", (n - 1).bit_length())], max_qubits=max_qubits)
    state = gates.apply_Aq(zero_state(layout), "first")
    state = gates.apply_Uf(state, "first", "second", a, n)
    if measure_second:
        state = measurement.measure_register(state, "second", rng).post_state
    state = gates.apply_Aq(state, "first")
    return gates.reverse_register(state, "first")


def first_register_distribution(n: int, a: int, first_bits: int) -> dict[int, float]:
    """Exact marginal of ``t`` (no intermediate measurement), zero entries dropped."""
    probs = distribution(period_finding_state(n, a, first_bits), "first")
    return {t: float(p) for t, p in enumerate(probs) if p > 1e-15}


def shor_factor(n: int, cfg: ShorConfig = ShorConfig()) -> FactoringResult:
    classify(n)
    bits = shor_register_bits(n, cfg.first_register_bits)
    q = 1 << bits
    rng = np.random.default_rng(cfg.rng_seed)
    result = FactoringResult(n, Method.SHOR, None, cfg.rng_seed)
    for _ in range(cfg.max_attempts):
        a = cfg.base if cfg.base is not None else int(rng.integers(2, n))
        if not 2 <= a < n:
            raise DomainError(f"base must satisfy 2 <= a < n, got {a}")
        g, _trace = numtheory.gcd(a, n)
        if g > 1:
            result.attempts.append(AttemptTrace(a, Outcome.SUCCESS, gcd_shortcut=g))
            result.factors = _sorted_pair(g, n)
            return result
        state = period_finding_state(n, a, bits, rng, cfg.measure_second_first, cfg.max_qubits)
        t = measurement.measure_register(state, "first", rng).outcome
        cand = numtheory.continued_fraction_period(t, q, n)
        if cand is None:
            result.attempts.append(AttemptTrace(a, Outcome.NO_INFORMATION, measured_t=t))
            continue
        r = cand.r
        if numtheory.mod_pow(a, r, n) != 1:
            r *= 2  # t/q may have reduced to a divisor of the period
            if numtheory.mod_pow(a, r, n) != 1:
                result.attempts.append(AttemptTrace(a, Outcome.NO_INFORMATION, measured_t=t, candidate_r=r))
                continue
        if r % 2:
            result.attempts.append(AttemptTrace(a, Outcome.ODD_PERIOD, measured_t=t, candidate_r=r))
            continue
        pair = numtheory.factors_from_period(a, r, n)
        if pair is None:
            result.attempts.append(AttemptTrace(a, Outcome.TRIVIAL_GCDS, measured_t=t, candidate_r=r))
            continue
        result.attempts.append(AttemptTrace(a, Outcome.SUCCESS, measured_t=t, candidate_r=r))
        result.factors = pair
        return result
    result.note = f"no factors within {cfg.max_attempts} attempts"
    return result


def qo_layout(n: int, h: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> RegisterLayout:
    width = (n - 1).bit_length()
    return RegisterLayout([("first", width)] + [(f"second{j}", width) for j in range(h)], max_qubits=max_qubits)


def build_qo_state(n: int, bases: Sequence[int], omega: float = 0.0,
                   max_qubits: int = DEFAULT_MAX_QUBITS) -> StateVector:
    """``sum_r exp(-i*omega*r) |r> (x)_j |bases[j]**r mod n>`` over the first register."""
    layout = qo_layout(n, len(bases), max_qubits)
    state = gates.apply_Aq(zero_state(layout), "first")
    state = gates.apply_Uf_multi(state, "first", [f"second{j}" for j in range(len(bases))], list(bases), n)
    return gates.apply_phase_ramp(state, "first", omega)


def qo_factor(n: int, cfg: QoConfig = QoConfig()) -> FactoringResult:
    """Factor ``n`` by asking the oracle whether ``a_j**r0 = 1 (mod n)``.

    For each batch of ``h_cap`` coprime bases the superposed state is built,
    ``r0`` is selected in the first register, each second register (now a
    definite value) goes through the NOT/XOR readout, and an affirmative
    answer with even ``r0`` is turned into factors.  With the ascending
    strategy a base stops being asked once it answered, since later
    affirmatives are multiples of its order and never split ``n``.
    """
    classify(n)
    bases = list(cfg.bases) if cfg.bases is not None else numtheory.coprime_list(n, n)
    for a in bases:
        if not 2 <= a < n or math.gcd(a, n) != 1:
            raise DomainError(f"base {a} is not a unit in 2..{n - 1}")
    width = (n - 1).bit_length()
    qo_layout(n, min(cfg.h_cap, len(bases)) or 1, cfg.max_qubits)  # capacity check up front
    rng = np.random.default_rng(cfg.rng_seed)
    result = FactoringResult(n, Method.QO, None, cfg.rng_seed)
    questions = 0
    for start in range(0, len(bases), cfg.h_cap):
        batch = bases[start:start + cfg.h_cap]
        state = build_qo_state(n, batch, cfg.omega, cfg.max_qubits)
        r0_values = np.arange(1, n)
        if cfg.r0_strategy == "random":
            r0_values = rng.permutation(r0_values)
        pending = list(range(len(batch)))
        for r0 in map(int, r0_values):
            if questions >= cfg.max_questions:
                result.note = f"no factors within {cfg.max_questions} questions"
                return result
            questions += 1
            if cfg.idealized:
                post, _w = measurement.select_state(state, "first", r0)
                result.selections.append({"r0": r0, "attempts": 1, "trace": []})
            else:
                sel = measurement.telepovm_select(state, "first", r0, rng, cfg.retry_budget)
                post = sel.post
                result.selections.append({"r0": r0, "attempts": sel.attempts, "trace": sel.trace.to_json()})
            for j in list(pending):
                a = batch[j]
                value = measurement.measure_register(post, f"second{j}", rng).outcome
                if gates.readout_is_one(value, width):
                    result.attempts.append(AttemptTrace(a, Outcome.NO_INFORMATION, candidate_r=r0))
                    continue
                if cfg.r0_strategy == "ascending":
                    pending.remove(j)
                if r0 % 2:
                    result.attempts.append(AttemptTrace(a, Outcome.ODD_PERIOD, candidate_r=r0))
                    continue
                pair = numtheory.factors_from_period(a, r0, n)
                if pair is None:
                    result.attempts.append(AttemptTrace(a, Outcome.TRIVIAL_GCDS, candidate_r=r0))
                    continue
                result.attempts.append(AttemptTrace(a, Outcome.SUCCESS, candidate_r=r0))
                result.factors = pair
                return result
            if not pending:
                break
    result.note = "every base exhausted without a nontrivial split"
    return result


def classical_factor(n: int) -> FactoringResult:
    """Trial division: smallest prime factor and its cofactor."""
    if n < 2:
        raise DomainError(f"cannot factor {n}")
    result = FactoringResult(n, Method.CLASSICAL, None, None)
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            result.factors = (p, n // p)
            return result
    result.note = f"{n} is prime"
    return result
