import math

import numpy as np
import pytest

from qoshor.errors import CapacityError, DomainError
from qoshor.statevector import (RegisterLayout, StateVector, basis_state, distribution, fidelity,
                                from_amplitudes, probability_of, zero_state)


def test_layout_offsets_and_index():
    layout = RegisterLayout([("first", 3), ("second", 4)])
    assert layout.total_qubits == 7
    assert layout.offset("second") == 0
    assert layout.offset("first") == 4
    assert layout.index({"first": 5, "second": 9}) == 5 << 4 | 9
    assert layout.decode(5 << 4 | 9) == {"first": 5, "second": 9}
    assert layout.qubit("first", 2) == 6


def test_layout_rejects_bad_spans():
    with pytest.raises(DomainError):
        RegisterLayout([("x", 2), ("x", 1)])
    with pytest.raises(DomainError):
        RegisterLayout([("x", 0)])
    with pytest.raises(DomainError):
        RegisterLayout([("x", 2)]).width("y")
    with pytest.raises(DomainError):
        RegisterLayout([("x", 2)]).index({"x": 4})


def test_zero_state_single_qubit():
    s = zero_state(RegisterLayout([("q", 1)]))
    np.testing.assert_array_equal(s.amplitudes, [1, 0])


def test_zero_state_two_registers():
    s = zero_state(RegisterLayout([("first", 3), ("second", 4)]))
    assert s.amplitudes.shape == (128,)
    assert s.amplitudes[0] == 1 and np.count_nonzero(s.amplitudes) == 1


def test_capacity_error():
    with pytest.raises(CapacityError):
        zero_state(RegisterLayout([("big", 30)]))
    layout = RegisterLayout([("big", 26)], max_qubits=26)
    assert layout.total_qubits == 26


def test_amplitudes_are_read_only():
    s = zero_state(RegisterLayout([("q", 2)]))
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


def test_unnormalized_rejected():
    with pytest.raises(DomainError):
        StateVector(RegisterLayout([("q", 1)]), [1, 1])


def test_probability_uniform_and_zero():
    layout = RegisterLayout([("r", 3)])
    uniform = from_amplitudes(layout, np.ones(8), normalize=True)
    for v in range(8):
        assert probability_of(uniform, "r", v) == pytest.approx(1 / 8, abs=1e-12)
    assert probability_of(zero_state(layout), "r", 0) == 1.0
    with pytest.raises(DomainError):
        probability_of(uniform, "nope", 0)


def test_marginals_sum_to_one(make_random_state):
    s = make_random_state([("a", 2), ("b", 3), ("c", 1)])
    for reg in ("a", "b", "c"):
        assert distribution(s, reg).sum() == pytest.approx(1.0, abs=1e-10)


def test_fidelity_examples():
    layout = RegisterLayout([("q", 1)])
    zero, one = basis_state(layout, {"q": 0}), basis_state(layout, {"q": 1})
    plus = from_amplitudes(layout, [1, 1], normalize=True)
    assert fidelity(zero, zero) == pytest.approx(1.0)
    assert fidelity(zero, one) == 0.0
    assert fidelity(plus, zero) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        fidelity(zero, zero_state(RegisterLayout([("p", 1)])))


def test_dump_format():
    layout = RegisterLayout([("q", 1)])
    plus = from_amplitudes(layout, [1, -1j], normalize=True)
    lines = plus.dump().splitlines()
    x = 1 / math.sqrt(2)
    assert lines[0] == f"0 {x:.12g} 0"
    assert lines[1] == f"1 0 {-x:.12g}"
    assert lines[1].split()[2] == "-0.707106781187"
