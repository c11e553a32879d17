import json
import math

import numpy as np
import pytest

from qoshor import gates
from qoshor.errors import DomainError, PovmValidationError, SelectionImpossibleError
from qoshor.measurement import (Povm, SelectionProtocolTrace, bell_measure, measure_register,
                                povm_measure, select_state, telepovm_select)
from qoshor.pipelines import build_qo_state, period_finding_state
from qoshor.statevector import (RegisterLayout, basis_state, distribution, fidelity, from_amplitudes,
                                probability_of, zero_state)

SHOTS = 10_000


def assert_born(counts, probs, shots=SHOTS):
    for k, p in enumerate(probs):
        sigma = math.sqrt(shots * p * (1 - p))
        assert abs(counts[k] - shots * p) <= 3 * sigma + 1e-9, (k, counts[k], shots * p)


def bell_state(label):
    # amplitudes on (a, b) = (qubit 1, qubit 0) for phi+, phi-, psi+, psi-
    v = {0: [1, 0, 0, 1], 1: [1, 0, 0, -1], 2: [0, 1, 1, 0], 3: [0, -1, 1, 0]}[label]
    return np.array(v) / math.sqrt(2)


# --- projective --------------------------------------------------------------------

def test_measure_zero_state():
    s = zero_state(RegisterLayout([("a", 2), ("b", 3)]))
    for reg in ("a", "b"):
        rec = measure_register(s, reg, 0)
        assert rec.outcome == 0 and rec.probability == 1.0


def test_measure_post_state_projects(make_random_state, rng):
    s = make_random_state([("a", 2), ("b", 2)])
    rec = measure_register(s, "a", rng)
    assert probability_of(rec.post_state, "a", rec.outcome) == pytest.approx(1.0, abs=1e-12)
    assert rec.probability == pytest.approx(distribution(s, "a")[rec.outcome], abs=1e-12)
    assert rec.post_state.norm() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("a,support", [(7, [0, 2, 4, 6]), (11, [0, 4])])
def test_measure_first_register_after_qft(a, support):
    s = period_finding_state(15, a, 3)
    outcomes = {measure_register(s, "first", seed).outcome for seed in range(200)}
    assert outcomes == set(support)
    for t in support:
        assert probability_of(s, "first", t) == pytest.approx(1 / len(support), abs=1e-12)


def test_measure_register_born_frequencies(rng):
    layout = RegisterLayout([("r", 2), ("o", 1)])
    s = from_amplitudes(layout, [0.1, 0.3j, 0.5, 0.2, -0.4, 0.6, 0.1j, 0.3], normalize=True)
    probs = distribution(s, "r")
    counts = np.bincount([measure_register(s, "r", rng).outcome for _ in range(SHOTS)], minlength=4)
    assert_born(counts, probs)


def test_same_seed_same_outcome(make_random_state):
    s = make_random_state([("r", 3)])
    assert measure_register(s, "r", 5).outcome == measure_register(s, "r", 5).outcome


# --- Bell ---------------------------------------------------------------------------

@pytest.mark.parametrize("label", range(4))
def test_bell_measure_on_bell_state(label):
    layout = RegisterLayout([("a", 1), ("b", 1)])
    s = from_amplitudes(layout, bell_state(label))
    rec = bell_measure(s, 1, 0, 3)
    assert rec.outcome == label
    assert rec.probability == pytest.approx(1.0)
    assert fidelity(rec.post_state, s) == pytest.approx(1.0)


def test_bell_measure_on_00(rng):
    s = zero_state(RegisterLayout([("a", 1), ("b", 1)]))
    # |00> = (phi+ + phi-)/sqrt2
    expected = [abs(np.vdot(bell_state(k), [1, 0, 0, 0])) ** 2 for k in range(4)]
    assert expected == pytest.approx([0.5, 0.5, 0.0, 0.0])
    counts = np.bincount([bell_measure(s, 1, 0, rng).outcome for _ in range(SHOTS)], minlength=4)
    assert_born(counts, expected)


def test_bell_measure_post_state_is_bell(make_random_state, rng):
    s = make_random_state([("x", 1), ("a", 1), ("b", 1)])
    rec = bell_measure(s, 1, 0, rng)
    pair = rec.post_state.amplitudes.reshape(2, 4)
    row = pair[0] if np.linalg.norm(pair[0]) > 1e-9 else pair[1]
    assert abs(np.vdot(bell_state(rec.outcome), row / np.linalg.norm(row))) == pytest.approx(1.0)


def test_bell_measure_rejects_same_qubit():
    s = zero_state(RegisterLayout([("a", 2)]))
    with pytest.raises(DomainError):
        bell_measure(s, 1, 1, 0)


# --- POVM ---------------------------------------------------------------------------

def test_povm_validation():
    Povm.computational(2)
    Povm([np.eye(2)])
    with pytest.raises(PovmValidationError):
        Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0 + 1e-6])])
    with pytest.raises(PovmValidationError):
        Povm([np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])])
    with pytest.raises(PovmValidationError):
        Povm([np.array([[0.5, 0.1], [0.2, 0.5]]), np.array([[0.5, -0.1], [-0.2, 0.5]])])


def test_povm_computational_matches_projective(rng):
    layout = RegisterLayout([("o", 1), ("r", 2)])
    s = from_amplitudes(layout, rng.normal(size=8) + 1j * rng.normal(size=8), normalize=True)
    probs = distribution(s, "r")
    povm = Povm.computational(2)
    counts = np.bincount([povm_measure(s, "r", povm, rng).outcome for _ in range(SHOTS)], minlength=4)
    assert_born(counts, probs)
    rec = povm_measure(s, "r", povm, 1)
    proj = measure_register(s, "r", 1)
    assert rec.outcome == proj.outcome
    assert fidelity(rec.post_state, proj.post_state) == pytest.approx(1.0, abs=1e-12)


def test_trine_povm_on_zero(rng):
    trine = Povm.trine()
    assert len(trine) == 3 > trine.dim
    zero = np.array([1.0, 0.0])
    expected = [float(zero @ e.real @ zero) for e in trine.effects]
    assert expected == pytest.approx([2 / 3, 1 / 6, 1 / 6])
    s = zero_state(RegisterLayout([("q", 1)]))
    counts = np.bincount([povm_measure(s, "q", trine, rng).outcome for _ in range(SHOTS)], minlength=3)
    assert_born(counts, expected)


def test_trine_kraus_post_state():
    trine = Povm.trine()
    s = zero_state(RegisterLayout([("q", 1)]))
    rec = povm_measure(s, "q", trine, 0)
    phi = np.array([math.cos(math.pi * rec.outcome / 3), math.sin(math.pi * rec.outcome / 3)])
    assert abs(np.vdot(phi, rec.post_state.amplitudes)) == pytest.approx(1.0)
    for e, k in zip(trine.effects, trine.kraus):
        np.testing.assert_allclose(k @ k, e, atol=1e-12)


def test_identity_povm_leaves_state(make_random_state):
    s = make_random_state([("r", 2), ("o", 1)])
    rec = povm_measure(s, "r", Povm([np.eye(4)]), 0)
    assert rec.outcome == 0
    np.testing.assert_allclose(rec.post_state.amplitudes, s.amplitudes, atol=1e-12)


def test_povm_dimension_mismatch():
    with pytest.raises(DomainError):
        povm_measure(zero_state(RegisterLayout([("r", 2)])), "r", Povm.trine(), 0)


# --- selection ------------------------------------------------------------------------

def shor_superposition():
    layout = RegisterLayout([("r", 3), ("y", 4)])
    return gates.apply_Uf(gates.apply_Aq(zero_state(layout), "r"), "r", "y", 7, 15)


def test_select_state_example():
    post, weight = select_state(shor_superposition(), "r", 1)
    assert weight == pytest.approx(1 / 8)
    assert post.layout.decode(int(np.argmax(np.abs(post.amplitudes)))) == {"r": 1, "y": 7}
    assert probability_of(post, "r", 1) == pytest.approx(1.0)


def test_select_state_idempotent(make_random_state):
    s = make_random_state([("r", 3), ("o", 2)])
    once, _ = select_state(s, "r", 5)
    twice, weight = select_state(once, "r", 5)
    assert weight == pytest.approx(1.0)
    np.testing.assert_allclose(twice.amplitudes, once.amplitudes, atol=1e-15)


def test_select_state_absent_value():
    s = basis_state(RegisterLayout([("r", 3)]), {"r": 2})
    with pytest.raises(SelectionImpossibleError):
        select_state(s, "r", 3)
    with pytest.raises(SelectionImpossibleError):
        telepovm_select(s, "r", 3, 0)
    with pytest.raises(DomainError):
        select_state(s, "r", 8)


def test_selection_fixes_every_second_register():
    bases = [7, 11]
    state = build_qo_state(15, bases)
    for r0 in range(1, 15):
        post, _ = select_state(state, "first", r0)
        for j, a in enumerate(bases):
            assert probability_of(post, f"second{j}", pow(a, r0, 15)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("spans", [[("r", 3)], [("hi", 2), ("r", 3), ("lo", 1)], [("r", 2), ("env", 4)]])
def test_telepovm_matches_select_state(make_random_state, rng, spans):
    s = make_random_state(spans)
    for r0 in range(1 << dict(spans)["r"]):
        ideal, _ = select_state(s, "r", r0)
        res = telepovm_select(s, "r", r0, rng)
        assert fidelity(res.post, ideal) >= 1 - 1e-9
        assert res.trace.accepted
        assert [rec.qubit for rec in res.trace.records] == list(range(dict(spans)["r"]))


@pytest.mark.parametrize("seed", range(20))
def test_telepovm_on_selected_product_state(seed):
    layout = RegisterLayout([("r", 3), ("y", 2)])
    s = basis_state(layout, {"r": 5, "y": 2})
    res = telepovm_select(s, "r", 5, seed)
    assert res.attempts == 1
    assert fidelity(res.post, s) == pytest.approx(1.0)


def test_telepovm_attempts_geometric():
    layout = RegisterLayout([("r", 3)])
    uniform = from_amplitudes(layout, np.ones(8), normalize=True)
    rng = np.random.default_rng(99)
    runs = 400
    attempts = np.array([telepovm_select(uniform, "r", 3, rng).attempts for _ in range(runs)])
    w = 1 / 8
    mean, var = 1 / w, (1 - w) / w**2
    assert abs(attempts.mean() - mean) <= 3 * math.sqrt(var / runs)


def test_telepovm_retry_budget(make_random_state):
    s = make_random_state([("r", 4)])
    with pytest.raises(SelectionImpossibleError):
        # weight ~1/16, one attempt almost never suffices for all seeds tried
        for seed in range(50):
            telepovm_select(s, "r", 7, seed, max_attempts=1)


def test_selection_trace_json_round_trip(make_random_state):
    res = telepovm_select(make_random_state([("r", 2)]), "r", 2, 4)
    data = json.loads(json.dumps(res.trace.to_json()))
    assert set(data[0]) == {"qubit", "bell", "pvm", "accepted"}
    assert SelectionProtocolTrace.from_json(data) == res.trace
