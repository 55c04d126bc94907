"""
test_measurement_planner.py

Description:
    Tests for clique covers, shot estimates, shot sampling and gate
    estimates.
"""

# Standard libraries
import itertools
import logging

# Non-standard libraries
import numpy as np
import pytest

# Custom libraries
from src.classes import measurement_planner as mp
from src.classes.pauli import PauliSum
from src.utils import eigen_utils
from src.utils.errors import (InvalidVariance, NonHermitian, TooManyQubits,
                              ZeroShots)
from tests.helpers import random_hamiltonian, random_state


# Four mutually anticommuting words on two qubits
ANTICOMMUTING = ("XI", "YI", "ZX", "ZY")


@pytest.mark.parametrize("seed", range(5))
def test_clique_cover_partitions_words(seed):
    rng = np.random.default_rng(seed)
    H = random_hamiltonian(4, 40, rng)
    cliques = mp.clique_cover(H)

    covered = [word for clique in cliques for word in clique]
    expected = [word for word in H.words() if not word.is_identity]
    assert sorted(covered) == sorted(expected)
    for clique in cliques:
        assert all(not a.commutes(b)
                   for a, b in itertools.combinations(clique, 2))


def test_identity_is_kept_as_constant():
    H = PauliSum.from_dict({"II": -1.5, "XI": 0.5, "ZZ": 0.25})
    plan = mp.build_plan(H)
    assert plan.constant == pytest.approx(-1.5)
    assert plan.n_terms == 2


def test_single_equal_weight_clique():
    H = PauliSum.from_dict({label: 1.0 for label in ANTICOMMUTING})
    plan = mp.build_plan(H)
    assert len(plan.cliques) == 1
    assert plan.cliques[0].gamma == pytest.approx(2.0)

    estimate = mp.estimate_shots(plan)
    assert estimate.ratio == pytest.approx(4.0)
    assert estimate.bound == pytest.approx(4.0)
    assert estimate.M_ungrouped == pytest.approx(4 * estimate.M_grouped)


@pytest.mark.parametrize("seed", range(5))
def test_ratio_within_bound(seed):
    rng = np.random.default_rng(seed)
    H = random_hamiltonian(4, 30, rng, identity=False)
    plan = mp.build_plan(H, epsilon=1e-2)
    variances = {word: float(rng.uniform()) for word in H.words()}
    estimate = mp.estimate_shots(plan, variances)

    largest = max(len(clique) for clique in plan.cliques)
    assert 1 - 1e-12 <= estimate.ratio <= estimate.bound + 1e-12
    assert estimate.bound <= largest + 1e-12
    assert estimate.M_grouped <= estimate.M_ungrouped


def test_zero_variances():
    H = PauliSum.from_dict({"XI": 1.0, "ZZ": 0.5})
    plan = mp.build_plan(H)
    estimate = mp.estimate_shots(plan, {"XI": 0., "ZZ": 0.})
    assert (estimate.ratio, estimate.bound) == (1., 1.)
    assert estimate.M_grouped == 0.


def test_invalid_variance():
    plan = mp.build_plan(PauliSum.from_dict({"X": 1.0}))
    with pytest.raises(InvalidVariance):
        mp.estimate_shots(plan, {"X": 1.5})


def test_rounding_variance_is_clamped(caplog):
    plan = mp.build_plan(PauliSum.from_dict({"X": 1.0, "Z": 1.0}))
    with caplog.at_level(logging.WARNING):
        clamped = mp.estimate_shots(plan, {"X": 1 + 1e-12, "Z": 1.0})
    assert "Variance of `X` is" in caplog.text
    assert clamped.M_grouped == pytest.approx(
        mp.estimate_shots(plan).M_grouped)


def test_non_hermitian_plan():
    with pytest.raises(NonHermitian):
        mp.build_plan(PauliSum(1, [("X", 1j)]))


@pytest.mark.parametrize("size,expected", [(1, (0, 0)), (2, (4, 4)),
                                           (3, (8, 8))])
def test_gate_estimate(size, expected):
    assert mp.gate_estimate(size, 4) == expected


def test_gate_estimate_rejects_empty_clique():
    with pytest.raises(ValueError):
        mp.gate_estimate(0, 4)


@pytest.mark.parametrize("method", ["lcu", "seqrot"])
def test_simulated_energy_within_error(method, rng):
    H = random_hamiltonian(3, 20, rng)
    state = random_state(3, rng)
    plan = mp.build_plan(H, method=method)
    simulation = mp.simulate_shots(state, plan, shots=20000, seed=5)

    assert simulation.exact_energy == pytest.approx(
        eigen_utils.expectation(H, state), abs=1e-9)
    assert abs(simulation.energy - simulation.exact_energy) < \
        3 * simulation.standard_error

    for clique, stats in zip(plan.cliques, simulation.cliques):
        means = mp.exact_expectations(state, PauliSum(3, clique.terms))
        expected = sum(c * means[w] for w, c in clique.terms) / clique.gamma
        assert stats["exact_mean"] == pytest.approx(expected, abs=1e-9)
        assert stats["exact_variance"] >= 0


def test_simulation_is_seeded(rng):
    H = random_hamiltonian(2, 8, rng)
    state = random_state(2, rng)
    plan = mp.build_plan(H)
    first = mp.simulate_shots(state, plan, shots=500, seed=9)
    second = mp.simulate_shots(state, plan, shots=500, seed=9)
    assert first.energy == second.energy


def test_energy_is_linear_in_hamiltonian(rng):
    H = random_hamiltonian(3, 12, rng)
    state = random_state(3, rng)
    single = mp.simulate_shots(state, mp.build_plan(H), shots=10)
    double = mp.simulate_shots(state, mp.build_plan(2 * H), shots=10)
    assert double.exact_energy == pytest.approx(2 * single.exact_energy)


def test_simulation_guards(rng):
    H = random_hamiltonian(3, 5, rng)
    plan = mp.build_plan(H)
    state = random_state(3, rng)
    with pytest.raises(ZeroShots):
        mp.simulate_shots(state, plan, shots=0)
    with pytest.raises(TooManyQubits):
        mp.simulate_shots(state, plan, shots=10, max_qubits=2)


def test_sequential_anticommuting_pair_is_uncorrelated(rng):
    state = random_state(2, rng)
    shots = 40000
    a, b = mp.sample_sequential_pair(state, "ZI", "XI", shots, seed=3)
    covariance = np.mean(a * b) - np.mean(a) * np.mean(b)
    assert abs(covariance) < 3 / np.sqrt(shots)
    # After a Z outcome, X averages to zero
    assert abs(np.mean(b)) < 3 / np.sqrt(shots)


def test_sequential_commuting_pair_is_consistent(rng):
    state = random_state(2, rng)
    a, b = mp.sample_sequential_pair(state, "ZI", "ZI", 1000, seed=4)
    assert np.array_equal(a, b)


def test_measurement_report():
    H = PauliSum.from_dict({"II": 0.3, **{label: 1.0
                                          for label in ANTICOMMUTING}})
    report = mp.measurement_report(H)
    assert report["terms_before"] == 4
    assert report["cliques_after"] == 1
    assert report["reduction_factor"] == 4.
    assert report["gate_estimates"] == [
        {"size": 4, "single_qubit": 6, "cnot": 6}]


def test_planner_simulates_ground_state():
    H = PauliSum.from_dict({"ZI": 1.0, "XI": 1.0, "IZ": 0.5})
    planner = mp.MeasurementPlanner({"shots": 2000, "seed": 1})
    simulation = planner.simulate(H)
    ground, _ = eigen_utils.ground_energy(H)
    assert simulation.exact_energy == pytest.approx(ground, abs=1e-8)
    assert abs(simulation.energy - ground) < 3 * simulation.standard_error \
        + 1e-12

    with pytest.raises(ValueError):
        mp.MeasurementPlanner(method="qr")
