"""
test_stabilizer_reducer.py

Description:
    Tests for stabilizer rotation, projection, subset selection and the
    reduction pipeline.
"""

# Standard libraries
import logging

# Non-standard libraries
import numpy as np
import pytest

# Custom libraries
from src.classes import stabilizer_reducer as sr
from src.classes.pauli import PauliSum, PauliWord, parse_word
from src.utils.eigen_utils import to_matrix
from src.utils.errors import (DependentStabilizers, DimensionMismatch,
                              IndexOutOfRange)
from tests.helpers import random_hamiltonian


TOL = 1e-9

# Unitary-partitioning target of A(r) on the toy Hamiltonian
TOY_TARGET = "YXYI"

THREE_QUBIT_LEVEL = {
    "III": -0.5, "XXX": 0.1, "YXX": 0.2, "XZX": 0.7, "XYX": 0.7, "YZX": 0.1,
    "XXZ": 0.2, "IIY": 0.6, "XXY": 0.5, "YXY": 0.1, "XZZ": 0.6, "ZZZ": 0.7,
    "YYZ": 0.2, "ZYY": 0.1,
}

TWO_QUBIT_LEVEL = {
    "II": -0.5, "XI": 0.5, "XX": 0.7, "YI": 0.1, "YX": -0.1, "XZ": 1.3,
    "IY": 0.6, "ZZ": 0.7,
}

ONE_QUBIT_LEVEL = {
    "lcu": {"I": -1.827, "X": -0.414, "Y": 0.648, "Z": -0.292},
    "seqrot": {"I": -1.827, "X": -0.198, "Y": 0.648, "Z": -0.467},
}

# Legacy mode keeps qubit 0 of the fully rotated frame, where
# X -> X, Z -> Y and Y -> -Z relative to the subset-rotated frame
LEGACY_ONE_QUBIT_LEVEL = {
    "lcu": {"I": -1.827, "X": -0.414, "Y": -0.292, "Z": -0.648},
    "seqrot": {"I": -1.827, "X": -0.198, "Y": -0.467, "Z": -0.648},
}

LEGACY_TERM_COUNTS = {
    "lcu": {3: 29, 2: 10, 1: 4},
    "seqrot": {3: 26, 2: 10, 1: 4},
}


################################################################################
#                                   Fixtures                                   #
################################################################################
@pytest.fixture(scope="module", params=["lcu", "seqrot"])
def toy_reducer(request, toy_hamiltonian):
    reducer = sr.ContextualSubspaceReducer(toy_hamiltonian,
                                           method=request.param,
                                           target=TOY_TARGET)
    reducer.prepare()
    return reducer


@pytest.fixture(scope="module")
def toy_sweep(toy_reducer):
    return toy_reducer.sweep()


def signed_z(n_qubits, qubit, sign):
    return PauliSum(n_qubits, [(PauliWord.single(n_qubits, qubit, "Z"), sign)])


def spectrum(H):
    return np.linalg.eigvalsh(to_matrix(H).toarray())


################################################################################
#                                    Tests                                     #
################################################################################
def test_toy_stabilizers(toy_reducer):
    assert toy_reducer.W_all.labels() == ["-YIYI", "+IXYI", "-IIIZ", "+A(r)"]
    assert toy_reducer.W_all.has_observable
    assert toy_reducer.progress["stabilizers"]


def test_toy_sweep_levels(toy_sweep, toy_hamiltonian):
    assert [row["qubits"] for row in toy_sweep.rows] == [0, 1, 2, 3, 4]
    energies = {row["qubits"]: row["energy"] for row in toy_sweep.rows}
    assert energies[0] == pytest.approx(-2.47484, abs=1e-4)
    assert energies[1] == pytest.approx(-2.6495, abs=1e-3)
    assert toy_sweep.hamiltonians[4].equals(toy_hamiltonian)
    assert energies[4] == pytest.approx(toy_sweep.exact_energy)

    ordered = [energies[q] for q in range(5)]
    assert all(a >= b - TOL for a, b in zip(ordered, ordered[1:]))


def test_toy_fixed_rows(toy_sweep):
    rows = {row["qubits"]: row for row in toy_sweep.rows}
    assert rows[3]["fixed"] == ["-IIIZ"]
    assert rows[2]["positions"] == [1, 2]
    assert rows[1]["positions"] == [1, 2, 3]
    assert rows[0]["positions"] == [0, 1, 2, 3]


def test_toy_exact_levels(toy_sweep):
    assert toy_sweep.hamiltonians[3].equals(
        PauliSum.from_dict(THREE_QUBIT_LEVEL), tol=TOL)
    assert toy_sweep.hamiltonians[2].equals(
        PauliSum.from_dict(TWO_QUBIT_LEVEL), tol=TOL)


def test_toy_one_qubit_level(toy_sweep):
    H = toy_sweep.hamiltonians[1]
    assert set(H.to_dict()) == {"I", "X", "Y", "Z"}
    assert H.equals(PauliSum.from_dict(ONE_QUBIT_LEVEL[toy_sweep.method]),
                    tol=1e-3)


def test_fixing_order(toy_hamiltonian, toy_reducer):
    selection = sr.greedy_stabilizer_selection(
        toy_hamiltonian, toy_reducer.W_all, method=toy_reducer.method)
    assert selection.strategy == "brute_force"
    assert selection.fixing_order == [(2,), (1, 2), (1, 2, 3), (0, 1, 2, 3)]
    assert selection.removal_order == [0, 3, 1, 2]


def test_greedy_matches_brute_force_on_toy(toy_hamiltonian, toy_reducer):
    brute = sr.greedy_stabilizer_selection(
        toy_hamiltonian, toy_reducer.W_all, method=toy_reducer.method)
    greedy = sr.greedy_stabilizer_selection(
        toy_hamiltonian, toy_reducer.W_all, method=toy_reducer.method,
        brute_force_max_subsets=0)
    assert greedy.strategy == "greedy"
    for size, level in brute.levels.items():
        assert greedy.levels[size].energy >= level.energy - TOL


def test_legacy_full_rotation_term_counts(toy_hamiltonian):
    counts = {}
    for method in ("seqrot", "lcu"):
        reducer = sr.ContextualSubspaceReducer(
            toy_hamiltonian, method=method, target=TOY_TARGET,
            legacy_full_rotation=True)
        report = reducer.reduce(4)
        assert report.legacy_full_rotation
        counts[method] = report.rows[0]["terms"]
        assert np.allclose(spectrum(report.hamiltonians[4]),
                           spectrum(toy_hamiltonian), atol=1e-8)
    assert counts == {"seqrot": 26, "lcu": 29}


@pytest.mark.parametrize("brute_force_max_subsets", [0, 4096])
def test_parallel_selection_matches_serial(toy_hamiltonian, toy_reducer,
                                           brute_force_max_subsets):
    selections = [sr.greedy_stabilizer_selection(
        toy_hamiltonian, toy_reducer.W_all, method=toy_reducer.method,
        brute_force_max_subsets=brute_force_max_subsets, workers=workers)
        for workers in (1, 2)]
    serial, parallel = selections
    assert parallel.strategy == serial.strategy
    assert parallel.fixing_order == serial.fixing_order
    for size, level in serial.levels.items():
        assert parallel.levels[size].energy == pytest.approx(level.energy)


@pytest.mark.parametrize("method", ["seqrot", "lcu"])
def test_legacy_levels(toy_hamiltonian, method):
    reducer = sr.ContextualSubspaceReducer(
        toy_hamiltonian, method=method, target=TOY_TARGET,
        legacy_full_rotation=True)
    counts = {4 - len(positions): len(reducer.reduced_hamiltonian(positions))
              for positions in [(2,), (1, 2), (1, 2, 3)]}
    assert counts == LEGACY_TERM_COUNTS[method]

    H = reducer.reduced_hamiltonian((1, 2, 3))
    assert H.equals(PauliSum.from_dict(LEGACY_ONE_QUBIT_LEVEL[method]),
                    tol=1e-3)

    # Conjugating the kept qubit by X flips the Y and Z signs
    flip = PauliSum.from_dict({"X": 1.0})
    flipped = {key: (value if key in "IX" else -value)
               for key, value in LEGACY_ONE_QUBIT_LEVEL[method].items()}
    assert (flip @ H @ flip).equals(PauliSum.from_dict(flipped), tol=1e-3)


def test_stabilizers_map_onto_single_qubit_z(toy_reducer):
    W_all = toy_reducer.W_all
    plan = sr.build_u(W_all, toy_reducer.method)
    assert sorted(plan.assignments) == sorted(set(plan.assignments))
    for i, mapped in enumerate(plan.map_stabilizers(W_all)):
        qubit = plan.assignments[i]
        assert mapped.equals(signed_z(4, qubit, plan.sign_ledger[qubit]),
                             tol=TOL)


def test_reduce_keep_all_returns_hamiltonian(toy_hamiltonian):
    report = sr.cs_vqe_reduce(toy_hamiltonian, 4)
    assert len(report.rows) == 1
    assert report.hamiltonians[4].equals(toy_hamiltonian)


def test_reduce_out_of_range(toy_hamiltonian):
    reducer = sr.ContextualSubspaceReducer(toy_hamiltonian)
    with pytest.raises(DimensionMismatch):
        reducer.reduce(5)
    with pytest.raises(DimensionMismatch):
        reducer.reduce(-1)


def test_reduce_clamps_to_reachable_level(caplog):
    # One anticommuting pair: W_all holds only A(r)
    H = PauliSum.from_dict({"ZI": 1.0, "XI": 0.5})
    reducer = sr.ContextualSubspaceReducer(H)
    assert len(reducer.prepare()) == 1

    with caplog.at_level(logging.WARNING):
        report = reducer.reduce(0)
    assert "keeping 1 qubits instead of 0" in caplog.text
    assert report.rows[0]["qubits"] == 1
    assert report.rows[0]["energy"] == pytest.approx(-np.sqrt(1.25))


def test_report_to_dict(toy_sweep):
    document = toy_sweep.to_dict()
    assert document["pipeline"] == ["extract", "solve", "stabilizers",
                                    "select"]
    assert document["n_terms"] == 14
    assert document["hamiltonians"]["4"][0][0] == "IIIZ"
    assert len(document["rows"]) == 5


def test_project_index_check():
    H = PauliSum.from_dict({"ZZ": 1.0})
    with pytest.raises(IndexOutOfRange):
        sr.project(H, sr.SubspaceProjector({5: 0}))


def test_project_replaces_fixed_z():
    H = PauliSum.from_dict({"ZX": 2.0, "XZ": 1.0, "IZ": 0.5})
    projected = sr.project(H, sr.SubspaceProjector({0: 1}))
    assert projected.to_dict() == {"X": -2.0, "Z": 0.5}


def test_dependent_stabilizers():
    W = sr.StabilizerSet(entries=[sr.Stabilizer(parse_word(label))
                                  for label in ("ZI", "IZ", "ZZ")],
                         n_qubits=2)
    with pytest.raises(DependentStabilizers):
        sr.build_u(W)


def test_commuting_stabilizers_without_observable():
    W = sr.StabilizerSet(entries=[sr.Stabilizer(parse_word("XX"), -1),
                                  sr.Stabilizer(parse_word("ZZ"))],
                         n_qubits=2)
    plan = sr.build_u(W)
    assert plan.up_stage is None
    for i, mapped in enumerate(plan.map_stabilizers(W)):
        qubit = plan.assignments[i]
        assert mapped.equals(signed_z(2, qubit, plan.sign_ledger[qubit]),
                             tol=TOL)


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("method", ["lcu", "seqrot"])
def test_random_rotation_is_isospectral(seed, method):
    rng = np.random.default_rng(seed)
    H = random_hamiltonian(3, 15, rng)
    reducer = sr.ContextualSubspaceReducer(H, method=method,
                                           config={"optimizer":
                                                   {"restarts": 4}})
    W_all = reducer.prepare()
    plan = sr.build_u(W_all, method)
    assert np.allclose(spectrum(plan.apply(H)), spectrum(H), atol=1e-8)

    report = reducer.sweep()
    energies = [row["energy"] for row in report.rows]
    assert all(a >= b - TOL for a, b in zip(energies, energies[1:]))
    assert energies[-1] == pytest.approx(spectrum(H)[0], abs=1e-8)


@pytest.mark.parametrize("seed", range(10))
def test_random_subset_rotation_is_isospectral(seed):
    rng = np.random.default_rng(100 + seed)
    n_qubits = 2 + seed % 4
    H = random_hamiltonian(n_qubits, 6 * n_qubits, rng)
    reducer = sr.ContextualSubspaceReducer(
        H, method=("lcu", "seqrot")[seed % 2],
        config={"optimizer": {"restarts": 2}})
    W_all = reducer.prepare()

    size = int(rng.integers(1, len(W_all) + 1))
    positions = sorted(rng.choice(len(W_all), size=size, replace=False))
    W = W_all.subset([int(i) for i in positions])
    plan = sr.build_u(W, reducer.method)
    assert np.allclose(spectrum(plan.apply(H)), spectrum(H), atol=1e-8)
    for i, mapped in enumerate(plan.map_stabilizers(W)):
        qubit = plan.assignments[i]
        assert mapped.equals(
            signed_z(n_qubits, qubit, plan.sign_ledger[qubit]), tol=TOL)
