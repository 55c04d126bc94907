"""
conftest.py

Description:
    Shared fixtures: the toy Hamiltonian, its noncontextual structure and
    ground state, and a seeded random generator.
"""

# Non-standard libraries
import hypothesis
import numpy as np
import pytest

# Custom libraries
from src.classes import noncontextual_model
from src.utils import contextuality_utils, io_utils


hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.register_profile("default", max_examples=50,
                                     deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def toy_hamiltonian():
    H, _ = io_utils.load_fixture("toy")
    return H


@pytest.fixture(scope="session")
def toy_split(toy_hamiltonian):
    return contextuality_utils.extract_noncontextual(toy_hamiltonian)


@pytest.fixture(scope="session")
def toy_structure(toy_split):
    H_noncon, _ = toy_split
    return contextuality_utils.build_structure(H_noncon.words(), 4)


@pytest.fixture(scope="session")
def toy_solution(toy_split, toy_structure):
    H_noncon, _ = toy_split
    return noncontextual_model.solve(H_noncon, toy_structure)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
