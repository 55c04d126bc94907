"""
helpers.py

Description:
    Random operators shared by the test modules.
"""

# Non-standard libraries
import numpy as np

# Custom libraries
from src.classes.pauli import PauliSum, PauliWord


def random_word(n_qubits, rng):
    return PauliWord(n_qubits, int(rng.integers(1 << n_qubits)),
                     int(rng.integers(1 << n_qubits)))


def random_hamiltonian(n_qubits, n_terms, rng, identity=True):
    """
    Random Hermitian Pauli sum with `n_terms` distinct words and normal
    coefficients.
    """
    n_terms = min(n_terms, 4 ** n_qubits - (0 if identity else 1))
    words = set()
    while len(words) < n_terms:
        word = random_word(n_qubits, rng)
        if identity or not word.is_identity:
            words.add(word)
    words = sorted(words)
    return PauliSum(n_qubits, zip(words, rng.normal(size=n_terms)))


def random_state(n_qubits, rng):
    state = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return state / np.linalg.norm(state)
