"""
eigen_utils.py

Description:
    Exact spectra for validation. Builds sparse matrices from Pauli sums and
    computes ground-state energies, with a dense solve for small systems and
    a Lanczos solve (full reorthogonalization) for larger ones.
"""

# Standard libraries
import logging
import itertools

# Non-standard libraries
import numpy as np
import scipy.linalg
import scipy.sparse

# Custom libraries
from src.data import constants
from src.classes.pauli import PauliSum, PauliWord
from src.utils.errors import NoConvergence, TooManyQubits


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

# Largest qubit count for dense Pauli decomposition of a matrix
MAX_DECOMPOSE_QUBITS = 8

# Residual tolerance ||Hv - Ev|| accepted for a ground state
RESIDUAL_TOL = 1e-8


################################################################################
#                                Main Functions                                #
################################################################################
def to_matrix(H, max_qubits=constants.MAX_EIGEN_QUBITS):
    """
    Build the sparse matrix of a Pauli sum.

    Parameters
    ----------
    H : PauliSum
        Operator to convert
    max_qubits : int, optional
        Guard on the number of qubits

    Returns
    -------
    scipy.sparse.csr_matrix
        Complex matrix of dimension 2^n
    """
    n_qubits = H.n_qubits
    if n_qubits > max_qubits:
        raise TooManyQubits(n_qubits, max_qubits)

    dim = 1 << n_qubits
    basis = np.arange(dim, dtype=np.int64)

    rows, cols, data = [], [], []
    for word, coeff in H:
        row, values = word_action(word, basis)
        rows.append(row)
        cols.append(basis)
        data.append(coeff * values)

    if not data:
        return scipy.sparse.csr_matrix((dim, dim), dtype=complex)

    matrix = scipy.sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim), dtype=complex)
    return matrix.tocsr()


def ground_energy(H, dense_max_qubits=constants.DENSE_MAX_QUBITS,
                  max_qubits=constants.MAX_EIGEN_QUBITS, krylov_dim=200,
                  tol=1e-10, method=None, seed=0):
    """
    Smallest eigenvalue of a Hermitian Pauli sum and a ground state.

    Parameters
    ----------
    H : PauliSum
        Hermitian operator
    dense_max_qubits : int, optional
        Largest qubit count solved densely
    max_qubits : int, optional
        Guard on the number of qubits
    krylov_dim : int, optional
        Maximum Krylov dimension per Lanczos restart
    tol : float, optional
        Convergence threshold on the change of the Lanczos eigenvalue
    method : str, optional
        Force "dense" or "lanczos". By default, chosen by size.
    seed : int, optional
        Seed of the Lanczos starting vector

    Returns
    -------
    tuple of (float, numpy.ndarray)
        Ground energy and normalized ground state
    """
    n_qubits = H.n_qubits
    if n_qubits > max_qubits:
        raise TooManyQubits(n_qubits, max_qubits)

    # CASE 1: Scalar operator
    if n_qubits == 0:
        return float(H.identity_coefficient.real), np.ones(1, dtype=complex)

    matrix = to_matrix(H, max_qubits)
    if method is None:
        method = "dense" if n_qubits <= dense_max_qubits else "lanczos"

    # CASE 2: Dense solve
    if method == "dense":
        values, vectors = scipy.linalg.eigh(matrix.toarray())
        return float(values[0]), vectors[:, 0]

    # CASE 3: Lanczos
    return lanczos_ground_state(matrix, krylov_dim=krylov_dim, tol=tol,
                                seed=seed)


def lanczos_ground_state(matrix, krylov_dim=200, tol=1e-10,
                         residual_tol=RESIDUAL_TOL, max_restarts=50, seed=0):
    """
    Lanczos iteration with full reorthogonalization for the lowest eigenpair.
    The iteration restarts from the current Ritz vector until the residual
    ||Hv - Ev|| falls below `residual_tol`.

    Parameters
    ----------
    matrix : scipy.sparse matrix
        Hermitian matrix
    krylov_dim : int, optional
        Krylov dimension per restart, capped at the matrix dimension
    tol : float, optional
        Early stop when the Ritz value changes by less than this and the
        residual estimate is below `residual_tol`
    residual_tol : float, optional
        Accepted residual norm
    max_restarts : int, optional
        Maximum number of restarts
    seed : int, optional
        Seed of the random starting vector

    Returns
    -------
    tuple of (float, numpy.ndarray)
        Ground energy and normalized Ritz vector
    """
    dim = matrix.shape[0]
    n_krylov = min(krylov_dim, dim)

    rng = np.random.default_rng(seed)
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    vector /= np.linalg.norm(vector)

    iterations = 0
    for _ in range(max_restarts):
        basis = np.zeros((dim, n_krylov), dtype=complex)
        basis[:, 0] = vector
        alphas, betas = [], []
        energy, previous = np.inf, np.inf
        ritz_coeffs = np.ones(1)

        for j in range(n_krylov):
            iterations += 1
            w = matrix @ basis[:, j]
            alpha = float(np.real(np.vdot(basis[:, j], w)))
            alphas.append(alpha)

            # Full reorthogonalization, applied twice
            for _ in range(2):
                w -= basis[:, :j + 1] @ (basis[:, :j + 1].conj().T @ w)
            beta = float(np.linalg.norm(w))

            energy, ritz_coeffs = _lowest_tridiagonal(alphas, betas)
            residual_estimate = beta * abs(ritz_coeffs[-1])

            # CHECK: Invariant subspace or converged Ritz pair
            if beta < 1e-14 or residual_estimate <= residual_tol or \
                    (abs(energy - previous) < tol
                     and residual_estimate <= 10 * residual_tol):
                break
            previous = energy

            if j + 1 < n_krylov:
                betas.append(beta)
                basis[:, j + 1] = w / beta

        size = len(alphas)
        vector = basis[:, :size] @ ritz_coeffs
        vector /= np.linalg.norm(vector)

        residual = np.linalg.norm(matrix @ vector - energy * vector)
        if residual <= residual_tol:
            return float(energy), vector
        LOGGER.debug(f"Lanczos restart (residual {residual:.2e})")

    raise NoConvergence(iterations)


def expectation(H, state):
    """
    Returns the real expectation <state|H|state>.
    """
    matrix = to_matrix(H)
    return float(np.real(np.vdot(state, matrix @ state)))


def matrix_to_pauli_sum(matrix, tol=constants.DROP_TOL):
    """
    Decompose a dense 2^n x 2^n matrix into Pauli words.

    Parameters
    ----------
    matrix : numpy.ndarray
        Square matrix
    tol : float, optional
        Coefficients below this are dropped

    Returns
    -------
    PauliSum
    """
    matrix = np.asarray(matrix)
    dim = matrix.shape[0]
    n_qubits = dim.bit_length() - 1
    if n_qubits > MAX_DECOMPOSE_QUBITS:
        raise TooManyQubits(n_qubits, MAX_DECOMPOSE_QUBITS)

    basis = np.arange(dim, dtype=np.int64)
    terms = []
    for x_mask, z_mask in itertools.product(range(dim), repeat=2):
        word = PauliWord(n_qubits, x_mask, z_mask)
        row, values = word_action(word, basis)

        # Tr(P M) / 2^n with P[b ^ x, b] = values[b]
        coeff = np.sum(values * matrix[basis, row]) / dim
        if abs(coeff) >= tol:
            terms.append((word, coeff))
    return PauliSum(n_qubits, terms)


################################################################################
#                               Helper Functions                               #
################################################################################
def word_action(word, basis):
    """
    Action of a Pauli word on computational basis states.

    Parameters
    ----------
    word : PauliWord
        Pauli word
    basis : numpy.ndarray
        Basis state indices b

    Returns
    -------
    tuple of (numpy.ndarray, numpy.ndarray)
        Row indices b ^ x and the complex values P[b ^ x, b]
    """
    n_y = bin(word.x_mask & word.z_mask).count("1")
    signs = 1 - 2 * _parity(basis & word.z_mask, word.n_qubits)
    return basis ^ word.x_mask, (1j ** n_y) * signs


def _parity(values, n_bits):
    parity = np.zeros_like(values)
    for shift in range(n_bits):
        parity ^= (values >> shift) & 1
    return parity


def _lowest_tridiagonal(alphas, betas):
    if len(alphas) == 1:
        return alphas[0], np.ones(1)
    values, vectors = scipy.linalg.eigh_tridiagonal(
        np.array(alphas), np.array(betas[:len(alphas) - 1]))
    return float(values[0]), vectors[:, 0]
