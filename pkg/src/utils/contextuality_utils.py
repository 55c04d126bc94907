"""
contextuality_utils.py

Description:
    Strong-contextuality test for sets of Pauli words, the Z/T split, clique
    decomposition, greedy extraction of a noncontextual sub-Hamiltonian and
    GF(2) extraction of independent generators.
"""

# Standard libraries
import itertools
import logging

# Non-standard libraries
import numpy as np

# Custom libraries
from src.classes.noncontextual_model import (NoncontextualStructure,
                                             inference_phase)
from src.classes.pauli import PauliSum, PauliWord, multiply
from src.utils.errors import InferenceFailure, MixedLengths, NotNoncontextual


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

# Peres-Mermin square, row by row
PERES_MERMIN_ROWS = (
    ("IZ", "ZI", "ZZ"),
    ("XI", "IX", "XX"),
    ("XZ", "ZX", "YY"),
)


################################################################################
#                                Main Functions                                #
################################################################################
def partition_commuting(words):
    """
    Split a set of words into Z (commuting with every other word) and T.

    Parameters
    ----------
    words : iterable of PauliWord
        Set S, order is preserved

    Returns
    -------
    tuple of (list, list)
        Z and T
    """
    words = _unique(words)
    anti = anticommutation_matrix(words)
    universal = ~anti.any(axis=1)
    Z = [w for w, flag in zip(words, universal) if flag]
    T = [w for w, flag in zip(words, universal) if not flag]
    return Z, T


def is_contextual(words):
    """
    Returns True if the set of words is strongly contextual.
    """
    return find_contextual_triple(words) is not None


def find_contextual_triple(words, focus=None):
    """
    Search T for (P_i, P_j, P_k) with [P_i, P_j] = [P_i, P_k] = 0 and
    {P_j, P_k} = 0.

    Parameters
    ----------
    words : iterable of PauliWord
        Set S
    focus : iterable of PauliWord, optional
        If given, only triples containing one of these words are searched

    Returns
    -------
    tuple of PauliWord or None
        (P_i, P_j, P_k) or None if the set is noncontextual
    """
    _, T = partition_commuting(words)
    if len(T) < 3:
        return None

    anti = anticommutation_matrix(T).astype(np.int64)
    comm = 1 - anti
    np.fill_diagonal(comm, 0)

    if focus is None:
        candidates = range(len(T))
    else:
        focus = set(focus)
        candidates = [i for i, w in enumerate(T) if w in focus]

    for e in candidates:
        # CASE 1: e is the commuting centre
        if comm[e] @ anti @ comm[e] > 0:
            j, k = _first_pair(comm[e], anti)
            return T[e], T[j], T[k]

        # CASE 2: e is one end of the anticommuting pair
        if comm[e] @ comm @ anti[e] > 0:
            for c in np.flatnonzero(comm[e]):
                ends = np.flatnonzero(comm[c] & anti[e])
                if len(ends):
                    return T[c], T[e], T[ends[0]]
    return None


def decompose_cliques(T):
    """
    Commutation-equivalence classes of T.

    Note
    ----
    Cliques are ordered by their first-encountered word. The representative
    P_0 of each clique is the member with the most X/Y factors (ties by
    input order) and is stored first.

    Parameters
    ----------
    T : sequence of PauliWord

    Returns
    -------
    list of list of PauliWord
    """
    cliques = []
    for word in _unique(T):
        for clique in cliques:
            if word.commutes(clique[0]):
                clique.append(word)
                break
        else:
            cliques.append([word])

    # CHECK: Commuting within, anticommuting across
    for j, clique in enumerate(cliques):
        for a, b in itertools.combinations(clique, 2):
            if not a.commutes(b):
                raise NotNoncontextual((clique[0], a, b))
        for other in cliques[j + 1:]:
            for a, b in itertools.product(clique, other):
                if a.commutes(b):
                    raise NotNoncontextual((a, clique[0], other[0]))

    # Any member can represent its clique. The most off-diagonal one gives
    # the toy representatives XZXI, YXYI and XYXI.
    ordered = []
    for clique in cliques:
        rep = max(clique, key=lambda w: (w.n_offdiagonal, -clique.index(w)))
        ordered.append([rep] + [w for w in clique if w != rep])
    return ordered


def greedy_order(H):
    """
    Words of H by descending |coeff|, ties in lexicographic order.
    """
    return [word for word, coeff in sorted(
        H, key=lambda item: (-abs(item[1]), item[0].label))]


def extract_noncontextual(H, strategy="greedy"):
    """
    Split H into a noncontextual part and the remainder.

    Parameters
    ----------
    H : PauliSum
        Hamiltonian
    strategy : str, optional
        Only "greedy" (descending |coeff|) is available

    Returns
    -------
    tuple of (PauliSum, PauliSum)
        H_noncon and H_con, with H_noncon + H_con == H
    """
    if strategy != "greedy":
        raise ValueError(f"Unknown extraction strategy `{strategy}`")

    accepted = []
    for word in greedy_order(H):
        if find_contextual_triple(accepted + [word],
                                  focus=_new_members(accepted, word)) is None:
            accepted.append(word)
        else:
            LOGGER.debug(f"Rejected `{word}` (contextual)")

    kept = set(accepted)
    H_noncon = PauliSum(H.n_qubits, [(w, c) for w, c in H if w in kept])
    H_con = PauliSum(H.n_qubits, [(w, c) for w, c in H if w not in kept])
    LOGGER.info(f"SUCCESS: Noncontextual part has {len(H_noncon)} of "
                f"{len(H)} terms")
    return H_noncon, H_con


def build_generators(Z, cliques, n_qubits=None):
    """
    Reduce G' = Z + {A_k^(j) = P_k^(j) P_0^(j)} to independent generators G.

    Parameters
    ----------
    Z : list of PauliWord
        Universally commuting words
    cliques : list of list of PauliWord
        Cliques with their representative first
    n_qubits : int, optional
        Needed only if both Z and cliques are empty

    Returns
    -------
    NoncontextualStructure
    """
    words = list(Z) + [w for clique in cliques for w in clique]
    if n_qubits is None:
        n_qubits = words[0].n_qubits
    reps = [clique[0] for clique in cliques]

    # 0. A factors per clique, with phases
    A_factors = []
    for clique in cliques:
        factors = []
        for word in clique[1:]:
            phase, factor = multiply(word, clique[0])
            factors.append((factor, phase))
        A_factors.append(factors)

    # 1. Row-reduce the symplectic vectors of G'
    G_prime = list(Z) + [word for factors in A_factors
                         for word, _ in factors]
    rows, pivots = gf2_row_reduce(
        [w.symplectic() for w in G_prime], 2 * n_qubits)
    G = [PauliWord.from_symplectic(row) for row in rows]

    # 2. Inference table for every word of the set
    inference_table = {}
    for word in Z:
        indices = gf2_decompose(word.symplectic(), rows, pivots)
        inference_table[word] = _inference_entry(word, G, indices, None, None)
    for j, clique in enumerate(cliques):
        for word in clique:
            _, factor = multiply(word, clique[0])
            indices = gf2_decompose(factor.symplectic(), rows, pivots)
            inference_table[word] = _inference_entry(word, G, indices, j,
                                                     clique[0])

    return NoncontextualStructure(n_qubits=n_qubits, Z=list(Z),
                                  cliques=[list(c) for c in cliques],
                                  reps=reps, A_factors=A_factors, G=G,
                                  inference_table=inference_table)


def build_structure(words, n_qubits=None):
    """
    Z/T split, cliques and generators of a noncontextual set of words.
    """
    words = _unique(words)
    Z, T = partition_commuting(words)
    triple = find_contextual_triple(words)
    if triple is not None:
        raise NotNoncontextual(tuple(w.label for w in triple))
    return build_generators(Z, decompose_cliques(T), n_qubits)


def peres_mermin_demo():
    """
    Quantum value and classical bound of the Peres-Mermin inequality
    <R_0> + <R_1> + <R_2> + <C_0> + <C_1> - <C_2> <= 4.

    Returns
    -------
    tuple of (int, int, dict)
        Quantum value, classical bound, and the signed row/column products
    """
    grid = [[PauliWord.from_label(label) for label in row]
            for row in PERES_MERMIN_ROWS]
    lines = {f"row_{i}": grid[i] for i in range(3)}
    lines.update({f"col_{j}": [grid[i][j] for i in range(3)]
                  for j in range(3)})
    weights = {name: (-1 if name == "col_2" else 1) for name in lines}

    # 0. Quantum value from the operator products, each +-I
    products = {}
    for name, words in lines.items():
        phase, word = multiply(*words[:2])
        step, word = multiply(word, words[2])
        if not word.is_identity:
            raise InferenceFailure(f"Product of {name} is not +-I")
        products[name] = int(np.real(phase * step))
    quantum_value = sum(weights[name] * products[name] for name in lines)

    # 1. Classical bound over all +-1 assignments of the nine entries
    classical_bound = -np.inf
    for values in itertools.product((-1, 1), repeat=9):
        table = np.array(values).reshape(3, 3)
        total = sum(np.prod(table[i]) for i in range(3)) \
            + np.prod(table[:, 0]) + np.prod(table[:, 1]) \
            - np.prod(table[:, 2])
        classical_bound = max(classical_bound, int(total))

    return quantum_value, classical_bound, products


################################################################################
#                             GF(2) Linear Algebra                             #
################################################################################
def gf2_row_reduce(vectors, n_columns):
    """
    Reduced row echelon form over GF(2), pivoting on columns in increasing
    order.

    Parameters
    ----------
    vectors : list of numpy.ndarray
        Binary row vectors
    n_columns : int
        Vector length

    Returns
    -------
    tuple of (list of numpy.ndarray, list of int)
        Non-zero reduced rows in pivot order, and their pivot columns
    """
    if not vectors:
        return [], []
    matrix = np.array(vectors, dtype=np.uint8).reshape(-1, n_columns) % 2

    pivots = []
    row = 0
    for column in range(n_columns):
        if row == len(matrix):
            break
        candidates = np.flatnonzero(matrix[row:, column])
        if not len(candidates):
            continue
        pivot = row + candidates[0]
        matrix[[row, pivot]] = matrix[[pivot, row]]
        for other in range(len(matrix)):
            if other != row and matrix[other, column]:
                matrix[other] ^= matrix[row]
        pivots.append(column)
        row += 1

    return [matrix[i].copy() for i in range(row)], pivots


def gf2_decompose(vector, rows, pivots):
    """
    Indices of the reduced rows whose XOR equals `vector`.
    """
    vector = np.asarray(vector, dtype=np.uint8)
    indices = [i for i, column in enumerate(pivots) if vector[column]]
    total = np.zeros_like(vector)
    for i in indices:
        total ^= rows[i]
    if not np.array_equal(total, vector):
        raise InferenceFailure("Word is not generated by G")
    return indices


def anticommutation_matrix(words):
    """
    Boolean matrix with entry (a, b) True iff words a and b anticommute.
    """
    if not words:
        return np.zeros((0, 0), dtype=bool)
    lengths = {w.n_qubits for w in words}
    if len(lengths) > 1:
        raise MixedLengths([w.n_qubits for w in words])

    n_qubits = lengths.pop()
    vectors = np.array([w.symplectic() for w in words],
                       dtype=np.int64).reshape(len(words), 2 * n_qubits)
    x, z = vectors[:, :n_qubits], vectors[:, n_qubits:]
    return ((x @ z.T + z @ x.T) % 2).astype(bool)


################################################################################
#                               Helper Functions                               #
################################################################################
def _unique(words):
    seen = {}
    for word in words:
        seen.setdefault(word, None)
    return list(seen)


def _new_members(accepted, word):
    """
    Words of T that are new once `word` joins `accepted`: the word itself
    and previously universal words it anticommutes with.
    """
    return [word] + [w for w in accepted if not w.commutes(word)]


def _first_pair(centre_row, anti):
    neighbours = np.flatnonzero(centre_row)
    for j, k in itertools.combinations(neighbours, 2):
        if anti[j, k]:
            return j, k
    raise InferenceFailure("No anticommuting pair found")


def _inference_entry(word, G, indices, clique, rep):
    phase = inference_phase(word, G, indices, rep)
    if phase is None:
        raise InferenceFailure(f"Inference of `{word}` failed")
    return tuple(indices), clique, phase
