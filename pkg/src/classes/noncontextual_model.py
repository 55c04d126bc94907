"""
noncontextual_model.py

Description:
    Noncontextual structure of a set of Pauli words, the (q, r) hidden
    variable states over it, and the brute-force solver for the
    noncontextual ground state.
"""

# Standard libraries
import concurrent.futures
import itertools
import logging
from dataclasses import dataclass, field

# Non-standard libraries
import numpy as np
from scipy.optimize import minimize

# Custom libraries
from src.data import constants
from src.classes.pauli import PauliWord, multiply_exponent, PHASES
from src.utils.errors import (DimensionMismatch, NonHermitian, NotNormalized,
                              TooManyGenerators, UnknownWord)


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

# Default solver settings
DEFAULT_OPTIMIZER = {
    "restarts": 16,
    "tolerance": 1e-12,
    "max_evals": 5000,
    "seed": 0,
    "max_generators": constants.MAX_GENERATORS,
    "workers": 1,
}


################################################################################
#                                 Data Classes                                 #
################################################################################
@dataclass
class NoncontextualStructure:
    """
    Z/T split of a noncontextual set, its cliques, the independent
    generators G and an inference table for every word of the set.

    Note
    ----
    `inference_table[word] = (indices, clique, phase)` means
    word = phase * G[indices[0]] * G[indices[1]] * ... * reps[clique], where
    the representative is omitted if `clique` is None.
    """
    n_qubits: int
    Z: list
    cliques: list
    reps: list
    A_factors: list
    G: list
    inference_table: dict = field(default_factory=dict)

    @classmethod
    def from_terms(cls, words, n_qubits=None):
        """
        Z/T split, cliques and generators of a noncontextual set of words.
        """
        from src.utils.contextuality_utils import build_structure
        return build_structure(words, n_qubits)


    @property
    def n_cliques(self):
        return len(self.cliques)


    @property
    def words(self):
        return list(self.inference_table)


    def clique_of(self, word):
        return self.inference_table[word][1]


@dataclass
class NoncontextualState:
    """
    Hidden variable state: +-1 values q of the generators and unit vector r
    of clique representative expectations.
    """
    q: tuple
    r: np.ndarray

    def __post_init__(self):
        self.q = tuple(int(v) for v in self.q)
        self.r = np.asarray(self.r, dtype=float)
        if any(v not in (-1, 1) for v in self.q):
            raise ValueError(f"Generator values must be +-1, got {self.q}")
        if len(self.r) and abs(np.linalg.norm(self.r) - 1) > \
                constants.NORM_TOL:
            raise NotNormalized(float(np.linalg.norm(self.r)))


    def a_expectation(self):
        """
        Expectation of A(r) = sum_j r_j P_0^(j), i.e. sum_j r_j^2.
        """
        return float(np.sum(self.r ** 2))


    def to_dict(self):
        return {"q": list(self.q), "r": [float(v) for v in self.r]}


@dataclass
class SolveResult:
    state: NoncontextualState
    energy: float
    per_q_energies: dict = field(default_factory=dict)


################################################################################
#                                Main Functions                                #
################################################################################
def infer_expectation(word, structure, state):
    """
    Expectation of a word of the noncontextual set under the state.

    Parameters
    ----------
    word : PauliWord or str
        Word present in the structure's inference table
    structure : NoncontextualStructure
    state : NoncontextualState

    Returns
    -------
    float
        phase * prod(q_i) [* r_j]
    """
    if isinstance(word, str):
        word = PauliWord.from_label(word)
    if word not in structure.inference_table:
        raise UnknownWord(word.label)
    _check_dimensions(structure, state)

    indices, clique, phase = structure.inference_table[word]
    value = phase * np.prod([state.q[i] for i in indices])
    if clique is not None:
        value *= state.r[clique]
    return float(np.real(value))


def energy(H_noncon, structure, state):
    """
    Noncontextual energy sum_P c_P <P> of a noncontextual Hamiltonian.

    Parameters
    ----------
    H_noncon : PauliSum
        Hamiltonian whose words are all in the structure
    structure : NoncontextualStructure
    state : NoncontextualState

    Returns
    -------
    float
    """
    _check_dimensions(structure, state)
    _check_real(H_noncon)
    return float(sum(coeff.real * infer_expectation(word, structure, state)
                     for word, coeff in H_noncon))


def solve(H_noncon, structure, optimizer_config=None):
    """
    Brute force over q in {-1, +1}^|G|, minimizing over the unit sphere for r
    in each branch.

    Note
    ----
    With `workers` > 1 the branches run in a process pool. Branch seeds are
    spawned from `seed`, so the result does not depend on `workers`.

    Parameters
    ----------
    H_noncon : PauliSum
        Noncontextual Hamiltonian
    structure : NoncontextualStructure
        Its noncontextual structure
    optimizer_config : dict, optional
        Overrides of `DEFAULT_OPTIMIZER`

    Returns
    -------
    SolveResult
    """
    config = {**DEFAULT_OPTIMIZER, **(optimizer_config or {})}
    n_generators = len(structure.G)
    if n_generators > config["max_generators"]:
        raise TooManyGenerators(n_generators, config["max_generators"])
    _check_real(H_noncon)

    # Each branch draws its random starts from its own child seed
    branches = list(itertools.product((-1, 1), repeat=n_generators))
    seeds = np.random.SeedSequence(config["seed"]).spawn(len(branches))
    tasks = [(affine_coefficients(H_noncon, structure, q), seed, config)
             for q, seed in zip(branches, seeds)]

    workers = max(int(config["workers"]), 1)
    if workers > 1 and len(tasks) > 1:
        LOGGER.debug(f"Solving {len(tasks)} branches on {workers} workers")
        with concurrent.futures.ProcessPoolExecutor(
                max_workers=workers) as executor:
            chunksize = max(len(tasks) // (4 * workers), 1)
            results = list(executor.map(_solve_branch, tasks,
                                        chunksize=chunksize))
    else:
        results = [_solve_branch(task) for task in tasks]

    # NOTE: Branches are merged in lexicographic order of q, so keeping the
    #       first of tied branches returns the lexicographically smallest q
    best_q, best_r, best_energy = None, None, np.inf
    per_q_energies = {}
    for q, (r, branch_energy) in zip(branches, results):
        per_q_energies[q] = branch_energy
        if branch_energy < best_energy - constants.TIE_TOL:
            best_q, best_r, best_energy = q, r, branch_energy

    state = NoncontextualState(best_q, best_r)
    result = SolveResult(state=state,
                         energy=energy(H_noncon, structure, state),
                         per_q_energies=per_q_energies)
    LOGGER.info(f"SUCCESS: Noncontextual ground state q={state.q}, "
                f"E={result.energy:.8f}")
    return result


def affine_coefficients(H_noncon, structure, q):
    """
    For fixed q the energy is a + b . r. Returns (a, b).
    """
    offset = 0.
    linear = np.zeros(structure.n_cliques)
    for word, coeff in H_noncon:
        if word not in structure.inference_table:
            raise UnknownWord(word.label)
        indices, clique, phase = structure.inference_table[word]
        value = coeff.real * np.real(phase) * np.prod([q[i] for i in indices])
        if clique is None:
            offset += value
        else:
            linear[clique] += value
    return float(offset), linear


def minimize_on_sphere(offset, linear, rng, restarts=16, tolerance=1e-12,
                       max_evals=5000):
    """
    Minimize offset + linear . r over unit vectors r, parameterized by
    hyperspherical angles and searched with Nelder-Mead.

    Parameters
    ----------
    offset : float
    linear : numpy.ndarray
        Coefficients b of r
    rng : numpy.random.Generator
        Source of the random starts
    restarts : int, optional
        Number of starts
    tolerance : float, optional
        Simplex spread tolerance
    max_evals : int, optional
        Maximum function evaluations per start

    Returns
    -------
    tuple of (numpy.ndarray, float)
        Minimizing r and its energy
    """
    n_cliques = len(linear)

    # CASE 1: No cliques
    if n_cliques == 0:
        return np.zeros(0), offset

    # CASE 2: 0-sphere, r in {-1, +1}
    if n_cliques == 1:
        r = np.array([1.0]) if linear[0] <= 0 else np.array([-1.0])
        return r, float(offset + linear @ r)

    # CASE 3: Angles over the (N-1)-sphere
    def objective(angles):
        return offset + linear @ angles_to_unit(angles)

    starts = []
    norm = np.linalg.norm(linear)
    if norm > 0:
        starts.append(unit_to_angles(-linear / norm))
    while len(starts) < max(restarts, 1):
        angles = rng.uniform(0, np.pi, size=n_cliques - 1)
        angles[-1] *= 2
        starts.append(angles)

    best_angles, best_value = None, np.inf
    for start in starts:
        result = minimize(objective, start, method="Nelder-Mead",
                          options={"xatol": tolerance, "fatol": tolerance,
                                   "maxfev": max_evals})
        if result.fun < best_value:
            best_angles, best_value = result.x, float(result.fun)

    r = angles_to_unit(best_angles)
    return r / np.linalg.norm(r), best_value


def angles_to_unit(angles):
    """
    Hyperspherical angles (N-1 values) to a unit vector of length N.
    """
    n_cliques = len(angles) + 1
    r = np.ones(n_cliques)
    for i, angle in enumerate(angles):
        r[i] *= np.cos(angle)
        r[i + 1:] *= np.sin(angle)
    return r


def unit_to_angles(r):
    """
    Inverse of `angles_to_unit`.
    """
    n_cliques = len(r)
    angles = np.zeros(n_cliques - 1)
    for i in range(n_cliques - 2):
        tail = np.linalg.norm(r[i:])
        angles[i] = np.arccos(np.clip(r[i] / tail, -1, 1)) if tail > 0 else 0.
    angles[-1] = np.arctan2(r[-1], r[-2])
    return angles


def inference_phase(word, generators, indices, rep=None):
    """
    Phase p such that word = p * prod(generators[indices]) [* rep].
    Returns None if the product is a different word.
    """
    exponent, product = 0, PauliWord.identity(word.n_qubits)
    for i in indices:
        step, product = multiply_exponent(product, generators[i])
        exponent += step
    if rep is not None:
        step, product = multiply_exponent(product, rep)
        exponent += step
    if product != word:
        return None

    # word = i^{-exponent} * product
    return PHASES[(-exponent) % 4]


################################################################################
#                               Helper Functions                               #
################################################################################
def _solve_branch(task):
    """
    Minimize one q-branch. Picklable for worker processes.
    """
    (offset, linear), seed, config = task
    return minimize_on_sphere(offset, linear, np.random.default_rng(seed),
                              restarts=config["restarts"],
                              tolerance=config["tolerance"],
                              max_evals=config["max_evals"])


def _check_dimensions(structure, state):
    if len(state.q) != len(structure.G) or \
            len(state.r) != structure.n_cliques:
        raise DimensionMismatch(
            f"State has |q|={len(state.q)}, |r|={len(state.r)}; structure "
            f"has |G|={len(structure.G)}, N={structure.n_cliques}")


def _check_real(H):
    if not H.is_hermitian():
        raise NonHermitian(H.max_imag())
