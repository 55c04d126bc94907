"""
measurement_planner.py

Description:
    Measurement planning by unitary partitioning: the Hamiltonian is split
    into pairwise-anticommuting cliques by greedy graph colouring, each clique
    is measured as a single rotated Pauli word, and the resulting shot counts
    are compared with term-by-term measurement.
"""

# Standard libraries
import itertools
import logging
from dataclasses import dataclass, field

# Non-standard libraries
import networkx as nx
import numpy as np

# Custom libraries
from src.data import constants
from src.classes.pauli import PauliSum, PauliWord, commutes
from src.classes.unitary_partitioning import (AnticommutingObservable,
                                              build_lcu, build_seqrot)
from src.utils import eigen_utils
from src.utils.errors import (InvalidVariance, NonHermitian, TooManyQubits,
                              ZeroShots)


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

METHODS = {
    "seqrot": build_seqrot,
    "lcu": build_lcu,
}

# Default planner settings
DEFAULT_MEASUREMENT = {
    "epsilon": 1e-3,
    "shots": 100000,
    "max_qubits": constants.MAX_SIMULATION_QUBITS,
    "method": "lcu",
    "seed": 0,
}


################################################################################
#                                 Data Classes                                 #
################################################################################
@dataclass
class MeasuredClique:
    """
    Clique gamma * C with C = sum_k (c_k / gamma) P_k normalized, and the
    rotation mapping C onto a single word.
    """
    terms: list
    gamma: float
    observable: AnticommutingObservable
    rotation: object

    def __len__(self):
        return len(self.terms)


    @property
    def words(self):
        return [word for word, _ in self.terms]


@dataclass
class MeasurementPlan:
    n_qubits: int
    cliques: list
    epsilon: float
    constant: float = 0.

    @property
    def n_terms(self):
        return sum(len(clique) for clique in self.cliques)


    def terms(self):
        return [term for clique in self.cliques for term in clique.terms]


@dataclass
class ShotEstimate:
    M_grouped: float
    M_ungrouped: float
    ratio: float
    bound: float

    def to_dict(self):
        return {"M_grouped": self.M_grouped, "M_ungrouped": self.M_ungrouped,
                "ratio": self.ratio, "bound": self.bound}


@dataclass
class ShotSimulation:
    """
    Sampled energy with per-clique statistics.

    Note
    ----
    `exact_variance` is gamma^2 (1 - <C>^2) for the given state and
    `predicted_variance` is sum_k c_k^2 Var[P_k]. They agree when the cross
    terms sum_{k != l} c_k c_l <P_k><P_l> vanish.
    """
    energy: float
    exact_energy: float
    standard_error: float
    shots: int
    cliques: list = field(default_factory=list)


################################################################################
#                                Main Functions                                #
################################################################################
def clique_cover(H, strategy="largest_first"):
    """
    Cover the non-identity words of H with pairwise-anticommuting cliques.

    Note
    ----
    Colours the commutation graph (edge = commuting pair). Nodes are added
    in lexicographic order, so degree ties are broken lexicographically.

    Parameters
    ----------
    H : PauliSum or iterable of PauliWord
    strategy : str, optional
        networkx greedy colouring strategy

    Returns
    -------
    list of list of PauliWord
        Cliques in colour order, members in lexicographic order
    """
    words = H.words() if isinstance(H, PauliSum) else list(H)
    words = sorted({w for w in words if not w.is_identity},
                   key=lambda w: w.label)

    graph = nx.Graph()
    graph.add_nodes_from(words)
    graph.add_edges_from((a, b) for a, b in itertools.combinations(words, 2)
                         if commutes(a, b))
    colouring = nx.coloring.greedy_color(graph, strategy=strategy)

    cliques = {}
    for word in words:
        cliques.setdefault(colouring[word], []).append(word)
    return [cliques[colour] for colour in sorted(cliques)]


def build_plan(H, epsilon=DEFAULT_MEASUREMENT["epsilon"], method="lcu",
               strategy="largest_first"):
    """
    Measurement plan of a Hermitian Pauli sum.

    Parameters
    ----------
    H : PauliSum
        Hermitian Hamiltonian (real coefficients)
    epsilon : float, optional
        Target precision on <H>
    method : str, optional
        Unitary-partitioning construction, "seqrot" or "lcu"
    strategy : str, optional
        Colouring strategy

    Returns
    -------
    MeasurementPlan
    """
    if not H.is_hermitian():
        raise NonHermitian(H.max_imag())
    H = H.real_part()

    cliques = []
    for words in clique_cover(H, strategy):
        terms = [(word, H[word].real) for word in words]
        gamma = float(np.sqrt(sum(c ** 2 for _, c in terms)))
        observable = AnticommutingObservable(
            [(word, c / gamma) for word, c in terms])
        cliques.append(MeasuredClique(terms=terms, gamma=gamma,
                                      observable=observable,
                                      rotation=METHODS[method](observable)))

    LOGGER.info(f"SUCCESS: {len(H)} terms covered by {len(cliques)} cliques")
    return MeasurementPlan(n_qubits=H.n_qubits, cliques=cliques,
                           epsilon=epsilon,
                           constant=float(H.identity_coefficient.real))


def estimate_shots(plan, variances=None, epsilon=None):
    """
    Shot counts with and without grouping.

    Note
    ----
    With x_j = (|c_k| sqrt(Var[P_k]))_k over clique j,
    M_u = (sum_j ||x_j||_1)^2 / eps^2 and M_g = (sum_j ||x_j||_2)^2 / eps^2,
    since anticommuting words have zero covariance.

    Parameters
    ----------
    plan : MeasurementPlan
    variances : dict, optional
        Var[P] in [0, 1] per word (PauliWord or label). Missing words take 1
    epsilon : float, optional
        Overrides the plan's precision

    Returns
    -------
    ShotEstimate
    """
    epsilon = plan.epsilon if epsilon is None else epsilon
    variances = {(PauliWord.from_label(k) if isinstance(k, str) else k): v
                 for k, v in (variances or {}).items()}

    norms_1, norms_2, bound_terms = [], [], []
    for clique in plan.cliques:
        x = []
        for word, coeff in clique.terms:
            variance = variances.get(word, 1.)
            if not 0 <= variance <= 1 + constants.TIE_TOL:
                raise InvalidVariance(word.label, variance)
            if variance > 1:
                LOGGER.warning(f"Variance of `{word.label}` is {variance}, "
                               "clamped to 1")
                variance = 1.
            x.append(abs(coeff) * np.sqrt(variance))
        x = np.array(x)
        norms_1.append(np.sum(x))
        norms_2.append(np.linalg.norm(x))
        bound_terms.append(np.sqrt(len(x)) * np.linalg.norm(x))

    total_1, total_2 = float(np.sum(norms_1)), float(np.sum(norms_2))
    M_ungrouped = total_1 ** 2 / epsilon ** 2
    M_grouped = total_2 ** 2 / epsilon ** 2

    # CASE 1: Zero variance everywhere, grouping changes nothing
    if total_2 == 0:
        return ShotEstimate(M_grouped=0., M_ungrouped=0., ratio=1., bound=1.)

    return ShotEstimate(M_grouped=M_grouped, M_ungrouped=M_ungrouped,
                        ratio=(total_1 / total_2) ** 2,
                        bound=(float(np.sum(bound_terms)) / total_2) ** 2)


def exact_expectations(state, H):
    """
    Real expectations <state|P|state> of every word of H.
    """
    basis = np.arange(len(state), dtype=np.int64)
    expectations = {}
    for word, _ in H:
        row, values = eigen_utils.word_action(word, basis)
        expectations[word] = float(np.real(np.vdot(state[row],
                                                   values * state)))
    return expectations


def simulate_shots(state, plan, shots, seed=0,
                   max_qubits=constants.MAX_SIMULATION_QUBITS):
    """
    Sample the grouped energy estimator on a state vector.

    Note
    ----
    For every clique, the target word P_k is measured on R|psi>, whose
    outcome distribution is that of the clique operator C on |psi>. Each
    clique gets `shots` samples from its own sub-seed.

    Parameters
    ----------
    state : numpy.ndarray
        Normalized state on the plan's qubits
    plan : MeasurementPlan
    shots : int
        Samples per clique
    seed : int, optional
        Seed split into one sub-seed per clique
    max_qubits : int, optional
        Guard on dense simulation

    Returns
    -------
    ShotSimulation
    """
    if plan.n_qubits > max_qubits:
        raise TooManyQubits(plan.n_qubits, max_qubits)
    if shots <= 0:
        raise ZeroShots()
    state = np.asarray(state, dtype=complex)

    seeds = np.random.SeedSequence(seed).spawn(max(len(plan.cliques), 1))
    energy, exact_energy, exact_variance_total = plan.constant, \
        plan.constant, 0.
    stats = []
    for clique, sub_seed in zip(plan.cliques, seeds):
        rng = np.random.default_rng(sub_seed)

        # 0. Rotate the state and take <P_k> there
        rotation = eigen_utils.to_matrix(clique.rotation.to_operator())
        rotated = rotation @ state
        target = PauliSum(plan.n_qubits,
                          [(clique.rotation.target,
                            clique.rotation.target_sign)])
        mean = eigen_utils.expectation(target, rotated)
        probability = float(np.clip((1 + mean) / 2, 0, 1))

        # 1. Sample +-1 outcomes
        outcomes = np.where(rng.random(shots) < probability, 1., -1.)
        energy += clique.gamma * outcomes.mean()
        exact_energy += clique.gamma * mean

        # 2. Variances of gamma * C
        word_means = exact_expectations(state, PauliSum(plan.n_qubits,
                                                        clique.terms))
        exact_variance = clique.gamma ** 2 * (1 - mean ** 2)
        exact_variance_total += exact_variance
        stats.append({
            "words": [w.label for w in clique.words],
            "mean": float(outcomes.mean()),
            "exact_mean": mean,
            "empirical_variance": float(clique.gamma ** 2
                                        * outcomes.var(ddof=1))
            if shots > 1 else 0.,
            "exact_variance": exact_variance,
            "predicted_variance": float(sum(
                c ** 2 * (1 - word_means[w] ** 2) for w, c in clique.terms)),
        })

    return ShotSimulation(energy=float(energy),
                          exact_energy=float(exact_energy),
                          standard_error=float(np.sqrt(exact_variance_total
                                                       / shots)),
                          shots=shots, cliques=stats)


def sample_sequential_pair(state, a, b, shots, seed=0):
    """
    Measure word a, then word b on the collapsed state.

    Parameters
    ----------
    state : numpy.ndarray
        Normalized state
    a, b : PauliWord or str
    shots : int
    seed : int, optional

    Returns
    -------
    tuple of (numpy.ndarray, numpy.ndarray)
        +-1 outcomes of a and of b
    """
    if shots <= 0:
        raise ZeroShots()
    a = PauliWord.from_label(a) if isinstance(a, str) else a
    b = PauliWord.from_label(b) if isinstance(b, str) else b
    state = np.asarray(state, dtype=complex)
    rng = np.random.default_rng(seed)

    matrix_a = eigen_utils.to_matrix(PauliSum(a.n_qubits, [(a, 1.)]))
    matrix_b = eigen_utils.to_matrix(PauliSum(b.n_qubits, [(b, 1.)]))

    # Probability of a = +1, then of b = +1 given each outcome of a
    p_a = {}
    p_b = {}
    for outcome in (1, -1):
        collapsed = (state + outcome * (matrix_a @ state)) / 2
        weight = float(np.real(np.vdot(collapsed, collapsed)))
        p_a[outcome] = weight
        if weight > constants.DROP_TOL:
            collapsed = collapsed / np.sqrt(weight)
            mean_b = float(np.real(np.vdot(collapsed, matrix_b @ collapsed)))
        else:
            mean_b = 0.
        p_b[outcome] = float(np.clip((1 + mean_b) / 2, 0, 1))

    outcomes_a = np.where(rng.random(shots) < p_a[1], 1., -1.)
    thresholds = np.where(outcomes_a > 0, p_b[1], p_b[-1])
    outcomes_b = np.where(rng.random(shots) < thresholds, 1., -1.)
    return outcomes_a, outcomes_b


def gate_estimate(clique_size, n_system_qubits):
    """
    Upper-bound estimate of single-qubit and CNOT gates for measuring a
    clique: N_s (|C| - 1) each. A clique of size 2 costs O(N_s).
    """
    if clique_size < 1:
        raise ValueError("Clique size must be at least 1")
    count = n_system_qubits * (clique_size - 1)
    return count, count


def measurement_report(H, epsilon=DEFAULT_MEASUREMENT["epsilon"],
                       method="lcu", variances=None):
    """
    Clique-cover statistics, shot estimates and gate estimates of H.

    Returns
    -------
    dict
    """
    plan = build_plan(H, epsilon, method)
    estimate = estimate_shots(plan, variances)
    sizes = [len(clique) for clique in plan.cliques]
    return {
        "terms_before": plan.n_terms,
        "cliques_after": len(plan.cliques),
        "reduction_factor": plan.n_terms / len(plan.cliques)
        if plan.cliques else 1.,
        "ratio": estimate.ratio,
        "ratio_bound": estimate.bound,
        "shots": estimate.to_dict(),
        "clique_sizes": sizes,
        "gate_estimates": [
            dict(zip(("size", "single_qubit", "cnot"),
                     (size, *gate_estimate(size, H.n_qubits))))
            for size in sizes],
    }


################################################################################
#                          MeasurementPlanner Class                            #
################################################################################
class MeasurementPlanner:
    """
    Measurement planning with settings from the "measurement" configuration
    section.
    """

    def __init__(self, config=None, method=None):
        self.config = {**DEFAULT_MEASUREMENT, **(config or {})}
        if method is not None:
            self.config["method"] = method
        if self.config["method"] not in METHODS:
            raise ValueError(f"Unknown rotation method "
                             f"`{self.config['method']}`")


    def plan(self, H):
        return build_plan(H, self.config["epsilon"], self.config["method"])


    def report(self, H, variances=None):
        return measurement_report(H, self.config["epsilon"],
                                  self.config["method"], variances)


    def simulate(self, H, state=None, shots=None, seed=None):
        """
        Sample the grouped estimator, on the ground state of H by default.
        """
        if H.n_qubits > self.config["max_qubits"]:
            raise TooManyQubits(H.n_qubits, self.config["max_qubits"])
        if state is None:
            _, state = eigen_utils.ground_energy(H)
        return simulate_shots(
            state, self.plan(H),
            shots=self.config["shots"] if shots is None else shots,
            seed=self.config["seed"] if seed is None else seed,
            max_qubits=self.config["max_qubits"])
