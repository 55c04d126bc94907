"""
unitary_partitioning.py

Description:
    Operators R mapping a normalized anticommuting observable
    A = sum_j r_j P_j onto a single Pauli word (R A R^dagger = P_k), built
    either as a sequence of rotations or as a linear combination of Pauli
    words, and symbolic conjugation of Pauli sums by them.
"""

# Standard libraries
import itertools
import logging
import math
from dataclasses import dataclass, field

# Non-standard libraries
import numpy as np

# Custom libraries
from src.data import constants
from src.classes.pauli import (PHASES, PauliSum, PauliWord, commutes,
                               multiply, multiply_exponent)
from src.utils.errors import (DimensionMismatch, NotAnticommuting,
                              NotNormalized, UnknownWord)


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

# Single-qubit relabellings that preserve commutation relations
RELABELLINGS = [dict(zip("XYZ", perm))
                for perm in itertools.permutations("XYZ")]


################################################################################
#                                 Data Classes                                 #
################################################################################
@dataclass
class AnticommutingObservable:
    """
    A = sum_j r_j P_j over pairwise anticommuting words, with sum r_j^2 = 1.
    """
    terms: list
    target_index: int = None

    def __post_init__(self):
        self.terms = [(_as_word(w), float(r)) for w, r in self.terms]
        if not self.terms:
            raise ValueError("Observable needs at least one term!")

        # CHECK: Pairwise anticommuting
        for (a, _), (b, _) in itertools.combinations(self.terms, 2):
            if commutes(a, b):
                raise NotAnticommuting(a.label, b.label)

        # CHECK: Normalized amplitudes
        norm = math.sqrt(sum(r ** 2 for _, r in self.terms))
        if abs(norm - 1) > constants.NORM_TOL:
            raise NotNormalized(norm)

        if self.target_index is None:
            amplitudes = [abs(r) for _, r in self.terms]
            self.target_index = int(np.argmax(amplitudes))
        elif not isinstance(self.target_index, (int, np.integer)):
            self.target_index = self.index_of(self.target_index)


    @classmethod
    def from_state(cls, reps, r, target=None):
        """
        A(r) = sum_j r_j P_0^(j) over clique representatives.

        Parameters
        ----------
        reps : list of PauliWord
            Clique representatives
        r : sequence of float
            Unit vector of amplitudes
        target : int, str or PauliWord, optional
            Target term. Defaults to the largest |r_j|.
        """
        return cls(list(zip(reps, r)), target)


    def index_of(self, word):
        word = _as_word(word)
        for i, (term_word, _) in enumerate(self.terms):
            if term_word == word:
                return i
        raise UnknownWord(word.label)


    @property
    def n_qubits(self):
        return self.terms[0][0].n_qubits


    @property
    def target(self):
        return self.terms[self.target_index][0]


    def __len__(self):
        return len(self.terms)


    def to_pauli_sum(self):
        return PauliSum(self.n_qubits, self.terms)


@dataclass
class SeqRotPlan:
    """
    R_S = R_m ... R_1, each step R_t = exp(+i theta_t / 2 * W_t).

    Note
    ----
    Steps are stored in application order (first step acts first).
    """
    n_qubits: int
    target: PauliWord
    steps: list = field(default_factory=list)
    target_sign: int = 1

    def to_operator(self):
        """
        Returns R_S as a Pauli sum.
        """
        operator = PauliSum.identity(self.n_qubits)
        for word, angle in self.steps:
            step = PauliSum(self.n_qubits, [
                (PauliWord.identity(self.n_qubits), math.cos(angle / 2)),
                (word, 1j * math.sin(angle / 2))])
            operator = step @ operator
        return operator


    def apply(self, H):
        for word, angle in self.steps:
            H = rotate(H, word, angle)
        return H


@dataclass
class LcuOperator:
    """
    R_LCU = delta_I * I + sum_j coeff_j * P_k P_j.
    """
    n_qubits: int
    target: PauliWord
    identity_coeff: float = 1.0
    terms: list = field(default_factory=list)
    target_sign: int = 1

    def to_operator(self):
        return PauliSum(self.n_qubits,
                        [(PauliWord.identity(self.n_qubits),
                          self.identity_coeff)] + list(self.terms))


    def apply(self, H):
        operator = self.to_operator()
        return operator @ H @ operator.dagger()


################################################################################
#                                Main Functions                                #
################################################################################
def build_seqrot(A):
    """
    Sequence of rotations sending A onto its target word.

    Note
    ----
    Each step rotates P_j onto P_k with W the Hermitian word of P_k P_j,
    angle theta = atan2(s * r_j, r_k) where P_k P_j = i s W, so that the
    P_k coefficient grows to sqrt(r_k^2 + r_j^2) > 0. Non-target terms are
    eliminated in ascending |r_j| order.

    Parameters
    ----------
    A : AnticommutingObservable

    Returns
    -------
    SeqRotPlan
    """
    k = A.target_index
    target, running = A.terms[k]

    others = sorted((j for j in range(len(A)) if j != k),
                    key=lambda j: (abs(A.terms[j][1]), j))

    steps = []
    for j in others:
        word, amplitude = A.terms[j]
        exponent, generator = multiply_exponent(target, word)
        sign = round(np.real(-1j * PHASES[exponent]))
        angle = math.atan2(sign * amplitude, running)
        running = math.hypot(running, amplitude)
        steps.append((generator, angle))

    target_sign = 1 if len(A) > 1 or running > 0 else -1
    return SeqRotPlan(n_qubits=A.n_qubits, target=target, steps=steps,
                      target_sign=target_sign)


def build_lcu(A):
    """
    Linear combination of unitaries sending A onto its target word.

    Note
    ----
    With cos(phi) = r_k and delta_j = r_j / sin(phi),
    R = cos(phi / 2) I + sin(phi / 2) sum_j delta_j P_k P_j.

    Parameters
    ----------
    A : AnticommutingObservable

    Returns
    -------
    LcuOperator
    """
    k = A.target_index
    target, r_k = A.terms[k]

    # CASE 1: Already a single word
    if len(A) == 1:
        return LcuOperator(n_qubits=A.n_qubits, target=target,
                           target_sign=1 if r_k > 0 else -1)

    phi = math.acos(float(np.clip(r_k, -1, 1)))
    omega = math.sin(phi)
    others = [j for j in range(len(A)) if j != k]

    # CASE 2: A = -P_k, rotate by pi with the first other word
    if omega < constants.NORM_TOL:
        deltas = {others[0]: 1.0}
    else:
        deltas = {j: A.terms[j][1] / omega for j in others}

    terms = []
    for j, delta in deltas.items():
        phase, word = multiply(target, A.terms[j][0])
        terms.append((word, math.sin(phi / 2) * delta * phase))

    return LcuOperator(n_qubits=A.n_qubits, target=target,
                       identity_coeff=math.cos(phi / 2), terms=terms)


def conjugate(H, R):
    """
    Symbolic conjugation R H R^dagger.

    Parameters
    ----------
    H : PauliSum
        Operator to conjugate
    R : SeqRotPlan or LcuOperator

    Returns
    -------
    PauliSum
    """
    if H.n_qubits != R.n_qubits:
        raise DimensionMismatch(f"Operator on {H.n_qubits} qubits, rotation "
                                f"on {R.n_qubits}")
    rotated = R.apply(H)
    if H.is_hermitian():
        rotated = rotated.real_part(check=False)
    return rotated


def rotate(H, word, angle):
    """
    exp(+i angle / 2 * W) H exp(-i angle / 2 * W) for a Pauli word W.

    Note
    ----
    Commuting terms are unchanged; anticommuting terms P become
    cos(angle) P + i sin(angle) W P. At angle = pi / 2 the rotation is the
    Clifford P -> i W P and is applied exactly.
    """
    clifford = math.isclose(angle, math.pi / 2)
    cos, sin = (0., 1.) if clifford else (math.cos(angle), math.sin(angle))

    terms = []
    for term_word, coeff in H:
        if commutes(term_word, word):
            terms.append((term_word, coeff))
            continue
        phase, product = multiply(word, term_word)
        if not clifford:
            terms.append((term_word, coeff * cos))
        terms.append((product, coeff * 1j * sin * phase))
    return PauliSum(H.n_qubits, terms)


def lcu_term_bound(n_terms, size):
    """
    |H| (1 + (|A| - 1) + (|A| - 1)(|A| - 2) / 2).
    """
    return n_terms * (1 + (size - 1) + (size - 1) * (size - 2) // 2)


def term_growth_report(H, A):
    """
    Term counts after conjugating H with both constructions.

    Returns
    -------
    tuple of (int, int, int)
        Sequence-of-rotations count, LCU count and the LCU bound
    """
    count_seqrot = len(conjugate(H, build_seqrot(A)))
    count_lcu = len(conjugate(H, build_lcu(A)))
    bound = lcu_term_bound(len(H), len(A))
    LOGGER.debug(f"|A|={len(A)}: SeqRot {count_seqrot} terms, LCU "
                 f"{count_lcu} terms (bound {bound})")
    return count_seqrot, count_lcu, bound


def random_anticommuting_set(n_qubits, size, rng):
    """
    Random normalized anticommuting observable on n qubits.

    Note
    ----
    Draws `size` of the 2n + 1 mutually anticommuting words
    Z..Z X I..I, Z..Z Y I..I and Z..Z, then relabels X/Y/Z independently on
    each qubit.

    Parameters
    ----------
    n_qubits : int
    size : int
        At most 2n + 1
    rng : numpy.random.Generator

    Returns
    -------
    AnticommutingObservable
    """
    if size > 2 * n_qubits + 1:
        raise ValueError(f"At most {2 * n_qubits + 1} words anticommute on "
                         f"{n_qubits} qubits")

    labels = ["Z" * n_qubits]
    for j in range(n_qubits):
        for char in "XY":
            labels.append("Z" * j + char + "I" * (n_qubits - j - 1))

    chosen = [labels[i] for i in rng.permutation(len(labels))[:size]]
    relabels = [RELABELLINGS[i] for i in
                rng.integers(len(RELABELLINGS), size=n_qubits)]
    words = ["".join(relabels[j].get(c, c) for j, c in enumerate(label))
             for label in chosen]

    amplitudes = rng.normal(size=size)
    amplitudes /= np.linalg.norm(amplitudes)
    return AnticommutingObservable(list(zip(words, amplitudes)))


################################################################################
#                               Helper Functions                               #
################################################################################
def _as_word(word):
    return PauliWord.from_label(word) if isinstance(word, str) else word
