"""
pauli.py

Description:
    Exact n-qubit Pauli algebra over the symplectic (x, z) representation.
    Qubit 0 is the leftmost character of a Pauli string and the most
    significant bit of each mask. Phases are tracked as exponents of i
    modulo 4.
"""

# Standard libraries
import logging
import math
from dataclasses import dataclass

# Non-standard libraries
import numpy as np

# Custom libraries
from src.data import constants
from src.utils.errors import (EmptyString, InvalidCharacter,
                              InvalidQubitCount, LengthMismatch, NonHermitian)


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

# Phase exponent (power of i) to complex phase
PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


################################################################################
#                               PauliWord Class                                #
################################################################################
@dataclass(frozen=True)
class PauliWord:
    """
    Pauli word in symplectic form.

    Note
    ----
    Bit (n - 1 - j) of `x_mask` / `z_mask` holds the X / Z component of the
    factor on qubit j, so that `format(x_mask, "0{n}b")` reads left to right
    like the Pauli string.
    """
    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 0:
            raise InvalidQubitCount(self.n_qubits)
        limit = 1 << self.n_qubits
        if not (0 <= self.x_mask < limit) \
                or not (0 <= self.z_mask < limit):
            raise LengthMismatch(self.n_qubits,
                                 max(self.x_mask, self.z_mask).bit_length())


    @classmethod
    def from_label(cls, label):
        """
        Parse a Pauli string such as "XZXI".

        Parameters
        ----------
        label : str
            Characters in {I, X, Y, Z}

        Returns
        -------
        PauliWord
        """
        if not label:
            raise EmptyString()

        x_mask, z_mask = 0, 0
        for position, char in enumerate(label):
            if char not in constants.CHAR_TO_BITS:
                raise InvalidCharacter(position, char)
            x_bit, z_bit = constants.CHAR_TO_BITS[char]
            x_mask = (x_mask << 1) | x_bit
            z_mask = (z_mask << 1) | z_bit
        return cls(len(label), x_mask, z_mask)


    @classmethod
    def identity(cls, n_qubits):
        return cls(n_qubits, 0, 0)


    @classmethod
    def single(cls, n_qubits, qubit, char):
        """
        Word acting with `char` on `qubit` and identity elsewhere.
        """
        x_bit, z_bit = constants.CHAR_TO_BITS[char]
        shift = n_qubits - 1 - qubit
        return cls(n_qubits, x_bit << shift, z_bit << shift)


    ############################################################################
    #                              Properties                                  #
    ############################################################################
    @property
    def label(self):
        return "".join(self.char(j) for j in range(self.n_qubits))


    @property
    def weight(self):
        """Number of non-identity factors."""
        return _popcount(self.x_mask | self.z_mask)


    @property
    def n_offdiagonal(self):
        """Number of X or Y factors."""
        return _popcount(self.x_mask)


    @property
    def is_identity(self):
        return self.x_mask == 0 and self.z_mask == 0


    @property
    def is_diagonal(self):
        return self.x_mask == 0


    def char(self, qubit):
        """
        Returns the single-qubit factor on `qubit`.
        """
        shift = self.n_qubits - 1 - qubit
        bits = ((self.x_mask >> shift) & 1, (self.z_mask >> shift) & 1)
        return constants.BITS_TO_CHAR[bits]


    def support(self):
        """Qubits where the word acts non-trivially, in ascending order."""
        return [j for j in range(self.n_qubits) if self.char(j) != "I"]


    def symplectic(self):
        """
        Returns the binary vector (x_0 .. x_{n-1} | z_0 .. z_{n-1}).
        """
        vector = np.zeros(2 * self.n_qubits, dtype=np.uint8)
        for j in range(self.n_qubits):
            shift = self.n_qubits - 1 - j
            vector[j] = (self.x_mask >> shift) & 1
            vector[self.n_qubits + j] = (self.z_mask >> shift) & 1
        return vector


    @classmethod
    def from_symplectic(cls, vector):
        n_qubits = len(vector) // 2
        x_mask, z_mask = 0, 0
        for j in range(n_qubits):
            x_mask = (x_mask << 1) | int(vector[j])
            z_mask = (z_mask << 1) | int(vector[n_qubits + j])
        return cls(n_qubits, x_mask, z_mask)


    ############################################################################
    #                               Algebra                                    #
    ############################################################################
    def commutes(self, other):
        return commutes(self, other)


    def replace(self, qubit, char):
        """
        Returns a copy with the factor on `qubit` replaced by `char`.
        """
        shift = self.n_qubits - 1 - qubit
        x_bit, z_bit = constants.CHAR_TO_BITS[char]
        x_mask = (self.x_mask & ~(1 << shift)) | (x_bit << shift)
        z_mask = (self.z_mask & ~(1 << shift)) | (z_bit << shift)
        return PauliWord(self.n_qubits, x_mask, z_mask)


    def remove_qubits(self, qubits):
        """
        Drop the columns of the given qubits.
        """
        removed = set(qubits)
        label = "".join(self.char(j) for j in range(self.n_qubits)
                        if j not in removed)
        return PauliWord(len(label), *_label_masks(label))


    def __str__(self):
        return self.label


    def __repr__(self):
        return f"PauliWord({self.label!r})"


    def __lt__(self, other):
        return self.label < other.label


################################################################################
#                               PauliTerm Class                                #
################################################################################
@dataclass(frozen=True)
class PauliTerm:
    """
    Pauli word with a complex coefficient.
    """
    word: PauliWord
    coeff: complex = 1.0

    def __post_init__(self):
        coeff = complex(self.coeff)
        if not (math.isfinite(coeff.real) and math.isfinite(coeff.imag)):
            raise ValueError(f"Coefficient of `{self.word}` is not finite!")
        object.__setattr__(self, "coeff", coeff)


    @property
    def is_zero(self):
        return self.coeff == 0


    def __str__(self):
        return f"{_format_coeff(self.coeff)} {self.word.label}"


################################################################################
#                                PauliSum Class                                #
################################################################################
class PauliSum:
    """
    Linear combination of Pauli words on a fixed number of qubits.

    Words are deduplicated and terms with |coeff| below `constants.DROP_TOL`
    are never stored.
    """

    def __init__(self, n_qubits, terms=None):
        """
        Parameters
        ----------
        n_qubits : int
            Number of qubits
        terms : dict or iterable of (PauliWord | str, complex), optional
            Terms to accumulate
        """
        self.n_qubits = n_qubits
        self._terms = {}

        if terms is None:
            return
        items = terms.items() if isinstance(terms, dict) else terms
        for word, coeff in items:
            self._accumulate(word, coeff)
        self._prune()


    @classmethod
    def from_dict(cls, label_to_coeff, n_qubits=None):
        """
        Build from a {"XZXI": 0.7, ...} mapping.
        """
        if n_qubits is None:
            if not label_to_coeff:
                raise ValueError("n_qubits is required for an empty sum")
            n_qubits = len(next(iter(label_to_coeff)))
        return cls(n_qubits, label_to_coeff)


    @classmethod
    def from_terms(cls, terms):
        """
        Build from a non-empty sequence of PauliTerm.
        """
        terms = list(terms)
        if not terms:
            raise ValueError("n_qubits is required for an empty sum")
        return cls(terms[0].word.n_qubits,
                   [(term.word, term.coeff) for term in terms])


    @classmethod
    def from_matrix(cls, matrix, tol=constants.DROP_TOL):
        """
        Decompose a dense 2^n x 2^n matrix (n <= 8).
        """
        from src.utils.eigen_utils import matrix_to_pauli_sum
        return matrix_to_pauli_sum(matrix, tol)


    @classmethod
    def identity(cls, n_qubits, coeff=1.0):
        return cls(n_qubits, [(PauliWord.identity(n_qubits), coeff)])


    def copy(self):
        return PauliSum(self.n_qubits, list(self._terms.items()))


    ############################################################################
    #                               Accessors                                  #
    ############################################################################
    def __len__(self):
        return len(self._terms)


    def __iter__(self):
        """Iterate (word, coeff) in lexicographic label order."""
        for word in sorted(self._terms, key=lambda w: w.label):
            yield word, self._terms[word]


    def __contains__(self, word):
        return _to_word(word, self.n_qubits) in self._terms


    def __getitem__(self, word):
        return self._terms.get(_to_word(word, self.n_qubits), 0j)


    def words(self):
        return [word for word, _ in self]


    def terms(self):
        return [PauliTerm(word, coeff) for word, coeff in self]


    def to_dict(self):
        return {word.label: coeff for word, coeff in self}


    @property
    def identity_coefficient(self):
        return self[PauliWord.identity(self.n_qubits)]


    def max_imag(self):
        if not self._terms:
            return 0.0
        return max(abs(coeff.imag) for coeff in self._terms.values())


    def is_hermitian(self, tol=constants.HERMITIAN_TOL):
        return self.max_imag() <= tol


    def real_part(self, check=True):
        """
        Returns a copy with the imaginary parts removed.

        Parameters
        ----------
        check : bool, optional
            If True, raise NonHermitian when an imaginary part exceeds the
            hermiticity tolerance
        """
        if check and not self.is_hermitian():
            raise NonHermitian(self.max_imag())
        return PauliSum(self.n_qubits,
                        [(word, coeff.real) for word, coeff in self])


    def coefficient_norm(self, ord=2):
        coeffs = np.array([abs(c) for c in self._terms.values()])
        return float(np.linalg.norm(coeffs, ord=ord)) if len(coeffs) else 0.


    ############################################################################
    #                               Arithmetic                                 #
    ############################################################################
    def __add__(self, other):
        self._check_size(other)
        return PauliSum(self.n_qubits, list(self._terms.items())
                        + list(other._terms.items()))


    def __sub__(self, other):
        return self + (-1) * other


    def __neg__(self):
        return (-1) * self


    def __mul__(self, scalar):
        return PauliSum(self.n_qubits,
                        [(w, c * scalar) for w, c in self._terms.items()])


    __rmul__ = __mul__


    def __matmul__(self, other):
        """
        Operator product, multiplying every pair of terms.
        """
        self._check_size(other)
        product = PauliSum(self.n_qubits)
        for word_a, coeff_a in self._terms.items():
            for word_b, coeff_b in other._terms.items():
                phase, word = multiply(word_a, word_b)
                product._accumulate(word, coeff_a * coeff_b * phase)
        product._prune()
        return product


    def dagger(self):
        return PauliSum(self.n_qubits,
                        [(w, c.conjugate()) for w, c in self._terms.items()])


    def equals(self, other, tol=constants.DROP_TOL):
        """
        Term-for-term comparison within `tol`.
        """
        if self.n_qubits != other.n_qubits:
            return False
        words = set(self._terms) | set(other._terms)
        return all(abs(self[w] - other[w]) <= tol for w in words)


    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.equals(other)


    def __repr__(self):
        return f"PauliSum(n_qubits={self.n_qubits}, terms={len(self)})"


    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{_format_coeff(c)} {w.label or '.'}"
                          for w, c in self)


    ############################################################################
    #                            Helper Methods                                #
    ############################################################################
    def _accumulate(self, word, coeff):
        word = _to_word(word, self.n_qubits)
        self._terms[word] = self._terms.get(word, 0j) + complex(coeff)


    def _prune(self):
        self._terms = {w: c for w, c in self._terms.items()
                       if abs(c) >= constants.DROP_TOL}


    def _check_size(self, other):
        if self.n_qubits != other.n_qubits:
            raise LengthMismatch(self.n_qubits, other.n_qubits)


################################################################################
#                                Main Functions                                #
################################################################################
def parse_word(text):
    """
    Parse a Pauli string into a PauliWord.

    Parameters
    ----------
    text : str
        Pauli string such as "XZXI"

    Returns
    -------
    PauliWord
    """
    return PauliWord.from_label(text)


def multiply_exponent(a, b):
    """
    Multiply two Pauli words, returning the phase as a power of i.

    Parameters
    ----------
    a : PauliWord
        Left factor
    b : PauliWord
        Right factor

    Returns
    -------
    tuple of (int, PauliWord)
        Exponent e in {0, 1, 2, 3} and word W such that a·b = i^e W
    """
    if a.n_qubits != b.n_qubits:
        raise LengthMismatch(a.n_qubits, b.n_qubits)

    x_mask = a.x_mask ^ b.x_mask
    z_mask = a.z_mask ^ b.z_mask

    # Each factor is i^{xz} X^x Z^z; moving Z^{z_a} past X^{x_b} gives (-1)
    exponent = (_popcount(a.x_mask & a.z_mask)
                + _popcount(b.x_mask & b.z_mask)
                + 2 * _popcount(a.z_mask & b.x_mask)
                - _popcount(x_mask & z_mask)) % 4
    return exponent, PauliWord(a.n_qubits, x_mask, z_mask)


def multiply(a, b):
    """
    Multiply two Pauli words.

    Parameters
    ----------
    a : PauliWord
        Left factor
    b : PauliWord
        Right factor

    Returns
    -------
    tuple of (complex, PauliWord)
        Phase in {+1, +i, -1, -i} and product word
    """
    exponent, word = multiply_exponent(a, b)
    return PHASES[exponent], word


def commutes(a, b):
    """
    Returns True if the two words commute, i.e. the symplectic form is even.
    """
    if a.n_qubits != b.n_qubits:
        raise LengthMismatch(a.n_qubits, b.n_qubits)
    form = _popcount(a.x_mask & b.z_mask) + _popcount(a.z_mask & b.x_mask)
    return form % 2 == 0


def jordan_product(a, b):
    """
    Jordan product {a, b} / 2 of two Pauli terms.

    Parameters
    ----------
    a : PauliTerm
    b : PauliTerm

    Returns
    -------
    PauliTerm
        Phase-tracked product if the words commute, else a zero term on the
        identity word
    """
    if not commutes(a.word, b.word):
        return PauliTerm(PauliWord.identity(a.word.n_qubits), 0j)
    phase, word = multiply(a.word, b.word)
    return PauliTerm(word, a.coeff * b.coeff * phase)


def anticommutation_probability(n_qubits):
    """
    Probability that two uniformly random n-qubit words anticommute.
    """
    return 0.5 * (1 - 0.25 ** n_qubits)


def anticommutation_probability_mc(n, samples, seed):
    """
    Monte-Carlo estimate of the anticommutation probability of uniformly
    random word pairs.

    Parameters
    ----------
    n : int
        Number of qubits
    samples : int
        Number of sampled pairs
    seed : int
        Seed of the random number generator

    Returns
    -------
    float
        Fraction of sampled pairs that anticommute
    """
    if n < 1 or samples < 1:
        raise ValueError("Both `n` and `samples` must be positive!")

    rng = np.random.default_rng(seed)
    x_a, z_a, x_b, z_b = rng.integers(0, 2, size=(4, samples, n),
                                      dtype=np.uint8)
    form = ((x_a & z_b) ^ (z_a & x_b)).sum(axis=1) % 2
    return float(form.mean())


################################################################################
#                               Helper Functions                               #
################################################################################
def _popcount(value):
    return bin(value).count("1")


def _label_masks(label):
    x_mask, z_mask = 0, 0
    for char in label:
        x_bit, z_bit = constants.CHAR_TO_BITS[char]
        x_mask = (x_mask << 1) | x_bit
        z_mask = (z_mask << 1) | z_bit
    return x_mask, z_mask


def _to_word(word, n_qubits):
    if isinstance(word, str):
        word = PauliWord.from_label(word) if word else \
            PauliWord.identity(0)
    if word.n_qubits != n_qubits:
        raise LengthMismatch(n_qubits, word.n_qubits, word.label)
    return word


def _format_coeff(coeff):
    if abs(coeff.imag) < constants.HERMITIAN_TOL:
        return f"{coeff.real:+.6f}"
    return f"({coeff.real:+.6f}{coeff.imag:+.6f}j)"
