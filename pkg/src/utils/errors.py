"""
errors.py

Description:
    Exception hierarchy raised across the package. Each exception carries the
    exit code used by the command-line interface.
"""


################################################################################
#                                 Base Classes                                 #
################################################################################
class CsVqeError(RuntimeError):
    """
    Base exception for the package.
    """
    exit_code = 1


class InputError(CsVqeError):
    """
    Invalid input (malformed file, mismatched sizes, bad parameters).
    """
    exit_code = 2


class GuardError(CsVqeError):
    """
    Computation refused or failed because of a size/convergence guard.
    """
    exit_code = 3


################################################################################
#                                 Input Errors                                 #
################################################################################
class InvalidCharacter(InputError):
    def __init__(self, position, char=None):
        self.position = position
        super().__init__(f"Invalid Pauli character {char!r} at position "
                         f"{position}")


class EmptyString(InputError):
    def __init__(self):
        super().__init__("Pauli string is empty!")


class LengthMismatch(InputError):
    def __init__(self, expected, found, term=None):
        self.expected = expected
        self.found = found
        self.term = term
        where = f" (term {term!r})" if term is not None else ""
        super().__init__(f"Expected {expected} qubits, found {found}{where}")


class MixedLengths(InputError):
    def __init__(self, lengths):
        self.lengths = sorted(set(lengths))
        super().__init__(f"Pauli words have mixed lengths: {self.lengths}")


class ParseError(InputError):
    def __init__(self, line, reason=""):
        self.line = line
        super().__init__(f"Unable to parse Hamiltonian at line {line}! "
                         f"{reason}".strip())


class NonHermitian(InputError):
    def __init__(self, max_imag):
        self.max_imag = max_imag
        super().__init__(f"Operator is not Hermitian (max |imag| = "
                         f"{max_imag:.3e})")


class UnknownWord(InputError):
    def __init__(self, word):
        self.word = word
        super().__init__(f"Pauli word `{word}` is not in the inference table")


class DimensionMismatch(InputError):
    pass


class NotAnticommuting(InputError):
    def __init__(self, first, second):
        super().__init__(f"`{first}` and `{second}` do not anticommute")


class NotNormalized(InputError):
    def __init__(self, norm):
        self.norm = norm
        super().__init__(f"Amplitudes are not normalized (norm = {norm:.12f})")


class NotNoncontextual(InputError):
    def __init__(self, triple=None):
        self.triple = triple
        super().__init__(f"Set is contextual, offending triple: {triple}")


class InvalidVariance(InputError):
    def __init__(self, word, value):
        super().__init__(f"Variance of `{word}` must lie in [0, 1], got "
                         f"{value}")


class IndexOutOfRange(InputError):
    def __init__(self, index, n_qubits):
        super().__init__(f"Qubit index {index} out of range for {n_qubits} "
                         "qubits")


class DependentStabilizers(InputError):
    def __init__(self, word):
        super().__init__(f"Stabilizer `{word}` cannot be mapped to a new "
                         "qubit (dependent on previous entries)")


class InvalidQubitCount(InputError):
    def __init__(self, n_qubits):
        self.n_qubits = n_qubits
        super().__init__(f"Number of qubits must be non-negative, got "
                         f"{n_qubits}")


class ZeroShots(InputError):
    def __init__(self):
        super().__init__("Number of shots must be positive!")


class IoError(InputError):
    pass


################################################################################
#                                 Guard Errors                                 #
################################################################################
class TooManyGenerators(GuardError):
    def __init__(self, count, limit):
        self.count = count
        super().__init__(f"{count} generators exceed the brute-force limit "
                         f"of {limit}")


class TooManyQubits(GuardError):
    def __init__(self, n_qubits, limit):
        self.n_qubits = n_qubits
        super().__init__(f"{n_qubits} qubits exceed the limit of {limit}")


class TooLargeForExactEigensolve(TooManyQubits):
    pass


class NoConvergence(GuardError):
    def __init__(self, iterations):
        self.iterations = iterations
        super().__init__(f"Lanczos did not converge after {iterations} "
                         "iterations")


class InferenceFailure(GuardError):
    pass
