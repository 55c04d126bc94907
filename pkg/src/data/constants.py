"""
constants.py

Description:
    Contains global constants
"""

# Standard libraries
import os


################################################################################
#                                    Paths                                     #
################################################################################
DIR_SRC = os.path.dirname(os.path.dirname(__file__))
DIR_TEMPLATES = os.path.join(DIR_SRC, "templates")
DIR_DATA = os.path.join(DIR_SRC, "data")

# Path to default configuration (optimizer, eigensolver, measurement settings)
CONFIG_JSON = os.path.join(DIR_DATA, "config.json")

# Embedded fixtures
TOY_HAMILTONIAN_JSON = os.path.join(DIR_DATA, "toy_hamiltonian.json")
PERES_MERMIN_JSON = os.path.join(DIR_DATA, "peres_mermin.json")


################################################################################
#                                  Tolerances                                  #
################################################################################
# Coefficients below this magnitude are dropped from a PauliSum
DROP_TOL = 1e-12

# Maximum imaginary part tolerated on a Hermitian PauliSum
HERMITIAN_TOL = 1e-10

# Energies closer than this are treated as ties
TIE_TOL = 1e-9

# Allowed deviation of ||r|| from 1
NORM_TOL = 1e-10


################################################################################
#                                    Guards                                    #
################################################################################
# Largest generator count enumerated by the brute-force solver
MAX_GENERATORS = 24

# Largest qubit count handled by exact diagonalization
MAX_EIGEN_QUBITS = 16

# Above this qubit count, the iterative solver is used
DENSE_MAX_QUBITS = 10

# Largest qubit count for dense shot simulation
MAX_SIMULATION_QUBITS = 12

# Largest number of stabilizer subsets searched exhaustively
BRUTE_FORCE_MAX_SUBSETS = 4096


################################################################################
#                                 Pauli Labels                                 #
################################################################################
# Single-qubit factor to (x, z) bits
CHAR_TO_BITS = {
    "I": (0, 0),
    "X": (1, 0),
    "Z": (0, 1),
    "Y": (1, 1),
}
BITS_TO_CHAR = {v: k for k, v in CHAR_TO_BITS.items()}
