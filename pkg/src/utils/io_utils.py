"""
io_utils.py

Description:
    Reading and writing Hamiltonian files, pipeline reports and configuration.

    Hamiltonian files are JSON documents of the form
        {"n_qubits": 4, "terms": [["XZXI", [0.7, 0.0]], ...], "metadata": {}}
"""

# Standard libraries
import csv
import json
import logging
import os

# Custom libraries
from src.data import constants
from src.classes.pauli import PauliSum, PauliWord
from src.utils.errors import (CsVqeError, IoError, LengthMismatch,
                              NonHermitian, ParseError)


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

# Columns of the CSV mirror of a report
REPORT_COLUMNS = ("qubits", "terms", "energy", "delta_e")


################################################################################
#                                Main Functions                                #
################################################################################
def parse_hamiltonian(document, text=None):
    """
    Validate a Hamiltonian document and build its Pauli sum.

    Parameters
    ----------
    document : dict
        Parsed JSON document
    text : str, optional
        Raw file text, used to report line numbers

    Returns
    -------
    tuple of (PauliSum, dict)
        Hermitian Pauli sum and metadata
    """
    if not isinstance(document, dict) or "terms" not in document:
        raise ParseError(1, "Expected an object with a `terms` list")

    n_qubits = document.get("n_qubits")
    if not isinstance(n_qubits, int) or n_qubits < 0:
        raise ParseError(_line_of(text, "n_qubits"),
                         f"Invalid n_qubits {n_qubits!r}")
    if not isinstance(document["terms"], list):
        raise ParseError(_line_of(text, "terms"), "`terms` must be a list")

    terms = []
    for term in document["terms"]:
        try:
            label, (real, imag) = term
            coeff = complex(float(real), float(imag))
        except (TypeError, ValueError) as error:
            raise ParseError(_line_of(text, json.dumps(term)[:12]),
                             f"Malformed term {term!r}") from error
        if not isinstance(label, str):
            raise ParseError(_line_of(text, str(label)),
                             f"Malformed term {term!r}")
        if len(label) != n_qubits:
            raise LengthMismatch(n_qubits, len(label), label)
        word = PauliWord.from_label(label) if label else \
            PauliWord.identity(0)
        terms.append((word, coeff))

    H = PauliSum(n_qubits, terms)
    if not H.is_hermitian():
        raise NonHermitian(H.max_imag())
    return H.real_part(), dict(document.get("metadata", {}))


def load_hamiltonian(path):
    """
    Load a Hamiltonian JSON file.

    Parameters
    ----------
    path : str
        Path to file

    Returns
    -------
    tuple of (PauliSum, dict)
        Hermitian Pauli sum and metadata
    """
    try:
        with open(path, "r") as handler:
            text = handler.read()
    except OSError as error:
        raise IoError(f"Unable to read `{path}`! {error}") from error

    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise ParseError(error.lineno, error.msg) from error

    H, metadata = parse_hamiltonian(document, text)
    LOGGER.info(f"SUCCESS: Loaded {len(H)} terms on {H.n_qubits} qubits "
                f"from `{path}`")
    return H, metadata


def save_hamiltonian(path, H, metadata=None):
    """
    Save a Pauli sum as a Hamiltonian JSON file.
    """
    document = {
        "n_qubits": H.n_qubits,
        "terms": [[word.label, [coeff.real, coeff.imag]] for word, coeff in H],
        "metadata": dict(metadata or {}),
    }
    save_json(path, document)


def save_report(path, report, csv_path=None):
    """
    Save a report as JSON, with an optional CSV mirror of its rows.

    Parameters
    ----------
    path : str
        JSON path
    report : dict or object with `to_dict()`
    csv_path : str, optional
        If given, rows are also written as "qubits,terms,energy,delta_e"
    """
    document = report.to_dict() if hasattr(report, "to_dict") else \
        dict(report)
    document.setdefault("rows", [])
    save_json(path, document)

    if csv_path is not None:
        try:
            with open(csv_path, "w", newline="") as handler:
                write_rows_csv(handler, document["rows"])
        except OSError as error:
            raise IoError(f"Unable to write `{csv_path}`! {error}") from error
    LOGGER.info(f"SUCCESS: Saved report to `{path}`")


def write_rows_csv(handler, rows):
    """
    Write report rows to an open text handle.
    """
    writer = csv.DictWriter(handler, fieldnames=REPORT_COLUMNS,
                            extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)


def load_report(path):
    try:
        with open(path, "r") as handler:
            return json.load(handler)
    except OSError as error:
        raise IoError(f"Unable to read `{path}`! {error}") from error
    except json.JSONDecodeError as error:
        raise ParseError(error.lineno, error.msg) from error


def load_config(path=constants.CONFIG_JSON):
    """
    Load configuration file, with settings grouped by section.
    """
    if not os.path.exists(path):
        raise IoError(f"Configuration file does not exist at `{path}`!")
    with open(path, "r") as handler:
        try:
            return json.load(handler)
        except json.JSONDecodeError as error:
            raise ParseError(error.lineno, error.msg) from error


def load_fixture(name):
    """
    Load an embedded Hamiltonian by name ("toy" or "peres_mermin").
    """
    paths = {
        "toy": constants.TOY_HAMILTONIAN_JSON,
        "peres_mermin": constants.PERES_MERMIN_JSON,
    }
    if name not in paths:
        raise CsVqeError(f"No embedded fixture named `{name}`")
    return load_hamiltonian(paths[name])


################################################################################
#                               Helper Functions                               #
################################################################################
def save_json(path, document):
    """
    Write a JSON document, raising IoError if the path is unwritable.
    """
    try:
        with open(path, "w") as handler:
            json.dump(document, handler, indent=4)
    except OSError as error:
        raise IoError(f"Unable to write `{path}`! {error}") from error


def _line_of(text, needle):
    """
    1-based line of the first occurrence of `needle` in `text`, else 1.
    """
    if not text or not needle:
        return 1
    index = text.find(needle)
    return text.count("\n", 0, index) + 1 if index >= 0 else 1
