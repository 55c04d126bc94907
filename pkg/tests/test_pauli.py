"""
test_pauli.py

Description:
    Tests for Pauli words, Pauli sums and their algebra.
"""

# Standard libraries
import math

# Non-standard libraries
import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

# Custom libraries
from src.classes.pauli import (PauliSum, PauliTerm, PauliWord,
                               anticommutation_probability,
                               anticommutation_probability_mc, commutes,
                               jordan_product, multiply, parse_word)
from src.utils.eigen_utils import to_matrix
from src.utils.errors import (EmptyString, InvalidCharacter,
                              InvalidQubitCount, LengthMismatch, NonHermitian)


################################################################################
#                                  Strategies                                  #
################################################################################
def labels(size):
    return st.text(alphabet="IXYZ", min_size=size, max_size=size)


pairs = st.integers(1, 3).flatmap(lambda n: st.tuples(labels(n), labels(n)))


def dense(label):
    return to_matrix(PauliSum(len(label), [(label, 1.)])).toarray()


################################################################################
#                                    Tests                                     #
################################################################################
def test_parse_word():
    word = parse_word("XZYI")
    assert word.label == "XZYI"
    assert word.n_qubits == 4
    assert word.weight == 3
    assert word.n_offdiagonal == 2
    assert word.support() == [0, 1, 2]
    assert [word.char(j) for j in range(4)] == ["X", "Z", "Y", "I"]


def test_parse_errors():
    with pytest.raises(InvalidCharacter) as error:
        parse_word("XQZ")
    assert error.value.position == 1
    assert error.value.exit_code == 2

    with pytest.raises(EmptyString):
        parse_word("")


def test_negative_qubit_count():
    with pytest.raises(InvalidQubitCount) as error:
        PauliWord(-1, 0, 0)
    assert error.value.exit_code == 2
    assert error.value.n_qubits == -1


def test_word_helpers():
    word = PauliWord.from_label("XZXI")
    assert word.replace(1, "Y").label == "XYXI"
    assert word.remove_qubits([0, 3]).label == "ZX"
    assert PauliWord.single(4, 2, "Y").label == "IIYI"
    assert PauliWord.identity(3).is_identity
    assert PauliWord.from_label("ZIZ").is_diagonal
    assert PauliWord.from_symplectic(word.symplectic()) == word


def test_multiply_single_qubit():
    X, Y, Z = (PauliWord.from_label(c) for c in "XYZ")
    assert multiply(X, Y) == (1j, Z)
    assert multiply(Y, X) == (-1j, Z)
    assert multiply(Z, X) == (1j, Y)
    assert multiply(X, X) == (1, PauliWord.identity(1))


def test_multiply_length_mismatch():
    with pytest.raises(LengthMismatch):
        multiply(parse_word("XX"), parse_word("X"))


@given(pairs)
def test_multiply_matches_matrices(pair):
    a, b = pair
    phase, word = multiply(parse_word(a), parse_word(b))
    assert np.allclose(dense(a) @ dense(b), phase * dense(word.label))


triples = st.integers(1, 3).flatmap(
    lambda n: st.tuples(labels(n), labels(n), labels(n)))


@given(triples)
def test_multiply_is_associative_with_phase(triple):
    a, b, c = (parse_word(label) for label in triple)
    phase_ab, ab = multiply(a, b)
    phase_left, left = multiply(ab, c)
    phase_bc, bc = multiply(b, c)
    phase_right, right = multiply(a, bc)
    assert left == right
    assert phase_ab * phase_left == pytest.approx(phase_bc * phase_right)


@given(pairs)
def test_commutes_matches_matrices(pair):
    a, b = pair
    A, B = dense(a), dense(b)
    assert commutes(parse_word(a), parse_word(b)) == \
        np.allclose(A @ B, B @ A)


def test_jordan_product():
    a = PauliTerm(parse_word("XI"), 2.)
    b = PauliTerm(parse_word("IX"), 3.)
    product = jordan_product(a, b)
    assert product.word.label == "XX" and product.coeff == 6.

    c = PauliTerm(parse_word("ZI"), 1.)
    assert jordan_product(a, c).is_zero


def test_pauli_sum_accumulates():
    H = PauliSum(2, [("XI", 1.), ("XI", 2.), ("ZZ", 1e-14), ("YY", 0.5)])
    assert len(H) == 2
    assert H["XI"] == 3.
    assert "ZZ" not in H
    assert H.words() == [parse_word("XI"), parse_word("YY")]


def test_pauli_sum_length_check():
    with pytest.raises(LengthMismatch):
        PauliSum(2, [("XIZ", 1.)])


def test_pauli_sum_arithmetic():
    A = PauliSum.from_dict({"X": 1., "Z": 1.})
    assert (A @ A).equals(PauliSum.identity(1, 2.))
    assert (A - A).to_dict() == {}
    assert (2 * A)["X"] == 2.
    assert (-A)["Z"] == -1.

    B = PauliSum(1, [("X", 1j)])
    assert B.dagger()["X"] == -1j
    assert not B.is_hermitian()
    with pytest.raises(NonHermitian):
        B.real_part()


@given(st.integers(0, 2 ** 16 - 1))
def test_operator_product_matches_matrices(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    terms_a = {"".join(rng.choice(list("IXYZ"), n)): complex(rng.normal())
               for _ in range(3)}
    terms_b = {"".join(rng.choice(list("IXYZ"), n)): complex(rng.normal(),
                                                            rng.normal())
               for _ in range(3)}
    A, B = PauliSum(n, terms_a), PauliSum(n, terms_b)
    expected = to_matrix(A).toarray() @ to_matrix(B).toarray()
    assert np.allclose(to_matrix(A @ B).toarray(), expected)


@given(st.integers(0, 2 ** 16 - 1))
def test_dense_round_trip(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    terms = {"".join(rng.choice(list("IXYZ"), n)): complex(rng.normal(),
                                                          rng.normal())
             for _ in range(5)}
    H = PauliSum(n, terms)
    recovered = PauliSum.from_matrix(to_matrix(H).toarray())
    assert recovered.equals(H, tol=1e-12)


def test_copy_and_from_terms():
    H = PauliSum.from_terms([PauliTerm(parse_word("XY"), 0.5),
                             PauliTerm(parse_word("XY"), 0.25),
                             PauliTerm(parse_word("ZI"), -1.)])
    assert H.to_dict() == {"XY": 0.75, "ZI": -1.}
    copied = H.copy()
    assert copied.equals(H) and copied is not H


def test_anticommutation_probability():
    assert anticommutation_probability(1) == pytest.approx(0.375)
    assert anticommutation_probability(8) == pytest.approx(
        0.5 * (1 - 0.25 ** 8))


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_anticommutation_probability_monte_carlo(n):
    samples = 10 ** 6
    p = anticommutation_probability(n)
    sigma = math.sqrt(p * (1 - p) / samples)
    estimate = anticommutation_probability_mc(n, samples, seed=n)
    assert abs(estimate - p) < 3 * sigma
