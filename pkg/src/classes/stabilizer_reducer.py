"""
stabilizer_reducer.py

Description:
    Contextual-subspace reduction. Fixes a subset W of the noncontextual
    stabilizers to their noncontextual eigenvalues: W is rotated onto
    single-qubit Z operators (unitary partitioning for A(r), then pi/2 Clifford
    rotations), and the rotated Hamiltonian is projected onto the fixed
    qubits.
"""

# Standard libraries
import concurrent.futures
import itertools
import logging
import math
from dataclasses import dataclass, field

# Non-standard libraries
import numpy as np

# Custom libraries
from src.data import constants
from src.classes import noncontextual_model
from src.classes.pauli import PauliSum, PauliWord, commutes, multiply
from src.classes.unitary_partitioning import (AnticommutingObservable,
                                              build_lcu, build_seqrot,
                                              conjugate, rotate)
from src.utils import contextuality_utils, eigen_utils
from src.utils.errors import (DependentStabilizers, DimensionMismatch,
                              IndexOutOfRange, TooLargeForExactEigensolve)


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

# Unitary-partitioning constructions
METHODS = {
    "seqrot": build_seqrot,
    "lcu": build_lcu,
}

# Default exact eigensolver settings for level energies
DEFAULT_EIGENSOLVER = {
    "dense_max_qubits": constants.DENSE_MAX_QUBITS,
    "max_qubits": constants.MAX_EIGEN_QUBITS,
    "krylov_dim": 200,
    "tol": 1e-10,
}


################################################################################
#                                 Data Classes                                 #
################################################################################
@dataclass(frozen=True)
class Stabilizer:
    """
    Signed stabilizer sign * word. For A(r), `word` is the unitary-partitioning
    target and `is_observable` is set.
    """
    word: PauliWord
    sign: int = 1
    is_observable: bool = False

    @property
    def label(self):
        if self.is_observable:
            return "+A(r)"
        return ("+" if self.sign > 0 else "-") + self.word.label


@dataclass
class StabilizerSet:
    """
    Ordered stabilizers of a noncontextual state.
    """
    entries: list
    n_qubits: int
    observable: AnticommutingObservable = None
    origin: noncontextual_model.NoncontextualState = None

    def __len__(self):
        return len(self.entries)


    def __iter__(self):
        return iter(self.entries)


    @property
    def has_observable(self):
        return any(entry.is_observable for entry in self.entries)


    def labels(self):
        return [entry.label for entry in self.entries]


    def subset(self, indices):
        """
        Stabilizers at the given positions, kept in position order.
        """
        for i in indices:
            if not 0 <= i < len(self.entries):
                raise IndexError(f"No stabilizer at position {i}")
        return StabilizerSet(entries=[self.entries[i] for i in sorted(indices)],
                             n_qubits=self.n_qubits,
                             observable=self.observable, origin=self.origin)


@dataclass
class SubspaceProjector:
    """
    Fixed qubits and their computational-basis bit (0 for Z = +1, 1 for -1).
    """
    fixed_qubits: dict = field(default_factory=dict)

    def __post_init__(self):
        self.fixed_qubits = {int(v): int(bit)
                             for v, bit in self.fixed_qubits.items()}
        if any(bit not in (0, 1) for bit in self.fixed_qubits.values()):
            raise ValueError(f"Fixed bits must be 0 or 1, got "
                             f"{self.fixed_qubits}")


    def __len__(self):
        return len(self.fixed_qubits)


    def eigenvalue(self, qubit):
        return 1 - 2 * self.fixed_qubits[qubit]


@dataclass
class RotationPlan:
    """
    U_W: optional unitary-partitioning stage followed by pi/2 rotations
    exp(+i pi/4 P) with the listed generator words.

    Note
    ----
    `assignments[i]` is the qubit whose Z the i-th entry of W lands on, and
    `sign_ledger[qubit]` the sign it lands with.
    """
    n_qubits: int
    up_stage: object = None
    clifford_stage: list = field(default_factory=list)
    assignments: list = field(default_factory=list)
    sign_ledger: dict = field(default_factory=dict)

    def apply(self, H):
        """
        Returns U_W H U_W^dagger.
        """
        if H.n_qubits != self.n_qubits:
            raise DimensionMismatch(f"Operator on {H.n_qubits} qubits, plan "
                                    f"on {self.n_qubits}")
        rotated = H
        if self.up_stage is not None:
            rotated = conjugate(rotated, self.up_stage)
        for generator in self.clifford_stage:
            rotated = rotate(rotated, generator, math.pi / 2)
        if H.is_hermitian():
            rotated = rotated.real_part(check=False)
        return rotated


    def projector(self, positions=None):
        """
        Projector fixing the qubits of the given W positions (all by default).
        """
        if positions is None:
            positions = range(len(self.assignments))
        qubits = [self.assignments[i] for i in positions]
        return SubspaceProjector({v: 0 if self.sign_ledger[v] > 0 else 1
                                  for v in qubits})


    def map_stabilizers(self, W):
        """
        Conjugate every signed stabilizer of W by the plan.
        """
        mapped = []
        for entry in W:
            if entry.is_observable:
                operator = W.observable.to_pauli_sum()
            else:
                operator = PauliSum(self.n_qubits, [(entry.word, entry.sign)])
            mapped.append(self.apply(operator))
        return mapped


@dataclass
class ReductionLevel:
    n_qubits: int
    positions: tuple
    hamiltonian: PauliSum
    energy: float


@dataclass
class SelectionResult:
    """
    Best stabilizer subset per size, keyed by the number of fixed stabilizers.
    """
    levels: dict
    strategy: str

    @property
    def fixing_order(self):
        return [self.levels[size].positions for size in sorted(self.levels)
                if size > 0]


    @property
    def removal_order(self):
        """
        Position removed between consecutive levels, or None if the levels
        are not nested.
        """
        order = []
        sizes = sorted(self.levels, reverse=True)
        for larger, smaller in zip(sizes, sizes[1:]):
            kept = set(self.levels[smaller].positions)
            removed = set(self.levels[larger].positions) - kept
            if len(removed) != 1 or not kept <= set(
                    self.levels[larger].positions):
                return None
            order.append(removed.pop())
        return order


@dataclass
class ReductionReport:
    """
    Energies and term counts of the reduced Hamiltonians per qubit count.
    """
    method: str
    legacy_full_rotation: bool
    n_qubits: int
    n_terms: int
    exact_energy: float
    noncontextual_energy: float
    noncontextual_state: dict
    stabilizers: list
    stages: list
    rows: list = field(default_factory=list)
    hamiltonians: dict = field(default_factory=dict)

    def add_level(self, level, stabilizers):
        self.rows.append({
            "qubits": level.n_qubits,
            "terms": len(level.hamiltonian),
            "energy": level.energy,
            "delta_e": level.energy - self.exact_energy,
            "fixed": [stabilizers[i] for i in level.positions],
            "positions": list(level.positions),
        })
        self.rows.sort(key=lambda row: row["qubits"])
        self.hamiltonians[level.n_qubits] = level.hamiltonian


    def to_dict(self):
        return {
            "method": self.method,
            "legacy_full_rotation": self.legacy_full_rotation,
            "n_qubits": self.n_qubits,
            "n_terms": self.n_terms,
            "exact_energy": self.exact_energy,
            "noncontextual_energy": self.noncontextual_energy,
            "noncontextual_state": self.noncontextual_state,
            "stabilizers": self.stabilizers,
            "pipeline": self.stages,
            "rows": self.rows,
            "hamiltonians": {
                str(qubits): [[word.label, [coeff.real, coeff.imag]]
                              for word, coeff in H]
                for qubits, H in sorted(self.hamiltonians.items())
            },
        }


################################################################################
#                                Main Functions                                #
################################################################################
def build_w_all(structure, state, target=None):
    """
    Stabilizers of the noncontextual state: q_i G_i for every generator, then
    A(r) with sign +1 if there are cliques.

    Parameters
    ----------
    structure : NoncontextualStructure
    state : NoncontextualState
    target : int, str or PauliWord, optional
        Unitary-partitioning target of A(r)

    Returns
    -------
    StabilizerSet
    """
    entries = [Stabilizer(word, q) for word, q in zip(structure.G, state.q)]

    observable = None
    if structure.n_cliques:
        observable = AnticommutingObservable.from_state(structure.reps,
                                                        state.r, target)
        entries.append(Stabilizer(observable.target, 1, is_observable=True))

    return StabilizerSet(entries=entries, n_qubits=structure.n_qubits,
                         observable=observable, origin=state)


def build_u(W, method="lcu"):
    """
    Rotation mapping every stabilizer of W onto a distinct single-qubit Z.

    Note
    ----
    A(r) is first mapped onto its target word by unitary partitioning (only
    if A(r) is in W). Entries are then processed in order: a non-diagonal
    entry P is mapped by exp(+i pi/4 P_b), where P_b is P with X and Y
    exchanged on its lowest X/Y qubit; a diagonal entry is first moved off
    the diagonal by exp(+i pi/4 Y_l) on its lowest unassigned Z qubit l.

    Parameters
    ----------
    W : StabilizerSet
    method : str, optional
        "seqrot" or "lcu"

    Returns
    -------
    RotationPlan
    """
    if method not in METHODS:
        raise ValueError(f"Unknown rotation method `{method}`")
    n_qubits = W.n_qubits

    # 0. Unitary-partitioning stage
    up_stage = None
    current = []
    for entry in W:
        if entry.is_observable:
            up_stage = METHODS[method](W.observable)
            current.append((up_stage.target, up_stage.target_sign))
        else:
            current.append((entry.word, entry.sign))

    # 1. Clifford stage
    plan = RotationPlan(n_qubits=n_qubits, up_stage=up_stage)
    for i, entry in enumerate(W):
        word, sign = current[i]
        free = [j for j in word.support() if j not in plan.sign_ledger]
        if word.is_diagonal:
            if not free:
                raise DependentStabilizers(entry.label)
            if word.weight == 1:
                plan.assignments.append(free[0])
                plan.sign_ledger[free[0]] = sign
                continue
            current = _clifford_step(plan, current, i,
                                     PauliWord.single(n_qubits, free[0], "Y"))
            word, sign = current[i]

        qubit = next(j for j in word.support() if word.char(j) in "XY")
        if qubit in plan.sign_ledger:
            raise DependentStabilizers(entry.label)
        generator = word.replace(qubit, "Y" if word.char(qubit) == "X" else "X")
        current = _clifford_step(plan, current, i, generator)
        word, sign = current[i]

        plan.assignments.append(qubit)
        plan.sign_ledger[qubit] = sign

    LOGGER.debug(f"Rotation plan for {W.labels()}: "
                 f"{[w.label for w in plan.clifford_stage]} -> "
                 f"{plan.sign_ledger}")
    return plan


def project(H_rot, projector):
    """
    Restrict a rotated Hamiltonian to the fixed-qubit subspace.

    Note
    ----
    Terms with X or Y on a fixed qubit vanish; Z on a fixed qubit is replaced
    by its eigenvalue. Fixed qubits are removed and the remaining ones keep
    their order.

    Parameters
    ----------
    H_rot : PauliSum
    projector : SubspaceProjector

    Returns
    -------
    PauliSum
        Operator on n - |fixed| qubits
    """
    for qubit in projector.fixed_qubits:
        if not 0 <= qubit < H_rot.n_qubits:
            raise IndexOutOfRange(qubit, H_rot.n_qubits)

    fixed = sorted(projector.fixed_qubits)
    terms = []
    for word, coeff in H_rot:
        chars = [word.char(v) for v in fixed]
        if any(char in "XY" for char in chars):
            continue
        for v, char in zip(fixed, chars):
            if char == "Z":
                coeff *= projector.eigenvalue(v)
        terms.append((word.remove_qubits(fixed), coeff))
    return PauliSum(H_rot.n_qubits - len(fixed), terms)


class SubsetEvaluator:
    """
    Reduced Hamiltonian and exact ground energy per subset of W_all, cached
    by subset positions.
    """

    def __init__(self, H, W_all, method="lcu", legacy_full_rotation=False,
                 eigensolver_config=None):
        self.H = H
        self.W_all = W_all
        self.method = method
        self.legacy_full_rotation = legacy_full_rotation
        self.eigensolver_config = {**DEFAULT_EIGENSOLVER,
                                   **(eigensolver_config or {})}
        self._cache = {}

        # Legacy mode always rotates with the full stabilizer set
        self._full_plan = None
        self._full_rotated = None
        if legacy_full_rotation:
            self._full_plan = build_u(W_all, method)
            self._full_rotated = self._full_plan.apply(H)


    def reduce(self, positions):
        """
        Returns the projected Hamiltonian for the stabilizers at `positions`.
        """
        positions = tuple(sorted(positions))
        if self.legacy_full_rotation:
            return project(self._full_rotated,
                           self._full_plan.projector(positions))

        plan = build_u(self.W_all.subset(positions), self.method)
        return project(plan.apply(self.H), plan.projector())


    def evaluate(self, positions):
        """
        Returns the ReductionLevel for the stabilizers at `positions`.
        """
        positions = tuple(sorted(positions))
        if positions not in self._cache:
            self._cache[positions] = self._solve_level(positions)
        return self._cache[positions]


    def evaluate_many(self, subsets, workers=1):
        """
        Returns the ReductionLevels of several subsets, in input order.

        Note
        ----
        With `workers` > 1, subsets missing from the cache are solved in a
        process pool. Each solve is independent of the others.
        """
        subsets = [tuple(sorted(positions)) for positions in subsets]
        missing = [positions for positions in dict.fromkeys(subsets)
                   if positions not in self._cache]
        if workers > 1 and len(missing) > 1:
            LOGGER.debug(f"Solving {len(missing)} subsets on {workers} "
                         "workers")
            with concurrent.futures.ProcessPoolExecutor(
                    max_workers=workers) as executor:
                for level in executor.map(self._solve_level, missing):
                    self._cache[level.positions] = level
        return [self.evaluate(positions) for positions in subsets]


    def _solve_level(self, positions):
        H_reduced = self.reduce(positions)
        energy, _ = eigen_utils.ground_energy(
            H_reduced,
            dense_max_qubits=self.eigensolver_config["dense_max_qubits"],
            max_qubits=self.eigensolver_config["max_qubits"],
            krylov_dim=self.eigensolver_config["krylov_dim"],
            tol=self.eigensolver_config["tol"])
        return ReductionLevel(n_qubits=H_reduced.n_qubits,
                              positions=positions, hamiltonian=H_reduced,
                              energy=float(energy))


def greedy_stabilizer_selection(H, W_all, method="lcu",
                                legacy_full_rotation=False, sizes=None,
                                brute_force_max_subsets=
                                constants.BRUTE_FORCE_MAX_SUBSETS,
                                eigensolver_config=None, evaluator=None,
                                workers=1):
    """
    Choose, per number of fixed stabilizers, the subset of W_all whose
    reduced Hamiltonian has the lowest exact ground energy.

    Note
    ----
    If 2^|W_all| - 1 <= `brute_force_max_subsets`, every subset of each size
    is evaluated. Otherwise, starting from W_all, the stabilizer whose
    removal gives the lowest energy is removed one at a time. Ties go to the
    earliest positions in W_all.

    Parameters
    ----------
    H : PauliSum
        Full Hamiltonian
    W_all : StabilizerSet
        Stabilizers of the noncontextual ground state
    method : str, optional
        "seqrot" or "lcu"
    legacy_full_rotation : bool, optional
        If True, always rotate with U_{W_all}
    sizes : iterable of int, optional
        Numbers of fixed stabilizers to report. Defaults to all
    brute_force_max_subsets : int, optional
        Largest subset count searched exhaustively
    eigensolver_config : dict, optional
        Overrides of `DEFAULT_EIGENSOLVER`
    evaluator : SubsetEvaluator, optional
        Reuse cached evaluations
    workers : int, optional
        Processes solving the candidate subsets of a level in parallel

    Returns
    -------
    SelectionResult
    """
    n_stabilizers = len(W_all)
    if evaluator is None:
        evaluator = SubsetEvaluator(H, W_all, method, legacy_full_rotation,
                                    eigensolver_config)
    limit = evaluator.eigensolver_config["max_qubits"]
    if H.n_qubits > limit:
        raise TooLargeForExactEigensolve(H.n_qubits, limit)

    sizes = sorted(set(range(n_stabilizers + 1) if sizes is None else sizes),
                   reverse=True)
    levels = {}

    # CASE 1: Exhaustive search per size
    if 2 ** n_stabilizers - 1 <= brute_force_max_subsets:
        for size in sizes:
            candidates = evaluator.evaluate_many(
                itertools.combinations(range(n_stabilizers), size), workers)
            levels[size] = _lowest(candidates)
        return SelectionResult(levels=levels, strategy="brute_force")

    # CASE 2: Greedy removal from the full set
    current = tuple(range(n_stabilizers))
    for size in range(n_stabilizers, min(sizes) - 1, -1):
        if size < n_stabilizers:
            candidates = evaluator.evaluate_many(
                [tuple(i for i in current if i != removed)
                 for removed in current], workers)
            best = _lowest(candidates)
            current = best.positions
            LOGGER.debug(f"Greedy level {size}: fixed {current}, "
                         f"E={best.energy:.8f}")
        if size in sizes:
            levels[size] = evaluator.evaluate(current)
    return SelectionResult(levels=levels, strategy="greedy")


################################################################################
#                       ContextualSubspaceReducer Class                        #
################################################################################
class ContextualSubspaceReducer:
    """
    Runs the reduction pipeline on a Hamiltonian: noncontextual extraction,
    noncontextual ground state, stabilizers, subset selection, rotation and
    projection.
    """

    def __init__(self, H, method="lcu", target=None,
                 legacy_full_rotation=False, config=None):
        """
        Parameters
        ----------
        H : PauliSum
            Hermitian Hamiltonian
        method : str, optional
            "seqrot" or "lcu"
        target : int, str or PauliWord, optional
            Unitary-partitioning target. Defaults to the largest |r_j|
        legacy_full_rotation : bool, optional
            If True, always rotate with U_{W_all}, fixing A(r) or not
        config : dict, optional
            Sections "optimizer", "eigensolver" and "reduction"
        """
        if method not in METHODS:
            raise ValueError(f"Unknown rotation method `{method}`")
        config = config or {}

        self.H = H
        self.method = method
        self.target = target
        self.legacy_full_rotation = legacy_full_rotation
        self.optimizer_config = config.get("optimizer", {})
        self.eigensolver_config = {**DEFAULT_EIGENSOLVER,
                                   **config.get("eigensolver", {})}
        self.brute_force_max_subsets = config.get("reduction", {}).get(
            "brute_force_max_subsets", constants.BRUTE_FORCE_MAX_SUBSETS)
        self.workers = config.get("reduction", {}).get("workers", 1)

        # Store completion of each pipeline stage
        self.progress = {
            "extract": False,
            "solve": False,
            "stabilizers": False,
            "select": False,
        }

        self.H_noncon = None
        self.H_con = None
        self.structure = None
        self.solution = None
        self.W_all = None
        self._evaluator = None


    def prepare(self):
        """
        Extract and solve the noncontextual part and build W_all.
        """
        if self.progress["stabilizers"]:
            return self.W_all

        limit = self.eigensolver_config["max_qubits"]
        if self.H.n_qubits > limit:
            raise TooLargeForExactEigensolve(self.H.n_qubits, limit)

        self.H_noncon, self.H_con = contextuality_utils.extract_noncontextual(
            self.H)
        self.progress["extract"] = True

        self.structure = contextuality_utils.build_structure(
            self.H_noncon.words(), self.H.n_qubits)
        self.solution = noncontextual_model.solve(
            self.H_noncon.real_part(), self.structure, self.optimizer_config)
        self.progress["solve"] = True

        self.W_all = build_w_all(self.structure, self.solution.state,
                                 self.target)
        self._evaluator = SubsetEvaluator(
            self.H, self.W_all, self.method, self.legacy_full_rotation,
            self.eigensolver_config)
        self.progress["stabilizers"] = True
        LOGGER.info(f"SUCCESS: {len(self.W_all)} stabilizers "
                    f"{self.W_all.labels()}")
        return self.W_all


    def reduced_hamiltonian(self, positions):
        """
        Reduced Hamiltonian for the stabilizers of W_all at `positions`.
        """
        self.prepare()
        return self._evaluator.reduce(positions)


    def reduce(self, qubits_to_keep):
        """
        Reduce to `qubits_to_keep` qubits with the best stabilizer subset.

        Note
        ----
        With fewer than n - `qubits_to_keep` stabilizers, every stabilizer is
        fixed and n - |W_all| qubits are kept.

        Returns
        -------
        ReductionReport
            Report with a single row
        """
        self.prepare()
        n_qubits = self.H.n_qubits
        if not 0 <= qubits_to_keep <= n_qubits:
            raise DimensionMismatch(
                f"Cannot keep {qubits_to_keep} of {n_qubits} qubits")

        # Fewer stabilizers than qubits leaves the smallest levels unreachable
        n_fixed = n_qubits - qubits_to_keep
        if n_fixed > len(self.W_all):
            n_fixed = len(self.W_all)
            LOGGER.warning(f"Only {n_fixed} stabilizers available, keeping "
                           f"{n_qubits - n_fixed} qubits instead of "
                           f"{qubits_to_keep}")
        return self._report(self._select([n_fixed]))


    def sweep(self):
        """
        Reduce to every reachable qubit count.

        Returns
        -------
        ReductionReport
            Report with one row per level
        """
        self.prepare()
        return self._report(self._select(None))


    def _select(self, sizes):
        selection = greedy_stabilizer_selection(
            self.H, self.W_all, self.method, self.legacy_full_rotation,
            sizes=sizes, brute_force_max_subsets=self.brute_force_max_subsets,
            evaluator=self._evaluator, workers=self.workers)
        self.progress["select"] = True
        LOGGER.info(f"SUCCESS: Selected stabilizers ({selection.strategy}) "
                    f"{selection.fixing_order}")
        return selection


    def _report(self, selection):
        exact_energy = self._evaluator.evaluate(()).energy
        report = ReductionReport(
            method=self.method,
            legacy_full_rotation=self.legacy_full_rotation,
            n_qubits=self.H.n_qubits,
            n_terms=len(self.H),
            exact_energy=exact_energy,
            noncontextual_energy=self.solution.energy,
            noncontextual_state=self.solution.state.to_dict(),
            stabilizers=self.W_all.labels(),
            stages=[stage for stage, done in self.progress.items() if done])
        for size in sorted(selection.levels):
            report.add_level(selection.levels[size], self.W_all.labels())
        return report


def cs_vqe_reduce(H, qubits_to_keep, method="lcu", **kwargs):
    """
    Reduce H to `qubits_to_keep` qubits.

    Parameters
    ----------
    H : PauliSum
    qubits_to_keep : int
    method : str, optional
        "seqrot" or "lcu"
    **kwargs : Keyword arguments of ContextualSubspaceReducer

    Returns
    -------
    ReductionReport
    """
    return ContextualSubspaceReducer(H, method=method, **kwargs).reduce(
        qubits_to_keep)


################################################################################
#                               Helper Functions                               #
################################################################################
def _lowest(levels):
    """
    Lowest-energy level; ties within TIE_TOL keep the earliest.
    """
    best = None
    for level in levels:
        if best is None or level.energy < best.energy - constants.TIE_TOL:
            best = level
    return best


def _clifford_step(plan, current, start, generator):
    """
    Apply P -> i * generator * P to the signed entries from `start` on and
    record the rotation.
    """
    plan.clifford_stage.append(generator)
    mapped = list(current)
    for i in range(start, len(current)):
        word, sign = current[i]
        if commutes(word, generator):
            continue
        phase, product = multiply(generator, word)
        mapped[i] = (product, sign * int(round(np.real(1j * phase))))
    return mapped
