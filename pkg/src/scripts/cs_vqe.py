"""
cs_vqe.py

Description:
    Command-line interface for contextual-subspace reduction: contextuality
    checks, reductions, measurement plans, exact eigensolves and demos.

    Exit codes: 0 success, 1 usage, 2 invalid input, 3 computation guard.
"""

# Standard libraries
import argparse
import io
import json
import logging
import os
import sys

# Non-standard libraries
import numpy as np

# Custom libraries
from src.data import constants
from src.classes.measurement_planner import MeasurementPlanner
from src.classes.pauli import PauliSum
from src.classes.stabilizer_reducer import (ContextualSubspaceReducer,
                                            build_u)
from src.classes.unitary_partitioning import build_lcu, build_seqrot
from src.utils import (contextuality_utils, eigen_utils, io_utils,
                       template_utils)
from src.utils.errors import CsVqeError


################################################################################
#                                  Constants                                   #
################################################################################
# Create logger
LOGGER = logging.getLogger(__name__)
LOGGER.setLevel(logging.DEBUG)

# Reference values of the toy walkthrough
TOY_TARGET = "YXYI"
TOY_NONCONTEXTUAL = {"IIIZ", "IIYI", "XYXI", "XZXI", "XZZI", "YXYI", "ZZZI"}
TOY_GENERATORS = ["YIYI", "IXYI", "IIIZ"]
TOY_STATE_Q = (-1, 1, -1)
TOY_STATE_R = {"XZXI": -0.70891756, "YXYI": 0.25318483, "XYXI": -0.65828059}
TOY_ENERGY = -2.47484
TOY_SEQROT_ANGLES = (1.2036225088338255, -0.7879622757719398)
TOY_LCU = {"IIII": 0.79157591, "ZZZI": 0.41580383j, "ZYZI": -0.44778874j}
TOY_ONE_QUBIT = {
    "lcu": {"I": -1.827, "X": -0.414, "Y": 0.648, "Z": -0.292},
    "seqrot": {"I": -1.827, "X": -0.198, "Y": 0.648, "Z": -0.467},
}
TOY_ONE_QUBIT_ENERGY = -2.6495
TOY_TERM_COUNTS = {0: 1, 1: 4, 2: 8, 3: 14, 4: 14}
TOY_LEGACY_TERM_COUNTS = {
    "lcu": {1: 4, 2: 10, 3: 29, 4: 29},
    "seqrot": {1: 4, 2: 10, 3: 26, 4: 26},
}
TOY_FIXING_ORDER = [(2,), (1, 2), (1, 2, 3), (0, 1, 2, 3)]


################################################################################
#                                Main Functions                                #
################################################################################
def main(args):
    """
    Run the subcommand given by the arguments.

    Parameters
    ----------
    args : argparse.Namespace
        Parsed command-line arguments

    Returns
    -------
    int
        Exit code
    """
    try:
        config = io_utils.load_config(args.config_path)
        _override_config(config, args)
        return COMMANDS[args.command](args, config)
    except CsVqeError as error:
        LOGGER.error(f"FAIL: {error}")
        return error.exit_code


def cmd_check_contextual(args, config):
    """
    Print whether the input Hamiltonian is contextual, with its Z/T split.
    """
    H, _ = io_utils.load_hamiltonian(args.input)
    words = H.words()
    Z, T = contextuality_utils.partition_commuting(words)
    triple = contextuality_utils.find_contextual_triple(words)

    verdict = {
        "contextual": triple is not None,
        "n_terms": len(H),
        "Z": len(Z),
        "T": len(T),
        "clique_sizes": None,
        "triple": None,
    }
    if triple is None:
        verdict["clique_sizes"] = [
            len(c) for c in contextuality_utils.decompose_cliques(T)]
    else:
        verdict["triple"] = [w.label for w in triple]
        H_noncon, _ = contextuality_utils.extract_noncontextual(H)
        verdict["noncontextual_terms"] = len(H_noncon)

    _emit(args, verdict)
    return 0


def cmd_reduce(args, config):
    """
    Reduce the input Hamiltonian to --keep qubits, or to every qubit count.
    """
    H, _ = io_utils.load_hamiltonian(args.input)
    reducer = ContextualSubspaceReducer(
        H, method=args.method or config["reduction"]["method"],
        target=args.target,
        legacy_full_rotation=args.legacy_full_rotation, config=config)

    report = reducer.sweep() if args.keep is None else \
        reducer.reduce(args.keep)
    _emit(args, report.to_dict(), rows=report.rows)
    return 0


def cmd_measure_plan(args, config):
    """
    Print the clique cover, shot estimates and gate estimates of the input.
    """
    H, _ = io_utils.load_hamiltonian(args.input)
    planner = MeasurementPlanner(config["measurement"], method=args.method)
    report = planner.report(H)

    if args.shots is not None:
        simulation = planner.simulate(H, shots=args.shots)
        report["simulation"] = {
            "shots": simulation.shots,
            "energy": simulation.energy,
            "exact_energy": simulation.exact_energy,
            "standard_error": simulation.standard_error,
            "cliques": simulation.cliques,
        }
    _emit(args, report)
    return 0


def cmd_eigensolve(args, config):
    """
    Print the exact ground energy of the input.
    """
    H, _ = io_utils.load_hamiltonian(args.input)
    settings = config["eigensolver"]
    energy, _ = eigen_utils.ground_energy(
        H, dense_max_qubits=settings["dense_max_qubits"],
        max_qubits=settings["max_qubits"],
        krylov_dim=settings["krylov_dim"], tol=settings["tol"],
        seed=args.seed or 0)
    _emit(args, {
        "n_qubits": H.n_qubits,
        "n_terms": len(H),
        "energy": energy,
        "method": "dense" if H.n_qubits <= settings["dense_max_qubits"]
        else "lanczos",
    })
    return 0


def cmd_demo(args, config):
    """
    Print a walkthrough of the toy example or the Peres-Mermin square.
    """
    if args.name == "peres-mermin":
        quantum_value, classical_bound, products = \
            contextuality_utils.peres_mermin_demo()
        H, _ = io_utils.load_fixture("peres_mermin")
        print(template_utils.render_template("peres_mermin_demo.txt.jj", {
            "rows": contextuality_utils.PERES_MERMIN_ROWS,
            "products": products,
            "quantum_value": quantum_value,
            "classical_bound": classical_bound,
            "contextual": contextuality_utils.is_contextual(H.words()),
        }))
        return 0 if (quantum_value, classical_bound) == (6, 4) else 1

    template_vars = toy_walkthrough(config, args.method or "lcu")
    print(template_utils.render_template("toy_demo.txt.jj", template_vars))
    return 0 if template_vars["all_passed"] else 1


################################################################################
#                               Helper Functions                               #
################################################################################
def init(parser):
    """
    Initializes ArgumentParser with subcommands and their arguments.

    Parameters
    ----------
    parser : argparse.ArgumentParser
        ArgumentParser object
    """
    arg_help = {
        "config_path": "Path to JSON file containing optimizer, eigensolver, "
                       "reduction and measurement settings",
        "verbose": "If flagged, log progress to stderr",

        "input": "Path to Hamiltonian JSON file",
        "keep": "Number of qubits to keep. If not specified, reduces to "
                "every reachable qubit count.",
        "method": "Unitary-partitioning construction",
        "legacy_full_rotation": "If flagged, always rotate with every "
                                "stabilizer, fixed or not",
        "target": "Pauli word that A(r) is rotated onto. Defaults to the term "
                  "with the largest amplitude.",
        "epsilon": "Target precision on the energy for shot estimates",
        "shots": "If specified, sample this many shots per clique on the "
                 "ground state",
        "seed": "Seed for randomized steps",
        "restarts": "Number of optimizer starts per generator assignment",
        "workers": "Number of processes for the noncontextual solve and the "
                   "stabilizer subset search",

        "output": "Path to save JSON output to. Prints to stdout by default.",
        "csv": "If flagged, write table rows as CSV",
        "name": "Demo to run",
    }

    # Shared arguments
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config_path", default=constants.CONFIG_JSON,
                        help=arg_help["config_path"])
    common.add_argument("--verbose", action="store_true",
                        help=arg_help["verbose"])
    common.add_argument("--seed", type=int, default=None,
                        help=arg_help["seed"])
    common.add_argument("--restarts", type=int, default=None,
                        help=arg_help["restarts"])
    common.add_argument("--workers", type=int, default=None,
                        help=arg_help["workers"])
    common.add_argument("--method", choices=("seqrot", "lcu"), default=None,
                        help=arg_help["method"])
    common.add_argument("--output", default=None, help=arg_help["output"])
    common.add_argument("--csv", action="store_true", help=arg_help["csv"])

    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("--input", required=True, help=arg_help["input"])

    subparsers = parser.add_subparsers(dest="command", required=True,
                                       parser_class=UsageErrorParser)

    # Arguments for each subcommand
    subparsers.add_parser("check-contextual", parents=[with_input])

    reduce_parser = subparsers.add_parser("reduce", parents=[with_input])
    reduce_parser.add_argument("--keep", type=int, default=None,
                               help=arg_help["keep"])
    reduce_parser.add_argument("--legacy-full-rotation", action="store_true",
                               help=arg_help["legacy_full_rotation"])
    reduce_parser.add_argument("--target", default=None,
                               help=arg_help["target"])

    measure_parser = subparsers.add_parser("measure-plan",
                                           parents=[with_input])
    measure_parser.add_argument("--epsilon", type=float, default=None,
                                help=arg_help["epsilon"])
    measure_parser.add_argument("--shots", type=int, default=None,
                                help=arg_help["shots"])

    subparsers.add_parser("eigensolve", parents=[with_input])

    demo_parser = subparsers.add_parser("demo", parents=[common])
    demo_parser.add_argument("name", choices=("toy", "peres-mermin"),
                             help=arg_help["name"])


class UsageErrorParser(argparse.ArgumentParser):
    """
    ArgumentParser exiting with code 1 on usage errors.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def run(argv=None):
    """
    Parse arguments, configure logging and run.

    Returns
    -------
    int
        Exit code
    """
    parser = UsageErrorParser(prog="cs_vqe")
    init(parser)
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return int(error.code or 0)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    logging.basicConfig(handlers=[handler], force=True,
                        format="%(levelname)s %(name)s: %(message)s")
    return main(args)


def toy_walkthrough(config, method="lcu"):
    """
    Run every stage on the embedded toy Hamiltonian and check it against its
    reference values.

    Returns
    -------
    dict
        Template variables of `toy_demo.txt.jj`
    """
    checks = []

    def check(name, expected, found, passed):
        checks.append({"name": name, "expected": expected, "found": found,
                       "passed": bool(passed)})

    H, _ = io_utils.load_fixture("toy")
    check("H is contextual", True,
          contextuality_utils.is_contextual(H.words()),
          contextuality_utils.is_contextual(H.words()))

    # 1. Noncontextual part, structure and ground state
    reducer = ContextualSubspaceReducer(H, method=method, target=TOY_TARGET,
                                        config=config)
    W_all = reducer.prepare()
    structure, solution = reducer.structure, reducer.solution
    found = sorted(w.label for w in reducer.H_noncon.words())
    check("Noncontextual terms", sorted(TOY_NONCONTEXTUAL), found,
          set(found) == TOY_NONCONTEXTUAL)
    generators = [w.label for w in structure.G]
    check("Generators", TOY_GENERATORS, generators,
          generators == TOY_GENERATORS)
    check("Noncontextual energy", TOY_ENERGY, round(solution.energy, 6),
          abs(solution.energy - TOY_ENERGY) < 1e-4)
    check("Generator values", TOY_STATE_Q, solution.state.q,
          solution.state.q == TOY_STATE_Q)
    r = {w.label: v for w, v in zip(structure.reps, solution.state.r)}
    check("Clique expectations", TOY_STATE_R,
          {k: round(v, 8) for k, v in r.items()},
          all(abs(r.get(k, np.inf) - v) < 1e-4
              for k, v in TOY_STATE_R.items()))

    # 2. Unitary partitioning of A(r)
    seqrot = build_seqrot(W_all.observable)
    angles = tuple(angle for _, angle in seqrot.steps)
    check("SeqRot angles", TOY_SEQROT_ANGLES, tuple(round(a, 10)
                                                     for a in angles),
          len(angles) == 2 and np.allclose(angles, TOY_SEQROT_ANGLES,
                                           atol=1e-6))
    lcu = build_lcu(W_all.observable).to_operator()
    check("LCU coefficients", {k: str(v) for k, v in TOY_LCU.items()},
          {w.label: str(np.round(c, 8)) for w, c in lcu},
          len(lcu) == 3 and all(abs(lcu[k] - v) < 1e-6
                                for k, v in TOY_LCU.items()))

    # 3. Reductions
    report = reducer.sweep()
    rows = {row["qubits"]: row for row in report.rows}
    order = [tuple(rows[q]["positions"]) for q in (3, 2, 1, 0)]
    check("Stabilizer fixing order", TOY_FIXING_ORDER, order,
          order == TOY_FIXING_ORDER)
    counts = {q: rows[q]["terms"] for q in TOY_TERM_COUNTS}
    check("Term counts", TOY_TERM_COUNTS, counts, counts == TOY_TERM_COUNTS)
    check("0-qubit energy", TOY_ENERGY, round(rows[0]["energy"], 6),
          abs(rows[0]["energy"] - TOY_ENERGY) < 1e-4)
    check("1-qubit energy", TOY_ONE_QUBIT_ENERGY,
          round(rows[1]["energy"], 6),
          abs(rows[1]["energy"] - TOY_ONE_QUBIT_ENERGY) < 1e-3)

    one_qubit = report.hamiltonians[1]
    expected = TOY_ONE_QUBIT[method]
    found = {w.label: round(c.real, 3) for w, c in one_qubit}
    check("1-qubit operator", expected, found,
          one_qubit.equals(PauliSum.from_dict(expected), tol=1e-3))

    # 4. Legacy full rotation
    legacy = ContextualSubspaceReducer(H, method=method, target=TOY_TARGET,
                                       legacy_full_rotation=True,
                                       config=config)
    counts = {4 - len(positions): len(legacy.reduced_hamiltonian(positions))
              for positions in [()] + TOY_FIXING_ORDER[:3]}
    check("Legacy term counts", TOY_LEGACY_TERM_COUNTS[method], counts,
          counts == TOY_LEGACY_TERM_COUNTS[method])

    W = W_all.subset(rows[1]["positions"])
    plan = build_u(W, method)
    mapped = [next(iter(P))[0] for P in plan.map_stabilizers(W)
              if len(P) == 1]
    found = sorted(w.label for w in mapped if w.weight == 1
                   and w.is_diagonal)
    check("Fixed stabilizers map onto single-qubit Z", len(W), found,
          len(found) == len(W) == len(set(found)))

    return {
        "H": H,
        "H_noncon": reducer.H_noncon,
        "H_con": reducer.H_con,
        "Z": [w.label for w in structure.Z],
        "cliques": [[w.label for w in c] for c in structure.cliques],
        "G": generators,
        "state": solution.state,
        "r": sorted(r.items()),
        "energy": solution.energy,
        "target": TOY_TARGET,
        "seqrot_steps": [(w.label, a) for w, a in seqrot.steps],
        "lcu": lcu,
        "method": method,
        "rows": report.rows,
        "checks": checks,
        "all_passed": all(item["passed"] for item in checks),
    }


def _override_config(config, args):
    """
    Apply command-line overrides to the loaded configuration.
    """
    for section in ("optimizer", "eigensolver", "reduction", "measurement"):
        config.setdefault(section, {})
    config["reduction"].setdefault("method", "lcu")

    if args.seed is not None:
        config["optimizer"]["seed"] = args.seed
        config["measurement"]["seed"] = args.seed
    if args.restarts is not None:
        config["optimizer"]["restarts"] = args.restarts
    if args.workers is not None:
        config["optimizer"]["workers"] = args.workers
        config["reduction"]["workers"] = args.workers
    if args.method is not None:
        config["reduction"]["method"] = args.method
        config["measurement"]["method"] = args.method
    if getattr(args, "epsilon", None) is not None:
        config["measurement"]["epsilon"] = args.epsilon


def _emit(args, document, rows=None):
    """
    Write a JSON document to --output or stdout. With --csv, table rows are
    written as CSV instead (next to --output, or to stdout).
    """
    if args.output is not None:
        if rows is None:
            io_utils.save_json(args.output, document)
            return
        csv_path = os.path.splitext(args.output)[0] + ".csv" \
            if args.csv else None
        io_utils.save_report(args.output, document, csv_path=csv_path)
        return

    if args.csv and rows is not None:
        buffer = io.StringIO()
        io_utils.write_rows_csv(buffer, rows)
        print(buffer.getvalue(), end="")
        return
    print(json.dumps(document, indent=4, default=str))


# Subcommand to handler
COMMANDS = {
    "check-contextual": cmd_check_contextual,
    "reduce": cmd_reduce,
    "measure-plan": cmd_measure_plan,
    "eigensolve": cmd_eigensolve,
    "demo": cmd_demo,
}


################################################################################
#                                  Main Flow                                   #
################################################################################
if __name__ == "__main__":
    # 0. Initialize ArgumentParser, parse arguments and run
    sys.exit(run())
