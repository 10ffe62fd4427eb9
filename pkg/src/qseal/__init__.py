"""qseal: sealing quantum messages inside stabilizer codewords.

A message qubit is encoded with a CSS code, a few codeword positions are
secretly swapped for qubits taken from separately encoded decoy blocks, and
the swapped-out qubits stay with the verifier.  Anyone can error-correct the
public word and read the message; doing so disturbs the decoy blocks, which
the verifier detects by syndrome measurement.

The package provides the protocol phases (seal / open / verify), exact and
Monte Carlo attack analysis, the security-bound calculator, and a CLI that
writes JSON/CSV reports plus rendered figures.
"""

__version__ = "0.1.0"

from .paulis import (CliffordGate, PauliOperator, all_pauli_bitvectors, cnot,
                     commutes, hadamard, invert_gates, pauli_multiply,
                     phase_gate, swap_gates)
from .tableau import MeasurementResult, StabilizerState, new_basis_state
from .dense import (DEFAULT_DENSE_CAP, DenseState, SingleQubitUnitary,
                    dense_from_circuit, fidelity)
from .codes import (DecodeTable, StabilizerCode, Syndrome, UncorrectableError,
                    build_decode_table, code_distance,
                    covering_radius_exhaustive, css_from_parity_checks,
                    decode_logical, encode_logical, five_qubit_code,
                    measure_logical_x, measure_syndrome, steane_code,
                    syndrome_of_pauli)
from .seal import (AccessViolation, PlacementMap, SealedMessage,
                   SealParameters, VerifierKey, VerifierReport, named_prep,
                   open_seal, open_then_verify_experiment, random_state_prep,
                   seal, verify)
from .attacks import (DeterministicPauli, FullOpen, MeasureStep,
                      MeasurementScript, Mixture, Transcript, apply_strategy,
                      enumerate_passing, pass_probability, passes_exact,
                      run_attack_trials)
from .exact import (exact_detection, exact_detection_random_z,
                    placement_leak_exact, placement_templates)
from .bounds import (BoundReport, InfeasibleParameters, SecurityParameters,
                     alpha_of, binary_entropy, binary_entropy_inverse,
                     epsilon_condition, holevo_bound_ie, i_bound,
                     min_codeword_length, parameter_search,
                     pick_probability_bound, psi_info_bound, redundancy_bound)

__all__ = [
    "CliffordGate", "PauliOperator", "all_pauli_bitvectors", "cnot",
    "commutes", "hadamard", "invert_gates", "pauli_multiply", "phase_gate",
    "swap_gates", "MeasurementResult", "StabilizerState", "new_basis_state",
    "DEFAULT_DENSE_CAP", "DenseState", "SingleQubitUnitary",
    "dense_from_circuit", "fidelity",
    "DecodeTable", "StabilizerCode", "Syndrome", "UncorrectableError",
    "build_decode_table", "code_distance", "covering_radius_exhaustive",
    "css_from_parity_checks", "decode_logical", "encode_logical",
    "five_qubit_code", "measure_logical_x", "measure_syndrome", "steane_code",
    "syndrome_of_pauli",
    "AccessViolation", "PlacementMap", "SealedMessage", "SealParameters",
    "VerifierKey", "VerifierReport", "named_prep", "open_seal",
    "open_then_verify_experiment", "random_state_prep", "seal", "verify",
    "DeterministicPauli", "FullOpen", "MeasureStep", "MeasurementScript",
    "Mixture", "Transcript", "apply_strategy", "enumerate_passing",
    "pass_probability", "passes_exact", "run_attack_trials",
    "exact_detection", "exact_detection_random_z", "placement_leak_exact",
    "placement_templates",
    "BoundReport", "InfeasibleParameters", "SecurityParameters", "alpha_of",
    "binary_entropy", "binary_entropy_inverse", "epsilon_condition",
    "holevo_bound_ie", "i_bound", "min_codeword_length", "parameter_search",
    "pick_probability_bound", "psi_info_bound", "redundancy_bound",
    "__version__",
]
