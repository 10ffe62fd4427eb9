import numpy as np
import pytest

from qseal.codes import five_qubit_code, steane_code
from qseal.paulis import PauliOperator, cnot, hadamard, phase_gate
from qseal.seal import SealParameters


@pytest.fixture(scope="session")
def steane():
    return steane_code()


@pytest.fixture(scope="session")
def perfect():
    return five_qubit_code()


@pytest.fixture(scope="session")
def desk_params(steane, perfect):
    """The 12-qubit desk instance: [[7,1,3]] message + [[5,1,3]] decoy."""
    return SealParameters(message_code=steane, decoy_code=perfect, seed=20240999)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def random_stabilizer_circuit(rng, n, length):
    """A mixed list of ("gate", g) and ("measure", pauli) operations."""
    ops = []
    for _ in range(length):
        k = rng.integers(5)
        if k == 0:
            ops.append(("gate", hadamard(int(rng.integers(n)))))
        elif k == 1:
            ops.append(("gate", phase_gate(int(rng.integers(n)))))
        elif k == 2 and n > 1:
            a, b = rng.choice(n, size=2, replace=False)
            ops.append(("gate", cnot(int(a), int(b))))
        else:
            label = "".join("IXYZ"[rng.integers(4)] for _ in range(n))
            if set(label) == {"I"}:
                continue
            ops.append(("measure", PauliOperator.from_label(label)))
    return ops


def run_circuit_transcript(state, ops, rng):
    transcript = []
    for kind, op in ops:
        if kind == "gate":
            state.apply_gate(op)
        else:
            outcome, deterministic = state.measure_pauli(op, rng)
            transcript.append((outcome, deterministic))
    return transcript
