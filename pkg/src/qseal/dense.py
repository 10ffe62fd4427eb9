"""Dense state-vector oracle for cross-validating the tableau simulator.

Amplitudes are indexed with qubit 0 as the most significant bit, matching the
tensor order P_0 (x) P_1 (x) ... used by `PauliOperator`.  The register size
is capped (default 14 qubits) because this backend exists for desk-scale
verification, not production simulation.

Measurements follow the same randomness contract as the tableau: a
deterministic outcome (probability within 1e-12 of 0 or 1) consumes nothing,
otherwise exactly one uniform variate decides the branch.  Running the same
seeded generator through both simulators therefore yields identical
transcripts on stabilizer-preparable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .paulis import CliffordGate, PauliOperator
from .tableau import MeasurementResult

DEFAULT_DENSE_CAP = 14
_DET_TOL = 1e-12

_H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_S_MATRIX = np.array([[1, 0], [0, 1j]], dtype=complex)


@dataclass(frozen=True)
class SingleQubitUnitary:
    """An arbitrary 2x2 unitary; only the dense backend accepts these."""

    qubit: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("matrix must be 2x2")
        if not np.allclose(m @ m.conj().T, np.eye(2), atol=1e-10):
            raise ValueError("matrix is not unitary")
        object.__setattr__(self, "matrix", m)

    def remap(self, mapping) -> "SingleQubitUnitary":
        return SingleQubitUnitary(mapping[self.qubit], self.matrix)


class DenseState:
    """Exact 2^n-amplitude pure state."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, cap: int = DEFAULT_DENSE_CAP):
        if n < 1:
            raise ValueError("need at least one qubit")
        if n > cap:
            raise ValueError(f"dense oracle capped at {cap} qubits (asked for {n})")
        self.n = n
        self.amps = np.zeros(2 ** n, dtype=complex)
        self.amps[0] = 1.0

    def copy(self) -> "DenseState":
        dup = DenseState.__new__(DenseState)
        dup.n = self.n
        dup.amps = self.amps.copy()
        return dup

    # ------------------------------------------------------------------
    # operations
    def apply(self, op) -> None:
        if isinstance(op, CliffordGate):
            self.apply_gate(op)
        elif isinstance(op, PauliOperator):
            self.apply_pauli(op)
        elif isinstance(op, SingleQubitUnitary):
            self._apply_single(op.qubit, op.matrix)
        else:
            raise TypeError(f"cannot apply {type(op).__name__}")

    def apply_gate(self, gate: CliffordGate) -> None:
        for q in gate.qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")
        if gate.kind == "H":
            self._apply_single(gate.qubits[0], _H_MATRIX)
        elif gate.kind == "S":
            self._apply_single(gate.qubits[0], _S_MATRIX)
        else:
            self._apply_cnot(*gate.qubits)

    def _apply_single(self, q: int, mat: np.ndarray) -> None:
        t = self.amps.reshape(2 ** q, 2, -1)
        self.amps = np.einsum("ab,ibj->iaj", mat, t).reshape(-1)

    def _apply_cnot(self, control: int, target: int) -> None:
        view = self.amps.reshape((2,) * self.n)
        moved = np.moveaxis(view, (control, target), (0, 1))
        tmp = moved[1, 0].copy()
        moved[1, 0] = moved[1, 1]
        moved[1, 1] = tmp

    def apply_pauli(self, p: PauliOperator) -> None:
        """Single-pass application: P|b> = i^ph (-1)^(b.z) |b xor x> up to the
        Y bookkeeping folded into the global phase."""
        if p.n != self.n:
            raise ValueError(f"length mismatch: {p.n} vs {self.n}")
        n = self.n
        # qubit q is bit (n-1-q) of the amplitude index
        xint = int(sum(int(p.x[q]) << (n - 1 - q) for q in range(n)))
        zint = int(sum(int(p.z[q]) << (n - 1 - q) for q in range(n)))
        phase = (p.phase + int((p.x & p.z).sum())) % 4  # canonical Y = i XZ
        idx = np.arange(2 ** n, dtype=np.int64)
        src = idx ^ xint
        signs = 1.0 - 2.0 * (np.bitwise_count(src & zint) & 1)
        self.amps = (1j ** phase) * signs * self.amps[src]

    # ------------------------------------------------------------------
    # measurement
    def pauli_expectation(self, p: PauliOperator) -> float:
        moved = self.copy()
        moved.apply_pauli(p)
        val = np.vdot(self.amps, moved.amps)
        return float(val.real)

    def measure_pauli(self, p: PauliOperator, rng: np.random.Generator) -> MeasurementResult:
        if p.is_identity():
            raise ValueError("identity is not a valid observable")
        if not p.is_hermitian():
            raise ValueError("observable must be Hermitian (phase +1 or -1)")
        p_plus = (1.0 + self.pauli_expectation(p)) / 2.0
        if p_plus >= 1.0 - _DET_TOL:
            return MeasurementResult(1, True)
        if p_plus <= _DET_TOL:
            return MeasurementResult(-1, True)
        outcome = 1 if rng.random() < p_plus else -1
        self.project_pauli(p, outcome)
        return MeasurementResult(outcome, False)

    def peek_pauli(self, p: PauliOperator) -> MeasurementResult | None:
        """Deterministic outcome if there is one, else None; never mutates."""
        if p.is_identity():
            raise ValueError("identity is not a valid observable")
        if not p.is_hermitian():
            raise ValueError("observable must be Hermitian (phase +1 or -1)")
        e = self.pauli_expectation(p)
        if e >= 1.0 - 2 * _DET_TOL:
            return MeasurementResult(1, True)
        if e <= -1.0 + 2 * _DET_TOL:
            return MeasurementResult(-1, True)
        return None

    def project_pauli(self, p: PauliOperator, outcome: int) -> float:
        """Project onto the +/-1 eigenspace of p, renormalize, return the probability.

        A (numerically) zero-probability branch returns 0.0 and leaves the
        state untouched; callers drop such branches.
        """
        moved = self.copy()
        moved.apply_pauli(p)
        projected = (self.amps + outcome * moved.amps) / 2.0
        prob = float(np.vdot(projected, projected).real)
        if prob <= _DET_TOL:
            return 0.0
        self.amps = projected / np.sqrt(prob)
        return prob

    def branch_measure(self, p: PauliOperator) -> list[tuple[float, int, "DenseState"]]:
        """Both measurement branches as (probability, outcome, state), zero branches dropped."""
        out = []
        for outcome in (1, -1):
            branch = self.copy()
            prob = branch.project_pauli(p, outcome)
            if prob > _DET_TOL:
                out.append((prob, outcome, branch))
        return out

    # ------------------------------------------------------------------
    # inspection
    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def qubit_density(self, q: int) -> np.ndarray:
        """2x2 reduced density matrix of one qubit."""
        t = self.amps.reshape((2,) * self.n)
        moved = np.moveaxis(t, q, 0).reshape(2, -1)
        return moved @ moved.conj().T

    def subset_entropy(self, subset) -> float:
        """Von Neumann entropy (bits) of the reduced state on subset."""
        subset = sorted(set(int(q) for q in subset))
        if any(q < 0 or q >= self.n for q in subset):
            raise ValueError("subset index out of range")
        if not subset or len(subset) == self.n:
            return 0.0
        if len(subset) > self.n - len(subset):
            subset = [q for q in range(self.n) if q not in subset]
        rest = [q for q in range(self.n) if q not in subset]
        t = self.amps.reshape((2,) * self.n).transpose(subset + rest)
        mat = t.reshape(2 ** len(subset), -1)
        rho = mat @ mat.conj().T
        evals = np.linalg.eigvalsh(rho)
        evals = evals[evals > 1e-14]
        return float(-(evals * np.log2(evals)).sum())


def dense_from_circuit(n: int, ops, cap: int = DEFAULT_DENSE_CAP) -> DenseState:
    """Run a preparation (gates, Paulis, single-qubit unitaries) from |0...0>."""
    state = DenseState(n, cap=cap)
    for op in ops:
        state.apply(op)
    return state


def fidelity(a: DenseState, b: DenseState) -> float:
    """|<a|b>|^2 for two pure states on the same register."""
    if a.n != b.n:
        raise ValueError("states live on different registers")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)
