"""Stabilizer-state simulation with a destabilizer/stabilizer tableau.

The state of n qubits is tracked by 2n Pauli generator rows over GF(2):

    rows 0..n-1    destabilizers
    rows n..2n-1   stabilizers

    x[i, j], z[i, j]   X/Z bit of generator i on qubit j
    r[i]               sign bit (0 -> +1, 1 -> -1)

Gates conjugate all rows in O(n); measuring an arbitrary Pauli observable is
O(n^2).  States are equivalence classes under global phase, so only a sign
bit per row is kept.  Every nondeterministic operation takes an explicit
numpy Generator; identical seeds reproduce identical transcripts.

    >>> s = new_basis_state(2)
    >>> s.apply_gate(hadamard(0)); s.apply_gate(cnot(0, 1))
    >>> s.stabilizer_labels()
    ['+XX', '+ZZ']
"""

from __future__ import annotations

import numpy as np

from .gf2 import rank as gf2_rank
from .paulis import (CliffordGate, PauliOperator, cnot, gate_bit_update,
                     hadamard, product_phase_exponents)

__all__ = ["StabilizerState", "new_basis_state", "MeasurementResult"]


class MeasurementResult(tuple):
    """(outcome, deterministic) pair; outcome is +1 or -1."""

    __slots__ = ()

    def __new__(cls, outcome: int, deterministic: bool):
        return super().__new__(cls, (int(outcome), bool(deterministic)))

    @property
    def outcome(self) -> int:
        return self[0]

    @property
    def deterministic(self) -> bool:
        return self[1]


class StabilizerState:
    """Tableau representation of an n-qubit stabilizer state."""

    __slots__ = ("n", "x", "z", "r")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        for i in range(n):
            self.x[i, i] = 1          # destabilizer i = X_i
            self.z[n + i, i] = 1      # stabilizer i = Z_i

    @classmethod
    def from_rows(cls, destabilizers, stabilizers, check: bool = True) -> "StabilizerState":
        """Build a tableau from explicit generator rows (each a PauliOperator)."""
        destabilizers = list(destabilizers)
        stabilizers = list(stabilizers)
        if len(destabilizers) != len(stabilizers) or not stabilizers:
            raise ValueError("need equally many destabilizers and stabilizers")
        n = stabilizers[0].n
        state = cls(n)
        for i, row in enumerate(destabilizers + stabilizers):
            if row.n != n:
                raise ValueError("row length mismatch")
            if not row.is_hermitian():
                raise ValueError("tableau rows must be Hermitian (+/- signs only)")
            state.x[i] = row.x
            state.z[i] = row.z
            state.r[i] = row.phase // 2
        if check:
            state.validate()
        return state

    def copy(self) -> "StabilizerState":
        dup = StabilizerState.__new__(StabilizerState)
        dup.n = self.n
        dup.x = self.x.copy()
        dup.z = self.z.copy()
        dup.r = self.r.copy()
        return dup

    # ------------------------------------------------------------------
    # row access
    def destabilizer(self, i: int) -> PauliOperator:
        return PauliOperator(self.x[i], self.z[i], 2 * int(self.r[i]))

    def stabilizer(self, i: int) -> PauliOperator:
        return PauliOperator(self.x[self.n + i], self.z[self.n + i], 2 * int(self.r[self.n + i]))

    def stabilizer_labels(self) -> list[str]:
        return [self.stabilizer(i).label for i in range(self.n)]

    def destabilizer_labels(self) -> list[str]:
        return [self.destabilizer(i).label for i in range(self.n)]

    def __str__(self) -> str:
        return "\n".join(self.stabilizer_labels())

    # ------------------------------------------------------------------
    # operations
    def apply(self, op) -> None:
        """Apply a CliffordGate or a PauliOperator."""
        if isinstance(op, CliffordGate):
            self.apply_gate(op)
        elif isinstance(op, PauliOperator):
            self.apply_pauli(op)
        else:
            raise TypeError(f"stabilizer simulation cannot apply {type(op).__name__}")

    def apply_gate(self, gate: CliffordGate) -> None:
        for q in gate.qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")
        gate_bit_update(self.x, self.z, self.r, gate)

    def apply_pauli(self, p: PauliOperator) -> None:
        """Conjugate the state by a Pauli: rows anticommuting with p flip sign."""
        if p.n != self.n:
            raise ValueError(f"length mismatch: {p.n} vs {self.n}")
        self.r ^= self._anticommute_mask(p)

    def _anticommute_mask(self, p: PauliOperator) -> np.ndarray:
        s = (self.x * p.z[np.newaxis, :]).sum(axis=1) + (self.z * p.x[np.newaxis, :]).sum(axis=1)
        return (s % 2).astype(np.uint8)

    def _rowmult(self, h: int, j: int) -> None:
        """row_h <- row_h * row_j with exact sign tracking."""
        g = int(product_phase_exponents(self.x[h], self.z[h], self.x[j], self.z[j]).sum())
        total = (2 * int(self.r[h]) + 2 * int(self.r[j]) + g) % 4
        assert total % 2 == 0, "row product is not Hermitian"
        self.r[h] = total // 2
        self.x[h] ^= self.x[j]
        self.z[h] ^= self.z[j]

    @staticmethod
    def _check_observable(p: PauliOperator) -> int:
        if p.is_identity():
            raise ValueError("identity is not a valid observable")
        if not p.is_hermitian():
            raise ValueError("observable must be Hermitian (phase +1 or -1)")
        return p.sign

    def measure_pauli(self, p: PauliOperator, rng: np.random.Generator) -> MeasurementResult:
        """Measure a Pauli observable; returns (outcome, deterministic).

        Deterministic outcomes leave the state untouched and draw no
        randomness; nondeterministic ones draw one uniform variate and update
        the tableau with the projected state.
        """
        if p.n != self.n:
            raise ValueError(f"length mismatch: {p.n} vs {self.n}")
        sign_p = self._check_observable(p)
        acomm = self._anticommute_mask(p)
        stab_hits = np.nonzero(acomm[self.n:])[0]
        if stab_hits.size:
            q = self.n + int(stab_hits[0])
            for i in np.nonzero(acomm)[0]:
                i = int(i)
                if i == q or i == q - self.n:
                    continue
                self._rowmult(i, q)
            # old stabilizer row becomes the paired destabilizer
            self.x[q - self.n] = self.x[q]
            self.z[q - self.n] = self.z[q]
            self.r[q - self.n] = self.r[q]
            outcome = 1 if rng.random() < 0.5 else -1
            self.x[q] = p.x
            self.z[q] = p.z
            self.r[q] = 0 if outcome * sign_p == 1 else 1
            return MeasurementResult(outcome, False)
        return MeasurementResult(self._deterministic_outcome(p, acomm, sign_p), True)

    def _deterministic_outcome(self, p: PauliOperator, acomm: np.ndarray, sign_p: int) -> int:
        # p (mod sign) is in the stabilizer group; the product of stabilizer
        # rows whose destabilizer partner anticommutes with p reproduces it.
        acc_x = np.zeros(self.n, dtype=np.uint8)
        acc_z = np.zeros(self.n, dtype=np.uint8)
        acc_phase = 0
        for i in range(self.n):
            if not acomm[i]:
                continue
            j = self.n + i
            g = int(product_phase_exponents(acc_x, acc_z, self.x[j], self.z[j]).sum())
            acc_phase = (acc_phase + 2 * int(self.r[j]) + g) % 4
            acc_x ^= self.x[j]
            acc_z ^= self.z[j]
        if not (np.array_equal(acc_x, p.x) and np.array_equal(acc_z, p.z)):
            raise RuntimeError("tableau inconsistency while resolving a deterministic outcome")
        s = 1 if acc_phase == 0 else -1
        return sign_p * s

    def peek_pauli(self, p: PauliOperator) -> MeasurementResult | None:
        """Outcome the observable would give if deterministic, else None.

        Never mutates the state and never draws randomness.
        """
        if p.n != self.n:
            raise ValueError(f"length mismatch: {p.n} vs {self.n}")
        sign_p = self._check_observable(p)
        acomm = self._anticommute_mask(p)
        if acomm[self.n:].any():
            return None
        return MeasurementResult(self._deterministic_outcome(p, acomm, sign_p), True)

    # ------------------------------------------------------------------
    # entropy
    def reduced_entropy(self, subset) -> float:
        """Exact von Neumann entropy (in bits) of the reduced state on subset.

        For a stabilizer state this is |A| - log2 |S_A| where S_A is the
        subgroup of stabilizers supported inside A; it equals |A| - n plus the
        GF(2) rank of the stabilizer rows restricted to the complement, and is
        always a nonnegative integer.  An empty subset has entropy 0 (note:
        the reduced state of nothing is trivially pure).
        """
        subset = sorted(set(int(q) for q in subset))
        if any(q < 0 or q >= self.n for q in subset):
            raise ValueError("subset index out of range")
        if not subset:
            return 0.0
        comp = [q for q in range(self.n) if q not in subset]
        if not comp:
            return 0.0
        stab_x = self.x[self.n:, comp]
        stab_z = self.z[self.n:, comp]
        restricted = np.hstack([stab_x, stab_z])
        return float(len(subset) - self.n + gf2_rank(restricted))

    # ------------------------------------------------------------------
    # invariants
    def validate(self) -> None:
        """Raise if the tableau is not a valid symplectic basis."""
        if self.x.shape != (2 * self.n, self.n) or self.z.shape != self.x.shape:
            raise ValueError("tableau shape is corrupted")
        if not np.isin(self.r, (0, 1)).all():
            raise ValueError("sign bits must be 0 or 1")
        xi = self.x.astype(np.int64)
        zi = self.z.astype(np.int64)
        gram = (xi @ zi.T + zi @ xi.T) % 2
        n = self.n
        if gram[n:, n:].any():
            raise ValueError("stabilizer rows do not all commute")
        if gram[:n, :n].any():
            raise ValueError("destabilizer rows do not all commute")
        if not np.array_equal(gram[:n, n:], np.eye(n, dtype=np.int64)):
            raise ValueError("destabilizer/stabilizer pairing is broken")


def new_basis_state(n: int) -> StabilizerState:
    """|0...0> on n >= 1 qubits: stabilizers Z_i, destabilizers X_i."""
    return StabilizerState(n)


def bell_pair() -> StabilizerState:
    """Two qubits in (|00> + |11>)/sqrt(2); handy in tests."""
    s = new_basis_state(2)
    s.apply_gate(hadamard(0))
    s.apply_gate(cnot(0, 1))
    return s
