"""Pauli operators in binary symplectic form, plus Clifford gate bookkeeping.

An n-qubit Pauli is stored as two bit vectors and a phase:

    P = i**phase * canonical(x_0, z_0) (x) ... (x) canonical(x_{n-1}, z_{n-1})

with the Hermitian single-qubit alphabet

    canonical(0,0) = I,  canonical(1,0) = X,
    canonical(0,1) = Z,  canonical(1,1) = Y.

``phase`` is an integer mod 4 (a power of i), so e.g. X*Z comes out as Y with
phase 3, i.e. -iY.  Operators are treated as immutable after construction and
may be shared freely.

The same bit-update rules that conjugate a Pauli by H, S and CNOT also drive
the stabilizer tableau, so they live here (`gate_bit_update`) and are reused
by both `PauliOperator.conjugated` and `tableau.StabilizerState`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}

# i-exponent of canonical(x1,z1) * canonical(x2,z2), indexed x1*8+z1*4+x2*2+z2.
_G_TABLE = np.zeros(16, dtype=np.int8)
for _x1 in (0, 1):
    for _z1 in (0, 1):
        for _x2 in (0, 1):
            for _z2 in (0, 1):
                if (_x1, _z1) == (0, 0):
                    g = 0
                elif (_x1, _z1) == (1, 1):
                    g = _z2 - _x2
                elif (_x1, _z1) == (1, 0):
                    g = _z2 * (2 * _x2 - 1)
                else:
                    g = _x2 * (1 - 2 * _z2)
                _G_TABLE[_x1 * 8 + _z1 * 4 + _x2 * 2 + _z2] = g


def product_phase_exponents(x1, z1, x2, z2) -> np.ndarray:
    """Per-position i-exponents for canonical(1)*canonical(2), vectorized."""
    idx = (np.asarray(x1, dtype=np.intp) * 8 + np.asarray(z1, dtype=np.intp) * 4
           + np.asarray(x2, dtype=np.intp) * 2 + np.asarray(z2, dtype=np.intp))
    return _G_TABLE[idx]


class PauliOperator:
    """An n-qubit Pauli operator with phase tracking."""

    __slots__ = ("n", "x", "z", "phase")

    def __init__(self, x, z, phase: int = 0):
        x = np.asarray(x, dtype=np.uint8) % 2
        z = np.asarray(z, dtype=np.uint8) % 2
        if x.ndim != 1 or z.ndim != 1 or len(x) != len(z):
            raise ValueError("x and z bit vectors must be 1-d and equally long")
        if len(x) == 0:
            raise ValueError("a Pauli needs at least one qubit")
        self.n = len(x)
        self.x = x.copy()
        self.z = z.copy()
        self.x.flags.writeable = False
        self.z.flags.writeable = False
        self.phase = int(phase) % 4

    # ------------------------------------------------------------------
    # constructors
    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, phase: int = 0) -> "PauliOperator":
        """A one-letter Pauli (X, Y or Z) at the given position."""
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _LETTER_TO_BITS[letter.upper()]
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        x[qubit], z[qubit] = xb, zb
        return cls(x, z, phase)

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse labels like "XIZ", "-YY" or "-iXZ"."""
        s = label.strip()
        phase = 0
        for prefix, ph in (("-i", 3), ("+i", 1), ("i", 1), ("-", 2), ("+", 0)):
            if s.startswith(prefix):
                phase = ph
                s = s[len(prefix):]
                break
        letters = s.upper()
        if not letters or any(c not in _LETTER_TO_BITS for c in letters):
            raise ValueError(f"bad Pauli label: {label!r}")
        bits = [_LETTER_TO_BITS[c] for c in letters]
        x = np.array([b[0] for b in bits], dtype=np.uint8)
        z = np.array([b[1] for b in bits], dtype=np.uint8)
        return cls(x, z, phase)

    # ------------------------------------------------------------------
    # structure
    @property
    def label(self) -> str:
        body = "".join(_BITS_TO_LETTER[(int(xb), int(zb))] for xb, zb in zip(self.x, self.z))
        return _PHASE_PREFIX[self.phase] + body

    def __repr__(self) -> str:
        return f"PauliOperator({self.label!r})"

    def __str__(self) -> str:
        return self.label

    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def is_identity(self) -> bool:
        return self.weight() == 0

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators."""
        if not self.is_hermitian():
            raise ValueError("operator has an imaginary phase")
        return 1 if self.phase == 0 else -1

    def support(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.x | self.z)[0]]

    def bits(self) -> np.ndarray:
        """Concatenated (x|z) vector of length 2n."""
        return np.concatenate([self.x, self.z])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (self.n == other.n and self.phase == other.phase
                and bool(np.array_equal(self.x, other.x))
                and bool(np.array_equal(self.z, other.z)))

    def __hash__(self) -> int:
        return hash((self.n, self.phase, self.x.tobytes(), self.z.tobytes()))

    # ------------------------------------------------------------------
    # algebra
    def commutes(self, other: "PauliOperator") -> bool:
        """True iff the symplectic inner product is even."""
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        s = int(self.x @ other.z) + int(self.z @ other.x)
        return s % 2 == 0

    def __matmul__(self, other: "PauliOperator") -> "PauliOperator":
        """Operator product self*other with exact phase."""
        if not isinstance(other, PauliOperator):
            return NotImplemented
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        g = int(product_phase_exponents(self.x, self.z, other.x, other.z).sum())
        return PauliOperator(self.x ^ other.x, self.z ^ other.z,
                             self.phase + other.phase + g)

    def conjugated(self, gates) -> "PauliOperator":
        """self conjugated by a gate (or gate sequence): U P U^dag."""
        if isinstance(gates, CliffordGate):
            gates = [gates]
        x = self.x[np.newaxis, :].copy()
        z = self.z[np.newaxis, :].copy()
        flips = np.zeros(1, dtype=np.uint8)
        for g in gates:
            gate_bit_update(x, z, flips, g)
        return PauliOperator(x[0], z[0], self.phase + 2 * int(flips[0]))

    def embed(self, n_global: int, mapping) -> "PauliOperator":
        """Scatter this Pauli into a larger register.

        ``mapping[i]`` is the global index carrying local position i.
        """
        mapping = list(mapping)
        if len(mapping) != self.n:
            raise ValueError("mapping length must equal the operator size")
        if len(set(mapping)) != len(mapping):
            raise ValueError("mapping must be injective")
        x = np.zeros(n_global, dtype=np.uint8)
        z = np.zeros(n_global, dtype=np.uint8)
        for local, phys in enumerate(mapping):
            if not 0 <= phys < n_global:
                raise ValueError(f"global index {phys} out of range")
            x[phys] = self.x[local]
            z[phys] = self.z[local]
        return PauliOperator(x, z, self.phase)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    return p.commutes(q)


def pauli_multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    return p @ q


def all_pauli_bitvectors(n: int) -> np.ndarray:
    """All 4^n Paulis (mod phase) as a (4^n, 2n) uint8 array of (x|z) bits.

    Row order: index interpreted base-4, qubit 0 most significant, with digit
    0=I, 1=X, 2=Z, 3=Y.
    """
    count = 4 ** n
    idx = np.arange(count, dtype=np.int64)
    out = np.zeros((count, 2 * n), dtype=np.uint8)
    for q in range(n):
        digit = (idx // (4 ** (n - 1 - q))) % 4
        out[:, q] = (digit == 1) | (digit == 3)
        out[:, n + q] = (digit == 2) | (digit == 3)
    return out


# ----------------------------------------------------------------------
# Clifford gates


@dataclass(frozen=True)
class CliffordGate:
    """H, S (phase) or CNOT acting on tableau/Pauli bit rows."""

    kind: str  # "H" | "S" | "CNOT"
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind in ("H", "S"):
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} takes one qubit")
        elif self.kind == "CNOT":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("CNOT takes two distinct qubits")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    def remap(self, mapping) -> "CliffordGate":
        return CliffordGate(self.kind, tuple(mapping[q] for q in self.qubits))


def hadamard(q: int) -> CliffordGate:
    return CliffordGate("H", (q,))


def phase_gate(q: int) -> CliffordGate:
    return CliffordGate("S", (q,))


def cnot(control: int, target: int) -> CliffordGate:
    return CliffordGate("CNOT", (control, target))


def swap_gates(a: int, b: int) -> list[CliffordGate]:
    return [cnot(a, b), cnot(b, a), cnot(a, b)]


def pauli_x_gates(q: int) -> list[CliffordGate]:
    """X as an H/S composite (H S^2 H)."""
    return [hadamard(q), phase_gate(q), phase_gate(q), hadamard(q)]


def pauli_z_gates(q: int) -> list[CliffordGate]:
    """Z as S^2."""
    return [phase_gate(q), phase_gate(q)]


def invert_gates(gates) -> list[CliffordGate]:
    """The inverse circuit: reversed order, S replaced by S^3."""
    out: list[CliffordGate] = []
    for g in reversed(list(gates)):
        if g.kind == "S":
            out.extend([g, g, g])
        else:
            out.append(g)
    return out


def gate_bit_update(x: np.ndarray, z: np.ndarray, sign_flips: np.ndarray,
                    gate: CliffordGate) -> None:
    """Conjugate Pauli rows in place by one gate.

    ``x`` and ``z`` are (rows, n) bit matrices; ``sign_flips`` is a length-rows
    bit vector that gets XORed with 1 wherever the row picks up a -1.
    """
    if gate.kind == "H":
        (a,) = gate.qubits
        sign_flips ^= x[:, a] & z[:, a]
        tmp = x[:, a].copy()
        x[:, a] = z[:, a]
        z[:, a] = tmp
    elif gate.kind == "S":
        (a,) = gate.qubits
        sign_flips ^= x[:, a] & z[:, a]
        z[:, a] ^= x[:, a]
    elif gate.kind == "CNOT":
        c, t = gate.qubits
        sign_flips ^= x[:, c] & z[:, t] & (x[:, t] ^ z[:, c] ^ 1)
        x[:, t] ^= x[:, c]
        z[:, c] ^= z[:, t]
    else:  # pragma: no cover - guarded by CliffordGate validation
        raise ValueError(f"unknown gate kind {gate.kind!r}")
