"""Encoder-circuit synthesis for [[n,1,d]] stabilizer codes.

Given generators g_1..g_{n-1} and a logical pair (X_L, Z_L), we want a
Clifford circuit U built from H/S/CNOT with

    U Z_0 U+ = Z_L,   U X_0 U+ = X_L,   U Z_i U+ = g_i   (i >= 1),

signs included, so that feeding |psi> on qubit 0 and |0> ancillas through U
yields the logical encoding with all generators at +1.

The construction has two steps:

1. Complete the targets to a full symplectic basis: destabilizer partners
   D_i are solved for over GF(2) (D_0 = X_L is forced), then made mutually
   commuting by multiplying in stabilizer rows.
2. Reduce the resulting 2n-row tableau to the trivial one by sweeping
   qubit-by-qubit with H/S/CNOT, recording the gates; the encoder is the
   inverse of the recorded circuit.  Residual -1 signs are cleared with
   Pauli fix-ups expressed as H/S composites.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .paulis import (CliffordGate, PauliOperator, cnot, hadamard,
                     invert_gates, pauli_x_gates, pauli_z_gates, phase_gate,
                     swap_gates)
from .tableau import StabilizerState


def _sym(u: np.ndarray, v: np.ndarray) -> int:
    n = len(u) // 2
    return int(u[:n] @ v[n:] + u[n:] @ v[:n]) % 2


def _swap_halves(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[1] // 2
    return np.hstack([rows[:, n:], rows[:, :n]])


def complete_destabilizers(generators, logical_x: PauliOperator,
                           logical_z: PauliOperator) -> tuple[list[PauliOperator], list[PauliOperator]]:
    """Extend (Z_L, g_1..g_{n-1}) with destabilizer partners.

    Returns (destabilizers, stabilizers) with the symplectic pairing
    sym(D_i, T_j) = delta_ij and all same-kind rows commuting.  Row 0 is the
    logical pair.
    """
    n = logical_x.n
    t_rows = np.array([logical_z.bits()] + [g.bits() for g in generators], dtype=np.uint8)
    if t_rows.shape != (n, 2 * n):
        raise ValueError("need exactly n-1 generators plus the logical pair")
    if gf2.rank(t_rows) != n:
        raise ValueError("stabilizers plus logical Z are not independent")

    constraint = _swap_halves(t_rows)
    d_rows = np.zeros((n, 2 * n), dtype=np.uint8)
    d_rows[0] = logical_x.bits()
    for i in range(1, n):
        rhs = np.zeros(n, dtype=np.uint8)
        rhs[i] = 1
        sol = gf2.solve(constraint, rhs)
        if sol is None:  # pragma: no cover - full-rank constraint is always solvable
            raise RuntimeError("destabilizer completion failed")
        d_rows[i] = sol

    # make destabilizers mutually commuting: D_j *= T_i fixes sym(D_i, D_j)
    for i in range(n):
        for j in range(i + 1, n):
            if _sym(d_rows[i], d_rows[j]):
                d_rows[j] ^= t_rows[i]

    destabs = [PauliOperator(row[:n], row[n:]) for row in d_rows]
    stabs = [PauliOperator(t_rows[i, :n], t_rows[i, n:],
                           (logical_z if i == 0 else generators[i - 1]).phase)
             for i in range(n)]
    return destabs, stabs


def synthesize_encoder(generators, logical_x: PauliOperator,
                       logical_z: PauliOperator) -> list[CliffordGate]:
    """H/S/CNOT circuit realizing the encoding map described in the module docs."""
    destabs, stabs = complete_destabilizers(generators, logical_x, logical_z)
    st = StabilizerState.from_rows(destabs, stabs)
    n = st.n
    gates: list[CliffordGate] = []

    def emit(gate: CliffordGate) -> None:
        st.apply_gate(gate)
        gates.append(gate)

    for i in range(n):
        # -- destabilizer row i -> X_i --
        if not st.x[i, i:].any():
            j = i + int(np.nonzero(st.z[i, i:])[0][0])
            emit(hadamard(j))
        j = i + int(np.nonzero(st.x[i, i:])[0][0])
        if j != i:
            for g in swap_gates(i, j):
                emit(g)
        for j in range(i + 1, n):
            if st.x[i, j]:
                emit(cnot(i, j))
        if st.z[i, i:].any():
            if not st.z[i, i]:
                emit(phase_gate(i))
            for j in range(i + 1, n):
                if st.z[i, j]:
                    emit(cnot(j, i))
            emit(phase_gate(i))
        # -- stabilizer row i -> Z_i --
        srow = n + i
        for j in range(i + 1, n):
            if st.x[srow, j]:
                if st.z[srow, j]:
                    emit(phase_gate(j))
                emit(hadamard(j))
        assert st.z[srow, i], "symplectic pairing lost during reduction"
        for j in range(i + 1, n):
            if st.z[srow, j]:
                emit(cnot(j, i))
        if st.x[srow, i]:
            for g in (hadamard(i), phase_gate(i), hadamard(i)):
                emit(g)

    # clear residual signs with Pauli fix-ups
    for i in range(n):
        if st.r[i]:
            for g in pauli_z_gates(i):
                emit(g)
        if st.r[n + i]:
            for g in pauli_x_gates(i):
                emit(g)

    _assert_trivial(st)
    return invert_gates(gates)


def _assert_trivial(st: StabilizerState) -> None:
    n = st.n
    eye = np.eye(n, dtype=np.uint8)
    ok = (np.array_equal(st.x[:n], eye) and not st.z[:n].any()
          and np.array_equal(st.z[n:], eye) and not st.x[n:].any()
          and not st.r.any())
    if not ok:  # pragma: no cover - indicates a synthesis bug
        raise RuntimeError("tableau reduction did not reach the trivial form")


def verify_encoder(encoder, generators, logical_x: PauliOperator,
                   logical_z: PauliOperator) -> bool:
    """Check the conjugation contract of an encoder circuit exactly."""
    n = logical_x.n
    targets = [logical_z] + list(generators)
    for i in range(n):
        got = PauliOperator.single(n, i, "Z").conjugated(encoder)
        if got != targets[i]:
            return False
    return PauliOperator.single(n, 0, "X").conjugated(encoder) == logical_x
