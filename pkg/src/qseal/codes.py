"""Stabilizer code definitions, syndrome decoding and code-geometry scans.

Conventions fixed here (and relied on by the serialized formats):

* generator order is part of a code's identity; syndromes are reported as
  bit tuples in that order (bit = 1 means the generator measured -1);
* CSS constructions list all X-type generators first, then all Z-type;
* the [[7,1,3]] code uses the [7,4,3] Hamming parity checks for both sides
  and the transversal logicals X^(x)7 / Z^(x)7;
* the [[5,1,3]] code uses the cyclic shifts of XZZXI with logicals
  X^(x)5 / Z^(x)5.

Decoding is a precomputed minimum-weight lookup table, complete for all
errors of weight <= t; distances are verified exhaustively for n <= 10.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gf2
from .dense import SingleQubitUnitary
from .encoding import synthesize_encoder, verify_encoder
from .paulis import CliffordGate, PauliOperator, all_pauli_bitvectors, invert_gates

Syndrome = tuple[int, ...]

DISTANCE_SCAN_LIMIT = 10
COVERING_SCAN_LIMIT = 8


class UncorrectableError(Exception):
    """Measured syndrome falls outside the decode table."""

    def __init__(self, syndrome: Syndrome):
        super().__init__(f"syndrome {syndrome} is not correctable by this table")
        self.syndrome = syndrome


@dataclass(frozen=True)
class StabilizerCode:
    """An [[n,1,d]] stabilizer code with a verified encoder circuit."""

    name: str
    n: int
    d: int
    generators: tuple[PauliOperator, ...]
    logical_x: PauliOperator
    logical_z: PauliOperator
    encoder: tuple[CliffordGate, ...]
    k: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.k != 1:
            raise ValueError("only single-logical-qubit codes are supported")
        if len(self.generators) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} generators, got {len(self.generators)}")
        for g in self.generators:
            if g.n != self.n or not g.is_hermitian():
                raise ValueError("generators must be Hermitian length-n Paulis")
        for a, b in itertools.combinations(self.generators, 2):
            if not a.commutes(b):
                raise ValueError(f"generators do not commute: {a.label}, {b.label}")
        for logical in (self.logical_x, self.logical_z):
            for g in self.generators:
                if not logical.commutes(g):
                    raise ValueError("logical operators must commute with all generators")
        if self.logical_x.commutes(self.logical_z):
            raise ValueError("logical X and Z must anticommute")
        if self.generators:
            bits = np.array([g.bits() for g in self.generators], dtype=np.uint8)
            if gf2.rank(bits) != self.n - 1:
                raise ValueError("generators are not independent")
        if not verify_encoder(self.encoder, self.generators, self.logical_x, self.logical_z):
            raise ValueError("encoder does not realize the stabilizer/logical targets")
        if self.n <= DISTANCE_SCAN_LIMIT:
            scanned = code_distance(self)
            if scanned != self.d:
                raise ValueError(f"declared distance {self.d} but exhaustive scan finds {scanned}")

    @property
    def t(self) -> int:
        """Number of correctable errors, floor((d-1)/2)."""
        return (self.d - 1) // 2

    def stabilizer_rowspace(self) -> gf2.Rowspace:
        if not self.generators:
            return gf2.Rowspace(np.zeros((0, 2 * self.n), dtype=np.uint8))
        return gf2.Rowspace(np.array([g.bits() for g in self.generators], dtype=np.uint8))

    def normalizer_rowspace(self) -> gf2.Rowspace:
        rows = [g.bits() for g in self.generators]
        rows.append(self.logical_x.bits())
        rows.append(self.logical_z.bits())
        return gf2.Rowspace(np.array(rows, dtype=np.uint8))

    def generator_matrix(self) -> np.ndarray:
        """(n-1) x 2n bit matrix of the generators."""
        if not self.generators:
            return np.zeros((0, 2 * self.n), dtype=np.uint8)
        return np.array([g.bits() for g in self.generators], dtype=np.uint8)


# ----------------------------------------------------------------------
# concrete codes

HAMMING_743_CHECKS = np.array(
    [[0, 0, 0, 1, 1, 1, 1],
     [0, 1, 1, 0, 0, 1, 1],
     [1, 0, 1, 0, 1, 0, 1]], dtype=np.uint8)


@lru_cache(maxsize=None)
def steane_code() -> StabilizerCode:
    """The [[7,1,3]] CSS code from the [7,4,3] Hamming checks."""
    return css_from_parity_checks(
        HAMMING_743_CHECKS, HAMMING_743_CHECKS, name="steane7",
        logical_x=PauliOperator.from_label("XXXXXXX"),
        logical_z=PauliOperator.from_label("ZZZZZZZ"))


@lru_cache(maxsize=None)
def five_qubit_code() -> StabilizerCode:
    """The [[5,1,3]] perfect code: cyclic shifts of XZZXI."""
    labels = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
    gens = tuple(PauliOperator.from_label(l) for l in labels)
    lx = PauliOperator.from_label("XXXXX")
    lz = PauliOperator.from_label("ZZZZZ")
    encoder = tuple(synthesize_encoder(gens, lx, lz))
    return StabilizerCode(name="perfect5", n=5, d=3, generators=gens,
                          logical_x=lx, logical_z=lz, encoder=encoder)


def css_from_parity_checks(hx, hz, name: str | None = None,
                           declared_distance: int | None = None,
                           logical_x: PauliOperator | None = None,
                           logical_z: PauliOperator | None = None) -> StabilizerCode:
    """Build a CSS code from two orthogonal classical parity-check matrices.

    ``hx`` rows become X-type generators, ``hz`` rows Z-type.  Requires
    hx @ hz.T = 0 over GF(2) and a single logical qubit.  Logical operators
    default to minimum-weight X-type/Z-type representatives; the distance is
    scanned exhaustively for n <= 10, otherwise ``declared_distance`` is
    required and trusted.
    """
    hx = _as_check_matrix(hx)
    hz = _as_check_matrix(hz)
    if hx.size == 0 and hz.size == 0:
        raise ValueError("need at least one parity check")
    n = hx.shape[1] if hx.size else hz.shape[1]
    if hx.size == 0:
        hx = np.zeros((0, n), dtype=np.uint8)
    if hz.size == 0:
        hz = np.zeros((0, n), dtype=np.uint8)
    if hx.shape[1] != n or hz.shape[1] != n:
        raise ValueError("hx and hz must have the same number of columns")
    if hx.size and hz.size and ((hx @ hz.T) % 2).any():
        raise ValueError("hx and hz are not orthogonal over GF(2)")
    rx, rz = gf2.rank(hx), gf2.rank(hz)
    k = n - rx - rz
    if k != 1:
        raise ValueError(f"construction yields k={k}, only k=1 is supported")

    if logical_x is None:
        xbar = _css_logical(ker_of=hz, modulo=hx)
        logical_x = PauliOperator(xbar, np.zeros(n, dtype=np.uint8))
    if logical_z is None:
        zbar = _css_logical(ker_of=hx, modulo=hz, odd_overlap_with=logical_x.x)
        logical_z = PauliOperator(np.zeros(n, dtype=np.uint8), zbar)

    gens = tuple(PauliOperator(row, np.zeros(n, dtype=np.uint8)) for row in hx) + \
        tuple(PauliOperator(np.zeros(n, dtype=np.uint8), row) for row in hz)

    encoder = tuple(synthesize_encoder(gens, logical_x, logical_z))
    if n <= DISTANCE_SCAN_LIMIT:
        d = _distance_from_parts(n, gens, logical_x, logical_z)
    else:
        if declared_distance is None:
            raise ValueError(f"n={n} exceeds the exhaustive scan limit; pass declared_distance")
        d = declared_distance
    return StabilizerCode(name=name or f"css{n}", n=n, d=d, generators=gens,
                          logical_x=logical_x, logical_z=logical_z, encoder=encoder)


def _as_check_matrix(h) -> np.ndarray:
    arr = np.array(h, dtype=np.uint8)
    if arr.size == 0:
        return arr.reshape(0, 0)
    return np.atleast_2d(arr) % 2


def _css_logical(ker_of: np.ndarray, modulo: np.ndarray,
                 odd_overlap_with: np.ndarray | None = None) -> np.ndarray:
    """Minimum-weight kernel vector outside (and reduced modulo) a rowspace."""
    n = ker_of.shape[1] if ker_of.size else len(odd_overlap_with)
    space = gf2.Rowspace(modulo if modulo.size else np.zeros((0, n), dtype=np.uint8))
    if ker_of.size:
        kernel = gf2.kernel_basis(ker_of)
    else:
        kernel = np.eye(n, dtype=np.uint8)
    candidate = None
    for v in kernel:
        if space.contains(v):
            continue
        if odd_overlap_with is not None and int(odd_overlap_with @ v) % 2 == 0:
            continue
        candidate = v
        break
    if candidate is None and odd_overlap_with is not None:
        # combine kernel vectors to hit odd overlap
        base = None
        for v in kernel:
            if not space.contains(v):
                base = v
                break
        if base is None:
            raise ValueError("no logical representative exists")
        for v in kernel:
            if int(odd_overlap_with @ (base ^ v)) % 2 == 1 and not space.contains(base ^ v):
                candidate = base ^ v
                break
        if candidate is None and int(odd_overlap_with @ base) % 2 == 1:
            candidate = base
    if candidate is None:
        raise ValueError("no logical representative exists")
    return _min_weight_in_coset(candidate, modulo)


def _min_weight_in_coset(vec: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Smallest-weight element of vec + rowspace(basis); ties break on row order."""
    if basis.size == 0:
        return vec.copy()
    reduced, pivots = gf2.rref(basis)
    rows = reduced[: len(pivots)]
    if len(rows) > 16:
        return vec.copy()  # coset too large to enumerate; keep the given rep
    combos = _all_combinations(rows)
    cands = combos ^ vec
    weights = cands.sum(axis=1)
    return cands[int(np.argmin(weights))].astype(np.uint8)


def _all_combinations(rows: np.ndarray) -> np.ndarray:
    """All 2^m GF(2) combinations of the given rows."""
    m = len(rows)
    idx = np.arange(2 ** m, dtype=np.int64)
    sel = ((idx[:, None] >> np.arange(m)[None, :]) & 1).astype(np.uint8)
    return (sel @ rows) % 2


# ----------------------------------------------------------------------
# syndromes and decoding


def syndrome_of_pauli(code: StabilizerCode, error: PauliOperator) -> Syndrome:
    """Classical syndrome: bit i = 1 iff the error anticommutes with generator i."""
    if error.n != code.n:
        raise ValueError(f"length mismatch: {error.n} vs {code.n}")
    return tuple(0 if error.commutes(g) else 1 for g in code.generators)


def measure_syndrome(state, code: StabilizerCode, block, rng) -> Syndrome:
    """Measure every generator (embedded via block) in order; 0 means +1.

    Mutates the state like any projective measurement.  The caller owns the
    state; interleaving other operations on the same block mid-syndrome is
    not supported.
    """
    block = list(block)
    bits = []
    for g in code.generators:
        outcome, _ = state.measure_pauli(g.embed(state.n, block), rng)
        bits.append(0 if outcome == 1 else 1)
    return tuple(bits)


def peek_syndrome(state, code: StabilizerCode, block) -> Syndrome | None:
    """The syndrome if every generator is deterministic, else None.  Non-mutating."""
    block = list(block)
    bits = []
    for g in code.generators:
        res = state.peek_pauli(g.embed(state.n, block))
        if res is None:
            return None
        bits.append(0 if res.outcome == 1 else 1)
    return tuple(bits)


@dataclass(frozen=True)
class DecodeTable:
    """Minimum-weight corrections for all errors of weight <= t."""

    code_name: str
    t: int
    entries: dict[Syndrome, PauliOperator]

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, syndrome: Syndrome) -> PauliOperator:
        try:
            return self.entries[tuple(syndrome)]
        except KeyError:
            raise UncorrectableError(tuple(syndrome)) from None


def paulis_of_weight(n: int, w: int):
    """All weight-w Paulis on n qubits (phase +1), positions then letters ordered."""
    for positions in itertools.combinations(range(n), w):
        for letters in itertools.product("XYZ", repeat=w):
            p = PauliOperator.identity(n)
            for pos, letter in zip(positions, letters):
                p = p @ PauliOperator.single(n, pos, letter)
            yield p


@lru_cache(maxsize=64)
def build_decode_table(code: StabilizerCode, t: int | None = None) -> DecodeTable:
    """Lookup table complete for weight <= t; t defaults to floor((d-1)/2).

    Cached per (code, t); tables are immutable once built.
    """
    if t is None:
        t = code.t
    if t > code.t:
        raise ValueError(f"t={t} exceeds the code's correction radius {code.t}")
    entries: dict[Syndrome, PauliOperator] = {}
    for w in range(t + 1):
        for err in paulis_of_weight(code.n, w):
            s = syndrome_of_pauli(code, err)
            if s not in entries:
                entries[s] = err
    return DecodeTable(code_name=code.name, t=t, entries=entries)


def apply_correction(state, code: StabilizerCode, block, syndrome: Syndrome,
                     table: DecodeTable) -> PauliOperator:
    """Apply the table's correction on the block; returns what was applied."""
    correction = table.lookup(syndrome)
    state.apply_pauli(correction.embed(state.n, list(block)))
    return correction


# ----------------------------------------------------------------------
# encoding / decoding logical qubits


def encode_logical(state, code: StabilizerCode, block, prep=(), check_fresh: bool = False) -> None:
    """Encode: run the single-qubit prep on block position 0, then the encoder.

    ``block`` injects codeword positions into the state's register;
    the target qubits must be fresh |0>s (checked when ``check_fresh``).
    """
    block = list(block)
    if len(block) != code.n or len(set(block)) != code.n:
        raise ValueError("block must map each codeword position to a distinct qubit")
    if check_fresh:
        for q in block:
            res = state.peek_pauli(PauliOperator.single(state.n, q, "Z"))
            if res is None or res.outcome != 1:
                raise ValueError(f"target qubit {q} is not in |0>")
    for op in _prep_on(block[0], prep, state.n):
        state.apply(op)
    for gate in code.encoder:
        state.apply_gate(gate.remap(block))


def _prep_on(physical: int, prep, n_global: int):
    """Remap single-qubit prep atoms (gates, Paulis, unitaries) onto one qubit."""
    for op in prep:
        if isinstance(op, CliffordGate):
            if op.kind == "CNOT" or op.qubits != (0,):
                raise ValueError("prep must act on qubit 0 only")
            yield op.remap({0: physical})
        elif isinstance(op, PauliOperator):
            if op.n != 1:
                raise ValueError("prep Paulis must be single-qubit")
            yield op.embed(n_global, [physical])
        elif isinstance(op, SingleQubitUnitary):
            if op.qubit != 0:
                raise ValueError("prep must act on qubit 0 only")
            yield op.remap({0: physical})
        else:
            raise TypeError(f"bad prep atom {type(op).__name__}")


def decode_logical(state, code: StabilizerCode, block, rng) -> int:
    """Invert the encoder; the logical state lands on block position 0.

    Refuses (ValueError) unless the block is verifiably in the codespace,
    i.e. every generator is deterministic +1 -- correct errors first.
    Returns the physical index now carrying the logical qubit.
    """
    block = list(block)
    syndrome = peek_syndrome(state, code, block)
    if syndrome is None or any(syndrome):
        raise ValueError(f"block is not in the codespace (syndrome {syndrome}); correct it first")
    for gate in invert_gates(code.encoder):
        state.apply_gate(gate.remap(block))
    return block[0]


def measure_logical_x(state, code: StabilizerCode, block, rng) -> int:
    """Measure the encoded spin-flip operator; +1 or -1."""
    outcome, _ = state.measure_pauli(code.logical_x.embed(state.n, list(block)), rng)
    return outcome


def measure_logical_z(state, code: StabilizerCode, block, rng) -> int:
    outcome, _ = state.measure_pauli(code.logical_z.embed(state.n, list(block)), rng)
    return outcome


# ----------------------------------------------------------------------
# exhaustive geometry scans


def code_distance(code: StabilizerCode) -> int:
    """Minimum weight of a logical (commutes with all generators, not in the
    stabilizer group), by scanning all 4^n Paulis.  n <= 10 only."""
    return _distance_from_parts(code.n, code.generators, code.logical_x, code.logical_z)


def _distance_from_parts(n: int, generators, logical_x, logical_z) -> int:
    if n > DISTANCE_SCAN_LIMIT:
        raise ValueError(f"distance scan limited to n <= {DISTANCE_SCAN_LIMIT}")
    gen_matrix = (np.array([g.bits() for g in generators], dtype=np.uint8)
                  if generators else np.zeros((0, 2 * n), dtype=np.uint8))
    vectors = all_pauli_bitvectors(n)
    commuting = _commutes_with_all(vectors, gen_matrix, n)
    members = gf2.Rowspace(gen_matrix).contains_many(vectors)
    weights = (vectors[:, :n] | vectors[:, n:]).sum(axis=1)
    logical = commuting & ~members
    if not logical.any():  # pragma: no cover - impossible for k=1
        raise RuntimeError("no logical operators found")
    return int(weights[logical].min())


def _commutes_with_all(vectors: np.ndarray, gen_matrix: np.ndarray, n: int) -> np.ndarray:
    if gen_matrix.size == 0:
        return np.ones(len(vectors), dtype=bool)
    gx = gen_matrix[:, :n].astype(np.int64)
    gz = gen_matrix[:, n:].astype(np.int64)
    vx = vectors[:, :n].astype(np.int64)
    vz = vectors[:, n:].astype(np.int64)
    sym = (vx @ gz.T + vz @ gx.T) % 2
    return ~sym.any(axis=1)


def covering_radius_exhaustive(code: StabilizerCode) -> int:
    """Covering radius over GF(4)^n of the group spanned by the stabilizers
    and both logical operators: the smallest rho such that every Pauli (mod
    phase) lies within Hamming distance rho of the group.

    Exhaustive, so n <= 8; use bounds.redundancy_bound beyond that.
    """
    n = code.n
    if n > COVERING_SCAN_LIMIT:
        raise ValueError(
            f"covering radius scan limited to n <= {COVERING_SCAN_LIMIT}; "
            "use the redundancy bound for larger codes")
    basis_rows = [g.bits() for g in code.generators]
    basis_rows.append(code.logical_x.bits())
    basis_rows.append(code.logical_z.bits())
    group = _all_combinations(np.array(basis_rows, dtype=np.uint8))
    group = np.unique(group, axis=0)
    vectors = all_pauli_bitvectors(n)
    best = np.full(len(vectors), n, dtype=np.int64)
    for g in group:
        diff = vectors ^ g
        dist = (diff[:, :n] | diff[:, n:]).sum(axis=1).astype(np.int64)
        np.minimum(best, dist, out=best)
    return int(best.max())
