"""The three protocol phases: seal, open, verify.

Register layout.  The global simulation register has n + n'*t qubits:

    0 .. n-1          the public word, indexed by message-codeword position
    n .. n+t(n'-1)-1  the withheld qubits of each decoy block, block-major
    then t more       the withheld message-codeword qubits, by position order

At each of t secret codeword positions the public word carries one qubit of a
separately encoded decoy block instead of the true message qubit.  Position
labels are public (anyone may run the message code's error correction on the
word); which positions are decoys, and everything at index >= n, is the
verifier's secret.  Physical separation is modelled as access control: public
actors get a `PublicView` that refuses to touch indices past n-1.

Opening goes strictly through the public view: syndrome-measure the word as
if it were a codeword, correct from the lookup table, invert the encoder.
The decoy qubits act as at most t unknown-position erasures, so an untouched
seal opens to the exact message.  Verification reassembles the true blocks
(verifier access) and requires every generator of every block to read +1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import (StabilizerCode, Syndrome, build_decode_table,
                    decode_logical, encode_logical, measure_logical_x,
                    measure_syndrome)
from .dense import DenseState, SingleQubitUnitary, dense_from_circuit
from .paulis import CliffordGate, PauliOperator, hadamard, phase_gate
from .tableau import MeasurementResult, StabilizerState
from .util import derive_rng, make_rng, wilson_interval

VERIFY_MODES = ("original", "revised")

# Named single-qubit preparations; "i" is the +1 eigenstate of Y, reached by
# H then S.
PREP_PRESETS: dict[str, tuple] = {
    "zero": (),
    "one": (PauliOperator.from_label("X"),),
    "plus": (hadamard(0),),
    "i": (hadamard(0), phase_gate(0)),
}


def named_prep(name: str):
    try:
        return PREP_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown prep {name!r}; choose from {sorted(PREP_PRESETS)}") from None


def random_state_prep(rng: np.random.Generator) -> tuple:
    """A Haar-ish random pure single-qubit state as a dense-only prep atom."""
    theta = float(np.arccos(1 - 2 * rng.random()))
    phi = float(2 * np.pi * rng.random())
    mat = np.array([[np.cos(theta / 2), -np.sin(theta / 2)],
                    [np.exp(1j * phi) * np.sin(theta / 2),
                     np.exp(1j * phi) * np.cos(theta / 2)]], dtype=complex)
    return (SingleQubitUnitary(0, mat),)


def prep_is_clifford(prep) -> bool:
    return all(isinstance(op, (CliffordGate, PauliOperator)) for op in prep)


def prep_state(prep) -> DenseState:
    """The single-qubit state a prep produces, as a dense 2-vector."""
    return dense_from_circuit(1, prep)


class AccessViolation(Exception):
    """A public-side operation tried to reach a private qubit."""


@dataclass(frozen=True)
class SealParameters:
    """Codes, seed and optional decoy preparations for one sealing run."""

    message_code: StabilizerCode
    decoy_code: StabilizerCode
    seed: int
    decoy_preps: tuple | None = None  # one prep (atom tuple) per decoy block

    def __post_init__(self):
        if self.seed is None:
            raise ValueError("seal parameters need an explicit seed")
        if self.t < 1:
            raise ValueError("message code distance is too small to withhold any qubit")
        if self.t >= self.message_code.n:
            raise ValueError("cannot withhold every codeword position")
        if self.decoy_preps is not None and len(self.decoy_preps) != self.t:
            raise ValueError(f"need {self.t} decoy preps, got {len(self.decoy_preps)}")

    @property
    def t(self) -> int:
        """Number of decoys: floor((d-1)/2) of the message code."""
        return self.message_code.t

    @property
    def n_total(self) -> int:
        return self.message_code.n + self.decoy_code.n * self.t

    def decoy_prep(self, b: int):
        return () if self.decoy_preps is None else self.decoy_preps[b]

    def needs_dense(self, message_prep) -> bool:
        if not prep_is_clifford(message_prep):
            return True
        return self.decoy_preps is not None and not all(
            prep_is_clifford(p) for p in self.decoy_preps)


@dataclass(frozen=True)
class PlacementMap:
    """Where every logical ingredient physically lives (the verifier secret)."""

    n: int
    n_prime: int
    decoy_positions: tuple[int, ...]  # sorted codeword positions holding decoys
    exposed: tuple[int, ...]          # per block, which block position is public

    def __post_init__(self):
        if tuple(sorted(set(self.decoy_positions))) != self.decoy_positions:
            raise ValueError("decoy positions must be sorted and distinct")
        if len(self.exposed) != self.t:
            raise ValueError("need one exposed choice per decoy block")
        if any(not 0 <= p < self.n for p in self.decoy_positions):
            raise ValueError("decoy position out of range")
        if any(not 0 <= j < self.n_prime for j in self.exposed):
            raise ValueError("exposed block position out of range")

    @property
    def t(self) -> int:
        return len(self.decoy_positions)

    @property
    def n_total(self) -> int:
        return self.n + self.n_prime * self.t

    @property
    def public_indices(self) -> tuple[int, ...]:
        return tuple(range(self.n))

    @property
    def private_indices(self) -> tuple[int, ...]:
        return tuple(range(self.n, self.n_total))

    def withheld_physical(self) -> tuple[int, ...]:
        """Physical homes of the withheld message qubits, in position order."""
        base = self.n + self.t * (self.n_prime - 1)
        return tuple(base + i for i in range(self.t))

    def message_block(self) -> list[int]:
        """Codeword position -> physical qubit of the true message block."""
        withheld = self.withheld_physical()
        rank = {p: i for i, p in enumerate(self.decoy_positions)}
        return [withheld[rank[p]] if p in rank else p for p in range(self.n)]

    def decoy_block(self, b: int) -> list[int]:
        """Block position -> physical qubit of decoy block b."""
        out = []
        priv_base = self.n + b * (self.n_prime - 1)
        k = 0
        for j in range(self.n_prime):
            if j == self.exposed[b]:
                out.append(self.decoy_positions[b])
            else:
                out.append(priv_base + k)
                k += 1
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "n_prime": self.n_prime,
                "decoy_positions": list(self.decoy_positions),
                "exposed": list(self.exposed)}

    @classmethod
    def from_dict(cls, d: dict) -> "PlacementMap":
        return cls(n=int(d["n"]), n_prime=int(d["n_prime"]),
                   decoy_positions=tuple(int(p) for p in d["decoy_positions"]),
                   exposed=tuple(int(j) for j in d["exposed"]))


@dataclass(frozen=True)
class VerifierKey:
    """Everything the verifier needs: the placement plus code identities."""

    placement: PlacementMap
    message_code: StabilizerCode
    decoy_code: StabilizerCode
    seed: int


@dataclass
class SealedMessage:
    """Global state plus placement; hand `public` to untrusted parties.

    A package loaded from its public serialization has ``key`` set to None:
    opening and attacking work (they only need the public word), verification
    does not until the verifier key is attached.
    """

    state: object  # StabilizerState | DenseState
    params: SealParameters
    key: VerifierKey | None
    message_prep: tuple = ()

    @property
    def n_public(self) -> int:
        return self.params.message_code.n

    @property
    def n_total(self) -> int:
        return self.params.n_total

    @property
    def public(self) -> "PublicView":
        return PublicView(self)

    def copy(self) -> "SealedMessage":
        return SealedMessage(state=self.state.copy(), params=self.params,
                             key=self.key, message_prep=self.message_prep)

    def as_dense(self) -> "SealedMessage":
        """The same seal rebuilt on the dense oracle (fresh, untouched state)."""
        if isinstance(self.state, DenseState):
            return self.copy()
        if self.key is None:
            raise ValueError("rebuilding needs the placement (verifier key)")
        return build_sealed(self.message_prep, self.params, self.key.placement,
                            substrate="dense")

    def with_key(self, key: VerifierKey) -> "SealedMessage":
        return SealedMessage(state=self.state, params=self.params, key=key,
                             message_prep=self.message_prep)


class PublicView:
    """Simulator facade restricted to the public word.

    Exposes the usual operation set on an n-qubit register (the public word,
    indexed by codeword position) and embeds everything into the global
    state; any index past the public range raises AccessViolation.  The
    codes-module helpers run on a view unchanged.
    """

    def __init__(self, sealed: SealedMessage):
        self._sealed = sealed
        self.n = sealed.n_public

    def _check(self, qubits) -> None:
        for q in qubits:
            if not 0 <= q < self.n:
                raise AccessViolation(f"qubit {q} is not publicly accessible")

    def _embed(self, p: PauliOperator) -> PauliOperator:
        if p.n != self.n:
            raise AccessViolation(f"expected an operator on {self.n} public qubits")
        return p.embed(self._sealed.n_total, range(self.n))

    def apply(self, op) -> None:
        if isinstance(op, CliffordGate):
            self.apply_gate(op)
        elif isinstance(op, PauliOperator):
            self.apply_pauli(op)
        elif isinstance(op, SingleQubitUnitary):
            self._check((op.qubit,))
            self._sealed.state.apply(op)
        else:
            raise TypeError(f"cannot apply {type(op).__name__}")

    def apply_gate(self, gate: CliffordGate) -> None:
        self._check(gate.qubits)
        self._sealed.state.apply_gate(gate)

    def apply_pauli(self, p: PauliOperator) -> None:
        self._sealed.state.apply_pauli(self._embed(p))

    def measure_pauli(self, p: PauliOperator, rng) -> MeasurementResult:
        return self._sealed.state.measure_pauli(self._embed(p), rng)

    def peek_pauli(self, p: PauliOperator):
        return self._sealed.state.peek_pauli(self._embed(p))


# ----------------------------------------------------------------------
# sealing


def draw_placement(params: SealParameters, rng: np.random.Generator) -> PlacementMap:
    """Uniform placement: t distinct positions, one exposed qubit per block."""
    n = params.message_code.n
    positions = tuple(sorted(int(p) for p in rng.choice(n, size=params.t, replace=False)))
    exposed = tuple(int(j) for j in rng.integers(0, params.decoy_code.n, size=params.t))
    return PlacementMap(n=n, n_prime=params.decoy_code.n,
                        decoy_positions=positions, exposed=exposed)


def build_sealed(message_prep, params: SealParameters,
                 placement: PlacementMap, substrate: str = "auto") -> SealedMessage:
    """Deterministically construct the sealed state for a given placement."""
    if substrate == "auto":
        substrate = "dense" if params.needs_dense(message_prep) else "tableau"
    n_total = placement.n_total
    if substrate == "tableau":
        state = StabilizerState(n_total)
    elif substrate == "dense":
        state = DenseState(n_total)
    else:
        raise ValueError(f"unknown substrate {substrate!r}")
    encode_logical(state, params.message_code, placement.message_block(), message_prep)
    for b in range(params.t):
        encode_logical(state, params.decoy_code, placement.decoy_block(b), params.decoy_prep(b))
    key = VerifierKey(placement=placement, message_code=params.message_code,
                      decoy_code=params.decoy_code, seed=params.seed)
    return SealedMessage(state=state, params=params, key=key,
                         message_prep=tuple(message_prep))


def seal(message_prep, params: SealParameters, rng: np.random.Generator | None = None,
         substrate: str = "auto") -> SealedMessage:
    """Encode, interleave and withhold; the only randomness is the placement."""
    if rng is None:
        rng = make_rng(params.seed)
    placement = draw_placement(params, rng)
    return build_sealed(message_prep, params, placement, substrate=substrate)


# ----------------------------------------------------------------------
# opening


@dataclass
class OpenResult:
    """What Bob's public-only opening produced."""

    sealed: SealedMessage
    syndrome: Syndrome
    correction: PauliOperator
    recovered_index: int

    def measure_recovered(self, basis: str, rng) -> MeasurementResult:
        obs = PauliOperator.single(self.sealed.n_public, self.recovered_index, basis)
        return self.sealed.public.measure_pauli(obs, rng)

    def recovered_fidelity(self, prep) -> float:
        """<prep| rho |prep> of the recovered qubit; dense states only."""
        state = self.sealed.state
        if not isinstance(state, DenseState):
            raise TypeError("fidelity readout needs the dense oracle substrate")
        rho = state.qubit_density(self.recovered_index)
        ref = prep_state(prep).amps
        return float(np.real(np.conj(ref) @ rho @ ref))


def open_seal(sealed: SealedMessage, rng: np.random.Generator) -> OpenResult:
    """Error-correct the public word and invert the encoder, public access only.

    Raises UncorrectableError when the measured syndrome falls outside the
    weight-<=t lookup table (possible after heavy tampering).
    """
    code = sealed.params.message_code
    view = sealed.public
    block = list(range(code.n))
    table = build_decode_table(code)
    syndrome = measure_syndrome(view, code, block, rng)
    correction = table.lookup(syndrome)
    if not correction.is_identity():
        view.apply_pauli(correction)
    recovered = decode_logical(view, code, block, rng)
    return OpenResult(sealed=sealed, syndrome=syndrome, correction=correction,
                      recovered_index=recovered)


# ----------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerifierReport:
    accept: bool
    message_syndrome: Syndrome
    decoy_syndromes: tuple[Syndrome, ...]
    logical_outcomes: tuple[int, ...] | None
    mode: str

    def to_dict(self) -> dict:
        return {"accept": self.accept,
                "message_syndrome": list(self.message_syndrome),
                "decoy_syndromes": [list(s) for s in self.decoy_syndromes],
                "logical_outcomes": (None if self.logical_outcomes is None
                                     else list(self.logical_outcomes)),
                "mode": self.mode}


def verify(sealed: SealedMessage, mode: str = "original",
           rng: np.random.Generator | None = None) -> VerifierReport:
    """Reassemble every block and syndrome-test it; accept iff all clean.

    In revised mode the encoded spin flip of every block is measured as well
    and recorded (message block first); those outcomes never influence
    acceptance.
    """
    if mode not in VERIFY_MODES:
        raise ValueError(f"mode must be one of {VERIFY_MODES}")
    if sealed.key is None:
        raise ValueError("verification needs the verifier key")
    if rng is None:
        rng = make_rng(sealed.key.seed + 1)
    key = sealed.key
    state = sealed.state
    placement = key.placement
    msg_block = placement.message_block()
    msg_syndrome = measure_syndrome(state, key.message_code, msg_block, rng)
    decoy_syndromes = tuple(
        measure_syndrome(state, key.decoy_code, placement.decoy_block(b), rng)
        for b in range(placement.t))
    logical_outcomes = None
    if mode == "revised":
        outs = [measure_logical_x(state, key.message_code, msg_block, rng)]
        for b in range(placement.t):
            outs.append(measure_logical_x(state, key.decoy_code, placement.decoy_block(b), rng))
        logical_outcomes = tuple(outs)
    accept = not any(msg_syndrome) and not any(any(s) for s in decoy_syndromes)
    return VerifierReport(accept=accept, message_syndrome=msg_syndrome,
                          decoy_syndromes=decoy_syndromes,
                          logical_outcomes=logical_outcomes, mode=mode)


# ----------------------------------------------------------------------
# repeated-trial harness


@dataclass(frozen=True)
class DetectionStats:
    trials: int
    rejects: int
    seed: int

    @property
    def rejection_rate(self) -> float:
        return self.rejects / self.trials

    @property
    def wilson99(self) -> tuple[float, float]:
        return wilson_interval(self.rejects, self.trials)

    def to_dict(self) -> dict:
        low, high = self.wilson99
        return {"trials": self.trials, "rejects": self.rejects,
                "rejection_rate": self.rejection_rate,
                "wilson99": [low, high], "seed": self.seed}


def run_trials(message_prep, params: SealParameters, trials: int, seed: int,
               adversary=None, mode: str = "original",
               substrate: str = "auto") -> DetectionStats:
    """Seal -> adversary(view, rng) -> verify, repeated with derived seeds.

    Sealed templates are cached per placement (sealing is deterministic given
    the placement), so each trial costs one state copy plus the attack and
    verification measurements.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    cache: dict[tuple, SealedMessage] = {}
    rejects = 0
    for trial in range(trials):
        rng = derive_rng(seed, trial)
        placement = draw_placement(params, rng)
        cache_key = (placement.decoy_positions, placement.exposed)
        template = cache.get(cache_key)
        if template is None:
            template = build_sealed(message_prep, params, placement, substrate=substrate)
            cache[cache_key] = template
        sealed = template.copy()
        if adversary is not None:
            adversary(sealed, rng)
        report = verify(sealed, mode=mode, rng=rng)
        if not report.accept:
            rejects += 1
    return DetectionStats(trials=trials, rejects=rejects, seed=seed)


def full_open_adversary(sealed: SealedMessage, rng) -> OpenResult:
    """The canonical honest-but-curious attack: run the whole open procedure."""
    return open_seal(sealed, rng)


def open_then_verify_experiment(message_prep, params: SealParameters,
                                trials: int, seed: int | None = None,
                                mode: str = "original") -> DetectionStats:
    """Rejection statistics for seal -> full open -> verify."""
    if seed is None:
        seed = params.seed
    return run_trials(message_prep, params, trials, seed,
                      adversary=full_open_adversary, mode=mode)
