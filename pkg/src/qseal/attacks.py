"""Adversary strategies against a sealed message, and exact pass predicates.

Any quantum cheating strategy on the public word reduces to a probabilistic
mixture of per-qubit Pauli assignments, so the deterministic strategy space
is the 4^n Paulis on the n public positions (phases ignored: acceptance and
transcripts cannot see them).  On top of that this module models measurement
scripts (adaptive-free sequences of single-qubit Z/X measurements and
Clifford gates) and the full public opening procedure, which both produce
classical transcripts.

`passes_exact` decides acceptance for a deterministic Pauli purely
classically: the strategy must be the identity on every decoy position and
must commute with all message-code generators.  This must (and, per the test
suite, does) agree with actually simulating verify after the attack.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .codes import UncorrectableError
from .paulis import CliffordGate, PauliOperator, all_pauli_bitvectors
from .seal import (SealedMessage, SealParameters, VerifierKey, build_sealed,
                   open_seal, verify)
from .util import derive_rng, wilson_interval

ENUMERATION_LIMIT = 8  # 4^n strategies; keep the scan desk-sized

MIXTURE_PROB_TOL = 1e-12


# ----------------------------------------------------------------------
# strategy kinds


@dataclass(frozen=True)
class DeterministicPauli:
    """Apply one fixed Pauli to the public word."""

    pauli: PauliOperator

    def describe(self) -> str:
        return f"pauli:{self.pauli.label.lstrip('+')}"


@dataclass(frozen=True)
class Mixture:
    """A classical mixture of deterministic Pauli strategies."""

    branches: tuple[tuple[float, DeterministicPauli], ...]

    def __post_init__(self):
        total = sum(p for p, _ in self.branches)
        if abs(total - 1.0) > MIXTURE_PROB_TOL:
            raise ValueError(f"mixture probabilities sum to {total}, not 1")
        if any(p < 0 for p, _ in self.branches):
            raise ValueError("mixture probabilities must be nonnegative")

    def describe(self) -> str:
        return f"mixture[{len(self.branches)}]"


@dataclass(frozen=True)
class MeasureStep:
    basis: str  # "Z" | "X"
    qubit: int

    def __post_init__(self):
        if self.basis not in ("Z", "X"):
            raise ValueError("measurement scripts support Z and X only")

    @property
    def label(self) -> str:
        return f"{self.basis}@{self.qubit}"


@dataclass(frozen=True)
class MeasurementScript:
    """An ordered list of single-qubit measurements and Clifford gates."""

    steps: tuple  # MeasureStep | CliffordGate

    def __post_init__(self):
        for s in self.steps:
            if not isinstance(s, (MeasureStep, CliffordGate)):
                raise TypeError(f"bad script step {type(s).__name__}")

    def describe(self) -> str:
        parts = [s.label if isinstance(s, MeasureStep) else s.kind for s in self.steps]
        return "script[" + ",".join(parts) + "]"


@dataclass(frozen=True)
class FullOpen:
    """Run Bob's complete opening procedure on the public word."""

    def describe(self) -> str:
        return "full-open"


Strategy = DeterministicPauli | Mixture | MeasurementScript | FullOpen


def z_measure_script(position: int) -> MeasurementScript:
    return MeasurementScript((MeasureStep("Z", position),))


def x_measure_script(position: int) -> MeasurementScript:
    return MeasurementScript((MeasureStep("X", position),))


# ----------------------------------------------------------------------
# transcripts


@dataclass(frozen=True)
class Transcript:
    """Everything the attacker learns: labelled classical records, in order."""

    entries: tuple[tuple[str, object], ...] = ()

    def extended(self, label: str, value) -> "Transcript":
        return Transcript(self.entries + ((label, value),))

    def digest(self) -> str:
        payload = json.dumps([[l, v] for l, v in self.entries], sort_keys=False)
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_list(self) -> list:
        return [[l, v] for l, v in self.entries]


def apply_strategy(sealed: SealedMessage, strategy: Strategy,
                   rng: np.random.Generator) -> Transcript:
    """Mutate the sealed state per the strategy; return the attacker's record.

    Strategies act only through the public view; reaching for a private index
    raises AccessViolation.
    """
    view = sealed.public
    if isinstance(strategy, DeterministicPauli):
        if not strategy.pauli.is_identity():
            view.apply_pauli(strategy.pauli)
        return Transcript()
    if isinstance(strategy, Mixture):
        probs = [p for p, _ in strategy.branches]
        idx = int(rng.choice(len(probs), p=np.array(probs) / sum(probs)))
        _, det = strategy.branches[idx]
        if not det.pauli.is_identity():
            view.apply_pauli(det.pauli)
        return Transcript((("mixture-branch", idx),))
    if isinstance(strategy, MeasurementScript):
        from .seal import AccessViolation
        t = Transcript()
        for step in strategy.steps:
            if isinstance(step, CliffordGate):
                view.apply_gate(step)
            else:
                if not 0 <= step.qubit < view.n:
                    raise AccessViolation(f"qubit {step.qubit} is not publicly accessible")
                obs = PauliOperator.single(view.n, step.qubit, step.basis)
                outcome, _ = view.measure_pauli(obs, rng)
                t = t.extended(step.label, outcome)
        return t
    if isinstance(strategy, FullOpen):
        t = Transcript()
        try:
            result = open_seal(sealed, rng)
        except UncorrectableError as exc:
            return t.extended("uncorrectable", tuple(exc.syndrome))
        t = t.extended("syndrome", tuple(result.syndrome))
        return t.extended("correction", result.correction.label)
    raise TypeError(f"unknown strategy {type(strategy).__name__}")


# ----------------------------------------------------------------------
# exact pass predicate and strategy enumeration


def passes_exact(pauli: PauliOperator, key: VerifierKey) -> bool:
    """Would applying this Pauli leave every verification syndrome clean?

    True iff (a) the strategy is the identity on every decoy position and
    (b) it commutes with every message-code generator.  Purely classical.
    """
    placement = key.placement
    if pauli.n != placement.n:
        raise ValueError(f"strategy acts on {pauli.n} qubits, public word has {placement.n}")
    for p in placement.decoy_positions:
        if pauli.x[p] or pauli.z[p]:
            return False
    return all(pauli.commutes(g) for g in key.message_code.generators)


def enumerate_passing(key: VerifierKey) -> list[PauliOperator]:
    """All deterministic Pauli strategies (mod phase) that pass verification.

    Scans the full 4^n space, then structurally verifies that every survivor
    lies in the group generated by the message stabilizers and logicals.
    """
    n = key.placement.n
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"exhaustive enumeration limited to n <= {ENUMERATION_LIMIT}")
    vectors = all_pauli_bitvectors(n)
    mask = np.ones(len(vectors), dtype=bool)
    for p in key.placement.decoy_positions:
        mask &= (vectors[:, p] == 0) & (vectors[:, n + p] == 0)
    gens = key.message_code.generator_matrix()
    if gens.size:
        gx = gens[:, :n].astype(np.int64)
        gz = gens[:, n:].astype(np.int64)
        sym = (vectors[:, :n].astype(np.int64) @ gz.T
               + vectors[:, n:].astype(np.int64) @ gx.T) % 2
        mask &= ~sym.any(axis=1)
    survivors = vectors[mask]
    normalizer = key.message_code.normalizer_rowspace()
    if not normalizer.contains_many(survivors).all():
        raise RuntimeError("a passing strategy falls outside the normalizer group")
    return [PauliOperator(v[:n], v[n:]) for v in survivors]


def passing_via_group(key: VerifierKey) -> set[bytes]:
    """Independent enumeration: normalizer elements avoiding the decoy positions.

    Returns the (x|z) bit rows as bytes for set comparison against
    `enumerate_passing`.
    """
    code = key.message_code
    n = code.n
    rows = [g.bits() for g in code.generators]
    rows.append(code.logical_x.bits())
    rows.append(code.logical_z.bits())
    basis = np.array(rows, dtype=np.uint8)
    m = len(basis)
    sel = ((np.arange(2 ** m, dtype=np.int64)[:, None] >> np.arange(m)[None, :]) & 1).astype(np.uint8)
    group = np.unique((sel @ basis) % 2, axis=0)
    out = set()
    for v in group:
        if all(v[p] == 0 and v[n + p] == 0 for p in key.placement.decoy_positions):
            out.add(v.tobytes())
    return out


def classify_logical_action(pauli: PauliOperator, key: VerifierKey) -> str:
    """How a passing strategy acts on the sealed message.

    Returns "stabilizer", "logical_x", "logical_z" or "logical_y" by reading
    off the logical components from anticommutation with the logical pair.
    """
    code = key.message_code
    if not passes_exact(pauli, key):
        raise ValueError("only passing strategies have a well-defined logical action")
    has_x = not pauli.commutes(code.logical_z)
    has_z = not pauli.commutes(code.logical_x)
    return {(False, False): "stabilizer", (True, False): "logical_x",
            (False, True): "logical_z", (True, True): "logical_y"}[(has_x, has_z)]


# ----------------------------------------------------------------------
# pass probability


@dataclass(frozen=True)
class PassEstimate:
    value: float
    method: str  # "exact" | "monte-carlo"
    trials: int | None = None
    wilson99: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        d = {"value": self.value, "method": self.method}
        if self.trials is not None:
            d["trials"] = self.trials
            d["wilson99"] = list(self.wilson99)
        return d


def pass_probability(strategy: Strategy, sealed: SealedMessage,
                     trials: int | None = None, seed: int | None = None) -> PassEstimate:
    """Probability that verify accepts after the strategy, for this placement.

    Pauli strategies and mixtures are exact by the classical predicate.
    Scripts and full opening are computed exactly on the dense oracle when no
    trial count is given, else by Monte Carlo with derived per-trial seeds.
    """
    key = sealed.key
    if isinstance(strategy, DeterministicPauli):
        return PassEstimate(1.0 if passes_exact(strategy.pauli, key) else 0.0, "exact")
    if isinstance(strategy, Mixture):
        value = sum(p for p, det in strategy.branches if passes_exact(det.pauli, key))
        return PassEstimate(float(value), "exact")
    if trials is None:
        from .exact import accept_probability, strategy_branches
        dense = sealed.as_dense()
        total = 0.0
        for prob, _transcript, state in strategy_branches(dense, strategy):
            total += prob * accept_probability(state, key)
        return PassEstimate(float(total), "exact")
    if trials < 1:
        raise ValueError("Monte Carlo estimation needs at least one trial")
    if seed is None:
        seed = sealed.params.seed
    accepts = 0
    for trial in range(trials):
        rng = derive_rng(seed, trial)
        work = sealed.copy()
        apply_strategy(work, strategy, rng)
        if verify(work, rng=rng).accept:
            accepts += 1
    return PassEstimate(accepts / trials, "monte-carlo", trials=trials,
                        wilson99=wilson_interval(accepts, trials))


# ----------------------------------------------------------------------
# Monte Carlo attack harness


@dataclass(frozen=True)
class AttackStats:
    """Aggregate of repeated seal -> attack -> verify trials."""

    trials: int
    accepts: int
    seed: int
    transcripts_digest: str
    history: tuple[int, ...]  # per-trial flags, 1 = rejected

    @property
    def rejects(self) -> int:
        return self.trials - self.accepts

    @property
    def pass_rate(self) -> float:
        return self.accepts / self.trials

    @property
    def detection_rate(self) -> float:
        return self.rejects / self.trials

    @property
    def wilson99(self) -> tuple[float, float]:
        return wilson_interval(self.rejects, self.trials)

    def to_dict(self) -> dict:
        low, high = self.wilson99
        return {"trials": self.trials, "accepts": self.accepts,
                "rejects": self.rejects, "pass_rate": self.pass_rate,
                "detection_rate": self.detection_rate,
                "detection_wilson99": [low, high], "seed": self.seed,
                "transcripts_digest": self.transcripts_digest}


def _attack_trial(message_prep, params: SealParameters, strategy: Strategy | None,
                  seed: int, trial: int, mode: str,
                  cache: dict) -> tuple[bool, str]:
    from .seal import build_sealed, draw_placement
    rng = derive_rng(seed, trial)
    placement = draw_placement(params, rng)
    cache_key = (placement.decoy_positions, placement.exposed)
    template = cache.get(cache_key)
    if template is None:
        template = build_sealed(message_prep, params, placement)
        cache[cache_key] = template
    sealed = template.copy()
    if strategy is None:
        # random-position Z preset: position drawn per trial
        pos = int(rng.integers(sealed.n_public))
        obs = PauliOperator.single(sealed.n_public, pos, "Z")
        outcome, _ = sealed.public.measure_pauli(obs, rng)
        transcript = Transcript(((f"Z@{pos}", outcome),))
    else:
        transcript = apply_strategy(sealed, strategy, rng)
    report = verify(sealed, mode=mode, rng=rng)
    return report.accept, transcript.digest()


def _attack_chunk(args) -> tuple[list[int], list[int], list[str]]:
    message_prep, params, strategy, seed, trials_range, mode = args
    cache: dict = {}
    indices, flags, digests = [], [], []
    for trial in trials_range:
        accept, digest = _attack_trial(message_prep, params, strategy, seed, trial, mode, cache)
        indices.append(trial)
        flags.append(0 if accept else 1)
        digests.append(digest)
    return indices, flags, digests


def run_attack_trials(strategy: Strategy | None, message_prep, params: SealParameters,
                      trials: int, seed: int, mode: str = "original",
                      parallel: int | None = None) -> AttackStats:
    """Repeated seal -> attack -> verify with derived per-trial seeds.

    ``strategy=None`` means the random-position Z preset.  With ``parallel``
    the trials are split across processes; aggregates are order-independent
    (per-trial seeds are derived from the trial index, and the digest hashes
    the per-trial transcript digests in trial order).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if parallel and parallel > 1:
        import concurrent.futures
        chunk = max(1, trials // parallel)
        ranges = [range(start, min(start + chunk, trials))
                  for start in range(0, trials, chunk)]
        jobs = [(message_prep, params, strategy, seed, r, mode) for r in ranges]
        results = []
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallel) as pool:
            for res in pool.map(_attack_chunk, jobs):
                results.append(res)
        pairs = []
        for indices, flags, digests in results:
            pairs.extend(zip(indices, zip(flags, digests)))
        pairs.sort()
        flags = [fd[0] for _, fd in pairs]
        digests = [fd[1] for _, fd in pairs]
    else:
        _, flags, digests = _attack_chunk((message_prep, params, strategy, seed,
                                           range(trials), mode))
    combined = hashlib.sha256("".join(digests).encode()).hexdigest()
    accepts = trials - sum(flags)
    return AttackStats(trials=trials, accepts=accepts, seed=seed,
                       transcripts_digest=combined, history=tuple(flags))


def strategy_adversary(strategy: Strategy):
    """Adapt a strategy to the run_trials adversary interface."""
    def adversary(sealed: SealedMessage, rng):
        apply_strategy(sealed, strategy, rng)
    return adversary


def random_z_adversary(sealed: SealedMessage, rng) -> None:
    """Measure Z at one uniformly random public position."""
    pos = int(rng.integers(sealed.n_public))
    obs = PauliOperator.single(sealed.n_public, pos, "Z")
    sealed.public.measure_pauli(obs, rng)


def parse_strategy(spec: str, n_public: int) -> Strategy | None:
    """CLI strategy presets.

    identity | pauli:<label> | z-measure:<pos> | x-measure:<pos> | full-open.
    "z-measure:random" is handled by the caller (returns None here) since the
    position is drawn per trial.
    """
    if spec == "identity":
        return DeterministicPauli(PauliOperator.identity(n_public))
    if spec == "full-open":
        return FullOpen()
    if spec.startswith("pauli:"):
        label = spec.split(":", 1)[1]
        p = PauliOperator.from_label(label)
        if p.n != n_public:
            raise ValueError(f"pauli strategy must cover all {n_public} public qubits")
        return DeterministicPauli(p)
    for prefix, basis in (("z-measure:", "Z"), ("x-measure:", "X")):
        if spec.startswith(prefix):
            arg = spec.split(":", 1)[1]
            if arg == "random":
                if basis != "Z":
                    raise ValueError("random-position presets support Z only")
                return None
            return MeasurementScript((MeasureStep(basis, int(arg)),))
    raise ValueError(f"unknown strategy spec {spec!r}")


def mixture_from_spec(entries, n_public: int) -> Mixture:
    """Build a mixture from [{"probability": p, "pauli": label}, ...]."""
    branches = []
    for e in entries:
        p = PauliOperator.from_label(e["pauli"])
        if p.n != n_public:
            raise ValueError("mixture pauli must cover every public qubit")
        branches.append((float(e["probability"]), DeterministicPauli(p)))
    return Mixture(tuple(branches))
