"""Exact attack analysis on the dense oracle.

Everything here enumerates instead of sampling: all placements the sealer
could have drawn, all measurement-outcome branches a strategy can take, and
the verifier's acceptance probability per branch (a product of sequential
projections onto the +1 eigenspaces of every block generator).  On desk-sized
instances (the 12-qubit steane7+perfect5 pairing) this is a few thousand
small state-vector operations, so "exact" is also fast.

The placement leakage calculation brute-forces the joint distribution of
(secret decoy positions, attacker transcript), optionally conditioned on the
verifier accepting, and reports the mutual information in bits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .attacks import (DeterministicPauli, FullOpen, MeasureStep,
                      MeasurementScript, Mixture, Strategy, Transcript)
from .codes import UncorrectableError, build_decode_table
from .dense import DenseState
from .paulis import CliffordGate, PauliOperator, invert_gates
from .seal import PlacementMap, SealParameters, SealedMessage, VerifierKey, build_sealed

_PRUNE_TOL = 1e-13


def all_placements(params: SealParameters) -> list[PlacementMap]:
    """Every placement the sealer could draw (positions x exposed choices)."""
    n = params.message_code.n
    n_prime = params.decoy_code.n
    out = []
    for positions in itertools.combinations(range(n), params.t):
        for exposed in itertools.product(range(n_prime), repeat=params.t):
            out.append(PlacementMap(n=n, n_prime=n_prime,
                                    decoy_positions=tuple(positions),
                                    exposed=tuple(exposed)))
    return out


def placement_templates(params: SealParameters, message_prep=()) -> list[SealedMessage]:
    """Sealed dense states for every placement; build once, copy per use."""
    return [build_sealed(message_prep, params, pl, substrate="dense")
            for pl in all_placements(params)]


def verify_observables(key: VerifierKey) -> list[PauliOperator]:
    """All generators the verifier measures, embedded in the global register."""
    placement = key.placement
    n_total = placement.n_total
    obs = [g.embed(n_total, placement.message_block())
           for g in key.message_code.generators]
    for b in range(placement.t):
        block = placement.decoy_block(b)
        obs.extend(g.embed(n_total, block) for g in key.decoy_code.generators)
    return obs


def accept_probability(state: DenseState, key: VerifierKey) -> float:
    """Probability that every verification syndrome bit reads clean."""
    work = state.copy()
    total = 1.0
    for obs in verify_observables(key):
        total *= work.project_pauli(obs, 1)
        if total <= _PRUNE_TOL:
            return 0.0
    return float(total)


# ----------------------------------------------------------------------
# branch enumeration


def strategy_branches(sealed: SealedMessage, strategy: Strategy
                      ) -> list[tuple[float, Transcript, DenseState]]:
    """All (probability, transcript, post-state) branches of a strategy.

    The sealed message must sit on the dense substrate; it is not mutated.
    """
    if not isinstance(sealed.state, DenseState):
        raise TypeError("branch enumeration needs a dense-substrate seal")
    n = sealed.n_public
    n_total = sealed.n_total
    if isinstance(strategy, DeterministicPauli):
        state = sealed.state.copy()
        if not strategy.pauli.is_identity():
            state.apply_pauli(strategy.pauli.embed(n_total, range(n)))
        return [(1.0, Transcript(), state)]
    if isinstance(strategy, Mixture):
        out = []
        for idx, (prob, det) in enumerate(strategy.branches):
            if prob <= 0:
                continue
            state = sealed.state.copy()
            if not det.pauli.is_identity():
                state.apply_pauli(det.pauli.embed(n_total, range(n)))
            out.append((prob, Transcript((("mixture-branch", idx),)), state))
        return out
    if isinstance(strategy, MeasurementScript):
        branches = [(1.0, Transcript(), sealed.state.copy())]
        for step in strategy.steps:
            if isinstance(step, CliffordGate):
                # public positions coincide with global ids 0..n-1
                for _, _, st in branches:
                    st.apply_gate(step)
                continue
            obs = PauliOperator.single(n, step.qubit, step.basis).embed(n_total, range(n))
            grown = []
            for prob, tr, st in branches:
                for bp, outcome, bst in st.branch_measure(obs):
                    grown.append((prob * bp, tr.extended(step.label, outcome), bst))
            branches = grown
        return branches
    if isinstance(strategy, FullOpen):
        return open_branches(sealed)
    raise TypeError(f"unknown strategy {type(strategy).__name__}")


def open_branches(sealed: SealedMessage) -> list[tuple[float, Transcript, DenseState]]:
    """Every outcome branch of the public opening procedure."""
    if not isinstance(sealed.state, DenseState):
        raise TypeError("branch enumeration needs a dense-substrate seal")
    code = sealed.params.message_code
    n = code.n
    n_total = sealed.n_total
    table = build_decode_table(code)
    public = list(range(n))
    branches: list[tuple[float, list[int], DenseState]] = [(1.0, [], sealed.state.copy())]
    for g in code.generators:
        obs = g.embed(n_total, public)
        grown = []
        for prob, bits, st in branches:
            for bp, outcome, bst in st.branch_measure(obs):
                grown.append((prob * bp, bits + [0 if outcome == 1 else 1], bst))
        branches = grown
    out = []
    for prob, bits, st in branches:
        syndrome = tuple(bits)
        tr = Transcript((("syndrome", syndrome),))
        try:
            correction = table.lookup(syndrome)
        except UncorrectableError:
            out.append((prob, tr.extended("uncorrectable", syndrome), st))
            continue
        if not correction.is_identity():
            st.apply_pauli(correction.embed(n_total, public))
        for gate in invert_gates(code.encoder):
            st.apply_gate(gate)  # encoder positions == public ids
        out.append((prob, tr.extended("correction", correction.label), st))
    return out


# ----------------------------------------------------------------------
# exact detection rates


def exact_detection(strategy: Strategy, params: SealParameters, message_prep=(),
                    templates: list[SealedMessage] | None = None) -> float:
    """Placement-averaged probability that verify rejects after the strategy."""
    if templates is None:
        templates = placement_templates(params, message_prep)
    total = 0.0
    for sealed in templates:
        for prob, _tr, state in strategy_branches(sealed, strategy):
            total += prob * (1.0 - accept_probability(state, sealed.key))
    return total / len(templates)


def exact_detection_random_z(params: SealParameters, message_prep=(),
                             templates: list[SealedMessage] | None = None) -> float:
    """Detection rate of a Z measurement at a uniformly random public position."""
    if templates is None:
        templates = placement_templates(params, message_prep)
    n = params.message_code.n
    total = 0.0
    for pos in range(n):
        strategy = MeasurementScript((MeasureStep("Z", pos),))
        total += exact_detection(strategy, params, message_prep, templates=templates)
    return total / n


def exact_accept_untouched(params: SealParameters, message_prep=(),
                           templates: list[SealedMessage] | None = None) -> float:
    if templates is None:
        templates = placement_templates(params, message_prep)
    return sum(accept_probability(s.state, s.key) for s in templates) / len(templates)


# ----------------------------------------------------------------------
# placement leakage


@dataclass(frozen=True)
class LeakResult:
    """Exact mutual information between the secret positions and the transcript."""

    mutual_info_bits: float
    pass_probability: float          # placement-averaged acceptance after the strategy
    conditioned_on_pass: bool
    transcript_count: int

    def to_dict(self) -> dict:
        return {"mutual_info_bits": self.mutual_info_bits,
                "pass_probability": self.pass_probability,
                "conditioned_on_pass": self.conditioned_on_pass,
                "transcript_count": self.transcript_count}


def placement_leak_exact(strategy: Strategy, params: SealParameters, message_prep=(),
                         condition_on_pass: bool = True,
                         templates: list[SealedMessage] | None = None) -> LeakResult:
    """Brute-force I(decoy positions ; attacker transcript), exactly.

    Enumerates every placement (uniform prior), every strategy branch and the
    verifier's acceptance probability per branch.  With
    ``condition_on_pass`` the joint distribution is restricted to the accept
    event and renormalized, which is the quantity the location-leak bound
    caps for strategies with pass weight a.
    """
    if templates is None:
        templates = placement_templates(params, message_prep)
    prior = 1.0 / len(templates)
    joint: dict[tuple, float] = {}
    pass_mass = 0.0
    for sealed in templates:
        positions = sealed.key.placement.decoy_positions
        for prob, tr, state in strategy_branches(sealed, strategy):
            p_acc = accept_probability(state, sealed.key)
            pass_mass += prior * prob * p_acc
            weight = prior * prob * (p_acc if condition_on_pass else 1.0)
            if weight > _PRUNE_TOL:
                key = (positions, tr.entries)
                joint[key] = joint.get(key, 0.0) + weight
    if condition_on_pass:
        if pass_mass <= _PRUNE_TOL:
            return LeakResult(0.0, 0.0, True, 0)
        joint = {k: v / pass_mass for k, v in joint.items()}
    transcripts = {k[1] for k in joint}
    return LeakResult(mutual_information_bits(joint), float(pass_mass),
                      condition_on_pass, len(transcripts))


def mutual_information_bits(joint: dict[tuple, float]) -> float:
    """I(A;B) of a joint distribution keyed by (a, b) pairs."""
    pa: dict = {}
    pb: dict = {}
    for (a, b), p in joint.items():
        pa[a] = pa.get(a, 0.0) + p
        pb[b] = pb.get(b, 0.0) + p
    mi = 0.0
    for (a, b), p in joint.items():
        if p > 0:
            mi += p * math.log2(p / (pa[a] * pb[b]))
    return max(0.0, mi)
