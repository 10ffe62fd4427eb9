"""Strategy model: pass predicates, enumeration, transcripts, Monte Carlo."""

import numpy as np
import pytest

from qseal.attacks import (DeterministicPauli, FullOpen, MeasureStep,
                           MeasurementScript, Mixture, apply_strategy,
                           classify_logical_action, enumerate_passing,
                           mixture_from_spec, parse_strategy,
                           pass_probability, passes_exact, passing_via_group,
                           run_attack_trials)
from qseal.paulis import PauliOperator
from qseal.seal import AccessViolation, named_prep, open_seal, seal, verify
from qseal.util import make_rng


@pytest.fixture(scope="module")
def sealed_zero(desk_params):
    return seal(named_prep("zero"), desk_params)


def test_passes_exact_basics(sealed_zero, steane):
    key = sealed_zero.key
    assert passes_exact(PauliOperator.identity(7), key)
    qpos = key.placement.decoy_positions[0]
    for letter in "XYZ":
        assert not passes_exact(PauliOperator.single(7, qpos, letter), key)
    elt = next(g for g in steane.generators if qpos not in g.support())
    assert elt.weight() == 4
    assert passes_exact(elt, key)


def test_passes_exact_matches_simulation_sample(sealed_zero):
    key = sealed_zero.key
    rng = np.random.default_rng(0)
    for _ in range(120):
        label = "".join("IXYZ"[rng.integers(4)] for _ in range(7))
        p = PauliOperator.from_label(label)
        work = sealed_zero.copy()
        work.public.apply_pauli(p)
        report = verify(work, rng=np.random.default_rng(1))
        assert report.accept == passes_exact(p, key), label


def test_enumerate_passing_structure(sealed_zero):
    key = sealed_zero.key
    passing = enumerate_passing(key)
    as_bytes = {p.bits().tobytes() for p in passing}
    assert PauliOperator.identity(7).bits().tobytes() in as_bytes
    # closed under multiplication mod phase
    rng = np.random.default_rng(2)
    for _ in range(200):
        a, b = rng.integers(len(passing), size=2)
        prod = passing[int(a)] @ passing[int(b)]
        assert prod.bits().tobytes() in as_bytes
    # independent enumeration agrees
    assert as_bytes == passing_via_group(key)


def test_every_passing_strategy_is_decoy_identity(sealed_zero):
    key = sealed_zero.key
    qpos = key.placement.decoy_positions[0]
    for p in enumerate_passing(key):
        assert p.x[qpos] == 0 and p.z[qpos] == 0
        assert all(p.commutes(g) for g in key.message_code.generators)


def test_apply_identity_strategy_is_noop(sealed_zero):
    work = sealed_zero.copy()
    t = apply_strategy(work, DeterministicPauli(PauliOperator.identity(7)), make_rng(0))
    assert t.entries == ()
    assert np.array_equal(work.state.x, sealed_zero.state.x)
    assert np.array_equal(work.state.r, sealed_zero.state.r)


def test_script_transcript_shape(sealed_zero):
    script = MeasurementScript(tuple(MeasureStep("Z", q) for q in range(7)))
    t = apply_strategy(sealed_zero.copy(), script, make_rng(3))
    assert len(t.entries) == 7
    assert all(label == f"Z@{i}" for i, (label, _) in enumerate(t.entries))
    assert all(v in (1, -1) for _, v in t.entries)


def test_script_guard_blocks_private_positions(sealed_zero):
    script = MeasurementScript((MeasureStep("Z", 9),))
    with pytest.raises(AccessViolation):
        apply_strategy(sealed_zero.copy(), script, make_rng(0))


def test_full_open_transcript_matches_open(sealed_zero):
    work_a = sealed_zero.copy()
    t = apply_strategy(work_a, FullOpen(), make_rng(17))
    work_b = sealed_zero.copy()
    result = open_seal(work_b, make_rng(17))
    assert dict(t.entries) == {"syndrome": tuple(result.syndrome),
                               "correction": result.correction.label}


def test_mixture_validation():
    iden = DeterministicPauli(PauliOperator.identity(7))
    with pytest.raises(ValueError):
        Mixture(((0.6, iden), (0.6, iden)))
    mixture_from_spec([{"probability": 1.0, "pauli": "IIIIIII"}], 7)
    with pytest.raises(ValueError):
        mixture_from_spec([{"probability": 1.0, "pauli": "III"}], 7)


def test_pass_probability_exact_paths(sealed_zero, steane):
    iden = DeterministicPauli(PauliOperator.identity(7))
    est = pass_probability(iden, sealed_zero)
    assert (est.value, est.method) == (1.0, "exact")
    qpos = sealed_zero.key.placement.decoy_positions[0]
    bad = DeterministicPauli(PauliOperator.single(7, qpos, "Z"))
    mix = Mixture(((0.5, iden), (0.5, bad)))
    assert pass_probability(mix, sealed_zero).value == pytest.approx(0.5)


def test_pass_probability_rejects_zero_trials(sealed_zero):
    with pytest.raises(ValueError):
        pass_probability(FullOpen(), sealed_zero, trials=0)


def test_pass_probability_full_open_exact_vs_mc(sealed_zero):
    exact = pass_probability(FullOpen(), sealed_zero)
    assert exact.method == "exact"
    mc = pass_probability(FullOpen(), sealed_zero, trials=800, seed=3)
    assert mc.method == "monte-carlo"
    sigma = max(np.sqrt(exact.value * (1 - exact.value) / 800), 1e-3)
    assert abs(mc.value - exact.value) <= 3 * sigma
    assert mc.wilson99[0] <= mc.value <= mc.wilson99[1]


def test_logical_tamper_characterization(desk_params):
    """Passing strategies act as stabilizers (message unchanged) or logicals."""
    expected_sign = {
        # (prep, class) -> deterministic readout (basis, outcome)
        ("zero", "stabilizer"): ("Z", 1), ("zero", "logical_z"): ("Z", 1),
        ("zero", "logical_x"): ("Z", -1), ("zero", "logical_y"): ("Z", -1),
        ("plus", "stabilizer"): ("X", 1), ("plus", "logical_x"): ("X", 1),
        ("plus", "logical_z"): ("X", -1), ("plus", "logical_y"): ("X", -1),
    }
    template = {name: seal(named_prep(name), desk_params) for name in ("zero", "plus")}
    passing = enumerate_passing(template["zero"].key)
    classes = set()
    for p in passing:
        cls = classify_logical_action(p, template["zero"].key)
        classes.add(cls)
        for name in ("zero", "plus"):
            work = template[name].copy()
            work.public.apply_pauli(p)
            result = open_seal(work, make_rng(23))
            basis, sign = expected_sign[(name, cls)]
            out, det = result.measure_recovered(basis, make_rng(24))
            assert det and out == sign, (p.label, cls, name)
    assert "stabilizer" in classes and len(classes) >= 2


def test_run_attack_trials_deterministic(desk_params):
    a = run_attack_trials(FullOpen(), named_prep("zero"), desk_params, 60, seed=9)
    b = run_attack_trials(FullOpen(), named_prep("zero"), desk_params, 60, seed=9)
    assert a.transcripts_digest == b.transcripts_digest
    assert a.history == b.history
    c = run_attack_trials(FullOpen(), named_prep("zero"), desk_params, 60, seed=10)
    assert c.transcripts_digest != a.transcripts_digest


def test_run_attack_trials_parallel_matches_serial(desk_params):
    serial = run_attack_trials(None, named_prep("zero"), desk_params, 40, seed=4)
    parallel = run_attack_trials(None, named_prep("zero"), desk_params, 40, seed=4,
                                 parallel=2)
    assert serial.transcripts_digest == parallel.transcripts_digest
    assert serial.history == parallel.history


def test_parse_strategy_presets():
    assert isinstance(parse_strategy("identity", 7), DeterministicPauli)
    assert isinstance(parse_strategy("full-open", 7), FullOpen)
    assert parse_strategy("z-measure:random", 7) is None
    s = parse_strategy("z-measure:3", 7)
    assert isinstance(s, MeasurementScript) and s.steps[0].qubit == 3
    assert isinstance(parse_strategy("pauli:XIZIIII", 7), DeterministicPauli)
    with pytest.raises(ValueError):
        parse_strategy("pauli:XX", 7)
    with pytest.raises(ValueError):
        parse_strategy("warp-drive", 7)
