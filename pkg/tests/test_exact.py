"""Dense-oracle enumeration: placements, branches, detection, leakage."""

import pytest

from qseal.attacks import (DeterministicPauli, FullOpen, MeasureStep,
                           MeasurementScript, Mixture, z_measure_script)
from qseal.bounds import holevo_bound_ie
from qseal.exact import (accept_probability, all_placements, exact_detection,
                         exact_detection_random_z, mutual_information_bits,
                         open_branches, placement_leak_exact,
                         placement_templates, strategy_branches)
from qseal.paulis import PauliOperator
from qseal.seal import named_prep, seal


@pytest.fixture(scope="module")
def templates(desk_params):
    return placement_templates(desk_params, named_prep("zero"))


def test_all_placements_count(desk_params):
    pls = all_placements(desk_params)
    assert len(pls) == 7 * 5
    assert len({(p.decoy_positions, p.exposed) for p in pls}) == 35


def test_untouched_accept_probability(templates):
    for sealed in templates:
        assert accept_probability(sealed.state, sealed.key) == pytest.approx(1.0, abs=1e-9)


def test_branches_are_normalized(templates):
    script = MeasurementScript(tuple(MeasureStep("Z", q) for q in (0, 3, 5)))
    for sealed in templates[:5]:
        branches = strategy_branches(sealed, script)
        assert sum(p for p, _, _ in branches) == pytest.approx(1.0, abs=1e-12)
        assert all(len(t.entries) == 3 for _, t, _ in branches)


def test_open_branches_structure(templates):
    branches = open_branches(templates[0])
    assert sum(p for p, _, _ in branches) == pytest.approx(1.0, abs=1e-12)
    # untouched seal: decoy erasure at one position -> 4 equal branches
    assert len(branches) == 4
    for p, t, _ in branches:
        assert p == pytest.approx(0.25, abs=1e-12)
        assert dict(t.entries).keys() == {"syndrome", "correction"}


def test_exact_detection_random_z_is_half(desk_params, templates):
    # a single Z measurement splits any codeword block into an in-codespace
    # component and a definite-nonzero-syndrome component of equal weight, so
    # the verifier accepts with probability exactly 1/2, at every position.
    val = exact_detection_random_z(desk_params, named_prep("zero"), templates=templates)
    assert val == pytest.approx(0.5, abs=1e-10)
    one_pos = exact_detection(z_measure_script(4), desk_params, named_prep("zero"),
                              templates=templates)
    assert one_pos == pytest.approx(0.5, abs=1e-10)


def test_exact_full_open_detection(desk_params, templates):
    val = exact_detection(FullOpen(), desk_params, named_prep("zero"), templates=templates)
    assert val > 0.0
    # measured by the dense oracle; identical across all 35 placements
    assert val == pytest.approx(63 / 64, abs=1e-10)


def test_identity_strategy_leaks_nothing(desk_params, templates):
    iden = DeterministicPauli(PauliOperator.identity(7))
    lk = placement_leak_exact(iden, desk_params, named_prep("zero"), templates=templates)
    assert lk.mutual_info_bits == pytest.approx(0.0, abs=1e-12)
    assert lk.pass_probability == pytest.approx(1.0, abs=1e-9)


def test_single_z_leak_within_bound(desk_params, templates):
    lk = placement_leak_exact(z_measure_script(2), desk_params, named_prep("zero"),
                              templates=templates)
    bound = holevo_bound_ie(lk.pass_probability, desk_params.t).tight
    assert lk.mutual_info_bits <= bound + 1e-9


def test_mixture_leak_within_bound(desk_params, templates, steane):
    iden = DeterministicPauli(PauliOperator.identity(7))
    gen = DeterministicPauli(steane.generators[0])
    mix = Mixture(((0.5, iden), (0.5, gen)))
    lk = placement_leak_exact(mix, desk_params, named_prep("zero"), templates=templates)
    # the generator IIIXXXX passes iff the decoy sits at positions 0..2
    assert lk.pass_probability == pytest.approx(0.5 + 0.5 * 3 / 7, abs=1e-9)
    bound = holevo_bound_ie(lk.pass_probability, desk_params.t).tight
    assert 0.0 < lk.mutual_info_bits <= bound + 1e-9


def test_measuring_attacks_can_exceed_the_mixture_bound(desk_params, templates):
    """Transcript-producing attacks escape the location-leak cap.

    The cap is derived for mixtures of Pauli strategies; an attacker who
    measures (the full opening, or Z on every position) learns the decoy
    position from the syndrome pattern even conditioned on passing.  This is
    a property of the scheme worth stating, not a bug: record it.
    """
    lk = placement_leak_exact(FullOpen(), desk_params, named_prep("zero"),
                              templates=templates)
    bound = holevo_bound_ie(lk.pass_probability, desk_params.t).tight
    assert lk.mutual_info_bits > bound + 0.5
    all_z = MeasurementScript(tuple(MeasureStep("Z", q) for q in range(7)))
    lk2 = placement_leak_exact(all_z, desk_params, named_prep("zero"),
                               templates=templates)
    bound2 = holevo_bound_ie(lk2.pass_probability, desk_params.t).tight
    assert lk2.mutual_info_bits > bound2


def test_leak_unconditioned_at_least_conditioned_mass(desk_params, templates):
    lk_cond = placement_leak_exact(FullOpen(), desk_params, named_prep("zero"),
                                   templates=templates)
    lk_all = placement_leak_exact(FullOpen(), desk_params, named_prep("zero"),
                                  condition_on_pass=False, templates=templates)
    assert lk_all.pass_probability == pytest.approx(lk_cond.pass_probability)
    assert lk_all.mutual_info_bits > 0


def test_mutual_information_known_values():
    # independent
    joint = {(a, b): 0.25 for a in (0, 1) for b in (0, 1)}
    assert mutual_information_bits(joint) == pytest.approx(0.0, abs=1e-12)
    # perfectly correlated bit
    joint = {(0, 0): 0.5, (1, 1): 0.5}
    assert mutual_information_bits(joint) == pytest.approx(1.0)


def test_branch_enumeration_requires_dense(desk_params):
    sealed = seal(named_prep("zero"), desk_params)  # tableau substrate
    with pytest.raises(TypeError):
        strategy_branches(sealed, FullOpen())
