"""Encoder synthesis: symplectic completion and circuit reduction."""

import numpy as np
import pytest

from qseal.encoding import (complete_destabilizers, synthesize_encoder,
                            verify_encoder)
from qseal.paulis import PauliOperator, cnot, hadamard, phase_gate


def sym(u, v):
    n = u.n
    return (int(u.x @ v.z) + int(u.z @ v.x)) % 2


def random_code_targets(seed, n):
    """A valid (generators, logical_x, logical_z) from a random Clifford frame."""
    r = np.random.default_rng(seed)
    circ = []
    for _ in range(5 * n):
        k = r.integers(3)
        if k == 0:
            circ.append(hadamard(int(r.integers(n))))
        elif k == 1:
            circ.append(phase_gate(int(r.integers(n))))
        else:
            a, b = r.choice(n, size=2, replace=False)
            circ.append(cnot(int(a), int(b)))
    def plus(p):
        return PauliOperator(p.x, p.z, 0)
    gens = [plus(PauliOperator.single(n, i, "Z").conjugated(circ)) for i in range(1, n)]
    lz = plus(PauliOperator.single(n, 0, "Z").conjugated(circ))
    lx = plus(PauliOperator.single(n, 0, "X").conjugated(circ))
    return gens, lx, lz


@pytest.mark.parametrize("seed", range(40))
def test_synthesis_on_random_codes(seed):
    n = 2 + seed % 6
    gens, lx, lz = random_code_targets(seed, n)
    encoder = synthesize_encoder(gens, lx, lz)
    assert verify_encoder(encoder, gens, lx, lz)


def test_completion_is_symplectic(steane):
    destabs, stabs = complete_destabilizers(
        steane.generators, steane.logical_x, steane.logical_z)
    n = steane.n
    assert len(destabs) == len(stabs) == n
    for i in range(n):
        for j in range(n):
            assert sym(destabs[i], stabs[j]) == (1 if i == j else 0)
            assert sym(stabs[i], stabs[j]) == 0
            assert sym(destabs[i], destabs[j]) == 0
    assert destabs[0] == steane.logical_x
    assert stabs[0] == steane.logical_z


def test_builtin_encoders_are_exact(steane, perfect):
    for code in (steane, perfect):
        assert verify_encoder(code.encoder, code.generators,
                              code.logical_x, code.logical_z)


def test_completion_rejects_dependent_rows(steane):
    gens = list(steane.generators)
    gens[-1] = gens[0]
    with pytest.raises(ValueError):
        complete_destabilizers(gens, steane.logical_x, steane.logical_z)


def test_signed_generators_supported():
    # a -1-signed stabilizer target must come out sign-exact
    gens = [PauliOperator.from_label("-ZZ")]
    lx = PauliOperator.from_label("XX")
    lz = PauliOperator.from_label("ZI")
    encoder = synthesize_encoder(gens, lx, lz)
    assert verify_encoder(encoder, gens, lx, lz)
