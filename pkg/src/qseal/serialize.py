"""JSON serialization for codes, sealed packages, verifier keys and reports.

Two separate documents mirror the protocol's trust boundary:

* the *package* holds the public artifact: code descriptions, the simulation
  state and the resolved run configuration -- but never the placement;
* the *key* holds the verifier secret: the placement map plus the code
  descriptions and seed needed to re-check the package it belongs to.

Serialization is canonical (sorted keys, two-space indent, trailing newline)
so identical runs produce byte-identical files.  Note the simulation state in
the package is the full global register; a real deployment would hand over
physical qubits instead.  Treat package files as lab artifacts, not as
cryptographic objects.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from . import __version__
from .codes import StabilizerCode
from .dense import DenseState, SingleQubitUnitary
from .paulis import CliffordGate, PauliOperator
from .seal import (PlacementMap, SealedMessage, SealParameters, VerifierKey,
                   named_prep)
from .tableau import StabilizerState

SCHEMA_VERSION = 1

PACKAGE_FORMAT = "qseal-package"
KEY_FORMAT = "qseal-key"
CODE_FORMAT = "qseal-code"


class SchemaError(Exception):
    """A document does not match the expected schema."""


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj: Any) -> None:
    with open(path, "w") as fh:
        fh.write(canonical_json(obj))


def read_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None


def _expect(doc: dict, fmt: str) -> dict:
    if not isinstance(doc, dict) or doc.get("format") != fmt:
        raise SchemaError(f"expected a {fmt} document")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {doc.get('schema_version')}")
    return doc


# ----------------------------------------------------------------------
# gates and preps


def gate_to_list(gate: CliffordGate) -> list:
    return [gate.kind, *gate.qubits]


def gate_from_list(item) -> CliffordGate:
    try:
        return CliffordGate(str(item[0]), tuple(int(q) for q in item[1:]))
    except (ValueError, TypeError, IndexError) as exc:
        raise SchemaError(f"bad gate entry {item!r}: {exc}") from None


def prep_to_list(prep) -> list:
    out = []
    for op in prep:
        if isinstance(op, CliffordGate):
            out.append(["gate", *gate_to_list(op)])
        elif isinstance(op, PauliOperator):
            out.append(["pauli", op.label])
        elif isinstance(op, SingleQubitUnitary):
            mat = [[float(c.real), float(c.imag)] for c in np.asarray(op.matrix).ravel()]
            out.append(["unitary", op.qubit, mat])
        else:
            raise SchemaError(f"cannot serialize prep atom {type(op).__name__}")
    return out


def prep_from_list(items) -> tuple:
    prep = []
    for item in items:
        kind = item[0]
        if kind == "gate":
            prep.append(gate_from_list(item[1:]))
        elif kind == "pauli":
            prep.append(PauliOperator.from_label(item[1]))
        elif kind == "unitary":
            flat = [complex(re, im) for re, im in item[2]]
            prep.append(SingleQubitUnitary(int(item[1]), np.array(flat).reshape(2, 2)))
        else:
            raise SchemaError(f"bad prep atom {item!r}")
    return tuple(prep)


# ----------------------------------------------------------------------
# codes


def code_to_dict(code: StabilizerCode) -> dict:
    return {
        "format": CODE_FORMAT,
        "schema_version": SCHEMA_VERSION,
        "name": code.name,
        "n": code.n,
        "k": code.k,
        "d": code.d,
        "generators": [g.label for g in code.generators],
        "logical_x": code.logical_x.label,
        "logical_z": code.logical_z.label,
        "encoder": [gate_to_list(g) for g in code.encoder],
    }


def code_from_dict(doc: dict) -> StabilizerCode:
    _expect(doc, CODE_FORMAT)
    try:
        return StabilizerCode(
            name=str(doc["name"]), n=int(doc["n"]), d=int(doc["d"]), k=int(doc["k"]),
            generators=tuple(PauliOperator.from_label(l) for l in doc["generators"]),
            logical_x=PauliOperator.from_label(doc["logical_x"]),
            logical_z=PauliOperator.from_label(doc["logical_z"]),
            encoder=tuple(gate_from_list(g) for g in doc["encoder"]))
    except SchemaError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"bad code document: {exc}") from None


def load_code(spec: str) -> StabilizerCode:
    """A named builtin code (steane7, perfect5) or a JSON code file."""
    if spec == "steane7":
        from .codes import steane_code
        return steane_code()
    if spec == "perfect5":
        from .codes import five_qubit_code
        return five_qubit_code()
    return code_from_dict(read_json(spec))


# ----------------------------------------------------------------------
# state


def state_to_dict(state) -> dict:
    if isinstance(state, StabilizerState):
        return {"substrate": "tableau",
                "destabilizers": state.destabilizer_labels(),
                "stabilizers": state.stabilizer_labels()}
    if isinstance(state, DenseState):
        return {"substrate": "dense",
                "n_qubits": state.n,
                "amplitudes": [[float(a.real), float(a.imag)] for a in state.amps]}
    raise SchemaError(f"cannot serialize state {type(state).__name__}")


def state_from_dict(doc: dict):
    sub = doc.get("substrate")
    if sub == "tableau":
        try:
            destabs = [PauliOperator.from_label(l) for l in doc["destabilizers"]]
            stabs = [PauliOperator.from_label(l) for l in doc["stabilizers"]]
            return StabilizerState.from_rows(destabs, stabs)
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"bad tableau state: {exc}") from None
    if sub == "dense":
        try:
            n = int(doc["n_qubits"])
            amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
            if len(amps) != 2 ** n:
                raise ValueError(f"expected {2 ** n} amplitudes, got {len(amps)}")
            state = DenseState(n)
            state.amps = amps
            return state
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(f"bad dense state: {exc}") from None
    raise SchemaError(f"unknown substrate {sub!r}")


# ----------------------------------------------------------------------
# package and key


def package_to_dict(sealed: SealedMessage, config: dict | None = None) -> dict:
    params = sealed.params
    return {
        "format": PACKAGE_FORMAT,
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "config": dict(config or {}),
        "seed": params.seed,
        "message_code": code_to_dict(params.message_code),
        "decoy_code": code_to_dict(params.decoy_code),
        "t": params.t,
        "n_public": sealed.n_public,
        "n_total": sealed.n_total,
        "message_prep": prep_to_list(sealed.message_prep),
        "decoy_preps": (None if params.decoy_preps is None
                        else [prep_to_list(p) for p in params.decoy_preps]),
        "state": state_to_dict(sealed.state),
    }


def package_from_dict(doc: dict) -> SealedMessage:
    _expect(doc, PACKAGE_FORMAT)
    try:
        message_code = code_from_dict(doc["message_code"])
        decoy_code = code_from_dict(doc["decoy_code"])
        decoy_preps = doc.get("decoy_preps")
        params = SealParameters(
            message_code=message_code, decoy_code=decoy_code,
            seed=int(doc["seed"]),
            decoy_preps=(None if decoy_preps is None
                         else tuple(prep_from_list(p) for p in decoy_preps)))
        state = state_from_dict(doc["state"])
        if getattr(state, "n", None) != params.n_total:
            raise SchemaError(
                f"state register has {state.n} qubits, parameters need {params.n_total}")
        return SealedMessage(state=state, params=params, key=None,
                             message_prep=prep_from_list(doc["message_prep"]))
    except SchemaError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"bad package document: {exc}") from None


def key_to_dict(key: VerifierKey) -> dict:
    return {
        "format": KEY_FORMAT,
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "seed": key.seed,
        "placement": key.placement.to_dict(),
        "message_code": code_to_dict(key.message_code),
        "decoy_code": code_to_dict(key.decoy_code),
    }


def key_from_dict(doc: dict) -> VerifierKey:
    _expect(doc, KEY_FORMAT)
    try:
        return VerifierKey(
            placement=PlacementMap.from_dict(doc["placement"]),
            message_code=code_from_dict(doc["message_code"]),
            decoy_code=code_from_dict(doc["decoy_code"]),
            seed=int(doc["seed"]))
    except SchemaError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"bad key document: {exc}") from None


def sealed_message_to_dict(sealed: SealedMessage, config: dict | None = None) -> dict:
    """The whole sealed message (public package plus verifier key) as one
    document -- the verifier's own record.  Untrusted parties get only the
    package half."""
    if sealed.key is None:
        raise ValueError("sealed message has no key attached")
    return {"format": "qseal-sealed-message",
            "schema_version": SCHEMA_VERSION,
            "package": package_to_dict(sealed, config=config),
            "key": key_to_dict(sealed.key)}


def sealed_message_from_dict(doc: dict) -> SealedMessage:
    if not isinstance(doc, dict) or doc.get("format") != "qseal-sealed-message":
        raise SchemaError("expected a qseal-sealed-message document")
    return attach_key(package_from_dict(doc["package"]), key_from_dict(doc["key"]))


def attach_key(sealed: SealedMessage, key: VerifierKey) -> SealedMessage:
    """Bind a verifier key to a loaded package, cross-checking identity."""
    params = sealed.params
    if key.message_code != params.message_code or key.decoy_code != params.decoy_code:
        raise SchemaError("key and package disagree about the codes")
    if key.seed != params.seed:
        raise SchemaError("key and package disagree about the seed")
    if key.placement.n_total != sealed.n_total:
        raise SchemaError("key placement does not fit the package register")
    return sealed.with_key(key)


def load_package(path) -> SealedMessage:
    return package_from_dict(read_json(path))


def load_key(path) -> VerifierKey:
    return key_from_dict(read_json(path))


# ----------------------------------------------------------------------
# named preps for CLI round trips


def resolve_prep(spec: str, rng=None) -> tuple:
    """Prep from a CLI name: zero|one|plus|i or "random" (dense substrate)."""
    if spec == "random":
        from .seal import random_state_prep
        if rng is None:
            raise ValueError("random preps need a randomness source")
        return random_state_prep(rng)
    try:
        return named_prep(spec)
    except ValueError:
        raise ValueError(
            f"unknown prep {spec!r}; choose zero, one, plus, i or random") from None
