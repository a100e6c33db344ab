"""Canonical JSON documents for states, channels and PQC instances.

Floats are written with Python's shortest round-trip repr, so
parse(serialize(x)) reproduces every double exactly. Output is
deterministic: the same object always serializes to the same bytes.
"""
import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np
from typeguard import CollectionCheckStrategy, TypeCheckError, check_type

from pypqc.channels import ChannelException, ChannelTerm, MixedUnitaryChannel
from pypqc.document_types import (
    DOCUMENT_VERSION,
    ChannelDocument,
    ChannelTermDocument,
    ComplexEntry,
    DensityDocument,
    Document,
    MatrixRows,
    PQCDocument,
    StateDocument,
    StateSetDocument,
)
from pypqc.linalg import ComplexMatrix, LinalgException
from pypqc.pauli import PauliException, PauliString
from pypqc.pqc import (
    ClassicalStates,
    ExplicitList,
    FullHilbert,
    PQCException,
    PQCInstance,
    RealProduct,
    StateSet,
)
from pypqc.states import DensityMatrix, InvalidStateException, PureState

logger = logging.getLogger("pypqc")

Serializable = Union[PureState, DensityMatrix, MixedUnitaryChannel, PQCInstance]


class DocumentException(Exception):
    """Raised for documents that cannot be read, parsed or validated."""

    pass


def complex_entry(z: complex) -> ComplexEntry:
    return [float(z.real), float(z.imag)]


def vector_rows(vector: np.ndarray) -> List[ComplexEntry]:
    return [complex_entry(z) for z in vector]


def matrix_rows(mat: ComplexMatrix) -> MatrixRows:
    return [[complex_entry(z) for z in row] for row in mat.data]


def parse_vector(entries: List[ComplexEntry]) -> np.ndarray:
    if any(len(entry) != 2 for entry in entries):
        raise DocumentException("Complex entries must be [re, im] pairs")
    return np.array([complex(re, im) for re, im in entries], dtype=np.complex128)


def parse_matrix(rows: MatrixRows) -> ComplexMatrix:
    if not rows or any(len(row) != len(rows[0]) for row in rows):
        raise DocumentException("Matrix rows must be non-empty and of equal length")
    return ComplexMatrix(np.array([parse_vector(row) for row in rows]))


def state_to_document(phi: PureState) -> StateDocument:
    return {
        "kind": "state",
        "version": DOCUMENT_VERSION,
        "amplitudes": vector_rows(phi.amplitudes),
    }


def density_to_document(rho: DensityMatrix) -> DensityDocument:
    return {"kind": "density", "version": DOCUMENT_VERSION, "matrix": matrix_rows(rho.mat)}


def term_to_document(term: ChannelTerm) -> ChannelTermDocument:
    if term.pauli is not None:
        return {"pauli": term.pauli.letters, "p": float(term.p)}
    return {"p": float(term.p), "unitary": matrix_rows(term.unitary)}


def channel_to_document(E: MixedUnitaryChannel) -> ChannelDocument:
    document: ChannelDocument = {
        "kind": "channel",
        "version": DOCUMENT_VERSION,
        "terms": [term_to_document(term) for term in E.terms],
    }
    if E.ancilla is not None:
        document["ancilla"] = matrix_rows(E.ancilla.mat)
    return document


def state_set_to_document(states: StateSet) -> StateSetDocument:
    if isinstance(states, FullHilbert):
        return {"type": "full_hilbert", "n": states.n}
    elif isinstance(states, RealProduct):
        return {"type": "real_product", "n": states.n}
    elif isinstance(states, ClassicalStates):
        return {"type": "classical", "n": states.n, "k": states.k}
    elif isinstance(states, ExplicitList):
        return {
            "type": "explicit",
            "n": states.n,
            "states": [vector_rows(phi.amplitudes) for phi in states.states],
        }
    raise DocumentException(f"Cannot serialize state set {states.describe()}")


def pqc_to_document(inst: PQCInstance) -> PQCDocument:
    return {
        "kind": "pqc",
        "version": DOCUMENT_VERSION,
        "states": state_set_to_document(inst.states),
        "channel": channel_to_document(inst.channel),
        "target": matrix_rows(inst.target.mat),
    }


def to_document(obj: Serializable) -> Document:
    if isinstance(obj, PureState):
        return state_to_document(obj)
    elif isinstance(obj, DensityMatrix):
        return density_to_document(obj)
    elif isinstance(obj, MixedUnitaryChannel):
        return channel_to_document(obj)
    elif isinstance(obj, PQCInstance):
        return pqc_to_document(obj)
    raise DocumentException(f"Cannot serialize {type(obj).__name__}")


def serialize(obj: Serializable) -> str:
    return json.dumps(to_document(obj), indent=2) + "\n"


def serialize_density(rho: DensityMatrix) -> str:
    return serialize(rho)


def state_from_document(document: StateDocument) -> PureState:
    return PureState(parse_vector(document["amplitudes"]))


def density_from_document(document: DensityDocument) -> DensityMatrix:
    return DensityMatrix(parse_matrix(document["matrix"]))


def term_from_document(document: ChannelTermDocument) -> ChannelTerm:
    if "pauli" in document:
        return ChannelTerm.fromPauli(
            document["p"], PauliString.fromLetters(document["pauli"])
        )
    return ChannelTerm(document["p"], parse_matrix(document["unitary"]))


def channel_from_document(document: ChannelDocument) -> MixedUnitaryChannel:
    ancilla: Optional[DensityMatrix] = None
    if "ancilla" in document:
        ancilla = DensityMatrix(parse_matrix(document["ancilla"]))
    return MixedUnitaryChannel(
        [term_from_document(term) for term in document["terms"]], ancilla
    )


def state_set_from_document(document: StateSetDocument) -> StateSet:
    kind = document["type"]
    if kind == "full_hilbert":
        return FullHilbert(document["n"])
    elif kind == "real_product":
        return RealProduct(document["n"])
    elif kind == "classical":
        if "k" not in document:
            raise DocumentException("Classical state set needs k")
        return ClassicalStates(document["k"], document["n"])
    elif kind == "explicit":
        if "states" not in document:
            raise DocumentException("Explicit state set needs states")
        states = tuple(PureState(parse_vector(v)) for v in document["states"])
        explicit = ExplicitList(states)
        if explicit.n != document["n"]:
            raise DocumentException(
                f"Explicit states have {explicit.n} qubits, document says {document['n']}"
            )
        return explicit
    raise DocumentException(f"Unknown state set type {kind!r}")


def pqc_from_document(document: PQCDocument) -> PQCInstance:
    return PQCInstance(
        state_set_from_document(document["states"]),
        channel_from_document(document["channel"]),
        DensityMatrix(parse_matrix(document["target"])),
    )


def validate(document: Any, expected: Any) -> Any:
    try:
        return check_type(
            document,
            expected,
            collection_check_strategy=CollectionCheckStrategy.ALL_ITEMS,
        )
    except TypeCheckError as e:
        raise DocumentException(f"Malformed document: {e}") from e


def from_document(document: Any) -> Serializable:
    """Build the object a decoded document describes, dispatching on kind."""
    if not isinstance(document, dict) or "kind" not in document:
        raise DocumentException("Document must be an object with a kind")
    kind = document["kind"]
    version = document.get("version")
    if version != DOCUMENT_VERSION:
        raise DocumentException(f"Unsupported document version {version!r}")
    try:
        if kind == "state":
            return state_from_document(validate(document, StateDocument))
        elif kind == "density":
            return density_from_document(validate(document, DensityDocument))
        elif kind == "channel":
            return channel_from_document(validate(document, ChannelDocument))
        elif kind == "pqc":
            return pqc_from_document(validate(document, PQCDocument))
    except (
        LinalgException,
        InvalidStateException,
        PauliException,
        ChannelException,
        PQCException,
        ValueError,
    ) as e:
        raise DocumentException(f"Invalid {kind} document: {e}") from e
    raise DocumentException(f"Unknown document kind {kind!r}")


def parse(text: str) -> Serializable:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentException(f"Document is not valid JSON: {e}") from e
    return from_document(document)


def parse_as(text: str, expected: type) -> Any:
    obj = parse(text)
    if not isinstance(obj, expected):
        raise DocumentException(
            f"Expected a {expected.__name__} document, got {type(obj).__name__}"
        )
    return obj


def parse_density(text: str) -> DensityMatrix:
    return parse_as(text, DensityMatrix)


def parse_pqc(text: str) -> PQCInstance:
    return parse_as(text, PQCInstance)


def parse_state(text: str) -> PureState:
    return parse_as(text, PureState)


def read_document(path: str | Path) -> Serializable:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentException(f"Cannot read {path}: {e}") from e
    logger.debug(f"Read {len(text)} bytes from {path}")
    return parse(text)


def write_document(path: str | Path, obj: Serializable):
    try:
        Path(path).write_text(serialize(obj), encoding="utf-8")
    except OSError as e:
        raise DocumentException(f"Cannot write {path}: {e}") from e
