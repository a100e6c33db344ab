from typing import List, Literal, TypedDict, Union

DOCUMENT_VERSION = 1

# [re, im]
ComplexEntry = List[float]
MatrixRows = List[List[ComplexEntry]]


class StateDocument(TypedDict):
    kind: Literal["state"]
    version: int
    amplitudes: List[ComplexEntry]


class DensityDocument(TypedDict):
    kind: Literal["density"]
    version: int
    matrix: MatrixRows


class MatrixTerm(TypedDict):
    p: float
    unitary: MatrixRows


# Compact form: "IXZY" names sigma_0 (x) sigma_1 (x) sigma_3 (x) sigma_2
class PauliTerm(TypedDict):
    p: float
    pauli: str


ChannelTermDocument = Union[PauliTerm, MatrixTerm]


class ChannelDocumentRequired(TypedDict):
    kind: Literal["channel"]
    version: int
    terms: List[ChannelTermDocument]


class ChannelDocument(ChannelDocumentRequired, total=False):
    ancilla: MatrixRows


StateSetType = Literal["full_hilbert", "real_product", "classical", "explicit"]


class StateSetDocumentRequired(TypedDict):
    type: StateSetType
    n: int


class StateSetDocument(StateSetDocumentRequired, total=False):
    k: int
    states: List[List[ComplexEntry]]


class PQCDocument(TypedDict):
    kind: Literal["pqc"]
    version: int
    states: StateSetDocument
    channel: ChannelDocument
    target: MatrixRows


class TranscriptDocument(TypedDict):
    key_index: int
    plaintext: DensityDocument
    ciphertext: DensityDocument
    recovered: DensityDocument


Document = Union[StateDocument, DensityDocument, ChannelDocument, PQCDocument]
