from . import __meta__
from .certify import (
    certify_real_key_bound,
    certify_theorem3,
    certify_theorem4,
    certify_theorem6,
    search_three_term_depolarizers,
)
from .channels import ChannelTerm, MixedUnitaryChannel, apply, channels_equal
from .documents import DocumentException, parse, serialize
from .linalg import ComplexMatrix
from .pqc import (
    ClassicalStates,
    ExplicitList,
    FullHilbert,
    PQCInstance,
    RealProduct,
    build_classical_otp,
    build_example_pqc,
    build_pauli_otp,
    build_real_otp,
    lift_to_classical,
    verify_pqc,
)
from .protocol import ProtocolSession, decrypt, encrypt, run_protocol
from .states import DensityMatrix, PureState

__version__ = __meta__.version
