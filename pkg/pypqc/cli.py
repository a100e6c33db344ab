"""Command-line front end: build, verify, certify, lift and protocol.

Exit codes: 0 success, 1 property failure, 2 usage, parse or precondition
errors. Reports go to standard output, diagnostics to standard error.
"""
import argparse
import asyncio
import dataclasses
import logging
import sys
from typing import Any, Callable, Optional, Sequence

from pypqc.__meta__ import version
from pypqc.certify import (
    certify_real_key_bound,
    certify_theorem3,
    certify_theorem4,
    certify_theorem6,
)
from pypqc.channels import ChannelException
from pypqc.documents import DocumentException, read_document, write_document
from pypqc.linalg import LinalgException
from pypqc.pqc import (
    PQCException,
    PQCInstance,
    PreconditionException,
    RealProduct,
    TheoremViolationException,
    build_example_pqc,
    build_pauli_otp,
    build_real_otp,
    key_entropy,
    lift_to_classical,
    verify_pqc,
)
from pypqc.prng import SplitMix64
from pypqc.protocol import KeyException, estimate_eve_state, run_protocol
from pypqc.states import InvalidStateException, PureState

logger = logging.getLogger("pypqc")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

ROUND_TRIP_LIMIT = 1e-9

BUILDERS: dict[str, Callable[[int], PQCInstance]] = {
    "pauli-otp": build_pauli_otp,
    "real-otp": build_real_otp,
    "example": lambda n: build_example_pqc(),
}


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(round(value, 9))
    if isinstance(value, tuple):
        return "(" + ", ".join(format_value(v) for v in value) + ")"
    return str(value)


def print_fields(report: Any):
    for field in dataclasses.fields(report):
        print(f"{field.name} = {format_value(getattr(report, field.name))}")


def load_pqc(path: str) -> PQCInstance:
    obj = read_document(path)
    if not isinstance(obj, PQCInstance):
        raise DocumentException(f"{path} is a {type(obj).__name__} document, not pqc")
    return obj


def load_state(path: str) -> PureState:
    obj = read_document(path)
    if not isinstance(obj, PureState):
        raise DocumentException(f"{path} is a {type(obj).__name__} document, not state")
    return obj


def cmd_build(args: argparse.Namespace) -> int:
    inst = BUILDERS[args.kind](args.n)
    write_document(args.out, inst)
    print(f"wrote {args.kind} ({len(inst.channel)} terms) to {args.out}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = verify_pqc(load_pqc(args.path), args.tol)
    print("ok" if report.ok else "fail")
    print_fields(report)
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_certify(args: argparse.Namespace) -> int:
    inst = load_pqc(args.path)
    if args.theorem == 3:
        ok = certify_theorem3(inst, args.tol)
        print("ok" if ok else "fail")
        return EXIT_OK if ok else EXIT_FAILURE
    if args.theorem == 4:
        report = certify_theorem4(inst, args.tol)
    elif isinstance(inst.states, RealProduct):
        report = certify_real_key_bound(inst, args.tol)
    else:
        report = certify_theorem6(inst, args.tol)
    print("ok" if report.ok else "fail")
    print_fields(report)
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_lift(args: argparse.Namespace) -> int:
    lifted = lift_to_classical(load_pqc(args.path), args.tol)
    write_document(args.out, lifted)
    print(f"wrote lifted instance on {lifted.m} qubits to {args.out}")
    return EXIT_OK


def cmd_protocol(args: argparse.Namespace) -> int:
    inst = load_pqc(args.path)
    report = verify_pqc(inst)
    if not report.ok:
        raise PreconditionException(f"Instance is not private: {report.witness}")
    if args.plaintext_path is not None:
        phi = load_state(args.plaintext_path)
    else:
        phi = inst.states.randomState(SplitMix64(args.seed))

    transcript = asyncio.run(run_protocol(inst, phi, args.seed))
    estimate = estimate_eve_state(inst, phi, args.samples, args.seed)
    if args.transcript is not None:
        with open(args.transcript, "w", encoding="utf-8") as f:
            f.write(transcript.dumps())

    print(f"key_index = {transcript.key_index}")
    print(f"round_trip_deviation = {transcript.deviation:.3e}")
    print(f"eve_distance = {estimate.distance:.3e}")
    print(f"H(p) = {format_value(key_entropy(inst))}")
    if transcript.deviation > ROUND_TRIP_LIMIT:
        logger.error(f"Round trip deviation {transcript.deviation} exceeds limit")
        return EXIT_FAILURE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pypqc", description="Private quantum channels and one-time pads"
    )
    parser.add_argument("--version", action="version", version=version)
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="debug diagnostics on stderr"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    build = subparsers.add_parser("build", help="write a constructed PQC document")
    build.add_argument("kind", choices=sorted(BUILDERS))
    build.add_argument("-n", type=int, default=1, help="number of qubits")
    build.add_argument("-o", "--out", required=True, help="output path")
    build.set_defaults(handler=cmd_build)

    verify = subparsers.add_parser("verify", help="check the privacy property")
    verify.add_argument("path")
    verify.add_argument("--tol", type=float, default=None)
    verify.set_defaults(handler=cmd_verify)

    certify = subparsers.add_parser("certify", help="certify a key-size theorem")
    certify.add_argument("path")
    certify.add_argument("--theorem", type=int, choices=(3, 4, 6), required=True)
    certify.add_argument("--tol", type=float, default=None)
    certify.set_defaults(handler=cmd_certify)

    lift = subparsers.add_parser("lift", help="lift to a classical-state channel")
    lift.add_argument("path")
    lift.add_argument("-o", "--out", required=True, help="output path")
    lift.add_argument("--tol", type=float, default=None)
    lift.set_defaults(handler=cmd_lift)

    protocol = subparsers.add_parser("protocol", help="simulate Alice, Bob and Eve")
    protocol.add_argument("path")
    protocol.add_argument("--seed", type=int, default=0)
    plaintext = protocol.add_mutually_exclusive_group(required=True)
    plaintext.add_argument("--plaintext-path", help="state document to send")
    plaintext.add_argument(
        "--random-plaintext", action="store_true", help="draw a member of S"
    )
    protocol.add_argument(
        "--samples", type=int, default=0, help="Eve's samples; 0 enumerates all keys"
    )
    protocol.add_argument("--transcript", help="write the transcript document here")
    protocol.set_defaults(handler=cmd_protocol)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except TheoremViolationException as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (
        DocumentException,
        PQCException,
        ChannelException,
        InvalidStateException,
        LinalgException,
        KeyException,
        OSError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())
