"""Command-line front end.

Subcommands: ``gen`` (probe state families), ``certify`` (faithful or
sensitive verdicts), ``witness`` (indistinguishable channel pairs),
``reconstruct`` (channel recovery reports), ``decompose`` (channel-difference
split of a serialized map).  Every command reads and writes the JSON
document format from :mod:`aapt.documents`; stdout carries only documents or
paths to them, diagnostics go to stderr.

Exit status encodes the outcome for scripting:

    0  verdict true / success
    1  verdict false (not faithful, not sensitive, no witness needed)
    2  usage or document format error
    3  numerical failure (ambiguous rank gap, verification failure)
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import documents
from .duality import certify_faithful
from .linalg import random_density
from .reconstruct import NotFaithfulProbeError, noise_stress, reconstruct_channel
from .sensitivity import certify_sensitive
from .states import cq_state, max_entangled, product_state, random_state, unitary_faithful_state
from .witness import HermitianPreservingMap, decompose_channel_difference, faithfulness_witness

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

AMBIGUOUS_GAP_RATIO = 10.0

FAMILIES = ("max-entangled", "product", "cq", "prop4", "random")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aapt",
        description="Certify, witness, and reconstruct with bipartite probes for ancilla-assisted process tomography.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a probe state document")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--d", type=int, default=2, help="dimension for max-entangled and prop4")
    gen.add_argument("--da", type=int, default=2, help="A dimension for product and random")
    gen.add_argument("--db", type=int, default=0, help="B dimension (0 = family default)")
    gen.add_argument("--rank", type=int, default=0, help="rank of the random state (0 = full)")
    gen.add_argument("--p", type=str, default="", help="comma-separated probabilities for cq")
    gen.add_argument("--lambda", dest="spectrum", type=str, default="", help="comma-separated spectrum for prop4")
    gen.add_argument("--sigmas", choices=("basis", "random"), default="basis", help="B blocks for cq")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--tol", type=float, default=0.0)
    gen.add_argument("--out", type=Path)

    cert = sub.add_parser("certify", help="emit a faithfulness or sensitivity certificate")
    cert.add_argument("state", type=Path)
    cert.add_argument("--mode", choices=("faithful", "sensitive"), required=True)
    cert.add_argument("--side", choices=("A", "B"), default="A")
    cert.add_argument("--class", dest="channel_class", choices=("unitary", "unital"), default="unital")
    cert.add_argument("--tol", type=float, default=0.0)
    cert.add_argument("--out", type=Path)

    wit = sub.add_parser("witness", help="emit an indistinguishable channel pair for a non-faithful state")
    wit.add_argument("state", type=Path)
    wit.add_argument("--side", choices=("A", "B"), default="A")
    wit.add_argument("--tol", type=float, default=0.0)
    wit.add_argument("--out", type=Path, nargs=2, metavar=("K0", "K1"), required=True)

    rec = sub.add_parser("reconstruct", help="recover a channel from a faithful probe")
    rec.add_argument("probe", type=Path)
    rec.add_argument("output", type=Path, nargs="?")
    rec.add_argument("--channel", type=Path, help="ground-truth channel document; outputs are synthesized")
    rec.add_argument("--noise", type=float, default=0.0)
    rec.add_argument("--trials", type=int, default=1)
    rec.add_argument("--seed", type=int, default=0)
    rec.add_argument("--side", choices=("A", "B"), default="A")
    rec.add_argument("--tol", type=float, default=0.0)
    rec.add_argument("--out", type=Path)

    dec = sub.add_parser("decompose", help="split a trace-annihilating map into a channel difference")
    dec.add_argument("transfer", type=Path)
    dec.add_argument("--tol", type=float, default=0.0)
    dec.add_argument("--out", type=Path, nargs=2, metavar=("K0", "K1"), required=True)
    return parser


def _emit(doc: documents.MatrixDocument, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(documents.dumps(doc))
    else:
        documents.save(doc, out)
        print(out)


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ValueError(f"{flag} must be a comma-separated list of numbers, got {text!r}") from None
    if not values:
        raise ValueError(f"{flag} must contain at least one number")
    return values


def _default_prop4_spectrum(d: int) -> list[float]:
    weights = [float(d - i) for i in range(d)]
    total = sum(weights)
    return [w / total for w in weights]


def _cmd_gen(args) -> int:
    meta = {"family": args.family, "seed": str(args.seed)}
    if args.family == "max-entangled":
        state = max_entangled(args.d)
        meta["d"] = str(args.d)
    elif args.family == "product":
        db = args.db or args.da
        g = np.random.default_rng(args.seed)
        state = product_state(random_density(args.da, args.da, g), random_density(db, db, g))
    elif args.family == "random":
        db = args.db or args.da
        n = args.da * db
        rank = args.rank or n
        state = random_state(args.da, db, rank, args.seed)
        meta["rank"] = str(rank)
    elif args.family == "cq":
        if not args.p:
            raise ValueError("the cq family needs --p")
        p = _parse_floats(args.p, "--p")
        db = args.db or len(p)
        if args.sigmas == "basis":
            sigmas = []
            for i in range(len(p)):
                block = np.zeros((db, db), dtype=complex)
                block[i % db, i % db] = 1.0
                sigmas.append(block)
        else:
            g = np.random.default_rng(args.seed)
            sigmas = [random_density(db, db, g) for _ in range(len(p))]
        state = cq_state(p, sigmas)
        meta["sigmas"] = args.sigmas
    else:  # prop4
        spectrum = _parse_floats(args.spectrum, "--lambda") if args.spectrum else _default_prop4_spectrum(args.d)
        state = unitary_faithful_state(spectrum)
        meta["d"] = str(len(spectrum))
    _emit(documents.state_document(state, meta), args.out)
    return EXIT_OK


def _cmd_certify(args) -> int:
    state = documents.document_to_state(documents.load(args.state))
    if args.mode == "faithful":
        cert = certify_faithful(state, args.side, args.tol)
        verdict = cert.faithful
        gap_ratio = cert.gap_ratio
        doc = documents.faithfulness_document(cert)
    else:
        cert = certify_sensitive(state, args.side, args.channel_class, args.tol)
        verdict = cert.sensitive
        gap_ratio = cert.gap_ratio
        doc = documents.sensitivity_document(cert, state.dims)
    _emit(doc, args.out)
    if gap_ratio < AMBIGUOUS_GAP_RATIO:
        print(
            f"ambiguous rank decision: gap ratio {gap_ratio:.3g} < {AMBIGUOUS_GAP_RATIO:g}; "
            "tighten --tol or treat the verdict as undecided",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return EXIT_OK if verdict else EXIT_FALSE


def _cmd_witness(args) -> int:
    state = documents.document_to_state(documents.load(args.state))
    pair = faithfulness_witness(state, args.side, args.tol)
    if pair is None:
        print("state is faithful; no witness pair exists", file=sys.stderr)
        return EXIT_FALSE
    shared = {
        "cptp": "true",
        "side": pair.side,
        "alpha": documents.format_number(pair.alpha),
        "output_gap": documents.format_number(pair.output_gap),
        "channel_gap": documents.format_number(pair.channel_gap),
    }
    for path, channel, role in ((args.out[0], pair.k0, "k0"), (args.out[1], pair.k1, "k1")):
        documents.save(documents.channel_document(channel, {**shared, "role": role}), path)
        print(path)
    return EXIT_OK


def _cmd_reconstruct(args) -> int:
    probe = documents.document_to_state(documents.load(args.probe))
    if args.channel is not None:
        truth = documents.document_to_channel(documents.load(args.channel))
        reports = noise_stress(probe, truth, args.noise, args.trials, args.seed, args.side, args.tol)
        meta_extra = {"noise": documents.format_number(args.noise), "seed": str(args.seed)}
    elif args.output is not None:
        output = documents.document_to_state(documents.load(args.output))
        reports = [reconstruct_channel(probe, output, args.side, args.tol)]
        meta_extra = {}
    else:
        raise ValueError("reconstruct needs an output state document or --channel")
    for index, report in enumerate(reports):
        meta = {"side": args.side, **meta_extra}
        if len(reports) > 1:
            meta["trial"] = str(index)
        doc = documents.report_document(report, meta)
        if args.out is None:
            sys.stdout.write(documents.dumps(doc))
        else:
            path = args.out
            if len(reports) > 1:
                path = path.with_name(f"{path.stem}.{index:03d}{path.suffix}")
            documents.save(doc, path)
            print(path)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    t = documents.document_to_transfer(documents.load(args.transfer))
    hp = HermitianPreservingMap(t, trace_annihilating=True)
    alpha, k0, k1 = decompose_channel_difference(hp)
    shared = {"cptp": "true", "alpha": documents.format_number(alpha)}
    for path, channel, role in ((args.out[0], k0, "k0"), (args.out[1], k1, "k1")):
        documents.save(documents.channel_document(channel, {**shared, "role": role}), path)
        print(path)
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "certify": _cmd_certify,
    "witness": _cmd_witness,
    "reconstruct": _cmd_reconstruct,
    "decompose": _cmd_decompose,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except NotFaithfulProbeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
