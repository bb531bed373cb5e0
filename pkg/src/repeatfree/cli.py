"""Command-line front end: ``repeatfree <command> ...``.

Exit status is 0 on success, 1 on a domain or I/O error and 2 on a usage
error.  With ``--json`` errors are also reported on stderr as a JSON object
``{"error": code, "message": text}``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import bitio
from .codec_general import GeneralParams, decode_general, encode_general
from .codec_k2 import K2Params, decode_k2, encode_k2
from .constrained import (
    LabeledGraph,
    collision_bound,
    count_constrained_repeat_free,
    entropy,
    max_entropy_chain,
    perron,
)
from .core import BitWord, primal_identical_window
from .errors import CapacityExceeded, CorruptCodeword, InvalidArgument, RepeatFreeError
from .lab import (
    count_repeat_free,
    estimate_repeat_free_probability,
    reconstruct_from_multiset,
    resolve_threads,
    union_bound_floor,
)
from .lyndon import expansion_sequence
from .multidim import NdArray, md_frequency, md_is_repeat_free

log = logging.getLogger("repeatfree")


# ---------------------------------------------------------------- I/O helpers

def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write_bytes(path: str, blob: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(blob)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(blob)


def _emit(args, report: Dict, text: str) -> None:
    """Print ``report`` as JSON/CSV when asked, else ``text``."""
    if getattr(args, "json", False):
        print(json.dumps(report, sort_keys=True))
    elif getattr(args, "csv", False):
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(report), lineterminator="\n")
        writer.writeheader()
        writer.writerow(report)
        sys.stdout.write(buf.getvalue())
    else:
        print(text)


def _scheme(args):
    if args.scheme == "k2":
        return K2Params(args.n)
    return GeneralParams(args.n)


def _raw_bits(blob: bytes, args, params) -> BitWord:
    if args.scheme == "k2":
        size = params.payload_len
        want = (size + 7) // 8
        if len(blob) != want:
            raise InvalidArgument(f"k2 raw payload must be exactly {want} bytes for n={args.n}")
        bits = bitio.bytes_to_bits(blob)
        if bits[size:].weight:
            raise InvalidArgument("k2 raw payload has non-zero padding bits")
        return bits[:size]
    bits = bitio.bytes_to_bits(blob)
    if len(bits) > params.payload_capacity:
        raise CapacityExceeded(
            f"{len(blob)}-byte payload exceeds the {params.payload_capacity}-bit capacity",
            params.payload_capacity,
        )
    return bits


# ------------------------------------------------------------------ commands

def cmd_encode(args) -> int:
    params = _scheme(args)
    blob = _read_bytes(args.input)
    data = _raw_bits(blob, args, params) if args.raw else bitio.decode(blob, args.format)
    log.info("encoding %d payload bits with scheme %s, n=%d", len(data), args.scheme, args.n)
    if args.scheme == "k2":
        word = encode_k2(data, params)
    else:
        word = encode_general(data, params)
    _write_bytes(args.output, bitio.encode(word, args.format))
    return 0


def cmd_decode(args) -> int:
    params = _scheme(args)
    word = bitio.decode(_read_bytes(args.input), args.format)
    if args.scheme == "k2":
        payload = decode_k2(word, params)
    else:
        payload = decode_general(word, params)
    if args.raw:
        if args.scheme == "general" and len(payload) % 8:
            raise CorruptCodeword(f"decoded payload has {len(payload)} bits, not a whole number of bytes")
        _write_bytes(args.output, bitio.bits_to_bytes(payload))
    else:
        _write_bytes(args.output, bitio.encode(payload, args.format))
    return 0


def cmd_check(args) -> int:
    word = bitio.decode(_read_bytes(args.input), args.format)
    if args.k > len(word):
        raise InvalidArgument(f"window length {args.k} exceeds word length {len(word)}")
    pair = primal_identical_window(word, args.k)
    report = {"length": len(word), "k": args.k, "repeat_free": pair is None}
    text = f"repeat-free: {'true' if pair is None else 'false'}"
    if pair is not None:
        report["first_repeat"] = {"i": pair.i, "j": pair.j}
        text += f"\nfirst repeat: i={pair.i} j={pair.j} window={word.slice(pair.j, args.k)}"
    _emit(args, report, text)
    return 0


def cmd_expand(args) -> int:
    v = expansion_sequence(args.kprime, args.threshold_run, args.bits)
    _write_bytes(args.output, bitio.encode(v[:args.bits], args.format))
    return 0


def _load_graph(path: str) -> LabeledGraph:
    return LabeledGraph.parse(_read_text(path))


def cmd_constrained(args) -> int:
    g = _load_graph(args.graph)
    if args.action == "xcount":
        count = count_constrained_repeat_free(g, args.n, args.k)
        report = {
            "n": args.n,
            "k": args.k,
            "count": count,
            "rate": math.log2(count) / args.n if count and args.n else 0.0,
        }
        _emit(args, report, f"count: {count}")
        return 0
    pd = perron(g)
    report = {"lambda": pd.lam, "capacity": pd.capacity}
    if args.action == "capacity":
        _emit(args, report, f"lambda: {pd.lam:.12g}\ncapacity: {pd.capacity:.12g}")
        return 0
    chain = max_entropy_chain(g, pd)
    ks = args.k if args.k else list(range(4, 13))
    report.update(
        P=chain.transition.tolist(),
        mu=chain.stationary.tolist(),
        d=pd.d,
        entropy=entropy(g, chain),
        bound={str(k): collision_bound(g, pd, k) for k in ks},
    )
    if args.json:
        print(json.dumps(report, sort_keys=True))
    elif args.csv:
        print("k,bound")
        for k, b in report["bound"].items():
            print(f"{k},{b!r}")
    else:
        lines = [f"lambda: {pd.lam:.12g}", f"capacity: {pd.capacity:.12g}", f"d: {pd.d:.12g}"]
        lines.append("P:")
        lines += ["  " + " ".join(f"{x:.12g}" for x in row) for row in chain.transition]
        lines.append("mu: " + " ".join(f"{x:.12g}" for x in chain.stationary))
        lines += [f"bound(k={k}): {b:.6g}" for k, b in report["bound"].items()]
        print("\n".join(lines))
    return 0


def _parse_dims(text: str) -> List[int]:
    try:
        dims = [int(x) for x in text.lower().split("x")]
    except ValueError:
        raise InvalidArgument(f"dims must look like 4x4 or 3x3x3, got {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise InvalidArgument(f"dims must be positive, got {text!r}")
    return dims


def cmd_mdcheck(args) -> int:
    w = NdArray.parse(_read_text(args.input), _parse_dims(args.dims), args.q)
    ok = md_is_repeat_free(w, args.k)
    table = md_frequency(w, args.k)
    report = {
        "dims": list(w.dims),
        "k": args.k,
        "repeat_free": ok,
        "windows": table.total,
        "distinct": len(table.support),
    }
    text = f"repeat-free: {'true' if ok else 'false'}\nwindows: {table.total}\ndistinct: {len(table.support)}"
    _emit(args, report, text)
    return 0


def cmd_lab(args) -> int:
    if args.action == "count":
        count = count_repeat_free(args.n, args.k, args.q)
        rate = math.log(count, args.q) / args.n if count and args.n else 0.0
        report = {"n": args.n, "k": args.k, "q": args.q, "count": count, "rate": rate}
        _emit(args, report, f"count: {count}\nrate: {rate:.12g}")
    elif args.action == "mc":
        est = estimate_repeat_free_probability(
            args.n, args.k, args.trials, args.seed, threads=resolve_threads(args.threads)
        )
        report = {"n": args.n, "k": args.k, "seed": args.seed, **est.as_dict(),
                  "union_bound": union_bound_floor(args.n, args.k)}
        _emit(args, report, (
            f"estimate: {est.estimate:.6f} ({est.successes}/{est.trials})\n"
            f"95% interval: [{est.low:.6f}, {est.high:.6f}]\n"
            f"union bound: {union_bound_floor(args.n, args.k):.6f}"
        ))
    else:
        lines = [ln.strip() for ln in _read_text(args.input).splitlines() if ln.strip()]
        if args.r is not None and any(len(ln) != args.r for ln in lines):
            raise InvalidArgument(f"every substring must have length {args.r}")
        word = reconstruct_from_multiset(lines)
        _emit(args, {"length": len(word), "word": str(word)}, str(word))
    return 0


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output and errors")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=bitio.FORMATS, default="text", help="bit file format")

    table = argparse.ArgumentParser(add_help=False)
    table.add_argument("--csv", action="store_true", help="CSV report on stdout")

    parser = argparse.ArgumentParser(prog="repeatfree", description="Repeat-free codes and experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_text in (
        ("encode", cmd_encode, "encode a payload into a repeat-free codeword"),
        ("decode", cmd_decode, "recover the payload from a codeword"),
    ):
        p = sub.add_parser(name, parents=[common, fmt], help=help_text)
        p.add_argument("--scheme", choices=("k2", "general"), default="k2")
        p.add_argument("--n", type=int, required=True, help="codeword length (power of two)")
        p.add_argument("--in", dest="input", default="-", help="input file (default stdin)")
        p.add_argument("--out", dest="output", default="-", help="output file (default stdout)")
        p.add_argument("--raw", action="store_true", help="payload is a raw byte file")
        p.set_defaults(func=fn)

    p = sub.add_parser("check", parents=[common, fmt], help="test a word for repeated windows")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--in", dest="input", default="-")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("expand", parents=[common, fmt], help="dump a Lyndon-word expansion sequence")
    p.add_argument("--kprime", type=int, required=True, help="necklace length")
    p.add_argument("--threshold-run", type=int, required=True,
                   help="start at (0^(r-1) 1)^* cut to kprime bits")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--out", dest="output", default="-")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("constrained", parents=[common, table], help="constrained-system analysis")
    p.add_argument("action", choices=("capacity", "chain", "xcount"))
    p.add_argument("--graph", required=True, help="edge list file: 'src dst label' per line")
    p.add_argument("--n", type=int, help="word length for xcount")
    p.add_argument("--k", type=int, nargs="*", help="window length(s)")
    p.set_defaults(func=cmd_constrained)

    p = sub.add_parser("mdcheck", parents=[common, table], help="multidimensional repeat-free check")
    p.add_argument("--dims", required=True, help="side lengths, e.g. 4x4")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--in", dest="input", default="-")
    p.set_defaults(func=cmd_mdcheck)

    p = sub.add_parser("lab", parents=[common, table], help="counting and Monte Carlo experiments")
    p.add_argument("action", choices=("count", "mc", "reconstruct"))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, help="worker threads (default $REPEATFREE_THREADS or 1)")
    p.add_argument("--r", type=int, help="substring length for reconstruct")
    p.add_argument("--in", dest="input", default="-")
    p.set_defaults(func=cmd_lab)
    return parser


def _require(parser, args, *names) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        parser.error(f"{args.command} {args.action} requires {', '.join(missing)}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.json and getattr(args, "csv", False):
        parser.error("--json and --csv are mutually exclusive")
    if args.command == "constrained" and args.action == "xcount":
        _require(parser, args, "n", "k")
        if len(args.k) != 1:
            parser.error("constrained xcount takes exactly one --k")
        args.k = args.k[0]
    if args.command == "lab":
        if args.action in ("count", "mc"):
            _require(parser, args, "n", "k")
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (RepeatFreeError, OSError) as exc:
        code = exc.code if isinstance(exc, RepeatFreeError) else "io-error"
        if args.json:
            payload = {"error": code, "message": str(exc)}
            if isinstance(exc, CapacityExceeded):
                payload["max_bits"] = exc.max_bits
            print(json.dumps(payload), file=sys.stderr)
        else:
            print(f"repeatfree: {code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
