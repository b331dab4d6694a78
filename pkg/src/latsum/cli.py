"""Command-line front end.

Commands: seqnorm, opnorm, tensornorm compute one norm from a JSON input
file; verify runs named verification suites; report re-renders a stored
report.  Exit codes: 0 success, 1 verification failure, 2 malformed
input, 3 unsupported parameter combination.  The default seed comes from
the LATSUM_SEED environment variable; identical inputs, flags, and seed
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import List, Optional

from .lattice import UnsupportedExponentError
from .opnorms import IdealKind, NormParams, UnsupportedPairError, ideal_norm
from .oracles import DimensionTooLargeError
from .search import DegenerateConstraintError, SearchConfig
from .seqnorms import SeqNormKind, seq_norm, strong_norm
from .serialize import (
    InputFormatError,
    dump_json,
    estimate_payload,
    load_json_file,
    load_operator,
    load_sequence,
    load_tensor,
    space_payload,
)
from .tensors import fremlin_norm, grothendieck_norms, wittstock_norm
from .verify import available_suites, report_csv, report_payload, run_suite

_INF = math.inf

_SEQ_KINDS = ("strong", "weak", "pos-weak", "cohen", "pos-strong")
_OP_KINDS = ("lambda", "dplus", "majorizing", "cn-left", "cn-right", "cn-both")
_TENSOR_KINDS = ("wittstock", "fremlin", "groth-eps", "groth-pi", "delta")


class _ExitWith(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _fail(code: int, message: str):
    raise _ExitWith(code, message)


def _exponent_arg(raw: str) -> float:
    if raw == "inf":
        return _INF
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {raw!r}")
    if not value >= 1.0:
        raise argparse.ArgumentTypeError("exponent must be >= 1")
    return value


def _seed_arg(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return value


def _default_seed() -> int:
    raw = os.environ.get("LATSUM_SEED")
    if raw is None:
        return 0
    try:
        seed = int(raw)
    except ValueError:
        _fail(2, f"LATSUM_SEED: not an integer: {raw!r}")
    if seed < 0:
        _fail(2, "LATSUM_SEED: seed must be nonnegative")
    return seed


def _resolve_seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _config(args, seed: int) -> SearchConfig:
    return SearchConfig(
        starts=args.starts,
        max_iters=args.max_iters,
        tol=args.tol,
        seed=seed,
        presample=args.presample,
    )


def _emit(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _estimate_csv(payload: dict) -> str:
    keys = [k for k, v in payload.items() if not isinstance(v, (dict, list))]
    est = payload["estimate"]
    est_keys = [k for k in est if k != "certificate"]
    header = keys + est_keys
    row = [str(payload[k]) for k in keys] + [
        ("true" if v is True else "false" if v is False else repr(v) if isinstance(v, float) else str(v))
        for v in (est[k] for k in est_keys)
    ]
    return ",".join(header) + "\n" + ",".join(row) + "\n"


def _emit_estimate(payload: dict, args):
    if args.out == "csv":
        _emit(_estimate_csv(payload), args.output)
    else:
        _emit(dump_json(payload), args.output)


def _add_common(parser, with_m: bool = False):
    parser.add_argument("-i", "--input", required=True, help="JSON input file")
    parser.add_argument("-o", "--output", default=None, help="write here instead of stdout")
    parser.add_argument("--out", choices=("json", "csv"), default="json")
    if with_m:
        parser.add_argument("--m", type=int, default=4, help="witness sequence length cap")
    parser.add_argument("--starts", type=int, default=64)
    parser.add_argument("--max-iters", type=int, default=500)
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--seed", type=_seed_arg, default=None)
    parser.add_argument("--presample", type=int, default=0,
                        help="annealed preselection pool size (0 disables)")


def _cmd_seqnorm(args) -> int:
    seq = load_sequence(load_json_file(args.input))
    param = args.param
    if param is None:
        _fail(2, "missing --q/--p exponent")
    if args.kind in ("cohen", "pos-strong") and param == _INF:
        _fail(3, f"{args.kind} needs a finite exponent")
    seed = _resolve_seed(args)
    cfg = _config(args, seed)
    kind = SeqNormKind(args.kind.replace("-", "_"), param)
    est = seq_norm(seq, kind, cfg)
    payload = {
        "command": "seqnorm",
        "kind": args.kind,
        "parameter": "inf" if param == _INF else param,
        "space": space_payload(seq.space),
        "length": len(seq),
        "estimate": estimate_payload(est),
    }
    _emit_estimate(payload, args)
    return 0


def _cmd_opnorm(args) -> int:
    T = load_operator(load_json_file(args.input))
    p, q = args.p, args.q
    if not (1.0 <= q <= p):
        _fail(3, "need 1 <= q <= p")
    if args.kind.startswith("cn-") and p == _INF:
        _fail(3, f"{args.kind} needs p < inf")
    seed = _resolve_seed(args)
    cfg = _config(args, seed)
    kind = IdealKind(args.kind.replace("-", "_"), NormParams(p, q))
    est = ideal_norm(T, kind, args.m, cfg)
    payload = {
        "command": "opnorm",
        "kind": args.kind,
        "p": "inf" if p == _INF else p,
        "q": "inf" if q == _INF else q,
        "m": args.m,
        "domain": space_payload(T.domain),
        "codomain": space_payload(T.codomain),
        "estimate": estimate_payload(est),
    }
    _emit_estimate(payload, args)
    return 0


def _cmd_tensornorm(args) -> int:
    u = load_tensor(load_json_file(args.input))
    if args.kind == "groth-pi" and u.left_exponent == _INF:
        _fail(3, "groth-pi needs a finite left exponent")
    seed = _resolve_seed(args)
    cfg = _config(args, seed)
    if args.kind == "wittstock":
        est = estimate_payload(wittstock_norm(u, cfg))
    elif args.kind == "fremlin":
        est = estimate_payload(fremlin_norm(u, cfg))
    elif args.kind == "delta":
        est = {
            "value": strong_norm(u.rows, u.left_exponent),
            "exact": True,
            "method": "direct",
            "starts_used": 0,
            "iterations": 0,
            "seed": seed,
            "certificate": None,
        }
    else:
        pair = grothendieck_norms(u, cfg)
        est = estimate_payload(pair.eps if args.kind == "groth-eps" else pair.pi)
    payload = {
        "command": "tensornorm",
        "kind": args.kind,
        "p": "inf" if u.left_exponent == _INF else u.left_exponent,
        "space": space_payload(u.rows.space),
        "length": len(u.rows),
        "estimate": est,
    }
    _emit_estimate(payload, args)
    return 0


def _cmd_verify(args) -> int:
    seed = _resolve_seed(args)
    names: List[str] = list(args.suites)
    if "all" in names:
        names = list(available_suites())
    if args.with_oracle and "oracle-coherence" not in names:
        names.append("oracle-coherence")
    cfg = None
    if args.starts is not None or args.max_iters is not None:
        cfg = SearchConfig(
            starts=args.starts if args.starts is not None else 64,
            max_iters=args.max_iters if args.max_iters is not None else 500,
            seed=seed,
        )
    reports = [run_suite(name, count=args.count, seed=seed, cfg=cfg) for name in names]
    payloads = [report_payload(r) for r in reports]
    for rep in reports:
        status = "ok" if rep.ok else "FAIL"
        print(
            f"{rep.suite}: {rep.passed}/{len(rep.rows)} passed, "
            f"max gap {rep.max_gap:.3e}, {status}",
            file=sys.stderr,
        )
    if args.out == "csv":
        blocks = [report_csv(p) for p in payloads]
        body = blocks[0] + "".join("".join(b.splitlines(True)[1:]) for b in blocks[1:])
        _emit(body, args.output)
    else:
        doc = payloads[0] if len(payloads) == 1 else {"reports": payloads}
        _emit(dump_json(doc), args.output)
    return 0 if all(r.ok for r in reports) else 1


_REPORT_KEYS = {"suite", "claim", "seed", "version", "config", "rows", "summary"}


def _validate_report(doc) -> List[dict]:
    docs = doc.get("reports") if isinstance(doc, dict) and "reports" in doc else [doc]
    if not isinstance(docs, list):
        raise InputFormatError("reports", "expected a list of report objects")
    for entry in docs:
        if not isinstance(entry, dict) or not _REPORT_KEYS.issubset(entry):
            missing = _REPORT_KEYS - set(entry) if isinstance(entry, dict) else _REPORT_KEYS
            raise InputFormatError("report", f"missing fields: {', '.join(sorted(missing))}")
        if not isinstance(entry["rows"], list):
            raise InputFormatError("report.rows", "expected a list")
    return docs


def _cmd_report(args) -> int:
    doc = load_json_file(args.input)
    payloads = _validate_report(doc)
    if args.out == "csv":
        blocks = [report_csv(p) for p in payloads]
        body = blocks[0] + "".join("".join(b.splitlines(True)[1:]) for b in blocks[1:])
        _emit(body, args.output)
    else:
        out = payloads[0] if len(payloads) == 1 else {"reports": payloads}
        _emit(dump_json(out), args.output)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latsum",
        description="Sequence, operator-ideal, and tensor norms on weighted coordinate lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sq = sub.add_parser("seqnorm", help="norm of a vector sequence")
    sq.add_argument("--kind", choices=_SEQ_KINDS, required=True)
    sq.add_argument("--q", type=_exponent_arg, dest="param", default=None)
    sq.add_argument("--p", type=_exponent_arg, dest="param", default=None)
    _add_common(sq)
    sq.set_defaults(handler=_cmd_seqnorm)

    op = sub.add_parser("opnorm", help="operator-ideal norm of a matrix")
    op.add_argument("--kind", choices=_OP_KINDS, required=True)
    op.add_argument("--p", type=_exponent_arg, required=True)
    op.add_argument("--q", type=_exponent_arg, required=True)
    _add_common(op, with_m=True)
    op.set_defaults(handler=_cmd_opnorm)

    tn = sub.add_parser("tensornorm", help="tensor norm of a left-sequence element")
    tn.add_argument("--kind", choices=_TENSOR_KINDS, required=True)
    _add_common(tn)
    tn.set_defaults(handler=_cmd_tensornorm)

    vf = sub.add_parser("verify", help="run verification suites")
    vf.add_argument("suites", nargs="+", choices=available_suites() + ("all",))
    vf.add_argument("--count", type=int, default=None)
    vf.add_argument("--seed", type=_seed_arg, default=None)
    vf.add_argument("--starts", type=int, default=None)
    vf.add_argument("--max-iters", type=int, default=None)
    vf.add_argument("--with-oracle", action="store_true",
                    help="also run the oracle-coherence suite")
    vf.add_argument("-o", "--output", default=None)
    vf.add_argument("--out", choices=("json", "csv"), default="json")
    vf.set_defaults(handler=_cmd_verify)

    rp = sub.add_parser("report", help="re-render a stored verification report")
    rp.add_argument("-i", "--input", required=True)
    rp.add_argument("-o", "--output", default=None)
    rp.add_argument("--out", choices=("json", "csv"), default="json")
    rp.set_defaults(handler=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _ExitWith as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedExponentError, UnsupportedPairError, DimensionTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DegenerateConstraintError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
