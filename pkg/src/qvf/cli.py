"""Command line interface: ``qvf <command> [options]``.

Every command writes one JSON document to stdout.  Exit codes:
0 success, 2 malformed input, 3 domain rejection, 4 internal check failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .errors import (
    DegenerateSpectra,
    InternalCheckFailed,
    IrrationalTwin,
    NonGenericSpectra,
    OutsideV2,
    QVFError,
    TwinCoincidence,
)
from .field import FiniteSpectra, NormalFormField, extended_spectra, finite_spectra
from .hidden import predict_lambda_pair
from .index_theorems import full_report
from .jsonio import ParseError, parse_rational_list
from .rediscovery import RANK_POINT, RecoveredH, build_basis, check_tH_ideal, rank_phi_check, recover_H, sample_fields
from .twin import reconstruct

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3, 4

log = logging.getLogger("qvf")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True)


def _default_seed() -> int:
    raw = os.environ.get("QVF_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"QVF_SEED must be an integer, got {raw!r}") from None


def _load_json(source: str):
    try:
        if source == "-":
            text = sys.stdin.read()
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {source}: {exc}") from exc


def _field_arg(args) -> NormalFormField:
    if args.a is not None:
        return NormalFormField(tuple(parse_rational_list(list(args.a), 6, "a")))
    return NormalFormField.from_json(_load_json(args.input))


def _spectra_arg(args) -> FiniteSpectra:
    if args.t is not None or args.d is not None:
        if args.t is None or args.d is None:
            raise ParseError("--t and --d must be given together")
        return FiniteSpectra.from_json({"t": list(args.t), "d": list(args.d)})
    doc = _load_json(args.input)
    if isinstance(doc, dict) and "a" in doc:
        return finite_spectra(NormalFormField.from_json(doc))
    return FiniteSpectra.from_json(doc)


# ---------------------------------------------------------------------------
# commands


def cmd_spectra(args):
    return EXIT_OK, extended_spectra(_field_arg(args)).to_json()


def cmd_verify(args):
    report = full_report(_field_arg(args))
    return (EXIT_OK if report.all_zero else EXIT_INTERNAL), report.to_json()


def cmd_twin(args):
    v = _field_arg(args)
    s = finite_spectra(v)
    rec = reconstruct(s.t, s.d)
    doc = {"input": v.to_json(), "reconstruction": rec.to_json(), "discriminant": rec.to_json()["discriminant"]}
    if rec.coincident:
        doc["twin"] = None
        doc["note"] = "twin coincidence - single solution returned"
    elif not rec.exact:
        doc["twin"] = None
        doc["note"] = "twin coefficients are irrational; see numeric solutions"
    else:
        others = [f for f in rec.fields() if f != v]
        doc["twin"] = others[0].to_json() if others else None
    return EXIT_OK, doc


def cmd_predict(args):
    s = _spectra_arg(args)
    return EXIT_OK, {"spectra": s.to_json(), "prediction": predict_lambda_pair(s).to_json()}


def cmd_sample(args):
    seed = args.seed if args.seed is not None else _default_seed()
    fields = sample_fields(seed, args.n, args.bound, args.threads)
    return EXIT_OK, {"seed": seed, "fields": [v.to_json() for v, _ in fields]}


def cmd_rediscover(args):
    seed = args.seed if args.seed is not None else _default_seed()
    basis = build_basis()
    n = args.samples if args.samples is not None else len(basis) + len(basis) // 10
    from .rediscovery import STREAM_FIT, sample_spectra

    samples = sample_spectra(seed, n, threads=args.threads, stream=STREAM_FIT)
    rec = recover_H(samples, seed=seed, primes=args.primes, fresh=args.fresh, threads=args.threads, basis=basis)
    ideal = check_tH_ideal(rec, args.ideal_samples, seed=seed)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(_dump(rec.to_json()) + "\n")
    doc = {
        "seed": seed,
        "basis_size": len(basis),
        "samples": rec.n_samples,
        "primes": list(rec.primes),
        "nullities": list(rec.nullities),
        "monomial_count": rec.monomial_count,
        "lambda_degree": rec.lambda_degree,
        "fresh_checked": rec.fresh_checked,
        "tH_ideal": ideal.to_json(),
        "emitted": args.emit,
    }
    return (EXIT_OK if ideal.passed else EXIT_INTERNAL), doc


def cmd_rank(args):
    rec = RecoveredH.from_json(_load_json(args.input))
    point = parse_rational_list(list(args.point), 6, "point") if args.point else RANK_POINT
    try:
        result = rank_phi_check(rec, point)
    except ZeroDivisionError as exc:
        raise DegenerateSpectra(str(exc)) from exc
    return EXIT_OK, result.to_json()


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qvf", description="Spectra, index theorems and twins of quadratic vector fields.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def field_cmd(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", nargs="?", default="-", help='JSON file {"a": [...]} or - for stdin')
        p.add_argument("--a", nargs=6, metavar="A", help="the six coefficients inline, e.g. 1 2 3/2 4 5 7")
        p.set_defaults(fn=fn)
        return p

    p = field_cmd("spectra", cmd_spectra, "extended spectra of a normal-form field")
    p.add_argument("--format", choices=["json"], default="json")
    field_cmd("verify", cmd_verify, "residuals of the five relations")
    field_cmd("twin", cmd_twin, "both fields with the same finite spectra")

    p = sub.add_parser("predict-lambda", help="the quadratic whose roots are Lambda of a field and its twin")
    p.add_argument("input", nargs="?", default="-", help='JSON {"t": [...], "d": [...]} or {"a": [...]}')
    p.add_argument("--t", nargs="+", metavar="T")
    p.add_argument("--d", nargs="+", metavar="D")
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("sample", help="seeded random fields in V2")
    p.add_argument("--seed", type=int, default=None, help="defaults to $QVF_SEED or 0")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--bound", type=int, default=1000, help="coefficients are drawn from [-bound, bound]")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("rediscover", help="interpolate the hidden polynomial H from samples")
    p.add_argument("--seed", type=int, default=None, help="defaults to $QVF_SEED or 0")
    p.add_argument("--samples", type=int, default=None, help="defaults to basis size + 10%%")
    p.add_argument("--primes", type=int, default=2, help="number of primes used before the first lift attempt")
    p.add_argument("--fresh", type=int, default=100, help="fresh samples for the exact vanishing check")
    p.add_argument("--ideal-samples", type=int, default=200)
    p.add_argument("--emit", metavar="PATH", help="write the recovered H as JSON")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_rediscover)

    p = sub.add_parser("rank-check", help="rank of the Jacobian of Phi from an emitted H")
    p.add_argument("input", help="JSON file written by rediscover --emit")
    p.add_argument("--point", nargs=6, metavar="X", help="(t1 t2 t3 d1 d2 d3), default 1 1 2 1 2 -1")
    p.set_defaults(fn=cmd_rank)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        code, doc = args.fn(args)
    except ParseError as exc:
        return _fail(EXIT_PARSE, "parse error", [str(exc)])
    except OutsideV2 as exc:
        return _fail(EXIT_DOMAIN, "outside V2", exc.reasons)
    except (DegenerateSpectra, NonGenericSpectra, TwinCoincidence, IrrationalTwin) as exc:
        return _fail(EXIT_DOMAIN, "domain rejection", [str(exc)])
    except (InternalCheckFailed, AssertionError) as exc:
        return _fail(EXIT_INTERNAL, "internal check failed", [str(exc)])
    except QVFError as exc:
        return _fail(EXIT_DOMAIN, type(exc).__name__, [str(exc)])
    sys.stdout.write(_dump(doc) + "\n")
    return code


def _fail(code: int, kind: str, reasons) -> int:
    sys.stdout.write(_dump({"error": kind, "reasons": list(reasons), "exit_code": code}) + "\n")
    print(f"qvf: {kind}: {'; '.join(reasons)}", file=sys.stderr)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
