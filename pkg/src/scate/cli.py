"""Command-line entry point: ``scate eval|normalize|filter|score|augment``.

Exit status: 0 success, 1 operational failure, 2 usage error, 3 items were
dropped by ``filter --strict``.
"""
from __future__ import annotations

import argparse
import datetime
import json
import logging
import sys

from . import annotations, augmentation, evaluation
from .dsl import execute, serialize_value
from .errors import AlignmentError, ProviderError, SchemaError, ScateError

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_DROPPED = 0, 1, 2, 3

log = logging.getLogger("scate")


def _dump(obj, pretty: bool) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2 if pretty else None)


def _emit(obj, path: str | None, pretty: bool):
    text = _dump(obj, pretty) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def cmd_eval(args) -> int:
    try:
        value = execute(args.expr)
    except ScateError as e:
        print(f"error [{e.category}]: {e.message}", file=sys.stderr)
        return EXIT_FAILURE
    serialized = serialize_value(value)
    if not args.pretty:
        print(_dump(serialized, False))
    elif serialized["kind"] == "intervals":
        for interval in serialized["value"]:
            print(interval)
    else:
        print(serialized["value"])
    return EXIT_OK


def cmd_normalize(args) -> int:
    records = annotations.load_records(args.input)
    normalized = annotations.normalize_records(records)
    annotations.save_records(normalized, args.output)
    errors = sum(item.error is not None for r in normalized for item in r.items)
    log.info("normalized %d records, %d item(s) failed to execute", len(normalized), errors)
    return EXIT_OK


def cmd_filter(args) -> int:
    records = annotations.load_records(args.input)
    kept, report = augmentation.filter_records(records)
    annotations.save_records(kept, args.output)
    _emit(report.to_json(), args.report, args.pretty)
    if args.strict and sum(report.dropped.values()):
        return EXIT_DROPPED
    return EXIT_OK


def cmd_score(args) -> int:
    gold = annotations.load_records(args.gold)
    pred = annotations.load_records(args.pred)
    report = evaluation.score(gold, pred, bootstrap_iterations=args.bootstrap,
                              sample_fraction=args.fraction, seed=args.seed)
    _emit(report.to_json(per_item=args.per_item), args.output, args.pretty)
    return EXIT_OK


def _read_corpus(path: str) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


def cmd_augment(args) -> int:
    sentences = _read_corpus(args.corpus)
    with open(args.template, encoding="utf-8") as f:
        template = f.read()
    if args.mock:
        provider = augmentation.MockProvider.from_file(args.mock)
    elif args.config:
        provider = augmentation.HTTPProvider(augmentation.ProviderConfig.from_file(args.config))
    else:
        print("error: augment needs --config or --mock", file=sys.stderr)
        return EXIT_USAGE
    records, report = augmentation.run_augmentation(
        sentences, template, provider, concurrency_limit=args.concurrency, seed=args.seed, dct=args.dct)
    annotations.save_records(records, args.output)
    _emit(report.to_json(), args.report, args.pretty)
    return EXIT_OK


def _date(text: str) -> datetime.date:
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}") from None


def _fraction(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError("fraction must be in (0, 1]")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scate", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="execute one expression")
    p.add_argument("expr")
    p.add_argument("--pretty", action="store_true", help="print endpoints instead of JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("normalize", help="execute every item of a record file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("filter", help="drop items whose code does not execute")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--strict", action="store_true", help="exit with status 3 if anything was dropped")
    p.add_argument("--report", help="write the filter report here instead of stdout")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("score", help="score predictions against gold")
    p.add_argument("gold")
    p.add_argument("pred")
    p.add_argument("--bootstrap", type=_positive, metavar="ITERATIONS")
    p.add_argument("--fraction", type=_fraction, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-item", action="store_true", help="include per-expression verdicts")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("augment", help="annotate raw sentences with a provider and filter the results")
    p.add_argument("corpus", help="UTF-8 text, one sentence per line")
    p.add_argument("template", help="prompt template containing {{sentence}}")
    p.add_argument("--config", help="provider configuration (JSON)")
    p.add_argument("--mock", help="replay completions from this fixture instead of calling a provider")
    p.add_argument("--output", required=True)
    p.add_argument("--report")
    p.add_argument("--concurrency", type=_positive, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dct", type=_date, help="document time substituted for {{dct}}")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_augment)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (OSError, SchemaError, AlignmentError, ProviderError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
