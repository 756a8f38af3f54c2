"""Batch command line: annotate files, score against gold, lint resources, split corpora.

Exit codes: 0 success, 1 usage, 2 validation, 3 data mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import engine, evaluate, lexicon as lexicon_mod, rulepack, semmap
from .annotator import AnnotationFormatError, annotate, document_to_json, read_annotations
from .engine import GrammarError
from .guards import KNOWN_GUARDS
from .lexicon import LexiconError
from .textnorm import load_variant_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_MISMATCH = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="makan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_resource_flags(p):
        p.add_argument("--lexicon", action="append", default=[], metavar="PATH",
                       help="lexicon TSV (repeatable; default: shipped seed lexicon)")
        p.add_argument("--rules", action="append", default=[], metavar="PATH",
                       help="rule pack file (repeatable; default: shipped pack)")
        p.add_argument("--variants", metavar="PATH", default=None,
                       help="variant table TSV (default: shipped table)")

    p_ann = sub.add_parser("annotate", help="annotate UTF-8 text files")
    add_resource_flags(p_ann)
    p_ann.add_argument("--out", metavar="DIR", required=True, help="output directory")
    p_ann.add_argument("inputs", nargs="+", metavar="FILE")

    p_eval = sub.add_parser("eval", help="score system annotations against gold")
    p_eval.add_argument("--mode", choices=[m.value for m in evaluate.MatchMode],
                        default=evaluate.MatchMode.TRIGGER_EXACT.value)
    p_eval.add_argument("--out", metavar="PATH", default=None, help="write machine-readable report")
    p_eval.add_argument("gold_dir", metavar="GOLD_DIR")
    p_eval.add_argument("system_dir", metavar="SYSTEM_DIR")

    p_check = sub.add_parser("check", help="validate lexicon, rules, guards and variant table")
    add_resource_flags(p_check)

    p_split = sub.add_parser("split", help="deterministic 75/25 corpus split")
    p_split.add_argument("--seed", type=int, default=0)
    p_split.add_argument("--out", metavar="DIR", default=".", help="manifest output directory")
    p_split.add_argument("inputs", nargs="*", metavar="FILE")

    return parser


def _load_resources(args):
    """Load and validate all configured resources before touching any document."""
    smap = semmap.default_map()
    lexicon_paths = [Path(p) for p in args.lexicon] or [lexicon_mod.seed_lexicon_path()]
    rule_paths = [Path(p) for p in args.rules] or [rulepack.rule_pack_path()]
    variants_path = Path(args.variants) if args.variants else rulepack.variants_path()
    for path in [*lexicon_paths, *rule_paths, variants_path]:
        if not _exists(path):
            raise LexiconError(f"resource file not found: {path}")
    entries = []
    for path in lexicon_paths:
        entries.extend(lexicon_mod.load(path, smap).entries)
    lexicon = lexicon_mod.Lexicon(entries, smap)
    source = "\n".join(_read_text(p) for p in rule_paths)
    grammar = engine.compile(source, lexicon, smap)
    unknown = [
        f"rule {rule.name}: unknown guard {name}"
        for rule in grammar.rules
        for name in rule.guards
        if name not in KNOWN_GUARDS
    ]
    if unknown:
        raise GrammarError("; ".join(unknown))
    variants = load_variant_table(variants_path)
    return smap, lexicon, grammar, variants


def _exists(path) -> bool:
    try:
        return Path(path).exists()
    except TypeError:  # importlib traversable
        return path.is_file()


def _read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _atomic_write(path: Path, data: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_annotate(args) -> int:
    smap, lexicon, grammar, variants = _load_resources(args)
    inputs = [Path(p) for p in sorted(args.inputs)]
    for path in inputs:
        if not path.exists():
            print(f"input file not found: {path}", file=sys.stderr)
            return EXIT_VALIDATION
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for path in inputs:
        text = path.read_text(encoding="utf-8")
        doc = annotate(text, lexicon, grammar, smap, variants=variants, doc_id=path.stem)
        _atomic_write(out_dir / f"{path.stem}.json", document_to_json(doc))
    return EXIT_OK


def _read_doc_dir(dir_path: str, smap):
    docs = {}
    for path in sorted(Path(dir_path).glob("*.json")):
        doc = read_annotations(path, smap)
        if doc.doc_id in docs:
            raise AnnotationFormatError(f"{dir_path}: duplicate doc_id {doc.doc_id!r} ({path.name})")
        docs[doc.doc_id] = doc
    return docs


def cmd_eval(args) -> int:
    smap = semmap.default_map()
    for d in (args.gold_dir, args.system_dir):
        if not Path(d).is_dir():
            print(f"not a directory: {d}", file=sys.stderr)
            return EXIT_VALIDATION
    gold = _read_doc_dir(args.gold_dir, smap)
    system = _read_doc_dir(args.system_dir, smap)
    missing = sorted(set(gold) ^ set(system))
    if missing:
        print("document sets differ; unmatched ids: " + ", ".join(missing), file=sys.stderr)
        return EXIT_MISMATCH
    report = evaluate.score(gold.values(), system.values(), evaluate.MatchMode(args.mode))
    print(evaluate.format_table(report))
    if args.out:
        _atomic_write(Path(args.out), json.dumps(evaluate.report_to_json(report), ensure_ascii=False, indent=2) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        smap, lexicon, grammar, variants = _load_resources(args)
    except (LexiconError, GrammarError, ValueError, OSError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(
        f"ok: {len(lexicon.entries)} lexicon entries, {len(grammar)} rules, "
        f"{len(variants)} variant mappings, {len(smap)} category nodes"
    )
    return EXIT_OK


def cmd_split(args) -> int:
    if not args.inputs:
        print("no input documents to split", file=sys.stderr)
        return EXIT_USAGE
    work, evalset = evaluate.split(list(args.inputs), args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write(out_dir / "work.txt", "".join(p + "\n" for p in work))
    _atomic_write(out_dir / "eval.txt", "".join(p + "\n" for p in evalset))
    print(f"work: {len(work)} docs, eval: {len(evalset)} docs")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "annotate":
            return cmd_annotate(args)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "split":
            return cmd_split(args)
    except (LexiconError, GrammarError, AnnotationFormatError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
