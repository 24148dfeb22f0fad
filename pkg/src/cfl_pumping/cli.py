import argparse
import json
import logging
import sys
from typing import Sequence

from common.reports import PumpOutcome
from common.settings_helper import SettingsHelper
from cfl_pumping.errors import CflError, GrammarFormatError
from cfl_pumping.grammar import (
    Strategy,
    enumerate_language,
    format_grammar,
    format_sentence,
    load_grammar,
    parse_sentence,
    sentence_names,
)
from cfl_pumping.parser import cyk_member, cyk_tree
from cfl_pumping.pumping import (
    decompose_sentence,
    pump,
    pumping_constant,
    refute_power_language,
    verify_pumping,
)
from cfl_pumping.transform import simplify, to_cnf
from cfl_pumping.tree import format_code, format_tree, tree_to_json

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(filename)s:%(lineno)s | %(message)s"
DEMO_LETTERS = ("a", "b", "c")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _sentence_arg(args: argparse.Namespace):
    return parse_sentence(args.string, tokens=args.tokens)


def cmd_simplify(args: argparse.Namespace, settings: SettingsHelper) -> int:
    grammar = load_grammar(args.file)
    print(format_grammar(simplify(grammar)), end="")
    return EXIT_OK


def cmd_cnf(args: argparse.Namespace, settings: SettingsHelper) -> int:
    cnf = to_cnf(load_grammar(args.file))
    print(format_grammar(cnf.base), end="")
    print(f"k = {cnf.nonterminal_count}")
    print(f"n = {pumping_constant(cnf)}")
    return EXIT_OK


def cmd_member(args: argparse.Namespace, settings: SettingsHelper) -> int:
    cnf = to_cnf(load_grammar(args.file))
    sentence = _sentence_arg(args)
    if cyk_member(cnf, sentence):
        print(f"{format_sentence(sentence)} is a member")
        return EXIT_OK
    print(f"{format_sentence(sentence)} is not a member", file=sys.stderr)
    return EXIT_DOMAIN


def cmd_parse(args: argparse.Namespace, settings: SettingsHelper) -> int:
    cnf = to_cnf(load_grammar(args.file))
    sentence = _sentence_arg(args)
    tree = cyk_tree(cnf, sentence)
    if tree is None:
        reason = "the empty sentence has no binary derivation tree" if not sentence else "not a member"
        print(f"{format_sentence(sentence)}: {reason}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.json:
        print(json.dumps(tree_to_json(tree), indent=2, ensure_ascii=False))
    else:
        print(format_tree(tree))
    return EXIT_OK


def cmd_pump(args: argparse.Namespace, settings: SettingsHelper) -> int:
    cnf = to_cnf(load_grammar(args.file))
    decomposition = decompose_sentence(cnf, _sentence_arg(args))
    report = verify_pumping(cnf, decomposition, i_max=args.imax, jobs=args.jobs)
    if args.json:
        print(PumpOutcome(decomposition=decomposition.to_model(), report=report).model_dump_json(indent=2))
    else:
        d = decomposition
        print(f"n = {d.n}, repeated nonterminal {d.repeated}")
        for name in ("u", "v", "w", "x", "y"):
            print(f"  {name} = {format_sentence(getattr(d, name))}")
        print(f"  outer code = {format_code(d.outer_code) or '(root)'}, inner code = {format_code(d.inner_code)}")
        for row in report.rows:
            print(f"  i={row.i}: member={row.member} (surgery={row.surgery}, cyk={row.cyk}) "
                  f"{format_sentence(pump(d, row.i))}")
        print(f"overall = {report.overall}")
    return EXIT_OK if report.overall else EXIT_DOMAIN


def cmd_enumerate(args: argparse.Namespace, settings: SettingsHelper) -> int:
    grammar = load_grammar(args.file)
    sentences = enumerate_language(grammar, args.max_len,
                                   strategy=Strategy(args.strategy),
                                   node_budget=settings.nodeBudget,
                                   extra_length=settings.extraFormLength)
    ordered = sorted(sentences, key=lambda s: (len(s), sentence_names(s)))
    if args.json:
        print(json.dumps([sentence_names(s) for s in ordered], indent=2, ensure_ascii=False))
    else:
        for sentence in ordered:
            print(format_sentence(sentence))
    return EXIT_OK


def cmd_refute_demo(args: argparse.Namespace, settings: SettingsHelper) -> int:
    report = refute_power_language(DEMO_LETTERS, args.m, i_max=args.imax, jobs=args.jobs)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print(f"sentence {''.join(report.sentence)}, n = {report.n}, i_max = {report.i_max}")
        print(f"{len(report.rows)} admissible splits, {report.surviving} survive")
        print(report.verdict)
    return EXIT_OK if report.refuted else EXIT_DOMAIN


def build_parser(settings: SettingsHelper) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfl-pump",
        description="Chomsky normal form, CYK parsing and pumping decompositions for context-free grammars.",
        epilog="Example usage:\n"
               "  cfl-pump cnf data/grammars/anbn.cfg\n"
               "  cfl-pump pump data/grammars/anbn.cfg aaaaaaaaaaaaaaaabbbbbbbbbbbbbbbb --json\n"
               "  cfl-pump refute-demo --m 5 --imax 2",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")

    def with_sentence(sub: argparse.ArgumentParser):
        sub.add_argument("file", type=str, help="Grammar file.")
        sub.add_argument("string", type=str, help="Sentence; one terminal per character unless --tokens.")
        sub.add_argument("--tokens", action="store_true", default=settings.tokens,
                         help="Split the sentence on whitespace instead of per character.")

    simplify_parser = subparsers.add_parser("simplify", help="Remove ε, unit, useless and inaccessible rules.")
    simplify_parser.add_argument("file", type=str, help="Grammar file.")
    simplify_parser.set_defaults(handler=cmd_simplify)

    cnf_parser = subparsers.add_parser("cnf", help="Print the Chomsky normal form with k and n = 2^k.")
    cnf_parser.add_argument("file", type=str, help="Grammar file.")
    cnf_parser.set_defaults(handler=cmd_cnf)

    member_parser = subparsers.add_parser("member", help="Exit 0 iff the sentence is in the language.")
    with_sentence(member_parser)
    member_parser.set_defaults(handler=cmd_member)

    parse_parser = subparsers.add_parser("parse", help="Print a CYK derivation tree.")
    with_sentence(parse_parser)
    parse_parser.add_argument("--json", action="store_true", help="Print the tree as JSON.")
    parse_parser.set_defaults(handler=cmd_parse)

    pump_parser = subparsers.add_parser("pump", help="Decompose a sentence and verify pumping.")
    with_sentence(pump_parser)
    pump_parser.add_argument("--imax", type=int, default=settings.iMax, help="Verify i = 0..IMAX.")
    pump_parser.add_argument("--json", action="store_true", help="Print decomposition and report as JSON.")
    pump_parser.add_argument("--jobs", type=int, default=settings.jobs, help="Rows checked in parallel.")
    pump_parser.set_defaults(handler=cmd_pump)

    enumerate_parser = subparsers.add_parser("enumerate", help="List the sentences up to a length.")
    enumerate_parser.add_argument("file", type=str, help="Grammar file.")
    enumerate_parser.add_argument("--max-len", type=int, required=True, help="Longest sentence to list.")
    enumerate_parser.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.BFS.value,
                                  help="Oracle strategy.")
    enumerate_parser.add_argument("--json", action="store_true", help="Print a JSON array.")
    enumerate_parser.set_defaults(handler=cmd_enumerate)

    refute_parser = subparsers.add_parser("refute-demo", help="Refute pumping for a^m b^m c^m.")
    refute_parser.add_argument("--m", type=int, default=5, help="Exponent m, also used as n.")
    refute_parser.add_argument("--imax", type=int, default=2, help="Try i = 0..IMAX per split.")
    refute_parser.add_argument("--json", action="store_true", help="Print the full report as JSON.")
    refute_parser.add_argument("--jobs", type=int, default=settings.jobs, help="Splits checked in parallel.")
    refute_parser.set_defaults(handler=cmd_refute_demo)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    try:
        settings = SettingsHelper()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=settings.get_log_level(), format=LOG_FORMAT)

    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 after --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if getattr(args, "max_len", 0) < 0 or getattr(args, "imax", 0) < 0 or getattr(args, "jobs", 1) < 1:
        print("error: --max-len and --imax must be non-negative, --jobs at least 1", file=sys.stderr)
        return EXIT_USAGE

    logger.debug(f"running {args.command} with settings {settings}")
    try:
        return args.handler(args, settings)
    except (GrammarFormatError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CflError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
