import pytest

from cfl_pumping.errors import EmptyLanguageError
from cfl_pumping.grammar import (
    Rule,
    Strategy,
    decide_produces_empty,
    enumerate_language,
    format_grammar,
    nonterminal,
    parse_grammar,
    terminal,
)
from cfl_pumping.transform import (
    CnfGrammar,
    CnfKind,
    add_fresh_start,
    binarize,
    check_cnf,
    isolate_terminals,
    remove_empty_rules,
    remove_inaccessible,
    remove_unit_rules,
    remove_useless,
    simplify,
    to_cnf,
    unit_closure,
)
from tests.conftest import CORPUS, corpus_grammar

S, A, B, C, D = (nonterminal(name) for name in "SABCD")
S1 = nonterminal("S'")
a, b, c = (terminal(name) for name in "abc")

PASSES = [add_fresh_start, remove_empty_rules, remove_unit_rules, remove_useless, remove_inaccessible,
          isolate_terminals, binarize, simplify, lambda g: to_cnf(g).base]
EQUIV_LEN = 10


def language(g, max_len):
    return enumerate_language(g, max_len, strategy=Strategy.MEMO)


### CNF checks

def test_check_cnf():
    assert check_cnf(parse_grammar("S -> A B\nA -> a\nB -> b")).kind is CnfKind.CNF
    assert check_cnf(parse_grammar("S -> _ | A B\nA -> a\nB -> b")).kind is CnfKind.CNF_WITH_EMPTY_RULE
    check = check_cnf(parse_grammar("S -> a S | a"))
    assert check.kind is CnfKind.NOT_CNF
    assert check.offending == Rule(S, (a, S))
    assert str(check) == "NotCnf(S -> a S)"


def test_empty_rule_needs_start_off_the_rhs():
    check = check_cnf(parse_grammar("S -> _ | S S | a"))
    assert check.kind is CnfKind.NOT_CNF
    assert check.offending == Rule(S)


def test_cnf_grammar_rejects_non_cnf():
    with pytest.raises(ValueError):
        CnfGrammar.from_grammar(parse_grammar("S -> a S | a"))
    with pytest.raises(ValueError):
        CnfGrammar(base=parse_grammar("S -> a"), has_empty_rule=True, fresh_start=S)


### Individual passes

def test_add_fresh_start():
    g = add_fresh_start(parse_grammar("S -> a"))
    assert g.start == S1
    assert Rule(S1, (S,)) in g.rules


def test_fresh_start_skips_taken_names():
    g = add_fresh_start(parse_grammar("S -> S' a | a\nS' -> b"))
    assert g.start == nonterminal("S''")


def test_remove_empty_rules_keeps_start_empty_rule():
    g = remove_empty_rules(parse_grammar("S -> a S b | _"))
    assert g.start == S1
    assert g.rules == {Rule(S1), Rule(S1, (S,)), Rule(S, (a, S, b)), Rule(S, (a, b))}


def test_remove_empty_rules_without_fresh_start():
    g = remove_empty_rules(parse_grammar("S -> A B\nA -> a | _\nB -> b"))
    assert g.start == S
    assert Rule(S, (A, B)) in g.rules
    assert Rule(S, (B,)) in g.rules
    assert not any(rule.is_empty for rule in g.rules)


def test_unit_closure():
    closure = unit_closure(parse_grammar("S -> A\nA -> B | a\nB -> b"))
    assert closure[S] == {S, A, B}
    assert closure[B] == {B}


@pytest.mark.parametrize("text", ["S -> A\nA -> a", "S -> A\nA -> S | a"])
def test_remove_unit_rules(text):
    assert remove_unit_rules(parse_grammar(text)).rules == {Rule(S, (a,)), Rule(A, (a,))}


def test_remove_useless():
    assert remove_useless(parse_grammar("S -> a | A B\nA -> a")).rules == {Rule(S, (a,)), Rule(A, (a,))}


def test_remove_useless_of_empty_language():
    with pytest.raises(EmptyLanguageError):
        remove_useless(parse_grammar("S -> S S"))
    with pytest.raises(EmptyLanguageError):
        to_cnf(parse_grammar("S -> a S"))


@pytest.mark.parametrize("text,expected", [
    ("S -> a\nB -> b", {Rule(S, (a,))}),
    ("S -> A\nA -> a\nC -> c", {Rule(S, (A,)), Rule(A, (a,))}),
])
def test_remove_inaccessible(text, expected):
    assert remove_inaccessible(parse_grammar(text)).rules == expected


def test_isolate_terminals_avoids_taken_names():
    g = isolate_terminals(parse_grammar("S -> a T_a\nT_a -> b"))
    proxy = nonterminal("T_a'")
    assert g.rules == {Rule(S, (proxy, nonterminal("T_a"))), Rule(proxy, (a,)), Rule(nonterminal("T_a"), (b,))}


def test_binarize_shares_suffixes():
    g = binarize(parse_grammar("S -> A B C | D B C\nA -> a\nB -> b\nC -> c\nD -> d"))
    x1 = nonterminal("X1")
    assert {Rule(S, (A, x1)), Rule(S, (D, x1)), Rule(x1, (B, C))} <= g.rules
    assert len(g.nonterminals) == 6


def test_binarize_long_rule():
    g = binarize(parse_grammar("S -> A B C D\nA -> a\nB -> b\nC -> c\nD -> d"))
    x1, x2 = nonterminal("X1"), nonterminal("X2")
    assert {Rule(S, (A, x1)), Rule(x1, (B, x2)), Rule(x2, (C, D))} <= g.rules


### Whole conversion

def test_to_cnf_small_cases():
    only_a = to_cnf(parse_grammar("S -> a"))
    assert only_a.base.rules == {Rule(S1, (a,))}
    assert not only_a.has_empty_rule
    only_empty = to_cnf(parse_grammar("S -> _"))
    assert only_empty.base.rules == {Rule(S1)}
    assert only_empty.has_empty_rule


def test_anbn_cnf_is_stable():
    cnf = to_cnf(corpus_grammar("anbn"))
    assert format_grammar(cnf.base) == (
        "start: S'\n"
        "S' -> T_a T_b | T_a X1\n"
        "S -> T_a T_b | T_a X1\n"
        "T_a -> a\n"
        "T_b -> b\n"
        "X1 -> S T_b\n"
    )
    assert cnf.nonterminal_count == 5
    assert cnf.fresh_start == S1


@pytest.mark.parametrize("name", CORPUS)
def test_cnf_shape(name):
    g = corpus_grammar(name)
    cnf = to_cnf(g)
    assert check_cnf(cnf.base).kind is not CnfKind.NOT_CNF
    assert not cnf.base.start_in_rhs()
    assert cnf.fresh_start not in g.nonterminals
    assert cnf.has_empty_rule == (() in language(g, 0)) == decide_produces_empty(g)


@pytest.mark.parametrize("name", [pytest.param(name, marks=pytest.mark.slow) if name == "arith" else name
                                  for name in CORPUS])
@pytest.mark.parametrize("transform", PASSES)
def test_passes_preserve_the_language(name, transform):
    g = corpus_grammar(name)
    assert language(transform(g), EQUIV_LEN) == language(g, EQUIV_LEN)


@pytest.mark.parametrize("name", CORPUS)
def test_cnf_is_deterministic(name):
    g = corpus_grammar(name)
    assert format_grammar(to_cnf(g).base) == format_grammar(to_cnf(g).base)
    assert parse_grammar(format_grammar(to_cnf(g).base)) == to_cnf(g).base
