import os
from itertools import product

import pytest

from cfl_pumping.grammar import Grammar, Sentence, load_grammar, terminal
from cfl_pumping.transform import CnfGrammar, to_cnf

script_dir = os.path.dirname(__file__)
GRAMMAR_DIR = os.path.join(script_dir, '../data/grammars')

CORPUS = ["anbn", "parens", "palindromes", "anbncm", "arith", "epsilon_heavy", "a_plus", "ambiguous"]
# grammars whose sentences in [n, n + 3] can all be listed and pumped
PUMPABLE = ["anbn", "a_plus", "ambiguous"]


def corpus_grammar(name: str) -> Grammar:
    return load_grammar(corpus_path(name))


def corpus_path(name: str) -> str:
    return os.path.join(GRAMMAR_DIR, f"{name}.cfg")


def word(text: str) -> Sentence:
    return tuple(terminal(ch) for ch in text)


def all_words(g: Grammar, max_len: int) -> list[Sentence]:
    alphabet = sorted(g.terminals)
    return [tuple(combo) for length in range(max_len + 1) for combo in product(alphabet, repeat=length)]


@pytest.fixture
def anbn() -> Grammar:
    return corpus_grammar("anbn")


@pytest.fixture
def anbn_cnf(anbn) -> CnfGrammar:
    return to_cnf(anbn)
