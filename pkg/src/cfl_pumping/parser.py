"""
CYK membership and derivation-tree extraction for CNF grammars.

The chart keeps one backpointer per (start, span, nonterminal). Ties are broken
by the lowest rule index in sorted-rule order, then by the shortest left split,
so ambiguous grammars always yield the same tree.
"""
import logging
from typing import NamedTuple, Optional

from cfl_pumping.grammar import Rule, Sentence, Symbol
from cfl_pumping.transform import CnfGrammar
from cfl_pumping.tree import DerivationTree, Leaf, Node

logger = logging.getLogger(__name__)


class Backpointer(NamedTuple):
    rule_index: int
    # length of the left part; 0 for terminal rules
    split: int


Chart = list[list[dict[Symbol, Backpointer]]]


def build_chart(g: CnfGrammar, s: Sentence) -> Chart:
    """chart[i][span] maps each nonterminal deriving s[i:i+span] to its backpointer."""
    n = len(s)
    rules = g.base.sorted_rules
    chart: Chart = [[{} for _ in range(n + 1)] for _ in range(n)]

    terminal_rules = [(index, rule) for index, rule in enumerate(rules) if len(rule.rhs) == 1]
    binary_rules = [(index, rule) for index, rule in enumerate(rules) if len(rule.rhs) == 2]

    for i, symbol in enumerate(s):
        cell = chart[i][1]
        for index, rule in terminal_rules:
            if rule.rhs[0] == symbol and rule.lhs not in cell:
                cell[rule.lhs] = Backpointer(index, 0)

    for span in range(2, n + 1):
        for i in range(n - span + 1):
            cell = chart[i][span]
            for index, rule in binary_rules:
                if rule.lhs in cell:
                    continue
                left, right = rule.rhs
                for split in range(1, span):
                    if left in chart[i][split] and right in chart[i + split][span - split]:
                        cell[rule.lhs] = Backpointer(index, split)
                        break
    return chart


def cyk_member(g: CnfGrammar, s: Sentence) -> bool:
    if not s:
        return g.has_empty_rule
    return g.fresh_start in build_chart(g, s)[0][len(s)]


def cyk_tree(g: CnfGrammar, s: Sentence) -> Optional[DerivationTree]:
    """A derivation tree rooted at the fresh start with frontier s, or None."""
    if not s:
        return None
    chart = build_chart(g, s)
    if g.fresh_start not in chart[0][len(s)]:
        return None
    rules = g.base.sorted_rules

    def build(i: int, span: int, label: Symbol) -> DerivationTree:
        pointer = chart[i][span][label]
        if span == 1:
            return Leaf(label, s[i])
        rule = rules[pointer.rule_index]
        return Node(label,
                    build(i, pointer.split, rule.rhs[0]),
                    build(i + pointer.split, span - pointer.split, rule.rhs[1]))

    tree = build(0, len(s), g.fresh_start)
    logger.debug(f"extracted a derivation tree for a sentence of length {len(s)}")
    return tree


def validate_tree(g: CnfGrammar, t: DerivationTree) -> bool:
    """True iff every node and leaf of t is licensed by a rule of g."""
    rules = g.base.rules
    stack = [t]
    while stack:
        current = stack.pop()
        if isinstance(current, Leaf):
            if Rule(current.label, (current.terminal,)) not in rules:
                return False
            continue
        if Rule(current.label, (current.left.label, current.right.label)) not in rules:
            return False
        stack.extend((current.left, current.right))
    return True
