"""
Grammar simplification passes and the Chomsky Normal Form conversion.

Every pass is a pure function Grammar -> Grammar preserving the generated language.
Fresh symbols follow one deterministic scheme so the output is reproducible:
``<start>'`` for a new start symbol, ``T_<a>`` for the proxy of terminal ``a`` and
``X<n>`` for binarization helpers, numbered in sorted-rule, left-to-right order.
A name already in use gets a ``'`` appended (``T_<a>``) or is skipped (``X<n>``).
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from cfl_pumping.errors import EmptyLanguageError
from cfl_pumping.grammar import (
    Grammar,
    Rule,
    SententialForm,
    Symbol,
    nonterminal,
    nullable_symbols,
    productive_symbols,
    reachable_symbols,
)

logger = logging.getLogger(__name__)


class CnfKind(str, Enum):
    CNF = "Cnf"
    CNF_WITH_EMPTY_RULE = "CnfWithEmptyRule"
    NOT_CNF = "NotCnf"


@dataclass(frozen=True)
class CnfCheck:
    kind: CnfKind
    offending: Rule | None = None

    def __str__(self):
        if self.offending is None:
            return self.kind.value
        return f"{self.kind.value}({self.offending})"


def is_cnf_rule(rule: Rule) -> bool:
    if len(rule.rhs) == 2:
        return rule.rhs[0].is_nonterminal and rule.rhs[1].is_nonterminal
    return len(rule.rhs) == 1 and rule.rhs[0].is_terminal


def check_cnf(g: Grammar) -> CnfCheck:
    """Classifies g; NotCnf carries the first offending rule in sorted order."""
    has_empty_rule = False
    start_in_rhs = g.start_in_rhs()
    for rule in g.sorted_rules:
        if is_cnf_rule(rule):
            continue
        if rule.is_empty and rule.lhs == g.start and not start_in_rhs:
            has_empty_rule = True
            continue
        return CnfCheck(CnfKind.NOT_CNF, rule)
    return CnfCheck(CnfKind.CNF_WITH_EMPTY_RULE if has_empty_rule else CnfKind.CNF)


@dataclass(frozen=True)
class CnfGrammar:
    base: Grammar
    has_empty_rule: bool
    fresh_start: Symbol

    def __post_init__(self):
        if self.fresh_start != self.base.start:
            raise ValueError(f"fresh start {self.fresh_start} is not the start of the grammar")
        check = check_cnf(self.base)
        if check.kind is CnfKind.NOT_CNF:
            raise ValueError(f"rule '{check.offending}' is not in Chomsky normal form")
        if self.base.start_in_rhs():
            raise ValueError(f"start symbol {self.fresh_start} occurs on a right-hand side")
        if self.has_empty_rule != (Rule(self.fresh_start) in self.base.rules):
            raise ValueError(f"has_empty_rule={self.has_empty_rule} disagrees with the rule set")

    @classmethod
    def from_grammar(cls, g: Grammar) -> "CnfGrammar":
        return cls(base=g, has_empty_rule=Rule(g.start) in g.rules, fresh_start=g.start)

    @property
    def nonterminal_count(self) -> int:
        return len(self.base.nonterminals)

    def __str__(self):
        return str(self.base)


def _fresh_symbol(base_name: str, taken: set[Symbol]) -> Symbol:
    name = base_name
    while nonterminal(name) in taken:
        name += "'"
    return nonterminal(name)


def _log_pass(name: str, before: Grammar, after: Grammar):
    logger.debug(f"{name}: {len(before.rules)} -> {len(after.rules)} rules, "
                 f"{len(before.nonterminals)} -> {len(after.nonterminals)} nonterminals")


def add_fresh_start(g: Grammar) -> Grammar:
    fresh = _fresh_symbol(f"{g.start.name}'", set(g.nonterminals))
    result = Grammar.from_rules(fresh, g.rules | {Rule(fresh, (g.start,))})
    _log_pass("add_fresh_start", g, result)
    return result


def _drop_nullable_variants(rhs: SententialForm, nullable: frozenset[Symbol]) -> Iterator[SententialForm]:
    choices = [((symbol,), ()) if symbol in nullable else ((symbol,),) for symbol in rhs]
    for picked in itertools.product(*choices):
        yield tuple(itertools.chain.from_iterable(picked))


def remove_empty_rules(g: Grammar) -> Grammar:
    """
    Removes every ε-rule. When the start symbol is nullable a single start -> ε
    survives; a fresh start is introduced first if the start occurs on a rhs, so
    the surviving ε-rule never feeds another rule.
    """
    if g.start_in_rhs():
        g = add_fresh_start(g)
    nullable = nullable_symbols(g)
    rules: set[Rule] = set()
    for rule in g.sorted_rules:
        for variant in _drop_nullable_variants(rule.rhs, nullable):
            if variant:
                rules.add(Rule(rule.lhs, variant))
    if g.start in nullable:
        rules.add(Rule(g.start))
    result = Grammar.from_rules(g.start, rules)
    _log_pass("remove_empty_rules", g, result)
    return result


def unit_closure(g: Grammar) -> dict[Symbol, frozenset[Symbol]]:
    """For each nonterminal A, every B with A =>* B through unit rules (A included)."""
    closure = {}
    for symbol in sorted(g.nonterminals):
        reached = {symbol}
        pending = [symbol]
        while pending:
            current = pending.pop()
            for rule in g.rules_for(current):
                if rule.is_unit and rule.rhs[0] not in reached:
                    reached.add(rule.rhs[0])
                    pending.append(rule.rhs[0])
        closure[symbol] = frozenset(reached)
    return closure


def remove_unit_rules(g: Grammar) -> Grammar:
    rules: set[Rule] = set()
    for symbol, targets in unit_closure(g).items():
        for target in targets:
            for rule in g.rules_for(target):
                if not rule.is_unit:
                    rules.add(Rule(symbol, rule.rhs))
    result = Grammar.from_rules(g.start, rules)
    _log_pass("remove_unit_rules", g, result)
    return result


def remove_useless(g: Grammar) -> Grammar:
    productive = productive_symbols(g)
    if g.start not in productive:
        logger.warning(f"start symbol {g.start} derives no terminal string")
        raise EmptyLanguageError(f"the language of the grammar starting at {g.start} is empty")
    rules = {rule for rule in g.rules
             if rule.lhs in productive and all(s.is_terminal or s in productive for s in rule.rhs)}
    result = Grammar.from_rules(g.start, rules)
    _log_pass("remove_useless", g, result)
    return result


def remove_inaccessible(g: Grammar) -> Grammar:
    reachable = reachable_symbols(g)
    result = Grammar.from_rules(g.start, (rule for rule in g.rules if rule.lhs in reachable))
    _log_pass("remove_inaccessible", g, result)
    return result


def isolate_terminals(g: Grammar) -> Grammar:
    """Replaces terminals inside right-hand sides of length >= 2 by T_<a> -> a proxies."""
    taken = set(g.nonterminals)
    proxies: dict[Symbol, Symbol] = {}
    rules: set[Rule] = set()
    for rule in g.sorted_rules:
        if len(rule.rhs) < 2:
            rules.add(rule)
            continue
        rhs = []
        for symbol in rule.rhs:
            if symbol.is_nonterminal:
                rhs.append(symbol)
                continue
            if symbol not in proxies:
                proxy = _fresh_symbol(f"T_{symbol.name}", taken)
                taken.add(proxy)
                proxies[symbol] = proxy
                rules.add(Rule(proxy, (symbol,)))
            rhs.append(proxies[symbol])
        rules.add(Rule(rule.lhs, tuple(rhs)))
    result = Grammar.from_rules(g.start, rules)
    _log_pass("isolate_terminals", g, result)
    return result


def binarize(g: Grammar) -> Grammar:
    """Splits right-hand sides longer than two; identical suffixes share one X<n>."""
    taken = set(g.nonterminals)
    numbers = itertools.count(1)
    helpers: dict[SententialForm, Symbol] = {}
    rules: set[Rule] = set()

    def helper_for(suffix: SententialForm) -> Symbol:
        if suffix in helpers:
            return helpers[suffix]
        helper = nonterminal(f"X{next(numbers)}")
        while helper in taken:
            helper = nonterminal(f"X{next(numbers)}")
        taken.add(helper)
        helpers[suffix] = helper
        if len(suffix) == 2:
            rules.add(Rule(helper, suffix))
        else:
            rules.add(Rule(helper, (suffix[0], helper_for(suffix[1:]))))
        return helper

    for rule in g.sorted_rules:
        if len(rule.rhs) <= 2:
            rules.add(rule)
        else:
            rules.add(Rule(rule.lhs, (rule.rhs[0], helper_for(rule.rhs[1:]))))
    result = Grammar.from_rules(g.start, rules)
    _log_pass("binarize", g, result)
    return result


def simplify(g: Grammar) -> Grammar:
    """ε-rules, unit rules, useless symbols, inaccessible symbols, in that order."""
    return remove_inaccessible(remove_useless(remove_unit_rules(remove_empty_rules(g))))


def to_cnf(g: Grammar) -> CnfGrammar:
    """
    Converts g to an equivalent CnfGrammar. Pass order: fresh start, ε-rules, unit
    rules, useless, inaccessible, terminal isolation, binarization. Raises
    EmptyLanguageError when L(g) is empty.
    """
    staged = add_fresh_start(g)
    for stage in (remove_empty_rules, remove_unit_rules, remove_useless,
                  remove_inaccessible, isolate_terminals, binarize):
        staged = stage(staged)
    cnf = CnfGrammar.from_grammar(staged)
    logger.info(f"CNF grammar has {len(cnf.base.rules)} rules and {cnf.nonterminal_count} nonterminals, "
                f"empty rule: {cnf.has_empty_rule}")
    return cnf
