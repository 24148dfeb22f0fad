"""
Context-free grammars: symbols, rules, the grammar record, the text format and a
brute-force derivation oracle.

Grammar file format (UTF-8, line oriented)::

    # comment
    start: S                 optional, must come before the first rule
    S -> a S b | a b         alternatives separated by '|'
    A -> _                   '_' is the empty alternative
    B -> 'X' y               quotes force a terminal

Tokens starting with an uppercase letter are nonterminals, everything else is a
terminal. Without a start line the lhs of the first rule is the start symbol.
"""
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, total_ordering
from itertools import groupby
from pathlib import Path
from typing import Iterable, Iterator

from cfl_pumping.errors import (
    EmptyGrammarError,
    FormLengthCapExceeded,
    GrammarSyntaxError,
    OracleBudgetExceeded,
    UndeclaredStartError,
)

logger = logging.getLogger(__name__)

ARROW = "->"
EPSILON_TOKEN = "_"
START_PREFIX = "start:"
QUOTE = "'"
RESERVED_CHARS = frozenset("|#")

DEFAULT_NODE_BUDGET = 2_000_000


class SymbolKind(str, Enum):
    NONTERMINAL = "nonterminal"
    TERMINAL = "terminal"


@total_ordering
@dataclass(frozen=True)
class Symbol:
    kind: SymbolKind
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("symbol name must not be empty")
        if any(ch.isspace() or ch in RESERVED_CHARS for ch in self.name):
            raise ValueError(f"symbol name {self.name!r} contains whitespace or reserved punctuation")
        if self.kind is SymbolKind.NONTERMINAL and not self.name[0].isupper():
            raise ValueError(f"nonterminal {self.name!r} must start with an uppercase letter")
        if self.kind is SymbolKind.TERMINAL and QUOTE in self.name:
            raise ValueError(f"terminal {self.name!r} must not contain a quote")

    @property
    def is_terminal(self) -> bool:
        return self.kind is SymbolKind.TERMINAL

    @property
    def is_nonterminal(self) -> bool:
        return self.kind is SymbolKind.NONTERMINAL

    def to_token(self) -> str:
        """Spelling of the symbol in the grammar file format."""
        if self.is_terminal and (self.name[0].isupper() or self.name == EPSILON_TOKEN):
            return f"{QUOTE}{self.name}{QUOTE}"
        return self.name

    def __lt__(self, other: "Symbol") -> bool:
        if not isinstance(other, Symbol):
            return NotImplemented
        return (self.kind.value, self.name) < (other.kind.value, other.name)

    def __str__(self):
        return self.name


def nonterminal(name: str) -> Symbol:
    return Symbol(SymbolKind.NONTERMINAL, name)


def terminal(name: str) -> Symbol:
    return Symbol(SymbolKind.TERMINAL, name)


# A sentential form may mix both kinds and may be empty; a sentence is all terminals.
SententialForm = tuple[Symbol, ...]
Sentence = tuple[Symbol, ...]


@total_ordering
@dataclass(frozen=True)
class Rule:
    lhs: Symbol
    rhs: SententialForm = ()

    def __post_init__(self):
        if not self.lhs.is_nonterminal:
            raise ValueError(f"rule lhs {self.lhs} must be a nonterminal")
        object.__setattr__(self, "rhs", tuple(self.rhs))

    @property
    def is_empty(self) -> bool:
        return not self.rhs

    @property
    def is_unit(self) -> bool:
        return len(self.rhs) == 1 and self.rhs[0].is_nonterminal

    def __lt__(self, other: "Rule") -> bool:
        if not isinstance(other, Rule):
            return NotImplemented
        return (self.lhs, self.rhs) < (other.lhs, other.rhs)

    def __str__(self):
        return f"{self.lhs.to_token()} {ARROW} {format_alternative(self.rhs)}"


@dataclass(frozen=True)
class Grammar:
    start: Symbol
    rules: frozenset[Rule]
    nonterminals: frozenset[Symbol]
    terminals: frozenset[Symbol]

    def __post_init__(self):
        if not self.start.is_nonterminal:
            raise ValueError(f"start symbol {self.start} must be a nonterminal")
        if self.start not in self.nonterminals:
            raise ValueError(f"start symbol {self.start} missing from the nonterminal inventory")
        for rule in self.rules:
            for symbol in (rule.lhs, *rule.rhs):
                inventory = self.terminals if symbol.is_terminal else self.nonterminals
                if symbol not in inventory:
                    raise ValueError(f"symbol {symbol} of rule '{rule}' missing from the inventory")

    @classmethod
    def from_rules(cls, start: Symbol, rules: Iterable[Rule]) -> "Grammar":
        """Builds a grammar whose inventories are the mentioned symbols plus the start."""
        rule_set = frozenset(rules)
        mentioned = {start}
        for rule in rule_set:
            mentioned.add(rule.lhs)
            mentioned.update(rule.rhs)
        return cls(start=start,
                   rules=rule_set,
                   nonterminals=frozenset(s for s in mentioned if s.is_nonterminal),
                   terminals=frozenset(s for s in mentioned if s.is_terminal))

    @cached_property
    def sorted_rules(self) -> tuple[Rule, ...]:
        return tuple(sorted(self.rules))

    @cached_property
    def rules_by_lhs(self) -> dict[Symbol, tuple[Rule, ...]]:
        return {lhs: tuple(group) for lhs, group in groupby(self.sorted_rules, key=lambda r: r.lhs)}

    def rules_for(self, lhs: Symbol) -> tuple[Rule, ...]:
        return self.rules_by_lhs.get(lhs, ())

    def start_in_rhs(self) -> bool:
        return any(self.start in rule.rhs for rule in self.rules)

    def __str__(self):
        return format_grammar(self)


### Text format

def _syntax_error_on(number: int, err: ValueError) -> GrammarSyntaxError:
    return GrammarSyntaxError(number, str(err))


def _parse_symbol(token: str, number: int) -> Symbol:
    try:
        if token.startswith(QUOTE):
            if len(token) < 3 or not token.endswith(QUOTE):
                raise GrammarSyntaxError(number, f"unterminated quoted terminal {token}")
            return terminal(token[1:-1])
        if token[0].isupper():
            return nonterminal(token)
        return terminal(token)
    except ValueError as e:
        raise _syntax_error_on(number, e) from e


def _parse_alternative(text: str, number: int) -> SententialForm:
    tokens = text.split()
    if not tokens:
        raise GrammarSyntaxError(number, f"empty alternative, write {EPSILON_TOKEN} for the empty string")
    if EPSILON_TOKEN in tokens:
        if len(tokens) > 1:
            raise GrammarSyntaxError(number, f"{EPSILON_TOKEN} must be the only symbol of its alternative")
        return ()
    return tuple(_parse_symbol(token, number) for token in tokens)


def _parse_nonterminal(token: str, number: int, what: str) -> Symbol:
    if len(token.split()) != 1 or not token[0].isupper():
        raise GrammarSyntaxError(number, f"{what} must be a single nonterminal, got {token!r}")
    try:
        return nonterminal(token)
    except ValueError as e:
        raise _syntax_error_on(number, e) from e


def parse_grammar(text: str) -> Grammar:
    start: Symbol | None = None
    first_lhs: Symbol | None = None
    rules: set[Rule] = set()

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith(START_PREFIX):
            if start is not None or first_lhs is not None:
                raise GrammarSyntaxError(number, "the start declaration must be the first non-comment line")
            start = _parse_nonterminal(line[len(START_PREFIX):].strip(), number, "start")
            continue
        lhs_text, arrow, rhs_text = line.partition(ARROW)
        if not arrow:
            raise GrammarSyntaxError(number, f"expected 'NT {ARROW} alternatives'")
        lhs = _parse_nonterminal(lhs_text.strip(), number, "rule lhs") if lhs_text.strip() else None
        if lhs is None:
            raise GrammarSyntaxError(number, "missing rule lhs")
        if first_lhs is None:
            first_lhs = lhs
        for alternative in rhs_text.split("|"):
            rules.add(Rule(lhs, _parse_alternative(alternative, number)))

    if not rules:
        raise EmptyGrammarError("grammar has no rules")
    if start is None:
        start = first_lhs
    elif not any(start == rule.lhs or start in rule.rhs for rule in rules):
        raise UndeclaredStartError(f"start symbol {start} does not occur in any rule")

    grammar = Grammar.from_rules(start, rules)
    logger.debug(f"parsed grammar: start {grammar.start}, {len(grammar.rules)} rules, "
                 f"{len(grammar.nonterminals)} nonterminals, {len(grammar.terminals)} terminals")
    return grammar


def load_grammar(path: str | Path) -> Grammar:
    return parse_grammar(Path(path).read_text(encoding="utf-8"))


def format_alternative(rhs: SententialForm) -> str:
    if not rhs:
        return EPSILON_TOKEN
    return " ".join(symbol.to_token() for symbol in rhs)


def format_grammar(g: Grammar) -> str:
    """Canonical text form; parse_grammar(format_grammar(g)) == g."""
    lines = [f"{START_PREFIX} {g.start.to_token()}"]
    order = [g.start] + sorted(lhs for lhs in g.rules_by_lhs if lhs != g.start)
    for lhs in order:
        alternatives = [format_alternative(rule.rhs) for rule in g.rules_for(lhs)]
        if alternatives:
            lines.append(f"{lhs.to_token()} {ARROW} {' | '.join(alternatives)}")
    return "\n".join(lines) + "\n"


def parse_sentence(text: str, tokens: bool = False) -> Sentence:
    """Single-character terminals by default, whitespace separated names with tokens=True."""
    names = text.split() if tokens else [ch for ch in text if not ch.isspace()]
    return tuple(terminal(name) for name in names)


def format_sentence(s: Sentence, empty: str = "ε") -> str:
    if not s:
        return empty
    separator = "" if all(len(symbol.name) == 1 for symbol in s) else " "
    return separator.join(symbol.name for symbol in s)


def sentence_names(s: Sentence) -> list[str]:
    return [symbol.name for symbol in s]


### Fixpoints and decision procedures

def nullable_symbols(g: Grammar) -> frozenset[Symbol]:
    nullable: set[Symbol] = set()
    changed = True
    while changed:
        changed = False
        for rule in g.sorted_rules:
            if rule.lhs not in nullable and all(symbol in nullable for symbol in rule.rhs):
                nullable.add(rule.lhs)
                changed = True
    return frozenset(nullable)


def productive_symbols(g: Grammar) -> frozenset[Symbol]:
    """Nonterminals deriving at least one all-terminal string."""
    productive: set[Symbol] = set()
    changed = True
    while changed:
        changed = False
        for rule in g.sorted_rules:
            if rule.lhs in productive:
                continue
            if all(symbol.is_terminal or symbol in productive for symbol in rule.rhs):
                productive.add(rule.lhs)
                changed = True
    return frozenset(productive)


def reachable_symbols(g: Grammar) -> frozenset[Symbol]:
    """Symbols of either kind reachable from the start symbol."""
    reached = {g.start}
    queue = deque([g.start])
    while queue:
        current = queue.popleft()
        for rule in g.rules_for(current):
            for symbol in rule.rhs:
                if symbol not in reached:
                    reached.add(symbol)
                    if symbol.is_nonterminal:
                        queue.append(symbol)
    return frozenset(reached)


def minimal_yield_lengths(g: Grammar) -> dict[Symbol, int]:
    """Shortest terminal yield per productive nonterminal."""
    best: dict[Symbol, int] = {}
    changed = True
    while changed:
        changed = False
        for rule in g.sorted_rules:
            if any(symbol.is_nonterminal and symbol not in best for symbol in rule.rhs):
                continue
            length = sum(1 if symbol.is_terminal else best[symbol] for symbol in rule.rhs)
            if length < best.get(rule.lhs, length + 1):
                best[rule.lhs] = length
                changed = True
    return best


def decide_produces_empty(g: Grammar) -> bool:
    return g.start in nullable_symbols(g)


def decide_produces_non_empty(g: Grammar) -> bool:
    productive = productive_symbols(g)
    reachable = reachable_symbols(g)
    # nonterminals that can yield a terminal string of length >= 1
    non_empty: set[Symbol] = set()
    changed = True
    while changed:
        changed = False
        for rule in g.sorted_rules:
            if rule.lhs in non_empty or rule.lhs not in reachable:
                continue
            if not all(symbol.is_terminal or symbol in productive for symbol in rule.rhs):
                continue
            if any(symbol.is_terminal or symbol in non_empty for symbol in rule.rhs):
                non_empty.add(rule.lhs)
                changed = True
    return g.start in non_empty


### Enumeration oracle

class Strategy(str, Enum):
    BFS = "bfs"
    MEMO = "memo"


def _yield_lower_bound(form: SententialForm, shortest: dict[Symbol, int]) -> float:
    total = 0
    for symbol in form:
        if symbol.is_terminal:
            total += 1
        elif symbol in shortest:
            total += shortest[symbol]
        else:
            return float("inf")
    return total


def _enumerate_bfs(g: Grammar, max_len: int, node_budget: int, extra_length: int | None) -> frozenset[Sentence]:
    shortest = minimal_yield_lengths(g)
    extra = len(g.nonterminals) if extra_length is None else extra_length
    form_cap = max_len + extra
    start_form: SententialForm = (g.start,)
    if _yield_lower_bound(start_form, shortest) > max_len:
        return frozenset()

    seen = {start_form}
    queue = deque([start_form])
    found: set[Sentence] = set()
    while queue:
        form = queue.popleft()
        position = next((i for i, symbol in enumerate(form) if symbol.is_nonterminal), None)
        if position is None:
            found.add(form)
            continue
        prefix, head, suffix = form[:position], form[position], form[position + 1:]
        # leftmost expansion reaches every sentence
        for rule in g.rules_for(head):
            successor = prefix + rule.rhs + suffix
            if successor in seen or _yield_lower_bound(successor, shortest) > max_len:
                continue
            if len(successor) > form_cap:
                logger.warning(f"sentential form of length {len(successor)} exceeds the cap {form_cap}")
                raise FormLengthCapExceeded(
                    f"a sentential form of length {len(successor)} can still yield a sentence of length <= {max_len} "
                    f"but exceeds max_len + {extra}; raise the extra form length or use the memo strategy")
            seen.add(successor)
            if len(seen) > node_budget:
                logger.warning(f"oracle budget of {node_budget} sentential forms exhausted at max_len {max_len}")
                raise OracleBudgetExceeded(
                    f"more than {node_budget} sentential forms explored; grammar too generative for max_len {max_len}")
            queue.append(successor)
    logger.debug(f"bfs oracle explored {len(seen)} forms, found {len(found)} sentences")
    return frozenset(found)


def _expansions(rhs: SententialForm, length: int,
                table: dict[Symbol, list[set[Sentence]]]) -> Iterator[Sentence]:
    if not rhs:
        if length == 0:
            yield ()
        return
    head, rest = rhs[0], rhs[1:]
    if head.is_terminal:
        if length >= 1:
            for tail in list(_expansions(rest, length - 1, table)):
                yield (head,) + tail
        return
    for head_length in range(length + 1):
        heads = list(table[head][head_length])
        if not heads:
            continue
        tails = list(_expansions(rest, length - head_length, table))
        for prefix in heads:
            for tail in tails:
                yield prefix + tail


def _enumerate_memo(g: Grammar, max_len: int, node_budget: int) -> frozenset[Sentence]:
    table: dict[Symbol, list[set[Sentence]]] = {
        symbol: [set() for _ in range(max_len + 1)] for symbol in g.nonterminals
    }
    entries = 0
    for length in range(max_len + 1):
        # same-length entries feed each other through unit and ε rules
        changed = True
        while changed:
            changed = False
            for rule in g.sorted_rules:
                bucket = table[rule.lhs][length]
                for sentence in _expansions(rule.rhs, length, table):
                    if sentence in bucket:
                        continue
                    bucket.add(sentence)
                    changed = True
                    entries += 1
                    if entries > node_budget:
                        logger.warning(f"memo oracle budget of {node_budget} entries exhausted")
                        raise OracleBudgetExceeded(
                            f"more than {node_budget} table entries; grammar too generative for max_len {max_len}")
    logger.debug(f"memo oracle tabulated {entries} entries")
    return frozenset(s for bucket in table[g.start] for s in bucket)


def enumerate_language(g: Grammar, max_len: int, *,
                       strategy: Strategy = Strategy.BFS,
                       node_budget: int = DEFAULT_NODE_BUDGET,
                       extra_length: int | None = None) -> frozenset[Sentence]:
    """
    Returns every sentence of L(g) with at most max_len terminals.

    BFS walks leftmost sentential forms, pruning forms that cannot yield a short
    enough sentence. A surviving form longer than max_len + extra_length
    (extra_length defaults to the nonterminal count) raises FormLengthCapExceeded.
    MEMO tabulates, per nonterminal and exact length, the sentences it derives.
    Both raise OracleBudgetExceeded past node_budget.
    """
    if max_len < 0:
        raise ValueError(f"max_len must be non-negative, got {max_len}")
    if Strategy(strategy) is Strategy.BFS:
        return _enumerate_bfs(g, max_len, node_budget, extra_length)
    return _enumerate_memo(g, max_len, node_budget)
