"""
The pumping pipeline for context-free languages.

decompose_sentence takes a CNF grammar and a long enough member sentence, builds
its CYK derivation tree, follows a maximal path, finds a nonterminal repeated
among the last k + 1 labels of that path, and cuts the tree at the two
occurrences into t1 (outer) and t2 (inner). The frontiers around those cuts give
the split u v w x y. verify_pumping re-derives u v^i w x^i y for a prefix of i
both by grafting pumped subtrees back into the tree and by running CYK.

refute_candidate is the contrapositive use: it tries every admissible split of a
sentence against an arbitrary membership predicate.
"""
import asyncio
import logging
from dataclasses import dataclass
from functools import partial
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence, TypeVar

from common.reports import (
    DecompositionModel,
    PumpReport,
    PumpRow,
    RefutationReport,
    RefutationRow,
    SplitModel,
)
from cfl_pumping.errors import (
    CflError,
    EmptyLanguageError,
    InvariantViolation,
    PreconditionViolated,
    PumpingConstantOverflow,
)
from cfl_pumping.grammar import Grammar, Sentence, Symbol, sentence_names, terminal
from cfl_pumping.parser import cyk_member, cyk_tree, validate_tree
from cfl_pumping.transform import CnfGrammar, to_cnf
from cfl_pumping.tree import (
    DerivationTree,
    TreeCode,
    code_of_path,
    decompose,
    find_duplicate,
    format_code,
    format_tree,
    frontier,
    height,
    label_at,
    longest_path,
    pump_tree,
    replace_at,
    split_code,
    subtree_at,
)

logger = logging.getLogger(__name__)

MAX_EXPONENT = 30
DEFAULT_I_MAX = 4
DEFAULT_REFUTE_I_MAX = 2

Membership = Callable[[Sentence], bool]

T = TypeVar("T")
R = TypeVar("R")


class Split(NamedTuple):
    u: Sentence
    v: Sentence
    w: Sentence
    x: Sentence
    y: Sentence

    def pumped(self, i: int) -> Sentence:
        return self.u + self.v * i + self.w + self.x * i + self.y

    def to_model(self) -> SplitModel:
        return SplitModel(u=sentence_names(self.u), v=sentence_names(self.v), w=sentence_names(self.w),
                          x=sentence_names(self.x), y=sentence_names(self.y))


@dataclass(frozen=True)
class Decomposition:
    sentence: Sentence
    u: Sentence
    v: Sentence
    w: Sentence
    x: Sentence
    y: Sentence
    repeated: Symbol
    # root -> t1
    outer_code: TreeCode
    # t1 -> t2
    inner_code: TreeCode
    n: int
    tree: DerivationTree

    @property
    def split(self) -> Split:
        return Split(self.u, self.v, self.w, self.x, self.y)

    def check_invariants(self):
        if self.u + self.v + self.w + self.x + self.y != self.sentence:
            raise InvariantViolation("u v w x y does not reassemble the sentence")
        if len(self.v) + len(self.x) < 1:
            raise InvariantViolation("v and x are both empty")
        if len(self.v) + len(self.w) + len(self.x) > self.n:
            raise InvariantViolation(f"|vwx| = {len(self.v) + len(self.w) + len(self.x)} exceeds n = {self.n}")
        if not self.inner_code:
            raise InvariantViolation("the inner code is empty")
        outer = decompose(self.tree, self.outer_code)
        inner = decompose(outer.subtree, self.inner_code) if outer is not None else None
        if outer is None or inner is None:
            raise InvariantViolation("the codes do not address subtrees of the witness tree")
        if (outer.left, outer.right, inner.left, inner.right, frontier(inner.subtree)) != \
                (self.u, self.y, self.v, self.x, self.w):
            raise InvariantViolation("the split disagrees with the frontiers of the witness tree")
        if not (outer.subtree.label == inner.subtree.label == self.repeated):
            raise InvariantViolation(f"t1 and t2 are not both rooted at {self.repeated}")

    def to_model(self) -> DecompositionModel:
        return DecompositionModel(sentence=sentence_names(self.sentence),
                                  split=self.split.to_model(),
                                  repeated=self.repeated.name,
                                  outer_code=[d.value for d in self.outer_code],
                                  inner_code=[d.value for d in self.inner_code],
                                  n=self.n,
                                  tree=format_tree(self.tree))


def _run_ordered(fn: Callable[[T], R], items: Iterable[T], jobs: int) -> list[R]:
    items = list(items)
    if jobs <= 1:
        return [fn(item) for item in items]
    return asyncio.run(_gather_ordered(fn, items, jobs))


async def _gather_ordered(fn: Callable[[T], R], items: list[T], jobs: int) -> list[R]:
    semaphore = asyncio.Semaphore(jobs)

    async def one(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(fn, item)

    # gather keeps submission order
    return list(await asyncio.gather(*(one(item) for item in items)))


def pumping_constant(g: CnfGrammar) -> int:
    k = g.nonterminal_count
    if k > MAX_EXPONENT:
        raise PumpingConstantOverflow(f"2^{k} is beyond the verifiable range (k must be at most {MAX_EXPONENT})")
    return 2 ** k


def decompose_sentence(g: CnfGrammar, s: Sentence) -> Decomposition:
    n = pumping_constant(g)
    if len(s) < n:
        raise PreconditionViolated(f"sentence of length {len(s)} is shorter than the pumping constant {n}")
    t = cyk_tree(g, s)
    if t is None:
        raise PreconditionViolated("the sentence is not in the language of the grammar")

    k = g.nonterminal_count
    z = longest_path(t)
    if len(z) < k + 2:
        raise InvariantViolation(f"maximal path of length {len(z)} is shorter than k + 2 = {k + 2}")

    # z = lead + r + [terminal] with |r| = k + 1
    lead = len(z) - (k + 2)
    r = z[lead:-1]
    duplicate = find_duplicate(r, sorted(g.base.nonterminals))
    first = lead + len(duplicate.before)
    second = first + 1 + len(duplicate.between)
    code = code_of_path(t, z)

    if first == 0:
        outer_code, t1, u, y, rest = (), t, (), (), code
    else:
        outer = split_code(t, z[:first], z[first:], code)
        outer_code, t1, u, y, rest = outer.c1, outer.subtree, outer.left, outer.right, outer.c2
    inner = split_code(t1, z[first:second], z[second:], rest)

    if height(t1) > k + 1:
        raise InvariantViolation(f"t1 has height {height(t1)}, above k + 1 = {k + 1}")

    d = Decomposition(sentence=tuple(s), u=u, v=inner.left, w=frontier(inner.subtree), x=inner.right, y=y,
                      repeated=duplicate.symbol, outer_code=outer_code, inner_code=inner.c1, n=n, tree=t)
    d.check_invariants()
    logger.info(f"decomposed a sentence of length {len(s)} at {duplicate.symbol}: |u|={len(d.u)} |v|={len(d.v)} "
                f"|w|={len(d.w)} |x|={len(d.x)} |y|={len(d.y)}, codes {format_code(outer_code)}/{format_code(inner.c1)}")
    return d


def pump(d: Decomposition, i: int) -> Sentence:
    return d.split.pumped(i)


def verify_pumping(g: CnfGrammar, d: Decomposition, i_max: int = DEFAULT_I_MAX, jobs: int = 1) -> PumpReport:
    """
    Checks u v^i w x^i y for every i in [0, i_max] two ways: by tree surgery
    (pumped t1 grafted at the outer code, validated against g and still
    rooted at the repeated nonterminal there) and by CYK.
    Failures are reported in the rows, never raised.
    """
    t1 = subtree_at(d.tree, d.outer_code)

    def check_row(i: int) -> PumpRow:
        sentence = pump(d, i)
        try:
            grafted = replace_at(d.tree, d.outer_code, pump_tree(t1, d.inner_code, i))
            surgery = (validate_tree(g, grafted)
                       and grafted.label == g.fresh_start
                       and label_at(grafted, d.outer_code) == d.repeated
                       and frontier(grafted) == sentence)
        except CflError as e:
            logger.warning(f"tree surgery failed for i={i}: {e}")
            surgery = False
        cyk = cyk_member(g, sentence)
        return PumpRow(i=i, sentence=sentence_names(sentence), member=surgery and cyk, surgery=surgery, cyk=cyk)

    rows = _run_ordered(check_row, range(i_max + 1), jobs)
    report = PumpReport(rows=rows, overall=all(row.member for row in rows))
    if not report.routes_agree:
        logger.warning("tree surgery and CYK disagree on some pumped sentence")
    return report


### Refutation

def admissible_splits(s: Sentence, n: int) -> Iterator[Split]:
    """Every s = u v w x y with |vx| >= 1 and |vwx| <= n, ordered by where vwx starts, then where it ends."""
    length = len(s)
    for a in range(length + 1):
        for d in range(a, min(length, a + n) + 1):
            for b in range(a, d + 1):
                for c in range(b, d + 1):
                    if (b - a) + (d - c) >= 1:
                        yield Split(s[:a], s[a:b], s[b:c], s[c:d], s[d:])


def refute_candidate(member: Membership, s: Sentence, n: int,
                     i_max: int = DEFAULT_REFUTE_I_MAX, jobs: int = 1) -> RefutationReport:
    """
    Refuted means every admissible split leaves the language for some i <= i_max.
    NotRefuted is inconclusive: the pumping property does not characterise
    context-free languages.
    """
    s = tuple(s)
    if n < 1:
        raise PreconditionViolated(f"n must be positive, got {n}")
    if len(s) < n:
        raise PreconditionViolated(f"sentence of length {len(s)} is shorter than n = {n}")
    if not member(s):
        raise PreconditionViolated("the sentence is not accepted by the membership predicate")

    def check_split(split: Split) -> RefutationRow:
        failing = next((i for i in range(i_max + 1) if not member(split.pumped(i))), None)
        return RefutationRow(split=split.to_model(), failing_i=failing)

    rows = _run_ordered(check_split, admissible_splits(s, n), jobs)
    surviving = sum(1 for row in rows if row.failing_i is None)
    verdict = "Refuted" if surviving == 0 else "NotRefuted"
    logger.info(f"{len(rows)} admissible splits, {surviving} survive pumping up to i={i_max}: {verdict}")
    return RefutationReport(verdict=verdict, sentence=sentence_names(s), n=n, i_max=i_max,
                            rows=rows, surviving=surviving)


def power_language(letters: Sequence[str]) -> Membership:
    """Membership in { letters[0]^i letters[1]^i ... | i >= 1 }."""
    letters = tuple(letters)

    def member(s: Sentence) -> bool:
        names = [symbol.name for symbol in s]
        if not names or len(names) % len(letters):
            return False
        i = len(names) // len(letters)
        return names == [letter for letter in letters for _ in range(i)]

    return member


def power_sentence(letters: Sequence[str], m: int) -> Sentence:
    return tuple(terminal(letter) for letter in letters for _ in range(m))


def refute_power_language(letters: Sequence[str], m: int,
                          i_max: int = DEFAULT_REFUTE_I_MAX, jobs: int = 1) -> RefutationReport:
    """Tries to refute { a^i b^i c^i ... } with the sentence a^m b^m c^m ... and n = m."""
    return refute_candidate(power_language(letters), power_sentence(letters, m), m, i_max=i_max, jobs=jobs)


def lang_of_grammar(g: Grammar) -> Membership:
    """Membership predicate of L(g), decided by CYK on the CNF of g."""
    try:
        cnf = to_cnf(g)
    except EmptyLanguageError:
        return lambda s: False
    return partial(cyk_member, cnf)
