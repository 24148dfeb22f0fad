"""
Binary derivation trees for CNF grammars and the structural operations the
pumping argument is built from: heights, frontiers, root-to-leaf paths, direction
codes, the pigeonhole search on paths, decomposition at a code and subtree surgery.

Trees are immutable; every operation returns new values. A code is a tuple of
directions read from the root, the empty code addressing the root itself.
"""
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Optional, Sequence

from cfl_pumping.errors import (
    CodePathMismatch,
    InvalidCodeError,
    InvariantViolation,
    NoDuplicateError,
    PathNotFoundError,
    PumpPreconditionError,
)
from cfl_pumping.grammar import Sentence, Symbol


class Direction(str, Enum):
    LEFT = "L"
    RIGHT = "R"


TreeCode = tuple[Direction, ...]
# nonterminal labels from the root down, closed by the terminal of a leaf
TreePath = tuple[Symbol, ...]


@dataclass(frozen=True)
class Leaf:
    label: Symbol
    terminal: Symbol

    def __post_init__(self):
        if not self.label.is_nonterminal or not self.terminal.is_terminal:
            raise ValueError(f"leaf needs a nonterminal label and a terminal, got {self.label}, {self.terminal}")


@dataclass(frozen=True)
class Node:
    label: Symbol
    left: "DerivationTree"
    right: "DerivationTree"

    def __post_init__(self):
        if not self.label.is_nonterminal:
            raise ValueError(f"node label {self.label} must be a nonterminal")


DerivationTree = Leaf | Node


def format_code(c: TreeCode) -> str:
    return "".join(direction.value for direction in c)


### Measures

def root(t: DerivationTree) -> Symbol:
    return t.label


def height(t: DerivationTree) -> int:
    if isinstance(t, Leaf):
        return 1
    return 1 + max(height(t.left), height(t.right))


def frontier(t: DerivationTree) -> Sentence:
    out = []
    stack = [t]
    while stack:
        current = stack.pop()
        if isinstance(current, Leaf):
            out.append(current.terminal)
        else:
            stack.append(current.right)
            stack.append(current.left)
    return tuple(out)


def nonterminals_of(t: DerivationTree) -> frozenset[Symbol]:
    labels = set()
    stack = [t]
    while stack:
        current = stack.pop()
        labels.add(current.label)
        if isinstance(current, Node):
            stack.extend((current.left, current.right))
    return frozenset(labels)


def node_codes(t: DerivationTree) -> Iterator[TreeCode]:
    """Every code addressing a node of t, in preorder."""
    stack: list[tuple[DerivationTree, TreeCode]] = [(t, ())]
    while stack:
        current, code = stack.pop()
        yield code
        if isinstance(current, Node):
            stack.append((current.right, code + (Direction.RIGHT,)))
            stack.append((current.left, code + (Direction.LEFT,)))


### Paths and codes

def is_path_shaped(p: Sequence[Symbol]) -> bool:
    return len(p) >= 2 and p[-1].is_terminal and all(s.is_nonterminal for s in p[:-1])


def longest_path(t: DerivationTree) -> TreePath:
    """A root-to-leaf path of length height(t) + 1, preferring the left child on ties."""
    path = []
    current = t
    while isinstance(current, Node):
        path.append(current.label)
        current = current.left if height(current.left) >= height(current.right) else current.right
    path.extend((current.label, current.terminal))
    return tuple(path)


def subtree_at(t: DerivationTree, c: TreeCode) -> DerivationTree:
    current = t
    for depth, direction in enumerate(c):
        if not isinstance(current, Node):
            raise InvalidCodeError(f"code {format_code(c)} walks past a leaf at depth {depth}")
        current = current.left if direction is Direction.LEFT else current.right
    return current


def label_at(t: DerivationTree, c: TreeCode) -> Optional[Symbol]:
    try:
        return subtree_at(t, c).label
    except InvalidCodeError:
        return None


def path_of_code(t: DerivationTree, c: TreeCode) -> Optional[TreePath]:
    """Labels visited by following c; None unless c ends exactly at a leaf."""
    labels = []
    current = t
    for direction in c:
        if not isinstance(current, Node):
            return None
        labels.append(current.label)
        current = current.left if direction is Direction.LEFT else current.right
    if not isinstance(current, Leaf):
        return None
    labels.extend((current.label, current.terminal))
    return tuple(labels)


def code_realizes_path(t: DerivationTree, p: Sequence[Symbol], c: TreeCode) -> bool:
    return path_of_code(t, c) == tuple(p)


def _search_path(t: DerivationTree, p: TreePath, index: int) -> Optional[list[Direction]]:
    if index >= len(p) or t.label != p[index]:
        return None
    if isinstance(t, Leaf):
        return [] if index + 2 == len(p) and p[index + 1] == t.terminal else None
    for direction, child in ((Direction.LEFT, t.left), (Direction.RIGHT, t.right)):
        rest = _search_path(child, p, index + 1)
        if rest is not None:
            return [direction] + rest
    return None


def code_of_path(t: DerivationTree, p: Sequence[Symbol]) -> TreeCode:
    """The leftmost code whose replay visits exactly the labels of p."""
    path = tuple(p)
    found = _search_path(t, path, 0) if is_path_shaped(path) else None
    if found is None:
        raise PathNotFoundError(f"{' '.join(map(str, path))} is not a root-to-leaf path of the tree")
    return tuple(found)


### Pigeonhole

class Duplicate(NamedTuple):
    symbol: Symbol
    before: tuple[Symbol, ...]
    between: tuple[Symbol, ...]
    after: tuple[Symbol, ...]


def find_duplicate(xs: Sequence[Symbol], universe: Sequence[Symbol]) -> Duplicate:
    """
    Splits xs as before + [d] + between + [d] + after.

    d is the first symbol (by first occurrence) that occurs twice; it is paired
    with its last occurrence. Succeeds whenever xs repeats a symbol, which
    len(xs) > len(set(universe)) with xs drawn from universe guarantees.
    """
    items = tuple(xs)
    for first, symbol in enumerate(items):
        if symbol in items[first + 1:]:
            last = len(items) - 1 - items[::-1].index(symbol)
            return Duplicate(symbol, items[:first], items[first + 1:last], items[last + 1:])
    raise NoDuplicateError(f"no repeated symbol among {len(items)} symbols "
                           f"drawn from a universe of {len(set(universe))}")


### Decomposition and surgery

class Decomposed(NamedTuple):
    left: Sentence
    subtree: DerivationTree
    right: Sentence


def decompose(t: DerivationTree, c: TreeCode) -> Optional[Decomposed]:
    """(x, sub, y) with frontier(t) == x + frontier(sub) + y, or None if c leaves the tree."""
    left_parts: list[Sentence] = []
    right_parts: list[Sentence] = []
    current = t
    for direction in c:
        if not isinstance(current, Node):
            return None
        if direction is Direction.LEFT:
            right_parts.append(frontier(current.right))
            current = current.left
        else:
            left_parts.append(frontier(current.left))
            current = current.right
    left = tuple(s for part in left_parts for s in part)
    right = tuple(s for part in reversed(right_parts) for s in part)
    return Decomposed(left, current, right)


class CodeSplit(NamedTuple):
    c1: TreeCode
    c2: TreeCode
    subtree: DerivationTree
    left: Sentence
    right: Sentence


def split_code(t: DerivationTree, p1: Sequence[Symbol], p2: Sequence[Symbol], c: TreeCode) -> CodeSplit:
    """
    Cuts the code c of the maximal path p1 + p2 after len(p1) steps. The subtree
    reached carries p2 under the remaining code and has height len(p2) - 1.
    """
    p1, p2 = tuple(p1), tuple(p2)
    if not p1 or len(p2) < 2:
        raise CodePathMismatch(f"need a non-empty prefix and a suffix of at least 2, got {len(p1)} and {len(p2)}")
    if not code_realizes_path(t, p1 + p2, c):
        raise CodePathMismatch(f"code {format_code(c)} does not realise the path "
                               f"{' '.join(map(str, p1 + p2))}")
    if height(t) != len(p1) + len(p2) - 1:
        raise CodePathMismatch(f"path of length {len(p1) + len(p2)} is not maximal in a tree of height {height(t)}")
    c1, c2 = c[:len(p1)], c[len(p1):]
    left, subtree, right = decompose(t, c1)
    if not code_realizes_path(subtree, p2, c2) or height(subtree) != len(p2) - 1:
        raise InvariantViolation(f"split of code {format_code(c)} at {len(p1)} broke the path/height relation")
    return CodeSplit(c1, c2, subtree, left, right)


def replace_at(t: DerivationTree, c: TreeCode, replacement: DerivationTree) -> DerivationTree:
    if not c:
        return replacement
    if not isinstance(t, Node):
        raise InvalidCodeError(f"code walks past the leaf {t.label}")
    direction, rest = c[0], c[1:]
    if direction is Direction.LEFT:
        return Node(t.label, replace_at(t.left, rest, replacement), t.right)
    return Node(t.label, t.left, replace_at(t.right, rest, replacement))


def pump_tree(t1: DerivationTree, c1: TreeCode, i: int) -> DerivationTree:
    """
    p(0) is the subtree t2 of t1 at c1, p(j) is t1 with p(j-1) grafted at c1, so
    frontier(p(i)) == v*i + frontier(t2) + x*i where (v, t2, x) = decompose(t1, c1).
    """
    if i < 0:
        raise PumpPreconditionError(f"pump count must be non-negative, got {i}")
    if not c1:
        raise PumpPreconditionError("the inner code must be non-empty")
    parts = decompose(t1, c1)
    if parts is None:
        raise PumpPreconditionError(f"code {format_code(c1)} does not address a subtree")
    inner = parts.subtree
    if inner.label != t1.label:
        raise PumpPreconditionError(f"inner root {inner.label} differs from outer root {t1.label}")
    pumped = inner
    for _ in range(i):
        pumped = replace_at(t1, c1, pumped)
    return pumped


### Text and JSON forms

def _atom(name: str) -> str:
    if any(ch in name for ch in '()"') or not name:
        return json.dumps(name, ensure_ascii=False)
    return name


def format_tree(t: DerivationTree) -> str:
    """Parenthesized form, e.g. (S (A a) (B b))."""
    if isinstance(t, Leaf):
        return f"({_atom(t.label.name)} {_atom(t.terminal.name)})"
    return f"({_atom(t.label.name)} {format_tree(t.left)} {format_tree(t.right)})"


def tree_to_json(t: DerivationTree) -> dict:
    if isinstance(t, Leaf):
        return {"label": t.label.name, "terminal": t.terminal.name}
    return {"label": t.label.name, "left": tree_to_json(t.left), "right": tree_to_json(t.right)}
