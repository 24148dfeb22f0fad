from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfl_pumping.errors import (
    CodePathMismatch,
    InvalidCodeError,
    NoDuplicateError,
    PathNotFoundError,
    PumpPreconditionError,
)
from cfl_pumping.grammar import Grammar, Rule, nonterminal, terminal
from cfl_pumping.parser import validate_tree
from cfl_pumping.transform import CnfGrammar
from cfl_pumping.tree import (
    Direction,
    Leaf,
    Node,
    code_of_path,
    code_realizes_path,
    decompose,
    find_duplicate,
    format_code,
    format_tree,
    frontier,
    height,
    label_at,
    longest_path,
    node_codes,
    nonterminals_of,
    path_of_code,
    pump_tree,
    replace_at,
    root,
    split_code,
    subtree_at,
    tree_to_json,
)

S, A, B, C, D = (nonterminal(name) for name in "SABCD")
a, b, c, d = (terminal(name) for name in "abcd")
L, R = Direction.LEFT, Direction.RIGHT

labels = st.sampled_from([S, A, B])
leaves = st.builds(Leaf, labels, st.sampled_from([a, b]))
trees = st.recursive(leaves, lambda children: st.builds(Node, labels, children, children), max_leaves=24)
nodes = st.builds(Node, labels, trees, trees)


@st.composite
def trees_with_code(draw):
    t = draw(trees)
    return t, draw(st.sampled_from(list(node_codes(t))))


@st.composite
def pump_inputs(draw):
    """t1 with a non-empty code c1 whose subtree shares t1's root label."""
    host = draw(nodes)
    c1 = draw(st.sampled_from([code for code in node_codes(host) if code]))
    inner = replace(draw(trees), label=host.label)
    return replace_at(host, c1, inner), c1


def rules_of(t) -> set[Rule]:
    rules = set()
    for code in node_codes(t):
        sub = subtree_at(t, code)
        rhs = (sub.terminal,) if isinstance(sub, Leaf) else (sub.left.label, sub.right.label)
        rules.add(Rule(sub.label, rhs))
    return rules


def grammar_licensing(t) -> CnfGrammar:
    start = nonterminal("Z")
    return CnfGrammar.from_grammar(Grammar.from_rules(start, rules_of(t) | {Rule(start, (a,))}))


SMALL = Node(S, Leaf(A, a), Leaf(B, b))
LOPSIDED = Node(S, Leaf(A, a), Node(B, Leaf(C, c), Leaf(D, d)))


### Measures

def test_leaf_measures():
    leaf = Leaf(S, a)
    assert (height(leaf), frontier(leaf), root(leaf)) == (1, (a,), S)


def test_node_measures():
    assert height(SMALL) == 2
    assert frontier(SMALL) == (a, b)
    assert nonterminals_of(LOPSIDED) == {S, A, B, C, D}


def test_constructors_check_kinds():
    with pytest.raises(ValueError):
        Leaf(a, b)
    with pytest.raises(ValueError):
        Leaf(S, A)
    with pytest.raises(ValueError):
        Node(a, SMALL, SMALL)


@settings(max_examples=500)
@given(trees)
def test_frontier_is_bounded_by_height(t):
    assert 1 <= len(frontier(t)) <= 2 ** (height(t) - 1)


def test_perfect_tree_attains_the_bound():
    perfect = Node(S, SMALL, SMALL)
    assert len(frontier(perfect)) == 2 ** (height(perfect) - 1)


### Paths and codes

def test_longest_path_examples():
    assert longest_path(Leaf(S, a)) == (S, a)
    assert longest_path(LOPSIDED) == (S, B, C, c)


@settings(max_examples=500)
@given(trees)
def test_longest_path_properties(t):
    z = longest_path(t)
    assert len(z) == height(t) + 1
    assert set(z[:-1]) <= nonterminals_of(t)
    assert path_of_code(t, code_of_path(t, z)) == z


def test_code_of_path_examples():
    assert code_of_path(Leaf(S, a), [S, a]) == ()
    assert code_of_path(Node(S, Leaf(A, a), Leaf(A, a)), [S, A, a]) == (L,)
    assert code_of_path(LOPSIDED, [S, B, D, d]) == (R, R)


@pytest.mark.parametrize("path", [[S, B, b], [S, B, C], [S], [A, a]])
def test_code_of_path_rejects_foreign_paths(path):
    with pytest.raises(PathNotFoundError):
        code_of_path(LOPSIDED, path)


def test_codes_and_accessors():
    assert format_code((R, L)) == "RL"
    assert subtree_at(LOPSIDED, (R, L)) == Leaf(C, c)
    assert label_at(LOPSIDED, (R,)) == B
    assert label_at(LOPSIDED, (L, L)) is None
    with pytest.raises(InvalidCodeError):
        subtree_at(LOPSIDED, (L, R))
    assert path_of_code(LOPSIDED, (R,)) is None
    assert code_realizes_path(LOPSIDED, [S, A, a], (L,))


### Pigeonhole

@pytest.mark.parametrize("xs,universe,expected", [
    ([A, B, A], [A, B], (A, (), (B,), ())),
    ([A, B, C, B], [A, B, C], (B, (A,), (C,), ())),
    ([A, A, A], [A, A], (A, (), (A,), ())),
    ([B, A, B, A, C], [A, B, C], (B, (), (A,), (A, C))),
])
def test_find_duplicate_examples(xs, universe, expected):
    assert tuple(find_duplicate(xs, universe)) == expected


def test_find_duplicate_without_repeats():
    with pytest.raises(NoDuplicateError):
        find_duplicate([A, B, C], [A, B, C])


@settings(max_examples=500)
@given(st.lists(st.sampled_from([S, A, B, C]), min_size=5, max_size=5))
def test_find_duplicate_reassembles(xs):
    found = find_duplicate(xs, [S, A, B, C])
    assert list(found.before) + [found.symbol] + list(found.between) + [found.symbol] + list(found.after) == xs
    assert found.symbol not in found.before


### Decomposition and surgery

def test_decompose_examples():
    assert decompose(SMALL, ()) == ((), SMALL, ())
    assert decompose(SMALL, (L,)) == ((), Leaf(A, a), (b,))
    assert decompose(SMALL, (L, L)) is None


@settings(max_examples=500)
@given(trees_with_code(), trees)
def test_decompose_and_replace(tc, other):
    t, code = tc
    left, sub, right = decompose(t, code)
    assert left + frontier(sub) + right == frontier(t)
    replaced = replace_at(t, code, other)
    assert decompose(replaced, code) == (left, other, right)
    assert frontier(replaced) == left + frontier(other) + right


def test_replace_at_root_and_off_the_tree():
    assert replace_at(SMALL, (), LOPSIDED) == LOPSIDED
    with pytest.raises(InvalidCodeError):
        replace_at(SMALL, (L, R), LOPSIDED)


def test_split_code_example():
    assert split_code(SMALL, [S], [A, a], (L,)) == ((L,), (), Leaf(A, a), (), (b,))


def test_split_code_preconditions():
    with pytest.raises(CodePathMismatch):
        split_code(SMALL, [S], [A, a], (R,))
    with pytest.raises(CodePathMismatch):
        split_code(SMALL, [], [S, A, a], (L,))
    # [S, A, a] is not maximal in LOPSIDED
    with pytest.raises(CodePathMismatch):
        split_code(LOPSIDED, [S], [A, a], (L,))


@settings(max_examples=500)
@given(trees.filter(lambda t: isinstance(t, Node)), st.data())
def test_split_code_on_maximal_paths(t, data):
    z = longest_path(t)
    code = code_of_path(t, z)
    cut = data.draw(st.integers(min_value=1, max_value=len(z) - 2))
    c1, c2, t2, left, right = split_code(t, z[:cut], z[cut:], code)
    assert c1 + c2 == code
    assert len(c1) == cut
    assert decompose(t, c1) == (left, t2, right)
    assert code_realizes_path(t2, z[cut:], c2)
    assert height(t2) == len(z) - cut - 1


def test_pump_tree_examples():
    t1 = Node(S, Leaf(A, a), Node(S, Leaf(B, b), Leaf(A, a)))
    assert pump_tree(t1, (R,), 0) == subtree_at(t1, (R,))
    assert pump_tree(t1, (R,), 1) == t1
    assert frontier(pump_tree(t1, (R,), 3)) == (a, a, a, b, a)


@pytest.mark.parametrize("code,i", [((R,), -1), ((), 2), ((L,), 2), ((L, L), 2)])
def test_pump_tree_preconditions(code, i):
    t1 = Node(S, Leaf(A, a), Node(S, Leaf(B, b), Leaf(A, a)))
    with pytest.raises(PumpPreconditionError):
        pump_tree(t1, code, i)


@settings(max_examples=500)
@given(pump_inputs(), st.integers(min_value=0, max_value=5))
def test_pump_tree_frontier(inputs, i):
    t1, c1 = inputs
    v, t2, x = decompose(t1, c1)
    pumped = pump_tree(t1, c1, i)
    assert frontier(pumped) == v * i + frontier(t2) + x * i
    assert decompose(pumped, c1 * i) == (v * i, t2, x * i)
    assert root(pumped) == root(t1)
    assert validate_tree(grammar_licensing(t1), pumped)


### Text and JSON

def test_format_tree():
    assert format_tree(SMALL) == "(S (A a) (B b))"
    odd = Leaf(nonterminal("T_("), terminal("("))
    assert format_tree(odd) == '("T_(" "(")'


def test_tree_to_json():
    assert tree_to_json(SMALL) == {
        "label": "S",
        "left": {"label": "A", "terminal": "a"},
        "right": {"label": "B", "terminal": "b"},
    }
