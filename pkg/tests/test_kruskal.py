import itertools

import pytest

from gforge import kruskal as kr
from gforge import ordinals as o
from gforge.kruskal import LEAF, Node, embeds, parse_tree

from oracles import brute_embeds

LL = Node(LEAF, LEAF)


def test_parse_and_print():
    for text in ['o', '(o,o)', '((o,o),(o,(o,o)))']:
        assert str(parse_tree(text)) == text
    for bad in ['', '(o)', '(o,o', 'x', '(o,o))', '( o,o)']:
        with pytest.raises(kr.TreeSyntaxError):
            parse_tree(bad)


def test_height():
    assert kr.height(LEAF) == 0
    assert kr.height(LL) == 1
    assert kr.height(Node(LL, LEAF)) == 2


def test_embeds_examples():
    for t in kr.all_trees_up_to_height(3):
        assert embeds(LEAF, t)
    assert not embeds(LL, LEAF)
    assert embeds(LL, Node(LEAF, LL))
    assert not embeds(Node(LL, LEAF), Node(LEAF, LL))


def test_embeds_matches_brute_force_oracle():
    small = kr.trees_up_to_nodes(5)
    big = kr.trees_up_to_nodes(7)
    for s in small:
        for t in big:
            assert embeds(s, t) == brute_embeds(s, t), (s, t)


def test_unordered_and_equality():
    trees = kr.all_trees_up_to_height(3)
    for s in trees:
        assert kr.tree_eq(s, s)
        for t in trees:
            if embeds(s, t):
                assert kr.embeds_unordered(s, t)
    low = kr.all_trees_up_to_height(2)
    for a, b in itertools.product(low, repeat=2):
        assert kr.embeds_unordered(Node(a, b), Node(b, a))
    assert kr.tree_eq(Node(LL, LEAF), Node(LEAF, LL))
    assert not embeds(Node(LL, LEAF), Node(LEAF, LL))


def test_partial_order_height_3():
    rep = kr.wpo_check(kr.all_trees_up_to_height(3))
    assert rep.ok and rep.size == 26


def test_length_and_quasi_embedding_examples():
    assert kr.length_l(o.ZERO) == 0
    assert kr.length_l(o.ONE) == 1
    assert kr.length_l(o.OMEGA) == 2
    assert kr.quasi_embed(o.ZERO) == LEAF
    assert kr.quasi_embed(o.ONE) == LL
    assert kr.quasi_embed(o.OMEGA) == Node(LL, LEAF)
    with pytest.raises(ValueError):
        kr.quasi_embed(o.Ordinal.raw('<<>,<<>>>'))


def test_quasi_embedding_node_count():
    for a in o.enumerate_up_to(6):
        assert kr.quasi_embed(a).nodes == 2 * kr.length_l(a) + 1


def test_is_bad():
    assert kr.is_bad([LL])
    for t in kr.all_trees_up_to_height(2):
        assert not kr.is_bad([LEAF, t])
    assert kr.is_bad([LL, LEAF])


def test_longest_bad():
    n, w = kr.longest_bad_sequence(3)
    assert (n, [str(t) for t in w]) == (2, ['(o,o)', 'o'])
    prev = 0
    for budget in (1, 3, 5, 7):
        n, w = kr.longest_bad_sequence(budget)
        assert kr.is_bad(w) and len(w) == n
        assert n >= prev
        prev = n
    with pytest.raises(ValueError):
        kr.longest_bad_sequence(0)


def _brute_longest(universe):
    best = 0
    for r in range(1, len(universe) + 1):
        for seq in itertools.permutations(universe, r):
            if kr.is_bad(seq):
                best = r
                break
    return best


def test_longest_bad_matches_permutation_oracle():
    universe = kr.trees_up_to_nodes(5)
    assert kr.wpo_check(universe).longest_bad == _brute_longest(universe)
    assert kr.wpo_check([LEAF]).longest_bad == 1


def test_adding_leaf_grows_by_at_most_one():
    pool = [t for t in kr.trees_up_to_nodes(7) if t != LEAF]
    for r in (1, 2, 3):
        for sub in itertools.combinations(pool, r):
            a = kr.wpo_check(sub).longest_bad
            b = kr.wpo_check(list(sub) + [LEAF]).longest_bad
            assert a <= b <= a + 1


def test_reification():
    a, b = LL, LEAF
    assert kr.check_reification({}) == []
    ok = {(a,): o.ONE, (a, b): o.ZERO}
    assert kr.check_reification(ok) == []
    bad = {(a,): o.ZERO, (a, b): o.ONE}
    v = kr.check_reification(bad)
    assert len(v) == 1 and v[0].seq == (a, b)
    v = kr.check_reification({(b, a): o.ZERO})
    assert 'not a bad sequence' in v[0].message


def test_reification_file_format():
    text = '# chain\n(o,o) ; 1\n(o,o) o ; 0\n'
    table = kr.parse_reification(text)
    assert table == {(LL,): o.ONE, (LL, LEAF): o.ZERO}
    with pytest.raises(ValueError):
        kr.parse_reification('(o,o) 1\n')
    with pytest.raises(ValueError):
        kr.parse_reification('(o,o ; 1\n')
