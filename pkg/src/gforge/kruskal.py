"""Binary trees, their embeddability orders, the quasi-embedding of the
ordinal notations, bad sequences and small well-partial-order oracles."""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from . import ordinals as o


class Tree:
    """Leaf when left is None, otherwise Node(left, right).  Immutable."""

    __slots__ = ('left', 'right', '_hash', 'nodes', 'height')

    def __init__(self, left=None, right=None):
        if (left is None) != (right is None):
            raise ValueError('a node has zero or two successors')
        self.left = left
        self.right = right
        if left is None:
            self.nodes, self.height = 1, 0
        else:
            self.nodes = 1 + left.nodes + right.nodes
            self.height = 1 + max(left.height, right.height)
        self._hash = hash((left, right))

    @property
    def is_leaf(self):
        return self.left is None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Tree) or self._hash != other._hash:
            return False
        return self.left == other.left and self.right == other.right

    def __hash__(self):
        return self._hash

    def sort_key(self):
        """Canonical order: by size, then Leaf first, then left, then right."""
        if self.is_leaf:
            return (1,)
        return (self.nodes, 1, self.left.sort_key(), self.right.sort_key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return 'o' if self.is_leaf else f'({self.left},{self.right})'

    def __repr__(self):
        return f'Tree({str(self)!r})'

    def __reduce__(self):
        return (Tree, (self.left, self.right))


LEAF = Tree()


def Node(left: Tree, right: Tree) -> Tree:
    return Tree(left, right)


def height(t: Tree) -> int:
    return t.height


class TreeSyntaxError(ValueError):
    pass


def parse_tree(text: str) -> Tree:
    """Grammar: `o` for a leaf, `(s,t)` for a node; no whitespace inside."""
    text = text.strip()
    pos = 0

    def go():
        nonlocal pos
        if pos < len(text) and text[pos] == 'o':
            pos += 1
            return LEAF
        if pos < len(text) and text[pos] == '(':
            pos += 1
            left = go()
            expect(',')
            right = go()
            expect(')')
            return Node(left, right)
        raise TreeSyntaxError(f'expected "o" or "(" at position {pos} in {text!r}')

    def expect(ch):
        nonlocal pos
        if pos >= len(text) or text[pos] != ch:
            raise TreeSyntaxError(f'expected {ch!r} at position {pos} in {text!r}')
        pos += 1

    t = go()
    if pos != len(text):
        raise TreeSyntaxError(f'trailing input at position {pos} in {text!r}')
    return t


# -- embeddings -------------------------------------------------------------------


@lru_cache(maxsize=None)
def embeds(s: Tree, t: Tree) -> bool:
    """s <=_B t."""
    if s.is_leaf:
        return True
    if t.is_leaf:
        return False
    if embeds(s.left, t.left) and embeds(s.right, t.right):
        return True
    return embeds(s, t.left) or embeds(s, t.right)


@lru_cache(maxsize=None)
def embeds_unordered(s: Tree, t: Tree) -> bool:
    """s <=_B^- t: like embeds, but children may also be matched crosswise."""
    if s.is_leaf:
        return True
    if t.is_leaf:
        return False
    if embeds_unordered(s.left, t.left) and embeds_unordered(s.right, t.right):
        return True
    if embeds_unordered(s.left, t.right) and embeds_unordered(s.right, t.left):
        return True
    return embeds_unordered(s, t.left) or embeds_unordered(s, t.right)


def tree_eq(s: Tree, t: Tree) -> bool:
    return embeds_unordered(s, t) and embeds_unordered(t, s)


# -- the quasi-embedding ------------------------------------------------------------


def length_l(a: o.Ordinal) -> int:
    return o.length_measure(a)


def quasi_embed(a: o.Ordinal) -> Tree:
    """f(<>) = o, f(<a0, a1, ...>) = (f(a0), f(<a1, ...>))."""
    if not o.is_notation(a):
        raise ValueError(f'not in Cantor normal form: {a}')
    return _qe(a.exps)


@lru_cache(maxsize=None)
def _qe(exps):
    if not exps:
        return LEAF
    return Node(_qe(exps[0].exps), _qe(exps[1:]))


# -- bad sequences ------------------------------------------------------------------


def is_bad(seq, rel=embeds) -> bool:
    seq = list(seq)
    return not any(rel(seq[i], seq[j]) for i in range(len(seq)) for j in range(i + 1, len(seq)))


def trees_with_nodes(n: int):
    """All trees with exactly n nodes (n odd), in canonical order."""
    return list(_trees_with_nodes(n))


@lru_cache(maxsize=None)
def _trees_with_nodes(n):
    if n == 1:
        return (LEAF,)
    if n < 1 or n % 2 == 0:
        return ()
    out = []
    for k in range(1, n - 1, 2):
        for l, r in product(_trees_with_nodes(k), _trees_with_nodes(n - 1 - k)):
            out.append(Node(l, r))
    return tuple(sorted(out))


def trees_up_to_nodes(budget: int):
    out = []
    for n in range(1, budget + 1):
        out.extend(_trees_with_nodes(n))
    return sorted(out)


def all_trees_up_to_height(h: int):
    level = [LEAF]
    for _ in range(h):
        level = sorted({LEAF} | {Node(a, b) for a in level for b in level})
    return sorted(level)


def _longest_bad(universe, rel):
    """Maximum bad length over repetition-free sequences from universe and the
    lexicographically least witness (w.r.t. the canonical tree order)."""
    universe = sorted(set(universe))
    n = len(universe)
    # blocked[i]: indices j whose tree lies above universe[i] (including i)
    blocked = []
    for i, s in enumerate(universe):
        mask = 0
        for j, t in enumerate(universe):
            if rel(s, t):
                mask |= 1 << j
        blocked.append(mask)

    @lru_cache(maxsize=None)
    def best(avail):
        top = 0
        for i in range(n):
            if avail >> i & 1:
                top = max(top, 1 + best(avail & ~blocked[i]))
        return top

    full = (1 << n) - 1
    length = best(full)
    witness, avail = [], full
    while best(avail) > 0:
        want = best(avail)
        for i in range(n):
            if avail >> i & 1 and 1 + best(avail & ~blocked[i]) == want:
                witness.append(universe[i])
                avail &= ~blocked[i]
                break
    best.cache_clear()
    return length, witness


def longest_bad_sequence(node_budget: int):
    """(length, witness) over all trees with at most node_budget nodes."""
    if node_budget < 1:
        raise ValueError('node budget must be at least 1')
    return _longest_bad(trees_up_to_nodes(node_budget), embeds)


@dataclass
class WpoReport:
    size: int
    reflexive: bool
    antisymmetric: bool
    transitive: bool
    longest_bad: int
    witness: list
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.reflexive and self.antisymmetric and self.transitive

    def lines(self):
        yes = lambda b: 'yes' if b else 'no'
        out = [f'trees: {self.size}',
               f'reflexive: {yes(self.reflexive)}',
               f'antisymmetric: {yes(self.antisymmetric)}',
               f'transitive: {yes(self.transitive)}',
               f'longest bad sequence: {self.longest_bad}',
               'witness: ' + ' '.join(map(str, self.witness))]
        return out + [f'failure: {f}' for f in self.failures]


def wpo_check(universe, rel=embeds) -> WpoReport:
    universe = sorted(set(universe))
    fails = []
    refl = all(rel(t, t) for t in universe)
    if not refl:
        fails.append('reflexivity')
    anti = True
    for s, t in product(universe, repeat=2):
        if s != t and rel(s, t) and rel(t, s):
            anti = False
            fails.append(f'antisymmetry: {s} {t}')
            break
    trans = True
    above = {s: [t for t in universe if rel(s, t)] for s in universe}
    for s in universe:
        for t in above[s]:
            if any(not rel(s, u) for u in above[t]):
                trans = False
                fails.append(f'transitivity at {s} {t}')
                break
        if not trans:
            break
    length, witness = _longest_bad(universe, rel)
    return WpoReport(len(universe), refl, anti, trans, length, witness, fails)


# -- reification ---------------------------------------------------------------------


@dataclass
class ReificationViolation:
    seq: tuple
    message: str

    def __str__(self):
        return f'{" ".join(map(str, self.seq))}: {self.message}'


def check_reification(table: dict) -> list:
    """Violations of  r(s + <t>) < r(s)  among the entries of the table.

    Keys are tuples of trees, values ordinal notations.  An empty list means ok."""
    out = []
    for seq in sorted(table, key=lambda s: (len(s), [t.sort_key() for t in s])):
        val = table[seq]
        if not seq:
            out.append(ReificationViolation(seq, 'empty sequence'))
            continue
        if not is_bad(seq):
            out.append(ReificationViolation(seq, 'not a bad sequence'))
        if not o.is_notation(val):
            out.append(ReificationViolation(seq, f'{val} is not in Cantor normal form'))
        prefix = seq[:-1]
        if prefix in table and o.compare(val, table[prefix]) is not o.Cmp.LT:
            out.append(ReificationViolation(
                seq, f'value {o.to_text(val)} is not below {o.to_text(table[prefix])} '
                     f'of the prefix {" ".join(map(str, prefix))}'))
    return out


def parse_reification(text: str) -> dict:
    """Lines `tree tree ... ; ordinal`; blank lines and `#` comments are skipped."""
    table = {}
    for k, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if line.count(';') != 1:
            raise ValueError(f'line {k}: expected "trees ; ordinal"')
        lhs, rhs = line.split(';')
        try:
            seq = tuple(parse_tree(w) for w in lhs.split())
            val = o.parse_ordinal(rhs.strip())
        except (TreeSyntaxError, o.OrdinalSyntaxError) as e:
            raise ValueError(f'line {k}: {e}') from None
        if seq in table:
            raise ValueError(f'line {k}: duplicate sequence')
        table[seq] = val
    return table


# -- bridge to the ordinals -----------------------------------------------------------


def descent_bridge_failures(k: int) -> list:
    """Pairs a > b (notations with l <= k) whose images satisfy f(a) <= f(b).

    A strictly decreasing chain maps to a bad sequence exactly when no such
    pair occurs in it, so an empty result covers every chain at once."""
    notes = o.enumerate_up_to(k)
    imgs = [quasi_embed(a) for a in notes]
    out = []
    for i, a in enumerate(notes):
        for j in range(i):
            if embeds(imgs[i], imgs[j]):
                out.append((a, notes[j]))
    return out
