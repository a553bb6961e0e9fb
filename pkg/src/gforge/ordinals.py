"""Ordinal notations below epsilon_0.

A notation is a finite ordered tree <a0, ..., a_{n-1}>, read as
w^a0 + ... + w^a_{n-1}.  The same class also holds arbitrary ("raw") trees;
`is_notation` tells the two apart.

Coding into the naturals.  Write P(a) = '1' + P(a0) + ... + P(a_{n-1}) + '0'
for the balanced-parenthesis word of a tree.  The code of <a0,...,a_{n-1}> is

    code(a) = int('1' + P(a0) + ... + P(a_{n-1}), 2) - 1

so <> -> 0, 1 = <0> -> 5, 2 -> 25, w -> 27.  The leading '1' keeps the word
self-delimiting; decoding strips it from n + 1 and parses the rest.
"""

import re
from enum import Enum
from functools import cmp_to_key, lru_cache


class Cmp(Enum):
    LT = -1
    EQ = 0
    GT = 1

    def __str__(self):
        return self.name


class Ordinal:
    """Immutable ordered tree of exponents; also used for raw trees."""

    __slots__ = ('exps', '_hash', '_len', '_cnf')

    def __init__(self, exps=()):
        exps = tuple(exps)
        for e in exps:
            if not isinstance(e, Ordinal):
                raise TypeError(f'exponent must be an Ordinal, got {e!r}')
        self.exps = exps
        self._hash = hash(('Ordinal', exps))
        self._len = sum(e._len for e in exps) + len(exps)
        cnf = all(e._cnf for e in exps)
        if cnf:
            for i in range(1, len(exps)):
                if compare(exps[i], exps[i - 1]) is Cmp.GT:
                    cnf = False
                    break
        self._cnf = cnf

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Ordinal) or self._hash != other._hash:
            return False
        return self.exps == other.exps

    def __lt__(self, other):
        return compare(self, other) is Cmp.LT

    def __le__(self, other):
        return compare(self, other) is not Cmp.GT

    def __gt__(self, other):
        return compare(self, other) is Cmp.GT

    def __ge__(self, other):
        return compare(self, other) is not Cmp.LT

    def __add__(self, other):
        return add(self, other)

    def __len__(self):
        return len(self.exps)

    def __iter__(self):
        return iter(self.exps)

    def __repr__(self):
        return f'Ordinal({to_text(self)!r})' if self._cnf else f'Ordinal.raw({to_brackets(self)!r})'

    def __str__(self):
        return to_text(self) if self._cnf else to_brackets(self)

    @staticmethod
    def raw(text):
        return parse_ordinal(text, mode='raw')


ZERO = Ordinal()
ONE = Ordinal((ZERO,))
OMEGA = Ordinal((ONE,))


def is_notation(a: Ordinal) -> bool:
    return a._cnf


def length_measure(a: Ordinal) -> int:
    """Total number of nodes below the root (l(<a0..>) = sum l(ai) + n)."""
    return a._len


@lru_cache(maxsize=1 << 18)
def compare(a: Ordinal, b: Ordinal) -> Cmp:
    if a is b:
        return Cmp.EQ
    for x, y in zip(a.exps, b.exps):
        c = compare(x, y)
        if c is not Cmp.EQ:
            return c
    if len(a.exps) < len(b.exps):
        return Cmp.LT
    if len(a.exps) > len(b.exps):
        return Cmp.GT
    return Cmp.EQ


def max_ord(*items):
    best = ZERO
    for a in items:
        if compare(a, best) is Cmp.GT:
            best = a
    return best


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.exps:
        return a
    head = b.exps[0]
    i = len(a.exps)
    for j, e in enumerate(a.exps):
        if compare(e, head) is Cmp.LT:
            i = j
            break
    return Ordinal(a.exps[:i] + b.exps)


def omega_pow(a: Ordinal) -> Ordinal:
    return Ordinal((a,))


def succ(a: Ordinal) -> Ordinal:
    return add(a, ONE)


def from_nat(n: int) -> Ordinal:
    if n < 0:
        raise ValueError('fromNat needs a natural number')
    return Ordinal((ZERO,) * n)


def as_nat(a: Ordinal):
    """The natural number a denotes, or None if a >= w."""
    if all(e == ZERO for e in a.exps):
        return len(a.exps)
    return None


def omega_tower(a: Ordinal, n: int) -> Ordinal:
    for _ in range(n):
        a = omega_pow(a)
    return a


# -- enumeration -----------------------------------------------------------

@lru_cache(maxsize=None)
def _notations_of_length(n):
    """All notations with l = n, as a tuple (unsorted)."""
    return tuple(Ordinal(seq) for seq in _cnf_sequences(n, None))


def _cnf_sequences(n, cap):
    # nonincreasing exponent sequences with total weight n; each exponent e
    # costs l(e) + 1, and every exponent must be <= cap
    if n == 0:
        yield ()
        return
    for k in range(n):
        for e in _notations_of_length(k):
            if cap is not None and compare(e, cap) is Cmp.GT:
                continue
            for rest in _cnf_sequences(n - k - 1, e):
                yield (e,) + rest


def enumerate_up_to(k: int) -> list:
    if k < 0:
        raise ValueError('k must be non-negative')
    out = [a for n in range(k + 1) for a in _notations_of_length(n)]
    return sorted(out, key=cmp_to_key(lambda x, y: compare(x, y).value))


@lru_cache(maxsize=None)
def raw_trees_of_length(n):
    """Every raw tree with l = n (a tree with n + 1 nodes)."""
    if n == 0:
        return (ZERO,)
    out = []
    for k in range(n):
        for first in raw_trees_of_length(k):
            for rest in raw_trees_of_length(n - k - 1):
                out.append(Ordinal((first,) + rest.exps))
    return tuple(out)


def raw_trees_up_to(k):
    return [a for n in range(k + 1) for a in raw_trees_of_length(n)]


# -- coding ----------------------------------------------------------------

def _paren(a):
    return '1' + ''.join(_paren(e) for e in a.exps) + '0'


def code(a: Ordinal) -> int:
    return int('1' + ''.join(_paren(e) for e in a.exps), 2) - 1


def decode(n: int):
    """Inverse of `code`; returns None when n is not the code of any tree."""
    if n < 0:
        return None
    bits = bin(n + 1)[3:]  # drop '0b' and the sentinel
    stack = [[]]
    for b in bits:
        if b == '1':
            stack.append([])
        else:
            if len(stack) == 1:
                return None
            kids = stack.pop()
            stack[-1].append(Ordinal(kids))
    if len(stack) != 1:
        return None
    return Ordinal(stack[0])


class CodedOrder:
    """The order m <| n  iff  decode(e(m)) < decode(e(n)) on a finite domain.

    e enumerates the codes of notations below `bound` in increasing order;
    the domain is {0, ..., size - 1}.  Numbers outside the domain are
    unrelated to everything.
    """

    def __init__(self, bound: int):
        if bound < 1:
            raise ValueError('bound must be at least 1')
        self.bound = bound
        codes, notations = [], []
        for n in range(bound):
            a = decode(n)
            if a is not None and is_notation(a):
                codes.append(n)
                notations.append(a)
        self.codes = tuple(codes)
        self.notations = tuple(notations)
        self._index = {a: i for i, a in enumerate(notations)}

    @property
    def size(self):
        return len(self.codes)

    def domain(self):
        return range(self.size)

    def e(self, m: int) -> int:
        return self.codes[m]

    def notation(self, m: int) -> Ordinal:
        return self.notations[m]

    def index_of(self, a: Ordinal):
        return self._index.get(a)

    def lhd(self, m: int, n: int) -> bool:
        if not (0 <= m < self.size and 0 <= n < self.size):
            return False
        return compare(self.notations[m], self.notations[n]) is Cmp.LT

    def predecessors(self, n: int):
        return [m for m in self.domain() if self.lhd(m, n)]

    def pairs(self):
        return [(m, n) for n in self.domain() for m in self.domain() if self.lhd(m, n)]

    def __repr__(self):
        return f'CodedOrder(bound={self.bound}, size={self.size})'


def build_coded_order(bound: int) -> CodedOrder:
    return CodedOrder(bound)


# -- text form -------------------------------------------------------------

class OrdinalSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r'\s*(?:(\d+)|(.))')


def _tokens(text):
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            out.append(('num', int(m.group(1)), m.start(1)))
        else:
            ch = m.group(2)
            if ch not in 'w^+(),<>':
                raise OrdinalSyntaxError(f'unexpected character {ch!r} at {m.start(2)}')
            out.append((ch, ch, m.start(2)))
        pos = m.end()
    return out


class _OrdParser:
    def __init__(self, text, normalize):
        self.toks = _tokens(text)
        self.i = 0
        self.normalize = normalize

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            where = self.toks[self.i][2] if self.i < len(self.toks) else 'end'
            raise OrdinalSyntaxError(f'expected {kind!r} at {where}')
        self.i += 1
        return self.toks[self.i - 1]

    def sum(self):
        acc = self.term()
        while self.peek() == '+':
            self.i += 1
            nxt = self.term()
            acc = add(acc, nxt) if self.normalize else Ordinal(acc.exps + nxt.exps)
        return acc

    def term(self):
        kind = self.peek()
        if kind == 'num':
            return from_nat(self.take('num')[1])
        if kind == 'w':
            self.i += 1
            if self.peek() == '^':
                self.i += 1
                return omega_pow(self.term())
            return OMEGA
        if kind == '(':
            self.i += 1
            inner = self.sum()
            self.take(')')
            return inner
        if kind == '<':
            self.i += 1
            items = []
            if self.peek() != '>':
                items.append(self.sum())
                while self.peek() == ',':
                    self.i += 1
                    items.append(self.sum())
            self.take('>')
            return Ordinal(items)
        where = self.toks[self.i][2] if self.i < len(self.toks) else 'end'
        raise OrdinalSyntaxError(f'expected an ordinal term at {where}')


def parse_ordinal(text: str, mode: str = 'strict') -> Ordinal:
    """Parse the text form.

    mode 'strict' rejects trees outside Cantor normal form, 'normalize'
    folds sums with `add`, and 'raw' keeps the tree as written.
    """
    if mode not in ('strict', 'normalize', 'raw'):
        raise ValueError(f'unknown mode {mode!r}')
    p = _OrdParser(text, normalize=(mode == 'normalize'))
    a = p.sum()
    if p.i != len(p.toks):
        raise OrdinalSyntaxError(f'trailing input at {p.toks[p.i][2]}')
    if mode == 'strict' and not is_notation(a):
        raise OrdinalSyntaxError(f'not in Cantor normal form: {to_brackets(a)}')
    return a


def _power_text(e):
    if e == ZERO:
        return '1'
    if e == ONE:
        return 'w'
    inner = to_text(e)
    return 'w^' + (inner if len(e.exps) == 1 else f'({inner})')


def to_text(a: Ordinal) -> str:
    if not a.exps:
        return '0'
    return '+'.join(_power_text(e) for e in a.exps)


def to_brackets(a: Ordinal) -> str:
    return '<' + ','.join(to_brackets(e) for e in a.exps) + '>'
