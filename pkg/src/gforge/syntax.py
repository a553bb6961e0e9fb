"""Terms and formulas of first-order arithmetic with a set variable X.

Formulas are kept in negation normal form: negation only sits on prime
formulas, and `negate` computes the de Morgan dual.  Besides =, <= and X the
syntax also carries arbitrary predicate symbols P(t, ...) and function
symbols f(t, ...), so that pure predicate-logic examples can be written.
"""

import re
from itertools import count

# -- immutable records -------------------------------------------------------


class _Node:
    __slots__ = ('_hash',)
    _fields = ()

    def __setattr__(self, name, value):
        raise AttributeError('syntax nodes are immutable')

    def _set(self, name, value):
        object.__setattr__(self, name, value)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return all(getattr(self, f) == getattr(other, f) for f in self._fields)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return f'{type(self).__name__}({str(self)!r})'

    def __reduce__(self):
        return (type(self), tuple(getattr(self, f) for f in self._fields))


class Term(_Node):
    __slots__ = ('fv', 'size')


class Zero(Term):
    __slots__ = ()

    def __init__(self):
        self._set('fv', frozenset())
        self._set('size', 1)
        self._set('_hash', hash('Zero'))

    def __str__(self):
        return '0'


class Var(Term):
    __slots__ = ('name',)
    _fields = ('name',)
    __match_args__ = _fields

    def __init__(self, name: str):
        self._set('name', name)
        self._set('fv', frozenset((name,)))
        self._set('size', 1)
        self._set('_hash', hash(('Var', name)))

    def __str__(self):
        return self.name


class Succ(Term):
    __slots__ = ('arg',)
    _fields = ('arg',)
    __match_args__ = _fields

    def __init__(self, arg: Term):
        self._set('arg', arg)
        self._set('fv', arg.fv)
        self._set('size', arg.size + 1)
        self._set('_hash', hash(('Succ', arg._hash)))

    def __str__(self):
        return f'S({self.arg})'


class _BinTerm(Term):
    __slots__ = ('left', 'right')
    _fields = ('left', 'right')
    __match_args__ = _fields
    _op = '?'

    def __init__(self, left: Term, right: Term):
        self._set('left', left)
        self._set('right', right)
        self._set('fv', left.fv | right.fv)
        self._set('size', left.size + right.size + 1)
        self._set('_hash', hash((type(self).__name__, left._hash, right._hash)))

    def __str__(self):
        return f'({self.left}{self._op}{self.right})'


class Plus(_BinTerm):
    __slots__ = ()
    _op = '+'


class Times(_BinTerm):
    __slots__ = ()
    _op = '*'


class Fn(Term):
    """Uninterpreted function symbol applied to arguments."""
    __slots__ = ('name', 'args')
    _fields = ('name', 'args')
    __match_args__ = _fields

    def __init__(self, name: str, args=()):
        args = tuple(args)
        self._set('name', name)
        self._set('args', args)
        fv = frozenset()
        for a in args:
            fv |= a.fv
        self._set('fv', fv)
        self._set('size', 1 + sum(a.size for a in args))
        self._set('_hash', hash(('Fn', name, args)))

    def __str__(self):
        if not self.args:
            return self.name
        return f'{self.name}({",".join(map(str, self.args))})'


ZERO = Zero()


class Formula(_Node):
    __slots__ = ('fv', 'rank')


class _Lit(Formula):
    __slots__ = ('rel', 'args')
    _fields = ('rel', 'args')
    __match_args__ = _fields

    def __init__(self, rel: str, args=()):
        args = tuple(args)
        if rel in ('=', '<=') and len(args) != 2:
            raise ValueError(f'{rel} takes two arguments')
        if rel == 'X' and len(args) != 1:
            raise ValueError('X takes one argument')
        self._set('rel', rel)
        self._set('args', args)
        fv = frozenset()
        for a in args:
            fv |= a.fv
        self._set('fv', fv)
        self._set('rank', 0)
        self._set('_hash', hash((type(self).__name__, rel, args)))

    def atom_text(self):
        if self.rel in ('=', '<='):
            return f'{self.args[0]}{self.rel}{self.args[1]}'
        if not self.args:
            return self.rel
        return f'{self.rel}({",".join(map(str, self.args))})'


class Prime(_Lit):
    __slots__ = ()

    def __str__(self):
        return self.atom_text()


class NegPrime(_Lit):
    __slots__ = ()

    def __str__(self):
        return '!' + self.atom_text()


class _BinFormula(Formula):
    __slots__ = ('left', 'right')
    _fields = ('left', 'right')
    __match_args__ = _fields

    def __init__(self, left: Formula, right: Formula):
        self._set('left', left)
        self._set('right', right)
        self._set('fv', left.fv | right.fv)
        self._set('rank', max(left.rank, right.rank) + 1)
        self._set('_hash', hash((type(self).__name__, left._hash, right._hash)))


class And(_BinFormula):
    __slots__ = ()

    def __str__(self):
        return f'({self.left} & {self.right})'


class Or(_BinFormula):
    __slots__ = ()

    def __str__(self):
        if isinstance(self.left, NegPrime):
            return f'({self.left.atom_text()} -> {self.right})'
        return f'({self.left} | {self.right})'


class _Quant(Formula):
    __slots__ = ('var', 'body')
    _fields = ('var', 'body')
    __match_args__ = _fields
    _word = '?'

    def __init__(self, var: str, body: Formula):
        self._set('var', var)
        self._set('body', body)
        self._set('fv', body.fv - {var})
        self._set('rank', body.rank + 1)
        self._set('_hash', hash((type(self).__name__, var, body._hash)))

    def __str__(self):
        return f'{self._word} {self.var}. {self.body}'


class All(_Quant):
    __slots__ = ()
    _word = 'all'


class Ex(_Quant):
    __slots__ = ()
    _word = 'ex'


def X(t):
    return Prime('X', (t,))


def eq(s, t):
    return Prime('=', (s, t))


def le(s, t):
    return Prime('<=', (s, t))


FALSE = NegPrime('=', (ZERO, ZERO))
TRUE = Prime('=', (ZERO, ZERO))

# -- basic operations --------------------------------------------------------


def negate(f: Formula) -> Formula:
    if isinstance(f, Prime):
        return NegPrime(f.rel, f.args)
    if isinstance(f, NegPrime):
        return Prime(f.rel, f.args)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, All):
        return Ex(f.var, negate(f.body))
    if isinstance(f, Ex):
        return All(f.var, negate(f.body))
    raise TypeError(f'not a formula: {f!r}')


def implies(a: Formula, b: Formula) -> Formula:
    return Or(negate(a), b)


def rank(f: Formula) -> int:
    return f.rank


def is_literal(f) -> bool:
    return isinstance(f, _Lit)


def is_closed(x) -> bool:
    return not x.fv


def numeral(n: int) -> Term:
    t = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


def numeral_value(t: Term):
    """n if t is the numeral for n, else None."""
    n = 0
    while isinstance(t, Succ):
        t = t.arg
        n += 1
    return n if isinstance(t, Zero) else None


# fixed variable enumeration: x, y, z, u, v, w, x1, y1, ...
_BASE_VARS = ('x', 'y', 'z', 'u', 'v', 'w')


def variables():
    for i in count():
        for b in _BASE_VARS:
            yield b if i == 0 else f'{b}{i}'


def first_var_not_in(avoid) -> str:
    for v in variables():
        if v not in avoid:
            return v


def fresh_variant(name: str, avoid) -> str:
    """name itself if unused, otherwise name1, name2, ... (smallest index)."""
    if name not in avoid:
        return name
    base = name.rstrip('0123456789') or name
    for i in count(1):
        cand = f'{base}{i}'
        if cand not in avoid:
            return cand


def term_substitute(t: Term, mapping: dict) -> Term:
    if not (t.fv & mapping.keys()):
        return t
    if isinstance(t, Var):
        return mapping[t.name]
    if isinstance(t, Succ):
        return Succ(term_substitute(t.arg, mapping))
    if isinstance(t, _BinTerm):
        return type(t)(term_substitute(t.left, mapping), term_substitute(t.right, mapping))
    if isinstance(t, Fn):
        return Fn(t.name, [term_substitute(a, mapping) for a in t.args])
    return t


def substitute_many(f: Formula, mapping: dict) -> Formula:
    """Simultaneous capture-avoiding substitution {var name: Term}."""
    mapping = {k: v for k, v in mapping.items() if k in f.fv}
    if not mapping:
        return f
    if isinstance(f, _Lit):
        return type(f)(f.rel, [term_substitute(a, mapping) for a in f.args])
    if isinstance(f, _BinFormula):
        return type(f)(substitute_many(f.left, mapping), substitute_many(f.right, mapping))
    # quantifier; the bound variable is not in mapping since it is not free in f
    incoming = frozenset()
    for t in mapping.values():
        incoming |= t.fv
    var, body = f.var, f.body
    if var in incoming:
        avoid = incoming | body.fv | mapping.keys()
        new = fresh_variant(var, avoid)
        body = substitute_many(body, {var: Var(new)})
        var = new
    return type(f)(var, substitute_many(body, mapping))


def substitute(f: Formula, x: str, t: Term) -> Formula:
    return substitute_many(f, {x: t})


def function_symbols(x) -> set:
    """(name, arity) pairs of the term constructors used in a term or formula."""
    out = set()

    def walk_t(t):
        if isinstance(t, Zero):
            out.add(('0', 0))
        elif isinstance(t, Succ):
            out.add(('S', 1))
            walk_t(t.arg)
        elif isinstance(t, Plus):
            out.add(('+', 2))
            walk_t(t.left)
            walk_t(t.right)
        elif isinstance(t, Times):
            out.add(('*', 2))
            walk_t(t.left)
            walk_t(t.right)
        elif isinstance(t, Fn):
            out.add((t.name, len(t.args)))
            for a in t.args:
                walk_t(a)

    def walk_f(f):
        if isinstance(f, _Lit):
            for a in f.args:
                walk_t(a)
        elif isinstance(f, _BinFormula):
            walk_f(f.left)
            walk_f(f.right)
        else:
            walk_f(f.body)

    if isinstance(x, Term):
        walk_t(x)
    else:
        walk_f(x)
    return out


def predicates(f: Formula) -> set:
    if isinstance(f, _Lit):
        return {(f.rel, len(f.args))}
    if isinstance(f, _BinFormula):
        return predicates(f.left) | predicates(f.right)
    return predicates(f.body)


def is_arithmetic(f: Formula) -> bool:
    """True when f uses only 0, S, +, *, =, <= and X."""
    return (all(name in ('0', 'S', '+', '*') for name, _ in function_symbols(f))
            and all(rel in ('=', '<=', 'X') for rel, _ in predicates(f)))


# -- evaluation -------------------------------------------------------------


class NotEvaluable(ValueError):
    def __init__(self, what):
        super().__init__(f'not evaluable: {what}')


def eval_term(t: Term) -> int:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Succ):
        return eval_term(t.arg) + 1
    if isinstance(t, Plus):
        return eval_term(t.left) + eval_term(t.right)
    if isinstance(t, Times):
        return eval_term(t.left) * eval_term(t.right)
    raise NotEvaluable(t)


def eval_literal(f: Formula) -> bool:
    if not isinstance(f, _Lit) or f.rel not in ('=', '<=') or f.fv:
        raise NotEvaluable(f)
    a, b = (eval_term(t) for t in f.args)
    holds = a == b if f.rel == '=' else a <= b
    return holds if isinstance(f, Prime) else not holds


def is_lpa_literal(f) -> bool:
    return isinstance(f, _Lit) and f.rel in ('=', '<=')


def is_x_literal(f) -> bool:
    return isinstance(f, _Lit) and f.rel == 'X'


def truth(f: Formula, search: int = 64) -> bool:
    """Truth of a closed X-free arithmetic sentence.

    Quantifiers are checked on the numerals below `search`; below an outer
    instance n the window widens to search + n, so witnesses may grow with
    the outer values.  Exact for quantifier-free sentences and a bounded
    approximation otherwise.
    """
    if isinstance(f, _Lit):
        return eval_literal(f)
    if isinstance(f, And):
        return truth(f.left, search) and truth(f.right, search)
    if isinstance(f, Or):
        return truth(f.left, search) or truth(f.right, search)
    if isinstance(f, (All, Ex)):
        want_all = isinstance(f, All)
        for n in range(search):
            v = truth(substitute(f.body, f.var, numeral(n)), search + n)
            if want_all and not v:
                return False
            if not want_all and v:
                return True
        return want_all
    raise NotEvaluable(f)


# -- closed terms -----------------------------------------------------------

_by_size = [[], [ZERO]]


def closed_terms_of_size(n: int) -> list:
    """Closed arithmetic terms of the given size, in the fixed order
    0 < S < + < * and then recursively by arguments."""
    while len(_by_size) <= n:
        m = len(_by_size)
        out = [Succ(t) for t in _by_size[m - 1]]
        for ctor in (Plus, Times):
            for i in range(1, m - 1):
                for a in _by_size[i]:
                    for b in _by_size[m - 1 - i]:
                        out.append(ctor(a, b))
        _by_size.append(out)
    return _by_size[n]


def closed_terms():
    for n in count(1):
        yield from closed_terms_of_size(n)


_term_list = []


def closed_term(k: int) -> Term:
    """The k-th closed term of the enumeration."""
    n = 1
    while len(_term_list) <= k:
        _term_list.clear()
        for m in range(1, n + 1):
            _term_list.extend(closed_terms_of_size(m))
        n += 1
    return _term_list[k]


# -- decomposition -----------------------------------------------------------

CONJUNCTIVE = 'Conjunctive'
DISJUNCTIVE = 'Disjunctive'
ATOMIC_X = 'AtomicX'


class Decomposition:
    """Kind, index set and components of a closed formula.

    index_set is 'empty', 'pair' (indices 0 and 1) or 'terms' (every
    closed term).
    """

    __slots__ = ('formula', 'kind', 'index_set')

    def __init__(self, formula, kind, index_set):
        self.formula = formula
        self.kind = kind
        self.index_set = index_set

    def contains(self, i) -> bool:
        if self.index_set == 'empty':
            return False
        if self.index_set == 'pair':
            return i in (0, 1) and not isinstance(i, bool)
        return isinstance(i, Term) and not i.fv and _is_arith_term(i)

    def component(self, i) -> Formula:
        if not self.contains(i):
            raise IndexError(f'{i} is not an index of {self.formula}')
        f = self.formula
        if self.index_set == 'pair':
            return f.left if i == 0 else f.right
        return substitute(f.body, f.var, i)

    def indices(self):
        if self.index_set == 'pair':
            return iter((0, 1))
        if self.index_set == 'terms':
            return closed_terms()
        return iter(())

    def __repr__(self):
        return f'Decomposition({self.kind}, {self.index_set}, {self.formula})'


def _is_arith_term(t):
    return all(name in ('0', 'S', '+', '*') for name, _ in function_symbols(t))


def decompose(f: Formula) -> Decomposition:
    if f.fv:
        raise ValueError(f'decompose needs a closed formula: {f}')
    if isinstance(f, _Lit):
        if f.rel == 'X':
            return Decomposition(f, ATOMIC_X, 'empty')
        if eval_literal(f):
            return Decomposition(f, CONJUNCTIVE, 'empty')
        return Decomposition(f, DISJUNCTIVE, 'empty')
    if isinstance(f, And):
        return Decomposition(f, CONJUNCTIVE, 'pair')
    if isinstance(f, Or):
        return Decomposition(f, DISJUNCTIVE, 'pair')
    if isinstance(f, All):
        return Decomposition(f, CONJUNCTIVE, 'terms')
    return Decomposition(f, DISJUNCTIVE, 'terms')


def component(f: Formula, i) -> Formula:
    return decompose(f).component(i)


# -- the jump ----------------------------------------------------------------

# Relations on ordinal codes used as guards by `jump`.  Each is a primitive
# recursive relation on numbers, decided through the coding of the ordinals
# module:
#   Ord(b)      b is the code of a notation
#   Lt(g, b)    g and b are codes and decode(g) < decode(b)
#   Pow(a, d)   d = code(w^decode(a))
#   Add(b, d, z) z = code(decode(b) + decode(d))
GUARDS = ('Ord', 'Lt', 'Pow', 'Add')


def guard_holds(rel: str, values) -> bool:
    from . import ordinals as o

    def nota(n):
        a = o.decode(n)
        return a if a is not None and o.is_notation(a) else None

    vals = [nota(v) for v in values]
    if rel == 'Ord':
        return vals[0] is not None
    if any(v is None for v in vals):
        return False
    if rel == 'Lt':
        return o.compare(vals[0], vals[1]) is o.Cmp.LT
    if rel == 'Pow':
        return vals[1] == o.omega_pow(vals[0])
    if rel == 'Add':
        return vals[2] == o.add(vals[0], vals[1])
    raise ValueError(f'unknown guard {rel}')


def jump(f: Formula, alpha: str = 'a') -> Formula:
    """all b (Ord(b) -> (all g (Lt(g,b) -> f(g)) ->
                          all d (Pow(a,d) -> all z (Add(b,d,z) -> all g (Lt(g,z) -> f(g))))))"""
    avoid = set(f.fv) | {alpha}
    b = fresh_variant('b', avoid)
    avoid.add(b)
    g = fresh_variant('g', avoid)
    avoid.add(g)
    d = fresh_variant('d', avoid)
    avoid.add(d)
    z = fresh_variant('z', avoid)
    vb, vg, vd, vz, va = Var(b), Var(g), Var(d), Var(z), Var(alpha)
    fg = substitute(f, alpha, vg)
    below_b = All(g, implies(Prime('Lt', (vg, vb)), fg))
    below_z = All(g, implies(Prime('Lt', (vg, vz)), fg))
    target = All(d, implies(Prime('Pow', (va, vd)),
                            All(z, implies(Prime('Add', (vb, vd, vz)), below_z))))
    return All(b, implies(Prime('Ord', (vb,)), implies(below_b, target)))


# -- parsing ----------------------------------------------------------------


class FormulaSyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f'{message} at position {pos}')
        self.pos = pos


_TOK = re.compile(r'\s*(->|<=|[A-Za-z_][A-Za-z0-9_\']*|\d+|[()=!&|.,+*])')


def _tokenize(text):
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOK.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f'unexpected character {text[pos]!r}', pos)
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    toks.append(('<eof>', len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i][0]

    @property
    def pos(self):
        return self.toks[self.i][1]

    def take(self, want=None):
        tok = self.tok
        if want is not None and tok != want:
            raise FormulaSyntaxError(f'expected {want!r}, found {tok!r}', self.pos)
        self.i += 1
        return tok

    def at_end(self):
        return self.tok == '<eof>'

    # formulas
    def top(self):
        f = self.chain()
        if not self.at_end():
            raise FormulaSyntaxError(f'unexpected {self.tok!r}', self.pos)
        return f

    def chain(self):
        # fm (op fm)* with & binding tighter than |, and -> right-associative
        left = self.disj()
        if self.tok == '->':
            self.take()
            return implies(left, self.chain())
        return left

    def disj(self):
        f = self.conj()
        while self.tok == '|':
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.tok == '&':
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.tok
        if tok == '!':
            self.take()
            return negate(self.unary())
        if tok in ('all', 'ex'):
            self.take()
            var = self.take()
            if not _is_var_name(var):
                raise FormulaSyntaxError(f'expected a variable, found {var!r}', self.toks[self.i - 1][1])
            self.take('.')
            body = self.unary()
            return All(var, body) if tok == 'all' else Ex(var, body)
        if tok == '(':
            # either a parenthesised formula or a term starting an atom
            save = self.i
            self.take()
            try:
                f = self.chain()
                self.take(')')
                if self.tok in ('=', '<=', '+', '*'):
                    raise FormulaSyntaxError('term', self.pos)
                return f
            except FormulaSyntaxError:
                self.i = save
                return self.atom()
        return self.atom()

    def atom(self):
        tok = self.tok
        if tok[:1].isupper() and not (tok == 'S' and self.toks[self.i + 1][0] == '('):
            start = self.pos
            self.take()
            args = []
            if self.tok == '(':
                self.take()
                args.append(self.term())
                while self.tok == ',':
                    self.take()
                    args.append(self.term())
                self.take(')')
            if tok == 'X' and len(args) != 1:
                raise FormulaSyntaxError('X takes exactly one argument', start)
            return Prime(tok, args)
        left = self.term()
        if self.tok in ('=', '<='):
            rel = self.take()
            return Prime(rel, (left, self.term()))
        raise FormulaSyntaxError(f'expected a relation, found {self.tok!r}', self.pos)

    # terms: sums of products of primary terms
    def term(self):
        t = self.product()
        while self.tok == '+':
            self.take()
            t = Plus(t, self.product())
        return t

    def product(self):
        t = self.primary()
        while self.tok == '*':
            self.take()
            t = Times(t, self.primary())
        return t

    def primary(self):
        tok, pos = self.tok, self.pos
        if tok == '(':
            self.take()
            t = self.term()
            self.take(')')
            return t
        if tok.isdigit():
            self.take()
            return numeral(int(tok))
        if tok == 'S' and self.toks[self.i + 1][0] == '(':
            self.take()
            self.take('(')
            t = self.term()
            self.take(')')
            return Succ(t)
        if _is_var_name(tok):
            self.take()
            if self.tok == '(':
                self.take()
                args = [self.term()]
                while self.tok == ',':
                    self.take()
                    args.append(self.term())
                self.take(')')
                return Fn(tok, args)
            return Var(tok)
        raise FormulaSyntaxError(f'expected a term, found {tok!r}', pos)


def _is_var_name(tok):
    return bool(re.fullmatch(r"[a-z_][A-Za-z0-9_']*", tok)) and tok not in ('all', 'ex')


def parse_formula(text: str) -> Formula:
    return _Parser(text).top()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if not p.at_end():
        raise FormulaSyntaxError(f'unexpected {p.tok!r}', p.pos)
    return t


def print_formula(f: Formula) -> str:
    return str(f)


def print_term(t: Term) -> str:
    return str(t)
