"""Finite Tait calculus: derivations, checking, proof search, Herbrand terms.

Sequents are frozensets of formulas.  A rule instance is accepted when its
premises fit one of the rules with an arbitrary side context added, e.g.
an OrIntro node with conclusion C and premise P is correct when
P minus {phi_i} together with phi_0 | phi_1 is contained in C.
"""

import json
from dataclasses import dataclass, field
from itertools import count

from . import syntax as sx
from .syntax import (All, And, Ex, Fn, Formula, NegPrime, Or, Plus, Prime, Succ,
                     Term, Times, Var, ZERO, negate, parse_formula, parse_term,
                     substitute)

RULES = ('Axiom', 'AndIntro', 'OrIntro', 'AllIntro', 'ExIntro', 'Cut')


@dataclass(frozen=True)
class FinDerivation:
    rule: str
    conclusion: frozenset
    premises: tuple = ()
    principal: Formula = None   # main formula; the prime formula for Axiom, the cut formula for Cut
    side: int = None            # OrIntro: which disjunct was used
    eigenvar: str = None        # AllIntro
    witness: Term = None        # ExIntro

    def __post_init__(self):
        object.__setattr__(self, 'conclusion', frozenset(self.conclusion))
        object.__setattr__(self, 'premises', tuple(self.premises))

    @property
    def height(self):
        return height(self)


def height(d: FinDerivation) -> int:
    return 1 + max((height(p) for p in d.premises), default=-1)


def axiom(conclusion, prime=None):
    conclusion = frozenset(conclusion)
    if prime is None:
        prime = _complementary_prime(conclusion)
        if prime is None:
            raise ValueError('not an axiom: no complementary pair')
    return FinDerivation('Axiom', conclusion, (), prime)


def _complementary_prime(seq):
    for f in sorted(seq, key=str):
        if isinstance(f, NegPrime) and Prime(f.rel, f.args) in seq:
            return Prime(f.rel, f.args)
    return None


def is_cut_free(d: FinDerivation) -> bool:
    return d.rule != 'Cut' and all(is_cut_free(p) for p in d.premises)


def weaken(d: FinDerivation, extra) -> FinDerivation:
    """Add formulas to the root; the rules absorb any extra side context."""
    extra = frozenset(extra)
    if extra <= d.conclusion:
        return d
    return FinDerivation(d.rule, d.conclusion | extra, d.premises, d.principal,
                         d.side, d.eigenvar, d.witness)


# -- checking ----------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    path: tuple     # premise indices from the root
    rule: str
    message: str

    def __str__(self):
        where = '/'.join(map(str, self.path)) or 'root'
        return f'{where} [{self.rule}]: {self.message}'


def _check_node(d):
    c = d.conclusion
    if d.rule not in RULES:
        return f'unknown rule {d.rule!r}'
    want = {'Axiom': 0, 'AndIntro': 2, 'OrIntro': 1, 'AllIntro': 1, 'ExIntro': 1, 'Cut': 2}[d.rule]
    if len(d.premises) != want:
        return f'expected {want} premises, got {len(d.premises)}'
    phi = d.principal
    if d.rule == 'Axiom':
        if not isinstance(phi, Prime) or phi not in c or negate(phi) not in c:
            return 'conclusion does not contain a prime formula together with its negation'
        return None
    if d.rule == 'Cut':
        if phi is None:
            return 'missing cut formula'
        p0, p1 = (p.conclusion for p in d.premises)
        if not ((p0 - {phi}) <= c and (p1 - {negate(phi)}) <= c):
            return 'premises are not of the form Gamma,phi and Gamma,~phi'
        return None
    if phi is None or phi not in c:
        return 'principal formula missing from the conclusion'
    if d.rule == 'AndIntro':
        if not isinstance(phi, And):
            return 'principal formula is not a conjunction'
        p0, p1 = (p.conclusion for p in d.premises)
        if phi.left not in p0 or phi.right not in p1:
            return 'premise does not contain its conjunct'
        if not ((p0 - {phi.left}) <= c and (p1 - {phi.right}) <= c):
            return 'premise side formulas are not in the conclusion'
        return None
    prem = d.premises[0].conclusion
    if d.rule == 'OrIntro':
        if not isinstance(phi, Or):
            return 'principal formula is not a disjunction'
        if d.side not in (0, 1):
            return 'OrIntro needs side 0 or 1'
        part = phi.left if d.side == 0 else phi.right
        if part not in prem:
            return 'premise does not contain the chosen disjunct'
        if not (prem - {part}) <= c:
            return 'premise side formulas are not in the conclusion'
        return None
    if d.rule == 'AllIntro':
        if not isinstance(phi, All):
            return 'principal formula is not universal'
        y = d.eigenvar
        if y is None:
            return 'missing eigenvariable'
        inst = substitute(phi.body, phi.var, Var(y))
        if inst not in prem:
            return 'premise does not contain the eigenvariable instance'
        side = prem - {inst}
        if not side <= c:
            return 'premise side formulas are not in the conclusion'
        if y in phi.fv:
            return f'eigenvariable {y} is free in the principal formula'
        for f in side:
            if y in f.fv:
                return f'eigenvariable {y} is free in side formula {f}'
        return None
    if d.rule == 'ExIntro':
        if not isinstance(phi, Ex):
            return 'principal formula is not existential'
        if d.witness is None:
            return 'missing witness term'
        inst = substitute(phi.body, phi.var, d.witness)
        if inst not in prem:
            return 'premise does not contain the witness instance'
        if not (prem - {inst}) <= c:
            return 'premise side formulas are not in the conclusion'
        return None


def check_derivation(d: FinDerivation) -> list:
    """All rule violations in d (empty list means the derivation is correct)."""
    out = []
    stack = [((), d)]
    while stack:
        path, node = stack.pop()
        msg = _check_node(node)
        if msg is not None:
            out.append(Violation(path, node.rule, msg))
        for i in reversed(range(len(node.premises))):
            stack.append((path + (i,), node.premises[i]))
    out.sort(key=lambda v: v.path)
    return out


# -- serialization -----------------------------------------------------------

FORMAT = 'gforge-derivation/1'


def _node_to_json(d):
    out = {'rule': d.rule, 'conclusion': sorted(str(f) for f in d.conclusion)}
    if d.principal is not None:
        out['principal'] = str(d.principal)
    if d.side is not None:
        out['side'] = d.side
    if d.eigenvar is not None:
        out['eigenvar'] = d.eigenvar
    if d.witness is not None:
        out['witness'] = str(d.witness)
    out['premises'] = [_node_to_json(p) for p in d.premises]
    return out


def to_json(d: FinDerivation) -> dict:
    return {'format': FORMAT, 'root': _node_to_json(d)}


def dumps(d: FinDerivation) -> str:
    return json.dumps(to_json(d), indent=1, sort_keys=True) + '\n'


def _node_from_json(obj):
    if not isinstance(obj, dict) or 'rule' not in obj:
        raise ValueError('derivation node must be an object with a rule')
    fm = lambda s: parse_formula(s)
    return FinDerivation(
        obj['rule'],
        frozenset(fm(s) for s in obj.get('conclusion', [])),
        tuple(_node_from_json(p) for p in obj.get('premises', [])),
        fm(obj['principal']) if 'principal' in obj else None,
        obj.get('side'),
        obj.get('eigenvar'),
        parse_term(obj['witness']) if 'witness' in obj else None,
    )


def from_json(obj) -> FinDerivation:
    if isinstance(obj, dict) and obj.get('format') == FORMAT:
        obj = obj['root']
    return _node_from_json(obj)


def loads(text: str) -> FinDerivation:
    return from_json(json.loads(text))


# -- terms for proof search --------------------------------------------------

_CTOR_ORDER = {'0': 0, 'S': 1, '+': 2, '*': 3}


class TermEnumeration:
    """A fixed enumeration t0, t1, ... of all terms over a signature.

    Stage n adds, in order of size, every term of size <= n built from the
    first n variables; every term therefore appears at some finite stage.
    """

    def __init__(self, symbols, free_vars=()):
        self.symbols = sorted(symbols, key=lambda s: (_CTOR_ORDER.get(s[0], 4), s[0], s[1]))
        self.var_names = list(_var_order(free_vars))
        self.terms = []
        self._seen = set()
        self._stage = 0

    def variable(self, k):
        while len(self.var_names) <= k:
            self.var_names.extend(_more_vars(self.var_names, k + 1))
        return self.var_names[k]

    def _advance(self):
        self._stage += 1
        n = self._stage
        atoms = [Var(self.variable(i)) for i in range(n)]
        by_size = {1: []}
        for name, ar in self.symbols:
            if ar == 0:
                by_size[1].append(ZERO if name == '0' else Fn(name, ()))
        by_size[1].extend(atoms)
        for m in range(2, n + 1):
            out = []
            for name, ar in self.symbols:
                if ar == 0:
                    continue
                for args in _arg_tuples(by_size, ar, m - 1):
                    out.append(_build(name, args))
            by_size[m] = out
        for m in range(1, n + 1):
            for t in by_size[m]:
                if t not in self._seen:
                    self._seen.add(t)
                    self.terms.append(t)

    def term(self, k) -> Term:
        while len(self.terms) <= k:
            self._advance()
        return self.terms[k]

    def __iter__(self):
        for k in count():
            yield self.term(k)


def _build(name, args):
    if name == 'S':
        return Succ(args[0])
    if name == '+':
        return Plus(*args)
    if name == '*':
        return Times(*args)
    return Fn(name, args)


def _arg_tuples(by_size, arity, total):
    if arity == 0:
        if total == 0:
            yield ()
        return
    for s in range(1, total - arity + 2):
        for t in by_size.get(s, ()):
            for rest in _arg_tuples(by_size, arity - 1, total - s):
                yield (t,) + rest


def _var_order(free_vars):
    seen = []
    for v in sorted(free_vars):
        seen.append(v)
    return seen


def _more_vars(existing, want):
    have = set(existing)
    out = []
    for v in sx.variables():
        if len(existing) + len(out) >= want:
            break
        if v not in have:
            out.append(v)
            have.add(v)
    return out


def signature(formulas):
    syms = set()
    for f in formulas:
        syms |= sx.function_symbols(f)
    return syms


# -- proof search ------------------------------------------------------------

@dataclass
class TermModel:
    """Term model read off an open branch: P holds of t iff P(t) is not in F."""
    facts: frozenset
    terms: TermEnumeration = field(repr=False)

    def holds_atom(self, atom: Prime) -> bool:
        return Prime(atom.rel, atom.args) not in self.facts

    def evaluate(self, f: Formula, probe: int = 20) -> bool:
        """Truth in the model; quantifiers range over the first `probe` terms.
        Free variables denote themselves."""
        if isinstance(f, Prime):
            return self.holds_atom(f)
        if isinstance(f, NegPrime):
            return not self.holds_atom(f)
        if isinstance(f, And):
            return self.evaluate(f.left, probe) and self.evaluate(f.right, probe)
        if isinstance(f, Or):
            return self.evaluate(f.left, probe) or self.evaluate(f.right, probe)
        vals = (self.evaluate(substitute(f.body, f.var, self.terms.term(k)), probe)
                for k in range(probe))
        return all(vals) if isinstance(f, All) else any(vals)


@dataclass
class Found:
    derivation: FinDerivation
    cut_free: bool = True


@dataclass
class Exhausted:
    open_branch: list
    model: TermModel


def _is_leaf(seq_set):
    return _complementary_prime(seq_set) is not None


class _Search:
    def __init__(self, goal, fuel):
        self.goal = tuple(goal)
        self.fuel = fuel
        free = set()
        for f in self.goal:
            free |= f.fv
        self.terms = TermEnumeration(signature(self.goal), free)

    def first_var_not_free(self, seq):
        used = set()
        for f in seq:
            used |= f.fv
        for k in count():
            v = self.terms.variable(k)
            if v not in used:
                return v

    def run(self, seq, depth):
        """Returns ('closed', derivation) or ('open', branch)."""
        s = frozenset(seq)
        if _is_leaf(s):
            return 'closed', axiom(s)
        if depth >= self.fuel or not seq:
            return 'open', [seq]
        phi, delta = seq[0], seq[1:]
        base = delta + (phi,)

        def extend(f):
            return base if f in base else base + (f,)

        if sx.is_literal(phi):
            tag, res = self.run(base, depth + 1)
            return (tag, res if tag == 'closed' else [seq] + res)
        if isinstance(phi, And):
            kids = []
            for part in (phi.left, phi.right):
                tag, res = self.run(extend(part), depth + 1)
                if tag == 'open':
                    return 'open', [seq] + res
                kids.append(res)
            return 'closed', FinDerivation('AndIntro', s, tuple(kids), phi)
        if isinstance(phi, Or):
            side = 0 if phi.left not in delta else 1
            part = phi.left if side == 0 else phi.right
            tag, res = self.run(extend(part), depth + 1)
            if tag == 'open':
                return 'open', [seq] + res
            return 'closed', FinDerivation('OrIntro', s, (res,), phi, side=side)
        if isinstance(phi, All):
            y = self.first_var_not_free(seq)
            tag, res = self.run(extend(substitute(phi.body, phi.var, Var(y))), depth + 1)
            if tag == 'open':
                return 'open', [seq] + res
            return 'closed', FinDerivation('AllIntro', s, (res,), phi, eigenvar=y)
        # existential
        dset = frozenset(delta)
        for k in count():
            t = self.terms.term(k)
            inst = substitute(phi.body, phi.var, t)
            if inst not in dset:
                break
        tag, res = self.run(extend(inst), depth + 1)
        if tag == 'open':
            return 'open', [seq] + res
        return 'closed', FinDerivation('ExIntro', s, (res,), phi, witness=t)


def _ordered(goal):
    if isinstance(goal, Formula):
        return (goal,)
    out = []
    for f in goal:
        if f not in out:
            out.append(f)
    return tuple(out)


def proof_search(goal, fuel: int):
    """Deduction-chain search for an ordered goal sequent (a formula or a
    sequence of formulas).  fuel bounds the depth of the search tree."""
    if fuel < 1:
        raise ValueError('fuel must be at least 1')
    seq = _ordered(goal)
    search = _Search(seq, fuel)
    if not seq:
        return Exhausted([()], TermModel(frozenset(), search.terms))
    tag, res = search.run(seq, 0)
    if tag == 'closed':
        return Found(res)
    return Exhausted(res, extract_countermodel(res, search.terms))


def extract_countermodel(branch, terms: TermEnumeration = None) -> TermModel:
    facts = set()
    for seq in branch:
        facts.update(seq)
    facts = frozenset(facts)
    if _is_leaf(facts):
        raise ValueError('branch is closable')
    if terms is None:
        free = set()
        for f in facts:
            free |= f.fv
        terms = TermEnumeration(signature(facts), free)
    return TermModel(facts, terms)


# -- Herbrand terms -----------------------------------------------------------

def _quantifier_free(f):
    if sx.is_literal(f):
        return True
    if isinstance(f, (And, Or)):
        return _quantifier_free(f.left) and _quantifier_free(f.right)
    return False


def herbrand(d: FinDerivation):
    """Terms t1..tn and a derivation of {theta[x/t1], ..., theta[x/tn]} from a
    cut-free derivation of {ex x. theta}."""
    if len(d.conclusion) != 1:
        raise ValueError('precondition violated: conclusion must be a single existential formula')
    (E,) = d.conclusion
    if not isinstance(E, Ex) or not _quantifier_free(E.body):
        raise ValueError('precondition violated: conclusion must be ex x. theta with theta quantifier-free')
    if check_derivation(d):
        raise ValueError('precondition violated: derivation does not check')

    def inst(t):
        return substitute(E.body, E.var, t)

    # Each call returns a derivation whose conclusion holds only the formulas
    # actually used above, so unused instances and inferences drop out.
    def go(node):
        if node.rule == 'Axiom':
            th = node.principal
            return FinDerivation('Axiom', {th, negate(th)}, (), th), []
        if node.rule == 'ExIntro':
            if node.principal != E:
                raise ValueError('precondition violated: unexpected existential formula')
            sub, ts = go(node.premises[0])
            if inst(node.witness) not in sub.conclusion:
                return sub, ts
            return sub, _dedupe([node.witness] + ts)
        if node.rule in ('OrIntro', 'AndIntro') and not _quantifier_free(node.principal):
            raise ValueError('precondition violated: quantifier outside the displayed existential')
        phi = node.principal
        if node.rule == 'OrIntro':
            sub, ts = go(node.premises[0])
            part = phi.left if node.side == 0 else phi.right
            if part not in sub.conclusion:
                return sub, ts
            return FinDerivation('OrIntro', (sub.conclusion - {part}) | {phi}, (sub,), phi, side=node.side), ts
        if node.rule == 'AndIntro':
            (s0, t0), (s1, t1) = go(node.premises[0]), go(node.premises[1])
            if phi.left not in s0.conclusion:
                return s0, t0
            if phi.right not in s1.conclusion:
                return s1, t1
            concl = (s0.conclusion - {phi.left}) | (s1.conclusion - {phi.right}) | {phi}
            return FinDerivation('AndIntro', concl, (s0, s1), phi), _dedupe(t0 + t1)
        raise ValueError(f'precondition violated: {node.rule} is not allowed')

    out, terms = go(d)
    return terms, weaken(out, {inst(t) for t in terms})


def _dedupe(items):
    out = []
    for x in items:
        if x not in out:
            out.append(x)
    return out


def drinker_formula() -> Formula:
    return parse_formula('ex x. (P(x) -> all y. P(y))')


def drinker_derivation() -> FinDerivation:
    """The standard six-step derivation of the drinker formula."""
    D = drinker_formula()
    Px, Py = parse_formula('P(x)'), parse_formula('P(y)')
    Ay = parse_formula('all y. P(y)')
    psi_y = Or(negate(Py), Ay)
    psi_x = Or(negate(Px), Ay)
    d = axiom({negate(Py), Py})
    d = FinDerivation('OrIntro', {psi_y, Py}, (d,), psi_y, side=0)
    d = FinDerivation('ExIntro', {D, Py}, (d,), D, witness=Var('y'))
    d = FinDerivation('AllIntro', {D, Ay}, (d,), Ay, eigenvar='y')
    d = FinDerivation('OrIntro', {D, psi_x}, (d,), psi_x, side=1)
    return FinDerivation('ExIntro', {D}, (d,), D, witness=Var('x'))
