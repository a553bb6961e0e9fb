"""Lazily evaluated derivations of the infinitary system with the w-rule.

A node stores its end sequent, an ordinal bound, a cut rank, a rule tag and
a premise function.  Premises are computed on demand and memoised per node.
Node-local conditions are checked when a node is built; conditions on the
(possibly infinite) premise family are checked by `local_check`.
"""

import sys
from dataclasses import dataclass, field

from .. import ordinals as o
from .. import syntax as sx
from ..syntax import Prime, decompose, eval_term, negate

sys.setrecursionlimit(max(sys.getrecursionlimit(), 200000))

AXIOM_TRUE = 'AxiomTrue'
AXIOM_X = 'AxiomX'
CONJ = 'Conj'
DISJ = 'Disj'
PROG = 'Prog'
CUT = 'Cut'
TAGS = (AXIOM_TRUE, AXIOM_X, CONJ, DISJ, PROG, CUT)


class DerivationError(ValueError):
    pass


class InfDerivation:
    """One node of a lazy derivation; treat as immutable.

    main is the principal formula (Conj, Disj, Prog), the cut formula (Cut),
    the true literal (AxiomTrue) or the pair (Xs, ~Xt) (AxiomX).
    """

    __slots__ = ('end', 'bound', 'cut_rank', 'rule', 'main', 'choice',
                 'order', '_gen', '_memo', 'label')

    def __init__(self, end, bound, cut_rank, rule, main, gen=None,
                 choice=None, order=None, label=None, memo=None):
        self.end = frozenset(end)
        self.bound = bound
        self.cut_rank = cut_rank
        self.rule = rule
        self.main = main
        self.choice = choice
        self.order = order
        self._gen = gen
        self._memo = {} if memo is None else memo
        self.label = label

    def is_index(self, i) -> bool:
        if self.rule in (AXIOM_TRUE, AXIOM_X):
            return False
        if self.rule == CUT:
            return i in (0, 1) and not isinstance(i, bool)
        if self.rule == DISJ:
            return i == self.choice and type(i) is type(self.choice)
        if self.rule == CONJ:
            return decompose(self.main).contains(i)
        # Prog
        if not (isinstance(i, sx.Term) and not i.fv and sx._is_arith_term(i)):
            return False
        return self.order.lhd(eval_term(i), eval_term(self.main.args[0]))

    def premise(self, i) -> 'InfDerivation':
        if not self.is_index(i):
            raise IndexError(f'{i} is not a premise index of this {self.rule} node')
        key = _key(i)
        got = self._memo.get(key)
        if got is None:
            got = self._gen(i)
            if not isinstance(got, InfDerivation):
                raise DerivationError(f'premise generator returned {got!r}')
            got = self._memo.setdefault(key, got)
        return got

    def component(self, i):
        """The formula that the premise at i may add to the end sequent."""
        if self.rule == CUT:
            return self.main if i == 0 else negate(self.main)
        if self.rule == PROG:
            return sx.X(i)
        return decompose(self.main).component(i)

    def sample_indices(self, budget: int):
        """A finite, deterministic sample of the premise indices."""
        if self.rule in (AXIOM_TRUE, AXIOM_X):
            return []
        if self.rule == CUT:
            return [0, 1]
        if self.rule == DISJ:
            return [self.choice]
        if self.rule == CONJ:
            dec = decompose(self.main)
            if dec.index_set == 'pair':
                return [0, 1]
            if dec.index_set == 'empty':
                return []
            return _term_sample(budget)
        target = eval_term(self.main.args[0])
        out = [sx.numeral(m) for m in self.order.predecessors(target)][:max(budget, 1)]
        for t in _term_sample(budget):
            if t not in out and self.order.lhd(eval_term(t), target):
                out.append(t)
        return out

    def signature(self):
        """Node data without the premise function (for structural comparison)."""
        return (self.rule, self.end, self.bound, self.cut_rank, self.main, self.choice)

    def __repr__(self):
        return (f'<{self.rule} bound={self.bound} rank={self.cut_rank} '
                f'end={{{", ".join(sorted(map(str, self.end)))}}}>')


def _key(i):
    return ('i', i) if isinstance(i, int) else ('t', i)


def _term_sample(budget):
    out = [sx.numeral(n) for n in range(budget)]
    seen = set(out)
    for k in range(budget):
        t = sx.closed_term(k)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def as_ordinal(b):
    if isinstance(b, int):
        return o.from_nat(b)
    if isinstance(b, o.Ordinal):
        return b
    raise TypeError(f'bound must be an Ordinal or int, got {b!r}')


def _closed_end(end):
    end = frozenset(end)
    for f in end:
        if f.fv:
            raise DerivationError(f'end sequent formula is not closed: {f}')
    return end


def x_pair(end):
    """A pair (Xs, ~Xt) in end with equal values, or None."""
    pos = {}
    for f in end:
        if isinstance(f, Prime) and f.rel == 'X':
            pos.setdefault(eval_term(f.args[0]), []).append(f)
    best = None
    for f in end:
        if isinstance(f, sx.NegPrime) and f.rel == 'X':
            for p in pos.get(eval_term(f.args[0]), ()):
                cand = (p, f)
                if best is None or (str(p), str(f)) < (str(best[0]), str(best[1])):
                    best = cand
    return best


def true_literal(end):
    lits = sorted((f for f in end if sx.is_lpa_literal(f) and sx.eval_literal(f)), key=str)
    return lits[0] if lits else None


def mk_axiom(end, bound=0, cut_rank=0, label=None):
    """AxiomTrue if end has a true arithmetic literal, else AxiomX."""
    end = _closed_end(end)
    lit = true_literal(end)
    if lit is not None:
        return InfDerivation(end, as_ordinal(bound), cut_rank, AXIOM_TRUE, lit, label=label)
    pair = x_pair(end)
    if pair is not None:
        return InfDerivation(end, as_ordinal(bound), cut_rank, AXIOM_X, pair, label=label)
    raise DerivationError('not an axiom: no true literal and no pair Xs, ~Xt with equal values')


def _wrap(premises):
    if callable(premises):
        return premises
    if isinstance(premises, (list, tuple)):
        items = tuple(premises)
        return lambda i: items[i]
    if isinstance(premises, dict):
        return lambda i: premises[i]
    raise TypeError('premises must be a callable, a sequence or a dict')


def _check_premise(node, i, p):
    if o.compare(p.bound, node.bound) is not o.Cmp.LT:
        raise DerivationError(f'bound not decreasing at premise {i}: {p.bound} vs {node.bound}')
    if p.cut_rank > node.cut_rank:
        raise DerivationError(f'cut rank increases at premise {i}')
    allowed = node.end | {node.component(i)}
    if not p.end <= allowed:
        extra = ', '.join(sorted(map(str, p.end - allowed)))
        raise DerivationError(f'premise {i} has formulas outside the allowed sequent: {extra}')


def _eager(node, premises):
    """Check premises that were passed as ready-made nodes."""
    if isinstance(premises, (list, tuple)):
        for i, p in enumerate(premises):
            if isinstance(p, InfDerivation) and node.is_index(i):
                _check_premise(node, i, p)
    return node


def mk_conj(end, principal, premises, bound, cut_rank=0, label=None):
    end = _closed_end(end)
    if principal not in end:
        raise DerivationError('principal formula is not in the end sequent')
    if decompose(principal).kind != sx.CONJUNCTIVE:
        raise DerivationError(f'not a conjunctive formula: {principal}')
    node = InfDerivation(end, as_ordinal(bound), cut_rank, CONJ, principal, _wrap(premises), label=label)
    return _eager(node, premises)


def mk_disj(end, principal, choice, premise, bound, cut_rank=0, label=None):
    end = _closed_end(end)
    if principal not in end:
        raise DerivationError('principal formula is not in the end sequent')
    dec = decompose(principal)
    if dec.kind != sx.DISJUNCTIVE:
        raise DerivationError(f'not a disjunctive formula: {principal}')
    if not dec.contains(choice):
        raise DerivationError(f'{choice} is not an index of {principal}')
    gen = premise if callable(premise) else (lambda i, p=premise: p)
    node = InfDerivation(end, as_ordinal(bound), cut_rank, DISJ, principal, gen, choice=choice, label=label)
    if isinstance(premise, InfDerivation):
        _check_premise(node, choice, premise)
    return node


def mk_prog(end, principal, order, premises, bound, cut_rank=0, label=None):
    end = _closed_end(end)
    if principal not in end:
        raise DerivationError('principal formula is not in the end sequent')
    if not (isinstance(principal, Prime) and principal.rel == 'X'):
        raise DerivationError(f'progression needs a formula X(t): {principal}')
    return InfDerivation(end, as_ordinal(bound), cut_rank, PROG, principal, _wrap(premises),
                         order=order, label=label)


def mk_cut(end, formula, premises, bound, cut_rank, label=None):
    end = _closed_end(end)
    if formula.fv:
        raise DerivationError('cut formula must be closed')
    if formula.rank >= cut_rank:
        raise DerivationError(f'cut formula rank {formula.rank} is not below cut rank {cut_rank}')
    node = InfDerivation(end, as_ordinal(bound), cut_rank, CUT, formula, _wrap(premises), label=label)
    return _eager(node, premises)


def weaken(d: InfDerivation, bound=None, cut_rank=None, extra=()) -> InfDerivation:
    """Same rule and premises with a larger end sequent, bound or rank."""
    bound = d.bound if bound is None else as_ordinal(bound)
    cut_rank = d.cut_rank if cut_rank is None else cut_rank
    if o.compare(bound, d.bound) is o.Cmp.LT:
        raise DerivationError(f'weakening cannot decrease the bound ({d.bound} to {bound})')
    if cut_rank < d.cut_rank:
        raise DerivationError('weakening cannot decrease the cut rank')
    extra = _closed_end(extra)
    if extra <= d.end and bound == d.bound and cut_rank == d.cut_rank:
        return d
    return InfDerivation(d.end | extra, bound, cut_rank, d.rule, d.main, d._gen,
                         choice=d.choice, order=d.order, label=d.label, memo=d._memo)


def with_end(d: InfDerivation, end) -> InfDerivation:
    """Replace the end sequent (caller guarantees the rule still applies)."""
    return InfDerivation(end, d.bound, d.cut_rank, d.rule, d.main, d._gen,
                         choice=d.choice, order=d.order, label=d.label, memo=d._memo)


# -- probing ------------------------------------------------------------------

@dataclass
class ProbePlan:
    """What `local_check` visits: every node up to `depth` along sampled
    indices (`budget` per infinite family), plus the explicit `paths`."""
    budget: int = 10
    depth: int = 4
    paths: list = field(default_factory=list)
    max_nodes: int = 20000


@dataclass(frozen=True)
class InfViolation:
    path: tuple
    message: str

    def __str__(self):
        return f'{"/".join(map(str, self.path)) or "root"}: {self.message}'


def node_violations(d: InfDerivation):
    out = []
    for f in d.end:
        if f.fv:
            out.append(f'open formula in end sequent: {f}')
    if d.rule not in TAGS:
        return out + [f'unknown rule {d.rule}']
    if not o.is_notation(d.bound):
        out.append('bound is not a notation')
    if d.rule == AXIOM_TRUE:
        if d.main not in d.end or not sx.is_lpa_literal(d.main) or not sx.eval_literal(d.main):
            out.append('axiom without a true literal')
    elif d.rule == AXIOM_X:
        p, n = d.main
        if p not in d.end or n not in d.end or eval_term(p.args[0]) != eval_term(n.args[0]):
            out.append('axiom without a matching pair Xs, ~Xt')
    elif d.rule == CUT:
        if d.main.rank >= d.cut_rank:
            out.append('cut rank not above the rank of the cut formula')
    else:
        if d.main not in d.end:
            out.append('principal formula missing from the end sequent')
        elif d.rule == CONJ and decompose(d.main).kind != sx.CONJUNCTIVE:
            out.append('Conj on a formula that is not conjunctive')
        elif d.rule == DISJ and decompose(d.main).kind != sx.DISJUNCTIVE:
            out.append('Disj on a formula that is not disjunctive')
    return out


def premise_violations(d, i, p):
    out = []
    if o.compare(p.bound, d.bound) is not o.Cmp.LT:
        out.append('bound not decreasing')
    if p.cut_rank > d.cut_rank:
        out.append('cut rank increasing')
    allowed = d.end | {d.component(i)}
    if not p.end <= allowed:
        out.append('premise end sequent not contained in the allowed sequent: '
                   + ', '.join(sorted(map(str, p.end - allowed))))
    return out


def follow(d: InfDerivation, path) -> InfDerivation:
    for i in path:
        d = d.premise(i)
    return d


def local_check(d: InfDerivation, plan: ProbePlan = None) -> list:
    """Visit the nodes selected by the plan and return all violations."""
    plan = plan or ProbePlan()
    out = []
    seen = 0
    stack = [((), d, 0)]
    while stack and seen < plan.max_nodes:
        path, node, depth = stack.pop()
        seen += 1
        out.extend(InfViolation(path, m) for m in node_violations(node))
        if depth >= plan.depth:
            continue
        kids = []
        for i in node.sample_indices(plan.budget):
            try:
                p = node.premise(i)
            except (DerivationError, sx.NotEvaluable, IndexError) as e:
                out.append(InfViolation(path + (i,), f'premise failed: {e}'))
                continue
            out.extend(InfViolation(path + (i,), m) for m in premise_violations(node, i, p))
            kids.append((path + (i,), p, depth + 1))
        stack.extend(reversed(kids))
    for path in plan.paths:
        node = d
        for k, i in enumerate(path):
            try:
                p = node.premise(i)
            except (DerivationError, sx.NotEvaluable, IndexError) as e:
                out.append(InfViolation(tuple(path[:k + 1]), f'premise failed: {e}'))
                break
            out.extend(InfViolation(tuple(path[:k + 1]), m) for m in premise_violations(node, i, p))
            out.extend(InfViolation(tuple(path[:k + 1]), m) for m in node_violations(p))
            node = p
    return out


def probe_paths(d: InfDerivation, count: int, length: int, budget: int = 10, seed: int = 0):
    """Deterministic pseudo-random premise paths (for tests and the CLI)."""
    import random
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        node, path = d, []
        for _ in range(length):
            idx = node.sample_indices(budget)
            if not idx:
                break
            i = idx[rng.randrange(len(idx))]
            path.append(i)
            node = node.premise(i)
        out.append(tuple(path))
    return out


def has_cut(d: InfDerivation, plan: ProbePlan) -> bool:
    stack = [(d, 0)]
    seen = 0
    while stack and seen < plan.max_nodes:
        node, depth = stack.pop()
        seen += 1
        if node.rule == CUT:
            return True
        if depth < plan.depth:
            for i in node.sample_indices(plan.budget):
                stack.append((node.premise(i), depth + 1))
    return False
