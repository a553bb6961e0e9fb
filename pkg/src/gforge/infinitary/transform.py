"""Lazy proof transformations: replacement of terms with equal values,
inversion, reduction, cut elimination, and rank extraction."""

from dataclasses import dataclass

from .. import ordinals as o
from .. import syntax as sx
from ..syntax import (All, And, Ex, NegPrime, Or, Prime, Var, decompose,
                      eval_term, negate, numeral, substitute)
from .core import (AXIOM_TRUE, AXIOM_X, CONJ, CUT, DISJ, PROG, DerivationError,
                   InfDerivation, mk_axiom, weaken)


def _rebuild(d, end, gen, main=None, bound=None, cut_rank=None):
    return InfDerivation(end, d.bound if bound is None else bound,
                         d.cut_rank if cut_rank is None else cut_rank,
                         d.rule, d.main if main is None else main, gen,
                         choice=d.choice, order=d.order, label=d.label)


# -- replacing a term by one with the same value ----------------------------------


def _template_component(phi, i):
    """The open formula whose instances are the i-th components."""
    if isinstance(phi, (And, Or)):
        return phi.left if i == 0 else phi.right
    return substitute(phi.body, phi.var, i)


def same_value_replace(d, phi, x, s, t):
    """Turn a derivation of Gamma, phi[x/s] into one of Gamma, phi[x/t].

    s and t must be closed terms with the same value.  Bound and cut rank
    are unchanged."""
    if eval_term(s) != eval_term(t):
        raise DerivationError(f'{s} and {t} have different values')
    A, B = substitute(phi, x, s), substitute(phi, x, t)
    if A == B:
        return d
    return _svr(d, phi, x, s, t, A, B)


def _svr(d, phi, x, s, t, A, B):
    if A not in d.end:
        return weaken(d, extra={B})
    end = (d.end - {A}) | {B}
    if d.rule in (AXIOM_TRUE, AXIOM_X):
        return mk_axiom(end, d.bound, d.cut_rank, label=d.label)

    def rec(p):
        return _svr(p, phi, x, s, t, A, B)

    if d.main == A and d.rule in (CONJ, DISJ):
        def gen(i):
            sub = _template_component(phi, i)
            return same_value_replace(rec(d.premise(i)), sub, x, s, t)
        return _rebuild(d, end, gen, main=B)
    if d.main == A and d.rule == PROG:
        return _rebuild(d, end, lambda i: rec(d.premise(i)), main=B)
    return _rebuild(d, end, lambda i: rec(d.premise(i)))


# -- inversion ------------------------------------------------------------------------


def invert(d, phi, i):
    """From a derivation of Gamma get one of Gamma minus {phi} plus phi_i,
    for conjunctive phi; bound and cut rank are unchanged."""
    dec = decompose(phi)
    if dec.kind != sx.CONJUNCTIVE:
        raise DerivationError(f'inversion needs a conjunctive formula: {phi}')
    comp = dec.component(i)
    return _inv(d, phi, i, comp)


def _inv(d, phi, i, comp):
    if phi not in d.end:
        return weaken(d, extra={comp})
    end = (d.end - {phi}) | {comp}
    if d.rule in (AXIOM_TRUE, AXIOM_X):
        return mk_axiom(end, d.bound, d.cut_rank, label=d.label)
    if d.rule == CONJ and d.main == phi:
        q = _inv(d.premise(i), phi, i, comp)
        return weaken(q, d.bound, d.cut_rank, extra=end)
    return _rebuild(d, end, lambda j: _inv(d.premise(j), phi, i, comp))


# -- reduction ---------------------------------------------------------------------------


def _reducible(phi):
    if isinstance(phi, NegPrime) and phi.rel == 'X':
        return True
    return decompose(phi).kind == sx.DISJUNCTIVE


def reduce(dneg, dpos, phi):
    """From derivations of Gamma, ~phi (bound a) and Gamma, phi (bound b)
    get one of Gamma with bound a + b, for phi disjunctive or ~X t."""
    if phi.fv or not _reducible(phi):
        raise DerivationError(f'reduction needs a disjunctive formula or ~X t: {phi}')
    d = max(dneg.cut_rank, dpos.cut_rank)
    if phi.rank > d:
        raise DerivationError(f'rank of {phi} exceeds the cut rank {d}')
    neg = negate(phi)
    gamma = (dneg.end - {neg}) | (dpos.end - {phi})
    dneg = weaken(dneg, cut_rank=d, extra=gamma)
    return _red(dneg, dpos, phi, neg, gamma, d)


def _red(dneg, dpos, phi, neg, gamma, d):
    bound = o.add(dneg.bound, dpos.bound)
    if phi not in dpos.end:
        return weaken(dpos, bound, d, extra=gamma)
    if dpos.rule in (AXIOM_TRUE, AXIOM_X):
        if dpos.rule == AXIOM_X and dpos.main[1] == phi:
            xs, nxt = dpos.main
            z = Var('z')
            moved = same_value_replace(dneg, Prime('X', (z,)), 'z', nxt.args[0], xs.args[0])
            return weaken(moved, bound, d, extra=gamma)
        return mk_axiom(gamma, bound, d)
    if dpos.rule == DISJ and dpos.main == phi:
        c = dpos.choice
        comp = decompose(phi).component(c)

        def gen(j):
            if j == 0:
                return reduce(weaken(dneg, extra={comp}), dpos.premise(c), phi)
            return invert(dneg, neg, c)

        return InfDerivation(gamma, bound, d, CUT, comp, gen)

    def gen(j):
        p = dpos.premise(j)
        comp = dpos.component(j)
        return reduce(weaken(dneg, extra={comp}), p, phi)

    return InfDerivation(gamma, bound, d, dpos.rule, dpos.main, gen,
                         choice=dpos.choice, order=dpos.order)


# -- cut elimination ---------------------------------------------------------------------


def cut_elim_step(d):
    """Lower the cut rank by one; the bound a becomes w^a."""
    if d.cut_rank == 0:
        raise DerivationError('nothing to eliminate')
    return _step(d, d.cut_rank - 1)


def _step(d, r):
    bound = o.omega_pow(d.bound)
    if d.rule in (AXIOM_TRUE, AXIOM_X):
        return InfDerivation(d.end, bound, r, d.rule, d.main, label=d.label)
    if d.rule == CUT and d.main.rank == r:
        phi = d.main
        q0 = _step(d.premise(0), r)          # Gamma, phi
        q1 = _step(d.premise(1), r)          # Gamma, ~phi
        if _reducible(phi):
            res = reduce(q1, q0, phi)
        else:
            res = reduce(q0, q1, negate(phi))
        return weaken(res, bound, r, extra=d.end)
    return _rebuild(d, d.end, lambda i: _step(d.premise(i), r), bound=bound, cut_rank=r)


def cut_elim_full(d):
    while d.cut_rank > 0:
        d = cut_elim_step(d)
    return d


# -- rank extraction -----------------------------------------------------------------------


@dataclass
class RankCertificate:
    o: dict            # value -> Ordinal, on the down-set of `target`
    bound: o.Ordinal   # every o-value is <= this
    target: int

    def violations(self, order):
        out = []
        for m, a in self.o.items():
            if o.compare(a, self.bound) is o.Cmp.GT:
                out.append(f'o({m}) = {a} exceeds the bound {self.bound}')
            for n, b in self.o.items():
                if order.lhd(m, n) and o.compare(a, b) is not o.Cmp.LT:
                    out.append(f'o not monotone: {m} <| {n} but o({m}) = {a}, o({n}) = {b}')
        return out


def o_function(order):
    """o(n) = least ordinal above all o(m) with m <| n, on the finite domain."""
    memo = {}

    def go(n):
        if n not in memo:
            preds = order.predecessors(n)
            memo[n] = o.succ(o.max_ord(*(go(m) for m in preds))) if preds else o.ZERO
        return memo[n]

    return go


def rank_extract(d, order):
    """Certificate that o(t) <= d.bound for an atom X t of a cut-free
    derivation of X-atoms, by induction along the derivation."""
    if d.cut_rank != 0:
        raise DerivationError('rank extraction needs a cut-free derivation')
    for f in d.end:
        if not (isinstance(f, Prime) and f.rel == 'X'):
            raise DerivationError(f'end sequent must consist of atoms X t: {f}')
    of = o_function(order)

    def certify(node):
        """Some value v with X v in node.end and o(v) <= node.bound."""
        if node.rule != PROG:
            raise DerivationError(f'unexpected rule {node.rule} in a cut-free derivation of X-atoms')
        v = eval_term(node.main.args[0])
        others = {eval_term(f.args[0]) for f in node.end}
        for m in order.predecessors(v):
            p = node.premise(numeral(m))
            w = certify(p)
            if w != m and w in others:
                return w  # o(w) <= p.bound < node.bound
            if o.compare(of(m), p.bound) is o.Cmp.GT:
                raise DerivationError(f'o({m}) = {of(m)} is not below {p.bound}')
        if o.compare(of(v), node.bound) is o.Cmp.GT:
            raise DerivationError(f'o({v}) = {of(v)} exceeds the bound {node.bound}')
        return v

    target = certify(d)
    down = {target} | _down_set(order, target)
    return RankCertificate({m: of(m) for m in sorted(down)}, d.bound, target)


def _down_set(order, n):
    out = set()
    stack = [n]
    while stack:
        for m in order.predecessors(stack.pop()):
            if m not in out:
                out.add(m)
                stack.append(m)
    return out
