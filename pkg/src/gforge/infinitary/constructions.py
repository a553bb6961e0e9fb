"""Concrete infinitary derivations: truth, excluded middle, the axioms of
arithmetic with X, progressiveness, transfinite induction, and the
embedding of finite derivations."""

from functools import lru_cache

from .. import finitary as fin
from .. import ordinals as o
from .. import syntax as sx
from ..syntax import (All, And, Ex, NegPrime, Or, Prime, Succ, Var, X, ZERO,
                      decompose, eval_term, negate, numeral, substitute)
from .core import (DerivationError, InfDerivation, mk_axiom, mk_conj, mk_cut,
                   mk_disj, mk_prog, weaken)
from .transform import same_value_replace

# -- the order formula ----------------------------------------------------------


def _is_natural(order):
    return all(order.lhd(m, n) == (m < n) for m in order.domain() for n in order.domain())


def _balanced_or(items):
    if not items:
        return sx.FALSE
    if len(items) == 1:
        return items[0]
    mid = (len(items) + 1) // 2
    return Or(_balanced_or(items[:mid]), _balanced_or(items[mid:]))


def lhd_formula(order, a, b):
    """Arithmetic formula defining  a <| b  for the given coded order.

    When <| is the usual order on {0, ..., N-1} this is S(a) <= b & b <= N-1;
    otherwise a balanced disjunction of (a = m & b = n) over the pairs.
    """
    if _is_natural(order):
        return And(sx.le(Succ(a), b), sx.le(b, numeral(order.size - 1)))
    return _balanced_or([And(sx.eq(a, numeral(m)), sx.eq(b, numeral(n)))
                         for m, n in order.pairs()])


def lhd_rank(order) -> int:
    return lhd_formula(order, Var('x'), Var('y')).rank


def prog_formula(order):
    """all x (ex y (y <| x & ~X y) | X x)"""
    x, y = Var('x'), Var('y')
    return All('x', Or(Ex('y', And(lhd_formula(order, y, x), NegPrime('X', (y,)))), X(x)))


def ti_formula(order):
    """~Prog | all x. X x"""
    return Or(negate(prog_formula(order)), All('x', X(Var('x'))))


# -- truth and excluded middle --------------------------------------------------


def _nat(n):
    return o.from_nat(n)


def derive_truth(phi, search: int = 64):
    """Cut-free derivation of a true arithmetic sentence with bound rk(phi).

    Truth of quantified subformulas is decided on numerals below `search`,
    so a false universal sentence may only be detected when probed."""
    if phi.fv:
        raise DerivationError(f'not a sentence: {phi}')
    if not sx.is_arithmetic(phi) or 'X' in {r for r, _ in sx.predicates(phi)}:
        raise DerivationError(f'not an X-free arithmetic sentence: {phi}')
    if not sx.truth(phi, search):
        raise DerivationError(f'sentence is false: {phi}')
    return _truth(phi, search)


def _truth(phi, search):
    bound = _nat(phi.rank)
    if sx.is_literal(phi):
        return mk_axiom({phi}, bound)
    dec = decompose(phi)
    if dec.kind == sx.CONJUNCTIVE:
        def prem(i, phi=phi):
            comp = decompose(phi).component(i)
            if not sx.truth(comp, search):
                raise DerivationError(f'component is false: {comp}')
            return _truth(comp, search)
        return mk_conj({phi}, phi, prem, bound)
    if dec.index_set == 'pair':
        i = 0 if sx.truth(phi.left, search) else 1
    else:
        i = next((numeral(n) for n in range(search)
                  if sx.truth(dec.component(numeral(n)), search)), None)
        if i is None:
            raise DerivationError(f'no witness below {search} for {phi}')
    return mk_disj({phi}, phi, i, _truth(dec.component(i), search), bound)


def derive_excluded_middle(phi):
    """Cut-free derivation of {phi, ~phi} with bound 2 rk(phi)."""
    if phi.fv:
        raise DerivationError(f'not a sentence: {phi}')
    neg = negate(phi)
    if sx.is_literal(phi):
        return mk_axiom({phi, neg}, 0)
    conj = phi if decompose(phi).kind == sx.CONJUNCTIVE else neg
    disj = negate(conj)
    end = {conj, disj}

    def prem(i):
        c = decompose(conj).component(i)
        inner = derive_excluded_middle(c)
        return mk_disj({c, disj}, disj, i, inner, _nat(2 * c.rank + 1))

    return mk_conj(end, conj, prem, _nat(2 * phi.rank))


# -- axioms with X ---------------------------------------------------------------


def equality_axiom_x():
    """all x all y (x = y & X x -> X y)"""
    x, y = Var('x'), Var('y')
    return All('x', All('y', sx.implies(And(sx.eq(x, y), X(x)), X(y))))


def derive_equality_axiom_x():
    """Bound 6, cut-free."""
    ax = equality_axiom_x()

    def for_s(s):
        inner_all = decompose(ax).component(s)

        def for_t(t):
            B = decompose(inner_all).component(t)      # (~s=t | ~Xs) | Xt
            A = B.left
            neq, nxs = A.left, A.right
            xt = B.right
            leaf = mk_axiom({neq, nxs, xt}, 0)
            d1 = mk_disj({A, nxs, xt}, A, 0, leaf, 1)
            d2 = mk_disj({A, xt}, A, 1, d1, 2)
            d3 = mk_disj({B, xt}, B, 0, d2, 3)
            return mk_disj({B}, B, 1, d3, 4)

        return mk_conj({inner_all}, inner_all, for_t, 5)

    return mk_conj({ax}, ax, for_s, 6)


def induction_axiom(psi, x='x'):
    """psi[x/0] & all x (psi -> psi[x/Sx]) -> all x. psi"""
    step = All(x, sx.implies(psi, substitute(psi, x, Succ(Var(x)))))
    return sx.implies(And(substitute(psi, x, ZERO), step), All(x, psi))


def omega_rule_numerals(premises, target, formula, bound, cut_rank=0):
    """Conj node for `formula` = all x. phi from derivations indexed by numerals.

    premises(n) must derive a subset of target + {phi[x/n]}; a closed term t
    is routed to the premise for its value by replacing phi[x/n] by phi[x/t].
    """
    if not isinstance(formula, All):
        raise DerivationError('the w-rule needs a universal formula')

    def prem(t):
        n = eval_term(t)
        return same_value_replace(premises(n), formula.body, formula.var, numeral(n), t)

    return mk_conj(target, formula, prem, bound, cut_rank)


def derive_induction(psi, x='x', instance=None):
    """Cut-free derivation of the induction axiom for psi, bound w+4.

    psi may have further free variables if `instance` closes them."""
    if instance:
        psi = sx.substitute_many(psi, {k: v for k, v in instance.items() if k != x})
    if psi.fv - {x}:
        raise DerivationError(f'free variables besides {x}: {sorted(psi.fv - {x})}')
    full = induction_axiom(psi, x)
    A, all_psi = full.left, full.right
    not_psi0, E = A.left, A.right
    rk = psi.rank
    at = lambda n: substitute(psi, x, numeral(n))

    @lru_cache(maxsize=None)
    def D(n):
        base = {not_psi0, E, at(n)}
        if n == 0:
            return weaken(derive_excluded_middle(at(0)), extra=base)
        C = decompose(E).component(numeral(n - 1))  # psi[n-1] & ~psi[n]
        conj = mk_conj(base | {C}, C, [D(n - 1), derive_excluded_middle(at(n))],
                       _nat(2 * (rk + n - 1) + 1))
        return mk_disj(base, E, numeral(n - 1), conj, _nat(2 * (rk + n)))

    omega = o.OMEGA
    w = lambda k: o.add(omega, _nat(k))
    top = omega_rule_numerals(D, {not_psi0, E, all_psi}, all_psi, omega)
    d1 = mk_disj({not_psi0, E, full}, full, 1, top, w(1))
    d2 = mk_disj({E, full, A}, A, 0, d1, w(2))
    d3 = mk_disj({full, A}, A, 1, d2, w(3))
    return mk_disj({full}, full, 0, d3, w(4))


# -- progressiveness and transfinite induction ----------------------------------------


def derive_prog(order):
    """Cut-free derivation of Prog with bound rk(x <| y) + 6.

    Each rule application adds one component, so passing from the sequent
    {ex y (..), X t} to the disjunction takes two steps."""
    prog = prog_formula(order)
    rho = lhd_rank(order)

    def for_t(t):
        Q = decompose(prog).component(t)            # P_t | X t
        P, xt = Q.left, Q.right

        def for_s(s):
            C = decompose(P).component(s)           # s <| t & ~X s
            xs = X(s)
            conj = mk_conj({C, xs}, C, [derive_truth(C.left), mk_axiom({C.right, xs}, 0)],
                           _nat(rho + 1))
            return mk_disj({P, xs}, P, s, conj, _nat(rho + 2))

        pr = mk_prog({Q, P, xt}, xt, order, for_s, _nat(rho + 3))
        d4 = mk_disj({Q, P}, Q, 1, pr, _nat(rho + 4))
        return mk_disj({Q}, Q, 0, d4, _nat(rho + 5))

    return mk_conj({prog}, prog, for_t, _nat(rho + 6))


def derive_ti(order):
    """Cut-free derivation of TI for a finite coded order (bound rho + 4N + 3)."""
    prog = prog_formula(order)
    nprog = negate(prog)
    ti = ti_formula(order)
    all_x = ti.right
    rho = lhd_rank(order)

    @lru_cache(maxsize=None)
    def h(v):
        return max([rho + 1] + [h(m) + 1 for m in order.predecessors(v)]) + 3

    def H(t):
        v = eval_term(t)
        K = decompose(nprog).component(t)           # all y (~(y <| t) | X y) & ~X t
        B, nxt = K.left, K.right
        xt = X(t)

        def inner(s):
            D = decompose(B).component(s)           # ~(s <| t) | X s
            if order.lhd(eval_term(s), v):
                return mk_disj({nprog, xt, D}, D, 1, H(s), h(eval_term(s)) + 1)
            return mk_disj({nprog, xt, D}, D, 0, derive_truth(D.left), rho + 1)

        by = max([rho + 1] + [h(m) + 1 for m in order.predecessors(v)]) + 1
        all_y = mk_conj({nprog, xt, B}, B, inner, by)
        conj = mk_conj({nprog, xt, K}, K, [all_y, mk_axiom({xt, nxt}, 0)], by + 1)
        return mk_disj({nprog, xt}, nprog, t, conj, by + 2)

    top = max([rho + 4] + [h(v) for v in order.domain()]) + 1
    ax = mk_conj({nprog, all_x}, all_x, H, top)
    d1 = mk_disj({ti, nprog}, ti, 1, ax, top + 1)
    return mk_disj({ti}, ti, 0, d1, top + 2)


def assemble_ti(ti_deriv, prog_deriv, n: int):
    """Derivation of {X n} by a cut of TI against Prog & ex x. ~X x."""
    if len(prog_deriv.end) != 1 or len(ti_deriv.end) != 1:
        raise DerivationError('expected derivations of single formulas')
    (prog,) = prog_deriv.end
    (ti,) = ti_deriv.end
    ex_not = Ex('x', NegPrime('X', (Var('x'),)))
    C = And(prog, ex_not)
    if ti != negate(C):
        raise DerivationError('end sequents do not match: TI must be ~Prog | all x. X x')
    alpha = o.max_ord(ti_deriv.bound, prog_deriv.bound)
    xn = X(numeral(n))
    ax = mk_axiom({negate(xn), xn}, 0)
    ex = mk_disj({ex_not, xn}, ex_not, numeral(n), ax, 1)
    conj = mk_conj({C, xn}, C, [prog_deriv, ex], o.succ(alpha))
    rank = max(ti_deriv.cut_rank, C.rank + 1)
    return mk_cut({xn}, C, [conj, ti_deriv], o.add(alpha, _nat(2)), rank)


# -- embedding finite derivations --------------------------------------------------


def _close(f, sigma):
    return sx.substitute_many(f, sigma)


def embed_fin(d, closing=None):
    """Closed instance of a finite derivation as an infinitary derivation.

    Bounds are the heights of the finite subderivations; the cut rank is one
    more than the largest cut rank (0 when cut-free).  Free variables that
    only occur above the root are instantiated by 0."""
    closing = dict(closing or {})
    if fin.check_derivation(d):
        raise DerivationError('the finite derivation does not check')
    for f in d.conclusion:
        if not sx.is_arithmetic(f):
            raise DerivationError(f'not an arithmetic formula: {f}')
    free = set()
    for f in d.conclusion:
        free |= f.fv
    missing = free - closing.keys()
    if missing:
        raise DerivationError(f'substitution does not close {sorted(missing)}')
    for v, t in closing.items():
        if t.fv or not sx._is_arith_term(t):
            raise DerivationError(f'substitution for {v} is not a closed arithmetic term')
    ranks = _cut_ranks(d)
    rank = 1 + max(ranks) if ranks else 0
    return _embed(d, closing, rank)


def _cut_ranks(d):
    out = [d.principal.rank] if d.rule == 'Cut' else []
    for p in d.premises:
        out.extend(_cut_ranks(p))
    return out


def _extend(sigma, formulas):
    free = set()
    for f in formulas:
        free |= f.fv
    out = dict(sigma)
    for v in free:
        out.setdefault(v, ZERO)
    return out


def _embed(d, sigma, rank):
    for f in d.conclusion:
        if not sx.is_arithmetic(f):
            raise DerivationError(f'not an arithmetic formula: {f}')
    sigma = _extend(sigma, d.conclusion)
    end = {_close(f, sigma) for f in d.conclusion}
    bound = _nat(fin.height(d))
    if d.rule == 'Axiom':
        return mk_axiom(end, bound, rank)
    if d.rule == 'Cut':
        inner = _extend(sigma, [d.principal])
        phi = _close(d.principal, inner)
        return mk_cut(end, phi, lambda i: _embed(d.premises[i], inner, rank), bound, rank)
    phi = _close(d.principal, sigma)
    if d.rule == 'AndIntro':
        return mk_conj(end, phi, lambda i: _embed(d.premises[i], sigma, rank), bound, rank)
    if d.rule == 'OrIntro':
        return mk_disj(end, phi, d.side, lambda i: _embed(d.premises[0], sigma, rank), bound, rank)
    if d.rule == 'ExIntro':
        inner = dict(sigma)
        for v in d.witness.fv:
            inner.setdefault(v, ZERO)
        w = sx.term_substitute(d.witness, inner)
        return mk_disj(end, phi, w, lambda i: _embed(d.premises[0], inner, rank), bound, rank)
    if d.rule == 'AllIntro':
        y = d.eigenvar

        def prem(r):
            inner = dict(sigma)
            inner[y] = r
            return _embed(d.premises[0], inner, rank)

        return mk_conj(end, phi, prem, bound, rank)
    raise DerivationError(f'unknown rule {d.rule}')
