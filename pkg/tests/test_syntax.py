import pytest
from hypothesis import given, settings, strategies as st

from gforge import syntax as sx
from gforge.syntax import (All, And, Ex, NegPrime, Or, Prime, Succ, Var, X, ZERO,
                           negate, numeral, parse_formula, print_formula, substitute)

VARS = ['x', 'y', 'z']

terms = st.recursive(
    st.one_of(st.just(ZERO), st.sampled_from(VARS).map(Var)),
    lambda sub: st.one_of(sub.map(Succ), st.tuples(sub, sub).map(lambda p: sx.Plus(*p)),
                          st.tuples(sub, sub).map(lambda p: sx.Times(*p))),
    max_leaves=4)


def _lit(args):
    kind, s, t, neg = args
    if kind == 'X':
        a = Prime('X', (s,))
    else:
        a = Prime(kind, (s, t))
    return negate(a) if neg else a


literals = st.tuples(st.sampled_from(['X', '=', '<=']), terms, terms, st.booleans()).map(_lit)

formulas = st.recursive(
    literals,
    lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda p: And(*p)),
        st.tuples(sub, sub).map(lambda p: Or(*p)),
        st.tuples(st.sampled_from(VARS), sub).map(lambda p: All(*p)),
        st.tuples(st.sampled_from(VARS), sub).map(lambda p: Ex(*p))),
    max_leaves=8)


def _nnf(f):
    if isinstance(f, (Prime, NegPrime)):
        return True
    if isinstance(f, (And, Or)):
        return _nnf(f.left) and _nnf(f.right)
    return isinstance(f, (All, Ex)) and _nnf(f.body)


def _bound_vars(f):
    if isinstance(f, (And, Or)):
        return _bound_vars(f.left) | _bound_vars(f.right)
    if isinstance(f, (All, Ex)):
        return {f.var} | _bound_vars(f.body)
    return set()


def test_negation_examples():
    x = Var('x')
    assert negate(X(x)) == NegPrime('X', (x,))
    assert negate(All('x', X(x))) == Ex('x', NegPrime('X', (x,)))


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_negate_involution_and_rank(f):
    assert negate(negate(f)) == f
    assert negate(f).rank == f.rank
    assert substitute(f, 'x', Succ(Var('y'))).rank == f.rank
    assert _nnf(negate(f))


@settings(max_examples=150, deadline=None)
@given(formulas, terms)
def test_substitution_never_captures(f, t):
    g = substitute(f, 'x', t)
    want = (f.fv - {'x'}) | (t.fv if 'x' in f.fv else set())
    assert g.fv == want
    assert _nnf(g)


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_print_parse_roundtrip(f):
    assert parse_formula(print_formula(f)) == f


def test_rank_examples():
    assert X(ZERO).rank == 0
    assert All('x', X(Var('x'))).rank == 1
    assert And(X(ZERO), All('x', X(Var('x')))).rank == 2


def test_substitute_examples():
    x, y = Var('x'), Var('y')
    assert substitute(X(x), 'x', ZERO) == X(ZERO)
    assert substitute(All('x', X(x)), 'x', y) == All('x', X(x))
    g = substitute(All('y', sx.eq(x, y)), 'x', Succ(y))
    assert g.fv == {'y'}
    assert isinstance(g, All) and g.var != 'y'
    assert print_formula(g) == 'all y1. S(y)=y1'


def test_implies_and_drinker_printing():
    x = Var('x')
    assert sx.implies(X(x), X(x)) == Or(NegPrime('X', (x,)), X(x))
    P = lambda t: Prime('P', (t,))
    d = Ex('x', sx.implies(P(x), All('y', P(Var('y')))))
    assert print_formula(d) == 'ex x. (P(x) -> all y. P(y))'
    assert parse_formula('ex x. (!P(x) | all y. P(y))') == d


def test_eval():
    two = numeral(2)
    assert sx.eval_term(sx.Times(two, two)) == 4
    assert sx.eval_literal(parse_formula('S(0) <= 0')) is False
    assert sx.eval_literal(parse_formula('!0 = S(0)')) is True
    with pytest.raises(sx.NotEvaluable, match='not evaluable'):
        sx.eval_term(Var('x'))
    with pytest.raises(sx.NotEvaluable, match='not evaluable'):
        sx.eval_literal(X(ZERO))


def test_bounded_truth():
    assert sx.truth(parse_formula('all x. ex y. x <= y'))
    assert not sx.truth(parse_formula('ex x. S(x) = 0'))
    assert sx.truth(parse_formula('ex x. x + x = 4'))


def test_decompose():
    d = sx.decompose(parse_formula('0=0'))
    assert (d.kind, d.index_set) == (sx.CONJUNCTIVE, 'empty')
    d = sx.decompose(parse_formula('0=S(0)'))
    assert (d.kind, d.index_set) == (sx.DISJUNCTIVE, 'empty')
    f = parse_formula('all x. (X(x) | x=x)')
    d = sx.decompose(f)
    assert d.kind == sx.CONJUNCTIVE and d.index_set == 'terms'
    t = Succ(ZERO)
    assert d.component(t) == substitute(f.body, 'x', t)
    assert sx.decompose(X(ZERO)).kind == sx.ATOMIC_X
    assert sx.decompose(negate(X(ZERO))).kind == sx.ATOMIC_X


def test_decompose_duality_on_closed_formulas():
    closed = [parse_formula(s) for s in [
        '0=0', '0<=S(0)', 'all x. (X(x) & x=x)', '(0=0 & X(0))', 'all x. ex y. x<=y',
        'S(0)=0', '(X(0) | all y. y=y)']]
    for f in closed:
        d = sx.decompose(f)
        n = sx.decompose(negate(f))
        assert {d.kind, n.kind} in ({sx.CONJUNCTIVE, sx.DISJUNCTIVE}, {sx.ATOMIC_X})
        if d.kind == sx.CONJUNCTIVE:
            assert n.index_set == d.index_set
            idx = [0, 1] if d.index_set == 'pair' else [] if d.index_set == 'empty' \
                else [sx.closed_term(k) for k in range(5)]
            for i in idx:
                assert n.component(i) == negate(d.component(i))


def test_closed_term_enumeration():
    ts = [sx.closed_term(k) for k in range(12)]
    assert ts[0] == ZERO and ts[1] == Succ(ZERO)
    assert len(set(ts)) == len(ts)
    sizes = [t.size for t in ts]
    assert sizes == sorted(sizes)


def test_jump():
    f = X(Var('a'))
    j = sx.jump(f)
    assert j.fv == {'a'}
    assert j.rank > f.rank
    jj = sx.jump(j)
    assert jj.fv == {'a'} and _nnf(jj)
    g = parse_formula('all y. (X(y) | y <= a)')
    assert sx.jump(g).rank > g.rank


def test_guards():
    assert sx.guard_holds('Ord', (0,))
    assert sx.guard_holds('Lt', (0, 5))
    assert not sx.guard_holds('Ord', (1,))


def test_parse_examples_and_errors():
    assert parse_formula('all x. (X(x) | !X(x))') == All('x', Or(X(Var('x')), NegPrime('X', (Var('x'),))))
    assert parse_formula('!(X(0) & X(1))') == Or(NegPrime('X', (ZERO,)), NegPrime('X', (numeral(1),)))
    for bad in ['all . X(x)', 'X(0', '(X(0) &)', 'X(0,0)', 'x = ']:
        with pytest.raises(sx.FormulaSyntaxError):
            parse_formula(bad)
