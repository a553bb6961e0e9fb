import pytest
from hypothesis import given, settings, strategies as st

from gforge import finitary as fin
from gforge import ordinals as o
from gforge import syntax as sx
from gforge.infinitary import *  # noqa: F403
from gforge.infinitary import core, recipes
from gforge.syntax import (All, And, Ex, NegPrime, Or, Plus, Prime, Succ, Var, X, ZERO,
                           negate, numeral, parse_formula)

PLAN = ProbePlan(budget=8, depth=6)
ORDER = o.CodedOrder(26)


def nat(n):
    return o.from_nat(n)


def clean(d, plan=PLAN):
    v = local_check(d, plan)
    assert v == [], [str(x) for x in v[:5]]


# closed formulas over 0, S, + with X
closed_terms = st.recursive(st.just(ZERO), lambda s: st.one_of(
    s.map(Succ), st.tuples(s, s).map(lambda p: Plus(*p))), max_leaves=3)


def _lit(args):
    kind, s, t, neg, v = args
    s = Var(v) if v else s
    a = Prime('X', (s,)) if kind == 'X' else Prime(kind, (s, t))
    return negate(a) if neg else a


lits = st.tuples(st.sampled_from(['X', '=', '<=']), closed_terms, closed_terms, st.booleans(),
                 st.sampled_from([None, 'x'])).map(_lit)
open_formulas = st.recursive(lits, lambda s: st.one_of(
    st.tuples(s, s).map(lambda p: And(*p)), st.tuples(s, s).map(lambda p: Or(*p)),
    s.map(lambda b: All('x', b)), s.map(lambda b: Ex('x', b))), max_leaves=6)
sentences = open_formulas.map(lambda f: sx.substitute(f, 'x', numeral(1)))


# -- constructors ---------------------------------------------------------------------


def test_axioms():
    ax = mk_axiom({parse_formula('0=0'), X(ZERO)})
    assert ax.rule == AXIOM_TRUE
    ax = mk_axiom({X(Plus(ZERO, numeral(1))), NegPrime('X', (numeral(1),))})
    assert ax.rule == AXIOM_X
    with pytest.raises(DerivationError):
        mk_axiom({X(ZERO), NegPrime('X', (numeral(1),))})
    with pytest.raises(DerivationError):
        mk_axiom({X(Var('x')), NegPrime('X', (Var('x'),))})


def test_eager_checks():
    ax = mk_axiom({X(ZERO), NegPrime('X', (ZERO,))}, 3)
    A = Or(X(ZERO), X(numeral(1)))
    with pytest.raises(DerivationError, match='bound not decreasing'):
        mk_disj({A, NegPrime('X', (ZERO,))}, A, 0, ax, 3)
    with pytest.raises(DerivationError):
        mk_disj({A, NegPrime('X', (ZERO,))}, A, 2, ax, 4)
    with pytest.raises(DerivationError, match='not below cut rank'):
        mk_cut({X(ZERO)}, X(ZERO), [ax, ax], 5, 0)
    with pytest.raises(DerivationError):
        mk_conj({A}, A, [ax, ax], 5)
    with pytest.raises(DerivationError):
        weaken(ax, bound=2)


def test_premise_indices_and_determinism():
    d = derive_equality_axiom_x()
    t = Plus(numeral(1), ZERO)
    assert d.is_index(t) and not d.is_index(Var('x')) and not d.is_index(0)
    with pytest.raises(IndexError):
        d.premise(Var('x'))
    p1 = follow(d, [t, ZERO])
    p2 = follow(d, [t, ZERO])
    assert p1.signature() == p2.signature()


# -- truth, excluded middle ------------------------------------------------------------


def test_truth():
    for text in ['0=0', 'all x. x<=x+S(0)', '(ex y. y+y=4 & !S(0)=0)', 'all x. ex y. S(x)<=y']:
        phi = parse_formula(text)
        d = derive_truth(phi)
        assert d.bound == nat(phi.rank) and d.cut_rank == 0
        clean(d)
    with pytest.raises(DerivationError, match='false'):
        derive_truth(parse_formula('ex x. S(x)=0'))


@settings(max_examples=20, deadline=None, derandomize=True)
@given(sentences)
def test_excluded_middle_bound(phi):
    d = derive_excluded_middle(phi)
    assert d.bound == nat(2 * phi.rank)
    assert d.cut_rank == 0
    assert d.end == frozenset({phi, negate(phi)})
    clean(d, ProbePlan(budget=4, depth=6))


# -- axioms with X -----------------------------------------------------------------


def test_equality_axiom():
    d = derive_equality_axiom_x()
    assert d.bound == nat(6) and d.cut_rank == 0
    assert d.end == frozenset({equality_axiom_x()})
    clean(d)


@pytest.mark.parametrize('text', ['X(x)', 'ex y. (y<=x & X(y))', 'all y. (X(y) | !y=x)'])
def test_induction(text):
    psi = parse_formula(text)
    d = derive_induction(psi)
    assert d.bound == o.add(o.OMEGA, nat(4)) and d.cut_rank == 0
    top = follow(d, [0, 1, 0, 1])
    assert top.bound == o.OMEGA
    for n in range(11):
        assert top.premise(numeral(n)).bound == nat(2 * (psi.rank + n))
    # a non-numeral index lands on the premise of its value
    assert top.premise(Plus(numeral(2), numeral(1))).bound == nat(2 * (psi.rank + 3))
    clean(d, ProbePlan(budget=5, depth=10))


def test_induction_with_parameters():
    psi = parse_formula('x + z = z + x')
    d = derive_induction(psi, 'x', instance={'z': numeral(2)})
    assert d.bound == o.add(o.OMEGA, nat(4))
    with pytest.raises(DerivationError):
        derive_induction(psi)


# -- Prog and TI -----------------------------------------------------------------


def test_prog_bound_and_check():
    d = derive_prog(ORDER)
    rho = lhd_rank(ORDER)
    assert rho == 1
    assert d.bound == nat(rho + 6)
    assert d.end == frozenset({prog_formula(ORDER)})
    clean(d, ProbePlan(budget=20, depth=8))


def test_lhd_formula_defines_the_order():
    for order in (ORDER, o.CodedOrder(200)):
        for m in range(-1, order.size + 1):
            for n in range(-1, order.size + 1):
                if m < 0 or n < 0:
                    continue
                f = lhd_formula(order, numeral(m), numeral(n))
                assert sx.truth(f) == order.lhd(m, n)


def test_ti_and_assembly():
    ti = derive_ti(ORDER)
    n = ORDER.size
    assert ti.bound == nat(lhd_rank(ORDER) + 4 * n + 3)
    assert ti.end == frozenset({ti_formula(ORDER)})
    clean(ti, ProbePlan(budget=6, depth=12))
    a = assemble_ti(ti, derive_prog(ORDER), 2)
    assert a.end == frozenset({X(numeral(2))})
    assert a.bound == o.add(ti.bound, nat(2))
    assert a.cut_rank == And(prog_formula(ORDER), Ex('x', NegPrime('X', (Var('x'),)))).rank + 1
    clean(a, ProbePlan(budget=4, depth=10))


def test_cut_elimination_end_to_end():
    ti = derive_ti(ORDER)
    a = assemble_ti(ti, derive_prog(ORDER), 2)
    full = cut_elim_full(a)
    assert full.cut_rank == 0
    assert full.bound == o.omega_tower(a.bound, a.cut_rank)
    plan = ProbePlan(budget=4, depth=8)
    clean(full, plan)
    assert not has_cut(full, plan)
    cert = rank_extract(full, ORDER)
    assert cert.target == 2
    assert cert.violations(ORDER) == []
    assert [cert.o[m] for m in range(3)] == [nat(0), nat(1), nat(2)]


def test_cut_elim_step_errors_and_rank_extract_preconditions():
    with pytest.raises(DerivationError, match='nothing to eliminate'):
        cut_elim_step(derive_equality_axiom_x())
    with pytest.raises(DerivationError):
        rank_extract(derive_prog(ORDER), ORDER)


def test_cut_elim_step_lowers_rank_by_one():
    a = assemble_ti(derive_ti(ORDER), derive_prog(ORDER), 1)
    s = cut_elim_step(a)
    assert s.cut_rank == a.cut_rank - 1
    assert s.bound == o.omega_pow(a.bound)
    clean(s, ProbePlan(budget=3, depth=8))


# -- transformations ---------------------------------------------------------------


def test_same_value_replace():
    one = numeral(1)
    t = Plus(ZERO, one)
    d = derive_excluded_middle(parse_formula('all y. (X(y) | !y=S(0))'))
    phi = parse_formula('all y. (X(y) | !y=x)')
    r = same_value_replace(d, phi, 'x', one, t)
    assert r.bound == d.bound and r.cut_rank == d.cut_rank
    assert sx.substitute(phi, 'x', t) in r.end
    clean(r)
    with pytest.raises(DerivationError):
        same_value_replace(d, phi, 'x', one, ZERO)


INVERT_CASES = [
    (lambda: derive_excluded_middle(parse_formula('all x. (X(x) | x=0)')),
     parse_formula('all x. (X(x) | x=0)')),
    (derive_equality_axiom_x, equality_axiom_x()),
    (lambda: derive_prog(ORDER), prog_formula(ORDER)),
    (lambda: derive_truth(parse_formula('all x. (x=x & 0<=x)')), parse_formula('all x. (x=x & 0<=x)')),
    (lambda: derive_excluded_middle(parse_formula('(X(0) & all y. X(y))')),
     parse_formula('(X(0) & all y. X(y))')),
]


@pytest.mark.parametrize('k', range(len(INVERT_CASES)))
def test_inversion_preserves_bound_and_rank(k):
    make, phi = INVERT_CASES[k]
    d = make()
    dec = sx.decompose(phi)
    idx = [0, 1] if dec.index_set == 'pair' else [numeral(2), Plus(numeral(1), numeral(1))]
    for i in idx:
        inv = invert(d, phi, i)
        assert inv.bound == d.bound and inv.cut_rank == d.cut_rank
        assert inv.end <= (d.end - {phi}) | {dec.component(i)}
        paths = probe_paths(inv, 20, 5, budget=5, seed=k)
        clean(inv, ProbePlan(budget=3, depth=3, paths=paths))


def test_inversion_rejects_disjunctive():
    with pytest.raises(DerivationError):
        invert(derive_equality_axiom_x(), parse_formula('ex x. X(x)'), ZERO)


REDUCE_CASES = [
    parse_formula('ex x. x=S(0)'),
    parse_formula('(0=S(0) | all x. x=x)'),
    parse_formula('ex x. (x=S(0) & all y. y<=y+x)'),
]


@pytest.mark.parametrize('phi', REDUCE_CASES)
def test_reduce_bound_is_sum(phi):
    r = phi.rank + 1
    dneg = weaken(derive_excluded_middle(phi), cut_rank=r)
    dpos = weaken(derive_truth(phi), cut_rank=r)
    red = reduce(dneg, dpos, phi)
    assert red.bound == o.add(dneg.bound, dpos.bound)
    assert red.end == frozenset({phi})
    clean(red, ProbePlan(budget=4, depth=8))


def test_reduce_on_negated_x_atom():
    one, t = numeral(1), Plus(ZERO, numeral(1))
    n1, n0 = NegPrime('X', (one,)), NegPrime('X', (ZERO,))
    C = Or(X(t), X(ZERO))
    dpos = mk_disj({C, n1}, C, 0, mk_axiom({X(t), n1}), 1)             # Gamma, ~X1
    dneg = weaken(mk_disj({C, n0}, C, 1, mk_axiom({X(ZERO), n0}), 1), extra={X(one)})
    red = reduce(dneg, dpos, n1)
    assert red.bound == o.add(dneg.bound, dpos.bound)
    assert red.end == frozenset({C, n0})
    clean(red)


def test_reduce_rejects_rank_above_cut_rank():
    phi = parse_formula('ex x. x=S(0)')
    with pytest.raises(DerivationError):
        reduce(derive_excluded_middle(phi), derive_truth(phi), phi)


# -- embedding ---------------------------------------------------------------------


def test_embed_search_proof():
    goal = parse_formula('ex x. (X(x) -> all y. X(y))')
    d = fin.proof_search(goal, 40).derivation
    e = embed_fin(d)
    assert e.cut_rank == 0
    assert e.bound == nat(fin.height(d))
    assert e.end == frozenset({goal})
    clean(e, ProbePlan(budget=5, depth=25))


def test_embed_with_cut_then_eliminate():
    A = parse_formula('all y. (X(y) | !X(y))')
    B = parse_formula('(X(x) | !X(x))')
    dA = fin.proof_search(A, 20).derivation
    dnA = fin.proof_search([negate(A), B], 20).derivation
    cut = fin.FinDerivation('Cut', {B}, (fin.weaken(dA, {B}), dnA), A)
    assert fin.check_derivation(cut) == []
    e = embed_fin(cut, {'x': numeral(3)})
    assert e.cut_rank == A.rank + 1
    assert e.end == frozenset({sx.substitute(B, 'x', numeral(3))})
    clean(e)
    full = cut_elim_full(e)
    assert full.cut_rank == 0
    assert full.bound == o.omega_tower(e.bound, e.cut_rank)
    plan = ProbePlan(budget=4, depth=12)
    clean(full, plan)
    assert not has_cut(full, plan)
    with pytest.raises(DerivationError, match='does not close'):
        embed_fin(cut)


def test_embed_rejects_non_arithmetic():
    d = fin.proof_search(fin.drinker_formula(), 30).derivation
    with pytest.raises(DerivationError):
        embed_fin(d)


# -- recipes -----------------------------------------------------------------------


def test_recipes(tmp_path):
    d = recipes.build('(assemble-ti (ti 26) (prog 26) 2)')
    assert d.rule == CUT and d.cut_rank == 7
    e = recipes.build('; comment\n(cutelim (weaken (em "all x. X(x)") "w" 2))')
    assert e.cut_rank == 0 and e.bound == o.omega_tower(o.OMEGA, 2)
    r = recipes.build('(replace (em "X(S(0))") "X(x)" x "S(0)" "0+S(0)")')
    assert X(Plus(ZERO, numeral(1))) in r.end
    i = recipes.build('(invert (eq-axiom) "all x. all y. ((x=y & X(x)) -> X(y))" "S(0)")')
    assert i.bound == nat(6)
    p = fin.proof_search(parse_formula('(X(x) | !X(x))'), 5).derivation
    (tmp_path / 'd.json').write_text(fin.dumps(p))
    em = recipes.build('(embed "d.json" "x=0")', str(tmp_path))
    assert em.rule == DISJ and em.end == frozenset({parse_formula('(X(0) | !X(0))')})
    for bad in ['(nope)', '(ti)', '(ti 26', 'ti', '(truth "ex x. S(x)=0")', '(em "X(")']:
        with pytest.raises(ValueError):
            recipes.build(bad)
    paths = recipes.parse_paths('0/0/1;1/0/"S(0)"')
    assert paths == [(0, 0, 1), (1, 0, Succ(ZERO))]
    assert recipes.resolve_path(d, (0, 0, 1))[-1] == numeral(1)
