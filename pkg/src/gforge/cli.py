"""Command-line front end.

Exit codes: 0 success, 1 domain error (message on stderr), 2 usage error.
"""

import argparse
import json
import os
import sys

from . import finitary as fin
from . import kruskal as kr
from . import ordinals as o
from . import syntax as sx
from .infinitary import constructions as cons
from .infinitary import core, recipes
from .infinitary import transform as tr


class DomainError(Exception):
    pass


# -- argument converters (parse failures are usage errors) ---------------------


def _conv(fn, what):
    def convert(text):
        try:
            return fn(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(f'bad {what} {text!r}: {e}')
    convert.__name__ = what
    return convert


ordinal = _conv(o.parse_ordinal, 'ordinal')
raw_ordinal = _conv(lambda t: o.parse_ordinal(t, mode='raw'), 'ordinal')
formula = _conv(sx.parse_formula, 'formula')
term = _conv(sx.parse_term, 'term')
tree = _conv(kr.parse_tree, 'tree')


def _nat(text):
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f'expected a natural number, got {text!r}')
    return int(text)


def _pos(text):
    n = _nat(text)
    if n < 1:
        raise argparse.ArgumentTypeError('expected a positive number')
    return n


def _subst(text):
    try:
        return recipes._subst(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _paths(text):
    try:
        return recipes.parse_paths(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _default_budget():
    raw = os.environ.get('GFORGE_PROBE_BUDGET', '10')
    if not raw.isdigit() or int(raw) < 1:
        raise DomainError(f'GFORGE_PROBE_BUDGET must be a positive integer, got {raw!r}')
    return int(raw)


def _read(path):
    try:
        with open(path, encoding='utf-8') as fh:
            return fh.read()
    except OSError as e:
        raise DomainError(f'cannot read {path}: {e.strerror}')


def _bool(b):
    return 'true' if b else 'false'


def _ot(a):
    return o.to_text(a) if o.is_notation(a) else o.to_brackets(a)


# -- ord --------------------------------------------------------------------------


def ord_cmp(a):
    r = str(o.compare(a.a, a.b))
    return r, r


def ord_add(a):
    r = o.add(a.a, a.b)
    return _ot(r), _ot(r)


def ord_omega(a):
    r = o.omega_pow(a.a)
    return _ot(r), _ot(r)


def ord_succ(a):
    r = o.succ(a.a)
    return _ot(r), _ot(r)


def ord_tower(a):
    r = o.omega_tower(a.a, a.n)
    return _ot(r), _ot(r)


def ord_fromnat(a):
    r = o.from_nat(a.n)
    return _ot(r), _ot(r)


def ord_length(a):
    n = o.length_measure(a.a)
    return str(n), n


def ord_validate(a):
    ok = o.is_notation(a.a)
    text = 'valid' if ok else f'not in Cantor normal form: {o.to_brackets(a.a)}'
    return text, {'valid': ok, 'brackets': o.to_brackets(a.a)}


def ord_enum(a):
    items = o.raw_trees_up_to(a.k) if a.raw else o.enumerate_up_to(a.k)
    lines = [_ot(x) for x in items]
    return lines, lines


def ord_coded(a):
    order = o.CodedOrder(a.bound)
    lines = [f'{m} {_ot(order.notation(m))}' for m in order.domain()]
    pairs = [f'{m} < {n}' for m, n in order.pairs()]
    data = {'domain': {str(m): _ot(order.notation(m)) for m in order.domain()},
            'pairs': [[m, n] for m, n in order.pairs()]}
    return lines + pairs, data


# -- formulas ----------------------------------------------------------------------


def fm_parse(a):
    s = sx.print_formula(a.f)
    return s, s


def fm_negate(a):
    s = sx.print_formula(sx.negate(a.f))
    return s, s


def fm_rank(a):
    return str(a.f.rank), a.f.rank


def fm_subst(a):
    s = sx.print_formula(sx.substitute(a.f, a.var, a.t))
    return s, s


def fm_eval(a):
    if a.f.fv:
        raise DomainError(f'not a sentence: free variables {", ".join(sorted(a.f.fv))}')
    v = sx.truth(a.f, a.search)
    return _bool(v), v


def fm_decompose(a):
    if a.f.fv:
        raise DomainError('decomposition needs a closed formula')
    dec = sx.decompose(a.f)
    lines = [f'kind: {dec.kind}', f'index set: {dec.index_set}']
    comps = []
    if dec.index_set == 'pair':
        comps = [sx.print_formula(dec.component(i)) for i in (0, 1)]
    elif dec.index_set == 'terms':
        comps = [sx.print_formula(dec.component(sx.numeral(n))) for n in range(a.show)]
    lines += [f'component: {c}' for c in comps]
    return lines, {'kind': dec.kind, 'index_set': dec.index_set, 'components': comps}


def fm_jump(a):
    s = sx.print_formula(sx.jump(a.f, a.alpha))
    return s, s


# -- finite derivations ----------------------------------------------------------------


def cmd_prove(a):
    res = fin.proof_search(a.f, a.fuel)
    if isinstance(res, fin.Found):
        d = res.derivation
        viol = fin.check_derivation(d)
        if a.emit:
            with open(a.emit, 'w', encoding='utf-8') as fh:
                fh.write(fin.dumps(d) + '\n')
        lines = ['found', f'height: {fin.height(d)}', f'cut-free: {_bool(fin.is_cut_free(d))}',
                 'check: ' + ('ok' if not viol else f'{len(viol)} violations')]
        return lines, {'result': 'found', 'height': fin.height(d), 'check': not viol}
    model = res.model
    false_atoms = sorted(sx.print_formula(f) for f in model.facts if isinstance(f, sx.Prime))
    value = model.evaluate(a.f, a.probe)
    lines = ['exhausted',
             'false atoms: ' + (', '.join(false_atoms) or '(none)'),
             f'formula in the countermodel: {_bool(value)}']
    return lines, {'result': 'exhausted', 'false_atoms': false_atoms, 'value': value}


def _load_fin(path):
    try:
        return fin.loads(_read(path))
    except (ValueError, KeyError, TypeError) as e:
        raise DomainError(f'{path}: not a derivation file ({e})')


def cmd_check(a):
    d = _load_fin(a.file)
    viol = fin.check_derivation(d)
    if viol:
        raise DomainError('\n'.join(map(str, viol)))
    return 'ok', 'ok'


def cmd_herbrand(a):
    d = _load_fin(a.file)
    terms, _ = fin.herbrand(d)
    (E,) = d.conclusion
    disj = ' | '.join(sx.print_formula(sx.substitute(E.body, E.var, t)) for t in terms)
    lines = [f'term: {sx.print_term(t)}' for t in terms] + [f'disjunction: {disj}']
    return lines, {'terms': [sx.print_term(t) for t in terms], 'disjunction': disj}


# -- infinitary derivations -------------------------------------------------------------


def _summary(d):
    end = sorted(sx.print_formula(f) for f in d.end)
    lines = [f'rule: {d.rule}', f'bound: {_ot(d.bound)}', f'cut rank: {d.cut_rank}']
    lines += [f'end: {f}' for f in end]
    return lines, {'rule': d.rule, 'bound': _ot(d.bound), 'cut_rank': d.cut_rank, 'end': end}


def _probe(d, budget, depth, paths=()):
    plan = core.ProbePlan(budget=budget, depth=depth, paths=list(paths))
    viol = core.local_check(d, plan)
    lines = [f'probe: budget {budget}, depth {depth}, {len(plan.paths)} extra paths']
    lines += ['check: ok'] if not viol else [f'violation: {v}' for v in viol]
    return lines, [str(v) for v in viol]


def _recipe(path):
    return recipes.build(_read(path), os.path.dirname(os.path.abspath(path)))


def _report(d, budget, depth, paths=()):
    lines, data = _summary(d)
    plines, viol = _probe(d, budget, depth, paths)
    data['violations'] = viol
    if viol:
        raise DomainError('\n'.join(lines + plines))
    return lines + plines, data


def inf_embed(a):
    d = cons.embed_fin(_load_fin(a.file), a.subst)
    return _report(d, a.probe or _default_budget(), a.depth)


def inf_cutelim(a):
    d = tr.cut_elim_full(_recipe(a.file))
    budget = a.probe or _default_budget()
    lines, data = _report(d, budget, a.depth)
    cut = core.has_cut(d, core.ProbePlan(budget=budget, depth=a.depth))
    lines.append(f'cuts seen: {_bool(cut)}')
    data['cuts_seen'] = cut
    return lines, data


def inf_check(a):
    d = _recipe(a.file)
    paths = [recipes.resolve_path(d, p) for p in (a.paths or [])]
    return _report(d, a.probe or _default_budget(), a.depth, paths)


def inf_prog(a):
    order = o.CodedOrder(a.bound)
    d = cons.derive_prog(order)
    lines, data = _report(d, a.probe or _default_budget(), a.depth)
    return [f'order rank: {cons.lhd_rank(order)}'] + lines, data


def inf_ti(a):
    order = o.CodedOrder(a.bound)
    ti = cons.derive_ti(order)
    lines, data = _report(ti, a.probe or _default_budget(), a.depth)
    if a.target is None:
        return lines, data
    if a.target not in order.domain():
        raise DomainError(f'{a.target} is not in the domain of the order')
    full = tr.cut_elim_full(cons.assemble_ti(ti, cons.derive_prog(order), a.target))
    cert = tr.rank_extract(full, order)
    lines += [f'target: X({a.target})', f'cut-free bound: {_ot(full.bound)}']
    lines += [f'o({m}) = {_ot(v)}' for m, v in cert.o.items()]
    bad = cert.violations(order)
    lines += ['certificate: ok'] if not bad else [f'certificate violation: {b}' for b in bad]
    data['certificate'] = {str(m): _ot(v) for m, v in cert.o.items()}
    data['cut_free_bound'] = _ot(full.bound)
    if bad:
        raise DomainError('\n'.join(lines))
    return lines, data


# -- trees --------------------------------------------------------------------------------


def tree_embed(a):
    v = kr.embeds(a.s, a.t)
    return _bool(v), v


def tree_uembed(a):
    v = kr.embeds_unordered(a.s, a.t)
    return _bool(v), v


def tree_eq(a):
    v = kr.tree_eq(a.s, a.t)
    return _bool(v), v


def tree_qembed(a):
    t = str(kr.quasi_embed(a.a))
    return t, t


def tree_height(a):
    return str(a.t.height), a.t.height


def kr_bad(a):
    v = kr.is_bad(a.trees)
    return _bool(v), v


def kr_longest(a):
    n, w = kr.longest_bad_sequence(a.nodes)
    ws = [str(t) for t in w]
    return [f'length: {n}', 'witness: ' + ' '.join(ws)], {'length': n, 'witness': ws}


def kr_wpo(a):
    rep = kr.wpo_check(kr.all_trees_up_to_height(a.height))
    data = {'trees': rep.size, 'reflexive': rep.reflexive, 'antisymmetric': rep.antisymmetric,
            'transitive': rep.transitive, 'longest_bad': rep.longest_bad,
            'witness': [str(t) for t in rep.witness]}
    if not rep.ok:
        raise DomainError('\n'.join(rep.lines()))
    return rep.lines(), data


def kr_reif(a):
    try:
        table = kr.parse_reification(_read(a.file))
    except ValueError as e:
        raise DomainError(f'{a.file}: {e}')
    viol = kr.check_reification(table)
    if viol:
        raise DomainError('\n'.join(f'violation: {v}' for v in viol))
    return f'ok ({len(table)} entries)', {'entries': len(table)}


# -- parser ------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f'{self.prog}: error: {message}\n')


def build_parser():
    p = _Parser(prog='gforge', description='Ordinal notations, proof search, infinitary '
                'derivations with cut elimination, and binary-tree embeddings.')
    p.add_argument('--json', action='store_true', help='wrap the result in a JSON envelope')
    top = p.add_subparsers(dest='group', metavar='command', parser_class=_Parser)
    top.required = True

    def cmd(sub, name, fn, help_):
        q = sub.add_parser(name, help=help_)
        q.set_defaults(fn=fn)
        return q

    # ord
    g = top.add_parser('ord', help='ordinal notations below epsilon_0').add_subparsers(
        dest='cmd', metavar='op', parser_class=_Parser)
    g.required = True
    q = cmd(g, 'cmp', ord_cmp, 'compare two trees (LT, EQ, GT)')
    q.add_argument('a', type=raw_ordinal)
    q.add_argument('b', type=raw_ordinal)
    for name, fn, h in (('add', ord_add, 'sum a + b'),):
        q = cmd(g, name, fn, h)
        q.add_argument('a', type=ordinal)
        q.add_argument('b', type=ordinal)
    for name, fn, h in (('omega', ord_omega, 'w^a'), ('succ', ord_succ, 'a + 1'),
                        ('length', ord_length, 'the length measure l(a)')):
        q = cmd(g, name, fn, h)
        q.add_argument('a', type=ordinal)
    q = cmd(g, 'tower', ord_tower, 'w^w^...^a with n exponentiations')
    q.add_argument('a', type=ordinal)
    q.add_argument('n', type=_nat)
    q = cmd(g, 'fromnat', ord_fromnat, 'the notation of a natural number')
    q.add_argument('n', type=_nat)
    q = cmd(g, 'validate', ord_validate, 'is the tree in Cantor normal form?')
    q.add_argument('a', type=raw_ordinal)
    q = cmd(g, 'enum', ord_enum, 'all notations with l <= k, ascending')
    q.add_argument('k', type=_nat)
    q.add_argument('--raw', action='store_true', help='list all trees instead')
    q = cmd(g, 'coded', ord_coded, 'the coded order on codes below a bound')
    q.add_argument('bound', type=_nat)

    # finite derivations
    q = cmd(top, 'prove', cmd_prove, 'deduction-chain proof search')
    q.add_argument('f', type=formula, metavar='formula')
    q.add_argument('--fuel', type=_pos, default=50)
    q.add_argument('--emit', metavar='FILE', help='write the derivation as JSON')
    q.add_argument('--probe', type=_pos, default=20, help='terms per quantifier in the countermodel')
    q = cmd(top, 'check', cmd_check, 'check a derivation file')
    q.add_argument('file')
    q = cmd(top, 'herbrand', cmd_herbrand, 'Herbrand terms of a cut-free derivation of ex x. theta')
    q.add_argument('file')

    # formulas
    g = top.add_parser('fm', help='formulas').add_subparsers(dest='cmd', metavar='op',
                                                            parser_class=_Parser)
    g.required = True
    for name, fn, h in (('parse', fm_parse, 'parse and print'), ('negate', fm_negate, 'negation'),
                        ('rank', fm_rank, 'rank')):
        q = cmd(g, name, fn, h)
        q.add_argument('f', type=formula, metavar='formula')
    q = cmd(g, 'subst', fm_subst, 'capture-avoiding substitution')
    q.add_argument('f', type=formula, metavar='formula')
    q.add_argument('var')
    q.add_argument('t', type=term, metavar='term')
    q = cmd(g, 'eval', fm_eval, 'truth of a sentence (quantifiers searched below --search)')
    q.add_argument('f', type=formula, metavar='formula')
    q.add_argument('--search', type=_pos, default=64)
    q = cmd(g, 'decompose', fm_decompose, 'conjunctive / disjunctive decomposition')
    q.add_argument('f', type=formula, metavar='formula')
    q.add_argument('--show', type=_nat, default=3, help='components listed for quantifiers')
    q = cmd(g, 'jump', fm_jump, 'the jump of a formula')
    q.add_argument('f', type=formula, metavar='formula')
    q.add_argument('--alpha', default='a')

    # infinitary
    g = top.add_parser('inf', help='infinitary derivations').add_subparsers(
        dest='cmd', metavar='op', parser_class=_Parser)
    g.required = True

    def probe_args(q):
        q.add_argument('--probe', type=_pos, default=None,
                       help='indices per infinite family (default $GFORGE_PROBE_BUDGET or 10)')
        q.add_argument('--depth', type=_nat, default=6)

    q = cmd(g, 'embed', inf_embed, 'embed a finite derivation')
    q.add_argument('file')
    q.add_argument('--subst', type=_subst, default={})
    probe_args(q)
    q = cmd(g, 'cutelim', inf_cutelim, 'eliminate all cuts of a recipe')
    q.add_argument('file')
    probe_args(q)
    q = cmd(g, 'check', inf_check, 'probe a recipe')
    q.add_argument('file')
    q.add_argument('--paths', type=_paths, default=None, help='e.g. "0/1;1/0/\\"S(0)\\""')
    probe_args(q)
    q = cmd(g, 'prog', inf_prog, 'derive Prog for a coded order')
    q.add_argument('bound', type=_nat)
    probe_args(q)
    q = cmd(g, 'ti', inf_ti, 'derive TI for a coded order')
    q.add_argument('bound', type=_nat)
    q.add_argument('--target', type=_nat, default=None,
                   help='also eliminate cuts for X(n) and extract the rank certificate')
    probe_args(q)

    # trees
    g = top.add_parser('tree', help='binary trees').add_subparsers(dest='cmd', metavar='op',
                                                                  parser_class=_Parser)
    g.required = True
    for name, fn, h in (('embed', tree_embed, 's <=_B t'), ('uembed', tree_uembed, 's <=_B^- t'),
                        ('eq', tree_eq, 's =_B t')):
        q = cmd(g, name, fn, h)
        q.add_argument('s', type=tree)
        q.add_argument('t', type=tree)
    q = cmd(g, 'qembed', tree_qembed, 'image of a notation under the quasi-embedding')
    q.add_argument('a', type=ordinal)
    q = cmd(g, 'height', tree_height, 'height')
    q.add_argument('t', type=tree)

    g = top.add_parser('kruskal', help='bad sequences').add_subparsers(
        dest='cmd', metavar='op', parser_class=_Parser)
    g.required = True
    q = cmd(g, 'bad', kr_bad, 'is the sequence bad?')
    q.add_argument('trees', type=tree, nargs='+')
    q = cmd(g, 'longest-bad', kr_longest, 'longest bad sequence of small trees')
    q.add_argument('--nodes', type=_pos, required=True)
    q = cmd(g, 'wpo', kr_wpo, 'order axioms and longest bad sequence on trees of bounded height')
    q.add_argument('--height', type=_nat, required=True)
    q = cmd(g, 'check-reif', kr_reif, 'check a reification table')
    q.add_argument('file')
    return p


DOMAIN_ERRORS = (DomainError, ValueError, IndexError, core.DerivationError, sx.NotEvaluable, OSError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, data = args.fn(args)
    except DOMAIN_ERRORS as e:
        if args.json:
            print(json.dumps({'ok': False, 'error': str(e)}, sort_keys=True))
        print(f'error: {e}', file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps({'ok': True, 'result': data}, sort_keys=True, ensure_ascii=False))
    else:
        print(text if isinstance(text, str) else '\n'.join(text))
    return 0


def run():
    sys.exit(main())


if __name__ == '__main__':
    run()
