"""A small combinator language for building infinitary derivations.

Infinite derivations cannot be written out, so files describe them as
compositions of the constructors.  Syntax is s-expressions; strings are
double-quoted and hold formulas, terms or ordinals in the usual text forms.

    (truth "<sentence>")              true arithmetic sentence
    (em "<sentence>")                 {phi, ~phi}
    (eq-axiom)                        equality axiom for X
    (induction "<formula>" [x])       induction axiom in the variable x
    (prog N)                          Prog for the coded order below N
    (ti N)                            TI for the coded order below N
    (assemble-ti D1 D2 n)             {X n} from TI (D1) and Prog (D2)
    (cutelim D)  (cutelim-step D)
    (embed "<file.json>" "x=t,...")   closed instance of a finite derivation
    (weaken D "<ordinal>" rank "<fm>" ...)
    (invert D "<conjunctive formula>" index)
    (reduce Dneg Dpos "<formula>")
    (replace D "<template>" x "<s>" "<t>")

Indices are integers (for pairs) or quoted terms.  `;` starts a comment.
"""

import os
import re

from .. import finitary as fin
from .. import ordinals as o
from .. import syntax as sx
from . import constructions as c
from . import transform as tr
from .core import DerivationError, weaken


class RecipeError(ValueError):
    pass


_TOK = re.compile(r'\s*(?:(;[^\n]*)|(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()";]+))')


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == '':
                break
            raise RecipeError(f'unexpected character at offset {pos}')
        pos = m.end()
        if m.group(1):
            continue
        if m.group(2):
            out.append('(')
        elif m.group(3):
            out.append(')')
        elif m.group(4) is not None:
            out.append(('str', m.group(4).replace('\\"', '"')))
        elif m.group(5):
            out.append(('sym', m.group(5)))
    return out


def parse_recipe(text: str):
    """Nested lists of ('str', s) / ('sym', s) atoms."""
    toks = _tokens(text)
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(toks):
            raise RecipeError('unexpected end of recipe')
        tok = toks[pos]
        pos += 1
        if tok == '(':
            items = []
            while pos < len(toks) and toks[pos] != ')':
                items.append(expr())
            if pos >= len(toks):
                raise RecipeError('missing ")"')
            pos += 1
            if not items or items[0][0] != 'sym':
                raise RecipeError('a combination must start with a name')
            return items
        if tok == ')':
            raise RecipeError('unexpected ")"')
        return tok

    tree = expr()
    if pos != len(toks):
        raise RecipeError('trailing input after the recipe')
    return tree


def _str(x, what):
    if isinstance(x, tuple) and x[0] == 'str':
        return x[1]
    raise RecipeError(f'expected a quoted {what}')


def _int(x, what):
    if isinstance(x, tuple) and x[0] == 'sym' and x[1].isdigit():
        return int(x[1])
    raise RecipeError(f'expected a natural number for {what}')


def _index(x):
    if isinstance(x, tuple) and x[0] == 'sym' and x[1].isdigit():
        return int(x[1])
    return sx.parse_term(_str(x, 'index'))


def _subst(text):
    out = {}
    for part in filter(None, (p.strip() for p in text.split(','))):
        if '=' not in part:
            raise RecipeError(f'expected x=term in {part!r}')
        k, v = part.split('=', 1)
        out[k.strip()] = sx.parse_term(v.strip())
    return out


def evaluate(tree, base_dir='.'):
    if isinstance(tree, tuple):
        raise RecipeError('a recipe must be a combination, not an atom')
    head, args = tree[0][1], tree[1:]
    ev = lambda t: evaluate(t, base_dir)

    def arity(*ns):
        if len(args) not in ns:
            raise RecipeError(f'{head} takes {" or ".join(map(str, ns))} arguments')

    if head == 'truth':
        arity(1)
        return c.derive_truth(sx.parse_formula(_str(args[0], 'formula')))
    if head == 'em':
        arity(1)
        return c.derive_excluded_middle(sx.parse_formula(_str(args[0], 'formula')))
    if head == 'eq-axiom':
        arity(0)
        return c.derive_equality_axiom_x()
    if head == 'induction':
        arity(1, 2)
        var = args[1][1] if len(args) == 2 else 'x'
        return c.derive_induction(sx.parse_formula(_str(args[0], 'formula')), var)
    if head in ('prog', 'ti'):
        arity(1)
        order = o.CodedOrder(_int(args[0], 'the order bound'))
        return c.derive_prog(order) if head == 'prog' else c.derive_ti(order)
    if head == 'assemble-ti':
        arity(3)
        return c.assemble_ti(ev(args[0]), ev(args[1]), _int(args[2], 'n'))
    if head == 'cutelim':
        arity(1)
        return tr.cut_elim_full(ev(args[0]))
    if head == 'cutelim-step':
        arity(1)
        return tr.cut_elim_step(ev(args[0]))
    if head == 'embed':
        arity(1, 2)
        path = os.path.join(base_dir, _str(args[0], 'file name'))
        with open(path, encoding='utf-8') as fh:
            d = fin.loads(fh.read())
        closing = _subst(_str(args[1], 'substitution')) if len(args) == 2 else {}
        return c.embed_fin(d, closing)
    if head == 'weaken':
        if len(args) < 3:
            raise RecipeError('weaken takes a derivation, a bound, a rank and formulas')
        extra = {sx.parse_formula(_str(a, 'formula')) for a in args[3:]}
        bound = o.parse_ordinal(_str(args[1], 'ordinal'))
        return weaken(ev(args[0]), bound, _int(args[2], 'rank'), extra)
    if head == 'invert':
        arity(3)
        return tr.invert(ev(args[0]), sx.parse_formula(_str(args[1], 'formula')), _index(args[2]))
    if head == 'reduce':
        arity(3)
        return tr.reduce(ev(args[0]), ev(args[1]), sx.parse_formula(_str(args[2], 'formula')))
    if head == 'replace':
        arity(5)
        var = args[2][1]
        return tr.same_value_replace(ev(args[0]), sx.parse_formula(_str(args[1], 'formula')), var,
                                     sx.parse_term(_str(args[3], 'term')),
                                     sx.parse_term(_str(args[4], 'term')))
    raise RecipeError(f'unknown combinator {head!r}')


def build(text: str, base_dir='.'):
    """Parse and evaluate a recipe."""
    try:
        return evaluate(parse_recipe(text), base_dir)
    except (sx.FormulaSyntaxError, o.OrdinalSyntaxError) as e:
        raise RecipeError(str(e)) from None


def parse_paths(spec: str):
    """`0/1/"S(0)";1/0` style path lists; elements are ints or term strings."""
    out = []
    for chunk in filter(None, (c.strip() for c in spec.split(';'))):
        path = []
        for el in chunk.split('/'):
            el = el.strip().strip('"')
            path.append(int(el) if el.isdigit() else sx.parse_term(el))
        out.append(tuple(path))
    return out


def resolve_path(d, path):
    """Integers address pairs and cuts; at term-indexed nodes they mean numerals."""
    out = []
    for el in path:
        if isinstance(el, int) and not d.is_index(el):
            el = sx.numeral(el)
        out.append(el)
        d = d.premise(el)
    return tuple(out)


__all__ = ['RecipeError', 'parse_recipe', 'evaluate', 'build', 'parse_paths',
           'resolve_path', 'DerivationError']
