"""Normal forms in the multilinear free Lie operad, grafting, and a
truncated Baker-Campbell-Hausdorff expansion.

Bracket words are binary trees: a leaf is a slot label (int, or str for
the two-letter BCH series), an internal node is a 2-tuple (left, right).
The normal-form basis consists of left-normed words
[[...[l1, l2], l3], ...], stored as plain tuples (l1, ..., lm), with the
minimal label in the leading position; the multilinear arity-m span has
dimension (m-1)!.

Storage convention: words are kept unshifted, with the d = 1 sign rule
[x, y] = -[y, x]; all degree-shift bookkeeping for even d lives in the
polydifferential layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations


# -- bracket expression grammar ---------------------------------------
#
#   expr := INT | "[" expr "," expr "]"

class BracketParseError(ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


def parse_bracket(text):
    """Parse a bracket expression into a tree; whitespace insensitive."""
    pos = 0
    n = len(text)

    def location(p):
        line = text.count("\n", 0, p) + 1
        column = p - (text.rfind("\n", 0, p) + 1) + 1
        return line, column

    def fail(msg, p):
        raise BracketParseError(msg, *location(p))

    def skip_ws(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    def expr(p):
        p = skip_ws(p)
        if p >= n:
            fail("unexpected end of input", p)
        if text[p] == "[":
            left, p = expr(p + 1)
            p = skip_ws(p)
            if p >= n or text[p] != ",":
                fail("expected ','", p)
            right, p = expr(p + 1)
            p = skip_ws(p)
            if p >= n or text[p] != "]":
                fail("expected ']'", p)
            return (left, right), p + 1
        start = p
        while p < n and text[p].isdigit():
            p += 1
        if p == start:
            fail(f"expected integer or '[', got {text[p]!r}", p)
        return int(text[start:p]), p

    tree, pos = expr(pos)
    pos = skip_ws(pos)
    if pos != n:
        fail(f"trailing input {text[pos]!r}", pos)
    return tree


def pretty_bracket(tree):
    if isinstance(tree, tuple):
        return f"[{pretty_bracket(tree[0])}, {pretty_bracket(tree[1])}]"
    return str(tree)


# -- tree helpers -----------------------------------------------------

def tree_leaves(tree):
    if isinstance(tree, tuple):
        return tree_leaves(tree[0]) + tree_leaves(tree[1])
    return (tree,)


def word_to_tree(word):
    """Left-normed tuple (l1, ..., lm) -> ((...(l1, l2), l3), ..., lm)."""
    tree = word[0]
    for label in word[1:]:
        tree = (tree, label)
    return tree


def assoc_expand(tree):
    """Expand a bracket tree in the free associative algebra, [a, b] = ab - ba.

    Returns a dict mapping label tuples to Fractions.  This is an
    independent oracle for Lie identities: the expansion is faithful.
    """
    if not isinstance(tree, tuple):
        return {(tree,): Fraction(1)}
    left = assoc_expand(tree[0])
    right = assoc_expand(tree[1])
    out = {}
    for wa, ca in left.items():
        for wb, cb in right.items():
            c = ca * cb
            out[wa + wb] = out.get(wa + wb, Fraction(0)) + c
            out[wb + wa] = out.get(wb + wa, Fraction(0)) - c
    return {w: c for w, c in out.items() if c != 0}


# -- multilinear normal form ------------------------------------------

def _add_into(target, source, scale=Fraction(1)):
    for k, v in source.items():
        nv = target.get(k, Fraction(0)) + scale * v
        if nv == 0:
            target.pop(k, None)
        else:
            target[k] = nv


def _expand_left(a, b):
    """[a, b] for left-normed words with first(a) < first(b); the result
    is a combination of left-normed words starting with first(a)."""
    if len(b) == 1:
        return {a + b: Fraction(1)}
    out = {}
    for w, c in _expand_left(a, b[:-1]).items():
        _add_into(out, {w + b[-1:]: c})
    for w, c in _expand_left(a + b[-1:], b[:-1]).items():
        _add_into(out, {w: -c})
    return out


def _bracket_words(a, b):
    """Bracket of two minimal-leading left-normed words on disjoint labels."""
    if a[0] < b[0]:
        return _expand_left(a, b)
    return {w: -c for w, c in _expand_left(b, a).items()}


def _normalize_tree(tree):
    if not isinstance(tree, tuple):
        return {(tree,): Fraction(1)}
    left = _normalize_tree(tree[0])
    right = _normalize_tree(tree[1])
    out = {}
    for wa, ca in left.items():
        for wb, cb in right.items():
            _add_into(out, _bracket_words(wa, wb), ca * cb)
    return out


@dataclass(frozen=True)
class LieElement:
    """Exact linear combination of normal-form bracket words of one arity."""

    arity: int
    terms: dict
    parity_d: int = 1

    def __post_init__(self):
        object.__setattr__(self, "terms",
                           {w: Fraction(c) for w, c in self.terms.items()
                            if c != 0})

    def is_zero(self):
        return not self.terms

    def scaled(self, c):
        return LieElement(self.arity, {w: v * c for w, v in self.terms.items()},
                          self.parity_d)

    def __add__(self, other):
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        out = dict(self.terms)
        _add_into(out, other.terms)
        return LieElement(self.arity, out, self.parity_d)

    def __sub__(self, other):
        return self + other.scaled(Fraction(-1))

    def __eq__(self, other):
        return (isinstance(other, LieElement)
                and self.arity == other.arity and self.terms == other.terms)

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.terms.items()))))

    def assoc_expansion(self):
        out = {}
        for w, c in self.terms.items():
            _add_into(out, assoc_expand(word_to_tree(w)), c)
        return out


def normalize(exprs, d=1):
    """Normalize a bracket tree, or list of (coeff, tree), to a LieElement.

    All trees must share one leaf set with every slot label occurring
    exactly once; otherwise a ValueError is raised.
    """
    if not isinstance(exprs, list):
        exprs = [(Fraction(1), exprs)]
    leafset = None
    out = {}
    for coeff, tree in exprs:
        leaves = tree_leaves(tree)
        if len(set(leaves)) != len(leaves):
            raise ValueError(f"repeated slot label in {pretty_bracket(tree)}")
        if leafset is None:
            leafset = frozenset(leaves)
        elif frozenset(leaves) != leafset:
            raise ValueError("inconsistent leaf sets")
        _add_into(out, _normalize_tree(tree), Fraction(coeff))
    arity = len(leafset) if leafset is not None else 0
    return LieElement(arity, out, d)


def basis_words(m):
    """All normal-form words of arity m with leaf set {1..m}."""
    return [(1,) + rest for rest in permutations(range(2, m + 1))]


def dim_lie(m):
    """Dimension of the span of all normalized words of arity m: (m-1)!."""
    if m < 1:
        raise ValueError("arity must be positive")
    return len(basis_words(m))


def _relabel_tree(tree, mapping):
    if isinstance(tree, tuple):
        return (_relabel_tree(tree[0], mapping), _relabel_tree(tree[1], mapping))
    return mapping[tree]


def _substitute_leaf(tree, label, replacement):
    if isinstance(tree, tuple):
        return (_substitute_leaf(tree[0], label, replacement),
                _substitute_leaf(tree[1], label, replacement))
    return replacement if tree == label else tree


def graft(outer, slot, inner):
    """Operadic partial composition: substitute `inner` into slot `slot`.

    Inner labels are shifted to occupy slot..slot+k-1; outer labels above
    the slot shift up by k-1.  Sign-neutral: Koszul signs for even d are
    the caller's responsibility.
    """
    if not 1 <= slot <= outer.arity:
        raise ValueError(f"slot {slot} out of range 1..{outer.arity}")
    k = inner.arity
    sentinel = object()
    outer_map = {j: (j if j < slot else sentinel if j == slot else j + k - 1)
                 for j in range(1, outer.arity + 1)}
    inner_map = {j: j + slot - 1 for j in range(1, k + 1)}
    combos = []
    for wo, co in outer.terms.items():
        to = _relabel_tree(word_to_tree(wo), outer_map)
        for wi, ci in inner.terms.items():
            ti = _relabel_tree(word_to_tree(wi), inner_map)
            combos.append((co * ci, _substitute_leaf(to, sentinel, ti)))
    if not combos:
        return LieElement(outer.arity + k - 1, {}, outer.parity_d)
    return normalize(combos, outer.parity_d)


# -- truncated BCH ----------------------------------------------------

def _series_mul(a, b, order):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            if len(wa) + len(wb) > order:
                continue
            w = wa + wb
            out[w] = out.get(w, Fraction(0)) + ca * cb
    return {w: c for w, c in out.items() if c != 0}


def _exp_series(letter, order):
    out = {(): Fraction(1)}
    for k in range(1, order + 1):
        out[(letter,) * k] = Fraction(1, math.factorial(k))
    return out


def bch_truncated(order, letters=("X", "Y")):
    """Homogeneous components of log(e^X e^Y) through the given order.

    Returns a dict: n -> combination of left-normed bracket words (label
    tuples) with exact coefficients.  Words are lightly normalized so the
    first label is the smaller letter; deeper relations between repeated-
    letter words are not reduced, so compare results via
    `left_normed_assoc_expansion`.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    x, y = letters
    prod = _series_mul(_exp_series(x, order), _exp_series(y, order), order)
    u = {w: c for w, c in prod.items() if w}
    log = {}
    power = {(): Fraction(1)}
    for k in range(1, order + 1):
        power = _series_mul(power, u, order)
        _add_into(log, power, Fraction((-1) ** (k + 1), k))
    out = {n: {} for n in range(1, order + 1)}
    for w, c in log.items():
        n = len(w)
        # Dynkin projection: w -> [[..[w1,w2],..],wn] / n
        coeff = c / n
        if n >= 2:
            if w[0] == w[1]:
                continue
            if w[0] > w[1]:
                w = (w[1], w[0]) + w[2:]
                coeff = -coeff
        _add_into(out[n], {w: coeff})
    return out


def left_normed_assoc_expansion(combo):
    """Associative expansion of a combination of left-normed words."""
    out = {}
    for w, c in combo.items():
        _add_into(out, assoc_expand(word_to_tree(w)), c)
    return out
