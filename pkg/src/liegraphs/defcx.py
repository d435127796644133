"""Deformation complexes of the shifted-Lie morphisms into Lie, the
graph operad, and the polydifferential operad, together with the
Kontsevich graph complexes fcGC_d / GC_d.

A deformation element of arity n is an (anti)invariant element of the
target's arity-n space: for d odd invariance is twisted by the sign of
the label permutation, for d even it is plain (stored Lie words follow
the d = 1 rule, which absorbs an extra sign twist for even d).  The
differential is

    delta x = mu o_1 x + mu o_2 x - (-1)^{|x|} sum_i x o_i mu

followed by the symmetrizer (a projector: average, not sum), where mu
is the image of the binary bracket in the target and |x| is the
deformation degree d(n-1) + (internal degree).

Generators of fcGC_d are connected graphs up to relabeling; the
differential follows the printed formula: -2 times the sum of univalent
attachments plus the sum of vertex splittings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations

from . import linalg, poly
from .gra import GraElement, compose as gra_compose, element as gra_element
from .gra import lie_to_gra, s_action as gra_s_action
from .graphs import OrientedGraph, canonicalize, enumerate_graphs, perm_sign
from .lie import LieElement, basis_words, graft, normalize, word_to_tree
from .linalg import SparseMatrix
from .poly import OElement, make_term, o_compose


# -- target dispatch --------------------------------------------------

def _target_of(x):
    if isinstance(x, LieElement):
        return "lie"
    if isinstance(x, GraElement):
        return "gra"
    if isinstance(x, OElement):
        return "olie"
    raise TypeError(f"unsupported deformation element {type(x).__name__}")


def bracket_generator(d, target):
    """The image mu of the binary bracket in the target operad."""
    if target == "lie":
        return LieElement(2, {(1, 2): Fraction(1)}, d)
    if target == "gra":
        return lie_to_gra(d)
    if target == "olie":
        return make_term(2, d, [(1, 2)])
    raise ValueError(f"unknown target {target!r}")


def _lie_relabel(x: LieElement, sigma):
    combos = [(c, _map_tree(word_to_tree(w), sigma))
              for w, c in x.terms.items()]
    if not combos:
        return x
    return normalize(combos, x.parity_d)


def _map_tree(tree, sigma):
    if isinstance(tree, tuple):
        return (_map_tree(tree[0], sigma), _map_tree(tree[1], sigma))
    return sigma[tree - 1]


def _compose(d, target, a, i, b):
    if target == "gra":
        return gra_compose(a, i, b)
    if target == "olie":
        return o_compose(a, i, b)
    # stored Lie words use the unsuspended sign rule; correct by the
    # operadic suspension sign for even d
    out = graft(a, i, b)
    if d % 2 == 0 and (i - 1) * (b.arity - 1) % 2 == 1:
        out = out.scaled(Fraction(-1))
    return out


def _act(d, target, x, sigma):
    """Native symmetric action in stored coordinates."""
    if target == "gra":
        return gra_s_action(x, sigma)
    if target == "olie":
        return poly.s_action(x, sigma)
    out = _lie_relabel(x, sigma)
    if d % 2 == 0:
        out = out.scaled(Fraction(perm_sign(list(sigma))))
    return out


_PLAIN_CHANGES = {}


def _plain_changes(n):
    """Adjacent-swap positions (0-based) visiting all of S_n once."""
    if n in _PLAIN_CHANGES:
        return _PLAIN_CHANGES[n]
    if n <= 1:
        out = []
    else:
        sub = _plain_changes(n - 1)
        out = []
        for k in range(len(sub) + 1):
            if k % 2 == 0:
                out.extend(range(n - 2, -1, -1))
            else:
                out.extend(range(0, n - 1))
            if k < len(sub):
                out.append(sub[k] + (1 if k % 2 == 0 else 0))
    _PLAIN_CHANGES[n] = out
    return out


def symmetrize(x, d=None):
    """(Anti)symmetrizer projector: average over label permutations,
    sign-twisted for d odd.

    Walks S_n by adjacent transpositions so every step is a cheap
    neighbor swap instead of an arbitrary relabeling."""
    target = _target_of(x)
    if d is None:
        d = x.d if target != "lie" else x.parity_d
    n = x.arity
    merged = {}
    scale = Fraction(1, math.factorial(n))
    odd = d % 2 == 1
    sgn = 1

    def absorb(y, tw):
        for tt, cc in y.terms.items():
            nv = merged.get(tt, Fraction(0)) + tw * cc
            if nv == 0:
                merged.pop(tt, None)
            else:
                merged[tt] = nv

    # identity pass normalizes inputs whose terms are not yet in basis form
    current = _act(d, target, x, tuple(range(1, n + 1)))
    absorb(current, scale)
    for pos in _plain_changes(n):
        tau = list(range(1, n + 1))
        tau[pos], tau[pos + 1] = tau[pos + 1], tau[pos]
        current = _act(d, target, current, tuple(tau))
        if odd:
            sgn = -sgn
        absorb(current, scale * sgn if odd else scale)
    if target == "lie":
        return LieElement(n, merged, x.parity_d)
    if target == "gra":
        return GraElement(n, x.d, merged)
    return OElement(n, x.d, merged, x.kind)


def def_degree(x, d=None):
    """Deformation degree d(n-1) + internal degree."""
    target = _target_of(x)
    if d is None:
        d = x.d if target != "lie" else x.parity_d
    n = x.arity
    if target == "lie":
        internal = (n - 1) * (1 - d)
    elif target == "gra":
        counts = {g.n_edges() for g in x.terms}
        if len(counts) > 1:
            raise ValueError("inhomogeneous edge count")
        internal = (1 - d) * (counts.pop() if counts else 0)
    else:
        internal = x.degree() or 0
    return d * (n - 1) + internal


def def_differential(x, d=None):
    """Differential of the invariant projection of x:

        delta(Px) = P(mu o_1 x + mu o_2 x)
                    - (-1)^{|x|} sum_i c_i P(x o_i mu)

    where P is the symmetrizer.  For d even all weights c_i are 1; for
    d odd expanding slot i into two strands twists the label-ordering
    sign by the inversions at i, and averaging that twist over P leaves
    c_i = 0 for n even and (-1)^{i+1}/n for n odd.  On invariant
    elements (the complex itself) this agrees with symmetrizing the
    plain bracket formula."""
    target = _target_of(x)
    if d is None:
        d = x.d if target != "lie" else x.parity_d
    n = x.arity
    mu = bracket_generator(d, target)
    out = symmetrize(_compose(d, target, mu, 1, x)
                     + _compose(d, target, mu, 2, x), d)
    sign = Fraction((-1) ** (def_degree(x, d) % 2))
    if d % 2 == 1 and n % 2 == 0:
        return out
    splits = None
    for i in range(1, n + 1):
        w = Fraction(1) if d % 2 == 0 else Fraction((-1) ** (i + 1), n)
        piece = _compose(d, target, x, i, mu).scaled(sign * w)
        splits = piece if splits is None else splits + piece
    return out - symmetrize(splits, d)


# -- the graph complexes ----------------------------------------------

def _add_class(out, graph, coeff):
    sc = canonicalize(graph, permute_vertices=True)
    if sc.is_zero() or coeff == 0:
        return
    key = sc.canonical
    nv = out.get(key, Fraction(0)) + sc.sign * coeff
    if nv == 0:
        out.pop(key, None)
    else:
        out[key] = nv


_GC_DIFF_CACHE = {}


def gc_differential(g: OrientedGraph, min_valence=1):
    """Differential of one graph generator, keyed by canonical unlabeled
    graphs.

    Computed as the deformation-complex differential on a labelled
    representative (class reduction makes the symmetrizer redundant):
    bracketing from the outside contributes the univalent attachments,
    the compositions at the vertices contribute the splittings --
    matching the printed attachment-plus-splitting formula, with the
    attachment multiplicity emerging from the two bracket slots.
    min_valence=3 projects onto the subcomplex of at-least-trivalent
    graphs."""
    cached = _GC_DIFF_CACHE.get((g, min_valence))
    if cached is not None:
        return dict(cached)
    d, n = g.d, g.n_vertices
    e = gra_element(g)
    mu = lie_to_gra(d)
    raw = gra_compose(mu, 1, e) + gra_compose(mu, 2, e)
    sign = Fraction((-1) ** (def_degree(e, d) % 2))
    for v in range(1, n + 1):
        if d % 2 == 1:
            # for odd d, expanding slot v into two strands twists the
            # label-ordering sign by the inversions at v; averaging that
            # twist over the symmetrizer leaves the scalar weight
            # (1/n!) sum_sigma (-1)^{inv_v} = 0 (n even), ±1/n (n odd)
            if n % 2 == 0:
                continue
            weight = Fraction((-1) ** (v + 1), n)
        else:
            weight = Fraction(1)
        raw = raw - gra_compose(e, v, mu).scaled(sign * weight)
    out = {}
    for G, c in raw.terms.items():
        _add_class(out, G, c)
    if min_valence > 1:
        out = {G: c for G, c in out.items()
               if min(G.valences()) >= min_valence}
    _GC_DIFF_CACHE[(g, min_valence)] = out
    return dict(out)


def gc_differential_combo(combo, min_valence=1):
    """Linear extension of gc_differential to dicts graph -> coeff."""
    out = {}
    for g, c in combo.items():
        for G, cv in gc_differential(g, min_valence).items():
            nv = out.get(G, Fraction(0)) + c * cv
            if nv == 0:
                out.pop(G, None)
            else:
                out[G] = nv
    return out


def map_F(x: OElement) -> GraElement:
    """Chain map to the graph complex: project each term modulo the
    internal-edge ideal (whites become graph vertices)."""
    return poly.quotient_to_gra(x)


def to_gc_classes(y: GraElement):
    """Forget labels: express a (symmetrized) graph element as a
    combination of canonical unlabeled graphs, one representative per
    nonzero class with the coefficient of its canonical labelling."""
    out = {}
    for g, c in y.terms.items():
        sc = canonicalize(g, permute_vertices=True)
        if sc.is_zero():
            continue
        if sc.canonical not in out:
            out[sc.canonical] = sc.sign * c
    return out


# -- slice bases ------------------------------------------------------

_GC_BOUNDS = (7, 12)      # vertices, edges
_DEF_O_BOUNDS = (4, 4)    # arity, internal vertices
_DEF_LIE_BOUND = 6        # arity


@dataclass(frozen=True)
class SliceBasis:
    complex_id: str
    d: int
    key: tuple
    basis: tuple           # generators: graphs, or coordinate dicts
    matrix: SparseMatrix   # differential into the successor slice


def _o_slice_terms(n, k, d):
    """Canonical connected term tuples of arity n with k internal
    vertices, ordered deterministically."""
    p = (d - 1) % 2
    pool = []
    for m in range(2, k + 2):
        for letters in combinations_with_replacement(range(1, n + 1), m):
            pool.extend(poly.basis_for_multiset(letters, p))
    pool = sorted(set(pool), key=lambda w: (len(w), w))

    out = []

    def rec(start, left, acc):
        if left == 0:
            key, sign = poly._sort_term(list(acc), d, "lie")
            if sign != 0 and poly.is_connected_term(n, key):
                labels = {x for w in key for x in w}
                if labels == set(range(1, n + 1)) or (n == 1 and not key):
                    out.append(key)
            return
        for j in range(start, len(pool)):
            w = pool[j]
            if len(w) - 1 <= left:
                rec(j, left - (len(w) - 1), acc + [w])

    if k == 0:
        if n == 1:
            out.append(())
    else:
        rec(0, k, [])
    return sorted(set(out))


def _independent_columns(vectors, n_rows):
    """Deterministically keep a maximal independent subset (as indices)."""
    kept = []
    cols = []
    for idx, vec in enumerate(vectors):
        if not vec:
            continue
        mat = SparseMatrix.from_columns(cols + [vec], n_rows)
        if linalg.rank(mat) > len(cols):
            cols.append(vec)
            kept.append(idx)
    return kept, cols


def _o_invariant_basis(n, k, d):
    """Invariant vectors in the (n, k) slice, as OElements."""
    terms = _o_slice_terms(n, k, d)
    index = {t: i for i, t in enumerate(terms)}
    vectors = []
    elements = []
    for t in terms:
        x = symmetrize(OElement(n, d, {t: Fraction(1)}, "lie"), d)
        vec = {}
        for tt, c in x.terms.items():
            if tt not in index:
                raise ValueError("symmetrizer left the slice")
            vec[index[tt]] = c
        vectors.append(vec)
        elements.append(x)
    kept, _ = _independent_columns(vectors, len(terms))
    return [elements[i] for i in kept], terms


def _lie_invariant_basis(n, d):
    words = basis_words(n)
    index = {w: i for i, w in enumerate(words)}
    vectors = []
    elements = []
    for w in words:
        x = symmetrize(LieElement(n, {w: Fraction(1)}, d), d)
        vectors.append({index[ww]: c for ww, c in x.terms.items()})
        elements.append(x)
    kept, _ = _independent_columns(vectors, len(words))
    return [elements[i] for i in kept], words


def _element_coords(x, basis, index_of):
    """Coordinates of x in the span of basis (list of elements of the
    same kind); raises if x is outside the span."""
    vec = {}
    for t, c in x.terms.items():
        vec[index_of[t]] = c
    cols = []
    for b in basis:
        cols.append({index_of[t]: c for t, c in b.terms.items()})
    mat = SparseMatrix.from_columns(cols, len(index_of))
    sol = linalg.solve(mat, vec)
    if sol is None:
        raise ValueError("element outside the slice basis span")
    return sol


def build_slice(complex_id, d, key):
    """Basis and differential matrix of one bidegree slice.

    complex_id in {'fcgc', 'gc', 'def-olie', 'def-lie'}; key is (v, e)
    for the graph complexes, (n, k) for 'def-olie', (n,) or n for
    'def-lie'.  The matrix maps this slice into its successor."""
    if complex_id in ("fcgc", "gc"):
        v, e = key
        if not (1 <= v <= _GC_BOUNDS[0] and 0 <= e <= _GC_BOUNDS[1]):
            raise ValueError(
                f"slice {key} outside bounds v<={_GC_BOUNDS[0]},"
                f" e<={_GC_BOUNDS[1]}")
        mv = 3 if complex_id == "gc" else 1
        basis = tuple(enumerate_graphs(v, e, d, min_valence=mv,
                                       connected=True)) if e else ()
        succ = {g: i for i, g in enumerate(
            enumerate_graphs(v + 1, e + 1, d, min_valence=mv,
                             connected=True))} if e + 1 <= _GC_BOUNDS[1] \
            and v + 1 <= _GC_BOUNDS[0] else {}
        cols = []
        for g in basis:
            img = gc_differential(g, min_valence=mv)
            col = {}
            for G, c in img.items():
                if G not in succ:
                    raise ValueError("differential left the slice grid")
                col[succ[G]] = c
            cols.append(col)
        mat = SparseMatrix.from_columns(cols, len(succ), n_cols=len(basis))
        return SliceBasis(complex_id, d, (v, e), basis, mat)

    if complex_id == "def-olie":
        n, k = key
        if not (1 <= n <= _DEF_O_BOUNDS[0] and 0 <= k <= _DEF_O_BOUNDS[1]):
            raise ValueError(
                f"slice {key} outside bounds n<={_DEF_O_BOUNDS[0]},"
                f" k<={_DEF_O_BOUNDS[1]}")
        basis, _ = _o_invariant_basis(n, k, d)
        nb, nterms = ([], []) if (n + 1 > _DEF_O_BOUNDS[0]
                                  or k + 1 > _DEF_O_BOUNDS[1]) \
            else _o_invariant_basis(n + 1, k + 1, d)
        index_of = {t: i for i, t in enumerate(nterms)}
        cols = [_element_coords(def_differential(x, d), nb, index_of)
                for x in basis]
        mat = SparseMatrix.from_columns(cols, len(index_of),
                                        n_cols=len(basis))
        return SliceBasis(complex_id, d, (n, k), tuple(basis), mat)

    if complex_id == "def-lie":
        n = key[0] if isinstance(key, tuple) else key
        if not 2 <= n <= _DEF_LIE_BOUND:
            raise ValueError(f"slice {key} outside bounds 2..{_DEF_LIE_BOUND}")
        basis, _ = _lie_invariant_basis(n, d)
        if n + 1 <= _DEF_LIE_BOUND:
            nb, nwords = _lie_invariant_basis(n + 1, d)
        else:
            nb, nwords = [], []
        index_of = {w: i for i, w in enumerate(nwords)}
        cols = [_element_coords(def_differential(x, d), nb, index_of)
                for x in basis]
        mat = SparseMatrix.from_columns(cols, len(index_of),
                                        n_cols=len(basis))
        return SliceBasis(complex_id, d, (n,), tuple(basis), mat)

    raise ValueError(f"unknown complex {complex_id!r}")


def _pred_key(complex_id, key):
    if complex_id in ("fcgc", "gc"):
        v, e = key
        return (v - 1, e - 1) if v >= 2 and e >= 1 else None
    if complex_id == "def-olie":
        n, k = key
        return (n - 1, k - 1) if n >= 2 and k >= 1 else None
    n = key[0] if isinstance(key, tuple) else key
    return (n - 1,) if n >= 3 else None


def cohomology_rank(complex_id, d, key):
    """(kernel dim, incoming image dim, cohomology dim) of one slice."""
    this = build_slice(complex_id, d, key)
    kernel = len(this.basis) - linalg.rank(this.matrix)
    pk = _pred_key(complex_id, key)
    image = 0
    if pk is not None:
        pred = build_slice(complex_id, d, pk)
        image = linalg.rank(pred.matrix)
    return kernel, image, kernel - image


# -- witnesses --------------------------------------------------------

def theta_graph():
    """Two vertices joined by three parallel edges (d = 1)."""
    return OrientedGraph(1, 2, ((1, 2), (1, 2), (1, 2)))


def theta_def_element():
    """The deformation-complex incarnation of the theta graph: three
    parallel two-slot components on two whites (d = 1)."""
    return make_term(2, 1, [(1, 2), (1, 2), (1, 2)])


def tetrahedron():
    """The three-wheel in the d = 2 graph complex."""
    return OrientedGraph(2, 4, tuple((i, j) for i in range(1, 5)
                                     for j in range(i + 1, 5)))


def five_wheel_cocycle():
    """The five-wheel class: the wheel plus 5/2 times its correction
    graph, edges ordered as printed."""
    rim = ((1, 2), (2, 3), (3, 4), (5, 4), (5, 1))
    hub = ((6, 2), (6, 3), (4, 6), (6, 5), (6, 1))
    wheel = OrientedGraph(2, 6, rim + hub)
    corr = OrientedGraph(2, 6, ((1, 2), (2, 3), (3, 4), (5, 4), (5, 1),
                                (4, 1), (2, 5), (5, 6), (6, 2), (6, 3)))
    out = {}
    _add_class(out, wheel, Fraction(1))
    _add_class(out, corr, Fraction(5, 2))
    return out
