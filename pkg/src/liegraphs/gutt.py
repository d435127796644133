"""PBW star product on the symmetric algebra of a finite-dimensional
Lie algebra, and its arity-2 graph shadow.

Elements of both the symmetric algebra and the deformed enveloping
algebra are dicts {(monomial, h_power): coefficient}: a monomial is a
tuple of generator indices (sorted in normal form), h is the formal
deformation parameter.  The defining rewrite is

    t_j t_i  ->  t_i t_j + h [t_j, t_i]      (j > i)

and the star product is p * q = sigma_inv(sigma(p) . sigma(q)) with
sigma the full symmetrization map, inverted degree by degree.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

from .gra import GraElement, element as gra_element, s_action
from .graphs import OrientedGraph


class FPLieAlgebra:
    """Structure constants on generators 1..dim, Jacobi-checked.

    brackets maps (i, j) with i < j to {k: coefficient}; the other
    order is filled in by antisymmetry, [t_i, t_i] = 0.
    """

    def __init__(self, dim, brackets):
        self.dim = dim
        self.brackets = {}
        for (i, j), coeffs in brackets.items():
            if not (1 <= i < j <= dim):
                raise ValueError("bracket keys must satisfy 1 <= i < j <= dim")
            clean = {int(k): Fraction(c) for k, c in coeffs.items()
                     if Fraction(c) != 0}
            for k in clean:
                if not 1 <= k <= dim:
                    raise ValueError("bracket target out of range")
            if clean:
                self.brackets[(i, j)] = clean
        self._check_jacobi()
        # per-instance memo tables; all three maps commute with h-shifts
        # and scaling, so caching the (h=0, coeff=1) case suffices
        self._str_cache = {}
        self._sigma_cache = {}
        self._sigma_inv_cache = {}
        self._star_cache = {}

    def bracket(self, i, j):
        """[t_i, t_j] as {k: coefficient}."""
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def _check_jacobi(self):
        for i in range(1, self.dim + 1):
            for j in range(i + 1, self.dim + 1):
                for k in range(j + 1, self.dim + 1):
                    acc = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, cm in self.bracket(a, b).items():
                            for l, cl in self.bracket(m, c).items():
                                acc[l] = acc.get(l, Fraction(0)) + cm * cl
                    if any(v != 0 for v in acc.values()):
                        raise ValueError(
                            f"Jacobi identity fails on generators {(i, j, k)}")

    def to_json(self):
        return {"dim": self.dim,
                "brackets": [{"i": i, "j": j,
                              "coeffs": {str(k): str(c)
                                         for k, c in sorted(cf.items())}}
                             for (i, j), cf in sorted(self.brackets.items())]}

    @classmethod
    def from_json(cls, rec):
        brackets = {}
        for b in rec["brackets"]:
            brackets[(b["i"], b["j"])] = {int(k): Fraction(v)
                                          for k, v in b["coeffs"].items()}
        return cls(rec["dim"], brackets)


def abelian(n):
    return FPLieAlgebra(n, {})


def heisenberg():
    """[x, y] = z on generators x=1, y=2, z=3."""
    return FPLieAlgebra(3, {(1, 2): {3: Fraction(1)}})


def two_dim():
    """The nonabelian 2-dimensional algebra [x, y] = y."""
    return FPLieAlgebra(2, {(1, 2): {2: Fraction(1)}})


# -- polynomial helpers ------------------------------------------------

def _add(dst, key, c):
    if c == 0:
        return
    nv = dst.get(key, Fraction(0)) + c
    if nv == 0:
        dst.pop(key, None)
    else:
        dst[key] = nv


def poly_add(p, q):
    out = dict(p)
    for key, c in q.items():
        _add(out, key, c)
    return out


def poly_scale(p, c):
    return {key: v * c for key, v in p.items()} if c != 0 else {}


def sym_mul(p, q):
    """Commutative product in the symmetric algebra."""
    out = {}
    for (m1, h1), c1 in p.items():
        for (m2, h2), c2 in q.items():
            _add(out, (tuple(sorted(m1 + m2)), h1 + h2), c1 * c2)
    return out


def monomial(indices, h=0, coeff=Fraction(1)):
    return {(tuple(sorted(indices)), h): Fraction(coeff)}


def straighten(alg, word, h=0, coeff=Fraction(1)):
    """PBW normal form of a generator word in the deformed enveloping
    algebra; independent of rewrite order by the diamond property."""
    word = tuple(word)
    base = alg._str_cache.get(word)
    if base is None:
        base = {}
        stack = [(word, 0, Fraction(1))]
        while stack:
            w, hh, c = stack.pop()
            for p in range(len(w) - 1):
                if w[p] > w[p + 1]:
                    swapped = w[:p] + (w[p + 1], w[p]) + w[p + 2:]
                    stack.append((swapped, hh, c))
                    for k, ck in alg.bracket(w[p], w[p + 1]).items():
                        stack.append((w[:p] + (k,) + w[p + 2:],
                                      hh + 1, c * ck))
                    break
            else:
                _add(base, (w, hh), c)
        alg._str_cache[word] = base
    coeff = Fraction(coeff)
    if coeff == 0:
        return {}
    return {(m, hh + h): c * coeff for (m, hh), c in base.items()}


def u_mul(alg, u, v):
    """Product of two PBW normal forms: concatenate and re-straighten."""
    out = {}
    for (m1, h1), c1 in u.items():
        for (m2, h2), c2 in v.items():
            for key, c in straighten(alg, m1 + m2, h1 + h2, c1 * c2).items():
                _add(out, key, c)
    return out


def _sigma_basis(alg, m):
    base = alg._sigma_cache.get(m)
    if base is None:
        base = {}
        perms = set(permutations(m))
        scale = Fraction(1, math.factorial(len(m)))
        # multiset permutations are repeated in the full sum
        rep = math.factorial(len(m)) // (len(perms) or 1) if m else 1
        for w in perms:
            for key, cv in straighten(alg, w, 0, scale * rep).items():
                _add(base, key, cv)
        alg._sigma_cache[m] = base
    return base


def sigma(alg, p):
    """Symmetrization map into the deformed enveloping algebra."""
    out = {}
    for (m, h), c in p.items():
        for (mm, hh), cv in _sigma_basis(alg, m).items():
            _add(out, (mm, hh + h), c * cv)
    return out


def _sigma_inv_basis(alg, m):
    base = alg._sigma_inv_cache.get(m)
    if base is None:
        base = {}
        rem = {(m, 0): Fraction(1)}
        while rem:
            top = max(len(w) for w, _ in rem)
            for (w, h), c in [it for it in rem.items()
                              if len(it[0][0]) == top]:
                _add(base, (w, h), c)
                for (ww, hh), cv in _sigma_basis(alg, w).items():
                    _add(rem, (ww, hh + h), -c * cv)
        alg._sigma_inv_cache[m] = base
    return base


def sigma_inv(alg, u):
    """Invert sigma degree by degree: straightening only produces
    strictly shorter correction monomials, so the system is triangular
    in word length."""
    out = {}
    for (m, h), c in u.items():
        for (mm, hh), cv in _sigma_inv_basis(alg, m).items():
            _add(out, (mm, hh + h), c * cv)
    return out


def star(alg, p, q):
    """Gutt star product on the symmetric algebra: bilinear extension of
    sigma_inv(sigma(m1) . sigma(m2)), cached per monomial pair."""
    out = {}
    for (m1, h1), c1 in p.items():
        for (m2, h2), c2 in q.items():
            base = alg._star_cache.get((m1, m2))
            if base is None:
                base = sigma_inv(alg, u_mul(alg, _sigma_basis(alg, m1),
                                            _sigma_basis(alg, m2)))
                alg._star_cache[(m1, m2)] = base
            c = c1 * c2
            h = h1 + h2
            for (mm, hh), cv in base.items():
                _add(out, (mm, hh + h), c * cv)
    return out


# -- the arity-2 graph shadow -----------------------------------------

def gutt_mod_I_series(max_edges, d=1):
    """Sum over k of 1/k! times k parallel directed edges between the
    two slots; the k = 0 term is the edgeless product graph."""
    if max_edges > 8:
        raise ValueError("max_edges <= 8")
    out = GraElement(2, d, {})
    for k in range(max_edges + 1):
        g = OrientedGraph(d, 2, tuple((1, 2) for _ in range(k)))
        out = out + gra_element(g).scaled(Fraction(1, math.factorial(k)))
    return out


def skew_symmetrize_series(s: GraElement) -> GraElement:
    """Antisymmetrize the two slots (the d = 1 sign rule makes this the
    sign-twisted average); even parallel-edge counts cancel."""
    swapped = s_action(s, (2, 1))
    return (s + swapped.scaled(Fraction(-1))).scaled(Fraction(1, 2))


def series_coefficient(s: GraElement, k: int):
    """Coefficient of the k-fold parallel edge 1 -> 2 in an arity-2
    series."""
    g = OrientedGraph(s.d, 2, tuple((1, 2) for _ in range(k)))
    return s.terms.get(g, Fraction(0))
