"""PBW star product: straightening, symmetrization, graph series."""

import itertools
from fractions import Fraction

import pytest

from liegraphs import linalg
from liegraphs.gra import lie_to_gra
from liegraphs.gutt import (FPLieAlgebra, abelian, gutt_mod_I_series,
                            heisenberg, monomial, poly_add, poly_scale,
                            series_coefficient, sigma, sigma_inv,
                            skew_symmetrize_series, star, straighten,
                            sym_mul, two_dim, u_mul)
from liegraphs.linalg import SparseMatrix


def test_jacobi_checked_at_construction():
    # [x,y] = z, [x,z] = x is not a Lie algebra
    with pytest.raises(ValueError):
        FPLieAlgebra(3, {(1, 2): {3: 1}, (1, 3): {1: 1}})
    with pytest.raises(ValueError):
        FPLieAlgebra(2, {(2, 1): {1: 1}})


def test_bracket_antisymmetry():
    h = heisenberg()
    assert h.bracket(1, 2) == {3: Fraction(1)}
    assert h.bracket(2, 1) == {3: Fraction(-1)}
    assert h.bracket(2, 2) == {}


def test_straighten():
    h = heisenberg()
    # already sorted: untouched
    assert straighten(h, (1, 2, 3)) == {((1, 2, 3), 0): Fraction(1)}
    # the single rewrite yx -> xy - h z
    assert straighten(h, (2, 1)) == {((1, 2), 0): Fraction(1),
                                     ((3,), 1): Fraction(-1)}
    # abelian: any word just sorts
    a = abelian(4)
    assert straighten(a, (4, 2, 3, 1)) == {((1, 2, 3, 4), 0): Fraction(1)}


def test_straighten_order_independent():
    """Same normal form whichever descent is rewritten first: check by
    comparing products u(vw) and (uv)w in the enveloping algebra."""
    t = two_dim()
    words = [(2, 1), (2, 2, 1), (1, 2)]
    for u, v, w in itertools.product(words, repeat=3):
        lhs = u_mul(t, straighten(t, u), u_mul(t, straighten(t, v),
                                               straighten(t, w)))
        rhs = u_mul(t, u_mul(t, straighten(t, u), straighten(t, v)),
                    straighten(t, w))
        assert lhs == rhs


def test_star_linear_generators():
    h = heisenberg()
    x, y = monomial([1]), monomial([2])
    assert star(h, x, y) == {((1, 2), 0): Fraction(1),
                             ((3,), 1): Fraction(1, 2)}


def test_commutator_is_bracket():
    for alg in (heisenberg(), two_dim(), abelian(3)):
        for i in range(1, alg.dim + 1):
            for j in range(1, alg.dim + 1):
                lhs = poly_add(star(alg, monomial([i]), monomial([j])),
                               poly_scale(star(alg, monomial([j]),
                                               monomial([i])), Fraction(-1)))
                want = {((k,), 1): c for k, c in alg.bracket(i, j).items()}
                assert lhs == want


def test_abelian_star_is_product():
    a = abelian(3)
    p = poly_add(monomial([1, 2]), monomial([3], coeff=Fraction(2)))
    q = monomial([2, 3])
    assert star(a, p, q) == sym_mul(p, q)


def test_sigma_roundtrip():
    for alg in (heisenberg(), two_dim()):
        p = poly_add(poly_add(monomial([1, 2, 2]),
                              monomial([1] * 4, coeff=Fraction(2, 3))),
                     monomial([2], h=1, coeff=Fraction(-1)))
        assert sigma_inv(alg, sigma(alg, p)) == p


def test_star_associative_heisenberg():
    h = heisenberg()
    monos = [(), (1,), (2,), (3,), (1, 2), (2, 3), (1, 1, 2)]
    for a, b, c in itertools.product(monos[:5], repeat=3):
        pa, pb, pc = monomial(a), monomial(b), monomial(c)
        assert star(h, star(h, pa, pb), pc) == star(h, pa, star(h, pb, pc))
    # a few degree-3 spot checks
    for a in ((1, 2, 3), (2, 2, 2)):
        pa = monomial(a)
        assert star(h, star(h, pa, monomial((1, 2))), monomial((3,))) \
            == star(h, pa, star(h, monomial((1, 2)), monomial((3,))))


def _dense_sigma_inverse_oracle(alg, u, max_len):
    """Invert sigma by a dense solve over the (monomial, h) basis of the
    length + h <= max_len filtration block."""
    keys = []
    for l in range(max_len + 1):
        for m in itertools.combinations_with_replacement(
                range(1, alg.dim + 1), l):
            for h in range(max_len - l + 1):
                keys.append((m, h))
    index = {k: i for i, k in enumerate(keys)}
    cols = []
    for k in keys:
        img = sigma(alg, {k: Fraction(1)})
        cols.append({index[kk]: c for kk, c in img.items()})
    mat = SparseMatrix.from_columns(cols, len(keys))
    sol = linalg.solve(mat, {index[k]: c for k, c in u.items()})
    assert sol is not None
    return {keys[i]: c for i, c in sol.items()}


def test_star_against_dense_oracle():
    h = heisenberg()
    x = monomial([1])
    yy = monomial([2, 2])
    got = star(h, x, yy)
    want = _dense_sigma_inverse_oracle(
        h, u_mul(h, sigma(h, x), sigma(h, yy)), 3)
    assert got == want


def test_series_coefficients():
    s = gutt_mod_I_series(6)
    assert [series_coefficient(s, k) for k in range(4)] \
        == [1, 1, Fraction(1, 2), Fraction(1, 6)]
    with pytest.raises(ValueError):
        gutt_mod_I_series(9)


def test_skew_symmetrized_series():
    sk = skew_symmetrize_series(gutt_mod_I_series(6))
    assert series_coefficient(sk, 2) == 0
    assert series_coefficient(sk, 4) == 0
    assert series_coefficient(sk, 1) == 1
    assert series_coefficient(sk, 3) == Fraction(1, 6)
    assert series_coefficient(sk, 5) == Fraction(1, 120)
    # the linear term is the graph-operad bracket generator
    single = {g: c for g, c in sk.terms.items() if g.n_edges() == 1}
    assert single == dict(lie_to_gra(1).terms)


def test_algebra_json_roundtrip():
    for alg in (heisenberg(), two_dim(), abelian(2)):
        back = FPLieAlgebra.from_json(alg.to_json())
        assert back.dim == alg.dim and back.brackets == alg.brackets
