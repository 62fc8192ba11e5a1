"""Exact univariate real-rootedness and hyperbolicity sampling."""

import random
from fractions import Fraction

import pytest

from hppmat import catalog
from hppmat.errors import ZeroPolynomial
from hppmat.matroid import uniform
from hppmat.poly import basis_polynomial
from hppmat.realroot import (
    UniPoly,
    _int_all_real,
    count_failing_pairs,
    gcd,
    hyperbolicity_sample_test,
    is_real_rooted,
    restrict_line,
    sturm_real_root_count,
)


def test_unipoly_basics():
    p = UniPoly([1, 0, -1])  # x^2 - 1 ... stored constant-first: -x^2? no
    # coefficients are constant first: 1 + 0x - x^2
    assert p.degree() == 2
    assert p.evaluate(2) == -3
    assert p.derivative() == UniPoly([0, -2])
    q, r = (p * UniPoly([1, 1])).divmod(UniPoly([1, 1]))
    assert q == p and r.is_zero()


def test_gcd_monic():
    p = UniPoly([-1, 0, 1])  # (x-1)(x+1)
    q = UniPoly([-1, 1])  # x - 1
    g = gcd(p, q)
    assert g == UniPoly([-1, 1])


def test_sturm_counts():
    assert sturm_real_root_count(UniPoly([1, 0, 1])) == 0  # x^2 + 1
    assert sturm_real_root_count(UniPoly([-1, 0, 1])) == 2  # x^2 - 1
    assert sturm_real_root_count(UniPoly([0, -1, 0, 1])) == 3  # x^3 - x
    with pytest.raises(ZeroPolynomial):
        sturm_real_root_count(UniPoly([]))


def test_sturm_additivity_over_products(rng):
    """Distinct-root count of p*q equals |roots(p) union roots(q)|, checked
    via factored integer polynomials."""
    for _ in range(200):
        roots_p = [rng.randint(-4, 4) for _ in range(rng.randint(1, 3))]
        roots_q = [rng.randint(-4, 4) for _ in range(rng.randint(1, 3))]
        p = UniPoly([1])
        for a in roots_p:
            p = p * UniPoly([-a, 1])
        q = UniPoly([1])
        for a in roots_q:
            q = q * UniPoly([-a, 1])
        prod = p * q
        sq = prod.divmod(gcd(prod, prod.derivative()))[0]
        assert sturm_real_root_count(sq) == len(set(roots_p) | set(roots_q))


def test_is_real_rooted_with_multiplicity():
    assert is_real_rooted(UniPoly([1, 2, 1]))  # (x+1)^2
    assert not is_real_rooted(UniPoly([1, 0, 0, 0, 1]))  # x^4 + 1
    assert is_real_rooted(UniPoly([0, 0, 1]))  # x^2


def test_discriminant_fast_path_matches_sturm(rng):
    for _ in range(300):
        d = rng.randint(2, 4)
        coeffs = [rng.randint(-5, 5) for _ in range(d)] + [rng.randint(1, 5)]
        fast = _int_all_real(list(coeffs))
        slow = is_real_rooted(UniPoly(coeffs))
        assert fast == slow, coeffs


def test_restrict_line_exact():
    h = basis_polynomial(uniform(2, 4))
    e = [1, 1, 1, 1]
    v = [0, 0, 0, 0]
    p = restrict_line(h, e, v)
    assert p == UniPoly([0, 0, 6])  # 6 t^2
    p2 = restrict_line(h, [1, 1, 0, 0], [0, 0, 1, 1])
    # h(t, t, -1, -1) = t^2 - 4t + 1... exact check by evaluation instead
    for t in (-2, 0, 1, Fraction(1, 2)):
        assert p2.evaluate(t) == h.evaluate([t, t, -1, -1])


def test_hyperbolicity_pass_on_uniform():
    h = basis_polynomial(uniform(2, 4))
    assert hyperbolicity_sample_test(h, require_lead_nonzero=False) is None


def test_hyperbolicity_witness_on_p8():
    h = basis_polynomial(catalog.builtin("P8").matroid)
    w = hyperbolicity_sample_test(h, require_lead_nonzero=False)
    assert w is not None
    # witness re-verifies: restriction has fewer real roots than its degree
    p = restrict_line(h, w.e, w.v)
    q = p.divmod(gcd(p, p.derivative()))[0]
    assert sturm_real_root_count(q) == w.real_root_count < q.degree()


def test_explicit_pairs_api():
    h = basis_polynomial(catalog.builtin("P8").matroid)
    w = hyperbolicity_sample_test(h, require_lead_nonzero=False)
    again = hyperbolicity_sample_test(h, pairs=[(w.e, w.v)])
    assert again is not None and again.e == w.e and again.v == w.v
    assert hyperbolicity_sample_test(h, pairs=[((1,) * 8, (0,) * 8)]) is None


def test_count_failing_pairs_m548():
    h = basis_polynomial(catalog.builtin("M548").matroid)
    assert count_failing_pairs(h, require_lead_nonzero=False) == 6
