"""SOS certification: Gram systems, exact LDL, rounding, dual certificates."""

from fractions import Fraction

import pytest

from hppmat import catalog
from hppmat.errors import NotRepresentable
from hppmat.matroid import uniform
from hppmat.poly import Poly, basis_polynomial, rayleigh_difference
from hppmat.sos import (
    certify_sos,
    dual_psd_certificate,
    extract_squares,
    gram_system,
    gram_to_poly,
    ldl_reconstructs,
    monomial_basis,
    psd_ldl,
    rationalize_and_verify,
    sdp_feasible,
    verify_dual,
    verify_sos,
)

from conftest import random_matroid


def _delta(name, i, j):
    h = basis_polynomial(catalog.builtin(name).matroid)
    return rayleigh_difference(h, i, j)


def test_monomial_basis_size():
    d = _delta("V8", 1, 3)
    assert len(monomial_basis(d, 1, 3)) == 20  # C(6, 3)
    with pytest.raises(NotRepresentable):
        monomial_basis(Poly.from_string("1*x1^1", 2), 1, 2)


def test_gram_system_represents_target(rng):
    for _ in range(10):
        m = random_matroid(rng, max_n=6)
        if m.n < 4 or m.r < 2:
            continue
        h = basis_polynomial(m)
        d = rayleigh_difference(h, 1, 2)
        if d.is_zero():
            continue
        system = gram_system(d, 1, 2)
        assert gram_to_poly(system.nvars, system.monomials, system.g0) == d
        zero = Poly(system.nvars, {})
        for k in system.kernel:
            assert gram_to_poly(system.nvars, system.monomials, k) == zero


def test_u24_oracle_gram_and_pivots():
    d = _delta("U24", 1, 2)
    status, cert = certify_sos(d, 1, 2)
    assert status == "sos"
    assert cert.gram == (
        (Fraction(1), Fraction(1, 2)),
        (Fraction(1, 2), Fraction(1)),
    )
    assert cert.ldl.pivots == (Fraction(1), Fraction(3, 4))
    assert verify_sos(cert, d)


def test_psd_ldl_classifies():
    assert psd_ldl([[1, 2], [2, 1]]) is None  # indefinite
    assert psd_ldl([[0, 1], [1, 0]]) is None  # zero diagonal, residue
    f = psd_ldl([[2, 1], [1, 2]])
    assert f is not None and all(p > 0 for p in f.pivots)
    assert ldl_reconstructs([[2, 1], [1, 2]], f)
    # PSD with a zero direction: fine non-strict, rejected strict
    g = [[1, 1], [1, 1]]
    assert psd_ldl(g) is not None
    assert psd_ldl(g, strict=True) is None


def test_ldl_with_pivoting_reconstructs():
    g = [
        [Fraction(1, 4), Fraction(1, 2), 0],
        [Fraction(1, 2), 3, 1],
        [0, 1, 2],
    ]
    f = psd_ldl(g)
    assert f is not None
    assert f.perm[0] == 1  # largest diagonal chosen first
    assert ldl_reconstructs(g, f)


def test_verify_sos_rejects_tampering():
    d = _delta("U24", 1, 2)
    _, cert = certify_sos(d, 1, 2)
    wrong_target = d + Poly.from_string("1*x3^2", 4)
    assert not verify_sos(cert, wrong_target)


def test_extract_squares_recompose():
    d = _delta("U36", 1, 2)
    status, cert = certify_sos(d, 1, 2)
    assert status == "sos"
    acc = Poly(d.nvars, {})
    for w, s in extract_squares(cert):
        assert w > 0
        acc = acc + (s * s).scale(w)
    assert acc == d


def test_rationalize_uses_exact_gate():
    d = _delta("U25", 1, 2)
    system = gram_system(d, 1, 2)
    res = sdp_feasible(system)
    assert res.feasible
    cert = rationalize_and_verify(system, res.coeffs)
    assert cert is not None and verify_sos(cert, d)


def test_vamos_special_pair_not_sos_with_dual_certificate():
    d = _delta("V8", 1, 2)
    system = gram_system(d, 1, 2)
    status, _ = certify_sos(d, 1, 2)
    assert status == "infeasible"
    cert = dual_psd_certificate(system)
    assert cert is not None
    assert verify_dual(cert, system)
    # certificate entries are integers (common-denominator rounding)
    assert all(x.denominator == 1 for row in cert.matrix for x in row)


def test_verify_dual_rejects_wrong_system():
    d = _delta("V8", 1, 2)
    system = gram_system(d, 1, 2)
    cert = dual_psd_certificate(system)
    other = gram_system(_delta("V8", 1, 3), 1, 3)
    assert not verify_dual(cert, other)


def test_zero_delta_certifies_trivially():
    m = uniform(1, 1).direct_sum(uniform(1, 2))
    h = basis_polynomial(m)  # x1 (x2 + x3)
    d = rayleigh_difference(h, 1, 2)  # 1 is a coloop: Delta vanishes
    assert d.is_zero()
    status, cert = certify_sos(d, 1, 2)
    assert status == "sos" and verify_sos(cert, d)
