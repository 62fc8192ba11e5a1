"""Certificate JSON round-trips and exact re-verification."""

import json

import pytest

from hppmat import catalog, jsonio, negsearch, realroot, sos
from hppmat.errors import ValidationError
from hppmat.poly import basis_polynomial, rayleigh_difference


@pytest.fixture(scope="module")
def u24():
    return catalog.builtin("U24").matroid


@pytest.fixture(scope="module")
def sos_cert(u24):
    h = basis_polynomial(u24)
    d = rayleigh_difference(h, 1, 2)
    status, cert = sos.certify_sos(d, 1, 2)
    assert status == "sos"
    return cert


def _roundtrip(cert):
    return json.loads(json.dumps(jsonio.certificate_to_dict(cert)))


def test_sos_roundtrip_and_verify(u24, sos_cert):
    d = _roundtrip(sos_cert)
    assert d["type"] == "sos"
    assert d["schema_version"] == jsonio.SCHEMA_VERSION
    assert all(isinstance(x, str) for row in d["gram"] for x in row)
    assert jsonio.verify_certificate(d, u24)


def test_sos_verify_rejects_wrong_matroid(sos_cert):
    d = _roundtrip(sos_cert)
    assert not jsonio.verify_certificate(d, catalog.builtin("U25").matroid)


def test_tampered_gram_rejected(u24, sos_cert):
    d = _roundtrip(sos_cert)
    d["gram"][0][0] = "2"
    assert not jsonio.verify_certificate(d, u24)


def test_negative_point_roundtrip():
    m = catalog.builtin("M431").matroid
    h = basis_polynomial(m)
    cert = None
    for i in range(1, 8):
        for j in range(i + 1, 9):
            cert = negsearch.search_negative(h, i, j)
            if cert:
                break
        if cert:
            break
    d = _roundtrip(cert)
    assert d["type"] == "negative_point"
    assert jsonio.verify_certificate(d, m)
    d["value"] = str(-abs(int(float(d["value"].split("/")[0]))) - 1)
    assert not jsonio.verify_certificate(d, m)


def test_nonreal_direction_roundtrip():
    m = catalog.builtin("P8").matroid
    h = basis_polynomial(m)
    w = realroot.hyperbolicity_sample_test(h, require_lead_nonzero=False)
    d = _roundtrip(w)
    assert d["type"] == "nonreal_direction"
    assert jsonio.verify_certificate(d, m)
    d["v"] = [0] * 8  # all-ones direction through 0 is real-rooted
    d["e"] = [1] * 8
    assert not jsonio.verify_certificate(d, m)


def test_unknown_type_raises():
    with pytest.raises(ValidationError):
        jsonio.certificate_from_dict({"type": "martian"})


def test_file_roundtrip(tmp_path, u24, sos_cert):
    path = tmp_path / "cert.json"
    jsonio.dump_certificate(sos_cert, path)
    data = jsonio.load_certificate(path)
    assert jsonio.verify_certificate(data, u24)
