"""Classification driver: verdicts, memoization, duality, reports."""

import pytest

from hppmat import catalog, pipeline
from hppmat.matroid import from_bases, uniform
from hppmat.pipeline import (
    CANDIDATE_HPP,
    HPP,
    NOT_HPP,
    UNDETECTED,
    Classifier,
    PipelineConfig,
    classify_catalog,
    classify_one,
    default_forbidden,
)
from hppmat.sos import SOSCertificate


@pytest.fixture(scope="module")
def clf():
    return Classifier()


def test_rank_two_shortcut(clf):
    v = clf.classify(uniform(2, 6))
    assert v.status == HPP and v.stage == "reduce"


def test_u36_hpp_with_sos_certificate(clf):
    v = clf.classify(uniform(3, 6))
    assert v.status == HPP and v.stage == "sos"
    assert any(isinstance(c, SOSCertificate) for c in v.certificates)


def test_fano_not_hpp_excluded_minor(clf):
    v = clf.classify(catalog.builtin("F7").matroid)
    assert v.status == NOT_HPP and v.stage == "excluded-minor"


def test_golay_not_hpp_via_fano_minor(clf):
    # the ternary Golay matroid contains non-HPP minors from the Fano
    # relaxation family
    v = clf.classify(catalog.builtin("F7-").matroid)
    assert v.status == NOT_HPP


def test_disconnected_reduces(clf):
    m = uniform(3, 6).direct_sum(uniform(1, 2))
    v = clf.classify(m)
    assert v.status == HPP and v.stage == "reduce"


def test_loops_are_dropped(clf):
    m = uniform(2, 4).direct_sum(from_bases(1, 0, [set()]))
    assert m.loops()
    v = clf.classify(m)
    assert v.status == HPP


def test_duality_consistency(clf):
    for name in ("U36", "F7", "P7"):
        m = catalog.builtin(name).matroid
        assert clf.classify(m).status == clf.classify(m.dual()).status


def test_facial_closure_spot_check(clf):
    """Every flat-induced face matroid of an HPP matroid is HPP."""
    m = uniform(3, 6)
    assert clf.classify(m).status == HPP
    for flat in m.flats():
        if not flat or len(flat) == m.n:
            continue
        v = clf.classify(m.polytope_face_matroid(flat))
        assert v.status == HPP


def test_minor_monotonicity_of_witness(clf):
    """A stage-1 excluded-minor verdict names a matroid that is itself
    NOT_HPP."""
    v = clf.classify(catalog.builtin("MK4+e").matroid)
    assert v.status == NOT_HPP and v.stage == "excluded-minor"
    name = v.certificates[0].forbidden_name
    target = dict(default_forbidden())[name]
    assert clf.classify(target).status == NOT_HPP


def test_memoization_shares_verdicts():
    c = Classifier()
    c.classify(uniform(3, 6))
    before = len(c._memo)
    c.classify(uniform(3, 6))
    assert len(c._memo) == before


def test_classify_one_with_custom_forbidden():
    p8 = catalog.builtin("P8").matroid
    v = classify_one(p8, forbidden=[("P8", p8)])
    assert v.status == NOT_HPP and v.stage == "excluded-minor"


def test_classify_catalog_counts_and_empty():
    entries = [catalog.builtin(n) for n in ("U24", "U36", "F7")]
    rep = classify_catalog(entries)
    assert rep.counts[HPP] == 2 and rep.counts[NOT_HPP] == 1
    assert [name for name, _ in rep.verdicts] == ["U24", "U36", "F7"]
    empty = classify_catalog([])
    assert sum(empty.counts.values()) == 0 and empty.verdicts == ()


def test_report_rendering(tmp_path):
    entries = [catalog.builtin(n) for n in ("U24", "F7")]
    rep = classify_catalog(entries)
    from hppmat.report import write_report

    paths = write_report(rep, tmp_path / "out")
    import csv
    from pathlib import Path

    assert Path(paths["csv"]).exists()
    with open(paths["csv"]) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "name" and len(rows) == 3
    assert Path(paths["status_counts"]).stat().st_size > 0
    assert Path(paths["deciding_stages"]).stat().st_size > 0


def test_no_contradictory_certificates(clf):
    """No verdict carries both an SOS certificate and a negative point for
    the same pair."""
    from hppmat.negsearch import NegativePointCertificate

    for name in ("U36", "F7", "P7"):
        v = clf.classify(catalog.builtin(name).matroid)
        sos_pairs = {
            (c.i, c.j)
            for c in v.certificates
            if isinstance(c, SOSCertificate)
        }
        neg_pairs = {
            (c.i, c.j)
            for c in v.certificates
            if isinstance(c, NegativePointCertificate)
        }
        assert not (sos_pairs & neg_pairs)
