"""Matroid core: axioms, rank, duality, minors, constructions, isomorphism."""

import random
from itertools import combinations, permutations

import pytest

from hppmat import matroid
from hppmat.errors import (
    EmptyBases,
    ExchangeAxiomViolation,
    NotACircuitHyperplane,
    NotAFlat,
)
from hppmat.matroid import (
    Matroid,
    canonical_form,
    find_isomorphism,
    from_bases,
    from_matrix,
    has_minor,
    ingleton_check,
    ingleton_search,
    is_isomorphic,
    mask_of,
    relabel,
    set_of,
    uniform,
)

from conftest import random_matroid


def test_mask_roundtrip():
    assert set_of(mask_of({1, 3, 4})) == frozenset({1, 3, 4})
    assert mask_of(set()) == 0


def test_from_bases_validates_exchange():
    # {1,2} and {3,4} with nothing else violates exchange
    with pytest.raises(ExchangeAxiomViolation):
        from_bases(4, 2, [{1, 2}, {3, 4}])
    with pytest.raises(EmptyBases):
        from_bases(3, 2, [])


def test_uniform_counts():
    m = uniform(2, 4)
    assert len(m.bases) == 6
    assert m.rank({1}) == 1 and m.rank({1, 2, 3}) == 2


def test_rank_submodular_small():
    m = uniform(3, 6)
    for a in range(1 << 6):
        b = (a * 37) % (1 << 6)
        assert (
            m.rank_mask(a | b) + m.rank_mask(a & b)
            <= m.rank_mask(a) + m.rank_mask(b)
        )


def test_dual_involution_and_rank():
    m = from_bases(4, 2, [{1, 2}, {2, 3}, {1, 4}, {2, 4}, {3, 4}])
    d = m.dual()
    assert d.r == 2
    assert d.dual() == m
    # dual rank formula on a sample set
    s = mask_of({1, 3})
    assert d.rank_mask(s) == bin(s).count("1") + m.rank_mask(m.full_mask & ~s) - m.r


def test_deletion_contraction_are_dual():
    m = uniform(2, 5)
    left = m.delete({3}).dual()
    right = m.dual().contract({3})
    assert left == right


def test_minor_relabeling_compresses():
    m = uniform(2, 4)
    d = m.delete({2})
    assert d.n == 3 and d.r == 2
    c = m.contract({1})
    assert c.n == 3 and c.r == 1


def test_direct_sum():
    m = uniform(1, 2).direct_sum(uniform(1, 2))
    assert m.n == 4 and m.r == 2
    assert frozenset({mask_of({1, 3}), mask_of({1, 4}),
                      mask_of({2, 3}), mask_of({2, 4})}) == m.bases
    assert not m.is_connected()


def test_relax_circuit_hyperplane():
    # U24 minus one basis: {1,3} is a circuit hyperplane; relaxing gives U24
    m = from_bases(4, 2, [{1, 2}, {2, 3}, {1, 4}, {2, 4}, {3, 4}])
    r = m.relax({1, 3})
    assert r == uniform(2, 4)
    with pytest.raises(NotACircuitHyperplane):
        uniform(2, 4).relax({1, 2})


def test_free_extension_coextension():
    m = uniform(2, 4)
    assert m.free_extension() == uniform(2, 5)
    assert m.free_coextension() == uniform(3, 5)


def test_flats_and_closure():
    m = from_bases(4, 2, [{1, 2}, {2, 3}, {1, 4}, {2, 4}, {3, 4}])
    fl = [set(f) for f in m.flats()]
    assert {1, 3} in fl and {2} in fl and {4} in fl
    assert m.closure_mask(mask_of({1})) == mask_of({1, 3})


def test_loops_coloops_simple():
    cols = [[1, 0], [0, 0], [1, 0], [0, 1]]
    m = from_matrix(cols)
    assert m.loops() == frozenset({2})
    assert not m.is_simple()  # elements 1, 3 are parallel


def test_polytope_face_matroid_not_a_flat():
    m = uniform(2, 4)
    with pytest.raises(NotAFlat):
        m.polytope_face_matroid({1, 2})  # closure is everything


def test_from_matrix_gf2_fano():
    cols = [
        [1, 0, 0], [0, 1, 0], [0, 0, 1],
        [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1],
    ]
    f7 = from_matrix(cols, p=2)
    assert f7.n == 7 and f7.r == 3
    assert len(f7.bases) == 28  # 35 triples minus 7 lines


def test_relabel_and_isomorphism():
    m = from_bases(4, 2, [{1, 2}, {2, 3}, {1, 4}, {2, 4}, {3, 4}])
    perm = (3, 1, 4, 2)  # old label e -> perm[e-1]
    m2 = relabel(m, perm)
    assert is_isomorphic(m, m2)
    iso = find_isomorphism(m, m2)
    assert iso is not None
    assert relabel(m, iso) == m2
    assert not is_isomorphic(m, uniform(2, 4))


def test_canonical_form_is_invariant(rng):
    for _ in range(25):
        m = random_matroid(rng, max_n=6)
        perm = list(range(1, m.n + 1))
        rng.shuffle(perm)
        assert canonical_form(m) == canonical_form(relabel(m, tuple(perm)))


def test_has_minor_basic():
    u24 = uniform(2, 4)
    u25 = uniform(2, 5)
    w = has_minor(u25, u24)
    assert w is not None
    assert len(w.deleted) + len(w.contracted) == 1
    # rank-2 uniform on 5 has no U35 minor
    assert has_minor(u25, uniform(3, 5)) is None


def test_has_minor_witness_reconstructs(rng):
    for _ in range(10):
        m = random_matroid(rng, max_n=6)
        if m.n < 3:
            continue
        target = m.delete({m.n}) if m.n - m.r >= 1 else m.contract({m.n})
        w = has_minor(m, target)
        assert w is not None
        got = m.delete(set(w.deleted)).contract(
            _after_delete(w.contracted, w.deleted)
        )
        assert is_isomorphic(got, target)


def _after_delete(contracted, deleted):
    out = set()
    for e in contracted:
        out.add(e - sum(1 for d in deleted if d < e))
    return out


def test_exchange_axiom_on_construction_paths(rng):
    """Every construction path must emit a valid matroid."""
    for _ in range(40):
        m = random_matroid(rng, max_n=6)
        m.validate()
        m.dual().validate()
        if m.n >= 2:
            m.delete({1}).validate() if m.n - m.r >= 1 else None
            m.contract({m.n}).validate() if m.r >= 1 else None
        m.free_extension().validate()
        m.free_coextension().validate()
        m.direct_sum(uniform(1, 2)).validate()


def test_vamos_template_witness():
    from hppmat import catalog

    v8 = catalog.builtin("V8").matroid
    assert v8.vamos_like_witness() is not None
    assert uniform(4, 8).vamos_like_witness() is None


def test_ingleton_check_representable_holds():
    # representable matroids satisfy Ingleton for all quadruples
    m = from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]])
    for ps in combinations(({1}, {2}, {3}, {4}, {5}), 4):
        lhs, rhs, holds = ingleton_check(m, *ps)
        assert holds


def test_ingleton_search_none_on_uniform():
    assert ingleton_search(uniform(3, 6)) is None
