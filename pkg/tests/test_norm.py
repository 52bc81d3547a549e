from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doped_rvb.lattice import (HoleConfig, LatticeError, build_lattice,
                               enumerate_hole_configs, is_coverable, make_holes)
from doped_rvb.matching import enumerate_coverings
from doped_rvb.norm import (TransitionGraph, adjacency_matrix, antiferro_index,
                            covering_state, format_matrix, kohmoto_sum, loop_decompose,
                            norm_value, overlap, rvb_state, statevector_oracle, superpose)

from oracles import kron_covering_state

ORACLE_SHAPES = [(r, c) for r in range(1, 5) for c in range(r, 17)
                 if r * c % 2 == 0 and r * c <= 16]


def graph_from_edges(m, edges):
    mat = np.zeros((m, m), dtype=np.int8)
    for u, v in edges:
        mat[u, v] += 1
        mat[v, u] += 1
    return TransitionGraph(tuple(range(m)), mat)


def test_self_superposition():
    lat = build_lattice(3, 4)
    for cv in enumerate_coverings(lat, HoleConfig()):
        dec = loop_decompose(superpose(cv, cv))
        assert (dec.dl, dec.ndl, dec.lengths) == (lat.half, 0, ())


def test_square_plaquette():
    h, v = enumerate_coverings(build_lattice(2, 2), HoleConfig())
    dec = loop_decompose(superpose(h, v))
    assert (dec.dl, dec.ndl, dec.lengths) == (0, 1, (4,))


def test_two_covering_pair():
    lat = build_lattice(4, 4)
    holes = make_holes(lat, [0, 3])
    c1, c2 = enumerate_coverings(lat, holes)[:2]
    tg = superpose(c1, c2)
    assert tg.matrix.shape == (14, 14)
    dec = loop_decompose(tg)
    assert 2 * dec.dl + sum(dec.lengths) == 14
    assert dec.dl == np.count_nonzero(tg.matrix == 2) // 2
    assert (dec.dl, dec.ndl, dec.lengths) == (5, 1, (4,))


def test_loop_decompose_synthetic():
    doubled = graph_from_edges(8, [(0, 1), (0, 1), (2, 3), (2, 3), (4, 5), (4, 5), (6, 7), (6, 7)])
    assert loop_decompose(doubled) == loop_decompose(doubled)
    dec = loop_decompose(doubled)
    assert (dec.dl, dec.ndl) == (4, 0)
    ring = graph_from_edges(8, [(k, (k + 1) % 8) for k in range(8)])
    dec = loop_decompose(ring)
    assert (dec.dl, dec.ndl, dec.lengths) == (0, 1, (8,))
    mixed = graph_from_edges(8, [(0, 1), (0, 1), (2, 3), (2, 3),
                                 (4, 5), (5, 6), (6, 7), (7, 4)])
    dec = loop_decompose(mixed)
    assert (dec.dl, dec.ndl, dec.lengths) == (2, 1, (4,))


def test_loop_decompose_degree_violation():
    with pytest.raises(ValueError):
        loop_decompose(graph_from_edges(4, [(0, 1), (1, 2), (2, 3)]))


def test_superpose_mismatched():
    lat = build_lattice(2, 3)
    a = enumerate_coverings(lat, HoleConfig())[0]
    b = enumerate_coverings(lat, make_holes(lat, [0, 1]))[0]
    with pytest.raises(ValueError):
        superpose(a, b)
    with pytest.raises(ValueError):
        overlap(a, b)


def test_covering_state_matches_kron():
    lat = build_lattice(3, 4)
    holes = make_holes(lat, [0, 1])
    for cv in enumerate_coverings(lat, holes):
        np.testing.assert_allclose(covering_state(cv, cv.sites),
                                   kron_covering_state(cv.dimers, cv.sites), atol=1e-15)


def test_overlap_examples():
    h, v = enumerate_coverings(build_lattice(2, 2), HoleConfig())
    assert overlap(h, h) == 1
    assert overlap(h, v) == Fraction(1, 2)
    inner = covering_state(h, h.sites) @ covering_state(v, v.sites)
    assert inner == pytest.approx(0.5, abs=1e-15)


def test_overlap_six_cycle():
    # 2x3 ladder plus a shared dimer: horizontal-horizontal vs ring covering
    lat = build_lattice(2, 4)
    covs = enumerate_coverings(lat, HoleConfig())
    six = [(c1, c2) for c1 in covs for c2 in covs
           if loop_decompose(superpose(c1, c2)).lengths == (6,)]
    assert six
    for c1, c2 in six:
        dec = loop_decompose(superpose(c1, c2))
        assert dec.dl == 1
        assert overlap(c1, c2) == Fraction(2 ** (dec.dl + 1), 2 ** lat.half)
        inner = covering_state(c1, c1.sites) @ covering_state(c2, c2.sites)
        assert inner == pytest.approx(float(overlap(c1, c2)), abs=1e-15)


@pytest.mark.property
@pytest.mark.parametrize("shape, k", [(s, k) for s in ORACLE_SHAPES for k in (0, 2)
                                      if s[0] * s[1] <= 12 or k == 0])
def test_overlap_positive_symmetric_exact(shape, k):
    lat = build_lattice(*shape)
    for holes in enumerate_hole_configs(lat, k):
        covs = enumerate_coverings(lat, holes)
        if not covs or len(holes.sites) == lat.num_sites:
            continue
        states = np.array([covering_state(c, c.sites) for c in covs])
        gram = states @ states.T
        for i, c1 in enumerate(covs):
            for j, c2 in enumerate(covs):
                ov = overlap(c1, c2)
                assert ov > 0
                assert ov == overlap(c2, c1)
                assert abs(gram[i, j] - float(ov)) < 1e-12


def test_norm_value_examples():
    lat = build_lattice(2, 2)
    nv = norm_value(enumerate_coverings(lat, HoleConfig()))
    assert (nv.kohmoto_sum, nv.paper_variant) == (12, 16)
    assert nv.normalized == 3
    single = norm_value(enumerate_coverings(build_lattice(1, 6), HoleConfig()))
    assert single.kohmoto_sum == 2 ** 3 and single.normalized == 1
    with pytest.raises(ValueError):
        norm_value([])


def test_norm_ladder_matches_oracle():
    lat = build_lattice(2, 3)
    nv = norm_value(enumerate_coverings(lat, HoleConfig()))
    orc = statevector_oracle(lat, HoleConfig())
    assert float(nv.normalized) == pytest.approx(orc.norm ** 2, rel=1e-12)
    assert nv.kohmoto_sum >= 3 * 2 ** 3


def test_oracle_examples():
    orc = statevector_oracle(build_lattice(2, 2), HoleConfig())
    assert orc.norm == pytest.approx(np.sqrt(3), rel=1e-14)
    assert orc.af_amplitude == pytest.approx(1.0, rel=1e-14)
    orc = statevector_oracle(build_lattice(1, 2), HoleConfig())
    assert orc.norm == pytest.approx(1.0)
    assert orc.af_amplitude == pytest.approx(2 ** -0.5)
    assert orc.to_dict()["num_coverings"] == 1


def test_oracle_guards():
    with pytest.raises(LatticeError):
        statevector_oracle(build_lattice(3, 6), HoleConfig())
    lat = build_lattice(4, 4)
    with pytest.raises(LatticeError):
        statevector_oracle(lat, make_holes(lat, [1, 4, 9, 12, 2, 7, 10, 15]))


def test_antiferro_index_convention():
    lat = build_lattice(2, 2)
    psi, sites, _ = rvb_state(lat, HoleConfig())
    idx = antiferro_index(lat, sites)
    # B-sites 1 and 2 carry spin 1
    assert idx == 0b0110
    assert psi[idx] > 0


@pytest.mark.property
@pytest.mark.parametrize("shape", ORACLE_SHAPES)
def test_oracle_equivalence_exhaustive(shape):
    lat = build_lattice(*shape)
    for k in (0, 2, 4):
        if k >= lat.num_sites:
            break
        for holes in enumerate_hole_configs(lat, k):
            if not is_coverable(lat, holes):
                continue
            covs = enumerate_coverings(lat, holes)
            orc = statevector_oracle(lat, holes)
            ks = kohmoto_sum(covs)
            m = lat.half - holes.n
            assert ks / 2 ** m == pytest.approx(orc.norm ** 2, rel=1e-10)
            assert orc.basis_max_amplitude == pytest.approx(orc.af_amplitude, rel=1e-10)
            assert ks >= len(covs) * 2 ** m
            assert (ks == len(covs) * 2 ** m) == (len(covs) <= 1)


@pytest.mark.property
@pytest.mark.parametrize("shape", [(2, 4), (3, 4), (4, 4), (2, 7)])
def test_vectorized_matches_pairwise(shape):
    lat = build_lattice(*shape)
    for k in (0, 2):
        for holes in enumerate_hole_configs(lat, k):
            covs = enumerate_coverings(lat, holes)
            if covs:
                assert kohmoto_sum(covs) == norm_value(covs).kohmoto_sum


@pytest.mark.property
@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(4, 5), (3, 6), (4, 6), (2, 10)]), st.integers(0, 3),
       st.randoms(use_true_random=False))
def test_conservation_random(shape, n, rnd):
    lat = build_lattice(*shape)
    holes = HoleConfig(tuple(sorted(rnd.sample(lat.a_sites, n))),
                       tuple(sorted(rnd.sample(lat.b_sites, n))))
    covs = enumerate_coverings(lat, holes)
    if not covs:
        return
    pairs = [(rnd.choice(covs), rnd.choice(covs)) for _ in range(10)]
    for c1, c2 in pairs:
        d12 = loop_decompose(superpose(c1, c2))
        d21 = loop_decompose(superpose(c2, c1))
        assert d12 == d21
        assert 2 * d12.dl + sum(d12.lengths) == lat.num_sites - 2 * n
        assert all(x >= 4 and x % 2 == 0 for x in d12.lengths)


def test_adjacency_matrix_format():
    lat = build_lattice(2, 2)
    h, v = enumerate_coverings(lat, HoleConfig())
    mat = adjacency_matrix(h, h.sites)
    assert format_matrix(mat) == "0 1 0 0\n1 0 0 0\n0 0 0 1\n0 0 1 0"
    assert (mat.sum(axis=0) == 1).all() and (mat.sum(axis=1) == 1).all()
    assert format_matrix(superpose(h, v).matrix) == "0 1 1 0\n1 0 0 1\n1 0 0 1\n0 1 1 0"


def test_kohmoto_requires_coverings():
    with pytest.raises(ValueError):
        kohmoto_sum([])


def test_kohmoto_blocking(monkeypatch):
    import doped_rvb.norm as norm
    covs = enumerate_coverings(build_lattice(4, 4), HoleConfig())
    expected = norm_value(covs).kohmoto_sum
    monkeypatch.setattr(norm, "_PAIR_BLOCK", 100)
    assert norm.kohmoto_sum(covs) == expected
