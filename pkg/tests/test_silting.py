"""Silting certification and the two independent enumerators."""
import numpy as np
import pytest

from tiltlab.catalog import linear_an, nakayama_rad_square_zero
from tiltlab.errors import PoolConstructionUnsupported
from tiltlab.homotopy import hom_k, proj_stalk
from tiltlab.silting import (
    ComplexRegistry,
    enumerate_silting,
    euler_form,
    is_presilting,
    is_silting,
    k0_matrix,
    rigid_indecomposables,
    rigid_pool,
)


@pytest.fixture(scope="module")
def ka2():
    return linear_an(2)


@pytest.fixture(scope="module")
def ka3():
    return linear_an(3)


@pytest.fixture(scope="module")
def nak():
    return nakayama_rad_square_zero(3)


def projective_cluster(alg):
    return [proj_stalk(alg, v) for v in range(alg.n)]


# -- certification -----------------------------------------------------------

def test_free_module_is_silting(ka2, ka3, nak):
    for alg in (ka2, ka3, nak):
        res = is_silting(projective_cluster(alg), d=1)
        assert res.verdict == "yes"
        assert len(res.towers) == alg.n
        assert all(t.replay() for t in res.towers)
        assert all(len(t.stages) == 2 for t in res.towers)


def test_shifted_support_cluster_is_silting(ka2):
    # P(0)[1] + P(1) is silting; P(1)[1] + P(0) is not even presilting
    good = [proj_stalk(ka2, 0).shift(1), proj_stalk(ka2, 1)]
    assert is_silting(good, d=1).verdict == "yes"
    bad = [proj_stalk(ka2, 1).shift(1), proj_stalk(ka2, 0)]
    ok, witness = is_presilting(bad, d=1)
    assert not ok
    assert witness == (0, 1, 1, 1)
    res = is_silting(bad, d=1)
    assert res.verdict == "no"
    assert res.refutation["kind"] == "presilting"


def test_k0_refutations(ka2):
    p0, p1 = projective_cluster(ka2)
    dup = is_silting([p0, p0], d=1)
    assert dup.verdict == "no" and dup.refutation["kind"] == "k0"
    short = is_silting([p1], d=1)
    assert short.verdict == "no" and short.refutation["kind"] == "k0"


def test_window_refused(ka2):
    res = is_silting([proj_stalk(ka2, 0).shift(2),
                      proj_stalk(ka2, 1)], d=1)
    assert res.verdict == "no"
    assert "[-d, 0]" in res.reason


def test_k0_matrix_of_projectives(ka3):
    m = k0_matrix(projective_cluster(ka3))
    assert m == k0_matrix(projective_cluster(ka3))
    assert int(m.det()) in (1, -1)


def test_tower_certificate_replays_and_detects_tampering(ka2):
    res = is_silting(projective_cluster(ka2), d=1)
    tower = res.towers[0]
    assert tower.replay()
    if tower.phi_coords.size and tower.witness is not None \
            and tower.witness.size:
        tower.witness = (tower.witness + 1) % ka2.p
        assert not tower.replay()


# -- enumeration: frozen counts ---------------------------------------------

def test_enumerate_ka1_both_methods():
    for d in (1, 2, 3):
        res = enumerate_silting(linear_an(1), d, method="both")
        assert res.count == d + 1
        assert not res.unknown


def test_enumerate_ka2_both_methods(ka2):
    res = enumerate_silting(ka2, 1, method="both")
    assert res.count == 5
    assert not res.unknown


def test_enumerate_ka2_window_two(ka2):
    res = enumerate_silting(ka2, 2, method="both")
    assert res.count == 12


def test_enumerate_ka3_both_methods(ka3):
    mut = enumerate_silting(ka3, 1, method="mutation")
    cli = enumerate_silting(ka3, 1, method="clique")
    assert mut.count == cli.count == 14
    assert not mut.unknown and not cli.unknown


def test_enumerate_nakayama_mutation(nak):
    res = enumerate_silting(nak, 1, method="mutation")
    assert res.count == 12
    assert not res.unknown


def test_clique_needs_hereditary(nak):
    with pytest.raises(PoolConstructionUnsupported):
        enumerate_silting(nak, 1, method="clique")


def test_enumeration_deterministic(ka2):
    a = enumerate_silting(ka2, 1, method="mutation", seed=7)
    b = enumerate_silting(ka2, 1, method="mutation", seed=7)
    assert [r.ids for r in a.clusters] == [r.ids for r in b.clusters]
    assert a.visited == b.visited


# -- the rigid pool ----------------------------------------------------------

def test_euler_form_roots(ka2):
    assert euler_form(ka2, np.array([1, 0])) == 1
    assert euler_form(ka2, np.array([1, 1])) == 1
    assert euler_form(ka2, np.array([2, 1])) == 3


def test_rigid_indecomposables_ka3(ka3):
    mods = rigid_indecomposables(ka3)
    assert len(mods) == 6
    dims = sorted(tuple(m.dims) for m in mods)
    assert dims == [(0, 0, 1), (0, 1, 0), (0, 1, 1),
                    (1, 0, 0), (1, 1, 0), (1, 1, 1)]


def test_rigid_pool_sizes(ka2, ka3):
    assert len(rigid_pool(ka2, 1)) == 5
    assert len(rigid_pool(ka3, 1)) == 9
    # shifting the window adds one layer of presentations per extra degree
    assert len(rigid_pool(ka2, 2)) == 8


def test_pool_members_are_rigid(ka2):
    for x in rigid_pool(ka2, 1):
        assert hom_k(x, x, 1) == 0


# -- registry ----------------------------------------------------------------

def test_registry_interning(ka2):
    reg = ComplexRegistry()
    p0 = proj_stalk(ka2, 0)
    a = reg.intern(p0)
    assert reg.intern(proj_stalk(ka2, 0)) == a
    assert reg.intern(p0.shift(1)) != a
    assert reg.state([proj_stalk(ka2, 1), p0]) == (
        reg.intern(p0), reg.intern(proj_stalk(ka2, 1)))
