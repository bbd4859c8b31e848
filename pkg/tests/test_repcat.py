import numpy as np
import pytest

from tiltlab import repcat
from tiltlab.catalog import linear_an, nakayama_rad_square_zero
from tiltlab.repcat import (cokernel, decompose, direct_sum, ext_dim,
                            hom_basis, hom_dim, image, injective, kernel,
                            minimal_resolution, module_iso, projective,
                            projective_cover, simple, top, zero_map)

from oracles import oracle_ext1_hereditary, oracle_hom_dim


@pytest.fixture(scope="module")
def ka2():
    return linear_an(2)


@pytest.fixture(scope="module")
def ka3():
    return linear_an(3)


@pytest.fixture(scope="module")
def nak():
    return nakayama_rad_square_zero(3)


def test_projective_dims(ka2, nak):
    assert projective(ka2, 0).dims == (1, 1)
    assert projective(ka2, 1).dims == (0, 1)
    assert projective(nak, 0).dims == (1, 1, 0)
    assert projective(nak, 1).dims == (0, 1, 1)
    assert projective(nak, 2).dims == (0, 0, 1)
    for alg in (ka2, nak):
        for v in range(alg.n):
            projective(alg, v).validate()


def test_injective_dims(ka2, nak):
    assert injective(ka2, 0).dims == (1, 0)
    assert injective(ka2, 1).dims == (1, 1)
    # over the rad-square-zero algebra J(2) = P(1) and J(3) = P(2)
    assert injective(nak, 1).dims == (1, 1, 0)
    assert injective(nak, 2).dims == (0, 1, 1)
    for v in range(nak.n):
        injective(nak, v).validate()


def test_hom_frozen_values_ka2(ka2):
    p1, p2, s1 = projective(ka2, 0), projective(ka2, 1), simple(ka2, 0)
    expected = {
        ("p1", "p1"): 1, ("p1", "p2"): 0, ("p1", "s1"): 1,
        ("p2", "p1"): 1, ("p2", "p2"): 1, ("p2", "s1"): 0,
        ("s1", "p1"): 0, ("s1", "p2"): 0, ("s1", "s1"): 1,
    }
    mods = {"p1": p1, "p2": p2, "s1": s1}
    for (a, b), want in expected.items():
        assert hom_dim(mods[a], mods[b]) == want
        assert len(hom_basis(mods[a], mods[b])) == want
        assert oracle_hom_dim(mods[a], mods[b], ka2.p) == want


def test_hom_maps_are_module_maps(ka3):
    p1, p3 = projective(ka3, 0), projective(ka3, 2)
    for f in hom_basis(p3, p1):
        f.validate()


def test_kernel_cokernel_image(ka2):
    p1, s1 = projective(ka2, 0), simple(ka2, 0)
    # the canonical projection P(1) ->> S(1)
    fs = hom_basis(p1, s1)
    assert len(fs) == 1
    f = fs[0]
    ker, incl = kernel(f)
    assert ker.dims == (0, 1)  # radical of P(1) is S(2)
    incl.validate()
    img, _ = image(f)
    assert img.dims == (1, 0)
    cok, pi = cokernel(f)
    assert cok.is_zero()
    pi.validate()


def test_top_and_cover(ka2):
    p1 = projective(ka2, 0)
    t, _, _ = top(p1)
    assert t.dims == (1, 0)
    psum, cover = projective_cover(simple(ka2, 0))
    assert list(psum.mults) == [1, 0]
    cover.validate()
    ker, _ = kernel(cover)
    assert ker.dims == (0, 1)


def test_minimal_resolution_ka2(ka2):
    sums, diffs = minimal_resolution(simple(ka2, 0), 5)
    assert [list(s.mults) for s in sums] == [[1, 0], [0, 1]]
    assert len(diffs) == 1


def test_minimal_resolution_nakayama(nak):
    # 0 -> P(3) -> P(2) -> P(1) -> S(1) -> 0
    sums, _ = minimal_resolution(simple(nak, 0), 5)
    assert [list(s.mults) for s in sums] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_ext_frozen_values(ka2, nak):
    s1, s2 = simple(ka2, 0), simple(ka2, 1)
    assert ext_dim(s1, s2, 1) == 1
    assert ext_dim(s1, s1, 1) == 0
    assert ext_dim(s2, s1, 1) == 0
    assert ext_dim(s1, s2, 2) == 0
    assert ext_dim(s1, s2, 0) == hom_dim(s1, s2) == 0
    n1, n3 = simple(nak, 0), simple(nak, 2)
    assert ext_dim(n1, n3, 2) == 1
    assert ext_dim(n1, n3, 1) == 0


def test_ext_matches_euler_oracle(ka3):
    mods = [projective(ka3, v) for v in range(3)] + [simple(ka3, v) for v in range(3)]
    for m in mods:
        for n in mods:
            assert ext_dim(m, n, 1) == oracle_ext1_hereditary(m, n, ka3.p)


def test_decompose_direct_sum(ka2):
    p1, s1 = projective(ka2, 0), simple(ka2, 0)
    big = direct_sum([p1, s1, s1])
    parts = decompose(big, seed=3)
    assert sorted((r.dims, mult) for r, mult in parts) == [((1, 0), 2), ((1, 1), 1)]


def test_decompose_indecomposable(ka3):
    for v in range(3):
        assert repcat.is_indecomposable(projective(ka3, v))


def test_module_iso_and_non_iso(ka2):
    p1 = projective(ka2, 0)
    w = module_iso(p1, projective(ka2, 0))
    assert w is not None and w.is_iso()
    assert module_iso(simple(ka2, 0), simple(ka2, 1)) is None


def test_decompose_twisted_sum(ka2):
    # any rep with dims (2,2) and invertible arrow matrix is P(1)^2 in disguise
    twisted = repcat.Representation(ka2, (2, 2), [np.array([[1, 1], [6, 2]])])
    parts = decompose(twisted, seed=1)
    assert [(r.dims, mult) for r, mult in parts] == [((1, 1), 2)]


def test_zero_map_validates(ka2):
    zero_map(projective(ka2, 0), simple(ka2, 0)).validate()
