"""Complexes of projectives: homs, minimization, decomposition, mutation."""
import numpy as np
import pytest

from tiltlab.catalog import linear_an, nakayama_rad_square_zero
from tiltlab.homotopy import (
    ChainMap,
    ProjComplex,
    chain_identity,
    decompose_complex,
    hom_k,
    hom_package,
    iso_k,
    is_minimal,
    k0_vector,
    left_approximation,
    left_mutation,
    minimize,
    proj_cone,
    proj_direct_sum,
    proj_stalk,
    right_approximation,
    right_mutation,
)
from tiltlab.linalg import in_span
from tiltlab.repcat import (ext_dim, hom_dim, minimal_resolution, projective,
                            simple)
from tiltlab.repcomplex import (complex_cone, homology_at, homology_dims,
                                stalk_complex, truncate_above, truncate_below)


@pytest.fixture(scope="module")
def ka2():
    return linear_an(2)


@pytest.fixture(scope="module")
def ka3():
    return linear_an(3)


@pytest.fixture(scope="module")
def nak():
    return nakayama_rad_square_zero(3)


def simple_presentation(alg, v):
    """The minimal projective presentation of S(v) as a ProjComplex."""
    sums, diffs = minimal_resolution(simple(alg, v), depth=alg.dim + 1)
    lo = -(len(sums) - 1)
    return ProjComplex(alg, lo, [s.summands for s in reversed(sums)],
                       list(reversed(diffs)))


def resolution_complex(alg, m, depth=8):
    sums, diffs = minimal_resolution(m, depth=depth)
    lo = -(len(sums) - 1)
    return ProjComplex(alg, lo, [s.summands for s in reversed(sums)],
                       list(reversed(diffs)))


# -- representation-level complexes ----------------------------------------

def test_homology_of_simple_resolution(ka2):
    x = simple_presentation(ka2, 0)
    x.validate()
    e = x.expansion()
    e.validate()
    assert homology_dims(e) == {0: (1, 0)}


def test_cone_shifts_homology(ka2):
    # cone over the inclusion P(1) -> P(0) computes S(0)
    x = simple_presentation(ka2, 0)
    e = x.expansion()
    assert homology_at(e, 0).dims == (1, 0)
    shifted = e.shift(2)
    shifted.validate()
    assert homology_dims(shifted) == {-2: (1, 0)}


def test_truncations(nak):
    m = simple(nak, 0)
    x = resolution_complex(nak, m).expansion()
    # resolution of S(0) over the radical-square-zero algebra: length 2
    assert x.lo == -2
    assert homology_dims(x) == {0: (1, 0, 0)}
    above = truncate_above(x, -1)
    above.validate()
    assert homology_dims(above) == {}          # resolution exact below 0
    below = truncate_below(x, 0)
    below.validate()
    assert homology_dims(below) == {0: (1, 0, 0)}


def test_complex_cone_long_exact(ka2):
    # X -> Y with Y = cone yields homology concentrated correctly
    p0 = stalk_complex(projective(ka2, 0))
    p1 = stalk_complex(projective(ka2, 1))
    from tiltlab.repcat import hom_basis
    f = hom_basis(projective(ka2, 1), projective(ka2, 0))[0]
    from tiltlab.repcomplex import ComplexMap
    cm = ComplexMap(p1, p0, {0: f})
    cm.validate()
    cone = complex_cone(cm)
    cone.validate()
    assert homology_dims(cone) == {0: (1, 0)}


# -- hom spaces in K^b(proj) ------------------------------------------------

def test_hom_k_frozen_table(ka2):
    x = simple_presentation(ka2, 0)     # P(1) -> P(0)
    p0, p1 = proj_stalk(ka2, 0), proj_stalk(ka2, 1)
    assert hom_k(x, x, 0) == 1
    assert hom_k(x, x, 1) == 0
    assert hom_k(x, p1, 1) == 1         # Ext^1(S0, S1) = k
    assert hom_k(x, p0, 0) == 0
    assert hom_k(p0, x, 0) == 1
    assert hom_k(p1, x, 0) == 0
    assert hom_k(x, p1, 0) == 0


def test_hom_k_shift_invariance(ka2):
    x = simple_presentation(ka2, 0)
    p1 = proj_stalk(ka2, 1)
    for s in (-2, -1, 1, 3):
        for i in (0, 1, 2):
            assert hom_k(x.shift(s), p1.shift(s), i) == hom_k(x, p1, i)


def test_hom_k_matches_ext(nak, ka3):
    for alg in (nak, ka3):
        mods = [simple(alg, v) for v in range(alg.n)] + \
               [projective(alg, v) for v in range(alg.n)]
        for m in mods:
            rm = resolution_complex(alg, m)
            rm.validate()
            for n in mods:
                target = stalk_complex(n)
                for deg in range(4):
                    want = ext_dim(m, n, deg) if deg else hom_dim(m, n)
                    assert hom_k(rm, target, deg) == want


def test_hom_package_representatives_are_chain_maps(ka2):
    x = simple_presentation(ka2, 0)
    pkg = hom_package(proj_stalk(ka2, 0), x, 0)
    assert pkg.dim == 1
    for f in pkg.chain_reps():
        f.validate()
        assert not pkg.is_nullhomotopic(f)


def test_nullhomotopic_detection(ka2):
    # the composite P(1) -> X of the inclusion with a projection is
    # null-homotopic when it factors through the contractible part
    p0 = proj_stalk(ka2, 0)
    c = proj_cone(chain_identity(p0))   # contractible
    pkg = hom_package(p0, c, 0)
    assert pkg.dim == 0
    for k in range(pkg.chain_space.shape[1]):
        coords = pkg.chain_space[:, k]
        h = pkg.nullhomotopy(coords)
        assert h is not None


# -- minimization -----------------------------------------------------------

def test_minimize_contractible(ka2):
    c = proj_cone(chain_identity(proj_stalk(ka2, 0)))
    assert not is_minimal(c)
    assert minimize(c).is_zero()


def test_minimize_strips_contractible_summand(ka2):
    x = simple_presentation(ka2, 0)
    c = proj_cone(chain_identity(proj_stalk(ka2, 1)))
    s = proj_direct_sum([x, c.shift(1)])
    m = minimize(s)
    assert m.graded_mults() == x.graded_mults()
    assert iso_k(m, x).verdict == "yes"


def test_minimize_preserves_hom(ka3):
    x = simple_presentation(ka3, 1)
    c = proj_cone(chain_identity(proj_stalk(ka3, 0)))
    s = proj_direct_sum([x, c])
    for v in range(3):
        for i in range(3):
            assert hom_k(s, proj_stalk(ka3, v), i) == \
                hom_k(x, proj_stalk(ka3, v), i) + \
                hom_k(c, proj_stalk(ka3, v), i)
            assert hom_k(c, proj_stalk(ka3, v), i) == 0


# -- K_0 --------------------------------------------------------------------

def test_k0_vectors(ka2):
    x = simple_presentation(ka2, 0)
    assert list(k0_vector(x)) == [1, -1]
    assert list(k0_vector(x.shift(1))) == [-1, 1]
    assert list(k0_vector(proj_stalk(ka2, 1))) == [0, 1]


# -- decomposition and isomorphism ------------------------------------------

def test_decompose_complex_two_parts(ka2):
    x = simple_presentation(ka2, 0)
    s = proj_direct_sum([x, proj_stalk(ka2, 1), proj_stalk(ka2, 1)])
    dec = decompose_complex(s)
    assert sorted(m for _, m in dec) == [1, 2]
    total = sum(c.total_count * m for c, m in dec)
    assert total == s.total_count


def test_iso_k_scaling_and_refutation(ka2):
    alpha = ka2.path_indices(0, 1)[0]
    d = np.zeros((1, 1, ka2.dim), dtype=np.int64)
    d[0, 0, alpha] = 1
    x = ProjComplex(ka2, -1, [[1], [0]], [d])
    d2 = (5 * d) % ka2.p
    y = ProjComplex(ka2, -1, [[1], [0]], [d2])
    res = iso_k(x, y, want_witness=True)
    assert res.verdict == "yes"
    assert res.fwd is not None and res.bwd is not None
    res.fwd.validate()
    res.bwd.validate()
    assert iso_k(x, proj_stalk(ka2, 0)).verdict == "no"
    assert iso_k(x, x.shift(1)).verdict == "no"


def test_iso_k_distinguishes_sum_from_twist(ka3):
    # P(0) + S(0)-presentation vs P(1) + (P(2) -> P(0)): same graded
    # multiplicities would be needed for a subtle refutation; here the
    # decomposition multisets differ
    x = proj_direct_sum([proj_stalk(ka3, 0), simple_presentation(ka3, 0)])
    y = proj_direct_sum([proj_stalk(ka3, 1), simple_presentation(ka3, 1)])
    assert iso_k(x, y).verdict == "no"


# -- approximations ---------------------------------------------------------

def _factors_through(parts, z, minimal):
    alg = z.alg
    e, g, chosen = right_approximation(parts, z, minimal=minimal)
    for t in parts:
        pkg = hom_package(t, z, 0)
        through = hom_package(t, e, 0)
        cols = [pkg.class_coords(g.compose(h)) for h in through.chain_reps()]
        span = (np.column_stack(cols) if cols
                else np.zeros((max(pkg.f_layout.total, 1), 0), dtype=np.int64))
        for f in pkg.chain_reps():
            if not in_span(pkg.class_coords(f), span, alg.p):
                return False
    return True


def test_right_approximation_factoring(ka3):
    z = simple_presentation(ka3, 0)
    stalks = [proj_stalk(ka3, v) for v in range(3)]
    assert _factors_through(stalks, z, True)
    assert _factors_through(stalks, z, False)
    assert _factors_through([stalks[0]], z, True)


def test_left_approximation_factoring(ka3):
    z = proj_stalk(ka3, 2)
    parts = [proj_stalk(ka3, 0), simple_presentation(ka3, 1)]
    alg = z.alg
    e, g, chosen = left_approximation(parts, z, minimal=True)
    for t in parts:
        pkg = hom_package(z, t, 0)
        through = hom_package(e, t, 0)
        cols = [pkg.class_coords(h.compose(g)) for h in through.chain_reps()]
        span = (np.column_stack(cols) if cols
                else np.zeros((max(pkg.f_layout.total, 1), 0), dtype=np.int64))
        for f in pkg.chain_reps():
            assert in_span(pkg.class_coords(f), span, alg.p)


def test_minimal_approximation_is_smaller(ka2):
    # Hom(P0, X) is 1-dimensional; the universal approximation by
    # {P0, P0} would duplicate it, the minimal one does not
    x = simple_presentation(ka2, 0)
    stalks = [proj_stalk(ka2, 0), proj_stalk(ka2, 1)]
    e_min, _, chosen_min = right_approximation(stalks, x, minimal=True)
    e_all, _, chosen_all = right_approximation(stalks, x, minimal=False)
    assert len(chosen_min) == 1
    assert e_min.graded_mults() == {0: (1, 0)}
    assert len(chosen_all) >= len(chosen_min)


# -- mutation ---------------------------------------------------------------

def test_left_mutation_ka2(ka2):
    p0, p1 = proj_stalk(ka2, 0), proj_stalk(ka2, 1)
    out = left_mutation([p0, p1], 1, d=1)
    keys = sorted(c.shape_key() for c in out)
    assert keys == sorted([p0.shape_key(),
                           simple_presentation(ka2, 0).shape_key()])
    out0 = left_mutation([p0, p1], 0, d=1)
    keys0 = sorted(c.shape_key() for c in out0)
    assert keys0 == sorted([p1.shape_key(), p0.shift(1).shape_key()])


def test_mutation_round_trip(ka2):
    p0, p1 = proj_stalk(ka2, 0), proj_stalk(ka2, 1)
    step = left_mutation([p0, p1], 1, d=1)
    back = right_mutation(step, 1, d=1)
    assert sorted(c.shape_key() for c in back) == \
        sorted(c.shape_key() for c in [p0, p1])


def test_mutation_out_of_window(ka2):
    from tiltlab.errors import WindowViolation
    p0 = proj_stalk(ka2, 0)
    shifted = p0.shift(1)
    # mutating the already-shifted stalk pushes it past the window
    with pytest.raises(WindowViolation):
        left_mutation([shifted, proj_stalk(ka2, 1).shift(1)], 0, d=1)
