"""Universe-relative checkers, theorem verifiers and closure trials."""
import pytest

from tiltlab.catalog import linear_an, nakayama_rad_square_zero
from tiltlab.errors import SpecError
from tiltlab.heart import generator_models, module_stalk
from tiltlab.repcat import projective, simple
from tiltlab.repcomplex import homology_dims
from tiltlab.tiltcheck import (
    HeartStore,
    build_universe,
    check_air_tilting,
    check_equivalence,
    check_quasi_tilting,
    check_tilting,
    qtilt_closure_trials,
    schanuel_trials,
    verify_bijection,
    verify_torsion_reports,
)


@pytest.fixture(scope="module")
def ka2():
    return linear_an(2)


@pytest.fixture(scope="module")
def nak():
    return nakayama_rad_square_zero(3)


@pytest.fixture(scope="module")
def uni_ka2(ka2):
    return build_universe(ka2, 1, seed=0)


@pytest.fixture(scope="module")
def uni_nak(nak):
    return build_universe(nak, 1, seed=0)


def add_a(alg):
    return [projective(alg, v) for v in range(alg.n)]


# -- the universe ------------------------------------------------------------

def test_universe_ka2_d1_is_the_module_category(uni_ka2):
    assert len(uni_ka2) == 3
    assert all(m.tag == "module" for m in uni_ka2)


def test_universe_closed_under_summands(uni_nak, nak):
    from tiltlab.heart import decompose_window

    keys = {m.key for m in uni_nak}
    for mem in uni_nak:
        for s, _mult in decompose_window(mem.obj, 1, seed=0):
            from tiltlab.heart import _resolution_cached

            r, complete = _resolution_cached(s, 5)
            assert complete
            assert uni_nak.registry.intern(r) in keys


def test_universe_shifts_appear(ka2):
    uni = build_universe(ka2, 2, seed=0)
    assert len(uni) == 7
    assert sorted({m.tag for m in uni}) == ["complex", "module",
                                            "module-shift"]
    extended = [m for m in uni if m.tag == "complex"]
    assert any(len(homology_dims(m.obj)) == 2 for m in extended)


# -- AIR tilting -------------------------------------------------------------

def test_air_tilting_free_module(ka2, uni_ka2):
    from tiltlab.heart import p_presentation
    from tiltlab.homotopy import minimize

    gens = add_a(ka2)
    parts = [minimize(p_presentation(module_stalk(g), 1)) for g in gens]
    rep = check_air_tilting(gens, parts, uni_ka2)
    assert rep.verdict == "yes"
    assert not rep.mismatches
    # the free module generates everything in one step
    assert all(row["t_class"] and row["fac"] == "in" for row in rep.table)


def test_air_tilting_audits_the_presentation(ka2, uni_ka2):
    from tiltlab.heart import p_presentation
    from tiltlab.homotopy import minimize

    parts = [minimize(p_presentation(module_stalk(projective(ka2, v)), 1))
             for v in range(2)]
    with pytest.raises(SpecError):
        check_air_tilting([simple(ka2, 0)], parts, uni_ka2)


def test_air_tilting_rank_deficient(ka2, uni_ka2):
    from tiltlab.heart import p_presentation
    from tiltlab.homotopy import minimize

    g = simple(ka2, 1)
    rep = check_air_tilting([g], [minimize(p_presentation(module_stalk(g), 1))],
                            uni_ka2)
    assert rep.verdict == "no"
    assert rep.silting.refutation["kind"] == "k0"


# -- quasi-tilting -----------------------------------------------------------

def test_quasi_free_module_certified(ka2, uni_ka2):
    rep = check_quasi_tilting(add_a(ka2), uni_ka2, sample_budget=20, seed=1)
    assert rep.verdict == "certified_via_silting"
    assert rep.air is not None and rep.air.verdict == "yes"


def test_quasi_sink_simple_verified_on_sample(ka2, uni_ka2):
    # golden case: quasi-tilting, but its bare presentation is K0-deficient
    rep = check_quasi_tilting([simple(ka2, 1)], uni_ka2, sample_budget=40,
                              seed=1)
    assert rep.verdict == "verified_on_sample"
    assert rep.witness is None
    assert not rep.anomalies
    assert rep.chains_sampled > 0


def test_quasi_refuted_by_self_extension(ka2, uni_ka2):
    rep = check_quasi_tilting([simple(ka2, 0), simple(ka2, 1)], uni_ka2,
                              sample_budget=20, seed=1)
    assert rep.verdict == "refuted"
    assert rep.witness["axiom"] == "QT1"


def test_quasi_projective_nongenerator_is_anomalous(ka2, uni_ka2):
    # level d and d+1 factor classes differ, but only the approximation
    # chain sees it, so the disagreement stays an anomaly
    rep = check_quasi_tilting([projective(ka2, 0)], uni_ka2,
                              sample_budget=20, seed=1)
    assert rep.verdict == "verified_on_sample"
    assert rep.anomalies


# -- tilting -----------------------------------------------------------------

def test_tilting_free_module(ka2):
    rep = check_tilting(add_a(ka2), 1)
    assert rep.verdict == "tilting"
    assert rep.reason == "certified by both routes"


def test_tilting_fails_on_extension_pair(ka2):
    rep = check_tilting([simple(ka2, 0), simple(ka2, 1)], 1)
    assert rep.verdict == "not_tilting"
    assert rep.reason.startswith("T2")


def test_tilting_fails_on_rank_deficiency(ka2):
    rep = check_tilting([simple(ka2, 1)], 1)
    assert rep.verdict == "not_tilting"
    assert rep.reason.startswith("T3")


def test_tilting_detects_global_dimension(nak):
    rep = check_tilting([simple(nak, 0)], 1)
    assert rep.verdict == "not_tilting"
    assert rep.reason.startswith("T1")
    assert not rep.route_a["pd_ok"][0]


# -- equivalence of the checkers ---------------------------------------------

def test_equivalence_on_controls(ka2, uni_ka2):
    expected = {
        "add A": (True, {True}),
        "negative pair": (True, {False}),
        "rank deficient": (True, {False}),
    }
    cases = {
        "add A": add_a(ka2),
        "negative pair": [simple(ka2, 0), simple(ka2, 1)],
        "rank deficient": [simple(ka2, 1)],
    }
    for label, gens in cases.items():
        rep = check_equivalence(gens, uni_ka2, seed=0, sample_budget=20)
        want_consistent, want_values = expected[label]
        assert rep.consistent is want_consistent, label
        decided = {v for v in rep.legs.values() if v is not None}
        assert decided == want_values, (label, rep.legs)


def test_equivalence_projective_nongenerator(ka2, uni_ka2):
    rep = check_equivalence([projective(ka2, 0)], uni_ka2, seed=0,
                            sample_budget=20)
    assert rep.consistent
    assert rep.legs["tilting"] is False
    assert rep.legs["quasi_plus_injectives"] is None


# -- bijection and torsion reports -------------------------------------------

def test_bijection_ka2_d1(ka2, uni_ka2):
    rep = verify_bijection(ka2, 1, uni_ka2, seed=0)
    assert rep.count == 5
    assert rep.ok
    assert sorted(len(e.image) for e in rep.entries) == [0, 1, 1, 2, 2]
    assert sorted(len(e.supports) for e in rep.entries) == [0, 0, 1, 1, 2]
    assert all(e.rederived for e in rep.entries)


def test_bijection_nak_d1(nak, uni_nak):
    rep = verify_bijection(nak, 1, uni_nak, seed=0)
    assert rep.count == 12
    assert rep.ok


def test_torsion_reports_ka2_d1(ka2, uni_ka2):
    rep = verify_bijection(ka2, 1, uni_ka2, seed=0)
    store = HeartStore(1, 0)
    tilting_flags = []
    for rec in rep.enumeration.clusters:
        tr = verify_torsion_reports(rec.parts, uni_ka2,
                                    silting_result=rec.result, store=store)
        assert tr.ok, rec.ids
        tilting_flags.append(tr.tilting_case)
        if tr.tilting_case:
            assert all(e["fac"] == "in" for e in tr.injective_verdicts)
    assert sum(tilting_flags) == 2


def test_torsion_nak_witnesses(nak, uni_nak):
    rep = verify_bijection(nak, 1, uni_nak, seed=0)
    store = HeartStore(1, 0)
    witnesses = 0
    for rec in rep.enumeration.clusters:
        tr = verify_torsion_reports(rec.parts, uni_nak,
                                    silting_result=rec.result, store=store)
        assert tr.ok, rec.ids
        if not tr.tilting_case and any(e["fac"] != "in"
                                       for e in tr.injective_verdicts):
            witnesses += 1
    assert witnesses == 10


def test_torsion_requires_silting(ka2, uni_ka2):
    from tiltlab.homotopy import proj_stalk

    with pytest.raises(SpecError):
        verify_torsion_reports([proj_stalk(ka2, 1)], uni_ka2)


# -- randomized closure trials -----------------------------------------------

def test_closure_trials_free_module(ka2, uni_ka2):
    rep = qtilt_closure_trials(add_a(ka2), uni_ka2, n_trials=40, seed=5)
    assert rep.ok
    assert rep.kinds["extension"]["performed"] == 40
    assert rep.kinds["cocone"]["performed"] == 40
    assert rep.kinds["summand"]["performed"] == 40


def test_closure_trials_sink_simple(ka2, uni_ka2):
    rep = qtilt_closure_trials([simple(ka2, 1)], uni_ka2, n_trials=40, seed=5)
    assert rep.ok


def test_schanuel_exchange(ka2, uni_ka2):
    models = generator_models([module_stalk(g) for g in add_a(ka2)], 1)
    pool = [m.model for m in uni_ka2]
    rep = schanuel_trials(models, pool, n_trials=25, seed=3)
    assert rep.ok
    assert rep.kinds["schanuel"]["performed"] == 25
