import pytest
from hypothesis import given, settings

from finitetopo import (
    InputError,
    Poset,
    ReductionCertificate,
    ReductionStep,
    ReplayError,
    SimplicialComplex,
    collapse_search,
    collapse_to_simplicial,
    core,
    find_beat_points,
    find_gamma_points,
    find_weak_points,
    free_pairs,
    homology,
    is_collapsible,
    is_dismantlable,
    order_complex,
    replay_poset_certificate,
    replay_simplicial_certificate,
    same_homology,
    simplicial_collapse_search,
    triviality_oracle,
    verify_dictionary,
)
from finitetopo import fixtures as fx
from tests.test_poset import diamond, posets


def chain(n: int) -> Poset:
    names = [f"c{i}" for i in range(n)]
    return Poset(names, list(zip(names, names[1:])))


def weak_not_beat() -> Poset:
    # x sits above a four-element fence: its punctured down-set is
    # dismantlable but has two maximal elements, so x is weak, not beat
    return Poset(
        "abcdx",
        [("a", "b"), ("c", "b"), ("c", "d"), ("a", "x"), ("b", "x"), ("c", "x"), ("d", "x")],
    )


class TestBeatPoints:
    def test_diamond_middles_are_beat(self):
        found = find_beat_points(diamond())
        assert ("b", "up-beat", "d") in found
        assert ("b", "down-beat", "a") in found
        assert not any(e in ("a", "d") for e, _, _ in found)

    def test_circle_model_has_none(self):
        assert find_beat_points(fx.six_cycle()) == []

    def test_witness_bounds_every_comparable_element(self):
        p = weak_not_beat()
        for e, kind, w in find_beat_points(p):
            punct = p.punctured_up(e) if kind == "up-beat" else p.punctured_down(e)
            assert w in punct
            bound = p.up_set(w) if kind == "up-beat" else p.down_set(w)
            assert set(punct) <= set(bound)


class TestCore:
    def test_chain_core_is_point(self):
        q, cert = core(chain(5))
        assert len(q) == 1
        assert len(cert) == 4

    def test_circle_model_is_its_own_core(self):
        p = fx.six_cycle()
        q, cert = core(p)
        assert q == p
        assert len(cert) == 0

    def test_core_certificate_replays_to_core(self):
        p = weak_not_beat()
        q, cert = core(p)
        assert replay_poset_certificate(p, cert) == q

    def test_core_has_no_beat_points(self):
        q, _ = core(fx.REGISTRY["collapsible-noncontractible"].build())
        assert find_beat_points(q) == []


class TestDismantlable:
    def test_chain_is_dismantlable(self):
        v = is_dismantlable(chain(4))
        assert v.is_trivial
        assert v.certificate is not None
        assert v.certificate.is_dismantling()

    def test_circle_model_reports_core(self):
        v = is_dismantlable(fx.six_cycle())
        assert v.is_unknown
        assert v.detail["core_size"] == 6

    def test_empty_is_nontrivial(self):
        assert is_dismantlable(Poset([])).is_nontrivial


class TestWeakPoints:
    def test_weak_but_not_beat(self):
        p = weak_not_beat()
        beats = {e for e, _, _ in find_beat_points(p)}
        weaks = dict(find_weak_points(p))
        assert "x" not in beats
        assert weaks.get("x") == "down-weak"

    def test_custom_contractibility_predicate(self):
        p = weak_not_beat()
        none_found = find_weak_points(p, contractible=lambda q: False)
        assert none_found == []


class TestGammaPoints:
    def test_gamma_subsumes_weak(self):
        p = weak_not_beat()
        gammas, unknowns = find_gamma_points(p)
        assert ("x", "gamma-down") in gammas
        assert unknowns == []

    def test_circle_model_has_no_gamma_points(self):
        gammas, unknowns = find_gamma_points(fx.six_cycle())
        assert gammas == [] and unknowns == []


class TestCollapseSearch:
    def test_collapse_onto_subposet(self):
        p = chain(4)
        cert, report = collapse_search(p, ["c0"])
        assert cert is not None
        assert replay_poset_certificate(p, cert).elements == ("c0",)

    def test_unknown_target_element(self):
        with pytest.raises(InputError, match="not in the poset"):
            collapse_search(chain(3), ["z"])

    def test_target_order_mismatch(self):
        p = diamond()
        wrong = Poset(["a", "d"])  # drops the comparability
        with pytest.raises(InputError, match="disagrees"):
            collapse_search(p, wrong)

    def test_budget_exhaustion_is_reported(self):
        p = fx.REGISTRY["collapsible-noncontractible"].build()
        cert, report = collapse_search(p, list(p.elements)[:1], budget=1)
        assert cert is None
        assert report["complete"] is False


class TestTrivialityOracle:
    def test_point(self):
        v = triviality_oracle(Poset(["x"]))
        assert v.is_trivial

    def test_disconnected(self):
        v = triviality_oracle(Poset("ab"))
        assert v.is_nontrivial
        assert v.reason == "disconnected"

    def test_homology_obstruction(self):
        v = triviality_oracle(fx.six_cycle())
        assert v.is_nontrivial
        assert v.reason == "homology"
        assert v.detail["degree"] == 1

    def test_empty(self):
        assert triviality_oracle(Poset([])).is_nontrivial


class TestCollapsibleNoncontractibleFixture:
    """A poset that collapses to a point but whose core is not a point."""

    def setup_method(self):
        self.p = fx.REGISTRY["collapsible-noncontractible"].build()

    def test_size_and_core(self):
        assert len(self.p) == 25
        q, cert = core(self.p)
        assert len(q) == 22
        assert len(cert) == 3

    def test_not_dismantlable(self):
        v = is_dismantlable(self.p)
        assert v.is_unknown
        assert v.detail["core_size"] == 22

    def test_collapsible_with_replaying_certificate(self):
        v = is_collapsible(self.p)
        assert v.is_trivial
        final = replay_poset_certificate(self.p, v.certificate)
        assert len(final) == 1

    def test_homologically_trivial(self):
        assert homology(self.p, reduced=True).is_zero()


class TestReplayRejection:
    def test_wrong_witness(self):
        p = chain(3)
        bad = ReductionCertificate((ReductionStep("up-beat", ("c0",), witness="c2"),))
        # c1 is the minimum of the punctured up-set, c2 is not
        with pytest.raises(ReplayError, match="witness"):
            replay_poset_certificate(p, bad)

    def test_removing_absent_element_twice(self):
        p = chain(3)
        step = ReductionStep("up-beat", ("c0",), witness="c1")
        with pytest.raises(ReplayError, match="not present"):
            replay_poset_certificate(p, ReductionCertificate((step, step)))

    def test_unknown_element(self):
        bad = ReductionCertificate((ReductionStep("up-beat", ("zz",), witness="c1"),))
        with pytest.raises(ReplayError, match="unknown element"):
            replay_poset_certificate(chain(3), bad)

    def test_weak_step_with_straying_evidence(self):
        p = weak_not_beat()
        evidence = ReductionCertificate((ReductionStep("up-beat", ("a",), witness="b"),))
        bad = ReductionCertificate((ReductionStep("down-weak", ("d",), evidence=evidence),))
        # a is not inside the punctured down-set of d
        with pytest.raises(ReplayError, match="strays"):
            replay_poset_certificate(p, bad)

    def test_weak_step_evidence_must_dismantle_fully(self):
        p = weak_not_beat()
        evidence = ReductionCertificate((ReductionStep("up-beat", ("a",), witness="b"),))
        bad = ReductionCertificate((ReductionStep("down-weak", ("x",), evidence=evidence),))
        with pytest.raises(ReplayError, match="single point"):
            replay_poset_certificate(p, bad)

    def test_simplicial_step_rejected_on_posets(self):
        bad = ReductionCertificate((ReductionStep("simplicial-collapse", ("c0", "c1")),))
        with pytest.raises(ReplayError, match="not a poset step"):
            replay_poset_certificate(chain(3), bad)

    def test_gamma_step_requires_collapse_evidence(self):
        p = weak_not_beat()
        v = is_dismantlable(p.induced(["a", "b", "c", "d"]))
        gamma = ReductionCertificate((ReductionStep("gamma-down", ("x",), evidence=v.certificate),))
        # dismantlings are collapses, so this replays
        final = replay_poset_certificate(p, gamma)
        assert set(final.elements) == {"a", "b", "c", "d"}


class TestSimplicialCollapse:
    def test_free_pairs_of_solid_triangle(self):
        k = SimplicialComplex([("a", "b", "c")])
        pairs = free_pairs(k.faces)
        assert (("a", "b"), ("a", "b", "c")) in pairs

    def test_triangle_boundary_has_no_free_pairs(self):
        k = SimplicialComplex([("a", "b"), ("b", "c"), ("a", "c")])
        assert free_pairs(k.faces) == []

    def test_solid_triangle_collapses_to_point(self):
        k = SimplicialComplex([("a", "b", "c")])
        cert, report = simplicial_collapse_search(k)
        assert cert is not None
        final = replay_simplicial_certificate(k, cert)
        assert len(final) == 1

    def test_collapse_to_subcomplex_target(self):
        k = SimplicialComplex([("a", "b", "c")])
        target = SimplicialComplex([("a", "b")])
        cert, _ = simplicial_collapse_search(k, target)
        assert cert is not None
        assert replay_simplicial_certificate(k, cert) == frozenset(target.faces)

    def test_non_subcomplex_target_rejected(self):
        k = SimplicialComplex([("a", "b")])
        with pytest.raises(InputError, match="subcomplex"):
            simplicial_collapse_search(k, SimplicialComplex([("a", "z")]))

    def test_tampered_simplicial_certificate(self):
        k = SimplicialComplex([("a", "b", "c")])
        cert, _ = simplicial_collapse_search(k)
        tampered = ReductionCertificate(cert.steps[1:])
        with pytest.raises(ReplayError):
            replay_simplicial_certificate(k, tampered)


class TestCollapseTranslation:
    def test_core_certificate_translates_to_order_complex(self):
        p = fx.REGISTRY["collapsible-noncontractible"].build()
        q, cert = core(p)
        simp = collapse_to_simplicial(p, cert)
        final = replay_simplicial_certificate(order_complex(p), simp)
        assert final == frozenset(order_complex(q).faces)

    def test_each_poset_step_becomes_a_collapse_run(self):
        p = chain(3)
        q, cert = core(p)
        simp = collapse_to_simplicial(p, cert)
        assert all(k == "simplicial-collapse" for k in simp.kinds())


class TestVerifyDictionary:
    def test_poset_subject(self):
        rep = verify_dictionary(fx.six_cycle())
        assert rep.status == "Certified"
        assert rep.checks["barycentric-homology"]
        assert rep.checks["opposite-order-complex"]
        assert rep.checks["core-collapse-translation"]

    def test_complex_subject(self):
        rep = verify_dictionary(fx.REGISTRY["torus"].build())
        assert rep.status == "Certified"
        assert rep.checks["face-poset-homology"]

    def test_rejects_other_inputs(self):
        with pytest.raises(InputError):
            verify_dictionary(42)


# -- randomized reduction laws ------------------------------------------------


@given(posets(max_size=7))
def test_beat_points_are_weak_points(p: Poset):
    weak = set(find_weak_points(p))
    for e, kind, _ in find_beat_points(p):
        assert (e, kind.replace("beat", "weak")) in weak


@given(posets(max_size=6))
@settings(max_examples=40)
def test_weak_points_are_gamma_points(p: Poset):
    gammas, unknowns = find_gamma_points(p)
    decided = set(gammas) | set(unknowns)
    rename = {"up-weak": "gamma-up", "down-weak": "gamma-down"}
    for e, kind in find_weak_points(p):
        assert (e, rename[kind]) in decided


@given(posets(max_size=7))
def test_core_preserves_homology_and_is_minimal(p: Poset):
    if len(p) == 0:
        return
    q, cert = core(p)
    assert find_beat_points(q) == []
    assert replay_poset_certificate(p, cert) == q
    assert same_homology(homology(p), homology(q))[0]


@given(posets(max_size=7))
@settings(max_examples=40)
def test_oracle_never_trivial_with_nonzero_homology(p: Poset):
    v = triviality_oracle(p, budget=2000)
    if v.is_trivial:
        assert homology(p, reduced=True).is_zero()
        final = replay_poset_certificate(p, v.certificate)
        assert len(final) == 1


@given(posets(max_size=6))
@settings(max_examples=40)
def test_weak_point_deletion_preserves_homology(p: Poset):
    for e, _ in find_weak_points(p):
        rest = p.induced([x for x in p.elements if x != e])
        assert same_homology(homology(p), homology(rest))[0]
        break  # one deletion per example keeps the sweep fast
