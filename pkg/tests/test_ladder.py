import hashlib
import json

import pytest

from app.config import settings
from app.engines.causal_engine import CausalEngine, CSTKScenario
from app.engines.geodesic_engine import GeodesicEngine
from app.engines.reachability_engine import ReachabilityEngine
from app.engines.ladder_classifier import (
    LADDER,
    LadderClassifier,
    Level,
    LevelVerdict,
    Outcome,
    ProbeResult,
    Status,
    Witness,
    scenario_fingerprint,
)
from app.scenario.builtins import builtin_names, get_builtin
from app.scenario.scenario_config import build_scenario


@pytest.fixture
def ladder(causal):
    return LadderClassifier(causal=causal, geodesics=GeodesicEngine(max_workers=1), max_workers=1)


@pytest.fixture
def few_probes(monkeypatch):
    monkeypatch.setattr(settings, "reflexivity_probes", 4)
    monkeypatch.setattr(settings, "wconvex_probes", 2)
    monkeypatch.setattr(settings, "hyperbolicity_probes", 3)
    monkeypatch.setattr(settings, "completeness_probes", 4)


@pytest.fixture
def punctured_scenario(punctured):
    return CSTKScenario(base=punctured, horizon=2.5, name="punctured")


WITNESS = Witness(kind="ball_closure", points=[[0.0, 0.0]], radii=[1.0])


def verdict(status, witnesses=()):
    return LevelVerdict(status=status, witnesses=list(witnesses))


class TestFold:
    def test_ok_probes_hold(self, ladder, zero_scenario):
        results = [ProbeResult(outcome=Outcome.OK), ProbeResult(outcome=Outcome.BAND)]
        folded = ladder._fold(results, zero_scenario, "empty")
        assert folded.status == Status.HOLDS
        assert folded.tally == {"ok": 1, "band": 1}

    def test_witness_fails(self, ladder, zero_scenario):
        results = [ProbeResult(outcome=Outcome.OK), ProbeResult(outcome=Outcome.FAIL, witness=WITNESS)]
        folded = ladder._fold(results, zero_scenario, "empty")
        assert folded.status == Status.FAILS
        assert folded.witnesses == [WITNESS]

    def test_truncation_with_and_without_extension(self, ladder, zero_scenario, punctured_scenario):
        results = [ProbeResult(outcome=Outcome.TRUNCATED)]
        assert ladder._fold(results, zero_scenario, "empty").status == Status.HOLDS
        truncated = ladder._fold(results, punctured_scenario, "empty")
        assert truncated.status == Status.INCONCLUSIVE
        assert any("truncation" in note for note in truncated.notes)

    def test_nothing_to_go_on(self, ladder, zero_scenario):
        folded = ladder._fold([ProbeResult(outcome=Outcome.SKIPPED)], zero_scenario, "nothing ran")
        assert folded.status == Status.INCONCLUSIVE
        assert folded.notes == ["nothing ran"]


class TestAssemble:
    def test_failure_propagates_upward(self, ladder, zero_scenario):
        report = ladder.assemble_report(
            zero_scenario,
            {
                Level.CAUSALLY_CONTINUOUS: verdict(Status.HOLDS),
                Level.CAUSALLY_SIMPLE: verdict(Status.FAILS, [WITNESS]),
                Level.GLOBALLY_HYPERBOLIC: verdict(Status.HOLDS),
                Level.CAUCHY_SLICES: verdict(Status.INCONCLUSIVE),
            },
            seed=1,
        )
        assert [report.status_of(level) for level in LADDER] == [
            Status.HOLDS,
            Status.FAILS,
            Status.INCONCLUSIVE,
            Status.FAILS,
        ]
        assert report.verdicts["cauchy_slices"].witnesses == [WITNESS]
        assert report.flags == ["analytic_extension", "no_counterexample_at_resolution"]

    def test_holding_level_lifts_lower_levels(self, ladder, zero_scenario):
        report = ladder.assemble_report(
            zero_scenario,
            {
                Level.CAUSALLY_CONTINUOUS: verdict(Status.INCONCLUSIVE),
                Level.CAUSALLY_SIMPLE: verdict(Status.HOLDS),
                Level.GLOBALLY_HYPERBOLIC: verdict(Status.INCONCLUSIVE),
                Level.CAUCHY_SLICES: verdict(Status.INCONCLUSIVE),
            },
            seed=1,
        )
        continuous = report.verdicts["causally_continuous"]
        assert continuous.status == Status.HOLDS
        assert "implied by causally_simple" in continuous.notes
        assert report.status_of(Level.GLOBALLY_HYPERBOLIC) == Status.INCONCLUSIVE

    def test_report_json_is_sorted(self, ladder, zero_scenario):
        report = ladder.assemble_report(zero_scenario, {level: verdict(Status.HOLDS) for level in LADDER}, seed=3)
        data = json.loads(report.to_json())
        assert list(data) == sorted(data)
        assert data["seed"] == 3


class TestFingerprint:
    def test_source_text_is_hashed(self, zero_wind):
        sc = CSTKScenario(base=zero_wind, source="format = 1\n")
        assert scenario_fingerprint(sc) == hashlib.sha256(b"format = 1\n").hexdigest()

    def test_structural_fingerprint(self, zero_wind):
        a = CSTKScenario(base=zero_wind, horizon=1.0)
        b = CSTKScenario(base=zero_wind, horizon=1.0)
        c = CSTKScenario(base=zero_wind, horizon=2.0)
        assert scenario_fingerprint(a) == scenario_fingerprint(b)
        assert scenario_fingerprint(a) != scenario_fingerprint(c)


class TestProbes:
    def test_anchors_are_deterministic(self, ladder, punctured_scenario):
        first = ladder.anchors(punctured_scenario, seed=4)
        second = ladder.anchors(punctured_scenario, seed=4)
        assert len(first) == 4
        assert all((a == b).all() for a, b in zip(first, second))
        assert all(punctured_scenario.base.domain.distance_to_exclusions(a) > 0 for a in first)

    def test_reflexivity_without_wind(self, ladder, zero_scenario):
        result = ladder.reflexivity_probe(zero_scenario, (0.0, 0.0), (0.5, 0.0), 1.0)
        assert result.outcome == Outcome.OK

    def test_ball_accumulating_at_puncture(self, ladder, punctured_scenario):
        result = ladder.closure_probe(punctured_scenario, (-1.0, 0.0), 1.5)
        assert result.outcome == Outcome.FAIL
        assert result.witness.kind == "ball_closure"
        assert ladder.reverify_witness(punctured_scenario, result.witness)

    def test_incomplete_geodesic(self, ladder, punctured_scenario):
        result = ladder.completeness_probe(punctured_scenario, (-1.0, 0.0), (1.0, 0.0))
        assert result.outcome == Outcome.FAIL
        assert ladder.reverify_witness(punctured_scenario, result.witness)

    def test_geodesic_leaving_box_is_truncation(self, ladder, zero_scenario):
        result = ladder.completeness_probe(zero_scenario, (0.0, 0.0), (1.0, 0.0))
        assert result.outcome == Outcome.TRUNCATED

    def test_unknown_witness(self, ladder, zero_scenario):
        with pytest.raises(ValueError):
            ladder.reverify_witness(zero_scenario, Witness(kind="mystery"))


@pytest.mark.usefixtures("few_probes")
class TestClassify:
    def test_zero_wind_climbs_the_ladder(self, ladder, zero_scenario):
        report = ladder.classify(zero_scenario, seed=2)
        assert all(report.status_of(level) == Status.HOLDS for level in LADDER)
        assert report.killing_character == "timelike"
        assert "analytic_extension" in report.flags

    def test_classification_is_deterministic(self, ladder, zero_scenario):
        assert ladder.classify(zero_scenario, seed=2).to_json() == ladder.classify(zero_scenario, seed=2).to_json()

    def test_punctured_plane_is_not_causally_simple(self, ladder, punctured_scenario):
        report = ladder.classify(punctured_scenario, seed=2)
        assert report.status_of(Level.CAUSALLY_CONTINUOUS) == Status.HOLDS
        assert report.status_of(Level.CAUSALLY_SIMPLE) == Status.FAILS
        assert report.status_of(Level.GLOBALLY_HYPERBOLIC) == Status.FAILS
        assert report.status_of(Level.CAUCHY_SLICES) == Status.FAILS
        witnesses = report.verdicts["causally_simple"].witnesses
        assert witnesses
        assert ladder.reverify_witness(punctured_scenario, witnesses[0])

    def test_fresh_classifiers_write_identical_reports(self, zero_scenario):
        def fresh():
            causal = CausalEngine(reachability=ReachabilityEngine())
            return LadderClassifier(causal=causal, geodesics=GeodesicEngine(max_workers=1), max_workers=1)

        first = fresh().classify(zero_scenario, seed=4).to_json().encode("utf-8")
        second = fresh().classify(zero_scenario, seed=4).to_json().encode("utf-8")
        assert hashlib.sha256(first).hexdigest() == hashlib.sha256(second).hexdigest()

    @pytest.mark.parametrize("name", builtin_names())
    def test_ladder_order_holds_for_builtins(self, ladder, name):
        scenario = build_scenario(get_builtin(name).with_overrides(resolution=(32, 32)))
        report = ladder.classify(scenario, seed=2)
        statuses = [report.status_of(level) for level in LADDER]
        for lower, status in enumerate(statuses):
            if status != Status.HOLDS:
                assert Status.HOLDS not in statuses[lower + 1 :], (name, statuses)
        if report.status_of(Level.CAUCHY_SLICES) == Status.HOLDS:
            assert report.status_of(Level.GLOBALLY_HYPERBOLIC) == Status.HOLDS
            assert report.status_of(Level.CAUSALLY_SIMPLE) == Status.HOLDS
