from __future__ import annotations

import pytest

from tw_chain import build_chain, partition_from_classes
from tw_chain.errors import PartitionClassError
from tw_exact import excursion_stats, expected_hitting_time, greens_function, hitting_distribution
from tw_generators import random_chain
from tw_montecarlo import (
    Interval,
    SimulationConfig,
    StopReason,
    TruncationWarning,
    Verdict,
    compare,
    estimate_excursion_events,
    estimate_green,
    estimate_hitting_distribution,
    estimate_hitting_time,
    sample_path,
    wilson,
    z_value,
)

N = 20_000
CALIBRATION_PATHS = 100_000
# wider than the 0.99 interval so fixed seeds are not borderline
Z = 4.0


def _loop():
    return build_chain(["a", "b", "c"], [[0, 1, 0], [1, 0, 0], [0, 0, 1]])


class TestSamplePath:
    def test_triad_alternates_until_c(self, tri):
        chain, _ = tri
        t = sample_path(chain, "a", ["c"], seed=3, cap=1000)
        assert t.stop_reason is StopReason.hit_target
        assert t.states[0] == "a" and t.states[-1] == "c"
        assert "c" not in t.states[:-1]
        for prev, nxt in zip(t.states[:-2], t.states[1:-1]):
            assert prev != nxt

    def test_deterministic(self, tri):
        chain, _ = tri
        runs = [sample_path(chain, "a", ["c"], seed=11, cap=1000) for _ in range(3)]
        assert runs[0] == runs[1] == runs[2]

    def test_start_in_stop_set(self, tri):
        chain, _ = tri
        t = sample_path(chain, "c", ["c"], seed=0, cap=10)
        assert t.states == ("c",)
        assert t.steps == 0

    def test_cap_truncates(self):
        t = sample_path(_loop(), "a", ["c"], seed=0, cap=5)
        assert t.stop_reason is StopReason.truncated
        assert t.steps == 5
        assert t.states == ("a", "b", "a", "b", "a", "b")

    def test_cap_must_be_positive(self, tri):
        with pytest.raises(ValueError):
            sample_path(tri[0], "a", ["c"], seed=0, cap=0)


class TestIntervals:
    def test_z_value(self):
        assert z_value(0.95) == pytest.approx(1.959964, abs=1e-6)
        assert z_value(0.99) == pytest.approx(2.575829, abs=1e-6)

    def test_wilson_edges(self):
        assert wilson(0, 0, 2.0) == (0.0, 1.0)
        lo, hi = wilson(0, 50, 2.0)
        assert lo == pytest.approx(0.0, abs=1e-12)
        assert 0.0 < hi < 0.1
        lo, hi = wilson(50, 50, 2.0)
        assert hi == pytest.approx(1.0, abs=1e-12)
        assert 0.9 < lo < 1.0

    def test_wilson_contains_proportion(self):
        lo, hi = wilson(30, 100, 1.96)
        assert lo < 0.3 < hi


class TestTriadEstimates:
    def test_green(self, tri):
        chain, part = tri
        est = estimate_green(chain, part.AB, "a", "a", n_paths=N, seed=1)
        assert est.interval is Interval.normal
        assert compare(4 / 3, est, z=Z) is Verdict.consistent
        assert compare(2.0, est, z=Z) is Verdict.inconsistent

    def test_hitting_time(self, tri):
        chain, part = tri
        est = estimate_hitting_time(chain, part.C, "a", n_paths=N, seed=2)
        assert compare(2.0, est, z=Z) is Verdict.consistent
        assert est.n_truncated == 0

    def test_hitting_distribution(self, tri):
        chain, part = tri
        est = estimate_hitting_distribution(chain, ["b", "c"], "a", n_paths=N, seed=4)
        assert list(est) == ["b", "c"]
        assert est["b"].interval is Interval.wilson
        assert compare(0.5, est["b"], z=Z) is Verdict.consistent
        assert compare(0.5, est["c"], z=Z) is Verdict.consistent

    def test_excursion_events(self, tri):
        chain, part = tri
        from_a = estimate_excursion_events(chain, part, "a", n_paths=N, seed=5)
        from_b = estimate_excursion_events(chain, part, "b", n_paths=N, seed=5)
        assert set(from_a) == {"psi", "rho"}
        assert set(from_b) == {"sigma", "phi"}
        assert compare(0.5, from_a["psi"], z=Z) is Verdict.consistent
        assert compare(0.25, from_a["rho"], z=Z) is Verdict.consistent
        assert compare(0.5, from_b["sigma"], z=Z) is Verdict.consistent
        assert compare(0.25, from_b["phi"], z=Z) is Verdict.consistent

    def test_events_need_a_or_b(self, tri):
        chain, part = tri
        with pytest.raises(PartitionClassError):
            estimate_excursion_events(chain, part, "c", n_paths=10)

    def test_seed_reproducible(self, tri):
        chain, part = tri
        runs = [estimate_hitting_time(chain, part.C, "a", n_paths=5000, seed=9) for _ in range(2)]
        assert runs[0] == runs[1]


class TestShortCircuits:
    def test_green_outside_domain(self, tri):
        chain, part = tri
        est = estimate_green(chain, part.A, "a", "b", n_paths=10)
        assert est.interval is Interval.exact
        assert est.mean == 0.0 and est.ci_half_width == 0.0
        assert compare(0.0, est) is Verdict.consistent

    def test_start_in_target(self, tri):
        chain, part = tri
        assert estimate_hitting_time(chain, part.C, "c", n_paths=10).mean == 0.0
        dist = estimate_hitting_distribution(chain, ["b", "c"], "b", n_paths=10)
        assert dist["b"].mean == 1.0 and dist["c"].mean == 0.0

    def test_empty_b(self):
        chain = build_chain(["a1", "a2", "c"], [[0.2, 0.5, 0.3], [0.5, 0, 0.5], [0, 0, 1]])
        part = partition_from_classes(chain, {"A": ["a1", "a2"], "C": ["c"]})
        est = estimate_excursion_events(chain, part, "a1", n_paths=10)
        assert est["psi"].interval is Interval.exact
        assert est["psi"].mean == est["rho"].mean == 0.0

    @pytest.mark.parametrize("kwargs", [{"n_paths": 0}, {"n_paths": 10, "cap": 0}])
    def test_settings_validated(self, tri, kwargs):
        chain, part = tri
        with pytest.raises(ValueError):
            estimate_hitting_time(chain, part.C, "a", **kwargs)


class TestTruncation:
    def test_warns_and_marks_unreliable(self, tri):
        chain, part = tri
        with pytest.warns(TruncationWarning):
            est = estimate_hitting_time(chain, part.C, "a", n_paths=2000, seed=0, cap=1)
        assert est.unreliable
        assert est.truncation_rate > 0.3
        assert compare(2.0, est) is Verdict.unreliable

    def test_truncated_paths_land_nowhere(self):
        chain = _loop()
        with pytest.warns(TruncationWarning):
            est = estimate_hitting_distribution(chain, ["c"], "a", n_paths=100, cap=50)
        assert est["c"].mean == 0.0
        assert est["c"].n_truncated == 100


class TestSubstreams:
    def test_workers_do_not_change_results(self, tri):
        chain, part = tri
        serial = SimulationConfig(block_size=1000, workers=1)
        threaded = SimulationConfig(block_size=1000, workers=2)
        a = estimate_green(chain, part.AB, "a", "b", n_paths=5000, seed=21, config=serial)
        b = estimate_green(chain, part.AB, "a", "b", n_paths=5000, seed=21, config=threaded)
        assert a == b

    def test_seeds_differ(self, tri):
        chain, part = tri
        a = estimate_hitting_time(chain, part.C, "a", n_paths=2000, seed=1)
        b = estimate_hitting_time(chain, part.C, "a", n_paths=2000, seed=2)
        assert a.mean != b.mean


def test_calibration_on_corpus(corpus):
    """Nominal 0.99 intervals cover the exact value in at least 95 of 100 cases."""
    config = SimulationConfig(confidence_level=0.99)
    covered = 0
    for k, (chain, part) in enumerate(corpus[:100]):
        a = part.A[0]
        if k % 2:
            exact = expected_hitting_time(chain, part.C)[a]
            est = estimate_hitting_time(chain, part.C, a, n_paths=CALIBRATION_PATHS, seed=k, config=config)
        else:
            exact = greens_function(chain, part.AB, a, a)
            est = estimate_green(chain, part.AB, a, a, n_paths=CALIBRATION_PATHS, seed=k, config=config)
        covered += est.ci_low <= exact <= est.ci_high
    assert covered >= 95


@pytest.mark.parametrize("seed", [3, 17, 40])
def test_excursion_events_on_random_chain(seed):
    chain, part = random_chain(10, seed=seed)
    if not part.B:
        pytest.skip("no B states drawn")
    stats = excursion_stats(chain, part)
    to_b_or_c = (*part.B, *part.C)
    for k, a in enumerate(part.A):
        ev = estimate_excursion_events(chain, part, a, n_paths=N, seed=seed * 100 + k)
        slack = ev["psi"].ci_half_width + ev["rho"].ci_half_width
        assert ev["psi"].mean >= ev["rho"].mean - slack
        # return to A is reaching B, then the σ event from where B was entered
        entry = hitting_distribution(chain, to_b_or_c, a).mass
        rho = sum(entry[b] * stats.sigma[b] for b in part.B)
        assert rho == pytest.approx(stats.rho[a], abs=1e-10)
        assert compare(rho, ev["rho"], z=Z) is Verdict.consistent
        assert compare(stats.psi[a], ev["psi"], z=Z) is Verdict.consistent
