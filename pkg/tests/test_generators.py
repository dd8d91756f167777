from __future__ import annotations

import numpy as np
import pytest

from tw_bounds import full_report
from tw_chain import validate_absorption
from tw_chain.errors import ChainError, GeometryError, PartitionClassError, RetriesExhaustedError
from tw_exact import excursion_stats, expected_hitting_time
from tw_generators import (
    GridSpec,
    grid_annulus,
    path_chain,
    punctured_annulus,
    random_chain,
    ring_order,
    triad,
)

TOL = 1e-10
SPEC = GridSpec(width=11, height=11, laziness=0.5, inner_radius=2, outer_radius=4)


class TestTriad:
    def test_shape(self):
        chain, part = triad()
        assert chain.states == ("a", "b", "c")
        assert chain.row("a") == {"b": 0.5, "c": 0.5}
        assert validate_absorption(chain, part).ok

    def test_hitting_time(self):
        chain, part = triad()
        assert expected_hitting_time(chain, part.C)["a"] == pytest.approx(2.0, abs=TOL)


class TestPathChain:
    def test_reflected_start_moves_to_b(self):
        chain, part = path_chain(3, 0.5, A=[0], B=[1], C=[2])
        assert chain.row("0") == {"1": 1.0}
        assert excursion_stats(chain, part).psi["0"] == pytest.approx(1.0, abs=TOL)

    def test_c_blocks_the_path(self):
        chain, part = path_chain(5, 0.5, A=[0, 1], C=[2], B=[3, 4])
        stats = excursion_stats(chain, part)
        assert all(v == 0.0 for v in stats.psi.values())
        assert validate_absorption(chain, part).ok

    def test_c_states_absorb(self):
        chain, _ = path_chain(4, 0.3, A=[1], B=[0], C=[2, 3])
        assert chain.row("2") == {"2": 1.0}
        assert chain.row("1") == {"0": pytest.approx(0.7), "2": pytest.approx(0.3)}

    def test_absorbing_endpoints(self):
        chain, _ = path_chain(4, 0.5, A=[1], B=[2], C=[0, 3], boundary="absorb")
        assert chain.row("0") == {"0": 1.0}
        assert chain.row("3") == {"3": 1.0}

    @pytest.mark.parametrize("A, B, C", [
        ([0], [1], [1, 2]),
        ([0], [], [2]),
        ([0], [1], [5]),
    ])
    def test_indices_must_partition(self, A, B, C):
        with pytest.raises(PartitionClassError):
            path_chain(3, 0.5, A=A, B=B, C=C)


class TestGridAnnulus:
    def test_layout(self):
        chain, part = grid_annulus(SPEC)
        assert chain.n == 121
        assert len(part.A) == 9
        assert len(part.C) == 49 - 9
        assert "g5_5" in part.A and "g5_7" in part.C and "g0_0" in part.B

    def test_walk_rows(self):
        chain, part = grid_annulus(SPEC)
        corner = chain.row("g0_0")
        assert corner["g0_0"] == pytest.approx(0.5 + 0.25)
        assert corner["g0_1"] == pytest.approx(0.125)
        assert chain.row("g5_7") == {"g5_7": 1.0}

    def test_ring_separates(self):
        stats = excursion_stats(*grid_annulus(SPEC))
        assert all(v == 0.0 for v in stats.psi.values())
        assert all(v == 0.0 for v in stats.sigma.values())

    def test_every_bound_tight(self):
        rows = full_report(*grid_annulus(SPEC)).rows()
        assert rows
        assert all(not r.violated for r in rows)
        assert all(r.tight for r in rows)

    def test_spec_invariants(self):
        with pytest.raises(GeometryError):
            GridSpec(width=7, height=7, inner_radius=2, outer_radius=4)
        with pytest.raises(GeometryError):
            GridSpec(width=11, height=11, laziness=1.0)
        with pytest.raises(GeometryError):
            GridSpec(width=11, height=11, inner_radius=3, outer_radius=3)


class TestPuncturedAnnulus:
    def test_gap_opens_a_channel(self):
        chain, part = punctured_annulus(SPEC, gap=1)
        stats = excursion_stats(chain, part)
        assert "g5_7" in part.B
        assert stats.psi["g5_6"] > 0.0
        assert 0.0 < stats.psi_sup * stats.sigma_sup < 1.0

    def test_bounds_hold_with_finite_uppers(self):
        report = full_report(*punctured_annulus(SPEC, gap=1))
        assert report.violations == []
        assert all(not r.vacuous for r in report.rows())

    def test_wider_gap_raises_psi(self):
        sups = [excursion_stats(*punctured_annulus(SPEC, gap=g)).psi_sup for g in (1, 2, 3)]
        assert sups[0] <= sups[1] + TOL
        assert sups[1] <= sups[2] + TOL

    def test_ring_order_starts_with_channel(self):
        order = ring_order(SPEC)
        assert order[:2] == [(5, 7), (5, 8)]
        assert len(order) == len(set(order)) == 40

    @pytest.mark.parametrize("gap", [0, 40])
    def test_gap_range(self, gap):
        with pytest.raises(GeometryError):
            punctured_annulus(SPEC, gap=gap)


class TestRandomChain:
    def test_deterministic(self):
        c1, p1 = random_chain(12, seed=99, sparsity=0.4, class_fractions=(0.3, 0.3, 0.4))
        c2, p2 = random_chain(12, seed=99, sparsity=0.4, class_fractions=(0.3, 0.3, 0.4))
        np.testing.assert_array_equal(c1.dense, c2.dense)
        assert p1.labels == p2.labels

    def test_seeds_differ(self):
        c1, _ = random_chain(12, seed=1)
        c2, _ = random_chain(12, seed=2)
        assert not np.array_equal(c1.dense, c2.dense)

    def test_always_absorbing(self, corpus):
        for chain, part in corpus:
            assert validate_absorption(chain, part).ok
            for c in part.C:
                assert chain.row(c) == {c: 1.0}

    def test_retries_exhausted(self):
        with pytest.raises(RetriesExhaustedError):
            random_chain(5, seed=0, max_retries=0)

    def test_fractions_validated(self):
        with pytest.raises(ChainError):
            random_chain(5, seed=0, class_fractions=(0.0, 0.5, 0.5))
